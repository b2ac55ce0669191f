#pragma once

#include <cmath>

#include "hconv/lorentz.hpp"
#include "hconv/types.hpp"

// Metric structure of H^n: distance, geodesics, exponential and logarithm
// maps, and parallel transport along connecting geodesics.

namespace hconv {

// arcosh(x) = log(x + sqrt(x^2 - 1)), with the argument clamped to >= 1 so
// that inner products drifting slightly past -1 still map to distance 0.
inline double arcosh_clamped(double x) {
    return std::acosh(std::max(1.0, x));
}

inline double distance(const HPoint& p, const HPoint& q) {
    const double c = -lorentz_inner(p.coords(), q.coords());
    // Points of the same sheet always satisfy <p,q>_L <= -1; values far on
    // the wrong side mean the inputs were never on the manifold together.
    if (c < 1.0 - 1e-6)
        throw contract_error("distance: inputs are not a valid hyperboloid pair");
    // arcosh(c) evaluated directly loses half the digits near c = 1, so the
    // same value is computed through the difference vector: with
    // <p-q, p-q>_L = 2(c - 1) >= 0, arcosh(c) = 2 asinh(sqrt((c-1)/2)).
    const double chord2 = std::max(0.0, lorentz_inner(p.coords() - q.coords(),
                                                      p.coords() - q.coords()));
    return 2.0 * std::asinh(0.5 * std::sqrt(chord2));
}

// Unit-speed geodesic through p and q evaluated at arc length t, with
// gamma(0) = p and gamma(d(p,q)) = q. Values of t outside [0, d(p,q)]
// extend the same geodesic beyond the segment.
inline HPoint geodesic_point(const HPoint& p, const HPoint& q, double t) {
    const double c = lorentz_inner(p.coords(), q.coords());
    const double s2 = (c - 1.0) * (c + 1.0);
    if (s2 <= 0.0 || distance(p, q) < tol::coincident)
        throw degenerate_input_error("geodesic_point: endpoints coincide");
    const double s = std::sqrt(s2);
    Vec g = (std::cosh(t) + c * std::sinh(t) / s) * p.coords() +
            (std::sinh(t) / s) * q.coords();
    return HPoint(std::move(g), true);
}

// A geodesic segment with its arc length, kept consistent by construction.
struct GeodesicSegment {
    HPoint start;
    HPoint end;
    double length;

    GeodesicSegment(HPoint a, HPoint b)
        : start(std::move(a)), end(std::move(b)), length(distance(start, end)) {}

    HPoint at(double t) const { return geodesic_point(start, end, t); }
};

// exp_p(t v) = cosh(t |v|) p + sinh(t |v|) v / |v| for tangent v, where
// |v| = sqrt(<v,v>_L). The zero vector maps to p for every t; negative t
// walks the same geodesic backwards (cosh is even, sinh is odd).
inline HPoint exp_map(const TangentVec& v, double t = 1.0) {
    const double norm = v.norm();
    if (norm <= 1e-300) return v.base();
    const double r = t * norm;
    Vec g = std::cosh(r) * v.base().coords() + (std::sinh(r) / norm) * v.vec();
    return HPoint(std::move(g), true);
}

// log_map(p, q) is the initial velocity of the unit-speed geodesic from p to
// q scaled by the distance: exp_p(log_map(p, q)) = q. Near-coincident pairs
// use the limit factor 1, since arcosh(-c)/sqrt(c^2-1) -> 1 as q -> p.
inline TangentVec log_map(const HPoint& p, const HPoint& q) {
    const double c = lorentz_inner(p.coords(), q.coords());
    const double cm = std::max(1.0, -c);
    const double d = arcosh_clamped(cm);
    const double factor = d < tol::coincident ? 1.0 : d / std::sqrt((cm - 1.0) * (cm + 1.0));
    Vec v = factor * tangent_projection(p, q.coords());
    // Re-project to clean up drift so the TangentVec invariant holds exactly.
    v = tangent_projection(p, v);
    return TangentVec(p, std::move(v));
}

// Parallel transport of v in T_p along the geodesic from p to q:
// P(v) = v + (<q,v>_L / (1 - <p,q>_L)) (p + q).
// An isometry from T_p onto T_q that maps the geodesic's initial velocity
// to its terminal velocity.
inline TangentVec parallel_transport(const HPoint& p, const HPoint& q, const TangentVec& v) {
    if ((v.base().coords() - p.coords()).cwiseAbs().maxCoeff() > 1e-12)
        throw contract_error("parallel_transport: vector is not based at p");
    const double c = lorentz_inner(p.coords(), q.coords());
    const double qv = lorentz_inner(q.coords(), v.vec());
    Vec w = v.vec() + (qv / (1.0 - c)) * (p.coords() + q.coords());
    w = tangent_projection(q, w);
    return TangentVec(q, std::move(w));
}

}  // namespace hconv
