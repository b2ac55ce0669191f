#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "hconv/geometry.hpp"
#include "hconv/lorentz.hpp"

// Intrinsic first and second derivatives on H^n, obtained from Euclidean
// derivatives of any smooth extension of the function to a neighborhood of
// the sheet in R^{n+1}:
//
//   grad f(p) = J Df(p) + <J Df(p), p>_L p
//   Hess f(p) v = (I + p p^T J) [ J D^2 f(p) + <J Df(p), p>_L I ] v
//
// plus the closed-form derivatives of the distance and half squared distance
// from a fixed point, whose spectra are known exactly.

namespace hconv {

// A smooth function given through Euclidean extension callbacks. The Hessian
// callback is optional; operations that need it throw capability_error when
// it is absent.
struct SmoothFunction {
    std::function<double(const HPoint&)> value;
    std::function<Vec(const HPoint&)> euclidean_gradient;
    std::function<Mat(const HPoint&)> euclidean_hessian;

    double operator()(const HPoint& p) const { return value(p); }
};

inline void require_gradient(const SmoothFunction& f) {
    if (!f.euclidean_gradient)
        throw capability_error("function does not provide a Euclidean gradient");
}

inline void require_hessian(const SmoothFunction& f) {
    if (!f.euclidean_hessian)
        throw capability_error("function does not provide a Euclidean Hessian");
}

inline TangentVec riemannian_gradient(const SmoothFunction& f, const HPoint& p) {
    require_gradient(f);
    const Vec g = apply_j(f.euclidean_gradient(p));
    Vec grad = g + lorentz_inner(g, p.coords()) * p.coords();
    grad = tangent_projection(p, grad);
    return TangentVec(p, std::move(grad));
}

inline TangentVec riemannian_hessian_apply(const SmoothFunction& f, const HPoint& p,
                                           const TangentVec& v) {
    require_gradient(f);
    require_hessian(f);
    const Vec jdf = apply_j(f.euclidean_gradient(p));
    const double scale = lorentz_inner(jdf, p.coords());
    const Mat jd2f = j_matrix(p.ambient()) * f.euclidean_hessian(p);
    Vec hv = tangent_projection(p, jd2f * v.vec() + scale * v.vec());
    return TangentVec(p, std::move(hv));
}

// Full (n+1) x (n+1) matrix of the Hessian operator composed with the
// tangent projector; restricting it to a tangent basis gives the intrinsic
// operator.
inline Mat riemannian_hessian_matrix(const SmoothFunction& f, const HPoint& p) {
    require_gradient(f);
    require_hessian(f);
    const long m = p.ambient();
    const Vec jdf = apply_j(f.euclidean_gradient(p));
    const double scale = lorentz_inner(jdf, p.coords());
    const Mat inner = j_matrix(m) * f.euclidean_hessian(p) + scale * Mat::Identity(m, m);
    return tangent_projector_matrix(p) * inner;
}

// Matrix of the Hessian in a Lorentz-orthonormal tangent basis; symmetric,
// suitable for dense eigendecomposition.
inline Mat hessian_in_basis(const SmoothFunction& f, const HPoint& p,
                            const std::vector<Vec>& basis) {
    const Mat H = riemannian_hessian_matrix(f, p);
    const long k = static_cast<long>(basis.size());
    Mat R(k, k);
    for (long i = 0; i < k; ++i)
        for (long j = 0; j < k; ++j) R(i, j) = lorentz_inner(basis[i], H * basis[j]);
    // Symmetrize away the last-digit asymmetry of the two-sided products.
    return 0.5 * (R + R.transpose());
}

// First and second derivatives of t |-> f(exp_p(t v)) at t = 0:
//   (f o gamma)'(0)  = <J Df(p), v>_L
//   (f o gamma)''(0) = <J D^2 f(p) v, v>_L + <J Df(p), p>_L <v,v>_L
struct GeodesicDerivatives {
    double first;
    double second;
};

inline GeodesicDerivatives geodesic_derivatives(const SmoothFunction& f, const HPoint& p,
                                                const TangentVec& v) {
    require_gradient(f);
    require_hessian(f);
    const Vec jdf = apply_j(f.euclidean_gradient(p));
    const double first = lorentz_inner(jdf, v.vec());
    const Mat jd2f = j_matrix(p.ambient()) * f.euclidean_hessian(p);
    const double second = lorentz_inner(jd2f * v.vec(), v.vec()) +
                          lorentz_inner(jdf, p.coords()) * lorentz_inner(v.vec(), v.vec());
    return {first, second};
}

// grad d_q(p) = (-1 / sqrt(<p,q>^2 - 1)) (I + p p^T J) q. Points away from q
// with unit Lorentz norm; undefined at p = q.
inline TangentVec distance_gradient(const HPoint& q, const HPoint& p) {
    const double c = lorentz_inner(p.coords(), q.coords());
    const double s2 = (c - 1.0) * (c + 1.0);
    if (s2 <= 0.0 || arcosh_clamped(-c) < tol::coincident)
        throw nondifferentiable_error("distance_gradient: distance is not smooth at p = q");
    Vec g = (-1.0 / std::sqrt(s2)) * tangent_projection(p, q.coords());
    g = tangent_projection(p, g);
    return TangentVec(p, std::move(g));
}

// Hess d_q(p) v = (<p,q> / sqrt(<p,q>^2-1)) (I + p p^T J)
//                 [ (1/(<p,q>^2-1)) q q^T J - I ] v.
inline TangentVec distance_hessian_apply(const HPoint& q, const HPoint& p,
                                         const TangentVec& v) {
    const double c = lorentz_inner(p.coords(), q.coords());
    const double s2 = (c - 1.0) * (c + 1.0);
    if (s2 <= 0.0 || arcosh_clamped(-c) < tol::coincident)
        throw nondifferentiable_error("distance_hessian_apply: not smooth at p = q");
    const double qv = lorentz_inner(q.coords(), v.vec());
    Vec inner = (qv / s2) * q.coords() - v.vec();
    Vec hv = (c / std::sqrt(s2)) * tangent_projection(p, inner);
    return TangentVec(p, tangent_projection(p, hv));
}

// Spectrum of a tangent-space self-adjoint operator with one simple
// eigenvalue and one of multiplicity n-1.
struct SpectrumReport {
    double simple_eigenvalue;
    double repeated_eigenvalue;
    long repeated_multiplicity;
    // Direction of the simple eigenvalue; absent when every direction is
    // equivalent (the coincident case of the squared distance).
    std::optional<TangentVec> simple_direction;
};

// Hess d_q(p) has eigenvalue 0 on the radial direction q + <p,q> p and
// eigenvalue -<p,q>/sqrt(<p,q>^2-1) = coth d(p,q) on its tangent complement.
inline SpectrumReport distance_hessian_spectrum(const HPoint& q, const HPoint& p) {
    const double c = lorentz_inner(p.coords(), q.coords());
    const double s2 = (c - 1.0) * (c + 1.0);
    if (s2 <= 0.0 || arcosh_clamped(-c) < tol::coincident)
        throw nondifferentiable_error("distance_hessian_spectrum: not smooth at p = q");
    Vec radial = q.coords() + c * p.coords();
    radial /= std::sqrt(s2);
    radial = tangent_projection(p, radial);
    return {0.0, -c / std::sqrt(s2), p.n() - 1, TangentVec(p, std::move(radial))};
}

// Hess of rho_q = d_q^2 / 2 has eigenvalue 1 on the radial direction and
// -<p,q> arcosh(-<p,q>) / sqrt(<p,q>^2-1) = d coth d on the complement.
// At p = q it is the identity.
inline SpectrumReport half_sq_distance_hessian_spectrum(const HPoint& q, const HPoint& p) {
    const double c = lorentz_inner(p.coords(), q.coords());
    const double d = arcosh_clamped(-c);
    if (d < tol::coincident) return {1.0, 1.0, p.n(), std::nullopt};
    const double s = std::sqrt((c - 1.0) * (c + 1.0));
    Vec radial = (q.coords() + c * p.coords()) / s;
    radial = tangent_projection(p, radial);
    return {1.0, -c * d / s, p.n() - 1, TangentVec(p, std::move(radial))};
}

// Lorentz-orthonormal basis of T_p adapted to a second point q: the first
// n-1 vectors span T_p intersected with T_q, and the last one is the radial
// direction (q + <p,q> p) / sqrt(<p,q>^2 - 1). Built by Gram-Schmidt over
// the canonical coordinate vectors in index order, so it is deterministic.
inline std::vector<Vec> intersection_basis(const HPoint& p, const HPoint& q) {
    const double c = lorentz_inner(p.coords(), q.coords());
    const double s2 = (c - 1.0) * (c + 1.0);
    if (s2 <= 0.0 || arcosh_clamped(-c) < tol::coincident)
        throw degenerate_input_error("intersection_basis: points coincide");
    const long m = p.ambient();
    Vec radial = (q.coords() + c * p.coords()) / std::sqrt(s2);
    radial = tangent_projection(p, radial);

    std::vector<Vec> basis;  // the n-1 vectors orthogonal to both p and q
    basis.reserve(p.n());
    for (long i = 0; i < m && static_cast<long>(basis.size()) < p.n() - 1; ++i) {
        Vec u = tangent_projection(p, Vec::Unit(m, i));
        u -= lorentz_inner(radial, u) * radial;
        for (const Vec& b : basis) u -= lorentz_inner(b, u) * b;
        const double sq = lorentz_inner(u, u);
        if (sq > 1e-12) basis.push_back(u / std::sqrt(sq));
    }
    basis.push_back(radial);
    return basis;
}

}  // namespace hconv
