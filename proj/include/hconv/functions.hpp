#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>

#include "hconv/convex_sets.hpp"
#include "hconv/differential.hpp"
#include "hconv/sampling.hpp"

// Convexity of functions along geodesics, checked by sampling at zeroth,
// first, and second order, together with the builtin family of functions the
// theory supplies: distance and half squared distance from a point, the
// logarithmic barrier of the apex, and quadratic forms.

namespace hconv {

// ---------------------------------------------------------------------------
// Builtin smooth functions, given through their Euclidean extensions.

// d_q: p |-> arcosh(-<q,p>_L). Smooth away from q.
inline SmoothFunction distance_from(const HPoint& q) {
    return SmoothFunction{
        [q](const HPoint& p) { return distance(q, p); },
        [q](const HPoint& p) {
            const double c = lorentz_inner(p.coords(), q.coords());
            const double s2 = (c - 1.0) * (c + 1.0);
            if (s2 <= 0.0)
                throw nondifferentiable_error("distance_from: gradient undefined at p = q");
            return Vec((-1.0 / std::sqrt(s2)) * apply_j(q.coords()));
        },
        [q](const HPoint& p) {
            const double c = lorentz_inner(p.coords(), q.coords());
            const double s2 = (c - 1.0) * (c + 1.0);
            if (s2 <= 0.0)
                throw nondifferentiable_error("distance_from: Hessian undefined at p = q");
            const Vec jq = apply_j(q.coords());
            return Mat((c / std::pow(s2, 1.5)) * (jq * jq.transpose()));
        }};
}

namespace detail {
// kappa(d) = d / sinh d and g(d) = (1 - d coth d) / sinh^2 d, the scalar
// factors in the derivatives of the half squared distance. g cancels
// catastrophically near zero, so a short series takes over below 1e-3.
inline double rho_kappa(double d) { return d < 1e-12 ? 1.0 : d / std::sinh(d); }
inline double rho_g(double d) {
    if (d < 1e-3) return -1.0 / 3.0 + (2.0 / 15.0) * d * d;
    const double sh = std::sinh(d);
    return (1.0 - d * std::cosh(d) / sh) / (sh * sh);
}
}  // namespace detail

// rho_q = d_q^2 / 2, smooth everywhere including p = q.
inline SmoothFunction half_sq_distance_from(const HPoint& q) {
    return SmoothFunction{
        [q](const HPoint& p) {
            const double d = distance(q, p);
            return 0.5 * d * d;
        },
        [q](const HPoint& p) {
            const double d = arcosh_clamped(-lorentz_inner(q.coords(), p.coords()));
            return Vec(-detail::rho_kappa(d) * apply_j(q.coords()));
        },
        [q](const HPoint& p) {
            const double d = arcosh_clamped(-lorentz_inner(q.coords(), p.coords()));
            const Vec jq = apply_j(q.coords());
            return Mat(detail::rho_g(d) * (jq * jq.transpose()));
        }};
}

// The barrier p |-> -ln(-1 - <anchor, p>_L), finite wherever p is farther
// than distance 0 from the anchor (for the apex anchor: p_{n+1} > 1).
inline SmoothFunction log_barrier(const HPoint& anchor) {
    return SmoothFunction{
        [anchor](const HPoint& p) {
            const double u = -1.0 - lorentz_inner(anchor.coords(), p.coords());
            if (u <= 0.0) throw domain_error("log_barrier: point is at the anchor");
            return -std::log(u);
        },
        [anchor](const HPoint& p) {
            const double u = -1.0 - lorentz_inner(anchor.coords(), p.coords());
            if (u <= 0.0) throw domain_error("log_barrier: point is at the anchor");
            return Vec(apply_j(anchor.coords()) / u);
        },
        [anchor](const HPoint& p) {
            const double u = -1.0 - lorentz_inner(anchor.coords(), p.coords());
            if (u <= 0.0) throw domain_error("log_barrier: point is at the anchor");
            const Vec ja = apply_j(anchor.coords());
            return Mat((ja * ja.transpose()) / (u * u));
        }};
}

// The restriction of the quadratic form x^T A x to the sheet.
inline SmoothFunction quadratic_function(Mat a) {
    Mat A = 0.5 * (a + a.transpose());
    return SmoothFunction{
        [A](const HPoint& p) { return p.coords().dot(A * p.coords()); },
        [A](const HPoint& p) { return Vec(2.0 * A * p.coords()); },
        [A](const HPoint&) { return Mat(2.0 * A); }};
}

// g = f o Q for a Lorentz map Q, by the chain rule:
// Dg(p) = Q^T Df(Qp), D^2 g(p) = Q^T D^2 f(Qp) Q.
inline SmoothFunction compose_with_lorentz_map(const SmoothFunction& f, const LorentzMap& q) {
    const Mat Q = q.matrix();
    SmoothFunction g;
    g.value = [f, Q](const HPoint& p) { return f.value(HPoint(Q * p.coords(), true)); };
    if (f.euclidean_gradient)
        g.euclidean_gradient = [f, Q](const HPoint& p) {
            return Vec(Q.transpose() * f.euclidean_gradient(HPoint(Q * p.coords(), true)));
        };
    if (f.euclidean_hessian)
        g.euclidean_hessian = [f, Q](const HPoint& p) {
            return Mat(Q.transpose() * f.euclidean_hessian(HPoint(Q * p.coords(), true)) * Q);
        };
    return g;
}

// ---------------------------------------------------------------------------
// Sampling checkers.

enum class ConvexityVerdict { convex_evidence, counterexample };

struct ConvexityReport {
    ConvexityVerdict verdict;
    double worst_violation;  // largest inequality violation observed, 0 if none
    long checks_run;
    // For segment-based checks: the offending pair and parameter.
    std::optional<HPoint> witness_p, witness_q;
    double witness_t = 0.0;
    // For the second order check: the offending direction.
    std::optional<Vec> witness_v;
    // Second order only: whether the strict inequality held on every sample.
    bool strict = false;
};

namespace detail {
// A violation counts as a counterexample only when it clears this margin;
// smaller positives are reported in worst_violation but do not flip the
// verdict, since they are indistinguishable from sampling noise.
inline constexpr double counterexample_margin = 1e-6;

inline bool record_violation(ConvexityReport& report, double violation) {
    report.worst_violation = std::max(report.worst_violation, violation);
    return violation > counterexample_margin;
}
}  // namespace detail

// Midpoint convexity of f along geodesics between random members of C,
// tested on the 16-interval subdivision of each segment. Tolerances scale
// with the local size of f so that exponentially large values along long
// geodesics do not drown the test in rounding noise.
inline ConvexityReport zeroth_order_check(const SmoothFunction& f, const ConeSet& c,
                                          long pairs, std::uint64_t seed,
                                          double tolerance = 1e-8) {
    Rng rng(seed);
    ConvexityReport report{ConvexityVerdict::convex_evidence, 0.0, 0, {}, {}, 0.0, {}, false};
    for (long i = 0; i < pairs; ++i) {
        const HPoint p = sample_member(c, rng);
        const HPoint q = sample_member(c, rng);
        const double d = distance(p, q);
        if (d < tol::coincident) continue;
        ++report.checks_run;
        constexpr int kIntervals = 16;
        double values[kIntervals + 1];
        for (int j = 0; j <= kIntervals; ++j) {
            const double t = d * static_cast<double>(j) / kIntervals;
            values[j] = (j == 0) ? f(p) : (j == kIntervals ? f(q) : f(geodesic_point(p, q, t)));
        }
        for (int j = 1; j < kIntervals; ++j) {
            const double scale =
                1.0 + std::abs(values[j - 1]) + std::abs(values[j]) + std::abs(values[j + 1]);
            const double viol =
                (values[j] - 0.5 * (values[j - 1] + values[j + 1])) / scale;
            if (viol > tolerance && detail::record_violation(report, viol)) {
                report.verdict = ConvexityVerdict::counterexample;
                report.witness_p = p;
                report.witness_q = q;
                report.witness_t = d * static_cast<double>(j) / kIntervals;
                return report;
            }
        }
    }
    return report;
}

// Subgradient inequality f(q) >= f(p) + <grad f(p), log_p q>_L, also checked
// through the explicit form with the arcosh factor; the two must agree.
inline ConvexityReport first_order_check(const SmoothFunction& f, const ConeSet& c,
                                         long pairs, std::uint64_t seed,
                                         double tolerance = 1e-8) {
    require_gradient(f);
    Rng rng(seed);
    ConvexityReport report{ConvexityVerdict::convex_evidence, 0.0, 0, {}, {}, 0.0, {}, false};
    for (long i = 0; i < pairs; ++i) {
        const HPoint p = sample_member(c, rng);
        const HPoint q = sample_member(c, rng);
        if (distance(p, q) < tol::coincident) continue;
        ++report.checks_run;
        const TangentVec grad = riemannian_gradient(f, p);
        const double lower1 =
            f(p) + lorentz_inner(grad.vec(), log_map(p, q).vec());
        // Same bound without assembling the logarithm:
        // f(p) + arcosh(-<p,q>)/sqrt(<p,q>^2-1) * <J Df(p), (I + p p^T J) q>.
        const double cc = lorentz_inner(p.coords(), q.coords());
        const double factor = arcosh_clamped(-cc) / std::sqrt((cc - 1.0) * (cc + 1.0));
        const double lower2 =
            f(p) + factor * lorentz_inner(apply_j(f.euclidean_gradient(p)),
                                          tangent_projection(p, q.coords()));
        if (std::abs(lower1 - lower2) > 1e-6 * (1.0 + std::abs(lower1)))
            throw numerical_failure("first_order_check: bound forms disagree",
                                    p.coords(), std::abs(lower1 - lower2));
        const double scale = 1.0 + std::abs(f(q)) + std::abs(lower1);
        const double viol = (lower1 - f(q)) / scale;
        if (viol > tolerance && detail::record_violation(report, viol)) {
            report.verdict = ConvexityVerdict::counterexample;
            report.witness_p = p;
            report.witness_q = q;
            return report;
        }
    }
    return report;
}

// Monotonicity of the gradient field along geodesics:
// <grad f(p), log_p q>_L + <grad f(q), log_q p>_L <= 0, equivalently
// <J Df(p) - J Df(q), p - q>_L - (<p,q>+1)(<J Df(p),p> + <J Df(q),q>) >= 0.
// The two residuals differ by the negative factor -arcosh(-c)/sqrt(c^2-1),
// so their signs must be opposite; both are checked.
inline ConvexityReport gradient_monotonicity_check(const SmoothFunction& f, const ConeSet& c,
                                                   long pairs, std::uint64_t seed,
                                                   double tolerance = 1e-8) {
    require_gradient(f);
    Rng rng(seed);
    ConvexityReport report{ConvexityVerdict::convex_evidence, 0.0, 0, {}, {}, 0.0, {}, false};
    for (long i = 0; i < pairs; ++i) {
        const HPoint p = sample_member(c, rng);
        const HPoint q = sample_member(c, rng);
        if (distance(p, q) < tol::coincident) continue;
        ++report.checks_run;
        const double sum =
            lorentz_inner(riemannian_gradient(f, p).vec(), log_map(p, q).vec()) +
            lorentz_inner(riemannian_gradient(f, q).vec(), log_map(q, p).vec());
        const Vec jdfp = apply_j(f.euclidean_gradient(p));
        const Vec jdfq = apply_j(f.euclidean_gradient(q));
        const double cc = lorentz_inner(p.coords(), q.coords());
        const double explicit_form =
            lorentz_inner(jdfp - jdfq, p.coords() - q.coords()) -
            (cc + 1.0) * (lorentz_inner(jdfp, p.coords()) + lorentz_inner(jdfq, q.coords()));
        const double factor = arcosh_clamped(-cc) / std::sqrt((cc - 1.0) * (cc + 1.0));
        // sum == -factor * explicit_form up to roundoff.
        const double scale = 1.0 + std::abs(sum) + std::abs(factor * explicit_form);
        if (std::abs(sum + factor * explicit_form) > 1e-6 * scale)
            throw numerical_failure("gradient_monotonicity_check: residual forms disagree",
                                    p.coords(), std::abs(sum + factor * explicit_form));
        const double viol = sum / scale;
        if (viol > tolerance && detail::record_violation(report, viol)) {
            report.verdict = ConvexityVerdict::counterexample;
            report.witness_p = p;
            report.witness_q = q;
            return report;
        }
    }
    return report;
}

// Pointwise second order condition: for p in C and unit tangent v,
// <J D^2 f(p) v, v>_L + <J Df(p), p>_L <v,v>_L >= 0. The strict flag
// reports whether the form stayed above +tolerance on every sample.
inline ConvexityReport second_order_check(const SmoothFunction& f, const ConeSet& c,
                                          long samples, std::uint64_t seed,
                                          double tolerance = 1e-8) {
    require_gradient(f);
    require_hessian(f);
    Rng rng(seed);
    ConvexityReport report{ConvexityVerdict::convex_evidence, 0.0, 0, {}, {}, 0.0, {}, true};
    for (long i = 0; i < samples; ++i) {
        const HPoint p = sample_member(c, rng);
        const TangentVec v = unit_tangent(p, rng);
        ++report.checks_run;
        const double form = geodesic_derivatives(f, p, v).second;
        const double scale = 1.0 + std::abs(form);
        if (form <= tolerance * scale) report.strict = false;
        const double viol = -form / scale;
        if (viol > tolerance && detail::record_violation(report, viol)) {
            report.verdict = ConvexityVerdict::counterexample;
            report.witness_p = p;
            report.witness_v = v.vec();
            report.strict = false;
            return report;
        }
    }
    return report;
}

}  // namespace hconv
