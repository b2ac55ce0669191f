#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>

#include "hconv/sampling.hpp"
#include "hconv/types.hpp"

// Convexity certification for quadratic forms restricted to H^n.
//
// f(p) = p^T A p is geodesically convex exactly when A is copositive with
// respect to the boundary of the Lorentz cone, which in turn happens exactly
// when A + alpha J is positive semidefinite for some real alpha. Writing A
// in blocks [[Abar, a], [a^T, sigma]], all admissible alpha lie in the
// interval (-lambda_min(Abar), sigma), on which
//
//     psi(alpha) = sigma - alpha - a^T (Abar + alpha I)^{-1} a
//
// is concave; A + alpha J is positive definite iff psi(alpha) > 0 there. So
// certification is a one-dimensional concave maximization, plus shortcuts:
// lambda_min(Abar) >= -sigma is necessary, a = 0 reduces to that inequality,
// and sigma + lambda_min(Abar) > 2 |a| is sufficient.

namespace hconv {

class SymQuadratic {
  public:
    explicit SymQuadratic(const Mat& a) : A_(0.5 * (a + a.transpose())) {
        if (a.rows() != a.cols() || a.rows() < 2)
            throw contract_error("SymQuadratic: matrix must be square of size >= 2");
    }

    const Mat& matrix() const { return A_; }
    long n() const { return A_.rows() - 1; }
    long ambient() const { return A_.rows(); }

    Mat abar() const { return A_.topLeftCorner(n(), n()); }
    Vec offdiag() const { return A_.topRightCorner(n(), 1); }
    double sigma() const { return A_(n(), n()); }

    double operator()(const Vec& x) const {
        if (x.size() != A_.rows()) throw contract_error("SymQuadratic: dimension mismatch");
        return x.dot(A_ * x);
    }

  private:
    Mat A_;
};

inline double lambda_min(const Mat& m) {
    Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (m + m.transpose()));
    return es.eigenvalues()[0];
}

inline bool psd_check(const Mat& m, double tolerance = tol::psd) {
    if (m.rows() != m.cols()) throw contract_error("psd_check: matrix must be square");
    return lambda_min(m) >= -tolerance;
}

// psi(alpha) = sigma - alpha - a^T (Abar + alpha I)^{-1} a on the domain
// alpha > -lambda_min(Abar).
inline double psi(const SymQuadratic& q, double alpha) {
    const Mat abar = q.abar();
    const double lm = lambda_min(abar);
    if (!(alpha > -lm))
        throw domain_error("psi: alpha is left of the pole at -lambda_min(Abar)");
    const long n = q.n();
    const Mat shifted = abar + alpha * Mat::Identity(n, n);
    const Vec x = shifted.ldlt().solve(q.offdiag());
    return q.sigma() - alpha - q.offdiag().dot(x);
}

struct PsiMax {
    double alpha;
    double value;
};

// Golden-section maximization of psi over (-lambda_min(Abar), sigma).
// Returns nothing when the interval is empty. psi is concave there, so the
// section search converges to the global maximum.
inline std::optional<PsiMax> psi_max(const SymQuadratic& q) {
    const double lm = lambda_min(q.abar());
    const double lo = -lm, hi = q.sigma();
    if (!(hi > lo)) return std::nullopt;
    const double inset = 1e-12 * (hi - lo);
    double a = lo + inset, b = hi - inset;
    const long n = q.n();
    const Mat abar = q.abar();
    const Vec av = q.offdiag();
    auto eval = [&](double alpha) {
        const Mat shifted = abar + alpha * Mat::Identity(n, n);
        return q.sigma() - alpha - av.dot(shifted.ldlt().solve(av));
    };
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = b - invphi * (b - a), x2 = a + invphi * (b - a);
    double f1 = eval(x1), f2 = eval(x2);
    for (int it = 0; it < 200; ++it) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + invphi * (b - a);
            f2 = eval(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - invphi * (b - a);
            f1 = eval(x1);
        }
    }
    const double alpha = f1 > f2 ? x1 : x2;
    return PsiMax{alpha, std::max(f1, f2)};
}

// Random search for a direction on the null cone boundary where the form is
// negative: x = (u, 1) with |u| = 1 covers the boundary up to scale. Sphere
// samples are followed by a projected descent refinement of the best finds.
inline std::optional<Vec> boundary_copositivity_search(const SymQuadratic& q, long samples,
                                                       std::uint64_t seed,
                                                       double threshold = tol::psd) {
    const long n = q.n();
    const Mat abar = q.abar();
    const Vec av = q.offdiag();
    const double sigma = q.sigma();
    auto value = [&](const Vec& u) { return u.dot(abar * u) + 2.0 * av.dot(u) + sigma; };

    Rng rng(seed);
    Vec best_u = sphere_direction(n, rng);
    double best = value(best_u);
    for (long i = 1; i < samples; ++i) {
        const Vec u = sphere_direction(n, rng);
        const double v = value(u);
        if (v < best) {
            best = v;
            best_u = u;
        }
    }
    // Descend within the sphere from the best sample.
    Vec u = best_u;
    double fu = best;
    double eta = 0.5;
    for (int it = 0; it < 300; ++it) {
        Vec g = 2.0 * (abar * u + av);
        g -= g.dot(u) * u;
        if (g.norm() < 1e-14) break;
        Vec cand = (u - eta * g).normalized();
        double fc = value(cand);
        if (fc < fu) {
            u = cand;
            fu = fc;
            eta *= 1.2;
        } else {
            eta *= 0.5;
            if (eta < 1e-16) break;
        }
    }
    if (fu >= -threshold) return std::nullopt;
    Vec x(n + 1);
    x.head(n) = u;
    x[n] = 1.0;
    return x;
}

enum class Verdict { convex, not_convex, inconclusive_near_boundary };

enum class Shortcut { necessary_failed, diagonal_rule, a_zero_rule, gap_rule, search };

struct Certificate {
    Verdict verdict;
    Shortcut shortcut;
    std::optional<double> alpha;         // multiplier with A + alpha J PSD
    std::optional<double> psi_at_alpha;  // psi evaluated there, when defined
    std::optional<Vec> witness;          // boundary direction with x^T A x < 0
};

// Full certification pipeline. The tolerance guards the eigenvalue tests and
// the witness threshold; verdicts with |psi*| inside the band are reported
// as inconclusive rather than forced to a side.
inline Certificate certify(const SymQuadratic& q, double tolerance = tol::psd,
                           double band = tol::psi_band) {
    const long n = q.n();
    const Mat abar = q.abar();
    const Vec av = q.offdiag();
    const double sigma = q.sigma();

    Eigen::SelfAdjointEigenSolver<Mat> es(abar);
    const double lm = es.eigenvalues()[0];
    Vec vmin = es.eigenvectors().col(0);
    // Half of the certificate alpha interval; also the gap rule midpoint
    // (mu + eta)/2 and the maximizer of min(lm + alpha, sigma - alpha).
    const double mid_alpha = 0.5 * (sigma - lm);

    auto embed = [n](const Vec& u) {
        Vec x(n + 1);
        x.head(n) = u;
        x[n] = 1.0;
        return x;
    };

    // Necessary: the form is nonnegative on (v, 1) directions only if
    // lambda_min(Abar) + sigma >= 0.
    if (lm + sigma < -tolerance) {
        if (av.dot(vmin) > 0.0) vmin = -vmin;  // make the cross term help
        Vec x = embed(vmin);
        if (q(x) < -tolerance)
            return {Verdict::not_convex, Shortcut::necessary_failed, {}, {}, std::move(x)};
        // Defensive fallback; with the sign flip the witness always works.
        if (auto w = boundary_copositivity_search(q, 20000, 1, tolerance))
            return {Verdict::not_convex, Shortcut::necessary_failed, {}, {}, std::move(*w)};
        return {Verdict::inconclusive_near_boundary, Shortcut::necessary_failed, {}, {}, {}};
    }

    const double scale = std::max(1.0, q.matrix().cwiseAbs().maxCoeff());
    const bool a_is_zero = av.cwiseAbs().maxCoeff() <= 1e-14 * scale;
    if (a_is_zero) {
        const bool diagonal =
            (abar - Mat(abar.diagonal().asDiagonal())).cwiseAbs().maxCoeff() <= 1e-14 * scale;
        const Shortcut tag = diagonal ? Shortcut::diagonal_rule : Shortcut::a_zero_rule;
        // With a = 0 convexity is exactly lambda_min(Abar) >= -sigma.
        if (lm + sigma >= 0.0) {
            Certificate cert{Verdict::convex, tag, mid_alpha, {}, {}};
            if (lm + mid_alpha > 0.0) cert.psi_at_alpha = sigma - mid_alpha;
            return cert;
        }
        return {Verdict::not_convex, tag, {}, {}, embed(vmin)};
    }

    // Sufficient gap rule: sigma + lambda_min(Abar) > 2 |a| puts the
    // midpoint strictly between the roots of (sigma - t)(lm + t) = a^T a.
    const double anorm = av.norm();
    if (sigma + lm > 2.0 * anorm)
        return {Verdict::convex, Shortcut::gap_rule, mid_alpha, psi(q, mid_alpha), {}};

    const auto pm = psi_max(q);
    if (!pm) {
        // Empty alpha interval with the necessary test passed: only a
        // boundary witness can still decide.
        for (long s : {20000L, 100000L, 500000L})
            if (auto w = boundary_copositivity_search(q, s, 1, tolerance))
                return {Verdict::not_convex, Shortcut::search, {}, {}, std::move(*w)};
        return {Verdict::inconclusive_near_boundary, Shortcut::search, {}, {}, {}};
    }
    if (pm->value > band)
        return {Verdict::convex, Shortcut::search, pm->alpha, pm->value, {}};
    if (pm->value < -band) {
        for (long s : {20000L, 100000L, 500000L})
            if (auto w = boundary_copositivity_search(q, s, 1, tolerance))
                return {Verdict::not_convex, Shortcut::search, pm->alpha, pm->value,
                        std::move(*w)};
        return {Verdict::inconclusive_near_boundary, Shortcut::search, pm->alpha, pm->value, {}};
    }
    return {Verdict::inconclusive_near_boundary, Shortcut::search, pm->alpha, pm->value, {}};
}

// For p on the sheet and unit tangent v at p (checked within the given
// tolerance), convexity of the form is equivalent to
// v^T A v + p^T A p >= 0 over all such pairs; this returns that quantity.
inline double tangent_pair_condition(const SymQuadratic& q, const Vec& p, const Vec& v,
                                     double tolerance = 1e-9) {
    if (p.size() != q.ambient() || v.size() != q.ambient())
        throw contract_error("tangent_pair_condition: dimension mismatch");
    if (std::abs(lorentz_inner(p, p) + 1.0) > tolerance)
        throw contract_error("tangent_pair_condition: p is not on the sheet");
    if (std::abs(lorentz_inner(v, v) - 1.0) > tolerance)
        throw contract_error("tangent_pair_condition: v is not a unit spacelike vector");
    if (std::abs(lorentz_inner(p, v)) > tolerance)
        throw contract_error("tangent_pair_condition: v is not tangent at p");
    return q(v) + q(p);
}

// For boundary directions x, y with <x,y>_L < 0, rescale so that
// <x,y>_L = -1 and return x^T A x + y^T A y; nonnegativity over all such
// pairs is again equivalent to convexity.
inline double boundary_pair_condition(const SymQuadratic& q, const Vec& x, const Vec& y,
                                      double tolerance = 1e-9) {
    if (x.size() != q.ambient() || y.size() != q.ambient())
        throw contract_error("boundary_pair_condition: dimension mismatch");
    const double sx = std::max(1.0, x.squaredNorm());
    const double sy = std::max(1.0, y.squaredNorm());
    if (std::abs(lorentz_inner(x, x)) > tolerance * sx ||
        std::abs(lorentz_inner(y, y)) > tolerance * sy)
        throw contract_error("boundary_pair_condition: inputs are not boundary directions");
    const double ip = lorentz_inner(x, y);
    if (ip >= -tolerance * std::sqrt(sx * sy))
        throw contract_error(
            "boundary_pair_condition: directions are parallel or not properly opposed");
    const double s = 1.0 / std::sqrt(-ip);
    return q(Vec(s * x)) + q(Vec(s * y));
}

enum class ParallelClass { parallel, strictly_negative };

// On the forward null cone two nonzero directions satisfy <x,y>_L <= 0,
// with equality exactly on parallel pairs. Decided by the inner product and
// cross-checked by collinearity; genuinely positive inner products mean the
// inputs were not boundary directions.
inline ParallelClass boundary_parallel_test(const Vec& x, const Vec& y,
                                            double tolerance = 1e-10) {
    if (x.size() != y.size())
        throw contract_error("boundary_parallel_test: dimension mismatch");
    const double sx = std::max(1.0, x.squaredNorm());
    const double sy = std::max(1.0, y.squaredNorm());
    if (std::abs(lorentz_inner(x, x)) > 1e-9 * sx ||
        std::abs(lorentz_inner(y, y)) > 1e-9 * sy)
        throw contract_error("boundary_parallel_test: inputs are not boundary directions");
    if (x.norm() <= tolerance || y.norm() <= tolerance)
        throw contract_error("boundary_parallel_test: zero direction");
    const double ip = lorentz_inner(x, y);
    if (ip > tolerance)
        throw contract_error("boundary_parallel_test: positive pairing is impossible on the cone");
    if (std::abs(ip) <= tolerance) {
        // Cross check: parallel boundary directions are scalar multiples.
        const double alpha = x.dot(y) / x.squaredNorm();
        if ((y - alpha * x).norm() > 1e-6 * y.norm())
            throw contract_error(
                "boundary_parallel_test: vanishing pairing on non-collinear inputs");
        return ParallelClass::parallel;
    }
    return ParallelClass::strictly_negative;
}

// Change of variables between boundary pairs and tangent pairs: for forward
// null directions x, y with <x,y>_L < 0, rescaling by 1/sqrt(-<x,y>_L)
// makes p = (x + y)/sqrt(2) a sheet point and v = (x - y)/sqrt(2) a unit
// tangent at p. Geodesics aimed at the null directions x and y are exactly
// the ones whose convexity encodes the boundary values of the form.
inline std::pair<Vec, Vec> tangent_pair_from_boundary(const Vec& x, const Vec& y) {
    if (x.size() != y.size())
        throw contract_error("tangent_pair_from_boundary: dimension mismatch");
    const double ip = lorentz_inner(x, y);
    if (ip >= 0.0)
        throw contract_error("tangent_pair_from_boundary: directions must pair negatively");
    const double s = 1.0 / std::sqrt(-ip);
    Vec p = s * (x + y) / std::sqrt(2.0);
    Vec v = s * (x - y) / std::sqrt(2.0);
    if (p[p.size() - 1] < 0.0) {
        p = -p;
        v = -v;
    }
    return {std::move(p), std::move(v)};
}

// Q^T A Q for a Lorentz map Q represents the same function precomposed with
// the isometry, so every convexity attribute is preserved.
inline SymQuadratic congruence_transform(const SymQuadratic& q, const LorentzMap& map) {
    if (map.ambient() != q.ambient())
        throw contract_error("congruence_transform: dimension mismatch");
    return SymQuadratic(map.matrix().transpose() * q.matrix() * map.matrix());
}

// Averaged necessary condition: the mean of the boundary values at
// x = (u, 1) and (-u, 1) for u = (1, ..., 1)/sqrt(n) equals
// (1/n) sum_ij Abar_ij + sigma, so this must be >= 0 for convex forms.
inline double trace_necessary_condition(const SymQuadratic& q) {
    return q.abar().sum() / static_cast<double>(q.n()) + q.sigma();
}

}  // namespace hconv
