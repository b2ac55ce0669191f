#pragma once

#include <cmath>
#include <vector>

#include "hconv/types.hpp"

// Linear-algebra layer of the Lorentz model: causal classification, the
// Lorentz cone L = { x : <x,x>_L <= 0, x_{n+1} >= 0 }, the group of linear
// maps preserving the form, and the orthogonal projector onto tangent spaces.

namespace hconv {

enum class CausalClass {
    spacelike,   // <x,x>_L > 0
    lightlike,   // <x,x>_L = 0
    timelike,    // <x,x>_L < 0
};

struct LorentzNorm {
    CausalClass causal;
    double magnitude;  // sqrt(|<x,x>_L|), a norm only in the spacelike case
};

inline LorentzNorm lorentz_norm(const Vec& x) {
    const double s = lorentz_inner(x, x);
    CausalClass c = s > 0.0   ? CausalClass::spacelike
                    : s < 0.0 ? CausalClass::timelike
                              : CausalClass::lightlike;
    return {c, std::sqrt(std::abs(s))};
}

enum class ConePosition {
    interior,  // <x,x>_L < 0 and x_{n+1} > 0
    boundary,  // <x,x>_L = 0 and x_{n+1} >= 0 (the origin counts as boundary)
    outside,
};

inline ConePosition classify_lorentz_cone(const Vec& x, double tolerance = tol::on_manifold) {
    const double s = lorentz_inner(x, x);
    const double t = x[x.size() - 1];
    if (std::abs(s) <= tolerance && t >= -tolerance) return ConePosition::boundary;
    if (s < -tolerance && t > 0.0) return ConePosition::interior;
    return ConePosition::outside;
}

inline bool is_lorentz_map(const Mat& q, double tolerance = tol::group) {
    if (q.rows() != q.cols() || q.rows() < 2) return false;
    const Mat J = j_matrix(q.rows());
    return (q.transpose() * J * q - J).cwiseAbs().maxCoeff() <= tolerance;
}

// Reflection through the Lorentz-orthogonal complement of a spacelike u:
// Q = I - (2 / <u,u>_L) u u^T J. Fixes u^perp pointwise and negates u.
inline LorentzMap reflection_map(const Vec& u) {
    const double uu = lorentz_inner(u, u);
    if (uu <= 0.0)
        throw domain_error("reflection_map: direction must be spacelike (<u,u>_L > 0)");
    const long m = u.size();
    Mat q = Mat::Identity(m, m) - (2.0 / uu) * (u * apply_j(u).transpose());
    return LorentzMap(std::move(q));
}

// For unit spacelike u, w (<u,u>_L = <w,w>_L = 1) the map
// Q = I + 2 w u^T J - (u + w)(u + w)^T J / (1 + <u,w>_L)
// is a Lorentz transformation sending u to w. Undefined when <u,w>_L = -1,
// i.e. when w is Lorentz-antipodal to u and the denominator vanishes.
inline LorentzMap alignment_map(const Vec& u, const Vec& w, double tolerance = tol::group) {
    if (u.size() != w.size())
        throw contract_error("alignment_map: dimension mismatch");
    if (std::abs(lorentz_inner(u, u) - 1.0) > tolerance ||
        std::abs(lorentz_inner(w, w) - 1.0) > tolerance)
        throw contract_error("alignment_map: u and w must be unit spacelike vectors");
    const double uw = lorentz_inner(u, w);
    if (std::abs(1.0 + uw) <= 1e-12)
        throw singular_configuration_error(
            "alignment_map: <u,w>_L = -1, the construction is singular");
    const long m = u.size();
    const Vec ju = apply_j(u);
    const Vec s = u + w;
    Mat q = Mat::Identity(m, m) + 2.0 * (w * ju.transpose()) -
            (s * apply_j(s).transpose()) / (1.0 + uw);
    return LorentzMap(std::move(q));
}

// Orthogonal projector onto T_p H^n with respect to the Lorentz form:
// x |-> (I + p p^T J) x. Self-adjoint and idempotent, annihilates p.
inline Vec tangent_projection(const HPoint& p, const Vec& x) {
    if (x.size() != p.ambient())
        throw contract_error("tangent_projection: dimension mismatch");
    return x + lorentz_inner(p.coords(), x) * p.coords();
}

inline Mat tangent_projector_matrix(const HPoint& p) {
    const long m = p.ambient();
    return Mat::Identity(m, m) + p.coords() * apply_j(p.coords()).transpose();
}

// Deterministic Lorentz-orthonormal basis of T_p H^n: project the canonical
// coordinate vectors onto the tangent space in index order, Gram-Schmidt them
// in the Lorentz metric, and keep the n that survive.
inline std::vector<Vec> tangent_basis(const HPoint& p) {
    const long m = p.ambient();
    std::vector<Vec> basis;
    basis.reserve(p.n());
    for (long i = 0; i < m && static_cast<long>(basis.size()) < p.n(); ++i) {
        Vec u = tangent_projection(p, Vec::Unit(m, i));
        for (const Vec& b : basis) u -= lorentz_inner(b, u) * b;
        const double sq = lorentz_inner(u, u);
        if (sq > 1e-12) basis.push_back(u / std::sqrt(sq));
    }
    return basis;
}

}  // namespace hconv
