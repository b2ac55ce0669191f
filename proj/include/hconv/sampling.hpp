#pragma once

#include <random>

#include "hconv/geometry.hpp"
#include "hconv/lorentz.hpp"

// Seeded sampling helpers shared by the probabilistic checkers, the solvers'
// restarts, and the command line tool. Everything is driven by a simple
// 64-bit seeded engine so runs are reproducible.

namespace hconv {

using Rng = std::mt19937_64;

// Standard Gaussian vector in R^dim.
inline Vec gaussian_vec(long dim, Rng& rng) {
    std::normal_distribution<double> n01(0.0, 1.0);
    Vec v(dim);
    for (long i = 0; i < dim; ++i) v[i] = n01(rng);
    return v;
}

// Uniform direction on the Euclidean unit sphere of R^dim.
inline Vec sphere_direction(long dim, Rng& rng) {
    Vec v = gaussian_vec(dim, rng);
    double n = v.norm();
    while (n < 1e-12) {
        v = gaussian_vec(dim, rng);
        n = v.norm();
    }
    return v / n;
}

// Gaussian vector in T_p H^n, with Lorentz norm truncated at the given
// radius so that sampled points never run far down the sheet.
inline TangentVec gaussian_tangent(const HPoint& p, Rng& rng, double truncate_radius = 3.0) {
    const auto basis = tangent_basis(p);
    Vec coeff = gaussian_vec(static_cast<long>(basis.size()), rng);
    Vec v = Vec::Zero(p.ambient());
    for (size_t i = 0; i < basis.size(); ++i) v += coeff[static_cast<long>(i)] * basis[i];
    const double norm = std::sqrt(std::max(0.0, lorentz_inner(v, v)));
    if (norm > truncate_radius) v *= truncate_radius / norm;
    return TangentVec(p, tangent_projection(p, v));
}

// Unit tangent vector at p, uniform over directions.
inline TangentVec unit_tangent(const HPoint& p, Rng& rng) {
    const auto basis = tangent_basis(p);
    Vec coeff = sphere_direction(static_cast<long>(basis.size()), rng);
    Vec v = Vec::Zero(p.ambient());
    for (size_t i = 0; i < basis.size(); ++i) v += coeff[static_cast<long>(i)] * basis[i];
    return TangentVec(p, tangent_projection(p, v));
}

// Random point of H^n: push a truncated Gaussian tangent at the base point
// (the apex by default) through the exponential map.
inline HPoint random_point(long n, Rng& rng, double truncate_radius = 3.0) {
    return exp_map(gaussian_tangent(HPoint::apex(n), rng, truncate_radius));
}

inline HPoint random_point_near(const HPoint& base, Rng& rng, double truncate_radius = 3.0) {
    return exp_map(gaussian_tangent(base, rng, truncate_radius));
}

}  // namespace hconv
