#pragma once

#include <cstdint>
#include <utility>

#include "hconv/convex_sets.hpp"
#include "hconv/differential.hpp"
#include "hconv/quadratic.hpp"

// Slow reference implementations used to validate the closed-form modules:
// finite differences through the exponential map, exhaustive grids for small
// projection problems, and dense sampling of the boundary copositivity
// condition. These deliberately share nothing with the code they check
// beyond exp_map and the distance function.

namespace hconv {

struct OracleConfig {
    double fd_step = tol::fd_step;
    int geodesic_subdivisions = 64;
    int grid_resolution = 200;
    std::uint64_t seed = 0;
};

// Central finite differences of t |-> f(exp_p(t e_i)) over a tangent basis,
// assembled back into an ambient tangent vector.
inline TangentVec fd_gradient(const SmoothFunction& f, const HPoint& p,
                              const OracleConfig& cfg = {}) {
    const auto basis = tangent_basis(p);
    const double h = cfg.fd_step;
    Vec g = Vec::Zero(p.ambient());
    for (const Vec& e : basis) {
        const TangentVec dir(p, e);
        const double plus = f(exp_map(dir, h));
        const double minus = f(exp_map(dir, -h));
        g += ((plus - minus) / (2.0 * h)) * e;
    }
    return TangentVec(p, tangent_projection(p, g));
}

// Second difference of f along the geodesic with initial velocity v.
inline double fd_second_derivative(const SmoothFunction& f, const HPoint& p,
                                   const TangentVec& v, const OracleConfig& cfg = {}) {
    const double h = cfg.fd_step;
    return (f(exp_map(v, h)) - 2.0 * f(p) + f(exp_map(v, -h))) / (h * h);
}

// Exhaustive projection for tiny instances: a barycentric grid over the
// weights for up to three generators, or a polar grid for balls in H^2.
inline HPoint grid_project(const ConeSet& c, const HPoint& p, const OracleConfig& cfg = {}) {
    const int R = cfg.grid_resolution;
    double best = std::numeric_limits<double>::infinity();
    std::optional<HPoint> best_point;
    auto consider = [&](const HPoint& y) {
        const double d = distance(p, y);
        if (d < best) {
            best = d;
            best_point = y;
        }
    };
    if (const auto* gs = std::get_if<GeneratorSet>(&c)) {
        const size_t k = gs->generators.size();
        if (k > 3) throw capability_error("grid_project: more than three generators");
        auto point_of = [&](double w0, double w1, double w2) {
            Vec x = w0 * gs->generators[0].coords();
            if (k > 1) x += w1 * gs->generators[1].coords();
            if (k > 2) x += w2 * gs->generators[2].coords();
            x /= std::sqrt(-lorentz_inner(x, x));
            return HPoint(std::move(x), true);
        };
        if (k == 1) return gs->generators[0];
        if (k == 2) {
            for (int i = 0; i <= R; ++i) {
                const double w = static_cast<double>(i) / R;
                consider(point_of(1.0 - w, w, 0.0));
            }
        } else {
            for (int i = 0; i <= R; ++i)
                for (int j = 0; j <= R - i; ++j) {
                    const double w1 = static_cast<double>(i) / R;
                    const double w2 = static_cast<double>(j) / R;
                    consider(point_of(1.0 - w1 - w2, w1, w2));
                }
        }
        return *best_point;
    }
    if (const auto* b = std::get_if<BallSet>(&c)) {
        if (b->center.n() != 2)
            throw capability_error("grid_project: ball grids are implemented for H^2 only");
        const auto basis = tangent_basis(b->center);
        for (int i = 0; i < R; ++i) {
            const double theta = 2.0 * M_PI * static_cast<double>(i) / R;
            const Vec dir = std::cos(theta) * basis[0] + std::sin(theta) * basis[1];
            const TangentVec tv(b->center, dir);
            for (int j = 0; j <= R; ++j)
                consider(exp_map(tv, b->radius * static_cast<double>(j) / R));
        }
        return *best_point;
    }
    throw capability_error("grid_project: unsupported set variant");
}

struct BoundaryScan {
    double min_value;
    Vec argmin;  // (u, 1) with |u| = 1
};

// Dense sampling of x^T A x over the normalized boundary directions
// x = (u, 1), |u| = 1, followed by a derivative-free pattern refinement of
// the best sample (kept separate from the certifier's own descent).
inline BoundaryScan boundary_scan(const SymQuadratic& q, long samples, std::uint64_t seed) {
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
    // Pattern search on the sphere with a fixed shrinking schedule.
    double step = 0.1;
    while (step > 1e-12) {
        bool improved = false;
        for (long i = 0; i < n && !improved; ++i) {
            for (double sgn : {1.0, -1.0}) {
                Vec cand = (best_u + sgn * step * Vec::Unit(n, i)).normalized();
                const double v = value(cand);
                if (v < best) {
                    best = v;
                    best_u = cand;
                    improved = true;
                    break;
                }
            }
        }
        if (!improved) step *= 0.5;
    }
    Vec x(n + 1);
    x.head(n) = best_u;
    x[n] = 1.0;
    return {best, std::move(x)};
}

}  // namespace hconv
