// Project points onto convex subsets of the hyperbolic plane and verify the
// optimality certificate: y = P_C(p) exactly when y lies in C and the value
// max_z <p,z>_L + <p,y>_L <y,z>_L over members z is nonpositive (first-order
// optimality; a strictly negative value means the inequality holds with
// margin at every probed member).

#include <hconv/convex_sets.hpp>
#include <hconv/geometry.hpp>
#include <hconv/sampling.hpp>

#include <cmath>
#include <iostream>

using namespace hconv;

int main() {
    std::cout.precision(12);

    // A geodesic ball: the projection moves along the geodesic toward the
    // center until it hits the boundary.
    {
        const BallSet ball(HPoint::apex(2), 0.5);
        Vec far(3);
        far << std::sinh(2.0), 0.0, std::cosh(2.0);
        const HPoint p{far};
        const ConeSet c{ball};
        const HPoint y = project(c, p);
        std::cout << "ball: projected to [" << y.coords().transpose() << "]\n"
                  << "  distance from center " << distance(ball.center, y)
                  << " (radius 0.5), certificate value " << verify_projection(c, p, y) << "\n";
    }

    // The convex hull of three points, described by its generators. The
    // solver maximizes the normalized Lorentz pairing over the simplex of
    // generator weights and certifies the result.
    {
        Rng rng(7);
        std::vector<HPoint> gens;
        for (int i = 0; i < 3; ++i) gens.push_back(random_point(2, rng, 1.5));
        const ConeSet c{GeneratorSet(gens)};
        const HPoint p = random_point(2, rng);
        const HPoint y = project(c, p);
        std::cout << "hull: projected to [" << y.coords().transpose() << "]\n"
                  << "  moved " << distance(p, y) << ", certificate value "
                  << verify_projection(c, p, y) << "\n";
    }

    // An intersection of halfspaces through the origin of the ambient space;
    // the projection satisfies the same variational certificate.
    {
        std::vector<Vec> normals(2, Vec(3));
        normals[0] << 1.0, 0.0, 0.0;
        normals[1] << 0.0, 1.0, -0.2;
        const ConeSet c{HalfspaceSet(normals, 3)};
        Rng rng(11);
        const HPoint p = random_point(2, rng);
        const HPoint y = project(c, p);
        std::cout << "halfspaces: projected to [" << y.coords().transpose() << "]\n"
                  << "  moved " << distance(p, y) << ", certificate value "
                  << verify_projection(c, p, y) << "\n";
    }

    // Projections onto convex sets are monotone in the Lorentz pairing:
    // <P(p) - P(q), p - q>_L >= 0. Check it on a thousand random pairs.
    {
        const ConeSet c{BallSet(HPoint::apex(2), 1.0)};
        const MonotonicityReport rep = projection_monotonicity_check(c, 1000, 42);
        std::cout << "monotonicity over " << rep.pairs_checked
                  << " pairs: worst pairing " << rep.worst << " (>= 0 up to roundoff)\n";
    }

    return 0;
}
