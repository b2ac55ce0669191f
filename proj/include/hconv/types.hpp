#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>
#include <utility>

// Core vocabulary for the hyperboloid (Lorentz) model of hyperbolic space.
//
// Points live on H^n = { p in R^{n+1} : <p,p>_L = -1, p_{n+1} > 0 }, where
// <x,y>_L = x_1 y_1 + ... + x_n y_n - x_{n+1} y_{n+1} is the Lorentz inner
// product. The time coordinate is the LAST component throughout, and
// J = diag(1, ..., 1, -1) is the matrix of the bilinear form.

namespace hconv {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Base class for everything this library throws.
struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Precondition violations: dimension mismatches, points off the manifold,
// vectors outside the stated domain of an operation.
struct contract_error : error {
    using error::error;
};

// Input is structurally fine but outside the mathematical domain
// (reflection through a non-spacelike vector, psi left of its pole, ...).
struct domain_error : error {
    using error::error;
};

// Coincident endpoints where a direction is required.
struct degenerate_input_error : error {
    using error::error;
};

// Differentiation requested at a point where the function is not smooth.
struct nondifferentiable_error : error {
    using error::error;
};

// A construction whose defining denominator vanishes (antipodal alignment).
struct singular_configuration_error : error {
    using error::error;
};

// The operation is not implemented for this variant / missing callback.
struct capability_error : error {
    using error::error;
};

// A constraint set with no feasible point, as far as sampling can tell.
struct empty_set_error : error {
    using error::error;
};

// An iterative solver finished without meeting its certificate; carries the
// best iterate found and the residual it achieved.
struct numerical_failure : error {
    Vec best_point;
    double residual;
    numerical_failure(const std::string& what, Vec best, double res)
        : error(what), best_point(std::move(best)), residual(res) {}
};

namespace tol {
// Manifold membership |<p,p>_L + 1| and positivity of the last coordinate.
inline constexpr double on_manifold = 1e-9;
// Tangency |<p,v>_L| for tangent vectors.
inline constexpr double tangent = 1e-9;
// max-norm of Q^T J Q - J for Lorentz transformations.
inline constexpr double group = 1e-9;
// Eigenvalue slack for positive semidefiniteness checks.
inline constexpr double psd = 1e-9;
// |psi*| band around zero treated as numerically undecidable.
inline constexpr double psi_band = 1e-7;
// Distances below this are treated as a coincident pair where limits apply.
inline constexpr double coincident = 1e-7;
// Central finite difference step used by the derivative oracles.
inline constexpr double fd_step = 1e-5;
}  // namespace tol

inline double lorentz_inner(const Vec& x, const Vec& y) {
    if (x.size() != y.size())
        throw contract_error("lorentz_inner: dimension mismatch (" +
                             std::to_string(x.size()) + " vs " +
                             std::to_string(y.size()) + ")");
    if (x.size() < 2)
        throw contract_error("lorentz_inner: ambient dimension must be >= 2");
    const long m = x.size() - 1;
    return x.head(m).dot(y.head(m)) - x[m] * y[m];
}

// J x without materializing J: flip the sign of the time component.
inline Vec apply_j(const Vec& x) {
    Vec y = x;
    y[y.size() - 1] = -y[y.size() - 1];
    return y;
}

inline Mat j_matrix(long ambient) {
    Mat J = Mat::Identity(ambient, ambient);
    J(ambient - 1, ambient - 1) = -1.0;
    return J;
}

inline bool is_on_hyperboloid(const Vec& x, double tolerance = tol::on_manifold) {
    if (x.size() < 2) return false;
    return std::abs(lorentz_inner(x, x) + 1.0) <= tolerance && x[x.size() - 1] > 0.0;
}

// A validated point of H^n. Construction rejects vectors off the sheet unless
// renormalization is requested, in which case the time coordinate is recomputed
// from the spatial part as sqrt(|x_bar|^2 + 1).
class HPoint {
  public:
    explicit HPoint(Vec coords, bool renormalize = false,
                    double tolerance = tol::on_manifold)
        : c_(std::move(coords)) {
        if (c_.size() < 2)
            throw contract_error("HPoint: ambient dimension must be >= 2");
        if (renormalize) {
            const long m = c_.size() - 1;
            c_[m] = std::sqrt(c_.head(m).squaredNorm() + 1.0);
        } else if (!is_on_hyperboloid(c_, tolerance)) {
            throw contract_error(
                "HPoint: coordinates do not satisfy <p,p>_L = -1 with positive "
                "time component");
        }
    }

    static HPoint apex(long n) {
        Vec c = Vec::Zero(n + 1);
        c[n] = 1.0;
        return HPoint(std::move(c));
    }

    const Vec& coords() const { return c_; }
    long n() const { return c_.size() - 1; }        // manifold dimension
    long ambient() const { return c_.size(); }      // n + 1

  private:
    Vec c_;
};

// A tangent vector at a specific base point: <p,v>_L = 0.
class TangentVec {
  public:
    TangentVec(HPoint base, Vec v, double tolerance = tol::tangent)
        : base_(std::move(base)), v_(std::move(v)) {
        if (v_.size() != base_.ambient())
            throw contract_error("TangentVec: dimension mismatch with base point");
        const double ip = lorentz_inner(base_.coords(), v_);
        // Tangency drifts with the size of v, so allow a relative margin.
        if (std::abs(ip) > tolerance * std::max(1.0, v_.norm()))
            throw contract_error("TangentVec: vector is not tangent at the base point");
    }

    const HPoint& base() const { return base_; }
    const Vec& vec() const { return v_; }
    // Tangent vectors are spacelike, so this is a genuine norm.
    double norm() const { return std::sqrt(std::max(0.0, lorentz_inner(v_, v_))); }

  private:
    HPoint base_;
    Vec v_;
};

// A validated element of the Lorentz group O(n,1) restricted by Q^T J Q = J.
class LorentzMap {
  public:
    explicit LorentzMap(Mat q, double tolerance = tol::group) : q_(std::move(q)) {
        if (q_.rows() != q_.cols() || q_.rows() < 2)
            throw contract_error("LorentzMap: matrix must be square of size >= 2");
        const Mat J = j_matrix(q_.rows());
        const double defect = (q_.transpose() * J * q_ - J).cwiseAbs().maxCoeff();
        if (defect > tolerance)
            throw contract_error("LorentzMap: Q^T J Q deviates from J by " +
                                 std::to_string(defect));
    }

    const Mat& matrix() const { return q_; }
    long ambient() const { return q_.rows(); }

  private:
    Mat q_;
};

}  // namespace hconv
