#pragma once

#include <Eigen/Dense>

#include <functional>

#include "hamred/errors.hpp"

namespace hamred {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

using ScalarFn = std::function<double(const Vec&)>;
using VecFn = std::function<Vec(const Vec&)>;
using MatFn = std::function<Mat(const Vec&)>;

/// Numerical knobs shared by every solver in the library.
struct Tolerances {
    double newton_tol = 1e-12;
    int newton_max_iter = 50;
    double fd_step = 1e-6;
    double quad_tol = 1e-10;  // quadrature error and RK local error target
    double invariant_tol = 1e-8;

    /// Throws ConfigError unless all fields are positive.
    void validate() const;
};

/// Relative step of the fourth-order central stencil.
inline constexpr double kFd4Step = 2e-4;

double max_abs(const Mat& m);

/// max|M - M^T| <= 1e-10 (1 + max|M|).
bool is_symmetric(const Mat& m);

/// Leading principal minors test.
/// Throws DimensionError for non-square and SymmetryError for asymmetric input.
bool is_positive_definite(const Mat& m);

/// Eigenvalue test.
bool positive_definite_by_eigenvalues(const Mat& m);

/// Existence of a Cholesky factor.
bool positive_definite_by_cholesky(const Mat& m);

/// Rank from singular values relative to the largest one.
int numerical_rank(const Mat& m, double rel_tol = 1e-10);

struct GramReduction {
    Mat n;
    double det = 0.0;
};

/// N = Q^T M Q for full column rank Q and positive-definite M.
GramReduction gram_reduction_invertible(const Mat& q, const Mat& m);

struct NewtonResult {
    Vec x;
    int iterations = 0;
    double residual = 0.0;
};

/// Damped Newton iteration; halves the step up to 20 times while the residual grows.
/// Throws ConvergenceError carrying the last residual norm.
NewtonResult newton_solve_detailed(const VecFn& residual, const MatFn& jacobian, const Vec& x0,
                                   const Tolerances& tol);

Vec newton_solve(const VecFn& residual, const MatFn& jacobian, const Vec& x0,
                 const Tolerances& tol);

enum class FdScheme { central, central4 };

/// Central-difference Jacobian. The step for component j is h (1 + |x_j|) with
/// h = tol.fd_step for the second-order stencil and kFd4Step for the fourth-order one.
Mat fd_jacobian(const VecFn& f, const Vec& x, const Tolerances& tol,
                FdScheme scheme = FdScheme::central);

/// Gradient of a scalar function, fourth-order stencil.
Vec fd_gradient(const ScalarFn& f, const Vec& x, double rel_step = kFd4Step);

/// Derivative of f along direction d at x, fourth-order stencil.
Vec fd_directional(const VecFn& f, const Vec& x, const Vec& d, double rel_step = kFd4Step);

/// Globally adaptive 7/15-point Gauss-Kronrod quadrature to absolute error quad_tol.
/// Throws QuadratureError when the subdivision budget runs out.
double adaptive_quadrature(const std::function<double(double)>& g, double a, double b,
                           const Tolerances& tol);

/// LU solve that refuses (nearly) singular systems. Throws with the given error type.
template <class ErrorT>
Mat checked_inverse(const Mat& a, double max_condition, const char* what) {
    if (a.size() == 0) return a;
    Eigen::JacobiSVD<Mat> svd(a);
    const auto& s = svd.singularValues();
    const double smax = s.size() ? s(0) : 0.0;
    const double smin = s.size() ? s(s.size() - 1) : 0.0;
    if (!(smin > 0.0) || smax / smin > max_condition) throw ErrorT(what);
    return a.partialPivLu().inverse();
}

}  // namespace hamred
