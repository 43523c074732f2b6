#include "hamred/numeric_core.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <string>
#include <vector>

namespace hamred {

void Tolerances::validate() const {
    if (!(newton_tol > 0) || !(fd_step > 0) || !(quad_tol > 0) || !(invariant_tol > 0))
        throw ConfigError("tolerances must be positive");
    if (newton_max_iter < 1) throw ConfigError("newton_max_iter must be at least 1");
}

double max_abs(const Mat& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

bool is_symmetric(const Mat& m) {
    if (m.rows() != m.cols()) return false;
    return max_abs(m - m.transpose()) <= 1e-10 * (1.0 + max_abs(m));
}

namespace {

void require_symmetric_square(const Mat& m) {
    if (m.rows() == 0 || m.rows() != m.cols())
        throw DimensionError("positive-definiteness test needs a non-empty square matrix");
    if (!is_symmetric(m)) throw SymmetryError("matrix is not symmetric");
}

}  // namespace

bool is_positive_definite(const Mat& m) {
    require_symmetric_square(m);
    for (Eigen::Index k = 1; k <= m.rows(); ++k) {
        if (!(m.topLeftCorner(k, k).partialPivLu().determinant() > 0.0)) return false;
    }
    return true;
}

bool positive_definite_by_eigenvalues(const Mat& m) {
    require_symmetric_square(m);
    Eigen::SelfAdjointEigenSolver<Mat> es(m, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff() > 0.0;
}

bool positive_definite_by_cholesky(const Mat& m) {
    require_symmetric_square(m);
    Eigen::LLT<Mat> llt(m);
    return llt.info() == Eigen::Success;
}

int numerical_rank(const Mat& m, double rel_tol) {
    if (m.size() == 0) return 0;
    Eigen::JacobiSVD<Mat> svd(m);
    const auto& s = svd.singularValues();
    if (s(0) == 0.0) return 0;
    int r = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i)
        if (s(i) > rel_tol * s(0)) ++r;
    return r;
}

GramReduction gram_reduction_invertible(const Mat& q, const Mat& m) {
    if (m.rows() != q.rows()) throw DimensionError("Q and M have incompatible shapes");
    if (q.cols() > q.rows()) throw RankError("Q has more columns than rows");
    if (numerical_rank(q) < q.cols()) throw RankError("Q does not have full column rank");
    if (!is_positive_definite(m)) throw DefinitenessError("M is not positive-definite");
    GramReduction out;
    out.n = q.transpose() * m * q;
    out.n = 0.5 * (out.n + out.n.transpose());
    out.det = out.n.partialPivLu().determinant();
    return out;
}

NewtonResult newton_solve_detailed(const VecFn& residual, const MatFn& jacobian, const Vec& x0,
                                   const Tolerances& tol) {
    NewtonResult out;
    out.x = x0;
    Vec r = residual(out.x);
    out.residual = r.size() ? r.cwiseAbs().maxCoeff() : 0.0;
    while (out.residual > tol.newton_tol) {
        if (out.iterations >= tol.newton_max_iter || !std::isfinite(out.residual))
            throw ConvergenceError("Newton iteration did not converge (residual " +
                                       std::to_string(out.residual) + ")",
                                   out.residual);
        const Mat j = jacobian(out.x);
        if (j.rows() != r.size() || j.cols() != out.x.size())
            throw DimensionError("Jacobian shape does not match residual and unknowns");
        Vec step = j.colPivHouseholderQr().solve(-r);
        double lambda = 1.0;
        Vec trial = out.x + step;
        Vec rt = residual(trial);
        double nt = rt.cwiseAbs().maxCoeff();
        for (int halvings = 0; !(nt < out.residual) && halvings < 20; ++halvings) {
            lambda *= 0.5;
            trial = out.x + lambda * step;
            rt = residual(trial);
            nt = rt.cwiseAbs().maxCoeff();
        }
        ++out.iterations;
        if (!(nt < out.residual) && nt > tol.newton_tol)
            throw ConvergenceError("Newton line search stalled (residual " +
                                       std::to_string(out.residual) + ")",
                                   out.residual);
        out.x = trial;
        r = rt;
        out.residual = nt;
    }
    return out;
}

Vec newton_solve(const VecFn& residual, const MatFn& jacobian, const Vec& x0,
                 const Tolerances& tol) {
    return newton_solve_detailed(residual, jacobian, x0, tol).x;
}

Mat fd_jacobian(const VecFn& f, const Vec& x, const Tolerances& tol, FdScheme scheme) {
    const Vec f0 = f(x);
    Mat jac(f0.size(), x.size());
    Vec xp = x;
    for (Eigen::Index j = 0; j < x.size(); ++j) {
        if (scheme == FdScheme::central) {
            const double h = tol.fd_step * (1.0 + std::abs(x(j)));
            xp(j) = x(j) + h;
            const Vec fp = f(xp);
            xp(j) = x(j) - h;
            const Vec fm = f(xp);
            jac.col(j) = (fp - fm) / (2.0 * h);
        } else {
            const double h = kFd4Step * (1.0 + std::abs(x(j)));
            xp(j) = x(j) + 2 * h;
            const Vec f2p = f(xp);
            xp(j) = x(j) + h;
            const Vec f1p = f(xp);
            xp(j) = x(j) - h;
            const Vec f1m = f(xp);
            xp(j) = x(j) - 2 * h;
            const Vec f2m = f(xp);
            jac.col(j) = (-f2p + 8.0 * f1p - 8.0 * f1m + f2m) / (12.0 * h);
        }
        xp(j) = x(j);
    }
    return jac;
}

Vec fd_gradient(const ScalarFn& f, const Vec& x, double rel_step) {
    Vec g(x.size());
    Vec xp = x;
    for (Eigen::Index j = 0; j < x.size(); ++j) {
        const double h = rel_step * (1.0 + std::abs(x(j)));
        xp(j) = x(j) + 2 * h;
        const double f2p = f(xp);
        xp(j) = x(j) + h;
        const double f1p = f(xp);
        xp(j) = x(j) - h;
        const double f1m = f(xp);
        xp(j) = x(j) - 2 * h;
        const double f2m = f(xp);
        xp(j) = x(j);
        g(j) = (-f2p + 8.0 * f1p - 8.0 * f1m + f2m) / (12.0 * h);
    }
    return g;
}

Vec fd_directional(const VecFn& f, const Vec& x, const Vec& d, double rel_step) {
    const double dn = d.cwiseAbs().maxCoeff();
    if (dn == 0.0) return Vec::Zero(f(x).size());
    const double h = rel_step * (1.0 + x.cwiseAbs().maxCoeff()) / dn;
    const Vec f2p = f(x + 2 * h * d);
    const Vec f1p = f(x + h * d);
    const Vec f1m = f(x - h * d);
    const Vec f2m = f(x - 2 * h * d);
    return (-f2p + 8.0 * f1p - 8.0 * f1m + f2m) / (12.0 * h);
}

namespace {

// 7-point Gauss / 15-point Kronrod nodes and weights on [-1, 1].
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
    double a, b, value, error;
    bool operator<(const Segment& o) const { return error < o.error; }
};

Segment kronrod15(const std::function<double(double)>& g, double a, double b) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double fc = g(center);
    double resk = fc * kWgk[7];
    double resg = fc * kWg[3];
    for (int j = 0; j < 7; ++j) {
        const double dx = half * kXgk[j];
        const double fsum = g(center - dx) + g(center + dx);
        resk += kWgk[j] * fsum;
        if (j % 2 == 1) resg += kWg[j / 2] * fsum;
    }
    const double value = resk * half;
    const double error = std::abs((resk - resg) * half);
    if (!std::isfinite(value)) throw QuadratureError("integrand is not finite on the interval");
    return {a, b, value, error};
}

}  // namespace

double adaptive_quadrature(const std::function<double(double)>& g, double a, double b,
                           const Tolerances& tol) {
    if (a == b) return 0.0;
    if (b < a) return -adaptive_quadrature(g, b, a, tol);
    constexpr int kMaxSegments = 4000;
    std::priority_queue<Segment> heap;
    Segment first = kronrod15(g, a, b);
    double total = first.value;
    double err = first.error;
    heap.push(first);
    int segments = 1;
    while (err > tol.quad_tol) {
        if (segments >= kMaxSegments)
            throw QuadratureError("adaptive quadrature hit its refinement limit (error " +
                                  std::to_string(err) + ")");
        Segment worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b))
            throw QuadratureError("adaptive quadrature cannot split interval further");
        Segment left = kronrod15(g, worst.a, mid);
        Segment right = kronrod15(g, mid, worst.b);
        total += left.value + right.value - worst.value;
        err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        ++segments;
        // Re-sum occasionally so cancellation in the running totals cannot stall refinement.
        if (segments % 64 == 0) {
            auto copy = heap;
            total = 0.0;
            err = 0.0;
            while (!copy.empty()) {
                total += copy.top().value;
                err += copy.top().error;
                copy.pop();
            }
        }
    }
    return total;
}

}  // namespace hamred
