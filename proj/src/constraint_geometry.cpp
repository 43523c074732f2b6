#include "hamred/constraint_geometry.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace hamred {

namespace {

std::string describe(const Vec& q) {
    std::ostringstream os;
    os.precision(6);
    os << "(";
    for (Eigen::Index i = 0; i < q.size(); ++i) os << (i ? ", " : "") << q(i);
    os << ")";
    return os.str();
}

}  // namespace

Vec ConstraintSpec::value(const Vec& q) const {
    Vec v = g(q);
    if (v.size() != count) throw DimensionError("constraint function returned wrong count");
    return v;
}

Mat ConstraintSpec::jac(const Vec& q) const {
    if (jacobian) return jacobian(q);
    Tolerances tol;
    return fd_jacobian(g, q, tol, FdScheme::central4);
}

std::vector<Mat> ConstraintSpec::hess(const Vec& q) const {
    if (hessians) return hessians(q);
    const auto n = q.size();
    std::vector<Mat> out(count, Mat::Zero(n, n));
    Vec qp = q;
    for (Eigen::Index e = 0; e < n; ++e) {
        const double h = kFd4Step * (1.0 + std::abs(q(e)));
        qp(e) = q(e) + 2 * h;
        const Mat j2p = jac(qp);
        qp(e) = q(e) + h;
        const Mat j1p = jac(qp);
        qp(e) = q(e) - h;
        const Mat j1m = jac(qp);
        qp(e) = q(e) - 2 * h;
        const Mat j2m = jac(qp);
        qp(e) = q(e);
        const Mat d = (-j2p + 8.0 * j1p - 8.0 * j1m + j2m) / (12.0 * h);
        for (int a = 0; a < count; ++a) out[a].row(e) = d.row(a);
    }
    for (auto& m : out) m = 0.5 * (m + m.transpose());
    return out;
}

double StructureFunctions::max_abs() const {
    double m = 0.0;
    for (double v : data_) m = std::max(m, std::abs(v));
    return m;
}

std::vector<int> select_pivots(const Mat& jac) {
    Eigen::ColPivHouseholderQR<Mat> qr(jac);
    std::vector<int> piv;
    for (Eigen::Index i = 0; i < jac.rows(); ++i) piv.push_back(qr.colsPermutation().indices()(i));
    std::sort(piv.begin(), piv.end());
    return piv;
}

double minor_condition(const Mat& jac, const std::vector<int>& pivots) {
    Mat minor(jac.rows(), static_cast<Eigen::Index>(pivots.size()));
    for (std::size_t c = 0; c < pivots.size(); ++c) minor.col(c) = jac.col(pivots[c]);
    if (minor.size() == 0) return 1.0;
    const auto s = Eigen::JacobiSVD<Mat>(minor).singularValues();
    const double smax = Eigen::JacobiSVD<Mat>(jac).singularValues()(0);
    const double smin = s(s.size() - 1);
    return smin > 0.0 ? smax / smin : INFINITY;
}

TangentBasis fundamental_solutions(const ConstraintSpec& spec, const Vec& q,
                                   const std::vector<int>& pivots) {
    const int n = static_cast<int>(q.size());
    const int r = spec.count;
    TangentBasis b;
    b.jacobian = spec.jac(q);
    if (b.jacobian.rows() != r || b.jacobian.cols() != n)
        throw DimensionError("constraint Jacobian has the wrong shape");
    if (r > 0 && numerical_rank(b.jacobian) < r)
        throw ChartError("constraint Jacobian is rank deficient at q = " + describe(q));
    b.pivot_columns = pivots.empty() ? select_pivots(b.jacobian) : pivots;
    if (static_cast<int>(b.pivot_columns.size()) != r)
        throw DimensionError("pivot set size must equal the constraint count");
    for (int c = 0; c < n; ++c)
        if (std::find(b.pivot_columns.begin(), b.pivot_columns.end(), c) == b.pivot_columns.end())
            b.free_columns.push_back(c);

    const int k = n - r;
    Mat jp(r, r), jf(r, k);
    for (int c = 0; c < r; ++c) jp.col(c) = b.jacobian.col(b.pivot_columns[c]);
    for (int c = 0; c < k; ++c) jf.col(c) = b.jacobian.col(b.free_columns[c]);
    b.chart_condition = r > 0 ? minor_condition(b.jacobian, b.pivot_columns) : 1.0;
    if (!(b.chart_condition < 1e12))
        throw ChartError("pivot minor of the constraint Jacobian is singular at q = " + describe(q));

    b.g_lower = Mat::Zero(k, n);
    const Mat solved = r > 0 ? Mat(-jp.partialPivLu().solve(jf)) : Mat(0, k);
    for (int i = 0; i < k; ++i) {
        b.g_lower(i, b.free_columns[i]) = 1.0;
        for (int c = 0; c < r; ++c) b.g_lower(i, b.pivot_columns[c]) = solved(c, i);
    }
    b.g_full.resize(n, n);
    b.g_full << b.jacobian, b.g_lower;
    b.g_full_inv = b.g_full.partialPivLu().inverse();
    return b;
}

BasisField frozen_basis(const ConstraintSpec& spec, std::vector<int> pivots) {
    return [spec, pivots = std::move(pivots)](const Vec& q) {
        return fundamental_solutions(spec, q, pivots);
    };
}

StructureFunctions structure_functions(const BasisField& basis_at, const Vec& q,
                                       const Tolerances& tol) {
    const int n = static_cast<int>(q.size());
    const TangentBasis b0 = basis_at(q);
    std::vector<Mat> d(n);
    Vec qp = q;
    for (int e = 0; e < n; ++e) {
        const double h = tol.fd_step * (1.0 + std::abs(q(e)));
        qp(e) = q(e) + h;
        const TangentBasis bp = basis_at(qp);
        qp(e) = q(e) - h;
        const TangentBasis bm = basis_at(qp);
        qp(e) = q(e);
        if (bp.pivot_columns != b0.pivot_columns || bm.pivot_columns != b0.pivot_columns)
            throw ChartError("chart changed inside the differencing stencil");
        d[e] = (bp.g_full - bm.g_full) / (2.0 * h);
    }
    StructureFunctions c(n);
    std::vector<Mat> along(n);
    for (int a = 0; a < n; ++a) {
        along[a] = Mat::Zero(n, n);
        for (int e = 0; e < n; ++e) along[a] += b0.g_full(a, e) * d[e];
    }
    for (int a = 0; a < n; ++a)
        for (int bb = 0; bb < n; ++bb)
            for (int dd = 0; dd < n; ++dd) c(a, bb, dd) = along[a](bb, dd) - along[bb](a, dd);
    return c;
}

std::vector<Mat> basis_derivatives(const ConstraintSpec& spec, const TangentBasis& basis,
                                   const Vec& q) {
    const int n = static_cast<int>(q.size());
    const int r = spec.count;
    const int k = n - r;
    const auto hs = spec.hess(q);
    Mat jp(r, r);
    for (int c = 0; c < r; ++c) jp.col(c) = basis.jacobian.col(basis.pivot_columns[c]);
    const auto lu = jp.partialPivLu();
    std::vector<Mat> d(n, Mat::Zero(n, n));
    for (int e = 0; e < n; ++e) {
        for (int a = 0; a < r; ++a) d[e].row(a) = hs[a].row(e);
        if (r == 0) continue;
        // (dJ/dq_e) x_i, then the pivot entries move to keep J x_i = 0.
        Mat rhs(r, k);
        for (int i = 0; i < k; ++i)
            for (int a = 0; a < r; ++a) rhs(a, i) = hs[a].row(e).dot(basis.g_lower.row(i));
        const Mat dx = -lu.solve(rhs);
        for (int i = 0; i < k; ++i)
            for (int c = 0; c < r; ++c) d[e](r + i, basis.pivot_columns[c]) = dx(c, i);
    }
    return d;
}

StructureFunctions structure_functions_exact(const ConstraintSpec& spec, const TangentBasis& basis,
                                             const Vec& q) {
    const int n = static_cast<int>(q.size());
    const auto d = basis_derivatives(spec, basis, q);
    std::vector<Mat> along(n);
    for (int a = 0; a < n; ++a) {
        along[a] = Mat::Zero(n, n);
        for (int e = 0; e < n; ++e)
            if (basis.g_full(a, e) != 0.0) along[a] += basis.g_full(a, e) * d[e];
    }
    StructureFunctions c(n);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int dd = 0; dd < n; ++dd) c(a, b, dd) = along[a](b, dd) - along[b](a, dd);
    return c;
}

Vec project_to_surface(const ConstraintSpec& spec, const Vec& q, const Tolerances& tol) {
    Vec x = q;
    for (int it = 0; it <= tol.newton_max_iter; ++it) {
        const Vec g = spec.value(x);
        if (g.size() == 0 || g.cwiseAbs().maxCoeff() <= tol.newton_tol) return x;
        const Mat j = spec.jac(x);
        const Mat jjt = j * j.transpose();
        x -= j.transpose() * jjt.ldlt().solve(g);
    }
    const double res = spec.value(x).cwiseAbs().maxCoeff();
    throw ConvergenceError("projection onto the constraint surface did not converge", res);
}

}  // namespace hamred
