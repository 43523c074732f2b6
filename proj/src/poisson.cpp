#include "hamred/poisson.hpp"

#include <cmath>

namespace hamred {

ScalarFunction coordinate_function(int index, int dim) {
    ScalarFunction f;
    f.value = [index](const Vec& z) { return z(index); };
    f.gradient = [index, dim](const Vec&) {
        Vec g = Vec::Zero(dim);
        g(index) = 1.0;
        return g;
    };
    return f;
}

std::string to_string(StructureKind kind) {
    switch (kind) {
        case StructureKind::canonical: return "canonical";
        case StructureKind::intermediate: return "intermediate";
        case StructureKind::dirac: return "dirac";
        case StructureKind::chetaev: return "chetaev";
        case StructureKind::custom: return "custom";
    }
    return "custom";
}

Mat PoissonStructure::at(const Vec& z) const {
    if (z.size() != dim) throw DimensionError("point dimension does not match the structure");
    Mat w = tensor(z);
    if (w.rows() != dim || w.cols() != dim) throw DimensionError("Poisson tensor has the wrong shape");
    if (max_abs(w + w.transpose()) > 1e-12 * (1.0 + max_abs(w)))
        throw SymmetryError("Poisson tensor is not antisymmetric");
    return w;
}

PoissonStructure canonical_structure(int n, std::vector<std::string> labels) {
    PoissonStructure ps;
    ps.dim = 2 * n;
    if (labels.empty()) {
        for (int i = 0; i < n; ++i) labels.push_back("q" + std::to_string(i + 1));
        for (int i = 0; i < n; ++i) labels.push_back("p" + std::to_string(i + 1));
    }
    ps.labels = std::move(labels);
    ps.kind = StructureKind::canonical;
    Mat w = Mat::Zero(2 * n, 2 * n);
    w.topRightCorner(n, n) = Mat::Identity(n, n);
    w.bottomLeftCorner(n, n) = -Mat::Identity(n, n);
    ps.tensor = [w](const Vec&) { return w; };
    return ps;
}

double bracket(const PoissonStructure& ps, const ScalarFunction& f, const ScalarFunction& g,
               const Vec& z) {
    const Vec gf = f.grad(z);
    const Vec gg = g.grad(z);
    if (gf.size() != ps.dim || gg.size() != ps.dim)
        throw DimensionError("gradient dimension does not match the structure");
    return gf.dot(ps.at(z) * gg);
}

Mat intermediate_brackets(const ConstraintSpec& spec, const TangentBasis& basis, const Vec& q,
                          const Vec& pi) {
    const int n = static_cast<int>(q.size());
    if (pi.size() != n) throw DimensionError("intermediate brackets need all n momenta");
    Mat w = Mat::Zero(2 * n, 2 * n);
    w.topRightCorner(n, n) = basis.g_full.transpose();
    w.bottomLeftCorner(n, n) = -basis.g_full;
    const StructureFunctions c = structure_functions_exact(spec, basis, q);
    const Vec p = basis.g_full_inv * pi;
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b) {
            double s = 0.0;
            for (int d = 0; d < n; ++d) s -= c(a, b, d) * p(d);
            w(n + a, n + b) = s;
            w(n + b, n + a) = -s;
        }
    return w;
}

PoissonStructure intermediate_structure(const ConstraintSpec& spec, int n, std::vector<int> pivots) {
    PoissonStructure ps;
    ps.dim = 2 * n;
    for (int i = 0; i < n; ++i) ps.labels.push_back("q" + std::to_string(i + 1));
    for (int i = 0; i < n; ++i) ps.labels.push_back("pi" + std::to_string(i + 1));
    ps.kind = StructureKind::intermediate;
    ps.tensor = [spec, pivots](const Vec& z) {
        const auto m = z.size() / 2;
        const Vec q = z.head(m);
        const TangentBasis b = fundamental_solutions(spec, q, pivots);
        return intermediate_brackets(spec, b, q, z.tail(m));
    };
    return ps;
}

Vec ConstraintSet::values(const Vec& z) const {
    Vec v(static_cast<Eigen::Index>(functions.size()));
    for (std::size_t i = 0; i < functions.size(); ++i) v(i) = functions[i](z);
    return v;
}

Mat ConstraintSet::gradients(const Vec& z) const {
    Mat d(static_cast<Eigen::Index>(functions.size()), z.size());
    for (std::size_t i = 0; i < functions.size(); ++i) d.row(i) = functions[i].grad(z).transpose();
    return d;
}

Mat constraint_brackets(const PoissonStructure& ps, const ConstraintSet& cs, const Vec& z) {
    const Mat d = cs.gradients(z);
    return d * ps.at(z) * d.transpose();
}

Mat dirac_tensor(const PoissonStructure& ps, const ConstraintSet& cs, const Vec& z) {
    const Mat w = ps.at(z);
    if (cs.functions.empty()) return w;
    const Mat d = cs.gradients(z);
    const Mat delta = d * w * d.transpose();
    const Mat dinv =
        checked_inverse<SecondClassError>(delta, 1e10, "constraint bracket matrix is singular");
    const Mat x = w * d.transpose();
    Mat out = w + x * dinv * x.transpose();
    return 0.5 * (out - out.transpose());
}

double dirac_bracket(const PoissonStructure& ps, const ConstraintSet& cs, const ScalarFunction& f,
                     const ScalarFunction& g, const Vec& z) {
    return f.grad(z).dot(dirac_tensor(ps, cs, z) * g.grad(z));
}

PoissonStructure dirac_structure(const PoissonStructure& ps, const ConstraintSet& cs) {
    PoissonStructure out;
    out.dim = ps.dim;
    out.labels = ps.labels;
    out.kind = StructureKind::dirac;
    out.tensor = [ps, cs](const Vec& z) { return dirac_tensor(ps, cs, z); };
    return out;
}

std::vector<Mat> tensor_derivatives(const PoissonStructure& ps, const Vec& z) {
    std::vector<Mat> d(ps.dim);
    Vec zp = z;
    for (int l = 0; l < ps.dim; ++l) {
        const double h = kFd4Step * (1.0 + std::abs(z(l)));
        zp(l) = z(l) + 2 * h;
        const Mat w2p = ps.tensor(zp);
        zp(l) = z(l) + h;
        const Mat w1p = ps.tensor(zp);
        zp(l) = z(l) - h;
        const Mat w1m = ps.tensor(zp);
        zp(l) = z(l) - 2 * h;
        const Mat w2m = ps.tensor(zp);
        zp(l) = z(l);
        d[l] = (-w2p + 8.0 * w1p - 8.0 * w1m + w2m) / (12.0 * h);
    }
    return d;
}

double jacobi_residual(const PoissonStructure& ps, const Vec& z) {
    const int m = ps.dim;
    const Mat w = ps.tensor(z);
    const auto d = tensor_derivatives(ps, z);
    // a[i](j, k) = sum_l w(i, l) d_l w(j, k)
    std::vector<Mat> a(m, Mat::Zero(m, m));
    for (int i = 0; i < m; ++i)
        for (int l = 0; l < m; ++l)
            if (w(i, l) != 0.0) a[i] += w(i, l) * d[l];
    double worst = 0.0;
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            for (int k = 0; k < m; ++k) {
                const double r = a[i](j, k) + a[j](k, i) + a[k](i, j);
                worst = std::max(worst, std::abs(r));
            }
    return worst;
}

VectorField hamiltonian_field(const PoissonStructure& ps, const ScalarFunction& h) {
    VectorField f;
    f.dim = ps.dim;
    f.label = "hamiltonian_" + to_string(ps.kind);
    f.eval = [ps, h](const Vec& z) -> Vec { return ps.at(z) * h.grad(z); };
    return f;
}

double casimir_drift(const PoissonStructure& ps, const ScalarFunction& casimir,
                     const ScalarFunction& h, const Vec& z0, TimeSpan span, const Tolerances& tol) {
    const Trajectory tr = rk_integrate(hamiltonian_field(ps, h), z0, span, tol);
    const double c0 = casimir(z0);
    double worst = 0.0;
    for (const auto& s : tr.samples) worst = std::max(worst, std::abs(casimir(s.z) - c0));
    return worst;
}

}  // namespace hamred
