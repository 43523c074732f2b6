#include "hamred/lie_series.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hamred {

namespace {

double level_step(int order) {
    return std::pow(std::numeric_limits<double>::epsilon(), 1.0 / (order + 2));
}

/// (h.d)^n g at z by nested central differences along h.
template <typename Value, typename Fn>
Value nested_derivative(const VectorField& field, const Fn& g, const Vec& z, int n, double tau) {
    if (n == 0) return g(z);
    const Vec h = field(z);
    const double hmax = h.cwiseAbs().maxCoeff();
    if (hmax == 0.0) return Value(g(z) * 0.0);
    const double e = tau * (1.0 + z.cwiseAbs().maxCoeff()) / hmax;
    const Value up = nested_derivative<Value>(field, g, Vec(z + e * h), n - 1, tau);
    const Value down = nested_derivative<Value>(field, g, Vec(z - e * h), n - 1, tau);
    return Value((up - down) / (2.0 * e));
}

double vec_norm(const Vec& v) { return v.cwiseAbs().maxCoeff(); }

}  // namespace

Vec LieSeriesSolution::evaluate(double t) const {
    Vec z = terms.back();
    for (int n = static_cast<int>(terms.size()) - 2; n >= 0; --n) z = terms[n] + t * z;
    return z;
}

Vec LieSeriesSolution::derivative(double t) const {
    Vec d = Vec::Zero(expansion_point.size());
    for (int n = static_cast<int>(terms.size()) - 1; n >= 1; --n) d = n * terms[n] + t * d;
    return d;
}

std::vector<double> lie_apply(const VectorField& field, const ScalarFn& f, const Vec& z, int order) {
    if (order < 0) throw DimensionError("series order must be non-negative");
    std::vector<double> out;
    double factorial = 1.0;
    for (int n = 0; n <= order; ++n) {
        if (n > 0) factorial *= n;
        out.push_back(nested_derivative<double>(field, f, z, n, level_step(n)) / factorial);
    }
    return out;
}

LieSeriesSolution lie_coefficients(const VectorField& field, const Vec& z, int order) {
    if (order < 1) throw DimensionError("series order must be at least 1");
    LieSeriesSolution sol;
    sol.order = order;
    sol.expansion_point = z;
    if (field.taylor) {
        sol.terms = field.taylor(z, order);
    } else {
        const auto id = [](const Vec& x) { return x; };
        double factorial = 1.0;
        sol.terms.push_back(z);
        sol.terms.push_back(field(z));
        for (int n = 2; n <= order; ++n) {
            factorial *= n;
            sol.terms.push_back(nested_derivative<Vec>(field, id, z, n, level_step(n)) / factorial);
        }
    }
    const double last = vec_norm(sol.terms[order]);
    sol.radius_estimate = std::numeric_limits<double>::infinity();
    if (last > 0.0) {
        sol.radius_estimate = vec_norm(sol.terms[order - 1]) / last;
        if (order >= 2)
            sol.radius_estimate =
                std::max(sol.radius_estimate, std::sqrt(vec_norm(sol.terms[order - 2]) / last));
    }
    return sol;
}

std::vector<double> lie_apply_polynomial(const std::vector<double>& h, const std::vector<double>& f,
                                         double z, int order) {
    const auto eval = [z](const std::vector<double>& p) {
        double v = 0.0;
        for (auto it = p.rbegin(); it != p.rend(); ++it) v = v * z + *it;
        return v;
    };
    std::vector<double> g = f;
    std::vector<double> out;
    double factorial = 1.0;
    for (int n = 0; n <= order; ++n) {
        if (n > 0) factorial *= n;
        out.push_back(eval(g) / factorial);
        // g <- h g'
        std::vector<double> dg;
        for (std::size_t i = 1; i < g.size(); ++i) dg.push_back(i * g[i]);
        std::vector<double> next(dg.empty() || h.empty() ? 0 : dg.size() + h.size() - 1, 0.0);
        for (std::size_t i = 0; i < h.size(); ++i)
            for (std::size_t j = 0; j < dg.size(); ++j) next[i + j] += h[i] * dg[j];
        g = std::move(next);
    }
    return out;
}

TaylorRecurrence linear_taylor(const Mat& a) {
    return [a](const Vec& z, int order) {
        std::vector<Vec> c{z};
        for (int n = 0; n < order; ++n) c.push_back(a * c.back() / (n + 1));
        return c;
    };
}

namespace {

int common_size(const Jet& a, const Jet& b) { return std::min(a.size(), b.size()); }

}  // namespace

Jet operator+(const Jet& a, const Jet& b) {
    Jet r{std::vector<double>(common_size(a, b))};
    for (int i = 0; i < r.size(); ++i) r.c[i] = a.c[i] + b.c[i];
    return r;
}

Jet operator-(const Jet& a, const Jet& b) {
    Jet r{std::vector<double>(common_size(a, b))};
    for (int i = 0; i < r.size(); ++i) r.c[i] = a.c[i] - b.c[i];
    return r;
}

Jet operator-(const Jet& a) { return -1.0 * a; }

Jet operator*(const Jet& a, const Jet& b) {
    Jet r{std::vector<double>(common_size(a, b), 0.0)};
    for (int n = 0; n < r.size(); ++n)
        for (int i = 0; i <= n; ++i) r.c[n] += a.c[i] * b.c[n - i];
    return r;
}

Jet operator*(double s, const Jet& a) {
    Jet r = a;
    for (double& v : r.c) v *= s;
    return r;
}

Jet operator*(const Jet& a, double s) { return s * a; }

Jet operator/(const Jet& a, const Jet& b) {
    const int n = common_size(a, b);
    if (n > 0 && b.c[0] == 0.0) throw RadiusError("series division by a vanishing constant term");
    Jet q{std::vector<double>(n, 0.0)};
    for (int k = 0; k < n; ++k) {
        double s = a.c[k];
        for (int i = 1; i <= k; ++i) s -= b.c[i] * q.c[k - i];
        q.c[k] = s / b.c[0];
    }
    return q;
}

Jet operator/(const Jet& a, double s) { return (1.0 / s) * a; }

TaylorRecurrence jet_taylor(JetRates rates) {
    return [rates = std::move(rates)](const Vec& z, int order) {
        const auto dim = static_cast<std::size_t>(z.size());
        std::vector<Vec> c{z};
        std::vector<Jet> jets(dim);
        for (int n = 0; n < order; ++n) {
            for (std::size_t i = 0; i < dim; ++i) {
                jets[i].c.resize(static_cast<std::size_t>(n + 1));
                jets[i].c[static_cast<std::size_t>(n)] = c[static_cast<std::size_t>(n)](static_cast<Eigen::Index>(i));
            }
            const std::vector<Jet> f = rates(jets);
            if (f.size() != dim) throw DimensionError("jet rates have the wrong dimension");
            Vec next(z.size());
            for (std::size_t i = 0; i < dim; ++i) {
                if (f[i].size() <= n) throw DimensionError("jet rates lost series terms");
                next(static_cast<Eigen::Index>(i)) = f[i].c[static_cast<std::size_t>(n)] / (n + 1);
            }
            c.push_back(next);
        }
        return c;
    };
}

Trajectory lie_solve(const VectorField& field, const Vec& z0, TimeSpan span, int order, double step,
                     double sample_dt) {
    if (order < 2) throw DimensionError("lie_solve needs order >= 2");
    if (!(step > 0.0)) throw DimensionError("lie_solve needs a positive step");
    if (!(span.t1 > span.t0)) throw DimensionError("lie_solve needs t1 > t0");
    Trajectory tr;
    const auto record = [&](double t, const Vec& z, const Vec& zdot, double radius) {
        Sample s{t, z, {}};
        s.diagnostics["defect"] = vec_norm(zdot - field(z));
        s.diagnostics["radius_estimate"] = radius;
        tr.samples.push_back(std::move(s));
    };
    std::vector<double> grid;
    if (sample_dt > 0.0) grid = sample_grid(span, sample_dt);
    std::size_t next = 1;
    record(span.t0, z0, field(z0), std::numeric_limits<double>::infinity());
    double t = span.t0;
    Vec z = z0;
    const double span_len = span.t1 - span.t0;
    while (t < span.t1 && span.t1 - t > 1e-14 * span_len) {
        const double h = std::min(step, span.t1 - t);
        const LieSeriesSolution sol = lie_coefficients(field, z, order);
        if (t == span.t0) tr.samples.front().diagnostics["radius_estimate"] = sol.radius_estimate;
        const double cn = vec_norm(sol.terms[order]);
        const double floor = 1e-15 * (1.0 + vec_norm(sol.terms[0]));
        if (cn * std::pow(h, order) > floor && h > 0.5 * sol.radius_estimate)
            throw RadiusError("series diverges at step " + std::to_string(h) + " from t = " +
                              std::to_string(t));
        const double t_end = (span.t1 - (t + h) <= 1e-14 * span_len) ? span.t1 : t + h;
        if (sample_dt > 0.0) {
            while (next < grid.size() && grid[next] <= t_end + 1e-14 * span_len) {
                const double s = grid[next] - t;
                record(grid[next], sol.evaluate(s), sol.derivative(s), sol.radius_estimate);
                ++next;
            }
            z = sol.evaluate(t_end - t);
        } else {
            z = sol.evaluate(t_end - t);
            record(t_end, z, sol.derivative(t_end - t), sol.radius_estimate);
        }
        t = t_end;
    }
    if (sample_dt > 0.0 && tr.samples.back().t != span.t1) tr.samples.back().z = z;
    return tr;
}

Trajectory lie_solve_hamiltonian(const PoissonStructure& ps, const ScalarFunction& h, const Vec& z0,
                                 TimeSpan span, int order, double step,
                                 const TaylorRecurrence& taylor, double sample_dt) {
    VectorField field = hamiltonian_field(ps, h);
    field.taylor = taylor;
    Trajectory tr = lie_solve(field, z0, span, order, step, sample_dt);
    tr.labels = ps.labels;
    return tr;
}

}  // namespace hamred
