#include <algorithm>
#include <cmath>
#include <functional>
#include <set>

#include "hamred/trajectory.hpp"

namespace hamred {

std::vector<std::string> Trajectory::diagnostic_names() const {
    std::set<std::string> names;
    for (const auto& s : samples)
        for (const auto& [k, v] : s.diagnostics) names.insert(k);
    return {names.begin(), names.end()};
}

double Trajectory::max_diagnostic(const std::string& name) const {
    double m = 0.0;
    for (const auto& s : samples) {
        auto it = s.diagnostics.find(name);
        if (it != s.diagnostics.end()) m = std::max(m, std::abs(it->second));
    }
    return m;
}

std::vector<double> sample_grid(TimeSpan span, double dt) {
    std::vector<double> grid{span.t0};
    if (dt > 0.0) {
        const double len = span.t1 - span.t0;
        const auto n = static_cast<long>(std::floor(len / dt + 1e-9));
        for (long i = 1; i <= n; ++i) {
            const double t = span.t0 + static_cast<double>(i) * dt;
            if (t < span.t1 - 1e-12 * (1.0 + std::abs(span.t1))) grid.push_back(t);
        }
    }
    if (span.t1 != span.t0) grid.push_back(span.t1);
    return grid;
}

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192,
                 a75 = -2187.0 / 6784, a76 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

class Dopri5 {
public:
    Dopri5(const VectorField& f, Vec z0, double t0, const Tolerances& tol)
        : f_(f), z_(std::move(z0)), t_(t0), tol_(tol) {
        k1_ = f_(z_);
        if (k1_.size() != z_.size())
            throw DimensionError("vector field output does not match state dimension");
    }

    const Vec& state() const { return z_; }

    void advance_to(double t_end, const std::function<void(double, const Vec&)>& on_step = {}) {
        if (t_end == t_) return;
        const double dir = t_end > t_ ? 1.0 : -1.0;
        if (h_ == 0.0) h_ = initial_step(std::abs(t_end - t_));
        int steps = 0;
        while (dir * (t_end - t_) > 0.0) {
            if (++steps > 2000000) throw StiffnessError("RK integration exceeded step budget");
            bool last = false;
            bool clipped = false;
            double h = h_;
            if (h >= std::abs(t_end - t_)) {
                clipped = h > std::abs(t_end - t_);
                h = std::abs(t_end - t_);
                last = true;
            }
            if (h < 1e-14 * std::max(1.0, std::abs(t_)))
                throw StiffnessError("RK step size underflow at t = " + std::to_string(t_));
            const double hs = dir * h;
            double err = 0.0;
            Vec znew, k7;
            try_step(hs, znew, k7, err);
            if (err <= 1.0) {
                t_ = last ? t_end : t_ + hs;
                z_ = std::move(znew);
                k1_ = std::move(k7);
                double fac = std::pow(err, kExpo1) / std::pow(err_old_, kBeta);
                fac = std::clamp(fac / kSafe, 1.0 / 10.0, 5.0);
                // A clipped final step says nothing about the natural step size.
                if (!clipped) h_ = h / fac;
                err_old_ = std::max(err, 1e-4);
                if (on_step) on_step(t_, z_);
            } else {
                const double fac = std::min(5.0, std::pow(err, kExpo1) / kSafe);
                h_ = h / std::max(fac, 1.0 + 1e-3);
            }
        }
    }

private:
    static constexpr double kBeta = 0.04;
    static constexpr double kExpo1 = 0.2 - kBeta * 0.75;
    static constexpr double kSafe = 0.9;

    double initial_step(double span) const {
        const double sc = tol_.quad_tol;
        double d0 = 0.0, d1 = 0.0;
        for (Eigen::Index i = 0; i < z_.size(); ++i) {
            const double s = sc + sc * std::abs(z_(i));
            d0 += (z_(i) / s) * (z_(i) / s);
            d1 += (k1_(i) / s) * (k1_(i) / s);
        }
        d0 = std::sqrt(d0 / std::max<Eigen::Index>(1, z_.size()));
        d1 = std::sqrt(d1 / std::max<Eigen::Index>(1, z_.size()));
        double h = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
        h = std::min(h, span);
        const double d2 = std::pow(tol_.quad_tol, 0.2);
        return std::max(std::min(h, d2), 1e-12 * std::max(1.0, span));
    }

    void try_step(double h, Vec& znew, Vec& k7, double& err) const {
        const Vec& k1 = k1_;
        const Vec k2 = f_(z_ + h * (a21 * k1));
        const Vec k3 = f_(z_ + h * (a31 * k1 + a32 * k2));
        const Vec k4 = f_(z_ + h * (a41 * k1 + a42 * k2 + a43 * k3));
        const Vec k5 = f_(z_ + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
        const Vec k6 = f_(z_ + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
        znew = z_ + h * (a71 * k1 + a73 * k3 + a74 * k4 + a75 * k5 + a76 * k6);
        k7 = f_(znew);
        const Vec e = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
        double acc = 0.0;
        for (Eigen::Index i = 0; i < e.size(); ++i) {
            const double sc =
                tol_.quad_tol + tol_.quad_tol * std::max(std::abs(z_(i)), std::abs(znew(i)));
            acc += (e(i) / sc) * (e(i) / sc);
        }
        err = std::sqrt(acc / std::max<Eigen::Index>(1, e.size()));
        if (!std::isfinite(err) || !znew.allFinite()) err = 1e10;
    }

    const VectorField& f_;
    Vec z_;
    Vec k1_;
    double t_;
    double h_ = 0.0;
    double err_old_ = 1e-4;
    Tolerances tol_;
};

}  // namespace

Trajectory rk_integrate(const VectorField& f, const Vec& z0, TimeSpan span, const Tolerances& tol,
                        double sample_dt) {
    Trajectory out;
    Dopri5 solver(f, z0, span.t0, tol);
    if (sample_dt > 0.0) {
        const auto grid = sample_grid(span, sample_dt);
        out.samples.push_back({span.t0, z0, {}});
        for (std::size_t i = 1; i < grid.size(); ++i) {
            solver.advance_to(grid[i]);
            out.samples.push_back({grid[i], solver.state(), {}});
        }
        return out;
    }
    out.samples.push_back({span.t0, z0, {}});
    solver.advance_to(span.t1, [&out](double t, const Vec& z) { out.samples.push_back({t, z, {}}); });
    return out;
}

Vec rk_advance(const VectorField& f, const Vec& z0, TimeSpan span, const Tolerances& tol) {
    Dopri5 solver(f, z0, span.t0, tol);
    solver.advance_to(span.t1);
    return solver.state();
}

}  // namespace hamred
