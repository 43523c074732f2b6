#include "hamred/liouville2d.hpp"

#include <cmath>
#include <type_traits>

namespace hamred {

namespace {

Vec phase_point(double x, double y, Point2 p) {
    Vec z(4);
    z << x, y, p[0], p[1];
    return z;
}

double level_step(double v) { return 1e-3 * (1.0 + std::abs(v)); }

/// Fourth-order derivative of g at 0 with step h.
template <typename Fn>
auto stencil(const Fn& g, double h) {
    using Value = std::decay_t<decltype(g(h))>;
    return Value((-g(2 * h) + 8.0 * g(h) - 8.0 * g(-h) + g(-2 * h)) / (12.0 * h));
}

}  // namespace

Vec IntegralPair::grad_H(const Vec& z) const { return fd_gradient(H, z); }
Vec IntegralPair::grad_F(const Vec& z) const { return fd_gradient(F, z); }

double involution_residual(const IntegralPair& pair, const Vec& z) {
    const Vec gh = pair.grad_H(z);
    const Vec gf = pair.grad_F(z);
    return std::abs(gh(0) * gf(2) + gh(1) * gf(3) - gh(2) * gf(0) - gh(3) * gf(1));
}

double momentum_jacobian_det(const IntegralPair& pair, const Vec& z) {
    const Vec gh = pair.grad_H(z);
    const Vec gf = pair.grad_F(z);
    return gh(2) * gf(3) - gh(3) * gf(2);
}

LevelSurface::LevelSurface(IntegralPair pair, double E, double c, Point2 seed, Tolerances tol)
    : pair_(std::move(pair)), E_(E), c_(c), seed_(seed), tol_(tol), cache_(std::make_shared<Cache>()) {
    tol_.validate();
    if (!pair_.H || !pair_.F) throw ConfigError("integral pair needs both functions");
}

Point2 LevelSurface::solve_from(double x, double y, Point2 start) const {
    const auto residual = [&](const Vec& p) {
        const Vec z = phase_point(x, y, {p(0), p(1)});
        Vec r(2);
        r << pair_.H(z) - E_, pair_.F(z) - c_;
        return r;
    };
    const auto jacobian = [&](const Vec& p) {
        const Vec z = phase_point(x, y, {p(0), p(1)});
        const Vec gh = pair_.grad_H(z);
        const Vec gf = pair_.grad_F(z);
        Mat j(2, 2);
        j << gh(2), gh(3), gf(2), gf(3);
        return j;
    };
    Vec p0(2);
    p0 << start[0], start[1];
    const Vec p = newton_solve(residual, jacobian, p0, tol_);
    return {p(0), p(1)};
}

Point2 LevelSurface::momenta(double x, double y) const {
    Cache& cache = *cache_;
    const Point2 start = cache.valid ? cache.p : seed_;
    Point2 p;
    try {
        p = solve_from(x, y, start);
    } catch (const ConvergenceError& first) {
        if (!cache.valid) {
            throw BranchError("no momenta on the level set (E = " + std::to_string(E_) + ", c = " +
                              std::to_string(c_) + ") at (" + std::to_string(x) + ", " +
                              std::to_string(y) + "); last residual " +
                              std::to_string(first.last_residual()));
        }
        // Continuation from the cached point.
        p = cache.p;
        const Point2 from = cache.point;
        constexpr int kSubsteps = 64;
        try {
            for (int s = 1; s <= kSubsteps; ++s) {
                const double u = static_cast<double>(s) / kSubsteps;
                p = solve_from(from[0] + u * (x - from[0]), from[1] + u * (y - from[1]), p);
            }
        } catch (const ConvergenceError& e) {
            throw BranchError("branch lost between (" + std::to_string(from[0]) + ", " +
                              std::to_string(from[1]) + ") and (" + std::to_string(x) + ", " +
                              std::to_string(y) + "); last iterate (" + std::to_string(p[0]) +
                              ", " + std::to_string(p[1]) + ")");
        }
    }
    cache.valid = true;
    cache.point = {x, y};
    cache.p = p;
    return p;
}

LevelSurface LevelSurface::shifted(double dE, double dc) const {
    return LevelSurface(pair_, E_ + dE, c_ + dc, seed_, tol_);
}

LevelSurface invert_levels(const IntegralPair& pair, double E, double c, Point2 seed,
                           const Tolerances& tol, Point2 anchor) {
    LevelSurface ls(pair, E, c, seed, tol);
    ls.momenta(anchor[0], anchor[1]);
    return ls;
}

double potential_phi(const LevelSurface& ls, double x, double y, Point2 origin) {
    const double a = adaptive_quadrature([&](double s) { return ls.f_x(s, origin[1]); }, origin[0], x,
                                         ls.tolerances());
    const double b = adaptive_quadrature([&](double s) { return ls.f_y(x, s); }, origin[1], y,
                                         ls.tolerances());
    return a + b;
}

double potential_phi_detour(const LevelSurface& ls, double x, double y, Point2 origin) {
    const double a = adaptive_quadrature([&](double s) { return ls.f_y(origin[0], s); }, origin[1], y,
                                         ls.tolerances());
    const double b = adaptive_quadrature([&](double s) { return ls.f_x(s, y); }, origin[0], x,
                                         ls.tolerances());
    return a + b;
}

namespace {

/// d p / d level (0: E, 1: c) at (x, y) by fourth-order differences of re-inverted levels,
/// each warm-started at the local momenta. The step is capped by 0.02 s^2 with s the smallest
/// singular value of the momentum Jacobian.
Vec level_row(const LevelSurface& ls, double x, double y, int level) {
    const Point2 p = ls.momenta(x, y);
    const Vec z = phase_point(x, y, p);
    const Vec gh = ls.pair().grad_H(z);
    const Vec gf = ls.pair().grad_F(z);
    Mat j(2, 2);
    j << gh(2), gh(3), gf(2), gf(3);
    const double s = Eigen::JacobiSVD<Mat>(j).singularValues().minCoeff();
    const double h = std::min(level_step(level == 0 ? ls.E() : ls.c()), 0.02 * s * s);
    if (!(h > 1e-300))
        throw BranchError("momentum Jacobian is singular at (" + std::to_string(x) + ", " +
                          std::to_string(y) + ")");
    const auto at = [&](double d) {
        const LevelSurface shifted(ls.pair(), ls.E() + (level == 0 ? d : 0.0),
                                   ls.c() + (level == 1 ? d : 0.0), p, ls.tolerances());
        const Point2 q = shifted.momenta(x, y);
        Vec v(2);
        v << q[0], q[1];
        return v;
    };
    return stencil(at, h);
}

}  // namespace

double curl_residual(const LevelSurface& ls, double x, double y) {
    const double hx = kFd4Step * (1.0 + std::abs(x));
    const double hy = kFd4Step * (1.0 + std::abs(y));
    const double dfx_dy = stencil([&](double d) { return ls.f_x(x, y + d); }, hy);
    const double dfy_dx = stencil([&](double d) { return ls.f_y(x + d, y); }, hx);
    return std::abs(dfx_dy - dfy_dx);
}

Mat level_derivatives(const LevelSurface& ls, double x, double y) {
    Mat d(2, 2);
    d.row(0) = level_row(ls, x, y, 0).transpose();
    d.row(1) = level_row(ls, x, y, 1).transpose();
    return d;
}

Mat level_derivatives_implicit(const LevelSurface& ls, double x, double y) {
    const Vec z = phase_point(x, y, ls.momenta(x, y));
    const Vec gh = ls.pair().grad_H(z);
    const Vec gf = ls.pair().grad_F(z);
    Mat j(2, 2);
    j << gh(2), gh(3), gf(2), gf(3);
    // Column l of J^-1 is d p / d level_l.
    return checked_inverse<BranchError>(j, 1e12, "momentum Jacobian of the integrals is singular")
        .transpose();
}

Point2 potential_level_derivatives(const LevelSurface& ls, double x, double y, Point2 origin) {
    const Tolerances& tol = ls.tolerances();
    Point2 out;
    for (int l = 0; l < 2; ++l) {
        out[l] = adaptive_quadrature([&](double u) { return level_row(ls, u, origin[1], l)(0); },
                                     origin[0], x, tol) +
                 adaptive_quadrature([&](double u) { return level_row(ls, x, u, l)(1); }, origin[1], y,
                                     tol);
    }
    return out;
}

Point2 liouville_constants(const LevelSurface& ls, double x0, double y0, Point2 origin) {
    return potential_level_derivatives(ls, x0, y0, origin);
}

Vec liouville_solve(const IntegralPair& pair, const LevelSurface& ls, double b_x, double b_y, double t,
                    Point2 seed, Point2 origin) {
    (void)pair;
    const auto residual = [&](const Vec& xy) {
        const Point2 d = potential_level_derivatives(ls, xy(0), xy(1), origin);
        Vec r(2);
        r << d[0] - t - b_x, d[1] - b_y;
        return r;
    };
    const auto jacobian = [&](const Vec& xy) { return level_derivatives(ls, xy(0), xy(1)); };
    Vec x0(2);
    x0 << seed[0], seed[1];
    Tolerances tol = ls.tolerances();
    tol.newton_tol = std::max(tol.newton_tol, 1e-9);
    const auto caustic = [t](const std::string& why) {
        return CausticError("no solution of the quadrature equations at t = " + std::to_string(t) +
                            " (turning point of the branch); " + why);
    };
    // Newton with step halving: a trial point off the level set or without decrease is halved.
    Vec xy = x0;
    Vec r;
    try {
        r = residual(xy);
        for (int it = 0; r.norm() > tol.newton_tol; ++it) {
            if (it == tol.newton_max_iter)
                throw caustic("last residual " + std::to_string(r.norm()));
            const Vec step = jacobian(xy).fullPivLu().solve(-r);
            if (!step.allFinite()) throw caustic("singular level derivatives");
            bool accepted = false;
            for (double lambda = 1.0; lambda > 1e-10 && !accepted; lambda *= 0.5) {
                try {
                    const Vec trial = xy + lambda * step;
                    const Vec rt = residual(trial);
                    if (rt.norm() < r.norm()) {
                        xy = trial;
                        r = rt;
                        accepted = true;
                    }
                } catch (const BranchError&) {
                }
            }
            if (!accepted) throw caustic("no decrease from residual " + std::to_string(r.norm()));
        }
    } catch (const BranchError& e) {
        throw CausticError("branch lost at t = " + std::to_string(t) + ": " + e.what());
    }
    const Point2 p = ls.momenta(xy(0), xy(1));
    Vec out(4);
    out << xy(0), xy(1), p[0], p[1];
    return out;
}

Trajectory liouville_trajectory(const IntegralPair& pair, const LevelSurface& ls, double b_x,
                                double b_y, const std::vector<double>& times, Point2 seed,
                                Point2 origin) {
    Trajectory tr;
    tr.labels = pair.labels;
    Point2 guess = seed;
    for (double t : times) {
        const Vec z = liouville_solve(pair, ls, b_x, b_y, t, guess, origin);
        guess = {z(0), z(1)};
        Sample s{t, z, {}};
        s.diagnostics["F_drift"] = std::abs(pair.F(z) - ls.c());
        s.diagnostics["H_drift"] = std::abs(pair.H(z) - ls.E());
        tr.samples.push_back(std::move(s));
    }
    return tr;
}

}  // namespace hamred
