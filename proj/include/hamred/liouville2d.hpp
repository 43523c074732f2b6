#pragma once

#include <array>
#include <memory>
#include <string>
#include <vector>

#include "hamred/trajectory.hpp"

namespace hamred {

using Point2 = std::array<double, 2>;

/// Two integrals of motion over (x, y, p_x, p_y).
struct IntegralPair {
    ScalarFn H;
    ScalarFn F;
    std::vector<std::string> labels = {"x", "y", "p_x", "p_y"};

    Vec grad_H(const Vec& z) const;
    Vec grad_F(const Vec& z) const;
};

/// Canonical bracket {H, F} at z.
double involution_residual(const IntegralPair& pair, const Vec& z);

/// det d(H, F)/d(p_x, p_y) at z.
double momentum_jacobian_det(const IntegralPair& pair, const Vec& z);

/// Momenta p = f(x, y) on the level set H = E, F = c, on the branch selected by the
/// seed. Each query is solved by Newton, warm-started from the previous solution and
/// continued along a straight segment from it when the direct start fails. The warm
/// start cache is per surface; a surface is used by one thread at a time.
class LevelSurface {
public:
    LevelSurface(IntegralPair pair, double E, double c, Point2 seed, Tolerances tol = {});

    double E() const { return E_; }
    double c() const { return c_; }
    const IntegralPair& pair() const { return pair_; }
    const Point2& seed() const { return seed_; }
    const Tolerances& tolerances() const { return tol_; }

    /// (f_x, f_y) at (x, y). Throws BranchError when Newton fails.
    Point2 momenta(double x, double y) const;
    double f_x(double x, double y) const { return momenta(x, y)[0]; }
    double f_y(double x, double y) const { return momenta(x, y)[1]; }

    /// A surface with shifted levels and the same seed.
    LevelSurface shifted(double dE, double dc) const;

private:
    Point2 solve_from(double x, double y, Point2 start) const;

    IntegralPair pair_;
    double E_;
    double c_;
    Point2 seed_;
    Tolerances tol_;
    struct Cache {
        bool valid = false;
        Point2 point{};
        Point2 p{};
    };
    std::shared_ptr<Cache> cache_;
};

/// Surface whose branch is fixed by solving at the anchor point from the seed.
LevelSurface invert_levels(const IntegralPair& pair, double E, double c, Point2 seed,
                           const Tolerances& tol = {}, Point2 anchor = {0.0, 0.0});

/// Integral of f along (x0, y0) -> (x, y0) -> (x, y).
double potential_phi(const LevelSurface& ls, double x, double y, Point2 origin = {0.0, 0.0});

/// Integral of f along (x0, y0) -> (x0, y) -> (x, y).
double potential_phi_detour(const LevelSurface& ls, double x, double y, Point2 origin = {0.0, 0.0});

/// |d_y f_x - d_x f_y| by fourth-order differences.
double curl_residual(const LevelSurface& ls, double x, double y);

/// Rows d_E f and d_c f by fourth-order differences of re-inverted levels; the level
/// step shrinks near a turning point of the branch.
Mat level_derivatives(const LevelSurface& ls, double x, double y);

/// The same derivatives by implicit differentiation of (H, F) = (E, c).
Mat level_derivatives_implicit(const LevelSurface& ls, double x, double y);

/// (d Phi/dE, d Phi/dc) at (x, y) along the standard path.
Point2 potential_level_derivatives(const LevelSurface& ls, double x, double y,
                                   Point2 origin = {0.0, 0.0});

/// Constants (b_x, b_y) of the state through (x0, y0) at t = 0.
Point2 liouville_constants(const LevelSurface& ls, double x0, double y0, Point2 origin = {0.0, 0.0});

/// Solves d Phi/dE = t + b_x, d Phi/dc = b_y for (x, y) by Newton with step halving
/// from the seed and returns (x, y, f_x, f_y). Throws CausticError when Newton fails.
Vec liouville_solve(const IntegralPair& pair, const LevelSurface& ls, double b_x, double b_y, double t,
                    Point2 seed, Point2 origin = {0.0, 0.0});

/// liouville_solve at every time, each seeded by the previous state. Diagnostics
/// H_drift and F_drift against the levels E and c.
Trajectory liouville_trajectory(const IntegralPair& pair, const LevelSurface& ls, double b_x,
                                double b_y, const std::vector<double>& times, Point2 seed,
                                Point2 origin = {0.0, 0.0});

}  // namespace hamred
