#pragma once

#include <random>
#include <vector>

#include "hamred/reduction.hpp"

namespace hamred {

struct Particle {
    double mass = 1.0;
    Vec position;  // 3-vector at t = 0
};

/// Mass matrix g and inertia tensor I = tr(g) 1 - g of a body.
struct InertiaData {
    Mat g;
    Mat I;
    Mat frame = Mat::Identity(3, 3);  // columns: principal axes in the original frame

    bool diagonal() const;
    Vec g_diag() const { return g.diagonal(); }
    Vec moments() const { return I.diagonal(); }
};

Mat inertia_tensor(const Mat& g);

/// g = sum m x x^T rotated to principal axes. Throws PlanarityError when some g_i
/// vanishes.
InertiaData inertia_from_particles(const std::vector<Particle>& particles);

/// Uses g as given. Throws PlanarityError unless g is positive-definite.
InertiaData inertia_from_mass_matrix(const Mat& g);

/// Diagonal body with principal moments I; g_i = (I_j + I_k - I_i) / 2. Degenerate
/// (planar) bodies with some g_i = 0 are accepted; negative g_i throws PlanarityError.
InertiaData inertia_from_moments(const Vec& moments);

/// Rotational coordinates and body-frame angular momentum.
struct BodyState {
    Mat R = Mat::Identity(3, 3);
    Vec M = Vec::Zero(3);

    /// (R_11, R_12, ..., R_33, M_1, M_2, M_3).
    Vec packed() const;
    static BodyState unpack(const Vec& z);
};

/// hat(a) b = a x b.
Mat hat(const Vec& a);

/// Row-major vec(R).
Vec flatten(const Mat& m);
Mat unflatten(const Vec& v);

struct MomentumSplit {
    Mat S;  // symmetric part of 2 R^-1 p
    Vec M;
};

/// S = A + A^T, M_k = -eps_kij A_ij with A = R^-1 p.
MomentumSplit momentum_split(const Mat& R, const Mat& p);

/// p = R (S - eps.M) / 2.
Mat momentum_reconstruct(const Mat& R, const Mat& S, const Vec& M);

/// S_ij = (g_i - g_j)/(g_i + g_j) eps_ijk M_k. Throws ReductionError outside the
/// diagonal frame.
Mat resolve_S(const InertiaData& inertia, const Vec& M);

enum class BodyBracket { full, chetaev };

/// Tensor over (R row-major, M). The full kind holds for any invertible R; the
/// Chetaev kind is its restriction to R^T R = 1.
PoissonStructure rigid_body_structure(BodyBracket kind);

struct BodyRates {
    Mat Rdot;
    Vec Mdot;
};

/// Rdot = R hat(Omega), Mdot = M x Omega with Omega = I^-1 M.
BodyRates euler_poisson_rhs(const InertiaData& inertia, const BodyState& state);

/// The same equations as a 12-dimensional field with an exact Taylor recurrence.
VectorField euler_poisson_field(const InertiaData& inertia);

/// 1/2 M^T I^-1 M (any symmetric positive-definite I).
double hamiltonian_body(const InertiaData& inertia, const BodyState& state);

/// 1/8 sum_ij (S_ij - eps_ijk M_k)^2 / g_j.
double hamiltonian_body_split(const InertiaData& inertia, const Mat& S, const Vec& M);

/// hamiltonian_body as a function of the packed 12-vector.
ScalarFunction body_hamiltonian_function(const InertiaData& inertia);

struct BodyMethod {
    enum class Kind { rk, lie_series } kind = Kind::rk;
    int order = 20;
    double step = 0.05;
};

/// Starts from R = 1, M = I Omega_0. Diagnostics: orthogonality (max |R^T R - 1|),
/// casimir_drift and energy_drift (relative changes of |M|^2 and H).
Trajectory simulate_body(const InertiaData& inertia, const Vec& omega0, TimeSpan span,
                         const BodyMethod& method, const Tolerances& tol, double sample_dt = 0.0);

/// The nine-coordinate system: q = vec(R), M = 1 (x) g, constraints (R^T R - 1)_ij
/// for i <= j in the order 11, 12, 13, 22, 23, 33. Throws PlanarityError for a
/// degenerate g.
ConstrainedSystem rigid_body_system(const InertiaData& inertia);

/// Reduced system of a route with the closed-form Hamiltonian 1/2 M^T I^-1 M.
ReducedSystem rigid_body_reduced_system(const InertiaData& inertia, Route route,
                                        std::vector<int> chart, const Tolerances& tol = {});

/// (R, M) of a full state.
BodyState body_state(const FullPhaseState& s);

/// Rdot and Mdot of a reduced flow at a full state, mapped through body_state.
BodyRates reduced_body_rates(const ReducedSystem& rs, const FullPhaseState& s);

Mat random_rotation(std::mt19937_64& rng);

/// U diag(s) V^T with random rotations U, V and singular values s uniform in
/// [smin, smax].
Mat random_invertible(std::mt19937_64& rng, double smin = 0.5, double smax = 1.5);

}  // namespace hamred
