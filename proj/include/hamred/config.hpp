#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hamred/liouville2d.hpp"
#include "hamred/rigid_body.hpp"

namespace hamred {

/// User-defined system: expressions over the named coordinates.
struct UserSystemConfig {
    std::vector<std::string> coordinates;
    std::vector<std::string> constraints;
    /// Either one entry (scalar mass times identity) or n x n entries.
    std::vector<std::vector<std::string>> mass;
    std::string potential = "0";
};

struct LiouvilleConfig {
    std::string H;
    std::string F;
    double E = 0.0;
    double c = 0.0;
    Point2 seed{1.0, 1.0};    // momentum branch seed
    Point2 start{0.0, 0.0};   // (x, y) at t = 0
    Point2 origin{0.0, 0.0};  // base point of the integration paths
    std::vector<double> times;
};

struct RunConfig {
    std::string system = "sphere";
    std::string method = "rk";
    double t_end = 1.0;
    double sample_dt = 0.1;
    std::optional<int> order;
    std::optional<double> step;
    /// Named initial vectors: x, v (sphere), omega (rigid body), q, v (user).
    std::map<std::string, Vec> initial;
    Tolerances tolerances;
    std::string output;
    std::string format = "csv";

    double sphere_mass = 1.0;
    double sphere_radius = 1.0;
    std::optional<Vec> body_moments;
    std::optional<Mat> body_mass_matrix;
    std::vector<Particle> body_particles;
    UserSystemConfig user;
    std::optional<LiouvilleConfig> liouville;

    /// Throws ConfigError on inconsistent settings.
    void validate() const;
};

/// Parses the structured-text configuration; throws ConfigError.
RunConfig parse_run_config(const std::string& text);
RunConfig load_run_config(const std::string& path);

/// Inertia of the configured body (particles, mass matrix or moments; moments (1, 2, 3) when none).
InertiaData configured_inertia(const RunConfig& cfg);

/// Generic system from the user section. Jacobians and Hessians are taken by finite
/// differences.
ConstrainedSystem build_user_system(const UserSystemConfig& user);

/// H and F over (x, y, px, py).
IntegralPair build_integral_pair(const LiouvilleConfig& cfg);

}  // namespace hamred
