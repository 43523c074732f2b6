#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "hamred/config.hpp"

namespace hamred {

enum ExitCode { kExitOk = 0, kExitConfig = 1, kExitNumerical = 2 };

/// Trajectory of a configured run (no file output).
Trajectory run_simulation(const RunConfig& cfg);

/// Trajectory of a configured Liouville quadrature run.
Trajectory run_liouville(const RunConfig& cfg);

/// Runs and writes the trajectory to cfg.output (stdout when empty). Returns the
/// exit code and reports failures on err.
int cmd_simulate(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_liouville(const RunConfig& cfg, std::ostream& out, std::ostream& err);

struct CheckResult {
    std::string name;
    double max_residual = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

struct VerificationReport {
    std::string system;
    std::uint64_t seed = 0;
    int samples = 0;
    std::vector<CheckResult> checks;

    bool all_pass() const;
    std::string table() const;
    std::string json() const;
};

/// Names accepted by cmd_verify.
std::vector<std::string> verifiable_systems();

/// Runs the verification suite of a built-in system. Checks run concurrently and are
/// merged in a fixed order; each check draws from its own generator seeded from
/// seed. With corrupt set, the reduced structure is replaced by a tensor that breaks
/// the Jacobi identity.
VerificationReport cmd_verify(const std::string& system, std::uint64_t seed, int samples,
                              bool corrupt = false);

}  // namespace hamred
