#pragma once

#include <iosfwd>
#include <string>

#include "hamred/trajectory.hpp"

namespace hamred {

/// Header t,<labels...>,<diagnostics...> with diagnostics in alphabetical order;
/// values printed with 17 significant digits.
void write_trajectory_csv(const Trajectory& tr, std::ostream& out);
/// Labels, samples, diagnostics and chart events.
void write_trajectory_json(const Trajectory& tr, std::ostream& out);

/// Writes by format name ("csv" or "json"); throws ConfigError on an unknown format
/// or an unwritable path.
void write_trajectory(const Trajectory& tr, const std::string& path, const std::string& format);

/// Readers with schema checks (header, column count, finite times and states,
/// increasing time); throw ConfigError on violations. Diagnostics may be infinite
/// (null in JSON). A CSV carries no label/diagnostic split,
/// so the number of state columns must be given.
Trajectory read_trajectory_csv(std::istream& in, int state_columns);
Trajectory read_trajectory_json(std::istream& in);

}  // namespace hamred
