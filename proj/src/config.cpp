#include "hamred/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "hamred/expression.hpp"

namespace hamred {

namespace {

const std::vector<std::string> kMethods = {"rk", "lie_series", "multiplier_ode", "dirac",
                                           "alternative"};
const std::vector<std::string> kSystems = {"sphere", "rigid_body", "user", "liouville"};

bool contains(const std::vector<std::string>& v, const std::string& s) {
    return std::find(v.begin(), v.end(), s) != v.end();
}

Vec read_vec(const YAML::Node& n, const std::string& what) {
    if (!n.IsSequence()) throw ConfigError(what + " must be a list of numbers");
    Vec v(static_cast<Eigen::Index>(n.size()));
    for (std::size_t i = 0; i < n.size(); ++i) v(i) = n[i].as<double>();
    return v;
}

Point2 read_point(const YAML::Node& n, const std::string& what) {
    const Vec v = read_vec(n, what);
    if (v.size() != 2) throw ConfigError(what + " must have two entries");
    return {v(0), v(1)};
}

std::vector<std::string> read_strings(const YAML::Node& n, const std::string& what) {
    if (!n.IsSequence()) throw ConfigError(what + " must be a list");
    std::vector<std::string> out;
    for (const auto& e : n) out.push_back(e.as<std::string>());
    return out;
}

RunConfig from_yaml(const YAML::Node& root) {
    if (!root.IsMap()) throw ConfigError("configuration must be a key-value map");
    RunConfig cfg;
    if (root["system"]) cfg.system = root["system"].as<std::string>();
    if (root["method"]) cfg.method = root["method"].as<std::string>();
    if (root["t_end"]) cfg.t_end = root["t_end"].as<double>();
    if (root["sample_dt"]) cfg.sample_dt = root["sample_dt"].as<double>();
    if (root["order"]) cfg.order = root["order"].as<int>();
    if (root["step"]) cfg.step = root["step"].as<double>();
    if (root["output"]) cfg.output = root["output"].as<std::string>();
    if (root["format"]) cfg.format = root["format"].as<std::string>();
    if (const auto t = root["tolerances"]) {
        if (t["newton_tol"]) cfg.tolerances.newton_tol = t["newton_tol"].as<double>();
        if (t["newton_max_iter"]) cfg.tolerances.newton_max_iter = t["newton_max_iter"].as<int>();
        if (t["fd_step"]) cfg.tolerances.fd_step = t["fd_step"].as<double>();
        if (t["quad_tol"]) cfg.tolerances.quad_tol = t["quad_tol"].as<double>();
        if (t["invariant_tol"]) cfg.tolerances.invariant_tol = t["invariant_tol"].as<double>();
    }
    if (const auto init = root["initial"]) {
        if (!init.IsMap()) throw ConfigError("initial must be a map of named vectors");
        for (const auto& kv : init)
            cfg.initial[kv.first.as<std::string>()] = read_vec(kv.second, "initial." + kv.first.as<std::string>());
    }
    if (const auto s = root["sphere"]) {
        if (s["mass"]) cfg.sphere_mass = s["mass"].as<double>();
        if (s["radius"]) cfg.sphere_radius = s["radius"].as<double>();
    }
    if (const auto b = root["rigid_body"]) {
        if (b["moments"]) cfg.body_moments = read_vec(b["moments"], "rigid_body.moments");
        if (b["mass_matrix"]) {
            const auto m = b["mass_matrix"];
            if (!m.IsSequence() || m.size() != 3) throw ConfigError("rigid_body.mass_matrix must be 3 x 3");
            Mat g(3, 3);
            for (int i = 0; i < 3; ++i) {
                const Vec row = read_vec(m[i], "rigid_body.mass_matrix row");
                if (row.size() != 3) throw ConfigError("rigid_body.mass_matrix must be 3 x 3");
                g.row(i) = row.transpose();
            }
            cfg.body_mass_matrix = g;
        }
        if (b["particles"]) {
            for (const auto& p : b["particles"]) {
                Particle part;
                part.mass = p["mass"].as<double>();
                part.position = read_vec(p["position"], "particle position");
                cfg.body_particles.push_back(part);
            }
        }
    }
    if (const auto u = root["user"]) {
        cfg.user.coordinates = read_strings(u["coordinates"], "user.coordinates");
        if (u["constraints"]) cfg.user.constraints = read_strings(u["constraints"], "user.constraints");
        if (u["potential"]) cfg.user.potential = u["potential"].as<std::string>();
        if (const auto m = u["mass"]) {
            if (m.IsScalar()) {
                cfg.user.mass = {{m.as<std::string>()}};
            } else {
                for (const auto& row : m) cfg.user.mass.push_back(read_strings(row, "user.mass row"));
            }
        }
    }
    if (const auto l = root["liouville"]) {
        LiouvilleConfig lc;
        lc.H = l["H"].as<std::string>();
        lc.F = l["F"].as<std::string>();
        lc.E = l["E"].as<double>();
        lc.c = l["c"].as<double>();
        if (l["seed"]) lc.seed = read_point(l["seed"], "liouville.seed");
        if (l["start"]) lc.start = read_point(l["start"], "liouville.start");
        if (l["origin"]) lc.origin = read_point(l["origin"], "liouville.origin");
        if (l["times"]) {
            const Vec t = read_vec(l["times"], "liouville.times");
            lc.times.assign(t.data(), t.data() + t.size());
        }
        cfg.liouville = lc;
    }
    cfg.validate();
    return cfg;
}

}  // namespace

void RunConfig::validate() const {
    if (!contains(kSystems, system)) throw ConfigError("unknown system '" + system + "'");
    if (!contains(kMethods, method)) throw ConfigError("unknown method '" + method + "'");
    if (!(t_end > 0.0)) throw ConfigError("t_end must be positive");
    if (!(sample_dt > 0.0)) throw ConfigError("sample_dt must be positive");
    if (format != "csv" && format != "json") throw ConfigError("format must be csv or json");
    if (method == "lie_series") {
        if (!order || *order < 2) throw ConfigError("lie_series needs order >= 2");
        if (!step || !(*step > 0.0)) throw ConfigError("lie_series needs a positive step");
    }
    try {
        tolerances.validate();
    } catch (const Error& e) {
        throw ConfigError(e.what());
    }
    if (system == "user" && user.coordinates.empty())
        throw ConfigError("user system needs a user section with coordinates");
    if (system == "liouville" && !liouville) throw ConfigError("liouville system needs a liouville section");
}

RunConfig parse_run_config(const std::string& text) {
    try {
        return from_yaml(YAML::Load(text));
    } catch (const YAML::Exception& e) {
        throw ConfigError(std::string("malformed configuration: ") + e.what());
    }
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read configuration '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_run_config(ss.str());
}

InertiaData configured_inertia(const RunConfig& cfg) {
    if (!cfg.body_particles.empty()) return inertia_from_particles(cfg.body_particles);
    if (cfg.body_mass_matrix) return inertia_from_mass_matrix(*cfg.body_mass_matrix);
    if (cfg.body_moments) return inertia_from_moments(*cfg.body_moments);
    Vec moments(3);
    moments << 1.0, 2.0, 3.0;
    return inertia_from_moments(moments);
}

ConstrainedSystem build_user_system(const UserSystemConfig& user) {
    const auto& vars = user.coordinates;
    const int n = static_cast<int>(vars.size());
    const int r = static_cast<int>(user.constraints.size());
    if (n < 1) throw ConfigError("user system needs at least one coordinate");
    if (r >= n) throw ConfigError("user system needs fewer constraints than coordinates");
    ConstrainedSystem sys;
    sys.n = n;
    sys.k = n - r;
    sys.labels = vars;
    sys.potential = compile_expression(user.potential, vars);
    std::vector<ScalarFn> gs;
    for (const auto& c : user.constraints) gs.push_back(compile_expression(c, vars));
    sys.constraints.count = r;
    sys.constraints.g = [gs](const Vec& q) {
        Vec v(static_cast<Eigen::Index>(gs.size()));
        for (std::size_t a = 0; a < gs.size(); ++a) v(a) = gs[a](q);
        return v;
    };
    const auto& m = user.mass;
    if (m.empty() || (m.size() == 1 && m[0].size() == 1)) {
        const ScalarFn s = compile_expression(m.empty() ? "1" : m[0][0], vars);
        sys.mass_matrix = [s, n](const Vec& q) -> Mat { return s(q) * Mat::Identity(n, n); };
    } else {
        if (static_cast<int>(m.size()) != n) throw ConfigError("user.mass must be n x n");
        std::vector<ScalarFn> entries;
        for (const auto& row : m) {
            if (static_cast<int>(row.size()) != n) throw ConfigError("user.mass must be n x n");
            for (const auto& e : row) entries.push_back(compile_expression(e, vars));
        }
        sys.mass_matrix = [entries, n](const Vec& q) {
            Mat mm(n, n);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) mm(i, j) = entries[static_cast<std::size_t>(i * n + j)](q);
            return mm;
        };
    }
    sys.validate();
    return sys;
}

IntegralPair build_integral_pair(const LiouvilleConfig& cfg) {
    const std::vector<std::string> vars = {"x", "y", "px", "py"};
    IntegralPair pair;
    pair.H = compile_expression(cfg.H, vars);
    pair.F = compile_expression(cfg.F, vars);
    return pair;
}

}  // namespace hamred
