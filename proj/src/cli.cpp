#include "hamred/cli.hpp"

#include <cmath>
#include <cstdio>
#include <future>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "hamred/lie_series.hpp"
#include "hamred/sphere_model.hpp"
#include "hamred/trajectory_io.hpp"

namespace hamred {

namespace {

Vec initial_or(const RunConfig& cfg, const std::string& name, Vec fallback, int size) {
    const auto it = cfg.initial.find(name);
    Vec v = it == cfg.initial.end() ? std::move(fallback) : it->second;
    if (v.size() != size)
        throw ConfigError("initial." + name + " must have " + std::to_string(size) + " entries");
    return v;
}

Vec vec3(double a, double b, double c) {
    Vec v(3);
    v << a, b, c;
    return v;
}

Route route_of(const std::string& method) {
    if (method == "dirac") return Route::dirac;
    if (method == "alternative") return Route::alternative;
    return Route::intermediate;
}

/// Reduced flow, multiplier ODE or series solution of a generic system.
Trajectory run_generic(const RunConfig& cfg, const ConstrainedSystem& sys, const FullPhaseState& s0,
                       const std::function<ReducedSystem(Route, const std::vector<int>&)>& builder) {
    const TimeSpan span{0.0, cfg.t_end};
    const Tolerances& tol = cfg.tolerances;
    if (cfg.method == "multiplier_ode")
        return multiplier_flow(sys, s0.q, legendre_velocity(sys, s0), span, tol, cfg.sample_dt);
    const Route route = route_of(cfg.method);
    const ReducedSystem rs = builder(route, choose_chart(sys, route, s0.q));
    if (cfg.method == "lie_series") {
        const FullPhaseState on = project_on_shell(sys, s0, tol);
        Trajectory tr = lie_solve(rs.vector_field(), rs.from_full(on), span, *cfg.order, *cfg.step,
                                  cfg.sample_dt);
        tr.labels = rs.labels();
        const double h0 = rs.hamiltonian(tr.front().z);
        for (auto& s : tr.samples) {
            const Vec q = s.z.head(sys.n);
            s.diagnostics["constraint_residual"] = sys.constraints.value(q).cwiseAbs().maxCoeff();
            s.diagnostics["energy_drift"] = std::abs(rs.hamiltonian(s.z) - h0);
        }
        return tr;
    }
    return reduced_flow(rs, reduced_state(rs, s0), span, tol, cfg.sample_dt);
}

double sphere_radius_drift(const Vec& x, double c) { return std::abs(x.head(3).squaredNorm() - c * c); }

}  // namespace

Trajectory run_simulation(const RunConfig& cfg) {
    cfg.validate();
    const Tolerances& tol = cfg.tolerances;
    if (cfg.system == "sphere") {
        SphereSystem s;
        s.m = cfg.sphere_mass;
        s.c = cfg.sphere_radius;
        s.validate();
        const Vec x = initial_or(cfg, "x", vec3(0.0, 0.0, s.c), 3);
        const Vec v = initial_or(cfg, "v", vec3(1.0, 0.0, 0.0), 3);
        const ConstrainedSystem sys = sphere_constrained_system(s);
        Trajectory tr = run_generic(cfg, sys, sphere_state(s, x, v),
                                    [&](Route r, const std::vector<int>& c) {
                                        return sphere_reduced_system(s, r, c, tol);
                                    });
        for (auto& smp : tr.samples) smp.diagnostics["casimir_drift"] = sphere_radius_drift(smp.z, s.c);
        return tr;
    }
    if (cfg.system == "rigid_body") {
        const InertiaData inertia = configured_inertia(cfg);
        const Vec omega = initial_or(cfg, "omega", vec3(1.0, 1.0, 1.0), 3);
        if (cfg.method == "rk" || cfg.method == "lie_series") {
            BodyMethod m;
            if (cfg.method == "lie_series") {
                m.kind = BodyMethod::Kind::lie_series;
                m.order = *cfg.order;
                m.step = *cfg.step;
            }
            return simulate_body(inertia, omega, {0.0, cfg.t_end}, m, tol, cfg.sample_dt);
        }
        const ConstrainedSystem sys = rigid_body_system(inertia);
        const Mat R = Mat::Identity(3, 3);
        const FullPhaseState s0{flatten(R), flatten(R * hat(omega) * inertia.g)};
        return run_generic(cfg, sys, s0, [&](Route r, const std::vector<int>& c) {
            return rigid_body_reduced_system(inertia, r, c, tol);
        });
    }
    if (cfg.system == "user") {
        const ConstrainedSystem sys = build_user_system(cfg.user);
        const Vec q = initial_or(cfg, "q", Vec::Zero(sys.n), sys.n);
        const Vec v = initial_or(cfg, "v", Vec::Zero(sys.n), sys.n);
        const FullPhaseState s0 = project_on_shell(sys, {q, legendre_momentum(sys, q, v)}, tol);
        return run_generic(cfg, sys, s0, [&](Route r, const std::vector<int>& c) {
            return reduce(sys, r, c, tol);
        });
    }
    throw ConfigError("system '" + cfg.system + "' is not simulated; use the liouville command");
}

Trajectory run_liouville(const RunConfig& cfg) {
    if (!cfg.liouville) throw ConfigError("configuration has no liouville section");
    const LiouvilleConfig& lc = *cfg.liouville;
    const IntegralPair pair = build_integral_pair(lc);
    std::vector<double> times = lc.times;
    if (times.empty()) times = sample_grid({0.0, cfg.t_end}, cfg.sample_dt);
    const LevelSurface ls = invert_levels(pair, lc.E, lc.c, lc.seed, cfg.tolerances, lc.start);
    const Point2 b = liouville_constants(ls, lc.start[0], lc.start[1], lc.origin);
    return liouville_trajectory(pair, ls, b[0], b[1], times, lc.start, lc.origin);
}

namespace {

int run_and_write(const std::function<Trajectory()>& run, const RunConfig& cfg, std::ostream& out,
                  std::ostream& err) {
    try {
        const Trajectory tr = run();
        if (cfg.output.empty()) {
            if (cfg.format == "json") write_trajectory_json(tr, out);
            else write_trajectory_csv(tr, out);
        } else {
            write_trajectory(tr, cfg.output, cfg.format);
        }
        return kExitOk;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        err << "numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    }
}

}  // namespace

int cmd_simulate(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    return run_and_write([&] { return run_simulation(cfg); }, cfg, out, err);
}

int cmd_liouville(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    return run_and_write([&] { return run_liouville(cfg); }, cfg, out, err);
}

bool VerificationReport::all_pass() const {
    for (const auto& c : checks)
        if (!c.pass) return false;
    return !checks.empty();
}

std::string VerificationReport::table() const {
    std::ostringstream os;
    char line[160];
    std::snprintf(line, sizeof line, "system %s  seed %llu  samples %d\n", system.c_str(),
                  static_cast<unsigned long long>(seed), samples);
    os << line;
    std::snprintf(line, sizeof line, "%-24s %14s %12s  %s\n", "check", "max_residual", "tolerance",
                  "result");
    os << line;
    for (const auto& c : checks) {
        std::snprintf(line, sizeof line, "%-24s %14.6e %12.1e  %s\n", c.name.c_str(), c.max_residual,
                      c.tolerance, c.pass ? "PASS" : "FAIL");
        os << line;
    }
    return os.str();
}

std::string VerificationReport::json() const {
    nlohmann::ordered_json j;
    j["system"] = system;
    j["seed"] = seed;
    j["samples"] = samples;
    auto rows = nlohmann::ordered_json::array();
    for (const auto& c : checks)
        rows.push_back({{"name", c.name},
                        {"max_residual", c.max_residual},
                        {"tolerance", c.tolerance},
                        {"pass", c.pass}});
    j["checks"] = rows;
    j["all_pass"] = all_pass();
    return j.dump(2) + "\n";
}

std::vector<std::string> verifiable_systems() { return {"sphere", "rigid_body"}; }

namespace {

using Check = std::function<double(std::mt19937_64&)>;

struct NamedCheck {
    std::string name;
    double tolerance;
    Check run;
};

PoissonStructure corrupted(PoissonStructure ps) {
    const MatFn base = ps.tensor;
    const int last = ps.dim - 1;
    ps.tensor = [base, last](const Vec& z) {
        Mat w = base(z);
        w(0, last) += 0.5 * z(1) * z(1);
        return w;
    };
    return ps;
}

double jacobi_max(const PoissonStructure& ps, const std::function<Vec(std::mt19937_64&)>& point,
                  std::mt19937_64& rng, int samples) {
    double worst = 0.0;
    for (int s = 0; s < samples; ++s) worst = std::max(worst, jacobi_residual(ps, point(rng)));
    return worst;
}

/// Point (q, g_full p) of the intermediate tensor at a random on-shell state.
Vec intermediate_point(const ConstrainedSystem& sys, std::mt19937_64& rng, const Tolerances& tol) {
    const FullPhaseState st = random_on_shell_state(sys, rng, tol);
    const TangentBasis b = fundamental_solutions(sys.constraints, st.q);
    Vec z(2 * sys.n);
    z << st.q, b.g_full * st.p;
    return z;
}

/// {pi_i, G_a} = -(g_lower J^T)_ia and c_ij^k among free indices.
double vanishing_brackets(const ConstrainedSystem& sys, std::mt19937_64& rng, int samples,
                          const Tolerances& tol) {
    double worst = 0.0;
    const int r = sys.constraints.count;
    for (int s = 0; s < samples; ++s) {
        const FullPhaseState st = random_on_shell_state(sys, rng, tol);
        const TangentBasis b = fundamental_solutions(sys.constraints, st.q);
        worst = std::max(worst, max_abs(b.g_lower * b.jacobian.transpose()));
        const StructureFunctions c = structure_functions_exact(sys.constraints, b, st.q);
        for (int i = r; i < sys.n; ++i)
            for (int j = r; j < sys.n; ++j)
                for (int k = r; k < sys.n; ++k) worst = std::max(worst, std::abs(c(i, j, k)));
    }
    return worst;
}

/// Constraints as Casimirs of the Dirac tensor: max |omega_D grad T_I|.
double dirac_casimir(const ConstrainedSystem& sys, std::mt19937_64& rng, int samples,
                     const Tolerances& tol) {
    const PoissonStructure canon = canonical_structure(sys.n);
    const ConstraintSet cs = second_class_constraints(sys);
    double worst = 0.0;
    for (int s = 0; s < samples; ++s) {
        const FullPhaseState st = random_on_shell_state(sys, rng, tol);
        Vec z(2 * sys.n);
        z << st.q, st.p;
        const Mat d = dirac_tensor(canon, cs, z);
        worst = std::max(worst, max_abs(d * cs.gradients(z).transpose()));
    }
    return worst;
}

double route_check(const ConstrainedSystem& sys, std::mt19937_64& rng,
                   const std::function<ReducedSystem(Route, const std::vector<int>&)>& builder) {
    Tolerances tight;
    tight.quad_tol = 1e-12;
    const FullPhaseState s0 = random_on_shell_state(sys, rng, tight);
    return compare_routes(sys, s0, {0.0, 1.0}, tight, 0.1, builder).max();
}

std::vector<NamedCheck> sphere_checks(int samples, bool corrupt) {
    const SphereSystem s{1.0, 1.0, 2};
    const ConstrainedSystem sys = sphere_constrained_system(s);
    const Tolerances tol;
    const PoissonStructure reduced = corrupt ? corrupted(sphere_structure(s)) : sphere_structure(s);
    const auto on_shell_reduced = [sys, tol](std::mt19937_64& rng) {
        FullPhaseState st = random_on_shell_state(sys, rng, tol);
        if (std::abs(st.q(2)) < 0.1) st.q(2) = st.q(2) < 0 ? -0.1 : 0.1;
        st = project_on_shell(sys, st, tol);
        const auto [x, pi] = sphere_forward(st);
        Vec z(5);
        z << x, pi.head(2);
        return z;
    };
    std::vector<NamedCheck> checks;
    checks.push_back({"jacobi_canonical", 1e-8, [samples](std::mt19937_64& rng) {
                          std::normal_distribution<double> normal;
                          return jacobi_max(canonical_structure(3), [&](std::mt19937_64& g) {
                              Vec z(6);
                              for (int i = 0; i < 6; ++i) z(i) = normal(g);
                              return z;
                          }, rng, samples);
                      }});
    checks.push_back({"jacobi_intermediate", 1e-8, [sys, tol, samples](std::mt19937_64& rng) {
                          double worst = 0.0;
                          for (int i = 0; i < samples; ++i) {
                              const Vec z = intermediate_point(sys, rng, tol);
                              const auto chart = select_pivots(sys.constraints.jac(z.head(3)));
                              worst = std::max(worst, jacobi_residual(
                                  intermediate_structure(sys.constraints, 3, chart), z));
                          }
                          return worst;
                      }});
    checks.push_back({"jacobi_reduced", 1e-8, [reduced, on_shell_reduced, samples](std::mt19937_64& rng) {
                          return jacobi_max(reduced, on_shell_reduced, rng, samples);
                      }});
    checks.push_back({"vanishing_brackets", 1e-10, [sys, tol, samples](std::mt19937_64& rng) {
                          return vanishing_brackets(sys, rng, samples, tol);
                      }});
    checks.push_back({"dirac_casimir", 1e-9, [sys, tol, samples](std::mt19937_64& rng) {
                          return dirac_casimir(sys, rng, samples, tol);
                      }});
    checks.push_back({"closed_form", 1e-10, [s, sys, tol, samples, on_shell_reduced](std::mt19937_64& rng) {
                          const ReducedSystem gen = reduce_intermediate(sys, {2}, tol);
                          const ReducedSystem closed = sphere_reduced_system(s, Route::intermediate, {2}, tol);
                          double worst = 0.0;
                          for (int i = 0; i < samples; ++i) {
                              const Vec z = on_shell_reduced(rng);
                              worst = std::max({worst, std::abs(gen.hamiltonian(z) - closed.hamiltonian(z)),
                                                max_abs(gen.reduced_structure.tensor(z) -
                                                        closed.reduced_structure.tensor(z))});
                          }
                          return worst;
                      }});
    checks.push_back({"affirmation", 1e-8, [sys, samples](std::mt19937_64& rng) {
                          return verify_affirmation(sys, samples, rng()).max_deviation();
                      }});
    checks.push_back({"route_equivalence", 1e-6, [s, sys](std::mt19937_64& rng) {
                          return route_check(sys, rng, [s](Route r, const std::vector<int>& c) {
                              Tolerances tight;
                              tight.quad_tol = 1e-12;
                              return sphere_reduced_system(s, r, c, tight);
                          });
                      }});
    return checks;
}

std::vector<NamedCheck> rigid_body_checks(int samples, bool corrupt) {
    const InertiaData inertia = inertia_from_moments(vec3(2.0, 3.0, 4.0));
    const ConstrainedSystem sys = rigid_body_system(inertia);
    const Tolerances tol;
    const PoissonStructure chetaev = corrupt ? corrupted(rigid_body_structure(BodyBracket::chetaev))
                                             : rigid_body_structure(BodyBracket::chetaev);
    const auto body_point = [](std::mt19937_64& rng, bool orthogonal) {
        std::normal_distribution<double> normal;
        const Mat R = orthogonal ? random_rotation(rng) : random_invertible(rng);
        Vec z(12);
        z << flatten(R), vec3(normal(rng), normal(rng), normal(rng));
        return z;
    };
    std::vector<NamedCheck> checks;
    checks.push_back({"jacobi_canonical", 1e-8, [samples](std::mt19937_64& rng) {
                          std::normal_distribution<double> normal;
                          return jacobi_max(canonical_structure(9), [&](std::mt19937_64& g) {
                              Vec z(18);
                              for (int i = 0; i < 18; ++i) z(i) = normal(g);
                              return z;
                          }, rng, samples);
                      }});
    checks.push_back({"jacobi_intermediate", 1e-8, [sys, tol, samples](std::mt19937_64& rng) {
                          double worst = 0.0;
                          for (int i = 0; i < samples; ++i) {
                              const Vec z = intermediate_point(sys, rng, tol);
                              const auto chart = select_pivots(sys.constraints.jac(z.head(9)));
                              worst = std::max(worst, jacobi_residual(
                                  intermediate_structure(sys.constraints, 9, chart), z));
                          }
                          return worst;
                      }});
    checks.push_back({"jacobi_full", 1e-8, [body_point, samples](std::mt19937_64& rng) {
                          return jacobi_max(rigid_body_structure(BodyBracket::full),
                                            [&](std::mt19937_64& g) { return body_point(g, false); },
                                            rng, samples);
                      }});
    checks.push_back({"jacobi_chetaev", 1e-8, [chetaev, body_point, samples](std::mt19937_64& rng) {
                          return jacobi_max(chetaev, [&](std::mt19937_64& g) { return body_point(g, true); },
                                            rng, samples);
                      }});
    checks.push_back({"vanishing_brackets", 1e-10, [sys, tol, samples](std::mt19937_64& rng) {
                          return vanishing_brackets(sys, rng, samples, tol);
                      }});
    checks.push_back({"dirac_casimir", 1e-9, [sys, tol, samples](std::mt19937_64& rng) {
                          return dirac_casimir(sys, rng, samples, tol);
                      }});
    checks.push_back({"closed_form", 1e-10, [inertia, sys, tol, samples](std::mt19937_64& rng) {
                          double worst = 0.0;
                          for (int i = 0; i < samples; ++i) {
                              const FullPhaseState st = random_on_shell_state(sys, rng, tol);
                              const auto chart = choose_chart(sys, Route::intermediate, st.q);
                              const ReducedSystem gen = reduce_intermediate(sys, chart, tol);
                              const ReducedSystem closed =
                                  rigid_body_reduced_system(inertia, Route::intermediate, chart, tol);
                              const Vec z = gen.from_full(st);
                              worst = std::max(worst, std::abs(gen.hamiltonian(z) - closed.hamiltonian(z)));
                          }
                          return worst;
                      }});
    checks.push_back({"euler_poisson_pipeline", 1e-8, [inertia, sys, tol, samples](std::mt19937_64& rng) {
                          double worst = 0.0;
                          for (int i = 0; i < samples; ++i) {
                              const FullPhaseState st = random_on_shell_state(sys, rng, tol);
                              const ReducedSystem gen = reduce_intermediate(
                                  sys, choose_chart(sys, Route::intermediate, st.q), tol);
                              const BodyRates a = reduced_body_rates(gen, st);
                              const BodyRates b = euler_poisson_rhs(inertia, body_state(st));
                              worst = std::max({worst, max_abs(a.Rdot - b.Rdot), max_abs(a.Mdot - b.Mdot)});
                          }
                          return worst;
                      }});
    checks.push_back({"affirmation", 1e-8, [sys, samples](std::mt19937_64& rng) {
                          return verify_affirmation(sys, samples, rng()).max_deviation();
                      }});
    checks.push_back({"route_equivalence", 1e-6, [inertia, sys](std::mt19937_64& rng) {
                          return route_check(sys, rng, [inertia](Route r, const std::vector<int>& c) {
                              Tolerances tight;
                              tight.quad_tol = 1e-12;
                              return rigid_body_reduced_system(inertia, r, c, tight);
                          });
                      }});
    return checks;
}

}  // namespace

VerificationReport cmd_verify(const std::string& system, std::uint64_t seed, int samples, bool corrupt) {
    if (samples < 1) throw ConfigError("samples must be positive");
    std::vector<NamedCheck> checks;
    if (system == "sphere") checks = sphere_checks(samples, corrupt);
    else if (system == "rigid_body") checks = rigid_body_checks(samples, corrupt);
    else throw ConfigError("no verification suite for system '" + system + "'");

    std::vector<std::future<CheckResult>> running;
    for (std::size_t i = 0; i < checks.size(); ++i) {
        running.push_back(std::async(std::launch::async, [&checks, i, seed] {
            const NamedCheck& c = checks[i];
            std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                               static_cast<std::uint32_t>(i)};
            std::mt19937_64 rng(seq);
            CheckResult r{c.name, 0.0, c.tolerance, false};
            try {
                r.max_residual = c.run(rng);
                r.pass = std::isfinite(r.max_residual) && r.max_residual <= c.tolerance;
            } catch (const std::exception&) {
                r.max_residual = INFINITY;
            }
            return r;
        }));
    }
    VerificationReport report;
    report.system = system;
    report.seed = seed;
    report.samples = samples;
    for (auto& f : running) report.checks.push_back(f.get());
    return report;
}

}  // namespace hamred
