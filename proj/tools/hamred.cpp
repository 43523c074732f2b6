#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "hamred/cli.hpp"

namespace {

void apply_overrides(hamred::RunConfig& cfg, const CLI::App& cmd, const std::string& system,
                     const std::string& method, double t_end, double dt, int order, double step,
                     const std::string& out, const std::string& format) {
    if (cmd.count("--system")) cfg.system = system;
    if (cmd.count("--method")) cfg.method = method;
    if (cmd.count("--t-end")) cfg.t_end = t_end;
    if (cmd.count("--dt")) cfg.sample_dt = dt;
    if (cmd.count("--order")) cfg.order = order;
    if (cmd.count("--step")) cfg.step = step;
    if (cmd.count("--out")) cfg.output = out;
    if (cmd.count("--format")) cfg.format = format;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Constrained Hamiltonian dynamics: reduction, verification and integration"};
    app.require_subcommand(1);

    std::string config_path, system, method, out, format;
    double t_end = 1.0, dt = 0.1, step = 0.05;
    int order = 20;
    auto* sim = app.add_subcommand("simulate", "integrate a configured or built-in system");
    sim->add_option("--config", config_path, "configuration file");
    sim->add_option("--system", system, "sphere | rigid_body | user");
    sim->add_option("--method", method, "rk | lie_series | multiplier_ode | dirac | alternative");
    sim->add_option("--t-end", t_end, "final time");
    sim->add_option("--dt", dt, "sample interval");
    sim->add_option("--order", order, "series order (lie_series)");
    sim->add_option("--step", step, "series step (lie_series)");
    sim->add_option("--out", out, "output path (stdout when omitted)");
    sim->add_option("--format", format, "csv | json");

    std::string verify_system = "sphere", report_path;
    std::uint64_t seed = 42;
    int samples = 100;
    bool corrupt = false;
    auto* ver = app.add_subcommand("verify", "run the verification suite of a built-in system");
    ver->add_option("--system", verify_system, "sphere | rigid_body");
    ver->add_option("--seed", seed, "random seed");
    ver->add_option("--samples", samples, "random points per check");
    ver->add_option("--out", report_path, "write the report as JSON");
    ver->add_flag("--corrupt", corrupt, "replace the reduced structure by a non-Poisson tensor");

    std::string liou_config, liou_out, liou_format;
    auto* liou = app.add_subcommand("liouville", "solve a two-degree-of-freedom system by quadratures");
    liou->add_option("--config", liou_config, "configuration file")->required();
    liou->add_option("--out", liou_out, "output path (stdout when omitted)");
    liou->add_option("--format", liou_format, "csv | json");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? hamred::kExitOk : hamred::kExitConfig;
    }

    try {
        if (*sim) {
            hamred::RunConfig cfg;
            if (!config_path.empty()) cfg = hamred::load_run_config(config_path);
            apply_overrides(cfg, *sim, system, method, t_end, dt, order, step, out, format);
            if (cfg.method == "lie_series" && !cfg.order) cfg.order = order;
            if (cfg.method == "lie_series" && !cfg.step) cfg.step = step;
            cfg.validate();
            return hamred::cmd_simulate(cfg, std::cout, std::cerr);
        }
        if (*ver) {
            const hamred::VerificationReport report =
                hamred::cmd_verify(verify_system, seed, samples, corrupt);
            std::cout << report.table();
            if (!report_path.empty()) {
                std::ofstream f(report_path);
                if (!f) throw hamred::ConfigError("cannot open report file '" + report_path + "'");
                f << report.json();
            }
            return report.all_pass() ? hamred::kExitOk : hamred::kExitNumerical;
        }
        if (*liou) {
            hamred::RunConfig cfg = hamred::load_run_config(liou_config);
            if (liou->count("--out")) cfg.output = liou_out;
            if (liou->count("--format")) cfg.format = liou_format;
            cfg.validate();
            return hamred::cmd_liouville(cfg, std::cout, std::cerr);
        }
    } catch (const hamred::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return hamred::kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return hamred::kExitNumerical;
    }
    return hamred::kExitOk;
}
