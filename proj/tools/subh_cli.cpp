// subh command line: verify (oracle suite), flow (bienergy gradient descent),
// energy (evaluate functionals on a map).
//
// Exit codes: 0 success, 1 check/computational failure, 2 usage/config error.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <subh/config.hpp>
#include <subh/io.hpp>
#include <subh/report.hpp>

namespace {

struct CommonOpts {
    std::string config_path;
    std::vector<std::string> checks;
    std::string out_dir;
    std::optional<std::uint64_t> seed;
};

subh::RunConfig load(const CommonOpts& o) {
    subh::RunConfig cfg = o.config_path.empty() ? subh::RunConfig{} : subh::load_config(o.config_path);
    if (o.seed) cfg.seed = *o.seed;
    if (!o.out_dir.empty()) cfg.out_dir = o.out_dir;
    cfg.validate();
    return cfg;
}

std::string now_utc() {
    const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    return buf;
}

void write_text(const std::filesystem::path& p, const std::string& body) {
    std::ofstream os(p);
    if (!os) throw std::runtime_error("cannot open for writing: " + p.string());
    os << body;
}

subh::MapField build_initial_map(const subh::RunConfig& cfg, const subh::BaseGrid& g) {
    std::vector<double> y0 = cfg.map_value;
    if (y0.empty()) y0.assign(cfg.nu, 0.0);
    if (cfg.map_preset == "constant") return subh::constant_map(g, y0);
    if (cfg.map_preset == "bump-perturbed-constant")
        return subh::bump_perturbed_constant(g, y0, cfg.map_amplitude, cfg.bump,
                                             cfg.map_frequency);
    // coordinate-linear
    std::vector<std::vector<double>> A(cfg.nu, std::vector<double>(g.dim(), 0.0));
    if (cfg.map_linear.empty()) {
        for (int c = 0; c < cfg.nu && c < g.dim(); ++c) A[c][c] = 1.0;
    } else {
        for (int c = 0; c < cfg.nu; ++c)
            for (int ax = 0; ax < g.dim(); ++ax) A[c][ax] = cfg.map_linear[c * g.dim() + ax];
    }
    return subh::coordinate_linear_map(g, cfg.nu, A);
}

int cmd_verify(const CommonOpts& opts) {
    const subh::RunConfig cfg = load(opts);
    const subh::OracleSuite suite(cfg.make_oracle_config());

    for (const auto& id : opts.checks) {
        const auto& known = subh::check_names();
        if (std::find(known.begin(), known.end(), id) == known.end()) {
            std::cerr << "unknown check id: " << id << "\n";
            return 2;
        }
    }

    subh::VerificationReport rep;
    if (opts.checks.empty()) {
        rep = suite.run_all();
    } else {
        for (const auto& id : opts.checks) {
            rep.checks.push_back(suite.run_check(id));
            rep.all_pass = rep.all_pass && rep.checks.back().pass;
        }
    }

    const std::filesystem::path out(cfg.out_dir);
    std::filesystem::create_directories(out);
    write_text(out / "report.json", subh::report_to_json(rep).dump(2) + "\n");
    write_text(out / "report.txt", subh::report_to_text(rep));
    write_text(out / "report.meta.json",
               subh::report_sidecar_json(rep, now_utc()).dump(2) + "\n");
    std::cout << subh::report_to_text(rep);
    return rep.all_pass ? 0 : 1;
}

int cmd_flow(const CommonOpts& opts) {
    const subh::RunConfig cfg = load(opts);
    const subh::HeisenbergModel model{cfg.n};
    subh::BaseGrid g(model, cfg.grid_npts, cfg.grid_extent, cfg.grid_order);
    const auto tgt = cfg.make_target();

    subh::MapField phi0;
    if (!cfg.map_input.empty()) {
        auto hf = subh::read_hfield(cfg.map_input, cfg.grid_order);
        if (hf.map.ncomp != cfg.nu || hf.grid.model.n != cfg.n)
            throw subh::ConfigError("map.input does not match configured n/nu");
        g = hf.grid;
        phi0 = hf.map;
    } else {
        phi0 = build_initial_map(cfg, g);
    }

    subh::FlowConfig fc;
    fc.eta = cfg.flow_eta;
    fc.max_steps = cfg.flow_max_steps;
    fc.stop_tolerance = cfg.flow_stop_tolerance;
    fc.variation_weight = cfg.flow_weight;
    fc.energy_log_interval = cfg.flow_log_interval;

    const auto res = subh::flow_run(g, tgt, phi0, fc);

    const std::filesystem::path out(cfg.out_dir);
    std::filesystem::create_directories(out);
    write_text(out / "trace.csv", res.trace.to_csv());
    subh::write_hfield((out / "final.hfield").string(), g, res.phi);

    if (res.trace.aborted) {
        std::cerr << "flow aborted: " << res.trace.abort_reason << "\n";
        return 1;
    }
    std::cout << "flow finished after " << res.trace.samples.back().step << " steps, e2b = "
              << subh::format_g17(res.trace.samples.back().e2b) << "\n";
    return 0;
}

int cmd_energy(const CommonOpts& opts) {
    const subh::RunConfig cfg = load(opts);
    const subh::HeisenbergModel model{cfg.n};
    subh::BaseGrid g(model, cfg.grid_npts, cfg.grid_extent, cfg.grid_order);
    const auto tgt = cfg.make_target();

    subh::MapField phi;
    if (!cfg.map_input.empty()) {
        std::ifstream is(cfg.map_input);
        if (!is) {
            std::cerr << "cannot open map file: " << cfg.map_input << "\n";
            return 2;
        }
        try {
            auto hf = subh::read_hfield(is, cfg.grid_order);
            g = hf.grid;
            phi = hf.map;
        } catch (const std::exception& e) {
            std::cerr << "unreadable map file: " << e.what() << "\n";
            return 2;
        }
    } else {
        phi = build_initial_map(cfg, g);
    }

    const auto tau = subh::tension_field(g, tgt, phi);
    const auto bh = subh::bh_operator(g, tgt, phi);
    nlohmann::ordered_json j;
    j["E1b"] = subh::energy_e1b(g, tgt, phi);
    j["E2b"] = subh::energy_e2b(g, tgt, phi);
    j["tau_l2"] = subh::l2_norm(g, tgt, phi, tau);
    j["bh_l2"] = subh::l2_norm(g, tgt, phi, bh);
    std::cout << j.dump(2) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerical engine for subelliptic biharmonic maps on the Heisenberg group"};
    app.require_subcommand(1);

    CommonOpts opts;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", opts.config_path, "run configuration file");
        sub->add_option("--check", opts.checks, "check id to run (repeatable)");
        sub->add_option("--out", opts.out_dir, "output directory");
        sub->add_option("--seed", opts.seed, "random seed override");
    };
    auto* verify = app.add_subcommand("verify", "run the verification suite");
    auto* flow = app.add_subcommand("flow", "run the bienergy gradient flow");
    auto* energy = app.add_subcommand("energy", "evaluate energies of a map");
    add_common(verify);
    add_common(flow);
    add_common(energy);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        if (verify->parsed()) return cmd_verify(opts);
        if (flow->parsed()) return cmd_flow(opts);
        if (energy->parsed()) return cmd_energy(opts);
    } catch (const subh::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
