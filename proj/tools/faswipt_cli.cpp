// Command-line front end: single AO runs, Monte-Carlo sweeps, and a quick
// self-check of the numerical invariants at small problem sizes.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "faswipt/faswipt.hpp"

namespace {

using namespace faswipt;

ExperimentConfig load_or_default(const std::string& path) {
    if (path.empty()) return ExperimentConfig{};
    return load_config(path);
}

std::vector<SchemeId> parse_scheme_list(const std::string& csv) {
    std::vector<SchemeId> out;
    for (const std::string& s : detail::split_list(csv)) out.push_back(detail::parse_scheme(s));
    return out;
}

int cmd_run(const std::string& config_path, std::uint64_t seed, const std::string& out_dir,
            const std::string& scheme_name) {
    ExperimentConfig cfg = load_or_default(config_path);
    const SchemeId scheme = detail::parse_scheme(scheme_name);
    const Scenario sc = cfg.make_scenario();
    const auto [paths_I, paths_E] = sample_scenario_paths(sc, seed);
    const AOTrace trace = run_ao(sc, paths_I, paths_E, scheme, seed, cfg.ao_options());

    std::filesystem::create_directories(out_dir);
    detail::write_file(std::filesystem::path(out_dir) / "config_resolved.txt",
                       cfg.resolved_text());
    emit_outputs({}, {{scheme, seed, trace}}, out_dir);

    if (trace.infeasible_trial) {
        std::cout << "infeasible trial: " << trace.diagnostic << "\n";
        return 0;
    }
    std::cout << "scheme=" << to_string(scheme) << " seed=" << seed
              << " iterations=" << trace.iterations() << " converged="
              << (trace.converged ? "yes" : "no") << "\n"
              << "final rate = " << format_decimal(trace.final_rate()) << " bits/s/Hz\n"
              << "harvested  = "
              << format_decimal(trace.iterates.empty() ? 0.0
                                                       : trace.iterates.back().harvested_power)
              << " W\n";
    return 0;
}

int cmd_sweep(const std::string& config_path, std::uint64_t seed, bool seed_set, int trials,
              const std::string& schemes_csv, const std::string& out_dir) {
    ExperimentConfig cfg = load_or_default(config_path);
    if (seed_set) cfg.base_seed = seed;
    if (trials > 0) cfg.trials = trials;
    if (!schemes_csv.empty()) cfg.schemes = parse_scheme_list(schemes_csv);
    cfg.validate();

    std::filesystem::create_directories(out_dir);
    detail::write_file(std::filesystem::path(out_dir) / "config_resolved.txt",
                       cfg.resolved_text());
    const ExperimentResult result = run_experiment(cfg);
    emit_outputs(result.rows, {}, out_dir);
    std::cout << sweep_csv_text(result.rows);
    return 0;
}

bool report(const char* name, bool ok) {
    std::cout << (ok ? "[PASS] " : "[FAIL] ") << name << "\n";
    return ok;
}

int cmd_check(std::uint64_t seed) {
    bool all = true;
    Scenario sc;
    sc.M = 2;
    sc.validate();
    const auto [paths_I, paths_E] = sample_scenario_paths(sc, seed);
    const Placement pl = initialize_placement(sc);
    const ChannelPair ch = assemble_channels(sc, pl, paths_I, paths_E);

    {
        bool ok = true;
        for (int k = 0; k < ch.Xi_I.size(); ++k)
            ok = ok && std::abs(std::abs(ch.Xi_I(k)) - 1.0) < 1e-12;
        all &= report("field-response entries are unit modulus", ok);
    }
    {
        // Channel assembly against a direct triple-loop sum over paths.
        bool ok = true;
        for (int m = 0; m < sc.M; ++m) {
            Complex acc = 0.0;
            for (int s = 0; s < paths_I.q_r(); ++s)
                for (int k = 0; k < paths_I.q_t(); ++k)
                    acc += std::conj(ch.f_I(s)) * paths_I.Sigma(s, k) * ch.Xi_I(k, m);
            ok = ok && std::abs(acc - ch.h_I(m)) < 1e-12;
        }
        all &= report("channel assembly matches brute-force path sum", ok);
    }
    {
        const BeamformingResult bf =
            solve_rank_one_beamforming(ch.h_I, ch.h_E, sc, 50, seed);
        bool ok = bf.ok();
        if (ok) {
            ok = bf.beam.W.trace().real() <= sc.P_max + 1e-8 &&
                 harvested_power(ch.h_E, bf.beam.W, sc.tau) >= sc.Q_bar - 1e-8 &&
                 bf.beam.sdr_gap <= 1e-3;
        }
        all &= report("beamformer feasible with tight relaxation gap", ok);
    }
    {
        // Surrogate minorant property on sampled positions.
        const BeamformingResult bf = solve_rank_one_beamforming(ch.h_I, ch.h_E, sc, 50, seed);
        const QuadraticFormDecomposition dec =
            decompose_objective(bf.beam.W, ch.f_I, paths_I, ch.Xi_I, 0);
        const SurrogateModel model =
            build_surrogate(dec, AngleSet::transmit(paths_I), pl.t[0], sc.lambda);
        Rng rng(seed + 7);
        bool ok = true;
        for (int i = 0; i < 500; ++i) {
            const Vec2 t(rng.uniform(-sc.tx_region, sc.tx_region),
                         rng.uniform(-sc.tx_region, sc.tx_region));
            const CVector xi = transmit_field_vector(t, paths_I, sc.lambda);
            ok = ok && surrogate_eval(model, t) <= dec.eval(xi) + 1e-9;
        }
        ok = ok && std::abs(surrogate_eval(model, pl.t[0]) -
                            dec.eval(transmit_field_vector(pl.t[0], paths_I, sc.lambda))) < 1e-9;
        all &= report("surrogate is a tangent minorant", ok);
    }
    {
        const AOTrace a = run_ao(sc, paths_I, paths_E, SchemeId::PROPOSED, seed);
        const AOTrace b = run_ao(sc, paths_I, paths_E, SchemeId::PROPOSED, seed);
        bool ok = !a.infeasible_trial && a.iterations() == b.iterations();
        for (int i = 0; ok && i < a.iterations(); ++i) {
            ok = a.iterates[i].rate == b.iterates[i].rate;
            if (i > 0) ok = ok && a.iterates[i].rate >= a.iterates[i - 1].rate - 1e-6;
            ok = ok && a.iterates[i].feasible;
        }
        all &= report("AO run is deterministic, monotone, and feasible", ok);
    }
    return all ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Fluid-antenna SWIPT rate-maximization simulator"};
    app.require_subcommand(1);

    std::string config_path, out_dir = "out", scheme = "PROPOSED", schemes_csv;
    std::uint64_t seed = 1;
    int trials = 0;

    auto* run = app.add_subcommand("run", "Run one alternating-optimization trace");
    run->add_option("--config", config_path, "Config file (key = value grammar)");
    run->add_option("--seed", seed, "Channel seed");
    run->add_option("--out-dir", out_dir, "Output directory");
    run->add_option("--scheme", scheme, "PROPOSED | TFA | RFA | FPA");

    auto* sweep = app.add_subcommand("sweep", "Monte-Carlo parameter sweep, CSV output");
    bool seed_set = false;
    sweep->add_option("--config", config_path, "Config file (key = value grammar)");
    sweep->add_option("--seed", seed, "Base seed (overrides config)")
        ->each([&](const std::string&) { seed_set = true; });
    sweep->add_option("--trials", trials, "Trial count (overrides config)");
    sweep->add_option("--schemes", schemes_csv, "Comma-separated scheme list (overrides config)");
    sweep->add_option("--out-dir", out_dir, "Output directory");

    auto* check = app.add_subcommand("check", "Quick invariant/oracle self-check");
    check->add_option("--seed", seed, "Seed for the check instances");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) return cmd_run(config_path, seed, out_dir, scheme);
        if (sweep->parsed()) return cmd_sweep(config_path, seed, seed_set, trials, schemes_csv, out_dir);
        return cmd_check(seed);
    } catch (const faswipt::ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
