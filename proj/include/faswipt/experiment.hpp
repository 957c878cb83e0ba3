#ifndef FASWIPT_EXPERIMENT_HPP
#define FASWIPT_EXPERIMENT_HPP

#include <atomic>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <thread>
#include <vector>

#include "faswipt/ao.hpp"
#include "faswipt/channel.hpp"
#include "faswipt/config.hpp"
#include "faswipt/csv.hpp"
#include "faswipt/types.hpp"

namespace faswipt {

struct TrialOutcome {
    bool infeasible = false;
    double final_rate = 0.0;
    int iterations = 0;
};

struct SweepRow {
    SweepAxis axis = SweepAxis::none;
    double sweep_value = 0.0;
    SchemeId scheme = SchemeId::PROPOSED;
    double mean_rate = 0.0;
    double std_rate = 0.0;
    double mean_iters = 0.0;
    int n_trials = 0;
    int n_infeasible = 0;
};

struct ExperimentResult {
    std::vector<SweepRow> rows;
    // Per-trial final rates, indexed like rows; kept for statistical checks.
    std::vector<std::vector<TrialOutcome>> trial_outcomes;
};

namespace detail {

inline SweepRow aggregate(SweepAxis axis, double value, SchemeId scheme,
                          const std::vector<TrialOutcome>& outcomes) {
    SweepRow row;
    row.axis = axis;
    row.sweep_value = value;
    row.scheme = scheme;
    row.n_trials = static_cast<int>(outcomes.size());
    double sum = 0.0, sum_iters = 0.0;
    int n = 0;
    for (const TrialOutcome& o : outcomes) {
        if (o.infeasible) {
            ++row.n_infeasible;
            continue;
        }
        sum += o.final_rate;
        sum_iters += o.iterations;
        ++n;
    }
    if (n > 0) {
        row.mean_rate = sum / n;
        row.mean_iters = sum_iters / n;
    }
    if (n > 1) {
        double ss = 0.0;
        for (const TrialOutcome& o : outcomes)
            if (!o.infeasible) ss += (o.final_rate - row.mean_rate) * (o.final_rate - row.mean_rate);
        row.std_rate = std::sqrt(ss / (n - 1));
    }
    return row;
}

/// Run `fn(i)` for i in [0, n) on a worker pool. Each task writes to its own
/// slot, so the merged result does not depend on scheduling.
template <typename Fn>
inline void parallel_for(int n, Fn&& fn) {
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const unsigned workers = std::min<unsigned>(hw, static_cast<unsigned>(n));
    if (workers <= 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
        });
    for (auto& th : pool) th.join();
}

}  // namespace detail

/// Run the full Monte-Carlo experiment: for every sweep value and scheme,
/// `trials` independent channel draws seeded base_seed + trial index. The
/// channel draw for a given trial is shared across schemes and sweep points.
inline ExperimentResult run_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    std::vector<double> values = cfg.sweep_values;
    if (cfg.sweep_axis == SweepAxis::none) values = {0.0};

    ExperimentResult result;
    const int n_cells = static_cast<int>(values.size() * cfg.schemes.size());
    result.trial_outcomes.assign(n_cells, std::vector<TrialOutcome>(cfg.trials));
    const AOOptions opt = cfg.ao_options();

    const int n_tasks = n_cells * cfg.trials;
    detail::parallel_for(n_tasks, [&](int task) {
        const int cell = task / cfg.trials;
        const int trial = task % cfg.trials;
        const size_t vi = static_cast<size_t>(cell) / cfg.schemes.size();
        const size_t si = static_cast<size_t>(cell) % cfg.schemes.size();
        const Scenario sc = cfg.scenario_at(values[vi]);
        const std::uint64_t seed = cfg.base_seed + static_cast<std::uint64_t>(trial);
        const auto [paths_I, paths_E] = sample_scenario_paths(sc, seed);
        const AOTrace trace = run_ao(sc, paths_I, paths_E, cfg.schemes[si], seed, opt);
        TrialOutcome& out = result.trial_outcomes[cell][trial];
        out.infeasible = trace.infeasible_trial;
        out.final_rate = trace.final_rate();
        out.iterations = trace.iterations();
    });

    for (size_t vi = 0; vi < values.size(); ++vi)
        for (size_t si = 0; si < cfg.schemes.size(); ++si) {
            const int cell = static_cast<int>(vi * cfg.schemes.size() + si);
            result.rows.push_back(detail::aggregate(cfg.sweep_axis, values[vi], cfg.schemes[si],
                                                    result.trial_outcomes[cell]));
        }
    return result;
}

inline std::string sweep_csv_text(const std::vector<SweepRow>& rows) {
    std::string out =
        "sweep_axis,sweep_value,scheme,mean_rate,std_rate,mean_iters,n_trials,n_infeasible\n";
    for (const SweepRow& r : rows) {
        out += to_string(r.axis);
        out += ',';
        out += format_decimal(r.sweep_value);
        out += ',';
        out += to_string(r.scheme);
        out += ',';
        out += format_decimal(r.mean_rate);
        out += ',';
        out += format_decimal(r.std_rate);
        out += ',';
        out += format_decimal(r.mean_iters);
        out += ',';
        out += std::to_string(r.n_trials);
        out += ',';
        out += std::to_string(r.n_infeasible);
        out += '\n';
    }
    return out;
}

inline std::string trace_csv_text(const AOTrace& trace) {
    std::string out = "iter,rate,harvested_power,feasible\n";
    for (const AOIterate& it : trace.iterates) {
        out += std::to_string(it.iteration);
        out += ',';
        out += format_decimal(it.rate);
        out += ',';
        out += format_decimal(it.harvested_power);
        out += ',';
        out += it.feasible ? '1' : '0';
        out += '\n';
    }
    return out;
}

namespace detail {

inline void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    out << text;
}

}  // namespace detail

struct NamedTrace {
    SchemeId scheme = SchemeId::PROPOSED;
    std::uint64_t seed = 0;
    AOTrace trace;
};

/// Write sweep.csv and one trace_<scheme>_<seed>.csv per captured trace.
inline void emit_outputs(const std::vector<SweepRow>& rows, const std::vector<NamedTrace>& traces,
                         const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);
    detail::write_file(out_dir / "sweep.csv", sweep_csv_text(rows));
    for (const NamedTrace& nt : traces) {
        const std::string name = "trace_" + std::string(to_string(nt.scheme)) + "_" +
                                 std::to_string(nt.seed) + ".csv";
        detail::write_file(out_dir / name, trace_csv_text(nt.trace));
    }
}

}  // namespace faswipt

#endif
