#ifndef FASWIPT_CONFIG_HPP
#define FASWIPT_CONFIG_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "faswipt/ao.hpp"
#include "faswipt/types.hpp"

namespace faswipt {

enum class SweepAxis { none, pmax_db, region_A_over_lambda, qbar_db, M };

inline const char* to_string(SweepAxis a) {
    switch (a) {
        case SweepAxis::pmax_db: return "pmax_db";
        case SweepAxis::region_A_over_lambda: return "region_A_over_lambda";
        case SweepAxis::qbar_db: return "qbar_db";
        case SweepAxis::M: return "M";
        default: return "none";
    }
}

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

/// Experiment description. Defaults reproduce the baseline simulation setup:
/// M=4, lambda=1 m, A=4*lambda, D=lambda/2, tau=0.5, nu=1, 3 paths per link,
/// unit noise powers, P_max at 5 dB and Q_bar at 0 dB over the noise floor.
struct ExperimentConfig {
    int m = 4;
    double lambda = 1.0;
    double a_over_lambda = 4.0;
    double d_over_lambda = 0.5;
    double tau = 0.5;
    double nu = 1.0;
    int paths = 3;
    double sigma2_i = 1.0;
    double sigma2_e = 1.0;
    double pmax_db = 5.0;
    double qbar_db = 0.0;

    int trials = 100;
    std::uint64_t base_seed = 1;
    int max_outer = 50;
    double eps_outer = 1e-4;
    int n_randomization = 100;

    SweepAxis sweep_axis = SweepAxis::none;
    std::vector<double> sweep_values;
    std::vector<SchemeId> schemes = {SchemeId::PROPOSED, SchemeId::TFA, SchemeId::RFA,
                                     SchemeId::FPA};

    /// Scenario at the configured defaults (dB fields converted once, here).
    Scenario make_scenario() const {
        Scenario sc;
        sc.M = m;
        sc.lambda = lambda;
        sc.tx_region = a_over_lambda * lambda / 2.0;
        sc.rx_region_I = a_over_lambda * lambda / 4.0;
        sc.rx_region_E = a_over_lambda * lambda / 4.0;
        sc.D = d_over_lambda * lambda;
        sc.tau = tau;
        sc.nu = nu;
        sc.q_tI = sc.q_tE = sc.q_rI = sc.q_rE = paths;
        sc.sigma2_I = sigma2_i;
        sc.sigma2_E = sigma2_e;
        sc.P_max = sigma2_i * db_to_linear(pmax_db);
        sc.Q_bar = sigma2_e * db_to_linear(qbar_db);
        sc.validate();
        return sc;
    }

    /// Scenario at one sweep point.
    Scenario scenario_at(double value) const {
        ExperimentConfig cfg = *this;
        switch (sweep_axis) {
            case SweepAxis::pmax_db: cfg.pmax_db = value; break;
            case SweepAxis::qbar_db: cfg.qbar_db = value; break;
            case SweepAxis::region_A_over_lambda: cfg.a_over_lambda = value; break;
            case SweepAxis::M: cfg.m = static_cast<int>(std::lround(value)); break;
            case SweepAxis::none: break;
        }
        return cfg.make_scenario();
    }

    AOOptions ao_options() const {
        AOOptions opt;
        opt.eps_outer = eps_outer;
        opt.max_outer = max_outer;
        opt.n_randomization = n_randomization;
        return opt;
    }

    void validate() const {
        if (trials < 1) throw ConfigError("config: trials must be >= 1");
        if (max_outer < 0) throw ConfigError("config: max_outer must be >= 0");
        if (!(eps_outer > 0)) throw ConfigError("config: eps_outer must be > 0");
        if (n_randomization < 1) throw ConfigError("config: n_randomization must be >= 1");
        if (schemes.empty()) throw ConfigError("config: schemes must not be empty");
        if (sweep_axis != SweepAxis::none && sweep_values.empty())
            throw ConfigError("config: sweep_values required when sweep_axis is set");
        for (size_t i = 1; i < sweep_values.size(); ++i)
            if (!(sweep_values[i] > sweep_values[i - 1]))
                throw ConfigError("config: sweep_values must be strictly increasing");
        make_scenario();  // scenario invariants
        if (sweep_axis != SweepAxis::none)
            for (double v : sweep_values) scenario_at(v);
    }

    /// Fully-resolved key/value document, echoed next to the outputs.
    std::string resolved_text() const;
};

namespace detail {

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    const auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? "" : s.substr(b, e - b + 1);
}

inline std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

inline double parse_double(const std::string& key, const std::string& v) {
    try {
        size_t pos = 0;
        const double x = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("");
        return x;
    } catch (...) {
        throw ConfigError("config: key '" + key + "': not a number: '" + v + "'");
    }
}

inline long long parse_int(const std::string& key, const std::string& v) {
    try {
        size_t pos = 0;
        const long long x = std::stoll(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("");
        return x;
    } catch (...) {
        throw ConfigError("config: key '" + key + "': not an integer: '" + v + "'");
    }
}

inline SchemeId parse_scheme(const std::string& s) {
    if (s == "PROPOSED") return SchemeId::PROPOSED;
    if (s == "TFA") return SchemeId::TFA;
    if (s == "RFA") return SchemeId::RFA;
    if (s == "FPA") return SchemeId::FPA;
    throw ConfigError("config: unknown scheme '" + s + "'");
}

inline SweepAxis parse_axis(const std::string& s) {
    if (s == "none") return SweepAxis::none;
    if (s == "pmax_db") return SweepAxis::pmax_db;
    if (s == "region_A_over_lambda") return SweepAxis::region_A_over_lambda;
    if (s == "qbar_db") return SweepAxis::qbar_db;
    if (s == "M") return SweepAxis::M;
    throw ConfigError("config: unknown sweep_axis '" + s + "'");
}

}  // namespace detail

/// Parse the key/value config grammar: one `key = value` per line, `#`
/// comments, comma-separated lists. Unset keys keep their defaults; unknown
/// keys are rejected with the offending line number.
inline ExperimentConfig parse_config(const std::string& text) {
    ExperimentConfig cfg;
    std::stringstream ss(text);
    std::string line;
    int lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config: line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = detail::trim(line.substr(0, eq));
        const std::string val = detail::trim(line.substr(eq + 1));
        if (val.empty())
            throw ConfigError("config: line " + std::to_string(lineno) + ": empty value for '" +
                              key + "'");

        if (key == "m") cfg.m = static_cast<int>(detail::parse_int(key, val));
        else if (key == "lambda") cfg.lambda = detail::parse_double(key, val);
        else if (key == "a_over_lambda") cfg.a_over_lambda = detail::parse_double(key, val);
        else if (key == "d_over_lambda") cfg.d_over_lambda = detail::parse_double(key, val);
        else if (key == "tau") cfg.tau = detail::parse_double(key, val);
        else if (key == "nu") cfg.nu = detail::parse_double(key, val);
        else if (key == "paths") cfg.paths = static_cast<int>(detail::parse_int(key, val));
        else if (key == "sigma2_i") cfg.sigma2_i = detail::parse_double(key, val);
        else if (key == "sigma2_e") cfg.sigma2_e = detail::parse_double(key, val);
        else if (key == "pmax_db") cfg.pmax_db = detail::parse_double(key, val);
        else if (key == "qbar_db") cfg.qbar_db = detail::parse_double(key, val);
        else if (key == "trials") cfg.trials = static_cast<int>(detail::parse_int(key, val));
        else if (key == "base_seed")
            cfg.base_seed = static_cast<std::uint64_t>(detail::parse_int(key, val));
        else if (key == "max_outer") cfg.max_outer = static_cast<int>(detail::parse_int(key, val));
        else if (key == "eps_outer") cfg.eps_outer = detail::parse_double(key, val);
        else if (key == "n_randomization")
            cfg.n_randomization = static_cast<int>(detail::parse_int(key, val));
        else if (key == "sweep_axis") cfg.sweep_axis = detail::parse_axis(val);
        else if (key == "sweep_values") {
            cfg.sweep_values.clear();
            for (const std::string& v : detail::split_list(val))
                cfg.sweep_values.push_back(detail::parse_double(key, v));
        } else if (key == "schemes") {
            cfg.schemes.clear();
            for (const std::string& v : detail::split_list(val))
                cfg.schemes.push_back(detail::parse_scheme(v));
        } else {
            throw ConfigError("config: line " + std::to_string(lineno) + ": unknown key '" + key +
                              "'");
        }
    }
    cfg.validate();
    return cfg;
}

inline ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

inline std::string ExperimentConfig::resolved_text() const {
    std::ostringstream out;
    out.precision(17);
    out << "m = " << m << "\n"
        << "lambda = " << lambda << "\n"
        << "a_over_lambda = " << a_over_lambda << "\n"
        << "d_over_lambda = " << d_over_lambda << "\n"
        << "tau = " << tau << "\n"
        << "nu = " << nu << "\n"
        << "paths = " << paths << "\n"
        << "sigma2_i = " << sigma2_i << "\n"
        << "sigma2_e = " << sigma2_e << "\n"
        << "pmax_db = " << pmax_db << "\n"
        << "qbar_db = " << qbar_db << "\n"
        << "trials = " << trials << "\n"
        << "base_seed = " << base_seed << "\n"
        << "max_outer = " << max_outer << "\n"
        << "eps_outer = " << eps_outer << "\n"
        << "n_randomization = " << n_randomization << "\n"
        << "sweep_axis = " << to_string(sweep_axis) << "\n";
    if (!sweep_values.empty()) {
        out << "sweep_values =";
        for (size_t i = 0; i < sweep_values.size(); ++i)
            out << (i ? "," : " ") << sweep_values[i];
        out << "\n";
    }
    out << "schemes =";
    for (size_t i = 0; i < schemes.size(); ++i) out << (i ? "," : " ") << to_string(schemes[i]);
    out << "\n";
    return out.str();
}

}  // namespace faswipt

#endif
