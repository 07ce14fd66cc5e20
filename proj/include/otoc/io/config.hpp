#pragma once

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "otoc/engines/scheme.hpp"
#include "otoc/model/bath_discretization.hpp"
#include "otoc/model/spin_chain.hpp"

namespace otoc::io {

/// Configuration problem; `key` names the offending entry.
struct schema_error : std::runtime_error {
    std::string key;
    schema_error(std::string k, const std::string& msg)
        : std::runtime_error("config key '" + k + "': " + msg), key(std::move(k)) {}
};

enum class Engine { exact, influence, bound };

inline const char* engine_name(Engine e) {
    switch (e) {
        case Engine::exact: return "exact";
        case Engine::influence: return "influence";
        case Engine::bound: return "bound";
    }
    return "?";
}

enum class InitialStateKind { maximally_mixed, ground, basis };

struct InitialState {
    InitialStateKind kind = InitialStateKind::maximally_mixed;
    long basis_label = 0;
};

struct GridSpec {
    double t_min = 0.0;
    double t_max = 0.0;
    int points = 1;
};

struct RunConfig {
    engines::Scheme scheme = engines::Scheme::closed;
    Engine engine = Engine::exact;
    model::SpinChainSpec chain;
    model::ObservableSpec w, v;
    InitialState initial;
    std::optional<model::BathSpec> bath;
    GridSpec grid;
    std::string output = "otoc_out.csv";
};

// --------------------------- key = value parsing ------------------------------

namespace detail {

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

class KeyValues {
public:
    void insert(const std::string& key, const std::string& value) {
        if (map_.count(key)) throw schema_error(key, "duplicate key");
        map_[key] = value;
    }

    bool has(const std::string& key) const { return map_.count(key) != 0; }

    std::string require(const std::string& key) {
        auto it = map_.find(key);
        if (it == map_.end()) throw schema_error(key, "required key missing");
        used_.push_back(key);
        return it->second;
    }

    std::optional<std::string> take(const std::string& key) {
        auto it = map_.find(key);
        if (it == map_.end()) return std::nullopt;
        used_.push_back(key);
        return it->second;
    }

    double require_double(const std::string& key) { return to_double(key, require(key)); }

    double take_double(const std::string& key, double fallback) {
        auto v = take(key);
        return v ? to_double(key, *v) : fallback;
    }

    long require_int(const std::string& key) { return to_int(key, require(key)); }

    long take_int(const std::string& key, long fallback) {
        auto v = take(key);
        return v ? to_int(key, *v) : fallback;
    }

    std::vector<double> take_list(const std::string& key) {
        auto v = take(key);
        if (!v) return {};
        std::vector<double> out;
        std::stringstream ss(*v);
        std::string item;
        while (std::getline(ss, item, ',')) {
            item = trim(item);
            if (item.empty()) continue;
            out.push_back(to_double(key, item));
        }
        return out;
    }

    void check_all_used() const {
        for (const auto& [k, v] : map_) {
            if (std::find(used_.begin(), used_.end(), k) == used_.end()) {
                throw schema_error(k, "unknown key");
            }
        }
    }

private:
    double to_double(const std::string& key, const std::string& s) {
        try {
            std::size_t pos = 0;
            const double v = std::stod(s, &pos);
            if (pos != s.size()) throw std::invalid_argument("trailing characters");
            return v;
        } catch (const std::exception&) {
            throw schema_error(key, "expected a number, got '" + s + "'");
        }
    }
    long to_int(const std::string& key, const std::string& s) {
        try {
            std::size_t pos = 0;
            const long v = std::stol(s, &pos);
            if (pos != s.size()) throw std::invalid_argument("trailing characters");
            return v;
        } catch (const std::exception&) {
            throw schema_error(key, "expected an integer, got '" + s + "'");
        }
    }

    std::map<std::string, std::string> map_;
    mutable std::vector<std::string> used_;
};

inline KeyValues read_key_values(std::istream& in) {
    KeyValues kv;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw schema_error("line " + std::to_string(line_no), "expected key = value");
        }
        kv.insert(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return kv;
}

inline model::ObservableSpec parse_observable(const std::string& key, const std::string& text) {
    model::ObservableSpec obs;
    std::stringstream ss(text);
    std::string tok;
    while (ss >> tok) {
        if (tok == "identity" || tok == "I") continue;
        if (tok.size() < 2) throw schema_error(key, "bad factor '" + tok + "' (want e.g. x0)");
        model::PauliAxis axis;
        switch (std::tolower(tok[0])) {
            case 'x': axis = model::PauliAxis::x; break;
            case 'y': axis = model::PauliAxis::y; break;
            case 'z': axis = model::PauliAxis::z; break;
            default: throw schema_error(key, "bad axis in '" + tok + "'");
        }
        try {
            obs.factors.push_back({std::stoi(tok.substr(1)), axis});
        } catch (const std::exception&) {
            throw schema_error(key, "bad site index in '" + tok + "'");
        }
    }
    return obs;
}

} // namespace detail

/// Parses the key = value configuration format. All frequencies are in units
/// of the spectral cutoff, temperatures as beta * cutoff, times as cutoff * t.
inline RunConfig parse_run_config(std::istream& in) {
    auto kv = detail::read_key_values(in);
    RunConfig cfg;

    {
        const std::string engine = kv.require("engine");
        if (engine == "exact") cfg.engine = Engine::exact;
        else if (engine == "influence") cfg.engine = Engine::influence;
        else if (engine == "bound") cfg.engine = Engine::bound;
        else throw schema_error("engine", "expected exact | influence | bound");
    }
    {
        const std::string scheme = kv.require("scheme");
        try {
            cfg.scheme = engines::scheme_from_name(scheme);
        } catch (const std::exception&) {
            throw schema_error("scheme", "expected closed | fbte | pbte");
        }
    }

    cfg.chain.n_sites = static_cast<int>(kv.require_int("chain.n"));
    if (cfg.chain.n_sites < 1) throw schema_error("chain.n", "must be >= 1");
    {
        const std::string fam = kv.take("chain.family").value_or("ising_zz");
        if (fam == "ising_zz") cfg.chain.family = model::ChainFamily::ising_zz;
        else if (fam == "transverse_ising") cfg.chain.family = model::ChainFamily::transverse_ising;
        else if (fam == "xxz") cfg.chain.family = model::ChainFamily::xxz;
        else if (fam == "custom_diagonal") cfg.chain.family = model::ChainFamily::custom_diagonal;
        else throw schema_error("chain.family", "unknown family '" + fam + "'");
    }
    cfg.chain.couplings = kv.take_list("chain.couplings");
    cfg.chain.fields_z = kv.take_list("chain.fields_z");
    cfg.chain.fields_x = kv.take_list("chain.fields_x");
    cfg.chain.anisotropy = kv.take_double("chain.anisotropy", 1.0);
    cfg.chain.diagonal = kv.take_list("chain.diagonal");
    try {
        model::validate_chain(cfg.chain);
    } catch (const std::exception& e) {
        throw schema_error("chain", e.what());
    }

    cfg.w = detail::parse_observable("observable.w", kv.require("observable.w"));
    cfg.v = detail::parse_observable("observable.v", kv.require("observable.v"));
    try {
        model::validate_observable(cfg.w, cfg.chain.n_sites);
    } catch (const std::exception& e) {
        throw schema_error("observable.w", e.what());
    }
    try {
        model::validate_observable(cfg.v, cfg.chain.n_sites);
    } catch (const std::exception& e) {
        throw schema_error("observable.v", e.what());
    }

    {
        const std::string init = kv.take("initial_state").value_or("maximally_mixed");
        if (init == "maximally_mixed") cfg.initial.kind = InitialStateKind::maximally_mixed;
        else if (init == "ground") cfg.initial.kind = InitialStateKind::ground;
        else if (init.rfind("basis:", 0) == 0) {
            cfg.initial.kind = InitialStateKind::basis;
            try {
                cfg.initial.basis_label = std::stol(init.substr(6));
            } catch (const std::exception&) {
                throw schema_error("initial_state", "bad basis label '" + init + "'");
            }
            const long dim = 1L << cfg.chain.n_sites;
            if (cfg.initial.basis_label < 0 || cfg.initial.basis_label >= dim) {
                throw schema_error("initial_state", "basis label out of range");
            }
        } else {
            throw schema_error("initial_state",
                               "expected maximally_mixed | ground | basis:<label>");
        }
    }

    const bool has_bath = kv.has("bath.lambda") || kv.has("bath.s") || kv.has("bath.beta") ||
                          kv.has("bath.mode_omegas");
    if (has_bath) {
        model::BathSpec bath;
        const double s = kv.take_double("bath.s", 1.0);
        if (!(s > 0.0)) throw schema_error("bath.s", "must be > 0");
        bath.spectral = bath::SpectralDensity(s, 1.0);
        bath.lambda = kv.take_double("bath.lambda", 0.0);
        if (bath.lambda < 0.0) throw schema_error("bath.lambda", "must be >= 0");
        bath.lambda_per_site = kv.take_list("bath.lambda_per_site");
        if (!bath.lambda_per_site.empty() &&
            bath.lambda_per_site.size() != static_cast<std::size_t>(cfg.chain.n_sites)) {
            throw schema_error("bath.lambda_per_site", "needs one entry per site");
        }
        bath.beta = kv.take_double("bath.beta", 1.0);
        if (!(bath.beta > 0.0)) throw schema_error("bath.beta", "must be > 0");
        bath.modes_per_site = static_cast<int>(kv.take_int("bath.modes_per_site", 1));
        if (bath.modes_per_site < 1) throw schema_error("bath.modes_per_site", "must be >= 1");
        bath.n_max = static_cast<int>(kv.take_int("bath.n_max", 8));
        if (bath.n_max < 2) throw schema_error("bath.n_max", "must be >= 2");
        bath.omega_max = kv.take_double("bath.omega_max", 0.0);
        const auto mode_w = kv.take_list("bath.mode_omegas");
        const auto mode_c = kv.take_list("bath.mode_couplings");
        if (mode_w.size() != mode_c.size()) {
            throw schema_error("bath.mode_couplings", "length must match bath.mode_omegas");
        }
        for (std::size_t i = 0; i < mode_w.size(); ++i) {
            if (!(mode_w[i] > 0.0)) throw schema_error("bath.mode_omegas", "must be > 0");
            bath.explicit_modes.push_back({mode_w[i], mode_c[i]});
        }
        if (!bath.explicit_modes.empty()) {
            bath.modes_per_site = static_cast<int>(bath.explicit_modes.size());
        }
        cfg.bath = bath;
    }

    cfg.grid.t_min = kv.take_double("grid.t_min", 0.0);
    cfg.grid.t_max = kv.take_double("grid.t_max", cfg.grid.t_min);
    cfg.grid.points = static_cast<int>(kv.take_int("grid.points", 1));
    if (cfg.grid.points < 1) throw schema_error("grid.points", "must be >= 1");
    if (cfg.grid.points > 1 && !(cfg.grid.t_max > cfg.grid.t_min)) {
        throw schema_error("grid.t_max", "must exceed grid.t_min for multi-point grids");
    }
    if (cfg.grid.t_min < 0.0) throw schema_error("grid.t_min", "must be >= 0");

    cfg.output = kv.take("output").value_or("otoc_out.csv");

    // Cross-field requirements.
    if (cfg.engine == Engine::bound && !cfg.bath) {
        throw schema_error("bath.lambda", "bound engine requires a bath section");
    }
    if (cfg.engine == Engine::influence) {
        if (!cfg.bath) throw schema_error("bath.lambda", "influence engine requires a bath");
        if (cfg.scheme == engines::Scheme::closed) {
            throw schema_error("scheme", "influence engine requires fbte or pbte");
        }
    }
    if (cfg.engine == Engine::exact && cfg.scheme != engines::Scheme::closed && !cfg.bath) {
        throw schema_error("bath.lambda", "open schemes require a bath section");
    }

    kv.check_all_used();
    return cfg;
}

inline RunConfig parse_run_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw schema_error("config", "cannot read file '" + path + "'");
    return parse_run_config(in);
}

inline std::vector<double> grid_times(const GridSpec& g) {
    std::vector<double> t(static_cast<std::size_t>(g.points));
    if (g.points == 1) {
        t[0] = g.t_min;
        return t;
    }
    for (int i = 0; i < g.points; ++i) {
        t[static_cast<std::size_t>(i)] =
            g.t_min + (g.t_max - g.t_min) * static_cast<double>(i) / (g.points - 1);
    }
    return t;
}

} // namespace otoc::io
