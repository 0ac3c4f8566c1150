#include "diracsim/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include "diracsim/errors.hpp"

namespace diracsim {

namespace {

const double kTwoPi = 6.28318530717958647692;

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    return s;
}

double parse_double(const std::string& where, const std::string& value) {
    const std::string v = trim(value);
    char* end = nullptr;
    const double x = std::strtod(v.c_str(), &end);
    if (v.empty() || end != v.c_str() + v.size())
        throw ValidationError(where + ": cannot parse number from '" + value + "'");
    return x;
}

int parse_int(const std::string& where, const std::string& value) {
    const double x = parse_double(where, value);
    if (x != std::floor(x) || std::abs(x) > 1e9)
        throw ValidationError(where + ": expected an integer, got '" + value + "'");
    return static_cast<int>(x);
}

bool parse_bool(const std::string& where, const std::string& value) {
    const std::string v = lower(trim(value));
    if (v == "true" || v == "on" || v == "yes") return true;
    if (v == "false" || v == "off" || v == "no") return false;
    throw ValidationError(where + ": expected a boolean, got '" + value + "'");
}

std::vector<std::string> split_list(const std::string& value) {
    std::vector<std::string> parts;
    std::string item;
    std::istringstream in(value);
    while (std::getline(in, item, ',')) parts.push_back(trim(item));
    if (parts.empty()) parts.push_back("");
    return parts;
}

std::vector<double> parse_double_list(const std::string& where, const std::string& value) {
    std::vector<double> out;
    for (const auto& p : split_list(value)) out.push_back(parse_double(where, p));
    return out;
}

// One parsed "key = value" occurrence with consumption tracking so unknown
// keys can be reported precisely.
struct KeyValues {
    std::map<std::string, std::string> kv;
    std::string section;

    bool has(const std::string& key) const { return kv.count(key) > 0; }

    std::string take(std::map<std::string, std::string>& seen, const std::string& key) {
        seen[key] = kv.at(key);
        return kv.at(key);
    }
};

} // namespace

std::string to_config_token(Scenario s) {
    switch (s) {
        case Scenario::Free1D: return "free_1d";
        case Scenario::Free2D: return "free_2d";
        case Scenario::Magnetic1D: return "magnetic_1d";
        case Scenario::Magnetic2D: return "magnetic_2d";
        case Scenario::Electro1D: return "electro_1d";
    }
    throw ValidationError("unknown scenario");
}

std::string to_config_token(Tier t) {
    switch (t) {
        case Tier::Ideal: return "ideal";
        case Tier::Full: return "full";
        case Tier::IdealPlusMagnus: return "ideal_plus_magnus";
    }
    throw ValidationError("unknown tier");
}

Scenario scenario_from_token(const std::string& token) {
    const std::string t = lower(trim(token));
    if (t == "free_1d") return Scenario::Free1D;
    if (t == "free_2d") return Scenario::Free2D;
    if (t == "magnetic_1d") return Scenario::Magnetic1D;
    if (t == "magnetic_2d") return Scenario::Magnetic2D;
    if (t == "electro_1d") return Scenario::Electro1D;
    throw ValidationError("run.scenario: unknown scenario '" + token + "'");
}

Tier tier_from_token(const std::string& token) {
    const std::string t = lower(trim(token));
    if (t == "ideal") return Tier::Ideal;
    if (t == "full") return Tier::Full;
    if (t == "ideal_plus_magnus") return Tier::IdealPlusMagnus;
    throw ValidationError("run.tiers: unknown tier '" + token + "'");
}

ScenarioConfig ScenarioConfig::parse(const std::string& text) {
    std::map<std::string, std::map<std::string, std::string>> sections;
    std::string current;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ValidationError("line " + std::to_string(lineno) + ": unterminated section");
            current = lower(trim(line.substr(1, line.size() - 2)));
            if (current != "run" && current != "qubit" && current != "mode1" &&
                current != "mode2" && current != "grid" && current != "analysis")
                throw ValidationError("line " + std::to_string(lineno) + ": unknown section [" +
                                      current + "]");
            sections.try_emplace(current);
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ValidationError("line " + std::to_string(lineno) + ": expected key = value");
        if (current.empty())
            throw ValidationError("line " + std::to_string(lineno) + ": key outside any section");
        const std::string key = lower(trim(line.substr(0, eq)));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw ValidationError("line " + std::to_string(lineno) + ": empty key");
        auto& sec = sections[current];
        if (!sec.emplace(key, value).second)
            throw ValidationError("line " + std::to_string(lineno) + ": duplicate key " + current +
                                  "." + key);
    }

    ScenarioConfig cfg;
    cfg.raw_text = text;

    auto consume = [&](const std::string& section, const std::string& key,
                       std::string* out) -> bool {
        auto sit = sections.find(section);
        if (sit == sections.end()) return false;
        auto kit = sit->second.find(key);
        if (kit == sit->second.end()) return false;
        *out = kit->second;
        sit->second.erase(kit);
        return true;
    };

    std::string v;
    if (!consume("run", "name", &v)) throw ValidationError("run.name is required");
    cfg.name = v;
    if (!consume("run", "scenario", &v)) throw ValidationError("run.scenario is required");
    cfg.scenario = scenario_from_token(v);
    if (!consume("run", "tiers", &v)) throw ValidationError("run.tiers is required");
    for (const auto& tok : split_list(v)) cfg.tiers.push_back(tier_from_token(tok));
    if (consume("run", "method", &v)) {
        cfg.method = lower(trim(v));
        if (cfg.method != "auto" && cfg.method != "rk4" && cfg.method != "eigen")
            throw ValidationError("run.method: expected auto, rk4 or eigen");
    }
    if (consume("run", "convergence_check", &v))
        cfg.convergence_check = parse_bool("run.convergence_check", v);
    if (consume("run", "workers", &v)) cfg.workers = parse_int("run.workers", v);

    if (consume("qubit", "initial", &v)) {
        cfg.qubit_initial = lower(trim(v));
        if (cfg.qubit_initial != "plus" && cfg.qubit_initial != "ground" &&
            cfg.qubit_initial != "excited")
            throw ValidationError("qubit.initial: expected plus, ground or excited");
    }
    if (consume("qubit", "delta_omega_over_2pi_mhz", &v))
        cfg.delta_omega_mhz = parse_double_list("qubit.delta_omega_over_2pi_mhz", v);

    const int want_modes = scenario_modes(cfg.scenario);
    for (int j = 1; j <= want_modes; ++j) {
        const std::string sec = "mode" + std::to_string(j);
        if (sections.find(sec) == sections.end())
            throw ValidationError("section [" + sec + "] is required for this scenario");
        ModeConfig mc;
        if (!consume(sec, "truncation", &v))
            throw ValidationError(sec + ".truncation is required");
        mc.truncation = parse_int(sec + ".truncation", v);
        if (!consume(sec, "chi_over_2pi_mhz", &v))
            throw ValidationError(sec + ".chi_over_2pi_mhz is required");
        mc.chi_mhz = parse_double(sec + ".chi_over_2pi_mhz", v);
        if (!consume(sec, "alpha", &v)) throw ValidationError(sec + ".alpha is required");
        mc.alpha = parse_double(sec + ".alpha", v);
        if (consume(sec, "delta_alpha", &v))
            mc.delta_alpha = parse_double_list(sec + ".delta_alpha", v);
        if (consume(sec, "omega_sb_over_2pi_mhz", &v)) {
            mc.omega_sb_mhz = parse_double_list(sec + ".omega_sb_over_2pi_mhz", v);
            mc.omega_sb_set = true;
        }
        if (consume(sec, "delta_rad", &v)) mc.delta_rad = parse_double(sec + ".delta_rad", v);
        if (consume(sec, "gamma_over_2pi_mhz", &v))
            mc.gamma_mhz = parse_double(sec + ".gamma_over_2pi_mhz", v);
        if (consume(sec, "kappa_over_2pi_mhz", &v))
            mc.kappa_mhz = parse_double(sec + ".kappa_over_2pi_mhz", v);
        if (consume(sec, "initial", &v)) mc.initial = lower(trim(v));
        cfg.modes.push_back(mc);
    }
    if (want_modes == 2 && !cfg.modes[1].omega_sb_set)
        cfg.modes[1].omega_sb_mhz = cfg.modes[0].omega_sb_mhz;

    if (sections.find("grid") == sections.end())
        throw ValidationError("section [grid] is required");
    if (!consume("grid", "t1_us", &v)) throw ValidationError("grid.t1_us is required");
    cfg.grid.t1_us = parse_double("grid.t1_us", v);
    if (consume("grid", "dt_us", &v)) {
        if (lower(trim(v)) == "auto")
            cfg.grid.dt_us = -1;
        else
            cfg.grid.dt_us = parse_double("grid.dt_us", v);
    }
    if (consume("grid", "stride", &v)) cfg.grid.stride = parse_int("grid.stride", v);

    auto& an = cfg.analysis;
    if (consume("analysis", "leak_bound", &v)) an.leak_bound = parse_double("analysis.leak_bound", v);
    if (consume("analysis", "spectrum", &v)) an.spectrum = parse_bool("analysis.spectrum", v);
    if (consume("analysis", "spectrum_column", &v)) an.spectrum_column = trim(v);
    if (consume("analysis", "window", &v)) {
        an.window = lower(trim(v));
        if (an.window != "hann" && an.window != "none")
            throw ValidationError("analysis.window: expected hann or none");
    }
    if (consume("analysis", "min_prominence", &v))
        an.min_prominence = parse_double("analysis.min_prominence", v);
    if (consume("analysis", "peaks_max", &v)) an.peaks_max = parse_int("analysis.peaks_max", v);
    if (consume("analysis", "marginal", &v)) an.marginal = parse_bool("analysis.marginal", v);
    if (consume("analysis", "marginal_mode", &v))
        an.marginal_mode = parse_int("analysis.marginal_mode", v);
    if (consume("analysis", "marginal_points", &v))
        an.marginal_points = parse_int("analysis.marginal_points", v);
    if (consume("analysis", "marginal_halfwidth", &v))
        an.marginal_halfwidth = parse_double("analysis.marginal_halfwidth", v);
    if (consume("analysis", "transmission", &v))
        an.transmission = parse_bool("analysis.transmission", v);
    if (consume("analysis", "deviation", &v)) an.deviation = parse_bool("analysis.deviation", v);
    if (consume("analysis", "deviation_column", &v)) an.deviation_column = trim(v);

    for (const auto& [sec, kv] : sections)
        for (const auto& [key, val] : kv)
            throw ValidationError("unknown key " + sec + "." + key);

    cfg.validate();
    return cfg;
}

ScenarioConfig ScenarioConfig::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open config file " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str());
}

void ScenarioConfig::validate() const {
    if (name.empty()) throw ValidationError("run.name must not be empty");
    for (char c : name)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '-' && c != '_')
            throw ValidationError("run.name may contain only letters, digits, - and _");
    if (tiers.empty()) throw ValidationError("run.tiers must not be empty");
    for (std::size_t i = 0; i < tiers.size(); ++i)
        for (std::size_t j = i + 1; j < tiers.size(); ++j)
            if (tiers[i] == tiers[j]) throw ValidationError("run.tiers lists a tier twice");
    if (workers < 1) throw ValidationError("run.workers must be at least 1");
    if (static_cast<int>(modes.size()) != scenario_modes(scenario))
        throw ValidationError("mode section count does not match the scenario");

    int sweeps = delta_omega_mhz.size() > 1 ? 1 : 0;
    sweeps += modes[0].delta_alpha.size() > 1 ? 1 : 0;
    sweeps += modes[0].omega_sb_mhz.size() > 1 ? 1 : 0;
    if (sweeps > 1)
        throw ValidationError("at most one parameter may carry a sweep list");
    if (delta_omega_mhz.empty() || modes[0].delta_alpha.empty() || modes[0].omega_sb_mhz.empty())
        throw ValidationError("sweep lists must not be empty");
    if (modes.size() == 2) {
        if (modes[1].delta_alpha.size() != 1)
            throw ValidationError("mode2.delta_alpha cannot carry a sweep list");
        if (modes[1].omega_sb_mhz.size() != 1 && modes[1].omega_sb_mhz != modes[0].omega_sb_mhz)
            throw ValidationError("mode2.omega_sb_over_2pi_mhz cannot carry its own sweep list");
    }

    if (!(grid.t1_us > 0)) throw ValidationError("grid.t1_us must be positive");
    if (grid.stride < 1) throw ValidationError("grid.stride must be at least 1");
    if (grid.dt_us == 0) throw ValidationError("grid.dt_us must be positive or auto");

    if (!(analysis.leak_bound > 0)) throw ValidationError("analysis.leak_bound must be positive");
    if (analysis.marginal_mode < 1 || analysis.marginal_mode > static_cast<int>(modes.size()))
        throw ValidationError("analysis.marginal_mode is out of range");
    if (analysis.transmission && scenario != Scenario::Electro1D)
        throw ValidationError("analysis.transmission requires the electrostatic scenario");
    if (analysis.deviation) {
        const bool has_full = std::count(tiers.begin(), tiers.end(), Tier::Full) > 0;
        if (!has_full || tiers.size() < 2)
            throw ValidationError("analysis.deviation needs the full tier plus a reference tier");
    }

    for (std::size_t p = 0; p < n_points(); ++p)
        for (Tier t : tiers) model_at(p, t).validate();
}

std::string ScenarioConfig::sweep_key() const {
    if (delta_omega_mhz.size() > 1) return "qubit.delta_omega_over_2pi_mhz";
    if (modes[0].delta_alpha.size() > 1) return "mode1.delta_alpha";
    if (modes[0].omega_sb_mhz.size() > 1) return "mode1.omega_sb_over_2pi_mhz";
    return "";
}

std::size_t ScenarioConfig::n_points() const {
    return std::max({delta_omega_mhz.size(), modes[0].delta_alpha.size(),
                     modes[0].omega_sb_mhz.size()});
}

double ScenarioConfig::sweep_value(std::size_t point) const {
    if (delta_omega_mhz.size() > 1) return delta_omega_mhz[point];
    if (modes[0].delta_alpha.size() > 1) return modes[0].delta_alpha[point];
    if (modes[0].omega_sb_mhz.size() > 1) return modes[0].omega_sb_mhz[point];
    return 0;
}

ModelSpec ScenarioConfig::model_at(std::size_t point, Tier tier) const {
    if (point >= n_points()) throw ValidationError("sweep point out of range");
    auto pick = [&](const std::vector<double>& list) {
        return list.size() > 1 ? list[point] : list[0];
    };

    ModelSpec m;
    m.scenario = scenario;
    m.tier = tier;
    m.delta_omega = kTwoPi * pick(delta_omega_mhz);
    std::vector<int> trunc;
    for (std::size_t j = 0; j < modes.size(); ++j) {
        const ModeConfig& mc = modes[j];
        m.chi.push_back(kTwoPi * mc.chi_mhz);
        SidebandDrive d;
        d.alpha = mc.alpha;
        d.delta_alpha = j == 0 ? pick(mc.delta_alpha) : mc.delta_alpha[0];
        d.omega_sb = kTwoPi * (j == 0 ? pick(mc.omega_sb_mhz) : mc.omega_sb_mhz[0]);
        d.delta = mc.delta_rad;
        d.gamma = kTwoPi * mc.gamma_mhz;
        d.kappa = kTwoPi * mc.kappa_mhz;
        m.drives.push_back(d);
        trunc.push_back(mc.truncation);
    }
    if (modes.size() == 2 && modes[0].omega_sb_mhz.size() > 1)
        m.drives[1].omega_sb = m.drives[0].omega_sb;
    m.space = HilbertSpec(static_cast<int>(modes.size()), trunc);
    return m;
}

Vec ScenarioConfig::initial_state(std::size_t point) const {
    const ModelSpec m = model_at(point, tiers[0]);
    Eigen::Vector2cd q;
    if (qubit_initial == "plus")
        q = plus_state();
    else if (qubit_initial == "ground")
        q = ground_state();
    else
        q = bloch_state(0, 0);

    std::vector<Vec> mode_states;
    for (std::size_t j = 0; j < modes.size(); ++j) {
        const std::string& spec = modes[j].initial;
        const int N = modes[j].truncation;
        if (spec == "vacuum") {
            mode_states.push_back(vacuum_state(N));
            continue;
        }
        const auto open = spec.find('(');
        if (open == std::string::npos || spec.back() != ')')
            throw ValidationError("mode" + std::to_string(j + 1) +
                                  ".initial: expected vacuum, fock(n) or coherent(re[,im])");
        const std::string kind = spec.substr(0, open);
        const std::string args = spec.substr(open + 1, spec.size() - open - 2);
        const std::string where = "mode" + std::to_string(j + 1) + ".initial";
        if (kind == "fock") {
            mode_states.push_back(fock_state(parse_int(where, args), N));
        } else if (kind == "coherent") {
            const auto parts = split_list(args);
            if (parts.size() > 2) throw ValidationError(where + ": too many arguments");
            const double re = parse_double(where, parts[0]);
            const double im = parts.size() == 2 ? parse_double(where, parts[1]) : 0.0;
            mode_states.push_back(coherent_state(cplx(re, im), N));
        } else {
            throw ValidationError(where + ": unknown state '" + kind + "'");
        }
    }
    return product_state(q, mode_states, m.space);
}

std::string ScenarioConfig::resolve_method(const ModelSpec& m) const {
    if (m.tier == Tier::Full) {
        if (method == "eigen")
            throw ValidationError("run.method: the spectral method cannot integrate a "
                                  "time-dependent model");
        return "rk4";
    }
    if (method != "auto") return method;
    return m.space.total_dim() <= 1200 ? "eigen" : "rk4";
}

TimeGrid ScenarioConfig::grid_for(const ModelSpec& m, const std::string& resolved_method) const {
    TimeGrid g;
    g.t1 = grid.t1_us;
    g.stride = grid.stride;
    if (grid.dt_us > 0) {
        g.dt = grid.dt_us;
    } else if (m.tier == Tier::Full) {
        double omega_max = 0;
        for (const auto& d : m.drives) omega_max = std::max(omega_max, d.omega_sb);
        g.dt = kTwoPi / omega_max / 40;
    } else {
        g.dt = 0.01;
    }
    // Snap so the span is an integer number of steps divisible by the stride.
    const double block = g.dt * g.stride;
    const long blocks = std::max(1L, static_cast<long>(std::llround(g.t1 / block)));
    g.dt = g.t1 / (static_cast<double>(blocks) * g.stride);
    g.validate();
    if (resolved_method == "rk4") check_grid_resolves(g, m);
    return g;
}

} // namespace diracsim
