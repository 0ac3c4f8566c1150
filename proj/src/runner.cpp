#include "diracsim/runner.hpp"

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <ostream>
#include <thread>

#include <nlohmann/json.hpp>

#include "diracsim/analysis.hpp"
#include "diracsim/errors.hpp"
#include "diracsim/output.hpp"

namespace diracsim {

namespace {

using ordered_json = nlohmann::ordered_json;
namespace fs = std::filesystem;

struct Job {
    std::size_t point = 0;
    Tier tier = Tier::Ideal;
};

struct JobOutcome {
    std::string method;
    int dim = 0;
    TimeGrid grid;
    long steps = 0;
    double wall_ms = 0;
    long renorm_count = 0;
    double max_step_drift = 0;
    double cumulative_drift = 0;
    double final_leak = 0;
    double halved_step_rms = -1;
    ObservableSeries series;
    std::vector<Peak> peaks;
    bool has_transmission = false;
    TransmissionResult trans;
    std::map<std::string, std::string> files;
};

int resolve_workers(const ScenarioConfig& cfg, int workers_override) {
    int w = cfg.workers;
    if (workers_override > 0) w = workers_override;
    if (const char* env = std::getenv("SIM_WORKERS")) {
        char* end = nullptr;
        const long parsed = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && parsed > 0) w = static_cast<int>(parsed);
    }
    return std::min(w, 64);
}

// All tiers of one sweep point share a grid so their trajectories line up
// row by row; the full tier dictates the step when it participates.
TimeGrid point_grid(const ScenarioConfig& cfg, std::size_t point) {
    Tier strictest = cfg.tiers[0];
    for (Tier t : cfg.tiers)
        if (t == Tier::Full) strictest = t;
    const ModelSpec m = cfg.model_at(point, strictest);
    return cfg.grid_for(m, cfg.resolve_method(m));
}

std::string hex64(std::uint64_t v) {
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

JobOutcome run_job(const ScenarioConfig& cfg, const Job& job, const std::string& out_dir) {
    JobOutcome out;
    const ModelSpec model = cfg.model_at(job.point, job.tier);
    out.method = cfg.resolve_method(model);
    out.dim = model.space.total_dim();
    out.grid = point_grid(cfg, job.point);
    const Vec psi0 = cfg.initial_state(job.point);

    EvolveOptions opts;
    opts.leak_bound = cfg.analysis.leak_bound;

    const auto t_start = std::chrono::steady_clock::now();
    EvolveResult res;
    if (out.method == "eigen") {
        ModelHamiltonian src(model);
        res = evolve_eigen(src.matrix(0), model.space, psi0, out.grid, opts);
    } else {
        ModelHamiltonian src(model);
        res = evolve_unitary(src, model.space, psi0, out.grid, opts);
    }
    out.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                            t_start)
                      .count();
    out.steps = res.steps;
    out.renorm_count = res.renorm_count;
    out.max_step_drift = res.max_step_drift;
    out.cumulative_drift = res.cumulative_drift;
    out.final_leak = res.series.leak.empty() ? 0 : res.series.leak.back();
    out.series = std::move(res.series);

    const std::string tag = "p" + std::to_string(job.point) + "_" + to_config_token(job.tier);
    const std::string traj = "traj_" + tag + ".csv";
    write_series_csv((fs::path(out_dir) / traj).string(), out.series);
    out.files["trajectory"] = traj;

    if (cfg.analysis.spectrum) {
        const auto& col = out.series.column(cfg.analysis.spectrum_column);
        const WindowKind win =
            cfg.analysis.window == "none" ? WindowKind::None : WindowKind::Hann;
        Spectrum spec = fft_spectrum(col, out.series.record_dt(), win);
        const std::string spath = "spectrum_" + tag + ".csv";
        write_csv((fs::path(out_dir) / spath).string(), {"freq_mhz", "amplitude"},
                  {&spec.freq_mhz, &spec.amplitude});
        out.files["spectrum"] = spath;
        out.peaks = find_peaks(spec, cfg.analysis.min_prominence);
        if (static_cast<int>(out.peaks.size()) > cfg.analysis.peaks_max)
            out.peaks.resize(cfg.analysis.peaks_max);
    }

    if (cfg.analysis.marginal || cfg.analysis.transmission) {
        const int mode = cfg.analysis.marginal_mode;
        const double hw = cfg.analysis.marginal_halfwidth;
        MarginalDensity md = quadrature_marginal(res.final_state, mode, model.space,
                                                 cfg.analysis.marginal_points, -hw, hw);
        if (cfg.analysis.marginal) {
            const std::string mpath = "marginal_" + tag + ".csv";
            write_csv((fs::path(out_dir) / mpath).string(), {"x", "density"},
                      {&md.x, &md.density});
            out.files["marginal"] = mpath;
        }
        if (cfg.analysis.transmission) {
            const double p0 = out.series.P[mode - 1][0];
            out.trans = transmission_probability(md, model, p0);
            out.has_transmission = true;
        }
    }

    if (cfg.convergence_check && out.method == "rk4") {
        TimeGrid fine = out.grid;
        fine.dt /= 2;
        fine.stride *= 2;
        ModelHamiltonian src(model);
        EvolveResult refined = evolve_unitary(src, model.space, psi0, fine, opts);
        out.halved_step_rms =
            tier_deviation(out.series, refined.series, cfg.analysis.deviation_column);
    }
    return out;
}

const std::map<std::string, const char*>& preset_table() {
    static const std::map<std::string, const char*> presets = {
        {"zitterbewegung-1d", R"(# Trembling motion of a massive free particle in one dimension.
[run]
name = zitterbewegung-1d
scenario = free_1d
tiers = ideal
method = auto

[qubit]
initial = plus
delta_omega_over_2pi_mhz = 0.05

[mode1]
truncation = 48
chi_over_2pi_mhz = 0.1
alpha = 1.0
initial = vacuum

[grid]
t1_us = 20
dt_us = 0.01
stride = 2
)"},
        {"zitterbewegung-2d", R"(# Trembling motion in two dimensions; the second mode couples
# through the orthogonal qubit axis. The drifting packet climbs the
# Fock ladder, so the truncated tail is allowed up to one percent.
[run]
name = zitterbewegung-2d
scenario = free_2d
tiers = ideal
method = auto

[qubit]
initial = plus
delta_omega_over_2pi_mhz = 0.05

[mode1]
truncation = 18
chi_over_2pi_mhz = 0.1
alpha = 1.0
initial = vacuum

[mode2]
truncation = 18
chi_over_2pi_mhz = 0.1
alpha = 1.0
delta_rad = 1.5707963267948966
initial = vacuum

[grid]
t1_us = 20
dt_us = 0.01
stride = 4

[analysis]
leak_bound = 0.01
)"},
        {"landau-spectrum", R"(# Relativistic level spectroscopy: long record of the qubit
# inversion, Fourier transformed; peaks follow sqrt(n) spacing.
[run]
name = landau-spectrum
scenario = magnetic_2d
tiers = ideal
method = auto

[qubit]
initial = plus
delta_omega_over_2pi_mhz = 0

[mode1]
truncation = 20
chi_over_2pi_mhz = 0.1
alpha = 1.0
delta_alpha = -1.0
initial = vacuum

[mode2]
truncation = 26
chi_over_2pi_mhz = 0.1
alpha = 1.0
delta_rad = 1.5707963267948966
initial = vacuum

[grid]
t1_us = 5000
dt_us = 1
stride = 1

[analysis]
leak_bound = 0.05
spectrum = true
spectrum_column = sz
window = hann
min_prominence = 0.02
)"},
        {"landau-trajectory", R"(# Orbit of a displaced packet under the synthetic magnetic field.
# The anharmonic level ladder dephases the packet and spreads it over
# many Fock states; the leak column of the trajectory shows where the
# truncated tail grows to a few percent.
[run]
name = landau-trajectory
scenario = magnetic_2d
tiers = ideal
method = auto

[qubit]
initial = plus
delta_omega_over_2pi_mhz = 0

[mode1]
truncation = 24
chi_over_2pi_mhz = 0.1
alpha = 1.0
delta_alpha = -1.0
initial = coherent(1.0)

[mode2]
truncation = 24
chi_over_2pi_mhz = 0.1
alpha = 1.0
delta_rad = 1.5707963267948966
initial = vacuum

[grid]
t1_us = 200
dt_us = 0.05
stride = 4

[analysis]
leak_bound = 0.1
)"},
        {"klein", R"(# Transmission through a linear potential for three masses.
[run]
name = klein
scenario = electro_1d
tiers = ideal
method = auto

[qubit]
initial = plus
delta_omega_over_2pi_mhz = 0, 0.05, 0.15

[mode1]
truncation = 60
chi_over_2pi_mhz = 0.1
alpha = 1.0
gamma_over_2pi_mhz = -0.05
initial = coherent(0.5)

[grid]
t1_us = 20
dt_us = 0.01
stride = 20

[analysis]
leak_bound = 0.05
marginal = true
marginal_mode = 1
marginal_points = 512
marginal_halfwidth = 8
transmission = true
)"},
        {"rwa-scaling", R"(# Gap between the averaged and the fully driven model as the
# sideband frequency grows; the gap must shrink.
[run]
name = rwa-scaling
scenario = free_1d
tiers = ideal, full
method = auto
convergence_check = true

[qubit]
initial = plus
delta_omega_over_2pi_mhz = 0.05

[mode1]
truncation = 40
chi_over_2pi_mhz = 0.1
alpha = 1.0
omega_sb_over_2pi_mhz = 20, 40, 100
initial = vacuum

[grid]
t1_us = 20
dt_us = auto
stride = 80

[analysis]
deviation = true
deviation_column = X1
)"},
    };
    return presets;
}

} // namespace

RunSummary run_scenario(const ScenarioConfig& cfg, const std::string& out_dir,
                        int workers_override) {
    cfg.validate();
    fs::create_directories(out_dir);

    std::vector<Job> jobs;
    for (std::size_t p = 0; p < cfg.n_points(); ++p)
        for (Tier t : cfg.tiers) jobs.push_back({p, t});

    const int workers = std::min<int>(resolve_workers(cfg, workers_override),
                                      static_cast<int>(jobs.size()));
    std::vector<JobOutcome> outcomes(jobs.size());
    std::atomic<std::size_t> next{0};
    std::mutex fail_mutex;
    std::exception_ptr failure;

    const auto t_start = std::chrono::steady_clock::now();
    auto worker = [&]() {
        for (;;) {
            const std::size_t j = next.fetch_add(1);
            if (j >= jobs.size()) return;
            try {
                outcomes[j] = run_job(cfg, jobs[j], out_dir);
            } catch (...) {
                std::lock_guard<std::mutex> lock(fail_mutex);
                if (!failure) failure = std::current_exception();
                return;
            }
        }
    };
    if (workers <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    if (failure) std::rethrow_exception(failure);

    // Cross-tier deviations per sweep point, full tier as the subject.
    ordered_json deviations = ordered_json::array();
    if (cfg.analysis.deviation) {
        for (std::size_t p = 0; p < cfg.n_points(); ++p) {
            const JobOutcome* full = nullptr;
            for (std::size_t j = 0; j < jobs.size(); ++j)
                if (jobs[j].point == p && jobs[j].tier == Tier::Full) full = &outcomes[j];
            if (!full) continue;
            for (std::size_t j = 0; j < jobs.size(); ++j) {
                if (jobs[j].point != p || jobs[j].tier == Tier::Full) continue;
                ordered_json entry;
                entry["point"] = p;
                entry["sweep_value"] = cfg.sweep_value(p);
                entry["reference_tier"] = to_config_token(jobs[j].tier);
                entry["column"] = cfg.analysis.deviation_column;
                entry["rms"] =
                    tier_deviation(outcomes[j].series, full->series, cfg.analysis.deviation_column);
                deviations.push_back(entry);
            }
        }
    }

    ordered_json analysis;
    analysis["name"] = cfg.name;
    analysis["sweep_key"] = cfg.sweep_key();
    analysis["jobs"] = ordered_json::array();
    for (std::size_t j = 0; j < jobs.size(); ++j) {
        const JobOutcome& o = outcomes[j];
        ordered_json entry;
        entry["point"] = jobs[j].point;
        entry["tier"] = to_config_token(jobs[j].tier);
        entry["sweep_value"] = cfg.sweep_value(jobs[j].point);
        if (!o.peaks.empty()) {
            ordered_json pk = ordered_json::array();
            for (const auto& p : o.peaks)
                pk.push_back({{"freq_mhz", p.freq_mhz}, {"amplitude", p.amplitude}});
            entry["peaks"] = pk;
        }
        if (o.has_transmission) {
            entry["transmission"] = {{"probability", o.trans.probability},
                                     {"indeterminate", o.trans.indeterminate},
                                     {"x_turn", o.trans.x_turn},
                                     {"lz_asymptote", o.trans.lz}};
        }
        ordered_json files;
        for (const auto& [kind, name] : o.files) files[kind] = name;
        entry["files"] = files;
        analysis["jobs"].push_back(entry);
    }
    analysis["deviation"] = deviations;
    write_text_file((fs::path(out_dir) / "analysis.json").string(), analysis.dump(2) + "\n");

    const double total_ms = std::chrono::duration<double, std::milli>(
                                std::chrono::steady_clock::now() - t_start)
                                .count();

    RunSummary summary;
    summary.out_dir = out_dir;
    summary.jobs = static_cast<int>(jobs.size());
    summary.total_wall_ms = total_ms;
    for (const auto& o : outcomes)
        for (const auto& [kind, name] : o.files) summary.files.push_back(name);
    summary.files.push_back("analysis.json");
    std::sort(summary.files.begin(), summary.files.end());

    ordered_json manifest;
    manifest["format"] = "run-manifest/1";
    manifest["name"] = cfg.name;
    manifest["code_version"] = kVersion;
    manifest["scenario"] = to_config_token(cfg.scenario);
    ordered_json tiers = ordered_json::array();
    for (Tier t : cfg.tiers) tiers.push_back(to_config_token(t));
    manifest["tiers"] = tiers;
    manifest["method"] = cfg.method;
    manifest["workers_used"] = workers;
    manifest["sweep_key"] = cfg.sweep_key();
    ordered_json sweep_values = ordered_json::array();
    for (std::size_t p = 0; p < cfg.n_points(); ++p) sweep_values.push_back(cfg.sweep_value(p));
    manifest["sweep_values"] = sweep_values;
    manifest["config_text"] = cfg.raw_text;
    manifest["jobs"] = ordered_json::array();
    for (std::size_t j = 0; j < jobs.size(); ++j) {
        const JobOutcome& o = outcomes[j];
        ordered_json entry;
        entry["point"] = jobs[j].point;
        entry["tier"] = to_config_token(jobs[j].tier);
        entry["method"] = o.method;
        entry["dim"] = o.dim;
        entry["dt_us"] = o.grid.dt;
        entry["stride"] = o.grid.stride;
        entry["records"] = o.grid.n_records();
        entry["steps"] = o.steps;
        entry["wall_ms"] = o.wall_ms;
        entry["renorm_count"] = o.renorm_count;
        entry["max_step_drift"] = o.max_step_drift;
        entry["cumulative_drift"] = o.cumulative_drift;
        entry["final_leak"] = o.final_leak;
        if (o.halved_step_rms >= 0) entry["halved_step_rms"] = o.halved_step_rms;
        manifest["jobs"].push_back(entry);
    }
    ordered_json files = ordered_json::array();
    for (const auto& name : summary.files) {
        const std::string path = (fs::path(out_dir) / name).string();
        files.push_back({{"name", name},
                         {"bytes", file_size_bytes(path)},
                         {"fnv1a64", hex64(fnv1a64_file(path))}});
    }
    manifest["files"] = files;
    manifest["total_wall_ms"] = total_ms;
    write_text_file((fs::path(out_dir) / "manifest.json").string(), manifest.dump(2) + "\n");

    return summary;
}

bool compare_outputs(const std::string& dir_a, const std::string& dir_b, std::ostream& report) {
    auto load_files = [](const std::string& dir) {
        const std::string mpath = (fs::path(dir) / "manifest.json").string();
        std::ifstream in(mpath, std::ios::binary);
        if (!in) throw ValidationError("missing manifest: " + mpath);
        ordered_json manifest = ordered_json::parse(in);
        std::map<std::string, std::string> out;
        for (const auto& f : manifest.at("files"))
            out[f.at("name").get<std::string>()] = f.at("fnv1a64").get<std::string>();
        return out;
    };

    const auto fa = load_files(dir_a);
    const auto fb = load_files(dir_b);
    bool ok = true;

    auto verify = [&](const std::string& dir, const std::map<std::string, std::string>& rec) {
        for (const auto& [name, sum] : rec) {
            const std::string actual = hex64(fnv1a64_file((fs::path(dir) / name).string()));
            if (actual != sum) {
                report << "corrupt " << dir << "/" << name << "\n";
                ok = false;
            }
        }
    };
    verify(dir_a, fa);
    verify(dir_b, fb);

    std::map<std::string, int> names;
    for (const auto& [n, s] : fa) names[n] |= 1;
    for (const auto& [n, s] : fb) names[n] |= 2;
    for (const auto& [name, where] : names) {
        if (where == 1) {
            report << "only-in-first " << name << "\n";
            ok = false;
        } else if (where == 2) {
            report << "only-in-second " << name << "\n";
            ok = false;
        } else if (fa.at(name) != fb.at(name)) {
            report << "differ " << name << "\n";
            ok = false;
        } else {
            report << "match " << name << "\n";
        }
    }
    return ok;
}

std::vector<std::string> preset_names() {
    std::vector<std::string> names;
    for (const auto& [name, text] : preset_table()) names.push_back(name);
    return names;
}

std::string preset_text(const std::string& name) {
    const auto& table = preset_table();
    const auto it = table.find(name);
    if (it == table.end()) {
        std::string known;
        for (const auto& [n, t] : table) known += (known.empty() ? "" : ", ") + n;
        throw ValidationError("unknown preset '" + name + "'; available: " + known);
    }
    return it->second;
}

} // namespace diracsim
