#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "diracsim/errors.hpp"
#include "diracsim/output.hpp"
#include "diracsim/runner.hpp"

namespace {

int run_command(const std::string& config_path, const std::string& out_dir, int workers) {
    std::ifstream in(config_path, std::ios::binary);
    if (!in) throw diracsim::ValidationError("cannot open config file: " + config_path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    const diracsim::ScenarioConfig cfg = diracsim::ScenarioConfig::parse(text);

    std::string dir = out_dir.empty() ? "out/" + cfg.name : out_dir;
    const diracsim::RunSummary summary = diracsim::run_scenario(cfg, dir, workers);
    std::printf("run %s: %d jobs, %.0f ms\n", cfg.name.c_str(), summary.jobs,
                summary.total_wall_ms);
    for (const auto& f : summary.files) std::printf("  %s/%s\n", summary.out_dir.c_str(), f.c_str());
    std::printf("  %s/manifest.json\n", summary.out_dir.c_str());
    return diracsim::kExitOk;
}

int preset_command(const std::string& name, const std::string& out_path) {
    if (name == "list") {
        for (const auto& n : diracsim::preset_names()) std::printf("%s\n", n.c_str());
        return diracsim::kExitOk;
    }
    const std::string text = diracsim::preset_text(name);
    if (out_path.empty()) {
        std::fputs(text.c_str(), stdout);
    } else {
        diracsim::write_text_file(out_path, text);
        std::printf("wrote %s\n", out_path.c_str());
    }
    return diracsim::kExitOk;
}

int compare_command(const std::string& dir_a, const std::string& dir_b) {
    const bool ok = diracsim::compare_outputs(dir_a, dir_b, std::cout);
    std::printf("%s\n", ok ? "outputs match" : "outputs differ");
    return ok ? diracsim::kExitOk : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Driven cavity and qubit simulator for relativistic wave equations"};
    app.require_subcommand(1);

    std::string config_path, out_dir, preset_name, preset_out, dir_a, dir_b;
    int workers = 0;

    CLI::App* run = app.add_subcommand("run", "Execute a scenario config and write its outputs");
    run->add_option("config", config_path, "Path to a scenario config file")->required();
    run->add_option("--out", out_dir, "Output directory (default out/<run name>)");
    run->add_option("--workers", workers, "Worker threads, overrides the config");

    CLI::App* preset =
        app.add_subcommand("preset", "Print a built-in scenario config ('list' to enumerate)");
    preset->add_option("name", preset_name, "Preset name or 'list'")->required();
    preset->add_option("--out", preset_out, "Write the config to this file instead of stdout");

    CLI::App* compare =
        app.add_subcommand("compare", "Check two output directories for identical data files");
    compare->add_option("first", dir_a, "First output directory")->required();
    compare->add_option("second", dir_b, "Second output directory")->required();

    try {
        app.parse(argc, argv);
        if (run->parsed()) return run_command(config_path, out_dir, workers);
        if (preset->parsed()) return preset_command(preset_name, preset_out);
        if (compare->parsed()) return compare_command(dir_a, dir_b);
        return 1;
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const diracsim::ValidationError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return diracsim::kExitValidation;
    } catch (const diracsim::IntegrationError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return diracsim::kExitIntegration;
    } catch (const diracsim::AnalysisError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return diracsim::kExitAnalysis;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
