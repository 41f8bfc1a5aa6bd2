// Command-line front end for the identification pipelines. Every verb is
// deterministic given its config and seed; artifacts land in --out.

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>

#include "lureid/pipeline.hpp"

namespace {

struct GlobalArgs {
    std::string config_path;
    std::string preset;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out_dir;
    std::optional<double> sigma;
    std::optional<int> workers;
    std::optional<std::string> model;
};

lureid::ExperimentConfig resolve_config(const GlobalArgs& args) {
    if (args.config_path.empty() && args.preset.empty() && !args.model)
        throw std::invalid_argument(
            "no experiment selected: pass --preset, --config, or --model");
    lureid::ExperimentConfig cfg;
    std::optional<lureid::Json> doc;
    if (!args.config_path.empty()) doc = lureid::read_json(args.config_path);

    std::string preset = args.preset;
    if (preset.empty() && doc && doc->contains("preset"))
        preset = doc->at("preset").get<std::string>();
    if (!preset.empty()) cfg = lureid::preset_config(preset);
    if (doc) lureid::apply_config_document(cfg, *doc);

    if (args.model) {
        cfg.model = *args.model;
        if (preset.empty()) {
            // Pull model-appropriate defaults when no preset/config chose them.
            lureid::ExperimentConfig defaults = lureid::preset_config("desk-" + cfg.model);
            defaults.out_dir = cfg.out_dir;
            cfg = defaults;
        }
    }
    if (args.seed) cfg.seed = *args.seed;
    if (args.out_dir) cfg.out_dir = *args.out_dir;
    if (args.sigma) cfg.sigma = *args.sigma;
    if (args.workers) cfg.workers = *args.workers;
    return cfg;
}

void add_global_flags(CLI::App* cmd, GlobalArgs& args) {
    cmd->add_option("--config", args.config_path, "JSON config file");
    cmd->add_option("--preset", args.preset,
                    "preset name: desk-fhn, desk-chua, paper-fhn, paper-chua");
    cmd->add_option("--model", args.model, "built-in model name (fhn or chua)");
    cmd->add_option("--seed", args.seed, "base RNG seed");
    cmd->add_option("--out", args.out_dir, "artifact output directory");
    cmd->add_option("--sigma", args.sigma, "measurement noise standard deviation");
    cmd->add_option("--workers", args.workers, "worker pool size (0 = all cores)");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"lureid: simulation and two-stage identification of Lure-type circuits"};
    app.require_subcommand(1);

    GlobalArgs args;

    auto* info = app.add_subcommand("model-info", "print a built-in model report");
    std::string info_name = "fhn";
    info->add_option("name", info_name, "model name")->required();

    auto* static_cmd = app.add_subcommand("static-id", "run the static identification stage");
    add_global_flags(static_cmd, args);

    auto* dynamic_cmd = app.add_subcommand("dynamic-id", "run the dynamic identification stage");
    add_global_flags(dynamic_cmd, args);
    bool use_truth = false;
    bool analog = false;
    dynamic_cmd->add_flag("--use-truth", use_truth,
                          "cancel with the ground-truth coefficients (ablation)");
    dynamic_cmd->add_flag("--analog", analog, "ideal analog feedback law (requires sigma 0)");

    auto* validate_cmd = app.add_subcommand("validate", "validate the identified model");
    add_global_flags(validate_cmd, args);

    auto* memory_cmd = app.add_subcommand("memory-test", "window-operator memory probe");
    add_global_flags(memory_cmd, args);
    bool closed_loop_mem = false;
    memory_cmd->add_flag("--closed-loop", closed_loop_mem,
                         "probe the closed loop instead of the open loop");

    auto* sim_cmd = app.add_subcommand("simulate", "export a plain simulation record");
    add_global_flags(sim_cmd, args);
    lureid::SimulateRequest sim_req;
    sim_cmd->add_flag("--closed", sim_req.closed_loop, "closed loop with constant reference");
    sim_cmd->add_option("--duration", sim_req.duration, "simulated seconds");
    sim_cmd->add_option("--input-const", sim_req.input_const, "open-loop constant current");
    sim_cmd->add_option("--vref-const", sim_req.vref_const, "closed-loop constant reference");
    sim_cmd->add_option("--x0", sim_req.x0, "initial state");

    CLI11_PARSE(app, argc, argv);

    try {
        if (info->parsed()) {
            std::cout << lureid::cmd_model_info(info_name);
            return 0;
        }
        lureid::ExperimentConfig cfg = resolve_config(args);
        if (static_cmd->parsed()) {
            const auto result = lureid::cmd_static(cfg);
            std::cout << "static stage: " << result.fit.w_hat.size() << " coefficients, residual "
                      << result.fit.residual_norm << "\n"
                      << "artifacts in " << cfg.out_dir.string() << "\n";
        } else if (dynamic_cmd->parsed()) {
            cfg.use_truth = cfg.use_truth || use_truth;
            cfg.analog_loop = cfg.analog_loop || analog;
            lureid::StaticFit fit;
            if (!cfg.use_truth) fit = lureid::load_static_fit(cfg);
            const auto result = lureid::cmd_dynamic(cfg, fit);
            std::cout << "dynamic stage: G_a_hat = " << result.model.g_a_hat.describe() << "\n"
                      << "achieved SNR " << result.achieved_snr_db << " dB; artifacts in "
                      << cfg.out_dir.string() << "\n";
        } else if (validate_cmd->parsed()) {
            const auto model = lureid::load_identified_model(cfg);
            const lureid::Json result = lureid::cmd_validate(cfg, model);
            std::cout << result.dump(2) << "\n";
        } else if (memory_cmd->parsed()) {
            cfg.memory_open_loop = !closed_loop_mem;
            const lureid::Json result = lureid::cmd_memory_test(cfg);
            std::cout << result.dump(2) << "\n";
        } else if (sim_cmd->parsed()) {
            const auto rec = lureid::cmd_simulate(cfg, sim_req);
            std::cout << "wrote " << rec.size() << " samples to "
                      << (cfg.out_dir / "record.csv").string() << "\n";
            for (const auto& w : rec.warnings) std::cerr << "warning: " << w << "\n";
        }
    } catch (const std::exception& err) {
        const lureid::Json error{{"error", err.what()}};
        std::cerr << error.dump() << "\n";
        return 1;
    }
    return 0;
}
