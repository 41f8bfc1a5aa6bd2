#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "lureid/dynamic_ident.hpp"
#include "lureid/io.hpp"
#include "lureid/static_ident.hpp"
#include "lureid/validation.hpp"

namespace lureid {

/// Batch experiment parameters. Presets fill model-appropriate defaults;
/// individual fields can be overridden from a config document or CLI flags.
struct ExperimentConfig {
    std::string model = "fhn";
    Json inline_model;  ///< optional {"g": ..., "h": ...} overriding `model`
    std::string preset;
    double k = 1.5;
    double sigma = 0.01;
    std::uint64_t seed = 1;
    double T_s = 1e-3;
    int workers = 0;

    // Static stage.
    GridSpec grid{-3.0, 3.0, 15, GridSpec::Spacing::uniform};
    double settle_time = 20.0;
    int n_avg = 1000;
    bool paper_averaging = false;  ///< Eq.-13 style full-record averages

    // Dynamic stage.
    double multisine_T = 20.0;
    double f_max = 20.0;
    int periods = 2;
    double excitation_rms = 1.0;
    int realizations = 5;
    int n_poles = 2;
    int n_zeros = 1;
    bool use_truth = false;
    bool analog_loop = false;

    // Validation.
    double validation_duration = 60.0;
    double validation_input_mean = -1.5;
    double validation_rms = 0.3;
    double validation_fmax = 1.0;
    double spike_threshold = 0.0;
    double spike_min_separation = 2.0;
    double attractor_duration = 500.0;
    std::vector<double> attractor_x0{0.1, 0.1, 0.1};

    // Memory test.
    std::vector<double> memory_eta{5.0, 10.0, 20.0, 40.0};
    std::vector<double> memory_probes{60.0, 90.0, 120.0, 150.0};
    double memory_epsilon = 0.01;
    double memory_T_s = 0.01;
    double memory_pulse_t1 = 1.0;
    double memory_pulse_t2 = 2.0;
    double memory_pulse_amp = 1.5;
    bool memory_open_loop = true;

    std::filesystem::path out_dir = "out";
};

/// Presets: "desk-fhn", "desk-chua" (CI scale) and "paper-fhn",
/// "paper-chua" (full-length runs with the published parameters).
ExperimentConfig preset_config(const std::string& name);

/// Applies overrides from a JSON document (unknown keys rejected).
void apply_config_document(ExperimentConfig& cfg, const Json& doc);

Json to_json(const ExperimentConfig& cfg);

/// ------ pipeline commands (CLI verbs call these; tests drive them too) ---

std::string cmd_model_info(const std::string& name);

struct StaticStageResult {
    EquilibriumDataset data;
    StaticFit fit;
};
/// Runs the static stage and writes static_fit.json + iv_curve.csv.
StaticStageResult cmd_static(const ExperimentConfig& cfg);

struct DynamicStageResult {
    FrfEstimate frf;
    IdentifiedModel model;
    double achieved_snr_db = 0.0;
};
/// Runs the dynamic stage (cancellation from `fit`, or from the ground
/// truth when cfg.use_truth) and writes frf.csv, G_k_hat.json, G_a_hat.json,
/// identified_model.json.
DynamicStageResult cmd_dynamic(const ExperimentConfig& cfg, const StaticFit& fit);

/// Loads static_fit.json from cfg.out_dir (used by the CLI when stages run
/// in separate invocations).
StaticFit load_static_fit(const ExperimentConfig& cfg);
IdentifiedModel load_identified_model(const ExperimentConfig& cfg);

/// Model validation: FHN spiking replay (replay.csv) or Chua attractor
/// comparison (attractor.csv); returns and writes validation.json.
Json cmd_validate(const ExperimentConfig& cfg, const IdentifiedModel& model);

/// Window-operator memory probe on the configured loop; writes
/// memory_test.json.
Json cmd_memory_test(const ExperimentConfig& cfg);

/// Plain simulation for data export; writes record.csv (+ metadata).
struct SimulateRequest {
    bool closed_loop = false;
    double duration = 20.0;
    double input_const = 0.0;  ///< open loop: constant current
    double vref_const = 0.0;   ///< closed loop: constant reference
    std::vector<double> x0;
};
SampledRecord cmd_simulate(const ExperimentConfig& cfg, const SimulateRequest& req);

/// Helpers shared by validation and the acceptance suite.
LureModel truth_model(const ExperimentConfig& cfg);
RefSignal validation_input(const ExperimentConfig& cfg, std::uint64_t salt);
double outer_equilibrium_voltage(const RationalTF& g_a, const StaticNL& h_nl);
double lobe_threshold_first_modal(const StateSpace& modal, const StaticNL& h_nl,
                                  double v_outer);

}  // namespace lureid
