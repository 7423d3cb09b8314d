#pragma once

#include <array>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "vqebench/optimizers.hpp"
#include "vqebench/simulator.hpp"

namespace vqebench {

// Experiment description parsed from JSON. Unknown keys anywhere in the
// document are rejected so typos fail loudly instead of silently falling
// back to defaults.
struct ExperimentConfig {
  int qubits = 5;
  std::array<double, 3> j{1.0, 1.0, 1.0};  // XX/YY/ZZ couplings
  std::array<double, 3> h{0.0, 0.0, 0.0};  // X/Y/Z fields
  int layers = 3;
  std::string method = "gradcore";  // sgd-psr | bayes-sgd | gradcore | nft | bayes-nft
  long long budget = 0;
  int n_trials = 10;
  unsigned long long base_seed = 1;
  int n_shots = 1024;
  NoiseMode noise_mode = NoiseMode::kExactVariance;
  double gamma_sq = 9.0;
  double sigma0_sq = 100.0;
  // Confidence schedule in units of the calibrated single-shot variance:
  // kappa0_sq = sigma_bar_sq / kappa0_scale, floor c0 = sigma_bar_sq / c0_scale.
  double c1 = 1.2;
  int t_initial = -1;  // negative: defaults to the parameter count
  double kappa0_scale = 256.0;
  double c0_scale = 2048.0;
  int window_mult = 5;
  double alpha_sgd = M_PI / 2.0;
  double alpha_smo = 2.0 * M_PI / 3.0;
  double lr = 0.05;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double adam_epsilon = 1e-8;
  int calibration_points = 30;
  std::string output;  // records CSV path (required by the run subcommand)
};

ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::string& path);

// One CSV row: per-trial per-step progress. kappa_sq is NaN (empty field)
// for methods without a confidence threshold.
struct RunRecord {
  int trial = 0;
  int step = 0;
  long long cumulative_shots = 0;
  double delta_energy = 0.0;
  double delta_fidelity = 0.0;
  double kappa_sq = std::numeric_limits<double>::quiet_NaN();
  long long shots_this_step = 0;
  std::string method;
};

// (energy above the exact ground energy, 1 - |overlap with the ground state|).
std::pair<double, double> compute_metrics(const Eigen::VectorXd& x_hat,
                                          const PauliHamiltonian& h, const Circuit& c,
                                          const GroundTruth& gt);

struct ExperimentResult {
  std::vector<RunRecord> records;  // trials concatenated in trial order
  double sigma_bar_sq = 0.0;
  double ground_energy = 0.0;
};

// Builds the model, calibrates the single-shot variance (seed base_seed +
// 1000003; zero shot cost), then runs n_trials independent trials. Trial i
// seeds its stream with base_seed + i and draws the initial location first,
// so every method sees the same starting point for a given (seed, trial).
// Trials run on an OpenMP pool sized by VQEBENCH_WORKERS (default: all
// cores); results are merged in trial order, so output is
// worker-count-independent.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

void write_records_csv(const std::string& path, const std::vector<RunRecord>& records);
std::vector<RunRecord> read_records_csv(const std::string& path);

// n log-spaced integer checkpoints from lo to hi inclusive, deduplicated.
std::vector<long long> make_log_grid(long long lo, long long hi, int n);

struct AggregateRow {
  std::string method;
  long long cumulative_shots = 0;
  double e_p25 = 0.0, e_median = 0.0, e_p75 = 0.0;
  double f_p25 = 0.0, f_median = 0.0, f_p75 = 0.0;
};

// Per method and checkpoint: interpolated 25/50/75th percentiles across
// trials of the latest metric values at or before the checkpoint
// (carry-forward; the first record backfills earlier checkpoints).
std::vector<AggregateRow> aggregate(const std::vector<RunRecord>& records,
                                    const std::vector<long long>& grid);

void write_aggregate_csv(const std::string& path, const std::vector<AggregateRow>& rows);
std::vector<AggregateRow> read_aggregate_csv(const std::string& path);

enum class PlotMetric { kEnergy, kFidelity };

// Self-contained deterministic SVG: log-log median curves with interquartile
// bands, one series per method. Throws on empty input.
std::string render_plot_svg(const std::vector<AggregateRow>& rows, PlotMetric metric);
void emit_plot(const std::vector<AggregateRow>& rows, PlotMetric metric,
               const std::string& out_path);

}  // namespace vqebench
