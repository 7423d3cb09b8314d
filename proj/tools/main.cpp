#include <algorithm>
#include <exception>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "vqebench/harness.hpp"

namespace {

vqebench::PlotMetric parse_metric(const std::string& name) {
  if (name == "energy") return vqebench::PlotMetric::kEnergy;
  if (name == "fidelity") return vqebench::PlotMetric::kFidelity;
  throw std::invalid_argument("--metric must be 'energy' or 'fidelity'");
}

void write_meta(const std::string& path, const vqebench::ExperimentConfig& cfg,
                const vqebench::ExperimentResult& res) {
  nlohmann::json meta;
  meta["method"] = cfg.method;
  meta["sigma_bar_sq"] = res.sigma_bar_sq;
  meta["ground_energy"] = res.ground_energy;
  meta["n_records"] = res.records.size();
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot open '" + path + "' for writing");
  out << meta.dump(2) << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Shot-budgeted variational eigensolver benchmark"};
  app.require_subcommand(1);

  std::string run_config;
  CLI::App* run = app.add_subcommand("run", "Run an experiment and write per-step records CSV");
  run->add_option("config", run_config, "JSON experiment config")->required();

  std::string calib_config, calib_out;
  CLI::App* calibrate =
      app.add_subcommand("calibrate", "Report the calibrated single-shot variance");
  calibrate->add_option("config", calib_config, "JSON experiment config")->required();
  calibrate->add_option("--out", calib_out, "also write a JSON summary here");

  std::string agg_input, agg_output;
  int grid_n = 64;
  CLI::App* agg =
      app.add_subcommand("aggregate", "Reduce records to percentile curves on a log grid");
  agg->add_option("records", agg_input, "records CSV from 'run'")->required();
  agg->add_option("--grid", grid_n, "number of log-spaced checkpoints (default 64)");
  agg->add_option("--out", agg_output, "output CSV (default: <records>.agg.csv)");

  std::string plot_input, plot_output, metric_name = "energy";
  CLI::App* plot = app.add_subcommand("plot", "Render aggregated curves as an SVG");
  plot->add_option("aggregate", plot_input, "aggregate CSV")->required();
  plot->add_option("--metric", metric_name, "energy|fidelity (default energy)");
  plot->add_option("--out", plot_output, "output SVG path")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      const vqebench::ExperimentConfig cfg = vqebench::load_config(run_config);
      if (cfg.output.empty()) {
        throw std::invalid_argument("config: 'output' is required by the run subcommand");
      }
      const vqebench::ExperimentResult res = vqebench::run_experiment(cfg);
      vqebench::write_records_csv(cfg.output, res.records);
      write_meta(cfg.output + ".meta.json", cfg, res);
      std::cout << "wrote " << res.records.size() << " records to " << cfg.output
                << " (method=" << cfg.method << ", sigma_bar_sq=" << res.sigma_bar_sq
                << ", ground_energy=" << res.ground_energy << ")\n";
    } else if (calibrate->parsed()) {
      vqebench::ExperimentConfig cfg = vqebench::load_config(calib_config);
      cfg.budget = 0;  // calibration only; no optimization shots are simulated
      cfg.n_trials = 1;
      const vqebench::ExperimentResult res = vqebench::run_experiment(cfg);
      std::cout << "sigma_bar_sq = " << res.sigma_bar_sq
                << " (ground_energy = " << res.ground_energy << ")\n";
      if (!calib_out.empty()) write_meta(calib_out, cfg, res);
    } else if (agg->parsed()) {
      const std::vector<vqebench::RunRecord> records = vqebench::read_records_csv(agg_input);
      if (records.empty()) throw std::invalid_argument("aggregate: no records in input");
      long long lo = records.front().cumulative_shots;
      long long hi = lo;
      for (const vqebench::RunRecord& r : records) {
        lo = std::min(lo, r.cumulative_shots);
        hi = std::max(hi, r.cumulative_shots);
      }
      const std::vector<long long> grid = vqebench::make_log_grid(lo, hi, grid_n);
      const std::vector<vqebench::AggregateRow> rows = vqebench::aggregate(records, grid);
      if (agg_output.empty()) agg_output = agg_input + ".agg.csv";
      vqebench::write_aggregate_csv(agg_output, rows);
      std::cout << "wrote " << rows.size() << " checkpoint rows to " << agg_output << "\n";
    } else if (plot->parsed()) {
      const std::vector<vqebench::AggregateRow> rows =
          vqebench::read_aggregate_csv(plot_input);
      vqebench::emit_plot(rows, parse_metric(metric_name), plot_output);
      std::cout << "wrote " << plot_output << "\n";
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
