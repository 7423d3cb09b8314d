#include "vqebench/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include <omp.h>

#include "json.hpp"

namespace vqebench {

namespace {

using nlohmann::json;

// Calibration draws from its own stream so trial streams stay untouched.
constexpr unsigned long long kCalibrationSeedOffset = 1000003ULL;

const char* kRecordsHeader =
    "trial,step,cumulative_shots,delta_energy,delta_fidelity,kappa_sq,shots_this_step,method";
const char* kAggregateHeader =
    "method,cumulative_shots,delta_energy_p25,delta_energy_median,delta_energy_p75,"
    "delta_fidelity_p25,delta_fidelity_median,delta_fidelity_p75";

void require_keys(const json& j, std::initializer_list<const char*> allowed,
                  const char* where) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* k : allowed) {
      if (it.key() == k) {
        ok = true;
        break;
      }
    }
    if (!ok) {
      throw std::invalid_argument(std::string("config: unknown key '") + it.key() + "' in " +
                                  where);
    }
  }
}

std::array<double, 3> parse_triple(const json& j, const char* name) {
  if (!j.is_array() || j.size() != 3) {
    throw std::invalid_argument(std::string("config: ") + name +
                                " must be an array of three numbers");
  }
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

bool valid_method(const std::string& m) {
  return m == "sgd-psr" || m == "bayes-sgd" || m == "gradcore" || m == "nft" ||
         m == "bayes-nft";
}

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string fmt_coord(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::vector<std::string> split_line(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

double parse_double_field(const std::string& s, const char* what, size_t line_no) {
  try {
    size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument("csv: bad " + std::string(what) + " on line " +
                                std::to_string(line_no));
  }
}

long long parse_ll_field(const std::string& s, const char* what, size_t line_no) {
  try {
    size_t pos = 0;
    const long long v = std::stoll(s, &pos);
    if (pos != s.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument("csv: bad " + std::string(what) + " on line " +
                                std::to_string(line_no));
  }
}

double percentile(const std::vector<double>& sorted, double p) {
  const double rank = p / 100.0 * static_cast<double>(sorted.size() - 1);
  const size_t lo = static_cast<size_t>(std::floor(rank));
  const size_t hi = static_cast<size_t>(std::ceil(rank));
  const double frac = rank - static_cast<double>(lo);
  return sorted[lo] * (1.0 - frac) + sorted[hi] * frac;
}

int worker_count() {
  if (const char* env = std::getenv("VQEBENCH_WORKERS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1 && v <= 1024) return static_cast<int>(v);
    throw std::invalid_argument("VQEBENCH_WORKERS must be an integer in [1, 1024]");
  }
  return omp_get_max_threads();
}

using Runner = TrialState (*)(const OptimizerConfig&, Eigen::VectorXd, RngStream&);

Runner pick_runner(const std::string& method) {
  if (method == "sgd-psr") return run_sgd_psr;
  if (method == "bayes-sgd") return run_bayes_sgd;
  if (method == "gradcore") return run_gradcore;
  if (method == "nft") return run_nft;
  if (method == "bayes-nft") return run_bayes_nft;
  throw std::invalid_argument("config: unknown method '" + method + "'");
}

}  // namespace

ExperimentConfig parse_config(const std::string& json_text) {
  const json root = json::parse(json_text);
  if (!root.is_object()) throw std::invalid_argument("config: top level must be an object");
  require_keys(root,
               {"hamiltonian", "circuit", "method", "budget", "n_trials", "base_seed",
                "n_shots", "noise_mode", "kernel", "schedule", "window_mult", "alpha_sgd",
                "alpha_smo", "adam", "calibration_points", "output"},
               "top level");
  ExperimentConfig cfg;

  if (!root.contains("hamiltonian")) throw std::invalid_argument("config: missing hamiltonian");
  const json& ham = root.at("hamiltonian");
  require_keys(ham, {"qubits", "j", "h"}, "hamiltonian");
  cfg.qubits = ham.at("qubits").get<int>();
  cfg.j = parse_triple(ham.at("j"), "hamiltonian.j");
  cfg.h = parse_triple(ham.at("h"), "hamiltonian.h");

  if (!root.contains("circuit")) throw std::invalid_argument("config: missing circuit");
  const json& circ = root.at("circuit");
  require_keys(circ, {"layers"}, "circuit");
  cfg.layers = circ.at("layers").get<int>();

  if (!root.contains("method")) throw std::invalid_argument("config: missing method");
  cfg.method = root.at("method").get<std::string>();
  if (!valid_method(cfg.method)) {
    throw std::invalid_argument("config: unknown method '" + cfg.method + "'");
  }
  if (!root.contains("budget")) throw std::invalid_argument("config: missing budget");
  cfg.budget = root.at("budget").get<long long>();

  if (root.contains("n_trials")) cfg.n_trials = root.at("n_trials").get<int>();
  if (root.contains("base_seed")) cfg.base_seed = root.at("base_seed").get<unsigned long long>();
  if (root.contains("n_shots")) cfg.n_shots = root.at("n_shots").get<int>();
  if (root.contains("noise_mode")) {
    const std::string mode = root.at("noise_mode").get<std::string>();
    if (mode == "exact-variance") {
      cfg.noise_mode = NoiseMode::kExactVariance;
    } else if (mode == "calibrated") {
      cfg.noise_mode = NoiseMode::kCalibrated;
    } else {
      throw std::invalid_argument("config: noise_mode must be 'exact-variance' or 'calibrated'");
    }
  }
  if (root.contains("kernel")) {
    const json& k = root.at("kernel");
    require_keys(k, {"gamma_sq", "sigma0_sq"}, "kernel");
    if (k.contains("gamma_sq")) cfg.gamma_sq = k.at("gamma_sq").get<double>();
    if (k.contains("sigma0_sq")) cfg.sigma0_sq = k.at("sigma0_sq").get<double>();
  }
  if (root.contains("schedule")) {
    const json& s = root.at("schedule");
    require_keys(s, {"c1", "t_initial", "kappa0_scale", "c0_scale"}, "schedule");
    if (s.contains("c1")) cfg.c1 = s.at("c1").get<double>();
    if (s.contains("t_initial")) cfg.t_initial = s.at("t_initial").get<int>();
    if (s.contains("kappa0_scale")) cfg.kappa0_scale = s.at("kappa0_scale").get<double>();
    if (s.contains("c0_scale")) cfg.c0_scale = s.at("c0_scale").get<double>();
  }
  if (root.contains("window_mult")) cfg.window_mult = root.at("window_mult").get<int>();
  if (root.contains("alpha_sgd")) cfg.alpha_sgd = root.at("alpha_sgd").get<double>();
  if (root.contains("alpha_smo")) cfg.alpha_smo = root.at("alpha_smo").get<double>();
  if (root.contains("adam")) {
    const json& a = root.at("adam");
    require_keys(a, {"lr", "beta1", "beta2", "epsilon"}, "adam");
    if (a.contains("lr")) cfg.lr = a.at("lr").get<double>();
    if (a.contains("beta1")) cfg.beta1 = a.at("beta1").get<double>();
    if (a.contains("beta2")) cfg.beta2 = a.at("beta2").get<double>();
    if (a.contains("epsilon")) cfg.adam_epsilon = a.at("epsilon").get<double>();
  }
  if (root.contains("calibration_points")) {
    cfg.calibration_points = root.at("calibration_points").get<int>();
  }
  if (root.contains("output")) cfg.output = root.at("output").get<std::string>();

  if (cfg.qubits < 2) throw std::invalid_argument("config: qubits must be >= 2");
  if (cfg.layers < 1) throw std::invalid_argument("config: layers must be >= 1");
  if (cfg.budget < 0) throw std::invalid_argument("config: budget must be >= 0");
  if (cfg.n_trials < 1) throw std::invalid_argument("config: n_trials must be >= 1");
  if (cfg.n_shots < 1) throw std::invalid_argument("config: n_shots must be >= 1");
  if (!(cfg.gamma_sq > 0.0)) throw std::invalid_argument("config: gamma_sq must be positive");
  if (!(cfg.sigma0_sq > 0.0)) throw std::invalid_argument("config: sigma0_sq must be positive");
  if (!(cfg.c1 > 0.0)) throw std::invalid_argument("config: c1 must be positive");
  if (!(cfg.kappa0_scale > 0.0) || !(cfg.c0_scale > 0.0)) {
    throw std::invalid_argument("config: schedule scales must be positive");
  }
  if (cfg.window_mult < 0) throw std::invalid_argument("config: window_mult must be >= 0");
  if (!(cfg.alpha_sgd > 0.0 && cfg.alpha_sgd < M_PI) ||
      !(cfg.alpha_smo > 0.0 && cfg.alpha_smo < M_PI)) {
    throw std::invalid_argument("config: shift angles must lie in (0, pi)");
  }
  if (cfg.calibration_points < 1) {
    throw std::invalid_argument("config: calibration_points must be >= 1");
  }
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("config: cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::pair<double, double> compute_metrics(const Eigen::VectorXd& x_hat,
                                          const PauliHamiltonian& h, const Circuit& c,
                                          const GroundTruth& gt) {
  const Statevector psi = prepare_state(c, x_hat);
  return {exact_energy(h, psi) - gt.energy, 1.0 - fidelity(gt.state, psi)};
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  const PauliHamiltonian ham = build_heisenberg(cfg.qubits, cfg.j, cfg.h);
  const Circuit circ = build_efficient_su2(cfg.qubits, cfg.layers);
  const GroundTruth gt = ground_truth(ham);
  const int dim = circ.n_params;

  RngStream calib_rng(cfg.base_seed + kCalibrationSeedOffset);
  const double sigma_bar_sq =
      calibrate_sigma_bar(ham, circ, cfg.calibration_points, calib_rng);

  OptimizerConfig ocfg;
  ocfg.hamiltonian = &ham;
  ocfg.circuit = &circ;
  ocfg.e_gs = gt.energy;
  ocfg.psi_gs = &gt.state;
  ocfg.kernel = KernelParams{cfg.gamma_sq, cfg.sigma0_sq, circ.multiplicities};
  ocfg.sigma_bar_sq = sigma_bar_sq;
  ocfg.noise_mode = cfg.noise_mode;
  ocfg.budget = cfg.budget;
  ocfg.n_shots = cfg.n_shots;
  ocfg.alpha_sgd = cfg.alpha_sgd;
  ocfg.alpha_smo = cfg.alpha_smo;
  ocfg.window_mult = cfg.window_mult;
  ocfg.schedule.c0 = sigma_bar_sq / cfg.c0_scale;
  ocfg.schedule.c1 = cfg.c1;
  ocfg.schedule.t_initial = cfg.t_initial >= 0 ? cfg.t_initial : dim;
  ocfg.schedule.kappa0_sq = sigma_bar_sq / cfg.kappa0_scale;
  ocfg.lr = cfg.lr;
  ocfg.beta1 = cfg.beta1;
  ocfg.beta2 = cfg.beta2;
  ocfg.adam_epsilon = cfg.adam_epsilon;

  const Runner runner = pick_runner(cfg.method);
  const int workers = worker_count();
  std::vector<TrialState> states(cfg.n_trials);
  std::exception_ptr err = nullptr;
#pragma omp parallel for schedule(dynamic) num_threads(workers)
  for (int i = 0; i < cfg.n_trials; ++i) {
    try {
      RngStream rng(cfg.base_seed + static_cast<unsigned long long>(i));
      Eigen::VectorXd x0(dim);
      for (int d = 0; d < dim; ++d) x0[d] = rng.uniform(0.0, 2.0 * M_PI);
      states[i] = runner(ocfg, std::move(x0), rng);
    } catch (...) {
#pragma omp critical
      if (!err) err = std::current_exception();
    }
  }
  if (err) std::rethrow_exception(err);

  ExperimentResult result;
  result.sigma_bar_sq = sigma_bar_sq;
  result.ground_energy = gt.energy;
  for (int i = 0; i < cfg.n_trials; ++i) {
    for (const StepRecord& s : states[i].history) {
      RunRecord r;
      r.trial = i;
      r.step = s.step;
      r.cumulative_shots = s.cumulative_shots;
      r.delta_energy = s.delta_energy;
      r.delta_fidelity = s.delta_fidelity;
      r.kappa_sq = s.kappa_sq;
      r.shots_this_step = s.shots_this_step;
      r.method = cfg.method;
      result.records.push_back(std::move(r));
    }
  }
  return result;
}

void write_records_csv(const std::string& path, const std::vector<RunRecord>& records) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("csv: cannot open '" + path + "' for writing");
  out << kRecordsHeader << "\n";
  for (const RunRecord& r : records) {
    out << r.trial << ',' << r.step << ',' << r.cumulative_shots << ','
        << fmt_double(r.delta_energy) << ',' << fmt_double(r.delta_fidelity) << ','
        << (std::isnan(r.kappa_sq) ? std::string() : fmt_double(r.kappa_sq)) << ','
        << r.shots_this_step << ',' << r.method << "\n";
  }
  if (!out) throw std::runtime_error("csv: write to '" + path + "' failed");
}

std::vector<RunRecord> read_records_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("csv: cannot open '" + path + "'");
  std::string line;
  if (!std::getline(in, line) || line != kRecordsHeader) {
    throw std::invalid_argument("csv: unexpected header in '" + path + "'");
  }
  std::vector<RunRecord> records;
  size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const std::vector<std::string> f = split_line(line, ',');
    if (f.size() != 8) {
      throw std::invalid_argument("csv: wrong field count on line " + std::to_string(line_no));
    }
    RunRecord r;
    r.trial = static_cast<int>(parse_ll_field(f[0], "trial", line_no));
    r.step = static_cast<int>(parse_ll_field(f[1], "step", line_no));
    r.cumulative_shots = parse_ll_field(f[2], "cumulative_shots", line_no);
    r.delta_energy = parse_double_field(f[3], "delta_energy", line_no);
    r.delta_fidelity = parse_double_field(f[4], "delta_fidelity", line_no);
    r.kappa_sq = f[5].empty() ? std::numeric_limits<double>::quiet_NaN()
                              : parse_double_field(f[5], "kappa_sq", line_no);
    r.shots_this_step = parse_ll_field(f[6], "shots_this_step", line_no);
    if (f[7].empty()) {
      throw std::invalid_argument("csv: empty method on line " + std::to_string(line_no));
    }
    r.method = f[7];
    records.push_back(std::move(r));
  }
  return records;
}

std::vector<long long> make_log_grid(long long lo, long long hi, int n) {
  if (n < 1) throw std::invalid_argument("make_log_grid: need at least one point");
  if (hi < lo) throw std::invalid_argument("make_log_grid: hi must be >= lo");
  lo = std::max<long long>(lo, 1);
  hi = std::max(hi, lo);
  std::vector<long long> grid;
  for (int k = 0; k < n; ++k) {
    long long v;
    if (k == 0) {
      v = lo;
    } else if (k == n - 1) {
      v = hi;
    } else {
      const double t = static_cast<double>(k) / (n - 1);
      const double val =
          static_cast<double>(lo) * std::pow(static_cast<double>(hi) / static_cast<double>(lo), t);
      v = std::clamp(static_cast<long long>(std::llround(val)), lo, hi);
    }
    if (grid.empty() || v > grid.back()) grid.push_back(v);
  }
  return grid;
}

std::vector<AggregateRow> aggregate(const std::vector<RunRecord>& records,
                                    const std::vector<long long>& grid) {
  if (grid.empty()) throw std::invalid_argument("aggregate: empty grid");
  for (size_t i = 1; i < grid.size(); ++i) {
    if (grid[i] <= grid[i - 1]) {
      throw std::invalid_argument("aggregate: grid must be strictly increasing");
    }
  }
  std::vector<std::string> methods;
  for (const RunRecord& r : records) {
    if (std::find(methods.begin(), methods.end(), r.method) == methods.end()) {
      methods.push_back(r.method);
    }
  }
  std::vector<AggregateRow> out;
  for (const std::string& m : methods) {
    std::map<int, std::vector<const RunRecord*>> trials;
    for (const RunRecord& r : records) {
      if (r.method == m) trials[r.trial].push_back(&r);
    }
    for (auto& [trial, recs] : trials) {
      std::stable_sort(recs.begin(), recs.end(),
                       [](const RunRecord* a, const RunRecord* b) { return a->step < b->step; });
    }
    for (const long long g : grid) {
      std::vector<double> es, fs;
      for (const auto& [trial, recs] : trials) {
        // Latest state at or before the checkpoint; the first record stands
        // in below its own cumulative count.
        const RunRecord* chosen = recs.front();
        for (const RunRecord* r : recs) {
          if (r->cumulative_shots <= g) {
            chosen = r;
          } else {
            break;
          }
        }
        es.push_back(chosen->delta_energy);
        fs.push_back(chosen->delta_fidelity);
      }
      if (es.empty()) continue;
      std::sort(es.begin(), es.end());
      std::sort(fs.begin(), fs.end());
      AggregateRow row;
      row.method = m;
      row.cumulative_shots = g;
      row.e_p25 = percentile(es, 25.0);
      row.e_median = percentile(es, 50.0);
      row.e_p75 = percentile(es, 75.0);
      row.f_p25 = percentile(fs, 25.0);
      row.f_median = percentile(fs, 50.0);
      row.f_p75 = percentile(fs, 75.0);
      out.push_back(std::move(row));
    }
  }
  return out;
}

void write_aggregate_csv(const std::string& path, const std::vector<AggregateRow>& rows) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("csv: cannot open '" + path + "' for writing");
  out << kAggregateHeader << "\n";
  for (const AggregateRow& r : rows) {
    out << r.method << ',' << r.cumulative_shots << ',' << fmt_double(r.e_p25) << ','
        << fmt_double(r.e_median) << ',' << fmt_double(r.e_p75) << ',' << fmt_double(r.f_p25)
        << ',' << fmt_double(r.f_median) << ',' << fmt_double(r.f_p75) << "\n";
  }
  if (!out) throw std::runtime_error("csv: write to '" + path + "' failed");
}

std::vector<AggregateRow> read_aggregate_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("csv: cannot open '" + path + "'");
  std::string line;
  if (!std::getline(in, line) || line != kAggregateHeader) {
    throw std::invalid_argument("csv: unexpected header in '" + path + "'");
  }
  std::vector<AggregateRow> rows;
  size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const std::vector<std::string> f = split_line(line, ',');
    if (f.size() != 8) {
      throw std::invalid_argument("csv: wrong field count on line " + std::to_string(line_no));
    }
    AggregateRow r;
    if (f[0].empty()) {
      throw std::invalid_argument("csv: empty method on line " + std::to_string(line_no));
    }
    r.method = f[0];
    r.cumulative_shots = parse_ll_field(f[1], "cumulative_shots", line_no);
    r.e_p25 = parse_double_field(f[2], "delta_energy_p25", line_no);
    r.e_median = parse_double_field(f[3], "delta_energy_median", line_no);
    r.e_p75 = parse_double_field(f[4], "delta_energy_p75", line_no);
    r.f_p25 = parse_double_field(f[5], "delta_fidelity_p25", line_no);
    r.f_median = parse_double_field(f[6], "delta_fidelity_median", line_no);
    r.f_p75 = parse_double_field(f[7], "delta_fidelity_p75", line_no);
    rows.push_back(std::move(r));
  }
  return rows;
}

namespace {

constexpr double kPlotFloor = 1e-12;

double plot_value(const AggregateRow& r, PlotMetric metric, int which) {
  double v;
  if (metric == PlotMetric::kEnergy) {
    v = which == 0 ? r.e_p25 : (which == 1 ? r.e_median : r.e_p75);
  } else {
    v = which == 0 ? r.f_p25 : (which == 1 ? r.f_median : r.f_p75);
  }
  return std::max(v, kPlotFloor);
}

const char* kPalette[6] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

}  // namespace

std::string render_plot_svg(const std::vector<AggregateRow>& rows, PlotMetric metric) {
  if (rows.empty()) throw std::invalid_argument("emit_plot: nothing to plot");
  std::vector<std::string> methods;
  for (const AggregateRow& r : rows) {
    if (std::find(methods.begin(), methods.end(), r.method) == methods.end()) {
      methods.push_back(r.method);
    }
  }
  double lx0 = std::numeric_limits<double>::infinity(), lx1 = -lx0;
  double ly0 = lx0, ly1 = -lx0;
  for (const AggregateRow& r : rows) {
    const double x = std::log10(static_cast<double>(std::max<long long>(r.cumulative_shots, 1)));
    lx0 = std::min(lx0, x);
    lx1 = std::max(lx1, x);
    for (int w = 0; w < 3; ++w) {
      const double y = std::log10(plot_value(r, metric, w));
      ly0 = std::min(ly0, y);
      ly1 = std::max(ly1, y);
    }
  }
  // Whole decades, at least one wide.
  lx0 = std::floor(lx0);
  lx1 = std::ceil(lx1);
  if (lx1 <= lx0) lx1 = lx0 + 1;
  ly0 = std::floor(ly0);
  ly1 = std::ceil(ly1);
  if (ly1 <= ly0) ly1 = ly0 + 1;

  const double left = 70, right = 660, top = 40, bottom = 490;
  const auto px = [&](double logx) {
    return left + (logx - lx0) / (lx1 - lx0) * (right - left);
  };
  const auto py = [&](double logy) {
    return bottom - (logy - ly0) / (ly1 - ly0) * (bottom - top);
  };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"880\" height=\"540\" "
         "viewBox=\"0 0 880 540\">\n";
  svg << "<rect x=\"0\" y=\"0\" width=\"880\" height=\"540\" fill=\"white\"/>\n";
  const char* ylabel =
      metric == PlotMetric::kEnergy ? "delta_energy (median, IQR)" : "delta_fidelity (median, IQR)";
  svg << "<text x=\"" << fmt_coord(left) << "\" y=\"22\" font-family=\"sans-serif\" "
         "font-size=\"15\" fill=\"black\">"
      << ylabel << " vs cumulative shots</text>\n";
  // Gridlines and tick labels at decades.
  for (int k = static_cast<int>(lx0); k <= static_cast<int>(lx1); ++k) {
    const double x = px(k);
    svg << "<line x1=\"" << fmt_coord(x) << "\" y1=\"" << fmt_coord(top) << "\" x2=\""
        << fmt_coord(x) << "\" y2=\"" << fmt_coord(bottom)
        << "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
    svg << "<text x=\"" << fmt_coord(x) << "\" y=\"" << fmt_coord(bottom + 20)
        << "\" font-family=\"sans-serif\" font-size=\"12\" fill=\"black\" "
           "text-anchor=\"middle\">1e"
        << k << "</text>\n";
  }
  for (int k = static_cast<int>(ly0); k <= static_cast<int>(ly1); ++k) {
    const double y = py(k);
    svg << "<line x1=\"" << fmt_coord(left) << "\" y1=\"" << fmt_coord(y) << "\" x2=\""
        << fmt_coord(right) << "\" y2=\"" << fmt_coord(y)
        << "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
    svg << "<text x=\"" << fmt_coord(left - 8) << "\" y=\"" << fmt_coord(y + 4)
        << "\" font-family=\"sans-serif\" font-size=\"12\" fill=\"black\" "
           "text-anchor=\"end\">1e"
        << k << "</text>\n";
  }
  svg << "<rect x=\"" << fmt_coord(left) << "\" y=\"" << fmt_coord(top) << "\" width=\""
      << fmt_coord(right - left) << "\" height=\"" << fmt_coord(bottom - top)
      << "\" fill=\"none\" stroke=\"black\" stroke-width=\"1\"/>\n";
  svg << "<text x=\"" << fmt_coord((left + right) / 2) << "\" y=\"530\" "
         "font-family=\"sans-serif\" font-size=\"13\" fill=\"black\" "
         "text-anchor=\"middle\">cumulative measurement shots</text>\n";

  for (size_t mi = 0; mi < methods.size(); ++mi) {
    const std::string& m = methods[mi];
    const char* color = kPalette[mi % 6];
    std::vector<const AggregateRow*> series;
    for (const AggregateRow& r : rows) {
      if (r.method == m) series.push_back(&r);
    }
    std::stable_sort(series.begin(), series.end(), [](const AggregateRow* a,
                                                      const AggregateRow* b) {
      return a->cumulative_shots < b->cumulative_shots;
    });
    // Interquartile band: lower quartile forward, upper quartile back.
    svg << "<polygon fill=\"" << color << "\" fill-opacity=\"0.18\" stroke=\"none\" points=\"";
    for (const AggregateRow* r : series) {
      svg << fmt_coord(px(std::log10(static_cast<double>(std::max<long long>(r->cumulative_shots, 1)))))
          << ',' << fmt_coord(py(std::log10(plot_value(*r, metric, 0)))) << ' ';
    }
    for (auto it = series.rbegin(); it != series.rend(); ++it) {
      svg << fmt_coord(px(std::log10(static_cast<double>(std::max<long long>((*it)->cumulative_shots, 1)))))
          << ',' << fmt_coord(py(std::log10(plot_value(**it, metric, 2)))) << ' ';
    }
    svg << "\"/>\n";
    svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
    for (const AggregateRow* r : series) {
      svg << fmt_coord(px(std::log10(static_cast<double>(std::max<long long>(r->cumulative_shots, 1)))))
          << ',' << fmt_coord(py(std::log10(plot_value(*r, metric, 1)))) << ' ';
    }
    svg << "\"/>\n";
    const double ly = top + 18 + 22 * static_cast<double>(mi);
    svg << "<line x1=\"690\" y1=\"" << fmt_coord(ly) << "\" x2=\"718\" y2=\"" << fmt_coord(ly)
        << "\" stroke=\"" << color << "\" stroke-width=\"3\"/>\n";
    svg << "<text x=\"724\" y=\"" << fmt_coord(ly + 4)
        << "\" font-family=\"sans-serif\" font-size=\"13\" fill=\"black\">" << m << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

void emit_plot(const std::vector<AggregateRow>& rows, PlotMetric metric,
               const std::string& out_path) {
  const std::string svg = render_plot_svg(rows, metric);
  std::ofstream out(out_path);
  if (!out) throw std::runtime_error("emit_plot: cannot open '" + out_path + "' for writing");
  out << svg;
  if (!out) throw std::runtime_error("emit_plot: write to '" + out_path + "' failed");
}

}  // namespace vqebench
