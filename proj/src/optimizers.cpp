#include "vqebench/optimizers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace vqebench {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

double mod_two_pi(double a) {
  const double two_pi = 2.0 * M_PI;
  double r = std::fmod(a, two_pi);
  if (r < 0.0) r += two_pi;
  return r;
}

Eigen::VectorXd mod_two_pi_vec(Eigen::VectorXd x) {
  for (Eigen::Index i = 0; i < x.size(); ++i) x[i] = mod_two_pi(x[i]);
  return x;
}

Eigen::VectorXd shifted(const Eigen::VectorXd& x, int d, double delta) {
  Eigen::VectorXd p = x;
  p[d] = mod_two_pi(p[d] + delta);
  return p;
}

// Shift design for one axis: +-alpha for multiplicity 1, the 2v equidistant
// offsets otherwise. Every driver observes axes in this exact point order so
// runs sharing a seed consume identical noise draws.
std::vector<double> axis_shift_offsets(int v, double alpha) {
  if (v == 1) return {alpha, -alpha};
  std::vector<double> off;
  off.reserve(2 * v);
  for (int w = 0; w < 2 * v; ++w) off.push_back((2 * w + 1) * M_PI / (2.0 * v));
  return off;
}

std::vector<Eigen::VectorXd> axis_shift_points(const Eigen::VectorXd& x, int d, int v,
                                               double alpha) {
  std::vector<Eigen::VectorXd> pts;
  for (double off : axis_shift_offsets(v, alpha)) pts.push_back(shifted(x, d, off));
  return pts;
}

long long points_per_sweep(const std::vector<int>& mult) {
  long long s = 0;
  for (int v : mult) s += 2LL * v;
  return s;
}

void check_model(const OptimizerConfig& cfg) {
  if (cfg.hamiltonian == nullptr || cfg.circuit == nullptr || cfg.psi_gs == nullptr) {
    throw std::invalid_argument("optimizer: hamiltonian, circuit and ground state must be set");
  }
  if (cfg.circuit->n_params <= 0) {
    throw std::invalid_argument("optimizer: circuit has no parameters");
  }
  if (cfg.budget < 0) throw std::invalid_argument("optimizer: budget must be nonnegative");
  if (!(cfg.sigma_bar_sq > 0.0)) {
    throw std::invalid_argument("optimizer: sigma_bar_sq must be positive");
  }
  if (cfg.n_shots <= 0) throw std::invalid_argument("optimizer: n_shots must be positive");
}

void check_kernel_matches(const OptimizerConfig& cfg) {
  if (cfg.kernel.multiplicities != cfg.circuit->multiplicities) {
    throw std::invalid_argument("optimizer: kernel multiplicities must mirror the circuit");
  }
}

void check_shift(double alpha, const char* what) {
  if (!(alpha > 0.0 && alpha < M_PI)) {
    throw std::invalid_argument(std::string("optimizer: ") + what + " must lie in (0, pi)");
  }
}

Observation take_observation(const OptimizerConfig& cfg, const Eigen::VectorXd& x, int n_shots,
                             RngStream& rng) {
  const ObserveResult r = observe(*cfg.hamiltonian, *cfg.circuit, x, n_shots, cfg.noise_mode,
                                  cfg.sigma_bar_sq, rng);
  return Observation{x, 0, r.y, r.noise_var};
}

TrialState init_state(const OptimizerConfig& cfg, Eigen::VectorXd x0) {
  if (x0.size() != cfg.circuit->n_params) {
    throw std::invalid_argument("optimizer: x0 dimension must match the circuit");
  }
  TrialState st;
  st.x_hat = mod_two_pi_vec(std::move(x0));
  st.adam = AdamState::fresh(cfg.circuit->n_params, cfg.lr, cfg.beta1, cfg.beta2,
                             cfg.adam_epsilon);
  return st;
}

void record_step(TrialState& st, const OptimizerConfig& cfg, long long step_cost,
                 double kappa_sq_val) {
  StepRecord r;
  r.step = st.step;
  r.cumulative_shots = st.cumulative_shots;
  const Statevector psi = prepare_state(*cfg.circuit, st.x_hat);
  r.delta_energy = exact_energy(*cfg.hamiltonian, psi) - cfg.e_gs;
  r.delta_fidelity = 1.0 - fidelity(*cfg.psi_gs, psi);
  r.kappa_sq = kappa_sq_val;
  r.shots_this_step = step_cost;
  st.history.push_back(std::move(r));
  ++st.step;
}

void apply_adam(TrialState& st, const Eigen::VectorXd& grad) {
  auto [adam, x_new] = adam_update(std::move(st.adam), grad, st.x_hat);
  st.adam = std::move(adam);
  st.x_hat = std::move(x_new);
}

void trim_to_latest(Dataset& ds, long long keep) {
  if (keep < 0) keep = 0;
  const long long n = ds.size();
  if (n > keep) {
    ds.observations.erase(ds.observations.begin(),
                          ds.observations.begin() + static_cast<std::ptrdiff_t>(n - keep));
  }
}

// Drops the oldest observations whenever the upcoming sweep would overflow
// the window, so the post-append dataset is exactly what trimming after the
// append would leave. Doing it before selection lets the shot choice
// condition on the surviving points only.
bool make_room(Dataset& ds, long long limit, long long incoming) {
  if (ds.total_appended <= limit) return false;
  trim_to_latest(ds, limit - incoming);
  return true;
}

}  // namespace

std::pair<AdamState, Eigen::VectorXd> adam_update(AdamState s, const Eigen::VectorXd& grad,
                                                  const Eigen::VectorXd& x) {
  if (grad.size() != x.size() || grad.size() != s.first_moment.size()) {
    throw std::invalid_argument("adam_update: dimension mismatch");
  }
  s.step_count += 1;
  s.first_moment = s.beta1 * s.first_moment + (1.0 - s.beta1) * grad;
  s.second_moment =
      (s.beta2 * s.second_moment.array() + (1.0 - s.beta2) * grad.array().square()).matrix();
  const double bc1 = 1.0 - std::pow(s.beta1, s.step_count);
  const double bc2 = 1.0 - std::pow(s.beta2, s.step_count);
  const Eigen::ArrayXd m_hat = s.first_moment.array() / bc1;
  const Eigen::ArrayXd v_hat = s.second_moment.array() / bc2;
  Eigen::VectorXd x_new =
      (x.array() - s.learning_rate * m_hat / (v_hat.sqrt() + s.epsilon)).matrix();
  return {std::move(s), mod_two_pi_vec(std::move(x_new))};
}

Eigen::VectorXd kappa_update(const KappaSchedule& sched, const Eigen::VectorXd& grad_mean,
                             int t) {
  const int dim = static_cast<int>(grad_mean.size());
  if (dim == 0) throw std::invalid_argument("kappa_update: empty gradient");
  if (t < 0) throw std::invalid_argument("kappa_update: negative step index");
  if (!(sched.kappa0_sq > 0.0) || !(sched.c0 > 0.0) || !(sched.c1 > 0.0)) {
    throw std::invalid_argument("kappa_update: schedule levels must be positive");
  }
  double level;
  if (t < sched.t_initial) {
    level = sched.kappa0_sq;
  } else {
    level = std::max(sched.c0, sched.c1 / dim * grad_mean.squaredNorm());
  }
  return Eigen::VectorXd::Constant(dim, level);
}

GradcoreSelection gradcore_select(const GpSolver& solver, const Eigen::VectorXd& x_hat,
                                  const Eigen::VectorXd& kappa_sq, double sigma_bar_sq,
                                  double alpha_hat) {
  const KernelParams& p = solver.params();
  const int dim = static_cast<int>(p.multiplicities.size());
  if (x_hat.size() != dim || kappa_sq.size() != dim) {
    throw std::invalid_argument("gradcore_select: dimension mismatch");
  }
  if (!(sigma_bar_sq > 0.0)) {
    throw std::invalid_argument("gradcore_select: sigma_bar_sq must be positive");
  }
  check_shift(alpha_hat, "shift");
  constexpr int kGridSize = 64;
  GradcoreSelection sel;
  sel.axis_miss.assign(dim, 0);
  for (int d = 0; d < dim; ++d) {
    const double kap = kappa_sq[d];
    if (!(kap > 0.0)) {
      throw std::invalid_argument("gradcore_select: thresholds must be positive");
    }
    std::vector<Eigen::VectorXd> pts = axis_shift_points(x_hat, d, p.multiplicities[d], alpha_hat);
    const int npts = static_cast<int>(pts.size());
    // Joint posterior of [d-th derivative at x_hat, f at the shifted points];
    // appending the pair with noise s scales the derivative variance down by
    // the Schur complement against (S + s I).
    std::vector<TaggedPoint> queries;
    queries.emplace_back(x_hat, d + 1);
    for (const auto& q : pts) queries.emplace_back(q, 0);
    const GpPosterior post = solver.predict(queries);
    const double s_dd = post.cov(0, 0);
    const Eigen::VectorXd m = post.cov.col(0).segment(1, npts);
    const Eigen::MatrixXd s_pts = post.cov.block(1, 1, npts, npts);
    const auto var_after = [&](double noise) {
      Eigen::MatrixXd a = s_pts;
      a.diagonal().array() += noise;
      return s_dd - m.dot(a.ldlt().solve(m));
    };
    // Largest hypothetical noise on a geometric grid that still meets the
    // threshold; grid quantization only ever errs toward extra shots.
    const double hi = sigma_bar_sq;
    const double lo = std::min(2.0 * kap, sigma_bar_sq);
    double chosen = -1.0;
    for (int k = kGridSize - 1; k >= 0; --k) {
      const double noise = lo * std::pow(hi / lo, static_cast<double>(k) / (kGridSize - 1));
      if (var_after(noise) <= kap) {
        chosen = noise;
        break;
      }
    }
    double ratio;
    if (chosen > 0.0) {
      ratio = sigma_bar_sq / chosen;
    } else {
      sel.axis_miss[d] = 1;
      sel.constraint_miss = true;
      ratio = sigma_bar_sq / (2.0 * kap);
    }
    if (ratio > 2.0e9) {
      throw std::invalid_argument("gradcore_select: threshold demands an absurd shot count");
    }
    const int shots = std::max(1, static_cast<int>(std::ceil(ratio - 1e-12)));
    for (auto& q : pts) {
      sel.points.push_back(std::move(q));
      sel.shots.push_back(shots);
      sel.axis.push_back(d);
    }
  }
  return sel;
}

GradcoreSelection gradcore_select(const Dataset& ds, const Eigen::VectorXd& x_hat,
                                  const Eigen::VectorXd& kappa_sq, double sigma_bar_sq,
                                  double alpha_hat, const KernelParams& p) {
  GpSolver solver(p);
  solver.set_data(ds);
  return gradcore_select(solver, x_hat, kappa_sq, sigma_bar_sq, alpha_hat);
}

TrigCoeffs fit_1d_trig(const std::vector<double>& thetas, const std::vector<double>& ys,
                       const std::vector<double>& noise_vars, int v) {
  if (v < 1) throw std::invalid_argument("fit_1d_trig: order must be >= 1");
  const int n = static_cast<int>(thetas.size());
  if (static_cast<int>(ys.size()) != n || static_cast<int>(noise_vars.size()) != n) {
    throw std::invalid_argument("fit_1d_trig: input length mismatch");
  }
  const int ncoef = 1 + 2 * v;
  if (n < ncoef) throw std::invalid_argument("fit_1d_trig: need at least 2v+1 points");
  const double sqrt2 = std::sqrt(2.0);
  Eigen::MatrixXd a(n, ncoef);
  Eigen::VectorXd b(n);
  for (int i = 0; i < n; ++i) {
    if (!(noise_vars[i] > 0.0)) {
      throw std::invalid_argument("fit_1d_trig: noise variances must be positive");
    }
    const double w = 1.0 / std::sqrt(noise_vars[i]);
    a(i, 0) = w;
    for (int k = 1; k <= v; ++k) {
      a(i, k) = w * sqrt2 * std::cos(k * thetas[i]);
      a(i, v + k) = w * sqrt2 * std::sin(k * thetas[i]);
    }
    b[i] = w * ys[i];
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
  qr.setThreshold(1e-10);
  if (qr.rank() < ncoef) {
    throw std::invalid_argument("fit_1d_trig: rank-deficient design (coincident angles)");
  }
  TrigCoeffs c;
  c.v = v;
  c.b = qr.solve(b);
  return c;
}

double eval_1d_trig(const TrigCoeffs& c, double theta) {
  if (c.v < 1 || c.b.size() != 1 + 2 * c.v) {
    throw std::invalid_argument("eval_1d_trig: malformed coefficients");
  }
  const double sqrt2 = std::sqrt(2.0);
  double f = c.b[0];
  for (int k = 1; k <= c.v; ++k) {
    f += sqrt2 * (c.b[k] * std::cos(k * theta) + c.b[c.v + k] * std::sin(k * theta));
  }
  return f;
}

double argmin_1d_trig(const TrigCoeffs& c) {
  if (c.v < 1 || c.b.size() != 1 + 2 * c.v) {
    throw std::invalid_argument("argmin_1d_trig: malformed coefficients");
  }
  const double two_pi = 2.0 * M_PI;
  if (c.v == 1) {
    const double bc = c.b[1];
    const double bs = c.b[2];
    if (bc == 0.0 && bs == 0.0) return 0.0;  // constant: every point minimizes
    return mod_two_pi(std::atan2(-bs, -bc));
  }
  constexpr int kGrid = 256;
  int best = 0;
  double best_val = std::numeric_limits<double>::infinity();
  for (int i = 0; i < kGrid; ++i) {
    const double val = eval_1d_trig(c, two_pi * i / kGrid);
    if (val < best_val) {
      best_val = val;
      best = i;
    }
  }
  // Golden-section refinement inside the bracketing grid cells.
  double lo = two_pi * (best - 1) / kGrid;
  double hi = two_pi * (best + 1) / kGrid;
  constexpr double kInvGolden = 0.3819660112501051;
  while (hi - lo > 1e-10) {
    const double m1 = lo + kInvGolden * (hi - lo);
    const double m2 = hi - kInvGolden * (hi - lo);
    if (eval_1d_trig(c, m1) <= eval_1d_trig(c, m2)) {
      hi = m2;
    } else {
      lo = m1;
    }
  }
  return mod_two_pi(0.5 * (lo + hi));
}

TrialState run_sgd_psr(const OptimizerConfig& cfg, Eigen::VectorXd x0, RngStream& rng) {
  check_model(cfg);
  check_shift(cfg.alpha_sgd, "alpha_sgd");
  const std::vector<int>& mult = cfg.circuit->multiplicities;
  const int dim = cfg.circuit->n_params;
  TrialState st = init_state(cfg, std::move(x0));
  const long long step_cost = points_per_sweep(mult) * cfg.n_shots;
  while (st.cumulative_shots + step_cost <= cfg.budget) {
    Eigen::VectorXd grad(dim);
    for (int d = 0; d < dim; ++d) {
      const int v = mult[d];
      std::vector<double> ys;
      ys.reserve(2 * v);
      for (const Eigen::VectorXd& pt : axis_shift_points(st.x_hat, d, v, cfg.alpha_sgd)) {
        ys.push_back(take_observation(cfg, pt, cfg.n_shots, rng).value);
      }
      grad[d] = (v == 1) ? psr_first(ys[1], ys[0], cfg.alpha_sgd) : psr_general(ys, v);
    }
    apply_adam(st, grad);
    st.cumulative_shots += step_cost;
    record_step(st, cfg, step_cost, kNan);
  }
  return st;
}

TrialState run_bayes_sgd(const OptimizerConfig& cfg, Eigen::VectorXd x0, RngStream& rng) {
  check_model(cfg);
  check_kernel_matches(cfg);
  check_shift(cfg.alpha_sgd, "alpha_sgd");
  if (cfg.window_mult < 0) throw std::invalid_argument("optimizer: window_mult must be >= 0");
  const std::vector<int>& mult = cfg.circuit->multiplicities;
  const int dim = cfg.circuit->n_params;
  TrialState st = init_state(cfg, std::move(x0));
  GpSolver solver(cfg.kernel);
  const long long sweep = points_per_sweep(mult);
  const long long step_cost = sweep * cfg.n_shots;
  const long long limit = cfg.window_mult * sweep;
  while (st.cumulative_shots + step_cost <= cfg.budget) {
    if (cfg.window_mult == 0) {
      // No observation reuse: each sweep conditions only on itself.
      st.dataset = Dataset{};
      solver.set_data(st.dataset);
    } else if (make_room(st.dataset, limit, sweep)) {
      solver.set_data(st.dataset);
    }
    for (int d = 0; d < dim; ++d) {
      for (const Eigen::VectorXd& pt : axis_shift_points(st.x_hat, d, mult[d], cfg.alpha_sgd)) {
        Observation o = take_observation(cfg, pt, cfg.n_shots, rng);
        st.dataset.append(o);
        solver.append(o);
      }
    }
    apply_adam(st, solver.gradient_at(st.x_hat).first);
    st.cumulative_shots += step_cost;
    record_step(st, cfg, step_cost, kNan);
  }
  return st;
}

TrialState run_gradcore(const OptimizerConfig& cfg, Eigen::VectorXd x0, RngStream& rng) {
  check_model(cfg);
  check_kernel_matches(cfg);
  check_shift(cfg.alpha_sgd, "alpha_sgd");
  if (cfg.window_mult < 1) {
    throw std::invalid_argument("optimizer: adaptive-shot method needs window_mult >= 1");
  }
  const std::vector<int>& mult = cfg.circuit->multiplicities;
  const int dim = cfg.circuit->n_params;
  TrialState st = init_state(cfg, std::move(x0));
  GpSolver solver(cfg.kernel);
  const long long sweep = points_per_sweep(mult);
  const long long limit = cfg.window_mult * sweep;
  Eigen::VectorXd kap = kappa_update(cfg.schedule, Eigen::VectorXd::Zero(dim), 0);
  while (true) {
    if (make_room(st.dataset, limit, sweep)) solver.set_data(st.dataset);
    GradcoreSelection sel = gradcore_select(solver, st.x_hat, kap, cfg.sigma_bar_sq,
                                            cfg.alpha_sgd);
    long long step_cost = 0;
    for (int s : sel.shots) step_cost += s;
    if (st.cumulative_shots + step_cost > cfg.budget) break;
    for (std::size_t i = 0; i < sel.points.size(); ++i) {
      Observation o = take_observation(cfg, sel.points[i], sel.shots[i], rng);
      st.dataset.append(o);
      solver.append(o);
    }
    const auto [grad_mean, grad_var] = solver.gradient_at(st.x_hat);
    if (sel.constraint_miss) ++st.constraint_misses;
    st.diagnostics.push_back({grad_var, kap, sel.axis_miss});
    apply_adam(st, grad_mean);
    st.cumulative_shots += step_cost;
    record_step(st, cfg, step_cost, kap[0]);
    // The threshold must track the gradient norm, not the measurement noise.
    // A single-step posterior mean carries per-axis sampling variance close
    // to the selection threshold itself, so feeding it back through the
    // schedule multiplies the threshold by ~c1 every step and the shot
    // counts never grow. The optimizer's running first moment estimates the
    // same gradient with the noise averaged down ~20x, which keeps the
    // schedule anchored to the landscape.
    const double bias = 1.0 - std::pow(st.adam.beta1, st.adam.step_count);
    const Eigen::VectorXd grad_smoothed = st.adam.first_moment / bias;
    kap = kappa_update(cfg.schedule, grad_smoothed, st.step);
  }
  return st;
}

TrialState run_nft(const OptimizerConfig& cfg, Eigen::VectorXd x0, RngStream& rng) {
  check_model(cfg);
  check_shift(cfg.alpha_smo, "alpha_smo");
  const std::vector<int>& mult = cfg.circuit->multiplicities;
  const int dim = cfg.circuit->n_params;
  TrialState st = init_state(cfg, std::move(x0));
  // The seed observation is charged only if the first coordinate step fits
  // too; otherwise no useful work is possible and nothing is spent.
  const long long seed_gate =
      static_cast<long long>(cfg.n_shots) * (1 + 2LL * mult[0]);
  if (seed_gate > cfg.budget) return st;
  double y_center = take_observation(cfg, st.x_hat, cfg.n_shots, rng).value;
  st.cumulative_shots += cfg.n_shots;
  const double noise = cfg.sigma_bar_sq / cfg.n_shots;
  long long t = 0;
  while (true) {
    const int d = static_cast<int>(t % dim);
    const int v = mult[d];
    const bool stabilize = ((t + 1) % (dim + 1)) == 0;
    const long long step_cost =
        static_cast<long long>(cfg.n_shots) * (2LL * v + (stabilize ? 1 : 0));
    if (st.cumulative_shots + step_cost > cfg.budget) break;
    if (stabilize) {
      // Re-measure the carried center score to stop prediction-error drift.
      y_center = take_observation(cfg, st.x_hat, cfg.n_shots, rng).value;
    }
    std::vector<double> thetas{0.0};
    std::vector<double> ys{y_center};
    std::vector<double> vars{noise};
    for (double off : axis_shift_offsets(v, cfg.alpha_smo)) {
      thetas.push_back(off);
      ys.push_back(take_observation(cfg, shifted(st.x_hat, d, off), cfg.n_shots, rng).value);
      vars.push_back(noise);
    }
    const TrigCoeffs fit = fit_1d_trig(thetas, ys, vars, v);
    const double theta_star = argmin_1d_trig(fit);
    st.x_hat[d] = mod_two_pi(st.x_hat[d] + theta_star);
    y_center = eval_1d_trig(fit, theta_star);
    st.cumulative_shots += step_cost;
    record_step(st, cfg, step_cost, kNan);
    ++t;
  }
  return st;
}

TrialState run_bayes_nft(const OptimizerConfig& cfg, Eigen::VectorXd x0, RngStream& rng) {
  check_model(cfg);
  check_kernel_matches(cfg);
  check_shift(cfg.alpha_smo, "alpha_smo");
  if (cfg.window_mult < 1) {
    throw std::invalid_argument("optimizer: Bayesian coordinate method needs window_mult >= 1");
  }
  const std::vector<int>& mult = cfg.circuit->multiplicities;
  const int dim = cfg.circuit->n_params;
  TrialState st = init_state(cfg, std::move(x0));
  GpSolver solver(cfg.kernel);
  const long long limit = cfg.window_mult * points_per_sweep(mult);
  const long long seed_gate =
      static_cast<long long>(cfg.n_shots) * (1 + 2LL * mult[0]);
  if (seed_gate > cfg.budget) return st;
  {
    Observation o = take_observation(cfg, st.x_hat, cfg.n_shots, rng);
    st.dataset.append(o);
    solver.append(o);
    st.cumulative_shots += cfg.n_shots;
  }
  long long t = 0;
  while (true) {
    const int d = static_cast<int>(t % dim);
    const int v = mult[d];
    const bool stabilize = ((t + 1) % (dim + 1)) == 0;
    const long long step_cost =
        static_cast<long long>(cfg.n_shots) * (2LL * v + (stabilize ? 1 : 0));
    if (st.cumulative_shots + step_cost > cfg.budget) break;
    if (stabilize) {
      Observation o = take_observation(cfg, st.x_hat, cfg.n_shots, rng);
      st.dataset.append(o);
      solver.append(o);
    }
    for (double off : axis_shift_offsets(v, cfg.alpha_smo)) {
      Observation o = take_observation(cfg, shifted(st.x_hat, d, off), cfg.n_shots, rng);
      st.dataset.append(o);
      solver.append(o);
    }
    const int pre_size = st.dataset.size();
    st.dataset = retain_window(std::move(st.dataset), RetainPolicy::kNftInducer,
                               static_cast<int>(limit), st.x_hat, cfg.kernel);
    if (st.dataset.size() != pre_size) solver.set_data(st.dataset);
    // The posterior mean restricted to one axis is an order-v trigonometric
    // polynomial, so 2v+1 samples pin it down exactly.
    const int npts = 2 * v + 1;
    std::vector<double> thetas;
    std::vector<TaggedPoint> queries;
    for (int j = 0; j < npts; ++j) {
      const double theta = 2.0 * M_PI * j / npts;
      thetas.push_back(theta);
      queries.emplace_back(shifted(st.x_hat, d, theta), 0);
    }
    const Eigen::VectorXd mean = solver.predict_mean(queries);
    const std::vector<double> ys(mean.data(), mean.data() + npts);
    const TrigCoeffs fit = fit_1d_trig(thetas, ys, std::vector<double>(npts, 1.0), v);
    st.x_hat[d] = mod_two_pi(st.x_hat[d] + argmin_1d_trig(fit));
    st.cumulative_shots += step_cost;
    record_step(st, cfg, step_cost, kNan);
    ++t;
  }
  return st;
}

}  // namespace vqebench
