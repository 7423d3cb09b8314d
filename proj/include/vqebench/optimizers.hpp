#pragma once

#include <limits>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "vqebench/gp.hpp"
#include "vqebench/psr.hpp"
#include "vqebench/rng.hpp"
#include "vqebench/simulator.hpp"

namespace vqebench {

struct AdamState {
  Eigen::VectorXd first_moment;
  Eigen::VectorXd second_moment;
  int step_count = 0;
  double learning_rate = 0.05;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;

  static AdamState fresh(int dim, double lr, double b1, double b2, double eps) {
    return {Eigen::VectorXd::Zero(dim), Eigen::VectorXd::Zero(dim), 0, lr, b1, b2, eps};
  }
};

// One bias-corrected ADAM descent step; the returned location is reduced
// mod 2pi componentwise.
std::pair<AdamState, Eigen::VectorXd> adam_update(AdamState s, const Eigen::VectorXd& grad,
                                                  const Eigen::VectorXd& x);

struct KappaSchedule {
  double c0 = 0.0;      // variance floor of the adaptive threshold
  double c1 = 1.2;      // slope on the mean squared gradient
  int t_initial = 0;    // steps that use the fixed initial threshold
  double kappa0_sq = 0.0;
};

// Per-axis squared confidence thresholds for step t: kappa0_sq before
// t_initial, max(c0, c1/D * sum_d grad_mean_d^2) afterwards (same value on
// every axis).
Eigen::VectorXd kappa_update(const KappaSchedule& sched, const Eigen::VectorXd& grad_mean, int t);

struct GradcoreSelection {
  std::vector<Eigen::VectorXd> points;  // 2 V_d locations per axis, axis-major
  std::vector<int> shots;               // per point; equal within an axis pair
  std::vector<int> axis;                // owning axis per point
  std::vector<char> axis_miss;          // per axis: no grid noise met the threshold
  bool constraint_miss = false;
};

// Per axis: the largest hypothetical observation noise (on a 64-point
// geometric grid between 2 kappa_d^2 and sigma_bar_sq) whose pair of shifted
// observations would pull the derivative posterior variance at x_hat below
// kappa_d^2; shot counts are ceil(sigma_bar_sq / noise). When even the
// smallest grid noise misses, shots are capped at ceil(sigma_bar_sq /
// (2 kappa_d^2)) and the miss is flagged rather than thrown.
GradcoreSelection gradcore_select(const GpSolver& solver, const Eigen::VectorXd& x_hat,
                                  const Eigen::VectorXd& kappa_sq, double sigma_bar_sq,
                                  double alpha_hat);
GradcoreSelection gradcore_select(const Dataset& ds, const Eigen::VectorXd& x_hat,
                                  const Eigen::VectorXd& kappa_sq, double sigma_bar_sq,
                                  double alpha_hat, const KernelParams& p);

struct TrigCoeffs {
  int v = 1;
  // 1 + 2v coefficients over the basis (1, sqrt2 cos k theta (k=1..v),
  // sqrt2 sin k theta (k=1..v)).
  Eigen::VectorXd b;
};

// Weighted least squares of an order-v trigonometric polynomial;
// noise_vars are per-point observation variances. Needs at least 2v+1
// points and rejects rank-deficient (coincident-angle) designs.
TrigCoeffs fit_1d_trig(const std::vector<double>& thetas, const std::vector<double>& ys,
                       const std::vector<double>& noise_vars, int v);

double eval_1d_trig(const TrigCoeffs& c, double theta);

// Global minimizer location in [0, 2pi): closed form for v = 1, dense grid
// plus local refinement for higher orders.
double argmin_1d_trig(const TrigCoeffs& c);

struct OptimizerConfig {
  const PauliHamiltonian* hamiltonian = nullptr;
  const Circuit* circuit = nullptr;
  double e_gs = 0.0;                 // exact ground energy
  const Statevector* psi_gs = nullptr;
  KernelParams kernel;               // multiplicities mirror the circuit
  double sigma_bar_sq = 1.0;         // calibrated single-shot variance
  NoiseMode noise_mode = NoiseMode::kExactVariance;
  long long budget = 0;              // total shots per operator group
  int n_shots = 1024;                // fixed-shot methods
  double alpha_sgd = M_PI / 2.0;     // gradient-method shift
  double alpha_smo = 2.0 * M_PI / 3.0;  // coordinate-method shift
  int window_mult = 5;               // R; 0 disables observation reuse entirely
  KappaSchedule schedule;            // adaptive-shot method only
  double lr = 0.05;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double adam_epsilon = 1e-8;
};

struct StepRecord {
  int step = 0;
  long long cumulative_shots = 0;
  double delta_energy = 0.0;
  double delta_fidelity = 0.0;
  double kappa_sq = std::numeric_limits<double>::quiet_NaN();  // adaptive method only
  long long shots_this_step = 0;
};

// Per-step confidence diagnostics of the adaptive-shot method.
struct GradcoreStepDiag {
  Eigen::VectorXd grad_var;   // derivative posterior variance at x_hat, post-measurement
  Eigen::VectorXd kappa_sq;   // thresholds used for the step's selection
  std::vector<char> axis_miss;
};

struct TrialState {
  Eigen::VectorXd x_hat;
  Dataset dataset;
  AdamState adam;
  long long cumulative_shots = 0;
  int step = 0;
  std::vector<StepRecord> history;
  std::vector<GradcoreStepDiag> diagnostics;  // adaptive-shot method only
  long long constraint_misses = 0;
};

// The optimization drivers share one budget contract: a step runs only when
// its full shot cost still fits, so the budget is never exceeded.
TrialState run_sgd_psr(const OptimizerConfig& cfg, Eigen::VectorXd x0, RngStream& rng);
TrialState run_bayes_sgd(const OptimizerConfig& cfg, Eigen::VectorXd x0, RngStream& rng);
TrialState run_gradcore(const OptimizerConfig& cfg, Eigen::VectorXd x0, RngStream& rng);
TrialState run_nft(const OptimizerConfig& cfg, Eigen::VectorXd x0, RngStream& rng);
TrialState run_bayes_nft(const OptimizerConfig& cfg, Eigen::VectorXd x0, RngStream& rng);

}  // namespace vqebench
