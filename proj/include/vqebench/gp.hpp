#pragma once

#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace vqebench {

struct KernelParams {
  double gamma_sq = 1.0;
  double sigma0_sq = 1.0;
  std::vector<int> multiplicities;  // per-axis Fourier order V_d >= 1
};

// tag 0 is a value observation; tag d in 1..D differentiates along axis d-1.
struct Observation {
  Eigen::VectorXd location;
  int tag = 0;
  double value = 0.0;
  double noise_var = 0.0;
};

struct Dataset {
  std::vector<Observation> observations;
  // Lifetime append count; retention policies trigger on it rather than on
  // the current size so the windowed size stays constant once warmed up.
  long long total_appended = 0;

  void append(Observation o) {
    observations.push_back(std::move(o));
    ++total_appended;
  }
  int size() const { return static_cast<int>(observations.size()); }
};

struct GpPosterior {
  Eigen::VectorXd mean;
  Eigen::MatrixXd cov;
};

using TaggedPoint = std::pair<Eigen::VectorXd, int>;

// Product trigonometric kernel: sigma0_sq * prod_d (gamma_sq +
// 2 sum_{v<=V_d} cos(v (x_d - x2_d))) / (gamma_sq + 2 V_d). Equals sigma0_sq
// at x = x2 and is exactly symmetric in its arguments.
double vqe_kernel(const Eigen::VectorXd& x, const Eigen::VectorXd& x2, const KernelParams& p);

// Cov(f(x), df/dx2_d (x2)): the axis-d factor becomes
// 2 sum_v v sin(v (x_d - x2_d)) / (gamma_sq + 2 V_d). Axis d is 0-based.
double kernel_deriv_cross(const Eigen::VectorXd& x, const Eigen::VectorXd& x2, int d,
                          const KernelParams& p);

// Cov(df/dx_d (x), df/dx2_d2 (x2)): same-axis factor
// 2 sum_v v^2 cos(v delta) / (gamma_sq + 2 V_d); distinct axes each carry one
// first-derivative factor.
double kernel_deriv_both(const Eigen::VectorXd& x, int d, const Eigen::VectorXd& x2, int d2,
                         const KernelParams& p);

// Covariance between two tagged observations (dispatch over the tag pair).
double kernel_entry(const Eigen::VectorXd& x, int tag, const Eigen::VectorXd& x2, int tag2,
                    const KernelParams& p);

// Symmetric Gram matrix of the observations plus Diag(max(noise, floor) +
// jitter). The parallel variant fills independent entries concurrently and is
// bit-identical to the serial reference.
Eigen::MatrixXd build_gram_serial(const std::vector<Observation>& obs, const KernelParams& p,
                                  double jitter);
Eigen::MatrixXd build_gram_parallel(const std::vector<Observation>& obs, const KernelParams& p,
                                    double jitter);

// Incremental GP engine: one Cholesky factorization per data change, extended
// in place by bordered updates when observations are appended.
class GpSolver {
 public:
  explicit GpSolver(KernelParams p);

  void set_data(const Dataset& ds);   // full refactorization
  void append(const Observation& o);  // O(n^2) bordered extension
  int size() const { return static_cast<int>(obs_.size()); }
  const KernelParams& params() const { return p_; }

  GpPosterior predict(const std::vector<TaggedPoint>& queries) const;
  // Posterior mean only: skips the covariance solves, O(n) per query.
  Eigen::VectorXd predict_mean(const std::vector<TaggedPoint>& queries) const;
  // Per-axis derivative posterior at x_hat: (means, variances).
  std::pair<Eigen::VectorXd, Eigen::VectorXd> gradient_at(const Eigen::VectorXd& x_hat) const;

 private:
  void factorize();

  KernelParams p_;
  std::vector<Observation> obs_;
  // Per-observation cos/sin tables (one row per axis) for transcendental-free
  // kernel evaluation via angle-difference identities.
  std::vector<Eigen::Matrix2Xd> trig_;
  Eigen::MatrixXd lmat_;   // lower Cholesky factor of the regularized Gram
  Eigen::VectorXd y_;
  Eigen::VectorXd alpha_;  // (K + Sigma)^{-1} y
  double jitter_ = 0.0;
};

// Posterior over tagged queries: mean = K'^T (K + Diag(sigma))^{-1} y,
// cov = K'' - K'^T (K + Diag(sigma))^{-1} K'. Empty dataset gives the prior.
GpPosterior posterior(const Dataset& ds, const std::vector<TaggedPoint>& queries,
                      const KernelParams& p);

// Derivative posterior per axis at x_hat (means and variances; cross-axis
// covariance is never consumed by the optimizers and is not returned).
std::pair<Eigen::VectorXd, Eigen::VectorXd> grad_posterior(const Dataset& ds,
                                                           const Eigen::VectorXd& x_hat,
                                                           const KernelParams& p);

enum class RetainPolicy {
  kSgdWindow,   // keep the newest `limit` once the lifetime count passes limit + sweep
  kNftInducer,  // condense everything older than `limit`-1 into one predicted pseudo-point
};

Dataset retain_window(Dataset ds, RetainPolicy policy, int limit,
                      const Eigen::VectorXd& current_opt, const KernelParams& p);

}  // namespace vqebench
