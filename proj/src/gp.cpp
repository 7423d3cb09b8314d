#include "vqebench/gp.hpp"

#include <cmath>
#include <stdexcept>

namespace vqebench {

namespace {

constexpr double kNoiseFloorRel = 1e-12;  // times sigma0_sq
constexpr double kJitterStartRel = 1e-12;
constexpr double kJitterStopRel = 1e-6;

void check_params(const KernelParams& p) {
  if (p.gamma_sq <= 0.0 || p.sigma0_sq <= 0.0) {
    throw std::invalid_argument("kernel params: gamma_sq and sigma0_sq must be positive");
  }
  for (int v : p.multiplicities) {
    if (v < 1) throw std::invalid_argument("kernel params: multiplicities must be >= 1");
  }
}

// Direct-evaluation per-axis factors. |delta| keeps the value factor exactly
// symmetric under argument swap.
double value_factor(double delta, int v, double gamma_sq) {
  double acc = 0.0;
  const double ad = std::fabs(delta);
  for (int k = 1; k <= v; ++k) acc += std::cos(k * ad);
  return (gamma_sq + 2.0 * acc) / (gamma_sq + 2.0 * v);
}

// d/d(delta) of the value factor numerator structure: the axis factor that
// multiplies in when exactly one side of this axis carries a derivative.
double first_deriv_factor(double delta, int v, double gamma_sq) {
  double acc = 0.0;
  for (int k = 1; k <= v; ++k) acc += k * std::sin(k * delta);
  return 2.0 * acc / (gamma_sq + 2.0 * v);
}

double second_deriv_factor(double delta, int v, double gamma_sq) {
  double acc = 0.0;
  for (int k = 1; k <= v; ++k) acc += static_cast<double>(k) * k * std::cos(k * delta);
  return 2.0 * acc / (gamma_sq + 2.0 * v);
}

// Tagged covariance via direct trig calls; reference path for the table-based
// fast evaluation below.
double entry_direct(const Eigen::VectorXd& x, int tag, const Eigen::VectorXd& x2, int tag2,
                    const KernelParams& p) {
  const int dim = static_cast<int>(p.multiplicities.size());
  if (x.size() != dim || x2.size() != dim) {
    throw std::invalid_argument("kernel: dimension mismatch with multiplicities");
  }
  if (tag < 0 || tag > dim || tag2 < 0 || tag2 > dim) {
    throw std::invalid_argument("kernel: derivative tag out of range");
  }
  double out = p.sigma0_sq;
  for (int d = 0; d < dim; ++d) {
    const double delta = x[d] - x2[d];
    const int v = p.multiplicities[d];
    const bool left = tag == d + 1;    // d/dx_d on the first argument
    const bool right = tag2 == d + 1;  // d/dx2_d on the second argument
    if (left && right) {
      out *= second_deriv_factor(delta, v, p.gamma_sq);
    } else if (left) {
      out *= -first_deriv_factor(delta, v, p.gamma_sq);
    } else if (right) {
      out *= first_deriv_factor(delta, v, p.gamma_sq);
    } else {
      out *= value_factor(delta, v, p.gamma_sq);
    }
  }
  return out;
}

// cos/sin table for one location: column d holds (cos x_d, sin x_d).
Eigen::Matrix2Xd trig_table(const Eigen::VectorXd& x) {
  Eigen::Matrix2Xd t(2, x.size());
  for (Eigen::Index d = 0; d < x.size(); ++d) {
    t(0, d) = std::cos(x[d]);
    t(1, d) = std::sin(x[d]);
  }
  return t;
}

// Tagged covariance from precomputed tables: cos/sin of the axis difference
// come from angle-difference identities and the higher harmonics from the
// Chebyshev-style recurrences, so Gram assembly performs no transcendental
// calls. Products commute, so the result is exactly symmetric in the two
// observations (up to the tag-driven sign).
double entry_fast(const Eigen::Matrix2Xd& a, int tag, const Eigen::Matrix2Xd& b, int tag2,
                  const KernelParams& p) {
  double out = p.sigma0_sq;
  const int dim = static_cast<int>(p.multiplicities.size());
  for (int d = 0; d < dim; ++d) {
    const double c1 = a(0, d) * b(0, d) + a(1, d) * b(1, d);  // cos(x_d - x2_d)
    const double s1 = a(1, d) * b(0, d) - a(0, d) * b(1, d);  // sin(x_d - x2_d)
    const int v = p.multiplicities[d];
    const double den = p.gamma_sq + 2.0 * v;
    const bool left = tag == d + 1;
    const bool right = tag2 == d + 1;
    double ck = c1, sk = s1, ckm1 = 1.0, skm1 = 0.0;
    double cos_sum = 0.0, sin_sum = 0.0, cos2_sum = 0.0;
    for (int k = 1; k <= v; ++k) {
      if (k > 1) {
        const double cn = 2.0 * c1 * ck - ckm1;
        const double sn = 2.0 * c1 * sk - skm1;
        ckm1 = ck;
        skm1 = sk;
        ck = cn;
        sk = sn;
      }
      cos_sum += ck;
      sin_sum += k * sk;
      cos2_sum += static_cast<double>(k) * k * ck;
    }
    if (left && right) {
      out *= 2.0 * cos2_sum / den;
    } else if (left) {
      out *= -2.0 * sin_sum / den;
    } else if (right) {
      out *= 2.0 * sin_sum / den;
    } else {
      out *= (p.gamma_sq + 2.0 * cos_sum) / den;
    }
  }
  return out;
}

}  // namespace

double vqe_kernel(const Eigen::VectorXd& x, const Eigen::VectorXd& x2, const KernelParams& p) {
  check_params(p);
  return entry_direct(x, 0, x2, 0, p);
}

double kernel_deriv_cross(const Eigen::VectorXd& x, const Eigen::VectorXd& x2, int d,
                          const KernelParams& p) {
  check_params(p);
  return entry_direct(x, 0, x2, d + 1, p);
}

double kernel_deriv_both(const Eigen::VectorXd& x, int d, const Eigen::VectorXd& x2, int d2,
                         const KernelParams& p) {
  check_params(p);
  return entry_direct(x, d + 1, x2, d2 + 1, p);
}

double kernel_entry(const Eigen::VectorXd& x, int tag, const Eigen::VectorXd& x2, int tag2,
                    const KernelParams& p) {
  check_params(p);
  return entry_direct(x, tag, x2, tag2, p);
}

Eigen::MatrixXd build_gram_serial(const std::vector<Observation>& obs, const KernelParams& p,
                                  double jitter) {
  const int n = static_cast<int>(obs.size());
  std::vector<Eigen::Matrix2Xd> tables;
  tables.reserve(n);
  for (const Observation& o : obs) tables.push_back(trig_table(o.location));
  const double floor = kNoiseFloorRel * p.sigma0_sq;
  Eigen::MatrixXd k(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      const double e = entry_fast(tables[i], obs[i].tag, tables[j], obs[j].tag, p);
      k(i, j) = e;
      k(j, i) = e;
    }
    k(i, i) += std::max(obs[i].noise_var, floor) + jitter;
  }
  return k;
}

Eigen::MatrixXd build_gram_parallel(const std::vector<Observation>& obs, const KernelParams& p,
                                    double jitter) {
  const int n = static_cast<int>(obs.size());
  std::vector<Eigen::Matrix2Xd> tables(n);
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n; ++i) tables[i] = trig_table(obs[i].location);
  const double floor = kNoiseFloorRel * p.sigma0_sq;
  Eigen::MatrixXd k(n, n);
  // Entries are independent, so any schedule produces bit-identical output.
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      const double e = entry_fast(tables[i], obs[i].tag, tables[j], obs[j].tag, p);
      k(i, j) = e;
      k(j, i) = e;
    }
  }
  for (int i = 0; i < n; ++i) k(i, i) += std::max(obs[i].noise_var, floor) + jitter;
  return k;
}

GpSolver::GpSolver(KernelParams p) : p_(std::move(p)) { check_params(p_); }

void GpSolver::set_data(const Dataset& ds) {
  obs_ = ds.observations;
  trig_.clear();
  trig_.reserve(obs_.size());
  for (const Observation& o : obs_) {
    if (o.location.size() != static_cast<Eigen::Index>(p_.multiplicities.size())) {
      throw std::invalid_argument("GpSolver: observation dimension mismatch");
    }
    trig_.push_back(trig_table(o.location));
  }
  factorize();
}

void GpSolver::factorize() {
  const int n = static_cast<int>(obs_.size());
  y_.resize(n);
  for (int i = 0; i < n; ++i) y_[i] = obs_[i].value;
  if (n == 0) {
    lmat_.resize(0, 0);
    alpha_.resize(0);
    jitter_ = 0.0;
    return;
  }
  Eigen::MatrixXd gram = build_gram_parallel(obs_, p_, 0.0);
  double jitter = 0.0;
  while (true) {
    Eigen::MatrixXd work = gram;
    if (jitter > 0.0) work.diagonal().array() += jitter;
    Eigen::LLT<Eigen::MatrixXd> llt(work);
    if (llt.info() == Eigen::Success) {
      lmat_ = llt.matrixL();
      jitter_ = jitter;
      alpha_ = lmat_.triangularView<Eigen::Lower>().solve(y_);
      lmat_.triangularView<Eigen::Lower>().transpose().solveInPlace(alpha_);
      return;
    }
    if (jitter == 0.0) {
      jitter = kJitterStartRel * p_.sigma0_sq;
    } else if (jitter < kJitterStopRel * p_.sigma0_sq) {
      jitter *= 10.0;
    } else {
      throw std::runtime_error("GpSolver: factorization failed after jitter escalation");
    }
  }
}

void GpSolver::append(const Observation& o) {
  if (o.location.size() != static_cast<Eigen::Index>(p_.multiplicities.size())) {
    throw std::invalid_argument("GpSolver: observation dimension mismatch");
  }
  const int n = static_cast<int>(obs_.size());
  obs_.push_back(o);
  trig_.push_back(trig_table(o.location));
  if (n == 0) {
    factorize();
    return;
  }
  Eigen::VectorXd row(n);
  for (int i = 0; i < n; ++i) {
    row[i] = entry_fast(trig_[i], obs_[i].tag, trig_.back(), o.tag, p_);
  }
  const double floor = kNoiseFloorRel * p_.sigma0_sq;
  const double diag =
      entry_fast(trig_.back(), o.tag, trig_.back(), o.tag, p_) + std::max(o.noise_var, floor) + jitter_;
  Eigen::VectorXd l = lmat_.triangularView<Eigen::Lower>().solve(row);
  const double rem = diag - l.squaredNorm();
  if (rem <= 0.0) {
    // Bordered extension lost positive definiteness; rebuild with escalation.
    factorize();
    return;
  }
  lmat_.conservativeResize(n + 1, n + 1);
  lmat_.row(n).head(n) = l.transpose();
  lmat_.col(n).head(n).setZero();
  lmat_(n, n) = std::sqrt(rem);
  y_.conservativeResize(n + 1);
  y_[n] = o.value;
  alpha_ = lmat_.triangularView<Eigen::Lower>().solve(y_);
  lmat_.triangularView<Eigen::Lower>().transpose().solveInPlace(alpha_);
}

GpPosterior GpSolver::predict(const std::vector<TaggedPoint>& queries) const {
  const int n = static_cast<int>(obs_.size());
  const int m = static_cast<int>(queries.size());
  std::vector<Eigen::Matrix2Xd> qt;
  qt.reserve(m);
  for (const auto& [loc, tag] : queries) {
    if (loc.size() != static_cast<Eigen::Index>(p_.multiplicities.size())) {
      throw std::invalid_argument("GpSolver: query dimension mismatch");
    }
    if (tag < 0 || tag > static_cast<int>(p_.multiplicities.size())) {
      throw std::invalid_argument("GpSolver: query tag out of range");
    }
    qt.push_back(trig_table(loc));
  }
  Eigen::MatrixXd kqq(m, m);
  for (int i = 0; i < m; ++i) {
    for (int j = i; j < m; ++j) {
      const double e = entry_fast(qt[i], queries[i].second, qt[j], queries[j].second, p_);
      kqq(i, j) = e;
      kqq(j, i) = e;
    }
  }
  GpPosterior post;
  if (n == 0) {
    post.mean = Eigen::VectorXd::Zero(m);
    post.cov = kqq;
    return post;
  }
  Eigen::MatrixXd kq(n, m);
  for (int j = 0; j < m; ++j) {
    for (int i = 0; i < n; ++i) {
      kq(i, j) = entry_fast(trig_[i], obs_[i].tag, qt[j], queries[j].second, p_);
    }
  }
  post.mean = kq.transpose() * alpha_;
  const Eigen::MatrixXd v = lmat_.triangularView<Eigen::Lower>().solve(kq);
  post.cov = kqq - v.transpose() * v;
  post.cov = 0.5 * (post.cov + post.cov.transpose()).eval();
  for (int i = 0; i < m; ++i) {
    if (post.cov(i, i) < -1e-9) {
      throw std::logic_error("GpSolver: posterior variance below tolerance, assembly is broken");
    }
    if (post.cov(i, i) < 0.0) post.cov(i, i) = 0.0;
  }
  return post;
}

Eigen::VectorXd GpSolver::predict_mean(const std::vector<TaggedPoint>& queries) const {
  const int n = static_cast<int>(obs_.size());
  const int m = static_cast<int>(queries.size());
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(m);
  for (int j = 0; j < m; ++j) {
    const auto& [loc, tag] = queries[j];
    if (loc.size() != static_cast<Eigen::Index>(p_.multiplicities.size())) {
      throw std::invalid_argument("GpSolver: query dimension mismatch");
    }
    if (tag < 0 || tag > static_cast<int>(p_.multiplicities.size())) {
      throw std::invalid_argument("GpSolver: query tag out of range");
    }
    if (n == 0) continue;
    const Eigen::Matrix2Xd qt = trig_table(loc);
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
      acc += entry_fast(trig_[i], obs_[i].tag, qt, tag, p_) * alpha_[i];
    }
    mean[j] = acc;
  }
  return mean;
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> GpSolver::gradient_at(
    const Eigen::VectorXd& x_hat) const {
  const int dim = static_cast<int>(p_.multiplicities.size());
  std::vector<TaggedPoint> queries;
  queries.reserve(dim);
  for (int d = 0; d < dim; ++d) queries.emplace_back(x_hat, d + 1);
  const GpPosterior post = predict(queries);
  return {post.mean, post.cov.diagonal()};
}

GpPosterior posterior(const Dataset& ds, const std::vector<TaggedPoint>& queries,
                      const KernelParams& p) {
  GpSolver solver(p);
  solver.set_data(ds);
  return solver.predict(queries);
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> grad_posterior(const Dataset& ds,
                                                           const Eigen::VectorXd& x_hat,
                                                           const KernelParams& p) {
  GpSolver solver(p);
  solver.set_data(ds);
  return solver.gradient_at(x_hat);
}

Dataset retain_window(Dataset ds, RetainPolicy policy, int limit,
                      const Eigen::VectorXd& current_opt, const KernelParams& p) {
  if (limit <= 0) throw std::invalid_argument("retain_window: limit must be positive");
  const int dim = static_cast<int>(p.multiplicities.size());
  if (policy == RetainPolicy::kSgdWindow) {
    int sweep = 0;
    for (int v : p.multiplicities) sweep += 2 * v;
    if (ds.total_appended > static_cast<long long>(limit) + sweep && ds.size() > limit) {
      ds.observations.erase(ds.observations.begin(), ds.observations.end() - limit);
    }
    return ds;
  }
  // kNftInducer: once the set outgrows limit-1+D, everything older than the
  // newest limit-1 points is condensed into one pseudo-observation at the
  // current optimum carrying the full-dataset posterior prediction there.
  if (ds.size() > limit - 1 + dim) {
    const GpPosterior pred = posterior(ds, {{current_opt, 0}}, p);
    ds.observations.erase(ds.observations.begin(), ds.observations.end() - (limit - 1));
    Observation pseudo;
    pseudo.location = current_opt;
    pseudo.tag = 0;
    pseudo.value = pred.mean[0];
    pseudo.noise_var = std::max(pred.cov(0, 0), kNoiseFloorRel * p.sigma0_sq);
    ds.append(std::move(pseudo));
  }
  return ds;
}

}  // namespace vqebench
