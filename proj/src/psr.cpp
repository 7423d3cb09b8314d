#include "vqebench/psr.hpp"

#include <cmath>
#include <stdexcept>

namespace vqebench {

namespace {
constexpr double kTwoPi = 2.0 * M_PI;

double mod_two_pi(double x) {
  double r = std::fmod(x, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  return r;
}
}  // namespace

double psr_first(double y_minus, double y_plus, double alpha) {
  const double s = std::sin(alpha);
  // Multiples of pi leave sin(alpha) at most a few ulps from zero, where the
  // two shifted evaluations coincide and the quotient is pure noise.
  if (std::abs(s) < 1e-12) {
    throw std::invalid_argument("psr_first: alpha must not be a multiple of pi");
  }
  return (y_plus - y_minus) / (2.0 * s);
}

double psr_general(const std::vector<double>& y, int v) {
  if (static_cast<int>(y.size()) != 2 * v) {
    throw std::invalid_argument("psr_general: need exactly 2v observations");
  }
  double acc = 0.0;
  for (int w = 0; w < 2 * v; ++w) {
    const double s = std::sin((2 * w + 1) * M_PI / (4.0 * v));
    const double term = y[w] / (2.0 * s * s);
    acc += (w % 2 == 0) ? term : -term;
  }
  return acc / (2.0 * v);
}

DerivEstimate bpsr_closed_form(const std::vector<double>& y, int v, double sigma_sq,
                               double sigma0_sq, double gamma_sq, double alpha_prime) {
  if (static_cast<int>(y.size()) != 2 * v) {
    throw std::invalid_argument("bpsr_closed_form: need exactly 2v observations");
  }
  if (sigma_sq <= 0.0 || sigma0_sq <= 0.0 || gamma_sq <= 0.0) {
    throw std::invalid_argument("bpsr_closed_form: variances and gamma_sq must be positive");
  }
  const double r = sigma_sq / sigma0_sq;
  const double a_den = (gamma_sq + 2.0 * v) * r + 2.0 * v;
  const double b_den = (gamma_sq + 2.0 * v) * r + 4.0 * v;
  const double cos_va = std::cos(v * alpha_prime);

  double num = 0.0;
  for (int w = 0; w < 2 * v; ++w) {
    const double theta_w = (2 * w + 1) * M_PI / (2.0 * v);
    const double sign = (w % 2 == 0) ? 1.0 : -1.0;
    const double phi = 0.5 * theta_w - 0.5 * alpha_prime;
    const double sin_phi = std::sin(phi);
    double weight;
    if (std::abs(sin_phi) < 1e-8) {
      // Regular sine-sum form of the same weight; non-singular everywhere.
      double ssum = 0.0;
      for (int k = 1; k <= v; ++k) ssum += k * std::sin(k * (theta_w - alpha_prime));
      weight = 2.0 * ssum;
    } else {
      weight = sign * (cos_va / (2.0 * sin_phi * sin_phi) +
                       v * std::sin(0.5 * theta_w - (v + 0.5) * alpha_prime) / sin_phi);
    }
    num += y[w] * (weight - sign * 4.0 * v * v * cos_va / b_den);
  }

  const double cos_2va = std::cos(2.0 * v * alpha_prime);
  const double vd = static_cast<double>(v);
  DerivEstimate out;
  out.mean = num / a_den;
  out.var = sigma_sq * (vd * (vd + 1.0) * (2.0 * vd + 1.0) / (3.0 * a_den) -
                        4.0 * vd * vd * vd * cos_2va / (a_den * b_den)) -
            sigma0_sq * 8.0 * vd * vd * vd * vd * (cos_2va - 1.0) /
                ((gamma_sq + 2.0 * vd) * a_den * b_den);
  return out;
}

DerivEstimate bpsr_first_closed_form(double y1, double y2, double alpha, double sigma_sq,
                                     double sigma0_sq, double gamma_sq) {
  if (sigma_sq <= 0.0 || sigma0_sq <= 0.0 || gamma_sq <= 0.0) {
    throw std::invalid_argument("bpsr_first_closed_form: variances and gamma_sq must be positive");
  }
  if (alpha <= 0.0 || alpha >= M_PI) {
    throw std::invalid_argument("bpsr_first_closed_form: alpha must lie in (0, pi)");
  }
  const double s = std::sin(alpha);
  const double den = (0.5 * gamma_sq + 1.0) * sigma_sq / sigma0_sq + 2.0 * s * s;
  return {(y2 - y1) * s / den, sigma_sq / den};
}

std::vector<Eigen::VectorXd> equidistant_points(const Eigen::VectorXd& x_hat, int d, int v) {
  if (d < 0 || d >= x_hat.size()) throw std::invalid_argument("equidistant_points: axis out of range");
  if (v < 1) throw std::invalid_argument("equidistant_points: multiplicity must be positive");
  std::vector<Eigen::VectorXd> pts;
  pts.reserve(2 * v);
  for (int w = 0; w < 2 * v; ++w) {
    Eigen::VectorXd p = x_hat;
    p[d] = mod_two_pi(p[d] + (2 * w + 1) * M_PI / (2.0 * v));
    pts.push_back(std::move(p));
  }
  return pts;
}

}  // namespace vqebench
