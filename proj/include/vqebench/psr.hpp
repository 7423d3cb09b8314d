#pragma once

#include <vector>

#include <Eigen/Dense>

namespace vqebench {

// First-order parameter shift rule: exact derivative of an order-1
// trigonometric energy from two observations at x +- alpha * e_d.
double psr_first(double y_minus, double y_plus, double alpha);

// General shift rule for multiplicity v from 2v observations taken at the
// equidistant offsets (2w+1) pi / (2v), w = 0..2v-1.
double psr_general(const std::vector<double>& y, int v);

struct DerivEstimate {
  double mean = 0.0;
  double var = 0.0;
};

// Non-asymptotic posterior mean and variance of the derivative at
// x_hat + alpha_prime * e_d, for a GP with the product trigonometric kernel
// conditioned on 2v homoscedastic observations at the equidistant offsets.
// Implemented as a direct formula, independent of the GP solver, so the two
// routes validate each other.
DerivEstimate bpsr_closed_form(const std::vector<double>& y, int v, double sigma_sq,
                               double sigma0_sq, double gamma_sq, double alpha_prime);

// Multiplicity-1 special case from two observations at x +- alpha * e_d
// (first observation at -alpha, second at +alpha).
DerivEstimate bpsr_first_closed_form(double y1, double y2, double alpha, double sigma_sq,
                                     double sigma0_sq, double gamma_sq);

// The 2v equidistant shift locations x_hat + (2w+1) pi/(2v) e_d, reduced
// mod 2pi componentwise. Axis d is 0-based.
std::vector<Eigen::VectorXd> equidistant_points(const Eigen::VectorXd& x_hat, int d, int v);

}  // namespace vqebench
