#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "vqebench/psr.hpp"
#include "vqebench/simulator.hpp"

using namespace vqebench;
using Catch::Approx;

namespace {

Eigen::VectorXd ramp(int n, double step) {
  Eigen::VectorXd x(n);
  for (int i = 0; i < n; ++i) x[i] = step * (i + 1);
  return x;
}

// Synthetic order-v trigonometric polynomial and its exact derivative at 0.
double trig_poly(double theta, const std::vector<double>& a, const std::vector<double>& b) {
  double f = a[0];
  for (size_t k = 1; k < a.size(); ++k) {
    f += a[k] * std::cos(k * theta) + b[k] * std::sin(k * theta);
  }
  return f;
}

double trig_poly_deriv0(const std::vector<double>& b) {
  double g = 0.0;
  for (size_t k = 1; k < b.size(); ++k) g += k * b[k];
  return g;
}

}  // namespace

TEST_CASE("first-order shift rule on explicit numbers", "[psr]") {
  REQUIRE(psr_first(0.0, 1.0, M_PI / 2) == Approx(0.5).margin(1e-15));
  REQUIRE(psr_first(0.25, 0.25, 1.0) == Approx(0.0).margin(1e-15));
  REQUIRE(psr_first(0.0, 1.0, M_PI / 4) == Approx(1.0 / std::sqrt(2.0)).margin(1e-15));
  // A shift of pi (or 0) has no derivative information.
  REQUIRE_THROWS_AS(psr_first(0.0, 1.0, 0.0), std::invalid_argument);
  REQUIRE_THROWS_AS(psr_first(0.0, 1.0, M_PI), std::invalid_argument);
}

TEST_CASE("general shift rule: v=1 reduction and exactness on trig polynomials", "[psr]") {
  REQUIRE(psr_general({1.0, 0.0}, 1) ==
          Approx(psr_first(0.0, 1.0, M_PI / 2)).margin(1e-15));
  REQUIRE_THROWS_AS(psr_general({1.0, 0.0, 0.5}, 1), std::invalid_argument);

  SECTION("order 2") {
    const std::vector<double> a{0.3, -0.7, 0.4};
    const std::vector<double> b{0.0, 1.1, -0.25};
    std::vector<double> y;
    for (int w = 0; w < 4; ++w) y.push_back(trig_poly((2 * w + 1) * M_PI / 4.0, a, b));
    REQUIRE(psr_general(y, 2) == Approx(trig_poly_deriv0(b)).margin(1e-13));
  }
  SECTION("order 3") {
    const std::vector<double> a{-0.2, 0.9, -0.35, 0.15};
    const std::vector<double> b{0.0, -0.6, 0.45, 0.3};
    std::vector<double> y;
    for (int w = 0; w < 6; ++w) y.push_back(trig_poly((2 * w + 1) * M_PI / 6.0, a, b));
    REQUIRE(psr_general(y, 3) == Approx(trig_poly_deriv0(b)).margin(1e-13));
  }
}

TEST_CASE("shift rule reproduces the exact circuit derivative", "[psr]") {
  const PauliHamiltonian h = build_heisenberg(3, {-1.0, 0.0, 0.0}, {0.0, 0.0, -1.0});
  const Circuit c = build_efficient_su2(3, 1);
  const Eigen::VectorXd x = ramp(12, 0.1);
  const auto energy_at = [&](const Eigen::VectorXd& p) {
    return exact_energy(h, prepare_state(c, p));
  };

  // Frozen central-difference oracle values (step 1e-6) for two axes.
  const struct {
    int axis;
    double expected;
  } cases[] = {{0, -0.52625558677465989}, {7, -0.55977208801571976}};
  for (const auto& tc : cases) {
    const auto pts = equidistant_points(x, tc.axis, 1);
    const double plus = energy_at(pts[0]);   // offset +pi/2
    const double minus = energy_at(pts[1]);  // offset +3pi/2 == -pi/2
    const double g = psr_first(minus, plus, M_PI / 2);
    REQUIRE(g == Approx(tc.expected).margin(2e-7));
    REQUIRE(psr_general({plus, minus}, 1) == Approx(g).margin(1e-12));
  }

  // Independent higher-order finite difference on a third axis.
  const int axis = 3;
  const double fd_h = 1e-3;
  const auto at_offset = [&](double off) {
    Eigen::VectorXd p = x;
    p[axis] += off;
    return energy_at(p);
  };
  const double fd = (8.0 * (at_offset(fd_h) - at_offset(-fd_h)) -
                     (at_offset(2 * fd_h) - at_offset(-2 * fd_h))) /
                    (12.0 * fd_h);
  const auto pts = equidistant_points(x, axis, 1);
  REQUIRE(psr_first(energy_at(pts[1]), energy_at(pts[0]), M_PI / 2) ==
          Approx(fd).margin(1e-9));
}

TEST_CASE("posterior derivative closed form: frozen oracle anchors", "[psr]") {
  // Conditioned on 4 equidistant observations, multiplicity 2,
  // sigma_sq=1, sigma0_sq=100, gamma_sq=9; values frozen from an
  // independent finite-difference GP implementation.
  const std::vector<double> y{0.3, -0.2, 0.8, 0.1};
  const DerivEstimate at0 = bpsr_closed_form(y, 2, 1.0, 100.0, 9.0, 0.0);
  REQUIRE(at0.mean == Approx(0.31646623096013604).margin(1e-10));
  REQUIRE(at0.var == Approx(1.4682713413090482).margin(1e-10));

  const DerivEstimate off = bpsr_closed_form(y, 2, 1.0, 100.0, 9.0, 0.37);
  REQUIRE(off.mean == Approx(0.20535995206443267).margin(1e-10));
  REQUIRE(off.var == Approx(29.000211938472575).margin(1e-8));

  REQUIRE_THROWS_AS(bpsr_closed_form({1.0, 2.0}, 2, 1.0, 1.0, 1.0, 0.0),
                    std::invalid_argument);
  REQUIRE_THROWS_AS(bpsr_closed_form(y, 2, -1.0, 1.0, 1.0, 0.0), std::invalid_argument);
}

TEST_CASE("two-point closed form: explicit numbers and consistency", "[psr]") {
  // den = (gamma_sq/2 + 1) sigma_sq/sigma0_sq + 2 sin^2 alpha = 1 + 2 = 3.
  const DerivEstimate e = bpsr_first_closed_form(0.0, 1.0, M_PI / 2, 2.0, 4.0, 2.0);
  REQUIRE(e.mean == Approx(1.0 / 3.0).margin(1e-15));
  REQUIRE(e.var == Approx(2.0 / 3.0).margin(1e-15));

  // Vanishing-noise limit recovers the deterministic shift rule value +1/2.
  const DerivEstimate nl = bpsr_first_closed_form(0.0, 1.0, M_PI / 2, 1e-16, 100.0, 9.0);
  REQUIRE(nl.mean == Approx(0.5).margin(1e-10));

  // v=1 instance of the general closed form at alpha' = 0: observation 0 sits
  // at +pi/2 and observation 1 at -pi/2.
  const double y_plus = 0.7, y_minus = -0.4;
  const DerivEstimate gen = bpsr_closed_form({y_plus, y_minus}, 1, 0.3, 50.0, 4.0, 0.0);
  const DerivEstimate two = bpsr_first_closed_form(y_minus, y_plus, M_PI / 2, 0.3, 50.0, 4.0);
  REQUIRE(gen.mean == Approx(two.mean).margin(1e-12));
  REQUIRE(gen.var == Approx(two.var).margin(1e-12));

  REQUIRE_THROWS_AS(bpsr_first_closed_form(0.0, 1.0, 0.0, 1.0, 1.0, 1.0),
                    std::invalid_argument);
  REQUIRE_THROWS_AS(bpsr_first_closed_form(0.0, 1.0, M_PI, 1.0, 1.0, 1.0),
                    std::invalid_argument);
}

TEST_CASE("posterior mean shrinks the deterministic estimate", "[psr]") {
  // The Bayes factor 2 sin^2(alpha) / den is in (0, 1), so the posterior mean
  // always sits between 0 and the shift-rule value.
  for (const double alpha : {0.3, 1.0, M_PI / 2, 2.5}) {
    for (const double sigma_sq : {1e-3, 0.1, 1.0, 10.0}) {
      const double y1 = -0.8, y2 = 0.5;
      const double det = psr_first(y1, y2, alpha);
      const double bayes = bpsr_first_closed_form(y1, y2, alpha, sigma_sq, 100.0, 9.0).mean;
      REQUIRE(std::abs(bayes) < std::abs(det) + 1e-15);
      REQUIRE(bayes * det >= 0.0);
    }
  }
}

TEST_CASE("posterior variance: pi/2 optimum and pi/v periodicity", "[psr]") {
  SECTION("the two-point variance is minimized by alpha = pi/2") {
    const double best = bpsr_first_closed_form(0.0, 1.0, M_PI / 2, 0.5, 100.0, 9.0).var;
    for (int i = 1; i <= 60; ++i) {
      const double alpha = i * M_PI / 61.0;
      REQUIRE(best <= bpsr_first_closed_form(0.0, 1.0, alpha, 0.5, 100.0, 9.0).var + 1e-15);
    }
  }
  SECTION("variance is pi/v periodic in the query offset") {
    const std::vector<double> y{0.3, -0.2, 0.8, 0.1};
    for (const double ap : {0.0, 0.13, 0.71, 2.9}) {
      const double v1 = bpsr_closed_form(y, 2, 1.0, 100.0, 9.0, ap).var;
      const double v2 = bpsr_closed_form(y, 2, 1.0, 100.0, 9.0, ap + M_PI / 2).var;
      REQUIRE(v1 == Approx(v2).margin(1e-9));
    }
  }
  SECTION("vanishing noise recovers the deterministic rule at alpha' = 0") {
    const std::vector<double> y{0.42, -0.17, 0.08, 0.91};
    const DerivEstimate nl = bpsr_closed_form(y, 2, 1e-14, 100.0, 9.0, 0.0);
    REQUIRE(nl.mean == Approx(psr_general(y, 2)).margin(1e-8));
    REQUIRE(nl.var < 1e-12);
  }
}

TEST_CASE("equidistant shift locations", "[psr]") {
  Eigen::VectorXd x(3);
  x << 0.0, 6.0, 1.0;

  const auto pts1 = equidistant_points(x, 1, 1);
  REQUIRE(pts1.size() == 2);
  REQUIRE(pts1[0][1] == Approx(std::fmod(6.0 + M_PI / 2, 2 * M_PI)).margin(1e-15));
  REQUIRE(pts1[1][1] == Approx(6.0 + 3 * M_PI / 2 - 2 * M_PI).margin(1e-12));
  REQUIRE(pts1[0][0] == 0.0);
  REQUIRE(pts1[0][2] == 1.0);

  const auto pts3 = equidistant_points(x, 0, 3);
  REQUIRE(pts3.size() == 6);
  for (int w = 0; w < 6; ++w) {
    REQUIRE(pts3[w][0] == Approx(std::fmod((2 * w + 1) * M_PI / 6.0, 2 * M_PI)).margin(1e-15));
  }
  REQUIRE_THROWS_AS(equidistant_points(x, 3, 1), std::invalid_argument);
  REQUIRE_THROWS_AS(equidistant_points(x, 0, 0), std::invalid_argument);
}
