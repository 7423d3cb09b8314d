#include "vqebench/simulator.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

namespace vqebench {

namespace {

constexpr double kTwoPi = 2.0 * M_PI;

void apply_ry(Statevector& psi, int qubit, double theta) {
  const double c = std::cos(0.5 * theta);
  const double s = std::sin(0.5 * theta);
  const Eigen::Index bit = Eigen::Index{1} << qubit;
  for (Eigen::Index n = 0; n < psi.size(); ++n) {
    if (n & bit) continue;
    const std::complex<double> a0 = psi[n];
    const std::complex<double> a1 = psi[n | bit];
    psi[n] = c * a0 - s * a1;
    psi[n | bit] = s * a0 + c * a1;
  }
}

void apply_rz(Statevector& psi, int qubit, double theta) {
  const std::complex<double> em(std::cos(0.5 * theta), -std::sin(0.5 * theta));
  const std::complex<double> ep = std::conj(em);
  const Eigen::Index bit = Eigen::Index{1} << qubit;
  for (Eigen::Index n = 0; n < psi.size(); ++n) {
    psi[n] *= (n & bit) ? ep : em;
  }
}

void apply_cx(Statevector& psi, int control, int target) {
  const Eigen::Index cbit = Eigen::Index{1} << control;
  const Eigen::Index tbit = Eigen::Index{1} << target;
  for (Eigen::Index n = 0; n < psi.size(); ++n) {
    if ((n & cbit) && !(n & tbit)) std::swap(psi[n], psi[n | tbit]);
  }
}

// Adds coeff * P |psi> for one Pauli string. P maps |n> to
// phase(n) |n ^ flip_mask> with flip_mask from X/Y factors and phase from
// Y (+-i per bit) and Z ((-1)^bit) factors.
void apply_term(const PauliTerm& t, const Statevector& psi, Statevector& out) {
  Eigen::Index flip = 0;
  Eigen::Index ymask = 0;
  Eigen::Index zmask = 0;
  for (const auto& [basis, q] : t.ops) {
    const Eigen::Index bit = Eigen::Index{1} << q;
    switch (basis) {
      case 'X': flip |= bit; break;
      case 'Y': flip |= bit; ymask |= bit; break;
      case 'Z': zmask |= bit; break;
      default: throw std::invalid_argument("unknown Pauli basis");
    }
  }
  static constexpr std::complex<double> kIPow[4] = {
      {1.0, 0.0}, {0.0, 1.0}, {-1.0, 0.0}, {0.0, -1.0}};
  const int y_count = static_cast<int>(std::popcount(static_cast<std::uint64_t>(ymask)));
  for (Eigen::Index n = 0; n < psi.size(); ++n) {
    // Y on bit b contributes i for source bit 0 and -i for source bit 1;
    // together with Z signs this is i^{y_count} * (-1)^{popcount(n & (ymask|zmask))}.
    const int neg = std::popcount(static_cast<std::uint64_t>(n & (ymask | zmask))) & 1;
    std::complex<double> phase = kIPow[y_count & 3];
    if (neg) phase = -phase;
    out[n ^ flip] += t.coeff * phase * psi[n];
  }
}

}  // namespace

PauliHamiltonian build_heisenberg(int n_qubits, const std::array<double, 3>& j,
                                  const std::array<double, 3>& h) {
  if (n_qubits < 2) throw std::invalid_argument("build_heisenberg: need at least 2 qubits");
  static constexpr char kBases[3] = {'X', 'Y', 'Z'};
  PauliHamiltonian out;
  out.n_qubits = n_qubits;
  for (int i = 0; i < 3; ++i) {
    PauliGroup g;
    if (j[i] != 0.0) {
      for (int q = 0; q + 1 < n_qubits; ++q) {
        g.terms.push_back({-j[i], {{kBases[i], q}, {kBases[i], q + 1}}});
      }
    }
    if (h[i] != 0.0) {
      for (int q = 0; q < n_qubits; ++q) {
        g.terms.push_back({-h[i], {{kBases[i], q}}});
      }
    }
    if (!g.terms.empty()) out.groups.push_back(std::move(g));
  }
  return out;
}

Circuit build_efficient_su2(int n_qubits, int n_layers) {
  if (n_qubits < 2) throw std::invalid_argument("build_efficient_su2: need at least 2 qubits");
  if (n_layers < 1) throw std::invalid_argument("build_efficient_su2: need at least 1 layer");
  Circuit c;
  c.n_qubits = n_qubits;
  c.n_params = 2 * n_qubits * (n_layers + 1);
  int p = 0;
  for (int block = 0; block <= n_layers; ++block) {
    for (int q = 0; q < n_qubits; ++q) c.gates.push_back({Gate::Kind::Ry, q, -1, p++});
    for (int q = 0; q < n_qubits; ++q) c.gates.push_back({Gate::Kind::Rz, q, -1, p++});
    if (block < n_layers) {
      for (int q = 0; q + 1 < n_qubits; ++q) c.gates.push_back({Gate::Kind::Cx, q, q + 1, -1});
    }
  }
  c.multiplicities.assign(c.n_params, 1);
  return c;
}

Statevector prepare_state(const Circuit& c, const Eigen::VectorXd& x) {
  if (x.size() != c.n_params) throw std::invalid_argument("prepare_state: parameter count mismatch");
  Statevector psi = Statevector::Zero(Eigen::Index{1} << c.n_qubits);
  psi[0] = 1.0;
  for (const Gate& g : c.gates) {
    switch (g.kind) {
      case Gate::Kind::Ry: apply_ry(psi, g.qubit, x[g.param]); break;
      case Gate::Kind::Rz: apply_rz(psi, g.qubit, x[g.param]); break;
      case Gate::Kind::Cx: apply_cx(psi, g.qubit, g.target); break;
    }
  }
  return psi;
}

void apply_group(const PauliGroup& g, const Statevector& psi, Statevector& out) {
  for (const PauliTerm& t : g.terms) apply_term(t, psi, out);
}

double exact_energy(const PauliHamiltonian& h, const Statevector& psi) {
  std::complex<double> e = 0.0;
  Statevector work(psi.size());
  for (const PauliGroup& g : h.groups) {
    work.setZero();
    apply_group(g, psi, work);
    e += psi.dot(work);
  }
  if (std::abs(e.imag()) >= 1e-10) {
    throw std::logic_error("exact_energy: non-real expectation, Hamiltonian construction is broken");
  }
  return e.real();
}

double energy_variance(const PauliHamiltonian& h, const Statevector& psi) {
  double var = 0.0;
  Statevector work(psi.size());
  for (const PauliGroup& g : h.groups) {
    work.setZero();
    apply_group(g, psi, work);
    const double eg = psi.dot(work).real();
    var += work.squaredNorm() - eg * eg;
  }
  return var;
}

ObserveResult observe(const PauliHamiltonian& h, const Circuit& c,
                      const Eigen::VectorXd& x, int n_shots, NoiseMode mode,
                      double sigma_bar_sq, RngStream& rng) {
  if (n_shots < 1) throw std::invalid_argument("observe: n_shots must be positive");
  const Statevector psi = prepare_state(c, x);
  const double f = exact_energy(h, psi);
  const double v = (mode == NoiseMode::kExactVariance) ? energy_variance(h, psi) : sigma_bar_sq;
  ObserveResult r;
  r.y = f + rng.normal() * std::sqrt(v / n_shots);
  r.noise_var = sigma_bar_sq / n_shots;
  return r;
}

GroundTruth ground_truth(const PauliHamiltonian& h) {
  if (h.n_qubits > 14) throw std::invalid_argument("ground_truth: dense diagonalization capped at 14 qubits");
  const Eigen::Index dim = Eigen::Index{1} << h.n_qubits;
  Eigen::MatrixXcd mat = Eigen::MatrixXcd::Zero(dim, dim);
  Statevector basis = Statevector::Zero(dim);
  Statevector col(dim);
  for (Eigen::Index n = 0; n < dim; ++n) {
    basis[n] = 1.0;
    col.setZero();
    for (const PauliGroup& g : h.groups) apply_group(g, basis, col);
    mat.col(n) = col;
    basis[n] = 0.0;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(mat);
  if (solver.info() != Eigen::Success) throw std::runtime_error("ground_truth: eigensolver failed");
  GroundTruth gt;
  gt.energy = solver.eigenvalues()[0];
  gt.state = solver.eigenvectors().col(0);
  return gt;
}

double fidelity(const Statevector& psi_gs, const Statevector& psi_x) {
  return std::abs(psi_gs.dot(psi_x));
}

double calibrate_sigma_bar(const PauliHamiltonian& h, const Circuit& c,
                           int n_points, RngStream& rng) {
  if (n_points < 1) throw std::invalid_argument("calibrate_sigma_bar: need at least one point");
  double acc = 0.0;
  Eigen::VectorXd x(c.n_params);
  for (int i = 0; i < n_points; ++i) {
    for (int d = 0; d < c.n_params; ++d) x[d] = rng.uniform(0.0, kTwoPi);
    acc += energy_variance(h, prepare_state(c, x));
  }
  return acc / n_points;
}

}  // namespace vqebench
