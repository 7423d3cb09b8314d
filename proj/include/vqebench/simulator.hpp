#pragma once

#include <array>
#include <complex>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "vqebench/rng.hpp"

namespace vqebench {

using Statevector = Eigen::VectorXcd;

// One Pauli string with a real coefficient, e.g. +0.5 * X_0 X_1.
// Qubits within a term are distinct; basis is 'X', 'Y' or 'Z'.
struct PauliTerm {
  double coeff = 0.0;
  std::vector<std::pair<char, int>> ops;  // (basis, qubit)
};

// Terms sharing one measurement basis. All terms in a group commute and are
// measured simultaneously, so shot costs are counted once per group.
struct PauliGroup {
  std::vector<PauliTerm> terms;
};

struct PauliHamiltonian {
  int n_qubits = 0;
  std::vector<PauliGroup> groups;
};

// Parameterized gate sequence. Rotation gates apply exp(-i * x[param] * P / 2)
// for P in {Y, Z}; Cx is a fixed CNOT entangler.
struct Gate {
  enum class Kind { Ry, Rz, Cx };
  Kind kind = Kind::Ry;
  int qubit = 0;    // rotation target, or CNOT control
  int target = -1;  // CNOT target
  int param = -1;   // index into the parameter vector for rotations
};

struct Circuit {
  int n_qubits = 0;
  int n_params = 0;
  std::vector<Gate> gates;
  // Per-parameter count of rotation gates driven by that parameter. It sets
  // the Fourier order of 1D energy slices and the shift-rule multiplicity.
  std::vector<int> multiplicities;
};

// Open-boundary chain
//   H = -sum_{i in {X,Y,Z}} [ sum_{j<Q-1} J_i s_j^i s_{j+1}^i + sum_j h_i s_j^i ]
// with terms grouped by Pauli basis; all-zero groups are omitted.
PauliHamiltonian build_heisenberg(int n_qubits, const std::array<double, 3>& j,
                                  const std::array<double, 3>& h);

// Layered hardware-efficient ansatz: L+1 rotation blocks, each applying an RY
// layer then an RZ layer with fresh parameters to every qubit, with a linear
// CNOT chain (control j, target j+1) between consecutive blocks.
// D = 2*Q*(L+1) parameters, every multiplicity 1.
Circuit build_efficient_su2(int n_qubits, int n_layers);

Statevector prepare_state(const Circuit& c, const Eigen::VectorXd& x);

// Accumulates H_g |psi> for one group into out (which must be zero-initialized
// by the caller or holds a partial sum).
void apply_group(const PauliGroup& g, const Statevector& psi, Statevector& out);

double exact_energy(const PauliHamiltonian& h, const Statevector& psi);

// Single-shot variance of the grouped estimator: sum over groups g of
// Var_psi(H_g). Dividing by the shot count gives the observation variance.
double energy_variance(const PauliHamiltonian& h, const Statevector& psi);

enum class NoiseMode { kExactVariance, kCalibrated };

struct ObserveResult {
  double y = 0.0;          // noisy energy estimate
  double noise_var = 0.0;  // reported variance: sigma_bar_sq / n_shots
};

// y = <psi_x|H|psi_x> + eps, eps ~ N(0, v / n_shots) where v is the exact
// state-dependent variance (kExactVariance) or sigma_bar_sq (kCalibrated).
// The reported variance is always sigma_bar_sq / n_shots: what the algorithm
// believes, independent of the simulation mode.
ObserveResult observe(const PauliHamiltonian& h, const Circuit& c,
                      const Eigen::VectorXd& x, int n_shots, NoiseMode mode,
                      double sigma_bar_sq, RngStream& rng);

struct GroundTruth {
  double energy = 0.0;
  Statevector state;
};

// Dense Hermitian diagonalization; rejects n_qubits > 14.
GroundTruth ground_truth(const PauliHamiltonian& h);

// |<psi_gs|psi_x>|; the modulus discards the unphysical global phase.
double fidelity(const Statevector& psi_gs, const Statevector& psi_x);

// Mean of energy_variance over n_points parameter vectors drawn uniformly
// from [0, 2pi)^D. Computed exactly from the state: consumes no shots.
double calibrate_sigma_bar(const PauliHamiltonian& h, const Circuit& c,
                           int n_points, RngStream& rng);

}  // namespace vqebench
