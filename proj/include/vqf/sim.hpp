#pragma once

// Noisy QAOA simulation by stochastic pure-state trajectories.
//
// Gate error: after a single-qubit gate a uniformly random Pauli is applied
// with probability s*p1; after a CNOT one of the 15 non-identity two-qubit
// Paulis with probability s*p2. Decoherence: after every gate each qubit it
// touches undergoes amplitude damping (gamma = s*(1 - exp(-dur/T1)), unravelled
// into jump / no-jump branches) and a Z flip with probability
// s*(1 - exp(-dur/Tphi))/2, 1/Tphi = 1/T2 - 1/(2 T1). s is the noise scale.

#include "vqf/circuit.hpp"
#include "vqf/pboly.hpp"
#include "vqf/density_matrix.hpp"
#include "vqf/state_vector.hpp"

#include <Eigen/Core>
#include <json.hpp>

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace vqf {

struct NoiseModel {
  double p1 = 0.002;
  double p2 = 0.025;
  double t1_us = 50.0;
  double t2_us = 60.0;
  double dur1_ns = 100.0;
  double dur2_ns = 300.0;
  double scale = 1.0;
  bool gate_noise_on = true;
  bool decoherence_on = true;

  static NoiseModel noiseless() {
    NoiseModel nm;
    nm.scale = 0.0;
    return nm;
  }

  NoiseModel scaled(double s) const {
    NoiseModel nm = *this;
    nm.scale = s;
    return nm;
  }

  /// Throws InvalidConfig when a scaled probability leaves [0, 1] or T2 > 2 T1.
  void validate() const;
  bool is_noiseless() const;

  double single_gate_error() const;
  double cnot_error() const;
  double damping(double dur_ns) const;
  double dephasing_flip(double dur_ns) const;

  friend bool operator==(const NoiseModel&, const NoiseModel&) = default;
};

nlohmann::json to_json(const NoiseModel& nm);
NoiseModel noise_model_from_json(const nlohmann::json& j);

struct SampleSet {
  int n_qubits = 0;
  std::map<std::uint64_t, long> counts;  // basis index -> occurrences
  long total = 0;

  void add(std::uint64_t basis, long n);
  /// "bitstring,count" rows; character k of a bitstring is qubit k.
  std::string to_csv() const;
};

std::string bitstring(std::uint64_t basis, int n_qubits);

/// Noiseless evolution of |0...0>.
StateVector<double> simulate(const BoundCircuit& c);

/// One stochastic trajectory.
StateVector<double> run_trajectory(const BoundCircuit& c, const NoiseModel& nm, std::uint64_t seed);

/// Exact output state of the channel that the trajectories unravel.
DensityMatrix<double> evolve_density(const BoundCircuit& c, const NoiseModel& nm);

enum class SimBackend { Auto, Trajectory, DensityMatrix };

/// Auto evolves the density matrix up to this many qubits, trajectories above.
inline constexpr int kDensityAutoMaxQubits = 8;

/// M shots, each the computational-basis measurement of its own trajectory.
/// Shots are i.i.d., so for small registers they are drawn from the diagonal
/// of the exact mixed state instead, which gives the same distribution.
SampleSet sample(const BoundCircuit& c, const NoiseModel& nm, long shots, std::uint64_t seed,
                 SimBackend backend = SimBackend::Auto);

/// Cost of every basis state: entry x is f evaluated with qubit k = bit k of x.
Eigen::VectorXd cost_table(const BoolPoly& f, const std::vector<Var>& qubit_vars);

/// Mean cost over the samples.
double estimate_expectation(const SampleSet& s, const BoolPoly& f, const std::vector<Var>& qubit_vars);
double estimate_expectation(const SampleSet& s, const Eigen::VectorXd& costs);

double success_probability(const SampleSet& s, const std::set<std::uint64_t>& solutions);

}  // namespace vqf
