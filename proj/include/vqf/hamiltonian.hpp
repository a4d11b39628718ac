#pragma once

#include "vqf/pboly.hpp"

#include <Eigen/Core>
#include <json.hpp>

#include <cstdint>
#include <vector>

namespace vqf {

/// coeff * Z_{q1} Z_{q2} ... Z_{qk}
struct PauliZTerm {
  double coeff = 0.0;
  std::vector<int> qubits;  // sorted, nonempty

  int weight() const noexcept { return static_cast<int>(qubits.size()); }
  friend bool operator==(const PauliZTerm&, const PauliZTerm&) = default;
};

/// Diagonal cost Hamiltonian: offset + sum of weighted Pauli-Z products.
/// Basis state x assigns bit k of x to qubit k; Z_k has eigenvalue 1 - 2 x_k.
struct Hamiltonian {
  double offset = 0.0;
  std::vector<PauliZTerm> terms;  // sorted by (weight, qubits)
  std::vector<Var> qubit_vars;    // qubit k encodes qubit_vars[k]

  int n_qubits() const noexcept { return static_cast<int>(qubit_vars.size()); }
  int locality() const;
  /// Qubit holding `v`, or -1.
  int qubit_of(const Var& v) const;

  double energy(std::uint64_t basis) const;
  /// Energies of all 2^n basis states.
  Eigen::VectorXd diagonal() const;

  friend bool operator==(const Hamiltonian&, const Hamiltonian&) = default;
};

nlohmann::json to_json(const Hamiltonian& h);
Hamiltonian hamiltonian_from_json(const nlohmann::json& j);

}  // namespace vqf
