#pragma once

// p-level QAOA circuits over {H, RX, RZ, CNOT}.
//
// Angle convention: RZ(t) = diag(e^{-it/2}, e^{it/2}), RX(t) = exp(-i t X / 2).
// A cost term c * Z_{q1}...Z_{qk} compiles to a CNOT ladder q1->q2->...->qk,
// RZ(2 gamma c) on qk, and the reversed ladder; the mixer is RX(2 beta) on
// every qubit. The Hamiltonian offset is a global phase and emits nothing.

#include "vqf/hamiltonian.hpp"

#include <json.hpp>

#include <span>
#include <string>
#include <vector>

namespace vqf {

enum class GateKind { H, RX, RZ, CNOT };

std::string to_string(GateKind k);

/// Rotation angle = scale * (gamma_layer | beta_layer | 1).
struct AngleRef {
  enum class Source { Fixed, Gamma, Beta };
  Source source = Source::Fixed;
  int layer = 0;
  double scale = 0.0;

  friend bool operator==(const AngleRef&, const AngleRef&) = default;
};

struct Gate {
  GateKind kind = GateKind::H;
  int q0 = 0;
  int q1 = -1;  // CNOT target
  AngleRef angle;

  friend bool operator==(const Gate&, const Gate&) = default;
};

struct ParamCircuit {
  int n_qubits = 0;
  int p = 0;
  std::vector<Gate> gates;
};

struct BoundGate {
  GateKind kind = GateKind::H;
  int q0 = 0;
  int q1 = -1;
  double angle = 0.0;

  friend bool operator==(const BoundGate&, const BoundGate&) = default;
};

struct BoundCircuit {
  int n_qubits = 0;
  std::vector<BoundGate> gates;

  friend bool operator==(const BoundCircuit&, const BoundCircuit&) = default;
};

struct CircuitStats {
  int n_qubits = 0;
  int n_single_gates = 0;
  int n_cnot = 0;
  int depth = 0;  // ASAP layers, gates on disjoint qubits share a layer
  double cnot_per_qubit = 0.0;

  friend bool operator==(const CircuitStats&, const CircuitStats&) = default;
};

ParamCircuit compile_qaoa(const Hamiltonian& h, int p);

/// Only the cost layer of one QAOA level at fixed gamma (no H, no mixer).
BoundCircuit compile_cost_layer(const Hamiltonian& h, double gamma);

CircuitStats stats(const ParamCircuit& c);
CircuitStats stats(const BoundCircuit& c);

BoundCircuit bind(const ParamCircuit& c, std::span<const double> gamma, std::span<const double> beta);

std::string export_qasm(const BoundCircuit& c);
/// Reads the subset of OpenQASM 2.0 that export_qasm writes.
BoundCircuit import_qasm(const std::string& text);

nlohmann::json to_json(const BoundCircuit& c);
nlohmann::json to_json(const CircuitStats& s);

}  // namespace vqf
