#include "vqf/circuit.hpp"

#include "vqf/errors.hpp"

#include <algorithm>
#include <cstdio>
#include <regex>
#include <sstream>

namespace vqf {

std::string to_string(GateKind k) {
  switch (k) {
    case GateKind::H:
      return "h";
    case GateKind::RX:
      return "rx";
    case GateKind::RZ:
      return "rz";
    case GateKind::CNOT:
      return "cx";
  }
  return "?";
}

namespace {

template <typename Emit>
void emit_cost_terms(const Hamiltonian& h, Emit&& emit) {
  for (const auto& term : h.terms) {
    const auto& q = term.qubits;
    for (std::size_t k = 0; k + 1 < q.size(); ++k) emit(GateKind::CNOT, q[k], q[k + 1], 0.0);
    emit(GateKind::RZ, q.back(), -1, 2.0 * term.coeff);
    for (std::size_t k = q.size() - 1; k > 0; --k) emit(GateKind::CNOT, q[k - 1], q[k], 0.0);
  }
}

template <typename G>
CircuitStats gate_stats(int n_qubits, const std::vector<G>& gates) {
  CircuitStats s;
  s.n_qubits = n_qubits;
  std::vector<int> level(static_cast<std::size_t>(n_qubits), 0);
  for (const auto& g : gates) {
    if (g.kind == GateKind::CNOT) {
      ++s.n_cnot;
      const int l = std::max(level[g.q0], level[g.q1]) + 1;
      level[g.q0] = level[g.q1] = l;
    } else {
      ++s.n_single_gates;
      ++level[g.q0];
    }
  }
  s.depth = level.empty() ? 0 : *std::max_element(level.begin(), level.end());
  s.cnot_per_qubit = n_qubits > 0 ? static_cast<double>(s.n_cnot) / n_qubits : 0.0;
  return s;
}

}  // namespace

ParamCircuit compile_qaoa(const Hamiltonian& h, int p) {
  if (p < 1) throw InvalidConfig("QAOA level p must be at least 1");
  if (h.n_qubits() < 1) throw EmptyHamiltonian("Hamiltonian has no qubits");
  ParamCircuit c;
  c.n_qubits = h.n_qubits();
  c.p = p;
  for (int q = 0; q < c.n_qubits; ++q) c.gates.push_back({GateKind::H, q, -1, {}});
  for (int layer = 0; layer < p; ++layer) {
    emit_cost_terms(h, [&](GateKind k, int a, int b, double scale) {
      AngleRef ref;
      if (k == GateKind::RZ) ref = {AngleRef::Source::Gamma, layer, scale};
      c.gates.push_back({k, a, b, ref});
    });
    for (int q = 0; q < c.n_qubits; ++q) {
      c.gates.push_back({GateKind::RX, q, -1, {AngleRef::Source::Beta, layer, 2.0}});
    }
  }
  return c;
}

BoundCircuit compile_cost_layer(const Hamiltonian& h, double gamma) {
  BoundCircuit c;
  c.n_qubits = h.n_qubits();
  emit_cost_terms(h, [&](GateKind k, int a, int b, double scale) { c.gates.push_back({k, a, b, scale * gamma}); });
  return c;
}

CircuitStats stats(const ParamCircuit& c) { return gate_stats(c.n_qubits, c.gates); }
CircuitStats stats(const BoundCircuit& c) { return gate_stats(c.n_qubits, c.gates); }

BoundCircuit bind(const ParamCircuit& c, std::span<const double> gamma, std::span<const double> beta) {
  if (gamma.size() != static_cast<std::size_t>(c.p) || beta.size() != static_cast<std::size_t>(c.p)) {
    throw DimensionMismatch("expected " + std::to_string(c.p) + " gamma and beta values, got " +
                            std::to_string(gamma.size()) + " and " + std::to_string(beta.size()));
  }
  BoundCircuit out;
  out.n_qubits = c.n_qubits;
  out.gates.reserve(c.gates.size());
  for (const auto& g : c.gates) {
    double angle = 0.0;
    switch (g.angle.source) {
      case AngleRef::Source::Fixed:
        angle = g.angle.scale;
        break;
      case AngleRef::Source::Gamma:
        angle = g.angle.scale * gamma[static_cast<std::size_t>(g.angle.layer)];
        break;
      case AngleRef::Source::Beta:
        angle = g.angle.scale * beta[static_cast<std::size_t>(g.angle.layer)];
        break;
    }
    out.gates.push_back({g.kind, g.q0, g.q1, angle});
  }
  return out;
}

std::string export_qasm(const BoundCircuit& c) {
  std::ostringstream out;
  out << "OPENQASM 2.0;\ninclude \"qelib1.inc\";\nqreg q[" << c.n_qubits << "];\n";
  char buf[64];
  for (const auto& g : c.gates) {
    switch (g.kind) {
      case GateKind::H:
        out << "h q[" << g.q0 << "];\n";
        break;
      case GateKind::RX:
      case GateKind::RZ:
        std::snprintf(buf, sizeof buf, "%.17g", g.angle);
        out << to_string(g.kind) << '(' << buf << ") q[" << g.q0 << "];\n";
        break;
      case GateKind::CNOT:
        out << "cx q[" << g.q0 << "],q[" << g.q1 << "];\n";
        break;
    }
  }
  return out.str();
}

BoundCircuit import_qasm(const std::string& text) {
  static const std::regex qreg(R"(^qreg\s+q\[(\d+)\];$)");
  static const std::regex one(R"(^(h)\s+q\[(\d+)\];$)");
  static const std::regex rot(R"(^(rx|rz)\(([^)]+)\)\s+q\[(\d+)\];$)");
  static const std::regex cx(R"(^cx\s+q\[(\d+)\]\s*,\s*q\[(\d+)\];$)");
  BoundCircuit c;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  std::smatch m;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto cm = line.find("//"); cm != std::string::npos) line.resize(cm);
    line.erase(0, line.find_first_not_of(" \t\r"));
    line.erase(line.find_last_not_of(" \t\r") + 1);
    if (line.empty() || line.starts_with("OPENQASM") || line.starts_with("include")) continue;
    try {
      if (std::regex_match(line, m, qreg)) {
        c.n_qubits = std::stoi(m[1]);
      } else if (std::regex_match(line, m, one)) {
        c.gates.push_back({GateKind::H, std::stoi(m[2]), -1, 0.0});
      } else if (std::regex_match(line, m, rot)) {
        c.gates.push_back({m[1] == "rx" ? GateKind::RX : GateKind::RZ, std::stoi(m[3]), -1, std::stod(m[2])});
      } else if (std::regex_match(line, m, cx)) {
        c.gates.push_back({GateKind::CNOT, std::stoi(m[1]), std::stoi(m[2]), 0.0});
      } else {
        throw ParseError(lineno, "unsupported QASM statement '" + line + "'");
      }
    } catch (const std::logic_error&) {
      throw ParseError(lineno, "malformed number in '" + line + "'");
    }
  }
  for (const auto& g : c.gates) {
    if (g.q0 >= c.n_qubits || g.q1 >= c.n_qubits) throw Error("QASM gate addresses a qubit outside qreg");
  }
  return c;
}

nlohmann::json to_json(const BoundCircuit& c) {
  nlohmann::json gates = nlohmann::json::array();
  for (const auto& g : c.gates) {
    nlohmann::json j = {{"gate", to_string(g.kind)}};
    if (g.kind == GateKind::CNOT) {
      j["qubits"] = {g.q0, g.q1};
    } else {
      j["qubits"] = {g.q0};
    }
    if (g.kind == GateKind::RX || g.kind == GateKind::RZ) j["angle"] = g.angle;
    gates.push_back(std::move(j));
  }
  return {{"n_qubits", c.n_qubits}, {"gates", gates}};
}

nlohmann::json to_json(const CircuitStats& s) {
  return {{"n_qubits", s.n_qubits},
          {"n_single_gates", s.n_single_gates},
          {"n_cnot", s.n_cnot},
          {"depth", s.depth},
          {"cnot_per_qubit", s.cnot_per_qubit}};
}

}  // namespace vqf
