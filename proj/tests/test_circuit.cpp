#include "support/generators.hpp"
#include "support/oracles.hpp"

#include "vqf/circuit.hpp"
#include "vqf/encoder.hpp"
#include "vqf/errors.hpp"
#include "vqf/transform.hpp"

#include <doctest.h>

#include <numbers>

using namespace vqf;

namespace {

Hamiltonian single_term(int n, std::vector<int> qubits, double c) {
  Hamiltonian h;
  h.qubit_vars = gen::named_vars(n);
  h.terms.push_back({c, std::move(qubits)});
  return h;
}

ClauseSystem reduced_143() {
  FactoringInstance inst;
  inst.n = 143;
  inst.bit_length = 4;
  return preprocess(build_clauses(inst), 2);
}

int count(const ParamCircuit& c, GateKind k) {
  return static_cast<int>(std::count_if(c.gates.begin(), c.gates.end(), [&](const Gate& g) { return g.kind == k; }));
}

}  // namespace

TEST_CASE("term ladders") {
  const auto c = compile_qaoa(single_term(4, {0, 1, 2, 3}, 1.0), 1);
  CHECK(count(c, GateKind::CNOT) == 6);
  CHECK(count(c, GateKind::RZ) == 1);
  for (int k = 1; k <= 6; ++k) {
    std::vector<int> qs(static_cast<std::size_t>(k));
    for (int j = 0; j < k; ++j) qs[static_cast<std::size_t>(j)] = j;
    CHECK(stats(compile_qaoa(single_term(6, qs, 0.3), 1)).n_cnot == 2 * (k - 1));
  }
}

TEST_CASE("single qubit term at p = 1") {
  const auto c = compile_qaoa(single_term(3, {1}, 0.5), 1);
  REQUIRE(c.gates.size() == 7);
  for (int q = 0; q < 3; ++q) CHECK(c.gates[static_cast<std::size_t>(q)] == Gate{GateKind::H, q, -1, {}});
  CHECK(c.gates[3].kind == GateKind::RZ);
  CHECK(c.gates[3].q0 == 1);
  CHECK(c.gates[3].angle == AngleRef{AngleRef::Source::Gamma, 0, 1.0});
  for (int q = 0; q < 3; ++q) {
    const auto& g = c.gates[static_cast<std::size_t>(4 + q)];
    CHECK(g.kind == GateKind::RX);
    CHECK(g.angle == AngleRef{AngleRef::Source::Beta, 0, 2.0});
  }
}

TEST_CASE("compile errors") {
  CHECK_THROWS_AS(compile_qaoa(Hamiltonian{}, 1), EmptyHamiltonian);
  CHECK_THROWS_AS(compile_qaoa(single_term(2, {0}, 1.0), 0), InvalidConfig);
  const auto c = compile_qaoa(single_term(2, {0}, 1.0), 2);
  const std::vector<double> one{0.1};
  const std::vector<double> two{0.1, 0.2};
  CHECK_THROWS_AS(vqf::bind(c, one, two), DimensionMismatch);
  CHECK_THROWS_AS(vqf::bind(c, two, one), DimensionMismatch);
}

TEST_CASE("stats examples") {
  BoundCircuit h4{4, {}};
  for (int q = 0; q < 4; ++q) h4.gates.push_back({GateKind::H, q, -1, 0});
  CHECK(stats(h4) == CircuitStats{4, 4, 0, 1, 0.0});
  BoundCircuit chain{3, {{GateKind::CNOT, 0, 1, 0}, {GateKind::CNOT, 1, 2, 0}}};
  CHECK(stats(chain).depth == 2);
  CHECK(stats(chain).cnot_per_qubit == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("cnot count formula and bind invariance") {
  gen::Rng rng(51);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = gen::uniform_int(rng, 1, 6);
    const auto h = gen::hamiltonian(rng, n, gen::uniform_int(rng, 1, 8), 4);
    const int p = gen::uniform_int(rng, 1, 3);
    const auto c = compile_qaoa(h, p);
    int ladder = 0;
    for (const auto& t : h.terms) ladder += 2 * (t.weight() - 1);
    const auto s = stats(c);
    CHECK(s.n_cnot == p * ladder);
    CHECK(s.n_qubits == n);
    std::vector<double> g(static_cast<std::size_t>(p)), b(static_cast<std::size_t>(p));
    for (auto& x : g) x = gen::uniform(rng, 0, 6.28);
    for (auto& x : b) x = gen::uniform(rng, 0, 6.28);
    const auto bound = vqf::bind(c, g, b);
    CHECK(stats(bound) == s);
    CHECK(vqf::bind(c, g, b) == bound);
  }
}

TEST_CASE("bind resolves angles") {
  const auto c = compile_qaoa(single_term(1, {0}, 0.25), 1);
  const std::vector<double> g{std::numbers::pi}, b{0.0};
  const auto bound = vqf::bind(c, g, b);
  CHECK(bound.gates[1].kind == GateKind::RZ);
  CHECK(bound.gates[1].angle == doctest::Approx(std::numbers::pi / 2));
  const std::vector<double> zero{0.0};
  for (const auto& gate : vqf::bind(c, zero, zero).gates) {
    if (gate.kind == GateKind::RX || gate.kind == GateKind::RZ) CHECK(gate.angle == 0.0);
  }
}

TEST_CASE("cost layer is the diagonal evolution up to a global phase") {
  gen::Rng rng(52);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = gen::uniform_int(rng, 1, 4);
    const auto h = gen::hamiltonian(rng, n, gen::uniform_int(rng, 1, 6), 4);
    const double gamma = gen::uniform(rng, -3, 3);
    const auto u = oracle::unitary(compile_cost_layer(h, gamma));
    for (Eigen::Index z = 0; z < (Eigen::Index{1} << n); ++z) {
      oracle::Vec e = oracle::Vec::Zero(Eigen::Index{1} << n);
      e[z] = 1;
      Eigen::VectorXd energies = h.diagonal().array() - h.offset;
      const auto expect = oracle::diagonal_evolution(energies, gamma, e);
      CHECK(oracle::phase_distance(u * e, expect) < 1e-9);
    }
    // the phase is the same for every basis state, so it is global
    Eigen::VectorXd energies = h.diagonal().array() - h.offset;
    oracle::Vec plus = oracle::Vec::Constant(Eigen::Index{1} << n, 1.0 / std::sqrt(double(1 << n)));
    CHECK(oracle::phase_distance(u * plus, oracle::diagonal_evolution(energies, gamma, plus)) < 1e-9);
  }
}

TEST_CASE("qaoa state matches the dense oracle") {
  gen::Rng rng(53);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = gen::uniform_int(rng, 1, 4);
    const int p = gen::uniform_int(rng, 1, 3);
    const auto h = gen::hamiltonian(rng, n, 4, 4);
    std::vector<double> g(static_cast<std::size_t>(p)), b(static_cast<std::size_t>(p));
    for (auto& x : g) x = gen::uniform(rng, 0, 6.28);
    for (auto& x : b) x = gen::uniform(rng, 0, 6.28);
    // QAOA by definition: |+>, then exp(-i b X) exp(-i g H) per layer
    const Eigen::VectorXd energies = h.diagonal();
    oracle::Vec psi = oracle::Vec::Constant(Eigen::Index{1} << n, 1.0 / std::sqrt(double(1 << n)));
    for (int l = 0; l < p; ++l) {
      psi = oracle::diagonal_evolution(energies, g[static_cast<std::size_t>(l)], psi);
      for (int q = 0; q < n; ++q) psi = oracle::single(oracle::rx(2 * b[static_cast<std::size_t>(l)]), q, n) * psi;
    }
    const auto bound = vqf::bind(compile_qaoa(h, p), g, b);
    CHECK(oracle::phase_distance(oracle::simulate(bound), psi) < 1e-9);
  }
}

TEST_CASE("143 circuits: DIRECT has more CNOTs, GROBNER more qubits") {
  const auto cs = reduced_143();
  const auto direct = stats(compile_qaoa(to_hamiltonian(apply_transform(cs, TransformKind::Direct).cost), 1));
  const auto grobner = stats(compile_qaoa(to_hamiltonian(apply_transform(cs, TransformKind::Grobner).cost), 1));
  CHECK(direct.n_cnot > grobner.n_cnot);
  CHECK(grobner.n_qubits > direct.n_qubits);
  CHECK(direct.n_cnot == 34);
  CHECK(grobner.n_cnot == 18);
}

TEST_CASE("qasm") {
  BoundCircuit h1{1, {{GateKind::H, 0, -1, 0}}};
  const auto text = export_qasm(h1);
  CHECK(text.rfind("OPENQASM 2.0;", 0) == 0);
  CHECK(text.find("include \"qelib1.inc\";") != std::string::npos);
  CHECK(text.find("h q[0];") != std::string::npos);
  BoundCircuit cx{2, {{GateKind::CNOT, 0, 1, 0}}};
  CHECK(export_qasm(cx).find("cx q[0],q[1];") != std::string::npos);
  CHECK_THROWS_AS(import_qasm("OPENQASM 2.0;\nqreg q[1];\nu3(0,0,0) q[0];\n"), ParseError);
}

TEST_CASE("qasm round trip") {
  gen::Rng rng(54);
  for (int trial = 0; trial < 50; ++trial) {
    const auto c = gen::circuit(rng, gen::uniform_int(rng, 1, 5), gen::uniform_int(rng, 0, 30));
    const auto text = export_qasm(c);
    const auto back = import_qasm(text);
    CHECK(stats(back) == stats(c));
    CHECK(back.n_qubits == c.n_qubits);
    REQUIRE(back.gates.size() == c.gates.size());
    for (std::size_t k = 0; k < c.gates.size(); ++k) {
      CHECK(back.gates[k].kind == c.gates[k].kind);
      CHECK(back.gates[k].angle == doctest::Approx(c.gates[k].angle).epsilon(1e-15));
    }
    CHECK(export_qasm(back) == text);
  }
}

TEST_CASE("compilation is deterministic") {
  const auto h = to_hamiltonian(cost_function(reduced_143()));
  const auto again = hamiltonian_from_json(nlohmann::json::parse(to_json(h).dump()));
  const std::vector<double> g{0.3, 1.1}, b{0.7, 2.0};
  CHECK(export_qasm(vqf::bind(compile_qaoa(h, 2), g, b)) == export_qasm(vqf::bind(compile_qaoa(again, 2), g, b)));
}
