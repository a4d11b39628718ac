#include "support/generators.hpp"
#include "support/oracles.hpp"

#include "vqf/encoder.hpp"
#include "vqf/errors.hpp"
#include "vqf/evaluate.hpp"
#include "vqf/poly_io.hpp"

#include <doctest.h>

#include <algorithm>

using namespace vqf;

namespace {

ClauseSystem reduced(std::uint64_t n, int bits) {
  FactoringInstance inst;
  inst.n = n;
  inst.bit_length = bits;
  return preprocess(build_clauses(inst), 2);
}

SweepConfig small_sweep() {
  SweepConfig cfg;
  cfg.train_shots = 256;
  cfg.eval_shots = 1024;
  cfg.de.population_size = 8;
  cfg.de.max_generations = 4;
  cfg.seed = 5;
  return cfg;
}

double oracle_rand(const BoolPoly& f) {
  const auto m = oracle::minima(f);
  return static_cast<double>(m.argmin.size()) / static_cast<double>(std::uint64_t{1} << f.variables().size());
}

}  // namespace

TEST_CASE("rand") {
  const auto cs = load_clause_file(VQF_DATA_DIR "/143_reduced.txt");
  CHECK(compute_rand(cost_function(cs)) == 2.0 / 16.0);
  CHECK(compute_rand(BoolPoly(4)) == 1.0);
  const auto g = apply_transform(reduced(143, 4), TransformKind::Grobner);
  const auto n = g.cost.variables().size();
  CHECK(compute_rand(g.cost) == 2.0 / static_cast<double>(std::uint64_t{1} << n));
  gen::Rng rng(81);
  for (int trial = 0; trial < 50; ++trial) {
    const auto f = gen::poly(rng, gen::named_vars(gen::uniform_int(rng, 1, 7)), 6, 3);
    CHECK(compute_rand(f) == oracle_rand(f));
  }
  BoolPoly wide;
  for (int k = 0; k < 30; ++k) wide += var(Var::named("v" + std::to_string(k)));
  CHECK_THROWS_AS(compute_rand(wide), TooManyVariables);
}

TEST_CASE("nrpg") {
  CHECK(nrpg(0.4, 0.4, 0.125) == 1.0);
  CHECK(nrpg(0.125, 0.5, 0.125) == 0.0);
  CHECK(nrpg(0.2, 0.5, 0.125) == doctest::Approx(0.2));
  CHECK_THROWS_AS(nrpg(0.2, 0.125, 0.125), DegenerateBaseline);
  CHECK_THROWS_AS(nrpg(0.2, 0.1250000001, 0.125), DegenerateBaseline);
  CHECK_THROWS_AS(nrpg(0.2, 0.1, 0.125), DegenerateBaseline);
}

TEST_CASE("nrpg scales with the distance to rand") {
  gen::Rng rng(82);
  for (int trial = 0; trial < 200; ++trial) {
    const double rand = gen::uniform(rng, 0, 0.5);
    const double m0 = gen::uniform(rng, rand + 0.01, 1.0);
    const double mi = gen::uniform(rng, 0, 1);
    const double lambda = gen::uniform(rng, 0.1, 1);
    const double g = nrpg(mi, m0, rand);
    // move m_ip toward rand by lambda, keep the baseline
    CHECK(nrpg(rand + lambda * (mi - rand), m0, rand) == doctest::Approx(lambda * g));
  }
}

TEST_CASE("problems decode to factor pairs") {
  for (auto [n, bits] : std::vector<std::pair<std::uint64_t, int>>{{143, 4}, {35, 3}, {25, 3}, {291311, 10}}) {
    const auto cs = reduced(n, bits);
    for (auto kind : kAllTransforms) {
      CAPTURE(n);
      CAPTURE(to_string(kind));
      const auto pr = make_problem("x", cs, kind);
      CHECK(pr.kind == kind);
      CHECK(pr.rand == doctest::Approx(oracle_rand(pr.cost)));
      CHECK(!pr.solutions.empty());
      const auto d = pr.h.diagonal();
      for (auto x : pr.solutions) {
        CHECK(d[static_cast<Eigen::Index>(x)] == doctest::Approx(d.minCoeff()));
        const auto pq = cs.decode_factors(oracle::assignment(pr.h.qubit_vars, x));
        REQUIRE(pq);
        CHECK(pq->first * pq->second == n);
      }
    }
  }
}

TEST_CASE("selection") {
  const auto cs = reduced(143, 4);
  std::vector<Candidate> cands;
  for (auto kind : kAllTransforms) cands.emplace_back(kind, stats(compile_qaoa(make_problem("143", cs, kind).h, 1)));
  CHECK(select_circuit(cands, 16) == TransformKind::Grobner);
  const auto ranked = rank_candidates(cands, 16);
  REQUIRE(ranked.size() == 4);
  CHECK(ranked.front().first == TransformKind::Grobner);
  CHECK(ranked.back().first == TransformKind::Direct);
  CHECK(select_circuit({{TransformKind::Schaller, CircuitStats{9, 1, 99, 1, 11.0}}}, 16) == TransformKind::Schaller);
  CHECK_THROWS_AS(select_circuit(cands, 3), NoFeasibleCandidate);
  CHECK_THROWS_AS(select_circuit({}, 16), NoFeasibleCandidate);
  // GROBNER needs 6 qubits; a budget of 5 falls back to the best 4-qubit circuit
  CHECK(select_circuit(cands, 5) == TransformKind::Schaller);
}

TEST_CASE("selection does not depend on candidate order") {
  gen::Rng rng(83);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Candidate> cands;
    for (auto kind : kAllTransforms) {
      CircuitStats s;
      s.n_qubits = gen::uniform_int(rng, 2, 6);
      s.n_cnot = gen::uniform_int(rng, 0, 4) * 2;
      s.cnot_per_qubit = static_cast<double>(s.n_cnot) / s.n_qubits;
      cands.emplace_back(kind, s);
    }
    const int budget = gen::uniform_int(rng, 1, 6);
    auto pick = [&](std::vector<Candidate> cs) -> std::optional<TransformKind> {
      try {
        return select_circuit(cs, budget);
      } catch (const NoFeasibleCandidate&) {
        return std::nullopt;
      }
    };
    // oracle: lexicographic minimum over feasible candidates
    std::optional<Candidate> best;
    for (const auto& c : cands) {
      if (c.second.n_qubits > budget) continue;
      auto key = [](const Candidate& x) {
        return std::make_tuple(x.second.n_cnot, x.second.cnot_per_qubit, x.second.n_qubits, static_cast<int>(x.first));
      };
      if (!best || key(c) < key(*best)) best = c;
    }
    const auto expect = best ? std::optional<TransformKind>(best->first) : std::nullopt;
    CHECK(pick(cands) == expect);
    std::shuffle(cands.begin(), cands.end(), rng);
    CHECK(pick(cands) == expect);
  }
}

TEST_CASE("sweep rows") {
  const auto cs = load_clause_file(VQF_DATA_DIR "/143_reduced.txt");
  auto cfg = small_sweep();
  const std::vector<TransformKind> kinds{TransformKind::Schaller, TransformKind::Direct};
  const std::vector<double> levels{0.0, 0.5, 1.0};
  const auto rows = sweep("143", cs, kinds, {1, 2}, levels, cfg);
  REQUIRE(rows.size() == 2 * 2 * 3);
  std::size_t k = 0;
  for (auto kind : {TransformKind::Direct, TransformKind::Schaller}) {
    for (int p : {1, 2}) {
      const auto& base = rows[k];
      for (double i : levels) {
        const auto& r = rows[k++];
        CHECK(r.transform == kind);
        CHECK(r.p == p);
        CHECK(r.level == i);
        CHECK(r.instance == "143");
        CHECK(r.noise == "full");
        CHECK(r.rand == 0.125);
        CHECK(r.m_0p == base.m_ip);
        CHECK(r.train_seed == base.train_seed);
        CHECK(r.params.size() == static_cast<std::size_t>(2 * p));
        CHECK(r.stats.n_qubits == 4);
        if (i == 0.0) CHECK(r.nrpg == 1.0);
        else CHECK(r.nrpg == doctest::Approx((r.m_ip - r.rand) / (r.m_0p - r.rand)));
      }
    }
  }
  // a run that asks for noisy levels only still normalizes against level 0
  const auto noisy = sweep("143", cs, {TransformKind::Direct}, {1}, {0.5}, cfg);
  REQUIRE(noisy.size() == 1);
  CHECK(noisy[0].m_ip == rows[1].m_ip);
  CHECK(noisy[0].m_0p == rows[0].m_ip);
}

TEST_CASE("sweep output is deterministic and independent of threads") {
  const auto cs = load_clause_file(VQF_DATA_DIR "/143_reduced.txt");
  auto cfg = small_sweep();
  const std::vector<TransformKind> kinds(std::begin(kAllTransforms), std::end(kAllTransforms));
  const auto a = reports_to_json(sweep("143", cs, kinds, {1}, {0.0, 0.6}, cfg)).dump();
  const auto b = reports_to_json(sweep("143", cs, kinds, {1}, {0.0, 0.6}, cfg)).dump();
  cfg.threads = 3;
  const auto c = reports_to_json(sweep("143", cs, kinds, {1}, {0.0, 0.6}, cfg)).dump();
  CHECK(a == b);
  CHECK(a == c);
}

TEST_CASE("reused parameters") {
  const auto cs = load_clause_file(VQF_DATA_DIR "/143_reduced.txt");
  auto cfg = small_sweep();
  cfg.reuse_params = true;
  const auto rows = sweep("143", cs, {TransformKind::Direct}, {1}, {0.0, 0.4, 0.8}, cfg);
  REQUIRE(rows.size() == 3);
  for (const auto& r : rows) CHECK(r.params == rows[0].params);
  cfg.reuse_params = false;
  const auto fresh = sweep("143", cs, {TransformKind::Direct}, {1}, {0.0, 0.4, 0.8}, cfg);
  CHECK(fresh[0].m_ip == rows[0].m_ip);
}

TEST_CASE("masking") {
  const auto cs = load_clause_file(VQF_DATA_DIR "/143_reduced.txt");
  auto cfg = small_sweep();
  const auto m = masking_experiment("143", cs, TransformKind::Direct, {1}, {0.0, 1.0}, cfg);
  REQUIRE(m.gate_only.size() == 2);
  REQUIRE(m.decoherence_only.size() == 2);
  for (std::size_t k = 0; k < 2; ++k) {
    CHECK(m.gate_only[k].noise == "gate-only");
    CHECK(m.decoherence_only[k].noise == "decoherence-only");
    CHECK(m.gate_only[k].train_seed == m.decoherence_only[k].train_seed);
    CHECK(m.gate_only[k].eval_seed == m.decoherence_only[k].eval_seed);
    CHECK(m.gate_only[k].level == m.decoherence_only[k].level);
  }
  // level 0 is noiseless under either mask
  CHECK(m.gate_only[0].m_ip == m.decoherence_only[0].m_ip);

  // with both sources masked every level is the noiseless run
  cfg.noise.gate_noise_on = false;
  cfg.noise.decoherence_on = false;
  for (const auto& r : sweep("143", cs, {TransformKind::Direct}, {1}, {0.0, 0.5, 1.0}, cfg)) CHECK(r.nrpg == 1.0);
}

TEST_CASE("report formats") {
  NrpgReport r;
  r.instance = "143";
  r.transform = TransformKind::SimGrobner;
  r.p = 2;
  r.level = 0.5;
  r.m_ip = 0.25;
  r.m_0p = 0.5;
  r.rand = 0.125;
  r.nrpg = 1.0 / 3.0;
  r.stats = {4, 20, 22, 30, 5.5};
  r.train_seed = 42;
  auto r2 = r;
  r2.p = 1;
  const auto csv = reports_to_csv({r});
  CHECK(csv.rfind("instance,transform,p,i,m_ip,m_0p,rand,nrpg,n_qubits,n_cnot,depth,seed\n", 0) == 0);
  CHECK(csv.find("143,SIM-GROBNER,2,0.5,0.25,0.5,0.125,") != std::string::npos);
  CHECK(csv.find(",4,22,30,42\n") != std::string::npos);
  const auto tsv = reports_to_tsv({r, r2});
  CHECK(tsv.rfind("transform\tp\tnoise\ti\tnrpg\n", 0) == 0);
  CHECK(tsv.find("\n\n") != std::string::npos);  // one block per p
  const auto j = to_json(r);
  CHECK(j.at("transform") == "SIM-GROBNER");
  CHECK(j.at("i") == 0.5);
  CHECK(j.at("stats").at("n_cnot") == 22);
}
