#include "support/generators.hpp"
#include "support/oracles.hpp"

#include "vqf/encoder.hpp"
#include "vqf/errors.hpp"
#include "vqf/poly_io.hpp"
#include "vqf/sim.hpp"
#include "vqf/transform.hpp"

#include <doctest.h>

#include <cmath>
#include <numeric>

using namespace vqf;

namespace {

oracle::Mat dense(const DensityMatrix<double>& rho) {
  const auto dim = Eigen::Index{1} << rho.n_qubits();
  oracle::Mat m(dim, dim);
  for (Eigen::Index r = 0; r < dim; ++r) {
    for (Eigen::Index c = 0; c < dim; ++c) m(r, c) = rho(static_cast<std::uint64_t>(r), static_cast<std::uint64_t>(c));
  }
  return m;
}

// A deliberately loud model so channel effects are visible at 1e4 trajectories.
NoiseModel loud() {
  NoiseModel nm;
  nm.p1 = 0.15;
  nm.p2 = 0.3;
  nm.t1_us = 1.0;
  nm.t2_us = 1.2;
  nm.dur1_ns = 100;
  nm.dur2_ns = 300;
  return nm;
}

NoiseModel random_model(gen::Rng& rng) {
  NoiseModel nm;
  nm.p1 = gen::uniform(rng, 0, 0.3);
  nm.p2 = gen::uniform(rng, 0, 0.5);
  nm.t1_us = gen::uniform(rng, 0.5, 5);
  nm.t2_us = gen::uniform(rng, 0.2, 2 * nm.t1_us);
  nm.scale = gen::uniform(rng, 0, 1);
  nm.gate_noise_on = gen::uniform_int(rng, 0, 3) != 0;
  nm.decoherence_on = gen::uniform_int(rng, 0, 3) != 0;
  return nm;
}

Eigen::VectorXd frequencies(const SampleSet& s) {
  Eigen::VectorXd f = Eigen::VectorXd::Zero(Eigen::Index{1} << s.n_qubits);
  for (const auto& [x, n] : s.counts) f[static_cast<Eigen::Index>(x)] = static_cast<double>(n) / static_cast<double>(s.total);
  return f;
}

BoundCircuit hadamards(int n) {
  BoundCircuit c{n, {}};
  for (int q = 0; q < n; ++q) c.gates.push_back({GateKind::H, q, -1, 0});
  return c;
}

ClauseSystem reduced_143() {
  FactoringInstance inst;
  inst.n = 143;
  inst.bit_length = 4;
  return preprocess(build_clauses(inst), 2);
}

}  // namespace

TEST_CASE("noiseless simulation matches the dense oracle") {
  gen::Rng rng(61);
  for (int trial = 0; trial < 50; ++trial) {
    const auto c = gen::circuit(rng, gen::uniform_int(rng, 1, 4), gen::uniform_int(rng, 0, 25));
    const auto psi = simulate(c);
    CHECK((psi.amplitudes() - oracle::simulate(c)).cwiseAbs().maxCoeff() < 1e-9);
    CHECK(std::abs(psi.norm() - 1.0) < 1e-10);
  }
}

TEST_CASE("switched-off noise reproduces the noiseless state exactly") {
  gen::Rng rng(62);
  for (int trial = 0; trial < 20; ++trial) {
    const auto c = gen::circuit(rng, gen::uniform_int(rng, 1, 4), 20);
    const auto ideal = simulate(c).amplitudes();
    NoiseModel off;
    off.scale = 0;
    NoiseModel masked;
    masked.gate_noise_on = false;
    masked.decoherence_on = false;
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      CHECK(run_trajectory(c, off, seed).amplitudes() == ideal);
      CHECK(run_trajectory(c, masked, seed).amplitudes() == ideal);
    }
  }
}

TEST_CASE("trajectories stay normalized") {
  gen::Rng rng(63);
  for (int trial = 0; trial < 40; ++trial) {
    const auto c = gen::circuit(rng, gen::uniform_int(rng, 1, 5), 30);
    const auto nm = random_model(rng);
    for (std::uint64_t seed = 0; seed < 10; ++seed) CHECK(std::abs(run_trajectory(c, nm, seed).norm() - 1.0) < 1e-10);
  }
}

TEST_CASE("exact channel evolution matches the Kraus oracle") {
  gen::Rng rng(64);
  for (int trial = 0; trial < 40; ++trial) {
    const auto c = gen::circuit(rng, gen::uniform_int(rng, 1, 4), gen::uniform_int(rng, 1, 15));
    const auto nm = random_model(rng);
    const auto rho = dense(evolve_density(c, nm));
    const auto expect = oracle::noisy_density(c, nm);
    CHECK(oracle::trace_distance(rho, expect) < 1e-10);
    CHECK(rho.trace().real() == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("trajectory averages reproduce the channel") {
  gen::Rng rng(65);
  for (int trial = 0; trial < 6; ++trial) {
    const int n = gen::uniform_int(rng, 1, 2);
    const auto c = gen::circuit(rng, n, 8);
    const auto nm = loud();
    const auto dim = Eigen::Index{1} << n;
    oracle::Mat avg = oracle::Mat::Zero(dim, dim);
    const int trajectories = 10000;
    for (int s = 0; s < trajectories; ++s) {
      const auto psi = run_trajectory(c, nm, static_cast<std::uint64_t>(1000 * trial + s)).amplitudes();
      avg += psi * psi.adjoint();
    }
    avg /= trajectories;
    CHECK(oracle::trace_distance(avg, oracle::noisy_density(c, nm)) < 0.02);
  }
}

TEST_CASE("full depolarizing after H leaves fidelity 1/3 with |+>") {
  BoundCircuit c = hadamards(1);
  NoiseModel nm;
  nm.p1 = 1.0;
  nm.decoherence_on = false;
  const auto rho = oracle::noisy_density(c, nm);
  oracle::Vec plus(2);
  plus << 1 / std::sqrt(2.0), 1 / std::sqrt(2.0);
  // X keeps |+>, Y and Z send it to |->
  CHECK((plus.adjoint() * rho * plus)(0, 0).real() == doctest::Approx(1.0 / 3.0));
  double fid = 0;
  const int trajectories = 20000;
  for (int s = 0; s < trajectories; ++s) fid += std::norm(plus.dot(run_trajectory(c, nm, static_cast<std::uint64_t>(s)).amplitudes()));
  CHECK(fid / trajectories == doctest::Approx(1.0 / 3.0).epsilon(0.02));
  CHECK(oracle::trace_distance(dense(evolve_density(c, nm)), rho) < 1e-12);
}

TEST_CASE("uniform superposition samples") {
  const auto s = sample(hadamards(2), NoiseModel::noiseless(), 4096, 3);
  CHECK(s.total == 4096);
  for (std::uint64_t x = 0; x < 4; ++x) CHECK(std::abs(static_cast<double>(s.counts.at(x)) / 4096 - 0.25) < 0.03);
}

TEST_CASE("sample frequencies converge to the exact distribution") {
  gen::Rng rng(66);
  for (int trial = 0; trial < 4; ++trial) {
    const auto c = gen::circuit(rng, 4, 20);
    const Eigen::VectorXd exact = oracle::simulate(c).cwiseAbs2();
    CHECK(oracle::total_variation(frequencies(sample(c, NoiseModel::noiseless(), 65536, 7)), exact) < 0.02);
  }
}

TEST_CASE("both backends sample the noisy output distribution") {
  gen::Rng rng(67);
  for (int trial = 0; trial < 3; ++trial) {
    const auto c = gen::circuit(rng, 3, 15);
    const auto nm = loud();
    const Eigen::VectorXd exact = oracle::noisy_density(c, nm).diagonal().real();
    for (auto backend : {SimBackend::Trajectory, SimBackend::DensityMatrix, SimBackend::Auto}) {
      const auto s = sample(c, nm, 32768, 11, backend);
      CHECK(s.total == 32768);
      CHECK(oracle::total_variation(frequencies(s), exact) < 0.02);
    }
  }
}

TEST_CASE("sampling is deterministic in the seed") {
  gen::Rng rng(68);
  const auto c = gen::circuit(rng, 3, 20);
  for (auto backend : {SimBackend::Trajectory, SimBackend::DensityMatrix}) {
    const auto a = sample(c, loud(), 2000, 5, backend);
    const auto b = sample(c, loud(), 2000, 5, backend);
    CHECK(a.counts == b.counts);
    CHECK(sample(c, loud(), 2000, 6, backend).counts != a.counts);
  }
  CHECK(sample(c, NoiseModel::noiseless(), 500, 9).counts == sample(c, NoiseModel::noiseless(), 500, 9).counts);
}

TEST_CASE("shot noise of the estimator falls as one over root M") {
  const auto cs = reduced_143();
  const auto f = cost_function(cs);
  const auto h = to_hamiltonian(f);
  const std::vector<double> g{0.4}, b{0.9};
  const auto c = vqf::bind(compile_qaoa(h, 1), g, b);
  const auto costs = cost_table(f, h.qubit_vars);
  const double exact = simulate(c).probabilities().dot(costs);
  std::vector<double> xs, ys;
  for (int k = 8; k <= 14; ++k) {
    const long m = 1L << k;
    double sq = 0;
    const int reps = 200;
    for (int r = 0; r < reps; ++r) {
      const double e = estimate_expectation(sample(c, NoiseModel::noiseless(), m, static_cast<std::uint64_t>(100 * k + r)), costs);
      sq += (e - exact) * (e - exact);
    }
    xs.push_back(std::log(static_cast<double>(m)));
    ys.push_back(0.5 * std::log(sq / reps));
  }
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / static_cast<double>(ys.size());
  double sxy = 0, sxx = 0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    sxy += (xs[k] - mx) * (ys[k] - my);
    sxx += (xs[k] - mx) * (xs[k] - mx);
  }
  CHECK(std::abs(sxy / sxx + 0.5) < 0.1);
}

TEST_CASE("expectation and success probability") {
  const auto cs = load_clause_file(VQF_DATA_DIR "/143_reduced.txt");
  const auto f = cost_function(cs);
  const auto vars = f.variables();
  std::set<std::uint64_t> solutions;
  for (std::uint64_t x = 0; x < 16; ++x) {
    if (oracle::eval(f, oracle::assignment(vars, x)) == 0) solutions.insert(x);
  }
  REQUIRE(solutions.size() == 2);

  SampleSet on{4, {}, 0};
  on.add(*solutions.begin(), 100);
  CHECK(estimate_expectation(on, f, vars) == 0.0);
  CHECK(success_probability(on, solutions) == 1.0);

  SampleSet uniform{4, {}, 0};
  for (std::uint64_t x = 0; x < 16; ++x) uniform.add(x, 3);
  CHECK(estimate_expectation(uniform, f, vars) == doctest::Approx(13.0 / 8.0));

  SampleSet one{4, {}, 0};
  one.add(5, 1);
  CHECK(estimate_expectation(one, f, vars) == doctest::Approx(to_double(oracle::eval(f, oracle::assignment(vars, 5)))));
  CHECK(success_probability(one, solutions) == 0.0);

  const auto s = sample(hadamards(4), NoiseModel::noiseless(), 8192, 21);
  CHECK(std::abs(success_probability(s, solutions) - 0.125) < 0.02);

  CHECK_THROWS_AS(estimate_expectation(one, f, {vars[0], vars[1]}), MissingVariable);
}

TEST_CASE("sample set csv") {
  SampleSet s{3, {}, 0};
  s.add(1, 2);
  s.add(6, 5);
  s.add(4, 0);
  CHECK(s.total == 7);
  CHECK(s.to_csv() == "bitstring,count\n100,2\n011,5\n");
  CHECK(bitstring(1, 3) == "100");
}

TEST_CASE("noise model validation and json") {
  NoiseModel nm;
  CHECK_NOTHROW(nm.validate());
  auto bad = nm;
  bad.t2_us = 2 * nm.t1_us + 1;
  CHECK_THROWS_AS(bad.validate(), InvalidConfig);
  bad = nm.scaled(1.5);
  CHECK_THROWS_AS(bad.validate(), InvalidConfig);
  bad = nm;
  bad.p2 = 1.2;
  CHECK_THROWS_AS(bad.validate(), InvalidConfig);
  CHECK_THROWS_AS(sample(hadamards(1), bad, 10, 1), InvalidConfig);
  CHECK_THROWS_AS(sample(hadamards(1), nm, 0, 1), InvalidConfig);
  CHECK_THROWS_AS(sample(BoundCircuit{25, {}}, nm, 1, 1), TooManyQubits);
  gen::Rng rng(69);
  for (int k = 0; k < 20; ++k) {
    const auto m = random_model(rng);
    CHECK(noise_model_from_json(nlohmann::json::parse(to_json(m).dump())) == m);
  }
  CHECK(nm.scaled(0.5).single_gate_error() == doctest::Approx(0.001));
  CHECK(nm.damping(300) == doctest::Approx(1 - std::exp(-0.3 / 50)));
  CHECK(NoiseModel::noiseless().is_noiseless());
}
