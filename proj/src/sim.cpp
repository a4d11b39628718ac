#include "vqf/sim.hpp"

#include "vqf/errors.hpp"
#include "vqf/random.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <random>
#include <sstream>

namespace vqf {

// ---------------------------------------------------------------------------
// NoiseModel

void NoiseModel::validate() const {
  auto require = [](bool ok, const std::string& what) {
    if (!ok) throw InvalidConfig("noise model: " + what);
  };
  require(scale >= 0.0 && scale <= 1.0, "scale must lie in [0, 1]");
  require(p1 >= 0.0 && p1 <= 1.0 && p2 >= 0.0 && p2 <= 1.0, "gate error probabilities must lie in [0, 1]");
  require(dur1_ns >= 0.0 && dur2_ns >= 0.0, "gate durations must be nonnegative");
  require(t1_us > 0.0 && t2_us > 0.0, "T1 and T2 must be positive");
  require(t2_us <= 2.0 * t1_us, "T2 must not exceed 2 T1");
}

bool NoiseModel::is_noiseless() const {
  return scale == 0.0 || (!gate_noise_on && !decoherence_on);
}

double NoiseModel::single_gate_error() const { return gate_noise_on ? scale * p1 : 0.0; }
double NoiseModel::cnot_error() const { return gate_noise_on ? scale * p2 : 0.0; }

double NoiseModel::damping(double dur_ns) const {
  if (!decoherence_on) return 0.0;
  return scale * (1.0 - std::exp(-(dur_ns / 1000.0) / t1_us));
}

double NoiseModel::dephasing_flip(double dur_ns) const {
  if (!decoherence_on) return 0.0;
  const double rate = 1.0 / t2_us - 1.0 / (2.0 * t1_us);
  if (rate <= 0.0) return 0.0;
  return scale * 0.5 * (1.0 - std::exp(-(dur_ns / 1000.0) * rate));
}

nlohmann::json to_json(const NoiseModel& nm) {
  return {{"p1", nm.p1},           {"p2", nm.p2},         {"t1_us", nm.t1_us},
          {"t2_us", nm.t2_us},     {"dur1_ns", nm.dur1_ns}, {"dur2_ns", nm.dur2_ns},
          {"scale", nm.scale},     {"gate_noise_on", nm.gate_noise_on},
          {"decoherence_on", nm.decoherence_on}};
}

NoiseModel noise_model_from_json(const nlohmann::json& j) {
  NoiseModel nm;
  try {
    nm.p1 = j.value("p1", nm.p1);
    nm.p2 = j.value("p2", nm.p2);
    nm.t1_us = j.value("t1_us", nm.t1_us);
    nm.t2_us = j.value("t2_us", nm.t2_us);
    nm.dur1_ns = j.value("dur1_ns", nm.dur1_ns);
    nm.dur2_ns = j.value("dur2_ns", nm.dur2_ns);
    nm.scale = j.value("scale", nm.scale);
    nm.gate_noise_on = j.value("gate_noise_on", nm.gate_noise_on);
    nm.decoherence_on = j.value("decoherence_on", nm.decoherence_on);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidConfig(std::string("malformed noise model: ") + e.what());
  }
  nm.validate();
  return nm;
}

// ---------------------------------------------------------------------------
// SampleSet

void SampleSet::add(std::uint64_t basis, long n) {
  if (n <= 0) return;
  counts[basis] += n;
  total += n;
}

std::string bitstring(std::uint64_t basis, int n_qubits) {
  std::string s(static_cast<std::size_t>(n_qubits), '0');
  for (int k = 0; k < n_qubits; ++k) {
    if ((basis >> k) & 1U) s[static_cast<std::size_t>(k)] = '1';
  }
  return s;
}

std::string SampleSet::to_csv() const {
  std::ostringstream out;
  out << "bitstring,count\n";
  for (const auto& [basis, n] : counts) out << bitstring(basis, n_qubits) << ',' << n << '\n';
  return out.str();
}

// ---------------------------------------------------------------------------
// Trajectories

namespace {

using State = StateVector<double>;

struct Op {
  enum class Kind { Gate, Pauli1, Pauli2, Damp, Dephase };
  Kind kind;
  BoundGate gate;
  int qubit = 0;
  double prob = 0.0;
};

std::vector<Op> schedule(const BoundCircuit& c, const NoiseModel& nm) {
  nm.validate();
  std::vector<Op> ops;
  const double e1 = nm.single_gate_error();
  const double e2 = nm.cnot_error();
  for (const auto& g : c.gates) {
    ops.push_back({Op::Kind::Gate, g});
    const bool two = g.kind == GateKind::CNOT;
    if (two && e2 > 0.0) ops.push_back({Op::Kind::Pauli2, g, 0, e2});
    if (!two && e1 > 0.0) ops.push_back({Op::Kind::Pauli1, g, g.q0, e1});
    const double dur = two ? nm.dur2_ns : nm.dur1_ns;
    const double gamma = nm.damping(dur);
    const double flip = nm.dephasing_flip(dur);
    for (int q : {g.q0, g.q1}) {
      if (q < 0) continue;
      if (gamma > 0.0) ops.push_back({Op::Kind::Damp, g, q, gamma});
      if (flip > 0.0) ops.push_back({Op::Kind::Dephase, g, q, flip});
    }
  }
  return ops;
}

// Probability that a stochastic op does something other than its no-event branch.
double event_probability(const Op& op, const State& psi) {
  return op.kind == Op::Kind::Damp ? op.prob * psi.excited_population(op.qubit) : op.prob;
}

// The event branch of op; `v` is uniform in [0, 1) and picks among equally likely Paulis.
void apply_event(const Op& op, State& psi, double v) {
  switch (op.kind) {
    case Op::Kind::Gate:
      break;
    case Op::Kind::Pauli1:
      psi.apply_pauli(op.qubit, static_cast<Pauli>(1 + std::min(2, static_cast<int>(v * 3))));
      break;
    case Op::Kind::Pauli2: {
      const int k = 1 + std::min(14, static_cast<int>(v * 15));
      psi.apply_pauli(op.gate.q0, static_cast<Pauli>(k % 4));
      psi.apply_pauli(op.gate.q1, static_cast<Pauli>(k / 4));
      break;
    }
    case Op::Kind::Damp:
      psi.lower(op.qubit);
      psi.normalize();
      break;
    case Op::Kind::Dephase:
      psi.apply_pauli(op.qubit, Pauli::Z);
      break;
  }
}

void apply_no_event(const Op& op, State& psi) {
  if (op.kind == Op::Kind::Gate) {
    psi.apply(op.gate);
  } else if (op.kind == Op::Kind::Damp) {
    psi.damp(op.qubit, op.prob);
    psi.normalize();
  }
}

// Continues a trajectory from ops[from] drawing from the shot's own stream.
void run_from(const std::vector<Op>& ops, std::size_t from, State& psi, SplitMix64& rng) {
  for (std::size_t k = from; k < ops.size(); ++k) {
    const Op& op = ops[k];
    if (op.kind == Op::Kind::Gate) {
      psi.apply(op.gate);
      continue;
    }
    const double e = event_probability(op, psi);
    const double u = rng.uniform();
    if (u < e) {
      apply_event(op, psi, u / e);
    } else {
      apply_no_event(op, psi);
    }
  }
}

std::vector<double> cumulative(const State& psi) {
  const auto probs = psi.probabilities();
  std::vector<double> cum(static_cast<std::size_t>(probs.size()));
  std::partial_sum(probs.begin(), probs.end(), cum.begin());
  return cum;
}

std::uint64_t draw(const std::vector<double>& cum, double u) {
  auto it = std::upper_bound(cum.begin(), cum.end(), u * cum.back());
  if (it == cum.end()) --it;
  return static_cast<std::uint64_t>(it - cum.begin());
}

// M i.i.d. draws from a fixed distribution via sequential binomials.
void sample_distribution(const Eigen::VectorXd& probs, long shots, std::uint64_t seed, SampleSet& out) {
  std::mt19937_64 rng(splitmix64(seed));
  double rest = 1.0;
  for (Eigen::Index x = 0; x < probs.size() && shots > 0; ++x) {
    const double px = std::max(0.0, probs[x]);
    long hits = shots;
    if (x + 1 < probs.size()) {
      const double q = rest > 0.0 ? std::clamp(px / rest, 0.0, 1.0) : 1.0;
      hits = q >= 1.0 ? shots : (q <= 0.0 ? 0 : std::binomial_distribution<long>(shots, q)(rng));
    }
    out.add(static_cast<std::uint64_t>(x), hits);
    shots -= hits;
    rest -= px;
  }
}

// Fresh trajectory per shot, shot j on substream derive_seed(seed, {j}).
// Until its first event a shot follows the common no-event path, so the first
// event index is found from one uniform against the path's survival curve.
SampleSet sample_trajectories(const std::vector<Op>& ops, int n_qubits, long shots, std::uint64_t seed) {
  SampleSet out;
  out.n_qubits = n_qubits;

  std::vector<std::size_t> stochastic;
  std::vector<double> survival{1.0};  // survival[m]: no event among the first m stochastic ops
  {
    State psi(n_qubits);
    for (std::size_t k = 0; k < ops.size(); ++k) {
      if (ops[k].kind != Op::Kind::Gate) {
        stochastic.push_back(k);
        survival.push_back(survival.back() * (1.0 - event_probability(ops[k], psi)));
      }
      apply_no_event(ops[k], psi);
    }
  }

  struct Shot {
    std::size_t event;  // index into `stochastic`; stochastic.size() means none
    long id;
    SplitMix64 rng;
  };
  std::vector<Shot> pending;
  pending.reserve(static_cast<std::size_t>(shots));
  for (long j = 0; j < shots; ++j) {
    SplitMix64 rng(derive_seed(seed, {static_cast<std::uint64_t>(j)}));
    const double u = rng.uniform();
    // first m with survival[m + 1] <= u; survival is nonincreasing
    const auto it = std::upper_bound(survival.begin() + 1, survival.end(), u, std::greater<>());
    pending.push_back({static_cast<std::size_t>(it - survival.begin() - 1), j, rng});
  }
  std::stable_sort(pending.begin(), pending.end(),
                   [](const Shot& a, const Shot& b) { return a.event < b.event; });

  State psi(n_qubits);
  auto next = pending.begin();
  std::size_t m = 0;
  for (std::size_t k = 0; k < ops.size(); ++k) {
    if (ops[k].kind != Op::Kind::Gate) {
      for (; next != pending.end() && next->event == m; ++next) {
        State branch = psi;
        apply_event(ops[k], branch, next->rng.uniform());
        run_from(ops, k + 1, branch, next->rng);
        out.add(draw(cumulative(branch), next->rng.uniform()), 1);
      }
      ++m;
    }
    apply_no_event(ops[k], psi);
  }
  const auto cum = cumulative(psi);
  for (; next != pending.end(); ++next) out.add(draw(cum, next->rng.uniform()), 1);
  return out;
}

}  // namespace

StateVector<double> simulate(const BoundCircuit& c) {
  State psi(c.n_qubits);
  for (const auto& g : c.gates) psi.apply(g);
  return psi;
}

StateVector<double> run_trajectory(const BoundCircuit& c, const NoiseModel& nm, std::uint64_t seed) {
  SplitMix64 rng(splitmix64(seed));
  State psi(c.n_qubits);
  run_from(schedule(c, nm), 0, psi, rng);
  return psi;
}

DensityMatrix<double> evolve_density(const BoundCircuit& c, const NoiseModel& nm) {
  DensityMatrix<double> rho(c.n_qubits);
  const auto ops = schedule(c, nm);
  for (std::size_t k = 0; k < ops.size(); ++k) {
    const Op& op = ops[k];
    if (op.kind == Op::Kind::Damp && k + 1 < ops.size() && ops[k + 1].kind == Op::Kind::Dephase &&
        ops[k + 1].qubit == op.qubit) {
      rho.relax(op.qubit, op.prob, ops[k + 1].prob);
      ++k;
      continue;
    }
    switch (op.kind) {
      case Op::Kind::Gate:
        rho.apply(op.gate);
        break;
      case Op::Kind::Pauli1:
        rho.depolarize(op.qubit, 4.0 * op.prob / 3.0);
        break;
      case Op::Kind::Pauli2:
        rho.depolarize(op.gate.q0, op.gate.q1, 16.0 * op.prob / 15.0);
        break;
      case Op::Kind::Damp:
        rho.amplitude_damp(op.qubit, op.prob);
        break;
      case Op::Kind::Dephase:
        rho.dephase(op.qubit, op.prob);
        break;
    }
  }
  return rho;
}

SampleSet sample(const BoundCircuit& c, const NoiseModel& nm, long shots, std::uint64_t seed, SimBackend backend) {
  if (shots < 1) throw InvalidConfig("shot count must be at least 1");
  if (c.n_qubits > State::kMaxQubits) throw TooManyQubits(std::to_string(c.n_qubits) + " qubits");
  nm.validate();
  SampleSet out;
  out.n_qubits = c.n_qubits;
  if (nm.is_noiseless()) {
    sample_distribution(simulate(c).probabilities(), shots, seed, out);
    return out;
  }
  if (backend == SimBackend::Auto) {
    backend = c.n_qubits <= kDensityAutoMaxQubits ? SimBackend::DensityMatrix : SimBackend::Trajectory;
  }
  if (backend == SimBackend::DensityMatrix) {
    sample_distribution(evolve_density(c, nm).probabilities(), shots, seed, out);
    return out;
  }
  return sample_trajectories(schedule(c, nm), c.n_qubits, shots, seed);
}

Eigen::VectorXd cost_table(const BoolPoly& f, const std::vector<Var>& qubit_vars) {
  if (qubit_vars.size() > static_cast<std::size_t>(State::kMaxQubits)) {
    throw TooManyQubits("cost table over " + std::to_string(qubit_vars.size()) + " qubits");
  }
  const auto packed = PackedPoly::from(f, qubit_vars);
  const int n = static_cast<int>(qubit_vars.size());
  const std::size_t size = std::size_t{1} << n;
  std::vector<std::int64_t> value(size, 0);
  for (const auto& [mask, c] : packed.terms) value[mask] += c;
  for (int b = 0; b < n; ++b) {
    const std::size_t bit = std::size_t{1} << b;
    for (std::size_t x = 0; x < size; ++x) {
      if (x & bit) value[x] += value[x ^ bit];
    }
  }
  const double scale = to_double(packed.scale);
  Eigen::VectorXd out(static_cast<Eigen::Index>(size));
  for (std::size_t x = 0; x < size; ++x) out[static_cast<Eigen::Index>(x)] = static_cast<double>(value[x]) / scale;
  return out;
}

double estimate_expectation(const SampleSet& s, const BoolPoly& f, const std::vector<Var>& qubit_vars) {
  const auto packed = PackedPoly::from(f, qubit_vars);
  if (s.total == 0) throw InvalidConfig("empty sample set");
  double sum = 0.0;
  for (const auto& [basis, n] : s.counts) sum += static_cast<double>(n) * packed.value(basis);
  return sum / static_cast<double>(s.total);
}

double estimate_expectation(const SampleSet& s, const Eigen::VectorXd& costs) {
  if (s.total == 0) throw InvalidConfig("empty sample set");
  double sum = 0.0;
  for (const auto& [basis, n] : s.counts) sum += static_cast<double>(n) * costs[static_cast<Eigen::Index>(basis)];
  return sum / static_cast<double>(s.total);
}

double success_probability(const SampleSet& s, const std::set<std::uint64_t>& solutions) {
  if (solutions.empty()) throw InvalidConfig("solution set must be nonempty");
  if (s.total == 0) throw InvalidConfig("empty sample set");
  long hits = 0;
  for (auto x : solutions) {
    if (auto it = s.counts.find(x); it != s.counts.end()) hits += it->second;
  }
  return static_cast<double>(hits) / static_cast<double>(s.total);
}

}  // namespace vqf
