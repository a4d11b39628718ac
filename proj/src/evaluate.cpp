#include "vqf/evaluate.hpp"

#include "vqf/errors.hpp"
#include "vqf/parallel.hpp"
#include "vqf/random.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <tuple>

namespace vqf {

double compute_rand(const BoolPoly& f) {
  const auto minima = brute_force_minima(f);
  return static_cast<double>(minima.masks.size()) / std::ldexp(1.0, static_cast<int>(minima.vars.size()));
}

double nrpg(double m_ip, double m_0p, double rand) {
  if (m_0p <= rand + 1e-6) {
    throw DegenerateBaseline("noiseless success " + std::to_string(m_0p) + " does not beat random guessing " +
                             std::to_string(rand));
  }
  return (m_ip - rand) / (m_0p - rand);
}

Problem make_problem(const std::string& instance, const ClauseSystem& cs, TransformKind kind,
                     const GrobnerCoefficients& abc) {
  Problem pr;
  pr.instance = instance;
  pr.kind = kind;
  pr.cost = apply_transform(cs, kind, abc).cost;
  pr.h = to_hamiltonian(pr.cost);
  const auto minima = brute_force_minima(pr.cost);
  std::vector<int> qubit(minima.vars.size());
  for (std::size_t k = 0; k < minima.vars.size(); ++k) qubit[k] = pr.h.qubit_of(minima.vars[k]);
  for (auto mask : minima.masks) {
    std::uint64_t basis = 0;
    for (std::size_t k = 0; k < qubit.size(); ++k) {
      if ((mask >> k) & 1U) basis |= std::uint64_t{1} << qubit[k];
    }
    pr.solutions.insert(basis);
  }
  pr.rand = static_cast<double>(minima.masks.size()) / std::ldexp(1.0, static_cast<int>(minima.vars.size()));
  return pr;
}

namespace {

struct Trained {
  std::vector<double> params;
  double success = 0.0;
  std::uint64_t eval_seed = 0;
};

std::uint64_t job_seed(std::uint64_t base, TransformKind kind, int p) {
  return derive_seed(base, {static_cast<std::uint64_t>(kind), static_cast<std::uint64_t>(p)});
}

double success_at(const Problem& pr, int p, const std::vector<double>& params, const NoiseModel& nm, long shots,
                  std::uint64_t seed) {
  Eigen::VectorXd x = Eigen::Map<const Eigen::VectorXd>(params.data(), static_cast<Eigen::Index>(params.size()));
  const auto qp = QaoaParams::from(x);
  const auto circuit = vqf::bind(compile_qaoa(pr.h, p), qp.gamma, qp.beta);
  return success_probability(sample(circuit, nm, shots, seed), pr.solutions);
}

Trained train_and_score(const Problem& pr, int p, const NoiseModel& nm, const SweepConfig& cfg,
                        std::uint64_t seed) {
  DeConfig de = cfg.de;
  de.seed = seed;
  de.threads = 1;
  const auto result = train_qaoa(pr.h, pr.cost, p, nm, cfg.train_shots, de);
  Trained t;
  t.params.assign(result.best_params.begin(), result.best_params.end());
  t.eval_seed = derive_seed(seed, {0x65766aULL});
  t.success = success_at(pr, p, t.params, nm, cfg.eval_shots, t.eval_seed);
  return t;
}

std::vector<NrpgReport> run_sweep(const std::string& instance, const ClauseSystem& cs,
                                  const std::vector<TransformKind>& kinds, const std::vector<int>& p_list,
                                  const std::vector<double>& levels, const SweepConfig& cfg, const NoiseModel& nm,
                                  const std::string& label) {
  for (int p : p_list) {
    if (p < 1) throw InvalidConfig("QAOA level p must be at least 1");
  }
  for (double i : levels) {
    if (!(i >= 0.0 && i <= 1.0)) throw InvalidConfig("noise levels must lie in [0, 1]");
  }
  if (cfg.train_shots < 1 || cfg.eval_shots < 1) throw InvalidConfig("shot counts must be at least 1");

  std::vector<TransformKind> ks = kinds;
  std::sort(ks.begin(), ks.end());
  ks.erase(std::unique(ks.begin(), ks.end()), ks.end());
  std::vector<int> ps = p_list;
  std::sort(ps.begin(), ps.end());
  ps.erase(std::unique(ps.begin(), ps.end()), ps.end());
  std::vector<double> is = levels;
  is.push_back(0.0);
  std::sort(is.begin(), is.end());
  is.erase(std::unique(is.begin(), is.end()), is.end());

  std::vector<Problem> problems(ks.size());
  parallel_for(ks.size(), cfg.threads,
               [&](std::size_t t) { problems[t] = make_problem(instance, cs, ks[t], cfg.grobner); });

  // Job (t, p, level); with reuse_params only level 0 is trained.
  struct Job {
    std::size_t t;
    int p;
    std::size_t level;
  };
  std::vector<Job> jobs;
  for (std::size_t t = 0; t < ks.size(); ++t) {
    for (int p : ps) {
      for (std::size_t l = 0; l < is.size(); ++l) jobs.push_back({t, p, l});
    }
  }
  auto at_level = [&](double i) { return i == 0.0 ? NoiseModel::noiseless() : nm.scaled(i); };

  std::vector<Trained> trained(jobs.size());
  auto train_job = [&](std::size_t j) {
    const Job& job = jobs[j];
    const auto seed = job_seed(cfg.seed, ks[job.t], job.p);
    trained[j] = train_and_score(problems[job.t], job.p, at_level(is[job.level]), cfg, seed);
  };
  if (!cfg.reuse_params) {
    parallel_for(jobs.size(), cfg.threads, train_job);
  } else {
    std::vector<std::size_t> base;
    for (std::size_t j = 0; j < jobs.size(); ++j) {
      if (jobs[j].level == 0) base.push_back(j);
    }
    parallel_for(base.size(), cfg.threads, [&](std::size_t b) { train_job(base[b]); });
    parallel_for(jobs.size(), cfg.threads, [&](std::size_t j) {
      if (jobs[j].level == 0) return;
      const std::size_t b = j - jobs[j].level;
      const Trained& ref = trained[b];
      Trained t;
      t.params = ref.params;
      t.eval_seed = ref.eval_seed;
      t.success = success_at(problems[jobs[j].t], jobs[j].p, t.params, at_level(is[jobs[j].level]),
                             cfg.eval_shots, t.eval_seed);
      trained[j] = t;
    });
  }

  std::vector<NrpgReport> rows;
  for (std::size_t j = 0; j < jobs.size(); ++j) {
    const Job& job = jobs[j];
    const double level = is[job.level];
    if (std::find(levels.begin(), levels.end(), level) == levels.end()) continue;
    const Problem& pr = problems[job.t];
    const Trained& base = trained[j - job.level];
    NrpgReport r;
    r.instance = instance;
    r.transform = pr.kind;
    r.p = job.p;
    r.level = level;
    r.m_ip = trained[j].success;
    r.m_0p = base.success;
    r.rand = pr.rand;
    r.nrpg = job.level == 0 ? 1.0 : nrpg(r.m_ip, r.m_0p, r.rand);
    if (job.level == 0) nrpg(r.m_ip, r.m_0p, r.rand);  // rejects a degenerate baseline
    r.stats = stats(compile_qaoa(pr.h, job.p));
    r.noise = label;
    r.train_seed = job_seed(cfg.seed, pr.kind, job.p);
    r.eval_seed = trained[j].eval_seed;
    r.params = trained[j].params;
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace

std::vector<NrpgReport> sweep(const std::string& instance, const ClauseSystem& cs,
                              const std::vector<TransformKind>& kinds, const std::vector<int>& p_list,
                              const std::vector<double>& levels, const SweepConfig& cfg) {
  return run_sweep(instance, cs, kinds, p_list, levels, cfg, cfg.noise, "full");
}

MaskingResult masking_experiment(const std::string& instance, const ClauseSystem& cs, TransformKind kind,
                                 const std::vector<int>& p_list, const std::vector<double>& levels,
                                 const SweepConfig& cfg) {
  NoiseModel gate = cfg.noise;
  gate.gate_noise_on = true;
  gate.decoherence_on = false;
  NoiseModel decoherence = cfg.noise;
  decoherence.gate_noise_on = false;
  decoherence.decoherence_on = true;
  MaskingResult out;
  out.gate_only = run_sweep(instance, cs, {kind}, p_list, levels, cfg, gate, "gate-only");
  out.decoherence_only = run_sweep(instance, cs, {kind}, p_list, levels, cfg, decoherence, "decoherence-only");
  return out;
}

std::vector<Candidate> rank_candidates(std::vector<Candidate> candidates, int qubit_budget) {
  std::erase_if(candidates, [&](const Candidate& c) { return c.second.n_qubits > qubit_budget; });
  std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
    return std::tie(a.second.n_cnot, a.second.cnot_per_qubit, a.second.n_qubits, a.first) <
           std::tie(b.second.n_cnot, b.second.cnot_per_qubit, b.second.n_qubits, b.first);
  });
  return candidates;
}

TransformKind select_circuit(const std::vector<Candidate>& candidates, int qubit_budget) {
  if (candidates.empty()) throw NoFeasibleCandidate("no candidate circuits");
  const auto ranked = rank_candidates(candidates, qubit_budget);
  if (ranked.empty()) {
    throw NoFeasibleCandidate("every candidate exceeds the budget of " + std::to_string(qubit_budget) + " qubits");
  }
  return ranked.front().first;
}

nlohmann::json to_json(const NrpgReport& r) {
  return {{"instance", r.instance},
          {"transform", to_string(r.transform)},
          {"p", r.p},
          {"i", r.level},
          {"noise", r.noise},
          {"m_ip", r.m_ip},
          {"m_0p", r.m_0p},
          {"rand", r.rand},
          {"nrpg", r.nrpg},
          {"stats", to_json(r.stats)},
          {"train_seed", r.train_seed},
          {"eval_seed", r.eval_seed},
          {"params", r.params}};
}

nlohmann::json reports_to_json(const std::vector<NrpgReport>& rows) {
  auto out = nlohmann::json::array();
  for (const auto& r : rows) out.push_back(to_json(r));
  return out;
}

std::string reports_to_csv(const std::vector<NrpgReport>& rows) {
  std::ostringstream out;
  out.precision(17);
  out << "instance,transform,p,i,m_ip,m_0p,rand,nrpg,n_qubits,n_cnot,depth,seed\n";
  for (const auto& r : rows) {
    out << r.instance << ',' << to_string(r.transform) << ',' << r.p << ',' << r.level << ',' << r.m_ip << ','
        << r.m_0p << ',' << r.rand << ',' << r.nrpg << ',' << r.stats.n_qubits << ',' << r.stats.n_cnot << ','
        << r.stats.depth << ',' << r.train_seed << '\n';
  }
  return out.str();
}

std::string reports_to_tsv(const std::vector<NrpgReport>& rows) {
  std::map<std::tuple<TransformKind, int, std::string>, std::vector<const NrpgReport*>> groups;
  for (const auto& r : rows) groups[{r.transform, r.p, r.noise}].push_back(&r);
  std::ostringstream out;
  out.precision(17);
  out << "transform\tp\tnoise\ti\tnrpg\n";
  bool first = true;
  for (const auto& [key, group] : groups) {
    if (!first) out << '\n';  // blank line between blocks
    first = false;
    for (const auto* r : group) {
      out << to_string(r->transform) << '\t' << r->p << '\t' << r->noise << '\t' << r->level << '\t' << r->nrpg
          << '\n';
    }
  }
  return out.str();
}

}  // namespace vqf
