#include "vqf/optimize.hpp"

#include "vqf/circuit.hpp"
#include "vqf/errors.hpp"
#include "vqf/parallel.hpp"
#include "vqf/random.hpp"

#include <algorithm>
#include <random>

namespace vqf {

void DeConfig::validate(int dim) const {
  if (dim < 1) throw InvalidConfig("dimension must be at least 1");
  if (population_for(dim) < 4) throw InvalidConfig("population size must be at least 4");
  if (!(weight > 0.0 && weight <= 2.0)) throw InvalidConfig("DE weight must lie in (0, 2]");
  if (!(crossover >= 0.0 && crossover <= 1.0)) throw InvalidConfig("crossover rate must lie in [0, 1]");
  if (max_generations < 1) throw InvalidConfig("max_generations must be at least 1");
  if (!(lower < upper)) throw InvalidConfig("bounds must satisfy lower < upper");
}

nlohmann::json to_json(const OptResult& r) {
  return {{"best_params", std::vector<double>(r.best_params.begin(), r.best_params.end())},
          {"best_objective", r.best_objective},
          {"generations_used", r.generations_used},
          {"evaluation_count", r.evaluation_count},
          {"history", r.history}};
}

OptResult minimize(const Objective& objective, int dim, const DeConfig& cfg) {
  cfg.validate(dim);
  const int np = cfg.population_for(dim);
  std::mt19937_64 rng(splitmix64(cfg.seed));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> pick(0, np - 1);
  std::uniform_int_distribution<int> pick_dim(0, dim - 1);

  Eigen::MatrixXd pop(np, dim);
  for (int i = 0; i < np; ++i) {
    for (int d = 0; d < dim; ++d) pop(i, d) = cfg.lower + (cfg.upper - cfg.lower) * unit(rng);
  }

  OptResult result;
  auto evaluate_all = [&](const Eigen::MatrixXd& xs, int generation) {
    Eigen::VectorXd costs(np);
    parallel_for(static_cast<std::size_t>(np), cfg.threads, [&](std::size_t i) {
      const Eigen::VectorXd x = xs.row(static_cast<Eigen::Index>(i)).transpose();
      costs[static_cast<Eigen::Index>(i)] =
          objective(x, derive_seed(cfg.seed, {static_cast<std::uint64_t>(generation), i}));
    });
    result.evaluation_count += np;
    return costs;
  };

  Eigen::VectorXd costs = evaluate_all(pop, 0);
  Eigen::MatrixXd trials(np, dim);
  for (int g = 1; g <= cfg.max_generations; ++g) {
    for (int i = 0; i < np; ++i) {
      int r1, r2, r3;
      do r1 = pick(rng); while (r1 == i);
      do r2 = pick(rng); while (r2 == i || r2 == r1);
      do r3 = pick(rng); while (r3 == i || r3 == r1 || r3 == r2);
      const int forced = pick_dim(rng);
      for (int d = 0; d < dim; ++d) {
        if (d == forced || unit(rng) < cfg.crossover) {
          const double v = pop(r1, d) + cfg.weight * (pop(r2, d) - pop(r3, d));
          trials(i, d) = std::clamp(v, cfg.lower, cfg.upper);
        } else {
          trials(i, d) = pop(i, d);
        }
      }
    }
    const Eigen::VectorXd trial_costs = evaluate_all(trials, g);
    for (int i = 0; i < np; ++i) {
      if (trial_costs[i] <= costs[i]) {
        pop.row(i) = trials.row(i);
        costs[i] = trial_costs[i];
      }
    }
    result.history.push_back(costs.minCoeff());
    result.generations_used = g;
    if (costs.maxCoeff() - costs.minCoeff() < cfg.tolerance) break;
  }

  Eigen::Index best = 0;
  result.best_objective = costs.minCoeff(&best);
  result.best_params = pop.row(best).transpose();
  return result;
}

QaoaParams QaoaParams::from(const Eigen::VectorXd& x) {
  if (x.size() % 2 != 0) throw DimensionMismatch("QAOA parameter vector must have even length");
  const auto p = x.size() / 2;
  QaoaParams out;
  out.gamma.assign(x.data(), x.data() + p);
  out.beta.assign(x.data() + p, x.data() + 2 * p);
  return out;
}

OptResult train_qaoa(const Hamiltonian& h, const BoolPoly& f, int p, const NoiseModel& nm, long shots,
                     const DeConfig& cfg) {
  return train_qaoa(h, cost_table(f, h.qubit_vars), p, nm, shots, cfg);
}

OptResult train_qaoa(const Hamiltonian& h, const Eigen::VectorXd& costs, int p, const NoiseModel& nm, long shots,
                     const DeConfig& cfg) {
  const ParamCircuit circuit = compile_qaoa(h, p);
  if (costs.size() != (Eigen::Index{1} << h.n_qubits())) throw DimensionMismatch("cost table size");
  nm.validate();
  if (shots < 1) throw InvalidConfig("shot count must be at least 1");
  const Objective objective = [&](const Eigen::VectorXd& x, std::uint64_t seed) {
    const auto params = QaoaParams::from(x);
    const BoundCircuit bound = vqf::bind(circuit, params.gamma, params.beta);
    return estimate_expectation(sample(bound, nm, shots, seed), costs);
  };
  return minimize(objective, 2 * p, cfg);
}

}  // namespace vqf
