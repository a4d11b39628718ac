#pragma once

// Differential evolution (rand/1/bin) and QAOA training on top of it.

#include "vqf/hamiltonian.hpp"
#include "vqf/pboly.hpp"
#include "vqf/sim.hpp"

#include <Eigen/Core>
#include <json.hpp>

#include <cstdint>
#include <functional>
#include <numbers>
#include <vector>

namespace vqf {

struct DeConfig {
  int population_size = 0;  // 0 means 15 * dimension
  double weight = 0.8;
  double crossover = 0.9;
  int max_generations = 100;
  double tolerance = 1e-3;  // stop once max - min of the population costs drops below
  double lower = 0.0;
  double upper = 2.0 * std::numbers::pi;
  std::uint64_t seed = 0;
  int threads = 1;

  int population_for(int dim) const { return population_size > 0 ? population_size : 15 * dim; }
  void validate(int dim) const;
};

struct OptResult {
  Eigen::VectorXd best_params;
  double best_objective = 0.0;
  int generations_used = 0;
  long evaluation_count = 0;
  std::vector<double> history;  // best objective after each generation
};

nlohmann::json to_json(const OptResult& r);

/// objective(params, evaluation_seed); the seed is derived from
/// (cfg.seed, generation, member) so repeated runs are identical.
using Objective = std::function<double(const Eigen::VectorXd&, std::uint64_t)>;

OptResult minimize(const Objective& objective, int dim, const DeConfig& cfg);

/// QAOA parameters are laid out as (gamma_1..gamma_p, beta_1..beta_p).
struct QaoaParams {
  std::vector<double> gamma;
  std::vector<double> beta;

  static QaoaParams from(const Eigen::VectorXd& x);
};

/// Minimizes the Monte-Carlo expectation of f over the circuit compiled from h.
OptResult train_qaoa(const Hamiltonian& h, const BoolPoly& f, int p, const NoiseModel& nm, long shots,
                     const DeConfig& cfg);
/// Same, with the cost of every basis state given directly.
OptResult train_qaoa(const Hamiltonian& h, const Eigen::VectorXd& costs, int p, const NoiseModel& nm, long shots,
                     const DeConfig& cfg);

}  // namespace vqf
