#pragma once

// Normalized residual performance gain, noise sweeps, masking runs and
// circuit selection.

#include "vqf/circuit.hpp"
#include "vqf/encoder.hpp"
#include "vqf/hamiltonian.hpp"
#include "vqf/optimize.hpp"
#include "vqf/sim.hpp"
#include "vqf/transform.hpp"

#include <json.hpp>

#include <cstdint>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace vqf {

/// |argmin f| / 2^|vars(f)|.
double compute_rand(const BoolPoly& f);

/// (m_ip - rand) / (m_0p - rand); DegenerateBaseline when m_0p <= rand + 1e-6.
double nrpg(double m_ip, double m_0p, double rand);

/// One transformed problem ready for simulation.
struct Problem {
  std::string instance;
  TransformKind kind = TransformKind::Direct;
  BoolPoly cost;
  Hamiltonian h;
  std::set<std::uint64_t> solutions;  // minimizer basis states over h's qubits
  double rand = 0.0;
};

Problem make_problem(const std::string& instance, const ClauseSystem& cs, TransformKind kind,
                     const GrobnerCoefficients& abc = {});

struct SweepConfig {
  NoiseModel noise;           // scale is overwritten by each level
  long train_shots = 2048;
  long eval_shots = 8192;
  DeConfig de;                // de.seed is ignored; seeds derive from `seed`
  std::uint64_t seed = 0;
  bool reuse_params = false;  // evaluate the noiseless parameters at every level
  int threads = 1;            // concurrent jobs
  GrobnerCoefficients grobner;
};

struct NrpgReport {
  std::string instance;
  TransformKind transform = TransformKind::Direct;
  int p = 1;
  double level = 0.0;
  double m_ip = 0.0;
  double m_0p = 0.0;
  double rand = 0.0;
  double nrpg = 0.0;
  CircuitStats stats;
  std::string noise = "full";  // full, gate-only, decoherence-only
  std::uint64_t train_seed = 0;
  std::uint64_t eval_seed = 0;
  std::vector<double> params;
};

/// Rows ordered by (transform, p, level). Level 0 is always trained, and its
/// success probability is m_0p for the remaining levels.
std::vector<NrpgReport> sweep(const std::string& instance, const ClauseSystem& cs,
                              const std::vector<TransformKind>& kinds, const std::vector<int>& p_list,
                              const std::vector<double>& levels, const SweepConfig& cfg);

struct MaskingResult {
  std::vector<NrpgReport> gate_only;
  std::vector<NrpgReport> decoherence_only;
};

/// Two sweeps with identical seeds and scales, one per noise source.
MaskingResult masking_experiment(const std::string& instance, const ClauseSystem& cs, TransformKind kind,
                                 const std::vector<int>& p_list, const std::vector<double>& levels,
                                 const SweepConfig& cfg);

using Candidate = std::pair<TransformKind, CircuitStats>;

/// Candidates within the budget ordered by (n_cnot, cnot_per_qubit, n_qubits, kind).
std::vector<Candidate> rank_candidates(std::vector<Candidate> candidates, int qubit_budget);

/// First of rank_candidates; NoFeasibleCandidate when none fits.
TransformKind select_circuit(const std::vector<Candidate>& candidates, int qubit_budget);

nlohmann::json to_json(const NrpgReport& r);
nlohmann::json reports_to_json(const std::vector<NrpgReport>& rows);
std::string reports_to_csv(const std::vector<NrpgReport>& rows);
/// transform, p, noise, i, nrpg; one block per (transform, p, noise) for plotting.
std::string reports_to_tsv(const std::vector<NrpgReport>& rows);

}  // namespace vqf
