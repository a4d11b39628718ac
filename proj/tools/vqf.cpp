// vqf: command-line front end.
//
//   vqf encode   --n 143 --bits 4 --out clauses.txt
//   vqf transform --clauses clauses.txt --kind GROBNER --out h.json
//   vqf compile  --hamiltonian h.json --p 2 --stats
//   vqf train    --hamiltonian h.json --p 2 --noise nm.json --shots 2048 --seed 7
//   vqf sample   --hamiltonian h.json --p 2 --params trained.json --shots 8192
//   vqf sweep | mask | select   (instance given by --n/--bits or --clauses)
//   vqf pipeline --config run.json [--dry-run]
//   vqf random   --seed 11 --vars 6 --clauses 4 --products 2 --linear 2
//
// Exit codes: 0 success, 2 config error, 3 infeasible instance, 4 runtime failure.

#include "vqf/circuit.hpp"
#include "vqf/encoder.hpp"
#include "vqf/errors.hpp"
#include "vqf/evaluate.hpp"
#include "vqf/hamiltonian.hpp"
#include "vqf/optimize.hpp"
#include "vqf/parallel.hpp"
#include "vqf/pipeline.hpp"
#include "vqf/poly_io.hpp"
#include "vqf/random_instance.hpp"
#include "vqf/sim.hpp"
#include "vqf/transform.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace vqf;

namespace {

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidConfig("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

nlohmann::json read_json(const std::string& path) {
  try {
    return nlohmann::json::parse(read_text(path));
  } catch (const nlohmann::json::exception& e) {
    throw InvalidConfig(path + ": " + e.what());
  }
}

// Writes to `path`, or stdout when empty.
void emit(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  out << text;
}

struct InstanceArgs {
  std::uint64_t n = 0;
  int bits = 0;
  std::string clauses;
  int probe_depth = kDefaultProbeDepth;

  void add(CLI::App* app) {
    app->add_option("--n", n, "odd integer to factor");
    app->add_option("--bits", bits, "bit length of each factor");
    app->add_option("--clauses", clauses, "clause file instead of --n/--bits");
    app->add_option("--probe-depth", probe_depth, "probing depth (0, 1 or 2)")->check(CLI::Range(0, 2));
  }

  std::string id() const { return clauses.empty() ? std::to_string(n) : fs::path(clauses).stem().string(); }

  ClauseSystem load() const {
    if (!clauses.empty()) return preprocess(load_clause_file(clauses), probe_depth);
    if (n == 0 || bits == 0) throw InvalidConfig("give --n and --bits, or --clauses");
    return preprocess(build_clauses({n, bits, true}), probe_depth);
  }
};

NoiseModel load_noise(const std::string& path, std::optional<double> level) {
  NoiseModel nm = path.empty() ? NoiseModel{} : noise_model_from_json(read_json(path));
  if (level) nm = nm.scaled(*level);
  nm.validate();
  return nm;
}

Hamiltonian load_hamiltonian(const std::string& path) {
  try {
    return hamiltonian_from_json(read_json(path));
  } catch (const InvalidConfig&) {
    throw;
  } catch (const Error& e) {
    throw InvalidConfig(path + ": " + e.what());
  }
}

// gamma/beta from a train result (OptResult JSON or a file wrapping one under "result").
QaoaParams load_params(const std::string& path, int p) {
  auto j = read_json(path);
  if (j.contains("result")) j = j.at("result");
  const auto v = j.at("best_params").get<std::vector<double>>();
  if (v.size() != static_cast<std::size_t>(2 * p)) {
    throw InvalidConfig("parameter file holds " + std::to_string(v.size()) + " values, p = " + std::to_string(p) +
                        " needs " + std::to_string(2 * p));
  }
  return QaoaParams::from(Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size())));
}

struct DeArgs {
  int population = 0;
  int generations = 100;
  double tolerance = 1e-3;

  void add(CLI::App* app) {
    app->add_option("--population", population, "DE population (0 = 15 x dimension)");
    app->add_option("--generations", generations, "DE generation cap");
    app->add_option("--tolerance", tolerance, "stop once the population cost spread falls below");
  }

  DeConfig config(std::uint64_t seed, int threads) const {
    DeConfig de;
    de.population_size = population;
    de.max_generations = generations;
    de.tolerance = tolerance;
    de.seed = seed;
    de.threads = threads;
    return de;
  }
};

std::vector<TransformKind> parse_kinds(const std::vector<std::string>& names) {
  std::vector<TransformKind> out;
  for (const auto& s : names) {
    try {
      out.push_back(parse_transform_kind(s));
    } catch (const Error& e) {
      throw InvalidConfig(e.what());
    }
  }
  if (out.empty()) out.assign(std::begin(kAllTransforms), std::end(kAllTransforms));
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Variational quantum factoring workbench"};
  app.require_subcommand(1);
  const int threads = default_thread_count();

  // encode
  auto* encode = app.add_subcommand("encode", "build and preprocess the clause system of N");
  InstanceArgs enc_inst;
  std::string enc_out;
  enc_inst.add(encode);
  encode->add_option("--out", enc_out, "clause file (stdout when omitted)");

  // transform
  auto* transform = app.add_subcommand("transform", "apply a transformation and emit the Hamiltonian");
  InstanceArgs tr_inst;
  std::string tr_kind = "DIRECT", tr_out, tr_poly_out;
  tr_inst.add(transform);
  transform->add_option("--kind", tr_kind, "DIRECT, SCHALLER, GROBNER or SIM-GROBNER");
  transform->add_option("--out", tr_out, "Hamiltonian JSON (stdout when omitted)");
  transform->add_option("--poly-out", tr_poly_out, "also write the transformed polynomial");

  // compile
  auto* compile = app.add_subcommand("compile", "compile a Hamiltonian into a QAOA circuit");
  std::string cp_ham, cp_params, cp_out;
  int cp_p = 1;
  bool cp_stats = false, cp_json = false;
  compile->add_option("--hamiltonian", cp_ham, "Hamiltonian JSON")->required();
  compile->add_option("--p", cp_p, "QAOA level")->check(CLI::PositiveNumber);
  compile->add_flag("--stats", cp_stats, "print circuit statistics as JSON");
  compile->add_option("--params", cp_params, "train result to bind (angles default to 0)");
  compile->add_flag("--json", cp_json, "emit the gate list as JSON instead of OpenQASM");
  compile->add_option("--out", cp_out, "output file (stdout when omitted)");

  // train
  auto* train = app.add_subcommand("train", "optimize QAOA angles by differential evolution");
  std::string tn_ham, tn_noise, tn_out;
  int tn_p = 1;
  long tn_shots = 2048;
  std::uint64_t tn_seed = 0;
  std::optional<double> tn_level;
  DeArgs tn_de;
  train->add_option("--hamiltonian", tn_ham, "Hamiltonian JSON")->required();
  train->add_option("--p", tn_p, "QAOA level")->check(CLI::PositiveNumber);
  train->add_option("--noise", tn_noise, "noise model JSON (defaults when omitted)");
  train->add_option("--level", tn_level, "noise scale i, overriding the file")->check(CLI::Range(0.0, 1.0));
  train->add_option("--shots", tn_shots, "shots per objective evaluation");
  train->add_option("--seed", tn_seed, "random seed");
  train->add_option("--out", tn_out, "result JSON (stdout when omitted)");
  tn_de.add(train);

  // sample
  auto* samp = app.add_subcommand("sample", "measure a bound circuit");
  std::string sm_ham, sm_noise, sm_params, sm_out;
  int sm_p = 1;
  long sm_shots = 8192;
  std::uint64_t sm_seed = 0;
  std::optional<double> sm_level;
  samp->add_option("--hamiltonian", sm_ham, "Hamiltonian JSON")->required();
  samp->add_option("--p", sm_p, "QAOA level")->check(CLI::PositiveNumber);
  samp->add_option("--params", sm_params, "train result JSON")->required();
  samp->add_option("--noise", sm_noise, "noise model JSON");
  samp->add_option("--level", sm_level, "noise scale i")->check(CLI::Range(0.0, 1.0));
  samp->add_option("--shots", sm_shots, "number of shots");
  samp->add_option("--seed", sm_seed, "random seed");
  samp->add_option("--out", sm_out, "CSV output (stdout when omitted)");

  // sweep and mask share most options
  struct SweepArgs {
    InstanceArgs inst;
    std::vector<std::string> kinds;
    std::vector<int> p_list{1};
    std::vector<double> levels{0.0, 0.2, 0.4, 0.6, 0.8, 1.0};
    std::string noise, out_dir = ".";
    long shots = 2048, eval_shots = 8192;
    std::uint64_t seed = 0;
    bool reuse = false;
    DeArgs de;

    void add(CLI::App* a, bool many_kinds) {
      inst.add(a);
      if (many_kinds) {
        a->add_option("--transforms", kinds, "transformations (default: all)");
      } else {
        a->add_option("--transform", kinds, "transformation")->expected(1);
      }
      a->add_option("--p", p_list, "QAOA levels");
      a->add_option("--levels", levels, "noise scales i");
      a->add_option("--noise", noise, "noise model JSON");
      a->add_option("--shots", shots, "training shots");
      a->add_option("--eval-shots", eval_shots, "shots for the reported success probability");
      a->add_option("--seed", seed, "random seed");
      a->add_flag("--reuse-params", reuse, "evaluate the noiseless angles at every level");
      a->add_option("--out-dir", out_dir, "output directory");
      de.add(a);
    }

    SweepConfig config(int threads) const {
      SweepConfig sc;
      sc.noise = load_noise(noise, std::nullopt);
      sc.train_shots = shots;
      sc.eval_shots = eval_shots;
      sc.de = de.config(0, 1);
      sc.seed = seed;
      sc.reuse_params = reuse;
      sc.threads = threads;
      return sc;
    }
  };
  auto* sweep_cmd = app.add_subcommand("sweep", "NRPG over transformations, levels and noise scales");
  SweepArgs sw;
  sw.add(sweep_cmd, true);
  auto* mask = app.add_subcommand("mask", "gate-only versus decoherence-only sweeps");
  SweepArgs mk;
  mk.add(mask, false);

  // select
  auto* select = app.add_subcommand("select", "rank transformations by circuit cost");
  InstanceArgs se_inst;
  int se_p = 1, se_budget = 16;
  se_inst.add(select);
  select->add_option("--p", se_p, "QAOA level")->check(CLI::PositiveNumber);
  select->add_option("--budget", se_budget, "qubit budget");

  // random
  auto* random = app.add_subcommand("random", "draw a random clause system with a planted zero");
  RandomClauseSpec rd;
  std::string rd_out;
  random->add_option("--seed", rd.seed, "generator seed");
  random->add_option("--vars", rd.n_vars, "number of variables");
  random->add_option("--clauses", rd.n_clauses, "number of clauses");
  random->add_option("--products", rd.products, "degree-2 monomials per clause");
  random->add_option("--linear", rd.linear, "degree-1 monomials per clause");
  random->add_option("--out", rd_out, "clause file (stdout when omitted)");

  // pipeline
  auto* pipeline = app.add_subcommand("pipeline", "run every stage from a config file");
  std::string pl_config, pl_out;
  bool pl_dry = false;
  pipeline->add_option("--config", pl_config, "run config JSON")->required();
  pipeline->add_option("--out-dir", pl_out, "override output_dir");
  pipeline->add_flag("--dry-run", pl_dry, "stop after statistics and selection");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*encode) {
      const auto cs = enc_inst.load();
      emit(enc_out, format_clause_text(cs));
      std::cerr << cs.free_vars.size() << " free variables, " << cs.clauses.size() << " clauses\n";
    } else if (*transform) {
      const auto cs = tr_inst.load();
      TransformKind kind;
      try {
        kind = parse_transform_kind(tr_kind);
      } catch (const Error& e) {
        throw InvalidConfig(e.what());
      }
      const auto t = apply_transform(cs, kind);
      auto j = to_json(to_hamiltonian(t.cost));
      j["transform"] = to_string(kind);
      emit(tr_out, j.dump(2) + "\n");
      if (!tr_poly_out.empty()) emit(tr_poly_out, format_poly_text(t.cost));
    } else if (*compile) {
      const auto h = load_hamiltonian(cp_ham);
      const auto circuit = compile_qaoa(h, cp_p);
      if (cp_stats) {
        emit(cp_out, to_json(stats(circuit)).dump(2) + "\n");
      } else {
        QaoaParams qp;
        if (cp_params.empty()) {
          qp.gamma.assign(static_cast<std::size_t>(cp_p), 0.0);
          qp.beta.assign(static_cast<std::size_t>(cp_p), 0.0);
        } else {
          qp = load_params(cp_params, cp_p);
        }
        const auto bound = vqf::bind(circuit, qp.gamma, qp.beta);
        emit(cp_out, cp_json ? to_json(bound).dump(2) + "\n" : export_qasm(bound));
      }
    } else if (*train) {
      const auto h = load_hamiltonian(tn_ham);
      const auto nm = load_noise(tn_noise, tn_level);
      const auto result = train_qaoa(h, h.diagonal(), tn_p, nm, tn_shots, tn_de.config(tn_seed, threads));
      emit(tn_out, to_json(result).dump(2) + "\n");
    } else if (*samp) {
      const auto h = load_hamiltonian(sm_ham);
      const auto nm = load_noise(sm_noise, sm_level);
      const auto qp = load_params(sm_params, sm_p);
      const auto s = sample(vqf::bind(compile_qaoa(h, sm_p), qp.gamma, qp.beta), nm, sm_shots, sm_seed);
      emit(sm_out, s.to_csv());
    } else if (*sweep_cmd) {
      const auto cs = sw.inst.load();
      const auto rows = sweep(sw.inst.id(), cs, parse_kinds(sw.kinds), sw.p_list, sw.levels, sw.config(threads));
      fs::create_directories(sw.out_dir);
      emit((fs::path(sw.out_dir) / "report.json").string(), reports_to_json(rows).dump(2) + "\n");
      emit((fs::path(sw.out_dir) / "report.csv").string(), reports_to_csv(rows));
      emit((fs::path(sw.out_dir) / "report.tsv").string(), reports_to_tsv(rows));
      std::cout << reports_to_csv(rows);
    } else if (*mask) {
      const auto cs = mk.inst.load();
      const auto kinds = parse_kinds(mk.kinds);
      const auto result = masking_experiment(mk.inst.id(), cs, kinds.front(), mk.p_list, mk.levels, mk.config(threads));
      auto rows = result.gate_only;
      rows.insert(rows.end(), result.decoherence_only.begin(), result.decoherence_only.end());
      fs::create_directories(mk.out_dir);
      nlohmann::json j;
      j["gate_only"] = reports_to_json(result.gate_only);
      j["decoherence_only"] = reports_to_json(result.decoherence_only);
      emit((fs::path(mk.out_dir) / "masking.json").string(), j.dump(2) + "\n");
      emit((fs::path(mk.out_dir) / "masking.tsv").string(), reports_to_tsv(rows));
      std::cout << reports_to_tsv(rows);
    } else if (*select) {
      const auto cs = se_inst.load();
      std::vector<Candidate> candidates;
      for (auto k : kAllTransforms) {
        candidates.emplace_back(k, stats(compile_qaoa(to_hamiltonian(apply_transform(cs, k).cost), se_p)));
      }
      const auto chosen = select_circuit(candidates, se_budget);
      std::cout << "transform,n_qubits,n_cnot,cnot_per_qubit,depth\n";
      for (const auto& [k, s] : rank_candidates(candidates, se_budget)) {
        std::cout << to_string(k) << ',' << s.n_qubits << ',' << s.n_cnot << ',' << s.cnot_per_qubit << ','
                  << s.depth << '\n';
      }
      std::cout << "selected " << to_string(chosen) << '\n';
    } else if (*random) {
      std::ostringstream header;
      header << "# vqf random --seed " << rd.seed << " --vars " << rd.n_vars << " --clauses " << rd.n_clauses
             << " --products " << rd.products << " --linear " << rd.linear << "\n";
      emit(rd_out, header.str() + format_clause_text(random_clause_system(rd)));
    } else if (*pipeline) {
      RunConfig cfg = load_run_config(pl_config);
      if (!pl_out.empty()) cfg.output_dir = pl_out;
      const auto result = run_pipeline(cfg, threads, pl_dry);
      std::cout << "config " << result.hash << "\nselected " << to_string(result.selected) << '\n';
      for (const auto& f : result.files) std::cout << "wrote " << f.string() << '\n';
    }
  } catch (const std::exception& e) {
    std::cerr << "vqf: " << e.what() << '\n';
    return exit_code_for(e);
  }
  return 0;
}
