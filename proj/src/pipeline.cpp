#include "vqf/pipeline.hpp"

#include "vqf/circuit.hpp"
#include "vqf/errors.hpp"
#include "vqf/hamiltonian.hpp"
#include "vqf/poly_io.hpp"
#include "vqf/random.hpp"

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace vqf {

namespace fs = std::filesystem;

std::string RunConfig::instance_id() const {
  if (n) return std::to_string(*n);
  return fs::path(clause_file).stem().string();
}

namespace {

Rational rational_from_json(const nlohmann::json& j) {
  if (j.is_number_integer()) return Rational(j.get<long long>());
  if (j.is_string()) {
    const auto poly = parse_expression(j.get<std::string>());
    if (poly.degree() > 0) throw InvalidConfig("expected a number, got " + j.get<std::string>());
    return poly.constant();
  }
  throw InvalidConfig("expected an integer or a fraction string");
}

template <typename T>
T get(const nlohmann::json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw InvalidConfig(std::string("config key '") + key + "' has the wrong type");
  }
}

void reject_unknown(const nlohmann::json& j, const std::set<std::string>& known, const std::string& where) {
  for (const auto& [key, value] : j.items()) {
    if (!known.count(key)) throw InvalidConfig("unknown key '" + key + "' in " + where);
  }
}

void write_file(const fs::path& path, const std::string& text, std::vector<fs::path>& files) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
  if (!out) throw Error("write failed for " + path.string());
  files.push_back(path);
}

std::string hamiltonian_file(TransformKind k) {
  std::string name = to_string(k);
  for (auto& c : name) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return "hamiltonian_" + name + ".json";
}

// Runs f, tagging any failure with the stage name and its exit code.
template <typename F>
auto stage(const std::string& name, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError(name, exit_code_for(e), e.what());
  }
}

}  // namespace

RunConfig run_config_from_json(const nlohmann::json& j, const fs::path& base) {
  if (!j.is_object()) throw InvalidConfig("config must be a JSON object");
  reject_unknown(j,
                 {"instance", "probe_depth", "transforms", "grobner", "p", "noise_file", "noise", "levels", "shots",
                  "eval_shots", "de", "seed", "reuse_params", "qubit_budget", "output_dir"},
                 "config");
  RunConfig cfg;
  if (!j.contains("instance")) throw InvalidConfig("config needs an 'instance'");
  const auto& inst = j.at("instance");
  reject_unknown(inst, {"n", "bits", "clause_file"}, "instance");
  if (inst.contains("clause_file") == inst.contains("n")) {
    throw InvalidConfig("instance needs exactly one of 'n' (with 'bits') or 'clause_file'");
  }
  if (inst.contains("n")) {
    cfg.n = get<std::uint64_t>(inst, "n", 0);
    cfg.bits = get<int>(inst, "bits", 0);
    if (cfg.bits <= 0) throw InvalidConfig("instance 'bits' must be positive");
  } else {
    const fs::path p = get<std::string>(inst, "clause_file", "");
    cfg.clause_file = (p.is_relative() && !base.empty() ? base / p : p).string();
    if (!fs::exists(cfg.clause_file)) throw InvalidConfig("clause file not found: " + cfg.clause_file);
  }
  cfg.probe_depth = get<int>(j, "probe_depth", cfg.probe_depth);
  if (cfg.probe_depth < 0 || cfg.probe_depth > 2) throw InvalidConfig("probe_depth must be 0, 1 or 2");

  if (j.contains("transforms")) {
    cfg.transforms.clear();
    for (const auto& t : get<std::vector<std::string>>(j, "transforms", {})) {
      try {
        cfg.transforms.push_back(parse_transform_kind(t));
      } catch (const Error& e) {
        throw InvalidConfig(e.what());
      }
    }
    if (cfg.transforms.empty()) throw InvalidConfig("'transforms' must not be empty");
  }
  if (j.contains("grobner")) {
    const auto& g = j.at("grobner");
    reject_unknown(g, {"a", "b", "c"}, "grobner");
    if (g.contains("a")) cfg.grobner.a = rational_from_json(g.at("a"));
    if (g.contains("b")) cfg.grobner.b = rational_from_json(g.at("b"));
    if (g.contains("c")) cfg.grobner.c = rational_from_json(g.at("c"));
    if (!cfg.grobner.valid()) throw InvalidConfig("grobner penalty coefficients violate the validity conditions");
  }
  cfg.p_list = get(j, "p", cfg.p_list);
  if (cfg.p_list.empty()) throw InvalidConfig("'p' must not be empty");
  for (int p : cfg.p_list) {
    if (p < 1) throw InvalidConfig("every QAOA level p must be at least 1");
  }

  if (j.contains("noise_file") && j.contains("noise")) {
    throw InvalidConfig("give either 'noise_file' or 'noise', not both");
  }
  if (j.contains("noise_file")) {
    const fs::path p = get<std::string>(j, "noise_file", "");
    cfg.noise_file = (p.is_relative() && !base.empty() ? base / p : p).string();
    std::ifstream in(cfg.noise_file);
    if (!in) throw InvalidConfig("cannot read noise file " + cfg.noise_file);
    nlohmann::json nj;
    try {
      in >> nj;
    } catch (const nlohmann::json::exception& e) {
      throw InvalidConfig("noise file " + cfg.noise_file + ": " + e.what());
    }
    cfg.noise = noise_model_from_json(nj);
  } else if (j.contains("noise")) {
    cfg.noise = noise_model_from_json(j.at("noise"));
  }

  cfg.levels = get(j, "levels", cfg.levels);
  if (cfg.levels.empty()) throw InvalidConfig("'levels' must not be empty");
  for (double i : cfg.levels) {
    if (!(i >= 0.0 && i <= 1.0)) throw InvalidConfig("noise levels must lie in [0, 1]");
  }
  cfg.train_shots = get(j, "shots", cfg.train_shots);
  cfg.eval_shots = get(j, "eval_shots", cfg.eval_shots);
  if (cfg.train_shots < 1 || cfg.eval_shots < 1) throw InvalidConfig("shot counts must be at least 1");

  if (j.contains("de")) {
    const auto& d = j.at("de");
    reject_unknown(d, {"population_size", "weight", "crossover", "max_generations", "tolerance"}, "de");
    cfg.de.population_size = get(d, "population_size", cfg.de.population_size);
    cfg.de.weight = get(d, "weight", cfg.de.weight);
    cfg.de.crossover = get(d, "crossover", cfg.de.crossover);
    cfg.de.max_generations = get(d, "max_generations", cfg.de.max_generations);
    cfg.de.tolerance = get(d, "tolerance", cfg.de.tolerance);
  }
  for (int p : cfg.p_list) cfg.de.validate(2 * p);

  cfg.seed = get(j, "seed", cfg.seed);
  cfg.reuse_params = get(j, "reuse_params", cfg.reuse_params);
  cfg.qubit_budget = get(j, "qubit_budget", cfg.qubit_budget);
  if (cfg.qubit_budget < 1) throw InvalidConfig("qubit_budget must be positive");
  cfg.output_dir = get(j, "output_dir", cfg.output_dir);
  return cfg;
}

RunConfig load_run_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidConfig("cannot read config " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidConfig("config " + path.string() + ": " + e.what());
  }
  return run_config_from_json(j, path.parent_path());
}

nlohmann::json to_json(const RunConfig& cfg) {
  nlohmann::json j;
  if (cfg.n) {
    j["instance"] = {{"n", *cfg.n}, {"bits", cfg.bits}};
  } else {
    j["instance"] = {{"clause_file", cfg.clause_file}};
  }
  j["probe_depth"] = cfg.probe_depth;
  auto ts = nlohmann::json::array();
  for (auto k : cfg.transforms) ts.push_back(to_string(k));
  j["transforms"] = ts;
  j["grobner"] = {{"a", format_rational(cfg.grobner.a)},
                  {"b", format_rational(cfg.grobner.b)},
                  {"c", format_rational(cfg.grobner.c)}};
  j["p"] = cfg.p_list;
  j["noise"] = to_json(cfg.noise);
  j["levels"] = cfg.levels;
  j["shots"] = cfg.train_shots;
  j["eval_shots"] = cfg.eval_shots;
  j["de"] = {{"population_size", cfg.de.population_size},
             {"weight", cfg.de.weight},
             {"crossover", cfg.de.crossover},
             {"max_generations", cfg.de.max_generations},
             {"tolerance", cfg.de.tolerance}};
  j["seed"] = cfg.seed;
  j["reuse_params"] = cfg.reuse_params;
  j["qubit_budget"] = cfg.qubit_budget;
  j["output_dir"] = cfg.output_dir;
  return j;
}

std::string config_hash(const RunConfig& cfg) {
  auto j = to_json(cfg);
  j.erase("output_dir");
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : j.dump()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

int exit_code_for(const std::exception& e) {
  if (const auto* s = dynamic_cast<const StageError*>(&e)) return s->code();
  if (dynamic_cast<const InvalidConfig*>(&e) || dynamic_cast<const ParseError*>(&e) ||
      dynamic_cast<const InvalidPenaltyCoefficients*>(&e) || dynamic_cast<const NoFeasibleCandidate*>(&e)) {
    return 2;
  }
  if (dynamic_cast<const InfeasibleInstance*>(&e)) return 3;
  return 4;
}

ClauseSystem load_instance(const RunConfig& cfg) {
  if (cfg.n) {
    return preprocess(build_clauses({*cfg.n, cfg.bits, true}), cfg.probe_depth);
  }
  return preprocess(load_clause_file(cfg.clause_file), cfg.probe_depth);
}

PipelineResult run_pipeline(const RunConfig& cfg, int threads, bool dry_run) {
  PipelineResult out;
  out.hash = config_hash(cfg);
  const std::string& hash = out.hash;
  const fs::path dir = cfg.output_dir;
  stage("setup", [&] {
    fs::create_directories(dir);
    return 0;
  });
  auto& files = out.files;

  const ClauseSystem cs = stage("encode", [&] { return load_instance(cfg); });
  stage("encode", [&] {
    write_file(dir / "clauses.txt", "# config " + hash + "\n" + format_clause_text(cs), files);
    return 0;
  });

  std::vector<Candidate> candidates;
  stage("transform", [&] {
    for (auto k : cfg.transforms) {
      const auto t = apply_transform(cs, k, cfg.grobner);
      auto j = to_json(to_hamiltonian(t.cost));
      j["transform"] = to_string(k);
      j["config_hash"] = hash;
      auto aux = nlohmann::json::array();
      for (const auto& v : t.aux) aux.push_back(v.name());
      j["aux"] = aux;
      write_file(dir / hamiltonian_file(k), j.dump(2) + "\n", files);
    }
    return 0;
  });

  const int p_select = cfg.p_list.front();
  stage("compile", [&] {
    std::ostringstream table;
    table << "# config " << hash << "\n";
    table << "transform,p,n_qubits,n_single_gates,n_cnot,depth,cnot_per_qubit\n";
    for (auto k : cfg.transforms) {
      const auto h = to_hamiltonian(apply_transform(cs, k, cfg.grobner).cost);
      for (int p : cfg.p_list) {
        const auto s = stats(compile_qaoa(h, p));
        table << to_string(k) << ',' << p << ',' << s.n_qubits << ',' << s.n_single_gates << ',' << s.n_cnot << ','
              << s.depth << ',' << s.cnot_per_qubit << '\n';
        if (p == p_select) candidates.emplace_back(k, s);
      }
    }
    write_file(dir / "stats.csv", table.str(), files);
    return 0;
  });

  stage("select", [&] {
    out.selected = select_circuit(candidates, cfg.qubit_budget);
    nlohmann::json j;
    j["config_hash"] = hash;
    j["qubit_budget"] = cfg.qubit_budget;
    j["p"] = p_select;
    j["selected"] = to_string(out.selected);
    auto ranking = nlohmann::json::array();
    for (const auto& [k, s] : rank_candidates(candidates, cfg.qubit_budget)) {
      ranking.push_back({{"transform", to_string(k)}, {"stats", to_json(s)}});
    }
    j["ranking"] = ranking;
    write_file(dir / "selection.json", j.dump(2) + "\n", files);
    return 0;
  });

  if (!dry_run) {
    stage("train", [&] {
      const auto pr = make_problem(cfg.instance_id(), cs, out.selected, cfg.grobner);
      DeConfig de = cfg.de;
      de.seed = derive_seed(cfg.seed, {0x747261696eULL});
      de.threads = threads;
      const auto result = train_qaoa(pr.h, pr.cost, p_select, NoiseModel::noiseless(), cfg.train_shots, de);
      const auto qp = QaoaParams::from(result.best_params);
      const auto eval_seed = derive_seed(de.seed, {1});
      const auto samples = sample(vqf::bind(compile_qaoa(pr.h, p_select), qp.gamma, qp.beta),
                                  NoiseModel::noiseless(), cfg.eval_shots, eval_seed);
      nlohmann::json j;
      j["config_hash"] = hash;
      j["transform"] = to_string(out.selected);
      j["p"] = p_select;
      j["seed"] = de.seed;
      j["eval_seed"] = eval_seed;
      j["success_probability"] = success_probability(samples, pr.solutions);
      j["rand"] = pr.rand;
      j["result"] = to_json(result);
      write_file(dir / "trained.json", j.dump(2) + "\n", files);
      return 0;
    });

    stage("sweep", [&] {
      SweepConfig sc;
      sc.noise = cfg.noise;
      sc.train_shots = cfg.train_shots;
      sc.eval_shots = cfg.eval_shots;
      sc.de = cfg.de;
      sc.seed = cfg.seed;
      sc.reuse_params = cfg.reuse_params;
      sc.threads = threads;
      sc.grobner = cfg.grobner;
      out.reports = sweep(cfg.instance_id(), cs, cfg.transforms, cfg.p_list, cfg.levels, sc);
      nlohmann::json j;
      j["config_hash"] = hash;
      j["mode"] = cfg.reuse_params ? "reuse-params" : "retrain";
      j["rows"] = reports_to_json(out.reports);
      write_file(dir / "report.json", j.dump(2) + "\n", files);
      write_file(dir / "report.csv", "# config " + hash + "\n" + reports_to_csv(out.reports), files);
      write_file(dir / "report.tsv", "# config " + hash + "\n" + reports_to_tsv(out.reports), files);
      return 0;
    });
  }

  stage("config", [&] {
    nlohmann::json j;
    j["config_hash"] = hash;
    j["config"] = to_json(cfg);
    write_file(dir / "config.json", j.dump(2) + "\n", files);
    return 0;
  });
  return out;
}

}  // namespace vqf
