#include "vqf/hamiltonian.hpp"

#include "vqf/errors.hpp"

#include <algorithm>
#include <bit>

namespace vqf {

int Hamiltonian::locality() const {
  int w = 0;
  for (const auto& t : terms) w = std::max(w, t.weight());
  return w;
}

int Hamiltonian::qubit_of(const Var& v) const {
  auto it = std::find(qubit_vars.begin(), qubit_vars.end(), v);
  return it == qubit_vars.end() ? -1 : static_cast<int>(it - qubit_vars.begin());
}

double Hamiltonian::energy(std::uint64_t basis) const {
  double e = offset;
  for (const auto& t : terms) {
    std::uint64_t mask = 0;
    for (int q : t.qubits) mask |= std::uint64_t{1} << q;
    e += (std::popcount(basis & mask) % 2 == 0) ? t.coeff : -t.coeff;
  }
  return e;
}

Eigen::VectorXd Hamiltonian::diagonal() const {
  const int n = n_qubits();
  if (n > 30) throw TooManyQubits("diagonal of a " + std::to_string(n) + "-qubit Hamiltonian");
  const Eigen::Index dim = Eigen::Index{1} << n;
  Eigen::VectorXd d = Eigen::VectorXd::Constant(dim, offset);
  for (const auto& t : terms) {
    std::uint64_t mask = 0;
    for (int q : t.qubits) mask |= std::uint64_t{1} << q;
    for (Eigen::Index x = 0; x < dim; ++x) {
      d[x] += (std::popcount(static_cast<std::uint64_t>(x) & mask) % 2 == 0) ? t.coeff : -t.coeff;
    }
  }
  return d;
}

nlohmann::json to_json(const Hamiltonian& h) {
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& t : h.terms) terms.push_back({{"coeff", t.coeff}, {"qubits", t.qubits}});
  nlohmann::json var_map = nlohmann::json::object();
  for (std::size_t k = 0; k < h.qubit_vars.size(); ++k) var_map[h.qubit_vars[k].name()] = k;
  return {{"offset", h.offset}, {"terms", terms}, {"var_map", var_map}};
}

Hamiltonian hamiltonian_from_json(const nlohmann::json& j) {
  Hamiltonian h;
  try {
    h.offset = j.at("offset").get<double>();
    const auto& vm = j.at("var_map");
    h.qubit_vars.resize(vm.size());
    std::vector<bool> seen(vm.size(), false);
    for (const auto& [name, idx] : vm.items()) {
      const auto k = idx.get<std::size_t>();
      if (k >= vm.size() || seen[k]) throw Error("var_map is not a bijection onto 0..n-1");
      seen[k] = true;
      h.qubit_vars[k] = Var::named(name);
    }
    for (const auto& t : j.at("terms")) {
      PauliZTerm term{t.at("coeff").get<double>(), t.at("qubits").get<std::vector<int>>()};
      std::sort(term.qubits.begin(), term.qubits.end());
      if (term.qubits.empty() || std::adjacent_find(term.qubits.begin(), term.qubits.end()) != term.qubits.end()) {
        throw Error("term qubit sets must be nonempty and duplicate-free");
      }
      if (term.qubits.front() < 0 || term.qubits.back() >= h.n_qubits()) {
        throw Error("term qubit index out of range");
      }
      h.terms.push_back(std::move(term));
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("malformed Hamiltonian JSON: ") + e.what());
  }
  std::sort(h.terms.begin(), h.terms.end(), [](const PauliZTerm& a, const PauliZTerm& b) {
    if (a.weight() != b.weight()) return a.weight() < b.weight();
    return a.qubits < b.qubits;
  });
  return h;
}

}  // namespace vqf
