#pragma once

#include "vqf/circuit.hpp"
#include "vqf/errors.hpp"

#include <Eigen/Core>

#include <cmath>
#include <complex>
#include <cstdint>

namespace vqf {

enum class Pauli : std::uint8_t { I, X, Y, Z };

/// Dense n-qubit state. Basis index bit k is qubit k.
template <typename Scalar = double>
class StateVector {
 public:
  using Complex = std::complex<Scalar>;
  using Vector = Eigen::Matrix<Complex, Eigen::Dynamic, 1>;
  using RealVector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  static constexpr int kMaxQubits = 24;

  explicit StateVector(int n_qubits) : n_(n_qubits) {
    if (n_qubits < 0 || n_qubits > kMaxQubits) {
      throw TooManyQubits(std::to_string(n_qubits) + " qubits (limit " + std::to_string(kMaxQubits) + ")");
    }
    amp_ = Vector::Zero(Eigen::Index{1} << n_qubits);
    amp_[0] = Complex(1);
  }

  int n_qubits() const noexcept { return n_; }
  Eigen::Index dim() const noexcept { return amp_.size(); }
  const Vector& amplitudes() const noexcept { return amp_; }
  Vector& amplitudes() noexcept { return amp_; }

  Scalar norm() const { return amp_.norm(); }
  void normalize() { amp_ /= amp_.norm(); }
  RealVector probabilities() const { return amp_.cwiseAbs2(); }

  void apply(const BoundGate& g) {
    switch (g.kind) {
      case GateKind::H:
        apply_h(g.q0);
        break;
      case GateKind::RX:
        apply_rx(g.q0, static_cast<Scalar>(g.angle));
        break;
      case GateKind::RZ:
        apply_rz(g.q0, static_cast<Scalar>(g.angle));
        break;
      case GateKind::CNOT:
        apply_cnot(g.q0, g.q1);
        break;
    }
  }

  void apply_h(int q) {
    const Scalar s = Scalar(1) / std::sqrt(Scalar(2));
    for_pairs(q, [&](Complex& a0, Complex& a1) {
      const Complex x = a0;
      a0 = s * (x + a1);
      a1 = s * (x - a1);
    });
  }

  void apply_rx(int q, Scalar theta) {
    const Scalar c = std::cos(theta / 2);
    const Complex ms(0, -std::sin(theta / 2));
    for_pairs(q, [&](Complex& a0, Complex& a1) {
      const Complex x = a0;
      a0 = c * x + ms * a1;
      a1 = ms * x + c * a1;
    });
  }

  void apply_rz(int q, Scalar theta) {
    const Complex e0 = std::polar(Scalar(1), -theta / 2);
    const Complex e1 = std::polar(Scalar(1), theta / 2);
    for_pairs(q, [&](Complex& a0, Complex& a1) {
      a0 *= e0;
      a1 *= e1;
    });
  }

  void apply_cnot(int control, int target) {
    const std::uint64_t cbit = std::uint64_t{1} << control;
    for_pairs(target, [&](Complex& a0, Complex& a1, std::uint64_t index) {
      if (index & cbit) std::swap(a0, a1);
    });
  }

  void apply_pauli(int q, Pauli p) {
    switch (p) {
      case Pauli::I:
        break;
      case Pauli::X:
        for_pairs(q, [](Complex& a0, Complex& a1) { std::swap(a0, a1); });
        break;
      case Pauli::Y:
        // Y = [[0, -i], [i, 0]]
        for_pairs(q, [](Complex& a0, Complex& a1) {
          const Complex x = a0;
          a0 = Complex(0, -1) * a1;
          a1 = Complex(0, 1) * x;
        });
        break;
      case Pauli::Z:
        for_pairs(q, [](Complex&, Complex& a1) { a1 = -a1; });
        break;
    }
  }

  /// Probability of finding qubit q in |1>.
  Scalar excited_population(int q) const {
    Scalar s = 0;
    const std::uint64_t bit = std::uint64_t{1} << q;
    for (Eigen::Index i = 0; i < amp_.size(); ++i) {
      if (static_cast<std::uint64_t>(i) & bit) s += std::norm(amp_[i]);
    }
    return s;
  }

  /// Amplitude-damping no-jump operator diag(1, sqrt(1 - gamma)); not renormalized.
  void damp(int q, Scalar gamma) {
    const Scalar k = std::sqrt(Scalar(1) - gamma);
    for_pairs(q, [&](Complex&, Complex& a1) { a1 *= k; });
  }

  /// Lowering jump |1> -> |0>; not renormalized.
  void lower(int q) {
    for_pairs(q, [](Complex& a0, Complex& a1) {
      a0 = a1;
      a1 = Complex(0);
    });
  }

 private:
  template <typename F>
  void for_pairs(int q, F&& f) {
    const std::uint64_t stride = std::uint64_t{1} << q;
    const auto dim = static_cast<std::uint64_t>(amp_.size());
    for (std::uint64_t base = 0; base < dim; base += 2 * stride) {
      for (std::uint64_t i = base; i < base + stride; ++i) {
        if constexpr (std::is_invocable_v<F, Complex&, Complex&, std::uint64_t>) {
          f(amp_[static_cast<Eigen::Index>(i)], amp_[static_cast<Eigen::Index>(i + stride)], i);
        } else {
          f(amp_[static_cast<Eigen::Index>(i)], amp_[static_cast<Eigen::Index>(i + stride)]);
        }
      }
    }
  }

  int n_;
  Vector amp_;
};

}  // namespace vqf
