#pragma once

// Mixed state of n qubits stored as vec(rho): entry (r, c) lives at index
// r | c << n, so it is a 2n-qubit amplitude vector and a unitary U on qubit q
// acts as U on "qubit" q and conj(U) on "qubit" q + n.

#include "vqf/state_vector.hpp"

#include <Eigen/Core>

#include <cmath>
#include <cstdint>

namespace vqf {

template <typename Scalar = double>
class DensityMatrix {
 public:
  using Complex = std::complex<Scalar>;
  using RealVector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  static constexpr int kMaxQubits = StateVector<Scalar>::kMaxQubits / 2;

  explicit DensityMatrix(int n_qubits) : n_(n_qubits), vec_(check(n_qubits)) {}

  int n_qubits() const noexcept { return n_; }

  Complex operator()(std::uint64_t r, std::uint64_t c) const {
    return vec_.amplitudes()[static_cast<Eigen::Index>(r | (c << n_))];
  }

  Scalar trace() const {
    Scalar t = 0;
    for (std::uint64_t r = 0; r < dim(); ++r) t += (*this)(r, r).real();
    return t;
  }

  RealVector probabilities() const {
    RealVector p(static_cast<Eigen::Index>(dim()));
    for (std::uint64_t r = 0; r < dim(); ++r) p[static_cast<Eigen::Index>(r)] = (*this)(r, r).real();
    return p;
  }

  void apply(const BoundGate& g) {
    BoundGate mirror = g;
    mirror.q0 = g.q0 + n_;
    if (g.q1 >= 0) mirror.q1 = g.q1 + n_;
    if (g.kind == GateKind::RX || g.kind == GateKind::RZ) mirror.angle = -g.angle;
    vec_.apply(g);
    vec_.apply(mirror);
  }

  /// rho -> (1 - lambda) rho + lambda Tr_q(rho) (x) I/2. A Pauli error with
  /// total probability e (X, Y, Z equally likely) is lambda = 4e/3.
  void depolarize(int q, Scalar lambda) {
    for_blocks(q, [&](Complex& a, Complex& b, Complex& o1, Complex& o2) {
      const Complex avg = (a + b) / Scalar(2);
      a = (1 - lambda) * a + lambda * avg;
      b = (1 - lambda) * b + lambda * avg;
      o1 *= (1 - lambda);
      o2 *= (1 - lambda);
    });
  }

  /// Two-qubit analogue; 15 nontrivial Paulis with total probability e is
  /// lambda = 16e/15.
  void depolarize(int q0, int q1, Scalar lambda) {
    auto& v = vec_.amplitudes();
    const std::uint64_t r0 = std::uint64_t{1} << q0, r1 = std::uint64_t{1} << q1;
    const std::uint64_t c0 = r0 << n_, c1 = r1 << n_;
    const std::uint64_t all = r0 | r1 | c0 | c1;
    const std::uint64_t rows[4] = {0, r0, r1, r0 | r1};
    const std::uint64_t cols[4] = {0, c0, c1, c0 | c1};
    const auto size = static_cast<std::uint64_t>(v.size());
    for (std::uint64_t x = 0; x < size; ++x) {
      if (x & all) continue;
      Complex mean = 0;
      for (int k = 0; k < 4; ++k) mean += v[static_cast<Eigen::Index>(x | rows[k] | cols[k])];
      mean /= Scalar(4);
      for (int a = 0; a < 4; ++a) {
        for (int b = 0; b < 4; ++b) {
          auto& e = v[static_cast<Eigen::Index>(x | rows[a] | cols[b])];
          e = (1 - lambda) * e + (a == b ? lambda * mean : Complex(0));
        }
      }
    }
  }

  /// Amplitude damping followed by a Z flip with probability f, in one pass.
  void relax(int q, Scalar gamma, Scalar f) {
    const Scalar k = std::sqrt(1 - gamma) * (1 - 2 * f);
    for_blocks(q, [&](Complex& a, Complex& b, Complex& o1, Complex& o2) {
      a += gamma * b;
      b *= (1 - gamma);
      o1 *= k;
      o2 *= k;
    });
  }

  void amplitude_damp(int q, Scalar gamma) {
    const Scalar k = std::sqrt(1 - gamma);
    for_blocks(q, [&](Complex& a, Complex& b, Complex& o1, Complex& o2) {
      a += gamma * b;
      b *= (1 - gamma);
      o1 *= k;
      o2 *= k;
    });
  }

  /// Z applied with probability f.
  void dephase(int q, Scalar f) {
    for_blocks(q, [&](Complex&, Complex&, Complex& o1, Complex& o2) {
      o1 *= (1 - 2 * f);
      o2 *= (1 - 2 * f);
    });
  }

 private:
  static int check(int n) {
    if (n < 0 || n > kMaxQubits) {
      throw TooManyQubits(std::to_string(n) + " qubits for a density matrix (limit " +
                          std::to_string(kMaxQubits) + ")");
    }
    return 2 * n;
  }

  std::uint64_t dim() const { return std::uint64_t{1} << n_; }

  // f(rho_00, rho_11, rho_10, rho_01) for each 2x2 block on qubit q.
  template <typename F>
  void for_blocks(int q, F&& f) {
    auto& v = vec_.amplitudes();
    const std::uint64_t rb = std::uint64_t{1} << q;
    const std::uint64_t cb = rb << n_;
    const auto size = static_cast<std::uint64_t>(v.size());
    for (std::uint64_t x = 0; x < size; ++x) {
      if (x & (rb | cb)) continue;
      f(v[static_cast<Eigen::Index>(x)], v[static_cast<Eigen::Index>(x | rb | cb)],
        v[static_cast<Eigen::Index>(x | rb)], v[static_cast<Eigen::Index>(x | cb)]);
    }
  }

  int n_;
  StateVector<Scalar> vec_;
};

}  // namespace vqf
