#pragma once
// Dicke states, the symmetric (maximal multiplicity) subspace, and the
// branching rule that splits Dicke states across a bipartition. Bitstring
// convention: factor 0 is the leftmost tensor slot, index = sum bit_i * 2^(N-1-i).

#include <bit>
#include <cmath>
#include <cstdint>

#include "qsep/linalg.hpp"

namespace qsep {

inline constexpr int kMaxFullSpaceQubits = 20;

inline double log_binomial(int n, int k) {
  if (k < 0 || k > n) return -std::numeric_limits<double>::infinity();
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

inline double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  return std::round(std::exp(log_binomial(n, k)));
}

/// |D_k^N>: the symmetric N-qubit state with k excitations, amplitude
/// 1/sqrt(C(N,k)) on every weight-k bitstring.
inline Eigen::VectorXd dicke_state(int N, int k) {
  if (N < 1 || N > kMaxFullSpaceQubits) {
    throw InvalidInput(detail::msg("full-space construction supports 1..", kMaxFullSpaceQubits,
                                   " qubits, got ", N));
  }
  if (k < 0 || k > N) {
    throw InvalidInput(detail::msg("Dicke excitation number ", k, " out of range 0..", N));
  }
  std::uint64_t dim = 1ull << N;
  Eigen::VectorXd v = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dim));
  double amp = 1.0 / std::sqrt(binomial(N, k));
  for (std::uint64_t i = 0; i < dim; ++i) {
    if (std::popcount(i) == k) v(static_cast<Eigen::Index>(i)) = amp;
  }
  return v;
}

/// Columns k = 0..N are the Dicke states of N qubits (2^N x (N+1), real).
inline Eigen::MatrixXd dicke_matrix(int N) {
  Eigen::MatrixXd m(static_cast<Eigen::Index>(1ull << N), N + 1);
  for (int k = 0; k <= N; ++k) m.col(k) = dicke_state(N, k);
  return m;
}

/// The Dicke basis of the symmetric subspace of N qubits.
struct DickeBasis {
  int n_qubits = 0;
  Eigen::MatrixXd vectors;  // column k = |D_k^N>

  static DickeBasis make(int N) { return DickeBasis{N, dicke_matrix(N)}; }
};

inline Eigen::VectorXd ghz_state(int N) {
  if (N < 2) throw InvalidInput("GHZ state needs at least 2 qubits");
  Eigen::VectorXd v = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(1ull << N));
  v(0) = v(v.size() - 1) = 1.0 / std::sqrt(2.0);
  return v;
}

/// Equal superposition of the W state and its obverse, (|D_1^N> + |D_{N-1}^N>)/sqrt(2).
inline Eigen::VectorXd wwbar_state(int N) {
  if (N < 3) throw InvalidInput("W + obverse-W superposition needs at least 3 qubits");
  Eigen::VectorXd w = dicke_state(N, 1);
  Eigen::VectorXd wbar = dicke_state(N, N - 1);
  if (std::abs(w.dot(wbar)) > 1e-12) {
    throw NumericalFailure("W and obverse W are not orthogonal");  // distinct weights, cannot happen
  }
  return (w + wbar) / std::sqrt(2.0);
}

/// Branching coefficient c(k,j) = sqrt(C(m,j) C(N-m,k-j) / C(N,k)):
/// |D_k^N> = sum_j c(k,j) |D_j^m> |D_{k-j}^{N-m}>. Evaluated in the log domain
/// so it stays exact for N far beyond factorial range.
inline double branching_coefficient(int N, int m, int k, int j) {
  if (j < 0 || j > m || k - j < 0 || k - j > N - m) return 0.0;
  return std::exp(0.5 * (log_binomial(m, j) + log_binomial(N - m, k - j) - log_binomial(N, k)));
}

/// Dicke states of N qubits written in the (m+1)(N-m+1)-dimensional
/// Sym(m) (x) Sym(N-m) coordinates; column k = |D_k^N>. Orthonormal columns.
inline Eigen::MatrixXd compressed_dicke_matrix(int N, int m) {
  if (m < 1 || m > N - 1) {
    throw InvalidInput(detail::msg("split size ", m, " invalid for ", N, " qubits"));
  }
  int da = m + 1, db = N - m + 1;
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(da) * db, N + 1);
  for (int k = 0; k <= N; ++k) {
    for (int j = 0; j <= m; ++j) {
      double c = branching_coefficient(N, m, k, j);
      if (c != 0.0) out(j * db + (k - j), k) = c;
    }
  }
  return out;
}

}  // namespace qsep
