#pragma once
// Dense Hermitian linear algebra over tensor-factored spaces: eigendecomposition,
// support-projected fractional powers, partial trace, partial transpose, and
// overflow-safe power sums. All operations are pure functions of their inputs,
// so operators can be shared read-only across threads.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace qsep {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;

// Tolerances shared across the library.
inline constexpr double kHermitianTol = 1e-12;   // entrywise |M - M^dag|
inline constexpr double kTraceTol = 1e-10;       // |tr(rho) - 1|
inline constexpr double kPsdFloor = 1e-10;       // eigenvalues below -kPsdFloor are rejected
inline constexpr double kSupportTol = 1e-12;     // eigenvalues <= this count as zero
inline constexpr double kSupportLeakTol = 1e-9;  // weight allowed outside a support
inline constexpr double kBoundaryTol = 1e-9;     // |value| below this is a boundary verdict
inline constexpr double kMaxQ = 1e6;             // direct q evaluation cap

struct InvalidInput : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct NumericalFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace detail {

template <typename... Args>
std::string msg(Args&&... args) {
  std::ostringstream os;
  os.precision(17);
  (os << ... << args);
  return os.str();
}

}  // namespace detail

/// Dense complex Hermitian matrix tagged with its tensor-factor dimensions.
struct HermitianOperator {
  std::vector<int> dims;
  Matrix mat;

  int order() const { return static_cast<int>(mat.rows()); }

  // Validates dims and Hermiticity (entrywise, kHermitianTol), then stores the
  // exactly symmetrized matrix. Symmetrization leaves Hermitian input bit-identical.
  static HermitianOperator make(std::vector<int> dims, Matrix m) {
    if (m.rows() != m.cols()) {
      throw InvalidInput(detail::msg("operator matrix is not square: ", m.rows(), "x", m.cols()));
    }
    long prod = 1;
    for (int d : dims) {
      if (d <= 0) throw InvalidInput("factor dimensions must be positive");
      prod *= d;
    }
    if (dims.empty() || prod != m.rows()) {
      throw InvalidInput(detail::msg("dims mismatch: product of factor dimensions ", prod,
                                     " does not equal matrix order ", m.rows()));
    }
    double asym = (m - m.adjoint().eval()).cwiseAbs().maxCoeff();
    if (asym > kHermitianTol) {
      throw InvalidInput(detail::msg("operator is not Hermitian: max asymmetry ", asym));
    }
    HermitianOperator op;
    op.dims = std::move(dims);
    op.mat = 0.5 * (m + m.adjoint().eval());
    return op;
  }

  // For matrices Hermitian by construction (spectral assemblies, lifts,
  // Kronecker products), where the entrywise tolerance of make() would be
  // meaningless for large-norm operators. Checks dims, then symmetrizes.
  static HermitianOperator symmetrized(std::vector<int> dims, Matrix m) {
    long prod = 1;
    for (int d : dims) {
      if (d <= 0) throw InvalidInput("factor dimensions must be positive");
      prod *= d;
    }
    if (dims.empty() || m.rows() != m.cols() || prod != m.rows()) {
      throw InvalidInput("dims mismatch");
    }
    HermitianOperator op;
    op.dims = std::move(dims);
    op.mat = 0.5 * (m + m.adjoint().eval());
    return op;
  }
};

/// Real spectrum sorted descending, with the matching orthonormal eigenbasis
/// when retained (columns follow the eigenvalue order).
struct Spectrum {
  Eigen::VectorXd eigenvalues;
  Matrix eigenvectors;  // 0x0 when not retained

  bool has_vectors() const { return eigenvectors.size() > 0; }

  static Spectrum from_values(Eigen::VectorXd descending) {
    Spectrum s;
    s.eigenvalues = std::move(descending);
    return s;
  }
};

/// Partition of the tensor factors into a nonempty subsystem A and its complement B.
struct BipartiteCut {
  std::vector<int> a_factors;
  std::vector<int> b_factors;

  static BipartiteCut make(std::vector<int> a, std::vector<int> b, int n_factors) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    if (a.empty() || b.empty()) throw InvalidInput("cut sides must both be nonempty");
    std::vector<int> all = a;
    all.insert(all.end(), b.begin(), b.end());
    std::sort(all.begin(), all.end());
    if (static_cast<int>(all.size()) != n_factors) {
      throw InvalidInput(detail::msg("cut does not partition ", n_factors, " factors"));
    }
    for (int f = 0; f < n_factors; ++f) {
      if (all[f] != f) {
        throw InvalidInput(detail::msg("cut is not a disjoint cover of factors 0..", n_factors - 1));
      }
    }
    return BipartiteCut{std::move(a), std::move(b)};
  }

  // First m factors against the remainder.
  static BipartiteCut leading(int m, int n_factors) {
    if (m < 1 || m >= n_factors) {
      throw InvalidInput(detail::msg("leading cut size ", m, " invalid for ", n_factors, " factors"));
    }
    std::vector<int> a(m), b(n_factors - m);
    for (int f = 0; f < m; ++f) a[f] = f;
    for (int f = m; f < n_factors; ++f) b[f - m] = f;
    return BipartiteCut{std::move(a), std::move(b)};
  }
};

inline void validate_cut(const BipartiteCut& cut, const std::vector<int>& dims) {
  BipartiteCut::make(cut.a_factors, cut.b_factors, static_cast<int>(dims.size()));
}

/// Unit-trace Hermitian operator. Construction checks Hermiticity and trace;
/// positive semidefiniteness is enforced spectrally where inputs are untrusted
/// (file loading) and verified as a property in the test suites.
struct DensityMatrix {
  HermitianOperator op;

  static DensityMatrix make(HermitianOperator op) {
    double tr = op.mat.trace().real();
    if (std::abs(tr - 1.0) > kTraceTol) {
      throw InvalidInput(detail::msg("density matrix trace is ", tr, ", expected 1"));
    }
    return DensityMatrix{std::move(op)};
  }

  static DensityMatrix make(std::vector<int> dims, Matrix m) {
    return make(HermitianOperator::make(std::move(dims), std::move(m)));
  }
};

namespace detail {

inline std::vector<long> factor_strides(const std::vector<int>& dims) {
  std::vector<long> s(dims.size());
  long acc = 1;
  for (int f = static_cast<int>(dims.size()) - 1; f >= 0; --f) {
    s[f] = acc;
    acc *= dims[f];
  }
  return s;
}

inline long subset_order(const std::vector<int>& dims, const std::vector<int>& subset) {
  long n = 1;
  for (int f : subset) n *= dims[f];
  return n;
}

// Flat offsets of every configuration of the given factors, enumerated in
// row-major order of the subset (subset must be sorted ascending so the
// enumeration matches the factor order of the reduced space).
inline std::vector<long> subset_offsets(const std::vector<int>& dims, const std::vector<int>& subset) {
  auto strides = factor_strides(dims);
  long count = subset_order(dims, subset);
  std::vector<long> ofs(count);
  std::vector<int> digit(subset.size(), 0);
  for (long i = 0; i < count; ++i) {
    long o = 0;
    for (std::size_t t = 0; t < subset.size(); ++t) o += digit[t] * strides[subset[t]];
    ofs[i] = o;
    for (int t = static_cast<int>(subset.size()) - 1; t >= 0; --t) {
      if (++digit[t] < dims[subset[t]]) break;
      digit[t] = 0;
    }
  }
  return ofs;
}

inline std::vector<int> normalize_subset(const std::vector<int>& subset, int n_factors,
                                         const char* what) {
  if (subset.empty()) throw InvalidInput(detail::msg(what, ": factor set is empty"));
  std::vector<int> s = subset;
  std::sort(s.begin(), s.end());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] < 0 || s[i] >= n_factors) {
      throw InvalidInput(detail::msg(what, ": factor index ", s[i], " out of range"));
    }
    if (i > 0 && s[i] == s[i - 1]) {
      throw InvalidInput(detail::msg(what, ": duplicate factor index ", s[i]));
    }
  }
  return s;
}

inline std::vector<int> complement(const std::vector<int>& sorted_subset, int n_factors) {
  std::vector<int> out;
  std::size_t p = 0;
  for (int f = 0; f < n_factors; ++f) {
    if (p < sorted_subset.size() && sorted_subset[p] == f) {
      ++p;
    } else {
      out.push_back(f);
    }
  }
  return out;
}

}  // namespace detail

/// Full eigendecomposition, eigenvalues sorted descending.
inline Spectrum eig(const HermitianOperator& op, bool with_vectors = true) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(
      op.mat, with_vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw NumericalFailure("eigendecomposition did not converge");
  }
  Spectrum s;
  s.eigenvalues = solver.eigenvalues().reverse();
  if (with_vectors) s.eigenvectors = solver.eigenvectors().rowwise().reverse();
  return s;
}

/// op^alpha on the support: eigenvalues above support_tol are powered, the rest
/// map to zero (pseudo-power), in the original eigenbasis. Rejects inputs that
/// are not positive semidefinite within the floor.
inline HermitianOperator frac_power_on_support(const HermitianOperator& op, double alpha,
                                               double support_tol = kSupportTol) {
  Spectrum s = eig(op);
  double floor = std::max(support_tol, kPsdFloor);
  double min_e = s.eigenvalues(s.eigenvalues.size() - 1);
  if (min_e < -floor) {
    throw NumericalFailure(detail::msg("operator is not PSD: min eigenvalue ", min_e));
  }
  Eigen::VectorXd powered(s.eigenvalues.size());
  for (Eigen::Index i = 0; i < s.eigenvalues.size(); ++i) {
    double e = s.eigenvalues(i);
    powered(i) = (e > support_tol) ? std::pow(e, alpha) : 0.0;
  }
  Matrix m = s.eigenvectors * powered.asDiagonal() * s.eigenvectors.adjoint();
  return HermitianOperator::symmetrized(op.dims, std::move(m));
}

/// Trace out every factor not in `keep`; result lives on the kept factors in
/// their original order.
inline HermitianOperator partial_trace(const HermitianOperator& op, const std::vector<int>& keep) {
  int F = static_cast<int>(op.dims.size());
  auto kept = detail::normalize_subset(keep, F, "partial_trace");
  auto traced = detail::complement(kept, F);
  if (traced.empty()) return op;
  auto keep_ofs = detail::subset_offsets(op.dims, kept);
  auto tr_ofs = detail::subset_offsets(op.dims, traced);
  long dk = static_cast<long>(keep_ofs.size());
  Matrix out = Matrix::Zero(dk, dk);
  for (long r = 0; r < dk; ++r) {
    for (long c = 0; c < dk; ++c) {
      Complex acc = 0.0;
      for (long t : tr_ofs) acc += op.mat(keep_ofs[r] + t, keep_ofs[c] + t);
      out(r, c) = acc;
    }
  }
  std::vector<int> out_dims;
  for (int f : kept) out_dims.push_back(op.dims[f]);
  return HermitianOperator::symmetrized(std::move(out_dims), std::move(out));
}

inline DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<int>& keep) {
  return DensityMatrix::make(partial_trace(rho.op, keep));
}

/// Transpose applied to the A-side indices only. Hermiticity and trace are
/// preserved; the result may be indefinite.
inline HermitianOperator partial_transpose(const DensityMatrix& rho, const BipartiteCut& cut) {
  validate_cut(cut, rho.op.dims);
  auto a_ofs = detail::subset_offsets(rho.op.dims, cut.a_factors);
  auto b_ofs = detail::subset_offsets(rho.op.dims, cut.b_factors);
  Matrix out(rho.op.mat.rows(), rho.op.mat.cols());
  for (long ia = 0; ia < static_cast<long>(a_ofs.size()); ++ia) {
    for (long ja = 0; ja < static_cast<long>(a_ofs.size()); ++ja) {
      for (long ib = 0; ib < static_cast<long>(b_ofs.size()); ++ib) {
        for (long jb = 0; jb < static_cast<long>(b_ofs.size()); ++jb) {
          out(a_ofs[ja] + b_ofs[ib], a_ofs[ia] + b_ofs[jb]) =
              rho.op.mat(a_ofs[ia] + b_ofs[ib], a_ofs[ja] + b_ofs[jb]);
        }
      }
    }
  }
  HermitianOperator res;
  res.dims = rho.op.dims;
  res.mat = std::move(out);  // exact entry moves, no symmetrization needed
  return res;
}

/// Embed an operator on the `keep` factors into the full space, acting as the
/// identity on the complement: the I_A (x) rho_B construction for any factor split.
inline HermitianOperator lift_with_identity(const HermitianOperator& on_keep,
                                            const std::vector<int>& keep,
                                            const std::vector<int>& dims) {
  int F = static_cast<int>(dims.size());
  auto kept = detail::normalize_subset(keep, F, "lift_with_identity");
  if (detail::subset_order(dims, kept) != on_keep.order()) {
    throw InvalidInput("lift_with_identity: operator order does not match kept factors");
  }
  auto rest = detail::complement(kept, F);
  auto keep_ofs = detail::subset_offsets(dims, kept);
  std::vector<long> rest_ofs = rest.empty() ? std::vector<long>{0}
                                            : detail::subset_offsets(dims, rest);
  long D = 1;
  for (int d : dims) D *= d;
  Matrix out = Matrix::Zero(D, D);
  for (long r : rest_ofs) {
    for (long bi = 0; bi < static_cast<long>(keep_ofs.size()); ++bi) {
      for (long bj = 0; bj < static_cast<long>(keep_ofs.size()); ++bj) {
        out(r + keep_ofs[bi], r + keep_ofs[bj]) = on_keep.mat(bi, bj);
      }
    }
  }
  return HermitianOperator::symmetrized(dims, std::move(out));
}

inline HermitianOperator kron(const HermitianOperator& a, const HermitianOperator& b) {
  long na = a.order(), nb = b.order();
  Matrix out(na * nb, na * nb);
  for (long i = 0; i < na; ++i) {
    for (long j = 0; j < na; ++j) {
      out.block(i * nb, j * nb, nb, nb) = a.mat(i, j) * b.mat;
    }
  }
  std::vector<int> dims = a.dims;
  dims.insert(dims.end(), b.dims.begin(), b.dims.end());
  return HermitianOperator::symmetrized(std::move(dims), std::move(out));
}

/// log of sum_i lambda_i^q over the positive eigenvalues, computed with
/// max-factoring so intermediates neither overflow nor underflow for q up to
/// kMaxQ. Returns -inf when no eigenvalue exceeds zero.
inline double log_power_sum(const Eigen::VectorXd& eigenvalues, double q) {
  if (!(q > 0.0)) throw InvalidInput(detail::msg("power sum requires q > 0, got ", q));
  if (q > kMaxQ) {
    throw InvalidInput(detail::msg("q = ", q, " exceeds the direct-evaluation cap ", kMaxQ,
                                   "; use the q->infinity limit operations"));
  }
  std::vector<double> logs;
  logs.reserve(eigenvalues.size());
  for (Eigen::Index i = 0; i < eigenvalues.size(); ++i) {
    double e = eigenvalues(i);
    if (e < -kPsdFloor) {
      throw InvalidInput(detail::msg("power sum over a negative eigenvalue ", e));
    }
    if (e > 0.0) logs.push_back(q * std::log(e));
  }
  if (logs.empty()) return -std::numeric_limits<double>::infinity();
  double m = *std::max_element(logs.begin(), logs.end());
  double s = 0.0;
  for (double t : logs) s += std::exp(t - m);
  return m + std::log(s);
}

inline double log_power_sum(const Spectrum& spectrum, double q) {
  return log_power_sum(spectrum.eigenvalues, q);
}

/// sum_i lambda_i^q; zero eigenvalues contribute 0. May round to +inf only when
/// the true value exceeds double range (the log-domain value stays finite).
inline double power_sum(const Spectrum& spectrum, double q) {
  double lp = log_power_sum(spectrum, q);
  return std::isinf(lp) && lp < 0 ? 0.0 : std::exp(lp);
}

}  // namespace qsep
