#pragma once
// Constructors for every one-parameter state family handled here, in both the
// full computational-basis representation and a compressed symmetric-sector
// representation for bipartite cuts of permutation-symmetric states, plus the
// state-file format.

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <memory>
#include <utility>

#include <json.hpp>

#include "qsep/dicke.hpp"
#include "qsep/linalg.hpp"

namespace qsep {

enum class FamilyKind {
  NoisyW,
  NoisyGHZ,
  NoisyWWbar,
  NoisySymmetricCustom,
  NoisyNonSymmetric,
  NoisyQudit,
  IsotropicQutrit,
  QubitQutritX,
};

inline const char* family_kind_name(FamilyKind k) {
  switch (k) {
    case FamilyKind::NoisyW: return "noisy-w";
    case FamilyKind::NoisyGHZ: return "noisy-ghz";
    case FamilyKind::NoisyWWbar: return "noisy-wwbar";
    case FamilyKind::NoisySymmetricCustom: return "noisy-symmetric";
    case FamilyKind::NoisyNonSymmetric: return "noisy-nonsymmetric";
    case FamilyKind::NoisyQudit: return "noisy-qudit";
    case FamilyKind::IsotropicQutrit: return "isotropic-qutrit";
    case FamilyKind::QubitQutritX: return "qubit-qutrit-x";
  }
  return "unknown";
}

/// A named map x -> density matrix on a fixed factor layout. Evaluators are
/// referentially transparent and safe for concurrent calls.
struct StateFamily {
  FamilyKind kind = FamilyKind::NoisySymmetricCustom;
  std::string name;
  std::vector<int> dims;
  double x_min = 0.0;
  double x_max = 1.0;
  std::function<DensityMatrix(double)> evaluator;

  // Set for symmetric-subspace families: qubit count and the Dicke coefficients
  // of the pure part. Enables the compressed representation.
  int n_qubits = 0;
  Eigen::VectorXcd dicke_coeffs;

  bool symmetric() const { return dicke_coeffs.size() > 0; }

  DensityMatrix operator()(double x) const {
    if (x < x_min - 1e-12 || x > x_max + 1e-12) {
      throw InvalidInput(detail::msg("x = ", x, " outside the family domain [", x_min, ", ",
                                     x_max, "]"));
    }
    return evaluator(x);
  }
};

namespace detail {

inline StateFamily noisy_mix_family(FamilyKind kind, std::string name, std::vector<int> dims,
                                    double noise_norm, Matrix noise_part, Matrix pure_part) {
  StateFamily fam;
  fam.kind = kind;
  fam.name = std::move(name);
  fam.dims = dims;
  auto noise = std::make_shared<Matrix>(std::move(noise_part));
  auto pure = std::make_shared<Matrix>(std::move(pure_part));
  fam.evaluator = [dims, noise_norm, noise, pure](double x) {
    Matrix m = ((1.0 - x) / noise_norm) * (*noise) + x * (*pure);
    return DensityMatrix::make(dims, std::move(m));
  };
  return fam;
}

}  // namespace detail

/// x -> (1-x)/(N+1) P_N + x |phi><phi| with P_N the symmetric-subspace projector.
/// phi is given either as N+1 Dicke coefficients or as a full 2^N vector, which
/// must lie in the symmetric subspace (projection residual below 1e-10).
inline StateFamily symmetric_noisy_family(int N, const Eigen::VectorXcd& phi,
                                          FamilyKind kind = FamilyKind::NoisySymmetricCustom,
                                          std::string name = "") {
  if (N < 2) throw InvalidInput("symmetric noisy family needs at least 2 qubits");
  Eigen::MatrixXd basis = dicke_matrix(N);
  Eigen::VectorXcd coeffs;
  if (phi.size() == N + 1) {
    coeffs = phi;
  } else if (phi.size() == basis.rows()) {
    coeffs = basis.transpose().cast<Complex>() * phi;
    double residual = (phi - basis.cast<Complex>() * coeffs).norm();
    if (residual >= 1e-10) {
      throw InvalidInput(detail::msg("pure state is not in the symmetric subspace: ",
                                     "projection residual ", residual));
    }
  } else {
    throw InvalidInput(detail::msg("pure state must have ", N + 1, " Dicke coefficients or ",
                                   basis.rows(), " amplitudes, got ", phi.size()));
  }
  double norm = coeffs.norm();
  if (std::abs(norm - 1.0) > 1e-10) {
    throw InvalidInput(detail::msg("pure state is not normalized: |phi| = ", norm));
  }

  Eigen::VectorXcd full = basis.cast<Complex>() * coeffs;
  Matrix projector = (basis * basis.transpose()).cast<Complex>();
  Matrix pure = full * full.adjoint();
  auto fam = detail::noisy_mix_family(kind, name.empty() ? family_kind_name(kind) : std::move(name),
                                      std::vector<int>(N, 2), N + 1.0, std::move(projector),
                                      std::move(pure));
  fam.n_qubits = N;
  fam.dicke_coeffs = coeffs;
  return fam;
}

inline StateFamily noisy_w_family(int N) {
  Eigen::VectorXcd c = Eigen::VectorXcd::Zero(N + 1);
  c(1) = 1.0;
  return symmetric_noisy_family(N, c, FamilyKind::NoisyW, detail::msg("noisy-w N=", N));
}

inline StateFamily noisy_ghz_family(int N) {
  Eigen::VectorXcd c = Eigen::VectorXcd::Zero(N + 1);
  c(0) = c(N) = 1.0 / std::sqrt(2.0);
  return symmetric_noisy_family(N, c, FamilyKind::NoisyGHZ, detail::msg("noisy-ghz N=", N));
}

inline StateFamily noisy_wwbar_family(int N) {
  if (N < 3) throw InvalidInput("W + obverse-W family needs at least 3 qubits");
  Eigen::VectorXcd c = Eigen::VectorXcd::Zero(N + 1);
  c(1) = c(N - 1) = 1.0 / std::sqrt(2.0);
  return symmetric_noisy_family(N, c, FamilyKind::NoisyWWbar, detail::msg("noisy-wwbar N=", N));
}

/// x -> (1-x)/2^N I + x |psi><psi| on the full N-qubit space.
inline StateFamily nonsymmetric_noisy_family(int N, const Eigen::VectorXcd& psi,
                                             std::string name = "") {
  if (N < 1 || N > kMaxFullSpaceQubits) throw InvalidInput("unsupported qubit count");
  long dim = 1l << N;
  if (psi.size() != dim) {
    throw InvalidInput(detail::msg("pure state has ", psi.size(), " amplitudes, expected ", dim));
  }
  if (std::abs(psi.norm() - 1.0) > 1e-10) {
    throw InvalidInput(detail::msg("pure state is not normalized: |psi| = ", psi.norm()));
  }
  return detail::noisy_mix_family(FamilyKind::NoisyNonSymmetric,
                                  name.empty() ? detail::msg("noisy-nonsymmetric N=", N)
                                               : std::move(name),
                                  std::vector<int>(N, 2), static_cast<double>(dim),
                                  Matrix::Identity(dim, dim), psi * psi.adjoint());
}

/// x -> (1-x)/d^N I + x |psi><psi| on N qudits of local dimension d.
inline StateFamily qudit_noisy_family(int N, int d, const Eigen::VectorXcd& psi) {
  if (N < 1 || d < 2) throw InvalidInput("qudit family needs N >= 1 factors of dimension >= 2");
  double dimf = std::pow(static_cast<double>(d), N);
  if (dimf > 1e6) throw InvalidInput("qudit family dimension too large for dense storage");
  long dim = static_cast<long>(std::llround(dimf));
  if (psi.size() != dim) {
    throw InvalidInput(detail::msg("pure state has ", psi.size(), " amplitudes, expected ", dim));
  }
  if (std::abs(psi.norm() - 1.0) > 1e-10) {
    throw InvalidInput(detail::msg("pure state is not normalized: |psi| = ", psi.norm()));
  }
  return detail::noisy_mix_family(FamilyKind::NoisyQudit,
                                  detail::msg("noisy-qudit N=", N, " d=", d),
                                  std::vector<int>(N, d), static_cast<double>(dim),
                                  Matrix::Identity(dim, dim), psi * psi.adjoint());
}

/// The GHZ-like qudit state (|00..0> + |11..1> + ... )/sqrt(d).
inline Eigen::VectorXcd qudit_ghz_vector(int N, int d) {
  double dimf = std::pow(static_cast<double>(d), N);
  if (dimf > 1e6) throw InvalidInput("qudit dimension too large");
  long dim = static_cast<long>(std::llround(dimf));
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(dim);
  long stride = (dim - 1) / (d - 1);  // index of |ii..i> advances by 1 + d + ... + d^{N-1}
  for (int i = 0; i < d; ++i) v(i * stride) = 1.0 / std::sqrt(static_cast<double>(d));
  return v;
}

/// Two-qutrit isotropic family x -> (1-x)/8 I_9 + (9x-1)/8 |Phi><Phi| with
/// |Phi> = (|00> + |11> + |22>)/sqrt(3). Both marginals are I_3/3 for all x.
inline StateFamily isotropic_qutrit_family() {
  Eigen::VectorXcd phi = qudit_ghz_vector(2, 3);
  Matrix pure = phi * phi.adjoint();
  StateFamily fam;
  fam.kind = FamilyKind::IsotropicQutrit;
  fam.name = "isotropic-qutrit";
  fam.dims = {3, 3};
  auto p = std::make_shared<Matrix>(std::move(pure));
  fam.evaluator = [p](double x) {
    Matrix m = ((1.0 - x) / 8.0) * Matrix::Identity(9, 9) + ((9.0 * x - 1.0) / 8.0) * (*p);
    return DensityMatrix::make({3, 3}, std::move(m));
  };
  return fam;
}

/// Qubit-qutrit X family on x in [0, 1/4]: diagonal (2,1,1,1,1,2)/8 with
/// anti-diagonal couplings x between |00> and |12>.
inline StateFamily qubit_qutrit_x_family() {
  StateFamily fam;
  fam.kind = FamilyKind::QubitQutritX;
  fam.name = "qubit-qutrit-x";
  fam.dims = {2, 3};
  fam.x_max = 0.25;
  fam.evaluator = [](double x) {
    Matrix m = Matrix::Zero(6, 6);
    m.diagonal() << 2, 1, 1, 1, 1, 2;
    m /= 8.0;
    m(0, 5) = m(5, 0) = x;
    return DensityMatrix::make({2, 3}, std::move(m));
  };
  return fam;
}

/// A symmetric state on the Sym(m) (x) Sym(N-m) coordinates of an m : N-m cut,
/// together with the branching coefficients that embed it back into 2^N dimensions.
struct SymmetricCutRepresentation {
  int n_qubits = 0;
  int m_split = 0;
  DensityMatrix matrix;        // factor dims (m+1, N-m+1)
  Eigen::MatrixXd branching;   // (N+1) x (m+1), entry (k, j) = c(k, j)

  DensityMatrix embed_full() const {
    Eigen::MatrixXd va = dicke_matrix(m_split);
    Eigen::MatrixXd vb = dicke_matrix(n_qubits - m_split);
    long ra = va.rows(), rb = vb.rows();
    Eigen::MatrixXd v(ra * rb, va.cols() * vb.cols());
    for (long i = 0; i < ra; ++i) {
      for (long j = 0; j < va.cols(); ++j) {
        v.block(i * rb, j * vb.cols(), rb, vb.cols()) = va(i, j) * vb;
      }
    }
    Matrix full = v.cast<Complex>() * matrix.op.mat * v.transpose().cast<Complex>();
    return DensityMatrix::make(std::vector<int>(n_qubits, 2), std::move(full));
  }
};

/// Rewrite a symmetric family on the compressed coordinates of the m : N-m cut.
/// The compressed state has factor dims (m+1, N-m+1); cut side A is factor 0.
/// Valid for any N (no 2^N object is ever built).
inline StateFamily compress_symmetric(int N, const Eigen::VectorXcd& dicke_coeffs, int m_split,
                                      FamilyKind kind = FamilyKind::NoisySymmetricCustom,
                                      std::string name = "") {
  if (N < 2) throw InvalidInput("compression needs at least 2 qubits");
  if (m_split < 1 || m_split > N - 1) {
    throw InvalidInput(detail::msg("split size ", m_split, " invalid for ", N, " qubits"));
  }
  if (dicke_coeffs.size() != N + 1) {
    throw InvalidInput(detail::msg("expected ", N + 1, " Dicke coefficients, got ",
                                   dicke_coeffs.size()));
  }
  if (std::abs(dicke_coeffs.norm() - 1.0) > 1e-10) {
    throw InvalidInput("pure state is not normalized");
  }
  Eigen::MatrixXd basis = compressed_dicke_matrix(N, m_split);
  Matrix projector = (basis * basis.transpose()).cast<Complex>();
  Eigen::VectorXcd phi = basis.cast<Complex>() * dicke_coeffs;
  std::vector<int> dims{m_split + 1, N - m_split + 1};
  auto fam = detail::noisy_mix_family(
      kind,
      name.empty() ? detail::msg("compressed N=", N, " m=", m_split) : std::move(name),
      dims, N + 1.0, std::move(projector), phi * phi.adjoint());
  fam.n_qubits = N;
  fam.dicke_coeffs = dicke_coeffs;
  return fam;
}

inline StateFamily compress_symmetric(const StateFamily& family, int m_split) {
  if (!family.symmetric()) {
    throw InvalidInput(detail::msg("family '", family.name,
                                   "' has no symmetric-subspace representation"));
  }
  if (family.dims.size() != static_cast<std::size_t>(family.n_qubits)) {
    throw InvalidInput("family is already in compressed coordinates");
  }
  return compress_symmetric(family.n_qubits, family.dicke_coeffs, m_split, family.kind,
                            family.name + detail::msg(" [", m_split, ":", family.n_qubits - m_split,
                                                      " compressed]"));
}

inline SymmetricCutRepresentation symmetric_cut_representation(const StateFamily& family,
                                                               int m_split, double x) {
  StateFamily comp = compress_symmetric(family, m_split);
  int N = family.n_qubits;
  Eigen::MatrixXd branching(N + 1, m_split + 1);
  for (int k = 0; k <= N; ++k) {
    for (int j = 0; j <= m_split; ++j) branching(k, j) = branching_coefficient(N, m_split, k, j);
  }
  return SymmetricCutRepresentation{N, m_split, comp(x), std::move(branching)};
}

// ---------------------------------------------------------------------------
// State files: {"dims": [...], "matrix": [[[re, im], ...], ...]}, row-major,
// 17 significant digits. Readers enforce the Hermiticity/trace/PSD invariants.
// ---------------------------------------------------------------------------

namespace detail {

inline std::string format_full_double(double v) {
  char buf[40];
  auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

}  // namespace detail

inline void save_state(const DensityMatrix& rho, const std::string& path) {
  std::filesystem::path target(path);
  std::filesystem::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InvalidInput(detail::msg("cannot open '", tmp.string(), "' for writing"));
    out << "{\"dims\": [";
    for (std::size_t f = 0; f < rho.op.dims.size(); ++f) {
      out << (f ? ", " : "") << rho.op.dims[f];
    }
    out << "],\n\"matrix\": [\n";
    long n = rho.op.order();
    for (long r = 0; r < n; ++r) {
      out << (r ? ",\n" : "") << "[";
      for (long c = 0; c < n; ++c) {
        const Complex& z = rho.op.mat(r, c);
        out << (c ? ", " : "") << "[" << detail::format_full_double(z.real()) << ", "
            << detail::format_full_double(z.imag()) << "]";
      }
      out << "]";
    }
    out << "\n]}\n";
    if (!out.good()) throw NumericalFailure(detail::msg("write to '", tmp.string(), "' failed"));
  }
  std::filesystem::rename(tmp, target);
}

inline DensityMatrix load_state(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput(detail::msg("cannot open state file '", path, "'"));
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(detail::msg("malformed state file '", path, "': ", e.what()));
  }
  if (!doc.is_object() || !doc.contains("dims") || !doc.contains("matrix")) {
    throw InvalidInput(detail::msg("malformed state file '", path,
                                   "': expected an object with 'dims' and 'matrix'"));
  }
  std::vector<int> dims;
  try {
    dims = doc["dims"].get<std::vector<int>>();
  } catch (const nlohmann::json::exception&) {
    throw InvalidInput(detail::msg("malformed state file '", path, "': bad 'dims' array"));
  }
  long order = 1;
  for (int d : dims) {
    if (d <= 0) throw InvalidInput(detail::msg("dims mismatch in '", path, "': nonpositive factor"));
    order *= d;
  }
  const auto& rows = doc["matrix"];
  if (!rows.is_array() || static_cast<long>(rows.size()) != order) {
    throw InvalidInput(detail::msg("dims mismatch in '", path, "': matrix has ", rows.size(),
                                   " rows, dims imply ", order));
  }
  Matrix m(order, order);
  for (long r = 0; r < order; ++r) {
    const auto& row = rows[r];
    if (!row.is_array() || static_cast<long>(row.size()) != order) {
      throw InvalidInput(detail::msg("dims mismatch in '", path, "': row ", r, " has ",
                                     row.size(), " entries, expected ", order));
    }
    for (long c = 0; c < order; ++c) {
      const auto& cell = row[c];
      if (!cell.is_array() || cell.size() != 2 || !cell[0].is_number() || !cell[1].is_number()) {
        throw InvalidInput(detail::msg("malformed state file '", path, "': entry (", r, ",", c,
                                       ") is not an [re, im] pair"));
      }
      m(r, c) = Complex(cell[0].get<double>(), cell[1].get<double>());
    }
  }
  DensityMatrix rho = DensityMatrix::make(std::move(dims), std::move(m));
  Spectrum s = eig(rho.op, /*with_vectors=*/false);
  double min_e = s.eigenvalues(s.eigenvalues.size() - 1);
  if (min_e < -kPsdFloor) {
    throw InvalidInput(detail::msg("state in '", path, "' is not positive semidefinite: ",
                                   "min eigenvalue ", min_e));
  }
  return rho;
}

}  // namespace qsep
