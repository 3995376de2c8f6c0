#pragma once
// Entropy functionals for entanglement detection: the sandwiched Tsallis
// relative entropy and its conditional version (CSTRE), the traditional Tsallis
// relative entropy, the Abe-Rajagopal q-conditional entropy, the sandwiched
// Renyi conditional entropy, and the von Neumann conditional entropy (the
// q -> 1 limit of all of them). Natural logarithms throughout.

#include "qsep/linalg.hpp"

namespace qsep {

enum class EntropyMethod {
  CSTRE,
  AR,
  SandwichedRenyi,
  VonNeumann,
  TsallisRelative,
  SandwichedTsallisRelative,
};

inline const char* entropy_method_name(EntropyMethod m) {
  switch (m) {
    case EntropyMethod::CSTRE: return "cstre";
    case EntropyMethod::AR: return "ar";
    case EntropyMethod::SandwichedRenyi: return "renyi";
    case EntropyMethod::VonNeumann: return "vn";
    case EntropyMethod::TsallisRelative: return "tsallis-relative";
    case EntropyMethod::SandwichedTsallisRelative: return "sandwiched-tsallis-relative";
  }
  return "unknown";
}

/// Value of a conditional entropy at (state, cut, q), with the spectrum of the
/// sandwiched matrix attached where one was formed (the state's own spectrum
/// for the commuting/q=1 routes).
struct EntropyReport {
  double value = 0.0;
  double q = 0.0;
  Spectrum sandwiched_spectrum;
  EntropyMethod method = EntropyMethod::CSTRE;
};

namespace detail {

// sigma^alpha rho sigma^alpha with the support pseudo-power, after verifying
// that rho carries no weight outside the support of sigma. The leaked weight
// tr[(I - Pi) rho (I - Pi)] equals 1 - sum over support of <v_i| rho |v_i>.
inline Spectrum sandwich_spectrum(const DensityMatrix& rho, const HermitianOperator& sigma,
                                  double alpha, double support_tol) {
  if (sigma.order() != rho.op.order()) {
    throw InvalidInput("sandwich operands have different orders");
  }
  Spectrum ss = eig(sigma);
  double min_e = ss.eigenvalues(ss.eigenvalues.size() - 1);
  if (min_e < -std::max(support_tol, kPsdFloor)) {
    throw NumericalFailure(detail::msg("conditioning operator is not PSD: min eigenvalue ", min_e));
  }
  double support_weight = 0.0;
  Eigen::VectorXd powered(ss.eigenvalues.size());
  for (Eigen::Index i = 0; i < ss.eigenvalues.size(); ++i) {
    double e = ss.eigenvalues(i);
    if (e > support_tol) {
      powered(i) = std::pow(e, alpha);
      support_weight += (ss.eigenvectors.col(i).adjoint() * rho.op.mat * ss.eigenvectors.col(i))(0)
                            .real();
    } else {
      powered(i) = 0.0;
    }
  }
  double leak = 1.0 - support_weight;
  if (leak > kSupportLeakTol) {
    throw NumericalFailure(detail::msg("support violation: weight ", leak,
                                       " of the state lies outside the support of sigma"));
  }
  Matrix sand = ss.eigenvectors * powered.asDiagonal() * ss.eigenvectors.adjoint();
  Matrix m = sand * rho.op.mat * sand;
  Spectrum out = eig(HermitianOperator::symmetrized(rho.op.dims, std::move(m)), /*with_vectors=*/false);
  double min_out = out.eigenvalues(out.eigenvalues.size() - 1);
  if (min_out < -kPsdFloor) {
    throw NumericalFailure(detail::msg("sandwiched matrix has negative eigenvalue ", min_out));
  }
  for (Eigen::Index i = 0; i < out.eigenvalues.size(); ++i) {
    if (out.eigenvalues(i) < 0.0) out.eigenvalues(i) = 0.0;
  }
  return out;
}

inline void require_finite_q(double q) {
  if (!(q > 0.0) || q > kMaxQ) {
    throw InvalidInput(detail::msg("q must lie in (0, ", kMaxQ, "], got ", q));
  }
}

}  // namespace detail

/// -sum e ln e over the positive eigenvalues (0 ln 0 = 0).
inline double von_neumann_entropy(const Spectrum& spectrum) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < spectrum.eigenvalues.size(); ++i) {
    double e = spectrum.eigenvalues(i);
    if (e < -kPsdFloor) {
      throw InvalidInput(detail::msg("entropy of a negative eigenvalue ", e));
    }
    if (e > 0.0) s -= e * std::log(e);
  }
  return s;
}

struct SandwichedTrace {
  double value = 0.0;      // Q_q; +inf when the log-domain value exceeds double range
  double log_value = 0.0;  // always finite for nonzero states
  Spectrum spectrum;       // of the sandwiched matrix, descending
};

/// Q_q(rho||sigma) = tr[(sigma^((1-q)/2q) rho sigma^((1-q)/2q))^q], evaluated
/// spectrally with the support convention and a log-domain power sum.
inline SandwichedTrace sandwiched_q_trace(const DensityMatrix& rho, const HermitianOperator& sigma,
                                          double q, double support_tol = kSupportTol) {
  detail::require_finite_q(q);
  double alpha = (1.0 - q) / (2.0 * q);
  Spectrum spec = detail::sandwich_spectrum(rho, sigma, alpha, support_tol);
  double log_q = log_power_sum(spec, q);
  return SandwichedTrace{std::exp(log_q), log_q, std::move(spec)};
}

/// I_A (x) rho_B for the given cut, with factors kept in their original order.
inline HermitianOperator conditioning_operator(const DensityMatrix& rho, const BipartiteCut& cut) {
  validate_cut(cut, rho.op.dims);
  DensityMatrix rho_b = partial_trace(rho, cut.b_factors);
  return lift_with_identity(rho_b.op, cut.b_factors, rho.op.dims);
}

/// Conditional entropy S(A|B) = S(rho_AB) - S(rho_B) from the two spectra.
inline EntropyReport von_neumann_conditional(const DensityMatrix& rho, const BipartiteCut& cut) {
  validate_cut(cut, rho.op.dims);
  Spectrum sab = eig(rho.op, /*with_vectors=*/false);
  Spectrum sb = eig(partial_trace(rho, cut.b_factors).op, /*with_vectors=*/false);
  EntropyReport r;
  r.value = von_neumann_entropy(sab) - von_neumann_entropy(sb);
  r.q = 1.0;
  r.sandwiched_spectrum = std::move(sab);
  r.method = EntropyMethod::VonNeumann;
  return r;
}

/// CSTRE D_q(rho_AB||rho_B) = (Q_q - 1)/(1 - q). Negative values at q > 1
/// certify entanglement across the cut. Exact q = 1 routes to the von Neumann
/// conditional entropy.
inline EntropyReport cstre(const DensityMatrix& rho, const BipartiteCut& cut, double q,
                           double support_tol = kSupportTol) {
  if (q == 1.0) return von_neumann_conditional(rho, cut);
  HermitianOperator sigma = conditioning_operator(rho, cut);
  SandwichedTrace st = sandwiched_q_trace(rho, sigma, q, support_tol);
  EntropyReport r;
  r.value = std::expm1(st.log_value) / (1.0 - q);  // accurate where Q_q is near 1
  r.q = q;
  r.sandwiched_spectrum = std::move(st.spectrum);
  r.method = EntropyMethod::CSTRE;
  return r;
}

/// Sandwiched Renyi conditional entropy log(Q_q)/(1 - q); same sign and zeros
/// as the CSTRE at every (state, cut, q).
inline EntropyReport sandwiched_renyi_conditional(const DensityMatrix& rho, const BipartiteCut& cut,
                                                  double q, double support_tol = kSupportTol) {
  if (q == 1.0) return von_neumann_conditional(rho, cut);
  HermitianOperator sigma = conditioning_operator(rho, cut);
  SandwichedTrace st = sandwiched_q_trace(rho, sigma, q, support_tol);
  EntropyReport r;
  r.value = st.log_value / (1.0 - q);
  r.q = q;
  r.sandwiched_spectrum = std::move(st.spectrum);
  r.method = EntropyMethod::SandwichedRenyi;
  return r;
}

/// Abe-Rajagopal q-conditional entropy (tr rho^q / tr rho_B^q - 1)/(1 - q),
/// the commuting special case of the CSTRE. Power sums stay in the log domain
/// so the ratio survives q up to kMaxQ.
inline EntropyReport ar_conditional(const DensityMatrix& rho, const BipartiteCut& cut, double q) {
  validate_cut(cut, rho.op.dims);
  if (q == 1.0) return von_neumann_conditional(rho, cut);
  detail::require_finite_q(q);
  Spectrum sab = eig(rho.op, /*with_vectors=*/false);
  Spectrum sb = eig(partial_trace(rho, cut.b_factors).op, /*with_vectors=*/false);
  for (Eigen::Index i = 0; i < sab.eigenvalues.size(); ++i) {
    if (sab.eigenvalues(i) < 0.0 && sab.eigenvalues(i) > -kPsdFloor) sab.eigenvalues(i) = 0.0;
  }
  for (Eigen::Index i = 0; i < sb.eigenvalues.size(); ++i) {
    if (sb.eigenvalues(i) < 0.0 && sb.eigenvalues(i) > -kPsdFloor) sb.eigenvalues(i) = 0.0;
  }
  double log_ratio = log_power_sum(sab, q) - log_power_sum(sb, q);
  EntropyReport r;
  r.value = std::expm1(log_ratio) / (1.0 - q);
  r.q = q;
  r.sandwiched_spectrum = std::move(sab);
  r.method = EntropyMethod::AR;
  return r;
}

/// Traditional Tsallis relative entropy (tr(rho^q sigma^(1-q)) - 1)/(q - 1),
/// the commuting-formula counterpart of the sandwiched version.
inline double tsallis_relative(const DensityMatrix& rho, const HermitianOperator& sigma, double q,
                               double support_tol = kSupportTol) {
  detail::require_finite_q(q);
  if (q == 1.0) throw InvalidInput("Tsallis relative entropy requires q != 1");
  // Same support requirement as the sandwiched form.
  Spectrum ss = eig(sigma);
  double support_weight = 0.0;
  for (Eigen::Index i = 0; i < ss.eigenvalues.size(); ++i) {
    if (ss.eigenvalues(i) > support_tol) {
      support_weight +=
          (ss.eigenvectors.col(i).adjoint() * rho.op.mat * ss.eigenvectors.col(i))(0).real();
    }
  }
  if (1.0 - support_weight > kSupportLeakTol) {
    throw NumericalFailure(detail::msg("support violation: weight ", 1.0 - support_weight,
                                       " of the state lies outside the support of sigma"));
  }
  HermitianOperator rho_q = frac_power_on_support(rho.op, q, support_tol);
  HermitianOperator sigma_1mq = frac_power_on_support(sigma, 1.0 - q, support_tol);
  double t = (rho_q.mat * sigma_1mq.mat).trace().real();
  return (t - 1.0) / (q - 1.0);
}

/// Sandwiched Tsallis relative entropy (Q_q(rho||sigma) - 1)/(q - 1). Never
/// exceeds the traditional form (Lieb-Thirring).
inline double sandwiched_tsallis_relative(const DensityMatrix& rho, const HermitianOperator& sigma,
                                          double q, double support_tol = kSupportTol) {
  if (q == 1.0) throw InvalidInput("sandwiched Tsallis relative entropy requires q != 1");
  SandwichedTrace st = sandwiched_q_trace(rho, sigma, q, support_tol);
  return std::expm1(st.log_value) / (q - 1.0);
}

}  // namespace qsep
