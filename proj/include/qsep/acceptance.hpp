#pragma once
// The verification battery behind `qsep check`: nine numbered suites covering
// every headline threshold, the closed-form spectra, the special families, the
// inequality/property checks, and the large-N asymptotics. Each suite reports
// pass/fail plus per-item detail lines. All tolerances are pinned here.

#include <cstdint>
#include <random>

#include "qsep/separability.hpp"

namespace qsep {

struct CriterionResult {
  int index = 0;
  std::string name;
  bool pass = true;
  std::vector<std::string> details;

  CriterionResult() = default;
  CriterionResult(int i, std::string n) : index(i), name(std::move(n)) {}
};

namespace acceptance_detail {

inline void item(CriterionResult& r, bool ok, std::string line) {
  r.pass = r.pass && ok;
  r.details.push_back(std::string(ok ? "[ok]   " : "[FAIL] ") + std::move(line));
}

inline void close_item(CriterionResult& r, const std::string& label, double computed,
                       double expected, double tol) {
  double diff = std::abs(computed - expected);
  item(r, diff <= tol,
       detail::msg(label, ": computed ", computed, ", expected ", expected, ", |diff| ", diff,
                   " (tol ", tol, ")"));
}

// Deterministic uniforms independent of library distribution internals.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  double u01() { return (gen_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * u01(); }
  Complex gaussian_pair() {
    // Box-Muller
    double u = std::max(u01(), 1e-300), v = u01();
    double r = std::sqrt(-2.0 * std::log(u));
    return Complex(r * std::cos(2.0 * M_PI * v), r * std::sin(2.0 * M_PI * v));
  }

 private:
  std::mt19937_64 gen_;
};

inline DensityMatrix random_density(Rng& rng, std::vector<int> dims) {
  long n = 1;
  for (int d : dims) n *= d;
  Matrix g(n, n);
  for (long i = 0; i < n; ++i) {
    for (long j = 0; j < n; ++j) g(i, j) = rng.gaussian_pair();
  }
  Matrix m = g * g.adjoint();
  m /= m.trace().real();
  return DensityMatrix::make(std::move(dims), std::move(m));
}

inline DensityMatrix random_separable_two_qubit(Rng& rng, int terms = 4) {
  Matrix m = Matrix::Zero(4, 4);
  double total = 0.0;
  std::vector<double> w(terms);
  for (int t = 0; t < terms; ++t) {
    w[t] = rng.u01() + 1e-3;
    total += w[t];
  }
  for (int t = 0; t < terms; ++t) {
    DensityMatrix a = random_density(rng, {2});
    DensityMatrix b = random_density(rng, {2});
    m += (w[t] / total) * kron(a.op, b.op).mat;
  }
  return DensityMatrix::make({2, 2}, std::move(m));
}

inline std::vector<double> geometric_grid(double lo, double hi, int count) {
  std::vector<double> g(count);
  double step = std::log(hi / lo) / (count - 1);
  for (int i = 0; i < count; ++i) g[i] = lo * std::exp(i * step);
  g[count - 1] = hi;  // the exp/log round trip can overshoot by an ulp
  return g;
}

}  // namespace acceptance_detail

/// 1. W-family 1:N-1 CSTRE(q->inf) thresholds: formula within 1e-6, reported
///    decimals within 5e-4 for N = 3, 4, 5, 6, 8.
inline CriterionResult acceptance_w_thresholds() {
  using namespace acceptance_detail;
  CriterionResult r{1, "W-family 1:N-1 CSTRE(q->inf) thresholds"};
  const std::vector<std::pair<int, double>> decimals = {
      {3, 0.1547}, {4, 0.1123}, {5, 0.0883}, {6, 0.07275}, {8, 0.0538}};
  BipartiteCut cut = BipartiteCut::make({0}, {1}, 2);
  for (auto [N, printed] : decimals) {
    StateFamily f = compress_symmetric(noisy_w_family(N), 1);
    double t = threshold(f, cut, Criterion::CSTRE_qinf, 0.0, 1e-9).x_star;
    close_item(r, detail::msg("W N=", N, " vs formula"), t,
               closed_form_threshold(ClosedFormThreshold::WCstre, N), 1e-6);
    close_item(r, detail::msg("W N=", N, " vs reported decimal"), t, printed, 5e-4);
  }
  return r;
}

/// 2. AR(q->inf) W-family thresholds equal 1/(N+2) within 1e-6 for N = 3..10;
///    the N=8 AR convergence-trace endpoint reaches 0.1 within 5e-4.
inline CriterionResult acceptance_ar_thresholds() {
  using namespace acceptance_detail;
  CriterionResult r{2, "AR(q->inf) W-family thresholds and N=8 trace endpoint"};
  BipartiteCut cut = BipartiteCut::make({0}, {1}, 2);
  for (int N = 3; N <= 10; ++N) {
    StateFamily f = compress_symmetric(noisy_w_family(N), 1);
    double t = threshold(f, cut, Criterion::AR_qinf, 0.0, 1e-9).x_star;
    close_item(r, detail::msg("W N=", N, " AR vs 1/(N+2)"), t,
               closed_form_threshold(ClosedFormThreshold::WAr, N), 1e-6);
  }
  StateFamily w8 = compress_symmetric(noisy_w_family(8), 1);
  ConvergenceTrace tr = convergence_trace(w8, cut, Criterion::AR_at_q,
                                          geometric_grid(2.0, 1e5, 9), 1e-9);
  const ConvergenceTraceRow& last = tr.rows.back();
  item(r, last.found, detail::msg("trace endpoint exists at q=", last.q));
  if (last.found) close_item(r, "W N=8 AR trace endpoint", last.x, 0.1, 5e-4);
  return r;
}

/// 3. GHZ-family thresholds equal 2/(N^2+N+2) within 1e-6 for N = 3..10, the
///    N=6 value is 0.04545 within 5e-4, and CSTRE == AR within 1e-9 pointwise
///    when conditioning on the maximally mixed single-qubit marginal.
inline CriterionResult acceptance_ghz_thresholds() {
  using namespace acceptance_detail;
  CriterionResult r{3, "GHZ-family 1:N-1 thresholds and CSTRE/AR equivalence"};
  BipartiteCut cut = BipartiteCut::make({0}, {1}, 2);
  for (int N = 3; N <= 10; ++N) {
    StateFamily f = compress_symmetric(noisy_ghz_family(N), 1);
    double t = threshold(f, cut, Criterion::CSTRE_qinf, 0.0, 1e-9).x_star;
    close_item(r, detail::msg("GHZ N=", N, " vs formula"), t,
               closed_form_threshold(ClosedFormThreshold::GhzCstre, N), 1e-6);
    if (N == 6) close_item(r, "GHZ N=6 vs reported decimal", t, 0.04545, 5e-4);
  }
  // Pointwise equality holds when the conditioning marginal is maximally
  // mixed; for the GHZ family that is the single-qubit side of the cut
  // (factor 0 of the m=1 compression, so B = {0}). The 1e-9 tolerance is
  // scaled by the value's magnitude once it leaves the unit range, where an
  // absolute 1e-9 would sit below double resolution.
  BipartiteCut qubit_side = BipartiteCut::make({1}, {0}, 2);
  double worst = 0.0;
  for (int N = 3; N <= 8; ++N) {
    StateFamily f = compress_symmetric(noisy_ghz_family(N), 1);
    for (double q : {1.5, 2.0, 5.0, 50.0}) {
      for (int i = 0; i <= 10; ++i) {
        DensityMatrix rho = f(i / 10.0);
        double a = ar_conditional(rho, qubit_side, q).value;
        double c = cstre(rho, qubit_side, q).value;
        worst = std::max(worst, std::abs(c - a) / std::max(1.0, std::abs(a)));
      }
    }
  }
  close_item(r, "max |cstre - ar| / max(1, |ar|) over the (N, q, x) grid", worst, 0.0, 1e-9);
  return r;
}

/// 4. PPT thresholds match CSTRE(q->inf) within 1e-6 on 1:N-1 cuts for the W,
///    GHZ, and W+obverse-W families, N = 3..8; the 2:2 cut of the 4-qubit
///    families reproduces PPT 0.0808 (W) / 0.0625 (GHZ) against CSTRE 0.2105.
inline CriterionResult acceptance_ppt_agreement() {
  using namespace acceptance_detail;
  CriterionResult r{4, "PPT vs CSTRE agreement (1:N-1) and 2:2 disagreement"};
  BipartiteCut cut = BipartiteCut::make({0}, {1}, 2);
  for (int N = 3; N <= 8; ++N) {
    for (StateFamily (*make_fam)(int) : {&noisy_w_family, &noisy_ghz_family, &noisy_wwbar_family}) {
      StateFamily f = compress_symmetric((*make_fam)(N), 1);
      double tc = threshold(f, cut, Criterion::CSTRE_qinf, 0.0, 1e-9).x_star;
      double tp = ppt_threshold(f, cut, 1e-9).x_star;
      close_item(r, detail::msg(f.name, " ppt vs cstre"), tp, tc, 1e-6);
    }
  }
  StateFamily w4 = compress_symmetric(noisy_w_family(4), 2);
  StateFamily g4 = compress_symmetric(noisy_ghz_family(4), 2);
  close_item(r, "W N=4 2:2 ppt", ppt_threshold(w4, cut, 1e-9).x_star, 0.0808, 5e-4);
  close_item(r, "GHZ N=4 2:2 ppt", ppt_threshold(g4, cut, 1e-9).x_star, 0.0625, 5e-4);
  close_item(r, "W N=4 2:2 cstre",
             threshold(w4, cut, Criterion::CSTRE_qinf, 0.0, 1e-9).x_star, 0.2105, 5e-4);
  close_item(r, "GHZ N=4 2:2 cstre",
             threshold(g4, cut, Criterion::CSTRE_qinf, 0.0, 1e-9).x_star, 0.2105, 5e-4);
  return r;
}

/// 5. W+obverse-W family: N=3 CSTRE threshold 0.1896 with AR at 1/3 (5e-4),
///    and N = 4..8 thresholds equal 2/(N^2+N+2) within 1e-6 under both criteria.
inline CriterionResult acceptance_wwbar() {
  using namespace acceptance_detail;
  CriterionResult r{5, "W+obverse-W family thresholds"};
  BipartiteCut cut = BipartiteCut::make({0}, {1}, 2);
  StateFamily f3 = compress_symmetric(noisy_wwbar_family(3), 1);
  close_item(r, "N=3 cstre", threshold(f3, cut, Criterion::CSTRE_qinf, 0.0, 1e-9).x_star,
             0.1896, 5e-4);
  close_item(r, "N=3 ar", threshold(f3, cut, Criterion::AR_qinf, 0.0, 1e-9).x_star,
             0.3333, 5e-4);
  for (int N = 4; N <= 8; ++N) {
    StateFamily f = compress_symmetric(noisy_wwbar_family(N), 1);
    double expected = closed_form_threshold(ClosedFormThreshold::WWbarCstre, N);
    close_item(r, detail::msg("N=", N, " cstre"),
               threshold(f, cut, Criterion::CSTRE_qinf, 0.0, 1e-9).x_star, expected, 1e-6);
    close_item(r, detail::msg("N=", N, " ar"),
               threshold(f, cut, Criterion::AR_qinf, 0.0, 1e-9).x_star, expected, 1e-6);
  }
  return r;
}

/// 6. Closed-form sandwiched spectra match full-space dense spectra within
///    1e-10 on the (N, q, x) lattice, and the multiplicity-weighted sums equal
///    1 at q = 1 within 1e-12.
inline CriterionResult acceptance_closed_form_spectra() {
  using namespace acceptance_detail;
  CriterionResult r{6, "closed-form sandwiched spectra vs dense spectra"};
  BipartiteCut qubit_cut;  // per-N full-space cut, built below
  double worst_w = 0.0, worst_ghz = 0.0, worst_tail = 0.0;
  for (int N = 3; N <= 8; ++N) {
    StateFamily wf = noisy_w_family(N);
    StateFamily gf = noisy_ghz_family(N);
    std::vector<int> rest(N - 1);
    for (int f = 1; f < N; ++f) rest[f - 1] = f;
    qubit_cut = BipartiteCut::make({0}, rest, N);
    for (double q : {1.5, 2.0, 5.0, 20.0}) {
      for (double x : {0.0, 0.05, 0.3, 0.9}) {
        for (int which = 0; which < 2; ++which) {
          DensityMatrix rho = which == 0 ? wf(x) : gf(x);
          HermitianOperator sigma = conditioning_operator(rho, qubit_cut);
          Spectrum dense =
              detail::sandwich_spectrum(rho, sigma, (1.0 - q) / (2.0 * q), kSupportTol);
          SandwichSpectrum closed = which == 0 ? w_family_sandwich_spectrum(N, q, x)
                                               : ghz_family_sandwich_spectrum(N, q, x);
          Eigen::VectorXd expanded = closed.expanded_descending();
          double err = 0.0;
          for (Eigen::Index i = 0; i < expanded.size(); ++i) {
            err = std::max(err, std::abs(dense.eigenvalues(i) - expanded(i)));
          }
          (which == 0 ? worst_w : worst_ghz) = std::max(which == 0 ? worst_w : worst_ghz, err);
          for (Eigen::Index i = expanded.size(); i < dense.eigenvalues.size(); ++i) {
            worst_tail = std::max(worst_tail, std::abs(dense.eigenvalues(i)));
          }
        }
      }
    }
  }
  close_item(r, "max |closed - dense| over the W lattice", worst_w, 0.0, 1e-10);
  close_item(r, "max |closed - dense| over the GHZ lattice", worst_ghz, 0.0, 1e-10);
  close_item(r, "max |padding eigenvalue| beyond the N+1 nonzero values", worst_tail, 0.0, 1e-10);
  double worst_sum = 0.0;
  for (int N = 3; N <= 10; ++N) {
    for (double x : {0.0, 0.2, 0.5, 0.8, 1.0}) {
      worst_sum = std::max(worst_sum,
                           std::abs(w_family_sandwich_spectrum(N, 1.0, x).weighted_sum(1.0) - 1.0));
      worst_sum = std::max(
          worst_sum, std::abs(ghz_family_sandwich_spectrum(N, 1.0, x).weighted_sum(1.0) - 1.0));
    }
  }
  close_item(r, "max |weighted sum - 1| at q=1", worst_sum, 0.0, 1e-12);
  return r;
}

/// 7. Special cases: isotropic qutrit threshold 1/3 (1e-6); qubit-qutrit X
///    threshold 1/8 on the qutrit side with the qubit side blind; the
///    non-symmetric 3-qubit W family at CSTRE 0.2096 / AR 0.2727 (5e-4).
inline CriterionResult acceptance_special_cases() {
  using namespace acceptance_detail;
  CriterionResult r{7, "special families (isotropic, X state, non-symmetric W)"};
  for (const NamedCheck& c : special_case_checks()) {
    item(r, c.pass,
         detail::msg(c.name, ": computed ", c.computed, ", expected ", c.expected, " (tol ",
                     c.tol, c.note.empty() ? "" : "; ", c.note, ")"));
  }
  return r;
}

/// 8. Property suites: Lieb-Thirring on 1000 random triples; CSTRE >= -1e-9 on
///    1000 random separable mixtures at q in {1.5, 2, 5, 50}; q -> 1 values
///    bracket the von Neumann conditional entropy within 5e-4; compressed and
///    full representations agree spectrally within 1e-10 for N <= 8; and the
///    8-qubit W von Neumann crossing sits at 0.4246 within 5e-4.
inline CriterionResult acceptance_property_suites() {
  using namespace acceptance_detail;
  CriterionResult r{8, "property suites"};
  {
    Rng rng(0xd1cec0de);
    double worst = -std::numeric_limits<double>::infinity();
    const double qs[] = {1.5, 2.0, 5.0};
    for (int i = 0; i < 1000; ++i) {
      DensityMatrix rho = random_density(rng, {4});
      DensityMatrix sig = random_density(rng, {4});
      double q = qs[i % 3];
      worst = std::max(worst, sandwiched_tsallis_relative(rho, sig.op, q) -
                                  tsallis_relative(rho, sig.op, q));
    }
    item(r, worst <= 1e-10,
         detail::msg("Lieb-Thirring: max(sandwiched - traditional) = ", worst,
                     " over 1000 random triples (allowed 1e-10)"));
  }
  {
    Rng rng(0x5e9a7ab1e);
    BipartiteCut cut = BipartiteCut::make({0}, {1}, 2);
    double worst = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 1000; ++i) {
      DensityMatrix rho = random_separable_two_qubit(rng);
      for (double q : {1.5, 2.0, 5.0, 50.0}) {
        worst = std::min(worst, cstre(rho, cut, q).value);
      }
    }
    item(r, worst >= -1e-9,
         detail::msg("separable mixtures: min cstre = ", worst,
                     " over 1000 states x 4 q values (floor -1e-9)"));
  }
  {
    struct Sample {
      StateFamily family;
      BipartiteCut cut;
      double x;
    };
    std::vector<Sample> samples;
    samples.push_back({compress_symmetric(noisy_w_family(5), 1),
                       BipartiteCut::make({0}, {1}, 2), 0.3});
    samples.push_back({compress_symmetric(noisy_ghz_family(5), 1),
                       BipartiteCut::make({0}, {1}, 2), 0.2});
    samples.push_back({compress_symmetric(noisy_wwbar_family(5), 1),
                       BipartiteCut::make({0}, {1}, 2), 0.2});
    samples.push_back({nonsymmetric_noisy_family(3, dicke_state(3, 1).cast<Complex>()),
                       BipartiteCut::make({0}, {1, 2}, 3), 0.15});
    samples.push_back({isotropic_qutrit_family(), BipartiteCut::make({0}, {1}, 2), 0.2});
    samples.push_back({qubit_qutrit_x_family(), BipartiteCut::make({0}, {1}, 2), 0.1});
    const double eps = 1e-5;
    bool all_ok = true;
    double worst = 0.0;
    for (const Sample& s : samples) {
      DensityMatrix rho = s.family(s.x);
      double vn = von_neumann_conditional(rho, s.cut).value;
      for (int use_ar = 0; use_ar < 2; ++use_ar) {
        double below = use_ar ? ar_conditional(rho, s.cut, 1.0 - eps).value
                              : cstre(rho, s.cut, 1.0 - eps).value;
        double above = use_ar ? ar_conditional(rho, s.cut, 1.0 + eps).value
                              : cstre(rho, s.cut, 1.0 + eps).value;
        double lo = std::min(below, above), hi = std::max(below, above);
        bool ok = vn >= lo - 5e-4 && vn <= hi + 5e-4 && std::abs(below - vn) <= 5e-4 &&
                  std::abs(above - vn) <= 5e-4;
        all_ok = all_ok && ok;
        worst = std::max(worst, std::max(std::abs(below - vn), std::abs(above - vn)));
      }
    }
    item(r, all_ok, detail::msg("q->1 bracketing of the von Neumann value on ", samples.size(),
                                " families; worst |value(1 +/- 1e-5) - vn| = ", worst,
                                " (tol 5e-4)"));
  }
  {
    double worst = 0.0;
    for (int N = 3; N <= 8; ++N) {
      for (StateFamily (*make_fam)(int) : {&noisy_w_family, &noisy_ghz_family, &noisy_wwbar_family}) {
        StateFamily full = (*make_fam)(N);
        StateFamily comp = compress_symmetric(full, 1);
        for (double x : {0.0, 0.25, 0.5, 0.75, 1.0}) {
          Eigen::VectorXd ef = eig(full(x).op, false).eigenvalues;
          Eigen::VectorXd ec = eig(comp(x).op, false).eigenvalues;
          for (Eigen::Index i = 0; i < ec.size(); ++i) {
            double full_val = i < ef.size() ? ef(i) : 0.0;
            worst = std::max(worst, std::abs(full_val - ec(i)));
          }
          for (Eigen::Index i = ec.size(); i < ef.size(); ++i) {
            worst = std::max(worst, std::abs(ef(i)));
          }
        }
      }
    }
    item(r, worst <= 1e-10,
         detail::msg("compressed vs full spectra, N=3..8: max |diff| = ", worst,
                     " (allowed 1e-10)"));
  }
  {
    StateFamily w8 = compress_symmetric(noisy_w_family(8), 1);
    BipartiteCut cut = BipartiteCut::make({0}, {1}, 2);
    double t = threshold(w8, cut, Criterion::VonNeumann, 0.0, 1e-9).x_star;
    close_item(r, "W N=8 von Neumann crossing", t, 0.4246, 5e-4);
  }
  return r;
}

/// 9. Asymptotics at N = 64 through the compressed representation: the W
///    threshold within 2% of (sqrt(2)-1)/N and the GHZ threshold within 5% of
///    2/N^2.
inline CriterionResult acceptance_asymptotics() {
  using namespace acceptance_detail;
  CriterionResult r{9, "large-N asymptotics (N = 64, compressed)"};
  const int N = 64;
  BipartiteCut cut = BipartiteCut::make({0}, {1}, 2);
  Eigen::VectorXcd w = Eigen::VectorXcd::Zero(N + 1);
  w(1) = 1.0;
  Eigen::VectorXcd ghz = Eigen::VectorXcd::Zero(N + 1);
  ghz(0) = ghz(N) = 1.0 / std::sqrt(2.0);
  StateFamily wf = compress_symmetric(N, w, 1, FamilyKind::NoisyW, "noisy-w N=64");
  StateFamily gf = compress_symmetric(N, ghz, 1, FamilyKind::NoisyGHZ, "noisy-ghz N=64");
  double tw = threshold(wf, cut, Criterion::CSTRE_qinf, 0.0, 1e-9).x_star;
  double tg = threshold(gf, cut, Criterion::CSTRE_qinf, 0.0, 1e-9).x_star;
  double w_asym = (std::sqrt(2.0) - 1.0) / N;
  double g_asym = 2.0 / (static_cast<double>(N) * N);
  item(r, std::abs(tw / w_asym - 1.0) <= 0.02,
       detail::msg("W N=64 threshold ", tw, " vs (sqrt(2)-1)/N = ", w_asym, ", rel diff ",
                   std::abs(tw / w_asym - 1.0), " (allowed 0.02)"));
  item(r, std::abs(tg / g_asym - 1.0) <= 0.05,
       detail::msg("GHZ N=64 threshold ", tg, " vs 2/N^2 = ", g_asym, ", rel diff ",
                   std::abs(tg / g_asym - 1.0), " (allowed 0.05)"));
  return r;
}

inline std::vector<CriterionResult> run_acceptance() {
  return {
      acceptance_w_thresholds(),     acceptance_ar_thresholds(), acceptance_ghz_thresholds(),
      acceptance_ppt_agreement(),    acceptance_wwbar(),         acceptance_closed_form_spectra(),
      acceptance_special_cases(),    acceptance_property_suites(), acceptance_asymptotics(),
  };
}

}  // namespace qsep
