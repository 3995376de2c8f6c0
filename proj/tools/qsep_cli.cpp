// Command-line surface for separability scans, threshold searches, convergence
// traces, closed-form table reproduction, the verification battery, and
// state-file round trips.
//
// Exit codes: 0 success, 1 check failure, 2 invalid input, 3 numerical failure.

#include <atomic>
#include <cstdio>
#include <iostream>
#include <thread>

#include <CLI11.hpp>

#include "qsep/acceptance.hpp"
#include "qsep/csv.hpp"
#include "qsep/separability.hpp"

namespace {

using namespace qsep;

constexpr int kExitOk = 0;
constexpr int kExitCheckFailure = 1;
constexpr int kExitInvalidInput = 2;
constexpr int kExitNumericalFailure = 3;

struct CutSpec {
  std::vector<int> a, b;
};

std::vector<int> parse_index_list(const std::string& s) {
  std::vector<int> out;
  std::size_t pos = 0;
  while (pos < s.size()) {
    std::size_t next = s.find(',', pos);
    std::string tok = s.substr(pos, next == std::string::npos ? std::string::npos : next - pos);
    try {
      std::size_t used = 0;
      int v = std::stoi(tok, &used);
      if (used != tok.size()) throw std::invalid_argument(tok);
      out.push_back(v);
    } catch (const std::exception&) {
      throw InvalidInput(detail::msg("bad factor index '", tok, "' in cut"));
    }
    if (next == std::string::npos) break;
    pos = next + 1;
  }
  return out;
}

// "m:k" with m+k == n_factors expands to the first m factors against the rest;
// "m:rest" and "m:N-1" are accepted spellings of the same thing. Anything else
// is a pair of explicit comma-separated factor lists, "0,2:1,3".
CutSpec parse_cut(const std::string& text, int n_factors) {
  std::size_t colon = text.find(':');
  if (colon == std::string::npos) {
    throw InvalidInput(detail::msg("cut '", text, "' must contain ':'"));
  }
  std::string left = text.substr(0, colon), right = text.substr(colon + 1);
  auto as_plain_int = [](const std::string& s) -> std::optional<int> {
    if (s.empty()) return std::nullopt;
    for (char c : s) {
      if (!std::isdigit(static_cast<unsigned char>(c))) return std::nullopt;
    }
    return std::stoi(s);
  };
  auto lm = as_plain_int(left);
  if (lm && (right == "rest" || right == "N-1" || right == "n-1")) {
    right = std::to_string(n_factors - *lm);
  }
  auto rm = as_plain_int(right);
  if (lm && rm && *lm + *rm == n_factors && *lm >= 1 && *rm >= 1) {
    BipartiteCut c = BipartiteCut::leading(*lm, n_factors);
    return CutSpec{c.a_factors, c.b_factors};
  }
  CutSpec spec{parse_index_list(left), parse_index_list(right)};
  BipartiteCut::make(spec.a, spec.b, n_factors);  // validation only
  return spec;
}

std::vector<double> parse_q_list(const std::string& text, bool& has_inf) {
  has_inf = false;
  std::vector<double> qs;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t next = text.find(',', pos);
    std::string tok = text.substr(pos, next == std::string::npos ? std::string::npos : next - pos);
    if (tok == "inf" || tok == "infinity") {
      has_inf = true;
    } else {
      try {
        std::size_t used = 0;
        double q = std::stod(tok, &used);
        if (used != tok.size()) throw std::invalid_argument(tok);
        if (!(q > 0.0) || q > kMaxQ) {
          throw InvalidInput(detail::msg("q must lie in (0, ", kMaxQ, "] or be 'inf', got ", tok));
        }
        qs.push_back(q);
      } catch (const InvalidInput&) {
        throw;
      } catch (const std::exception&) {
        throw InvalidInput(detail::msg("bad q value '", tok, "'"));
      }
    }
    if (next == std::string::npos) break;
    pos = next + 1;
  }
  if (qs.empty() && !has_inf) throw InvalidInput("empty q list");
  return qs;
}

struct Grid {
  double start = 0.0, stop = 0.0, step = 0.0;

  std::vector<double> points() const {
    std::vector<double> xs;
    long count = static_cast<long>(std::floor((stop - start) / step + 1e-9)) + 1;
    for (long i = 0; i < count; ++i) xs.push_back(start + i * step);
    return xs;
  }
};

Grid parse_grid(const std::string& text) {
  Grid g;
  std::size_t c1 = text.find(':'), c2 = text.rfind(':');
  if (c1 == std::string::npos || c2 == c1) {
    throw InvalidInput(detail::msg("grid '", text, "' must be start:stop:step"));
  }
  try {
    g.start = std::stod(text.substr(0, c1));
    g.stop = std::stod(text.substr(c1 + 1, c2 - c1 - 1));
    g.step = std::stod(text.substr(c2 + 1));
  } catch (const std::exception&) {
    throw InvalidInput(detail::msg("bad grid '", text, "'"));
  }
  if (!(g.step > 0.0)) throw InvalidInput("grid step must be positive");
  if (g.stop < g.start) throw InvalidInput("grid stop must not precede start");
  return g;
}

struct FamilyOptions {
  std::string family;
  int n = 0;
  int d = 3;
  std::string phi;        // Dicke coefficients for custom symmetric families
  std::string state_file;
};

Eigen::VectorXcd parse_phi(const std::string& text, int expected) {
  std::vector<double> vals;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t next = text.find(',', pos);
    std::string tok = text.substr(pos, next == std::string::npos ? std::string::npos : next - pos);
    try {
      vals.push_back(std::stod(tok));
    } catch (const std::exception&) {
      throw InvalidInput(detail::msg("bad amplitude '", tok, "' in --phi"));
    }
    if (next == std::string::npos) break;
    pos = next + 1;
  }
  if (static_cast<int>(vals.size()) != expected) {
    throw InvalidInput(detail::msg("--phi needs ", expected, " Dicke coefficients, got ",
                                   vals.size()));
  }
  Eigen::VectorXcd v(expected);
  for (int i = 0; i < expected; ++i) v(i) = vals[i];
  double norm = v.norm();
  if (norm < 1e-12) throw InvalidInput("--phi is the zero vector");
  return v / norm;
}

struct ResolvedTarget {
  StateFamily family;       // evaluator (unused when fixed_state is set)
  BipartiteCut cut = BipartiteCut{{0}, {1}};
  std::optional<DensityMatrix> fixed_state;
};

// Symmetric qubit families are evaluated in the compressed coordinates of the
// requested cut: side sizes are all that matter for a permutation-symmetric
// state, so any cut with |A| = m maps onto the leading m : N-m split.
ResolvedTarget resolve_target(const FamilyOptions& fo, const std::string& cut_text) {
  ResolvedTarget t;
  if (!fo.state_file.empty()) {
    DensityMatrix rho = load_state(fo.state_file);
    CutSpec cs = parse_cut(cut_text, static_cast<int>(rho.op.dims.size()));
    t.cut = BipartiteCut::make(cs.a, cs.b, static_cast<int>(rho.op.dims.size()));
    t.fixed_state = std::move(rho);
    return t;
  }
  if (fo.family == "w" || fo.family == "ghz" || fo.family == "wwbar" ||
      fo.family == "custom-sym") {
    if (fo.n < 3) throw InvalidInput("--n must be at least 3 for the symmetric families");
    Eigen::VectorXcd coeffs;
    FamilyKind kind;
    if (fo.family == "w") {
      coeffs = Eigen::VectorXcd::Zero(fo.n + 1);
      coeffs(1) = 1.0;
      kind = FamilyKind::NoisyW;
    } else if (fo.family == "ghz") {
      coeffs = Eigen::VectorXcd::Zero(fo.n + 1);
      coeffs(0) = coeffs(fo.n) = 1.0 / std::sqrt(2.0);
      kind = FamilyKind::NoisyGHZ;
    } else if (fo.family == "wwbar") {
      coeffs = Eigen::VectorXcd::Zero(fo.n + 1);
      coeffs(1) = coeffs(fo.n - 1) = 1.0 / std::sqrt(2.0);
      kind = FamilyKind::NoisyWWbar;
    } else {
      if (fo.phi.empty()) throw InvalidInput("--family custom-sym requires --phi");
      coeffs = parse_phi(fo.phi, fo.n + 1);
      kind = FamilyKind::NoisySymmetricCustom;
    }
    CutSpec cs = parse_cut(cut_text, fo.n);
    int m = static_cast<int>(cs.a.size());
    t.family = compress_symmetric(fo.n, coeffs, m, kind,
                                  detail::msg(fo.family, " N=", fo.n, " [", m, ":", fo.n - m,
                                              " compressed]"));
    t.cut = BipartiteCut::make({0}, {1}, 2);
    return t;
  }
  if (fo.family == "nonsym-w") {
    if (fo.n < 3) throw InvalidInput("--n must be at least 3 for nonsym-w");
    t.family = nonsymmetric_noisy_family(fo.n, dicke_state(fo.n, 1).cast<Complex>(),
                                         detail::msg("nonsym-w N=", fo.n));
  } else if (fo.family == "qudit-ghz") {
    if (fo.n < 2 || fo.d < 2) throw InvalidInput("qudit-ghz needs --n >= 2 and --d >= 2");
    t.family = qudit_noisy_family(fo.n, fo.d, qudit_ghz_vector(fo.n, fo.d));
  } else if (fo.family == "isotropic") {
    t.family = isotropic_qutrit_family();
  } else if (fo.family == "xstate") {
    t.family = qubit_qutrit_x_family();
  } else if (fo.family.empty()) {
    throw InvalidInput("either --family or --state-file is required");
  } else {
    throw InvalidInput(detail::msg("unknown family '", fo.family,
                                   "' (expected w, ghz, wwbar, custom-sym, nonsym-w, "
                                   "qudit-ghz, isotropic, xstate)"));
  }
  CutSpec cs = parse_cut(cut_text, static_cast<int>(t.family.dims.size()));
  t.cut = BipartiteCut::make(cs.a, cs.b, static_cast<int>(t.family.dims.size()));
  return t;
}

bool criterion_uses_q(const std::string& name) {
  return name == "cstre" || name == "ar" || name == "renyi";
}

double evaluate_criterion(const DensityMatrix& rho, const BipartiteCut& cut,
                          const std::string& name, double q, bool q_is_inf) {
  if (name == "cstre") return q_is_inf ? cstre_qinf_margin(rho, cut) : cstre(rho, cut, q).value;
  if (name == "ar") {
    return q_is_inf ? ar_qinf_margin(rho, cut) : ar_conditional(rho, cut, q).value;
  }
  if (name == "renyi") {
    return q_is_inf ? cstre_qinf_margin(rho, cut)
                    : sandwiched_renyi_conditional(rho, cut, q).value;
  }
  if (name == "vn") return von_neumann_conditional(rho, cut).value;
  if (name == "ppt") return ppt_min_eigenvalue(rho, cut);
  if (name == "reduction") {
    Spectrum s = eig(reduction_operator(rho, cut), false);
    return s.eigenvalues(s.eigenvalues.size() - 1);
  }
  throw InvalidInput(detail::msg("unknown criterion '", name,
                                 "' (expected cstre, ar, renyi, vn, ppt, reduction)"));
}

Criterion bisection_criterion(const std::string& name, bool q_is_inf) {
  if (name == "cstre" || name == "renyi") {
    return q_is_inf ? Criterion::CSTRE_qinf : Criterion::CSTRE_at_q;  // identical zeros
  }
  if (name == "ar") return q_is_inf ? Criterion::AR_qinf : Criterion::AR_at_q;
  if (name == "vn") return Criterion::VonNeumann;
  if (name == "ppt") return Criterion::PPT;
  if (name == "reduction") return Criterion::Reduction;
  throw InvalidInput(detail::msg("unknown criterion '", name,
                                 "' (expected cstre, ar, renyi, vn, ppt, reduction)"));
}

// ---------------------------------------------------------------------------

int cmd_scan(const FamilyOptions& fo, const std::string& cut_text, const std::string& q_text,
             const std::string& grid_text, const std::string& out_path,
             const std::string& criterion, int threads) {
  bisection_criterion(criterion, false);  // validate the name before any work
  bool has_inf = false;
  std::vector<double> qs = parse_q_list(q_text, has_inf);
  ResolvedTarget target = resolve_target(fo, cut_text);

  std::vector<double> xs;
  if (target.fixed_state) {
    xs.push_back(0.0);  // placeholder; the x column stays empty for fixed states
  } else {
    Grid grid = parse_grid(grid_text);
    if (grid.start < target.family.x_min - 1e-12 || grid.stop > target.family.x_max + 1e-12) {
      throw InvalidInput(detail::msg("grid [", grid.start, ", ", grid.stop,
                                     "] leaves the family domain [", target.family.x_min, ", ",
                                     target.family.x_max, "]"));
    }
    xs = grid.points();
  }

  struct QEntry {
    double q;
    bool is_inf;
  };
  std::vector<QEntry> q_entries;
  if (criterion_uses_q(criterion)) {
    for (double q : qs) q_entries.push_back({q, false});
    if (has_inf) q_entries.push_back({0.0, true});
  } else {
    q_entries.push_back({0.0, false});  // q column stays empty
  }

  struct Cell {
    std::string value, verdict, error;
  };
  std::vector<Cell> cells(xs.size() * q_entries.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= cells.size()) return;
      std::size_t xi = i / q_entries.size(), qi = i % q_entries.size();
      try {
        DensityMatrix rho = target.fixed_state ? *target.fixed_state : target.family(xs[xi]);
        double v = evaluate_criterion(rho, target.cut, criterion, q_entries[qi].q,
                                      q_entries[qi].is_inf);
        cells[i].value = csv_double(v);
        cells[i].verdict = verdict_name(classify(v));
      } catch (const std::exception& e) {
        cells[i].error = csv_quote(e.what());
      }
    }
  };
  int nthreads = std::max(1, std::min<int>(threads, static_cast<int>(cells.size())));
  std::vector<std::thread> pool;
  for (int t = 1; t < nthreads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  CsvWriter csv(out_path);
  csv.row({"x", "q", "criterion", "value", "verdict", "error"});
  for (std::size_t xi = 0; xi < xs.size(); ++xi) {
    for (std::size_t qi = 0; qi < q_entries.size(); ++qi) {
      const Cell& c = cells[xi * q_entries.size() + qi];
      std::string xcell = target.fixed_state ? "" : csv_double(xs[xi]);
      std::string qcell;
      if (criterion_uses_q(criterion)) {
        qcell = q_entries[qi].is_inf ? "inf" : csv_double(q_entries[qi].q);
      }
      csv.row({xcell, qcell, criterion, c.value, c.verdict, c.error});
    }
  }
  csv.commit();
  return kExitOk;
}

int cmd_threshold(const FamilyOptions& fo, const std::string& cut_text, const std::string& q_text,
                  const std::string& criterion, double tol, const std::string& out_path) {
  bool has_inf = false;
  std::vector<double> qs = parse_q_list(q_text, has_inf);
  if (criterion_uses_q(criterion)) {
    if (static_cast<int>(qs.size()) + (has_inf ? 1 : 0) != 1) {
      throw InvalidInput("threshold needs exactly one q value (a number or 'inf')");
    }
  }
  ResolvedTarget target = resolve_target(fo, cut_text);
  if (target.fixed_state) {
    throw InvalidInput("threshold searches a family's noise parameter; use a --family");
  }
  double q = has_inf || qs.empty() ? 0.0 : qs[0];
  Criterion crit = bisection_criterion(criterion, has_inf);
  ThresholdResult r = threshold(target.family, target.cut, crit, q, target.family.x_min,
                                target.family.x_max, tol);
  if (!r.crossing_found) {
    std::cout << "no crossing: criterion=" << criterion << " family=" << target.family.name
              << " margin(" << csv_double(r.lo) << ")=" << csv_double(r.f_lo) << " margin("
              << csv_double(r.hi) << ")=" << csv_double(r.f_hi) << "\n";
    return kExitOk;
  }
  std::cout << "criterion=" << criterion << " family=" << target.family.name
            << " x_star=" << csv_double(r.x_star) << " bracket=[" << csv_double(r.lo) << ","
            << csv_double(r.hi) << "] tol=" << csv_double(r.tol) << " iterations=" << r.iterations
            << "\n";
  if (!out_path.empty()) {
    bool fresh = !std::filesystem::exists(out_path);
    std::ofstream out(out_path, std::ios::binary | std::ios::app);
    if (!out) throw InvalidInput(detail::msg("cannot open '", out_path, "' for appending"));
    if (fresh) out << "family,criterion,q,x_star,lo,hi,tol,iterations\n";
    out << target.family.name << "," << criterion << "," << (has_inf ? "inf" : csv_double(q))
        << "," << csv_double(r.x_star) << "," << csv_double(r.lo) << "," << csv_double(r.hi)
        << "," << csv_double(r.tol) << "," << r.iterations << "\n";
  }
  return kExitOk;
}

int cmd_trace(const FamilyOptions& fo, const std::string& cut_text,
              const std::string& criteria_text, const std::string& q_grid_text,
              const std::string& q_text, double tol, const std::string& out_path) {
  ResolvedTarget target = resolve_target(fo, cut_text);
  if (target.fixed_state) throw InvalidInput("trace needs a --family");
  std::vector<std::string> criteria;
  std::size_t pos = 0;
  while (pos <= criteria_text.size()) {
    std::size_t next = criteria_text.find(',', pos);
    criteria.push_back(criteria_text.substr(
        pos, next == std::string::npos ? std::string::npos : next - pos));
    if (next == std::string::npos) break;
    pos = next + 1;
  }
  for (const std::string& c : criteria) {
    if (c != "cstre" && c != "ar") {
      throw InvalidInput(detail::msg("trace criteria must be cstre or ar, got '", c, "'"));
    }
  }
  std::vector<double> q_grid;
  if (!q_grid_text.empty()) {
    // lo:hi:count, geometric spacing
    std::size_t c1 = q_grid_text.find(':'), c2 = q_grid_text.rfind(':');
    if (c1 == std::string::npos || c2 == c1) {
      throw InvalidInput("--q-grid must be lo:hi:count (geometric spacing)");
    }
    double lo = 0, hi = 0;
    int count = 0;
    try {
      lo = std::stod(q_grid_text.substr(0, c1));
      hi = std::stod(q_grid_text.substr(c1 + 1, c2 - c1 - 1));
      count = std::stoi(q_grid_text.substr(c2 + 1));
    } catch (const std::exception&) {
      throw InvalidInput(detail::msg("bad --q-grid '", q_grid_text, "'"));
    }
    if (!(lo > 1.0) || hi < lo || count < 2 || hi > kMaxQ) {
      throw InvalidInput("--q-grid needs 1 < lo <= hi <= 1e6 and count >= 2");
    }
    double step = std::log(hi / lo) / (count - 1);
    for (int i = 0; i < count; ++i) q_grid.push_back(lo * std::exp(i * step));
    q_grid.back() = hi;  // the exp/log round trip can overshoot by an ulp
  } else {
    bool has_inf = false;
    q_grid = parse_q_list(q_text, has_inf);
    if (has_inf) throw InvalidInput("trace q values must be finite (> 1)");
  }
  std::vector<ConvergenceTrace> traces;
  for (const std::string& c : criteria) {
    traces.push_back(convergence_trace(target.family, target.cut,
                                       c == "cstre" ? Criterion::CSTRE_at_q : Criterion::AR_at_q,
                                       q_grid, tol));
  }
  CsvWriter csv(out_path);
  std::vector<std::string> header{"q"};
  for (const std::string& c : criteria) header.push_back("x_" + c);
  csv.row(header);
  for (std::size_t i = 0; i < q_grid.size(); ++i) {
    std::vector<std::string> row{csv_double(q_grid[i])};
    for (const ConvergenceTrace& tr : traces) {
      row.push_back(tr.rows[i].found ? csv_double(tr.rows[i].x) : "no-crossing");
    }
    csv.row(row);
  }
  csv.commit();
  return kExitOk;
}

std::string pow_frac(const std::string& base, const std::string& expo) {
  return "(" + base + ")^(" + expo + ")";
}

void print_w_row(int N) {
  std::string np1 = std::to_string(N + 1), n = std::to_string(N);
  std::string nm2 = std::to_string(N - 2), nm1 = std::to_string(N - 1);
  std::printf("  lambda1 (x%d) = ((1-x)/%s)*%s\n", N - 2, np1.c_str(),
              pow_frac("(1-x)/" + n, "(1-q)/q").c_str());
  std::printf("  lambda2 (x1) = ((1-x)/%s)*%s\n", np1.c_str(),
              pow_frac("1/" + n, "(1-q)/q").c_str());
  std::printf("  lambda3 (x1) = ((1-x)/%s)*%s*[%s*%s + 2*%s]\n", np1.c_str(),
              pow_frac("1/" + n, "1/q").c_str(), nm2.c_str(),
              pow_frac("1-x", "(1-q)/q").c_str(),
              pow_frac("1+" + nm2 + "*x", "(1-q)/q").c_str());
  std::printf("  lambda4 (x1) = ((1+%s*x)/%s)*%s*[1 + %s*%s]\n", n.c_str(), np1.c_str(),
              pow_frac("1/" + n, "1/q").c_str(), nm1.c_str(),
              pow_frac("1+" + nm2 + "*x", "(1-q)/q").c_str());
}

void print_ghz_row(int N) {
  std::string np1 = std::to_string(N + 1), n = std::to_string(N);
  std::string nm2 = std::to_string(N - 2), nm1 = std::to_string(N - 1);
  std::string twon = std::to_string(2 * N);
  std::string mid = pow_frac("(2+" + nm2 + "*x)/" + twon, "(1-q)/q");
  if (N == 3) {
    std::printf("  mu1 (x0) = --\n");
  } else {
    std::printf("  mu1 (x%d) = ((1-x)/%s)*%s\n", N - 3, np1.c_str(),
                pow_frac("(1-x)/" + n, "(1-q)/q").c_str());
  }
  std::printf("  mu2 (x1) = ((1-x)/%s)*%s\n", np1.c_str(), mid.c_str());
  std::printf("  mu3 (x1) = ((1+%s*x)/%s)*%s\n", n.c_str(), np1.c_str(), mid.c_str());
  std::printf("  mu4 (x2) = ((1-x)/%s)*%s*[%s*%s + %s]\n", np1.c_str(),
              pow_frac("1/" + n, "1/q").c_str(), nm1.c_str(),
              pow_frac("1-x", "(1-q)/q").c_str(),
              pow_frac("1+" + std::to_string(N / 2 - 1) +
                           (N % 2 ? ".5" : "") + "*x",
                       "(1-q)/q")
                  .c_str());
}

int cmd_tables() {
  const std::vector<std::pair<double, double>> samples = {{1.5, 0.1}, {2.0, 0.3}, {5.0, 0.05}};
  double worst = 0.0;
  for (int which = 0; which < 2; ++which) {
    std::printf("%s family, nonzero sandwiched-matrix eigenvalues (multiplicity in parens):\n",
                which == 0 ? "noisy W" : "noisy GHZ");
    for (int N = 3; N <= 6; ++N) {
      std::printf("N = %d\n", N);
      if (which == 0) {
        print_w_row(N);
      } else {
        print_ghz_row(N);
      }
      StateFamily fam = which == 0 ? noisy_w_family(N) : noisy_ghz_family(N);
      std::vector<int> rest(N - 1);
      for (int f = 1; f < N; ++f) rest[f - 1] = f;
      BipartiteCut cut = BipartiteCut::make({0}, rest, N);
      double residual = 0.0;
      for (auto [q, x] : samples) {
        DensityMatrix rho = fam(x);
        HermitianOperator sigma = conditioning_operator(rho, cut);
        Spectrum dense = detail::sandwich_spectrum(rho, sigma, (1.0 - q) / (2.0 * q), kSupportTol);
        Eigen::VectorXd closed = (which == 0 ? w_family_sandwich_spectrum(N, q, x)
                                             : ghz_family_sandwich_spectrum(N, q, x))
                                     .expanded_descending();
        for (Eigen::Index i = 0; i < closed.size(); ++i) {
          residual = std::max(residual, std::abs(dense.eigenvalues(i) - closed(i)));
        }
      }
      std::printf("  residual vs dense spectrum over (q,x) samples: %.3e\n", residual);
      worst = std::max(worst, residual);
    }
    std::printf("\n");
  }
  std::printf("closed-form 1:N-1 thresholds:\n");
  std::printf("  %-4s  %-22s  %-22s  %-22s\n", "N", "W cstre", "GHZ cstre/ar", "W ar");
  for (int N = 3; N <= 10; ++N) {
    std::printf("  %-4d  %-22.12g  %-22.12g  %-22.12g\n", N,
                closed_form_threshold(ClosedFormThreshold::WCstre, N),
                closed_form_threshold(ClosedFormThreshold::GhzCstre, N),
                closed_form_threshold(ClosedFormThreshold::WAr, N));
  }
  if (worst > 1e-9) {
    std::printf("\nresidual %.3e exceeds 1e-9\n", worst);
    return kExitCheckFailure;
  }
  return kExitOk;
}

int cmd_check() {
  std::vector<CriterionResult> results = run_acceptance();
  bool all = true;
  for (const CriterionResult& r : results) {
    std::printf("[%s] %d: %s\n", r.pass ? "PASS" : "FAIL", r.index, r.name.c_str());
    for (const std::string& d : r.details) std::printf("    %s\n", d.c_str());
    all = all && r.pass;
  }
  std::printf("%s\n", all ? "all checks passed" : "CHECK FAILURES PRESENT");
  return all ? kExitOk : kExitCheckFailure;
}

int cmd_convert(const std::string& in_path, const std::string& out_path) {
  save_state(load_state(in_path), out_path);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"separability analysis via conditional sandwiched Tsallis relative entropy"};
  app.require_subcommand(1);

  FamilyOptions fo;
  std::string cut_text = "1:rest";
  std::string q_text = "2";
  std::string grid_text = "0:1:0.01";
  std::string criterion = "cstre";
  std::string criteria_text = "cstre,ar";
  std::string q_grid_text;
  std::string out_path;
  std::string in_path;
  double tol = 1e-8;
  int threads = static_cast<int>(std::thread::hardware_concurrency());
  if (threads < 1) threads = 1;

  auto add_family_flags = [&](CLI::App* cmd) {
    cmd->add_option("--family", fo.family,
                    "family: w, ghz, wwbar, custom-sym, nonsym-w, qudit-ghz, isotropic, xstate");
    cmd->add_option("--n", fo.n, "number of qubits/qudits");
    cmd->add_option("--d", fo.d, "local dimension for qudit families");
    cmd->add_option("--phi", fo.phi, "Dicke coefficients c0,...,cN for custom-sym");
    cmd->add_option("--state-file", fo.state_file, "evaluate a stored state instead of a family");
    cmd->add_option("--cut", cut_text, "bipartition: 'm:rest', 'm:k', or lists '0,2:1,3'");
  };

  CLI::App* scan = app.add_subcommand("scan", "tabulate a criterion over an x grid and q list");
  add_family_flags(scan);
  scan->add_option("--criterion", criterion, "cstre, ar, renyi, vn, ppt, reduction");
  scan->add_option("--q", q_text, "comma list of q values and/or 'inf'");
  scan->add_option("--x-grid", grid_text, "start:stop:step");
  scan->add_option("--threads", threads, "worker threads (output order is fixed)");
  scan->add_option("--out", out_path, "output CSV path")->required();

  CLI::App* thr = app.add_subcommand("threshold", "bisect a criterion's sign change in x");
  add_family_flags(thr);
  thr->add_option("--criterion", criterion, "cstre, ar, renyi, vn, ppt, reduction");
  thr->add_option("--q", q_text, "a single q value or 'inf'");
  thr->add_option("--tol", tol, "bisection tolerance");
  thr->add_option("--out", out_path, "optional CSV to append the result to");

  CLI::App* trace = app.add_subcommand("trace", "crossing x(q) over a q grid per criterion");
  add_family_flags(trace);
  trace->add_option("--criteria", criteria_text, "comma list out of cstre, ar");
  trace->add_option("--q-grid", q_grid_text, "lo:hi:count geometric q grid");
  trace->add_option("--q", q_text, "explicit comma list of q values (alternative to --q-grid)");
  trace->add_option("--tol", tol, "bisection tolerance");
  trace->add_option("--out", out_path, "output CSV path")->required();

  CLI::App* tables =
      app.add_subcommand("tables", "closed-form spectra with dense-spectrum residuals");
  CLI::App* check = app.add_subcommand("check", "run the full verification battery");
  CLI::App* convert = app.add_subcommand("convert", "state-file round trip (validates)");
  convert->add_option("--in", in_path, "input state file")->required();
  convert->add_option("--out", out_path, "output state file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInvalidInput;
  }

  try {
    if (scan->parsed()) return cmd_scan(fo, cut_text, q_text, grid_text, out_path, criterion,
                                        threads);
    if (thr->parsed()) return cmd_threshold(fo, cut_text, q_text, criterion, tol, out_path);
    if (trace->parsed()) {
      return cmd_trace(fo, cut_text, criteria_text, q_grid_text, q_text, tol, out_path);
    }
    if (tables->parsed()) return cmd_tables();
    if (check->parsed()) return cmd_check();
    if (convert->parsed()) return cmd_convert(in_path, out_path);
  } catch (const qsep::InvalidInput& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalidInput;
  } catch (const qsep::NumericalFailure& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumericalFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumericalFailure;
  }
  return kExitOk;
}
