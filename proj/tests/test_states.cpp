#include "qsep/states.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "test_util.hpp"

namespace qsep {
namespace {

namespace fs = std::filesystem;

fs::path temp_file(const std::string& name) {
  return fs::temp_directory_path() / ("qsep_test_" + name);
}

double min_eigenvalue(const DensityMatrix& rho) {
  Spectrum s = eig(rho.op, false);
  return s.eigenvalues(s.eigenvalues.size() - 1);
}

// ---------------------------------------------------------------------------
// Dicke states
// ---------------------------------------------------------------------------

TEST(Dicke, ThreeQubitSingleExcitation) {
  Eigen::VectorXd w = dicke_state(3, 1);
  double amp = 1.0 / std::sqrt(3.0);
  for (int i = 0; i < 8; ++i) {
    int weight = __builtin_popcount(static_cast<unsigned>(i));
    EXPECT_NEAR(w(i), weight == 1 ? amp : 0.0, 1e-15) << "index " << i;
  }
}

TEST(Dicke, ZeroExcitationIsAllZeros) {
  Eigen::VectorXd d = dicke_state(2, 0);
  EXPECT_NEAR(d(0), 1.0, 1e-15);
  EXPECT_NEAR(d.tail(3).norm(), 0.0, 1e-15);
}

TEST(Dicke, BinomialAmplitudeCount) {
  Eigen::VectorXd d = dicke_state(4, 2);
  int support = 0;
  for (int i = 0; i < 16; ++i) {
    if (d(i) != 0.0) {
      ++support;
      EXPECT_NEAR(d(i), 1.0 / std::sqrt(6.0), 1e-15);
    }
  }
  EXPECT_EQ(support, 6);
}

TEST(Dicke, BasisOrthonormalAndRange) {
  DickeBasis basis = DickeBasis::make(5);
  Eigen::MatrixXd gram = basis.vectors.transpose() * basis.vectors;
  EXPECT_LT((gram - Eigen::MatrixXd::Identity(6, 6)).norm(), 1e-12);
  EXPECT_GE(basis.vectors.minCoeff(), 0.0);  // amplitudes real and nonnegative
  EXPECT_THROW(dicke_state(3, 4), InvalidInput);
  EXPECT_THROW(dicke_state(3, -1), InvalidInput);
}

TEST(Dicke, GhzAndWwbar) {
  Eigen::VectorXd g = ghz_state(3);
  EXPECT_NEAR(g(0), 1.0 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(g(7), 1.0 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(g.segment(1, 6).norm(), 0.0, 1e-15);

  for (int N : {3, 4, 6}) {
    EXPECT_NEAR(wwbar_state(N).norm(), 1.0, 1e-12);
    EXPECT_NEAR(ghz_state(N).norm(), 1.0, 1e-12);
  }
  Eigen::VectorXd ww3 = wwbar_state(3);
  Eigen::VectorXd expected = (dicke_state(3, 1) + dicke_state(3, 2)) / std::sqrt(2.0);
  EXPECT_LT((ww3 - expected).norm(), 1e-14);
  EXPECT_THROW(wwbar_state(2), InvalidInput);

  // N = 2 is the Bell state; its single-qubit marginal is I/2.
  Eigen::VectorXd bell = ghz_state(2);
  Matrix pure = (bell * bell.transpose()).cast<Complex>();
  DensityMatrix rho = DensityMatrix::make({2, 2}, std::move(pure));
  EXPECT_LT(test::frobenius_distance(partial_trace(rho, {1}).op.mat,
                                     0.5 * Matrix::Identity(2, 2)),
            1e-15);
}

// ---------------------------------------------------------------------------
// symmetric noisy families
// ---------------------------------------------------------------------------

TEST(SymmetricFamily, MaximallyMixedAtZero) {
  StateFamily f = noisy_w_family(4);
  Spectrum s = eig(f(0.0).op, false);
  for (int i = 0; i < 5; ++i) EXPECT_NEAR(s.eigenvalues(i), 0.2, 1e-12);
  for (int i = 5; i < 16; ++i) EXPECT_NEAR(s.eigenvalues(i), 0.0, 1e-12);
}

TEST(SymmetricFamily, PureAtOne) {
  StateFamily f = noisy_w_family(3);
  Eigen::VectorXd w = dicke_state(3, 1);
  Matrix expected = (w * w.transpose()).cast<Complex>();
  EXPECT_LT(test::frobenius_distance(f(1.0).op.mat, expected), 1e-12);
}

TEST(SymmetricFamily, MidpointSpectrumN3) {
  // In the Dicke basis the state is ((1-x)/4) I_4 + x e_1 e_1^T, so at x = 0.5
  // the eigenvalues are 0.125 (x3) and 0.625.
  Spectrum s = eig(noisy_w_family(3)(0.5).op, false);
  EXPECT_NEAR(s.eigenvalues(0), 0.625, 1e-12);
  for (int i = 1; i < 4; ++i) EXPECT_NEAR(s.eigenvalues(i), 0.125, 1e-12);
  for (int i = 4; i < 8; ++i) EXPECT_NEAR(s.eigenvalues(i), 0.0, 1e-12);
}

TEST(SymmetricFamily, RejectsNonSymmetricPureState) {
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(8);
  psi(1) = 1.0;  // |001>, not symmetric
  try {
    symmetric_noisy_family(3, psi);
    FAIL() << "expected rejection";
  } catch (const InvalidInput& e) {
    EXPECT_NE(std::string(e.what()).find("residual"), std::string::npos);
  }
}

TEST(SymmetricFamily, AcceptsFullSpaceSymmetricInput) {
  StateFamily via_full = symmetric_noisy_family(4, wwbar_state(4).cast<Complex>());
  StateFamily via_coeffs = noisy_wwbar_family(4);
  EXPECT_LT(test::frobenius_distance(via_full(0.3).op.mat, via_coeffs(0.3).op.mat), 1e-12);
}

TEST(SymmetricFamily, ValidDensityMatricesAcrossGrid) {
  for (int N : {3, 5}) {
    StateFamily comp = compress_symmetric(noisy_w_family(N), 1);
    for (int i = 0; i <= 100; ++i) {
      DensityMatrix rho = comp(i / 100.0);
      EXPECT_NEAR(rho.op.mat.trace().real(), 1.0, 1e-10);
      EXPECT_GE(min_eigenvalue(rho), -1e-10);
    }
  }
}

TEST(SymmetricFamily, AffineInX) {
  for (const StateFamily& f :
       {noisy_w_family(4), noisy_ghz_family(4), isotropic_qutrit_family()}) {
    Matrix mid = f(0.5).op.mat;
    Matrix interp = 0.5 * (f(0.0).op.mat + f(1.0).op.mat);
    EXPECT_LT(test::frobenius_distance(mid, interp), 1e-12);
  }
  StateFamily xf = qubit_qutrit_x_family();
  Matrix mid = xf(0.125).op.mat;
  Matrix interp = 0.5 * (xf(0.0).op.mat + xf(0.25).op.mat);
  EXPECT_LT(test::frobenius_distance(mid, interp), 1e-15);
}

TEST(SymmetricFamily, SingleQubitMarginals) {
  // W family: diag((N+(N-2)x)/2N, (N-(N-2)x)/2N) for N = 3..10.
  for (int N = 3; N <= 10; ++N) {
    StateFamily comp = compress_symmetric(noisy_w_family(N), 1);
    for (double x : {0.0, 0.25, 0.6, 1.0}) {
      DensityMatrix marg = partial_trace(comp(x), {0});
      EXPECT_NEAR(marg.op.mat(0, 0).real(), (N + (N - 2.0) * x) / (2.0 * N), 1e-12);
      EXPECT_NEAR(marg.op.mat(1, 1).real(), (N - (N - 2.0) * x) / (2.0 * N), 1e-12);
    }
  }
  // GHZ (all N) and W+obverse-W (N >= 4): maximally mixed for every x.
  for (int N = 3; N <= 8; ++N) {
    StateFamily ghz = compress_symmetric(noisy_ghz_family(N), 1);
    for (double x : {0.0, 0.5, 1.0}) {
      EXPECT_LT(test::frobenius_distance(partial_trace(ghz(x), {0}).op.mat,
                                         0.5 * Matrix::Identity(2, 2)),
                1e-12);
    }
    if (N >= 4) {
      StateFamily ww = compress_symmetric(noisy_wwbar_family(N), 1);
      for (double x : {0.0, 0.5, 1.0}) {
        EXPECT_LT(test::frobenius_distance(partial_trace(ww(x), {0}).op.mat,
                                           0.5 * Matrix::Identity(2, 2)),
                  1e-12);
      }
    }
  }
  // The 3-qubit W+obverse-W marginal picks up an off-diagonal 2x/6.
  StateFamily ww3 = compress_symmetric(noisy_wwbar_family(3), 1);
  DensityMatrix marg = partial_trace(ww3(0.3), {0});
  EXPECT_NEAR(marg.op.mat(0, 0).real(), 0.5, 1e-12);
  EXPECT_NEAR(marg.op.mat(0, 1).real(), 2.0 * 0.3 / 6.0, 1e-12);
}

// ---------------------------------------------------------------------------
// other families
// ---------------------------------------------------------------------------

TEST(NonSymmetricFamily, WhiteNoiseAtZeroAndRankOneSpectrum) {
  Eigen::VectorXcd w3 = dicke_state(3, 1).cast<Complex>();
  StateFamily f = nonsymmetric_noisy_family(3, w3);
  EXPECT_LT(test::frobenius_distance(f(0.0).op.mat, Matrix::Identity(8, 8) / 8.0), 1e-15);
  for (double x : {0.2, 0.7}) {
    Spectrum s = eig(f(x).op, false);
    EXPECT_NEAR(s.eigenvalues(0), (1.0 - x) / 8.0 + x, 1e-12);
    for (int i = 1; i < 8; ++i) EXPECT_NEAR(s.eigenvalues(i), (1.0 - x) / 8.0, 1e-12);
  }
}

TEST(QuditFamily, IsotropicPurePartAndPurity) {
  Eigen::VectorXcd phi = qudit_ghz_vector(2, 3);
  EXPECT_NEAR(std::abs(phi(0)), 1.0 / std::sqrt(3.0), 1e-15);
  EXPECT_NEAR(std::abs(phi(4)), 1.0 / std::sqrt(3.0), 1e-15);
  EXPECT_NEAR(std::abs(phi(8)), 1.0 / std::sqrt(3.0), 1e-15);
  StateFamily f = qudit_noisy_family(2, 3, phi);
  EXPECT_LT(test::frobenius_distance(f(0.0).op.mat, Matrix::Identity(9, 9) / 9.0), 1e-15);
  for (double x : {0.1, 0.5, 0.9}) {
    double purity = (f(x).op.mat * f(x).op.mat).trace().real();
    double expected = ((1.0 - x) * (1.0 - x) + 2.0 * x * (1.0 - x)) / 9.0 + x * x;
    EXPECT_NEAR(purity, expected, 1e-12);
  }
}

TEST(IsotropicFamily, CoefficientsAndMarginals) {
  StateFamily f = isotropic_qutrit_family();
  EXPECT_LT(test::frobenius_distance(f(1.0 / 9.0).op.mat, Matrix::Identity(9, 9) / 9.0), 1e-15);
  for (double x : {0.0, 0.3, 1.0}) {
    DensityMatrix rho = f(x);
    EXPECT_LT(test::frobenius_distance(partial_trace(rho, {0}).op.mat,
                                       Matrix::Identity(3, 3) / 3.0),
              1e-12);
    EXPECT_LT(test::frobenius_distance(partial_trace(rho, {1}).op.mat,
                                       Matrix::Identity(3, 3) / 3.0),
              1e-12);
  }
  Eigen::VectorXcd phi = qudit_ghz_vector(2, 3);
  EXPECT_LT(test::frobenius_distance(f(1.0).op.mat, (phi * phi.adjoint()).eval()), 1e-15);
}

TEST(XFamily, MarginalsDomainAndDiagonalStart) {
  StateFamily f = qubit_qutrit_x_family();
  for (double x : {0.0, 0.1, 0.25}) {
    DensityMatrix rho = f(x);
    DensityMatrix qutrit = partial_trace(rho, {1});
    EXPECT_NEAR(qutrit.op.mat(0, 0).real(), 3.0 / 8.0, 1e-15);
    EXPECT_NEAR(qutrit.op.mat(1, 1).real(), 2.0 / 8.0, 1e-15);
    EXPECT_NEAR(qutrit.op.mat(2, 2).real(), 3.0 / 8.0, 1e-15);
    EXPECT_LT(test::frobenius_distance(partial_trace(rho, {0}).op.mat,
                                       0.5 * Matrix::Identity(2, 2)),
              1e-15);
    EXPECT_GE(min_eigenvalue(rho), -1e-12);  // PSD across the whole domain, x = 1/4 included
  }
  BipartiteCut cut = BipartiteCut::make({0}, {1}, 2);
  Spectrum pt = eig(partial_transpose(f(0.0), cut), false);
  EXPECT_GE(pt.eigenvalues(pt.eigenvalues.size() - 1), -1e-15);
  EXPECT_THROW(f(0.3), InvalidInput);
  EXPECT_THROW(f(-0.01), InvalidInput);
}

// ---------------------------------------------------------------------------
// compression
// ---------------------------------------------------------------------------

TEST(Compression, BranchingExampleN3) {
  // |D_1^3> = sqrt(2/3) |0>|D_1^2> + sqrt(1/3) |1>|D_0^2>
  EXPECT_NEAR(branching_coefficient(3, 1, 1, 0), std::sqrt(2.0 / 3.0), 1e-15);
  EXPECT_NEAR(branching_coefficient(3, 1, 1, 1), std::sqrt(1.0 / 3.0), 1e-15);
  Eigen::MatrixXd comp = compressed_dicke_matrix(3, 1);
  Eigen::VectorXd d1 = comp.col(1);  // coordinates (j, k-j) with row = j*3 + (k-j)
  EXPECT_NEAR(d1(1), std::sqrt(2.0 / 3.0), 1e-15);
  EXPECT_NEAR(d1(3), std::sqrt(1.0 / 3.0), 1e-15);
}

TEST(Compression, BranchingRowsAreNormalized) {
  // Vandermonde: sum_j c(k,j)^2 = 1 for every k.
  for (int N : {4, 9, 64}) {
    for (int m : {1, 2, N / 2}) {
      for (int k = 0; k <= N; ++k) {
        double sum = 0.0;
        for (int j = 0; j <= m; ++j) {
          double c = branching_coefficient(N, m, k, j);
          sum += c * c;
        }
        EXPECT_NEAR(sum, 1.0, 1e-12) << "N=" << N << " m=" << m << " k=" << k;
      }
    }
  }
}

TEST(Compression, MirrorSplitSwapsCoefficients) {
  // c over the m : N-m split equals c over N-m : m with the two sides swapped.
  int N = 6;
  for (int k = 0; k <= N; ++k) {
    for (int j = 0; j <= 1; ++j) {
      EXPECT_NEAR(branching_coefficient(N, 1, k, j), branching_coefficient(N, N - 1, k, k - j),
                  1e-14);
    }
  }
}

TEST(Compression, FullAndCompressedSpectraAgree) {
  for (int N = 3; N <= 8; ++N) {
    for (StateFamily (*make_fam)(int) :
         {&noisy_w_family, &noisy_ghz_family, &noisy_wwbar_family}) {
      StateFamily full = (*make_fam)(N);
      StateFamily comp = compress_symmetric(full, 1);
      for (double x : {0.0, 0.4, 1.0}) {
        Eigen::VectorXd ef = eig(full(x).op, false).eigenvalues;
        Eigen::VectorXd ec = eig(comp(x).op, false).eigenvalues;
        for (Eigen::Index i = 0; i < ec.size(); ++i) {
          EXPECT_NEAR(ec(i), ef(i), 1e-10) << full.name << " x=" << x << " i=" << i;
        }
        for (Eigen::Index i = ec.size(); i < ef.size(); ++i) {
          EXPECT_NEAR(ef(i), 0.0, 1e-10);
        }
      }
    }
  }
}

TEST(Compression, EmbeddingReproducesFullState) {
  for (int N : {3, 5, 8}) {
    for (int m : {1, 2}) {
      StateFamily full = noisy_w_family(N);
      SymmetricCutRepresentation rep = symmetric_cut_representation(full, m, 0.35);
      EXPECT_EQ(rep.matrix.op.dims, (std::vector<int>{m + 1, N - m + 1}));
      EXPECT_NEAR(rep.matrix.op.mat.trace().real(), 1.0, 1e-10);
      EXPECT_GE(min_eigenvalue(rep.matrix), -1e-10);
      DensityMatrix embedded = rep.embed_full();
      EXPECT_LT(test::frobenius_distance(embedded.op.mat, full(0.35).op.mat), 1e-10);
    }
  }
}

TEST(Compression, RejectsInvalidRequests) {
  Eigen::VectorXcd w3 = dicke_state(3, 1).cast<Complex>();
  StateFamily ns = nonsymmetric_noisy_family(3, w3);
  EXPECT_THROW(compress_symmetric(ns, 1), InvalidInput);
  StateFamily w = noisy_w_family(4);
  EXPECT_THROW(compress_symmetric(w, 0), InvalidInput);
  EXPECT_THROW(compress_symmetric(w, 4), InvalidInput);
  StateFamily comp = compress_symmetric(w, 1);
  EXPECT_THROW(compress_symmetric(comp, 1), InvalidInput);  // already compressed
}

TEST(Compression, LargeNStaysCheap) {
  int N = 64;
  Eigen::VectorXcd c = Eigen::VectorXcd::Zero(N + 1);
  c(1) = 1.0;
  StateFamily f = compress_symmetric(N, c, 1, FamilyKind::NoisyW);
  DensityMatrix rho = f(0.5);
  EXPECT_EQ(rho.op.order(), 2 * N);
  EXPECT_NEAR(rho.op.mat.trace().real(), 1.0, 1e-10);
  EXPECT_GE(min_eigenvalue(rho), -1e-10);
}

// ---------------------------------------------------------------------------
// state files
// ---------------------------------------------------------------------------

TEST(StateFiles, RoundTripIsEntrywiseExact) {
  test::Rng rng(61);
  DensityMatrix rho = test::random_density(rng, {2, 3});
  fs::path p = temp_file("roundtrip.json");
  save_state(rho, p.string());
  DensityMatrix back = load_state(p.string());
  EXPECT_EQ(back.op.dims, rho.op.dims);
  EXPECT_TRUE((back.op.mat.array() == rho.op.mat.array()).all());
  fs::remove(p);
}

TEST(StateFiles, TraceErrorNamesTheTrace) {
  fs::path p = temp_file("badtrace.json");
  {
    std::ofstream out(p);
    out << R"({"dims": [2], "matrix": [[[0.5, 0], [0, 0]], [[0, 0], [0.4, 0]]]})";
  }
  try {
    load_state(p.string());
    FAIL() << "expected rejection";
  } catch (const InvalidInput& e) {
    EXPECT_NE(std::string(e.what()).find("0.9"), std::string::npos);
  }
  fs::remove(p);
}

TEST(StateFiles, DistinctErrorsForEachFailureMode) {
  fs::path p = temp_file("badfile.json");
  auto write = [&](const std::string& text) {
    std::ofstream out(p, std::ios::trunc);
    out << text;
  };

  write("not json at all {");
  EXPECT_THROW(load_state(p.string()), InvalidInput);

  write(R"({"dims": [2, 2], "matrix": [[[1, 0]]]})");
  try {
    load_state(p.string());
    FAIL();
  } catch (const InvalidInput& e) {
    EXPECT_NE(std::string(e.what()).find("dims mismatch"), std::string::npos);
  }

  write(R"({"dims": [2], "matrix": [[[0.5, 0], [0.5, 0]], [[-0.5, 0], [0.5, 0]]]})");
  try {
    load_state(p.string());
    FAIL();
  } catch (const InvalidInput& e) {
    EXPECT_NE(std::string(e.what()).find("Hermitian"), std::string::npos);
  }

  // Hermitian, trace 1, but indefinite.
  write(R"({"dims": [2], "matrix": [[[1.5, 0], [0, 0]], [[0, 0], [-0.5, 0]]]})");
  try {
    load_state(p.string());
    FAIL();
  } catch (const InvalidInput& e) {
    EXPECT_NE(std::string(e.what()).find("positive semidefinite"), std::string::npos);
  }
  fs::remove(p);
}

TEST(StateFiles, HandTypedXStateMatchesFactory) {
  // The 6x6 X-state matrix at x = 1/8, entered digit by digit.
  fs::path p = temp_file("xstate.json");
  {
    std::ofstream out(p);
    out << R"({"dims": [2, 3], "matrix": [
      [[0.25, 0], [0, 0], [0, 0], [0, 0], [0, 0], [0.125, 0]],
      [[0, 0], [0.125, 0], [0, 0], [0, 0], [0, 0], [0, 0]],
      [[0, 0], [0, 0], [0.125, 0], [0, 0], [0, 0], [0, 0]],
      [[0, 0], [0, 0], [0, 0], [0.125, 0], [0, 0], [0, 0]],
      [[0, 0], [0, 0], [0, 0], [0, 0], [0.125, 0], [0, 0]],
      [[0.125, 0], [0, 0], [0, 0], [0, 0], [0, 0], [0.25, 0]]]})";
  }
  DensityMatrix loaded = load_state(p.string());
  DensityMatrix factory = qubit_qutrit_x_family()(0.125);
  EXPECT_LT(test::frobenius_distance(loaded.op.mat, factory.op.mat), 1e-15);
  fs::remove(p);
}

}  // namespace
}  // namespace qsep
