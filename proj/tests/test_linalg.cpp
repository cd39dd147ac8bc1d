#include <doctest.h>

#include <cmath>

#include "dca/errors.hpp"
#include "dca/linalg.hpp"
#include "oracles.hpp"

using namespace dca::linalg;

namespace {

double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

Matrix random_psd(Index n, Index rank, std::uint64_t seed) {
  const Matrix x = oracle::gaussian(rank, n, seed);
  return x.transpose() * x;
}

Matrix random_pd(Index n, std::uint64_t seed) {
  return random_psd(n, n + 2, seed) + 0.5 * Matrix::Identity(n, n);
}

}  // namespace

TEST_CASE("qr_thin: identity and 3-4-5 column") {
  const QrResult id = qr_thin(Matrix::Identity(3, 3));
  CHECK(max_abs(id.q - Matrix::Identity(3, 3)) == doctest::Approx(0.0));
  CHECK(max_abs(id.r - Matrix::Identity(3, 3)) == doctest::Approx(0.0));

  Matrix col(2, 1);
  col << 3.0, 4.0;
  const QrResult qr = qr_thin(col);
  CHECK(qr.q(0, 0) == doctest::Approx(0.6).epsilon(1e-15));
  CHECK(qr.q(1, 0) == doctest::Approx(0.8).epsilon(1e-15));
  CHECK(qr.r(0, 0) == doctest::Approx(5.0).epsilon(1e-15));
}

TEST_CASE("qr_thin: recomposition, orthonormality and sign convention") {
  for (const auto& [rows, cols] : {std::pair<Index, Index>{8, 3}, {50, 20}, {200, 100}}) {
    const Matrix m = oracle::gaussian(rows, cols, 11 + rows);
    const QrResult qr = qr_thin(m);
    CHECK((qr.q * qr.r - m).norm() <= 1e-10 * m.norm());
    CHECK(max_abs(qr.q.transpose() * qr.q - Matrix::Identity(cols, cols)) <= 1e-10);
    CHECK(max_abs(Matrix(qr.r.triangularView<Eigen::StrictlyLower>())) == 0.0);
    CHECK(qr.r.diagonal().minCoeff() >= 0.0);
  }
}

TEST_CASE("qr_thin: wide input is a dimension error") {
  CHECK_THROWS_AS(qr_thin(Matrix::Ones(2, 3)), dca::DimensionError);
}

TEST_CASE("non-finite input is rejected") {
  Matrix m = Matrix::Identity(2, 2);
  m(0, 1) = std::nan("");
  CHECK_THROWS_AS(svd_thin(m), dca::NonFiniteError);
  CHECK_THROWS_AS(qr_thin(m), dca::NonFiniteError);
  m(0, 1) = INFINITY;
  CHECK_THROWS_AS(pseudo_inverse(m), dca::NonFiniteError);
}

TEST_CASE("svd_thin: diagonal and permuted diagonal") {
  Matrix d = Matrix::Zero(2, 2);
  d(0, 0) = 3.0;
  d(1, 1) = 1.0;
  const SvdResult a = svd_thin(d);
  CHECK(a.sigma(0) == doctest::Approx(3.0).epsilon(1e-15));
  CHECK(a.sigma(1) == doctest::Approx(1.0).epsilon(1e-15));

  Matrix p(2, 2);
  p << 0.0, 2.0, 1.0, 0.0;
  const SvdResult b = svd_thin(p);
  CHECK(b.sigma(0) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(b.sigma(1) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("svd_thin: recomposition and orthonormality on seeded matrices") {
  for (const auto& [rows, cols] : {std::pair<Index, Index>{6, 4}, {4, 6}, {200, 100}}) {
    const Matrix m = oracle::gaussian(rows, cols, 7 * rows + cols);
    const SvdResult svd = svd_thin(m);
    const Index k = std::min(rows, cols);
    CHECK((svd.u * svd.sigma.asDiagonal() * svd.v.transpose() - m).norm() <= 1e-10 * m.norm());
    CHECK(max_abs(svd.u.transpose() * svd.u - Matrix::Identity(k, k)) <= 1e-10);
    CHECK(max_abs(svd.v.transpose() * svd.v - Matrix::Identity(k, k)) <= 1e-10);
    for (Index j = 1; j < k; ++j) {
      CHECK(svd.sigma(j - 1) >= svd.sigma(j));
    }
    CHECK(svd.sigma.minCoeff() >= 0.0);
  }
}

TEST_CASE("randomized_svd: exact on a rank-2 outer-product sum") {
  const Matrix u = oracle::gaussian(30, 2, 3);
  const Matrix v = oracle::gaussian(20, 2, 4);
  const Matrix m = u.col(0) * v.col(0).transpose() + u.col(1) * v.col(1).transpose();
  const SvdResult exact = svd_thin(m);
  const SvdResult approx = randomized_svd(m, 2, 5, 1, 99);
  REQUIRE(approx.sigma.size() == 2);
  for (Index j = 0; j < 2; ++j) {
    CHECK(std::abs(approx.sigma(j) - exact.sigma(j)) <= 1e-6 * exact.sigma(j));
  }
  CHECK((approx.u * approx.sigma.asDiagonal() * approx.v.transpose() - m).norm() <=
        1e-8 * m.norm());
}

TEST_CASE("randomized_svd: full rank target with no oversampling") {
  const Matrix m = oracle::gaussian(12, 7, 21);
  const SvdResult exact = svd_thin(m);
  const SvdResult approx = randomized_svd(m, 7, 0, 0, 5);
  for (Index j = 0; j < 7; ++j) {
    CHECK(std::abs(approx.sigma(j) - exact.sigma(j)) <= 1e-6 * exact.sigma(j));
  }
}

TEST_CASE("randomized_svd: deterministic per seed, never above the exact spectrum") {
  const Matrix m = oracle::gaussian(40, 25, 8);
  const SvdResult first = randomized_svd(m, 5, 3, 1, 1234);
  const SvdResult second = randomized_svd(m, 5, 3, 1, 1234);
  CHECK(first.sigma == second.sigma);
  CHECK(first.u == second.u);
  CHECK(first.v == second.v);

  const SvdResult exact = svd_thin(m);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const SvdResult approx = randomized_svd(m, 6, 2, 0, seed);
    for (Index j = 0; j < 6; ++j) {
      CHECK(approx.sigma(j) <= exact.sigma(j) + 1e-8);
    }
  }
  CHECK_THROWS_AS(randomized_svd(m, 0, 2, 1, 0), dca::DimensionError);
  CHECK_THROWS_AS(randomized_svd(m, 26, 2, 1, 0), dca::DimensionError);
}

TEST_CASE("sym_eig: diagonal and exchange matrices") {
  Matrix d = Matrix::Zero(2, 2);
  d(0, 0) = 2.0;
  d(1, 1) = 1.0;
  const EigPairs a = sym_eig(d);
  CHECK(a.values(0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(a.values(1) == doctest::Approx(2.0).epsilon(1e-15));

  Matrix x(2, 2);
  x << 0.0, 1.0, 1.0, 0.0;
  const EigPairs b = sym_eig(x);
  CHECK(b.values(0) == doctest::Approx(-1.0).epsilon(1e-15));
  CHECK(b.values(1) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("sym_eig: recovers a constructed spectrum") {
  const Matrix q = oracle::random_orthonormal(6, 6, 17);
  Vector d(6);
  d << 3.5, -1.0, 0.25, 7.0, 2.0, -4.5;
  const Matrix s = q * d.asDiagonal() * q.transpose();
  const EigPairs eig = sym_eig(s);
  Vector sorted = d;
  std::sort(sorted.data(), sorted.data() + sorted.size());
  CHECK(max_abs(eig.values - sorted) <= 1e-8);
  for (Index k = 0; k < 6; ++k) {
    CHECK((s * eig.vectors.col(k) - eig.values(k) * eig.vectors.col(k)).norm() <= 1e-8 * s.norm());
  }
  CHECK(max_abs(eig.vectors.transpose() * eig.vectors - Matrix::Identity(6, 6)) <= 1e-10);
}

TEST_CASE("sym_eig: asymmetry beyond tolerance is rejected") {
  Matrix s = Matrix::Identity(3, 3);
  s(0, 2) = 0.5;
  CHECK_THROWS_AS(sym_eig(s), dca::AsymmetryError);
  s(0, 2) = 1e-12;
  CHECK_NOTHROW(sym_eig(s));
}

TEST_CASE("eigenvector sign convention: largest-magnitude entry positive") {
  const Matrix s = random_psd(5, 5, 4);
  const EigPairs eig = sym_eig(s);
  for (Index k = 0; k < 5; ++k) {
    Index pivot = 0;
    eig.vectors.col(k).cwiseAbs().maxCoeff(&pivot);
    CHECK(eig.vectors(pivot, k) > 0.0);
  }
}

TEST_CASE("gen_eig_sym: identity B reduces to sym_eig") {
  const Matrix a = random_psd(5, 3, 12) - 2.0 * Matrix::Identity(5, 5);
  const EigPairs gen = gen_eig_sym(a, Matrix::Identity(5, 5), 5);
  const EigPairs std_eig = sym_eig(a);
  CHECK(max_abs(gen.values - std_eig.values) <= 1e-10);
  for (Index k = 0; k < 5; ++k) {
    CHECK(gen.vectors.col(k).norm() == doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("gen_eig_sym: proportional matrices give a flat spectrum") {
  const Matrix b = random_pd(4, 31);
  const EigPairs eig = gen_eig_sym(2.0 * b, b, 4);
  for (Index k = 0; k < 4; ++k) {
    CHECK(eig.values(k) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(eig.vectors.col(k).dot(b * eig.vectors.col(k)) == doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("gen_eig_sym: residual and independent Jacobi oracle on a seeded 6x6 pair") {
  const Matrix a = random_psd(6, 8, 101);
  const Matrix b = random_pd(6, 202);
  const EigPairs eig = gen_eig_sym(a, b, 3);
  REQUIRE(eig.values.size() == 3);
  const double scale = oracle::spectral_norm(a);
  const auto [ref_values, ref_vectors] = oracle::generalized_eigen(a, b);
  for (Index j = 0; j < 3; ++j) {
    const Vector v = eig.vectors.col(j);
    CHECK((a * v - eig.values(j) * b * v).norm() <= 1e-8 * scale);
    CHECK(std::abs(v.dot(b * v) - 1.0) <= 1e-10);
    CHECK(std::abs(eig.values(j) - ref_values(j)) <= 1e-8 * std::max(1.0, std::abs(ref_values(j))));
    CHECK(oracle::sign_aligned_distance(v, ref_vectors.col(j)) <= 1e-6);
  }
  for (Index j = 1; j < 3; ++j) {
    CHECK(eig.values(j - 1) <= eig.values(j));
  }
}

TEST_CASE("gen_eig_sym: singular B fails without ridge and recovers with escalation") {
  Matrix b = Matrix::Identity(3, 3);
  b(2, 2) = 0.0;
  const Matrix a = random_psd(3, 3, 5);
  CHECK_THROWS_AS(gen_eig_sym(a, b, 2, 0.0), dca::DefinitenessError);
  const RegularizedEig reg = gen_eig_sym_regularized(a, b, 2);
  CHECK(reg.ridge > 0.0);
  Matrix shifted = b;
  shifted.diagonal().array() += reg.ridge;
  for (Index j = 0; j < 2; ++j) {
    const Vector v = reg.pairs.vectors.col(j);
    CHECK((a * v - reg.pairs.values(j) * shifted * v).norm() <= 1e-6 * a.norm());
  }
  CHECK_THROWS_AS(gen_eig_sym_regularized(a, -Matrix::Identity(3, 3), 2),
                  dca::DefinitenessError);
}

TEST_CASE("gen_eig_sym: shape checks") {
  CHECK_THROWS_AS(gen_eig_sym(Matrix::Identity(3, 3), Matrix::Identity(2, 2), 1),
                  dca::DimensionError);
  CHECK_THROWS_AS(gen_eig_sym(Matrix::Identity(3, 3), Matrix::Identity(3, 3), 4),
                  dca::DimensionError);
  CHECK_THROWS_AS(gen_eig_sym(Matrix::Ones(2, 3), Matrix::Identity(2, 2), 1),
                  dca::DimensionError);
}

TEST_CASE("pseudo_inverse: identity, scalar and left inverse") {
  CHECK(max_abs(pseudo_inverse(Matrix::Identity(4, 4)) - Matrix::Identity(4, 4)) <= 1e-15);
  Matrix scalar(1, 1);
  scalar << 2.0;
  CHECK(pseudo_inverse(scalar)(0, 0) == doctest::Approx(0.5).epsilon(1e-15));

  const Matrix tall = oracle::gaussian(10, 4, 77);
  CHECK(max_abs(pseudo_inverse(tall) * tall - Matrix::Identity(4, 4)) <= 1e-8);
}

TEST_CASE("pseudo_inverse: Moore-Penrose conditions on a rank-deficient matrix") {
  const Matrix m = oracle::gaussian(7, 3, 1) * oracle::gaussian(3, 5, 2);  // rank 3
  const Matrix p = pseudo_inverse(m);
  const double scale = m.norm();
  CHECK((m * p * m - m).norm() <= 1e-8 * scale);
  CHECK((p * m * p - p).norm() <= 1e-8 * p.norm());
  CHECK(((m * p) - (m * p).transpose()).norm() <= 1e-8);
  CHECK(((p * m) - (p * m).transpose()).norm() <= 1e-8);
  CHECK(max_abs(pseudo_inverse(Matrix::Zero(2, 3))) == 0.0);
}

TEST_CASE("operations are pure: repeated calls are bit-identical") {
  const Matrix m = oracle::gaussian(9, 6, 55);
  const Matrix s = m.transpose() * m;
  CHECK(svd_thin(m).u == svd_thin(m).u);
  CHECK(qr_thin(m).r == qr_thin(m).r);
  CHECK(sym_eig(s).vectors == sym_eig(s).vectors);
  CHECK(gen_eig_sym(s, s + Matrix::Identity(6, 6), 3).vectors ==
        gen_eig_sym(s, s + Matrix::Identity(6, 6), 3).vectors);
  CHECK(pseudo_inverse(m) == pseudo_inverse(m));
}
