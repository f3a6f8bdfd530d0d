#include <doctest.h>

#include <cmath>

#include "seqmeas/linalg.hpp"
#include "testutil.hpp"

using namespace seqmeas;
using namespace seqmeas::linalg;
using testutil::Rng;

TEST_CASE("adjoint conjugates and transposes") {
  Mat m(1, 1);
  m(0, 0) = Cplx{2.0, 3.0};
  CHECK(adjoint(m)(0, 0) == Cplx{2.0, -3.0});

  const Mat id = identity(4);
  CHECK(approx_equal(adjoint(id), id, 0.0));

  Rng rng(1);
  const Mat r = testutil::random_matrix(rng, 3, 2);
  const Mat a = adjoint(r);
  CHECK(a.rows() == 2);
  CHECK(a.cols() == 3);
  CHECK(adjoint(a) == r);  // involution, bit exact
}

TEST_CASE("trace") {
  CHECK(trace(identity(4)) == Cplx{4.0, 0.0});

  Mat flip(2, 2);
  flip << 0, 1, 1, 0;
  CHECK(trace(flip) == Cplx{0.0, 0.0});

  Rng rng(2);
  const Mat a = testutil::random_matrix(rng, 3, 3);
  const Mat b = testutil::random_matrix(rng, 3, 3);
  CHECK(std::abs(trace(matmul(a, b)) - trace(matmul(b, a))) < 1e-10);

  CHECK_THROWS_AS(trace(testutil::random_matrix(rng, 2, 3)), DimensionError);
}

TEST_CASE("matmul") {
  Rng rng(3);
  const Mat m = testutil::random_matrix(rng, 2, 2);
  CHECK(approx_equal(matmul(identity(2), m), m, 0.0));

  Mat nil(2, 2);
  nil << 0, 1, 0, 0;
  CHECK(approx_equal(matmul(nil, nil), Mat::Zero(2, 2), 0.0));

  const Mat a = testutil::random_matrix(rng, 3, 3);
  const Mat b = testutil::random_matrix(rng, 3, 3);
  const Mat c = testutil::random_matrix(rng, 3, 3);
  CHECK(approx_equal(matmul(matmul(a, b), c), matmul(a, matmul(b, c)), 1e-10));

  CHECK_THROWS_AS(matmul(testutil::random_matrix(rng, 2, 3),
                         testutil::random_matrix(rng, 2, 3)),
                  DimensionError);
}

TEST_CASE("is_psd accepts Gram matrices and rejects indefinite ones") {
  Rng rng(4);
  for (int i = 0; i < 20; ++i) {
    const Mat k = testutil::random_matrix(rng, 3, 3);
    CHECK(is_psd(k.adjoint() * k));
  }

  Mat indefinite(2, 2);
  indefinite << 1.0, 0.0, 0.0, -0.5;
  CHECK_FALSE(is_psd(indefinite));

  // Non-Hermitian input is not PSD regardless of eigenvalues.
  Mat skew(2, 2);
  skew << 1.0, Cplx{0.0, 1.0}, Cplx{0.0, 1.0}, 1.0;
  CHECK_FALSE(is_psd(skew));

  CHECK_THROWS_AS(is_psd(testutil::random_matrix(rng, 2, 3)), DimensionError);
}

TEST_CASE("naive coherent which-path operators break the effect bound") {
  // Using the raw <alpha|Phi> overlap instead of the orthogonalized pointer
  // makes E_a + E_b exceed the identity; the complement is then indefinite.
  const double g = std::exp(-1.125);  // <0|alpha> at alpha = 1.5
  const Cplx i{0.0, 1.0};
  const Cplx ephi = std::exp(i * 0.7);

  Mat ka = Mat::Zero(2, 2);
  ka(0, 0) = -0.5 * (1.0 + g * ephi);
  ka(1, 0) = -0.5 * i * (1.0 - g * ephi);
  Mat kb = Mat::Zero(2, 2);
  kb(0, 0) = -0.5 * (g + ephi);
  kb(1, 0) = 0.5 * i * (ephi - g);

  const Mat sum = ka.adjoint() * ka + kb.adjoint() * kb;
  CHECK(hermitian_eigenvalues(sum).maxCoeff() > 1.0 + 1e-3);
  CHECK_FALSE(is_psd(identity(2) - sum));
  // expected excess: E_a + E_b = (1 + g^2) |in1><in1|
  CHECK(std::abs(hermitian_eigenvalues(sum).maxCoeff() - (1.0 + g * g)) < 1e-12);
}

TEST_CASE("sqrt_psd") {
  CHECK(approx_equal(sqrt_psd(identity(3)), identity(3), 1e-12));

  Mat d(2, 2);
  d << 4.0, 0.0, 0.0, 9.0;
  Mat expected(2, 2);
  expected << 2.0, 0.0, 0.0, 3.0;
  CHECK(approx_equal(sqrt_psd(d), expected, 1e-12));

  Rng rng(5);
  for (Eigen::Index dim = 2; dim <= 8; ++dim) {
    const Mat a = testutil::random_matrix(rng, dim, dim);
    const Mat psd = a * a.adjoint();
    const Mat root = sqrt_psd(psd);
    CHECK(is_psd(root));
    CHECK(approx_equal(root * root, psd, 1e-10));
  }

  Mat indefinite(2, 2);
  indefinite << 1.0, 0.0, 0.0, -1.0;
  CHECK_THROWS_AS(sqrt_psd(indefinite), DomainError);
}

TEST_CASE("gram_schmidt_orthogonalize") {
  Vec e0(2), e1(2);
  e0 << 1.0, 0.0;
  e1 << 0.0, 1.0;
  CHECK((gram_schmidt_orthogonalize(e0, e1) - e0).norm() < 1e-15);

  Vec diag(2);
  diag << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  CHECK((gram_schmidt_orthogonalize(diag, e0) - e1).norm() < 1e-15);

  // Coherent-state pair at alpha = 1.5 in the {|0>, rest} representation:
  // |alpha> = g |0> + sqrt(1 - g^2) |rest> with g = e^{-1.125}.
  const double g = std::exp(-1.125);
  Vec coherent(2);
  coherent << g, std::sqrt(1.0 - g * g);
  const Vec out = gram_schmidt_orthogonalize(coherent, e0);
  CHECK(std::abs(out.norm() - 1.0) < 1e-12);
  CHECK(std::abs(e0.dot(out)) < 1e-12);

  CHECK_THROWS_AS(gram_schmidt_orthogonalize(e0, e0), DegeneracyError);
  const Vec scaled = Cplx{0.0, 2.0} * e0;
  CHECK_THROWS_AS(gram_schmidt_orthogonalize(scaled, e0), DegeneracyError);
}

TEST_CASE("trace of K^dag K is real and non-negative") {
  Rng rng(6);
  for (int i = 0; i < 50; ++i) {
    const Mat m = testutil::random_matrix(rng, 4, 4);
    const Cplx t = trace(matmul(adjoint(m), m));
    CHECK(std::abs(t.imag()) < 1e-10);
    CHECK(t.real() >= -1e-10);
  }
}

TEST_CASE("gram_schmidt output invariants on random pairs") {
  Rng rng(7);
  for (int i = 0; i < 100; ++i) {
    const Vec against = testutil::random_unit(rng, 4);
    const Vec v = testutil::random_unit(rng, 4);
    const Vec out = gram_schmidt_orthogonalize(v, against);
    CHECK(std::abs(out.norm() - 1.0) < 1e-12);
    CHECK(std::abs(against.dot(out)) < 1e-12);
  }
}
