#include <doctest.h>

#include <cmath>

#include "seqmeas/builtin.hpp"
#include "seqmeas/eraser.hpp"
#include "seqmeas/evaluator.hpp"
#include "seqmeas/expr.hpp"
#include "testutil.hpp"

using namespace seqmeas;
using namespace seqmeas::eraser;
using testutil::Rng;

namespace {

EraserBasis random_basis(Rng& rng) {
  while (true) {
    Cplx a = testutil::random_cplx(rng);
    Cplx b = testutil::random_cplx(rng);
    const double norm = std::sqrt(std::norm(a) + std::norm(b));
    if (norm < 1e-6) continue;
    a /= norm;
    b /= norm;
    if (std::abs(a) < 1e-3 || std::abs(b) < 1e-3) continue;
    std::uniform_real_distribution<double> u(0.0, 2.0 * M_PI);
    return {a, b, u(rng)};
  }
}

}  // namespace

TEST_CASE("basis invariants") {
  CHECK_THROWS_AS(EraserBasis({1.0, 0.0}, {0.0, 0.0}, 0.0).validate(),
                  InvariantError);  // beta = 0 is not a superposition
  CHECK_THROWS_AS(EraserBasis({0.9, 0.0}, {0.9, 0.0}, 0.0).validate(),
                  InvariantError);  // not normalized
  CHECK_NOTHROW(EraserBasis({M_SQRT1_2, 0.0}, {M_SQRT1_2, 0.0}, 1.0).validate());
}

TEST_CASE("Hadamard basis rotates the which-path operators") {
  const Scenario sc = builtin::young_slit();
  const Branch branch_a = sc.branch_of("a");
  const Branch branch_b = sc.branch_of("b");
  const KrausOperator& ka = branch_a.front();
  const KrausOperator& kb = branch_b.front();

  const EraserBasis hadamard{{M_SQRT1_2, 0.0}, {M_SQRT1_2, 0.0}, 0.0};
  const QrKraus qr = build_qr_kraus(hadamard, ka, kb);
  CHECK(linalg::approx_equal(qr.k_q.mat(),
                             (ka.mat() + kb.mat()) * M_SQRT1_2, 1e-14));
  CHECK(linalg::approx_equal(qr.k_r.mat(),
                             (-ka.mat() + kb.mat()) * M_SQRT1_2, 1e-14));
}

TEST_CASE("the basis-change matrix is unitary for any complex coefficients") {
  Rng rng(31);
  for (int i = 0; i < 100; ++i) {
    const EraserBasis basis = random_basis(rng);
    const Mat v = basis.coefficient_matrix();
    CHECK((v * v.adjoint() - Mat::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("each rotated outcome interferes, the pair does not") {
  const Scenario sc = builtin::young_slit();
  const EraserBasis hadamard{{M_SQRT1_2, 0.0}, {M_SQRT1_2, 0.0}, 0.0};

  const QrKraus qr = build_qr_kraus(hadamard, sc.branch_of("a").front(),
                                    sc.branch_of("b").front());
  const Effect f = sc.effect_of("d");
  const double p_dq = sequence_probability(sc.rho(), {qr.k_q}, f);
  const double p_da = sequence_probability(sc.rho(), {sc.branch_of("a").front()}, f);

  // single terms differ well beyond tolerance on the asymmetric fixture
  CHECK(std::abs(p_dq - p_da) > 1e-3);

  const EquivalenceReport report = verify_equivalence(hadamard, sc);
  CHECK(report.gap < 1e-12);

  // and the cross term in P(d & q | s) is exactly the interference piece
  const double p_db = sequence_probability(sc.rho(), {sc.branch_of("b").front()}, f);
  const Mat cross = qr.k_q.mat() * sc.rho().mat() * qr.k_q.mat().adjoint();
  CHECK(p_dq == doctest::Approx((f.mat() * cross).trace().real()).epsilon(1e-12));
  CHECK(p_dq - 0.5 * (p_da + p_db) != doctest::Approx(0.0).epsilon(1e-6));
}

TEST_CASE("rotated pair equals which-path pair for random bases") {
  const Scenario sc = builtin::young_slit();
  Rng rng(32);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const EquivalenceReport report = verify_equivalence(random_basis(rng), sc);
    worst = std::max(worst, report.gap);
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("verify_equivalence requires perfect which-path operators") {
  Rng rng(33);
  Scenario sc = builtin::young_slit();
  // replace path a with an unsharp operator
  Mat soft = 0.8 * builtin::qubit_projector(0.0) +
             0.1 * builtin::qubit_projector(M_PI / 2.0);
  sc.bindings["a"].kraus = Branch{KrausOperator(soft, "a")};
  CHECK_THROWS_AS(
      verify_equivalence({{M_SQRT1_2, 0.0}, {M_SQRT1_2, 0.0}, 0.0}, sc),
      StructureError);
}

TEST_CASE("explicit policy with K_q gives the single rotated outcome") {
  // Binding the atomic alternative to K_q itself turns `d & (a + b)` into
  // the quantum-eraser single-outcome probability P(d & q | s).
  const Scenario base = builtin::young_slit();
  const EraserBasis basis{{0.48, 0.36}, {0.64, -0.48}, 0.0};
  const QrKraus qr = build_qr_kraus(basis, base.branch_of("a").front(),
                                    base.branch_of("b").front());

  Scenario sc = base;
  sc.or_policy = OrPolicy::explicit_op(qr.k_q.mat());
  const double atomic = evaluator::evaluate(parse("d & (a + b) | s"), sc);
  const double single =
      sequence_probability(sc.rho(), {qr.k_q}, sc.effect_of("d"));
  CHECK(atomic == doctest::Approx(single).epsilon(1e-12));
}

TEST_CASE("explicit combined operator feeds the atomic evaluation") {
  // K_{q or r} = a' K_q + b' K_r with user-chosen coefficients is passed
  // through the explicit OR policy.
  const Scenario base = builtin::young_slit();
  const EraserBasis basis{{0.6, 0.0}, {0.0, 0.8}, 0.3};
  const QrKraus qr = build_qr_kraus(basis, base.branch_of("a").front(),
                                    base.branch_of("b").front());
  const Cplx ap{M_SQRT1_2, 0.0}, bp{0.0, -M_SQRT1_2};
  const Mat combined = std::conj(ap) * qr.k_q.mat() + std::conj(bp) * qr.k_r.mat();

  Scenario sc = base;
  sc.bindings["q"].kraus = Branch{qr.k_q};
  sc.bindings["r"].kraus = Branch{qr.k_r};
  sc.or_policy = OrPolicy::explicit_op(combined);

  const double atomic = evaluator::evaluate(parse("d & (q + r) | s"), sc);
  const double direct = sequence_probability(
      sc.rho(), {KrausOperator(combined, "qr")}, sc.effect_of("d"));
  CHECK(atomic == doctest::Approx(direct).epsilon(1e-12));
}
