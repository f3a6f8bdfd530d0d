#include "seqmeas/builtin.hpp"

#include <cmath>

#include "seqmeas/mzi.hpp"

namespace seqmeas {
namespace builtin {

Mat qubit_projector(double theta) {
  Vec v(2);
  v << Cplx{std::cos(theta), 0.0}, Cplx{std::sin(theta), 0.0};
  return v * v.adjoint();
}

DetectorModel young_slit_detector() {
  DetectorModel model;
  model.system_dim = 2;
  model.pointer_states.emplace("a", Ket::basis(2, 0));
  model.pointer_states.emplace("b", Ket::basis(2, 1));
  model.post_interaction_states = {Ket::basis(2, 0), Ket::basis(2, 1)};
  return model;
}

Scenario young_slit() {
  Scenario sc;
  sc.dim = 2;

  Vec s(2);
  s << Cplx{0.8, 0.0}, Cplx{0.6, 0.0};
  sc.preparation = DensityMatrix::pure(Ket(s));

  Vec d(2);
  d << Cplx{1.0, 0.5}, Cplx{0.7, -0.3};
  d /= d.norm();

  // Both slit labels read out the same which-path detector, so the tensor
  // oracle can simulate the interaction explicitly.
  const DetectorModel detector = young_slit_detector();
  sc.bindings["a"].detector = detector;
  sc.bindings["b"].detector = detector;
  sc.bindings["d"].effect = Effect(d * d.adjoint());
  sc.or_policy = OrPolicy::coherent_sum();
  sc.povm_groups = {{"a", "b"}};
  sc.expression = "d & (a + b) | s";
  return sc;
}

Scenario mzi_movable(double alpha, double phi) {
  Scenario sc;
  sc.dim = 2;
  sc.preparation = DensityMatrix::pure(Ket::basis(2, 0));  // |1_in>

  const mzi::WhichPathKraus ops =
      mzi::build_movable_kraus({phi, Cplx{alpha, 0.0}});
  sc.bindings["a"].kraus = Branch{ops.k_a};
  sc.bindings["b"].kraus = Branch{ops.k_b};

  Mat f = Mat::Zero(2, 2);
  f(0, 0) = 1.0;  // |1_out><1_out|
  sc.bindings["d1"].effect = Effect(f);

  // Complement of the which-path pair, so the three labels form a POVM.
  const Mat rest = Mat::Identity(2, 2) -
                   effect_from_kraus(*sc.bindings["a"].kraus).mat() -
                   effect_from_kraus(*sc.bindings["b"].kraus).mat();
  sc.bindings["miss"].effect = Effect(rest);
  sc.povm_groups = {{"a", "b", "miss"}};

  sc.or_policy = OrPolicy::coherent_sum();
  sc.expression = "(d1 & a) + (d1 & b) | s";
  return sc;
}

Scenario mzi_fixed(double phi) {
  Scenario sc = mzi_movable(0.0, phi);
  sc.expression = "d1 & (a + b) | s";
  return sc;
}

CausalWitness causal_witness_angles() {
  // Found by the grid search in the causal test suite; committed so the
  // violation is reproducible without re-searching.
  return {7.0 * M_PI / 12.0, 2.0 * M_PI / 3.0, M_PI / 8.0, M_PI / 8.0};
}

Scenario causal_witness() {
  const CausalWitness w = causal_witness_angles();
  Scenario sc;
  sc.dim = 2;
  Vec s(2);
  s << Cplx{std::cos(w.theta_prep), 0.0}, Cplx{std::sin(w.theta_prep), 0.0};
  sc.preparation = DensityMatrix::pure(Ket(s));
  sc.bindings["a"].kraus = Branch{KrausOperator(qubit_projector(w.theta_a), "a")};
  sc.bindings["b"].kraus = Branch{KrausOperator(qubit_projector(w.theta_b), "b")};
  sc.bindings["d"].effect = Effect(qubit_projector(w.theta_final));
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  sc.order_policy =
      OrderPolicy::indefinite(Cplx{inv_sqrt2, 0.0}, Cplx{inv_sqrt2, 0.0});
  sc.expression = "d & ((a & b) + (b & a)) | s";
  return sc;
}

}  // namespace builtin
}  // namespace seqmeas
