#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "seqmeas/measurement.hpp"

namespace seqmeas {

// How an atomic alternative `a + b` inside a sequence is collapsed to a
// single Kraus operator. The three constructions are physically distinct and
// give different probabilities, so a scenario must state which one it models;
// no default is ever applied.
struct OrPolicy {
  struct CoherentSum {};  // path detectors share one final state: K = sum K_i
  struct Complement {     // complementary detector c: K = U sqrt(sum E_i)
    Mat unitary;
  };
  struct Explicit {  // user-supplied combined operator (quantum-eraser style)
    Mat kraus;
  };

  std::variant<CoherentSum, Complement, Explicit> variant;

  static OrPolicy coherent_sum() { return {CoherentSum{}}; }
  static OrPolicy complement(Mat u) { return {Complement{std::move(u)}}; }
  static OrPolicy explicit_op(Mat k) { return {Explicit{std::move(k)}}; }
};

// How an alternative of two orderings `(a & b) + (b & a)` inside a sequence
// is evaluated.
struct OrderPolicy {
  struct Definite {  // keep only the stated temporal order
    std::vector<std::string> order;  // first element acts first
  };
  struct Mixture {  // classical lambda-mixture of the two definite orders
    double lambda = 0.5;
  };
  struct IndefiniteCoherent {  // coherent superposition of the two orders
    Cplx w1{1.0, 0.0};         // weight of the first-listed ordering
    Cplx w2{0.0, 0.0};
  };

  std::variant<Definite, Mixture, IndefiniteCoherent> variant;

  static OrderPolicy definite(std::vector<std::string> order) {
    return {Definite{std::move(order)}};
  }
  static OrderPolicy mixture(double lambda);
  static OrderPolicy indefinite(Cplx w1, Cplx w2,
                                const Tolerance& tol = Tolerance::standard());
};

// A label is bound to exactly one of: an instrument branch (usable anywhere
// in a sequence), a bare effect (final position only), or a detector model
// (from which the branch is derived; also feeds the tensor-product oracle).
struct Binding {
  std::optional<Branch> kraus;
  std::optional<Effect> effect;
  std::optional<DetectorModel> detector;

  bool has_kraus_route() const { return kraus || detector; }
};

struct Scenario {
  Eigen::Index dim = 0;
  std::optional<DensityMatrix> preparation;
  std::map<std::string, Binding> bindings;
  std::optional<OrPolicy> or_policy;
  std::optional<OrderPolicy> order_policy;
  // Optional completeness groups: labels whose effects must form a POVM.
  std::vector<std::vector<std::string>> povm_groups;
  std::optional<std::string> expression;

  const DensityMatrix& rho() const;
  const Binding& binding(const std::string& label) const;

  // Instrument branch for a label used in intermediate position.
  Branch branch_of(const std::string& label) const;
  // Effect for a label used in final position (direct, or K^dag K).
  Effect effect_of(const std::string& label) const;

  void check_dimensions() const;
};

}  // namespace seqmeas
