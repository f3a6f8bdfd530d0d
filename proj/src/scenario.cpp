#include "seqmeas/scenario.hpp"

#include <cmath>

namespace seqmeas {

OrderPolicy OrderPolicy::mixture(double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    throw InvariantError("order policy: lambda must lie in [0, 1]");
  }
  return {Mixture{lambda}};
}

OrderPolicy OrderPolicy::indefinite(Cplx w1, Cplx w2, const Tolerance& tol) {
  const double norm = std::norm(w1) + std::norm(w2);
  if (std::abs(norm - 1.0) > tol.eps_prob) {
    throw InvariantError("order policy: |w1|^2 + |w2|^2 = " +
                         std::to_string(norm) + ", expected 1");
  }
  return {IndefiniteCoherent{w1, w2}};
}

const DensityMatrix& Scenario::rho() const {
  if (!preparation) throw InvariantError("scenario has no preparation");
  return *preparation;
}

const Binding& Scenario::binding(const std::string& label) const {
  const auto it = bindings.find(label);
  if (it == bindings.end()) {
    throw BindingError("label '" + label + "' is not bound in the scenario");
  }
  return it->second;
}

Branch Scenario::branch_of(const std::string& label) const {
  const Binding& b = binding(label);
  if (b.kraus) return *b.kraus;
  if (b.detector) return {kraus_from_detector_model(*b.detector, label)};
  throw BindingError("label '" + label +
                     "' is bound to a bare effect and cannot be used as an "
                     "intermediate measurement (Kraus operators required)");
}

Effect Scenario::effect_of(const std::string& label) const {
  const Binding& b = binding(label);
  if (b.effect) return *b.effect;
  if (b.kraus) return effect_from_kraus(*b.kraus);
  if (b.detector) {
    return effect_from_kraus({kraus_from_detector_model(*b.detector, label)});
  }
  throw BindingError("label '" + label + "' has no effect");
}

void Scenario::check_dimensions() const {
  if (preparation && preparation->dim() != dim) {
    throw DimensionError("scenario preparation has dimension " +
                         std::to_string(preparation->dim()) + ", expected " +
                         std::to_string(dim));
  }
  for (const auto& [label, b] : bindings) {
    if (b.kraus) {
      for (const KrausOperator& k : *b.kraus) {
        if (k.mat().rows() != dim || k.mat().cols() != dim) {
          throw DimensionError("binding '" + label +
                               "': Kraus operator dimension mismatch");
        }
      }
    }
    if (b.effect && b.effect->dim() != dim) {
      throw DimensionError("binding '" + label + "': effect dimension mismatch");
    }
    if (b.detector && b.detector->system_dim != dim) {
      throw DimensionError("binding '" + label +
                           "': detector model system dimension mismatch");
    }
  }
}

}  // namespace seqmeas
