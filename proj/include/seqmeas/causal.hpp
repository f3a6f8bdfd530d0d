#pragma once

#include <string>
#include <utility>
#include <vector>

#include "seqmeas/scenario.hpp"

namespace seqmeas {
namespace causal {

// Probability of the definite-order chain: preparation, then the labels of
// `order` first-to-last, then the final effect.
double ordered_probability(const Scenario& sc,
                           const std::vector<std::string>& order,
                           const std::string& final_label,
                           const Tolerance& tol = Tolerance::standard());

// Joint probability of the intermediate chain alone (no final effect):
// tr(sum_k K_{order} rho K_{order}^dag).
double chain_probability(const Scenario& sc,
                         const std::vector<std::string>& order,
                         const Tolerance& tol = Tolerance::standard());

// Sum of the two orderings of the scenario's two intermediate measurements,
// i.e. the distinguishable-order reading of `(d & b & a) + (d & a & b)`.
double distributed_order_probability(
    const Scenario& sc, const std::string& final_label,
    const Tolerance& tol = Tolerance::standard());

// Coherent combination of the two orderings of two branches:
//   K_{k1 k2} = w1 K_{b,k2} K_{a,k1} + w2 K_{a,k1} K_{b,k2}
// (w1 multiplies the ordering with `a` acting first). Multi-operator
// branches combine pairwise with k-indices kept separate. If the combined
// collection exceeds sum K^dag K <= I it is divided by the smallest factor
// restoring validity; the factor is reported (1 when no rescale was needed;
// the combination is never scaled up). Throws DegeneracyError when the
// combination cancels to the zero operator.
struct IndefiniteBranch {
  Branch ops;
  double rescale_factor = 1.0;
};

IndefiniteBranch indefinite_kraus(const Branch& branch_a, const Branch& branch_b,
                                  std::pair<Cplx, Cplx> weights,
                                  const Tolerance& tol = Tolerance::standard());

// Diagnostic for the causal equality. Labels are the two intermediate
// (Kraus-bound) labels of the scenario in lexicographic order; `first_label`
// plays the role of `a` below.
struct CausalReport {
  std::string first_label;
  std::string second_label;
  double p_ab = 0.0;  // joint P(d & b & a | s), a acting first
  double p_ba = 0.0;  // joint, b acting first
  double p_cond_ab = 0.0;  // P(d | b & a & s)
  double p_cond_ba = 0.0;
  // lambda-mixture of the conditionals at lambda = |w1|^2
  double p_mixture = 0.0;
  // conditional probability of the final detection given the coherently
  // order-combined intermediate measurement
  double p_indefinite = 0.0;
  double rescale_factor = 1.0;
  // min over lambda in [0,1] of |p_indefinite - (lambda p_cond_ab +
  // (1-lambda) p_cond_ba)|; positive values witness a violation of the
  // causal equality.
  double equality_gap = 0.0;
};

// When the scenario carries an order policy, the comparison point
// `p_indefinite` follows it (Definite -> that order's conditional,
// Mixture(lambda) -> the lambda-mixture of conditionals); otherwise, and for
// IndefiniteCoherent, the coherent combinator with `weights` is used.
CausalReport causal_gap(const Scenario& sc, const std::string& final_label,
                        std::pair<Cplx, Cplx> weights,
                        const Tolerance& tol = Tolerance::standard());

// The two Kraus-bound labels of the scenario other than `final_label`,
// sorted lexicographically. Throws StructureError unless there are exactly
// two.
std::pair<std::string, std::string> intermediate_pair(
    const Scenario& sc, const std::string& final_label);

}  // namespace causal
}  // namespace seqmeas
