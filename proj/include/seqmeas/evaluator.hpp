#pragma once

#include <map>
#include <string>
#include <vector>

#include "seqmeas/causal.hpp"
#include "seqmeas/expr.hpp"
#include "seqmeas/scenario.hpp"

namespace seqmeas {
namespace evaluator {

// Probability of a parsed query under a scenario binding.
//
// Semantics:
//  - a top-level alternative of complete sequences sums the branch
//    probabilities (classical sum rule); a top-level alternative of bare
//    final measurements sums their Born probabilities; mixing the two forms
//    is rejected as ambiguous;
//  - a sequence chain applies the bound branches right to left (rightmost
//    label acts first) and closes with the final label's effect;
//  - an alternative of labels nested inside a sequence is collapsed to a
//    single Kraus operator via the scenario's OR policy and treated as one
//    atomic intermediate measurement (interference);
//  - an alternative of exactly two sequences nested inside a sequence is an
//    indefinite-order measurement and follows the scenario's order policy.
double evaluate(const Query& q, const Scenario& sc,
                const Tolerance& tol = Tolerance::standard());

// Collapse alternative branches to one Kraus operator per the policy.
// CoherentSum requires single-operator branches (a k-indexed decomposition
// has no shared detector state to merge).
KrausOperator or_combine(const std::vector<Branch>& branches,
                         const OrPolicy& policy,
                         const Tolerance& tol = Tolerance::standard());

// Evaluates a `final & (a + b)` query by explicit system (x) detector
// construction: entangle with the model's post-interaction states, partial
// trace over the detector, then apply the final effect to the reduced state.
// Equals the distributed evaluation whenever the pointer states are an
// orthonormal basis of the detector space.
double evaluate_reduced_trace(const Query& q, const Scenario& sc,
                              const DetectorModel& model,
                              const Tolerance& tol = Tolerance::standard());

// evaluate(q_joint) / evaluate(q_given), clamped to [0, 1].
double conditional(const Query& q_joint, const Query& q_given,
                   const Scenario& sc,
                   const Tolerance& tol = Tolerance::standard());

struct OracleOptions {
  // Maximum total dimension of the system (x) ancillas tensor product.
  Eigen::Index dimension_cap = 4096;
};

// Independent verification path: simulates the full system (x) detector
// ancilla state vector. Every intermediate label must have a detector model;
// each measurement appends a fresh ancilla and applies the interaction
// isometry, the final effect acts on the system factor, and the ancillas are
// contracted with the pointer pattern the proposition admits (orthogonal
// pointer per outcome for a distributed alternative, a single merged pointer
// for an atomic one). Shares no code with `evaluate` beyond the scenario
// data itself.
double brute_force_oracle(const Query& q, const Scenario& sc,
                          const std::map<std::string, DetectorModel>& models,
                          const OracleOptions& options = {},
                          const Tolerance& tol = Tolerance::standard());

// Partial trace over the second tensor factor of a (dim_a*dim_b) square
// matrix, with the first factor index slowest.
Mat partial_trace_second(const Mat& joint, Eigen::Index dim_a,
                         Eigen::Index dim_b);

}  // namespace evaluator
}  // namespace seqmeas
