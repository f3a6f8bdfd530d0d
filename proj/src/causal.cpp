#include "seqmeas/causal.hpp"

#include <algorithm>
#include <cmath>

namespace seqmeas {
namespace causal {

namespace {

Mat propagate(const Scenario& sc, const std::vector<std::string>& order) {
  Mat rho = sc.rho().mat();
  for (const std::string& label : order) {
    const Branch branch = sc.branch_of(label);
    Mat next = Mat::Zero(rho.rows(), rho.cols());
    for (const KrausOperator& k : branch) {
      next += k.mat() * rho * k.mat().adjoint();
    }
    rho = std::move(next);
  }
  return rho;
}

}  // namespace

double ordered_probability(const Scenario& sc,
                           const std::vector<std::string>& order,
                           const std::string& final_label,
                           const Tolerance& tol) {
  const Mat rho = propagate(sc, order);
  const Effect f = sc.effect_of(final_label);
  const Cplx tr = (f.mat() * rho).trace();
  if (std::abs(tr.imag()) > tol.eps_prob) {
    throw NumericalError("ordered_probability: trace has imaginary part " +
                         std::to_string(tr.imag()));
  }
  return clamp_probability(tr.real(), tol, "ordered_probability");
}

double chain_probability(const Scenario& sc,
                         const std::vector<std::string>& order,
                         const Tolerance& tol) {
  const double p = propagate(sc, order).trace().real();
  return clamp_probability(p, tol, "chain_probability");
}

std::pair<std::string, std::string> intermediate_pair(
    const Scenario& sc, const std::string& final_label) {
  std::vector<std::string> labels;
  for (const auto& [label, binding] : sc.bindings) {
    if (label != final_label && binding.has_kraus_route()) {
      labels.push_back(label);
    }
  }
  if (labels.size() != 2) {
    throw StructureError("expected exactly two intermediate measurements, got " +
                         std::to_string(labels.size()));
  }
  std::sort(labels.begin(), labels.end());
  return {labels[0], labels[1]};
}

double distributed_order_probability(const Scenario& sc,
                                     const std::string& final_label,
                                     const Tolerance& tol) {
  // A formal additivity application: the two orderings are not exclusive
  // alternatives in general, so their joint probabilities may sum past 1
  // (commuting operators give exactly twice the single-order value).
  const auto [a, b] = intermediate_pair(sc, final_label);
  return ordered_probability(sc, {a, b}, final_label, tol) +
         ordered_probability(sc, {b, a}, final_label, tol);
}

IndefiniteBranch indefinite_kraus(const Branch& branch_a, const Branch& branch_b,
                                  std::pair<Cplx, Cplx> weights,
                                  const Tolerance& tol) {
  if (branch_a.empty() || branch_b.empty()) {
    throw InvariantError("indefinite_kraus: empty branch");
  }
  const Eigen::Index dim = branch_a.front().mat().rows();
  const double wnorm = std::norm(weights.first) + std::norm(weights.second);
  if (std::abs(wnorm - 1.0) > tol.eps_prob) {
    throw InvariantError("indefinite_kraus: weights are not normalized");
  }

  std::vector<Mat> raw;
  for (const KrausOperator& ka : branch_a) {
    if (ka.mat().rows() != dim || ka.mat().cols() != dim) {
      throw DimensionError("indefinite_kraus: branch shapes do not match");
    }
    for (const KrausOperator& kb : branch_b) {
      if (kb.mat().rows() != dim || kb.mat().cols() != dim) {
        throw DimensionError("indefinite_kraus: branch shapes do not match");
      }
      raw.push_back(weights.first * (kb.mat() * ka.mat()) +
                    weights.second * (ka.mat() * kb.mat()));
    }
  }

  Mat gram = Mat::Zero(dim, dim);
  for (const Mat& k : raw) gram += k.adjoint() * k;
  const double max_eig =
      dim == 0 ? 0.0 : linalg::hermitian_eigenvalues(gram).maxCoeff();
  if (max_eig < tol.eps_psd * tol.eps_psd) {
    throw DegeneracyError(
        "indefinite_kraus: the two orderings cancel exactly (null combinator)");
  }
  const double factor = max_eig > 1.0 ? std::sqrt(max_eig) : 1.0;

  IndefiniteBranch out;
  out.rescale_factor = factor;
  int index = 0;
  for (Mat& k : raw) {
    out.ops.emplace_back(k / factor, "indef_" + std::to_string(index++), tol);
  }
  return out;
}

CausalReport causal_gap(const Scenario& sc, const std::string& final_label,
                        std::pair<Cplx, Cplx> weights, const Tolerance& tol) {
  const auto [a, b] = intermediate_pair(sc, final_label);
  CausalReport report;
  report.first_label = a;
  report.second_label = b;

  report.p_ab = ordered_probability(sc, {a, b}, final_label, tol);
  report.p_ba = ordered_probability(sc, {b, a}, final_label, tol);
  const double q_ab = chain_probability(sc, {a, b}, tol);
  const double q_ba = chain_probability(sc, {b, a}, tol);
  if (q_ab <= tol.eps_prob || q_ba <= tol.eps_prob) {
    throw ConditioningOnNullError(
        "causal_gap: an intermediate chain has vanishing probability");
  }
  report.p_cond_ab = std::min(1.0, report.p_ab / q_ab);
  report.p_cond_ba = std::min(1.0, report.p_ba / q_ba);

  const double lambda_cls = std::norm(weights.first) /
                            (std::norm(weights.first) + std::norm(weights.second));
  report.p_mixture =
      lambda_cls * report.p_cond_ab + (1.0 - lambda_cls) * report.p_cond_ba;

  // Comparison point: conditional probability of the final detection under
  // the scenario's composition of the two orders.
  double p_cmp = 0.0;
  bool use_coherent = true;
  if (sc.order_policy) {
    if (const auto* def =
            std::get_if<OrderPolicy::Definite>(&sc.order_policy->variant)) {
      if (def->order.size() != 2) {
        throw StructureError("causal_gap: definite order must list two labels");
      }
      p_cmp = def->order.front() == a ? report.p_cond_ab : report.p_cond_ba;
      use_coherent = false;
    } else if (const auto* mix =
                   std::get_if<OrderPolicy::Mixture>(&sc.order_policy->variant)) {
      p_cmp = mix->lambda * report.p_cond_ab +
              (1.0 - mix->lambda) * report.p_cond_ba;
      use_coherent = false;
    }
  }
  if (use_coherent) {
    const IndefiniteBranch combined =
        indefinite_kraus(sc.branch_of(a), sc.branch_of(b), weights, tol);
    report.rescale_factor = combined.rescale_factor;
    const Mat& rho = sc.rho().mat();
    Mat updated = Mat::Zero(rho.rows(), rho.cols());
    for (const KrausOperator& k : combined.ops) {
      updated += k.mat() * rho * k.mat().adjoint();
    }
    const double branch_prob = updated.trace().real();
    if (branch_prob <= tol.eps_prob) {
      throw ConditioningOnNullError(
          "causal_gap: combined intermediate branch has vanishing probability");
    }
    const double joint = (sc.effect_of(final_label).mat() * updated).trace().real();
    p_cmp = std::min(1.0, std::max(0.0, joint / branch_prob));
  }
  report.p_indefinite = p_cmp;

  // The mixture term is linear in lambda, so the reachable set is the
  // interval between the two conditionals; the gap is the distance to it.
  const double lo = std::min(report.p_cond_ab, report.p_cond_ba);
  const double hi = std::max(report.p_cond_ab, report.p_cond_ba);
  if (p_cmp < lo) {
    report.equality_gap = lo - p_cmp;
  } else if (p_cmp > hi) {
    report.equality_gap = p_cmp - hi;
  } else {
    report.equality_gap = 0.0;
  }
  return report;
}

}  // namespace causal
}  // namespace seqmeas
