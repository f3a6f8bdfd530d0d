#include "seqmeas/evaluator.hpp"

#include <algorithm>
#include <cmath>

namespace seqmeas {
namespace evaluator {

namespace {

// Sequence chains flatten left-associatively: "d & a & b" gives
// [d, a, b] with the final measurement first and the temporal order read
// from the back.
std::vector<ExprPtr> flatten_chain(const ExprPtr& e) {
  std::vector<ExprPtr> elements;
  ExprPtr cur = e;
  while (cur->is_seq()) {
    elements.push_back(cur->seq().right);
    cur = cur->seq().left;
  }
  elements.push_back(cur);
  std::reverse(elements.begin(), elements.end());
  return elements;
}

bool all_labels(const std::vector<ExprPtr>& nodes) {
  return std::all_of(nodes.begin(), nodes.end(),
                     [](const ExprPtr& n) { return n->is_label(); });
}

bool all_seqs(const std::vector<ExprPtr>& nodes) {
  return std::all_of(nodes.begin(), nodes.end(),
                     [](const ExprPtr& n) { return n->is_seq(); });
}

// Temporal label order of a pure-label sequence chain (first acting first).
std::vector<std::string> temporal_labels(const ExprPtr& seq_expr) {
  const std::vector<ExprPtr> elements = flatten_chain(seq_expr);
  std::vector<std::string> labels;
  for (auto it = elements.rbegin(); it != elements.rend(); ++it) {
    if (!(*it)->is_label()) {
      throw StructureError(
          "an ordering branch of an indefinite-order alternative must be a "
          "plain sequence of labels");
    }
    labels.push_back((*it)->label().name);
  }
  return labels;
}

struct IndefiniteParts {
  std::vector<std::string> first_child_order;   // temporal
  std::vector<std::string> second_child_order;  // temporal
};

// An alternative of sequences nested inside a sequence models an
// indefinite-order measurement. Only the two-orderings-of-two-labels form of
// the causal module is supported.
IndefiniteParts indefinite_parts(const AltNode& alt) {
  if (alt.children.size() != 2) {
    throw StructureError(
        "indefinite-order alternative must have exactly two orderings");
  }
  IndefiniteParts parts;
  parts.first_child_order = temporal_labels(alt.children[0]);
  parts.second_child_order = temporal_labels(alt.children[1]);
  if (parts.first_child_order.size() != 2 ||
      parts.second_child_order.size() != 2) {
    throw StructureError(
        "indefinite-order alternative supports two measurements per ordering");
  }
  if (parts.first_child_order[0] != parts.second_child_order[1] ||
      parts.first_child_order[1] != parts.second_child_order[0]) {
    throw StructureError(
        "indefinite-order alternative must contain the two orderings of the "
        "same pair of measurements");
  }
  return parts;
}

const OrPolicy& require_or_policy(const Scenario& sc) {
  if (!sc.or_policy) {
    throw StructureError(
        "the query contains an atomic alternative but the scenario declares "
        "no or_policy; the three constructions of the combined operator are "
        "not equivalent, so one must be chosen explicitly");
  }
  return *sc.or_policy;
}

const OrderPolicy& require_order_policy(const Scenario& sc) {
  if (!sc.order_policy) {
    throw StructureError(
        "the query contains an indefinite-order alternative but the scenario "
        "declares no order_policy");
  }
  return *sc.order_policy;
}

Branch branch_for_element(const ExprPtr& element, const Scenario& sc,
                          const Tolerance& tol) {
  if (element->is_label()) return sc.branch_of(element->label().name);

  const AltNode& alt = element->alt();
  if (all_labels(alt.children)) {
    std::vector<Branch> branches;
    for (const ExprPtr& c : alt.children) {
      branches.push_back(sc.branch_of(c->label().name));
    }
    return {or_combine(branches, require_or_policy(sc), tol)};
  }
  if (all_seqs(alt.children)) {
    const IndefiniteParts parts = indefinite_parts(alt);
    const auto* coherent = std::get_if<OrderPolicy::IndefiniteCoherent>(
        &require_order_policy(sc).variant);
    if (coherent == nullptr) {
      throw StructureError(
          "definite/mixture order policies are resolved before branch "
          "construction");
    }
    // w1 multiplies the first-listed ordering. indefinite_kraus(a, b, w)
    // pairs w1 with "a acts first", so `a` is the first-acting label of the
    // first child.
    return causal::indefinite_kraus(
               sc.branch_of(parts.first_child_order[0]),
               sc.branch_of(parts.first_child_order[1]),
               {coherent->w1, coherent->w2}, tol)
        .ops;
  }
  throw StructureError(
      "an alternative inside a sequence must combine either labels or "
      "orderings, not a mix");
}

Effect effect_for_element(const ExprPtr& element, const Scenario& sc,
                          const Tolerance& tol) {
  if (element->is_label()) return sc.effect_of(element->label().name);
  // Atomic alternative in final position: effect of the combined operator.
  return effect_from_kraus(branch_for_element(element, sc, tol), tol);
}

double evaluate_elements(std::vector<ExprPtr> elements, const Scenario& sc,
                         const Tolerance& tol);

// Definite and mixture order policies act on whole-query probabilities, so
// resolve them by substituting one ordering for the alternative and
// recursing.
bool resolve_order_policy(const std::vector<ExprPtr>& elements,
                          const Scenario& sc, const Tolerance& tol,
                          double& out) {
  for (std::size_t i = 0; i < elements.size(); ++i) {
    const ExprPtr& el = elements[i];
    if (!el->is_alt() || !all_seqs(el->alt().children)) continue;
    const IndefiniteParts parts = indefinite_parts(el->alt());
    const OrderPolicy& policy = require_order_policy(sc);

    auto substituted = [&](std::size_t child) {
      std::vector<ExprPtr> next = elements;
      next[i] = el->alt().children[child];
      // A substituted sequence child splices into the chain.
      std::vector<ExprPtr> flat;
      for (const ExprPtr& n : next) {
        if (n->is_seq()) {
          for (const ExprPtr& piece : flatten_chain(n)) flat.push_back(piece);
        } else {
          flat.push_back(n);
        }
      }
      return flat;
    };

    if (const auto* def = std::get_if<OrderPolicy::Definite>(&policy.variant)) {
      if (def->order == parts.first_child_order) {
        out = evaluate_elements(substituted(0), sc, tol);
      } else if (def->order == parts.second_child_order) {
        out = evaluate_elements(substituted(1), sc, tol);
      } else {
        throw StructureError(
            "definite order policy does not match either ordering of the "
            "alternative");
      }
      return true;
    }
    if (const auto* mix = std::get_if<OrderPolicy::Mixture>(&policy.variant)) {
      out = mix->lambda * evaluate_elements(substituted(0), sc, tol) +
            (1.0 - mix->lambda) * evaluate_elements(substituted(1), sc, tol);
      return true;
    }
    return false;  // coherent: handled as a combined branch
  }
  return false;
}

double evaluate_elements(std::vector<ExprPtr> elements, const Scenario& sc,
                         const Tolerance& tol) {
  double resolved = 0.0;
  if (resolve_order_policy(elements, sc, tol, resolved)) return resolved;

  Mat rho = sc.rho().mat();
  // elements[0] is the final measurement; the rest act right to left.
  for (std::size_t i = elements.size(); i-- > 1;) {
    const Branch branch = branch_for_element(elements[i], sc, tol);
    Mat next = Mat::Zero(rho.rows(), rho.cols());
    for (const KrausOperator& k : branch) {
      if (k.mat().cols() != rho.rows()) {
        throw DimensionError("evaluate: operator for '" + k.label() +
                             "' does not match the state dimension");
      }
      next += k.mat() * rho * k.mat().adjoint();
    }
    rho = std::move(next);
  }
  const Effect f = effect_for_element(elements[0], sc, tol);
  if (f.dim() != rho.rows()) {
    throw DimensionError("evaluate: final effect dimension mismatch");
  }
  const Cplx tr = (f.mat() * rho).trace();
  if (std::abs(tr.imag()) > tol.eps_prob) {
    throw NumericalError("evaluate: trace has imaginary part " +
                         std::to_string(tr.imag()));
  }
  return clamp_probability(tr.real(), tol, "evaluate");
}

double evaluate_branch(const ExprPtr& e, const Scenario& sc,
                       const Tolerance& tol) {
  if (e->is_label()) {
    return born_probability(sc.rho(), sc.effect_of(e->label().name), tol);
  }
  return evaluate_elements(flatten_chain(e), sc, tol);
}

}  // namespace

double evaluate(const Query& q, const Scenario& sc, const Tolerance& tol) {
  sc.check_dimensions();
  const ExprPtr& expr = q.expr;
  if (expr->is_alt()) {
    const AltNode& alt = expr->alt();
    if (!all_labels(alt.children) && !all_seqs(alt.children)) {
      throw StructureError(
          "a top-level alternative must combine either complete sequences or "
          "bare final measurements, not a mix");
    }
    // P3*: probabilities of top-level alternatives add.
    double sum = 0.0;
    for (const ExprPtr& child : alt.children) {
      sum += evaluate_branch(child, sc, tol);
    }
    return clamp_probability(sum, tol, "evaluate (alternative sum)");
  }
  return evaluate_branch(expr, sc, tol);
}

KrausOperator or_combine(const std::vector<Branch>& branches,
                         const OrPolicy& policy, const Tolerance& tol) {
  if (branches.size() < 2) {
    throw InvariantError("or_combine: need at least two branches");
  }
  const Eigen::Index dim = branches.front().front().mat().cols();
  for (const Branch& b : branches) {
    if (b.empty()) throw InvariantError("or_combine: empty branch");
    for (const KrausOperator& k : b) {
      if (k.mat().cols() != dim) {
        throw DimensionError("or_combine: branch dimensions do not match");
      }
    }
  }

  if (std::holds_alternative<OrPolicy::CoherentSum>(policy.variant)) {
    Mat sum = Mat::Zero(branches.front().front().mat().rows(), dim);
    for (const Branch& b : branches) {
      if (b.size() != 1) {
        throw StructureError(
            "or_combine: the coherent-sum construction needs single-operator "
            "branches; a k-indexed decomposition has no common detector state "
            "to merge");
      }
      if (b.front().mat().rows() != sum.rows()) {
        throw DimensionError("or_combine: branch shapes do not match");
      }
      sum += b.front().mat();
    }
    return KrausOperator(std::move(sum), "or", tol);
  }

  if (const auto* comp = std::get_if<OrPolicy::Complement>(&policy.variant)) {
    Mat total = Mat::Zero(dim, dim);
    for (const Branch& b : branches) {
      total += effect_from_kraus(b, tol).mat();
    }
    const Eigen::VectorXd evals = linalg::hermitian_eigenvalues(total);
    if (evals.maxCoeff() > 1.0 + tol.eps_psd) {
      throw PovmViolationError(
          "or_combine: summed effects exceed the identity (max eigenvalue " +
          std::to_string(evals.maxCoeff()) +
          "), violating the POVM properties");
    }
    const Mat& u = comp->unitary;
    if (u.rows() != dim || u.cols() != dim) {
      throw DimensionError("or_combine: complement unitary dimension mismatch");
    }
    if ((u.adjoint() * u - Mat::Identity(dim, dim)).cwiseAbs().maxCoeff() >
        tol.eps_prob) {
      throw InvariantError("or_combine: complement matrix is not unitary");
    }
    return KrausOperator(u * linalg::sqrt_psd(total, tol), "or", tol);
  }

  const auto& ex = std::get<OrPolicy::Explicit>(policy.variant);
  if (ex.kraus.cols() != dim) {
    throw DimensionError("or_combine: explicit operator dimension mismatch");
  }
  return KrausOperator(ex.kraus, "or", tol);
}

double conditional(const Query& q_joint, const Query& q_given,
                   const Scenario& sc, const Tolerance& tol) {
  const double denom = evaluate(q_given, sc, tol);
  if (denom <= tol.eps_prob) {
    throw ConditioningOnNullError(
        "conditional: the conditioning event has probability " +
        std::to_string(denom));
  }
  const double joint = evaluate(q_joint, sc, tol);
  return std::min(1.0, std::max(0.0, joint / denom));
}

Mat partial_trace_second(const Mat& joint, Eigen::Index dim_a,
                         Eigen::Index dim_b) {
  if (joint.rows() != dim_a * dim_b || joint.cols() != dim_a * dim_b) {
    throw DimensionError("partial_trace_second: dimension mismatch");
  }
  Mat out = Mat::Zero(dim_a, dim_a);
  for (Eigen::Index i = 0; i < dim_a; ++i) {
    for (Eigen::Index j = 0; j < dim_a; ++j) {
      Cplx sum = 0.0;
      for (Eigen::Index k = 0; k < dim_b; ++k) {
        sum += joint(i * dim_b + k, j * dim_b + k);
      }
      out(i, j) = sum;
    }
  }
  return out;
}

double evaluate_reduced_trace(const Query& q, const Scenario& sc,
                              const DetectorModel& model,
                              const Tolerance& tol) {
  model.validate(tol);
  const ExprPtr& expr = q.expr;
  if (!expr->is_seq() || !expr->seq().left->is_label() ||
      !expr->seq().right->is_alt() ||
      !all_labels(expr->seq().right->alt().children)) {
    throw StructureError(
        "evaluate_reduced_trace expects a query of the form "
        "'final & (a + b) | s'");
  }
  const std::string final_label = expr->seq().left->label().name;
  for (const ExprPtr& c : expr->seq().right->alt().children) {
    if (model.pointer_states.find(c->label().name) ==
        model.pointer_states.end()) {
      throw BindingError("detector model has no pointer state for outcome '" +
                         c->label().name + "'");
    }
  }

  const Eigen::Index ds = model.system_dim;
  const Eigen::Index dd = model.detector_dim();
  if (sc.rho().dim() != ds) {
    throw DimensionError(
        "evaluate_reduced_trace: model and scenario dimensions do not match");
  }

  // Interaction isometry W |i> = (sum_j alpha_ij |j>) (x) |Phi_i> in the
  // measurement eigenbasis; conjugate by the eigenbasis when one is declared.
  Mat w = Mat::Zero(ds * dd, ds);
  for (Eigen::Index i = 0; i < ds; ++i) {
    const Vec& phi = model.post_interaction_states[i].amplitudes();
    for (Eigen::Index d = 0; d < dd; ++d) {
      if (model.transition_amplitudes) {
        for (Eigen::Index j = 0; j < ds; ++j) {
          w(j * dd + d, i) += (*model.transition_amplitudes)(i, j) * phi(d);
        }
      } else {
        w(i * dd + d, i) = phi(d);
      }
    }
  }
  if (model.eigenbasis) {
    Mat lift = Mat::Zero(ds * dd, ds * dd);  // eigenbasis (x) identity
    for (Eigen::Index i = 0; i < ds; ++i) {
      for (Eigen::Index j = 0; j < ds; ++j) {
        for (Eigen::Index d = 0; d < dd; ++d) {
          lift(i * dd + d, j * dd + d) = (*model.eigenbasis)(i, j);
        }
      }
    }
    w = lift * w * model.eigenbasis->adjoint();
  }

  const Mat joint = w * sc.rho().mat() * w.adjoint();
  const Mat reduced = partial_trace_second(joint, ds, dd);
  const Effect f = sc.effect_of(final_label);
  if (f.dim() != ds) {
    throw DimensionError("evaluate_reduced_trace: final effect dimension");
  }
  const Cplx tr = (f.mat() * reduced).trace();
  if (std::abs(tr.imag()) > tol.eps_prob) {
    throw NumericalError("evaluate_reduced_trace: trace has imaginary part " +
                         std::to_string(tr.imag()));
  }
  return clamp_probability(tr.real(), tol, "evaluate_reduced_trace");
}

// ---------------------------------------------------------------------------
// Brute-force system (x) detector oracle

namespace {

// State vector over system (x) appended ancillas; the system index is the
// slowest, each new ancilla is appended as the fastest index.
struct JointState {
  Vec psi;
  Eigen::Index system_dim;
  std::vector<Eigen::Index> ancilla_dims;
  std::vector<Vec> readouts;  // one pointer pattern per ancilla

  Eigen::Index total_dim() const { return psi.size(); }
};

void apply_system_unitary(JointState& state, const Mat& u) {
  const Eigen::Index ds = state.system_dim;
  const Eigen::Index block = state.total_dim() / ds;
  Vec next = Vec::Zero(state.total_dim());
  for (Eigen::Index a = 0; a < block; ++a) {
    for (Eigen::Index sp = 0; sp < ds; ++sp) {
      Cplx sum = 0.0;
      for (Eigen::Index s = 0; s < ds; ++s) {
        sum += u(sp, s) * state.psi(s * block + a);
      }
      next(sp * block + a) = sum;
    }
  }
  state.psi = std::move(next);
}

void append_interaction(JointState& state, const DetectorModel& model,
                        const Vec& readout, const OracleOptions& options) {
  const Eigen::Index ds = state.system_dim;
  const Eigen::Index dd = model.detector_dim();
  const Eigen::Index prev = state.total_dim();
  if (prev * dd > options.dimension_cap) {
    throw ResourceError("oracle: tensor dimension " +
                        std::to_string(prev * dd) + " exceeds the cap of " +
                        std::to_string(options.dimension_cap));
  }
  const Eigen::Index block = prev / ds;  // joint dimension of prior ancillas

  // Work in the measurement eigenbasis when one is declared.
  if (model.eigenbasis) apply_system_unitary(state, model.eigenbasis->adjoint());

  Vec next = Vec::Zero(prev * dd);
  for (Eigen::Index i = 0; i < ds; ++i) {
    const Vec& phi = model.post_interaction_states[i].amplitudes();
    for (Eigen::Index a = 0; a < block; ++a) {
      const Cplx amp = state.psi(i * block + a);
      if (amp == Cplx{0.0, 0.0}) continue;
      for (Eigen::Index d = 0; d < dd; ++d) {
        const Cplx w = amp * phi(d);
        if (model.transition_amplitudes) {
          for (Eigen::Index j = 0; j < ds; ++j) {
            next((j * block + a) * dd + d) +=
                (*model.transition_amplitudes)(i, j) * w;
          }
        } else {
          next((i * block + a) * dd + d) += w;
        }
      }
    }
  }
  state.psi = std::move(next);
  state.ancilla_dims.push_back(dd);
  state.readouts.push_back(readout);

  if (model.eigenbasis) apply_system_unitary(state, *model.eigenbasis);
}

// Unitary dilation of a single contraction K: psi -> K psi (x) |0> +
// sqrt(I - K^dag K) psi (x) |1>; reading the ancilla in |0> reproduces K.
void append_dilation(JointState& state, const Mat& k, const OracleOptions& options,
                     const Tolerance& tol) {
  const Eigen::Index ds = state.system_dim;
  const Eigen::Index prev = state.total_dim();
  if (prev * 2 > options.dimension_cap) {
    throw ResourceError("oracle: tensor dimension exceeds the cap");
  }
  const Mat defect = Mat::Identity(ds, ds) - k.adjoint() * k;
  const Mat l = linalg::sqrt_psd(defect, tol);
  const Eigen::Index block = prev / ds;

  Vec next = Vec::Zero(prev * 2);
  for (Eigen::Index a = 0; a < block; ++a) {
    for (Eigen::Index j = 0; j < ds; ++j) {
      Cplx amp0 = 0.0, amp1 = 0.0;
      for (Eigen::Index i = 0; i < ds; ++i) {
        const Cplx amp = state.psi(i * block + a);
        amp0 += k(j, i) * amp;
        amp1 += l(j, i) * amp;
      }
      next((j * block + a) * 2 + 0) = amp0;
      next((j * block + a) * 2 + 1) = amp1;
    }
  }
  state.psi = std::move(next);
  state.ancilla_dims.push_back(2);
  Vec zero(2);
  zero << Cplx{1.0, 0.0}, Cplx{0.0, 0.0};
  state.readouts.push_back(zero);
}

// Contract every ancilla with its readout pattern, leaving a system vector.
Vec contract_readouts(const JointState& state) {
  Vec psi = state.psi;
  for (std::size_t n = state.ancilla_dims.size(); n-- > 0;) {
    const Eigen::Index dd = state.ancilla_dims[n];
    const Vec& u = state.readouts[n];
    const Eigen::Index outer = psi.size() / dd;
    Vec next = Vec::Zero(outer);
    for (Eigen::Index f = 0; f < outer; ++f) {
      Cplx sum = 0.0;
      for (Eigen::Index d = 0; d < dd; ++d) {
        sum += psi(f * dd + d) * std::conj(u(d));
      }
      next(f) = sum;
    }
    psi = std::move(next);
  }
  return psi;
}

const DetectorModel& model_for(const std::map<std::string, DetectorModel>& models,
                               const std::string& label) {
  const auto it = models.find(label);
  if (it == models.end()) {
    throw BindingError("oracle: no detector model for intermediate label '" +
                       label + "'");
  }
  return it->second;
}

double oracle_sequence(const std::vector<ExprPtr>& elements, const Scenario& sc,
                       const std::map<std::string, DetectorModel>& models,
                       const OracleOptions& options, const Tolerance& tol) {
  if (!elements[0]->is_label()) {
    throw StructureError("oracle: final measurement must be a single label");
  }
  const Effect f = sc.effect_of(elements[0]->label().name);

  // Mixed preparations are simulated per eigenvector of rho.
  Eigen::SelfAdjointEigenSolver<Mat> eig(sc.rho().mat());
  double total = 0.0;
  for (Eigen::Index m = 0; m < eig.eigenvalues().size(); ++m) {
    const double weight = eig.eigenvalues()(m);
    if (weight < 1e-15) continue;

    JointState state;
    state.psi = eig.eigenvectors().col(m);
    state.system_dim = sc.rho().dim();

    for (std::size_t idx = elements.size(); idx-- > 1;) {
      const ExprPtr& el = elements[idx];
      if (el->is_label()) {
        const std::string& label = el->label().name;
        const DetectorModel& model = model_for(models, label);
        model.validate(tol);
        const auto ptr = model.pointer_states.find(label);
        if (ptr == model.pointer_states.end()) {
          throw BindingError("oracle: detector model for '" + label +
                             "' lacks a pointer state for that outcome");
        }
        append_interaction(state, model, ptr->second.amplitudes(), options);
        continue;
      }
      if (!el->is_alt() || !all_labels(el->alt().children)) {
        throw StructureError(
            "oracle: only atomic alternatives of labels are supported inside "
            "a sequence (no indefinite order)");
      }
      const OrPolicy& policy = require_or_policy(sc);
      if (std::holds_alternative<OrPolicy::CoherentSum>(policy.variant)) {
        // One shared detector whose readout is the merged pointer: the sum
        // of the outcome pointers reproduces sum_i K_i.
        const std::string& first = el->alt().children.front()->label().name;
        const DetectorModel& model = model_for(models, first);
        model.validate(tol);
        Vec merged = Vec::Zero(model.detector_dim());
        for (const ExprPtr& c : el->alt().children) {
          const std::string& label = c->label().name;
          const DetectorModel& other = model_for(models, label);
          if (!model.same_detector_as(other, tol.eps_prob)) {
            throw StructureError(
                "oracle: a coherent-sum alternative requires all outcomes to "
                "share one detector model");
          }
          const auto ptr = model.pointer_states.find(label);
          if (ptr == model.pointer_states.end()) {
            throw BindingError("oracle: no pointer state for outcome '" +
                               label + "'");
          }
          merged += ptr->second.amplitudes();
        }
        append_interaction(state, model, merged, options);
      } else {
        // Complement / explicit constructions have no per-outcome pointer;
        // realize the combined operator through its unitary dilation.
        std::vector<Branch> branches;
        for (const ExprPtr& c : el->alt().children) {
          branches.push_back(sc.branch_of(c->label().name));
        }
        const KrausOperator combined = or_combine(branches, policy, tol);
        append_dilation(state, combined.mat(), options, tol);
      }
    }

    const Vec reduced = contract_readouts(state);
    total += weight * (reduced.adjoint() * f.mat() * reduced)(0, 0).real();
  }
  return clamp_probability(total, tol, "brute_force_oracle");
}

}  // namespace

double brute_force_oracle(const Query& q, const Scenario& sc,
                          const std::map<std::string, DetectorModel>& models,
                          const OracleOptions& options, const Tolerance& tol) {
  sc.check_dimensions();
  const ExprPtr& expr = q.expr;
  if (expr->is_label()) {
    const Effect f = sc.effect_of(expr->label().name);
    return clamp_probability((f.mat() * sc.rho().mat()).trace().real(), tol,
                             "brute_force_oracle");
  }
  if (expr->is_alt()) {
    const AltNode& alt = expr->alt();
    if (!all_labels(alt.children) && !all_seqs(alt.children)) {
      throw StructureError(
          "oracle: a top-level alternative must combine either complete "
          "sequences or bare final measurements");
    }
    double sum = 0.0;
    for (const ExprPtr& child : alt.children) {
      if (child->is_label()) {
        const Effect f = sc.effect_of(child->label().name);
        sum += (f.mat() * sc.rho().mat()).trace().real();
      } else {
        sum += oracle_sequence(flatten_chain(child), sc, models, options, tol);
      }
    }
    return clamp_probability(sum, tol, "brute_force_oracle");
  }
  return oracle_sequence(flatten_chain(expr), sc, models, options, tol);
}

}  // namespace evaluator
}  // namespace seqmeas
