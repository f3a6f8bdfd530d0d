#include "seqmeas/measurement.hpp"

#include <cmath>

namespace seqmeas {

namespace {

void require_same_dim(Eigen::Index a, Eigen::Index b, const char* what) {
  if (a != b) {
    throw DimensionError(std::string(what) + ": dimensions " +
                         std::to_string(a) + " and " + std::to_string(b) +
                         " do not match");
  }
}

}  // namespace

// --------------------------------------------------------------------------
// Types

Ket::Ket(Vec amplitudes, const Tolerance& tol) : amps_(std::move(amplitudes)) {
  if (amps_.size() == 0) throw InvariantError("Ket: empty amplitude vector");
  if (!amps_.allFinite()) throw InvariantError("Ket: non-finite amplitude");
  if (std::abs(amps_.norm() - 1.0) > tol.eps_prob) {
    throw InvariantError("Ket: norm " + std::to_string(amps_.norm()) +
                         " is not 1 within tolerance");
  }
}

Ket Ket::basis(Eigen::Index dim, Eigen::Index index) {
  Vec v = Vec::Zero(dim);
  v(index) = 1.0;
  return Ket(std::move(v));
}

DensityMatrix::DensityMatrix(Mat m, const Tolerance& tol) : mat_(std::move(m)) {
  if (mat_.rows() != mat_.cols()) {
    throw DimensionError("DensityMatrix: matrix must be square");
  }
  if (!mat_.allFinite()) throw InvariantError("DensityMatrix: non-finite entry");
  if (linalg::hermiticity_deviation(mat_) > tol.eps_herm) {
    throw InvariantError("DensityMatrix: not Hermitian within tolerance");
  }
  if (!linalg::is_psd(mat_, tol)) {
    throw InvariantError("DensityMatrix: not positive semidefinite");
  }
  if (std::abs(mat_.trace() - Cplx(1.0, 0.0)) > tol.eps_prob) {
    throw InvariantError("DensityMatrix: trace is not 1 within tolerance");
  }
}

DensityMatrix DensityMatrix::pure(const Ket& k) {
  return DensityMatrix(k.amplitudes() * k.amplitudes().adjoint());
}

DensityMatrix DensityMatrix::maximally_mixed(Eigen::Index dim) {
  return DensityMatrix(Mat::Identity(dim, dim) / static_cast<double>(dim));
}

KrausOperator::KrausOperator(Mat m, std::string label, const Tolerance& tol)
    : mat_(std::move(m)), label_(std::move(label)) {
  if (!mat_.allFinite()) {
    throw InvariantError("KrausOperator '" + label_ + "': non-finite entry");
  }
  const Mat gram = mat_.adjoint() * mat_;
  const Eigen::VectorXd evals = linalg::hermitian_eigenvalues(gram);
  if (evals.size() > 0 &&
      (evals.minCoeff() < -tol.eps_psd || evals.maxCoeff() > 1.0 + tol.eps_psd)) {
    throw InvariantError("KrausOperator '" + label_ +
                         "': K^dag K has eigenvalues outside [0, 1]");
  }
}

Effect::Effect(Mat m, const Tolerance& tol) : mat_(std::move(m)) {
  if (mat_.rows() != mat_.cols()) {
    throw DimensionError("Effect: matrix must be square");
  }
  if (!linalg::is_psd(mat_, tol)) {
    throw InvariantError("Effect: not positive semidefinite");
  }
  if (mat_.rows() > 0 &&
      linalg::hermitian_eigenvalues(mat_).maxCoeff() > 1.0 + tol.eps_psd) {
    throw InvariantError("Effect: eigenvalue exceeds 1");
  }
}

Povm::Povm(std::vector<Effect> effects, const Tolerance& tol)
    : effects_(std::move(effects)) {
  if (effects_.empty()) throw InvariantError("Povm: no effects");
  const Eigen::Index dim = effects_.front().dim();
  Mat sum = Mat::Zero(dim, dim);
  for (const Effect& e : effects_) {
    require_same_dim(e.dim(), dim, "Povm");
    sum += e.mat();
  }
  const double dev = (sum - Mat::Identity(dim, dim)).cwiseAbs().maxCoeff();
  if (dev > tol.eps_prob) {
    throw InvariantError("Povm: effects sum deviates from identity by " +
                         std::to_string(dev));
  }
}

Instrument::Instrument(std::map<std::string, Branch> branches,
                       const Tolerance& tol)
    : branches_(std::move(branches)) {
  if (branches_.empty()) throw InvariantError("Instrument: no branches");
  std::vector<Branch> all;
  for (const auto& [label, branch] : branches_) all.push_back(branch);
  const PovmReport report = validate_instrument(all, tol);
  if (!report.complete) {
    throw InvariantError(
        "Instrument: sum of K^dag K deviates from identity by " +
        std::to_string(report.completeness_deviation));
  }
}

void DetectorModel::validate(const Tolerance& tol) const {
  if (pointer_states.empty()) {
    throw InvariantError("DetectorModel: no pointer states");
  }
  if (system_dim <= 0) {
    throw InvariantError("DetectorModel: system dimension must be positive");
  }
  if (static_cast<Eigen::Index>(post_interaction_states.size()) != system_dim) {
    throw InvariantError(
        "DetectorModel: needs one post-interaction state per system basis "
        "state");
  }
  const Eigen::Index ddim = detector_dim();
  for (const auto& [label, ket] : pointer_states) {
    require_same_dim(ket.dim(), ddim, "DetectorModel pointer state");
  }
  for (const Ket& ket : post_interaction_states) {
    require_same_dim(ket.dim(), ddim, "DetectorModel post-interaction state");
  }
  for (auto it = pointer_states.begin(); it != pointer_states.end(); ++it) {
    for (auto jt = std::next(it); jt != pointer_states.end(); ++jt) {
      const Cplx overlap = it->second.amplitudes().dot(jt->second.amplitudes());
      if (std::abs(overlap) > tol.eps_prob) {
        throw InvariantError("DetectorModel: pointer states '" + it->first +
                             "' and '" + jt->first + "' are not orthogonal");
      }
    }
  }
  if (transition_amplitudes) {
    if (transition_amplitudes->rows() != system_dim ||
        transition_amplitudes->cols() != system_dim) {
      throw InvariantError(
          "DetectorModel: transition amplitude matrix must be system_dim x "
          "system_dim");
    }
  }
  if (eigenbasis) {
    if (eigenbasis->rows() != system_dim || eigenbasis->cols() != system_dim) {
      throw InvariantError(
          "DetectorModel: eigenbasis must be system_dim x system_dim");
    }
    const Mat gram = eigenbasis->adjoint() * (*eigenbasis);
    if ((gram - Mat::Identity(system_dim, system_dim)).cwiseAbs().maxCoeff() >
        tol.eps_prob) {
      throw InvariantError("DetectorModel: eigenbasis is not unitary");
    }
  }
}

Eigen::Index DetectorModel::detector_dim() const {
  return pointer_states.begin()->second.dim();
}

bool DetectorModel::same_detector_as(const DetectorModel& other,
                                     double eps) const {
  if (system_dim != other.system_dim) return false;
  if (pointer_states.size() != other.pointer_states.size()) return false;
  if (eigenbasis.has_value() != other.eigenbasis.has_value()) return false;
  if (eigenbasis &&
      (*eigenbasis - *other.eigenbasis).cwiseAbs().maxCoeff() > eps) {
    return false;
  }
  for (const auto& [label, ket] : pointer_states) {
    auto it = other.pointer_states.find(label);
    if (it == other.pointer_states.end()) return false;
    if ((ket.amplitudes() - it->second.amplitudes()).cwiseAbs().maxCoeff() > eps)
      return false;
  }
  for (std::size_t i = 0; i < post_interaction_states.size(); ++i) {
    if ((post_interaction_states[i].amplitudes() -
         other.post_interaction_states[i].amplitudes())
            .cwiseAbs()
            .maxCoeff() > eps)
      return false;
  }
  return true;
}

// --------------------------------------------------------------------------
// Operations

Effect effect_from_kraus(const Branch& branch, const Tolerance& tol) {
  if (branch.empty()) throw InvariantError("effect_from_kraus: empty branch");
  const Eigen::Index dim = branch.front().mat().cols();
  Mat sum = Mat::Zero(dim, dim);
  for (const KrausOperator& k : branch) {
    require_same_dim(k.mat().cols(), dim, "effect_from_kraus");
    require_same_dim(k.mat().rows(), branch.front().mat().rows(),
                     "effect_from_kraus");
    sum += k.mat().adjoint() * k.mat();
  }
  return Effect(std::move(sum), tol);
}

double clamp_probability(double value, const Tolerance& tol,
                         const char* context) {
  if (value < -tol.eps_prob || value > 1.0 + tol.eps_prob) {
    throw NumericalError(std::string(context) + ": value " +
                         std::to_string(value) + " is outside [0, 1] beyond "
                         "tolerance");
  }
  return std::min(1.0, std::max(0.0, value));
}

double born_probability(const DensityMatrix& rho, const Effect& e,
                        const Tolerance& tol) {
  require_same_dim(rho.dim(), e.dim(), "born_probability");
  const Cplx tr = (rho.mat() * e.mat()).trace();
  if (std::abs(tr.imag()) > tol.eps_prob) {
    throw NumericalError("born_probability: trace has imaginary part " +
                         std::to_string(tr.imag()));
  }
  return clamp_probability(tr.real(), tol, "born_probability");
}

namespace {

Mat apply_branch(const Mat& rho, const Branch& branch) {
  Mat out = Mat::Zero(branch.front().mat().rows(), branch.front().mat().rows());
  for (const KrausOperator& k : branch) {
    out += k.mat() * rho * k.mat().adjoint();
  }
  return out;
}

}  // namespace

double sequence_probability(const DensityMatrix& rho, const Branch& intermediate,
                            const Effect& final_effect, const Tolerance& tol) {
  if (intermediate.empty()) {
    throw InvariantError("sequence_probability: empty intermediate branch");
  }
  require_same_dim(rho.dim(), intermediate.front().mat().cols(),
                   "sequence_probability");
  const Mat updated = apply_branch(rho.mat(), intermediate);
  require_same_dim(updated.rows(), final_effect.dim(), "sequence_probability");
  const Cplx tr = (final_effect.mat() * updated).trace();
  if (std::abs(tr.imag()) > tol.eps_prob) {
    throw NumericalError("sequence_probability: trace has imaginary part " +
                         std::to_string(tr.imag()));
  }
  return clamp_probability(tr.real(), tol, "sequence_probability");
}

DensityMatrix kraus_update(const DensityMatrix& rho, const Branch& branch,
                           const Tolerance& tol) {
  if (branch.empty()) throw InvariantError("kraus_update: empty branch");
  const Mat updated = apply_branch(rho.mat(), branch);
  const double prob = updated.trace().real();
  if (prob <= tol.eps_prob) {
    throw ConditioningOnNullError(
        "kraus_update: branch probability " + std::to_string(prob) +
        " is too small to condition on");
  }
  return DensityMatrix(updated / prob, tol);
}

KrausOperator kraus_from_detector_model(const DetectorModel& model,
                                        const std::string& outcome) {
  const auto it = model.pointer_states.find(outcome);
  if (it == model.pointer_states.end()) {
    throw BindingError("detector model has no pointer state for outcome '" +
                       outcome + "'");
  }
  const Vec& pointer = it->second.amplitudes();
  const Eigen::Index n = model.system_dim;
  Mat k = Mat::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    // <l_det | Phi_i>
    const Cplx overlap = pointer.dot(model.post_interaction_states[i].amplitudes());
    if (model.transition_amplitudes) {
      for (Eigen::Index j = 0; j < n; ++j) {
        k(j, i) += (*model.transition_amplitudes)(i, j) * overlap;
      }
    } else {
      k(i, i) = overlap;
    }
  }
  if (model.eigenbasis) {
    k = (*model.eigenbasis) * k * model.eigenbasis->adjoint();
  }
  return KrausOperator(std::move(k), outcome);
}

// --------------------------------------------------------------------------
// Validation

bool PovmReport::valid() const {
  if (!complete) return false;
  for (const EffectReport& e : effects) {
    if (!e.valid()) return false;
  }
  return true;
}

EffectReport inspect_effect(const Mat& e, const Tolerance& tol) {
  EffectReport r;
  r.hermiticity_deviation = linalg::hermiticity_deviation(e);
  if (e.rows() != e.cols() || e.rows() == 0) {
    r.psd = false;
    r.within_unit = false;
    return r;
  }
  const Eigen::VectorXd evals = linalg::hermitian_eigenvalues(e);
  r.min_eigenvalue = evals.minCoeff();
  r.max_eigenvalue = evals.maxCoeff();
  r.psd = r.hermiticity_deviation <= tol.eps_herm &&
          r.min_eigenvalue >= -tol.eps_psd;
  r.within_unit = r.max_eigenvalue <= 1.0 + tol.eps_psd;
  return r;
}

PovmReport validate_povm(const std::vector<Mat>& effects, const Tolerance& tol) {
  PovmReport report;
  if (effects.empty()) return report;
  const Eigen::Index dim = effects.front().rows();
  Mat sum = Mat::Zero(dim, dim);
  bool shapes_ok = true;
  for (const Mat& e : effects) {
    report.effects.push_back(inspect_effect(e, tol));
    if (e.rows() == dim && e.cols() == dim) {
      sum += e;
    } else {
      shapes_ok = false;
    }
  }
  if (shapes_ok) {
    report.completeness_deviation =
        (sum - Mat::Identity(dim, dim)).cwiseAbs().maxCoeff();
    report.complete = report.completeness_deviation <= tol.eps_prob;
  } else {
    report.completeness_deviation = std::numeric_limits<double>::infinity();
    report.complete = false;
  }
  return report;
}

PovmReport validate_instrument(const std::vector<Branch>& branches,
                               const Tolerance& tol) {
  std::vector<Mat> effects;
  effects.reserve(branches.size());
  for (const Branch& branch : branches) {
    if (branch.empty()) continue;
    const Eigen::Index dim = branch.front().mat().cols();
    Mat sum = Mat::Zero(dim, dim);
    for (const KrausOperator& k : branch) sum += k.mat().adjoint() * k.mat();
    effects.push_back(std::move(sum));
  }
  return validate_povm(effects, tol);
}

}  // namespace seqmeas
