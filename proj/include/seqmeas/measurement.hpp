#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "seqmeas/linalg.hpp"

namespace seqmeas {

// Normalized state vector.
class Ket {
 public:
  explicit Ket(Vec amplitudes, const Tolerance& tol = Tolerance::standard());

  const Vec& amplitudes() const { return amps_; }
  Eigen::Index dim() const { return amps_.size(); }

  static Ket basis(Eigen::Index dim, Eigen::Index index);

 private:
  Vec amps_;
};

// Hermitian, PSD, unit-trace operator.
class DensityMatrix {
 public:
  explicit DensityMatrix(Mat m, const Tolerance& tol = Tolerance::standard());

  static DensityMatrix pure(const Ket& k);
  static DensityMatrix maximally_mixed(Eigen::Index dim);

  const Mat& mat() const { return mat_; }
  Eigen::Index dim() const { return mat_.rows(); }

 private:
  Mat mat_;
};

// Measurement operator K; K^dag K must have eigenvalues in [0, 1].
class KrausOperator {
 public:
  KrausOperator(Mat m, std::string label,
                const Tolerance& tol = Tolerance::standard());

  const Mat& mat() const { return mat_; }
  const std::string& label() const { return label_; }

 private:
  Mat mat_;
  std::string label_;
};

// One instrument outcome: the k-indexed Kraus decomposition of an effect.
using Branch = std::vector<KrausOperator>;

// PSD operator with eigenvalues in [0, 1].
class Effect {
 public:
  explicit Effect(Mat m, const Tolerance& tol = Tolerance::standard());

  const Mat& mat() const { return mat_; }
  Eigen::Index dim() const { return mat_.rows(); }

 private:
  Mat mat_;
};

// Complete collection of effects: sum equals the identity.
class Povm {
 public:
  explicit Povm(std::vector<Effect> effects,
                const Tolerance& tol = Tolerance::standard());

  const std::vector<Effect>& effects() const { return effects_; }

 private:
  std::vector<Effect> effects_;
};

// Outcome label -> Kraus decomposition; the branch effects must sum to I.
class Instrument {
 public:
  explicit Instrument(std::map<std::string, Branch> branches,
                      const Tolerance& tol = Tolerance::standard());

  const std::map<std::string, Branch>& branches() const { return branches_; }

 private:
  std::map<std::string, Branch> branches_;
};

// System-detector interaction data: the detector starts in a fixed ready
// state; interacting with the i-th measurement eigenstate leaves it in
// post_interaction_states[i]; reading out outcome `l` projects it on
// pointer_states[l]. Pointer states for distinct outcomes must be mutually
// orthogonal.
//
// `eigenbasis`, when present, is a unitary whose columns are the measurement
// eigenstates; by default they are the computational basis states. It covers
// measurements that do not commute with the computational basis (the
// evolution operators sandwiching an ideal detector).
//
// `transition_amplitudes`, when present, holds the alpha_ij matrix of the
// destructive-measurement form (row i = initial eigenstate index, column j =
// final); by default the measurement is non-destructive (alpha_ij =
// delta_ij).
struct DetectorModel {
  std::map<std::string, Ket> pointer_states;
  std::vector<Ket> post_interaction_states;  // indexed by eigenstate
  Eigen::Index system_dim = 0;
  std::optional<Mat> eigenbasis;
  std::optional<Mat> transition_amplitudes;

  void validate(const Tolerance& tol = Tolerance::standard()) const;
  Eigen::Index detector_dim() const;
  bool same_detector_as(const DetectorModel& other, double eps) const;
};

// ---------------------------------------------------------------------------
// Operations

// E = sum_k K_k^dag K_k.
Effect effect_from_kraus(const Branch& branch,
                         const Tolerance& tol = Tolerance::standard());

// tr(rho E), clamped to [0,1]. Deviations beyond eps_prob (negative values,
// values above 1, imaginary parts) raise NumericalError rather than being
// clamped, to distinguish float noise from modeling bugs.
double born_probability(const DensityMatrix& rho, const Effect& e,
                        const Tolerance& tol = Tolerance::standard());

// tr(F sum_k K_k rho K_k^dag) for one intermediate branch and a final effect.
double sequence_probability(const DensityMatrix& rho, const Branch& intermediate,
                            const Effect& final_effect,
                            const Tolerance& tol = Tolerance::standard());

// rho -> sum_k K rho K^dag / tr(...). Throws ConditioningOnNullError when the
// branch probability is below eps_prob.
DensityMatrix kraus_update(const DensityMatrix& rho, const Branch& branch,
                           const Tolerance& tol = Tolerance::standard());

// K_l = sum_i <l_det|Phi_i> |i><i| (non-destructive), or
// K_l = sum_{ij} alpha_ij <l_det|Phi_i> |j><i| when transition amplitudes are
// given. Throws BindingError for an unknown outcome label.
KrausOperator kraus_from_detector_model(const DetectorModel& model,
                                        const std::string& outcome);

// ---------------------------------------------------------------------------
// Validation reports (operate on raw candidate matrices so that broken
// collections can be diagnosed instead of rejected at construction)

struct EffectReport {
  double hermiticity_deviation = 0.0;
  double min_eigenvalue = 0.0;
  double max_eigenvalue = 0.0;
  bool psd = false;
  bool within_unit = false;  // max eigenvalue <= 1 + eps_psd

  bool valid() const { return psd && within_unit; }
};

struct PovmReport {
  double completeness_deviation = 0.0;  // max entry of |sum E - I|
  std::vector<EffectReport> effects;
  bool complete = false;

  bool valid() const;
};

PovmReport validate_povm(const std::vector<Mat>& effects,
                         const Tolerance& tol = Tolerance::standard());

// Diagnose a single candidate effect matrix.
EffectReport inspect_effect(const Mat& e,
                            const Tolerance& tol = Tolerance::standard());

// Checks sum over all branches of K^dag K = I plus per-branch effect bounds.
PovmReport validate_instrument(const std::vector<Branch>& branches,
                               const Tolerance& tol = Tolerance::standard());

// Clamp a raw trace value into [0,1]; excursions beyond eps_prob throw.
double clamp_probability(double value, const Tolerance& tol,
                         const char* context);

}  // namespace seqmeas
