#include "seqmeas/eraser.hpp"

#include <cmath>

namespace seqmeas {
namespace eraser {

namespace {
constexpr Cplx kI{0.0, 1.0};
}

void EraserBasis::validate(const Tolerance& tol) const {
  const double norm = std::norm(alpha) + std::norm(beta);
  if (std::abs(norm - 1.0) > tol.eps_prob) {
    throw InvariantError("eraser basis: |alpha|^2 + |beta|^2 = " +
                         std::to_string(norm) + ", expected 1");
  }
  if (std::abs(alpha) <= tol.eps_prob || std::abs(beta) <= tol.eps_prob) {
    throw InvariantError(
        "eraser basis: alpha and beta must both be nonzero (a genuine "
        "superposition of the which-path states)");
  }
}

Mat EraserBasis::coefficient_matrix() const {
  const Cplx ephi = std::exp(kI * phase);
  Mat v(2, 2);
  v(0, 0) = alpha;
  v(0, 1) = beta;
  v(1, 0) = -ephi * std::conj(beta);
  v(1, 1) = ephi * std::conj(alpha);
  return v;
}

QrKraus build_qr_kraus(const EraserBasis& basis, const KrausOperator& k_a,
                       const KrausOperator& k_b, const Tolerance& tol) {
  basis.validate(tol);
  if (k_a.mat().rows() != k_b.mat().rows() ||
      k_a.mat().cols() != k_b.mat().cols()) {
    throw DimensionError("build_qr_kraus: operator shapes do not match");
  }
  const Mat v = basis.coefficient_matrix();
  // K for a rotated pointer |q> picks up the conjugated coefficients.
  Mat kq = std::conj(v(0, 0)) * k_a.mat() + std::conj(v(0, 1)) * k_b.mat();
  Mat kr = std::conj(v(1, 0)) * k_a.mat() + std::conj(v(1, 1)) * k_b.mat();
  return QrKraus{KrausOperator(std::move(kq), "q", tol),
                 KrausOperator(std::move(kr), "r", tol)};
}

namespace {

bool is_projector(const Mat& m, const Tolerance& tol) {
  return linalg::hermiticity_deviation(m) <= tol.eps_herm &&
         linalg::approx_equal(m * m, m, 1e-9);
}

}  // namespace

EquivalenceReport verify_equivalence(const EraserBasis& basis,
                                     const Scenario& sc,
                                     const std::string& path_a_label,
                                     const std::string& path_b_label,
                                     const std::string& final_label,
                                     const Tolerance& tol) {
  basis.validate(tol);
  const Branch branch_a = sc.branch_of(path_a_label);
  const Branch branch_b = sc.branch_of(path_b_label);
  if (branch_a.size() != 1 || branch_b.size() != 1) {
    throw StructureError(
        "verify_equivalence: path labels must bind single operators");
  }
  const KrausOperator& k_a = branch_a.front();
  const KrausOperator& k_b = branch_b.front();
  if (!is_projector(k_a.mat(), tol) || !is_projector(k_b.mat(), tol) ||
      !linalg::approx_equal(k_a.mat() * k_b.mat(),
                            Mat::Zero(k_a.mat().rows(), k_a.mat().cols()),
                            1e-9)) {
    throw StructureError(
        "verify_equivalence: the basis-change identity is proven for perfect "
        "which-path measurements; bind the path labels to orthogonal "
        "projectors (the unsharp case is available through plain evaluate "
        "calls)");
  }

  const QrKraus qr = build_qr_kraus(basis, k_a, k_b, tol);
  const Effect f = sc.effect_of(final_label);
  const DensityMatrix& rho = sc.rho();

  EquivalenceReport report;
  report.lhs = sequence_probability(rho, {qr.k_q}, f, tol) +
               sequence_probability(rho, {qr.k_r}, f, tol);
  report.rhs = sequence_probability(rho, {k_a}, f, tol) +
               sequence_probability(rho, {k_b}, f, tol);
  report.gap = std::abs(report.lhs - report.rhs);
  return report;
}

}  // namespace eraser
}  // namespace seqmeas
