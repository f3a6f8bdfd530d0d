#pragma once

#include <string>

#include "seqmeas/scenario.hpp"

namespace seqmeas {
namespace eraser {

// Rotated detector basis for the quantum eraser:
//   |q_det> =            alpha |a_det> + beta |b_det>
//   |r_det> = -e^{i phase} conj(beta) |a_det> + e^{i phase} conj(alpha) |b_det>
// The second row is the unitary completion of the first; it reduces to the
// textbook -e^{i phi} beta / e^{i phi} alpha form when alpha and beta are
// relatively real. Both coefficients must be nonzero (a genuine
// superposition) and |alpha|^2 + |beta|^2 = 1.
struct EraserBasis {
  Cplx alpha;
  Cplx beta;
  double phase = 0.0;

  void validate(const Tolerance& tol = Tolerance::standard()) const;

  // Row-major 2x2 basis-change matrix V with rows (q, r) over columns (a, b).
  Mat coefficient_matrix() const;
};

struct QrKraus {
  KrausOperator k_q;
  KrausOperator k_r;
};

// K_q = conj(alpha) K_a + conj(beta) K_b and the matching K_r; the rotated
// operators measure superposed detector states instead of the which-path
// ones, so each single outcome shows interference.
QrKraus build_qr_kraus(const EraserBasis& basis, const KrausOperator& k_a,
                       const KrausOperator& k_b,
                       const Tolerance& tol = Tolerance::standard());

struct EquivalenceReport {
  double lhs = 0.0;  // P((d & q) or (d & r) | s)
  double rhs = 0.0;  // P((d & a) or (d & b) | s)
  double gap = 0.0;  // |lhs - rhs|

  bool within(double eps) const { return gap < eps; }
};

// Checks that the rotated-basis pair carries exactly the which-path
// probability: the per-outcome interference terms cancel in the sum over the
// complete rotated basis. Requires the scenario to bind the path labels to
// perfect (projective, mutually orthogonal) which-path operators and the
// final label to an effect.
EquivalenceReport verify_equivalence(const EraserBasis& basis,
                                     const Scenario& sc,
                                     const std::string& path_a_label = "a",
                                     const std::string& path_b_label = "b",
                                     const std::string& final_label = "d",
                                     const Tolerance& tol = Tolerance::standard());

}  // namespace eraser
}  // namespace seqmeas
