#pragma once

#include "seqmeas/scenario.hpp"

namespace seqmeas {
namespace builtin {

// Two-slit setup with perfect which-path projectors: labels a, b bind the
// slit projectors, d the screen-detector effect, s is the preparation. The
// amplitudes are deliberately asymmetric so interference terms are visible.
Scenario young_slit();

// The detector model behind the which-path measurement of young_slit():
// orthonormal pointer basis {a, b}, post-interaction states equal to the
// pointers (a perfect recorder).
DetectorModel young_slit_detector();

// Movable-splitter interferometer at the given working point: labels a, b
// bind the which-path operators, d1 the output-1 detector. The coherent-sum
// policy is declared so that `d1 & (a + b)` is the single merged-detector
// measurement.
Scenario mzi_movable(double alpha, double phi);

// alpha = 0: the splitter never records the path and the atomic reading
// gives the standard interferometer fringe.
Scenario mzi_fixed(double phi);

// Frozen causal-equality violation witness: non-commuting, non-orthogonal
// qubit projectors found by grid search; with equal-weight coherent order
// combination the lambda-minimized equality gap exceeds 0.9.
struct CausalWitness {
  double theta_a;
  double theta_b;
  double theta_prep;
  double theta_final;
};

CausalWitness causal_witness_angles();
Scenario causal_witness();

// Helper for building qubit projector scenarios: |v(theta)> =
// (cos theta, sin theta).
Mat qubit_projector(double theta);

}  // namespace builtin
}  // namespace seqmeas
