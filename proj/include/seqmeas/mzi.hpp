#pragma once

#include <string>
#include <vector>

#include "seqmeas/measurement.hpp"

namespace seqmeas {
namespace mzi {

// Mach-Zehnder interferometer with a movable first beam splitter. A photon
// reflected at BS1 (path a) kicks the splitter from its oscillator ground
// state into the coherent state |alpha>; the overlap <0|alpha> controls how
// much which-path information the splitter records.
//
// Conventions (they reproduce the standard 1/2 (1 + cos phi) fringe):
// symmetric 50/50 splitters with reflection i/sqrt(2) and transmission
// 1/sqrt(2), a factor i per mirror, the phase shifter on path b, detector d1
// on output 1.
struct MziParams {
  double phi = 0.0;  // phase shifter, radians
  Cplx alpha{0.0, 0.0};
};

// Oscillator data of the movable splitter; only used to derive alpha.
struct PhysicalBs {
  double mass_kg = 0.0;
  double omega_rad_s = 0.0;
  double photon_momentum_kg_m_s = 0.0;
};

inline constexpr double kHBar = 1.054571817e-34;  // J s

// <0_BS | alpha_BS> = exp(-|alpha|^2 / 2).
Cplx coherent_overlap(Cplx alpha);

// alpha = i p / sqrt(m omega hbar).
Cplx alpha_from_physical(const PhysicalBs& p);

struct WhichPathKraus {
  KrausOperator k_a;  // splitter found displaced (path a)
  KrausOperator k_b;  // splitter found in its ground state (path b)
};

// 2x2 which-path operators in the {out1, out2} x {in1, in2} bases, obtained
// by projecting the joint photon-splitter state on the ground state (path b)
// and on its Gram-Schmidt complement within span{|0>, |alpha>} (path a).
WhichPathKraus build_movable_kraus(const MziParams& params,
                                   const Tolerance& tol = Tolerance::standard());

// Fixed splitter: P(d1 & (a or b) | s) = 1/2 (1 + cos phi).
double prob_fixed_bs(double phi);

// Movable splitter, distinguishable paths:
// P((d1 & a) or (d1 & b) | s) = 1/2 (1 + e^{-|alpha|^2/2} cos phi).
double prob_distributed(const MziParams& params);

// P(d1 & a | s) = (1 - |<0|alpha>|^2) / 4  (phase independent).
double prob_path_a(const MziParams& params);

// P(d1 & b | s) = |1 + e^{i phi} <0|alpha>|^2 / 4.
double prob_path_b(const MziParams& params);

struct SweepRow {
  double phi = 0.0;
  double alpha = 0.0;  // |alpha| (real sweep parameter)
  double p_fixed = 0.0;
  double p_path_a = 0.0;
  double p_path_b = 0.0;
  double p_distributed = 0.0;
};

// One row per (phi, alpha) grid point, phi as the outer loop.
std::vector<SweepRow> sweep(const std::vector<double>& phis,
                            const std::vector<double>& alphas);

// CSV with header phi,alpha,p_fixed,p_path_a,p_path_b,p_distributed and
// 15 significant digits.
std::string sweep_csv(const std::vector<SweepRow>& rows);

// Independent cross-check: simulates the photon (x) splitter system in a
// truncated Fock space. The coherent state is produced by exponentiating the
// displacement generator (never by the closed-form amplitudes), the photon
// is propagated element by element through the interferometer, and the
// splitter is projected on the ground state / its orthogonal complement for
// the path probabilities. The cutoff keeps the discarded coherent-state
// weight below 1e-14.
struct FockOracleResult {
  double p_d1 = 0.0;  // detector-1 probability ignoring the splitter state
  double p_path_a = 0.0;
  double p_path_b = 0.0;
};

FockOracleResult fock_oracle(const MziParams& params);

}  // namespace mzi
}  // namespace seqmeas
