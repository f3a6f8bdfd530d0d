#include "seqmeas/mzi.hpp"

#include <cmath>
#include <sstream>

namespace seqmeas {
namespace mzi {

namespace {

constexpr Cplx kI{0.0, 1.0};

// Joint photon amplitudes after the full interferometer, split by which
// splitter state they accompany. Reflection at BS1 displaces the splitter,
// so the |alpha>-component collects the path-a amplitudes and the
// |0>-component the path-b ones:
//   path a: -1/2 |1out>  - i/2 |2out>
//   path b: -e^{i phi}/2 |1out> + i e^{i phi}/2 |2out>
struct JointAmplitudes {
  Cplx a_out1, a_out2;  // coefficient of |out> (x) |alpha_BS>
  Cplx b_out1, b_out2;  // coefficient of |out> (x) |0_BS>
};

JointAmplitudes joint_amplitudes(double phi) {
  const Cplx ephi = std::exp(kI * phi);
  JointAmplitudes j;
  j.a_out1 = Cplx{-0.5, 0.0};
  j.a_out2 = -0.5 * kI;
  j.b_out1 = -0.5 * ephi;
  j.b_out2 = 0.5 * kI * ephi;
  return j;
}

}  // namespace

Cplx coherent_overlap(Cplx alpha) {
  return Cplx{std::exp(-0.5 * std::norm(alpha)), 0.0};
}

Cplx alpha_from_physical(const PhysicalBs& p) {
  if (!(p.mass_kg > 0.0) || !(p.omega_rad_s > 0.0)) {
    throw DomainError("alpha_from_physical: mass and omega must be positive");
  }
  return kI * p.photon_momentum_kg_m_s /
         std::sqrt(p.mass_kg * p.omega_rad_s * kHBar);
}

WhichPathKraus build_movable_kraus(const MziParams& params,
                                   const Tolerance& tol) {
  const double g = coherent_overlap(params.alpha).real();
  const double h = std::sqrt(std::max(0.0, 1.0 - g * g));  // <alpha'|alpha>
  const JointAmplitudes j = joint_amplitudes(params.phi);

  // Path a: project the splitter on the Gram-Schmidt state |alpha'>, which
  // has overlap h with |alpha> and none with |0>.
  Mat ka = Mat::Zero(2, 2);
  ka(0, 0) = h * j.a_out1;
  ka(1, 0) = h * j.a_out2;

  // Path b: project on |0>; both splitter components contribute.
  Mat kb = Mat::Zero(2, 2);
  kb(0, 0) = g * j.a_out1 + j.b_out1;
  kb(1, 0) = g * j.a_out2 + j.b_out2;

  return WhichPathKraus{KrausOperator(std::move(ka), "a", tol),
                        KrausOperator(std::move(kb), "b", tol)};
}

double prob_fixed_bs(double phi) { return 0.5 * (1.0 + std::cos(phi)); }

double prob_distributed(const MziParams& params) {
  const double g = coherent_overlap(params.alpha).real();
  return 0.5 * (1.0 + g * std::cos(params.phi));
}

double prob_path_a(const MziParams& params) {
  const double g = coherent_overlap(params.alpha).real();
  return 0.25 * (1.0 - g * g);
}

double prob_path_b(const MziParams& params) {
  const double g = coherent_overlap(params.alpha).real();
  return 0.25 * std::norm(1.0 + std::exp(kI * params.phi) * g);
}

std::vector<SweepRow> sweep(const std::vector<double>& phis,
                            const std::vector<double>& alphas) {
  if (phis.empty() || alphas.empty()) {
    throw DomainError("sweep: empty parameter grid");
  }
  std::vector<SweepRow> rows;
  rows.reserve(phis.size() * alphas.size());
  for (double phi : phis) {
    for (double alpha : alphas) {
      if (!std::isfinite(phi) || !std::isfinite(alpha)) {
        throw DomainError("sweep: non-finite grid point");
      }
      const MziParams p{phi, Cplx{alpha, 0.0}};
      SweepRow row;
      row.phi = phi;
      row.alpha = alpha;
      row.p_fixed = prob_fixed_bs(phi);
      row.p_path_a = prob_path_a(p);
      row.p_path_b = prob_path_b(p);
      row.p_distributed = prob_distributed(p);
      rows.push_back(row);
    }
  }
  return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream out;
  out.precision(15);
  out << "phi,alpha,p_fixed,p_path_a,p_path_b,p_distributed\n";
  for (const SweepRow& r : rows) {
    out << r.phi << ',' << r.alpha << ',' << r.p_fixed << ',' << r.p_path_a
        << ',' << r.p_path_b << ',' << r.p_distributed << '\n';
  }
  return out.str();
}

FockOracleResult fock_oracle(const MziParams& params) {
  const double amag = std::abs(params.alpha);
  const Eigen::Index cutoff =
      static_cast<Eigen::Index>(amag * amag + 10.0 * amag + 20.0) + 1;

  // Displacement operator from its generator: D = exp(alpha A+ - alpha* A).
  Mat lowering = Mat::Zero(cutoff, cutoff);
  for (Eigen::Index n = 1; n < cutoff; ++n) {
    lowering(n - 1, n) = std::sqrt(static_cast<double>(n));
  }
  const Mat generator =
      params.alpha * lowering.adjoint() - std::conj(params.alpha) * lowering;
  // generator is anti-Hermitian; exponentiate through the Hermitian -i*gen.
  Eigen::SelfAdjointEigenSolver<Mat> eig(-kI * generator);
  Vec phases(cutoff);
  for (Eigen::Index n = 0; n < cutoff; ++n) {
    phases(n) = std::exp(kI * eig.eigenvalues()(n));
  }
  Vec ground = Vec::Zero(cutoff);
  ground(0) = 1.0;
  const Vec coherent = eig.eigenvectors() *
                       phases.asDiagonal() *
                       (eig.eigenvectors().adjoint() * ground);

  // Photon amplitudes per arm, stepped through the optical elements.
  const Cplx r{0.0, 1.0 / std::sqrt(2.0)};
  const Cplx t{1.0 / std::sqrt(2.0), 0.0};
  const Cplx mirror = kI;
  const Cplx arm_a_in = r * mirror;                                 // kicked
  const Cplx arm_b_in = t * mirror * std::exp(kI * params.phi);     // ground
  // BS2: out1 = t * arm_a + r * arm_b (the d2 output is not needed here).
  const Cplx out1_a = t * arm_a_in;
  const Cplx out1_b = r * arm_b_in;

  // Joint |1out> component of photon (x) splitter, path-a part displaced.
  const Vec psi_out1 = out1_a * coherent + out1_b * ground;

  FockOracleResult res;
  res.p_d1 = psi_out1.squaredNorm();
  res.p_path_b = std::norm(ground.dot(psi_out1));
  if (1.0 - std::norm(ground.dot(coherent)) < 1e-28) {
    // Undisplaced splitter: the path-a pointer does not exist and the
    // displaced-splitter probability vanishes.
    res.p_path_a = 0.0;
  } else {
    const Vec pointer_a = linalg::gram_schmidt_orthogonalize(coherent, ground);
    res.p_path_a = std::norm(pointer_a.dot(psi_out1));
  }
  return res;
}

}  // namespace mzi
}  // namespace seqmeas
