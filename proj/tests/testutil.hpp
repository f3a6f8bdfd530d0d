#pragma once

#include <map>
#include <random>
#include <string>
#include <vector>

#include "seqmeas/measurement.hpp"
#include "seqmeas/scenario.hpp"

namespace seqmeas::testutil {

using Rng = std::mt19937_64;

inline Cplx random_cplx(Rng& rng) {
  std::normal_distribution<double> n;
  return {n(rng), n(rng)};
}

inline Mat random_matrix(Rng& rng, Eigen::Index rows, Eigen::Index cols) {
  Mat m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = random_cplx(rng);
  }
  return m;
}

inline Vec random_unit(Rng& rng, Eigen::Index dim) {
  Vec v(dim);
  for (Eigen::Index i = 0; i < dim; ++i) v(i) = random_cplx(rng);
  return v / v.norm();
}

inline Mat random_unitary(Rng& rng, Eigen::Index dim) {
  const Mat m = random_matrix(rng, dim, dim);
  const Eigen::HouseholderQR<Mat> qr(m);
  Mat q = qr.householderQ();
  // Fix the phase convention so Q is uniquely determined by R's diagonal.
  const Mat r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index i = 0; i < dim; ++i) {
    const Cplx d = r(i, i);
    if (std::abs(d) > 1e-12) q.col(i) *= d / std::abs(d);
  }
  return q;
}

inline DensityMatrix random_density(Rng& rng, Eigen::Index dim,
                                    bool pure = false) {
  if (pure) return DensityMatrix::pure(Ket(random_unit(rng, dim)));
  const Mat a = random_matrix(rng, dim, dim);
  Mat rho = a * a.adjoint();
  rho /= rho.trace().real();
  return DensityMatrix(rho);
}

// PSD with eigenvalues in [0, 1], generically strictly inside.
inline Effect random_effect(Rng& rng, Eigen::Index dim) {
  const Mat a = random_matrix(rng, dim, dim);
  Mat e = a * a.adjoint();
  const double top = linalg::hermitian_eigenvalues(e).maxCoeff();
  std::uniform_real_distribution<double> u(0.1, 1.0);
  e *= u(rng) / top;
  return Effect(e);
}

// Contraction-valued operator (K^dag K <= I).
inline Mat random_kraus_mat(Rng& rng, Eigen::Index dim) {
  Mat k = random_matrix(rng, dim, dim);
  const double top = linalg::hermitian_eigenvalues(k.adjoint() * k).maxCoeff();
  std::uniform_real_distribution<double> u(0.2, 1.0);
  return k * std::sqrt(u(rng) / top);
}

// Two-outcome detector with an orthonormal pointer basis. When `projective`,
// the post-interaction states coincide with the pointers, giving perfect
// which-path operators in the pointer-aligned system basis.
inline DetectorModel random_two_outcome_detector(Rng& rng, Eigen::Index system_dim,
                                                 const std::string& outcome_a,
                                                 const std::string& outcome_b,
                                                 bool projective) {
  DetectorModel model;
  model.system_dim = system_dim;
  const Mat u = random_unitary(rng, 2);
  model.pointer_states.emplace(outcome_a, Ket(u.col(0)));
  model.pointer_states.emplace(outcome_b, Ket(u.col(1)));
  for (Eigen::Index i = 0; i < system_dim; ++i) {
    if (projective) {
      model.post_interaction_states.push_back(Ket(u.col(i % 2)));
    } else {
      model.post_interaction_states.push_back(Ket(random_unit(rng, 2)));
    }
  }
  return model;
}

}  // namespace seqmeas::testutil
