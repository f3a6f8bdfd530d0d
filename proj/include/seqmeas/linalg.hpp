#pragma once

#include <Eigen/Dense>
#include <complex>

#include "seqmeas/errors.hpp"

namespace seqmeas {

using Cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

// Numerical tolerances used throughout. All scenarios here are tiny
// (dim <= ~16) so double precision holds 1e-12 comfortably; the defaults
// leave headroom for eigensolver noise.
struct Tolerance {
  double eps_herm = 1e-10;  // Hermiticity deviation bound
  double eps_psd = 1e-10;   // eigenvalue floor
  double eps_prob = 1e-10;  // probability / trace comparisons

  static const Tolerance& standard();
};

namespace linalg {

Mat adjoint(const Mat& m);

// Sum of diagonal entries. Throws DimensionError on non-square input.
Cplx trace(const Mat& m);

// Standard matrix product with an explicit shape check.
Mat matmul(const Mat& a, const Mat& b);

// Max |m[i,j] - conj(m[j,i])| over all entries; 0 for exactly Hermitian m.
double hermiticity_deviation(const Mat& m);

// Eigenvalues of (m + m^dag)/2 in ascending order. Throws DimensionError on
// non-square input.
Eigen::VectorXd hermitian_eigenvalues(const Mat& m);

// True iff m is Hermitian within eps_herm and all eigenvalues >= -eps_psd.
bool is_psd(const Mat& m, const Tolerance& tol = Tolerance::standard());

// Hermitian square root R of a PSD matrix, R*R = m. Symmetrizes before
// decomposition and clamps eigenvalues in [-eps_psd, 0) to zero.
// Throws DomainError if m fails is_psd.
Mat sqrt_psd(const Mat& m, const Tolerance& tol = Tolerance::standard());

// Unit vector orthogonal to `against`, built as
//   (v - <against|v> against) / sqrt(1 - |<against|v>|^2).
// `against` must be normalized. Throws DegeneracyError when v is parallel
// to `against` (denominator below eps_psd).
Vec gram_schmidt_orthogonalize(const Vec& v, const Vec& against,
                               const Tolerance& tol = Tolerance::standard());

bool approx_equal(const Mat& a, const Mat& b, double eps);

Mat identity(Eigen::Index n);

}  // namespace linalg
}  // namespace seqmeas
