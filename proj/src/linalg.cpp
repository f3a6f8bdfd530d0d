#include "seqmeas/linalg.hpp"

#include <cmath>
#include <string>

namespace seqmeas {

const Tolerance& Tolerance::standard() {
  static const Tolerance tol{};
  return tol;
}

namespace linalg {

namespace {

void require_square(const Mat& m, const char* op) {
  if (m.rows() != m.cols()) {
    throw DimensionError(std::string(op) + ": matrix is " +
                         std::to_string(m.rows()) + "x" +
                         std::to_string(m.cols()) + ", expected square");
  }
}

Mat symmetrized(const Mat& m) { return 0.5 * (m + m.adjoint()); }

}  // namespace

Mat adjoint(const Mat& m) { return m.adjoint(); }

Cplx trace(const Mat& m) {
  require_square(m, "trace");
  return m.trace();
}

Mat matmul(const Mat& a, const Mat& b) {
  if (a.cols() != b.rows()) {
    throw DimensionError("matmul: inner dimensions " + std::to_string(a.cols()) +
                         " vs " + std::to_string(b.rows()) + " do not match");
  }
  return a * b;
}

double hermiticity_deviation(const Mat& m) {
  if (m.rows() != m.cols()) return std::numeric_limits<double>::infinity();
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

Eigen::VectorXd hermitian_eigenvalues(const Mat& m) {
  require_square(m, "hermitian_eigenvalues");
  Eigen::SelfAdjointEigenSolver<Mat> solver(symmetrized(m),
                                            Eigen::EigenvaluesOnly);
  return solver.eigenvalues();
}

bool is_psd(const Mat& m, const Tolerance& tol) {
  require_square(m, "is_psd");
  if (hermiticity_deviation(m) > tol.eps_herm) return false;
  if (m.rows() == 0) return true;
  return hermitian_eigenvalues(m).minCoeff() >= -tol.eps_psd;
}

Mat sqrt_psd(const Mat& m, const Tolerance& tol) {
  require_square(m, "sqrt_psd");
  if (!is_psd(m, tol)) {
    throw DomainError("sqrt_psd: input is not positive semidefinite");
  }
  Eigen::SelfAdjointEigenSolver<Mat> solver(symmetrized(m));
  Eigen::VectorXd evals = solver.eigenvalues().cwiseMax(0.0);
  return solver.eigenvectors() *
         evals.cwiseSqrt().cast<Cplx>().asDiagonal() *
         solver.eigenvectors().adjoint();
}

Vec gram_schmidt_orthogonalize(const Vec& v, const Vec& against,
                               const Tolerance& tol) {
  if (v.size() != against.size()) {
    throw DimensionError("gram_schmidt: vectors have different dimensions");
  }
  const Cplx overlap = against.dot(v);  // <against|v>
  const double denom =
      std::sqrt(std::max(0.0, 1.0 - std::norm(overlap) / v.squaredNorm()));
  if (denom < tol.eps_psd) {
    throw DegeneracyError(
        "gram_schmidt: vector is parallel to the reference state");
  }
  Vec out = v - overlap * against;
  return out / out.norm();
}

bool approx_equal(const Mat& a, const Mat& b, double eps) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  if (a.size() == 0) return true;
  return (a - b).cwiseAbs().maxCoeff() <= eps;
}

Mat identity(Eigen::Index n) { return Mat::Identity(n, n); }

}  // namespace linalg
}  // namespace seqmeas
