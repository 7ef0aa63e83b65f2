#include "quantum.hpp"

#include <cmath>

#include <Eigen/QR>

namespace hyko {

double hermiticity_error(const Mat& m) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

DensityMatrixCheck check_density_matrix(const Mat& m, double herm_tol, double eig_tol,
                                        double trace_tol) {
  DensityMatrixCheck rep;
  if (m.rows() != m.cols()) {
    rep.violation = "not square";
    return rep;
  }
  if (!m.allFinite()) {
    rep.violation = "non-finite entries";
    return rep;
  }
  rep.hermiticity_error = hermiticity_error(m);
  rep.trace_error = std::abs(m.trace() - Complex(1, 0));
  Mat sym = 0.5 * (m + m.adjoint());
  rep.min_eigenvalue = hermitian_eigenvalues(std::move(sym)).minCoeff();
  if (rep.hermiticity_error > herm_tol)
    rep.violation = "hermiticity violated by " + std::to_string(rep.hermiticity_error);
  else if (rep.min_eigenvalue < -eig_tol)
    rep.violation = "positivity violated, min eigenvalue " + std::to_string(rep.min_eigenvalue);
  else if (rep.trace_error > trace_tol)
    rep.violation = "trace violated by " + std::to_string(rep.trace_error);
  else
    rep.ok = true;
  return rep;
}

Mat validate_density_matrix(const Mat& m, double herm_tol, double eig_tol, double trace_tol) {
  auto rep = check_density_matrix(m, herm_tol, eig_tol, trace_tol);
  if (!rep.ok) throw ValidationError("invalid density matrix: " + rep.violation);
  return m;
}

double entropy_from_eigenvalues(const RVec& eigenvalues, double* clipped) {
  double s = 0.0, clip = 0.0;
  for (Eigen::Index i = 0; i < eigenvalues.size(); ++i) {
    double lambda = eigenvalues(i);
    if (lambda <= 1e-14) {
      clip += std::abs(std::min(lambda, 0.0));
      continue;
    }
    s -= lambda * std::log(lambda);
  }
  if (clipped) *clipped = clip;
  return s;
}

double von_neumann_entropy(const Mat& rho, double* clipped) {
  if (hermiticity_error(rho) > 1e-8)
    throw ValidationError("von_neumann_entropy: matrix is not Hermitian");
  return entropy_from_eigenvalues(hermitian_eigenvalues(rho), clipped);
}

double purity(const Mat& rho) { return (rho * rho).trace().real(); }

Mat commutator(const Mat& a, const Mat& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols() || a.rows() != a.cols())
    throw ValidationError("commutator: shape mismatch");
  return a * b - b * a;
}

Mat anticommutator(const Mat& a, const Mat& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols() || a.rows() != a.cols())
    throw ValidationError("anticommutator: shape mismatch");
  return a * b + b * a;
}

Mat pauli_x() {
  Mat s(2, 2);
  s << 0, 1, 1, 0;
  return s;
}
Mat pauli_y() {
  Mat s(2, 2);
  s << Complex(0, 0), Complex(0, -1), Complex(0, 1), Complex(0, 0);
  return s;
}
Mat pauli_z() {
  Mat s(2, 2);
  s << 1, 0, 0, -1;
  return s;
}

Mat random_matrix(int d, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Mat m(d, d);
  for (int j = 0; j < d; ++j)
    for (int i = 0; i < d; ++i) m(i, j) = Complex(g(rng), g(rng));
  return m;
}

Mat random_hermitian(int d, std::mt19937_64& rng) {
  Mat m = random_matrix(d, rng);
  return 0.5 * (m + m.adjoint());
}

Mat random_unitary(int d, std::mt19937_64& rng) {
  Mat m = random_matrix(d, rng);
  Eigen::HouseholderQR<Mat> qr(m);
  Mat q = qr.householderQ();
  Mat r = qr.matrixQR().triangularView<Eigen::Upper>();
  // fix the phase convention so the distribution is Haar
  for (int i = 0; i < d; ++i) {
    Complex rii = r(i, i);
    q.col(i) *= rii / std::abs(rii);
  }
  return q;
}

Mat random_density_matrix(int d, std::mt19937_64& rng) {
  Mat g = random_matrix(d, rng);
  Mat rho = g * g.adjoint();
  rho /= rho.trace().real();
  return rho;
}

}  // namespace hyko
