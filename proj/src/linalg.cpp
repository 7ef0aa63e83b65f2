#include "linalg.hpp"

#include <cmath>
#include <vector>

#include <Eigen/Eigenvalues>

#ifdef HYKO_HAVE_LAPACKE
#define LAPACK_COMPLEX_CPP
#include <lapacke.h>
#endif

#ifdef HYKO_HAVE_BLAS
extern "C" void zgemm_(const char*, const char*, const int*, const int*, const int*,
                       const void*, const void*, const int*, const void*, const int*,
                       const void*, void*, const int*);
#endif

namespace hyko {

HermitianEig hermitian_eig(Mat a) {
  if (a.rows() != a.cols()) throw NumericalError("hermitian_eig: matrix not square");
  const int n = static_cast<int>(a.rows());
  HermitianEig out;
  out.eigenvalues.resize(n);
#ifdef HYKO_HAVE_LAPACKE
  int info = LAPACKE_zheevd(LAPACK_COL_MAJOR, 'V', 'L', n,
                            reinterpret_cast<lapack_complex_double*>(a.data()), n,
                            out.eigenvalues.data());
  if (info != 0) throw NumericalError("zheevd failed with info=" + std::to_string(info));
  out.eigenvectors = std::move(a);
#else
  Eigen::SelfAdjointEigenSolver<Mat> es(a);
  if (es.info() != Eigen::Success) throw NumericalError("eigendecomposition failed");
  out.eigenvalues = es.eigenvalues();
  out.eigenvectors = es.eigenvectors();
#endif
  return out;
}

RVec hermitian_eigenvalues(Mat a) {
  if (a.rows() != a.cols()) throw NumericalError("hermitian_eigenvalues: matrix not square");
  const int n = static_cast<int>(a.rows());
  RVec w(n);
#ifdef HYKO_HAVE_LAPACKE
  int info = LAPACKE_zheevd(LAPACK_COL_MAJOR, 'N', 'L', n,
                            reinterpret_cast<lapack_complex_double*>(a.data()), n, w.data());
  if (info != 0) throw NumericalError("zheevd failed with info=" + std::to_string(info));
#else
  Eigen::SelfAdjointEigenSolver<Mat> es(a, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NumericalError("eigendecomposition failed");
  w = es.eigenvalues();
#endif
  return w;
}

Mat mat_mult(const Mat& a, const Mat& b) {
  if (a.cols() != b.rows()) throw NumericalError("mat_mult: shape mismatch");
#ifdef HYKO_HAVE_BLAS
  const int m = static_cast<int>(a.rows());
  const int n = static_cast<int>(b.cols());
  const int k = static_cast<int>(a.cols());
  Mat c(m, n);
  const Complex one(1, 0), zero(0, 0);
  zgemm_("N", "N", &m, &n, &k, &one, a.data(), &m, b.data(), &k, &zero, c.data(), &m);
  return c;
#else
  return a * b;
#endif
}

Mat mat_adjoint_mult(const Mat& a, const Mat& b) {
  if (a.rows() != b.rows()) throw NumericalError("mat_adjoint_mult: shape mismatch");
#ifdef HYKO_HAVE_BLAS
  const int m = static_cast<int>(a.cols());
  const int n = static_cast<int>(b.cols());
  const int k = static_cast<int>(a.rows());
  Mat c(m, n);
  const Complex one(1, 0), zero(0, 0);
  zgemm_("C", "N", &m, &n, &k, &one, a.data(), &k, b.data(), &k, &zero, c.data(), &m);
  return c;
#else
  return a.adjoint() * b;
#endif
}

Vec expm_multiply_hermitian(const std::function<Vec(const Vec&)>& apply_h,
                            double t, const Vec& v, double tol, int max_krylov) {
  const double vnorm = v.norm();
  if (vnorm == 0.0 || t == 0.0) return v;

  Vec w = v;
  double remaining = t;
  const double sign = t >= 0 ? 1.0 : -1.0;
  double dt = remaining;  // shrinks on rejection, grows back cautiously
  int guard = 0;

  while (sign * remaining > 0) {
    if (++guard > 100000) throw NumericalError("Lanczos propagation failed to converge");
    if (sign * dt > sign * remaining) dt = remaining;

    const double beta0 = w.norm();
    std::vector<Vec> basis;
    basis.push_back(w / beta0);
    std::vector<double> alpha, beta;
    int m = 0;
    bool happy = false;
    for (; m < max_krylov; ++m) {
      Vec u = apply_h(basis[m]);
      Complex a = basis[m].dot(u);
      alpha.push_back(a.real());
      u -= a * basis[m];
      if (m > 0) u -= beta[m - 1] * basis[m - 1];
      // full reorthogonalization; subspace is small
      for (const auto& q : basis) u -= q.dot(u) * q;
      double b = u.norm();
      if (b < 1e-14 * beta0) {
        happy = true;
        ++m;
        break;
      }
      beta.push_back(b);
      basis.push_back(u / b);
    }

    Eigen::MatrixXd tmat = Eigen::MatrixXd::Zero(m, m);
    for (int i = 0; i < m; ++i) {
      tmat(i, i) = alpha[i];
      if (i + 1 < m) tmat(i, i + 1) = tmat(i + 1, i) = beta[i];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(tmat);
    const auto& theta = es.eigenvalues();
    const auto& s = es.eigenvectors();

    auto krylov_coeffs = [&](double step) {
      Eigen::VectorXcd y(m);
      for (int i = 0; i < m; ++i) {
        Complex acc = 0;
        for (int j = 0; j < m; ++j)
          acc += s(i, j) * std::exp(Complex(0, -theta(j) * step)) * s(0, j);
        y(i) = acc;
      }
      return y;
    };

    double err = 0.0;
    Eigen::VectorXcd y;
    for (;;) {
      y = krylov_coeffs(dt);
      if (happy) break;
      // a posteriori estimate: weight of the last Krylov direction
      err = std::abs(y(m - 1)) * beta.back() * std::abs(dt);
      if (err <= tol * std::abs(dt / t) || std::abs(dt) < 1e-15 * std::abs(t)) break;
      dt *= 0.5;
    }

    Vec next = Vec::Zero(v.size());
    for (int i = 0; i < m; ++i) next += y(i) * basis[i];
    w = beta0 * next;
    remaining -= dt;
    if (!happy && err < 0.1 * tol) dt *= 1.5;
  }
  return w;
}

UnitaryPropagator::UnitaryPropagator(Mat hamiltonian)
    : eig_(std::make_shared<HermitianEig>(hermitian_eig(std::move(hamiltonian)))) {}

Vec UnitaryPropagator::apply(double t, const Vec& v) const {
  const auto& e = *eig_;
  Vec y = e.eigenvectors.adjoint() * v;
  for (Eigen::Index i = 0; i < y.size(); ++i)
    y(i) *= std::exp(Complex(0, -e.eigenvalues(i) * t));
  return e.eigenvectors * y;
}

Mat UnitaryPropagator::evolve_state(double t, const Mat& rho) const {
  auto prepared = prepare(rho);
  return prepared.at(t);
}

Mat UnitaryPropagator::evolve_observable(double t, const Mat& f) const {
  // U^dagger f U with U = V e^{-i lambda t} V^dagger
  const auto& e = *eig_;
  Mat ft = mat_adjoint_mult(e.eigenvectors, mat_mult(f, e.eigenvectors));
  const int n = dim();
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i)
      ft(i, j) *= std::exp(Complex(0, (e.eigenvalues(i) - e.eigenvalues(j)) * t));
  return mat_mult(e.eigenvectors, mat_mult(ft, e.eigenvectors.adjoint()));
}

UnitaryPropagator::PreparedState UnitaryPropagator::prepare(const Mat& rho) const {
  PreparedState p;
  p.eig_ = eig_;
  p.rho_eigbasis_ = mat_adjoint_mult(eig_->eigenvectors, mat_mult(rho, eig_->eigenvectors));
  return p;
}

Mat UnitaryPropagator::PreparedState::at(double t) const {
  const auto& e = *eig_;
  const int n = static_cast<int>(e.eigenvalues.size());
  Mat phased = rho_eigbasis_;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i)
      phased(i, j) *= std::exp(Complex(0, -(e.eigenvalues(i) - e.eigenvalues(j)) * t));
  return mat_mult(e.eigenvectors, mat_mult(phased, e.eigenvectors.adjoint()));
}

}  // namespace hyko
