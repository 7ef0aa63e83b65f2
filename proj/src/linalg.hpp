#pragma once

#include <functional>
#include <memory>

#include "common.hpp"

namespace hyko {

// Eigendecomposition of a Hermitian matrix, eigenvalues ascending,
// eigenvectors as columns.
struct HermitianEig {
  RVec eigenvalues;
  Mat eigenvectors;
};

HermitianEig hermitian_eig(Mat a);

// Eigenvalues only (ascending).
RVec hermitian_eigenvalues(Mat a);

// C = A * B routed through BLAS zgemm when available.
Mat mat_mult(const Mat& a, const Mat& b);

// adjA_B = A^dagger * B without forming the adjoint.
Mat mat_adjoint_mult(const Mat& a, const Mat& b);

// Action of exp(-i t H) on v for Hermitian H given as a matrix-free apply.
// Adaptive Lanczos with full reorthogonalization; 2-norm of v is preserved
// to the orthogonalization level.
Vec expm_multiply_hermitian(const std::function<Vec(const Vec&)>& apply_h,
                            double t, const Vec& v, double tol = 1e-12,
                            int max_krylov = 60);

// Unitary propagator exp(-i t H) for a dense Hermitian H; the
// eigendecomposition is computed once and shared (read-only afterwards).
class UnitaryPropagator {
 public:
  explicit UnitaryPropagator(Mat hamiltonian);

  int dim() const { return static_cast<int>(eig_->eigenvalues.size()); }
  const HermitianEig& eigensystem() const { return *eig_; }

  Vec apply(double t, const Vec& v) const;

  // rho(t) = U rho U^dagger, f(t) = U^dagger f U.
  Mat evolve_state(double t, const Mat& rho) const;
  Mat evolve_observable(double t, const Mat& f) const;

  // For repeated sampling of the same initial state: transform once into the
  // eigenbasis, then each sample costs two gemms.
  class PreparedState {
   public:
    Mat at(double t) const;

   private:
    friend class UnitaryPropagator;
    std::shared_ptr<const HermitianEig> eig_;
    Mat rho_eigbasis_;
  };
  PreparedState prepare(const Mat& rho) const;

 private:
  std::shared_ptr<const HermitianEig> eig_;
};

}  // namespace hyko
