#pragma once

#include <memory>
#include <mutex>

#include "common.hpp"
#include "grid.hpp"
#include "linalg.hpp"
#include "stencil.hpp"

namespace hyko {

// pi_C(a): a classical observable as the pointwise-product (diagonal) operator.
struct MultiplicativeOperator {
  Vec diag;

  Vec apply(const Vec& psi) const { return diag.cwiseProduct(psi); }
  Mat dense() const { return Mat(diag.asDiagonal()); }
};

MultiplicativeOperator represent_multiplicative(const Vec& a, const PhaseSpaceGrid& grid);
MultiplicativeOperator represent_multiplicative(const RVec& a, const PhaseSpaceGrid& grid);

enum class Axis { q, p };

// Pi = -i d/daxis, Hermitian because the difference matrix is antisymmetric.
class MomentumOperator {
 public:
  MomentumOperator(const PhaseSpaceGrid& grid, Axis axis, int order = 2);

  Axis axis() const { return axis_; }
  int order() const { return order_; }
  const SpRMat& difference_matrix() const { return d_; }

  Vec apply(const Vec& psi) const;
  Mat dense() const;

 private:
  Axis axis_;
  int order_;
  SpRMat d_;
};

MomentumOperator momentum_operator(const PhaseSpaceGrid& grid, Axis axis, int order = 2);

// The Koopman generator L = -i X_H assembled in symmetrized form
//   K = (alpha D_q + D_q alpha)/2 + (beta D_p + D_p beta)/2,   L = -i K,
// with K exactly antisymmetric, so L is exactly Hermitian and exp(-iLt) is
// exactly unitary. Real arithmetic is kept internally (exp(-iLt) = exp(-Kt)
// is real orthogonal).
class KoopmanLiouvillian {
 public:
  KoopmanLiouvillian(const HamiltonianField& field, const PhaseSpaceGrid& grid,
                     DiffScheme scheme = DiffScheme::stencil2);

  const PhaseSpaceGrid& grid() const { return grid_; }
  DiffScheme scheme() const { return scheme_; }
  int size() const { return grid_.size(); }
  bool dense_generator() const { return is_dense_; }

  // y = K x (the real generator) and y = L x = -i K x.
  RVec apply_generator(const RVec& x) const;
  Vec apply_generator(const Vec& x) const;
  Vec apply(const Vec& x) const;

  Mat dense_matrix() const;  // L as a dense complex matrix

  // Shared eigendecomposition of L (built on first use, read-only after).
  const HermitianEig& eigensystem() const;

 private:
  PhaseSpaceGrid grid_;
  DiffScheme scheme_;
  bool is_dense_;
  SpRMat k_sparse_;
  RMat k_dense_;

  struct Cache {
    std::mutex mutex;
    std::shared_ptr<const HermitianEig> eig;
  };
  std::shared_ptr<Cache> cache_ = std::make_shared<Cache>();
};

KoopmanLiouvillian build_liouvillian(const HamiltonianField& field,
                                     const PhaseSpaceGrid& grid,
                                     DiffScheme scheme = DiffScheme::stencil2);

struct PropagateOptions {
  // Dense eigendecomposition up to this many grid points, Lanczos beyond.
  int dense_threshold = 2048;
  double lanczos_tol = 1e-12;
};

// psi(t) = exp(-i L t) psi.
Vec koopman_propagate(const Vec& psi, const KoopmanLiouvillian& liouvillian, double t,
                      const PropagateOptions& options = {});

// Prop. 1 density matrix on grid space: entries cell_weight * sqrt(F_i F_j);
// a rank-1 projector with unit trace.
Mat classical_gns_dm(const ClassicalDensity& density, const PhaseSpaceGrid& grid);

struct MultiplicativeReport {
  bool is_multiplicative;
  double off_diagonal_mass;  // off-diagonal Frobenius mass / total mass
};

MultiplicativeReport check_multiplicative(const Mat& op, double tol);

// Weak-sense multiplicativity: how well an operator's action on a probe set
// is explained by some pointwise multiplier. Finite-difference commutators
// approximate multiplication operators only in this weak sense, with an
// O(delta^2) residual on band-limited probes.
struct WeakMultiplicativeReport {
  double residual;  // ||C Psi - diag(g) Psi||_F / ||Psi||_F over the probe set
  Vec multiplier;   // the fitted g
};

WeakMultiplicativeReport weak_multiplicative_fit(
    const std::function<Vec(const Vec&)>& op, const Mat& probes);

// Residual against a prescribed multiplier instead of the best fit.
double weak_multiplicative_residual_vs(const std::function<Vec(const Vec&)>& op,
                                       const Mat& probes, const Vec& multiplier);

// Fixed continuum probe functions sampled on the grid: Gaussian envelopes
// (supported away from the box boundary) modulated by low box-commensurate
// wavenumbers, plus a pure envelope. Columns are normalized.
Mat bandlimited_probes(const PhaseSpaceGrid& grid);

}  // namespace hyko
