#pragma once

#include <random>
#include <vector>

#include "common.hpp"
#include "grid.hpp"

namespace hyko {

// One separable term gamma * a (x) A of a hybrid operator.
struct HybridTerm {
  Complex gamma;
  Vec classical;  // a on the grid
  Mat quantum;    // A, d x d
};

// An element of the hybrid algebra: a finite sum of separable terms. Its
// realization on the product space is sum_k gamma_k diag(a_k) (x) A_k, a
// block-diagonal matrix over the classical index.
class HybridOperator {
 public:
  HybridOperator(PhaseSpaceGrid grid, int quantum_dim, std::vector<HybridTerm> terms);

  const PhaseSpaceGrid& grid() const { return grid_; }
  int quantum_dim() const { return d_; }
  int product_dim() const { return grid_.size() * d_; }
  const std::vector<HybridTerm>& terms() const { return terms_; }

  HybridOperator product(const HybridOperator& other) const;
  HybridOperator involution() const;

  Mat realize_dense() const;

 private:
  PhaseSpaceGrid grid_;
  int d_;
  std::vector<HybridTerm> terms_;
};

HybridOperator hybrid_product(const HybridOperator& f, const HybridOperator& g);
HybridOperator hybrid_involution(const HybridOperator& f);

// The parametrized hybrid state: one d x d positive block per grid point,
// with cell_weight * sum_xi Tr rho(xi) = 1.
struct HybridState {
  int quantum_dim = 0;
  std::vector<Mat> blocks;

  int product_dim(const PhaseSpaceGrid& grid) const {
    return grid.size() * quantum_dim;
  }
};

// Validates block hermiticity/positivity (1e-10) and total normalization.
void validate_hybrid_state(const HybridState& state, const PhaseSpaceGrid& grid);

// Builds a state from raw blocks, rescaling to exact unit mass.
HybridState hybrid_state_normalized(std::vector<Mat> blocks, const PhaseSpaceGrid& grid);

// F(xi) * rho_Q with F a valid density.
HybridState product_state(const ClassicalDensity& classical, const Mat& quantum,
                          const PhaseSpaceGrid& grid);

// <f> = cell_weight * sum_xi sum_k gamma_k a_k(xi) Tr(rho(xi) A_k).
Complex hybrid_expectation(const HybridState& state, const HybridOperator& f,
                           const PhaseSpaceGrid& grid);

enum class LiftKind { block_diagonal, coherent };

// A density matrix on the product space obtained by lifting a hybrid state.
struct HybridDensityMatrix {
  Mat matrix;
  LiftKind kind = LiftKind::block_diagonal;
  // Minimum eigenvalue, evaluated when the lift is constructed with
  // check_psd (always meaningful for block_diagonal: per-block positivity).
  double min_eigenvalue = 0.0;
  bool psd_checked = false;
};

// xi-diagonal lift: block(xi) = cell_weight * rho(xi). Reproduces all
// algebra expectations exactly and is PSD by construction.
HybridDensityMatrix lift_block_diagonal(const HybridState& state, const PhaseSpaceGrid& grid);

// Square-root cross-term lift
//   rho[(xi,m),(xi',m')] = cell_weight * sqrt(r(xi) r(xi')) e^{i(u(xi)+u(xi'))/2}
// where c_{mm'}(xi) = r e^{i theta} and u is theta unwrapped along the grid
// ordering (theta := 0 where r vanishes). The branch makes the xi-diagonal
// reproduce rho(xi) exactly; positive semidefiniteness is measured and
// reported, never assumed.
HybridDensityMatrix lift_coherent(const HybridState& state, const PhaseSpaceGrid& grid,
                                  bool check_psd = true);

// Tr(rho_H pi_H(f)); uses the block-diagonality of realized algebra elements.
Complex dm_expectation(const HybridDensityMatrix& rho_h, const HybridOperator& f);

// Partial trace over the classical factor: sum of xi-diagonal d x d blocks.
Mat quantum_marginal(const Mat& rho_h, const PhaseSpaceGrid& grid, int quantum_dim);
Mat quantum_marginal(const HybridState& state, const PhaseSpaceGrid& grid);

// F(xi) = Tr rho(xi); from a product-space density matrix, the xi-diagonal
// block traces divided by the cell weight.
ClassicalDensity classical_marginal(const HybridState& state, const PhaseSpaceGrid& grid);
ClassicalDensity classical_marginal(const Mat& rho_h, const PhaseSpaceGrid& grid,
                                    int quantum_dim);

// Both sides of Tr_C(rho_H^k) = integral rho(xi)^k dOmega under the
// block-diagonal lift and the Kronecker-delta/cell-weight convention:
// the left side is a dense matrix power of the lift divided by
// cell_weight^(k-1), the right side cell_weight * sum_xi rho(xi)^k.
// Throws NumericalError if they disagree beyond 1e-10; returns the right side.
Mat partial_trace_power(const HybridState& state, const PhaseSpaceGrid& grid, int k);

// S_H = -cell_weight * sum_xi Tr(rho(xi) log rho(xi)).
double hybrid_entropy(const HybridState& state, const PhaseSpaceGrid& grid);

struct EntropyEquivalenceReport {
  double hybrid_entropy = 0.0;        // S_H
  double vn_entropy_block = 0.0;      // S_vN of the block-diagonal lift
  double offset_residual = 0.0;       // S_vN_block - (S_H - log cell_weight)
  bool coherent_psd = false;
  double coherent_min_eigenvalue = 0.0;
  double vn_entropy_coherent = 0.0;   // only meaningful when coherent_psd
};

// Verifies the discrete entropy lemma S_vN(block lift) = S_H - log(cell
// weight) to 1e-8 (throws NumericalError beyond that) and reports the
// coherent-lift entropy alongside, skipped if that lift fails the PSD check.
EntropyEquivalenceReport entropy_equivalence_report(const HybridState& state,
                                                    const PhaseSpaceGrid& grid);

// rho(xi) = exp(-beta Hxi) / Z with Hxi = H_C(xi) I + H_Q + sum_j c_j
// h_j(xi) B_j and Z = cell_weight * sum_xi Tr exp(-beta Hxi). Exponentials
// are computed with a per-xi spectral shift against overflow.
struct CouplingTerm {
  RVec classical;  // h_j on the grid
  Mat quantum;     // B_j (Hermitian)
  double strength = 1.0;
};
HybridState maxent_canonical_state(const RVec& classical_energy, const Mat& quantum_energy,
                                   const std::vector<CouplingTerm>& coupling, double beta,
                                   const PhaseSpaceGrid& grid);

// Smooth box-periodic trig polynomial; sampling the same object on finer
// grids gives the fixed continuum function refinement studies need.
class SmoothClassicalFunction {
 public:
  static SmoothClassicalFunction random(int max_mode, int n_modes, std::mt19937_64& rng);
  Complex value(double u, double v) const;  // u, v box coordinates in [0,1)
  Vec sample(const PhaseSpaceGrid& grid) const;
  RVec sample_real(const PhaseSpaceGrid& grid) const;

 private:
  struct Mode {
    int mq, mp;
    Complex coeff;
  };
  std::vector<Mode> modes_;
};

HybridState random_hybrid_state(const PhaseSpaceGrid& grid, int quantum_dim,
                                std::mt19937_64& rng);
HybridState random_product_state(const PhaseSpaceGrid& grid, int quantum_dim,
                                 std::mt19937_64& rng);
HybridOperator random_hybrid_operator(const PhaseSpaceGrid& grid, int quantum_dim,
                                      int max_terms, std::mt19937_64& rng);

}  // namespace hyko
