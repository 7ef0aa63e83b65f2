#pragma once

#include <functional>
#include <memory>
#include <mutex>
#include <optional>

#include "common.hpp"
#include "grid.hpp"
#include "hybrid.hpp"
#include "koopman.hpp"
#include "presets.hpp"

namespace hyko {

// A linear operator on classical grid space: either exactly diagonal (an
// algebra element) or a general sparse/dense matrix (momentum-type).
class ClassicalLinOp {
 public:
  enum class Kind { diagonal, sparse, dense };

  static ClassicalLinOp diagonal(Vec d);
  static ClassicalLinOp sparse(SpCMat m);
  static ClassicalLinOp dense(Mat m);

  Kind kind() const { return kind_; }
  bool is_diagonal() const { return kind_ == Kind::diagonal; }
  const Vec& diag() const { return diag_; }

  Vec apply(const Vec& x) const;
  Mat dense_matrix() const;
  ClassicalLinOp scaled(Complex s) const;
  ClassicalLinOp diag_left(const Vec& d, Complex scale) const;   // scale*diag(d)*this
  ClassicalLinOp diag_right(const Vec& d, Complex scale) const;  // scale*this*diag(d)

 private:
  Kind kind_ = Kind::diagonal;
  Vec diag_;
  SpCMat sparse_;
  Mat dense_;
};

// A sum of (classical operator) (x) (quantum matrix) terms on the product
// space; general enough to hold admissible Hamiltonians, forbidden
// momentum-coupled probes, and their commutators with algebra elements.
struct ProductTerm {
  ClassicalLinOp classical;
  Mat quantum;
};

struct ProductOperator {
  PhaseSpaceGrid grid;
  int quantum_dim;
  std::vector<ProductTerm> terms;

  Mat realize_dense() const;
};

// The Theorem's admissible form: L_C (x) I + I (x) H_Q + sum_j c_j
// diag(h_j) (x) B_j (+ diag(H~_C) (x) I). L_C is the Koopman Liouvillian of
// the classical energy, so the operator is Hermitian by construction.
class HybridHamiltonian {
 public:
  HybridHamiltonian(HamiltonianField field, Mat quantum_term,
                    std::vector<CouplingTerm> coupling, const PhaseSpaceGrid& grid,
                    DiffScheme scheme = DiffScheme::stencil2,
                    std::optional<RVec> classical_multiplicative = std::nullopt,
                    std::optional<ClassicalPreset> preset = std::nullopt);

  const PhaseSpaceGrid& grid() const { return liouvillian_.grid(); }
  int quantum_dim() const { return d_; }
  int product_dim() const { return grid().size() * d_; }
  const KoopmanLiouvillian& liouvillian() const { return liouvillian_; }
  const RVec& classical_energy() const { return classical_energy_; }
  const Mat& quantum_term() const { return quantum_term_; }
  const std::vector<CouplingTerm>& coupling() const { return coupling_; }
  const std::optional<RVec>& classical_multiplicative() const {
    return classical_multiplicative_;
  }
  std::optional<ClassicalPreset> preset() const { return preset_; }

  Mat realize_dense() const;
  ProductOperator product_operator() const;

  // Shared eigenbasis propagator over the dense realization (built once).
  const UnitaryPropagator& propagator() const;

 private:
  KoopmanLiouvillian liouvillian_;
  RVec classical_energy_;
  int d_;
  Mat quantum_term_;
  std::vector<CouplingTerm> coupling_;
  std::optional<RVec> classical_multiplicative_;
  std::optional<ClassicalPreset> preset_;

  struct Cache {
    std::mutex mutex;
    std::shared_ptr<const UnitaryPropagator> prop;
  };
  std::shared_ptr<Cache> cache_ = std::make_shared<Cache>();
};

HybridHamiltonian build_hybrid_hamiltonian(
    const RVec& classical_energy, const Mat& quantum_term,
    const std::vector<CouplingTerm>& coupling, const PhaseSpaceGrid& grid,
    DiffScheme scheme = DiffScheme::stencil2,
    std::optional<RVec> classical_multiplicative = std::nullopt);

HybridHamiltonian build_hybrid_hamiltonian(
    ClassicalPreset preset, const Mat& quantum_term,
    const std::vector<CouplingTerm>& coupling, const PhaseSpaceGrid& grid,
    DiffScheme scheme = DiffScheme::stencil2,
    std::optional<RVec> classical_multiplicative = std::nullopt);

// Adds a momentum-coupled term Pi_axis (x) B, which the Theorem excludes;
// used to exercise the dichotomy.
ProductOperator with_momentum_coupling(const ProductOperator& h, Axis axis, const Mat& b,
                                       double strength, int order = 2);

enum class EvolveMethod { spectral, rk4 };

// rho(t) = U rho U^dagger (spectral) or RK4 on the von Neumann commutator
// form, kept as an independent cross-check of the assembly.
Mat evolve_state(const Mat& rho_h, const HybridHamiltonian& h, double t,
                 EvolveMethod method = EvolveMethod::spectral, double rk4_dt = 1e-3);
HybridDensityMatrix evolve_state(const HybridDensityMatrix& rho_h, const HybridHamiltonian& h,
                                 double t, EvolveMethod method = EvolveMethod::spectral,
                                 double rk4_dt = 1e-3);

// f(t) = U^dagger f U.
Mat evolve_observable(const Mat& f, const HybridHamiltonian& h, double t,
                      EvolveMethod method = EvolveMethod::spectral, double rk4_dt = 1e-3);

// Weak-sense algebra preservation of [pi_H(f), H] for sampled algebra
// elements f: each quantum block of the commutator is tested for
// multiplicativity on band-limited probes. Admissible Hamiltonians leave an
// O(delta^2) stencil residual; momentum-coupled terms leave an O(1) one.
struct AlgebraPreservationReport {
  double max_residual = 0.0;
  std::vector<double> per_sample;
  double tol = 0.0;
  bool pass = false;
};

AlgebraPreservationReport check_algebra_preservation(
    const ProductOperator& h, const std::vector<HybridOperator>& samples, double tol,
    const Mat& probes);

// Evolves the block-diagonal lift of state0 under h and compares the
// classical marginal at each time with exact-characteristics transport of
// the initial marginal under h's classical preset alone.
struct BackReactionReport {
  std::vector<double> times;
  std::vector<RVec> marginals;                  // classical marginal per time
  std::vector<double> oracle_deviation;         // L-inf vs transport oracle
  std::vector<double> quantum_purity;           // purity of the quantum marginal
};

BackReactionReport back_reaction_probe(const HybridState& state0, const HybridHamiltonian& h,
                                       const std::vector<double>& times);

// A general linear master-equation generator, given by its action on
// observables and the dual action on states.
struct LinearGenerator {
  int dim = 0;
  std::function<Mat(const Mat&)> observable_action;  // L(f)
  std::function<Mat(const Mat&)> state_action;       // L^dagger(rho)

  static LinearGenerator from_hamiltonian(Mat h);
  // -i[H, rho] - gamma {N, rho} on states (a trace-violating probe for
  // gamma > 0 unless N vanishes).
  static LinearGenerator hamiltonian_with_decay(Mat h, Mat n, double gamma);
  static LinearGenerator zero(int dim);
};

struct ValidatorThresholds {
  double linearity = 1e-10;
  double trace = 1e-10;
  double positivity = -1e-9;     // lower bound for min eigenvalue along the flow
  double automorphism = 1e-2;
  double entropy = 1e-8;         // allowed decrease of S_vN along the flow
};

struct ValidatorReport {
  uint64_t seed = 0;
  double linearity_residual = 0.0;
  double trace_derivative_residual = 0.0;
  double positivity_min_eig_along_flow = 0.0;
  double automorphism_residual = 0.0;
  double entropy_drift = 0.0;  // most negative S(t) - S(0) over the flow
  bool linear = false;
  bool trace_ok = false;
  bool positivity_ok = false;
  bool automorphism_ok = false;
  bool entropy_ok = false;
  bool pass = false;
};

struct ValidatorProbes {
  uint64_t seed = 0;
  std::vector<HybridState> states;
  std::vector<HybridOperator> operators;
};

// 20 operators with at most 3 terms, 10 states (5 product, 5 correlated).
ValidatorProbes default_validator_probes(const PhaseSpaceGrid& grid, int quantum_dim,
                                         uint64_t seed);

ValidatorReport validate_linear_generator(const LinearGenerator& g,
                                          const ValidatorProbes& probes,
                                          const PhaseSpaceGrid& grid, double horizon,
                                          double dt,
                                          const ValidatorThresholds& thresholds = {});

// Drift of the lifted canonical state over one period of the dynamics.
struct StationarityReport {
  double rho_drift = 0.0;           // Frobenius norm of rho_H(T) - rho_H(0)
  double rho_drift_relative = 0.0;  // divided by the Frobenius norm of rho_H(0)
  double max_block_drift = 0.0;     // max over xi of per-block Frobenius drift
};

StationarityReport canonical_stationarity(double beta, const HybridHamiltonian& h,
                                          double period,
                                          LiftKind lift = LiftKind::coherent);

}  // namespace hyko
