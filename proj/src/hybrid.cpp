#include "hybrid.hpp"

#include <cmath>

#include "linalg.hpp"
#include "quantum.hpp"

namespace hyko {

HybridOperator::HybridOperator(PhaseSpaceGrid grid, int quantum_dim,
                               std::vector<HybridTerm> terms)
    : grid_(std::move(grid)), d_(quantum_dim), terms_(std::move(terms)) {
  if (d_ < 1) throw ValidationError("hybrid operator: quantum dimension must be positive");
  for (const auto& t : terms_) {
    if (t.classical.size() != grid_.size())
      throw ValidationError("hybrid operator: classical factor size mismatch");
    if (t.quantum.rows() != d_ || t.quantum.cols() != d_)
      throw ValidationError("hybrid operator: quantum factor shape mismatch");
  }
}

HybridOperator HybridOperator::product(const HybridOperator& other) const {
  if (!grid_.same_shape(other.grid_) || d_ != other.d_)
    throw ValidationError("hybrid product: dimension mismatch");
  std::vector<HybridTerm> out;
  out.reserve(terms_.size() * other.terms_.size());
  for (const auto& s : terms_)
    for (const auto& t : other.terms_)
      out.push_back({s.gamma * t.gamma, s.classical.cwiseProduct(t.classical),
                     s.quantum * t.quantum});
  return HybridOperator(grid_, d_, std::move(out));
}

HybridOperator HybridOperator::involution() const {
  std::vector<HybridTerm> out;
  out.reserve(terms_.size());
  for (const auto& t : terms_)
    out.push_back({std::conj(t.gamma), t.classical.conjugate(), t.quantum.adjoint()});
  return HybridOperator(grid_, d_, std::move(out));
}

Mat HybridOperator::realize_dense() const {
  const int n = grid_.size();
  Mat out = Mat::Zero(n * d_, n * d_);
  for (const auto& t : terms_)
    for (int xi = 0; xi < n; ++xi)
      out.block(xi * d_, xi * d_, d_, d_) += t.gamma * t.classical(xi) * t.quantum;
  return out;
}

HybridOperator hybrid_product(const HybridOperator& f, const HybridOperator& g) {
  return f.product(g);
}
HybridOperator hybrid_involution(const HybridOperator& f) { return f.involution(); }

void validate_hybrid_state(const HybridState& state, const PhaseSpaceGrid& grid) {
  if (static_cast<int>(state.blocks.size()) != grid.size())
    throw ValidationError("hybrid state: block count mismatch");
  const int d = state.quantum_dim;
  double mass = 0.0;
  for (int xi = 0; xi < grid.size(); ++xi) {
    const Mat& b = state.blocks[xi];
    if (b.rows() != d || b.cols() != d)
      throw ValidationError("hybrid state: block shape mismatch");
    if (hermiticity_error(b) > 1e-10)
      throw ValidationError("hybrid state: block " + std::to_string(xi) + " not Hermitian");
    Mat sym = 0.5 * (b + b.adjoint());
    double min_eig = hermitian_eigenvalues(std::move(sym)).minCoeff();
    if (min_eig < -1e-10)
      throw ValidationError("hybrid state: block " + std::to_string(xi) +
                            " not positive, min eigenvalue " + std::to_string(min_eig));
    mass += b.trace().real();
  }
  mass *= grid.cell_weight();
  if (std::abs(mass - 1.0) > 1e-10)
    throw ValidationError("hybrid state: total mass " + std::to_string(mass) + " is not 1");
}

HybridState hybrid_state_normalized(std::vector<Mat> blocks, const PhaseSpaceGrid& grid) {
  if (static_cast<int>(blocks.size()) != grid.size())
    throw ValidationError("hybrid state: block count mismatch");
  if (blocks.empty()) throw ValidationError("hybrid state: empty");
  const int d = static_cast<int>(blocks.front().rows());
  double mass = 0.0;
  for (auto& b : blocks) {
    b = 0.5 * (b + b.adjoint().eval());
    mass += b.trace().real();
  }
  mass *= grid.cell_weight();
  if (!(mass > 0.0)) throw ValidationError("hybrid state: nonpositive mass");
  for (auto& b : blocks) b /= mass;
  HybridState s{d, std::move(blocks)};
  validate_hybrid_state(s, grid);
  return s;
}

HybridState product_state(const ClassicalDensity& classical, const Mat& quantum,
                          const PhaseSpaceGrid& grid) {
  validate_density_matrix(quantum);
  std::vector<Mat> blocks(grid.size());
  for (int xi = 0; xi < grid.size(); ++xi) blocks[xi] = classical.values(xi) * quantum;
  return HybridState{static_cast<int>(quantum.rows()), std::move(blocks)};
}

Complex hybrid_expectation(const HybridState& state, const HybridOperator& f,
                           const PhaseSpaceGrid& grid) {
  if (state.quantum_dim != f.quantum_dim() ||
      static_cast<int>(state.blocks.size()) != grid.size())
    throw ValidationError("hybrid_expectation: dimension mismatch");
  Complex total = 0;
  for (const auto& t : f.terms()) {
    Complex acc = 0;
    for (int xi = 0; xi < grid.size(); ++xi)
      acc += t.classical(xi) * (state.blocks[xi] * t.quantum).trace();
    total += t.gamma * acc;
  }
  return grid.cell_weight() * total;
}

HybridDensityMatrix lift_block_diagonal(const HybridState& state, const PhaseSpaceGrid& grid) {
  const int n = grid.size();
  const int d = state.quantum_dim;
  Mat out = Mat::Zero(n * d, n * d);
  double min_eig = 0.0;
  for (int xi = 0; xi < n; ++xi) {
    out.block(xi * d, xi * d, d, d) = grid.cell_weight() * state.blocks[xi];
    Mat sym = 0.5 * (state.blocks[xi] + state.blocks[xi].adjoint());
    min_eig = std::min(min_eig, grid.cell_weight() *
                                    hermitian_eigenvalues(std::move(sym)).minCoeff());
  }
  return HybridDensityMatrix{std::move(out), LiftKind::block_diagonal, min_eig, true};
}

HybridDensityMatrix lift_coherent(const HybridState& state, const PhaseSpaceGrid& grid,
                                  bool check_psd) {
  const int n = grid.size();
  const int d = state.quantum_dim;
  const double w = grid.cell_weight();
  Mat out = Mat::Zero(n * d, n * d);
  RVec r(n), u(n);
  for (int m = 0; m < d; ++m) {
    for (int mp = m; mp < d; ++mp) {
      // moduli and unwrapped phases of c_{mm'}(xi) along the grid ordering
      for (int xi = 0; xi < n; ++xi) {
        Complex c = state.blocks[xi](m, mp);
        if (m == mp) {
          r(xi) = std::max(c.real(), 0.0);
          u(xi) = 0.0;
          continue;
        }
        double mag = std::abs(c);
        r(xi) = mag;
        double theta = mag <= 1e-300 ? 0.0 : std::arg(c);
        if (xi == 0) {
          u(xi) = theta;
        } else {
          u(xi) = theta + 2 * M_PI * std::round((u(xi - 1) - theta) / (2 * M_PI));
        }
      }
      for (int xi = 0; xi < n; ++xi) {
        for (int xj = 0; xj < n; ++xj) {
          double mag = std::sqrt(r(xi) * r(xj));
          Complex val = w * mag * std::exp(Complex(0, 0.5 * (u(xi) + u(xj))));
          out(xi * d + m, xj * d + mp) = val;
          if (m != mp) out(xj * d + mp, xi * d + m) = std::conj(val);
        }
      }
    }
  }
  HybridDensityMatrix dm{std::move(out), LiftKind::coherent, 0.0, false};
  if (check_psd) {
    dm.min_eigenvalue = hermitian_eigenvalues(dm.matrix).minCoeff();
    dm.psd_checked = true;
  }
  return dm;
}

Complex dm_expectation(const HybridDensityMatrix& rho_h, const HybridOperator& f) {
  const int n = f.grid().size();
  const int d = f.quantum_dim();
  if (rho_h.matrix.rows() != n * d) throw ValidationError("dm_expectation: dimension mismatch");
  Complex total = 0;
  for (const auto& t : f.terms()) {
    Complex acc = 0;
    for (int xi = 0; xi < n; ++xi)
      acc += t.classical(xi) * (rho_h.matrix.block(xi * d, xi * d, d, d) * t.quantum).trace();
    total += t.gamma * acc;
  }
  return total;
}

Mat quantum_marginal(const Mat& rho_h, const PhaseSpaceGrid& grid, int quantum_dim) {
  const int n = grid.size();
  if (rho_h.rows() != n * quantum_dim || rho_h.cols() != n * quantum_dim)
    throw ValidationError("quantum_marginal: dimension mismatch");
  Mat out = Mat::Zero(quantum_dim, quantum_dim);
  for (int xi = 0; xi < n; ++xi)
    out += rho_h.block(xi * quantum_dim, xi * quantum_dim, quantum_dim, quantum_dim);
  return out;
}

Mat quantum_marginal(const HybridState& state, const PhaseSpaceGrid& grid) {
  Mat out = Mat::Zero(state.quantum_dim, state.quantum_dim);
  for (const auto& b : state.blocks) out += b;
  return grid.cell_weight() * out;
}

ClassicalDensity classical_marginal(const HybridState& state, const PhaseSpaceGrid& grid) {
  RVec f(grid.size());
  for (int xi = 0; xi < grid.size(); ++xi) f(xi) = state.blocks[xi].trace().real();
  return ClassicalDensity::normalized(std::move(f), grid);
}

ClassicalDensity classical_marginal(const Mat& rho_h, const PhaseSpaceGrid& grid,
                                    int quantum_dim) {
  RVec f(grid.size());
  for (int xi = 0; xi < grid.size(); ++xi)
    f(xi) = rho_h.block(xi * quantum_dim, xi * quantum_dim, quantum_dim, quantum_dim)
                .trace()
                .real() /
            grid.cell_weight();
  return ClassicalDensity::normalized(std::move(f), grid);
}

Mat partial_trace_power(const HybridState& state, const PhaseSpaceGrid& grid, int k) {
  if (k < 1) throw ValidationError("partial_trace_power: k must be at least 1");
  const int n = grid.size();
  const int d = state.quantum_dim;
  if (n * d > 4096)
    throw UnsupportedError("partial_trace_power: dense route capped at 4096 dimensions");
  // right side: cell_weight * sum of per-block powers
  Mat right = Mat::Zero(d, d);
  for (const auto& b : state.blocks) {
    Mat pw = Mat::Identity(d, d);
    for (int i = 0; i < k; ++i) pw = pw * b;
    right += pw;
  }
  right *= grid.cell_weight();
  // left side: a dense power of the realized lift
  Mat lift = lift_block_diagonal(state, grid).matrix;
  Mat pw = lift;
  for (int i = 1; i < k; ++i) pw = mat_mult(pw, lift);
  Mat left = quantum_marginal(pw, grid, d) / std::pow(grid.cell_weight(), k - 1);
  double err = (left - right).cwiseAbs().maxCoeff();
  if (err > 1e-10)
    throw NumericalError("partial_trace_power identity violated by " + std::to_string(err));
  return right;
}

double hybrid_entropy(const HybridState& state, const PhaseSpaceGrid& grid) {
  double s = 0.0;
  for (const auto& b : state.blocks) {
    Mat sym = 0.5 * (b + b.adjoint());
    s += entropy_from_eigenvalues(hermitian_eigenvalues(std::move(sym)));
  }
  return grid.cell_weight() * s;
}

EntropyEquivalenceReport entropy_equivalence_report(const HybridState& state,
                                                    const PhaseSpaceGrid& grid) {
  EntropyEquivalenceReport rep;
  rep.hybrid_entropy = hybrid_entropy(state, grid);
  Mat block_lift = lift_block_diagonal(state, grid).matrix;
  rep.vn_entropy_block = entropy_from_eigenvalues(hermitian_eigenvalues(std::move(block_lift)));
  rep.offset_residual =
      rep.vn_entropy_block - (rep.hybrid_entropy - std::log(grid.cell_weight()));
  auto coherent = lift_coherent(state, grid, true);
  rep.coherent_min_eigenvalue = coherent.min_eigenvalue;
  rep.coherent_psd = coherent.min_eigenvalue >= -1e-8;
  if (rep.coherent_psd)
    rep.vn_entropy_coherent = entropy_from_eigenvalues(hermitian_eigenvalues(coherent.matrix));
  if (std::abs(rep.offset_residual) > 1e-8)
    throw NumericalError("entropy offset identity violated by " +
                         std::to_string(rep.offset_residual));
  return rep;
}

HybridState maxent_canonical_state(const RVec& classical_energy, const Mat& quantum_energy,
                                   const std::vector<CouplingTerm>& coupling, double beta,
                                   const PhaseSpaceGrid& grid) {
  if (!(beta > 0)) throw ValidationError("maxent_canonical_state: beta must be positive");
  if (classical_energy.size() != grid.size())
    throw ValidationError("maxent_canonical_state: classical energy size mismatch");
  const int d = static_cast<int>(quantum_energy.rows());
  if (hermiticity_error(quantum_energy) > 1e-12)
    throw ValidationError("maxent_canonical_state: quantum energy not Hermitian");
  for (const auto& c : coupling) {
    if (c.classical.size() != grid.size() || c.quantum.rows() != d || c.quantum.cols() != d)
      throw ValidationError("maxent_canonical_state: coupling shape mismatch");
    if (hermiticity_error(c.quantum) > 1e-12)
      throw ValidationError("maxent_canonical_state: coupling factor not Hermitian");
  }

  const int n = grid.size();
  std::vector<HermitianEig> eigs(n);
  RVec shift(n);
  for (int xi = 0; xi < n; ++xi) {
    Mat h = classical_energy(xi) * Mat::Identity(d, d) + quantum_energy;
    for (const auto& c : coupling) h += c.strength * c.classical(xi) * c.quantum;
    eigs[xi] = hermitian_eig(std::move(h));
    shift(xi) = eigs[xi].eigenvalues.minCoeff();
  }
  const double global_shift = shift.minCoeff();
  std::vector<Mat> blocks(n);
  for (int xi = 0; xi < n; ++xi) {
    RVec w(d);
    for (int i = 0; i < d; ++i)
      w(i) = std::exp(-beta * (eigs[xi].eigenvalues(i) - shift(xi)));
    Mat b = eigs[xi].eigenvectors * w.asDiagonal() * eigs[xi].eigenvectors.adjoint();
    blocks[xi] = std::exp(-beta * (shift(xi) - global_shift)) * b;
  }
  return hybrid_state_normalized(std::move(blocks), grid);
}

SmoothClassicalFunction SmoothClassicalFunction::random(int max_mode, int n_modes,
                                                        std::mt19937_64& rng) {
  std::uniform_int_distribution<int> mode(-max_mode, max_mode);
  std::normal_distribution<double> g;
  SmoothClassicalFunction f;
  for (int i = 0; i < n_modes; ++i)
    f.modes_.push_back({mode(rng), mode(rng), Complex(g(rng), g(rng))});
  return f;
}

Complex SmoothClassicalFunction::value(double u, double v) const {
  Complex acc = 0;
  for (const auto& m : modes_)
    acc += m.coeff * std::exp(Complex(0, 2 * M_PI * (m.mq * u + m.mp * v)));
  return acc;
}

Vec SmoothClassicalFunction::sample(const PhaseSpaceGrid& grid) const {
  const double lq = grid.q_max() - grid.q_min();
  const double lp = grid.p_max() - grid.p_min();
  return grid.sample_complex([&](double q, double p) {
    return value((q - grid.q_min()) / lq, (p - grid.p_min()) / lp);
  });
}

RVec SmoothClassicalFunction::sample_real(const PhaseSpaceGrid& grid) const {
  return sample(grid).real();
}

HybridState random_hybrid_state(const PhaseSpaceGrid& grid, int quantum_dim,
                                std::mt19937_64& rng) {
  std::vector<Mat> blocks(grid.size());
  for (auto& b : blocks) {
    Mat g = random_matrix(quantum_dim, rng);
    b = g * g.adjoint();
  }
  return hybrid_state_normalized(std::move(blocks), grid);
}

HybridState random_product_state(const PhaseSpaceGrid& grid, int quantum_dim,
                                 std::mt19937_64& rng) {
  std::uniform_real_distribution<double> uni(0.1, 1.0);
  RVec f(grid.size());
  for (int i = 0; i < grid.size(); ++i) f(i) = uni(rng);
  auto density = ClassicalDensity::normalized(std::move(f), grid);
  return product_state(density, random_density_matrix(quantum_dim, rng), grid);
}

HybridOperator random_hybrid_operator(const PhaseSpaceGrid& grid, int quantum_dim,
                                      int max_terms, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> count(1, max_terms);
  std::normal_distribution<double> g;
  std::vector<HybridTerm> terms;
  int k = count(rng);
  for (int i = 0; i < k; ++i) {
    auto f = SmoothClassicalFunction::random(2, 4, rng);
    terms.push_back({Complex(g(rng), g(rng)), f.sample(grid), random_matrix(quantum_dim, rng)});
  }
  return HybridOperator(grid, quantum_dim, std::move(terms));
}

}  // namespace hyko
