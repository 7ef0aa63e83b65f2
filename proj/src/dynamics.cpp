#include "dynamics.hpp"

#include <cmath>

#include "linalg.hpp"
#include "quantum.hpp"

namespace hyko {

ClassicalLinOp ClassicalLinOp::diagonal(Vec d) {
  ClassicalLinOp op;
  op.kind_ = Kind::diagonal;
  op.diag_ = std::move(d);
  return op;
}

ClassicalLinOp ClassicalLinOp::sparse(SpCMat m) {
  ClassicalLinOp op;
  op.kind_ = Kind::sparse;
  op.sparse_ = std::move(m);
  return op;
}

ClassicalLinOp ClassicalLinOp::dense(Mat m) {
  ClassicalLinOp op;
  op.kind_ = Kind::dense;
  op.dense_ = std::move(m);
  return op;
}

Vec ClassicalLinOp::apply(const Vec& x) const {
  switch (kind_) {
    case Kind::diagonal: return diag_.cwiseProduct(x);
    case Kind::sparse: return sparse_ * x;
    case Kind::dense: return dense_ * x;
  }
  throw NumericalError("corrupt classical operator");
}

Mat ClassicalLinOp::dense_matrix() const {
  switch (kind_) {
    case Kind::diagonal: return Mat(diag_.asDiagonal());
    case Kind::sparse: return Mat(sparse_);
    case Kind::dense: return dense_;
  }
  throw NumericalError("corrupt classical operator");
}

ClassicalLinOp ClassicalLinOp::scaled(Complex s) const {
  switch (kind_) {
    case Kind::diagonal: return diagonal(s * diag_);
    case Kind::sparse: {
      SpCMat m = sparse_;
      m *= s;
      return sparse(std::move(m));
    }
    case Kind::dense: return dense(s * dense_);
  }
  throw NumericalError("corrupt classical operator");
}

ClassicalLinOp ClassicalLinOp::diag_left(const Vec& d, Complex scale) const {
  Vec sd = scale * d;
  switch (kind_) {
    case Kind::diagonal: return diagonal(sd.cwiseProduct(diag_));
    case Kind::sparse: return sparse(SpCMat(sd.asDiagonal() * sparse_));
    case Kind::dense: return dense(sd.asDiagonal() * dense_);
  }
  throw NumericalError("corrupt classical operator");
}

ClassicalLinOp ClassicalLinOp::diag_right(const Vec& d, Complex scale) const {
  Vec sd = scale * d;
  switch (kind_) {
    case Kind::diagonal: return diagonal(diag_.cwiseProduct(sd));
    case Kind::sparse: return sparse(SpCMat(sparse_ * sd.asDiagonal()));
    case Kind::dense: return dense(dense_ * sd.asDiagonal());
  }
  throw NumericalError("corrupt classical operator");
}

Mat ProductOperator::realize_dense() const {
  const int n = grid.size();
  const int d = quantum_dim;
  Mat out = Mat::Zero(n * d, n * d);
  for (const auto& t : terms) {
    if (t.classical.is_diagonal()) {
      for (int xi = 0; xi < n; ++xi)
        out.block(xi * d, xi * d, d, d) += t.classical.diag()(xi) * t.quantum;
    } else {
      Mat c = t.classical.dense_matrix();
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          if (c(i, j) != Complex(0, 0)) out.block(i * d, j * d, d, d) += c(i, j) * t.quantum;
    }
  }
  return out;
}

HybridHamiltonian::HybridHamiltonian(HamiltonianField field, Mat quantum_term,
                                     std::vector<CouplingTerm> coupling,
                                     const PhaseSpaceGrid& grid, DiffScheme scheme,
                                     std::optional<RVec> classical_multiplicative,
                                     std::optional<ClassicalPreset> preset)
    : liouvillian_(field, grid, scheme),
      classical_energy_(std::move(field.energy)),
      d_(static_cast<int>(quantum_term.rows())),
      quantum_term_(std::move(quantum_term)),
      coupling_(std::move(coupling)),
      classical_multiplicative_(std::move(classical_multiplicative)),
      preset_(preset) {
  if (d_ < 1 || quantum_term_.rows() != quantum_term_.cols())
    throw ValidationError("hybrid hamiltonian: quantum term must be square");
  if (hermiticity_error(quantum_term_) > 1e-12)
    throw ValidationError("hybrid hamiltonian: quantum term not Hermitian");
  for (const auto& c : coupling_) {
    if (c.classical.size() != grid.size())
      throw ValidationError("hybrid hamiltonian: coupling classical factor size mismatch");
    if (c.quantum.rows() != d_ || c.quantum.cols() != d_)
      throw ValidationError("hybrid hamiltonian: coupling quantum factor shape mismatch");
    if (hermiticity_error(c.quantum) > 1e-12)
      throw ValidationError("hybrid hamiltonian: coupling quantum factor not Hermitian");
  }
  if (classical_multiplicative_ && classical_multiplicative_->size() != grid.size())
    throw ValidationError("hybrid hamiltonian: multiplicative term size mismatch");
}

Mat HybridHamiltonian::realize_dense() const { return product_operator().realize_dense(); }

ProductOperator HybridHamiltonian::product_operator() const {
  const int n = grid().size();
  ProductOperator op{grid(), d_, {}};
  // L_C (x) I
  Mat l = liouvillian_.dense_matrix();
  if (liouvillian_.dense_generator())
    op.terms.push_back({ClassicalLinOp::dense(std::move(l)), Mat::Identity(d_, d_)});
  else
    op.terms.push_back({ClassicalLinOp::sparse(l.sparseView()), Mat::Identity(d_, d_)});
  // I (x) H_Q
  op.terms.push_back(
      {ClassicalLinOp::diagonal(Vec::Ones(n)), quantum_term_});
  // coupling
  for (const auto& c : coupling_)
    op.terms.push_back(
        {ClassicalLinOp::diagonal(c.strength * c.classical.cast<Complex>()), c.quantum});
  if (classical_multiplicative_)
    op.terms.push_back({ClassicalLinOp::diagonal(classical_multiplicative_->cast<Complex>()),
                        Mat::Identity(d_, d_)});
  return op;
}

const UnitaryPropagator& HybridHamiltonian::propagator() const {
  std::lock_guard<std::mutex> lock(cache_->mutex);
  if (!cache_->prop)
    cache_->prop = std::make_shared<const UnitaryPropagator>(realize_dense());
  return *cache_->prop;
}

HybridHamiltonian build_hybrid_hamiltonian(const RVec& classical_energy,
                                           const Mat& quantum_term,
                                           const std::vector<CouplingTerm>& coupling,
                                           const PhaseSpaceGrid& grid, DiffScheme scheme,
                                           std::optional<RVec> classical_multiplicative) {
  return HybridHamiltonian(hamiltonian_field(classical_energy, grid), quantum_term, coupling,
                           grid, scheme, std::move(classical_multiplicative));
}

HybridHamiltonian build_hybrid_hamiltonian(ClassicalPreset preset, const Mat& quantum_term,
                                           const std::vector<CouplingTerm>& coupling,
                                           const PhaseSpaceGrid& grid, DiffScheme scheme,
                                           std::optional<RVec> classical_multiplicative) {
  return HybridHamiltonian(preset_field(preset, grid), quantum_term, coupling, grid, scheme,
                           std::move(classical_multiplicative), preset);
}

ProductOperator with_momentum_coupling(const ProductOperator& h, Axis axis, const Mat& b,
                                       double strength, int order) {
  ProductOperator out = h;
  MomentumOperator pi(h.grid, axis, order);
  SpCMat m = (Complex(0, -strength) * pi.difference_matrix().cast<Complex>()).eval();
  out.terms.push_back({ClassicalLinOp::sparse(std::move(m)), b});
  return out;
}

namespace {

Mat rk4_von_neumann(const Mat& rho0, const Mat& h, double t, double dt) {
  auto rhs = [&](const Mat& rho) { return Complex(0, -1) * (h * rho - rho * h); };
  Mat rho = rho0;
  double remaining = t;
  double sign = t >= 0 ? 1.0 : -1.0;
  while (sign * remaining > 1e-15) {
    double step = sign * std::min(std::abs(dt), std::abs(remaining));
    Mat k1 = rhs(rho);
    Mat k2 = rhs(rho + 0.5 * step * k1);
    Mat k3 = rhs(rho + 0.5 * step * k2);
    Mat k4 = rhs(rho + step * k3);
    rho += (step / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    remaining -= step;
  }
  return rho;
}

}  // namespace

Mat evolve_state(const Mat& rho_h, const HybridHamiltonian& h, double t, EvolveMethod method,
                 double rk4_dt) {
  if (rho_h.rows() != h.product_dim())
    throw ValidationError("evolve_state: dimension mismatch");
  if (method == EvolveMethod::spectral) return h.propagator().evolve_state(t, rho_h);
  return rk4_von_neumann(rho_h, h.realize_dense(), t, rk4_dt);
}

HybridDensityMatrix evolve_state(const HybridDensityMatrix& rho_h, const HybridHamiltonian& h,
                                 double t, EvolveMethod method, double rk4_dt) {
  HybridDensityMatrix out = rho_h;
  out.matrix = evolve_state(rho_h.matrix, h, t, method, rk4_dt);
  out.psd_checked = false;
  return out;
}

Mat evolve_observable(const Mat& f, const HybridHamiltonian& h, double t, EvolveMethod method,
                      double rk4_dt) {
  if (f.rows() != h.product_dim())
    throw ValidationError("evolve_observable: dimension mismatch");
  if (method == EvolveMethod::spectral) return h.propagator().evolve_observable(t, f);
  // Heisenberg RK4: df/dt = i[H, f] = -(-i[H, f])
  return rk4_von_neumann(f, h.realize_dense(), -t, rk4_dt);
}

AlgebraPreservationReport check_algebra_preservation(
    const ProductOperator& h, const std::vector<HybridOperator>& samples, double tol,
    const Mat& probes) {
  const int n = h.grid.size();
  const int d = h.quantum_dim;
  const int s = static_cast<int>(probes.cols());

  // images of the probe set under each classical factor of H
  std::vector<Mat> h_images(h.terms.size());
  for (size_t t = 0; t < h.terms.size(); ++t) {
    h_images[t].resize(n, s);
    for (int j = 0; j < s; ++j) h_images[t].col(j) = h.terms[t].classical.apply(probes.col(j));
  }

  AlgebraPreservationReport rep;
  rep.tol = tol;
  for (const auto& f : samples) {
    if (!f.grid().same_shape(h.grid) || f.quantum_dim() != d)
      throw ValidationError("check_algebra_preservation: sample dimension mismatch");
    // C = [pi_H(f), H] = sum over f-terms and H-terms.
    // Each contribution is (classical op) (x) (quantum matrix); collect the
    // probe images of the classical parts and the quantum factors.
    struct Contribution {
      Mat images;   // classical action on probes, n x s
      Mat quantum;  // d x d
    };
    std::vector<Contribution> contributions;
    for (const auto& ft : f.terms()) {
      for (size_t t = 0; t < h.terms.size(); ++t) {
        const auto& ht = h.terms[t];
        if (ht.classical.is_diagonal()) {
          // [diag(a) (x) A, diag(c) (x) Q] = diag(a c) (x) [A, Q]
          Mat comm = ft.quantum * ht.quantum - ht.quantum * ft.quantum;
          if (comm.cwiseAbs().maxCoeff() < 1e-300) continue;
          Vec ac = ft.gamma * ft.classical.cwiseProduct(ht.classical.diag());
          Mat images(n, s);
          for (int j = 0; j < s; ++j) images.col(j) = ac.cwiseProduct(probes.col(j));
          contributions.push_back({std::move(images), std::move(comm)});
        } else {
          // diag(a) C (x) A Q  -  C diag(a) (x) Q A
          Mat left(n, s), right(n, s);
          for (int j = 0; j < s; ++j) {
            left.col(j) = ft.gamma * ft.classical.cwiseProduct(h_images[t].col(j));
            right.col(j) =
                ft.gamma * ht.classical.apply(ft.classical.cwiseProduct(probes.col(j)));
          }
          contributions.push_back({std::move(left), ft.quantum * ht.quantum});
          contributions.push_back({std::move(right), Mat(-ht.quantum * ft.quantum)});
        }
      }
    }
    // per quantum block (m, m'), the classical action is
    // sum_t quantum_t(m, m') * images_t
    double worst = 0.0;
    for (int m = 0; m < d; ++m)
      for (int mp = 0; mp < d; ++mp) {
        Mat block_images = Mat::Zero(n, s);
        for (const auto& c : contributions) {
          Complex w = c.quantum(m, mp);
          if (w != Complex(0, 0)) block_images += w * c.images;
        }
        // best-fit pointwise multiplier shared across the probe set
        Vec g(n);
        for (int i = 0; i < n; ++i) {
          Complex num = 0;
          double den = 0;
          for (int j = 0; j < s; ++j) {
            num += std::conj(probes(i, j)) * block_images(i, j);
            den += std::norm(probes(i, j));
          }
          g(i) = den > 1e-300 ? num / den : Complex(0, 0);
        }
        double res2 = 0;
        for (int j = 0; j < s; ++j)
          res2 += (block_images.col(j) - g.cwiseProduct(probes.col(j))).squaredNorm();
        worst = std::max(worst, std::sqrt(res2) / probes.norm());
      }
    rep.per_sample.push_back(worst);
    rep.max_residual = std::max(rep.max_residual, worst);
  }
  rep.pass = rep.max_residual <= tol;
  return rep;
}

BackReactionReport back_reaction_probe(const HybridState& state0, const HybridHamiltonian& h,
                                       const std::vector<double>& times) {
  if (!h.preset())
    throw UnsupportedError("back_reaction_probe: no exact-transport oracle for this "
                           "classical energy (use a preset)");
  validate_hybrid_state(state0, h.grid());
  const auto& grid = h.grid();
  const int d = h.quantum_dim();

  ClassicalDensity f0 = classical_marginal(state0, grid);
  Mat rho0 = lift_block_diagonal(state0, grid).matrix;
  auto prepared = h.propagator().prepare(rho0);

  BackReactionReport rep;
  rep.times = times;
  for (double t : times) {
    Mat rho_t = prepared.at(t);
    ClassicalDensity marginal = classical_marginal(rho_t, grid, d);
    ClassicalDensity oracle = liouville_oracle(f0, *h.preset(), t, grid);
    rep.marginals.push_back(marginal.values);
    rep.oracle_deviation.push_back((marginal.values - oracle.values).cwiseAbs().maxCoeff());
    Mat rho_q = quantum_marginal(rho_t, grid, d);
    rep.quantum_purity.push_back(purity(rho_q));
  }
  return rep;
}

LinearGenerator LinearGenerator::from_hamiltonian(Mat h) {
  auto hp = std::make_shared<Mat>(std::move(h));
  LinearGenerator g;
  g.dim = static_cast<int>(hp->rows());
  g.observable_action = [hp](const Mat& f) { return Complex(0, 1) * (*hp * f - f * *hp); };
  g.state_action = [hp](const Mat& rho) { return Complex(0, -1) * (*hp * rho - rho * *hp); };
  return g;
}

LinearGenerator LinearGenerator::hamiltonian_with_decay(Mat h, Mat n, double gamma) {
  auto hp = std::make_shared<Mat>(std::move(h));
  auto np = std::make_shared<Mat>(std::move(n));
  LinearGenerator g;
  g.dim = static_cast<int>(hp->rows());
  g.observable_action = [hp, np, gamma](const Mat& f) {
    return Complex(0, 1) * (*hp * f - f * *hp) - gamma * (*np * f + f * *np);
  };
  g.state_action = [hp, np, gamma](const Mat& rho) {
    return Complex(0, -1) * (*hp * rho - rho * *hp) - gamma * (*np * rho + rho * *np);
  };
  return g;
}

LinearGenerator LinearGenerator::zero(int dim) {
  LinearGenerator g;
  g.dim = dim;
  g.observable_action = [](const Mat& f) { return Mat(Mat::Zero(f.rows(), f.cols())); };
  g.state_action = [](const Mat& rho) { return Mat(Mat::Zero(rho.rows(), rho.cols())); };
  return g;
}

namespace {

Mat rk4_generator(const std::function<Mat(const Mat&)>& rhs, Mat x, double t, double dt,
                  const std::function<void(double, const Mat&)>& checkpoint) {
  double elapsed = 0.0;
  checkpoint(0.0, x);
  while (elapsed < t - 1e-15) {
    double step = std::min(dt, t - elapsed);
    Mat k1 = rhs(x);
    Mat k2 = rhs(x + 0.5 * step * k1);
    Mat k3 = rhs(x + 0.5 * step * k2);
    Mat k4 = rhs(x + step * k3);
    x += (step / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    elapsed += step;
    checkpoint(elapsed, x);
  }
  return x;
}

}  // namespace

ValidatorProbes default_validator_probes(const PhaseSpaceGrid& grid, int quantum_dim,
                                         uint64_t seed) {
  ValidatorProbes probes;
  probes.seed = seed;
  std::mt19937_64 rng(seed);
  for (int i = 0; i < 5; ++i) probes.states.push_back(random_product_state(grid, quantum_dim, rng));
  for (int i = 0; i < 5; ++i) probes.states.push_back(random_hybrid_state(grid, quantum_dim, rng));
  for (int i = 0; i < 20; ++i)
    probes.operators.push_back(random_hybrid_operator(grid, quantum_dim, 3, rng));
  return probes;
}

ValidatorReport validate_linear_generator(const LinearGenerator& g,
                                          const ValidatorProbes& probes,
                                          const PhaseSpaceGrid& grid, double horizon,
                                          double dt, const ValidatorThresholds& thresholds) {
  ValidatorReport rep;
  rep.seed = probes.seed;
  if (probes.states.empty() || probes.operators.empty())
    throw ValidationError("validate_linear_generator: empty probe set");
  const int dim = g.dim;

  // linearity on random pairs
  std::mt19937_64 rng(probes.seed ^ 0x9e3779b97f4a7c15ULL);
  double lin = 0.0;
  for (int i = 0; i < 4; ++i) {
    Mat x = random_matrix(dim, rng), y = random_matrix(dim, rng);
    Complex a(0.7, -0.3), b(-1.2, 0.4);
    Mat lhs = g.state_action(a * x + b * y);
    Mat rhs = a * g.state_action(x) + b * g.state_action(y);
    double scale = std::max(1.0, rhs.norm());
    lin = std::max(lin, (lhs - rhs).norm() / scale);
    Mat lhs_o = g.observable_action(a * x + b * y);
    Mat rhs_o = a * g.observable_action(x) + b * g.observable_action(y);
    lin = std::max(lin, (lhs_o - rhs_o).norm() / std::max(1.0, rhs_o.norm()));
  }
  rep.linearity_residual = lin;
  rep.linear = lin <= thresholds.linearity;
  if (!rep.linear)
    throw ValidationError("validate_linear_generator: generator is not linear (residual " +
                          std::to_string(lin) + ")");

  double trace_resid = 0.0;
  double min_eig = std::numeric_limits<double>::infinity();
  double entropy_drift = 0.0;

  for (const auto& state : probes.states) {
    Mat rho0 = lift_block_diagonal(state, grid).matrix;
    double s0 = von_neumann_entropy(rho0);
    auto checkpoint = [&](double, const Mat& rho) {
      trace_resid = std::max(trace_resid, std::abs(g.state_action(rho).trace()));
      RVec eigs = hermitian_eigenvalues(0.5 * (rho + rho.adjoint()));
      min_eig = std::min(min_eig, eigs.minCoeff());
      entropy_drift = std::min(entropy_drift, entropy_from_eigenvalues(eigs) - s0);
    };
    rk4_generator(g.state_action, rho0, horizon, dt, checkpoint);
  }
  rep.trace_derivative_residual = trace_resid;
  rep.positivity_min_eig_along_flow = min_eig;
  rep.entropy_drift = entropy_drift;

  // automorphism: evolve sampled algebra elements and test each quantum
  // block for weak multiplicativity
  Mat band_probes = bandlimited_probes(grid);
  const int n = grid.size();
  double automorphism = 0.0;
  for (const auto& f : probes.operators) {
    Mat ft = rk4_generator(g.observable_action, f.realize_dense(), horizon, dt,
                           [](double, const Mat&) {});
    const int d = f.quantum_dim();
    for (int m = 0; m < d; ++m)
      for (int mp = 0; mp < d; ++mp) {
        Mat block(n, n);
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) block(i, j) = ft(i * d + m, j * d + mp);
        auto fit = weak_multiplicative_fit(
            [&](const Vec& v) { return Vec(block * v); }, band_probes);
        automorphism = std::max(automorphism, fit.residual);
      }
  }
  rep.automorphism_residual = automorphism;

  rep.trace_ok = rep.trace_derivative_residual <= thresholds.trace;
  rep.positivity_ok = rep.positivity_min_eig_along_flow >= thresholds.positivity;
  rep.automorphism_ok = rep.automorphism_residual <= thresholds.automorphism;
  rep.entropy_ok = rep.entropy_drift >= -thresholds.entropy;
  rep.pass = rep.linear && rep.trace_ok && rep.positivity_ok && rep.automorphism_ok &&
             rep.entropy_ok;
  return rep;
}

StationarityReport canonical_stationarity(double beta, const HybridHamiltonian& h,
                                          double period, LiftKind lift) {
  const auto& grid = h.grid();
  const int d = h.quantum_dim();
  HybridState canonical = maxent_canonical_state(h.classical_energy(), h.quantum_term(),
                                                 h.coupling(), beta, grid);
  Mat rho0 = lift == LiftKind::coherent ? lift_coherent(canonical, grid, false).matrix
                                        : lift_block_diagonal(canonical, grid).matrix;
  Mat rho_t = evolve_state(rho0, h, period);
  StationarityReport rep;
  rep.rho_drift = (rho_t - rho0).norm();
  rep.rho_drift_relative = rep.rho_drift / rho0.norm();
  for (int xi = 0; xi < grid.size(); ++xi) {
    double block_drift = (rho_t.block(xi * d, xi * d, d, d) - rho0.block(xi * d, xi * d, d, d))
                             .norm() /
                         grid.cell_weight();
    rep.max_block_drift = std::max(rep.max_block_drift, block_drift);
  }
  return rep;
}

}  // namespace hyko
