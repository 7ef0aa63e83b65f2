#include "koopman.hpp"

#include <cmath>

namespace hyko {

MultiplicativeOperator represent_multiplicative(const Vec& a, const PhaseSpaceGrid& grid) {
  if (a.size() != grid.size()) throw ValidationError("represent_multiplicative: size mismatch");
  return MultiplicativeOperator{a};
}

MultiplicativeOperator represent_multiplicative(const RVec& a, const PhaseSpaceGrid& grid) {
  return represent_multiplicative(Vec(a.cast<Complex>()), grid);
}

MomentumOperator::MomentumOperator(const PhaseSpaceGrid& grid, Axis axis, int order)
    : axis_(axis), order_(order) {
  d_ = axis == Axis::q ? derivative_q(grid, order) : derivative_p(grid, order);
}

Vec MomentumOperator::apply(const Vec& psi) const {
  if (psi.size() != d_.rows()) throw ValidationError("momentum operator: size mismatch");
  Vec out(psi.size());
  out.real() = d_ * psi.real();
  out.imag() = d_ * psi.imag();
  return Complex(0, -1) * out;
}

Mat MomentumOperator::dense() const { return Complex(0, -1) * RMat(d_).cast<Complex>(); }

MomentumOperator momentum_operator(const PhaseSpaceGrid& grid, Axis axis, int order) {
  return MomentumOperator(grid, axis, order);
}

KoopmanLiouvillian::KoopmanLiouvillian(const HamiltonianField& field,
                                       const PhaseSpaceGrid& grid, DiffScheme scheme)
    : grid_(grid), scheme_(scheme) {
  if (field.alpha.size() != grid.size() || field.beta.size() != grid.size())
    throw ValidationError("liouvillian: field/grid size mismatch");
  is_dense_ = scheme == DiffScheme::spectral;
  if (is_dense_) {
    RMat dq = spectral_derivative_q(grid_);
    RMat dp = spectral_derivative_p(grid_);
    // (alpha D + D alpha)/2 per axis
    k_dense_ = 0.5 * (field.alpha.asDiagonal() * dq) + 0.5 * (dq * field.alpha.asDiagonal()) +
               0.5 * (field.beta.asDiagonal() * dp) + 0.5 * (dp * field.beta.asDiagonal());
  } else {
    int order = scheme == DiffScheme::stencil4 ? 4 : 2;
    SpRMat dq = derivative_q(grid_, order);
    SpRMat dp = derivative_p(grid_, order);
    SpRMat aq = field.alpha.asDiagonal() * dq;
    SpRMat qa = dq * field.alpha.asDiagonal();
    SpRMat bp = field.beta.asDiagonal() * dp;
    SpRMat pb = dp * field.beta.asDiagonal();
    k_sparse_ = 0.5 * (aq + qa) + 0.5 * (bp + pb);
  }
}

RVec KoopmanLiouvillian::apply_generator(const RVec& x) const {
  return is_dense_ ? RVec(k_dense_ * x) : RVec(k_sparse_ * x);
}

Vec KoopmanLiouvillian::apply_generator(const Vec& x) const {
  Vec out(x.size());
  if (is_dense_) {
    out.real() = k_dense_ * x.real();
    out.imag() = k_dense_ * x.imag();
  } else {
    out.real() = k_sparse_ * x.real();
    out.imag() = k_sparse_ * x.imag();
  }
  return out;
}

Vec KoopmanLiouvillian::apply(const Vec& x) const {
  return Complex(0, -1) * apply_generator(x);
}

Mat KoopmanLiouvillian::dense_matrix() const {
  RMat k = is_dense_ ? k_dense_ : RMat(k_sparse_);
  return Complex(0, -1) * k.cast<Complex>();
}

const HermitianEig& KoopmanLiouvillian::eigensystem() const {
  std::lock_guard<std::mutex> lock(cache_->mutex);
  if (!cache_->eig)
    cache_->eig = std::make_shared<const HermitianEig>(hermitian_eig(dense_matrix()));
  return *cache_->eig;
}

KoopmanLiouvillian build_liouvillian(const HamiltonianField& field,
                                     const PhaseSpaceGrid& grid, DiffScheme scheme) {
  return KoopmanLiouvillian(field, grid, scheme);
}

Vec koopman_propagate(const Vec& psi, const KoopmanLiouvillian& liouvillian, double t,
                      const PropagateOptions& options) {
  if (psi.size() != liouvillian.size()) throw ValidationError("koopman_propagate: size mismatch");
  if (t == 0.0) return psi;
  if (liouvillian.size() <= options.dense_threshold) {
    const auto& e = liouvillian.eigensystem();
    Vec y = e.eigenvectors.adjoint() * psi;
    for (Eigen::Index i = 0; i < y.size(); ++i)
      y(i) *= std::exp(Complex(0, -e.eigenvalues(i) * t));
    return e.eigenvectors * y;
  }
  return expm_multiply_hermitian(
      [&](const Vec& v) { return liouvillian.apply(v); }, t, psi, options.lanczos_tol);
}

Mat classical_gns_dm(const ClassicalDensity& density, const PhaseSpaceGrid& grid) {
  if (density.values.size() != grid.size())
    throw ValidationError("classical_gns_dm: size mismatch");
  if (density.values.minCoeff() < 0.0)
    throw ValidationError("classical_gns_dm: negative density entries");
  RVec phi(density.values.size());
  for (Eigen::Index i = 0; i < phi.size(); ++i)
    phi(i) = std::sqrt(grid.cell_weight() * density.values(i));
  RMat dm = phi * phi.transpose();
  return dm.cast<Complex>();
}

MultiplicativeReport check_multiplicative(const Mat& op, double tol) {
  if (op.rows() != op.cols()) throw ValidationError("check_multiplicative: not square");
  double total = op.norm();
  double diag = op.diagonal().norm();
  double off = std::sqrt(std::max(0.0, total * total - diag * diag));
  double ratio = total > 0 ? off / total : 0.0;
  return MultiplicativeReport{ratio <= tol, ratio};
}

WeakMultiplicativeReport weak_multiplicative_fit(
    const std::function<Vec(const Vec&)>& op, const Mat& probes) {
  const int n = static_cast<int>(probes.rows());
  const int s = static_cast<int>(probes.cols());
  Mat images(n, s);
  for (int j = 0; j < s; ++j) images.col(j) = op(probes.col(j));
  // per-point least squares for the shared multiplier g
  Vec g(n);
  for (int i = 0; i < n; ++i) {
    Complex num = 0;
    double den = 0;
    for (int j = 0; j < s; ++j) {
      num += std::conj(probes(i, j)) * images(i, j);
      den += std::norm(probes(i, j));
    }
    g(i) = den > 1e-300 ? num / den : Complex(0, 0);
  }
  double res2 = 0;
  for (int j = 0; j < s; ++j)
    res2 += (images.col(j) - g.cwiseProduct(probes.col(j))).squaredNorm();
  double pn = probes.norm();
  return WeakMultiplicativeReport{std::sqrt(res2) / (pn > 0 ? pn : 1.0), std::move(g)};
}

double weak_multiplicative_residual_vs(const std::function<Vec(const Vec&)>& op,
                                       const Mat& probes, const Vec& multiplier) {
  double res2 = 0;
  for (int j = 0; j < probes.cols(); ++j) {
    Vec im = op(probes.col(j));
    res2 += (im - multiplier.cwiseProduct(Vec(probes.col(j)))).squaredNorm();
  }
  double pn = probes.norm();
  return std::sqrt(res2) / (pn > 0 ? pn : 1.0);
}

Mat bandlimited_probes(const PhaseSpaceGrid& grid) {
  const double lq = grid.q_max() - grid.q_min();
  const double lp = grid.p_max() - grid.p_min();
  const double cq = 0.5 * (grid.q_min() + grid.q_max());
  const double cp = 0.5 * (grid.p_min() + grid.p_max());
  const double sq = lq / 8.0, sp = lp / 8.0;
  const double kq = 2 * M_PI / lq, kp = 2 * M_PI / lp;
  // carrier wavenumbers in units of the box-commensurate fundamental
  const int carriers[][2] = {{0, 0}, {1, 0}, {0, 1}, {1, 1}, {-1, 1}, {2, -1}, {-1, -2}};
  const int count = sizeof(carriers) / sizeof(carriers[0]);
  Mat probes(grid.size(), count);
  for (int c = 0; c < count; ++c) {
    Vec col = grid.sample_complex([&](double q, double p) {
      double envelope = std::exp(-0.5 * ((q - cq) * (q - cq) / (sq * sq) +
                                         (p - cp) * (p - cp) / (sp * sp)));
      double phase = carriers[c][0] * kq * q + carriers[c][1] * kp * p;
      return envelope * std::exp(Complex(0, phase));
    });
    probes.col(c) = col / col.norm();
  }
  return probes;
}

}  // namespace hyko
