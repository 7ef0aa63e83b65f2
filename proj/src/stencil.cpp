#include "stencil.hpp"

#include <cmath>
#include <vector>

namespace hyko {

SpRMat derivative_1d(int n, double delta, int order, Boundary boundary) {
  if (order != 2 && order != 4) throw ConfigError("stencil order must be 2 or 4");
  if (order == 4 && boundary != Boundary::periodic)
    throw ConfigError("order-4 stencil requires a periodic boundary");
  std::vector<Eigen::Triplet<double>> trip;
  auto add = [&](int i, int off, double coef) {
    int j = i + off;
    if (boundary == Boundary::periodic) {
      j = ((j % n) + n) % n;
    } else if (j < 0 || j >= n) {
      return;  // zero padding
    }
    trip.emplace_back(i, j, coef);
  };
  for (int i = 0; i < n; ++i) {
    if (order == 2) {
      add(i, +1, 1.0 / (2 * delta));
      add(i, -1, -1.0 / (2 * delta));
    } else {
      add(i, +2, -1.0 / (12 * delta));
      add(i, +1, 8.0 / (12 * delta));
      add(i, -1, -8.0 / (12 * delta));
      add(i, -2, 1.0 / (12 * delta));
    }
  }
  SpRMat d(n, n);
  d.setFromTriplets(trip.begin(), trip.end());
  return d;
}

RMat spectral_derivative_1d(int n, double delta) {
  if (n % 2 != 0) throw ConfigError("spectral differentiation requires even n");
  // Fourier differentiation matrix for even n on a period n*delta.
  const double scale = M_PI / (n * delta);  // (2*pi/period) * (1/2) pre-factor folded below
  RMat d = RMat::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      int k = i - j;
      double sign = (k % 2 == 0) ? 1.0 : -1.0;
      d(i, j) = scale * sign / std::tan(M_PI * k / n);
    }
  return d;
}

namespace {

SpRMat kron_sparse(const SpRMat& a, int na, const SpRMat& b, int nb) {
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<size_t>(a.nonZeros()) * b.nonZeros());
  for (int ka = 0; ka < a.outerSize(); ++ka)
    for (SpRMat::InnerIterator ita(a, ka); ita; ++ita)
      for (int kb = 0; kb < b.outerSize(); ++kb)
        for (SpRMat::InnerIterator itb(b, kb); itb; ++itb)
          trip.emplace_back(ita.row() * nb + itb.row(), ita.col() * nb + itb.col(),
                            ita.value() * itb.value());
  SpRMat out(na * nb, na * nb);
  out.setFromTriplets(trip.begin(), trip.end());
  return out;
}

SpRMat identity_sparse(int n) {
  SpRMat id(n, n);
  id.setIdentity();
  return id;
}

}  // namespace

SpRMat derivative_q(const PhaseSpaceGrid& grid, int order) {
  SpRMat d1 = derivative_1d(grid.n_q(), grid.dq(), order, grid.boundary());
  return kron_sparse(d1, grid.n_q(), identity_sparse(grid.n_p()), grid.n_p());
}

SpRMat derivative_p(const PhaseSpaceGrid& grid, int order) {
  SpRMat d1 = derivative_1d(grid.n_p(), grid.dp(), order, grid.boundary());
  return kron_sparse(identity_sparse(grid.n_q()), grid.n_q(), d1, grid.n_p());
}

RMat spectral_derivative_q(const PhaseSpaceGrid& grid) {
  if (grid.boundary() != Boundary::periodic)
    throw ConfigError("spectral differentiation requires a periodic grid");
  RMat d1 = spectral_derivative_1d(grid.n_q(), grid.dq());
  RMat out = RMat::Zero(grid.size(), grid.size());
  for (int a = 0; a < grid.n_q(); ++a)
    for (int b = 0; b < grid.n_q(); ++b)
      if (d1(a, b) != 0.0)
        for (int ip = 0; ip < grid.n_p(); ++ip)
          out(a * grid.n_p() + ip, b * grid.n_p() + ip) = d1(a, b);
  return out;
}

RMat spectral_derivative_p(const PhaseSpaceGrid& grid) {
  if (grid.boundary() != Boundary::periodic)
    throw ConfigError("spectral differentiation requires a periodic grid");
  RMat d1 = spectral_derivative_1d(grid.n_p(), grid.dp());
  RMat out = RMat::Zero(grid.size(), grid.size());
  for (int iq = 0; iq < grid.n_q(); ++iq)
    out.block(iq * grid.n_p(), iq * grid.n_p(), grid.n_p(), grid.n_p()) = d1;
  return out;
}

}  // namespace hyko
