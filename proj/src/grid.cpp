#include "grid.hpp"

#include <cmath>

#include "stencil.hpp"

namespace hyko {

PhaseSpaceGrid::PhaseSpaceGrid(double q_min, double q_max, double p_min, double p_max,
                               int n_q, int n_p, Boundary boundary)
    : q_min_(q_min), q_max_(q_max), p_min_(p_min), p_max_(p_max),
      n_q_(n_q), n_p_(n_p), boundary_(boundary) {
  if (!(std::isfinite(q_min) && std::isfinite(q_max) && std::isfinite(p_min) &&
        std::isfinite(p_max)))
    throw ConfigError("grid bounds must be finite", "grid");
  if (!(q_max > q_min)) throw ConfigError("q_max must exceed q_min", "grid.q_max");
  if (!(p_max > p_min)) throw ConfigError("p_max must exceed p_min", "grid.p_max");
  if (n_q < 4) throw ConfigError("n_q must be at least 4", "grid.n_q");
  if (n_p < 4) throw ConfigError("n_p must be at least 4", "grid.n_p");
  if (boundary == Boundary::periodic) {
    dq_ = (q_max - q_min) / n_q;
    dp_ = (p_max - p_min) / n_p;
  } else {
    dq_ = (q_max - q_min) / (n_q - 1);
    dp_ = (p_max - p_min) / (n_p - 1);
  }
}

PhaseSpaceGrid build_grid(double q_min, double q_max, double p_min, double p_max,
                          int n_q, int n_p, Boundary boundary) {
  return PhaseSpaceGrid(q_min, q_max, p_min, p_max, n_q, n_p, boundary);
}

double PhaseSpaceGrid::interpolate(const RVec& values, double q, double p) const {
  if (values.size() != size()) throw ValidationError("interpolate: size mismatch");
  double fq = (q - q_min_) / dq_;
  double fp = (p - p_min_) / dp_;
  auto cell_value = [&](int iq, int ip) -> double {
    if (boundary_ == Boundary::periodic) {
      iq = ((iq % n_q_) + n_q_) % n_q_;
      ip = ((ip % n_p_) + n_p_) % n_p_;
    } else {
      if (iq < 0 || iq >= n_q_ || ip < 0 || ip >= n_p_) return 0.0;
    }
    return values(index(iq, ip));
  };
  int iq0 = static_cast<int>(std::floor(fq));
  int ip0 = static_cast<int>(std::floor(fp));
  double wq = fq - iq0, wp = fp - ip0;
  return (1 - wq) * (1 - wp) * cell_value(iq0, ip0) +
         wq * (1 - wp) * cell_value(iq0 + 1, ip0) +
         (1 - wq) * wp * cell_value(iq0, ip0 + 1) +
         wq * wp * cell_value(iq0 + 1, ip0 + 1);
}

ClassicalDensity ClassicalDensity::checked(RVec values, const PhaseSpaceGrid& grid) {
  if (values.size() != grid.size()) throw ValidationError("density: size mismatch");
  if (values.minCoeff() < 0.0)
    throw ValidationError("density has negative entries (min " +
                          std::to_string(values.minCoeff()) + ")");
  double mass = grid.cell_weight() * values.sum();
  if (std::abs(mass - 1.0) > 1e-10)
    throw ValidationError("density mass " + std::to_string(mass) + " is not 1");
  return ClassicalDensity{std::move(values)};
}

ClassicalDensity ClassicalDensity::normalized(RVec values, const PhaseSpaceGrid& grid) {
  if (values.size() != grid.size()) throw ValidationError("density: size mismatch");
  double min = values.minCoeff();
  double max = values.maxCoeff();
  if (min < -1e-12 * std::max(1.0, max))
    throw ValidationError("density has negative entries (min " + std::to_string(min) + ")");
  values = values.cwiseMax(0.0);
  double mass = grid.cell_weight() * values.sum();
  if (!(mass > 0.0)) throw ValidationError("density has zero mass");
  values /= mass;
  return ClassicalDensity{std::move(values)};
}

HamiltonianField hamiltonian_field(const RVec& energy, const PhaseSpaceGrid& grid) {
  if (energy.size() != grid.size()) throw ValidationError("hamiltonian_field: size mismatch");
  SpRMat dq = derivative_q(grid, 2);
  SpRMat dp = derivative_p(grid, 2);
  HamiltonianField f;
  f.energy = energy;
  f.alpha = dp * energy;
  f.beta = -(dq * energy);
  return f;
}

double riemann_integral(const RVec& f, const PhaseSpaceGrid& grid) {
  if (f.size() != grid.size()) throw ValidationError("riemann_integral: size mismatch");
  return grid.cell_weight() * f.sum();
}

Complex riemann_integral(const Vec& f, const PhaseSpaceGrid& grid) {
  if (f.size() != grid.size()) throw ValidationError("riemann_integral: size mismatch");
  return grid.cell_weight() * f.sum();
}

Vec density_to_wavefunction(const ClassicalDensity& rho, const PhaseSpaceGrid& grid) {
  if (rho.values.size() != grid.size())
    throw ValidationError("density_to_wavefunction: size mismatch");
  if (rho.values.minCoeff() < 0.0)
    throw ValidationError("density_to_wavefunction: negative entries");
  Vec psi(rho.values.size());
  for (Eigen::Index i = 0; i < psi.size(); ++i) psi(i) = std::sqrt(rho.values(i));
  return psi;
}

ClassicalDensity wavefunction_to_density(const Vec& psi, const PhaseSpaceGrid& grid) {
  if (psi.size() != grid.size()) throw ValidationError("wavefunction_to_density: size mismatch");
  RVec sq = psi.cwiseAbs2();
  double mass = grid.cell_weight() * sq.sum();
  if (!(mass > 0.0)) throw ValidationError("wavefunction has zero norm");
  if (std::abs(mass - 1.0) > 1e-8)
    throw ValidationError("wavefunction norm^2 " + std::to_string(mass) + " is not 1");
  sq /= mass;
  return ClassicalDensity{std::move(sq)};
}

}  // namespace hyko
