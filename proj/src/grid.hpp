#pragma once

#include "common.hpp"

namespace hyko {

enum class Boundary { periodic, zero };

// Uniform Darboux-coordinate grid on [q_min,q_max] x [p_min,p_max].
// Periodic grids exclude the duplicate endpoint, so dq = (q_max-q_min)/n_q;
// zero-boundary grids include both endpoints, dq = (q_max-q_min)/(n_q-1).
// Points are enumerated row-major: index = iq * n_p + ip.
class PhaseSpaceGrid {
 public:
  PhaseSpaceGrid(double q_min, double q_max, double p_min, double p_max,
                 int n_q, int n_p, Boundary boundary);

  double q_min() const { return q_min_; }
  double q_max() const { return q_max_; }
  double p_min() const { return p_min_; }
  double p_max() const { return p_max_; }
  int n_q() const { return n_q_; }
  int n_p() const { return n_p_; }
  Boundary boundary() const { return boundary_; }

  double dq() const { return dq_; }
  double dp() const { return dp_; }
  double cell_weight() const { return dq_ * dp_; }  // the measure weight dOmega
  int size() const { return n_q_ * n_p_; }

  double q(int iq) const { return q_min_ + iq * dq_; }
  double p(int ip) const { return p_min_ + ip * dp_; }
  int index(int iq, int ip) const { return iq * n_p_ + ip; }
  int iq_of(int idx) const { return idx / n_p_; }
  int ip_of(int idx) const { return idx % n_p_; }
  double q_of(int idx) const { return q(iq_of(idx)); }
  double p_of(int idx) const { return p(ip_of(idx)); }

  // Samples a scalar function of (q,p) on all grid points.
  template <typename F>
  RVec sample(F&& f) const {
    RVec v(size());
    for (int i = 0; i < size(); ++i) v(i) = f(q_of(i), p_of(i));
    return v;
  }
  template <typename F>
  Vec sample_complex(F&& f) const {
    Vec v(size());
    for (int i = 0; i < size(); ++i) v(i) = f(q_of(i), p_of(i));
    return v;
  }

  // Bilinear interpolation of grid values at an off-grid point. Periodic
  // grids wrap; zero-boundary grids treat the exterior as 0.
  double interpolate(const RVec& values, double q, double p) const;

  bool same_shape(const PhaseSpaceGrid& other) const {
    return n_q_ == other.n_q_ && n_p_ == other.n_p_;
  }

 private:
  double q_min_, q_max_, p_min_, p_max_;
  int n_q_, n_p_;
  Boundary boundary_;
  double dq_, dp_;
};

PhaseSpaceGrid build_grid(double q_min, double q_max, double p_min, double p_max,
                          int n_q, int n_p, Boundary boundary);

// Probability density on the grid: nonnegative values with
// cell_weight * sum == 1.
struct ClassicalDensity {
  RVec values;

  // Validates nonnegativity and unit mass (tolerance 1e-10).
  static ClassicalDensity checked(RVec values, const PhaseSpaceGrid& grid);
  // Clips tiny negatives and rescales to unit mass.
  static ClassicalDensity normalized(RVec values, const PhaseSpaceGrid& grid);
};

// alpha = dH/dp, beta = -dH/dq: the coefficient fields of the classical
// generator, by central differences in the grid's boundary mode.
struct HamiltonianField {
  RVec energy;  // H(q,p) on the grid
  RVec alpha;
  RVec beta;
};

HamiltonianField hamiltonian_field(const RVec& energy, const PhaseSpaceGrid& grid);

// cell_weight * sum(f): the discrete integral over phase space.
double riemann_integral(const RVec& f, const PhaseSpaceGrid& grid);
Complex riemann_integral(const Vec& f, const PhaseSpaceGrid& grid);

// psi = sqrt(rho), real nonnegative branch; cell_weight * sum |psi|^2 = 1.
Vec density_to_wavefunction(const ClassicalDensity& rho, const PhaseSpaceGrid& grid);

// rho = |psi|^2, renormalized. Requires the input norm to be within 1e-8 of 1.
ClassicalDensity wavefunction_to_density(const Vec& psi, const PhaseSpaceGrid& grid);

}  // namespace hyko
