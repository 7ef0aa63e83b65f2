#pragma once

#include "common.hpp"
#include "grid.hpp"

namespace hyko {

enum class DiffScheme { stencil2, stencil4, spectral };

// One-dimensional differentiation matrix on n points with spacing delta.
// All variants are exactly antisymmetric (D^T = -D): centered stencils with
// periodic wrap or zero padding, and the even-n Fourier differentiation
// matrix for the spectral scheme (periodic only).
SpRMat derivative_1d(int n, double delta, int order, Boundary boundary);
RMat spectral_derivative_1d(int n, double delta);

// 2D operators on the row-major grid: d/dq = D1 (x) I, d/dp = I (x) D1.
SpRMat derivative_q(const PhaseSpaceGrid& grid, int order);
SpRMat derivative_p(const PhaseSpaceGrid& grid, int order);
RMat spectral_derivative_q(const PhaseSpaceGrid& grid);
RMat spectral_derivative_p(const PhaseSpaceGrid& grid);

}  // namespace hyko
