#pragma once

#include <random>

#include "common.hpp"
#include "linalg.hpp"

namespace hyko {

// Structured report of how far a matrix is from being a density matrix.
struct DensityMatrixCheck {
  bool ok = false;
  double hermiticity_error = 0.0;  // max |M - M^dagger|
  double min_eigenvalue = 0.0;
  double trace_error = 0.0;  // |Tr M - 1|
  std::string violation;     // empty when ok
};

DensityMatrixCheck check_density_matrix(const Mat& m, double herm_tol = 1e-10,
                                        double eig_tol = 1e-10, double trace_tol = 1e-10);

// Returns the matrix unchanged if it is a valid state; throws ValidationError
// carrying the violation report otherwise.
Mat validate_density_matrix(const Mat& m, double herm_tol = 1e-10, double eig_tol = 1e-10,
                            double trace_tol = 1e-10);

// -Tr(rho log rho), natural log, 0 log 0 = 0. Eigenvalues are clipped at
// 1e-14 before the log to absorb roundoff; *clipped (when non-null) reports
// the total clipped magnitude.
double von_neumann_entropy(const Mat& rho, double* clipped = nullptr);
double entropy_from_eigenvalues(const RVec& eigenvalues, double* clipped = nullptr);

double purity(const Mat& rho);

Mat commutator(const Mat& a, const Mat& b);
Mat anticommutator(const Mat& a, const Mat& b);

double hermiticity_error(const Mat& m);

Mat pauli_x();
Mat pauli_y();
Mat pauli_z();

// Seeded generators used by tests and by the reproducible probe sets.
Mat random_matrix(int d, std::mt19937_64& rng);           // Ginibre
Mat random_hermitian(int d, std::mt19937_64& rng);
Mat random_unitary(int d, std::mt19937_64& rng);          // Haar via QR
Mat random_density_matrix(int d, std::mt19937_64& rng);   // GG^dagger normalized

}  // namespace hyko
