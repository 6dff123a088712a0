#pragma once

// Dense small-matrix numerics used by every analysis in the library.

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "ici/tolerances.h"

namespace ici {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Eigenvalues of a real square matrix, conjugate pairs adjacent.
struct Spectrum {
  std::vector<std::complex<double>> eigenvalues;

  std::size_t size() const { return eigenvalues.size(); }
};

bool all_finite(const Matrix& m);
bool all_finite(const Vector& v);

/// Throws DimensionError unless `m` is square (and InvalidArgument if it holds
/// NaN/Inf). `what` names the operand in the message.
void require_square(const Matrix& m, const char* what);

/// Matrix exponential by scaling and squaring with a (13,13) Pade
/// approximant. The scaling exponent s is the smallest with |M / 2^s|_1 <= 0.5,
/// so the approximant is evaluated far inside its convergence region.
Matrix mat_exp(const Matrix& m);

/// All eigenvalues via Hessenberg reduction and Francis double-shift QR.
/// Throws ConvergenceFailure when the sweep cap (qr_sweeps_per_row * n) is hit.
Spectrum spectrum(const Matrix& m, const Tolerances& tol = {});

double spectral_radius(const Matrix& m, const Tolerances& tol = {});
double spectral_abscissa(const Matrix& m, const Tolerances& tol = {});

/// Induced 2-norm, sqrt(rho(M^T M)).
double operator_norm_2(const Matrix& m);

double determinant(const Matrix& m);

/// Solves M x = rhs by LU with partial pivoting. Throws SingularMatrixError
/// carrying the offending pivot magnitude.
Vector solve(const Matrix& m, const Vector& rhs, const Tolerances& tol = {});

/// [X, Y] = XY - YX.
Matrix commutator(const Matrix& x, const Matrix& y);

}  // namespace ici
