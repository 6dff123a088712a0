#include "ici/linalg.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include "ici/errors.h"

namespace ici {

bool all_finite(const Matrix& m) { return m.allFinite(); }
bool all_finite(const Vector& v) { return v.allFinite(); }

void require_square(const Matrix& m, const char* what) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw DimensionError(std::string(what) + ": expected a non-empty square matrix, got " +
                         std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  }
  if (!m.allFinite()) {
    throw InvalidArgument(std::string(what) + ": matrix has non-finite entries");
  }
}

namespace {

// Numerator coefficients of the (13,13) Pade approximant to exp.
constexpr std::array<double, 14> kPade13 = {
    64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
    1187353796428800.0,  129060195264000.0,   10559470521600.0,
    670442572800.0,      33522128640.0,       1323241920.0,
    40840800.0,          960960.0,            16380.0,
    182.0,               1.0};

// Scaled so the constant term is 1; exp(0) then comes out as I exactly.
constexpr std::array<double, 14> normalised_pade13() {
  std::array<double, 14> out{};
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = kPade13[i] / kPade13[0];
  return out;
}

constexpr std::array<double, 14> kPade13Unit = normalised_pade13();

constexpr double kScaledNormTarget = 0.5;

}  // namespace

Matrix mat_exp(const Matrix& m) {
  require_square(m, "mat_exp");
  const auto n = m.rows();
  const double norm1 = m.cwiseAbs().colwise().sum().maxCoeff();

  int squarings = 0;
  if (norm1 > kScaledNormTarget) {
    squarings = static_cast<int>(std::ceil(std::log2(norm1 / kScaledNormTarget)));
  }
  const Matrix a = std::ldexp(1.0, -squarings) * m;
  const Matrix id = Matrix::Identity(n, n);
  const Matrix a2 = a * a;
  const Matrix a4 = a2 * a2;
  const Matrix a6 = a4 * a2;
  const auto& b = kPade13Unit;

  const Matrix u_inner = a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2) + b[7] * a6 +
                         b[5] * a4 + b[3] * a2 + b[1] * id;
  const Matrix u = a * u_inner;
  const Matrix v = a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2) + b[6] * a6 + b[4] * a4 +
                   b[2] * a2 + b[0] * id;

  Matrix r = (v - u).partialPivLu().solve(v + u);
  for (int i = 0; i < squarings; ++i) {
    r = r * r;
  }
  return r;
}

Spectrum spectrum(const Matrix& m, const Tolerances& tol) {
  require_square(m, "spectrum");
  const auto n = m.rows();
  const auto cap = static_cast<Eigen::Index>(std::max(1.0, tol.qr_sweeps_per_row) * n);

  Eigen::EigenSolver<Matrix> solver;
  solver.setMaxIterations(cap);
  solver.compute(m, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) {
    throw ConvergenceFailure("spectrum: QR iteration did not converge within " +
                                 std::to_string(cap) + " sweeps",
                             static_cast<std::size_t>(cap));
  }
  Spectrum out;
  out.eigenvalues.reserve(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    out.eigenvalues.push_back(solver.eigenvalues()(i));
  }
  return out;
}

double spectral_radius(const Matrix& m, const Tolerances& tol) {
  double r = 0.0;
  for (const auto& z : spectrum(m, tol).eigenvalues) r = std::max(r, std::abs(z));
  return r;
}

double spectral_abscissa(const Matrix& m, const Tolerances& tol) {
  double a = -std::numeric_limits<double>::infinity();
  for (const auto& z : spectrum(m, tol).eigenvalues) a = std::max(a, z.real());
  return a;
}

double operator_norm_2(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  if (!m.allFinite()) throw InvalidArgument("operator_norm_2: non-finite entries");
  // M^T M is symmetric positive semi-definite; its largest eigenvalue is rho.
  Eigen::SelfAdjointEigenSolver<Matrix> solver(m.transpose() * m, Eigen::EigenvaluesOnly);
  return std::sqrt(std::max(0.0, solver.eigenvalues().maxCoeff()));
}

double determinant(const Matrix& m) {
  require_square(m, "determinant");
  return m.partialPivLu().determinant();
}

Vector solve(const Matrix& m, const Vector& rhs, const Tolerances& tol) {
  require_square(m, "solve");
  if (rhs.size() != m.rows()) {
    throw DimensionError("solve: right-hand side has length " + std::to_string(rhs.size()) +
                         ", expected " + std::to_string(m.rows()));
  }
  const Eigen::PartialPivLU<Matrix> lu(m);
  const double scale = m.cwiseAbs().maxCoeff();
  const auto pivots = lu.matrixLU().diagonal().cwiseAbs();
  Eigen::Index where = 0;
  const double smallest = pivots.minCoeff(&where);
  if (scale == 0.0 || smallest <= tol.pivot * scale) {
    throw SingularMatrixError("solve: matrix is singular (pivot " + std::to_string(where) +
                                  " has magnitude " + std::to_string(smallest) + ")",
                              smallest);
  }
  return lu.solve(rhs);
}

Matrix commutator(const Matrix& x, const Matrix& y) {
  require_square(x, "commutator");
  require_square(y, "commutator");
  if (x.rows() != y.rows()) {
    throw DimensionError("commutator: operands have different dimensions");
  }
  return x * y - y * x;
}

}  // namespace ici
