#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace bitvar {

/// Numerical thresholds used by the dense linear algebra routines.
struct Tolerances {
  double pivot = 1e-12;             // LU pivot magnitude below which A is singular
  double symmetry = 1e-10;          // max |S_ij - S_ji| accepted by sym_eig
  double jacobi_offdiag = 1e-12;    // relative off-diagonal Frobenius stop
  int jacobi_max_sweeps = 100;
  double cholesky_pivot = 1e-12;
  double stationarity_margin = 1e-9;  // spectral radius must be < 1 - margin
};

inline constexpr Tolerances kTolerances{};

/// Dense row-major real matrix.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  Matrix(std::initializer_list<std::initializer_list<double>> rows);

  static Matrix identity(std::size_t n);
  static Matrix diagonal(std::span<const double> diag);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool is_square() const noexcept { return rows_ == cols_; }
  bool empty() const noexcept { return data_.empty(); }

  double& operator()(std::size_t i, std::size_t j) noexcept {
    return data_[i * cols_ + j];
  }
  double operator()(std::size_t i, std::size_t j) const noexcept {
    return data_[i * cols_ + j];
  }

  std::span<double> row(std::size_t i) noexcept {
    return {data_.data() + i * cols_, cols_};
  }
  std::span<const double> row(std::size_t i) const noexcept {
    return {data_.data() + i * cols_, cols_};
  }
  std::span<const double> data() const noexcept { return data_; }
  std::span<double> data() noexcept { return data_; }

  Matrix transpose() const;
  Matrix block(std::size_t r0, std::size_t c0, std::size_t nr,
               std::size_t nc) const;
  void set_block(std::size_t r0, std::size_t c0, const Matrix& b);

  double trace() const;
  /// max_ij |a_ij|
  double max_abs() const noexcept;
  double frobenius() const noexcept;
  bool all_finite() const noexcept;

  Matrix& operator+=(const Matrix& o);
  Matrix& operator-=(const Matrix& o);
  Matrix& operator*=(double s) noexcept;

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

Matrix operator+(Matrix a, const Matrix& b);
Matrix operator-(Matrix a, const Matrix& b);
Matrix operator*(const Matrix& a, const Matrix& b);
Matrix operator*(Matrix a, double s);
Matrix operator*(double s, Matrix a);

/// Elementwise product.
Matrix hadamard(const Matrix& a, const Matrix& b);
Matrix kronecker(const Matrix& a, const Matrix& b);

/// max |a_ij - b_ij|; matrices must share a shape.
double max_abs_diff(const Matrix& a, const Matrix& b);

/// X with A X = B, partial-pivoting LU. Throws kSingularMatrix.
Matrix solve_linear(const Matrix& a, const Matrix& b,
                    const Tolerances& tol = kTolerances);

/// X with X A = B.
Matrix solve_right(const Matrix& a, const Matrix& b,
                   const Tolerances& tol = kTolerances);

Matrix inverse(const Matrix& a, const Tolerances& tol = kTolerances);

/// 1-norm condition number computed from an explicit inverse.
double condition_number(const Matrix& a, const Tolerances& tol = kTolerances);

struct SymmetricEigen {
  std::vector<double> values;  // ascending
  Matrix vectors;              // column k pairs with values[k]
};

/// Cyclic Jacobi eigendecomposition of a symmetric matrix.
SymmetricEigen sym_eig(const Matrix& s, const Tolerances& tol = kTolerances);

/// Lower-triangular L with L L^T = S.
Matrix cholesky(const Matrix& s, const Tolerances& tol = kTolerances);

/// Eigenvalues of a general real square matrix.
std::vector<std::complex<double>> eigenvalues(const Matrix& a);
double spectral_radius(const Matrix& a);

/// P = F P F^T + Q for a stable F, solved through the Kronecker system
/// (I - F (x) F) vec(P) = vec(Q).
Matrix stationary_covariance(const Matrix& companion, const Matrix& noise_cov,
                             const Tolerances& tol = kTolerances);

}  // namespace bitvar
