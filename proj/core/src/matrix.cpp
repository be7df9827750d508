#include "bitvar/matrix.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "bitvar/error.hpp"

namespace bitvar {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kSingularMatrix: return "SingularMatrix";
    case ErrorCode::kNotSymmetric: return "NotSymmetric";
    case ErrorCode::kNoConvergence: return "NoConvergence";
    case ErrorCode::kNotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorCode::kNotStationary: return "NotStationary";
    case ErrorCode::kDomainError: return "DomainError";
    case ErrorCode::kGenerationTimeout: return "GenerationTimeout";
    case ErrorCode::kZeroThreshold: return "ZeroThreshold";
    case ErrorCode::kSingularSystem: return "SingularSystem";
    case ErrorCode::kMissingEdge: return "MissingEdge";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kConfigError: return "ConfigError";
    case ErrorCode::kIoError: return "IoError";
  }
  return "Unknown";
}

namespace {

void require_same_shape(const Matrix& a, const Matrix& b, const char* op) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw Error(ErrorCode::kInvalidArgument,
                std::string(op) + ": shape mismatch");
  }
}

// In-place LU with partial pivoting; returns the row permutation.
std::vector<std::size_t> lu_factor(Matrix& lu, double pivot_tol) {
  const std::size_t n = lu.rows();
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    double best = std::abs(lu(k, k));
    for (std::size_t i = k + 1; i < n; ++i) {
      if (std::abs(lu(i, k)) > best) {
        best = std::abs(lu(i, k));
        p = i;
      }
    }
    if (!(best >= pivot_tol)) {
      throw Error(ErrorCode::kSingularMatrix,
                  "pivot " + std::to_string(best) + " at column " +
                      std::to_string(k));
    }
    if (p != k) {
      std::swap_ranges(lu.row(k).begin(), lu.row(k).end(), lu.row(p).begin());
      std::swap(perm[k], perm[p]);
    }
    const double piv = lu(k, k);
    for (std::size_t i = k + 1; i < n; ++i) {
      const double f = lu(i, k) / piv;
      lu(i, k) = f;
      if (f == 0.0) continue;
      for (std::size_t j = k + 1; j < n; ++j) lu(i, j) -= f * lu(k, j);
    }
  }
  return perm;
}

Matrix lu_solve(const Matrix& lu, const std::vector<std::size_t>& perm,
                const Matrix& b) {
  const std::size_t n = lu.rows();
  const std::size_t m = b.cols();
  Matrix x(n, m);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t c = 0; c < m; ++c) x(i, c) = b(perm[i], c);
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < i; ++k) {
      const double f = lu(i, k);
      if (f == 0.0) continue;
      for (std::size_t c = 0; c < m; ++c) x(i, c) -= f * x(k, c);
    }
  }
  for (std::size_t ii = n; ii-- > 0;) {
    for (std::size_t k = ii + 1; k < n; ++k) {
      const double f = lu(ii, k);
      if (f == 0.0) continue;
      for (std::size_t c = 0; c < m; ++c) x(ii, c) -= f * x(k, c);
    }
    const double piv = lu(ii, ii);
    for (std::size_t c = 0; c < m; ++c) x(ii, c) /= piv;
  }
  return x;
}

double one_norm(const Matrix& a) {
  double best = 0.0;
  for (std::size_t j = 0; j < a.cols(); ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i) s += std::abs(a(i, j));
    best = std::max(best, s);
  }
  return best;
}

}  // namespace

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) {
      throw Error(ErrorCode::kInvalidArgument, "ragged matrix literal");
    }
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::diagonal(std::span<const double> diag) {
  Matrix m(diag.size(), diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
  return m;
}

Matrix Matrix::transpose() const {
  Matrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  }
  return t;
}

Matrix Matrix::block(std::size_t r0, std::size_t c0, std::size_t nr,
                     std::size_t nc) const {
  if (r0 + nr > rows_ || c0 + nc > cols_) {
    throw Error(ErrorCode::kInvalidArgument, "block out of range");
  }
  Matrix b(nr, nc);
  for (std::size_t i = 0; i < nr; ++i) {
    for (std::size_t j = 0; j < nc; ++j) b(i, j) = (*this)(r0 + i, c0 + j);
  }
  return b;
}

void Matrix::set_block(std::size_t r0, std::size_t c0, const Matrix& b) {
  if (r0 + b.rows() > rows_ || c0 + b.cols() > cols_) {
    throw Error(ErrorCode::kInvalidArgument, "set_block out of range");
  }
  for (std::size_t i = 0; i < b.rows(); ++i) {
    for (std::size_t j = 0; j < b.cols(); ++j) (*this)(r0 + i, c0 + j) = b(i, j);
  }
}

double Matrix::trace() const {
  double t = 0.0;
  for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
  return t;
}

double Matrix::max_abs() const noexcept {
  double m = 0.0;
  for (double v : data_) m = std::max(m, std::abs(v));
  return m;
}

double Matrix::frobenius() const noexcept {
  double s = 0.0;
  for (double v : data_) s += v * v;
  return std::sqrt(s);
}

bool Matrix::all_finite() const noexcept {
  return std::all_of(data_.begin(), data_.end(),
                     [](double v) { return std::isfinite(v); });
}

Matrix& Matrix::operator+=(const Matrix& o) {
  require_same_shape(*this, o, "operator+=");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
  return *this;
}

Matrix& Matrix::operator-=(const Matrix& o) {
  require_same_shape(*this, o, "operator-=");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
  return *this;
}

Matrix& Matrix::operator*=(double s) noexcept {
  for (double& v : data_) v *= s;
  return *this;
}

Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
Matrix operator*(Matrix a, double s) { return a *= s; }
Matrix operator*(double s, Matrix a) { return a *= s; }

Matrix operator*(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) {
    throw Error(ErrorCode::kInvalidArgument, "operator*: inner dimension");
  }
  Matrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double f = a(i, k);
      if (f == 0.0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += f * b(k, j);
    }
  }
  return c;
}

Matrix hadamard(const Matrix& a, const Matrix& b) {
  require_same_shape(a, b, "hadamard");
  Matrix c(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = a(i, j) * b(i, j);
  }
  return c;
}

Matrix kronecker(const Matrix& a, const Matrix& b) {
  Matrix k(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const double f = a(i, j);
      for (std::size_t p = 0; p < b.rows(); ++p) {
        for (std::size_t q = 0; q < b.cols(); ++q) {
          k(i * b.rows() + p, j * b.cols() + q) = f * b(p, q);
        }
      }
    }
  }
  return k;
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
  require_same_shape(a, b, "max_abs_diff");
  double m = 0.0;
  for (std::size_t k = 0; k < a.data().size(); ++k) {
    m = std::max(m, std::abs(a.data()[k] - b.data()[k]));
  }
  return m;
}

Matrix solve_linear(const Matrix& a, const Matrix& b, const Tolerances& tol) {
  if (!a.is_square() || b.rows() != a.rows()) {
    throw Error(ErrorCode::kInvalidArgument, "solve_linear: shape mismatch");
  }
  Matrix lu = a;
  const auto perm = lu_factor(lu, tol.pivot);
  return lu_solve(lu, perm, b);
}

Matrix solve_right(const Matrix& a, const Matrix& b, const Tolerances& tol) {
  // X A = B  <=>  A^T X^T = B^T
  return solve_linear(a.transpose(), b.transpose(), tol).transpose();
}

Matrix inverse(const Matrix& a, const Tolerances& tol) {
  return solve_linear(a, Matrix::identity(a.rows()), tol);
}

double condition_number(const Matrix& a, const Tolerances& tol) {
  return one_norm(a) * one_norm(inverse(a, tol));
}

SymmetricEigen sym_eig(const Matrix& s, const Tolerances& tol) {
  if (!s.is_square()) {
    throw Error(ErrorCode::kInvalidArgument, "sym_eig: matrix not square");
  }
  const std::size_t n = s.rows();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (std::abs(s(i, j) - s(j, i)) > tol.symmetry) {
        throw Error(ErrorCode::kNotSymmetric,
                    "asymmetry at (" + std::to_string(i) + "," +
                        std::to_string(j) + ")");
      }
    }
  }

  Matrix a = s;
  Matrix v = Matrix::identity(n);
  const double stop = tol.jacobi_offdiag * std::max(1.0, s.frobenius());

  auto off_norm = [&] {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (i != j) acc += a(i, j) * a(i, j);
      }
    }
    return std::sqrt(acc);
  };

  int sweep = 0;
  while (off_norm() >= stop) {
    if (++sweep > tol.jacobi_max_sweeps) {
      throw Error(ErrorCode::kNoConvergence, "Jacobi sweep cap reached");
    }
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = std::copysign(1.0, theta) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double sn = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - sn * akq;
          a(k, q) = sn * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - sn * aqk;
          a(q, k) = sn * apk + c * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = c * vkp - sn * vkq;
          v(k, q) = sn * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return a(x, x) < a(y, y);
  });
  SymmetricEigen out{std::vector<double>(n), Matrix(n, n)};
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = a(order[k], order[k]);
    for (std::size_t i = 0; i < n; ++i) out.vectors(i, k) = v(i, order[k]);
  }
  return out;
}

Matrix cholesky(const Matrix& s, const Tolerances& tol) {
  if (!s.is_square()) {
    throw Error(ErrorCode::kInvalidArgument, "cholesky: matrix not square");
  }
  const std::size_t n = s.rows();
  Matrix l(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    double d = s(j, j);
    for (std::size_t k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
    if (!(d > tol.cholesky_pivot)) {
      throw Error(ErrorCode::kNotPositiveDefinite,
                  "pivot " + std::to_string(d) + " at " + std::to_string(j));
    }
    const double ljj = std::sqrt(d);
    l(j, j) = ljj;
    for (std::size_t i = j + 1; i < n; ++i) {
      double v = s(i, j);
      for (std::size_t k = 0; k < j; ++k) v -= l(i, k) * l(j, k);
      l(i, j) = v / ljj;
    }
  }
  return l;
}

std::vector<std::complex<double>> eigenvalues(const Matrix& a) {
  if (!a.is_square()) {
    throw Error(ErrorCode::kInvalidArgument, "eigenvalues: matrix not square");
  }
  const auto n = static_cast<Eigen::Index>(a.rows());
  Eigen::MatrixXd m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      m(i, j) = a(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
    }
  }
  Eigen::EigenSolver<Eigen::MatrixXd> solver(m, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::kNoConvergence, "general eigenvalue solver failed");
  }
  const auto& ev = solver.eigenvalues();
  return {ev.data(), ev.data() + ev.size()};
}

double spectral_radius(const Matrix& a) {
  double r = 0.0;
  for (const auto& z : eigenvalues(a)) r = std::max(r, std::abs(z));
  return r;
}

Matrix stationary_covariance(const Matrix& companion, const Matrix& noise_cov,
                             const Tolerances& tol) {
  if (!companion.is_square() || companion.rows() != noise_cov.rows() ||
      !noise_cov.is_square()) {
    throw Error(ErrorCode::kInvalidArgument,
                "stationary_covariance: shape mismatch");
  }
  const double rho = spectral_radius(companion);
  if (!(rho < 1.0 - tol.stationarity_margin)) {
    throw Error(ErrorCode::kNotStationary,
                "spectral radius " + std::to_string(rho));
  }
  const std::size_t n = companion.rows();
  // Row-major vec: vec(F P F^T) = (F (x) F) vec(P).
  Matrix system = Matrix::identity(n * n) - kronecker(companion, companion);
  Matrix rhs(n * n, 1);
  for (std::size_t k = 0; k < n * n; ++k) rhs(k, 0) = noise_cov.data()[k];
  const Matrix x = solve_linear(system, rhs, tol);
  Matrix p(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      // Symmetrize away round-off.
      p(i, j) = 0.5 * (x(i * n + j, 0) + x(j * n + i, 0));
    }
  }
  return p;
}

}  // namespace bitvar
