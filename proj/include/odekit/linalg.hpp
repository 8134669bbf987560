#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <numeric>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "odekit/errors.hpp"

namespace odekit {

using Vector = std::vector<double>;
using Complex = std::complex<double>;
using ComplexVector = std::vector<Complex>;

namespace detail {

inline double magnitude(double x) { return std::abs(x); }
inline double magnitude(const Complex& x) { return std::abs(x); }

}  // namespace detail

template <typename T>
double norm_inf(std::span<const T> v) {
  double m = 0.0;
  for (const auto& x : v) m = std::max(m, detail::magnitude(x));
  return m;
}

inline double norm_inf(const Vector& v) { return norm_inf(std::span<const double>(v)); }
inline double norm_inf(const ComplexVector& v) { return norm_inf(std::span<const Complex>(v)); }

inline bool all_finite(const Vector& v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

// Dense row-major matrix over double or std::complex<double>.
template <typename T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, T fill = T{})
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {
    if (rows == 0 || cols == 0) throw InvalidArgumentError("matrix dimensions must be positive");
  }
  Matrix(std::initializer_list<std::initializer_list<T>> rows) {
    rows_ = rows.size();
    cols_ = rows_ ? rows.begin()->size() : 0;
    if (rows_ == 0 || cols_ == 0) throw InvalidArgumentError("matrix dimensions must be positive");
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
      if (r.size() != cols_) throw InvalidArgumentError("ragged matrix initializer");
      for (const auto& x : r) {
        if (!std::isfinite(detail::magnitude(x))) throw NonFiniteError("matrix entry is not finite");
        data_.push_back(x);
      }
    }
  }

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T{1};
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<const T> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }
  const std::vector<T>& data() const { return data_; }

  // Max absolute row sum.
  double norm_inf() const {
    double m = 0.0;
    for (std::size_t i = 0; i < rows_; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < cols_; ++j) s += detail::magnitude((*this)(i, j));
      m = std::max(m, s);
    }
    return m;
  }

  double norm_frobenius() const {
    double s = 0.0;
    for (const auto& x : data_) s += detail::magnitude(x) * detail::magnitude(x);
    return std::sqrt(s);
  }

  std::vector<T> operator*(const std::vector<T>& x) const {
    if (x.size() != cols_) throw InvalidArgumentError("matrix-vector size mismatch");
    std::vector<T> y(rows_, T{});
    for (std::size_t i = 0; i < rows_; ++i) {
      T s{};
      for (std::size_t j = 0; j < cols_; ++j) s += (*this)(i, j) * x[j];
      y[i] = s;
    }
    return y;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

using DenseMatrix = Matrix<double>;
using ComplexMatrix = Matrix<Complex>;

inline ComplexMatrix to_complex(const DenseMatrix& a) {
  ComplexMatrix c(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = a(i, j);
  return c;
}

// Solves Ax = b by Gaussian elimination with partial pivoting.
template <typename T>
std::vector<T> lu_solve(Matrix<T> a, std::vector<T> b) {
  if (!a.square()) throw InvalidArgumentError("lu_solve needs a square matrix");
  const std::size_t n = a.rows();
  if (b.size() != n) throw InvalidArgumentError("lu_solve right-hand side has wrong length");
  const double scale = a.norm_inf();
  const double pivot_floor = 1e-14 * scale;
  if (scale == 0.0) throw SingularMatrixError("zero matrix");

  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    double best = detail::magnitude(a(k, k));
    for (std::size_t i = k + 1; i < n; ++i) {
      const double v = detail::magnitude(a(i, k));
      if (v > best) {
        best = v;
        p = i;
      }
    }
    if (best < pivot_floor || best == 0.0) {
      throw SingularMatrixError("pivot " + std::to_string(best) + " below 1e-14*||A||");
    }
    if (p != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(p, j));
      std::swap(b[k], b[p]);
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      const T m = a(i, k) / a(k, k);
      if (m == T{}) continue;
      a(i, k) = m;
      for (std::size_t j = k + 1; j < n; ++j) a(i, j) -= m * a(k, j);
      b[i] -= m * b[k];
    }
  }
  std::vector<T> x(n);
  for (std::size_t ii = n; ii-- > 0;) {
    T s = b[ii];
    for (std::size_t j = ii + 1; j < n; ++j) s -= a(ii, j) * x[j];
    x[ii] = s / a(ii, ii);
  }
  return x;
}

// Determinant by partial-pivoting elimination. With check set, a pivot below
// 1e-14*||A|| throws SingularMatrixError instead of returning a tiny value.
template <typename T>
T determinant(Matrix<T> a, bool check = false) {
  if (!a.square()) throw InvalidArgumentError("determinant needs a square matrix");
  const std::size_t n = a.rows();
  const double pivot_floor = 1e-14 * a.norm_inf();
  T det{1};
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    double best = detail::magnitude(a(k, k));
    for (std::size_t i = k + 1; i < n; ++i)
      if (detail::magnitude(a(i, k)) > best) best = detail::magnitude(a(i, k)), p = i;
    if (best == 0.0 || (check && best < pivot_floor)) {
      if (check) throw SingularMatrixError("pivot " + std::to_string(best) + " below 1e-14*||A||");
      return T{};
    }
    if (p != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(p, j));
      det = -det;
    }
    det *= a(k, k);
    for (std::size_t i = k + 1; i < n; ++i) {
      const T m = a(i, k) / a(k, k);
      for (std::size_t j = k + 1; j < n; ++j) a(i, j) -= m * a(k, j);
    }
  }
  return det;
}

inline bool is_symmetric(const DenseMatrix& a, double rel_tol = 1e-12) {
  if (!a.square()) return false;
  const double tol = rel_tol * a.norm_inf();
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = i + 1; j < a.cols(); ++j)
      if (std::abs(a(i, j) - a(j, i)) > tol) return false;
  return true;
}

inline bool is_lower_triangular(const DenseMatrix& a) {
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = i + 1; j < a.cols(); ++j)
      if (a(i, j) != 0.0) return false;
  return true;
}

inline bool is_upper_triangular(const DenseMatrix& a) {
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (a(i, j) != 0.0) return false;
  return true;
}

struct EigenDecomposition {
  ComplexVector values;
  std::optional<ComplexMatrix> vectors;  // eigenvectors as columns
  bool defective = false;
};

namespace detail {

inline void normalize_column_inf(ComplexMatrix& v, std::size_t col) {
  double m = 0.0;
  for (std::size_t i = 0; i < v.rows(); ++i) m = std::max(m, std::abs(v(i, col)));
  if (m > 0.0)
    for (std::size_t i = 0; i < v.rows(); ++i) v(i, col) /= m;
}

}  // namespace detail

// Closed-form eigen decomposition of a 2x2 real matrix.
inline EigenDecomposition eig_2x2(const DenseMatrix& a) {
  if (a.rows() != 2 || a.cols() != 2) throw InvalidArgumentError("eig_2x2 needs a 2x2 matrix");
  const double p = a(0, 0), q = a(0, 1), r = a(1, 0), s = a(1, 1);
  const double half_trace = 0.5 * (p + s);
  const double half_gap = 0.5 * (p - s);
  const double disc = half_gap * half_gap + q * r;
  const double scale = std::max(1.0, a.norm_inf());

  EigenDecomposition out;
  Complex root = std::sqrt(Complex(disc, 0.0));
  if (disc >= 0.0) {
    out.values = {half_trace - root.real(), half_trace + root.real()};
  } else {
    out.values = {Complex(half_trace, root.imag()), Complex(half_trace, -root.imag())};
  }

  ComplexMatrix v(2, 2);
  const bool repeated = std::abs(disc) <= 1e-28 * scale * scale;
  if (repeated) {
    const double lam = half_trace;
    out.values = {lam, lam};
    if (q == 0.0 && r == 0.0) {
      v(0, 0) = 1.0;
      v(1, 1) = 1.0;
      out.vectors = v;
      return out;
    }
    // Only one direction spans the null space of A - lam I.
    Complex x, y;
    if (std::abs(q) >= std::abs(r)) {
      x = q;
      y = lam - p;
    } else {
      x = lam - s;
      y = r;
    }
    v(0, 0) = v(0, 1) = x;
    v(1, 0) = v(1, 1) = y;
    detail::normalize_column_inf(v, 0);
    detail::normalize_column_inf(v, 1);
    out.vectors = v;
    out.defective = true;
    return out;
  }

  for (std::size_t k = 0; k < 2; ++k) {
    const Complex lam = out.values[k];
    // Two candidate null vectors of A - lam I; keep the better scaled one.
    const Complex x1 = q, y1 = lam - p;
    const Complex x2 = lam - s, y2 = r;
    const double m1 = std::abs(x1) + std::abs(y1);
    const double m2 = std::abs(x2) + std::abs(y2);
    if (m1 == 0.0 && m2 == 0.0) {
      v(k, k) = 1.0;
    } else if (m1 >= m2) {
      v(0, k) = x1;
      v(1, k) = y1;
    } else {
      v(0, k) = x2;
      v(1, k) = y2;
    }
    detail::normalize_column_inf(v, k);
  }
  out.vectors = v;
  return out;
}

// Cyclic Jacobi rotations for a symmetric matrix; eigenvalues ascending.
inline EigenDecomposition jacobi_symmetric_eig(const DenseMatrix& input) {
  if (!input.square()) throw InvalidArgumentError("jacobi_symmetric_eig needs a square matrix");
  if (!is_symmetric(input)) throw NotSymmetricError("matrix is not symmetric within 1e-12*||A||");
  const std::size_t n = input.rows();
  DenseMatrix a = input;
  DenseMatrix v = DenseMatrix::identity(n);
  const double target = 1e-12 * input.norm_frobenius();

  auto off_norm = [&]() {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (i != j) s += a(i, j) * a(i, j);
    return std::sqrt(s);
  };

  int sweep = 0;
  while (off_norm() > target) {
    if (++sweep > 100) throw NonConvergenceError("Jacobi eigen iteration exceeded 100 sweeps");
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        if (a(p, q) == 0.0) continue;
        const double tau = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return a(i, i) < a(j, j); });

  EigenDecomposition out;
  ComplexMatrix vecs(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    out.values.emplace_back(a(order[k], order[k]), 0.0);
    for (std::size_t i = 0; i < n; ++i) vecs(i, k) = v(i, order[k]);
  }
  out.vectors = vecs;
  return out;
}

// Triangular fast path: eigenvalues are the diagonal, eigenvectors by substitution.
inline EigenDecomposition triangular_eig(const DenseMatrix& a) {
  const bool lower = is_lower_triangular(a);
  const bool upper = is_upper_triangular(a);
  if (!a.square() || (!lower && !upper)) throw InvalidArgumentError("matrix is not triangular");
  const std::size_t n = a.rows();
  const double tol = 1e-13 * std::max(1.0, a.norm_inf());
  EigenDecomposition out;
  ComplexMatrix vecs(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    const double lam = a(k, k);
    out.values.emplace_back(lam, 0.0);
    std::vector<double> x(n, 0.0);
    x[k] = 1.0;
    auto solve_row = [&](std::size_t i, double acc) {
      const double denom = lam - a(i, i);
      if (std::abs(denom) <= tol) {
        if (std::abs(acc) > tol) out.defective = true;
        x[i] = 0.0;
      } else {
        x[i] = acc / denom;
      }
    };
    if (lower) {
      for (std::size_t i = k + 1; i < n; ++i) {
        double acc = 0.0;
        for (std::size_t j = k; j < i; ++j) acc += a(i, j) * x[j];
        solve_row(i, acc);
      }
    } else {
      for (std::size_t i = k; i-- > 0;) {
        double acc = 0.0;
        for (std::size_t j = i + 1; j <= k; ++j) acc += a(i, j) * x[j];
        solve_row(i, acc);
      }
    }
    for (std::size_t i = 0; i < n; ++i) vecs(i, k) = x[i];
    detail::normalize_column_inf(vecs, k);
  }
  out.vectors = vecs;
  return out;
}

// Picks the eigen path supported for this matrix: 2x2 closed form, symmetric
// Jacobi, or triangular. Anything else is out of reach.
inline EigenDecomposition eigen_decompose(const DenseMatrix& a) {
  if (!a.square()) throw InvalidArgumentError("eigen decomposition needs a square matrix");
  if (a.rows() == 1) {
    EigenDecomposition out;
    out.values = {Complex(a(0, 0), 0.0)};
    out.vectors = ComplexMatrix::identity(1);
    return out;
  }
  if (a.rows() == 2) return eig_2x2(a);
  if (is_symmetric(a)) return jacobi_symmetric_eig(a);
  if (is_lower_triangular(a) || is_upper_triangular(a)) return triangular_eig(a);
  throw UnsupportedSpectrumError("general nonsymmetric matrices with n > 2 are not supported");
}

// Eigenvalues of the m x m MOL second-difference matrix (1/dx^2) tridiag(1,-2,1),
// indexed by mode l = 1..m.
inline Vector tridiag_toeplitz_eigs(std::size_t m, double dx) {
  if (m == 0) throw InvalidArgumentError("m must be positive");
  if (std::abs(dx - 1.0 / static_cast<double>(m + 1)) > 1e-12)
    throw InvalidArgumentError("dx must equal 1/(m+1)");
  const double pi = std::acos(-1.0);
  Vector out(m);
  for (std::size_t l = 1; l <= m; ++l) {
    const double s = std::sin(0.5 * pi * static_cast<double>(l) * dx);
    out[l - 1] = -4.0 / (dx * dx) * s * s;
  }
  return out;
}

// y(t) = V exp(D t) V^{-1} y0 for diagonalizable A.
inline Vector linear_exact_solution(const DenseMatrix& a, const Vector& y0, double t) {
  if (!a.square() || y0.size() != a.rows()) throw InvalidArgumentError("size mismatch");
  const EigenDecomposition eig = eigen_decompose(a);
  if (eig.defective || !eig.vectors) throw DefectiveMatrixError("no complete eigenbasis");
  const ComplexMatrix& v = *eig.vectors;
  const std::size_t n = a.rows();
  ComplexVector rhs(y0.begin(), y0.end());
  ComplexVector coeff;
  try {
    coeff = lu_solve(v, rhs);
  } catch (const SingularMatrixError&) {
    throw DefectiveMatrixError("eigenvector matrix is singular");
  }
  ComplexVector y(n, Complex{});
  for (std::size_t k = 0; k < n; ++k) {
    const Complex w = coeff[k] * std::exp(eig.values[k] * t);
    for (std::size_t i = 0; i < n; ++i) y[i] += v(i, k) * w;
  }
  Vector out(n);
  double imag = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = y[i].real();
    imag = std::max(imag, std::abs(y[i].imag()));
  }
  if (imag > 1e-9 * norm_inf(out) + 1e-300) throw Error("linear_exact_solution: imaginary residue too large");
  return out;
}

// ---------------------------------------------------------------------------
// Polynomial roots

struct ComplexRootSet {
  ComplexVector roots;
  std::vector<int> multiplicities;

  int degree() const { return std::accumulate(multiplicities.begin(), multiplicities.end(), 0); }
};

struct PolyRootOptions {
  int max_iterations = 500;
  double update_tol = 1e-13;
  double cluster_radius = 1e-6;
  std::uint64_t seed = 20240917;
};

// Horner evaluation, coefficients highest degree first.
inline Complex poly_eval(std::span<const Complex> coeffs, Complex z) {
  Complex acc{};
  for (const auto& c : coeffs) acc = acc * z + c;
  return acc;
}

// Expands prod (r - root_k)^{mult_k} * leading into coefficients, highest first.
inline ComplexVector poly_from_roots(const ComplexRootSet& set, Complex leading = 1.0) {
  ComplexVector c{leading};
  for (std::size_t k = 0; k < set.roots.size(); ++k) {
    for (int m = 0; m < set.multiplicities[k]; ++m) {
      ComplexVector next(c.size() + 1, Complex{});
      for (std::size_t i = 0; i < c.size(); ++i) {
        next[i] += c[i];
        next[i + 1] -= c[i] * set.roots[k];
      }
      c = std::move(next);
    }
  }
  return c;
}

namespace detail {

// Taylor coefficients d_j = p^{(j)}(c)/j! and matching rounding-noise scales.
inline std::pair<ComplexVector, Vector> taylor_at(std::span<const Complex> coeffs, Complex c) {
  ComplexVector work(coeffs.begin(), coeffs.end());
  Vector mag(coeffs.size());
  for (std::size_t i = 0; i < coeffs.size(); ++i) mag[i] = std::abs(coeffs[i]);
  const double ac = std::abs(c);
  const std::size_t n = coeffs.size() - 1;
  ComplexVector d(n + 1);
  Vector noise(n + 1);
  // Repeated synthetic division: after pass j the last live entry is d_j.
  for (std::size_t j = 0; j <= n; ++j) {
    const std::size_t live = n - j;
    for (std::size_t i = 1; i <= live; ++i) {
      work[i] += work[i - 1] * c;
      mag[i] += mag[i - 1] * ac;
    }
    d[j] = work[live];
    noise[j] = mag[live];
  }
  return {d, noise};
}

// A nu-fold root is a simple root of p^{(nu-1)}; polish the cluster centroid
// there with Newton. Returns nullopt if the iteration wanders off the cluster.
inline std::optional<Complex> polish_multiple_root(std::span<const Complex> coeffs, Complex c, int nu, double spread) {
  const Complex start = c;
  for (int it = 0; it < 30; ++it) {
    const auto d = taylor_at(coeffs, c).first;
    const Complex denom = static_cast<double>(nu) * d[nu];
    if (denom == Complex{}) return std::nullopt;
    const Complex step = d[nu - 1] / denom;
    c -= step;
    if (std::abs(step) <= 1e-15 * std::max(1.0, std::abs(c))) break;
  }
  if (std::abs(c - start) > 10.0 * spread + 1e-12) return std::nullopt;
  return c;
}

inline bool is_multiple_root(std::span<const Complex> coeffs, Complex c, int nu, double radius) {
  const auto [d, noise] = taylor_at(coeffs, c);
  const double eps = std::numeric_limits<double>::epsilon();
  const double lead = std::abs(d[nu]);
  if (lead == 0.0) return false;
  for (int j = 0; j < nu; ++j) {
    const double allowed = std::max(std::pow(radius, nu - j) * lead, 64.0 * eps * noise[j]);
    if (std::abs(d[j]) > allowed) return false;
  }
  return true;
}

}  // namespace detail

// Durand-Kerner (Weierstrass) iteration followed by multiplicity clustering.
inline ComplexRootSet poly_roots(const ComplexVector& coeffs_in, const PolyRootOptions& opt = {}) {
  if (coeffs_in.size() < 2) throw InvalidArgumentError("polynomial degree must be at least 1");
  double cmax = 0.0;
  for (const auto& c : coeffs_in) cmax = std::max(cmax, std::abs(c));
  if (!(std::abs(coeffs_in.front()) > 1e-14 * cmax))
    throw InvalidArgumentError("leading coefficient is negligible");

  ComplexRootSet out;
  // Exact zero roots from trailing zero coefficients.
  ComplexVector coeffs = coeffs_in;
  int zero_mult = 0;
  while (coeffs.size() > 1 && coeffs.back() == Complex{}) {
    coeffs.pop_back();
    ++zero_mult;
  }
  const Complex lead = coeffs.front();
  for (auto& c : coeffs) c /= lead;
  const std::size_t n = coeffs.size() - 1;

  ComplexVector z(n);
  if (n == 1) {
    z[0] = -coeffs[1];
  } else if (n > 1) {
    std::mt19937_64 rng(opt.seed);
    std::uniform_real_distribution<double> jitter(0.0, 1.0);
    const double radius = std::max(std::pow(std::abs(coeffs.back()), 1.0 / static_cast<double>(n)), 0.5);
    const double two_pi = 2.0 * std::acos(-1.0);
    for (std::size_t k = 0; k < n; ++k) {
      const double angle = two_pi * static_cast<double>(k) / static_cast<double>(n) + 0.4 + 0.1 * jitter(rng);
      z[k] = std::polar(radius * (1.0 + 0.05 * jitter(rng)), angle);
    }
    const double eps = std::numeric_limits<double>::epsilon();
    bool converged = false;
    for (int it = 0; it < opt.max_iterations && !converged; ++it) {
      double max_update = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        Complex denom = 1.0;
        for (std::size_t j = 0; j < n; ++j)
          if (j != i) denom *= (z[i] - z[j]);
        const Complex p = poly_eval(coeffs, z[i]);
        if (denom == Complex{}) denom = Complex(eps, eps);
        const Complex step = p / denom;
        z[i] -= step;
        max_update = std::max(max_update, std::abs(step) / std::max(1.0, std::abs(z[i])));
      }
      if (max_update < opt.update_tol) {
        converged = true;
        break;
      }
      // Every iterate already at rounding level is as good as it gets.
      bool at_noise = true;
      for (std::size_t i = 0; i < n && at_noise; ++i) {
        double scale = 0.0;
        const double az = std::abs(z[i]);
        for (const auto& c : coeffs) scale = scale * az + std::abs(c);
        at_noise = std::abs(poly_eval(coeffs, z[i])) <= 32.0 * eps * scale;
      }
      converged = at_noise;
    }
    if (!converged) throw NonConvergenceError("Durand-Kerner did not converge within the iteration cap");
  }

  // Cluster candidates by coarse single linkage, then accept a group as one
  // multiple root only if its centroid passes the multiplicity test.
  std::vector<int> group(n, -1);
  int ngroups = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (group[i] >= 0) continue;
    group[i] = ngroups;
    std::vector<std::size_t> stack{i};
    while (!stack.empty()) {
      const std::size_t a = stack.back();
      stack.pop_back();
      for (std::size_t b = 0; b < n; ++b) {
        if (group[b] >= 0) continue;
        if (std::abs(z[a] - z[b]) <= 1e-2 * std::max(1.0, std::abs(z[a]))) {
          group[b] = ngroups;
          stack.push_back(b);
        }
      }
    }
    ++ngroups;
  }

  std::vector<std::pair<Complex, int>> found;
  for (int g = 0; g < ngroups; ++g) {
    std::vector<Complex> members;
    for (std::size_t i = 0; i < n; ++i)
      if (group[i] == g) members.push_back(z[i]);
    while (!members.empty()) {
      Complex c{};
      for (const auto& m : members) c += m;
      c /= static_cast<double>(members.size());
      const int nu = static_cast<int>(members.size());
      if (nu == 1) {
        found.emplace_back(c, 1);
        break;
      }
      double spread = 0.0;
      for (const auto& m : members) spread = std::max(spread, std::abs(m - c));
      const auto polished = detail::polish_multiple_root(coeffs, c, nu, spread);
      if (polished && detail::is_multiple_root(coeffs, *polished, nu, opt.cluster_radius)) {
        found.emplace_back(*polished, nu);
        break;
      }
      auto far = std::max_element(members.begin(), members.end(), [&](const Complex& a, const Complex& b) {
        return std::abs(a - c) < std::abs(b - c);
      });
      found.emplace_back(*far, 1);
      members.erase(far);
    }
  }
  if (zero_mult > 0) found.emplace_back(Complex{}, zero_mult);

  std::sort(found.begin(), found.end(), [](const auto& a, const auto& b) {
    if (a.first.real() != b.first.real()) return a.first.real() < b.first.real();
    return a.first.imag() < b.first.imag();
  });
  for (const auto& [r, m] : found) {
    out.roots.push_back(r);
    out.multiplicities.push_back(m);
  }
  return out;
}

inline ComplexRootSet poly_roots(const Vector& real_coeffs, const PolyRootOptions& opt = {}) {
  return poly_roots(ComplexVector(real_coeffs.begin(), real_coeffs.end()), opt);
}

}  // namespace odekit
