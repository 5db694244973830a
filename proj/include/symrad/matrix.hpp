#pragma once

#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <vector>

#include "symrad/errors.hpp"

namespace symrad {

using Vec = std::vector<double>;

// Dense real square matrix, row-major.  Dimensions in this library are tiny
// (n and 2n with n rarely above 3), so simplicity and determinism win over
// cleverness throughout.
struct SquareMatrix {
  int n = 0;
  std::vector<double> a;

  SquareMatrix() = default;
  explicit SquareMatrix(int dim) : n(dim), a(static_cast<std::size_t>(dim) * dim, 0.0) {}
  SquareMatrix(int dim, std::initializer_list<double> entries) : SquareMatrix(dim) {
    if (static_cast<int>(entries.size()) != dim * dim)
      throw ValidationError("DimensionMismatch", "initializer size does not match dimension");
    std::size_t k = 0;
    for (double v : entries) a[k++] = v;
  }

  double& operator()(int i, int j) { return a[static_cast<std::size_t>(i) * n + j]; }
  double operator()(int i, int j) const { return a[static_cast<std::size_t>(i) * n + j]; }

  static SquareMatrix identity(int dim) {
    SquareMatrix m(dim);
    for (int i = 0; i < dim; ++i) m(i, i) = 1.0;
    return m;
  }
};

inline SquareMatrix operator+(const SquareMatrix& x, const SquareMatrix& y) {
  SquareMatrix r(x.n);
  for (std::size_t k = 0; k < r.a.size(); ++k) r.a[k] = x.a[k] + y.a[k];
  return r;
}

inline SquareMatrix operator-(const SquareMatrix& x, const SquareMatrix& y) {
  SquareMatrix r(x.n);
  for (std::size_t k = 0; k < r.a.size(); ++k) r.a[k] = x.a[k] - y.a[k];
  return r;
}

inline SquareMatrix operator*(const SquareMatrix& x, const SquareMatrix& y) {
  SquareMatrix r(x.n);
  for (int i = 0; i < x.n; ++i)
    for (int k = 0; k < x.n; ++k) {
      const double xik = x(i, k);
      if (xik == 0.0) continue;
      for (int j = 0; j < x.n; ++j) r(i, j) += xik * y(k, j);
    }
  return r;
}

inline SquareMatrix operator*(double s, const SquareMatrix& x) {
  SquareMatrix r(x.n);
  for (std::size_t k = 0; k < r.a.size(); ++k) r.a[k] = s * x.a[k];
  return r;
}

inline Vec operator*(const SquareMatrix& m, const Vec& v) {
  Vec r(static_cast<std::size_t>(m.n), 0.0);
  for (int i = 0; i < m.n; ++i) {
    double s = 0.0;
    for (int j = 0; j < m.n; ++j) s += m(i, j) * v[j];
    r[i] = s;
  }
  return r;
}

inline SquareMatrix transpose(const SquareMatrix& m) {
  SquareMatrix r(m.n);
  for (int i = 0; i < m.n; ++i)
    for (int j = 0; j < m.n; ++j) r(j, i) = m(i, j);
  return r;
}

inline double max_abs(const SquareMatrix& m) {
  double r = 0.0;
  for (double v : m.a) r = std::max(r, std::abs(v));
  return r;
}

inline double dot(const Vec& x, const Vec& y) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

// Largest |M - M^T| entry; zero for exactly symmetric input.
inline double asymmetry(const SquareMatrix& m) {
  double r = 0.0;
  for (int i = 0; i < m.n; ++i)
    for (int j = i + 1; j < m.n; ++j) r = std::max(r, std::abs(m(i, j) - m(j, i)));
  return r;
}

namespace detail {

// LU with partial pivoting.  Row swaps are recorded in perm; sign tracks the
// permutation parity for the determinant.
struct Lu {
  SquareMatrix lu;
  std::vector<int> perm;
  double sign = 1.0;
  bool singular = false;
};

inline Lu lu_factor(SquareMatrix m, double pivot_tol = 0.0) {
  Lu f;
  f.perm.resize(static_cast<std::size_t>(m.n));
  for (int i = 0; i < m.n; ++i) f.perm[i] = i;
  for (int c = 0; c < m.n; ++c) {
    int piv = c;
    double best = std::abs(m(c, c));
    for (int r = c + 1; r < m.n; ++r)
      if (std::abs(m(r, c)) > best) {
        best = std::abs(m(r, c));
        piv = r;
      }
    if (best <= pivot_tol) {
      f.singular = true;
      f.lu = m;
      return f;
    }
    if (piv != c) {
      for (int j = 0; j < m.n; ++j) std::swap(m(c, j), m(piv, j));
      std::swap(f.perm[c], f.perm[piv]);
      f.sign = -f.sign;
    }
    for (int r = c + 1; r < m.n; ++r) {
      const double factor = m(r, c) / m(c, c);
      m(r, c) = factor;
      for (int j = c + 1; j < m.n; ++j) m(r, j) -= factor * m(c, j);
    }
  }
  f.lu = m;
  return f;
}

inline Vec lu_solve(const Lu& f, const Vec& b) {
  const int n = f.lu.n;
  Vec y(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    double s = b[static_cast<std::size_t>(f.perm[i])];
    for (int j = 0; j < i; ++j) s -= f.lu(i, j) * y[j];
    y[i] = s;
  }
  for (int i = n - 1; i >= 0; --i) {
    double s = y[i];
    for (int j = i + 1; j < n; ++j) s -= f.lu(i, j) * y[j];
    y[i] = s / f.lu(i, i);
  }
  return y;
}

}  // namespace detail

inline double determinant(const SquareMatrix& m) {
  auto f = detail::lu_factor(m);
  if (f.singular) return 0.0;
  double d = f.sign;
  for (int i = 0; i < m.n; ++i) d *= f.lu(i, i);
  return d;
}

// Throws with the supplied error name when the pivot falls below tol times
// the largest entry, so callers keep their spec'd error identities.
inline SquareMatrix inverse(const SquareMatrix& m, const char* singular_name = "SingularM",
                            double tol = 1e-14) {
  auto f = detail::lu_factor(m, tol * std::max(1.0, max_abs(m)));
  if (f.singular) throw GuardError(singular_name, "matrix is singular to working precision");
  SquareMatrix r(m.n);
  Vec e(static_cast<std::size_t>(m.n), 0.0);
  for (int j = 0; j < m.n; ++j) {
    e[j] = 1.0;
    Vec col = detail::lu_solve(f, e);
    e[j] = 0.0;
    for (int i = 0; i < m.n; ++i) r(i, j) = col[i];
  }
  return r;
}

struct SymmetricEigen {
  Vec values;         // ascending
  SquareMatrix vectors;  // columns are orthonormal eigenvectors
};

// Cyclic Jacobi for symmetric matrices.  Deterministic sweep order; plenty
// accurate and robust at these dimensions.
inline SymmetricEigen eigen_symmetric(SquareMatrix m) {
  const int n = m.n;
  SquareMatrix v = SquareMatrix::identity(n);
  for (int sweep = 0; sweep < 64; ++sweep) {
    double off = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) off += m(i, j) * m(i, j);
    if (off <= 1e-30 * std::max(1.0, max_abs(m) * max_abs(m))) break;
    for (int p = 0; p < n - 1; ++p)
      for (int q = p + 1; q < n; ++q) {
        if (std::abs(m(p, q)) < 1e-300) continue;
        const double theta = (m(q, q) - m(p, p)) / (2.0 * m(p, q));
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (int k = 0; k < n; ++k) {
          const double mkp = m(k, p), mkq = m(k, q);
          m(k, p) = c * mkp - s * mkq;
          m(k, q) = s * mkp + c * mkq;
        }
        for (int k = 0; k < n; ++k) {
          const double mpk = m(p, k), mqk = m(q, k);
          m(p, k) = c * mpk - s * mqk;
          m(q, k) = s * mpk + c * mqk;
        }
        for (int k = 0; k < n; ++k) {
          const double vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
  }
  // Sort ascending by eigenvalue, permuting vector columns alongside.
  std::vector<int> order(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) order[i] = i;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (m(order[j], order[j]) < m(order[i], order[i])) std::swap(order[i], order[j]);
  SymmetricEigen e;
  e.values.resize(static_cast<std::size_t>(n));
  e.vectors = SquareMatrix(n);
  for (int c = 0; c < n; ++c) {
    e.values[c] = m(order[c], order[c]);
    for (int r = 0; r < n; ++r) e.vectors(r, c) = v(r, order[c]);
  }
  return e;
}

// Symmetric function application f(M) = V f(D) V^T through the eigensystem.
template <typename F>
inline SquareMatrix symmetric_apply(const SymmetricEigen& e, F&& f) {
  const int n = e.vectors.n;
  SquareMatrix r(n);
  for (int c = 0; c < n; ++c) {
    const double fv = f(e.values[c]);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) r(i, j) += fv * e.vectors(i, c) * e.vectors(j, c);
  }
  return r;
}

}  // namespace symrad
