#pragma once

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "symrad/matrix.hpp"

namespace symrad {

// Standard symplectic form on R^{2n}: J = [[0, I], [-I, 0]].
inline SquareMatrix symplectic_j(int n) {
  SquareMatrix j(2 * n);
  for (int i = 0; i < n; ++i) {
    j(i, n + i) = 1.0;
    j(n + i, i) = -1.0;
  }
  return j;
}

inline double largest_singular_value(const SquareMatrix& m) {
  auto e = eigen_symmetric(transpose(m) * m);
  return std::sqrt(std::max(0.0, e.values.back()));
}

// Largest entry of |S J S^T - J| and |S^T J S - J|; both sides are checked
// because for a candidate that is not symplectic they can differ.
inline double symplectic_residual(const SquareMatrix& s) {
  const int two_n = s.n;
  const SquareMatrix j = symplectic_j(two_n / 2);
  const SquareMatrix st = transpose(s);
  return std::max(max_abs(s * j * st - j), max_abs(st * j * s - j));
}

inline bool is_symplectic(const SquareMatrix& s, double tol = 1e-10) {
  if (s.n % 2 != 0)
    throw ValidationError("OddDimension", "symplectic matrices act on even-dimensional phase space");
  const double scale = largest_singular_value(s);
  return symplectic_residual(s) <= tol * std::max(1.0, scale * scale);
}

// Block form S = [[A, B], [C, D]] acting on (x, p).  The constructor verifies
// the symplectic condition, so holding a SymplecticMatrix is itself the
// certificate that the conditions A^T C, B^T D symmetric, A^T D - C^T B = I
// hold to tolerance.
struct SymplecticMatrix {
  int n = 0;
  SquareMatrix A, B, C, D;

  SymplecticMatrix(SquareMatrix a, SquareMatrix b, SquareMatrix c, SquareMatrix d,
                   double tol = 1e-10)
      : n(a.n), A(std::move(a)), B(std::move(b)), C(std::move(c)), D(std::move(d)) {
    if (B.n != n || C.n != n || D.n != n)
      throw ValidationError("DimensionMismatch", "symplectic blocks must share one dimension");
    if (!is_symplectic(full(), tol)) {
      std::ostringstream os;
      os << "block matrix is not symplectic, J-residual " << symplectic_residual(full());
      throw ValidationError("NotSymplectic", os.str());
    }
  }

  SquareMatrix full() const {
    SquareMatrix s(2 * n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        s(i, j) = A(i, j);
        s(i, n + j) = B(i, j);
        s(n + i, j) = C(i, j);
        s(n + i, n + j) = D(i, j);
      }
    return s;
  }

  static SymplecticMatrix from_full(const SquareMatrix& s, double tol = 1e-10) {
    if (s.n % 2 != 0)
      throw ValidationError("OddDimension", "full symplectic matrix must have even dimension");
    const int n = s.n / 2;
    SquareMatrix a(n), b(n), c(n), d(n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        a(i, j) = s(i, j);
        b(i, j) = s(i, n + j);
        c(i, j) = s(n + i, j);
        d(i, j) = s(n + i, n + j);
      }
    return SymplecticMatrix(std::move(a), std::move(b), std::move(c), std::move(d), tol);
  }
};

// Tomographic frame (A, B): rank[A B] = n and A^T B symmetric.  Lambda is the
// unique symmetric positive square root of A^T A + B^T B, and
// U = [[Lam^-1 A, Lam^-1 B], [-Lam^-1 B, Lam^-1 A]] is simultaneously
// symplectic and orthogonal; both facts are verified before a frame is
// returned, never assumed.
struct RadonFrame {
  int n = 0;
  SquareMatrix A, B;
  SquareMatrix Lambda, LambdaInv;
  double det_lambda = 1.0;
  SquareMatrix UA, UB;  // blocks Lam^-1 A and Lam^-1 B of the rotation U

  SquareMatrix u_full() const {
    SquareMatrix s(2 * n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        s(i, j) = UA(i, j);
        s(i, n + j) = UB(i, j);
        s(n + i, j) = -UB(i, j);
        s(n + i, n + j) = UA(i, j);
      }
    return s;
  }

  SymplecticMatrix u() const {
    return SymplecticMatrix(UA, UB, -1.0 * UB, UA);
  }
};

inline RadonFrame make_frame(const SquareMatrix& A, const SquareMatrix& B) {
  if (A.n != B.n || A.n < 1)
    throw ValidationError("DimensionMismatch", "frame blocks must be square of equal dimension");
  const int n = A.n;

  // Rank of the n x 2n stack [A B] through its row Gram A A^T + B B^T.
  const auto row_gram = eigen_symmetric(A * transpose(A) + B * transpose(B));
  const double sv_max = std::sqrt(std::max(0.0, row_gram.values.back()));
  const double sv_min = std::sqrt(std::max(0.0, row_gram.values.front()));
  if (!(sv_min > 1e-10 * std::max(sv_max, 1e-300))) {
    std::ostringstream os;
    os << "rank of [A B] is below " << n << " (singular values " << sv_min << " .. " << sv_max << ")";
    throw ValidationError("RankDeficient", os.str());
  }

  const double commut = asymmetry(transpose(A) * B);
  if (commut > 1e-10 * std::max(1.0, sv_max * sv_max)) {
    std::ostringstream os;
    os << "A^T B is not symmetric, residual " << commut;
    throw ValidationError("NotCommuting", os.str());
  }

  const auto col_gram = eigen_symmetric(transpose(A) * A + transpose(B) * B);
  if (!(col_gram.values.front() > 1e-12 * std::max(col_gram.values.back(), 1e-300)))
    throw ValidationError("RankDeficient", "A^T A + B^T B has a near-zero eigenvalue");

  RadonFrame f;
  f.n = n;
  f.A = A;
  f.B = B;
  f.Lambda = symmetric_apply(col_gram, [](double v) { return std::sqrt(v); });
  f.LambdaInv = symmetric_apply(col_gram, [](double v) { return 1.0 / std::sqrt(v); });
  f.det_lambda = 1.0;
  for (double v : col_gram.values) f.det_lambda *= std::sqrt(v);
  f.UA = f.LambdaInv * A;
  f.UB = f.LambdaInv * B;

  const SquareMatrix u = f.u_full();
  const double ortho = max_abs(transpose(u) * u - SquareMatrix::identity(2 * n));
  const double sympl = symplectic_residual(u);
  if (ortho > 1e-10 || sympl > 1e-10) {
    std::ostringstream os;
    os << "U_{A,B} fails the rotation invariant (orthogonality residual " << ortho
       << ", J-residual " << sympl << "); A + iB must be normal";
    throw ValidationError("NotRotation", os.str());
  }
  return f;
}

// U is orthogonal, so its inverse is the exact transpose; no solve involved.
inline SymplecticMatrix frame_inverse_rotation(const RadonFrame& f) {
  return SymplecticMatrix(transpose(f.UA), -1.0 * transpose(f.UB), transpose(f.UB),
                          transpose(f.UA));
}

// Affine Lagrangian plane {(x, p) : A x + B p = X} named by a frame and offset.
struct AffineLagrangianPlane {
  RadonFrame frame;
  Vec X;

  AffineLagrangianPlane(RadonFrame f, Vec offset) : frame(std::move(f)), X(std::move(offset)) {
    if (static_cast<int>(X.size()) != frame.n)
      throw ValidationError("DimensionMismatch", "plane offset must have the frame dimension");
  }
};

inline bool plane_contains(const AffineLagrangianPlane& plane, const Vec& z, double tol) {
  const int n = plane.frame.n;
  if (static_cast<int>(z.size()) != 2 * n)
    throw ValidationError("DimensionMismatch", "phase-space point must have dimension 2n");
  Vec x(z.begin(), z.begin() + n), p(z.begin() + n, z.end());
  const Vec ax = plane.frame.A * x;
  const Vec bp = plane.frame.B * p;
  double resid = 0.0;
  for (int i = 0; i < n; ++i) resid = std::max(resid, std::abs(ax[i] + bp[i] - plane.X[i]));
  return resid <= tol;
}

// Quadratic form data (P, Q, R) of a free symplectic matrix: the generating
// function is W(x, x') = P x.x/2 - Q x.x' + R x'.x'/2 with P, R symmetric and
// Q invertible.
struct QuadraticForm {
  SquareMatrix P, Q, R;
};

inline void check_free_block(const SquareMatrix& B, const char* who) {
  const auto g = eigen_symmetric(transpose(B) * B);
  const double smax = std::sqrt(std::max(0.0, g.values.back()));
  const double smin = std::sqrt(std::max(0.0, g.values.front()));
  if (!(smin > 1e-12 * std::max(1.0, smax)))
    throw ValidationError("NotFree", std::string(who) + ": upper-right block is singular");
}

inline QuadraticForm free_generating_function(const SymplecticMatrix& s) {
  check_free_block(s.B, "free_generating_function");
  const SquareMatrix binv = inverse(s.B, "NotFree");
  return QuadraticForm{s.D * binv, binv, binv * s.A};
}

// Rebuild the free symplectic matrix from its generating data:
// A = Q^-1 R, B = Q^-1, C = P Q^-1 R - Q^T, D = P Q^-1.
inline SymplecticMatrix symplectic_from_generating(const QuadraticForm& q, double tol = 1e-10) {
  const double scale = std::max({1.0, max_abs(q.P), max_abs(q.R)});
  if (asymmetry(q.P) > tol * scale || asymmetry(q.R) > tol * scale)
    throw ValidationError("NotCommuting", "generating blocks P and R must be symmetric");
  const SquareMatrix qinv = inverse(q.Q, "NotFree");
  const SquareMatrix a = qinv * q.R;
  const SquareMatrix d = q.P * qinv;
  return SymplecticMatrix(a, qinv, q.P * qinv * q.R - transpose(q.Q), d);
}

}  // namespace symrad
