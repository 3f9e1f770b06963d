#pragma once

#include "toralab/exactlat/int_matrix.hpp"
#include "toralab/exactlat/quad_number.hpp"

#include <array>
#include <cmath>

namespace toralab {

using QuadVec2 = std::array<QuadNumber, 2>;

struct QuadMatrix2 {
  QuadNumber a, b, c, d;

  static QuadMatrix2 identity() { return {1, 0, 0, 1}; }

  QuadNumber det() const { return a * d - b * c; }
  QuadMatrix2 inverse() const {
    QuadNumber inv = det().inverse();
    return {d * inv, -b * inv, -c * inv, a * inv};
  }
  friend QuadMatrix2 operator*(const QuadMatrix2& m, const QuadMatrix2& n) {
    return {m.a * n.a + m.b * n.c, m.a * n.b + m.b * n.d,
            m.c * n.a + m.d * n.c, m.c * n.b + m.d * n.d};
  }
  friend QuadVec2 operator*(const QuadMatrix2& m, const QuadVec2& v) {
    return {m.a * v[0] + m.b * v[1], m.c * v[0] + m.d * v[1]};
  }
  friend bool operator==(const QuadMatrix2&, const QuadMatrix2&) = default;

  /// Induced sup-norm (max absolute row sum).
  QuadNumber sup_norm() const { return max(abs(a) + abs(b), abs(c) + abs(d)); }
};

inline QuadMatrix2 to_quad(const IntMatrix2& m) {
  return {Rational(m.a), Rational(m.b), Rational(m.c), Rational(m.d)};
}

inline QuadVec2 operator*(const IntMatrix2& m, const QuadVec2& v) { return to_quad(m) * v; }
inline QuadVec2 operator*(const QuadNumber& s, const QuadVec2& v) { return {s * v[0], s * v[1]}; }
inline QuadVec2 operator+(const QuadVec2& x, const QuadVec2& y) { return {x[0] + y[0], x[1] + y[1]}; }
inline QuadVec2 operator-(const QuadVec2& x, const QuadVec2& y) { return {x[0] - y[0], x[1] - y[1]}; }
inline QuadNumber sup_norm(const QuadVec2& v) { return max(abs(v[0]), abs(v[1])); }

/// Exact spectral data of a hyperbolic SL(2,Z) matrix with positive trace.
struct EigenData {
  IntMatrix2 matrix;
  QuadNumber lambda;      // expanding eigenvalue > 1
  QuadNumber lambda_inv;  // contracting eigenvalue in (0,1)
  QuadVec2 v_u;           // A v_u = lambda v_u
  QuadVec2 v_s;           // A v_s = lambda_inv v_s
  QuadMatrix2 basis;      // columns v_u, v_s: eigen coordinates -> standard
  QuadMatrix2 basis_inv;  // standard -> eigen coordinates (rows: unstable, stable)

  long double log_lambda() const { return std::log(lambda.to_long_double()); }

  /// Unstable and stable coordinates of v.
  std::array<QuadNumber, 2> split(const QuadVec2& v) const { return basis_inv * v; }
  std::array<QuadNumber, 2> split(const Rational& x, const Rational& y) const {
    return split(QuadVec2{x, y});
  }

  /// max(|v_u|, |v_s|) * |basis_inv| in the sup norm: converts eigen-coordinate
  /// bounds into sup-metric bounds on the torus.
  QuadNumber distortion() const { return max(sup_norm(v_u), sup_norm(v_s)) * basis_inv.sup_norm(); }

  /// Shadowing constant kappa * (1/(lambda-1) + 1/(1-lambda^-1)).
  QuadNumber shadowing_constant() const {
    return distortion() * ((lambda - 1).inverse() + (QuadNumber(1) - lambda_inv).inverse());
  }
};

/// Eigen-decomposition in Q(sqrt(t^2 - 4)), t = trace(A).
///
/// Eigenvectors are normalized to first coordinate 1: (1, (mu - a)/b). For a
/// hyperbolic SL(2,Z) matrix b is never 0 (b = 0 forces a*d = 1, so |t| = 2);
/// the (0, 1) orientation is kept as a guard.
inline EigenData quad_eigen(const IntMatrix2& m) {
  require_positive_hyperbolic(m);
  Integer t = m.trace();
  Integer disc = t * t - 4;
  QuadNumber root = QuadNumber::sqrt_of(disc);
  QuadNumber lambda = (QuadNumber(Rational(t)) + root) / 2;
  QuadNumber lambda_inv = (QuadNumber(Rational(t)) - root) / 2;

  auto eigvec = [&](const QuadNumber& mu) -> QuadVec2 {
    if (m.b != 0) return {QuadNumber(1), (mu - QuadNumber(Rational(m.a))) / QuadNumber(Rational(m.b))};
    return {QuadNumber(0), QuadNumber(1)};
  };

  EigenData e;
  e.matrix = m;
  e.lambda = lambda;
  e.lambda_inv = lambda_inv;
  e.v_u = eigvec(lambda);
  e.v_s = eigvec(lambda_inv);
  e.basis = {e.v_u[0], e.v_s[0], e.v_u[1], e.v_s[1]};
  e.basis_inv = e.basis.inverse();
  return e;
}

}  // namespace toralab
