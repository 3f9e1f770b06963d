#pragma once

#include "toralab/exactlat/number.hpp"

#include <array>
#include <sstream>
#include <string>
#include <string_view>

namespace toralab {

/// Exact 2x2 integer matrix [[a, b], [c, d]].
struct IntMatrix2 {
  Integer a{1}, b{0}, c{0}, d{1};

  static IntMatrix2 identity() { return {1, 0, 0, 1}; }

  Integer det() const { return a * d - b * c; }
  Integer trace() const { return a + d; }

  friend bool operator==(const IntMatrix2&, const IntMatrix2&) = default;

  friend IntMatrix2 operator*(const IntMatrix2& m, const IntMatrix2& n) {
    return {m.a * n.a + m.b * n.c, m.a * n.b + m.b * n.d,
            m.c * n.a + m.d * n.c, m.c * n.b + m.d * n.d};
  }
  friend IntMatrix2 operator+(const IntMatrix2& m, const IntMatrix2& n) {
    return {m.a + n.a, m.b + n.b, m.c + n.c, m.d + n.d};
  }
  friend IntMatrix2 operator-(const IntMatrix2& m, const IntMatrix2& n) {
    return {m.a - n.a, m.b - n.b, m.c - n.c, m.d - n.d};
  }
  IntMatrix2 operator-() const { return {-a, -b, -c, -d}; }

  bool is_zero() const { return a == 0 && b == 0 && c == 0 && d == 0; }

  /// Inverse of a unimodular matrix (det = +-1).
  IntMatrix2 unimodular_inverse() const {
    Integer dt = det();
    if (dt != 1 && dt != -1) throw domain_error("matrix is not unimodular");
    return {d * dt, -b * dt, -c * dt, a * dt};
  }

  /// Row vector times matrix: (x, y) * M.
  std::array<Integer, 2> left_multiply(const Integer& x, const Integer& y) const {
    return {x * a + y * c, x * b + y * d};
  }
};

/// A^n by repeated squaring; A^0 is the identity.
inline IntMatrix2 mat_pow(const IntMatrix2& m, unsigned long n) {
  IntMatrix2 result = IntMatrix2::identity();
  IntMatrix2 base = m;
  while (n > 0) {
    if (n & 1UL) result = result * base;
    n >>= 1;
    if (n > 0) base = base * base;
  }
  return result;
}

/// Row-major text form "a b c d".
inline std::string to_string(const IntMatrix2& m) {
  return m.a.str() + " " + m.b.str() + " " + m.c.str() + " " + m.d.str();
}

inline IntMatrix2 parse_matrix(std::string_view text) {
  std::string s(text);
  for (char& ch : s) {
    if (ch == ',' || ch == '[' || ch == ']') ch = ' ';
  }
  std::istringstream in(s);
  std::array<std::string, 4> tok;
  for (auto& t : tok) {
    if (!(in >> t)) throw domain_error("matrix literal needs four integers: '" + std::string(text) + "'");
  }
  std::string extra;
  if (in >> extra) throw domain_error("matrix literal has trailing tokens: '" + std::string(text) + "'");
  try {
    return {Integer(tok[0]), Integer(tok[1]), Integer(tok[2]), Integer(tok[3])};
  } catch (const std::exception&) {
    throw domain_error("matrix literal entries must be integers: '" + std::string(text) + "'");
  }
}

/// The system matrices handled here: det = 1 and trace > 2.
inline bool is_positive_hyperbolic(const IntMatrix2& m) { return m.det() == 1 && m.trace() > 2; }

inline void require_positive_hyperbolic(const IntMatrix2& m) {
  if (m.det() != 1)
    throw domain_error("matrix " + to_string(m) + " has det " + m.det().str() + ", expected 1");
  if (m.trace() <= 2)
    throw domain_error("matrix " + to_string(m) + " has trace " + m.trace().str() +
                       "; need trace > 2 (hyperbolic, positive eigenvalues)");
}

}  // namespace toralab
