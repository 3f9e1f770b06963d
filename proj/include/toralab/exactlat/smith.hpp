#pragma once

#include "toralab/exactlat/int_matrix.hpp"

namespace toralab {

/// U * M * V = diag(d1, d2) with U, V unimodular, d1 >= 1 and d1 | d2.
struct SmithDecomposition {
  IntMatrix2 U;
  IntMatrix2 V;
  Integer d1;
  Integer d2;

  IntMatrix2 diagonal() const { return {d1, 0, 0, d2}; }
};

namespace detail {

// Row operation on the left: M <- R*M, U <- R*U.
inline void apply_left(const IntMatrix2& r, IntMatrix2& m, IntMatrix2& u) {
  m = r * m;
  u = r * u;
}

// Column operation on the right: M <- M*C, V <- V*C.
inline void apply_right(const IntMatrix2& c, IntMatrix2& m, IntMatrix2& v) {
  m = m * c;
  v = v * c;
}

}  // namespace detail

/// Smith normal form of a nonzero 2x2 integer matrix.
///
/// Elimination order is fixed: clear column 0 with a row gcd step, clear
/// row 0 with a column gcd step, repeat until diagonal, then enforce
/// divisibility and positive signs. The output is a function of the input
/// only. For singular M the second invariant is d2 = 0.
inline SmithDecomposition smith_normal_form(const IntMatrix2& input) {
  if (input.is_zero()) throw domain_error("smith_normal_form: zero matrix has no nontrivial form");

  IntMatrix2 m = input;
  IntMatrix2 u = IntMatrix2::identity();
  IntMatrix2 v = IntMatrix2::identity();

  if (m.a == 0 && m.c == 0) detail::apply_right({0, 1, 1, 0}, m, v);

  // A gcd step is only taken when the pivot does not divide the entry, so |a|
  // strictly decreases on every such step and the loop terminates.
  for (;;) {
    if (m.c != 0) {
      if (m.a != 0 && m.c % m.a == 0) {
        detail::apply_left({1, 0, -(m.c / m.a), 1}, m, u);
      } else {
        auto [g, s, t] = ext_gcd(m.a, m.c);
        detail::apply_left({s, t, -m.c / g, m.a / g}, m, u);
      }
    }
    if (m.b != 0) {
      if (m.b % m.a == 0) {
        detail::apply_right({1, -(m.b / m.a), 0, 1}, m, v);
      } else {
        auto [g, s, t] = ext_gcd(m.a, m.b);
        detail::apply_right({s, -m.b / g, t, m.a / g}, m, v);
      }
      continue;  // may have refilled m.c
    }
    if (m.c != 0) continue;
    // diagonal; a is the (signed) gcd candidate
    if (m.d != 0 && m.d % m.a != 0) {
      detail::apply_left({1, 1, 0, 1}, m, u);  // row0 += row1 puts d into position b
      continue;
    }
    break;
  }

  if (m.a < 0) detail::apply_left({-1, 0, 0, 1}, m, u);
  if (m.d < 0) detail::apply_left({1, 0, 0, -1}, m, u);
  return {u, v, m.a, m.d};
}

}  // namespace toralab
