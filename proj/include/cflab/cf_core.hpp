#pragma once

// Exact continued-fraction arithmetic: expansions, convergents, cylinder
// intervals, the Gauss map, and closed-form Gauss measures of cylinders.
//
// Conventions: digits are the positive integers a_i in
// x = 1/(a_1 + 1/(a_2 + ...)).  Rationals are expanded in the canonical form
// whose last digit is >= 2, so every rational in (0,1) has exactly one
// expansion here.

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "cflab/exact_measure.hpp"

namespace cflab {

using DigitString = std::vector<std::uint64_t>;

inline void validate_digits(const DigitString& s) {
  for (auto d : s)
    if (d < 1) throw std::domain_error("digit string: digits must be >= 1");
}

inline std::string digits_to_string(const DigitString& s) {
  std::string out = "[";
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(s[i]);
  }
  out += "]";
  return out;
}

// Consecutive convergents p_{n-1}/q_{n-1}, p_n/q_n of a digit string,
// maintained by the standard recurrence p_n = a_n p_{n-1} + p_{n-2}.
// The determinant p_{n-1} q_n - p_n q_{n-1} = (-1)^n never leaves {-1, +1},
// which keeps convergents automatically reduced.
struct ConvergentState {
  mpz_class p_prev{1}, q_prev{0}, p_cur{0}, q_cur{1};

  void push(std::uint64_t a) {
    if (a < 1) throw std::domain_error("push_digit: digit must be >= 1");
    mpz_class p_new = mpz_class(a) * p_cur + p_prev;
    mpz_class q_new = mpz_class(a) * q_cur + q_prev;
    p_prev = p_cur;
    q_prev = q_cur;
    p_cur = std::move(p_new);
    q_cur = std::move(q_new);
  }

  mpq_class convergent() const { return mpq_class(p_cur, q_cur); }

  // p_{n-1} q_n - p_n q_{n-1}; +1 for even n, -1 for odd n.
  int determinant() const {
    mpz_class d = p_prev * q_cur - p_cur * q_prev;
    return static_cast<int>(d.get_si());
  }
};

inline ConvergentState push_digit(ConvergentState state, std::uint64_t a) {
  state.push(a);
  return state;
}

inline ConvergentState convergents_of(const DigitString& s) {
  ConvergentState st;
  for (auto d : s) st.push(d);
  return st;
}

// Gauss map T x = 1/x mod 1, with T 0 = 0.
inline mpq_class gauss_map(const mpq_class& x) {
  if (x < 0 || x >= 1) throw std::domain_error("gauss_map: x must be in [0,1)");
  if (x == 0) return mpq_class(0);
  mpq_class inv = 1 / x;
  mpz_class floor_part;
  mpz_fdiv_q(floor_part.get_mpz_t(), inv.get_num_mpz_t(), inv.get_den_mpz_t());
  return inv - mpq_class(floor_part);
}

// Canonical expansion of a rational in (0,1): the unique digit string whose
// last digit is >= 2.  The floor recursion produces it directly: a trailing
// digit 1 would require p | q with p < q, impossible for a reduced p/q.
inline DigitString cf_expand(const mpq_class& x) {
  if (x <= 0 || x >= 1) throw std::domain_error("cf_expand: x must be in (0,1)");
  DigitString out;
  mpz_class p = x.get_num(), q = x.get_den();
  while (p != 0) {
    mpz_class a, r;
    mpz_fdiv_qr(a.get_mpz_t(), r.get_mpz_t(), q.get_mpz_t(), p.get_mpz_t());
    out.push_back(a.get_ui());
    q = p;
    p = r;
  }
  return out;
}

// Evaluate a finite digit string back to its rational value.
inline mpq_class cf_value(const DigitString& s) {
  validate_digits(s);
  if (s.empty()) throw std::domain_error("cf_value: empty digit string");
  return convergents_of(s).convergent();
}

// The cylinder C_s: all x in [0,1) whose expansion starts with s.  Its
// endpoints are the convergent p_n/q_n and the mediant
// (p_n+p_{n-1})/(q_n+q_{n-1}), in the order fixed by the determinant sign.
struct Cylinder {
  DigitString string;
  mpq_class lo, hi;

  mpq_class width() const { return hi - lo; }
};

inline Cylinder cylinder(const DigitString& s) {
  validate_digits(s);
  if (s.empty()) return Cylinder{s, mpq_class(0), mpq_class(1)};
  ConvergentState st = convergents_of(s);
  mpq_class a(st.p_cur, st.q_cur);
  mpq_class b(st.p_cur + st.p_prev, st.q_cur + st.q_prev);
  Cylinder c;
  c.string = s;
  if (a < b) {
    c.lo = std::move(a);
    c.hi = std::move(b);
  } else {
    c.lo = std::move(b);
    c.hi = std::move(a);
  }
  return c;
}

// Gauss measure of [lo, hi]: log2((1+hi)/(1+lo)).
inline ExactMeasure gauss_measure_interval(const mpq_class& lo, const mpq_class& hi) {
  if (!(lo < hi)) throw std::domain_error("gauss_measure_interval: requires lo < hi");
  return ExactMeasure::from_interval(lo, hi);
}

inline ExactMeasure cylinder_measure(const DigitString& s) {
  Cylinder c = cylinder(s);
  return gauss_measure_interval(c.lo, c.hi);
}

}  // namespace cflab
