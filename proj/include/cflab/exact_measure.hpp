#pragma once

// Exact Gauss-measure values.
//
// The Gauss measure of an interval [lo, hi] in [0,1] is log2((1+hi)/(1+lo)).
// We keep the rational ratio (1+hi)/(1+lo) exactly and take logarithms only
// for display or for floating-point consumers.  Adding measures multiplies
// ratios, so finite additivity is exact, and ordering two measures reduces
// to an exact rational comparison.

#include <gmpxx.h>
#include <mpfr.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace cflab {

// Minimal RAII wrapper around mpfr_t.
class MpfrReal {
 public:
  explicit MpfrReal(mpfr_prec_t prec) { mpfr_init2(x_, prec); }
  ~MpfrReal() { mpfr_clear(x_); }
  MpfrReal(const MpfrReal&) = delete;
  MpfrReal& operator=(const MpfrReal&) = delete;
  mpfr_ptr get() { return x_; }
  mpfr_srcptr get() const { return x_; }

 private:
  mpfr_t x_;
};

class ExactMeasure {
 public:
  ExactMeasure() : ratio_(1) {}

  explicit ExactMeasure(mpq_class ratio) : ratio_(std::move(ratio)) {
    ratio_.canonicalize();
    if (ratio_ < 1) throw std::domain_error("ExactMeasure: ratio must be >= 1");
  }

  // Measure of [lo, hi], 0 <= lo < hi <= 1.
  static ExactMeasure from_interval(const mpq_class& lo, const mpq_class& hi) {
    if (!(lo < hi)) throw std::domain_error("ExactMeasure: empty interval");
    if (lo < 0 || hi > 1) throw std::domain_error("ExactMeasure: interval not in [0,1]");
    mpq_class r = (1 + hi) / (1 + lo);
    return ExactMeasure(std::move(r));
  }

  static ExactMeasure zero() { return ExactMeasure(); }
  static ExactMeasure full() { return ExactMeasure(mpq_class(2)); }

  const mpq_class& ratio() const { return ratio_; }
  bool is_zero() const { return ratio_ == 1; }

  ExactMeasure& operator+=(const ExactMeasure& other) {
    ratio_ *= other.ratio_;
    return *this;
  }
  friend ExactMeasure operator+(ExactMeasure a, const ExactMeasure& b) {
    a += b;
    return a;
  }

  friend bool operator==(const ExactMeasure& a, const ExactMeasure& b) {
    return a.ratio_ == b.ratio_;
  }
  friend bool operator<(const ExactMeasure& a, const ExactMeasure& b) {
    return a.ratio_ < b.ratio_;
  }
  friend bool operator<=(const ExactMeasure& a, const ExactMeasure& b) {
    return a.ratio_ <= b.ratio_;
  }
  friend bool operator>(const ExactMeasure& a, const ExactMeasure& b) { return b < a; }
  friend bool operator>=(const ExactMeasure& a, const ExactMeasure& b) { return b <= a; }

  // log2(ratio) as double (nearest).
  double value() const { return log2_of_ratio(ratio_, MPFR_RNDN); }

  // Certified one-sided floating bounds on log2(ratio).
  double value_lower() const { return log2_of_ratio(ratio_, MPFR_RNDD); }
  double value_upper() const { return log2_of_ratio(ratio_, MPFR_RNDU); }

  // Decimal rendering with the requested number of significant digits.
  std::string decimal(int sig_digits = 50) const;

 private:
  // log2(r) via log1p((num-den)/den): accurate even when r-1 is tiny
  // relative to r.
  static double log2_of_ratio(const mpq_class& r, mpfr_rnd_t rnd) {
    if (r == 1) return 0.0;
    mpq_class delta = r - 1;
    MpfrReal d(128), l2(128);
    mpfr_set_q(d.get(), delta.get_mpq_t(), rnd);
    mpfr_log1p(d.get(), d.get(), rnd);
    mpfr_const_log2(l2.get(), rnd == MPFR_RNDD ? MPFR_RNDU : MPFR_RNDD);
    mpfr_div(d.get(), d.get(), l2.get(), rnd);
    return mpfr_get_d(d.get(), rnd);
  }

  mpq_class ratio_;
};

inline std::string ExactMeasure::decimal(int sig_digits) const {
  if (sig_digits < 1) throw std::invalid_argument("decimal: sig_digits must be >= 1");
  if (ratio_ == 1) return "0";
  mpfr_prec_t prec = static_cast<mpfr_prec_t>(sig_digits * 3.33) + 64;
  mpq_class delta = ratio_ - 1;
  MpfrReal v(prec), l2(prec);
  mpfr_set_q(v.get(), delta.get_mpq_t(), MPFR_RNDN);
  mpfr_log1p(v.get(), v.get(), MPFR_RNDN);
  mpfr_const_log2(l2.get(), MPFR_RNDN);
  mpfr_div(v.get(), v.get(), l2.get(), MPFR_RNDN);

  mpfr_exp_t exp10 = 0;
  char* raw = mpfr_get_str(nullptr, &exp10, 10, static_cast<std::size_t>(sig_digits),
                           v.get(), MPFR_RNDN);
  std::string digits(raw);
  mpfr_free_str(raw);
  // value = 0.digits * 10^exp10
  std::string out;
  if (exp10 <= 0) {
    out = "0.";
    out.append(static_cast<std::size_t>(-exp10), '0');
    out += digits;
  } else if (static_cast<std::size_t>(exp10) < digits.size()) {
    out = digits.substr(0, static_cast<std::size_t>(exp10)) + "." +
          digits.substr(static_cast<std::size_t>(exp10));
  } else {
    out = digits;
    out.append(static_cast<std::size_t>(exp10) - digits.size(), '0');
  }
  return out;
}

// Sum of measures as a balanced product of ratios.  The balanced tree keeps
// intermediate operand sizes comparable, which GMP multiplies far faster
// than a linear left fold over many terms.
inline ExactMeasure measure_sum(const std::vector<ExactMeasure>& terms) {
  if (terms.empty()) return ExactMeasure::zero();
  std::vector<mpq_class> layer;
  layer.reserve(terms.size());
  for (const auto& t : terms) layer.push_back(t.ratio());
  while (layer.size() > 1) {
    std::vector<mpq_class> next;
    next.reserve(layer.size() / 2 + 1);
    for (std::size_t i = 0; i + 1 < layer.size(); i += 2)
      next.emplace_back(layer[i] * layer[i + 1]);
    if (layer.size() % 2 == 1) next.push_back(layer.back());
    layer.swap(next);
  }
  return ExactMeasure(std::move(layer.front()));
}

// Balanced product accumulator for long streams of rational factors.
// push() keeps a binary-counter stack of partial products so the overall
// cost stays quasi-linear in the total bit size.
class BalancedProduct {
 public:
  void push(const mpq_class& factor) {
    mpq_class cur = factor;
    std::size_t level = 0;
    while (level < stack_.size() && occupied_[level]) {
      cur = stack_[level] * cur;
      occupied_[level] = false;
      ++level;
    }
    if (level == stack_.size()) {
      stack_.emplace_back();
      occupied_.push_back(false);
    }
    stack_[level] = std::move(cur);
    occupied_[level] = true;
  }

  mpq_class result() const {
    mpq_class acc(1);
    for (std::size_t i = 0; i < stack_.size(); ++i)
      if (occupied_[i]) acc *= stack_[i];
    return acc;
  }

  void clear() {
    stack_.clear();
    occupied_.clear();
  }

 private:
  std::vector<mpq_class> stack_;
  std::vector<bool> occupied_;
};

// Rational k-th root bounds with directed rounding: the returned rational is
// certified <= (resp. >=) r^(1/k).  Used to fold fractional multiples of a
// log-measure back into ratio form.
inline mpq_class nth_root_below(const mpq_class& r, unsigned long k,
                                mpfr_prec_t prec = 192) {
  if (r < 1) throw std::domain_error("nth_root_below: r must be >= 1");
  MpfrReal x(prec);
  mpfr_set_q(x.get(), r.get_mpq_t(), MPFR_RNDD);
  mpfr_rootn_ui(x.get(), x.get(), k, MPFR_RNDD);
  mpq_class out;
  mpfr_get_q(out.get_mpq_t(), x.get());
  if (out < 1) out = 1;
  return out;
}

inline mpq_class nth_root_above(const mpq_class& r, unsigned long k,
                                mpfr_prec_t prec = 192) {
  if (r < 1) throw std::domain_error("nth_root_above: r must be >= 1");
  MpfrReal x(prec);
  mpfr_set_q(x.get(), r.get_mpq_t(), MPFR_RNDU);
  mpfr_rootn_ui(x.get(), x.get(), k, MPFR_RNDU);
  mpq_class out;
  mpfr_get_q(out.get_mpq_t(), x.get());
  return out;
}

// Outward dyadic rounding of a ratio, for compact serialized certificates.
// bits controls the kept precision of ratio-1; certification survives the
// rounding because it is directed.
inline mpq_class round_ratio_down(const mpq_class& r, mpfr_prec_t bits = 192) {
  MpfrReal x(bits);
  mpfr_set_q(x.get(), r.get_mpq_t(), MPFR_RNDD);
  mpq_class out;
  mpfr_get_q(out.get_mpq_t(), x.get());
  if (out < 1) out = 1;
  return out;
}

inline mpq_class round_ratio_up(const mpq_class& r, mpfr_prec_t bits = 192) {
  MpfrReal x(bits);
  mpfr_set_q(x.get(), r.get_mpq_t(), MPFR_RNDU);
  mpq_class out;
  mpfr_get_q(out.get_mpq_t(), x.get());
  return out;
}

}  // namespace cflab
