#pragma once

// Digit sampler for the exact Gauss-measure process.
//
// Conditioned on the first n digits (convergents p',q',p,q), the image
// y = T^n x of a Gauss-distributed x has density proportional to
// 1/((1+t y)(1+u y)) on [0,1], where t = q'/q and u = (p'+q')/(p+q).
// Both parameters update as t <- 1/(k+t) on digit k, so the sampler never
// needs the (exponentially large) convergents themselves.  The unnormalized
// CDF is
//     F(y) = log((1+t y)/(1+u y)) / (t-u),      t != u,
//     F(y) = y/(1+t y)                          t == u,
// and the next digit is k with probability (F(1/k)-F(1/(k+1)))/F(1).
//
// t-u shrinks like 1/q^2, so after a few dozen digits the two parameters
// coincide in floating point; F is evaluated through log1p(w)/w, which
// passes smoothly through the confluent case.
//
// Randomness contract: splitmix64 (Steele-Lea-Vigna finalizer), one 64-bit
// word per digit, top 53 bits as the uniform deviate.  Inverse-CDF by linear
// scan over k, tail aggregated into the bucket at k = 10^6; a deviate equal
// to a cumulative boundary takes the lower digit.

#include <gmpxx.h>

#include <array>
#include <cmath>
#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "cflab/digit_stream.hpp"

namespace cflab {

inline constexpr const char* kPrngAlgorithm = "splitmix64";
inline constexpr std::uint64_t kSamplerTailDigit = 1000000;

struct SplitMix64 {
  std::uint64_t state = 0;

  explicit SplitMix64(std::uint64_t seed = 0) : state(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // 53 random bits in [0,1).
  double next_unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
};

class SamplerState {
 public:
  explicit SamplerState(std::uint64_t seed) : rng_(seed), seed_(seed) {}

  long double t() const { return t_; }
  long double u() const { return u_; }
  std::uint64_t count() const { return count_; }
  std::uint64_t seed() const { return seed_; }

  // P(next digit = k) for k = 1..k_max, with the k > k_max tail folded into
  // the last bucket.  Sums to 1 by construction.
  std::vector<std::pair<std::uint64_t, double>> next_digit_distribution(
      std::uint64_t k_max = 64) const {
    std::vector<std::pair<std::uint64_t, double>> out;
    out.reserve(k_max);
    const long double full = cdf_unnormalized(1.0L);
    long double cum = 0.0L;
    for (std::uint64_t k = 1; k <= k_max; ++k) {
      long double hi = cdf_unnormalized(1.0L / static_cast<long double>(k));
      long double lo = cdf_unnormalized(1.0L / static_cast<long double>(k + 1));
      long double p = (hi - lo) / full;
      if (k == k_max) p = 1.0L - cum;  // aggregate the tail
      out.emplace_back(k, static_cast<double>(p));
      cum += p;
    }
    return out;
  }

  double digit_probability(std::uint64_t k) const {
    const long double full = cdf_unnormalized(1.0L);
    long double hi = cdf_unnormalized(1.0L / static_cast<long double>(k));
    long double lo = cdf_unnormalized(1.0L / static_cast<long double>(k + 1));
    return static_cast<double>((hi - lo) / full);
  }

  // P(next digit <= k).
  double cumulative(std::uint64_t k) const {
    const long double full = cdf_unnormalized(1.0L);
    return static_cast<double>(1.0L - cdf_unnormalized(1.0L / static_cast<long double>(k + 1)) / full);
  }

  std::uint64_t next_digit() {
    const double dev = rng_.next_unit();
    const long double full = cdf_unnormalized(1.0L);
    std::uint64_t k = 1;
    for (; k < kSamplerTailDigit; ++k) {
      long double cum = 1.0L - cdf_unnormalized(1.0L / static_cast<long double>(k + 1)) / full;
      if (static_cast<long double>(dev) <= cum) break;
    }
    push(k);
    return k;
  }

  void push(std::uint64_t k) {
    t_ = 1.0L / (static_cast<long double>(k) + t_);
    u_ = 1.0L / (static_cast<long double>(k) + u_);
    ++count_;
    history_[count_ % kWindow] = k;
  }

  // Exact re-derivation check: fold t <- 1/(a+t) over the recent digit
  // window in rational arithmetic from both extreme seeds 0 and 1.  The map
  // contracts, so the two folds bracket the true t (and u) once the window
  // is full; with a short history the fold from the true initial values is
  // exact.  Returns max distance from the float state to the bracket.
  double state_drift() const {
    std::uint64_t w = count_ < kWindow ? count_ : kWindow;
    if (w == 0) return 0.0;
    auto fold = [&](mpq_class x) {
      for (std::uint64_t i = count_ - w; i < count_; ++i) {
        std::uint64_t a = history_[(i + 1) % kWindow];
        x = 1 / (mpq_class(static_cast<unsigned long>(a)) + x);
      }
      return x;
    };
    mpq_class lo, hi;
    if (count_ < kWindow) {
      lo = fold(mpq_class(0));  // exact t
      hi = fold(mpq_class(1));  // exact u
      double dt = std::fabs(static_cast<double>(t_) - lo.get_d());
      double du = std::fabs(static_cast<double>(u_) - hi.get_d());
      return dt > du ? dt : du;
    }
    lo = fold(mpq_class(0));
    hi = fold(mpq_class(1));
    if (lo > hi) std::swap(lo, hi);
    double width = (hi - lo).get_d();
    auto dist = [&](long double v) {
      double d0 = lo.get_d() - static_cast<double>(v);
      double d1 = static_cast<double>(v) - hi.get_d();
      double d = d0 > d1 ? d0 : d1;
      return d > 0 ? d : 0.0;
    };
    double dt = dist(t_);
    double du = dist(u_);
    double worst = dt > du ? dt : du;
    return worst > width ? worst - width : 0.0;
  }

 private:
  // Unnormalized CDF of the conditional density; continuous through t == u.
  long double cdf_unnormalized(long double y) const {
    const long double base = y / (1.0L + u_ * y);
    const long double w = (t_ - u_) * base;
    return base * log1p_over_w(w);
  }

  static long double log1p_over_w(long double w) {
    if (w > -1e-8L && w < 1e-8L) return 1.0L - w / 2.0L + w * w / 3.0L;
    return std::log1p(w) / w;
  }

  static constexpr std::uint64_t kWindow = 64;

  long double t_ = 0.0L;
  long double u_ = 1.0L;
  SplitMix64 rng_;
  std::uint64_t seed_ = 0;
  std::uint64_t count_ = 0;
  std::array<std::uint64_t, kWindow> history_{};
};

// n digits drawn sequentially by inverse-CDF sampling; reproducible from the
// seed.  validate_every > 0 enables the exact-state drift check.
inline DigitStream sample_stream(std::uint64_t seed, std::uint64_t n,
                                 std::uint64_t validate_every = 0,
                                 double drift_tolerance = 1e-12) {
  auto state = std::make_shared<SamplerState>(seed);
  auto gen = [state, validate_every, drift_tolerance]() {
    std::uint64_t d = state->next_digit();
    if (validate_every && state->count() % validate_every == 0) {
      double drift = state->state_drift();
      if (drift > drift_tolerance)
        throw std::runtime_error("sampler state drift " + std::to_string(drift) +
                                 " exceeds tolerance at digit " +
                                 std::to_string(state->count()));
    }
    return d;
  };
  return DigitStream::generated(gen, n, "sampler:" + std::to_string(seed));
}

inline DigitStream stream_from_digits(std::vector<std::uint64_t> digits) {
  return DigitStream::from_digits(std::move(digits));
}

inline DigitStream stream_from_file(const std::string& path) {
  return DigitStream::from_file(path);
}

}  // namespace cflab
