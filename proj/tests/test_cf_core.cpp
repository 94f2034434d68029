#include <catch2/catch_amalgamated.hpp>

#include <gmpxx.h>

#include <random>

#include "cflab/cf_core.hpp"

using namespace cflab;

namespace {

// Independent oracle: evaluate a digit string by folding from the right,
// never touching the convergent recurrence under test.
mpq_class fold_value(const DigitString& s) {
  mpq_class acc(0);
  for (auto it = s.rbegin(); it != s.rend(); ++it) {
    acc += static_cast<unsigned long>(*it);
    acc = 1 / acc;
  }
  return acc;
}

mpq_class q(long num, long den) { return mpq_class(num, den); }

}  // namespace

TEST_CASE("cf_expand on known rationals") {
  CHECK(cf_expand(q(2, 5)) == DigitString{2, 2});
  CHECK(cf_expand(q(1, 3)) == DigitString{3});
  CHECK(cf_expand(q(5, 7)) == DigitString{1, 2, 2});
  CHECK_THROWS_AS(cf_expand(q(0, 1)), std::domain_error);
  CHECK_THROWS_AS(cf_expand(q(1, 1)), std::domain_error);
  CHECK_THROWS_AS(cf_expand(q(7, 5)), std::domain_error);
  CHECK_THROWS_AS(cf_expand(q(-1, 3)), std::domain_error);
}

TEST_CASE("cf_expand canonical form and round trip") {
  std::mt19937_64 rng(12345);
  for (int trial = 0; trial < 2000; ++trial) {
    unsigned long den = rng() % 100000 + 2;
    unsigned long num = rng() % (den - 1) + 1;
    mpq_class x(num, den);
    x.canonicalize();
    DigitString s = cf_expand(x);
    REQUIRE(!s.empty());
    if (s.size() > 1) CHECK(s.back() >= 2);
    CHECK(fold_value(s) == x);
    CHECK(cf_value(s) == x);
  }
}

TEST_CASE("gauss_map") {
  CHECK(gauss_map(q(2, 5)) == q(1, 2));
  CHECK(gauss_map(mpq_class(0)) == 0);
  CHECK(gauss_map(q(1, 2)) == 0);
  CHECK(gauss_map(q(5, 7)) == q(2, 5));  // shift: [1,2,2] -> [2,2]
  CHECK_THROWS_AS(gauss_map(mpq_class(1)), std::domain_error);
}

TEST_CASE("push_digit recurrence") {
  ConvergentState st;
  CHECK(st.p_prev == 1);
  CHECK(st.q_prev == 0);
  CHECK(st.p_cur == 0);
  CHECK(st.q_cur == 1);

  SECTION("single digit 1") {
    st.push(1);
    CHECK(st.convergent() == 1);
  }
  SECTION("[1,1,1] gives 2/3") {
    st.push(1);
    st.push(1);
    st.push(1);
    CHECK(st.convergent() == q(2, 3));
  }
  SECTION("[1,2] gives 2/3, against the fold oracle") {
    st.push(1);
    st.push(2);
    CHECK(st.convergent() == fold_value({1, 2}));
    CHECK(st.convergent() == q(2, 3));
  }
  SECTION("determinant alternates +1/-1 along random strings") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 200; ++trial) {
      ConvergentState c;
      int expect = 1;
      for (int i = 0; i < 12; ++i) {
        c.push(rng() % 9 + 1);
        expect = -expect;
        CHECK(c.determinant() == expect);
      }
    }
  }
  SECTION("rejects digit 0") { CHECK_THROWS_AS(st.push(0), std::domain_error); }
}

TEST_CASE("cylinder endpoints") {
  Cylinder c1 = cylinder({1});
  CHECK(c1.lo == q(1, 2));
  CHECK(c1.hi == 1);

  Cylinder c2 = cylinder({2});
  CHECK(c2.lo == q(1, 3));
  CHECK(c2.hi == q(1, 2));

  Cylinder c11 = cylinder({1, 1});
  CHECK(c11.lo == q(1, 2));
  CHECK(c11.hi == q(2, 3));

  Cylinder full = cylinder({});
  CHECK(full.lo == 0);
  CHECK(full.hi == 1);
}

TEST_CASE("cylinder width equals 1/(q_n(q_n+q_{n-1}))") {
  std::mt19937_64 rng(5150);
  for (int trial = 0; trial < 500; ++trial) {
    DigitString s;
    int len = static_cast<int>(rng() % 8) + 1;
    for (int i = 0; i < len; ++i) s.push_back(rng() % 12 + 1);
    Cylinder c = cylinder(s);
    ConvergentState st = convergents_of(s);
    mpq_class expect(1, 1);
    expect /= mpq_class(st.q_cur * (st.q_cur + st.q_prev));
    CHECK(c.width() == expect);
  }
}

TEST_CASE("gauss measure closed forms") {
  ExactMeasure a = gauss_measure_interval(q(1, 2), mpq_class(1));
  CHECK(a.ratio() == q(4, 3));
  CHECK(a.decimal(10).substr(0, 11) == "0.415037499");

  ExactMeasure c11 = cylinder_measure({1, 1});
  CHECK(c11.ratio() == q(10, 9));
  CHECK(c11.decimal(10).substr(0, 11) == "0.152003093");

  ExactMeasure full = gauss_measure_interval(mpq_class(0), mpq_class(1));
  CHECK(full.ratio() == 2);
  CHECK(full.decimal(5) == "1.0000");
  CHECK(full.value() == 1.0);

  CHECK_THROWS_AS(gauss_measure_interval(q(1, 2), q(1, 2)), std::domain_error);
  CHECK_THROWS_AS(gauss_measure_interval(q(2, 3), q(1, 3)), std::domain_error);
}

TEST_CASE("measure addition is exact ratio multiplication") {
  ExactMeasure a = cylinder_measure({1});
  ExactMeasure two = a + a;
  CHECK(two.ratio() == q(16, 9));

  // Rank-1 partition: sum over C_[k], k <= K, plus the residual [0,1/(K+1)).
  const unsigned long K = 40;
  std::vector<ExactMeasure> parts;
  for (unsigned long k = 1; k <= K; ++k) parts.push_back(cylinder_measure({k}));
  parts.push_back(gauss_measure_interval(mpq_class(0), mpq_class(1, K + 1)));
  CHECK(measure_sum(parts).ratio() == 2);
}

TEST_CASE("cylinder partition telescopes exactly") {
  // mu(C_s) = sum_{d<=K} mu(C_{s d}) + mu({x in C_s : next digit > K}),
  // where the residual is the interval between p/q and the convergent of
  // s++[K+1].  Exact rational identity, any s, any K.
  std::mt19937_64 rng(777);
  for (int trial = 0; trial < 50; ++trial) {
    DigitString s;
    int len = static_cast<int>(rng() % 4) + 1;
    for (int i = 0; i < len; ++i) s.push_back(rng() % 6 + 1);
    unsigned long K = rng() % 30 + 1;

    std::vector<ExactMeasure> parts;
    for (unsigned long d = 1; d <= K; ++d) {
      DigitString sd = s;
      sd.push_back(d);
      parts.push_back(cylinder_measure(sd));
    }
    ConvergentState st = convergents_of(s);
    DigitString ext = s;
    ext.push_back(K + 1);
    mpq_class corner = st.convergent();
    mpq_class edge = convergents_of(ext).convergent();
    if (corner > edge) std::swap(corner, edge);
    parts.push_back(gauss_measure_interval(corner, edge));

    CHECK(measure_sum(parts).ratio() == cylinder_measure(s).ratio());
  }
}

TEST_CASE("exact comparison resolves ties decimals cannot") {
  mpz_class big = mpz_class(1) << 130;
  mpq_class r1 = 1 + mpq_class(1, big);
  mpq_class r2 = 1 + mpq_class(1, big + 1);
  ExactMeasure m1(r1), m2(r2);
  CHECK(m2 < m1);
  CHECK(m1 == m1);
  // both render to the same short decimal
  CHECK(m1.decimal(10) == m2.decimal(10));
}

TEST_CASE("balanced product accumulator matches direct product") {
  BalancedProduct acc;
  mpq_class direct(1);
  std::mt19937_64 rng(31337);
  for (int i = 0; i < 300; ++i) {
    mpq_class f(rng() % 1000 + 1001, 1000);
    f.canonicalize();
    acc.push(f);
    direct *= f;
  }
  CHECK(acc.result() == direct);
}
