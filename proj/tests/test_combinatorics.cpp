#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <set>

#include "codebound/combinatorics.hpp"

using namespace codebound;

namespace {

// independent Pascal-triangle reference
BigInt pascal_ref(int a, int b) {
  if (b < 0 || a < 0 || b > a) return BigInt(0);
  std::vector<std::vector<BigInt>> t(a + 1);
  for (int i = 0; i <= a; ++i) {
    t[i].assign(i + 1, BigInt(1));
    for (int j = 1; j < i; ++j) t[i][j] = t[i - 1][j - 1] + t[i - 1][j];
  }
  return t[a][b];
}

}  // namespace

TEST_CASE("binomial convention and values") {
  CHECK(binomial(5, 2) == BigInt(10));
  CHECK(binomial(3, -1) == BigInt(0));
  CHECK(binomial(2, 5) == BigInt(0));
  CHECK(binomial(-2, 0) == BigInt(0));
  CHECK(binomial(40, 20) == BigInt("137846528820"));
  for (int a = 0; a <= 25; ++a)
    for (int b = -1; b <= a + 1; ++b) CHECK(binomial(a, b) == pascal_ref(a, b));
}

TEST_CASE("krawtchouk values and reflection identity") {
  for (int t = 0; t <= 9; ++t) CHECK(krawtchouk(9, 0, t) == BigInt(1));
  CHECK(krawtchouk(6, 1, 2) == BigInt(2));  // K_1^n(t) = n - 2t
  // direct-summation reference at (4,3,1)
  BigInt direct = 0;
  for (int i = 0; i <= 3; ++i) {
    BigInt term = binomial(1, i) * binomial(3, 3 - i);
    direct += (i & 1) ? -term : term;
  }
  CHECK(direct == BigInt(-2));
  CHECK(krawtchouk(4, 3, 1) == direct);
  for (int n = 0; n <= 30; ++n)
    for (int k = 0; k <= n; ++k)
      for (int t = 0; t <= n; ++t) {
        BigInt rhs = krawtchouk(n, k, t);
        if (t & 1) rhs = -rhs;
        CHECK(krawtchouk(n, n - k, t) == rhs);
      }
  CHECK_THROWS_AS(krawtchouk(-1, 0, 0), std::invalid_argument);
}

TEST_CASE("distribution enumeration is complete and duplicate-free") {
  auto two = enumerate_distributions(2, 2);
  REQUIRE(two.size() == 3);
  CHECK(two[0].counts == std::vector<int>{2, 0});
  CHECK(two[1].counts == std::vector<int>{1, 1});
  CHECK(two[2].counts == std::vector<int>{0, 2});
  CHECK(enumerate_distributions(8, 2).size() == 36);  // stars and bars C(9,7)
  CHECK(enumerate_distributions(4, 0).size() == 1);
  for (int s : {2, 4, 8})
    for (int n = 0; n <= 7; ++n) {
      auto all = enumerate_distributions(s, n);
      CHECK(BigInt(all.size()) == binomial(n + s - 1, s - 1));
      std::set<std::vector<int>> uniq;
      for (const auto& d : all) uniq.insert(d.counts);
      CHECK(uniq.size() == all.size());
    }
}

TEST_CASE("omega_size counts arrangements") {
  CHECK(omega_size(Distribution(4, {5, 0, 0, 0})) == BigInt(1));
  CHECK(omega_size(Distribution(2, {1, 1})) == BigInt(2));
  // exhaustive reference at n = 4: count maps {1..4} -> {0,1}^2 per fiber sizes
  {
    Distribution lam(4, {2, 1, 1, 0});
    long long direct = 0;
    for (int m0 = 0; m0 < 4; ++m0)
      for (int m1 = 0; m1 < 4; ++m1)
        for (int m2 = 0; m2 < 4; ++m2)
          for (int m3 = 0; m3 < 4; ++m3) {
            int cnt[4] = {0, 0, 0, 0};
            ++cnt[m0];
            ++cnt[m1];
            ++cnt[m2];
            ++cnt[m3];
            if (cnt[0] == 2 && cnt[1] == 1 && cnt[2] == 1 && cnt[3] == 0) ++direct;
          }
    CHECK(direct == 12);
    CHECK(omega_size(lam) == BigInt(direct));
  }
  for (int s : {2, 4})
    for (int n = 0; n <= 10; ++n) {
      BigInt total = 0;
      for (const auto& lam : enumerate_distributions(s, n)) total += omega_size(lam);
      BigInt expect = 1;
      for (int i = 0; i < n; ++i) expect *= s;
      CHECK(total == expect);
    }
}

TEST_CASE("gamma coefficients") {
  // alpha concentrated on 00: all binomials are C(n,0) = 1
  for (int n = 0; n <= 6; ++n) {
    ExactScalar g = gamma_coeff(Distribution(4, {n, 0, 0, 0}), 0);
    REQUIRE(g.is_integer());
    CHECK(g.as_integer() == BigInt(1));
  }
  {
    ExactScalar g = gamma_coeff(Distribution(4, {1, 1, 1, 1}), 0);
    REQUIRE(g.is_integer());
    CHECK(g.as_integer() == BigInt(4));  // sqrt(2*2*2*2)
  }
  CHECK_THROWS_AS(gamma_coeff(Distribution(4, {1, 1, 1, 1}), 3), std::invalid_argument);
  // f64 and dd evaluations agree to 1e-12 relative
  double worst = 0.0;
  for (int n = 0; n <= 30; n += 2)
    for (const auto& alpha : enumerate_distributions(4, std::min(n, 10))) {
      for (int k = 0; 2 * k <= alpha.total; ++k) {
        ExactScalar g = gamma_coeff(alpha, k);
        double f = g.eval_f64();
        dd e = g.eval_dd();
        worst = std::max(worst, std::fabs(f - e.to_double()) / std::max(1.0, std::fabs(e.to_double())));
      }
    }
  CHECK(worst < 1e-12);
}

TEST_CASE("project_prime sums the third coordinate away") {
  {
    std::vector<int> c(8, 0);
    c[0] = 5;  // everything on 000
    Distribution lp = project_prime(Distribution(8, c));
    CHECK(lp.counts == std::vector<int>{5, 0, 0, 0});
  }
  {
    std::vector<int> c(8, 0);
    c[1] = 1;  // 001
    c[2] = 1;  // 010
    Distribution lp = project_prime(Distribution(8, c));
    CHECK(lp.counts == std::vector<int>{1, 1, 0, 0});
  }
  // random lambda at n = 6 recomputed by definition
  std::mt19937 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<int> c(8, 0);
    for (int i = 0; i < 6; ++i) ++c[rng() % 8];
    Distribution lam(8, c);
    Distribution lp = project_prime(lam);
    CHECK(lp.total == 6);
    for (int cc = 0; cc < 4; ++cc) CHECK(lp.counts[cc] == c[2 * cc] + c[2 * cc + 1]);
  }
}

TEST_CASE("exact scalar carries collapsed square roots") {
  ExactScalar s;
  s.add_root_term(BigInt(2), BigInt(3));
  s.add_root_term(BigInt(1), BigInt(3));
  s.add_root_term(BigInt(-3), BigInt(3));
  CHECK(s.is_zero());
  s.add_root_term(BigInt(1), BigInt(2));
  CHECK_FALSE(s.is_integer());
  CHECK(std::fabs(s.eval_dd().to_double() - std::sqrt(2.0)) < 1e-15);
}
