#include <gtest/gtest.h>

#include <random>

#include "pseudomode/symbolic_wkb.hpp"

using namespace pm;

namespace {

GaussianRational q(long rn, long rd, long in = 0, long id = 1) { return GaussianRational::from_ints(rn, rd, in, id); }
Monomial mono(std::vector<std::pair<int, int>> f) { return Monomial{std::move(f)}; }

// Independent route to r_n: with Phi' = sum_k lambda^{-k/2} psi_k',
// -g'' + (V - lambda) g = (Phi'' - Phi'^2 + V - lambda) g.
TermSum direct_remainder(int n) {
  TermSum phi_prime;
  for (int k = -1; k <= n - 1; ++k) phi_prime += gen_psi_prime(k, n).shifted(-k, 0);
  TermSum out = t_derive(phi_prime) - t_mul(phi_prime, phi_prime);
  out.add(q(-1, 1), Monomial{}, 0, 2);  // V - lambda = -(lambda - V)
  return out;
}

}  // namespace

TEST(SymbolicWkb, PsiListMatchesClosedForms) {
  EXPECT_EQ(gen_psi_prime(-1, 2), TermSum::single(q(0, 1, 1, 1), Monomial{}, -1, 1));
  EXPECT_EQ(gen_psi_prime(0, 2), TermSum::single(q(-1, 4), mono({{1, 1}}), 0, -2));
  TermSum psi1;
  psi1.add(q(0, 1, 1, 8), mono({{2, 1}}), 1, -3);
  psi1.add(q(0, 1, 5, 32), mono({{1, 2}}), 1, -5);
  EXPECT_EQ(gen_psi_prime(1, 2), psi1);
}

TEST(SymbolicWkb, RemainderZeroOneTwoExact) {
  EXPECT_EQ(gen_remainder(0), TermSum::single(q(0, 1, -1, 2), mono({{1, 1}}), 0, -1));

  TermSum r1;
  r1.add(q(-1, 4), mono({{2, 1}}), 0, -2);
  r1.add(q(-5, 16), mono({{1, 2}}), 0, -4);
  EXPECT_EQ(gen_remainder(1), r1);

  TermSum r2;
  r2.add(q(0, 1, 1, 8), mono({{3, 1}}), 0, -3);
  r2.add(q(0, 1, 9, 16), mono({{1, 1}, {2, 1}}), 0, -5);
  r2.add(q(0, 1, 15, 32), mono({{1, 3}}), 0, -7);
  r2.add(q(1, 64), mono({{2, 2}}), 0, -6);
  r2.add(q(5, 128), mono({{1, 2}, {2, 1}}), 0, -8);
  r2.add(q(25, 1024), mono({{1, 4}}), 0, -10);
  EXPECT_EQ(gen_remainder(2), r2);
}

TEST(SymbolicWkb, RemainderAgreesWithDirectExpansion) {
  for (int n = 0; n <= 6; ++n) EXPECT_EQ(gen_remainder(n), direct_remainder(n)) << "n = " << n;
}

TEST(SymbolicWkb, ConstantPotentialKillsRemainder) {
  for (int n = 0; n <= 6; ++n) EXPECT_TRUE(kill_derivatives(gen_remainder(n)).empty()) << "n = " << n;
}

TEST(SymbolicWkb, DeriveExamples) {
  TermSum root = TermSum::single(q(1, 1), Monomial{}, 0, 1);
  EXPECT_EQ(t_derive(root), TermSum::single(q(-1, 2), mono({{1, 1}}), 0, -1));

  TermSum s = TermSum::single(q(1, 1), mono({{1, 1}}), 0, -2);
  TermSum expect;
  expect.add(q(1, 1), mono({{2, 1}}), 0, -2);
  expect.add(q(1, 1), mono({{1, 2}}), 0, -4);
  EXPECT_EQ(t_derive(s), expect);
}

TEST(SymbolicWkb, DeriveRaisesWeightAndOrderWithoutResolventFactor) {
  TermSum s;
  s.add(q(3, 7), mono({{1, 2}, {3, 1}}), 0, 0);
  for (const Term& t : t_derive(s).terms()) {
    EXPECT_EQ(t.mono.weight(), 6);
    EXPECT_EQ(t.mono.count(), 3);
    EXPECT_LE(t.mono.max_order(), 4);
  }
}

TEST(SymbolicWkb, MulExamples) {
  TermSum v1 = TermSum::single(q(1, 1), mono({{1, 1}}), 0, 0);
  TermSum sq = t_mul(v1, v1);
  ASSERT_EQ(sq.size(), 1u);
  EXPECT_EQ(sq.terms()[0].mono.count(), 2);
  EXPECT_EQ(sq.terms()[0].mono.weight(), 2);

  TermSum c = TermSum::single(q(2, 3, 1, 5), Monomial{}, 0, 0);
  TermSum s = gen_remainder(2);
  EXPECT_EQ(t_mul(c, s), s.scaled(q(2, 3, 1, 5)));
}

TEST(SymbolicWkb, RandomMulIndexBookkeeping) {
  std::mt19937 rng(12345);
  std::uniform_int_distribution<int> order(1, 5), power(1, 3), nf(0, 3), nterms(1, 4), num(-9, 9), den(1, 8);
  auto random_sum = [&] {
    TermSum s;
    int t = nterms(rng);
    for (int i = 0; i < t; ++i) {
      Monomial m;
      int f = nf(rng);
      for (int j = 0; j < f; ++j) m = m.with_change(order(rng), power(rng));
      int n = num(rng);
      if (n == 0) n = 1;
      s.add(q(n, den(rng), num(rng), den(rng)), m, num(rng) % 3, num(rng) % 4);
    }
    return s;
  };
  for (int trial = 0; trial < 200; ++trial) {
    TermSum a = random_sum(), b = random_sum();
    for (const Term& t : t_mul(a, b).terms()) {
      bool found = false;
      for (const Term& x : a.terms())
        for (const Term& y : b.terms()) {
          if (x.lam_half_pow + y.lam_half_pow != t.lam_half_pow) continue;
          if (x.res_half_pow + y.res_half_pow != t.res_half_pow) continue;
          if (!(x.mono.times(y.mono) == t.mono)) continue;
          EXPECT_EQ(t.mono.count(), x.mono.count() + y.mono.count());
          EXPECT_EQ(t.mono.weight(), x.mono.weight() + y.mono.weight());
          EXPECT_LE(t.mono.max_order(), std::max(x.mono.max_order(), y.mono.max_order()));
          found = true;
        }
      EXPECT_TRUE(found);
    }
  }
}

TEST(SymbolicWkb, StructureLemmaAtDeskScale) {
  for (int k = -1; k <= 4; ++k)
    for (int m = 1; m <= 6 - k; ++m) {
      StructureReport rep = structure_check(gen_psi_derivative(k, m, 5), k, m);
      EXPECT_TRUE(rep.ok) << "k=" << k << " m=" << m << " " << (rep.violations.empty() ? "" : rep.violations[0]);
    }
}

TEST(SymbolicWkb, StructureCheckFlagsConstantMonomial) {
  TermSum bad = gen_psi_prime(1, 2);
  bad.add(q(1, 1), Monomial{}, 1, -1);
  StructureReport rep = structure_check(bad, 1, 1);
  EXPECT_FALSE(rep.ok);
  EXPECT_FALSE(rep.violations.empty());
}

TEST(SymbolicWkb, RemainderShape) {
  for (int n = 0; n <= 5; ++n) {
    StructureReport rep = remainder_shape_check(gen_remainder(n), n);
    EXPECT_TRUE(rep.ok) << "n=" << n << " " << (rep.violations.empty() ? "" : rep.violations[0]);
  }
}

TEST(SymbolicWkb, DeterministicDump) {
  const std::string a = gen_remainder(3).to_string();
  const std::string b = direct_remainder(3).to_string();
  EXPECT_EQ(a, b);
  EXPECT_NE(a.find("V^(4)"), std::string::npos);
  // Terms are listed in lexicographic order of their (order, power) factor lists.
  EXPECT_EQ(gen_remainder(1).to_string(), "-5/16 * V^(1)^2 * λ^{0/2} * (λ-V)^{-4/2}\n-1/4 * V^(2) * λ^{0/2} * (λ-V)^{-2/2}\n");
}

TEST(SymbolicWkb, KOutOfRange) {
  EXPECT_THROW(gen_psi_prime(2, 2), Error);
  EXPECT_THROW(gen_psi_prime(-2, 2), Error);
}

TEST(SymbolicWkb, GeneratesUpToMemoLimit) {
  TermSum r8 = gen_remainder(8);
  EXPECT_FALSE(r8.empty());
  EXPECT_TRUE(kill_derivatives(r8).empty());
  EXPECT_EQ(r8.max_derivative_order(), 9);
}
