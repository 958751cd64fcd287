#pragma once

// Exact term algebra for the WKB coefficients. A term is
//   coeff * prod_i (V^(i))^{a_i} * lambda^{p/2} * (lambda - V)^{q/2}
// with a Gaussian-rational coefficient and integer half-powers p, q.

#include <gmpxx.h>

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "pseudomode/errors.hpp"

namespace pm {

struct GaussianRational {
  mpq_class re{0};
  mpq_class im{0};

  GaussianRational() = default;
  GaussianRational(mpq_class r, mpq_class i) : re(std::move(r)), im(std::move(i)) {
    re.canonicalize();
    im.canonicalize();
  }
  static GaussianRational from_ints(long re_num, long re_den, long im_num = 0, long im_den = 1);

  bool is_zero() const { return re == 0 && im == 0; }
  cplx to_complex() const { return {re.get_d(), im.get_d()}; }
  std::string to_string() const;

  GaussianRational& operator+=(const GaussianRational& o);
  GaussianRational& operator-=(const GaussianRational& o);
  friend GaussianRational operator+(GaussianRational a, const GaussianRational& b) { return a += b; }
  friend GaussianRational operator-(GaussianRational a, const GaussianRational& b) { return a -= b; }
  friend GaussianRational operator*(const GaussianRational& a, const GaussianRational& b);
  friend bool operator==(const GaussianRational& a, const GaussianRational& b) {
    return a.re == b.re && a.im == b.im;
  }
};

// Multiset {derivative order -> power}, stored sorted by order.
struct Monomial {
  std::vector<std::pair<int, int>> factors;

  static Monomial single(int order, int power = 1);
  bool empty() const { return factors.empty(); }
  int weight() const;     // r = sum i * a_i
  int count() const;      // j = sum a_i
  int max_order() const;  // s-type bound, 0 for the constant monomial
  int power_of(int order) const;
  Monomial times(const Monomial& o) const;
  Monomial with_change(int order, int delta) const;

  friend bool operator<(const Monomial& a, const Monomial& b) { return a.factors < b.factors; }
  friend bool operator==(const Monomial& a, const Monomial& b) { return a.factors == b.factors; }
};

struct Term {
  GaussianRational coeff;
  Monomial mono;
  int lam_half_pow = 0;
  int res_half_pow = 0;
};

class TermSum {
 public:
  using Key = std::pair<Monomial, std::pair<int, int>>;

  TermSum() = default;
  static TermSum single(const GaussianRational& c, const Monomial& mono, int lam_half_pow, int res_half_pow);

  void add(const GaussianRational& c, const Monomial& mono, int lam_half_pow, int res_half_pow);
  void add(const Term& t) { add(t.coeff, t.mono, t.lam_half_pow, t.res_half_pow); }

  TermSum& operator+=(const TermSum& o);
  TermSum& operator-=(const TermSum& o);
  friend TermSum operator+(TermSum a, const TermSum& b) { return a += b; }
  friend TermSum operator-(TermSum a, const TermSum& b) { return a -= b; }
  friend bool operator==(const TermSum& a, const TermSum& b) { return a.terms_ == b.terms_; }

  TermSum scaled(const GaussianRational& c) const;
  TermSum shifted(int d_lam, int d_res) const;  // multiply by lambda^{d_lam/2} (lambda-V)^{d_res/2}

  bool empty() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }
  std::vector<Term> terms() const;
  int max_derivative_order() const;
  GaussianRational coefficient(const Monomial& mono, int lam_half_pow, int res_half_pow) const;

  // Canonical dump, one term per line.
  std::string to_string() const;

 private:
  std::map<Key, GaussianRational> terms_;
};

TermSum t_derive(const TermSum& s);
TermSum t_mul(const TermSum& a, const TermSum& b);

// psi_k' for k in [-1, n-1]; memoized for n up to the memo limit.
TermSum gen_psi_prime(int k, int n);

// psi_k^(m): psi_k' differentiated m - 1 times.
TermSum gen_psi_derivative(int k, int m, int n);

// r_n with the zero convention for out-of-range psi.
TermSum gen_remainder(int n);

// Substitutes V^(i) -> 0 for i >= 1 (constant potential).
TermSum kill_derivatives(const TermSum& s);

void set_memo_limit(int n_max);
int memo_limit();

struct StructureReport {
  bool ok = true;
  std::vector<std::string> violations;
};

// Checks psi_k^(m) against the normal form
//   lambda^{k/2} (lambda-V)^{-k/2} sum_{j=0}^{k+m} T_j^{k+m, k+m+1-j} / (lambda-V)^j,
// including the exclusion of constant monomials when k + m >= 1.
StructureReport structure_check(const TermSum& s, int k, int m);

// Checks r_n against the remainder template: the V^(n+1) (lambda-V)^{-(n+1)/2} head term,
// or (lambda-V)^{-(n-1+k)/2 - l} T_l^{n+1+k, n} with 0 <= k <= n-1 and 2 <= l <= n+1+k.
StructureReport remainder_shape_check(const TermSum& r, int n);

// (j, r) index pair of a monomial.
inline std::pair<int, int> t_indices(const Monomial& m) { return {m.count(), m.weight()}; }

}  // namespace pm
