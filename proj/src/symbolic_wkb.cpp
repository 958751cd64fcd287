#include "pseudomode/symbolic_wkb.hpp"

#include <algorithm>
#include <mutex>
#include <sstream>

namespace pm {

// ---------------------------------------------------------------- GaussianRational

GaussianRational GaussianRational::from_ints(long re_num, long re_den, long im_num, long im_den) {
  return GaussianRational(mpq_class(re_num, re_den), mpq_class(im_num, im_den));
}

GaussianRational& GaussianRational::operator+=(const GaussianRational& o) {
  re += o.re;
  im += o.im;
  return *this;
}

GaussianRational& GaussianRational::operator-=(const GaussianRational& o) {
  re -= o.re;
  im -= o.im;
  return *this;
}

GaussianRational operator*(const GaussianRational& a, const GaussianRational& b) {
  GaussianRational r;
  r.re = a.re * b.re - a.im * b.im;
  r.im = a.re * b.im + a.im * b.re;
  return r;
}

std::string GaussianRational::to_string() const {
  std::ostringstream os;
  if (im == 0) {
    os << re.get_str();
  } else if (re == 0) {
    os << im.get_str() << "i";
  } else {
    os << "(" << re.get_str() << (im > 0 ? "+" : "") << im.get_str() << "i)";
  }
  return os.str();
}

// ---------------------------------------------------------------- Monomial

Monomial Monomial::single(int order, int power) {
  Monomial m;
  if (power > 0) m.factors.emplace_back(order, power);
  return m;
}

int Monomial::weight() const {
  int r = 0;
  for (auto [i, a] : factors) r += i * a;
  return r;
}

int Monomial::count() const {
  int j = 0;
  for (auto [i, a] : factors) j += a;
  return j;
}

int Monomial::max_order() const { return factors.empty() ? 0 : factors.back().first; }

int Monomial::power_of(int order) const {
  for (auto [i, a] : factors)
    if (i == order) return a;
  return 0;
}

Monomial Monomial::with_change(int order, int delta) const {
  Monomial out;
  bool placed = false;
  for (auto [i, a] : factors) {
    if (!placed && i >= order) {
      placed = true;
      if (i == order) {
        if (a + delta > 0) out.factors.emplace_back(i, a + delta);
        continue;
      }
      if (delta > 0) out.factors.emplace_back(order, delta);
    }
    out.factors.emplace_back(i, a);
  }
  if (!placed && delta > 0) out.factors.emplace_back(order, delta);
  return out;
}

Monomial Monomial::times(const Monomial& o) const {
  Monomial out = *this;
  for (auto [i, a] : o.factors) out = out.with_change(i, a);
  return out;
}

// ---------------------------------------------------------------- TermSum

TermSum TermSum::single(const GaussianRational& c, const Monomial& mono, int lam_half_pow, int res_half_pow) {
  TermSum s;
  s.add(c, mono, lam_half_pow, res_half_pow);
  return s;
}

void TermSum::add(const GaussianRational& c, const Monomial& mono, int lam_half_pow, int res_half_pow) {
  if (c.is_zero()) return;
  Key key{mono, {lam_half_pow, res_half_pow}};
  auto it = terms_.find(key);
  if (it == terms_.end()) {
    terms_.emplace(std::move(key), c);
    return;
  }
  it->second += c;
  if (it->second.is_zero()) terms_.erase(it);
}

TermSum& TermSum::operator+=(const TermSum& o) {
  for (const auto& [k, c] : o.terms_) add(c, k.first, k.second.first, k.second.second);
  return *this;
}

TermSum& TermSum::operator-=(const TermSum& o) {
  for (const auto& [k, c] : o.terms_) {
    GaussianRational neg;
    neg -= c;
    add(neg, k.first, k.second.first, k.second.second);
  }
  return *this;
}

TermSum TermSum::scaled(const GaussianRational& c) const {
  TermSum out;
  for (const auto& [k, v] : terms_) out.add(v * c, k.first, k.second.first, k.second.second);
  return out;
}

TermSum TermSum::shifted(int d_lam, int d_res) const {
  TermSum out;
  for (const auto& [k, v] : terms_) out.add(v, k.first, k.second.first + d_lam, k.second.second + d_res);
  return out;
}

std::vector<Term> TermSum::terms() const {
  std::vector<Term> out;
  out.reserve(terms_.size());
  for (const auto& [k, v] : terms_) out.push_back(Term{v, k.first, k.second.first, k.second.second});
  return out;
}

int TermSum::max_derivative_order() const {
  int m = 0;
  for (const auto& [k, v] : terms_) m = std::max(m, k.first.max_order());
  return m;
}

GaussianRational TermSum::coefficient(const Monomial& mono, int lam_half_pow, int res_half_pow) const {
  auto it = terms_.find(Key{mono, {lam_half_pow, res_half_pow}});
  return it == terms_.end() ? GaussianRational{} : it->second;
}

std::string TermSum::to_string() const {
  if (terms_.empty()) return "0\n";
  std::ostringstream os;
  for (const auto& [k, c] : terms_) {
    os << c.to_string();
    for (auto [i, a] : k.first.factors) {
      os << " * V^(" << i << ")";
      if (a != 1) os << "^" << a;
    }
    os << " * λ^{" << k.second.first << "/2} * (λ-V)^{" << k.second.second << "/2}\n";
  }
  return os.str();
}

// ---------------------------------------------------------------- algebra

TermSum t_derive(const TermSum& s) {
  TermSum out;
  for (const Term& t : s.terms()) {
    // Product rule on the monomial.
    for (auto [i, a] : t.mono.factors) {
      Monomial m = t.mono.with_change(i, -1).with_change(i + 1, 1);
      out.add(t.coeff * GaussianRational::from_ints(a, 1), m, t.lam_half_pow, t.res_half_pow);
    }
    // d/dx (lambda-V)^{q/2} = -(q/2) V' (lambda-V)^{q/2 - 1}.
    if (t.res_half_pow != 0) {
      Monomial m = t.mono.with_change(1, 1);
      out.add(t.coeff * GaussianRational::from_ints(-t.res_half_pow, 2), m, t.lam_half_pow, t.res_half_pow - 2);
    }
  }
  return out;
}

TermSum t_mul(const TermSum& a, const TermSum& b) {
  TermSum out;
  const auto ta = a.terms();
  const auto tb = b.terms();
  for (const Term& x : ta)
    for (const Term& y : tb)
      out.add(x.coeff * y.coeff, x.mono.times(y.mono), x.lam_half_pow + y.lam_half_pow,
              x.res_half_pow + y.res_half_pow);
  return out;
}

TermSum kill_derivatives(const TermSum& s) {
  TermSum out;
  for (const Term& t : s.terms())
    if (t.mono.empty()) out.add(t);
  return out;
}

// ---------------------------------------------------------------- generation

namespace {

std::mutex g_memo_mutex;
int g_memo_limit = 8;
std::map<int, TermSum> g_psi_memo;  // k -> psi_k'
std::map<int, TermSum> g_rem_memo;  // n -> r_n

TermSum psi_minus1_prime() {
  return TermSum::single(GaussianRational::from_ints(0, 1, 1, 1), Monomial{}, -1, 1);
}

// 1 / (2 psi_{-1}') = -(i/2) lambda^{1/2} (lambda-V)^{-1/2}.
TermSum inverse_two_psi_minus1() {
  return TermSum::single(GaussianRational::from_ints(0, 1, -1, 2), Monomial{}, 1, -1);
}

TermSum psi_prime_unmemoized(int k);

TermSum psi_prime_cached(int k) {
  {
    std::lock_guard<std::mutex> lock(g_memo_mutex);
    auto it = g_psi_memo.find(k);
    if (it != g_psi_memo.end()) return it->second;
  }
  TermSum s = psi_prime_unmemoized(k);
  if (k <= g_memo_limit) {
    std::lock_guard<std::mutex> lock(g_memo_mutex);
    g_psi_memo.emplace(k, s);
  }
  return s;
}

// psi_k' does not depend on n once k <= n - 1, since the recursion for psi_k'
// only touches psi_alpha with alpha < k.
TermSum psi_prime_unmemoized(int k) {
  if (k == -1) return psi_minus1_prime();
  const int prev = k - 1;
  TermSum rhs = t_derive(psi_prime_cached(prev));
  for (int alpha = 0; alpha <= prev; ++alpha) {
    const int beta = prev - alpha;
    if (beta < 0) continue;
    rhs -= t_mul(psi_prime_cached(alpha), psi_prime_cached(beta));
  }
  return t_mul(inverse_two_psi_minus1(), rhs);
}

}  // namespace

void set_memo_limit(int n_max) {
  std::lock_guard<std::mutex> lock(g_memo_mutex);
  g_memo_limit = n_max;
}

int memo_limit() {
  std::lock_guard<std::mutex> lock(g_memo_mutex);
  return g_memo_limit;
}

TermSum gen_psi_prime(int k, int n) {
  if (n < 0 || k < -1 || k > n - 1) {
    std::ostringstream os;
    os << "k = " << k << " not in [-1, " << n - 1 << "]";
    throw Error(ErrorCode::k_out_of_range, os.str());
  }
  return psi_prime_cached(k);
}

TermSum gen_psi_derivative(int k, int m, int n) {
  if (m < 1) throw Error(ErrorCode::k_out_of_range, "derivative order m must be >= 1");
  TermSum s = gen_psi_prime(k, n);
  for (int i = 1; i < m; ++i) s = t_derive(s);
  return s;
}

TermSum gen_remainder(int n) {
  if (n < 0) throw Error(ErrorCode::k_out_of_range, "n must be >= 0");
  {
    std::lock_guard<std::mutex> lock(g_memo_mutex);
    auto it = g_rem_memo.find(n);
    if (it != g_rem_memo.end()) return it->second;
  }
  auto psi = [n](int a) { return a >= -1 && a <= n - 1 ? psi_prime_cached(a) : TermSum{}; };
  const int k_lo = n == 0 ? -1 : n - 1;
  const int k_hi = n == 0 ? -1 : 2 * (n - 1);
  TermSum r;
  for (int k = k_lo; k <= k_hi; ++k) {
    TermSum phi = k <= n - 1 ? t_derive(psi(k)) : TermSum{};
    for (int alpha = -1; alpha <= n - 1; ++alpha) {
      const int beta = k - alpha;
      if (beta < -1 || beta > n - 1) continue;
      phi -= t_mul(psi(alpha), psi(beta));
    }
    r += phi.shifted(-k, 0);
  }
  if (n <= memo_limit()) {
    std::lock_guard<std::mutex> lock(g_memo_mutex);
    g_rem_memo.emplace(n, r);
  }
  return r;
}

// ---------------------------------------------------------------- structure checks

namespace {

std::string describe(const Term& t) {
  TermSum s;
  s.add(t);
  std::string str = s.to_string();
  if (!str.empty() && str.back() == '\n') str.pop_back();
  return str;
}

}  // namespace

StructureReport structure_check(const TermSum& s, int k, int m) {
  StructureReport rep;
  const int r = k + m;
  auto fail = [&](const Term& t, const std::string& why) {
    rep.ok = false;
    rep.violations.push_back(why + ": " + describe(t));
  };
  for (const Term& t : s.terms()) {
    if (t.lam_half_pow != k) {
      fail(t, "lambda prefactor mismatch");
      continue;
    }
    const int extra = -k - t.res_half_pow;  // equals 2 j
    if (extra < 0 || extra % 2 != 0) {
      fail(t, "(lambda-V) power not of the form -k/2 - j");
      continue;
    }
    const int j = extra / 2;
    if (j > r) fail(t, "j exceeds k + m");
    if (t.mono.count() != j) fail(t, "factor count differs from j");
    if (t.mono.weight() != r) fail(t, "weight differs from k + m");
    if (t.mono.max_order() > r + 1 - j) fail(t, "derivative order exceeds k + m + 1 - j");
    if (r >= 1 && t.mono.empty()) fail(t, "constant monomial with r >= 1");
  }
  return rep;
}

StructureReport remainder_shape_check(const TermSum& rsum, int n) {
  StructureReport rep;
  for (const Term& t : rsum.terms()) {
    bool matched = false;
    if (t.lam_half_pow == 0) {
      if (t.mono == Monomial::single(n + 1) && t.res_half_pow == -(n + 1)) matched = true;
      for (int k = 0; k <= n - 1 && !matched; ++k) {
        for (int l = 2; l <= n + 1 + k && !matched; ++l) {
          if (t.res_half_pow != -(n - 1 + k) - 2 * l) continue;
          if (t.mono.count() != l || t.mono.weight() != n + 1 + k) continue;
          if (t.mono.max_order() > n) continue;
          matched = true;
        }
      }
    }
    if (!matched) {
      rep.ok = false;
      rep.violations.push_back("no template match: " + describe(t));
    }
  }
  return rep;
}

}  // namespace pm
