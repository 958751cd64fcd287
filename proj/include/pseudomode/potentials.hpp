#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pseudomode/errors.hpp"

namespace pm {

enum class Domain { full_line, half_line_positive, half_line_negative };

const char* domain_name(Domain d);

// Region where a potential varies on a scale the decay-driven grid would miss.
struct ResolutionWindow {
  double lo = 0.0;
  double hi = 0.0;
  int min_nodes = 0;
};

struct PotentialMeta {
  std::string name;
  int max_order = 1;
  Domain domain = Domain::full_line;
  double nu_minus = -1.0;
  double nu_plus = -1.0;
  bool bounded_minus = false;
  bool bounded_plus = false;
  double eps1 = 0.05;
  double eps2 = 0.25;
  std::optional<double> gamma_im;
  std::optional<std::pair<double, double>> gamma_pm;
  std::optional<double> beta_re;
};

class Potential {
 public:
  explicit Potential(PotentialMeta meta) : meta_(std::move(meta)) {}
  virtual ~Potential() = default;

  const PotentialMeta& meta() const { return meta_; }
  int max_order() const { return meta_.max_order; }
  bool in_domain(double x) const;

  // V^(m)(x). Throws order_exceeds_max / point_outside_domain.
  cplx eval(int m, double x) const;

  // out[0..m_max] = V(x), V'(x), ..., V^(m_max)(x).
  void eval_all(double x, int m_max, cplx* out) const;

  virtual std::vector<ResolutionWindow> windows() const { return {}; }

 protected:
  virtual void eval_impl(double x, int m_max, cplx* out) const = 0;

 private:
  PotentialMeta meta_;
};

using PotentialPtr = std::shared_ptr<const Potential>;

// Non-smooth part of a split: evaluator plus the points where it jumps or kinks.
struct RoughPart {
  std::function<cplx(double)> eval;
  std::function<std::vector<double>(double, double)> breakpoints;  // sorted, inside (lo, hi)
  bool identically_zero = false;
  std::optional<std::pair<double, double>> support;
  double beta_minus = 0.0, beta_plus = 0.0;
  double gamma_minus = 0.0, gamma_plus = 0.0;
};

struct SingularSplit {
  std::string name;
  PotentialPtr v_regular;
  RoughPart w1;
  RoughPart w2;
  double margin_eps = 0.5;  // |Im W1| <= (1 - margin_eps) |Im V|
  // Full rough part W1 + W2.
  cplx w_total(double x) const;
  std::vector<double> w_breakpoints(double lo, double hi) const;
};

struct Params {
  std::map<std::string, double> scalars;
  std::vector<cplx> coeffs;  // custom_polynomial only, ascending powers
  double get(const std::string& key, double fallback) const;
  bool has(const std::string& key) const { return scalars.count(key) != 0; }
};

std::vector<std::string> builtin_names();

// Split names return the regular part; use split_singular for the full split.
PotentialPtr make_builtin(const std::string& name, const Params& params);

SingularSplit split_singular(const std::string& name, const Params& params);

// V(x) = U(x) / h^2, used by the semiclassical regime.
PotentialPtr make_scaled(PotentialPtr base, double factor);

// Smooth plateau used by the splits: 1 on [-inner, inner], 0 outside (-outer, outer).
double eta_plateau(double x, double inner, double outer);

}  // namespace pm
