#include "pseudomode/residual.hpp"

#include <algorithm>
#include <numeric>

#include "pseudomode/parallel.hpp"

namespace pm {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Weights of int_{x0}^{x2} f for a quadratic through three nonuniform points.
void simpson_pair(double x0, double x1, double x2, double& w0, double& w1, double& w2) {
  const double h0 = x1 - x0, h1 = x2 - x1, s = h0 + h1;
  w0 = s / 6.0 * (2.0 - h1 / h0);
  w1 = s * s * s / (6.0 * h0 * h1);
  w2 = s / 6.0 * (2.0 - h0 / h1);
}

// Weights of int_{x1}^{x2} f for the quadratic through x0, x1, x2.
void last_interval(double x0, double x1, double x2, double& w0, double& w1, double& w2) {
  const double h0 = x1 - x0, h1 = x2 - x1;
  w0 = -h1 * h1 * h1 / (6.0 * h0 * (h0 + h1));
  w1 = h1 * (h1 + 3.0 * h0) / (6.0 * h0);
  w2 = h1 * (2.0 * h1 + 3.0 * h0) / (6.0 * (h0 + h1));
}

}  // namespace

std::vector<double> simpson_weights(const std::vector<double>& x) {
  const std::size_t count = x.size();
  if (count < 2) throw Error(ErrorCode::insufficient_points, "quadrature needs at least two nodes");
  std::vector<double> w(count, 0.0);
  if (count == 2) {
    w[0] = w[1] = 0.5 * (x[1] - x[0]);
    return w;
  }
  const std::size_t intervals = count - 1;
  const std::size_t paired = intervals - intervals % 2;
  for (std::size_t i = 0; i + 2 <= paired; i += 2) {
    double a, b, c;
    simpson_pair(x[i], x[i + 1], x[i + 2], a, b, c);
    w[i] += a;
    w[i + 1] += b;
    w[i + 2] += c;
  }
  if (paired < intervals) {
    double a, b, c;
    last_interval(x[count - 3], x[count - 2], x[count - 1], a, b, c);
    w[count - 3] += a;
    w[count - 2] += b;
    w[count - 1] += c;
  }
  return w;
}

double l2_norm(const std::vector<double>& nodes, const std::vector<cplx>& values, ExecPolicy policy) {
  if (nodes.size() != values.size()) throw Error(ErrorCode::dimension_mismatch, "l2_norm: nodes and values differ in size");
  const std::vector<double> w = simpson_weights(nodes);
  const double s = reduce_sum<double>(policy, nodes.size(), [&](std::size_t i) { return w[i] * std::norm(values[i]); });
  return std::sqrt(std::max(s, 0.0));
}

double log_l2_norm(const std::vector<double>& nodes, const std::vector<double>& weights,
                   const std::vector<double>& magnitudes, const std::vector<double>& log_scale, ExecPolicy policy) {
  const std::size_t count = nodes.size();
  auto log_term = [&](std::size_t i) {
    return magnitudes[i] > 0.0 ? std::log(magnitudes[i]) + log_scale[i] : kNegInf;
  };
  const double peak = reduce_max(policy, count, kNegInf, log_term);
  if (peak == kNegInf) return kNegInf;
  const double s = reduce_sum<double>(policy, count, [&](std::size_t i) {
    const double l = log_term(i);
    return l == kNegInf ? 0.0 : weights[i] * std::exp(2.0 * (l - peak));
  });
  // Negative Simpson weights on strongly graded pairs could push a near-zero sum negative.
  return s > 0.0 ? peak + 0.5 * std::log(s) : kNegInf;
}

ResidualReport report(const PseudomodeGrid& grid, ExecPolicy policy) {
  const std::size_t count = grid.size();
  const std::vector<double> w = simpson_weights(grid.nodes);
  std::vector<double> log_g(count);
  for (std::size_t i = 0; i < count; ++i) log_g[i] = grid.log_abs_g(i);

  std::vector<double> mag_f(count), mag_total(count), mag_pp(count), mag_p(count), mag_sigma(count), mag_extra(count);
  const bool split_head = grid.mode == ResidualMode::extra_term;
  const bool has_extra = !grid.extra_potential.empty();
  for_each_index(policy, count, [&](std::size_t i) {
    mag_f[i] = std::abs(grid.xi[i]);
    mag_total[i] = std::abs(grid.residual_factor(i));
    mag_pp[i] = std::abs(grid.xi_pp[i]);
    mag_p[i] = 2.0 * std::abs(grid.xi_p[i] * grid.phi_prime[i]);
    const cplx r = split_head ? grid.remainder[i] - grid.head[i] : grid.remainder[i];
    mag_sigma[i] = std::abs(grid.xi[i] * r);
    if (split_head)
      mag_extra[i] = std::abs(grid.xi[i] * grid.head[i]);
    else if (has_extra)
      mag_extra[i] = std::abs(grid.xi[i] * grid.extra_potential[i]);
    else
      mag_extra[i] = 0.0;
  });

  auto lnorm = [&](const std::vector<double>& mag) { return log_l2_norm(grid.nodes, w, mag, log_g, policy); };
  auto log_add = [](double a, double b) {
    if (a == kNegInf) return b;
    if (b == kNegInf) return a;
    const double m = std::max(a, b);
    return m + std::log(std::exp(a - m) + std::exp(b - m));
  };

  ResidualReport r;
  r.lambda = grid.lambda;
  r.log_f_norm = lnorm(mag_f);
  r.log_residual_norm = lnorm(mag_total);
  r.log_ratio = r.log_residual_norm - r.log_f_norm;
  r.log_kappa = log_add(lnorm(mag_pp), lnorm(mag_p)) - r.log_f_norm;
  r.log_sigma = lnorm(mag_sigma) - r.log_f_norm;
  r.log_extra = (split_head || has_extra) ? lnorm(mag_extra) - r.log_f_norm : kNegInf;
  r.f_norm = std::exp(r.log_f_norm);
  r.residual_norm = std::exp(r.log_residual_norm);
  r.ratio = std::exp(r.log_ratio);
  r.kappa = std::exp(r.log_kappa);
  r.sigma = std::exp(r.log_sigma);
  r.extra = std::exp(r.log_extra);
  r.delta_minus = grid.cutoff.delta_minus;
  r.delta_plus = grid.cutoff.delta_plus;
  r.Delta_minus = grid.cutoff.Delta_minus;
  r.Delta_plus = grid.cutoff.Delta_plus;
  r.x_b = grid.cutoff.x_b;
  r.nodes = count;
  return r;
}

const char* field_name(ReportField f) {
  switch (f) {
    case ReportField::ratio: return "ratio";
    case ReportField::kappa: return "kappa";
    case ReportField::sigma: return "sigma";
    case ReportField::extra: return "extra";
    case ReportField::f_norm: return "f_norm";
  }
  return "?";
}

double log_field(const ResidualReport& r, ReportField f) {
  switch (f) {
    case ReportField::ratio: return r.log_ratio;
    case ReportField::kappa: return r.log_kappa;
    case ReportField::sigma: return r.log_sigma;
    case ReportField::extra: return r.log_extra;
    case ReportField::f_norm: return r.log_f_norm;
  }
  return 0.0;
}

namespace {

RateFit least_squares(const std::vector<double>& x, const std::vector<double>& y, std::size_t from) {
  const std::size_t m = x.size() - from;
  double sx = 0, sy = 0;
  for (std::size_t i = from; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / m, my = sy / m;
  double sxx = 0, sxy = 0;
  for (std::size_t i = from; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  RateFit f;
  f.slope = sxx > 0 ? sxy / sxx : 0.0;
  f.intercept = my - f.slope * mx;
  double rss = 0;
  for (std::size_t i = from; i < x.size(); ++i) {
    const double e = y[i] - (f.intercept + f.slope * x[i]);
    rss += e * e;
  }
  f.residual_of_fit = std::sqrt(rss / m);
  f.points_used = static_cast<int>(m);
  return f;
}

}  // namespace

RateFit rate_fit(const std::vector<double>& log_x, const std::vector<double>& log_y) {
  if (log_x.size() != log_y.size()) throw Error(ErrorCode::dimension_mismatch, "rate_fit: abscissa and ordinate differ");
  if (log_x.size() < 4) throw Error(ErrorCode::insufficient_points, "rate_fit needs at least 4 points");
  for (double v : log_y)
    if (!std::isfinite(v)) throw Error(ErrorCode::insufficient_points, "rate_fit: non-finite log value");
  std::vector<std::size_t> order(log_x.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return log_x[a] < log_x[b]; });
  std::vector<double> x, y;
  for (std::size_t i : order) {
    x.push_back(log_x[i]);
    y.push_back(log_y[i]);
  }
  RateFit all = least_squares(x, y, 0);
  const std::size_t drop = x.size() / 2;
  if (x.size() - drop >= 4) {
    RateFit tail = least_squares(x, y, drop);
    if (tail.residual_of_fit * 2.0 <= all.residual_of_fit) {
      tail.transient_dropped = true;
      return tail;
    }
  }
  return all;
}

RateFit rate_fit(const std::vector<ResidualReport>& reports, ReportField field) {
  if (reports.size() < 4) throw Error(ErrorCode::insufficient_points, "rate_fit needs at least 4 reports");
  std::vector<double> x, y;
  for (const auto& r : reports) {
    x.push_back(std::log(std::abs(r.lambda)));
    y.push_back(log_field(r, field));
  }
  const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
  if (*hi - *lo < 2.0 * std::log(10.0) * (1.0 - 1e-9))
    throw Error(ErrorCode::insufficient_points, "rate_fit needs |lambda| spread over at least two decades");
  return rate_fit(x, y);
}

}  // namespace pm
