#include "pseudomode/oracle.hpp"

#include <complex>
#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "pseudomode/parallel.hpp"

namespace pm {

namespace {

double weighted_norm(const std::vector<cplx>& v, double h) {
  double s = 0.0;
  for (const cplx& c : v) s += std::norm(c);
  return std::sqrt(h * s);
}

}  // namespace

std::vector<double> DiscreteOperator::nodes() const {
  std::vector<double> x(size);
  for (std::size_t i = 0; i < size; ++i) x[i] = node(i);
  return x;
}

std::vector<cplx> DiscreteOperator::apply(const std::vector<cplx>& v) const {
  if (v.size() != size) throw Error(ErrorCode::dimension_mismatch, "operator size and vector length differ");
  std::vector<cplx> out(size);
  for (std::size_t i = 0; i < size; ++i) {
    cplx acc = diag[i] * v[i];
    if (i > 0) acc += offdiag * v[i - 1];
    if (i + 1 < size) acc += offdiag * v[i + 1];
    out[i] = acc;
  }
  return out;
}

DiscreteOperator discretize(const Potential& p, double x_lo, double x_hi, double h, double lambda_abs) {
  if (!(x_hi > x_lo) || !(h > 0.0)) throw Error(ErrorCode::parameter_out_of_range, "invalid discretization interval or step");
  if (lambda_abs > 0.0) {
    const double limit = (2.0 * std::numbers::pi / std::sqrt(lambda_abs)) / 20.0;
    if (h > limit) {
      std::ostringstream os;
      os << "step " << h << " exceeds " << limit << " needed for |lambda| = " << lambda_abs;
      throw Error(ErrorCode::resolution_insufficient, os.str());
    }
  }
  DiscreteOperator a;
  a.x_lo = x_lo;
  a.x_hi = x_hi;
  const long intervals = std::lround((x_hi - x_lo) / h);
  if (intervals < 2) throw Error(ErrorCode::parameter_out_of_range, "interval shorter than two steps");
  a.h = (x_hi - x_lo) / static_cast<double>(intervals);
  a.size = static_cast<std::size_t>(intervals - 1);
  a.offdiag = -1.0 / (a.h * a.h);
  a.diag.resize(a.size);
  for (std::size_t i = 0; i < a.size; ++i) a.diag[i] = p.eval(0, a.node(i)) + 2.0 / (a.h * a.h);
  return a;
}

std::vector<cplx> disc_residual_vector(const DiscreteOperator& a, const std::vector<cplx>& f, cplx lambda) {
  std::vector<cplx> r = a.apply(f);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] -= lambda * f[i];
  return r;
}

double disc_residual(const DiscreteOperator& a, const std::vector<cplx>& f, cplx lambda) {
  const std::vector<cplx> r = disc_residual_vector(a, f, lambda);
  return weighted_norm(r, a.h) / weighted_norm(f, a.h);
}

SigmaMinResult sigma_min_probe(const DiscreteOperator& a, cplx lambda, double rel_tol, int max_iter) {
  const lapack_int n = static_cast<lapack_int>(a.size);
  if (n < 1) throw Error(ErrorCode::dimension_mismatch, "empty operator");
  std::vector<lapack_complex_double> dl(n > 1 ? n - 1 : 1), d(n), du(n > 1 ? n - 1 : 1), du2(n > 2 ? n - 2 : 1);
  std::vector<lapack_int> ipiv(n);
  for (lapack_int i = 0; i < n; ++i) {
    const cplx v = a.diag[i] - lambda;
    d[i] = v;
    if (i + 1 < n) dl[i] = du[i] = cplx(a.offdiag, 0.0);
  }
  if (LAPACKE_zgttrf(n, dl.data(), d.data(), du.data(), du2.data(), ipiv.data()) != 0)
    throw Error(ErrorCode::iteration_nonconvergence, "A - lambda is numerically singular");

  std::mt19937_64 rng(20240611);
  std::normal_distribution<double> normal;
  std::vector<lapack_complex_double> x(n);
  auto norm_of = [&](const std::vector<lapack_complex_double>& v) {
    double s = 0.0;
    for (const auto& c : v) s += std::norm(c);
    return std::sqrt(s);
  };
  auto scale = [&](std::vector<lapack_complex_double>& v, double s) {
    for (auto& c : v) c *= s;
  };
  for (auto& c : x) c = cplx(normal(rng), normal(rng));
  scale(x, 1.0 / norm_of(x));

  SigmaMinResult res;
  double prev = -1.0;
  for (int it = 1; it <= max_iter; ++it) {
    // (A - lambda)^{-1} then (A - lambda)^{-H}, normalizing between the solves.
    if (LAPACKE_zgttrs(LAPACK_COL_MAJOR, 'N', n, 1, dl.data(), d.data(), du.data(), du2.data(), ipiv.data(), x.data(), n) != 0)
      throw Error(ErrorCode::iteration_nonconvergence, "tridiagonal solve failed");
    const double n1 = norm_of(x);
    scale(x, 1.0 / n1);
    if (LAPACKE_zgttrs(LAPACK_COL_MAJOR, 'C', n, 1, dl.data(), d.data(), du.data(), du2.data(), ipiv.data(), x.data(), n) != 0)
      throw Error(ErrorCode::iteration_nonconvergence, "tridiagonal solve failed");
    const double n2 = norm_of(x);
    scale(x, 1.0 / n2);
    if (!std::isfinite(n1) || !std::isfinite(n2))
      throw Error(ErrorCode::iteration_nonconvergence, "inverse iteration overflowed: sigma_min below double range");
    const double sigma = 1.0 / std::sqrt(n1 * n2);
    res.iterations = it;
    if (prev > 0.0) {
      res.last_change = std::abs(sigma - prev) / sigma;
      if (res.last_change < rel_tol) {
        res.sigma_min = sigma;
        return res;
      }
    }
    prev = sigma;
  }
  std::ostringstream os;
  os << "inverse iteration did not settle in " << max_iter << " steps; last relative change " << res.last_change;
  throw Error(ErrorCode::iteration_nonconvergence, os.str());
}

double oracle_step(double lambda_abs, double target_ratio) {
  const double floor_target = target_ratio / 50.0;
  const double h = std::pow(1440.0 * floor_target / std::pow(lambda_abs, 3.0), 0.25);
  const double limit = (2.0 * std::numbers::pi / std::sqrt(lambda_abs)) / 20.0;
  return std::min(h, limit);
}

OracleCheck oracle_cross_check(const Potential& p, cplx lambda, const ExpansionConfig& cfg, const CutoffSpec& spec,
                               double h, double analytic_ratio, bool with_sigma_min) {
  const double pad = 0.25 * std::max(spec.Delta_minus, spec.Delta_plus) + 10.0 * h;
  const double lo = spec.j_lo() - pad, hi = spec.j_hi() + pad;
  const DiscreteOperator coarse = discretize(p, lo, hi, h, std::abs(lambda));
  const DiscreteOperator fine = discretize(p, lo, hi, coarse.h / 2.0, std::abs(lambda));

  double log_g_scale = 1.0;
  auto samples = [&](const DiscreteOperator& a) {
    AssembleOptions opt;
    opt.explicit_nodes = a.nodes();
    ExpansionConfig c = cfg;
    c.base_point = spec.center;
    const PseudomodeGrid grid = assemble(p, lambda, c, spec, opt);
    for (std::size_t i = 0; i < grid.size(); ++i) log_g_scale = std::max(log_g_scale, std::abs(grid.log_g_hi[i]));
    return grid.f_vals();
  };
  const std::vector<cplx> f_coarse = samples(coarse), f_fine = samples(fine);
  const std::vector<cplx> r_coarse = disc_residual_vector(coarse, f_coarse, lambda);
  const std::vector<cplx> r_fine = disc_residual_vector(fine, f_fine, lambda);

  std::vector<cplx> r_fine_on_coarse(coarse.size), extrapolated(coarse.size);
  for (std::size_t i = 0; i < coarse.size; ++i) {
    r_fine_on_coarse[i] = r_fine[2 * i + 1];
    extrapolated[i] = (4.0 * r_fine_on_coarse[i] - r_coarse[i]) / 3.0;
  }
  OracleCheck out;
  out.size = coarse.size;
  out.analytic_ratio = analytic_ratio;
  const double f_norm = weighted_norm(f_coarse, coarse.h);
  out.disc_ratio_h = weighted_norm(r_coarse, coarse.h) / f_norm;
  out.disc_ratio_half = disc_residual(fine, f_fine, lambda);
  out.disc_ratio_richardson = weighted_norm(extrapolated, coarse.h) / f_norm;
  // Truncation of the extrapolated stencil plus rounding of samples whose phase reaches |log g|.
  const double truncation = std::pow(std::abs(lambda), 3.0) * std::pow(coarse.h, 4.0) / 1440.0;
  const double rounding = 4.0 * std::numeric_limits<double>::epsilon() * log_g_scale / (fine.h * fine.h);
  out.floor_estimate = truncation + rounding;
  out.floor_limited = analytic_ratio < 5.0 * out.floor_estimate;
  out.relative_gap = std::abs(out.disc_ratio_richardson - analytic_ratio) / analytic_ratio;
  if (with_sigma_min) out.sigma_min = sigma_min_probe(coarse, lambda).sigma_min;
  return out;
}

}  // namespace pm
