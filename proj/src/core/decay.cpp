#include "core/decay.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "core/errors.hpp"
#include "core/spectral.hpp"

namespace nsprofile {
namespace {

DecayFit linear_fit(std::span<const double> x, std::span<const double> y, FitWindow window) {
  const double m = static_cast<double>(window.size());
  double sx = 0.0, sy = 0.0;
  for (std::size_t i = window.begin; i < window.end; ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / m, my = sy / m;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = window.begin; i < window.end; ++i) {
    const double dx = x[i] - mx, dy = y[i] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (sxx <= 0.0) throw std::invalid_argument("fit window has no spread in the abscissa");
  DecayFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r_squared = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  fit.window = window;
  return fit;
}

void check_window(const DecaySeries& series, FitWindow window) {
  if (series.times.size() != series.values.size())
    throw std::invalid_argument("series times and values differ in length");
  if (window.end > series.times.size() || window.size() < 2)
    throw std::invalid_argument("fit window needs at least two points inside the series");
  for (std::size_t i = window.begin; i < window.end; ++i)
    if (!(series.values[i] > 0.0)) throw std::invalid_argument("fit needs positive values");
}

RealVec axis_of(std::span<const double> P0) {
  if (norm_sq(P0) > 0.0) return RealVec(P0.begin(), P0.end());
  return {};
}

// Buffer reused by a worker thread across field evaluations.
std::span<cplx> scratch(std::size_t size) {
  thread_local ComplexVec buf;
  if (buf.size() < size) buf.resize(size);
  return {buf.data(), size};
}

ZoneIntegrand velocity_integrand(const ModelParams& params, const InitialData& data) {
  ZoneIntegrand z;
  z.components = params.n;
  z.axis = axis_of(data.amplitude_v);
  z.data_width = data.width;
  return z;
}

void require_times(std::span<const double> times, double min_t) {
  if (times.size() < 2) throw std::invalid_argument("time grid needs at least two points");
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!(times[i] >= min_t)) throw std::invalid_argument("time grid entry out of range");
    if (i > 0 && !(times[i] > times[i - 1])) throw std::invalid_argument("time grid must increase");
  }
}

}  // namespace

RealVec geometric_grid(double t_min, double t_max, int points) {
  if (!(t_min > 0.0) || !(t_max > t_min) || points < 2)
    throw std::invalid_argument("geometric grid needs 0 < t_min < t_max and two points");
  RealVec g(points);
  const double ratio = std::log(t_max / t_min) / (points - 1);
  for (int i = 0; i < points; ++i) g[i] = t_min * std::exp(ratio * i);
  g.back() = t_max;
  return g;
}

RealVec linear_grid(double t_min, double t_max, int points) {
  if (!(t_max > t_min) || points < 2)
    throw std::invalid_argument("linear grid needs t_min < t_max and two points");
  RealVec g(points);
  const double h = (t_max - t_min) / (points - 1);
  for (int i = 0; i < points; ++i) g[i] = t_min + h * i;
  g.back() = t_max;
  return g;
}

FitWindow full_window(std::size_t count) { return {0, count}; }

FitWindow tail_window(std::size_t count, std::size_t min_points) {
  const std::size_t want = std::max((count + 1) / 2, min_points);
  const std::size_t m = std::min(want, count);
  return {count - m, count};
}

DecayFit fit_loglog(const DecaySeries& series, FitWindow window) {
  check_window(series, window);
  RealVec x(series.times.size()), y(series.times.size());
  for (std::size_t i = window.begin; i < window.end; ++i) {
    if (!(series.times[i] > 0.0)) throw std::invalid_argument("log-log fit needs positive times");
    x[i] = std::log(series.times[i]);
    y[i] = std::log(series.values[i]);
  }
  return linear_fit(x, y, window);
}

DecayFit fit_semilog(const DecaySeries& series, FitWindow window) {
  check_window(series, window);
  RealVec y(series.times.size());
  for (std::size_t i = window.begin; i < window.end; ++i) y[i] = std::log(series.values[i]);
  return linear_fit(series.times, y, window);
}

double checked_norm_sq(const ZoneIntegrand& integrand, const ModelParams& params, double t, Zone zone,
                       const QuadratureSpec& spec, const std::string& what) {
  const ZoneNorm z = zone_norm_sq(integrand, params, t, zone, spec);
  if (!z.converged)
    throw NumericalError(what + ": " + zone_name(zone) + " zone quadrature did not converge at t=" +
                         std::to_string(t));
  return z.value;
}

double velocity_norm(const ModelParams& params, const InitialData& data, double t,
                     const QuadratureSpec& spec) {
  ZoneIntegrand z = velocity_integrand(params, data);
  z.field = [params, data, t](std::span<const double> xi, std::span<cplx> out) {
    cplx rho;
    solve_exact_into(params, data, xi, t, out, rho);
  };
  return std::sqrt(checked_norm_sq(z, params, t, Zone::Full, spec, "velocity norm"));
}

ProfileErrorReport verify_profile_error(const ModelParams& params, const InitialData& data,
                                        std::span<const double> times, const QuadratureSpec& spec,
                                        double slope_tol) {
  params.validate();
  data.validate(params.n);
  require_times(times, 0.0);
  const Moments mom = moments(data);
  const std::size_t nc = static_cast<std::size_t>(params.n);

  ProfileErrorReport rep;
  rep.times.assign(times.begin(), times.end());
  for (double t : times) {
    ZoneIntegrand raw;
    raw.components = params.n;
    raw.axis = axis_of(mom.P0);
    raw.field = [&, t](std::span<const double> xi, std::span<cplx> out) {
      cplx rho;
      solve_exact_into(params, data, xi, t, out, rho);
      std::span<cplx> lead = scratch(nc);
      velocity_profile_into(params, mom.P0, mom.Q0, xi, t, lead);
      for (std::size_t j = 0; j < nc; ++j) out[j] -= lead[j];
    };
    ZoneIntegrand reduced = raw;
    reduced.field = [&, t](std::span<const double> xi, std::span<cplx> out) {
      cplx rho;
      solve_exact_into(params, data, xi, t, out, rho);
      std::span<cplx> tmp = scratch(nc);
      velocity_profile_into(params, mom.P0, mom.Q0, xi, t, tmp);
      for (std::size_t j = 0; j < nc; ++j) out[j] -= tmp[j];
      e0_term_into(params, data, xi, t, tmp);
      for (std::size_t j = 0; j < nc; ++j) out[j] -= tmp[j];
      e6_term_into(params, mom.P0, xi, t, tmp);
      for (std::size_t j = 0; j < nc; ++j) out[j] -= tmp[j];
    };
    rep.residual_sq.push_back(checked_norm_sq(raw, params, t, Zone::Low, spec, "profile error"));
    rep.reduced_sq.push_back(checked_norm_sq(reduced, params, t, Zone::Low, spec, "profile error"));
  }
  DecaySeries series{rep.times, rep.residual_sq, "profile_error_sq"};
  rep.fit = fit_loglog(series, tail_window(times.size()));
  rep.threshold = -(0.5 * params.n + 1.0) + slope_tol;
  rep.reduced_tighter = rep.reduced_sq.back() <= rep.residual_sq.back();
  rep.pass = rep.fit.slope <= rep.threshold;
  return rep;
}

DensityErrorReport verify_density_profile_error(const ModelParams& params, const InitialData& data,
                                                std::span<const double> times,
                                                const QuadratureSpec& spec, double slope_tol) {
  params.validate();
  data.validate(params.n);
  require_times(times, 0.0);
  const Moments mom = moments(data);
  const std::size_t nc = static_cast<std::size_t>(params.n);

  DensityErrorReport rep;
  rep.times.assign(times.begin(), times.end());
  for (double t : times) {
    ZoneIntegrand z;
    z.components = 1;
    z.axis = axis_of(mom.P0);
    z.field = [&, t](std::span<const double> xi, std::span<cplx> out) {
      std::span<cplx> v = scratch(nc);
      cplx rho;
      solve_exact_into(params, data, xi, t, v, rho);
      out[0] = rho - density_profile_value(params, mom.P0, mom.Q0, xi, t);
    };
    rep.residual_sq.push_back(checked_norm_sq(z, params, t, Zone::Low, spec, "density profile error"));
  }
  DecaySeries series{rep.times, rep.residual_sq, "density_profile_error_sq"};
  rep.fit = fit_loglog(series, tail_window(times.size()));
  rep.threshold = -(0.5 * params.n + 1.0) + slope_tol;
  rep.pass = rep.fit.slope <= rep.threshold;
  return rep;
}

void require_small_momentum(const InitialData& data, double max_ratio) {
  if (data.amplitude_rho == 0.0)
    throw std::invalid_argument("velocity rate needs nonzero total density");
  const double ratio = std::sqrt(norm_sq(data.amplitude_v)) / std::abs(data.amplitude_rho);
  if (ratio > max_ratio)
    throw std::invalid_argument("velocity rate needs |P0|/|Q0| <= " + std::to_string(max_ratio));
}

RateReport verify_velocity_rate(const ModelParams& params, const InitialData& data,
                                std::span<const double> times, const QuadratureSpec& spec,
                                double tolerance) {
  params.validate();
  data.validate(params.n);
  require_small_momentum(data);
  require_times(times, std::numeric_limits<double>::min());
  RateReport rep;
  rep.series.label = "velocity_norm";
  rep.series.times.assign(times.begin(), times.end());
  for (double t : times) rep.series.values.push_back(velocity_norm(params, data, t, spec));
  rep.fit = fit_loglog(rep.series, tail_window(times.size()));
  rep.expected = -0.25 * params.n;
  rep.tolerance = tolerance;
  rep.pass = std::abs(rep.fit.slope - rep.expected) <= tolerance;
  return rep;
}

TwoSidedReport two_sided_report(std::string item, std::span<const double> times, RealVec normalized,
                                double ratio_max) {
  TwoSidedReport rep;
  rep.item = std::move(item);
  rep.times.assign(times.begin(), times.end());
  rep.normalized = std::move(normalized);
  rep.window = tail_window(rep.times.size());
  rep.plateau_min = std::numeric_limits<double>::infinity();
  rep.plateau_max = 0.0;
  for (std::size_t i = rep.window.begin; i < rep.window.end; ++i) {
    rep.plateau_min = std::min(rep.plateau_min, rep.normalized[i]);
    rep.plateau_max = std::max(rep.plateau_max, rep.normalized[i]);
  }
  rep.ratio = rep.plateau_min > 0.0 ? rep.plateau_max / rep.plateau_min
                                    : std::numeric_limits<double>::infinity();
  rep.pass = rep.plateau_min > 0.0 && rep.ratio <= ratio_max;
  return rep;
}

SandwichReport verify_sandwich(const ModelParams& params, const InitialData& data,
                               std::span<const double> times, const QuadratureSpec& spec,
                               double ratio_max) {
  params.validate();
  data.validate(params.n);
  require_small_momentum(data);
  require_times(times, std::numeric_limits<double>::min());
  RealVec normalized;
  for (double t : times)
    normalized.push_back(velocity_norm(params, data, t, spec) * std::pow(t, 0.25 * params.n));
  const TwoSidedReport two = two_sided_report("velocity", times, std::move(normalized), ratio_max);
  SandwichReport rep;
  rep.times = two.times;
  rep.normalized_values = two.normalized;
  rep.window = two.window;
  rep.plateau_min = two.plateau_min;
  rep.plateau_max = two.plateau_max;
  rep.ratio = two.ratio;
  rep.ratio_max = ratio_max;
  rep.pass = two.pass;
  return rep;
}

Lemma31Report verify_lemma31(const ModelParams& params, std::span<const double> P0,
                             std::span<const double> times, const QuadratureSpec& spec,
                             double ratio_max) {
  params.validate();
  if (static_cast<int>(P0.size()) != params.n) throw std::invalid_argument("P0 has the wrong dimension");
  const double p0_sq = norm_sq(P0);
  if (!(p0_sq > 0.0)) throw std::invalid_argument("lemma checks need P0 != 0");
  require_times(times, std::numeric_limits<double>::min());
  const DerivedParams d = derived_params(params);
  const RealVec p0(P0.begin(), P0.end());
  const double half_n = 0.5 * params.n;

  RealVec n1, n2, n3, cone;
  for (double t : times) {
    const double scale = std::pow(t, half_n);
    QuadratureSpec s1 = spec;
    s1.r_max = std::sqrt(80.0 / (2.0 * params.alpha * t));
    ZoneIntegrand z1;
    z1.components = params.n;
    z1.axis = p0;
    z1.field = [&, t](std::span<const double> xi, std::span<cplx> out) {
      const double r2 = norm_sq(xi);
      const double c = dot(xi, p0) / r2 * std::exp(-params.alpha * r2 * t);
      for (std::size_t j = 0; j < xi.size(); ++j) out[j] = c * xi[j];
    };
    n1.push_back(scale * checked_norm_sq(z1, params, t, Zone::Full, s1, "lemma item 1"));

    const QuadValue i2 = i_integral(params, t, spec);
    n2.push_back(scale * i2.value);

    QuadratureSpec s3 = spec;
    s3.r_max = std::sqrt(80.0 / (d.b * t));
    ZoneIntegrand z3 = z1;
    z3.field = [&, t](std::span<const double> xi, std::span<cplx> out) {
      const double r2 = norm_sq(xi);
      const double r = std::sqrt(r2);
      const double c = dot(xi, p0) / r2 * std::exp(-0.5 * d.b * r2 * t) * std::cos(params.gamma * t * r);
      for (std::size_t j = 0; j < xi.size(); ++j) out[j] = c * xi[j];
    };
    n3.push_back(scale * checked_norm_sq(z3, params, t, Zone::Full, s3, "lemma item 3"));

    const QuadValue k = cone_integral(params, P0, t, spec);
    if (!k.converged) throw NumericalError("cone integral did not converge");
    cone.push_back(scale * 0.25 * p0_sq * k.value);
  }

  Lemma31Report rep;
  rep.item1 = two_sided_report("item1", times, std::move(n1), ratio_max);
  rep.item2 = two_sided_report("item2", times, std::move(n2), ratio_max);
  rep.item3 = two_sided_report("item3", times, n3, ratio_max);
  rep.cone_normalized = cone;
  rep.cone_cap = cone_cap_measure(params.n);
  rep.witness_floor = rep.cone_cap * p0_sq / 8.0 * std::tgamma(half_n) / (2.0 * std::pow(d.b, half_n));
  bool dominated = true;
  for (std::size_t i = 0; i < n3.size(); ++i)
    dominated = dominated && n3[i] >= cone[i] * (1.0 - 10.0 * spec.rel_tol);
  rep.witness_pass = dominated && rep.item3.plateau_min >= rep.witness_floor;
  rep.pass = rep.item1.pass && rep.item2.pass && rep.item3.pass && rep.witness_pass;
  return rep;
}

HighFreqReport highfreq_energy(const ModelParams& params, const InitialData& data,
                               std::span<const double> times, const QuadratureSpec& spec,
                               double min_r_squared) {
  params.validate();
  data.validate(params.n);
  require_times(times, 0.0);
  const std::size_t nc = static_cast<std::size_t>(params.n);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);

  HighFreqReport rep;
  rep.series.label = "highfreq_energy";
  rep.series.times.assign(times.begin(), times.end());
  for (double t : times) {
    ZoneIntegrand z;
    z.components = params.n + 1;
    z.axis = axis_of(data.amplitude_v);
    z.data_width = data.width;
    z.field = [&, t](std::span<const double> xi, std::span<cplx> out) {
      solve_exact_into(params, data, xi, t, out.first(nc), out[nc]);
      for (cplx& c : out) c *= inv_sqrt2;
    };
    rep.series.values.push_back(checked_norm_sq(z, params, t, Zone::High, spec, "high-frequency energy"));
    rep.low_energy.push_back(checked_norm_sq(z, params, t, Zone::Low, spec, "low-frequency energy"));
  }
  const RealVec& e = rep.series.values;
  const std::size_t m = e.size();

  rep.non_increasing = true;
  for (std::size_t i = 1; i < m; ++i) rep.non_increasing = rep.non_increasing && e[i] <= e[i - 1];

  rep.exp_fit = fit_semilog(rep.series, full_window(m));
  rep.eta = -rep.exp_fit.slope;

  // Tail integrals int_{t_i}^{T} E_h by the trapezoid rule on the grid.
  RealVec tail(m, 0.0);
  for (std::size_t i = m - 1; i-- > 0;)
    tail[i] = tail[i + 1] + 0.5 * (times[i + 1] - times[i]) * (e[i] + e[i + 1]);
  double t0 = 0.0;
  rep.komornik_hypothesis = true;
  for (std::size_t i = 0; i + 1 < m; ++i) {
    if (!(e[i] > 0.0)) {
      rep.komornik_hypothesis = false;
      break;
    }
    t0 = std::max(t0, tail[i] / e[i]);
  }
  rep.komornik_T0 = t0;
  for (std::size_t i = 0; i + 1 < m; ++i)
    rep.komornik_hypothesis = rep.komornik_hypothesis && tail[i] <= t0 * e[i];
  rep.komornik_conclusion = rep.komornik_hypothesis && t0 > 0.0;
  if (rep.komornik_conclusion) {
    for (std::size_t i = 0; i < m; ++i)
      if (times[i] >= t0)
        rep.komornik_conclusion = rep.komornik_conclusion && e[i] <= e[0] * std::exp(1.0 - times[i] / t0);
  }
  rep.pass = rep.non_increasing && rep.eta > 0.0 && rep.exp_fit.r_squared >= min_r_squared &&
             rep.komornik_conclusion;
  return rep;
}

std::vector<BoundsRow> compare_bounds(const ModelParams& params, const InitialData& data,
                                      std::span<const double> times, const QuadratureSpec& spec) {
  params.validate();
  data.validate(params.n);
  require_times(times, std::numeric_limits<double>::min());
  const Moments mom = moments(data);
  const std::size_t nc = static_cast<std::size_t>(params.n);
  constexpr double cushion = 1.05;

  std::vector<BoundsRow> rows;
  for (double t : times) {
    ZoneIntegrand z;
    z.components = params.n;
    z.axis = axis_of(mom.P0);
    BoundsRow row;
    row.t = t;
    row.bounds = lemma21_bound(params, data, t);

    z.field = [&, t](std::span<const double> xi, std::span<cplx> out) {
      e0_term_into(params, data, xi, t, out);
    };
    row.e0_sq = checked_norm_sq(z, params, t, Zone::Low, spec, "E0 norm");
    z.field = [&, t](std::span<const double> xi, std::span<cplx> out) {
      e6_term_into(params, mom.P0, xi, t, out);
    };
    row.e6_sq = checked_norm_sq(z, params, t, Zone::Low, spec, "E6 norm");
    z.field = [&, t](std::span<const double> xi, std::span<cplx> out) {
      cplx rho;
      solve_exact_into(params, data, xi, t, out, rho);
      std::span<cplx> tmp = scratch(nc);
      velocity_profile_into(params, mom.P0, mom.Q0, xi, t, tmp);
      for (std::size_t j = 0; j < nc; ++j) out[j] -= tmp[j];
      e0_term_into(params, data, xi, t, tmp);
      for (std::size_t j = 0; j < nc; ++j) out[j] -= tmp[j];
      e6_term_into(params, mom.P0, xi, t, tmp);
      for (std::size_t j = 0; j < nc; ++j) out[j] -= tmp[j];
    };
    row.rest_sq = checked_norm_sq(z, params, t, Zone::Low, spec, "E1..E5 norm");

    const auto& b = row.bounds.terms;
    row.rest_bound = 5.0 * (b[1] + b[2] + b[3] + b[4] + b[5]);
    row.pass = row.e0_sq <= cushion * b[0] && row.e6_sq <= cushion * b[6] &&
               row.rest_sq <= cushion * row.rest_bound;
    rows.push_back(row);
  }
  return rows;
}

double unit_uniform(std::uint64_t bits) { return static_cast<double>(bits >> 11) * 0x1.0p-53; }

RealVec oracle_radii(const ModelParams& params, double r_min, double r_max, int points) {
  RealVec radii = geometric_grid(r_min, r_max, points);
  const double d0 = derived_params(params).delta0;
  if (d0 > r_min && d0 < r_max) {
    auto above = std::lower_bound(radii.begin(), radii.end(), d0);
    std::size_t hi = static_cast<std::size_t>(above - radii.begin());
    std::size_t lo = hi == 0 ? 0 : hi - 1;
    if (hi == radii.size()) hi = lo;
    if (lo != hi) {
      radii[lo] = d0 * (1.0 - 1e-2);
      radii[hi] = d0 * (1.0 + 1e-2);
    }
  } else {
    radii.push_back(d0 * (1.0 - 1e-2));
    radii.push_back(d0 * (1.0 + 1e-2));
  }
  std::sort(radii.begin(), radii.end());
  return radii;
}

OracleReport oracle_check(const ModelParams& params, const InitialData& data,
                          std::span<const double> radii, std::span<const double> times, double step,
                          std::uint64_t seed, double tolerance) {
  params.validate();
  data.validate(params.n);
  if (!(step > 0.0)) throw std::invalid_argument("oracle step must be positive");
  const DerivedParams d = derived_params(params);
  std::mt19937_64 rng(seed);
  const std::size_t nc = static_cast<std::size_t>(params.n);

  OracleReport rep;
  rep.max_rel_err = 0.0;
  rep.tolerance = tolerance;
  for (double r : radii) {
    if (!(r > 0.0)) throw std::invalid_argument("oracle radii must be positive");
    for (double t : times) {
      if (!(t > 0.0)) throw std::invalid_argument("oracle times must be positive");
      RealVec dir(nc);
      double len2 = 0.0;
      do {
        for (double& x : dir) x = 2.0 * unit_uniform(rng()) - 1.0;
        len2 = norm_sq(dir);
      } while (len2 < 1e-4 || len2 > 1.0);
      const double len = std::sqrt(len2);
      RealVec xi(nc);
      for (std::size_t j = 0; j < nc; ++j) xi[j] = r * dir[j] / len;

      const double h = std::min(step, 0.05 / (d.b * r * r + params.gamma * r));
      const SpectralState exact = solve_exact(params, data, xi, t);
      const SpectralState ode = solve_ode_oracle(params, data, xi, t, h);
      double diff = std::norm(exact.rho_hat - ode.rho_hat);
      for (std::size_t j = 0; j < nc; ++j) diff += std::norm(exact.v_hat[j] - ode.v_hat[j]);
      const double scale = std::norm(exact.rho_hat) + norm_sq(exact.v_hat);
      const double rel = scale > 0.0 ? std::sqrt(diff / scale) : std::sqrt(diff);
      rep.points.push_back({r, t, xi, rel});
      rep.max_rel_err = std::max(rep.max_rel_err, rel);
    }
  }
  rep.pass = rep.max_rel_err <= tolerance;
  return rep;
}

EnergyBalance energy_balance(const ModelParams& params, const InitialData& data,
                             std::span<const double> xi, double S, double T) {
  params.validate();
  data.validate(params.n);
  if (!(S >= 0.0) || !(T > S)) throw std::invalid_argument("energy balance needs 0 <= S < T");
  const double r2 = norm_sq(xi);
  if (!(r2 > 0.0)) throw std::invalid_argument("energy balance needs xi != 0");
  const double lhs = energy(solve_exact(params, data, xi, S)) - energy(solve_exact(params, data, xi, T));
  auto dissipation = [&](double t) {
    const SpectralState s = solve_exact(params, data, xi, t);
    cplx div = 0.0;
    for (std::size_t j = 0; j < xi.size(); ++j) div += xi[j] * s.v_hat[j];
    return params.alpha * r2 * norm_sq(s.v_hat) + params.beta * std::norm(div);
  };
  QuadratureSpec spec;
  spec.rel_tol = 1e-12;
  spec.max_refinements = 8;
  const QuadValue q = integrate_radial(dissipation, S, T, 2.0 * params.gamma * std::sqrt(r2), 0.0, spec);
  if (!q.converged) throw NumericalError("energy balance time integral did not converge");
  const double scale = std::max(std::abs(lhs), std::abs(q.value));
  return {lhs, q.value, scale > 0.0 ? std::abs(lhs - q.value) / scale : 0.0};
}

}  // namespace nsprofile
