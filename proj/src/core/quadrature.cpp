#include "core/quadrature.hpp"

#include <algorithm>
#include <boost/math/special_functions/legendre.hpp>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <thread>
#include <vector>

#include "core/errors.hpp"

namespace nsprofile {
namespace {

constexpr int kRadialOrder = 8;

const GaussRule& radial_rule() {
  static const GaussRule rule = gauss_legendre(kRadialOrder);
  return rule;
}

// Evaluates panel_sum(p) for p in [0, count) on up to `threads` workers and
// returns the partial sums in panel order.
template <class MakeWorker>
RealVec map_panels(long count, int threads, MakeWorker make_worker) {
  RealVec partial(static_cast<std::size_t>(count), 0.0);
  const int workers = static_cast<int>(std::clamp<long>(threads, 1, std::max(1L, count)));
  auto run_range = [&](long begin, long end) {
    auto panel_sum = make_worker();
    for (long p = begin; p < end; ++p) partial[static_cast<std::size_t>(p)] = panel_sum(p);
  };
  if (workers == 1) {
    run_range(0, count);
    return partial;
  }
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    const long chunk = (count + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
      const long begin = w * chunk;
      const long end = std::min(count, begin + chunk);
      if (begin < end) pool.emplace_back(run_range, begin, end);
    }
  }
  return partial;
}

double ordered_sum(const RealVec& partial) {
  double s = 0.0;
  for (double x : partial) s += x;
  return s;
}

long initial_panels(double len, double wavenumber, double gauss_width, const QuadratureSpec& spec) {
  double n = spec.base_panels;
  if (wavenumber > 0.0) n = std::max(n, spec.osc_factor * wavenumber * len / (2.0 * std::numbers::pi));
  if (gauss_width > 0.0) n = std::max(n, 4.0 * len / gauss_width);
  return static_cast<long>(std::ceil(n));
}

// Orthonormal frame (u, w, z) with u along the symmetry axis.
struct Frame {
  RealVec u, w, z;
};

RealVec orthonormal_complement(const std::vector<const RealVec*>& basis, int n) {
  // Gram-Schmidt on the coordinate vector least aligned with the existing basis.
  RealVec best;
  double best_norm = -1.0;
  for (int j = 0; j < n; ++j) {
    RealVec e(n, 0.0);
    e[j] = 1.0;
    for (const RealVec* q : basis) {
      const double c = dot(e, *q);
      for (int i = 0; i < n; ++i) e[i] -= c * (*q)[i];
    }
    const double nn = std::sqrt(norm_sq(e));
    if (nn > best_norm) {
      best_norm = nn;
      best = e;
    }
  }
  for (double& x : best) x /= best_norm;
  return best;
}

Frame make_frame(const RealVec& axis, int n) {
  Frame f;
  const double an = axis.empty() ? 0.0 : std::sqrt(norm_sq(axis));
  if (an > 0.0) {
    if (static_cast<int>(axis.size()) != n) throw std::invalid_argument("symmetry axis has wrong dimension");
    f.u = axis;
    for (double& x : f.u) x /= an;
  } else {
    f.u.assign(n, 0.0);
    f.u[0] = 1.0;
  }
  if (n >= 2) f.w = orthonormal_complement({&f.u}, n);
  if (n >= 3) f.z = orthonormal_complement({&f.u, &f.w}, n);
  return f;
}

// Angular rule: points on the unit sphere (as (cos, sin) in the u-w plane) with
// weights that integrate functions of the polar angle against surface measure.
struct AngularRule {
  RealVec cos_phi, sin_phi, weight;
};

AngularRule make_angular_rule(int n, int nodes) {
  AngularRule a;
  if (n == 1) {
    a.cos_phi = {1.0, -1.0};
    a.sin_phi = {0.0, 0.0};
    a.weight = {1.0, 1.0};
    return a;
  }
  if (nodes < 2) throw std::invalid_argument("angular_nodes must be at least 2");
  if (n == 2) {
    // Periodic trapezoid rule: exact for trigonometric polynomials of degree < nodes.
    for (int k = 0; k < nodes; ++k) {
      const double phi = 2.0 * std::numbers::pi * k / nodes;
      a.cos_phi.push_back(std::cos(phi));
      a.sin_phi.push_back(std::sin(phi));
      a.weight.push_back(2.0 * std::numbers::pi / nodes);
    }
    return a;
  }
  const GaussRule g = gauss_legendre(nodes);
  const double ring = sphere_area(n - 1);
  for (int k = 0; k < nodes; ++k) {
    const double phi = 0.5 * std::numbers::pi * (g.nodes[k] + 1.0);
    a.cos_phi.push_back(std::cos(phi));
    a.sin_phi.push_back(std::sin(phi));
    a.weight.push_back(ring * 0.5 * std::numbers::pi * g.weights[k] * std::pow(std::sin(phi), n - 2));
  }
  return a;
}

struct FieldEval {
  const ZoneIntegrand& integrand;
  const Frame& frame;
  int n;
  RealVec xi;
  ComplexVec out;

  FieldEval(const ZoneIntegrand& in, const Frame& f, int dim)
      : integrand(in), frame(f), n(dim), xi(dim), out(in.components) {}

  double at(double r, double c, double s, const RealVec& second) {
    for (int i = 0; i < n; ++i) xi[i] = r * (c * frame.u[i] + (n >= 2 ? s * second[i] : 0.0));
    integrand.field(xi, out);
    return norm_sq(std::span<const cplx>(out));
  }
};

void assert_axisymmetric(const ZoneIntegrand& integrand, const Frame& frame, int n, double lo, double hi) {
  if (n < 3) return;
  FieldEval eval(integrand, frame, n);
  const double phi = 1.1;
  for (double frac : {0.2, 0.5, 0.9}) {
    const double r = std::max(lo + frac * (hi - lo), 1e-12);
    const double f1 = eval.at(r, std::cos(phi), std::sin(phi), frame.w);
    const double f2 = eval.at(r, std::cos(phi), std::sin(phi), frame.z);
    if (std::abs(f1 - f2) > 1e-9 * std::max(std::abs(f1), std::abs(f2)) + 1e-300)
      throw std::invalid_argument("integrand is not axisymmetric about the data axis");
  }
}

}  // namespace

GaussRule gauss_legendre(int count) {
  if (count < 1) throw std::invalid_argument("gauss_legendre: count must be positive");
  static std::mutex mu;
  static std::map<int, GaussRule> cache;
  std::lock_guard lock(mu);
  if (auto it = cache.find(count); it != cache.end()) return it->second;
  const std::vector<double> pos = boost::math::legendre_p_zeros<double>(count);
  GaussRule rule;
  auto push = [&](double x) {
    const double dp = boost::math::legendre_p_prime(count, x);
    rule.nodes.push_back(x);
    rule.weights.push_back(2.0 / ((1.0 - x * x) * dp * dp));
  };
  for (auto it = pos.rbegin(); it != pos.rend(); ++it)
    if (*it != 0.0) push(-*it);
  for (double x : pos) push(x);
  cache.emplace(count, rule);
  return rule;
}

const char* zone_name(Zone zone) {
  switch (zone) {
    case Zone::Low: return "low";
    case Zone::High: return "high";
    case Zone::Full: return "full";
  }
  return "?";
}

double auto_r_max(const ModelParams& params, double t, double data_width) {
  const DerivedParams d = derived_params(params);
  double r = 4.0 * d.delta0;
  if (t > 0.0) r = std::max(r, 8.0 / std::sqrt(params.alpha * t));
  if (data_width > 0.0) r = std::max(r, 8.0 / data_width);
  return r;
}

QuadValue integrate_radial(const std::function<double(double)>& g, double lo, double hi,
                           double wavenumber, double gauss_width, const QuadratureSpec& spec) {
  if (!(hi > lo)) throw std::invalid_argument("integrate_radial: empty interval");
  const GaussRule& rule = radial_rule();
  auto pass = [&](long panels) {
    const double h = (hi - lo) / static_cast<double>(panels);
    auto partial = map_panels(panels, spec.threads, [&] {
      return [&, h](long p) {
        const double a = lo + h * static_cast<double>(p);
        double s = 0.0;
        for (int k = 0; k < kRadialOrder; ++k) s += rule.weights[k] * g(a + 0.5 * h * (rule.nodes[k] + 1.0));
        return 0.5 * h * s;
      };
    });
    return ordered_sum(partial);
  };
  long panels = initial_panels(hi - lo, wavenumber, gauss_width, spec);
  double coarse = pass(panels);
  QuadValue q{};
  for (int level = 0; level <= spec.max_refinements; ++level) {
    panels *= 2;
    const double fine = pass(panels);
    q = {fine, std::abs(fine - coarse), panels, false};
    if (q.est_error <= spec.rel_tol * std::abs(fine) || q.est_error == 0.0) {
      q.converged = true;
      return q;
    }
    coarse = fine;
  }
  return q;
}

ZoneNorm zone_norm_sq(const ZoneIntegrand& integrand, const ModelParams& params, double t, Zone zone,
                      const QuadratureSpec& spec) {
  params.validate();
  if (!integrand.field || integrand.components < 1)
    throw std::invalid_argument("zone_norm_sq: empty field");
  const int n = params.n;
  const DerivedParams d = derived_params(params);
  const double r_max = spec.r_max > 0.0 ? spec.r_max : auto_r_max(params, t, integrand.data_width);
  double lo = 0.0;
  double hi = r_max;
  if (zone == Zone::Low) hi = d.r_low;
  if (zone == Zone::High) lo = d.r_low;
  if (!(hi > lo)) throw std::invalid_argument("zone_norm_sq: r_max must exceed the low-zone radius");

  const Frame frame = make_frame(integrand.axis, n);
  assert_axisymmetric(integrand, frame, n, lo, hi);
  const AngularRule ang = make_angular_rule(n, spec.angular_nodes);
  const std::size_t m = ang.weight.size();

  // Shell integrand: r^{n-1} times the angular integral of |f|^2 at radius r.
  auto shell_pass = [&](double a0, double b0, long panels) {
    const GaussRule& rule = radial_rule();
    const double h = (b0 - a0) / static_cast<double>(panels);
    auto partial = map_panels(panels, spec.threads, [&] {
      return [&, h, eval = FieldEval(integrand, frame, n)](long p) mutable {
        const double a = a0 + h * static_cast<double>(p);
        double s = 0.0;
        for (int k = 0; k < kRadialOrder; ++k) {
          const double r = a + 0.5 * h * (rule.nodes[k] + 1.0);
          double shell = 0.0;
          for (std::size_t j = 0; j < m; ++j)
            shell += ang.weight[j] * eval.at(r, ang.cos_phi[j], ang.sin_phi[j], frame.w);
          s += rule.weights[k] * shell * std::pow(r, n - 1);
        }
        return 0.5 * h * s;
      };
    });
    return ordered_sum(partial);
  };

  const double wavenumber = params.gamma * t;
  long panels = initial_panels(hi - lo, wavenumber, 0.0, spec);
  double coarse = shell_pass(lo, hi, panels);

  // Tail beyond the truncation radius, measured with a positive-weight rule.
  double tail = 0.0;
  if (zone != Zone::Low) tail = shell_pass(hi, 2.0 * hi, 2L * spec.base_panels);

  ZoneNorm result{zone, coarse, 0.0, panels, false};
  for (int level = 0; level <= spec.max_refinements; ++level) {
    panels *= 2;
    const double fine = shell_pass(lo, hi, panels);
    result = {zone, fine, std::abs(fine - coarse) + std::abs(tail), panels, false};
    if (result.est_error <= spec.rel_tol * std::abs(fine) || result.est_error == 0.0) {
      result.converged = true;
      return result;
    }
    coarse = fine;
  }
  return result;
}

double s0_moment(int n) { return 0.5 * std::tgamma(0.5 * n); }

QuadValue i_integral(const ModelParams& params, double t, const QuadratureSpec& spec) {
  params.validate();
  if (!(t > 0.0)) throw std::invalid_argument("i_integral: t must be positive");
  const double b = params.alpha + params.beta;
  const int n = params.n;
  const double k = params.gamma * t;
  // e^{-b r^2 t} < e^{-80} beyond this radius.
  const double cut = std::sqrt(80.0 / (b * t));
  auto g = [&](double r) {
    const double s = std::sin(k * r);
    return std::pow(r, n - 1) * std::exp(-b * r * r * t) * s * s;
  };
  QuadValue q = integrate_radial(g, 0.0, cut, k, 1.0 / std::sqrt(b * t), spec);
  const double area = sphere_area(n);
  q.value *= area;
  q.est_error *= area;
  if (!q.converged) throw NumericalError("i_integral did not converge");
  return q;
}

double i_integral_limit(const ModelParams& params) {
  params.validate();
  return 0.5 * s0_moment(params.n) * sphere_area(params.n) *
         std::pow(params.alpha + params.beta, -0.5 * params.n);
}

double cone_cap_measure(int n) {
  if (n < 1) throw std::invalid_argument("cone_cap_measure: n must be at least 1");
  if (n == 1) return 1.0;
  if (n == 2) return 2.0 * std::numbers::pi / 3.0;
  // |S^{n-2}| int_0^{pi/3} sin^{n-2}(phi) d phi
  const GaussRule g = gauss_legendre(32);
  const double half = std::numbers::pi / 6.0;
  double s = 0.0;
  for (std::size_t k = 0; k < g.nodes.size(); ++k)
    s += g.weights[k] * std::pow(std::sin(half * (g.nodes[k] + 1.0)), n - 2);
  return sphere_area(n - 1) * half * s;
}

QuadValue cone_integral(const ModelParams& params, std::span<const double> P0, double t,
                        const QuadratureSpec& spec) {
  params.validate();
  if (!(norm_sq(P0) > 0.0)) throw std::invalid_argument("cone_integral: P0 must be nonzero");
  if (!(t > 0.0)) throw std::invalid_argument("cone_integral: t must be positive");
  const double b = params.alpha + params.beta;
  const int n = params.n;
  const double k = params.gamma * t;
  const double cut = std::sqrt(80.0 / (b * t));
  auto g = [&](double r) {
    const double c = std::cos(k * r);
    return std::pow(r, n - 1) * std::exp(-b * r * r * t) * c * c;
  };
  QuadValue q = integrate_radial(g, 0.0, cut, k, 1.0 / std::sqrt(b * t), spec);
  const double cap = cone_cap_measure(n);
  q.value *= cap;
  q.est_error *= cap;
  if (!q.converged) throw NumericalError("cone_integral did not converge");
  return q;
}

}  // namespace nsprofile
