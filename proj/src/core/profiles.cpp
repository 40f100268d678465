#include "core/profiles.hpp"

#include <cmath>
#include <stdexcept>

#include "core/errors.hpp"
#include "core/quadrature.hpp"
#include "core/spectral.hpp"

namespace nsprofile {
namespace {

void require_xi(const ModelParams& params, std::span<const double> xi) {
  if (static_cast<int>(xi.size()) != params.n) throw std::invalid_argument("xi has wrong dimension");
  if (!(norm_sq(xi) > 0.0)) throw std::invalid_argument("xi must be nonzero");
}

}  // namespace

void velocity_profile_into(const ModelParams& params, std::span<const double> P0, double Q0,
                           std::span<const double> xi, double t, std::span<cplx> out) {
  const double r2 = norm_sq(xi);
  const double r = std::sqrt(r2);
  const double b = params.alpha + params.beta;
  const double heat = std::exp(-params.alpha * r2 * t);
  const double wave = std::exp(-0.5 * b * r2 * t);
  const double phase = params.gamma * t * r;
  const double proj = dot(xi, P0) / r2;
  const double sin_over_r = std::sin(phase) / r;
  const double cos_ph = std::cos(phase);
  for (std::size_t j = 0; j < xi.size(); ++j) {
    const double re = P0[j] * heat - xi[j] * proj * heat + xi[j] * proj * wave * cos_ph;
    const double im = -xi[j] * wave * sin_over_r * Q0;
    out[j] = cplx(re, im);
  }
}

ComplexVec velocity_profile(const ModelParams& params, const Moments& moments,
                            std::span<const double> xi, double t) {
  params.validate();
  require_xi(params, xi);
  ComplexVec out(xi.size());
  velocity_profile_into(params, moments.P0, moments.Q0, xi, t, out);
  return out;
}

cplx density_profile_value(const ModelParams& params, std::span<const double> P0, double Q0,
                           std::span<const double> xi, double t) {
  const double r2 = norm_sq(xi);
  const double r = std::sqrt(r2);
  const double wave = std::exp(-0.5 * (params.alpha + params.beta) * t * r2);
  const double phase = params.gamma * t * r;
  return cplx(Q0 * wave * std::cos(phase), -dot(xi, P0) * wave * std::sin(phase) / r);
}

cplx density_profile(const ModelParams& params, const Moments& moments, std::span<const double> xi,
                     double t) {
  params.validate();
  require_xi(params, xi);
  return density_profile_value(params, moments.P0, moments.Q0, xi, t);
}

void e0_term_into(const ModelParams& params, const InitialData& data, std::span<const double> xi,
                  double t, std::span<cplx> out) {
  const ABDecomposition ab = ab_decomposition(data, xi);
  const double r2 = norm_sq(xi);
  const Propagator p = propagator(params, std::sqrt(r2), t);
  const cplx ig(0.0, params.gamma);
  const cplx rho_part = ab.A_rho - cplx(0.0, 1.0) * ab.B_rho;
  cplx w = 0.0;
  for (std::size_t j = 0; j < xi.size(); ++j) w += xi[j] * cplx(ab.A0[j], -ab.B0[j]);
  for (std::size_t j = 0; j < xi.size(); ++j) {
    const cplx vj(ab.A0[j], -ab.B0[j]);
    out[j] = p.heat * vj - ig * xi[j] * p.phi * rho_part + (p.psi - p.heat) * xi[j] * w / r2;
  }
}

ComplexVec e0_term(const ModelParams& params, const InitialData& data, std::span<const double> xi,
                   double t) {
  params.validate();
  data.validate(params.n);
  require_xi(params, xi);
  if (std::sqrt(norm_sq(xi)) > derived_params(params).delta0)
    throw std::invalid_argument("e0_term is only defined for |xi| <= delta0");
  ComplexVec out(xi.size());
  e0_term_into(params, data, xi, t, out);
  return out;
}

void e6_term_into(const ModelParams& params, std::span<const double> P0, std::span<const double> xi,
                  double t, std::span<cplx> out) {
  const double r2 = norm_sq(xi);
  const double r = std::sqrt(r2);
  const double b = params.alpha + params.beta;
  const double c = -0.5 * b * dot(xi, P0) * std::exp(-0.5 * b * r2 * t) *
                   std::sin(params.gamma * t * r) / (params.gamma * r);
  for (std::size_t j = 0; j < xi.size(); ++j) out[j] = cplx(c * xi[j], 0.0);
}

ComplexVec e6_term(const ModelParams& params, const Moments& moments, std::span<const double> xi,
                   double t) {
  params.validate();
  require_xi(params, xi);
  ComplexVec out(xi.size());
  e6_term_into(params, moments.P0, xi, t, out);
  return out;
}

ProfileDecomposition decompose(const ModelParams& params, const InitialData& data,
                               std::span<const double> xi, double t) {
  const Moments m = moments(data);
  ProfileDecomposition d;
  d.leading = velocity_profile(params, m, xi, t);
  d.e0 = e0_term(params, data, xi, t);
  d.e6 = e6_term(params, m, xi, t);
  const SpectralState exact = solve_exact(params, data, xi, t);
  d.raw_remainder.resize(xi.size());
  for (std::size_t j = 0; j < xi.size(); ++j) d.raw_remainder[j] = exact.v_hat[j] - d.leading[j];
  return d;
}

double elem_constant(int n, double k, double lambda) {
  const double p = 0.5 * (n + k);
  return sphere_area(n) * std::tgamma(p) / (2.0 * std::pow(lambda, p));
}

ElemEstimate elem_est(int n, double k, double lambda, double t, double r_cut) {
  if (n < 1) throw std::invalid_argument("elem_est: n must be at least 1");
  if (!(k + n > 0.0)) throw std::invalid_argument("elem_est: requires k + n > 0");
  if (!(lambda > 0.0) || !(t > 0.0) || !(r_cut > 0.0))
    throw std::invalid_argument("elem_est: lambda, t and r_cut must be positive");
  const double p = 0.5 * (n + k);
  auto g = [&](double r) { return std::pow(r, k + n - 1.0) * std::exp(-lambda * t * r * r); };
  QuadratureSpec spec;
  spec.rel_tol = 1e-12;
  const QuadValue q = integrate_radial(g, 0.0, r_cut, 0.0, 1.0 / std::sqrt(lambda * t), spec);
  if (!q.converged) throw NumericalError("elem_est radial quadrature did not converge");
  const double radial = q.value;
  ElemEstimate e{};
  e.value = sphere_area(n) * radial;
  e.constant = elem_constant(n, k, lambda);
  e.bound = e.constant * std::pow(t, -p);
  return e;
}

BoundReport lemma21_bound(const ModelParams& params, const InitialData& data, double t) {
  params.validate();
  data.validate(params.n);
  if (!(t > 0.0)) throw std::invalid_argument("lemma21_bound: t must be positive");
  const DerivedParams d = derived_params(params);
  const Moments m = moments(data);
  const Lemma22Constants lm = lemma22_constants();
  const int n = params.n;
  const double a = d.a;
  const double b = d.b;
  const double g2 = params.gamma * params.gamma;
  const double p2 = norm_sq(m.P0);
  const double q2 = m.Q0 * m.Q0;
  const double nh = 0.5 * n;
  auto C = [&](double k, double lambda) { return elem_constant(n, k, lambda); };

  const double lm2 = lm.L * lm.L + lm.M * lm.M;
  const double V = lm2 * norm_sq(m.l11_v);
  const double R = lm2 * m.l11_rho * m.l11_rho;

  BoundReport rep;
  auto& e = rep.terms;
  // E0 = T1 + ... + T5 with |sum|^2 <= 5 sum |T_i|^2 and |Phi|, |Psi| bounded using D >= 2a.
  e[0] = 5.0 * ((2.0 * V * C(2, 2.0 * params.alpha) + 2.0 * R * C(2, b) + V * C(2, b)) * std::pow(t, -nh - 1.0) +
                (b * b / (2.0 * a)) * V * C(4, b) * std::pow(t, -nh - 2.0));
  e[1] = b * b * b * b / (4.0 * a) * p2 * C(6, b) * std::pow(t, -nh - 1.0);
  e[2] = std::pow(b, 6) / std::pow(2.0 * a, 3) * p2 * C(6, b) * std::pow(t, -nh - 3.0);
  e[3] = std::pow(b, 6) / (8.0 * a * a) * p2 * C(8, b) * std::pow(t, -nh - 2.0);
  e[4] = 4.0 * g2 * std::pow(b, 4) / std::pow(2.0 * a, 3) * q2 * C(4, b) * std::pow(t, -nh - 2.0);
  e[5] = std::pow(b, 4) * g2 / (8.0 * a * a) * q2 * C(6, b) * std::pow(t, -nh - 1.0);
  e[6] = b * b / (4.0 * g2) * p2 * C(2, b) * std::pow(t, -nh - 1.0);
  for (double x : e) rep.total += x;
  return rep;
}

}  // namespace nsprofile
