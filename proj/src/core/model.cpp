#include "core/model.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace nsprofile {

void ModelParams::validate() const {
  if (!(alpha > 0.0) || !std::isfinite(alpha))
    throw std::invalid_argument("alpha must be positive");
  if (!(beta >= 0.0) || !std::isfinite(beta))
    throw std::invalid_argument("beta must be nonnegative");
  if (!(gamma > 0.0) || !std::isfinite(gamma))
    throw std::invalid_argument("gamma must be positive");
  if (n < 1) throw std::invalid_argument("dimension n must be at least 1");
}

DerivedParams derived_params(const ModelParams& params) {
  params.validate();
  DerivedParams d{};
  d.a = params.gamma * params.gamma;
  d.b = params.alpha + params.beta;
  d.delta0 = 2.0 * params.gamma / d.b;
  d.r_low = d.delta0 / std::numbers::sqrt2;
  return d;
}

void InitialData::validate(int n) const {
  if (dimension() != n)
    throw std::invalid_argument("amplitude_v has length " + std::to_string(dimension()) +
                                ", expected " + std::to_string(n));
  if (!(width > 0.0) || !std::isfinite(width))
    throw std::invalid_argument("data width must be positive");
  for (double p : amplitude_v)
    if (!std::isfinite(p)) throw std::invalid_argument("amplitude_v must be finite");
  if (!std::isfinite(amplitude_rho)) throw std::invalid_argument("amplitude_rho must be finite");
}

double InitialData::profile_hat(double r) const {
  switch (family) {
    case DataFamily::Gaussian:
      return std::exp(-0.5 * width * width * r * r);
  }
  return 0.0;
}

Moments moments(const InitialData& data) {
  const int n = data.dimension();
  // E|x| for the Gaussian of standard deviation s in R^n (chi distribution mean).
  const double mean_abs_x = data.width * std::numbers::sqrt2 *
                            std::exp(std::lgamma(0.5 * (n + 1)) - std::lgamma(0.5 * n));
  Moments m;
  m.P0 = data.amplitude_v;
  m.Q0 = data.amplitude_rho;
  m.l11_v.reserve(n);
  for (double p : data.amplitude_v) m.l11_v.push_back(std::abs(p) * (1.0 + mean_abs_x));
  m.l11_rho = std::abs(data.amplitude_rho) * (1.0 + mean_abs_x);
  return m;
}

FourierData fourier_data(const InitialData& data, std::span<const double> xi) {
  const double g = data.profile_hat(std::sqrt(norm_sq(xi)));
  FourierData f;
  f.v0_hat.reserve(data.amplitude_v.size());
  for (double p : data.amplitude_v) f.v0_hat.emplace_back(p * g, 0.0);
  f.rho0_hat = cplx(data.amplitude_rho * g, 0.0);
  return f;
}

ABDecomposition ab_decomposition(const InitialData& data, std::span<const double> xi) {
  // Even real data: the sine moments vanish and cos - 1 integrates to P (g - 1).
  const double gm1 = std::expm1(-0.5 * data.width * data.width * norm_sq(xi));
  ABDecomposition d;
  d.A0.reserve(data.amplitude_v.size());
  for (double p : data.amplitude_v) d.A0.push_back(p * gm1);
  d.B0.assign(data.amplitude_v.size(), 0.0);
  d.A_rho = data.amplitude_rho * gm1;
  d.B_rho = 0.0;
  return d;
}

Lemma22Constants lemma22_constants() {
  // (1 - cos th)/th is unimodal on (0, 2 pi]; golden-section search for its peak.
  auto f = [](double th) { return (1.0 - std::cos(th)) / th; };
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = 1e-3;
  double hi = 2.0 * std::numbers::pi;
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double f1 = f(x1);
  double f2 = f(x2);
  while (hi - lo > 1e-12) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = f(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = f(x1);
    }
  }
  return {f(0.5 * (lo + hi)), 1.0};
}

double sphere_area(int n) {
  if (n < 1) throw std::invalid_argument("sphere_area: n must be at least 1");
  return 2.0 * std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n);
}

}  // namespace nsprofile
