#include "core/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace nsprofile {
namespace {

double sinc(double x) {
  if (std::abs(x) < 1e-4) return 1.0 - x * x / 6.0;
  return std::sin(x) / x;
}

double sinhc(double x) {
  if (std::abs(x) < 1e-4) return 1.0 + x * x / 6.0;
  return std::sinh(x) / x;
}

// Discriminant factor 4a - b^2 r^2 written as a product so it is accurate near r = delta0.
double discriminant(double gamma, double b, double r) {
  return (2.0 * gamma - b * r) * (2.0 * gamma + b * r);
}

bool is_double_root(double gamma, double b, double r) {
  return std::abs(2.0 * gamma - b * r) <= 8.0 * std::numeric_limits<double>::epsilon() * gamma;
}

void require_nonzero(std::span<const double> xi) {
  if (!(norm_sq(xi) > 0.0)) throw std::invalid_argument("xi must be nonzero");
}

void rhs(const ModelParams& p, std::span<const double> xi, double r2, std::span<const cplx> v,
         cplx rho, std::span<cplx> dv, cplx& drho) {
  const cplx ig(0.0, p.gamma);
  cplx w = 0.0;
  for (std::size_t j = 0; j < xi.size(); ++j) w += xi[j] * v[j];
  drho = -ig * w;
  for (std::size_t j = 0; j < xi.size(); ++j)
    dv[j] = -p.alpha * r2 * v[j] - p.beta * xi[j] * w - ig * xi[j] * rho;
}

}  // namespace

EigenPair eigenvalues(const ModelParams& params, double r) {
  params.validate();
  if (!(r >= 0.0)) throw std::invalid_argument("eigenvalues: r must be nonnegative");
  const double a = params.gamma * params.gamma;
  const double b = params.alpha + params.beta;
  const double m = -0.5 * b * r * r;
  if (is_double_root(params.gamma, b, r)) return {cplx(m, 0.0), cplx(m, 0.0), Branch::DoubleRoot};
  const double d = discriminant(params.gamma, b, r);
  if (d > 0.0) {
    const double w = 0.5 * r * std::sqrt(d);
    return {cplx(m, w), cplx(m, -w), Branch::ComplexPair};
  }
  const double big = -0.5 * (b * r * r + r * std::sqrt(-d));
  const double small = a * r * r / big;
  return {cplx(small, 0.0), cplx(big, 0.0), Branch::RealPair};
}

Propagator propagator(const ModelParams& params, double r, double t) {
  const double b = params.alpha + params.beta;
  const double m = -0.5 * b * r * r;
  Propagator p{};
  p.heat = std::exp(-params.alpha * r * r * t);
  if (is_double_root(params.gamma, b, r)) {
    const double em = std::exp(m * t);
    p.phi = t * em;
    p.psi = (1.0 + m * t) * em;
    return p;
  }
  const double d = discriminant(params.gamma, b, r);
  if (d > 0.0) {
    const double x = 0.5 * r * std::sqrt(d) * t;
    const double em = std::exp(m * t);
    const double sc = sinc(x);
    p.phi = t * em * sc;
    p.psi = em * (std::cos(x) + m * t * sc);
    return p;
  }
  const double kappa = 0.5 * r * std::sqrt(-d);
  const double x = kappa * t;
  if (x < 0.5) {
    const double em = std::exp(m * t);
    const double sc = sinhc(x);
    p.phi = t * em * sc;
    p.psi = em * (std::cosh(x) + m * t * sc);
    return p;
  }
  // Well separated real roots: the exponential difference has no cancellation,
  // and e^{mt} cosh(kt) would overflow/underflow for large r.
  const double a = params.gamma * params.gamma;
  const double big = m - kappa;
  const double small = a * r * r / big;
  const double e1 = std::exp(small * t);
  const double e2 = std::exp(big * t);
  p.phi = (e1 - e2) / (2.0 * kappa);
  p.psi = (small * e1 - big * e2) / (2.0 * kappa);
  return p;
}

void evolve_into(const ModelParams& params, std::span<const double> xi, double t,
                 std::span<const cplx> v0, cplx rho0, std::span<cplx> v_out, cplx& rho_out) {
  const double r2 = norm_sq(xi);
  const double r = std::sqrt(r2);
  const double b = params.alpha + params.beta;
  const Propagator p = propagator(params, r, t);
  const cplx ig(0.0, params.gamma);

  cplx w0 = 0.0;
  for (std::size_t j = 0; j < xi.size(); ++j) w0 += xi[j] * v0[j];

  // Transverse part follows the heat flow; (rho, xi.v) follows the 2x2 acoustic block.
  const cplx long_coef = (p.psi - p.heat) * w0 / r2;
  const cplx rho_coef = ig * p.phi * rho0;
  for (std::size_t j = 0; j < xi.size(); ++j)
    v_out[j] = p.heat * v0[j] - xi[j] * rho_coef + xi[j] * long_coef;
  rho_out = (p.psi + b * r2 * p.phi) * rho0 - ig * p.phi * w0;
}

SpectralState evolve(const ModelParams& params, std::span<const double> xi, double t,
                     const SpectralState& initial) {
  params.validate();
  require_nonzero(xi);
  if (!(t >= 0.0)) throw std::invalid_argument("t must be nonnegative");
  if (static_cast<int>(xi.size()) != params.n || initial.v_hat.size() != xi.size())
    throw std::invalid_argument("dimension mismatch");
  SpectralState out{ComplexVec(xi.size()), 0.0};
  evolve_into(params, xi, t, initial.v_hat, initial.rho_hat, out.v_hat, out.rho_hat);
  return out;
}

void solve_exact_into(const ModelParams& params, const InitialData& data,
                      std::span<const double> xi, double t, std::span<cplx> v_out, cplx& rho_out) {
  const double g = data.profile_hat(std::sqrt(norm_sq(xi)));
  for (std::size_t j = 0; j < xi.size(); ++j) v_out[j] = data.amplitude_v[j] * g;
  evolve_into(params, xi, t, v_out, cplx(data.amplitude_rho * g, 0.0), v_out, rho_out);
}

SpectralState solve_exact(const ModelParams& params, const InitialData& data,
                          std::span<const double> xi, double t) {
  params.validate();
  data.validate(params.n);
  if (static_cast<int>(xi.size()) != params.n) throw std::invalid_argument("xi has wrong dimension");
  require_nonzero(xi);
  if (!(t >= 0.0)) throw std::invalid_argument("t must be nonnegative");
  SpectralState out{ComplexVec(xi.size()), 0.0};
  solve_exact_into(params, data, xi, t, out.v_hat, out.rho_hat);
  return out;
}

SpectralState solve_ode_oracle(const ModelParams& params, const InitialData& data,
                               std::span<const double> xi, double t, double step) {
  params.validate();
  data.validate(params.n);
  if (static_cast<int>(xi.size()) != params.n) throw std::invalid_argument("xi has wrong dimension");
  if (!(t >= 0.0)) throw std::invalid_argument("t must be nonnegative");
  const double r2 = norm_sq(xi);
  const double b = params.alpha + params.beta;
  if (!(step > 0.0) || !(b * r2 * step < 0.5))
    throw std::invalid_argument("RK4 step violates the stability guard b|xi|^2 step < 0.5");

  const FourierData f0 = fourier_data(data, xi);
  SpectralState y{f0.v0_hat, f0.rho0_hat};
  if (t == 0.0) return y;

  const auto steps = static_cast<long long>(std::ceil(t / step));
  const double h = t / static_cast<double>(steps);
  const std::size_t n = xi.size();
  ComplexVec k1(n), k2(n), k3(n), k4(n), tmp(n);
  cplx r1, r2c, r3, r4;
  for (long long s = 0; s < steps; ++s) {
    rhs(params, xi, r2, y.v_hat, y.rho_hat, k1, r1);
    for (std::size_t j = 0; j < n; ++j) tmp[j] = y.v_hat[j] + 0.5 * h * k1[j];
    rhs(params, xi, r2, tmp, y.rho_hat + 0.5 * h * r1, k2, r2c);
    for (std::size_t j = 0; j < n; ++j) tmp[j] = y.v_hat[j] + 0.5 * h * k2[j];
    rhs(params, xi, r2, tmp, y.rho_hat + 0.5 * h * r2c, k3, r3);
    for (std::size_t j = 0; j < n; ++j) tmp[j] = y.v_hat[j] + h * k3[j];
    rhs(params, xi, r2, tmp, y.rho_hat + h * r3, k4, r4);
    for (std::size_t j = 0; j < n; ++j)
      y.v_hat[j] += h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
    y.rho_hat += h / 6.0 * (r1 + 2.0 * r2c + 2.0 * r3 + r4);
  }
  return y;
}

double energy(const SpectralState& state) {
  return 0.5 * (std::norm(state.rho_hat) + norm_sq(state.v_hat));
}

OdeResidual density_ode_residual(const ModelParams& params, const InitialData& data,
                                 std::span<const double> xi, double t, double dt) {
  const double r2 = norm_sq(xi);
  const double r = std::sqrt(r2);
  if (!(dt > 0.0) || !(params.gamma * r * dt < 0.1))
    throw std::invalid_argument("dt must satisfy gamma |xi| dt < 0.1");
  if (!(t >= dt)) throw std::invalid_argument("t must be at least dt");
  const cplx rm = solve_exact(params, data, xi, t - dt).rho_hat;
  const cplx r0 = solve_exact(params, data, xi, t).rho_hat;
  const cplx rp = solve_exact(params, data, xi, t + dt).rho_hat;
  const double a = params.gamma * params.gamma;
  const double b = params.alpha + params.beta;
  const cplx second = (rp - 2.0 * r0 + rm) / (dt * dt);
  const cplx first = b * r2 * (rp - rm) / (2.0 * dt);
  const cplx zeroth = a * r2 * r0;
  return {std::abs(second + first + zeroth),
          std::max({std::abs(second), std::abs(first), std::abs(zeroth)})};
}

}  // namespace nsprofile
