#pragma once

#include <span>

#include "core/model.hpp"

namespace nsprofile {

// Roots of lambda^2 + b r^2 lambda + a r^2 = 0.
enum class Branch { ComplexPair, DoubleRoot, RealPair };

struct EigenPair {
  cplx sigma1;
  cplx sigma2;
  Branch branch;
};

// For r < delta0 the conjugate pair with Im sigma1 > 0; for r > delta0 the real
// roots with sigma1 the one closer to zero, computed without cancellation.
EigenPair eigenvalues(const ModelParams& params, double r);

// Real coefficients of the solution operator at one frequency radius:
//   heat = e^{-alpha r^2 t}
//   phi  = (e^{s1 t} - e^{s2 t}) / (s1 - s2)
//   psi  = (s1 e^{s1 t} - s2 e^{s2 t}) / (s1 - s2)
// evaluated through the symmetric form e^{mt} sinh(ht)/h, which stays finite
// and continuous through the double root.
struct Propagator {
  double heat;
  double phi;
  double psi;
};

Propagator propagator(const ModelParams& params, double r, double t);

struct SpectralState {
  ComplexVec v_hat;
  cplx rho_hat;
};

// Applies the exact flow of the transformed system for time t to an arbitrary
// initial state (v0, rho0) at frequency xi != 0. v_out may alias v0.
void evolve_into(const ModelParams& params, std::span<const double> xi, double t,
                 std::span<const cplx> v0, cplx rho0, std::span<cplx> v_out, cplx& rho_out);

SpectralState evolve(const ModelParams& params, std::span<const double> xi, double t,
                     const SpectralState& initial);

// Exact solution from the transformed initial data.
SpectralState solve_exact(const ModelParams& params, const InitialData& data,
                          std::span<const double> xi, double t);

// Allocation-free variant used inside quadrature loops.
void solve_exact_into(const ModelParams& params, const InitialData& data,
                      std::span<const double> xi, double t, std::span<cplx> v_out, cplx& rho_out);

// Classical RK4 on
//   rho_t = -i gamma xi.v,  v_t = -alpha|xi|^2 v - beta xi (xi.v) - i gamma xi rho,
// with the step shrunk so that an integer number of steps lands on t.
// Requires b |xi|^2 step < 0.5.
SpectralState solve_ode_oracle(const ModelParams& params, const InitialData& data,
                               std::span<const double> xi, double t, double step);

// (|rho|^2 + |v|^2) / 2
double energy(const SpectralState& state);

struct OdeResidual {
  double residual;  // |rho'' + b r^2 rho' + a r^2 rho| by central differences
  double scale;     // largest of the three term magnitudes
};

// Checks that the exact density solves the damped wave equation in time.
// Requires gamma |xi| dt < 0.1 and t >= dt.
OdeResidual density_ode_residual(const ModelParams& params, const InitialData& data,
                                 std::span<const double> xi, double t, double dt);

}  // namespace nsprofile
