#pragma once

#include <array>
#include <span>

#include "core/model.hpp"

namespace nsprofile {

// Leading low-frequency velocity profile
//   P0 e^{-alpha r^2 t} - xi(xi.P0)/r^2 e^{-alpha r^2 t}
//   - (i xi) e^{-b r^2 t/2} sin(gamma t r)/r Q0 + xi(xi.P0)/r^2 e^{-b r^2 t/2} cos(gamma t r).
void velocity_profile_into(const ModelParams& params, std::span<const double> P0, double Q0,
                           std::span<const double> xi, double t, std::span<cplx> out);
ComplexVec velocity_profile(const ModelParams& params, const Moments& moments,
                            std::span<const double> xi, double t);

// -(i xi).P0 e^{-b t r^2/2} sin(gamma t r)/r + Q0 e^{-b t r^2/2} cos(gamma t r)
cplx density_profile_value(const ModelParams& params, std::span<const double> P0, double Q0,
                           std::span<const double> xi, double t);
cplx density_profile(const ModelParams& params, const Moments& moments,
                     std::span<const double> xi, double t);

// Moment-remainder part of the exact velocity: the flow applied to (A0 - iB0, A_rho - iB_rho).
// Only defined for 0 < |xi| <= delta0.
void e0_term_into(const ModelParams& params, const InitialData& data, std::span<const double> xi,
                  double t, std::span<cplx> out);
ComplexVec e0_term(const ModelParams& params, const InitialData& data, std::span<const double> xi,
                   double t);

// -(b/2) xi(xi.P0) e^{-b r^2 t/2} sin(gamma t r)/(gamma r)
void e6_term_into(const ModelParams& params, std::span<const double> P0, std::span<const double> xi,
                  double t, std::span<cplx> out);
ComplexVec e6_term(const ModelParams& params, const Moments& moments, std::span<const double> xi,
                   double t);

struct ProfileDecomposition {
  ComplexVec leading;
  ComplexVec e0;
  ComplexVec e6;
  ComplexVec raw_remainder;  // exact - leading
};

ProfileDecomposition decompose(const ModelParams& params, const InitialData& data,
                               std::span<const double> xi, double t);

struct ElemEstimate {
  double value;     // int_{|xi| <= r_cut} |xi|^k e^{-lambda |xi|^2 t} d xi
  double constant;  // C_n = |S^{n-1}| Gamma((n+k)/2) / (2 lambda^{(n+k)/2})
  double bound;     // C_n t^{-(n+k)/2}
};

ElemEstimate elem_est(int n, double k, double lambda, double t, double r_cut);

// Full-space Gaussian moment constant used by elem_est.
double elem_constant(int n, double k, double lambda);

// Upper bounds for the low-zone L^2 norms (squared) of the remainder pieces,
// indexed E0..E6.
struct BoundReport {
  std::array<double, 7> terms{};
  double total = 0.0;
};

BoundReport lemma21_bound(const ModelParams& params, const InitialData& data, double t);

}  // namespace nsprofile
