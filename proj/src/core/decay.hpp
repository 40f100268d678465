#pragma once

#include <cstdint>
#include <span>
#include <string>

#include "core/model.hpp"
#include "core/profiles.hpp"
#include "core/quadrature.hpp"

namespace nsprofile {

struct DecaySeries {
  RealVec times;   // ascending, positive for log-log use
  RealVec values;  // strictly positive
  std::string label;
};

// Half-open index range [begin, end) into a series.
struct FitWindow {
  std::size_t begin = 0;
  std::size_t end = 0;
  std::size_t size() const { return end - begin; }
};

struct DecayFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  FitWindow window;
};

RealVec geometric_grid(double t_min, double t_max, int points);
RealVec linear_grid(double t_min, double t_max, int points);

FitWindow full_window(std::size_t count);
// Last half of the grid, but at least min_points (clamped to the series length).
FitWindow tail_window(std::size_t count, std::size_t min_points = 6);

// Least squares of log(value) against log(t) on the window.
DecayFit fit_loglog(const DecaySeries& series, FitWindow window);
// Least squares of log(value) against t on the window.
DecayFit fit_semilog(const DecaySeries& series, FitWindow window);

// Thrown-on-failure wrapper: returns the zone norm value or throws NumericalError.
double checked_norm_sq(const ZoneIntegrand& integrand, const ModelParams& params, double t, Zone zone,
                       const QuadratureSpec& spec, const std::string& what);

// Frequency-space L^2 norm of the velocity, ||v_hat(t, .)||.
double velocity_norm(const ModelParams& params, const InitialData& data, double t,
                     const QuadratureSpec& spec);

struct ProfileErrorReport {
  RealVec times;
  RealVec residual_sq;  // ||v_hat - profile||^2 on the low zone
  RealVec reduced_sq;   // ||v_hat - profile - E0 - E6||^2 on the low zone
  DecayFit fit;
  double threshold;     // slope must not exceed this
  bool reduced_tighter; // reduced <= residual at the last time
  bool pass;
};

ProfileErrorReport verify_profile_error(const ModelParams& params, const InitialData& data,
                                        std::span<const double> times, const QuadratureSpec& spec,
                                        double slope_tol = 0.1);

struct DensityErrorReport {
  RealVec times;
  RealVec residual_sq;  // ||rho_hat - density profile||^2 on the low zone
  DecayFit fit;
  double threshold;
  bool pass;
};

DensityErrorReport verify_density_profile_error(const ModelParams& params, const InitialData& data,
                                                std::span<const double> times,
                                                const QuadratureSpec& spec, double slope_tol = 0.1);

// Data condition under which the two-sided velocity estimate is asserted.
void require_small_momentum(const InitialData& data, double max_ratio = 0.1);

struct RateReport {
  DecaySeries series;  // ||v_hat(t)||
  DecayFit fit;
  double expected;     // -n/4
  double tolerance;
  bool pass;
};

RateReport verify_velocity_rate(const ModelParams& params, const InitialData& data,
                                std::span<const double> times, const QuadratureSpec& spec,
                                double tolerance = 0.05);

struct SandwichReport {
  RealVec times;
  RealVec normalized_values;  // ||v_hat(t)|| t^{n/4}
  FitWindow window;
  double plateau_min;
  double plateau_max;
  double ratio;
  double ratio_max;
  bool pass;
};

SandwichReport verify_sandwich(const ModelParams& params, const InitialData& data,
                               std::span<const double> times, const QuadratureSpec& spec,
                               double ratio_max = 2.0);

struct TwoSidedReport {
  std::string item;
  RealVec times;
  RealVec normalized;  // t^{n/2} times the integral
  FitWindow window;
  double plateau_min;
  double plateau_max;
  double ratio;
  bool pass;
};

TwoSidedReport two_sided_report(std::string item, std::span<const double> times, RealVec normalized,
                                double ratio_max);

struct Lemma31Report {
  TwoSidedReport item1;  // xi(xi.P0)/|xi|^2 e^{-alpha|xi|^2 t}
  TwoSidedReport item2;  // I(t)
  TwoSidedReport item3;  // xi(xi.P0)/|xi|^2 e^{-b|xi|^2 t/2} cos(gamma t|xi|)
  RealVec cone_normalized;    // t^{n/2} |P0|^2/4 int_K e^{-bt|xi|^2} cos^2
  double cone_cap;            // c(n)
  double witness_floor;       // c(n)|P0|^2/8 * t^{n/2} int r^{n-1} e^{-bt r^2} dr
  bool witness_pass;          // item3 >= cone term at every t, cone plateau > 0, item3 min >= floor
  bool pass;
};

Lemma31Report verify_lemma31(const ModelParams& params, std::span<const double> P0,
                             std::span<const double> times, const QuadratureSpec& spec,
                             double ratio_max = 4.0);

struct HighFreqReport {
  DecaySeries series;   // E_h(t)
  RealVec low_energy;   // energy on the low zone, for the dominance check
  DecayFit exp_fit;     // log E_h against t
  double eta;           // -slope
  double komornik_T0;
  bool non_increasing;
  bool komornik_hypothesis;
  bool komornik_conclusion;
  bool pass;
};

HighFreqReport highfreq_energy(const ModelParams& params, const InitialData& data,
                               std::span<const double> times, const QuadratureSpec& spec,
                               double min_r_squared = 0.99);

struct BoundsRow {
  double t;
  BoundReport bounds;
  double e0_sq;       // measured ||E0||^2 on the low zone
  double e6_sq;       // measured ||E6||^2
  double rest_sq;     // measured ||R - E0 - E6||^2 (= ||E1 + ... + E5||^2)
  double rest_bound;  // 5 (b1 + ... + b5)
  bool pass;
};

// Measured remainder pieces against their closed-form bounds, with a 5% cushion.
std::vector<BoundsRow> compare_bounds(const ModelParams& params, const InitialData& data,
                                      std::span<const double> times, const QuadratureSpec& spec);

struct OraclePoint {
  double r;
  double t;
  RealVec xi;
  double rel_err;
};

struct OracleReport {
  std::vector<OraclePoint> points;
  double max_rel_err;
  double tolerance;
  bool pass;
};

// Closed form against RK4 on every (radius, time) pair with seeded random directions.
OracleReport oracle_check(const ModelParams& params, const InitialData& data,
                          std::span<const double> radii, std::span<const double> times, double step,
                          std::uint64_t seed, double tolerance = 1e-8);

// Oracle radii: geometric between r_min and r_max, with the two entries closest to
// delta0 replaced by delta0 (1 -+ 1e-2) so the grid straddles the double root.
RealVec oracle_radii(const ModelParams& params, double r_min, double r_max, int points);

struct EnergyBalance {
  double lhs;  // E(S) - E(T)
  double rhs;  // alpha int |xi|^2 |v|^2 + beta int |xi.v|^2
  double rel_err;
};

EnergyBalance energy_balance(const ModelParams& params, const InitialData& data,
                             std::span<const double> xi, double S, double T);

// Uniform double in [0, 1) from a 64-bit draw, identical on every platform.
double unit_uniform(std::uint64_t bits);

}  // namespace nsprofile
