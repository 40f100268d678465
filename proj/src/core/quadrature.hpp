#pragma once

#include <functional>
#include <span>

#include "core/model.hpp"

namespace nsprofile {

struct QuadratureSpec {
  double r_max = 0.0;        // high-zone truncation; 0 selects auto_r_max
  int base_panels = 16;      // minimum radial panel count
  int osc_factor = 8;        // minimum panels per period 2 pi / (gamma t)
  int angular_nodes = 16;
  double rel_tol = 1e-8;
  int max_refinements = 5;   // panel doublings before giving up
  int threads = 1;
};

enum class Zone { Low, High, Full };

const char* zone_name(Zone zone);

struct ZoneNorm {
  Zone zone;
  double value;
  double est_error;
  long panels;
  bool converged;
};

// Pointwise field xi -> out, out.size() == components.
using Field = std::function<void(std::span<const double> xi, std::span<cplx> out)>;

// |field|^2 must depend on xi only through |xi| and the angle to `axis`.
struct ZoneIntegrand {
  Field field;
  int components = 1;
  RealVec axis;             // empty selects e_1
  double data_width = 0.0;  // > 0 makes auto_r_max cover the data's decay e^{-s^2 r^2}
};

// max(4 delta0, 8/sqrt(alpha t), 8/s)
double auto_r_max(const ModelParams& params, double t, double data_width);

// Integral of |field|^2 over a frequency zone, reduced to (r, angle) coordinates
// and integrated with 8-point Gauss-Legendre radial panels. Panel sums are reduced
// in a fixed order, so results do not depend on spec.threads.
ZoneNorm zone_norm_sq(const ZoneIntegrand& integrand, const ModelParams& params, double t,
                      Zone zone, const QuadratureSpec& spec);

struct QuadValue {
  double value;
  double est_error;
  long panels;
  bool converged;
};

// int_lo^hi g(r) dr. Panels resolve oscillations of wavenumber `wavenumber` and a
// Gaussian bump of width `gauss_width` (0 disables either constraint).
QuadValue integrate_radial(const std::function<double(double)>& g, double lo, double hi,
                           double wavenumber, double gauss_width, const QuadratureSpec& spec);

// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1].
struct GaussRule {
  RealVec nodes;
  RealVec weights;
};

GaussRule gauss_legendre(int count);

// S0 = int_0^inf e^{-th^2} th^{n-1} d th = Gamma(n/2) / 2
double s0_moment(int n);

// I(t) = int |(i xi) e^{-(alpha+beta)|xi|^2 t/2} sin(gamma t |xi|)/|xi||^2 d xi
QuadValue i_integral(const ModelParams& params, double t, const QuadratureSpec& spec);

// Large-t limit of t^{n/2} I(t): (S0/2) |S^{n-1}| (alpha+beta)^{-n/2}
double i_integral_limit(const ModelParams& params);

// Surface measure of the cap {omega in S^{n-1} : omega . e >= 1/2}.
double cone_cap_measure(int n);

// int_K e^{-t(alpha+beta)|xi|^2} cos^2(gamma t |xi|) d xi over the cone
// K = {xi : (xi/|xi|).(P0/|P0|) >= 1/2}.
QuadValue cone_integral(const ModelParams& params, std::span<const double> P0, double t,
                        const QuadratureSpec& spec);

}  // namespace nsprofile
