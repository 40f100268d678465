#pragma once

#include <complex>
#include <span>
#include <vector>

namespace nsprofile {

using cplx = std::complex<double>;
using RealVec = std::vector<double>;
using ComplexVec = std::vector<cplx>;

inline double dot(std::span<const double> x, std::span<const double> y) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

inline double norm_sq(std::span<const double> x) { return dot(x, x); }

inline double norm_sq(std::span<const cplx> x) {
  double s = 0.0;
  for (const cplx& z : x) s += std::norm(z);
  return s;
}

// Coefficients of
//   rho_t + gamma div v = 0,
//   v_t - alpha Lap v - beta grad div v + gamma grad rho = 0   in R^n.
struct ModelParams {
  double alpha = 1.0;
  double beta = 1.0;
  double gamma = 1.0;
  int n = 2;

  // Throws std::invalid_argument unless alpha > 0, beta >= 0, gamma > 0, n >= 1.
  void validate() const;
};

struct DerivedParams {
  double a;       // gamma^2
  double b;       // alpha + beta
  double delta0;  // 2 gamma / b, where the acoustic eigenvalues merge
  double r_low;   // delta0 / sqrt(2), edge of the low-frequency zone
};

DerivedParams derived_params(const ModelParams& params);

enum class DataFamily { Gaussian };

// v0_j(x) = amplitude_v[j] G_s(x), rho0(x) = amplitude_rho G_s(x) with G_s the
// unit-mass Gaussian of standard deviation s = width.
struct InitialData {
  RealVec amplitude_v;
  double amplitude_rho = 0.0;
  double width = 1.0;
  DataFamily family = DataFamily::Gaussian;

  int dimension() const { return static_cast<int>(amplitude_v.size()); }
  void validate(int n) const;

  // Transform of the unit-mass profile at |xi| = r.
  double profile_hat(double r) const;
};

struct Moments {
  RealVec P0;
  double Q0;
  RealVec l11_v;   // ||v0_j||_{1,1} = int (1 + |x|) |v0_j| dx
  double l11_rho;  // ||rho0||_{1,1}
};

Moments moments(const InitialData& data);

// Transforms use the unnormalized convention phi_hat(xi) = int e^{-i x.xi} phi(x) dx,
// so that phi_hat(0) is the total integral.
struct FourierData {
  ComplexVec v0_hat;
  cplx rho0_hat;
};

FourierData fourier_data(const InitialData& data, std::span<const double> xi);

// v0_hat = A0 - i B0 + P0 and rho0_hat = A_rho - i B_rho + Q0.
struct ABDecomposition {
  RealVec A0;
  RealVec B0;
  double A_rho;
  double B_rho;
};

ABDecomposition ab_decomposition(const InitialData& data, std::span<const double> xi);

// L = sup |1 - cos th| / |th|, M = sup |sin th| / |th|.
struct Lemma22Constants {
  double L;
  double M;
};

Lemma22Constants lemma22_constants();

// Surface measure of the unit sphere S^{n-1}.
double sphere_area(int n);

}  // namespace nsprofile
