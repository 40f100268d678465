#pragma once

#include <cmath>
#include <random>

#include "core/model.hpp"

namespace nsprofile::test {

inline InitialData gaussian(RealVec P0, double Q0, double s = 1.0) {
  InitialData d;
  d.amplitude_v = std::move(P0);
  d.amplitude_rho = Q0;
  d.width = s;
  return d;
}

inline ModelParams params(double alpha, double beta, double gamma, int n) {
  ModelParams p;
  p.alpha = alpha;
  p.beta = beta;
  p.gamma = gamma;
  p.n = n;
  return p;
}

inline double rel(double x, double ref) { return std::abs(x - ref) / std::abs(ref); }

inline double rel(cplx x, cplx ref) { return std::abs(x - ref) / std::abs(ref); }

// Random point with |xi| = r.
inline RealVec on_sphere(std::mt19937_64& rng, int n, double r) {
  std::normal_distribution<double> g;
  RealVec x(n);
  double s = 0.0;
  do {
    s = 0.0;
    for (double& v : x) {
      v = g(rng);
      s += v * v;
    }
  } while (s < 1e-8);
  for (double& v : x) v *= r / std::sqrt(s);
  return x;
}

}  // namespace nsprofile::test
