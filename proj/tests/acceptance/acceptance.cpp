#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "core/decay.hpp"
#include "core/errors.hpp"
#include "core/model.hpp"
#include "core/quadrature.hpp"
#include "core/report.hpp"
#include "core/runner.hpp"

using namespace nsprofile;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

ModelParams unit_params(int n) {
  ModelParams p;
  p.n = n;
  return p;
}

InitialData data(RealVec P0, double Q0) {
  InitialData d;
  d.amplitude_v = std::move(P0);
  d.amplitude_rho = Q0;
  d.width = 1.0;
  return d;
}

RealVec momentum(int n, double p) {
  RealVec v(n, 0.0);
  v[0] = p;
  return v;
}

std::string num(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

const RealVec& asymptotic_times() {
  static const RealVec t = geometric_grid(16.0, 16384.0, 11);
  return t;
}

Outcome oracle() {
  const ModelParams p = unit_params(2);
  const RealVec radii = oracle_radii(p, 0.05, 5.0, 10);
  const RealVec times = geometric_grid(0.1, 20.0, 10);
  const auto start = std::chrono::steady_clock::now();
  const OracleReport r = oracle_check(p, data({0.1, 0.0}, 1.0), radii, times, 1e-4, 20240601);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const double d0 = 2.0 * p.gamma / (p.alpha + p.beta);
  bool below = false, above = false;
  for (double r : radii) {
    below = below || (r < d0 && r > 0.98 * d0);
    above = above || (r > d0 && r < 1.02 * d0);
  }
  const bool straddles = below && above;
  return {r.pass && straddles && r.points.size() == 100 && secs < 30.0,
          "max_rel_err=" + num(r.max_rel_err) + " points=" + std::to_string(r.points.size()) +
              " oracle_s=" + num(secs)};
}

Outcome remainder_rate() {
  Outcome o{true, ""};
  for (int n : {2, 3}) {
    const auto start = std::chrono::steady_clock::now();
    const ProfileErrorReport r =
        verify_profile_error(unit_params(n), data(momentum(n, 0.1), 1.0), asymptotic_times(), QuadratureSpec{});
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const double threshold = -(0.5 * n + 1.0) + 0.1;
    o.pass = o.pass && r.fit.slope <= threshold && secs < 300.0;
    o.detail += "n=" + std::to_string(n) + " slope=" + num(r.fit.slope) + " (<= " + num(threshold) +
                ") run_s=" + num(secs) + "; ";
  }
  return o;
}

Outcome density_rate() {
  const DensityErrorReport r =
      verify_density_profile_error(unit_params(2), data({0.1, 0.0}, 1.0), asymptotic_times(), QuadratureSpec{});
  return {r.fit.slope <= -1.9, "slope=" + num(r.fit.slope) + " (<= -1.9)"};
}

Outcome velocity_rate() {
  Outcome o{true, ""};
  for (int n : {2, 3}) {
    const RateReport r = verify_velocity_rate(unit_params(n), data(RealVec(n, 0.0), 1.0), asymptotic_times(),
                                              QuadratureSpec{});
    const double expected = -0.25 * n;
    o.pass = o.pass && std::abs(r.fit.slope - expected) <= 0.05;
    o.detail += "n=" + std::to_string(n) + " slope=" + num(r.fit.slope) + " (" + num(expected) + " +- 0.05); ";
  }
  return o;
}

Outcome sandwich() {
  const ModelParams p = unit_params(2);
  const SandwichReport s = verify_sandwich(p, data({0.05, 0.0}, 1.0), asymptotic_times(), QuadratureSpec{});
  const double t = 1e4;
  const double scaled = velocity_norm(p, data({0.0, 0.0}, 1.0), t, QuadratureSpec{}) * std::sqrt(t);
  const double target = std::sqrt(std::numbers::pi / 4.0);
  const double dev = std::abs(scaled - target) / target;
  return {s.plateau_min > 0.0 && s.ratio <= 2.0 && dev <= 0.05,
          "plateau=[" + num(s.plateau_min) + ", " + num(s.plateau_max) + "] ratio=" + num(s.ratio) +
              " zero-momentum t^(1/2)||v||(1e4)=" + num(scaled) + " vs " + num(target) + " dev=" + num(dev)};
}

Outcome i_limit() {
  Outcome o{true, ""};
  for (int n : {2, 3}) {
    const ModelParams p = unit_params(n);
    const double t = 1e4;
    const double scaled = std::pow(t, 0.5 * n) * i_integral(p, t, QuadratureSpec{}).value;
    const double limit = i_integral_limit(p);
    const double dev = std::abs(scaled - limit) / limit;
    o.pass = o.pass && dev <= 0.02;
    o.detail += "n=" + std::to_string(n) + " t^(n/2)I=" + num(scaled) + " limit=" + num(limit) + " dev=" + num(dev) + "; ";
  }
  return o;
}

Outcome lemma_items() {
  Outcome o{true, ""};
  const double caps[] = {2.0 * std::numbers::pi / 3.0, std::numbers::pi};
  for (int n : {2, 3}) {
    const Lemma31Report r = verify_lemma31(unit_params(n), momentum(n, 0.1), asymptotic_times(), QuadratureSpec{});
    const bool cap_ok = std::abs(r.cone_cap - caps[n - 2]) <= 1e-12 * caps[n - 2];
    o.pass = o.pass && r.item1.pass && r.item3.pass && r.witness_pass && cap_ok;
    o.detail += "n=" + std::to_string(n) + " item1 ratio=" + num(r.item1.ratio) + " item3 ratio=" +
                num(r.item3.ratio) + " item3 min=" + num(r.item3.plateau_min) + " floor=" + num(r.witness_floor) +
                " c(n)=" + num(r.cone_cap) + "; ";
  }
  return o;
}

Outcome highfreq() {
  const RealVec t = linear_grid(0.0, 24.0, 41);
  const HighFreqReport h = highfreq_energy(unit_params(2), data({0.1, 0.0}, 1.0), t, QuadratureSpec{});
  return {h.non_increasing && h.exp_fit.r_squared >= 0.99 && h.exp_fit.slope < 0.0 && h.komornik_hypothesis &&
              h.komornik_conclusion,
          "non_increasing=" + std::string(h.non_increasing ? "yes" : "no") + " r2=" + num(h.exp_fit.r_squared) +
              " slope=" + num(h.exp_fit.slope) + " T0=" + num(h.komornik_T0)};
}

Outcome energy_identity() {
  std::mt19937_64 rng(7);
  double worst = 0.0;
  for (int k = 0; k < 20; ++k) {
    const int n = 2 + k % 2;
    ModelParams p = unit_params(n);
    p.beta = 0.5 + unit_uniform(rng());
    const InitialData d = data(momentum(n, 0.1), 1.0);
    const double r = 0.05 * std::pow(100.0, unit_uniform(rng()));
    RealVec xi(n);
    double s2 = 0.0;
    for (double& x : xi) {
      x = 2.0 * unit_uniform(rng()) - 1.0;
      s2 += x * x;
    }
    for (double& x : xi) x *= r / std::sqrt(s2);
    const double S = 10.0 * unit_uniform(rng());
    const double T = S + 0.5 + 19.5 * unit_uniform(rng());
    worst = std::max(worst, energy_balance(p, d, xi, S, T).rel_err);
  }
  return {worst <= 1e-6, "worst rel_err=" + num(worst) + " over 20 samples"};
}

Outcome moment_bounds() {
  const Lemma22Constants c = lemma22_constants();
  std::mt19937_64 rng(13);
  long violations = 0;
  const double tol = 1e-9;
  for (int k = 0; k < 1000; ++k) {
    const int n = 1 + k % 3;
    RealVec P(n);
    for (double& x : P) x = 2.0 * unit_uniform(rng()) - 1.0;
    InitialData d = data(P, 2.0 * unit_uniform(rng()) - 1.0);
    d.width = 0.2 + 3.0 * unit_uniform(rng());
    const Moments m = moments(d);
    RealVec xi(n);
    for (double& x : xi) x = 10.0 * (2.0 * unit_uniform(rng()) - 1.0);
    const double r = std::sqrt(norm_sq(xi));
    const ABDecomposition ab = ab_decomposition(d, xi);
    for (int j = 0; j < n; ++j) {
      violations += std::abs(ab.A0[j]) > c.L * r * m.l11_v[j] + tol;
      violations += std::abs(ab.B0[j]) > c.M * r * m.l11_v[j] + tol;
    }
    violations += std::abs(ab.A_rho) > c.L * r * m.l11_rho + tol;
    violations += std::abs(ab.B_rho) > c.M * r * m.l11_rho + tol;
  }
  const bool constants = std::abs(c.L - 0.724611) < 1e-6 && c.M == 1.0;
  return {violations == 0 && constants, "L=" + num(c.L) + " M=" + num(c.M) + " violations=" + std::to_string(violations)};
}

Outcome determinism() {
  std::string first;
  bool same = true;
  std::string detail;
  for (int threads : {1, 4, 8}) {
    const auto dir = std::filesystem::temp_directory_path() / ("nsprofile_accept_t" + std::to_string(threads));
    std::filesystem::remove_all(dir);
    RunConfig c = RunConfig::from_json({{"n", 2}, {"P0", {0.1, 0.0}}, {"Q0", 1.0}, {"svg", false}});
    c.quadrature.threads = threads;
    c.output_dir = dir.string();
    run("profile-error", c);
    const std::string csv = read_text_file((dir / "profile-error.csv").string());
    if (first.empty()) first = csv;
    same = same && csv == first;
    detail += "threads=" + std::to_string(threads) + " fnv=" + hex64(fnv1a64(csv)) + " ";
  }
  return {same && !first.empty(), detail};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> check;
  };
  const std::vector<Criterion> criteria = {
      {1, "closed form matches RK4 on the 10x10 grid", oracle},
      {2, "low-zone velocity remainder rate", remainder_rate},
      {3, "low-zone density remainder rate", density_rate},
      {4, "velocity decay rate t^(-n/4)", velocity_rate},
      {5, "two-sided velocity estimate", sandwich},
      {6, "limit of t^(n/2) I(t)", i_limit},
      {7, "two-sided items 1 and 3 with cone witness", lemma_items},
      {8, "high-frequency energy decay and Komornik inequality", highfreq},
      {9, "per-frequency energy identity", energy_identity},
      {10, "moment remainder bounds with L and M", moment_bounds},
      {11, "byte-identical CSV across 1, 4, 8 threads", determinism},
  };
  int failed = 0;
  for (const Criterion& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s criterion %d: %s | %s| %.1fs\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(), secs);
    std::fflush(stdout);
    failed += o.pass ? 0 : 1;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
