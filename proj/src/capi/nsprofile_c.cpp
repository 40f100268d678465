#include "nsprofile/nsprofile.h"

#include <memory>
#include <new>
#include <string>

#include "core/errors.hpp"
#include "core/model.hpp"
#include "core/profiles.hpp"
#include "core/quadrature.hpp"
#include "core/runner.hpp"
#include "core/spectral.hpp"

using namespace nsprofile;

struct nsp_model {
  ModelParams params;
  InitialData data;
  Moments mom;
};

struct nsp_runner {
  RunConfig config;
  std::string plot_input;
  std::string last_verdict;
};

namespace {

thread_local std::string g_last_error;

nsp_status fail(nsp_status status, const std::string& message) {
  g_last_error = message;
  return status;
}

template <class F>
nsp_status guarded(F&& body) {
  try {
    g_last_error.clear();
    body();
    return NSP_OK;
  } catch (const UsageError& e) {
    return fail(NSP_ERR_UNKNOWN_SUBCOMMAND, e.what());
  } catch (const ConfigError& e) {
    return fail(NSP_ERR_CONFIG, e.what());
  } catch (const NumericalError& e) {
    return fail(NSP_ERR_NUMERICAL, e.what());
  } catch (const IoError& e) {
    return fail(NSP_ERR_IO, e.what());
  } catch (const std::invalid_argument& e) {
    return fail(NSP_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::bad_alloc&) {
    return fail(NSP_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(NSP_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(NSP_ERR_INTERNAL, "unknown error");
  }
}

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

std::span<const double> frequency(const nsp_model* m, const double* xi) {
  require(xi != nullptr, "xi must not be null");
  return {xi, static_cast<std::size_t>(m->params.n)};
}

void store(const cplx& z, double* out) {
  out[0] = z.real();
  out[1] = z.imag();
}

void store(const ComplexVec& v, double* out) {
  for (std::size_t j = 0; j < v.size(); ++j) store(v[j], out + 2 * j);
}

}  // namespace

extern "C" {

const char* nsp_last_error_message(void) { return g_last_error.c_str(); }

const char* nsp_status_name(nsp_status status) {
  switch (status) {
    case NSP_OK: return "ok";
    case NSP_ERR_INVALID_ARGUMENT: return "invalid argument";
    case NSP_ERR_CONFIG: return "configuration error";
    case NSP_ERR_NUMERICAL: return "numerical error";
    case NSP_ERR_IO: return "i/o error";
    case NSP_ERR_UNKNOWN_SUBCOMMAND: return "unknown subcommand";
    case NSP_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* nsp_version(void) { return NSPROFILE_VERSION; }

nsp_status nsp_model_create(double alpha, double beta, double gamma, int n, const double* P0, double Q0,
                            double width, nsp_model** out) {
  return guarded([&] {
    require(out != nullptr, "out must not be null");
    *out = nullptr;
    require(n >= 1, "n must be at least 1");
    require(P0 != nullptr, "P0 must not be null");
    auto m = std::make_unique<nsp_model>();
    m->params = {alpha, beta, gamma, n};
    m->params.validate();
    m->data.amplitude_v.assign(P0, P0 + n);
    m->data.amplitude_rho = Q0;
    m->data.width = width;
    m->data.validate(n);
    m->mom = moments(m->data);
    *out = m.release();
  });
}

void nsp_model_destroy(nsp_model* model) { delete model; }

nsp_status nsp_solve_exact(const nsp_model* model, const double* xi, double t, double* v_out, double* rho_out) {
  return guarded([&] {
    require(model && v_out && rho_out, "null argument");
    const SpectralState s = solve_exact(model->params, model->data, frequency(model, xi), t);
    store(s.v_hat, v_out);
    store(s.rho_hat, rho_out);
  });
}

nsp_status nsp_solve_rk4(const nsp_model* model, const double* xi, double t, double step, double* v_out,
                         double* rho_out) {
  return guarded([&] {
    require(model && v_out && rho_out, "null argument");
    const SpectralState s = solve_ode_oracle(model->params, model->data, frequency(model, xi), t, step);
    store(s.v_hat, v_out);
    store(s.rho_hat, rho_out);
  });
}

nsp_status nsp_velocity_profile(const nsp_model* model, const double* xi, double t, double* v_out) {
  return guarded([&] {
    require(model && v_out, "null argument");
    store(velocity_profile(model->params, model->mom, frequency(model, xi), t), v_out);
  });
}

nsp_status nsp_density_profile(const nsp_model* model, const double* xi, double t, double* rho_out) {
  return guarded([&] {
    require(model && rho_out, "null argument");
    store(density_profile(model->params, model->mom, frequency(model, xi), t), rho_out);
  });
}

nsp_status nsp_eigenvalues(const nsp_model* model, double r, double* sigma, nsp_branch* branch) {
  return guarded([&] {
    require(model && sigma, "null argument");
    const EigenPair e = eigenvalues(model->params, r);
    store(e.sigma1, sigma);
    store(e.sigma2, sigma + 2);
    if (branch) {
      *branch = e.branch == Branch::ComplexPair ? NSP_BRANCH_COMPLEX
                : e.branch == Branch::DoubleRoot ? NSP_BRANCH_DOUBLE
                                                 : NSP_BRANCH_REAL;
    }
  });
}

nsp_status nsp_energy(const nsp_model* model, const double* xi, double t, double* out) {
  return guarded([&] {
    require(model && out, "null argument");
    *out = energy(solve_exact(model->params, model->data, frequency(model, xi), t));
  });
}

nsp_status nsp_i_integral(const nsp_model* model, double t, double rel_tol, double* value, double* limit) {
  return guarded([&] {
    require(model && value, "null argument");
    QuadratureSpec spec;
    if (rel_tol > 0.0) spec.rel_tol = rel_tol;
    *value = i_integral(model->params, t, spec).value;
    if (limit) *limit = i_integral_limit(model->params);
  });
}

nsp_status nsp_lemma22_constants(double* L, double* M) {
  return guarded([&] {
    require(L && M, "null argument");
    const Lemma22Constants c = lemma22_constants();
    *L = c.L;
    *M = c.M;
  });
}

nsp_status nsp_sphere_area(int n, double* out) {
  return guarded([&] {
    require(out != nullptr, "null argument");
    *out = sphere_area(n);
  });
}

nsp_status nsp_runner_create_from_file(const char* path, nsp_runner** out) {
  return guarded([&] {
    require(path && out, "null argument");
    *out = nullptr;
    auto r = std::make_unique<nsp_runner>();
    r->config = load_config(path);
    *out = r.release();
  });
}

nsp_status nsp_runner_create_from_json(const char* json_text, nsp_runner** out) {
  return guarded([&] {
    require(json_text && out, "null argument");
    *out = nullptr;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
      throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    auto r = std::make_unique<nsp_runner>();
    r->config = RunConfig::from_json(j);
    *out = r.release();
  });
}

nsp_status nsp_runner_set_threads(nsp_runner* runner, int threads) {
  return guarded([&] {
    require(runner != nullptr, "null runner");
    require(threads >= 1, "threads must be at least 1");
    runner->config.quadrature.threads = threads;
  });
}

nsp_status nsp_runner_set_output_dir(nsp_runner* runner, const char* dir) {
  return guarded([&] {
    require(runner && dir && *dir, "output directory must be a non-empty string");
    runner->config.output_dir = dir;
  });
}

nsp_status nsp_runner_set_plot_input(nsp_runner* runner, const char* csv_path) {
  return guarded([&] {
    require(runner && csv_path, "null argument");
    runner->plot_input = csv_path;
  });
}

nsp_status nsp_runner_run(nsp_runner* runner, const char* subcommand, int* all_pass) {
  return guarded([&] {
    require(runner && subcommand && all_pass, "null argument");
    *all_pass = 0;
    runner->last_verdict.clear();
    const RunResult result = run(subcommand, runner->config, runner->plot_input);
    runner->last_verdict = result.verdict.dump(2);
    *all_pass = result.pass ? 1 : 0;
  });
}

const char* nsp_runner_last_verdict(const nsp_runner* runner) {
  return runner ? runner->last_verdict.c_str() : "";
}

void nsp_runner_destroy(nsp_runner* runner) { delete runner; }

size_t nsp_subcommand_count(void) { return subcommand_names().size(); }

const char* nsp_subcommand_name(size_t index) {
  const auto& names = subcommand_names();
  return index < names.size() ? names[index].c_str() : nullptr;
}

}  // extern "C"
