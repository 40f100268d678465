#include <cstdio>
#include <cstdlib>
#include <string>

#include "CLI11.hpp"
#include "nsprofile/nsprofile.h"

namespace {

int threads_from_env() {
  const char* env = std::getenv("NSPROFILE_THREADS");
  if (!env || !*env) return 0;
  char* end = nullptr;
  const long v = std::strtol(env, &end, 10);
  if (*end != '\0' || v < 1 || v > 1024) {
    std::fprintf(stderr, "nsprofile: ignoring invalid NSPROFILE_THREADS='%s'\n", env);
    return 0;
  }
  return static_cast<int>(v);
}

int report(nsp_status status) {
  std::fprintf(stderr, "nsprofile: %s: %s\n", nsp_status_name(status), nsp_last_error_message());
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Decay-profile verification runs for the linearized compressible Navier-Stokes system"};
  app.set_version_flag("--version", nsp_version());
  std::string subcommand, config_path, out_dir, input;
  int threads = 0;

  std::string names;
  for (size_t i = 0; i < nsp_subcommand_count(); ++i) names += std::string(i ? ", " : "") + nsp_subcommand_name(i);
  app.add_option("subcommand", subcommand, "One of: " + names)->required();
  app.add_option("--config", config_path, "Flat JSON run configuration");
  app.add_option("--out", out_dir, "Output directory (overrides the config)");
  app.add_option("--threads", threads, "Worker threads (falls back to NSPROFILE_THREADS)")->check(CLI::Range(1, 1024));
  app.add_option("--input", input, "CSV file rendered by the plot subcommand");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (config_path.empty() && subcommand != "plot") {
    std::fprintf(stderr, "nsprofile: --config is required for '%s'\n", subcommand.c_str());
    return 2;
  }

  nsp_runner* runner = nullptr;
  nsp_status st = config_path.empty() ? nsp_runner_create_from_json("{}", &runner)
                                      : nsp_runner_create_from_file(config_path.c_str(), &runner);
  if (st != NSP_OK) return report(st);

  if (threads == 0) threads = threads_from_env();
  if (threads > 0 && (st = nsp_runner_set_threads(runner, threads)) != NSP_OK) {
    nsp_runner_destroy(runner);
    return report(st);
  }
  if (!out_dir.empty() && (st = nsp_runner_set_output_dir(runner, out_dir.c_str())) != NSP_OK) {
    nsp_runner_destroy(runner);
    return report(st);
  }
  if (!input.empty() && (st = nsp_runner_set_plot_input(runner, input.c_str())) != NSP_OK) {
    nsp_runner_destroy(runner);
    return report(st);
  }

  int pass = 0;
  st = nsp_runner_run(runner, subcommand.c_str(), &pass);
  if (st != NSP_OK) {
    nsp_runner_destroy(runner);
    return report(st);
  }
  std::printf("%s\n", nsp_runner_last_verdict(runner));
  nsp_runner_destroy(runner);
  return pass ? 0 : 1;
}
