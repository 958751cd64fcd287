#include <omp.h>

#include <CLI11.hpp>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <string>

#include "pseudomode/errors.hpp"
#include "pseudomode/run_config.hpp"
#include "pseudomode/symbolic_wkb.hpp"
#include "pseudomode/verify.hpp"

namespace {

// --workers wins over PSEUDOMODE_WORKERS, which wins over the OpenMP default.
void set_workers(int flag_value) {
  int workers = flag_value;
  if (workers <= 0) {
    if (const char* env = std::getenv("PSEUDOMODE_WORKERS")) workers = std::atoi(env);
  }
  if (workers > 0) omp_set_num_threads(workers);
}

int verify_command(const std::string& suite) {
  pm::SuiteResult result;
  try {
    result = pm::run_suite(suite);
  } catch (const pm::Error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  }
  for (const auto& c : result.criteria) {
    std::printf("%s %2d %s\n", c.pass ? "PASS" : "FAIL", c.id, c.title.c_str());
    for (const auto& line : c.details) std::printf("       %s\n", line.c_str());
  }
  return result.pass() ? 0 : 1;
}

int dump_command(int n) {
  try {
    std::cout << pm::gen_remainder(n).to_string();
    return 0;
  } catch (const pm::Error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pseudomode construction and verification for Schrodinger operators with complex potentials"};
  app.require_subcommand(1);
  int workers = 0;
  app.add_option("--workers", workers, "worker threads (overrides PSEUDOMODE_WORKERS)");

  std::string config_path;
  auto* run = app.add_subcommand("run", "run a sweep described by a JSON config");
  run->add_option("config", config_path, "config path")->required();

  std::string suite;
  auto* verify = app.add_subcommand("verify", "run an acceptance suite");
  verify->add_option("suite", suite, "symbolic, envelopes, rates, mollify, curves or oracle")->required();

  int dump_n = 0;
  auto* dump = app.add_subcommand("dump-terms", "print the symbolic remainder r_n");
  dump->add_option("--n", dump_n, "order n")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  set_workers(workers);
  if (*run) return pm::run_command(config_path, std::cerr);
  if (*verify) return verify_command(suite);
  return dump_command(dump_n);
}
