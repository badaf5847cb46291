// SPDX-FileCopyrightText: 2026 The kdv5lab Authors
// SPDX-License-Identifier: Apache-2.0

// kdv5lab: scenario runner. Exit codes: 0 success, 1 runtime failure (recorded
// in manifest.json), 2 invalid configuration or arguments.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "kdv5/cli/scenarios.hpp"

namespace {

struct Flags {
  std::string config;
  std::string out = "kdv5lab-out";
  bool quiet = false;
  kdv5::cli::Overrides o;
};

void add_flags(CLI::App* sub, Flags& f) {
  sub->add_option("--config", f.config, "JSON config file; flags override its values");
  sub->add_option("--out", f.out, "output directory")->capture_default_str();
  sub->add_option("--seed", f.o.seed, "master seed");
  sub->add_option("--lambda,--lambdas", f.o.lambdas, "comma-separated lambda sweep")->delimiter(',');
  sub->add_option("--s", f.o.s, "Sobolev index");
  sub->add_option("--delta", f.o.delta, "support exponent delta");
  sub->add_option("--grid-n", f.o.grid_n, "grid points (envelope points for lambda sweeps)");
  sub->add_option("--preset", f.o.preset, "equation preset")->check(CLI::IsMember({"integrable", "general"}));
  sub->add_option("--c0", f.o.c0, "coefficient of u^2 u_x");
  sub->add_option("--c1", f.o.c1, "coefficient of u_x u_xx");
  sub->add_option("--c2", f.o.c2, "coefficient of u u_xxx");
  sub->add_option("--t-end", f.o.t_end, "final time");
  sub->add_flag("--quiet", f.quiet, "suppress progress messages");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical laboratory for fifth-order KdV-type equations"};
  app.set_version_flag("--version", KDV5_VERSION);
  app.require_subcommand(1);
  Flags flags;
  for (const auto& name : kdv5::cli::scenario_names()) add_flags(app.add_subcommand(name, "run the " + name + " scenario"), flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  const std::string scenario = app.get_subcommands().front()->get_name();
  auto log = [&](const std::string& msg) {
    if (!flags.quiet) std::clog << "[kdv5lab " << scenario << "] " << msg << std::endl;
  };

  nlohmann::json doc;
  try {
    nlohmann::json file;
    if (!flags.config.empty()) {
      std::ifstream in(flags.config);
      if (!in) throw kdv5::cli::SchemaError("--config", "cannot open " + flags.config);
      try {
        file = nlohmann::json::parse(in);
      } catch (const nlohmann::json::parse_error& e) {
        throw kdv5::cli::SchemaError("--config", std::string("not valid JSON: ") + e.what());
      }
    }
    doc = kdv5::cli::merge_config(scenario, file, flags.o);
    kdv5::cli::check_semantics(doc, scenario);
  } catch (const kdv5::cli::SchemaError& e) {
    std::cerr << "kdv5lab: config error: " << e.what() << std::endl;
    return 2;
  }

  try {
    log("writing to " + flags.out);
    const auto manifest = kdv5::cli::run_scenario(scenario, doc, flags.out, log);
    log(std::string("done: ") + (manifest.at("pass").get<bool>() ? "PASS" : "FAIL"));
  } catch (const std::exception& e) {
    std::cerr << "kdv5lab: " << scenario << " failed: " << e.what() << std::endl;
    return 1;
  }
  return 0;
}
