// Copyright 2026 The qtraj Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "qtraj/commands.hpp"
#include "qtraj/config.hpp"

namespace {

struct Options {
  std::string config_path;
  std::optional<std::string> out_dir;
  std::optional<std::uint64_t> seed;
  int workers = 0;
};

void add_common(CLI::App* sub, Options& opts) {
  sub->add_option("--config", opts.config_path, "Run configuration (JSON)")->required();
  sub->add_option("--out", opts.out_dir, "Output directory (overrides out_path)");
  sub->add_option("--seed", opts.seed, "Master seed (overrides master_seed)");
  sub->add_option("--workers", opts.workers, "Worker threads; never changes results")->check(CLI::NonNegativeNumber);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("cannot read config file " + path);
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qtraj: Lindblad master equation and quantum trajectory simulator"};
  app.require_subcommand(1);
  Options opts;

  const std::pair<const char*, qtraj::Command> commands[] = {
      {"evolve-master", qtraj::Command::evolve_master},
      {"trajectory", qtraj::Command::trajectory},
      {"ensemble", qtraj::Command::ensemble},
      {"invariance-check", qtraj::Command::invariance_check},
      {"poincare", qtraj::Command::poincare},
  };
  const char* help[] = {
      "Deterministic RK4 master-equation evolution -> master.csv",
      "Individual trajectories -> trajectory_<i>.csv, jumps_<i>.csv",
      "Ensemble-mean projector -> ensemble_mean.csv",
      "Pathwise re-representation comparison -> invariance.csv; exit 2 if the bound fails",
      "Stroboscopic section of one trajectory -> poincare.csv",
  };
  std::optional<qtraj::Command> chosen;
  for (std::size_t i = 0; i < std::size(commands); ++i) {
    CLI::App* sub = app.add_subcommand(commands[i].first, help[i]);
    add_common(sub, opts);
    const qtraj::Command cmd = commands[i].second;
    sub->callback([&chosen, cmd] { chosen = cmd; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      return app.exit(e);  // --help
    }
    std::cerr << "error: " << e.what() << "\n";
    return qtraj::kExitError;
  }

  try {
    qtraj::RunConfig cfg = qtraj::parse_config(read_file(opts.config_path));
    if (opts.out_dir) {
      cfg.out_path = *opts.out_dir;
    }
    if (opts.seed) {
      cfg.master_seed = *opts.seed;
    }
    return qtraj::run_command(*chosen, cfg, opts.workers, std::cout);
  } catch (const std::exception& e) {
    std::string msg = e.what();
    for (char& c : msg) {
      if (c == '\n') c = ' ';
    }
    std::cerr << "error: " << msg << "\n";
    return qtraj::kExitError;
  }
}
