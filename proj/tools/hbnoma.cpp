// SPDX-License-Identifier: Apache-2.0
//
// hbnoma: hybrid-beamforming NOMA downlink simulation library
// Copyright (C) 2026 hbnoma contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

// hbnoma command-line front end.
//
//   hbnoma run --config <path> [--seed N] [--trials N] [--out <path>] [--format csv|json]
//   hbnoma fig2 [--snr-db 0,5] [--trials N] [--seed N] [--step DEG] [--out <path>] [--format csv|json]
//   hbnoma fig3 [--step DEG] [--seed N] [--out <path>] [--format csv|json]
//   hbnoma validate --config <path>
//
// Exit codes: 0 success, 2 configuration error, 3 numerical abort, 4 I/O error.

#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "hbnoma/errors.hpp"
#include "hbnoma/harness/config.hpp"
#include "hbnoma/harness/diagnostics.hpp"
#include "hbnoma/harness/emit.hpp"
#include "hbnoma/harness/monte_carlo.hpp"
#include "hbnoma/harness/presets.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitIo = 4;

using namespace hbnoma::harness;

std::string render(const RunManifest& m, OutputFormat format) {
  if (format == OutputFormat::json) return manifest_json(m);
  return m.config.sweep ? sweep_csv(m.sweep_rows) : run_csv(m);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hybrid-beamforming NOMA downlink simulator"};
  app.set_version_flag("--version", std::string(kVersionTag));
  app.require_subcommand(1);

  std::string config_path;
  std::string out_path;
  std::string format = "csv";
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> trials;

  auto* run = app.add_subcommand("run", "Monte Carlo run of a scenario file");
  run->add_option("--config", config_path, "scenario file")->required();
  run->add_option("--seed", seed, "override the scenario seed");
  run->add_option("--trials", trials, "override the trial count");
  run->add_option("--out", out_path, "output file (default stdout)");
  run->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

  Fig2Options fig2_opt;
  auto* fig2 = app.add_subcommand("fig2", "rate and bound vs correlation sweep (two clusters)");
  fig2->add_option("--snr-db", fig2_opt.snr_db, "SNR points in dB")->delimiter(',');
  fig2->add_option("--trials", fig2_opt.trials, "trials per sweep point");
  fig2->add_option("--seed", fig2_opt.seed, "run seed");
  fig2->add_option("--step", fig2_opt.step_deg, "AoD grid step in degrees");
  fig2->add_option("--out", out_path, "output file (default stdout)");
  fig2->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

  Fig3Options fig3_opt;
  auto* fig3 = app.add_subcommand("fig3", "correlation vs AoD sweep (three clusters)");
  fig3->add_option("--step", fig3_opt.step_deg, "AoD grid step in degrees");
  fig3->add_option("--seed", fig3_opt.seed, "run seed");
  fig3->add_option("--bs-antennas", fig3_opt.bs_antennas, "BS array size");
  fig3->add_option("--out", out_path, "output file (default stdout)");
  fig3->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

  auto* validate_cmd = app.add_subcommand("validate", "check precoder constraints for one realization");
  validate_cmd->add_option("--config", config_path, "scenario file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    const OutputFormat fmt = parse_format(format);
    if (*run) {
      ScenarioConfig cfg = load_config(config_path);
      if (seed) cfg.seed = *seed;
      if (trials) cfg.trials = *trials;
      write_output(out_path, render(run_scenario(cfg), fmt));
    } else if (*fig2) {
      const RunManifest m = sweep_fig2(fig2_config(fig2_opt));
      write_output(out_path, fmt == OutputFormat::json ? manifest_json(m) : sweep_csv(m.sweep_rows));
    } else if (*fig3) {
      const auto rows = sweep_fig3(fig3_config(fig3_opt));
      write_output(out_path, fmt == OutputFormat::json ? fig3_json(rows) : fig3_csv(rows));
    } else if (*validate_cmd) {
      const ValidationReport rep = validate_scenario(load_config(config_path));
      std::cout << rep.describe();
      return rep.ok() ? 0 : kExitNumerical;
    }
  } catch (const hbnoma::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const hbnoma::IoError& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return kExitIo;
  } catch (const hbnoma::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const hbnoma::DomainError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return kExitNumerical;
  }
  return 0;
}
