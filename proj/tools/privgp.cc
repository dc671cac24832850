//
// Copyright 2026 The PrivGP Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

// privgp: privacy-aware Gaussian-process regression from the command line.
//
//   privgp example1 --out out/
//   privgp pipeline --config owner.json --seed 7
//   privgp predict --model released.json --grid 0:3:601
//
// Failures print {"error": {...}} on stderr and exit nonzero.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "absl/status/status.h"
#include "commands.h"
#include "privgp/status.h"
#include "spdlog/sinks/stdout_color_sinks.h"
#include "spdlog/spdlog.h"

namespace {

using privgp::cli::CommonOptions;

void ConfigureLogging() {
  auto logger = spdlog::stderr_color_mt("privgp");
  spdlog::set_default_logger(logger);
  spdlog::set_level(spdlog::level::warn);
  if (const char* level = std::getenv("PRIVGP_LOG")) {
    spdlog::set_level(spdlog::level::from_str(level));
  }
}

void AddCommon(CLI::App* app, CommonOptions* options,
               std::optional<uint64_t>* seed, std::optional<double>* tol,
               std::string* format) {
  app->add_option("--config", options->config_path, "JSON configuration")
      ->check(CLI::ExistingFile);
  app->add_option("--seed", *seed, "64-bit seed for the noise draw");
  app->add_option("--out", options->out_dir, "output directory");
  app->add_option("--tol", *tol, "SDP duality-gap tolerance")
      ->check(CLI::PositiveNumber);
  app->add_option("--format", *format, "table format")
      ->check(CLI::IsMember({"csv", "json"}));
}

}  // namespace

int main(int argc, char** argv) {
  ConfigureLogging();
  CLI::App app{"Privacy-aware Gaussian-process regression"};
  app.require_subcommand(1);

  CommonOptions options;
  std::optional<uint64_t> seed;
  std::optional<double> tol;
  std::string format = "csv";
  std::string data_path, noise_path, model_path, points_path, grid;
  std::optional<double> theta;

  auto* example1 = app.add_subcommand("example1", "nine inputs, one sensitive input");
  auto* example2 = app.add_subcommand("example2", "weak versus strong tolerances");
  auto* example3 = app.add_subcommand("example3", "validity region of a Gaussian pair");
  auto* satellite = app.add_subcommand("satellite", "Kepler trajectory study");
  auto* fit = app.add_subcommand("fit", "fit constant mean and variance");
  auto* solve = app.add_subcommand("solve-noise", "compute the noise covariance");
  auto* obfuscate = app.add_subcommand("obfuscate", "draw noise and form W = Y + Z");
  auto* predict = app.add_subcommand("predict", "evaluate a released model");
  auto* pipeline = app.add_subcommand("pipeline", "train, obfuscate, release");
  for (CLI::App* sub : {example1, example2, example3, satellite, fit, solve,
                        obfuscate, predict, pipeline}) {
    AddCommon(sub, &options, &seed, &tol, &format);
  }
  fit->add_option("--data", data_path, "dataset CSV")->required();
  fit->add_option("--theta", theta, "correlation inverse length scale");
  obfuscate->add_option("--data", data_path, "dataset CSV")->required();
  obfuscate->add_option("--noise", noise_path, "noise covariance JSON")
      ->required();
  predict->add_option("--model", model_path, "released model JSON")
      ->required();
  auto* points = predict->add_option("--points", points_path,
                                     "CSV of query inputs (x_1,...,x_d)");
  auto* grid_option =
      predict->add_option("--grid", grid, "1-d query grid LO:HI:N");
  points->excludes(grid_option);

  CLI11_PARSE(app, argc, argv);
  options.seed = seed;
  options.tol = tol;
  options.format = format == "json" ? privgp::cli::OutputFormat::kJson
                                    : privgp::cli::OutputFormat::kCsv;

  absl::Status status;
  std::error_code ec;
  std::filesystem::create_directories(options.out_dir, ec);
  if (ec) {
    status = privgp::MakeError(privgp::ErrorKind::kIo,
                               "cannot create output directory " +
                                   options.out_dir);
  } else if (example1->parsed()) {
    status = privgp::cli::Example1(options);
  } else if (example2->parsed()) {
    status = privgp::cli::Example2(options);
  } else if (example3->parsed()) {
    status = privgp::cli::Example3(options);
  } else if (satellite->parsed()) {
    status = privgp::cli::Satellite(options);
  } else if (fit->parsed()) {
    status = privgp::cli::Fit(options, data_path, theta);
  } else if (solve->parsed()) {
    status = privgp::cli::SolveNoise(options);
  } else if (obfuscate->parsed()) {
    status = privgp::cli::ObfuscateData(options, data_path, noise_path);
  } else if (predict->parsed()) {
    if (points_path.empty() && grid.empty()) {
      status = privgp::MakeError(privgp::ErrorKind::kInvalidInput,
                                 "predict needs --points or --grid");
    } else {
      status = privgp::cli::PredictReleased(options, model_path, points_path,
                                            grid);
    }
  } else if (pipeline->parsed()) {
    status = privgp::cli::Pipeline(options);
  }
  if (!status.ok()) {
    std::cerr << privgp::cli::ErrorToJson(status).dump() << "\n";
    return 1;
  }
  return 0;
}
