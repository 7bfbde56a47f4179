// Copyright 2026 The beamlab Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// beamlab command line: generate | train | eval | export | report.
//
// Exit codes: 0 success, 1 validation error, 2 runtime failure.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>

#include "CLI11.hpp"
#include "beamlab/checkpoint.hpp"
#include "beamlab/config.hpp"
#include "beamlab/dataset.hpp"
#include "beamlab/pipeline.hpp"

namespace {

using namespace beamlab;

constexpr int kExitValidation = 1;
constexpr int kExitRuntime = 2;

void log_line(std::string_view msg) { std::cerr << "[beamlab] " << msg << '\n'; }

int default_workers() {
  const unsigned n = std::thread::hardware_concurrency();
  return n == 0 ? 1 : static_cast<int>(n);
}

std::ofstream open_text(const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  return out;
}

/// Writes through a temporary file so a failure leaves no partial output.
template <typename Fn>
void write_atomically(const std::string& path, Fn&& fn) {
  const std::string tmp = path + ".partial";
  try {
    {
      auto out = open_text(tmp);
      fn(out);
      out.flush();
      if (!out) throw std::runtime_error("write failed: " + tmp);
    }
    std::filesystem::rename(tmp, path);
  } catch (...) {
    std::error_code ec;
    std::filesystem::remove(tmp, ec);
    throw;
  }
}

struct GenerateArgs {
  std::string config;
  std::string out;
  int workers = default_workers();
};

int run_generate(const GenerateArgs& a) {
  const RunConfig cfg = load_run_config(a.config);
  const auto t0 = std::chrono::steady_clock::now();
  const Dataset ds = generate_dataset(cfg, a.workers, log_line);
  write_dataset(ds, a.out);
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::fprintf(stderr, "[beamlab] wrote %zu records, |W'_P| = %d, to %s in %.1f s\n",
               ds.records.size(), ds.header.pairs.size(), a.out.c_str(), secs);
  return 0;
}

struct TrainArgs {
  std::string dataset;
  std::string model;
  std::string config;
  std::string out;
  std::string trace;
  std::optional<int> epochs;
};

int run_train(const TrainArgs& a) {
  const Dataset ds = read_dataset(a.dataset);
  RunConfig cfg = a.config.empty() ? ds.config : load_run_config(a.config);
  if (a.epochs) {
    cfg.train.epochs = *a.epochs;
    cfg.bct.epochs = *a.epochs;
  }
  cfg.validate();
  CheckpointMeta meta;
  meta.dataset_hash = ds.hash();
  meta.pair_set_hash = pair_set_hash(ds.header.pairs);
  meta.config_hash = config_hash(cfg);
  meta.seed = cfg.master_seed;

  const std::string stamp = "# config_hash=" + hex64(meta.config_hash) + "\n";
  if (a.model == "vdban") {
    std::string trace = stamp + "epoch,train_loss,train_accuracy,validation_atrr_top1\n";
    const TrainResult res = train_vdban_on(ds, cfg, [&](const EpochStats& s) {
      char line[160];
      std::snprintf(line, sizeof(line), "%d,%.17g,%.17g,%.17g\n", s.epoch, s.train_loss,
                    s.train_accuracy, s.validation_metric);
      trace += line;
      std::fprintf(stderr, "[beamlab] epoch %d loss %.4f acc %.4f val ATRR@1 %.4f\n", s.epoch,
                   s.train_loss, s.train_accuracy, s.validation_metric);
    });
    meta.best_epoch = res.best_epoch;
    save_vdban(a.out, res.model, meta);
    if (!a.trace.empty()) write_atomically(a.trace, [&](std::ostream& o) { o << trace; });
    std::fprintf(stderr, "[beamlab] best epoch %d, checkpoint %s\n", res.best_epoch,
                 a.out.c_str());
  } else {
    const BctTrainResult res = train_bct_on(ds, cfg);
    meta.best_epoch = static_cast<int>(res.epoch_loss.size());
    save_bct(a.out, res.model, meta);
    if (!a.trace.empty()) {
      write_atomically(a.trace, [&](std::ostream& o) {
        o << stamp << "epoch,train_loss\n";
        char line[64];
        for (std::size_t e = 0; e < res.epoch_loss.size(); ++e) {
          std::snprintf(line, sizeof(line), "%zu,%.17g\n", e + 1, res.epoch_loss[e]);
          o << line;
        }
      });
    }
    std::fprintf(stderr, "[beamlab] final loss %.4f, checkpoint %s\n", res.epoch_loss.back(),
                 a.out.c_str());
  }
  return 0;
}

void check_compatible(const Dataset& ds, const CheckpointMeta& meta, const std::string& path) {
  if (meta.pair_set_hash != pair_set_hash(ds.header.pairs)) {
    throw ValidationError(path + ": beam pair set (W'_P) differs from the dataset's; refusing");
  }
  if (meta.dataset_hash != ds.hash()) {
    log_line(path + ": trained on a different dataset with the same beam pair set");
  }
}

struct EvalArgs {
  std::string dataset;
  std::string vdban;
  std::string bct;
  std::string config;
  std::string out;
  bool oracle = false;
  bool no_knn = false;
  int workers = default_workers();
};

int run_eval(const EvalArgs& a) {
  const Dataset ds = read_dataset(a.dataset);
  const RunConfig cfg = a.config.empty() ? ds.config : load_run_config(a.config);
  cfg.validate();
  std::optional<VdbanModel> vdban;
  std::optional<BctClassifier> bct;
  EvalModels models;
  models.oracle = a.oracle;
  models.knn = !a.no_knn;
  if (!a.vdban.empty()) {
    CheckpointMeta meta;
    vdban = load_vdban(a.vdban, &meta);
    check_compatible(ds, meta, a.vdban);
    if (vdban->config().grid_cells != ds.header.grid.count()) {
      throw ValidationError(a.vdban + ": grid size differs from the dataset's");
    }
    models.vdban = &*vdban;
  }
  if (!a.bct.empty()) {
    CheckpointMeta meta;
    bct = load_bct(a.bct, &meta);
    check_compatible(ds, meta, a.bct);
    if (bct->input_dim() != ds.pool_size() * ds.header.sequence_length) {
      throw ValidationError(a.bct + ": input size differs from the dataset's");
    }
    models.bct = &*bct;
  }
  const auto rows = evaluate(ds, models, cfg.eval, cfg.master_seed, a.workers);
  write_atomically(a.out, [&](std::ostream& o) { write_report_csv(o, rows, config_hash(cfg)); });
  std::fprintf(stderr, "[beamlab] wrote %zu report rows to %s\n", rows.size(), a.out.c_str());
  return 0;
}

int run_export(const std::string& dataset, const std::string& dir) {
  export_dataset(read_dataset(dataset), dir);
  log_line("exported to " + dir);
  return 0;
}

int run_report(const std::string& input, const std::string& out) {
  std::ifstream in(input);
  if (!in) throw ValidationError("cannot open " + input);
  std::uint64_t hash = 0;
  const auto rows = read_report_csv(in, &hash);
  write_atomically(out, [&](std::ostream& o) { write_plot_series(o, rows, hash); });
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"beamlab: vision-aided mmWave beam alignment lab"};
  app.require_subcommand(1);

  GenerateArgs gen;
  auto* generate = app.add_subcommand("generate", "Simulate scenarios and write a dataset");
  generate->add_option("-c,--config", gen.config, "Run config (JSON)")->required();
  generate->add_option("-o,--out", gen.out, "Dataset file")->required();
  generate->add_option("-j,--workers", gen.workers, "Worker threads")->check(CLI::PositiveNumber);

  TrainArgs tr;
  auto* train = app.add_subcommand("train", "Train VDBAN or the BCT classifier");
  train->add_option("-d,--dataset", tr.dataset, "Dataset file")->required();
  train->add_option("-m,--model", tr.model, "Model kind")
      ->required()
      ->check(CLI::IsMember({"vdban", "bct"}));
  train->add_option("-c,--config", tr.config, "Run config overriding the dataset's");
  train->add_option("-o,--out", tr.out, "Checkpoint file")->required();
  train->add_option("-t,--trace", tr.trace, "Per-epoch trace CSV");
  train->add_option("--epochs", tr.epochs, "Override the epoch count")->check(CLI::PositiveNumber);

  EvalArgs ev;
  auto* eval = app.add_subcommand("eval", "Evaluate models and baselines on the test split");
  eval->add_option("-d,--dataset", ev.dataset, "Dataset file")->required();
  eval->add_option("--vdban", ev.vdban, "VDBAN checkpoint");
  eval->add_option("--bct", ev.bct, "BCT classifier checkpoint");
  eval->add_option("-c,--config", ev.config, "Run config overriding the dataset's");
  eval->add_flag("--oracle", ev.oracle, "Add the ground-truth ranking");
  eval->add_flag("--no-knn", ev.no_knn, "Skip the location k-NN baseline");
  eval->add_option("-o,--out", ev.out, "Report CSV")->required();
  eval->add_option("-j,--workers", ev.workers, "Worker threads")->check(CLI::PositiveNumber);

  std::string ex_dataset, ex_dir;
  auto* exp = app.add_subcommand("export", "Write features and labels as flat binary + CSV");
  exp->add_option("-d,--dataset", ex_dataset, "Dataset file")->required();
  exp->add_option("-o,--out-dir", ex_dir, "Output directory")->required();

  std::string rep_in, rep_out;
  auto* report = app.add_subcommand("report", "Turn a report CSV into x,y plot series");
  report->add_option("-i,--input", rep_in, "Report CSV from eval")->required();
  report->add_option("-o,--out", rep_out, "Series CSV")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }

  try {
    if (*generate) return run_generate(gen);
    if (*train) return run_train(tr);
    if (*eval) return run_eval(ev);
    if (*exp) return run_export(ex_dataset, ex_dir);
    if (*report) return run_report(rep_in, rep_out);
  } catch (const std::invalid_argument& e) {
    std::cerr << "beamlab: error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "beamlab: runtime failure: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitRuntime;
}
