// Copyright 2026 The QCPM Authors
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

#include "qcpm/cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "qcpm/data_io.hpp"
#include "qcpm/diagnostics.hpp"
#include "qcpm/errors.hpp"
#include "qcpm/model.hpp"
#include "qcpm/sampler.hpp"

namespace qcpm {
namespace {

/// Raised for inconsistent flag combinations detected after parsing.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string r2_text(const std::optional<double>& r2) {
  return r2 ? format_double(*r2) : std::string("degenerate");
}

// ---------------------------------------------------------------------------
// Shared option groups
// ---------------------------------------------------------------------------

struct ArchFlags {
  int n_qubits = 4;
  int depth = 3;
  std::string entangler = "closed";

  void add(CLI::App& app) {
    app.add_option("--n", n_qubits, "Qubits per register")
        ->check(CLI::Range(1, kMaxQubitsPerRegister))
        ->capture_default_str();
    app.add_option("--depth", depth, "Ansatz layers")->check(CLI::Range(0, 64))->capture_default_str();
    app.add_option("--entangler", entangler, "CNOT pattern")
        ->check(CLI::IsMember({"closed", "open"}))
        ->capture_default_str();
  }

  Architecture architecture(bool use_correlation) const {
    Architecture arch;
    arch.n_qubits = n_qubits;
    arch.depth = depth;
    arch.use_correlation = use_correlation;
    arch.entangler = parse_entangler(entangler);
    return arch;
  }
};

struct OptimizerFlags {
  int epochs = 10000;
  std::vector<double> learning_rates = default_learning_rates();
  std::string alpha_beta = "adam";

  void add(CLI::App& app) {
    app.add_option("--epochs", epochs, "ADAM epochs per learning rate")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app.add_option("--lr", learning_rates, "Learning-rate sweep")->delimiter(',')->check(
        CLI::PositiveNumber);
    app.add_option("--alpha-beta", alpha_beta, "How alpha and beta are fitted")
        ->check(CLI::IsMember({"adam", "refit"}))
        ->capture_default_str();
  }

  void apply(TrainConfig& config) const {
    config.epochs = epochs;
    config.learning_rates = learning_rates;
    config.alpha_beta = parse_alpha_beta_mode(alpha_beta);
  }
};

struct BoxFlags {
  std::vector<double> z_range;
  std::vector<double> q_range;
  std::string z_axis = "linear";
  std::string q_axis = "log10";
  CLI::Option* z_range_opt = nullptr;
  CLI::Option* q_range_opt = nullptr;
  CLI::Option* z_axis_opt = nullptr;
  CLI::Option* q_axis_opt = nullptr;

  void add(CLI::App& app) {
    z_range_opt = app.add_option("--z-range", z_range, "z interval lo,hi")->expected(2)->delimiter(',');
    q_range_opt = app.add_option("--q-range", q_range, "Q interval lo,hi")->expected(2)->delimiter(',');
    z_axis_opt = app.add_option("--z-axis", z_axis, "z axis map")
                     ->check(CLI::IsMember({"linear", "log10"}))
                     ->capture_default_str();
    q_axis_opt = app.add_option("--q-axis", q_axis, "Q axis map")
                     ->check(CLI::IsMember({"linear", "log10"}))
                     ->capture_default_str();
  }

  bool given() const {
    return z_range_opt->count() || q_range_opt->count() || z_axis_opt->count() || q_axis_opt->count();
  }

  DomainBox box() const {
    DomainBox box;
    if (!z_range.empty()) std::tie(box.x_lo, box.x_hi) = std::pair{z_range[0], z_range[1]};
    if (!q_range.empty()) std::tie(box.y_lo, box.y_hi) = std::pair{q_range[0], q_range[1]};
    box.x_axis = parse_axis_transform(z_axis);
    box.y_axis = parse_axis_transform(q_axis);
    try {
      box.validate();
    } catch (const std::exception& e) {
      throw UsageError(e.what());
    }
    return box;
  }
};

// ---------------------------------------------------------------------------
// train
// ---------------------------------------------------------------------------

struct TrainCommand {
  std::string data;
  std::string synth;
  std::uint64_t seed = 0;
  std::uint64_t synth_seed = 0;
  double correlation = 0.7;
  bool no_correlation = false;
  std::string init = "random";
  int diagnostics = 0;
  std::string record = "train_record.csv";
  std::string params_out = "params.txt";
  std::string label;
  ArchFlags arch;
  OptimizerFlags opt;
  BoxFlags box;
  CLI::Option* data_opt = nullptr;
  CLI::Option* synth_opt = nullptr;
  CLI::Option* synth_seed_opt = nullptr;

  void add(CLI::App& app) {
    data_opt = app.add_option("--data", data, "Target grid file")->check(CLI::ExistingFile);
    synth_opt = app.add_option("--synth", synth, "Synthetic target kind")
                    ->check(CLI::IsMember({"teacher_student", "gaussian_2d", "separable_beta"}));
    data_opt->excludes(synth_opt);
    app.add_option("--seed", seed, "Initialization seed")->capture_default_str();
    synth_seed_opt = app.add_option("--synth-seed", synth_seed, "Synthetic target seed (default: --seed)");
    app.add_option("--correlation", correlation, "gaussian_2d correlation coefficient")
        ->check(CLI::Range(-0.999, 0.999))
        ->capture_default_str();
    app.add_flag("--no-correlation", no_correlation, "Drop the correlation circuit");
    app.add_option("--init", init, "Initial angles")
        ->check(CLI::IsMember({"random", "product"}))
        ->capture_default_str();
    app.add_option("--diagnostics", diagnostics, "Nonpurity cadence in epochs (0: off)")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    app.add_option("--record", record, "Training record output")->capture_default_str();
    app.add_option("--params-out", params_out, "Trained parameters output")->capture_default_str();
    app.add_option("--label", label, "Label stored with the outputs");
    arch.add(app);
    opt.add(app);
    box.add(app);
  }

  int run(std::ostream& out) const {
    if (data.empty() && synth.empty()) throw UsageError("train needs --data FILE or --synth KIND");
    TrainConfig config;
    config.arch = arch.architecture(!no_correlation);
    opt.apply(config);
    config.seed = seed;
    config.diagnostics_cadence = diagnostics;
    config.init = parse_init_mode(init);

    TargetGrid grid;
    if (!data.empty()) {
      grid = read_grid(data, config.arch.n_qubits,
                       box.given() ? std::optional<DomainBox>(box.box()) : std::nullopt);
    } else {
      SynthOptions options;
      options.arch = config.arch;
      options.arch.use_correlation = true;
      options.box = box.box();
      options.correlation = correlation;
      grid = synth_target(parse_synth_kind(synth), options, synth_seed_opt->count() ? synth_seed : seed);
    }
    if (!label.empty()) grid.label = label;

    const TrainRecord rec = train(config, grid);
    write_results(rec, record);
    write_model({rec.label, config.arch, rec.final_params, grid.box, rec.target_scale}, params_out);

    out << "target: " << grid.label << " (" << grid.points.size() << " points)\n";
    for (const auto& b : rec.branches) {
      out << "  lr " << format_double(b.learning_rate) << ": "
          << (b.ok ? "R2 " + r2_text(b.final_r2) : "failed (" + b.message + ")") << '\n';
    }
    out << "final R2: " << r2_text(rec.final_r2) << '\n';
    out << "best learning rate: " << format_double(rec.best_learning_rate) << '\n';
    out << "record: " << record << "\nparams: " << params_out << '\n';
    return kExitOk;
  }
};

// ---------------------------------------------------------------------------
// sample
// ---------------------------------------------------------------------------

struct SampleCommand {
  std::string params;
  int extension = 0;
  std::uint64_t shots = 1000000;
  bool scale_shots = false;
  std::uint64_t seed = 0;
  bool exact_only = false;
  std::string out_path = "histogram.csv";

  void add(CLI::App& app) {
    app.add_option("--params", params, "Trained parameters file")->required()->check(CLI::ExistingFile);
    app.add_option("--s", extension, "Extension qubits per register")
        ->check(CLI::Range(0, kMaxSamplingQubits))
        ->capture_default_str();
    app.add_option("--shots", shots, "Number of shots")->check(CLI::PositiveNumber)->capture_default_str();
    app.add_flag("--scale-shots", scale_shots, "Multiply the shot count by 4^S");
    app.add_option("--seed", seed, "Sampling seed")->capture_default_str();
    app.add_flag("--exact-only", exact_only, "Write exact probabilities instead of drawing shots");
    app.add_option("--out", out_path, "Histogram output")->capture_default_str();
  }

  int run(std::ostream& out) const {
    const TrainedModel model = read_model(params);
    if (model.arch.n_qubits + extension > kMaxSamplingQubits) {
      throw UsageError("--s " + std::to_string(extension) + " exceeds the " +
                       std::to_string(kMaxSamplingQubits) + "-qubit register limit for N=" +
                       std::to_string(model.arch.n_qubits));
    }
    const ProbabilityTable dist = exact_distribution(model.params, model.arch, extension);
    if (exact_only) {
      write_results(dist, model.box, out_path);
      out << "exact distribution: " << dist.side << "x" << dist.side << " nodes -> " << out_path << '\n';
      return kExitOk;
    }
    std::uint64_t total = shots;
    if (scale_shots) total <<= 2 * extension;
    const SampleHistogram hist = draw_samples(dist, total, seed);
    write_results(hist, model.box, out_path);
    out << "shots: " << total << " on " << hist.side << "x" << hist.side << " nodes -> " << out_path << '\n';
    out << "total variation to exact: " << format_double(total_variation(hist, dist)) << '\n';
    return kExitOk;
  }
};

// ---------------------------------------------------------------------------
// diagnose
// ---------------------------------------------------------------------------

struct DiagnoseCommand {
  std::vector<std::string> params;
  std::string record;
  bool nonpurity = false;
  std::string sweep;
  double v_fixed = 0.0;
  int resolution = 512;
  bool no_ansatze = false;
  std::string entropy;
  std::vector<double> entropy_input;
  std::string out_dir = ".";

  void add(CLI::App& app) {
    app.add_option("--params", params, "Trained parameters file(s)")->check(CLI::ExistingFile);
    app.add_option("--record", record, "Training record")->check(CLI::ExistingFile);
    app.add_flag("--nonpurity-trace", nonpurity, "Nonpurity per epoch from --record");
    app.add_option("--z-sweep", sweep, "Quantity swept along z at fixed v")
        ->check(CLI::IsMember({"purity", "mutual_information"}));
    app.add_option("--v", v_fixed, "Fixed Q coordinate in [-1, 1]")
        ->check(CLI::Range(-1.0, 1.0))
        ->capture_default_str();
    app.add_option("--resolution", resolution, "Dense sweep points")
        ->check(CLI::Range(2, 1 << 20))
        ->capture_default_str();
    app.add_flag("--no-ansatze", no_ansatze, "Sweep the feature and correlation stage only");
    app.add_option("--entropy", entropy, "Half-register entropy of each --params model")
        ->check(CLI::IsMember({"Z", "Q"}));
    app.add_option("--entropy-input", entropy_input, "Use the training-stage state at u,v")
        ->expected(2)
        ->delimiter(',');
    app.add_option("--out-dir", out_dir, "Directory for series files")->capture_default_str();
  }

  std::string path_for(std::string_view stem) const {
    return (std::filesystem::path(out_dir) / (std::string(stem) + ".csv")).string();
  }

  int run(std::ostream& out) const {
    if (!nonpurity && sweep.empty() && entropy.empty()) {
      throw UsageError("diagnose needs --nonpurity-trace, --z-sweep or --entropy");
    }
    if (nonpurity && record.empty()) throw UsageError("--nonpurity-trace needs --record");
    if ((!sweep.empty() || !entropy.empty()) && params.empty()) {
      throw UsageError("--z-sweep and --entropy need --params");
    }
    std::filesystem::create_directories(out_dir);

    std::vector<TrainedModel> models;
    for (const auto& p : params) models.push_back(read_model(p));

    auto emit = [&](const DiagnosticSeries& s, const std::string& path) {
      write_results(s, path);
      out << to_string(s.kind) << ": " << s.size() << " rows -> " << path << '\n';
    };

    if (nonpurity) emit(nonpurity_trace(read_record(record)), path_for("nonpurity_vs_epoch"));
    if (!sweep.empty()) {
      const SweepQuantity q = parse_sweep_quantity(sweep);
      for (std::size_t i = 0; i < models.size(); ++i) {
        const auto s = z_sweep(models[i].params, models[i].arch, q, v_fixed, resolution, !no_ansatze);
        std::string stem(to_string(s.kind));
        if (models.size() > 1) stem += "_" + std::to_string(i);
        emit(s, path_for(stem));
      }
    }
    if (!entropy.empty()) {
      std::vector<LabeledModel> labeled;
      for (std::size_t i = 0; i < models.size(); ++i) {
        const std::string label = models[i].label.empty() ? params[i] : models[i].label;
        labeled.push_back({label, models[i].params, models[i].arch});
      }
      std::optional<ChebPoint> input;
      if (!entropy_input.empty()) input = ChebPoint{entropy_input[0], entropy_input[1]};
      emit(entropy_table(labeled, parse_register(entropy), input), path_for("entropy_vs_ff"));
    }
    return kExitOk;
  }
};

// ---------------------------------------------------------------------------
// compare-cc
// ---------------------------------------------------------------------------

struct CompareCommand {
  std::vector<std::string> grids;
  std::string synth;
  std::vector<std::uint64_t> seeds;
  int n_seeds = 5;
  double correlation = 0.7;
  std::uint64_t synth_seed = 7;
  std::string out_path;
  ArchFlags arch;
  OptimizerFlags opt;
  BoxFlags box;
  CLI::Option* seeds_opt = nullptr;

  void add(CLI::App& app) {
    app.add_option("grids", grids, "Target grid files")->check(CLI::ExistingFile);
    app.add_option("--synth", synth, "Synthetic target instead of grid files")
        ->check(CLI::IsMember({"teacher_student", "gaussian_2d", "separable_beta"}));
    seeds_opt = app.add_option("--seeds", seeds, "Explicit seed list")->delimiter(',');
    app.add_option("--n-seeds", n_seeds, "Seeds 0..n-1 when --seeds is absent")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app.add_option("--correlation", correlation, "gaussian_2d correlation coefficient")
        ->check(CLI::Range(-0.999, 0.999))
        ->capture_default_str();
    app.add_option("--synth-seed", synth_seed, "Synthetic target seed")->capture_default_str();
    app.add_option("--out", out_path, "Comparison table output");
    arch.add(app);
    opt.add(app);
    box.add(app);
  }

  int run(std::ostream& out) const {
    if (grids.empty() && synth.empty()) throw UsageError("compare-cc needs grid files or --synth KIND");
    std::vector<TargetGrid> targets;
    const Architecture base = arch.architecture(true);
    for (const auto& g : grids) {
      targets.push_back(read_grid(g, base.n_qubits,
                                  box.given() ? std::optional<DomainBox>(box.box()) : std::nullopt));
    }
    if (!synth.empty()) {
      SynthOptions options;
      options.arch = base;
      options.box = box.box();
      options.correlation = correlation;
      targets.push_back(synth_target(parse_synth_kind(synth), options, synth_seed));
    }
    std::vector<std::uint64_t> seed_list = seeds;
    if (!seeds_opt->count()) {
      for (int s = 0; s < n_seeds; ++s) seed_list.push_back(static_cast<std::uint64_t>(s));
    }

    std::ostringstream table;
    table << "label,seed,r2_with_cc,r2_without_cc\n";
    double sum_with = 0.0;
    double sum_without = 0.0;
    int counted = 0;
    for (const auto& target : targets) {
      for (std::uint64_t seed : seed_list) {
        std::optional<double> r2[2];
        for (int variant = 0; variant < 2; ++variant) {
          TrainConfig config;
          config.arch = arch.architecture(variant == 0);
          opt.apply(config);
          config.seed = seed;
          r2[variant] = train(config, target).final_r2;
        }
        std::string label = target.label;
        std::replace(label.begin(), label.end(), ',', ';');
        table << label << ',' << seed << ',' << r2_text(r2[0]) << ',' << r2_text(r2[1]) << '\n';
        if (r2[0] && r2[1]) {
          sum_with += *r2[0];
          sum_without += *r2[1];
          ++counted;
        }
      }
    }
    out << table.str();
    if (counted) {
      out << "mean R2 with CC: " << format_double(sum_with / counted) << '\n';
      out << "mean R2 without CC: " << format_double(sum_without / counted) << '\n';
    }
    if (!out_path.empty()) {
      std::ofstream file(out_path);
      if (!file) throw IoError("cannot write '" + out_path + "'");
      file << table.str();
      if (!file.flush()) throw IoError("write failed for '" + out_path + "'");
    }
    return kExitOk;
  }
};

// ---------------------------------------------------------------------------
// Config files
// ---------------------------------------------------------------------------

/// Pulls `--config FILE` out of `args` and returns the file's settings as
/// flags for every key the command line does not already set.
std::vector<std::string> config_arguments(std::vector<std::string>& args, CLI::App& sub) {
  std::string path;
  for (auto it = args.begin(); it != args.end(); ++it) {
    if (*it == "--config") {
      if (std::next(it) == args.end()) throw UsageError("--config needs a file");
      path = *std::next(it);
      args.erase(it, it + 2);
      break;
    }
    if (it->starts_with("--config=")) {
      path = it->substr(9);
      args.erase(it);
      break;
    }
  }
  if (path.empty()) return {};
  std::ifstream in(path);
  if (!in) throw UsageError("config file not found: " + path);

  auto user_sets = [&](const std::string& flag) {
    return std::any_of(args.begin(), args.end(), [&](const std::string& a) {
      return a == flag || a.starts_with(flag + "=");
    });
  };
  std::vector<std::string> injected;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto sep = line.find_first_of("=:");
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      if (b == std::string::npos) return std::string();
      return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
    };
    if (trim(line).empty()) continue;
    if (sep == std::string::npos) {
      throw UsageError(path + ":" + std::to_string(line_no) + ": expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, sep));
    const std::string value = trim(line.substr(sep + 1));
    const std::string flag = "--" + key;
    const CLI::Option* opt = sub.get_option_no_throw(flag);
    if (opt == nullptr) {
      throw UsageError(path + ":" + std::to_string(line_no) + ": unknown key '" + key + "' for " +
                       sub.get_name());
    }
    if (user_sets(flag)) continue;
    if (opt->get_items_expected_max() == 0) {
      if (value == "true" || value == "1" || value == "yes") {
        injected.push_back(flag);
      } else if (value != "false" && value != "0" && value != "no") {
        throw UsageError(path + ":" + std::to_string(line_no) + ": '" + key + "' is a switch");
      }
      continue;
    }
    injected.push_back(flag);
    std::istringstream words(value);
    std::string word;
    while (words >> word) injected.push_back(word);
  }
  return injected;
}

}  // namespace

int run_cli(std::span<const std::string> argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Bivariate quantum Chebyshev probabilistic models"};
  app.name("qcpm");
  app.require_subcommand(1);
  app.allow_extras(false);

  TrainCommand train_cmd;
  SampleCommand sample_cmd;
  DiagnoseCommand diagnose_cmd;
  CompareCommand compare_cmd;
  CLI::App* train_app = app.add_subcommand("train", "Fit a model to a target grid");
  CLI::App* sample_app = app.add_subcommand("sample", "Sample a trained model");
  CLI::App* diagnose_app = app.add_subcommand("diagnose", "Entanglement diagnostics");
  CLI::App* compare_app = app.add_subcommand("compare-cc", "R2 with and without the correlation circuit");
  train_cmd.add(*train_app);
  sample_cmd.add(*sample_app);
  diagnose_cmd.add(*diagnose_app);
  compare_cmd.add(*compare_app);
  for (CLI::App* sub : {train_app, sample_app, diagnose_app, compare_app}) {
    sub->add_option("--config", "key = value file; flags override it");
  }

  try {
    std::vector<std::string> args(argv.begin(), argv.end());
    if (!args.empty()) {
      if (CLI::App* sub = app.get_subcommand_no_throw(args.front())) {
        std::vector<std::string> rest(args.begin() + 1, args.end());
        std::vector<std::string> injected = config_arguments(rest, *sub);
        args.resize(1);
        args.insert(args.end(), injected.begin(), injected.end());
        args.insert(args.end(), rest.begin(), rest.end());
      }
    }
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "qcpm: " << e.what() << '\n';
    return kExitUsage;
  } catch (const UsageError& e) {
    err << "qcpm: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (train_app->parsed()) return train_cmd.run(out);
    if (sample_app->parsed()) return sample_cmd.run(out);
    if (diagnose_app->parsed()) return diagnose_cmd.run(out);
    if (compare_app->parsed()) return compare_cmd.run(out);
  } catch (const UsageError& e) {
    err << "qcpm: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "qcpm: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitUsage;
}

}  // namespace qcpm
