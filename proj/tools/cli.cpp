#include "cli.hpp"

#include <chrono>
#include <cstdio>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "swarmplan/dataset.hpp"
#include "swarmplan/eval.hpp"
#include "swarmplan/json_io.hpp"
#include "swarmplan/kernels.hpp"
#include "swarmplan/train.hpp"

namespace swarmplan::cli {

namespace {

const std::vector<std::string> kCommands{"generate", "train", "predict", "evaluate", "bench", "sweep"};

// Reads a JSON object of option values. Keys may sit at the top level or
// under a section named after the subcommand; sections for other
// subcommands are ignored.
class JsonConfig : public CLI::Config {
 public:
  explicit JsonConfig(std::string section) : section_(std::move(section)) {}

  std::string to_config(const CLI::App* app, bool default_also, bool, std::string) const override {
    Json j = Json::object();
    for (const CLI::Option* opt : app->get_options()) {
      if (opt->get_lnames().empty() || opt->get_configurable() == false) continue;
      const std::string name = opt->get_lnames().front();
      if (opt->count() > 0) {
        const auto& res = opt->results();
        j[name] = res.size() == 1 ? Json(res.front()) : Json(res);
      } else if (default_also && !opt->get_default_str().empty()) {
        j[name] = opt->get_default_str();
      }
    }
    return dump_json(j, 2) + "\n";
  }

  std::vector<CLI::ConfigItem> from_config(std::istream& in) const override {
    Json j;
    try {
      j = Json::parse(in);
    } catch (const Json::exception& e) {
      throw CLI::ConversionError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw CLI::ConversionError("config must be a JSON object");
    std::vector<CLI::ConfigItem> items;
    for (const auto& [key, value] : j.items()) {
      const bool is_command = std::find(kCommands.begin(), kCommands.end(), key) != kCommands.end();
      if (is_command) {
        if (key != section_ || !value.is_object()) continue;
        for (const auto& [k2, v2] : value.items()) add(items, k2, v2);
      } else {
        add(items, key, value);
      }
    }
    return items;
  }

 private:
  void add(std::vector<CLI::ConfigItem>& items, std::string key, const Json& value) const {
    if (value.is_null()) return;
    std::replace(key.begin(), key.end(), '_', '-');
    CLI::ConfigItem item;
    if (!section_.empty()) item.parents = {section_};
    item.name = key;
    if (value.is_array()) {
      for (const auto& e : value) item.inputs.push_back(scalar(e));
    } else {
      item.inputs.push_back(scalar(value));
    }
    items.push_back(std::move(item));
  }

  static std::string scalar(const Json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_structured()) throw CLI::ConversionError("config values must be scalars or arrays of scalars");
    return dump_json(v);
  }

  std::string section_;
};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct PlannerFlags {
  int max_iterations = ScpParams{}.max_iterations;
  double convergence_tol = ScpParams{}.convergence_tol;
  double verify_tol = ScpParams{}.verify_tol;
  double lp_tolerance = LpOptions{}.tolerance;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--max-iterations", max_iterations, "SCP iteration limit")->capture_default_str()
        ->check(CLI::PositiveNumber);
    cmd->add_option("--convergence-tol", convergence_tol, "SCP convergence tolerance on knot positions")
        ->capture_default_str()->check(CLI::PositiveNumber);
    cmd->add_option("--verify-tol", verify_tol, "feasibility audit tolerance")->capture_default_str()
        ->check(CLI::PositiveNumber);
    cmd->add_option("--lp-tolerance", lp_tolerance, "LP relative optimality tolerance")->capture_default_str()
        ->check(CLI::PositiveNumber);
  }

  ScpParams params() const {
    ScpParams p;
    p.max_iterations = max_iterations;
    p.convergence_tol = convergence_tol;
    p.verify_tol = verify_tol;
    p.lp.tolerance = lp_tolerance;
    return p;
  }
};

struct TrainFlags {
  int layers = 4;
  int units = 100;
  double dropout = 0.5;
  TrainConfig config;
  int limit = 0;
  std::string split_path;
  std::uint64_t split_seed = 0;

  void add_to(CLI::App* cmd, bool architecture) {
    if (architecture) {
      cmd->add_option("--layers", layers, "hidden layer count")->capture_default_str()->check(CLI::NonNegativeNumber);
      cmd->add_option("--units", units, "units per hidden layer")->capture_default_str()->check(CLI::PositiveNumber);
    }
    cmd->add_option("--dropout", dropout, "dropout rate on hidden activations")->capture_default_str()
        ->check(CLI::Range(0.0, 0.999));
    cmd->add_option("--learning-rate", config.learning_rate, "gradient descent step size")->capture_default_str()
        ->check(CLI::PositiveNumber);
    cmd->add_option("--batch-size", config.batch_size, "mini-batch size")->capture_default_str()
        ->check(CLI::PositiveNumber);
    cmd->add_option("--max-epochs", config.max_epochs, "epoch limit")->capture_default_str()
        ->check(CLI::PositiveNumber);
    cmd->add_option("--patience", config.patience, "epochs without validation improvement before stopping")
        ->capture_default_str()->check(CLI::PositiveNumber);
    cmd->add_option("--seed", config.seed, "initialization, shuffling and dropout seed")->capture_default_str()
        ->envname("SWARMPLAN_SEED");
    cmd->add_option("--jobs", config.threads, "threads for batch gradients (results do not depend on it)")
        ->capture_default_str()->check(CLI::PositiveNumber);
    cmd->add_option("--limit", limit, "use only the first N records (0 = all)")->capture_default_str()
        ->check(CLI::NonNegativeNumber);
    cmd->add_option("--split", split_path, "split manifest JSON; default is a seeded 70/15/15 split")
        ->check(CLI::ExistingFile);
    cmd->add_option("--split-seed", split_seed, "seed of the default split")->capture_default_str();
  }
};

FamilyOptions options_for_target(Family f, Eigen::Index target_length) {
  FamilyOptions opts;
  if (target_length == target_size(f, opts)) return opts;
  opts.include_acceleration = true;
  if (target_length == target_size(f, opts)) return opts;
  throw std::invalid_argument("target length " + std::to_string(target_length) + " does not fit family " +
                              std::string(to_string(f)));
}

std::vector<DatasetRecord> load_records(const std::string& path, int limit) {
  auto records = read_dataset(path);
  if (records.empty()) throw std::invalid_argument("dataset " + path + " is empty");
  if (limit > 0 && static_cast<std::size_t>(limit) < records.size()) records.resize(static_cast<std::size_t>(limit));
  for (const auto& r : records) {
    if (r.family != records.front().family || r.target.size() != records.front().target.size()) {
      throw std::invalid_argument("dataset " + path + " mixes families or target layouts");
    }
  }
  return records;
}

SplitIndices resolve_split(std::size_t n, const std::string& manifest, std::uint64_t seed) {
  if (manifest.empty()) return split(n, SplitSpec{}, seed);
  SplitIndices s = split_from_json(read_json_file(manifest));
  for (const auto* part : {&s.train, &s.val, &s.test}) {
    for (std::size_t i : *part) {
      if (i >= n) throw std::invalid_argument("split manifest index " + std::to_string(i) + " exceeds dataset size");
    }
  }
  return s;
}

void gather(const std::vector<DatasetRecord>& records, const std::vector<std::size_t>& idx, Eigen::MatrixXd& x,
            Eigen::MatrixXd& y) {
  if (idx.empty()) throw std::invalid_argument("split part is empty; use more records");
  x.resize(records.front().input.size(), static_cast<Eigen::Index>(idx.size()));
  y.resize(records.front().target.size(), static_cast<Eigen::Index>(idx.size()));
  for (std::size_t k = 0; k < idx.size(); ++k) {
    x.col(static_cast<Eigen::Index>(k)) = records[idx[k]].input;
    y.col(static_cast<Eigen::Index>(k)) = records[idx[k]].target;
  }
}

int cmd_generate(const std::string& family, int count, std::uint64_t seed, const std::string& out,
                 const std::string& summary_path, int jobs, const PlannerFlags& planner, const FamilyOptions& opts) {
  const Family f = family_from_string(family);
  GenerateSummary summary;
  const auto t0 = std::chrono::steady_clock::now();
  const auto records = generate(f, count, seed, planner.params(), opts, jobs, &summary);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  write_dataset(out, records);
  Json s;
  s["family"] = family;
  s["count"] = count;
  s["seed"] = seed;
  s["rejections"] = summary.rejections;
  s["fuel_mean"] = summary.fuel_mean;
  s["fuel_std"] = summary.fuel_std;
  if (!summary_path.empty()) write_text_file(summary_path, dump_json(s, 2) + "\n");
  std::cout << "wrote " << records.size() << " records to " << out << " (rejections " << summary.rejections
            << ", fuel " << num(summary.fuel_mean) << " +/- " << num(summary.fuel_std) << ")\n";
  std::cerr << "generation took " << secs << " s\n";
  return kOk;
}

int cmd_train(const std::string& data, const std::string& model_out, std::string history_out,
              const std::string& split_out, const TrainFlags& tf) {
  const auto records = load_records(data, tf.limit);
  const SplitIndices parts = resolve_split(records.size(), tf.split_path, tf.split_seed);
  Eigen::MatrixXd tx, ty, vx, vy;
  gather(records, parts.train, tx, ty);
  gather(records, parts.val, vx, vy);

  Mlp net = init_mlp(layer_stack(static_cast<int>(tx.rows()), tf.layers, tf.units, static_cast<int>(ty.rows())),
                     tf.config.seed, tf.dropout);
  net.family = std::string(to_string(records.front().family));
  const TrainOutcome o = train(std::move(net), tx, ty, vx, vy, tf.config);

  write_text_file(model_out, dump_json(model_to_json(o.net, &tf.config, &o.history)) + "\n");
  if (history_out.empty()) history_out = model_out + ".history.csv";
  std::string csv = "epoch,train_loss,val_loss\n";
  for (std::size_t e = 0; e < o.history.val_loss.size(); ++e) {
    csv += std::to_string(e) + "," + num(o.history.train_loss[e]) + "," + num(o.history.val_loss[e]) + "\n";
  }
  write_text_file(history_out, csv);
  if (!split_out.empty()) write_text_file(split_out, dump_json(split_to_json(parts, tf.split_seed)) + "\n");

  double secs = 0.0;
  for (double s : o.history.epoch_seconds) secs += s;
  std::cout << "trained " << o.history.val_loss.size() << " epochs on " << parts.train.size()
            << " records; best epoch " << o.history.best_epoch << ", val loss " << num(o.history.best_val_loss())
            << "\n";
  std::cerr << "training took " << secs << " s\n";
  return kOk;
}

int cmd_sweep(const std::string& data, const std::vector<int>& layer_grid, const std::vector<int>& unit_grid,
              const std::string& out, const TrainFlags& tf) {
  const auto records = load_records(data, tf.limit);
  const SplitIndices parts = resolve_split(records.size(), tf.split_path, tf.split_seed);
  Eigen::MatrixXd tx, ty, vx, vy;
  gather(records, parts.train, tx, ty);
  gather(records, parts.val, vx, vy);
  const SweepResult res = sweep(layer_grid, unit_grid, tx, ty, vx, vy, tf.config, tf.dropout);
  std::string csv = "hidden_layers,units,val_loss\n";
  for (std::size_t i = 0; i < layer_grid.size(); ++i) {
    for (std::size_t j = 0; j < unit_grid.size(); ++j) {
      csv += std::to_string(layer_grid[i]) + "," + std::to_string(unit_grid[j]) + "," +
             num(res.val_loss(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j))) + "\n";
    }
  }
  write_text_file(out, csv);
  std::cout << "wrote " << layer_grid.size() * unit_grid.size() << " cells to " << out << "\n";
  return kOk;
}

Family model_family(const Mlp& net) {
  if (net.family.empty()) throw std::invalid_argument("model does not record its family");
  return family_from_string(net.family);
}

int cmd_predict(const std::string& model_path, const std::string& data, int index, std::string family,
                std::uint64_t seed, const std::string& out) {
  const Mlp net = model_from_json(read_json_file(model_path));
  Scenario sc;
  if (!data.empty()) {
    const auto records = load_records(data, 0);
    if (index < 0 || static_cast<std::size_t>(index) >= records.size()) {
      throw std::invalid_argument("record index " + std::to_string(index) + " out of range");
    }
    sc = records[static_cast<std::size_t>(index)].scenario;
  } else {
    const Family f = family.empty() ? model_family(net) : family_from_string(family);
    sc = sample_scenario(f, seed);
  }
  const Family f = family_of(sc);
  const FamilyOptions opts = options_for_target(f, net.output_size());
  const auto knots = predict(net, sc, opts);
  const auto controls = recover_controls(sc, knots);
  const auto times = target_knots(sc.horizon);
  const int d = sc.dim();
  const char* axes[] = {"x", "y", "z"};
  std::string csv = "t,agent";
  for (const char* prefix : {"", "v", "u"}) {
    for (int a = 0; a < d; ++a) csv += std::string(",") + prefix + axes[a];
  }
  csv += "\n";
  for (std::size_t i = 0; i < knots.size(); ++i) {
    for (Eigen::Index k = 0; k < knots[i].cols(); ++k) {
      csv += num(sc.dt * times[static_cast<std::size_t>(k)]) + "," + std::to_string(i);
      for (Eigen::Index r = 0; r < knots[i].rows(); ++r) csv += "," + num(knots[i](r, k));
      for (Eigen::Index r = 0; r < controls[i].rows(); ++r) csv += "," + num(controls[i](r, k));
      csv += "\n";
    }
  }
  write_text_file(out, csv);
  std::cout << "wrote " << knots.size() * kTargetKnots << " knot rows to " << out << "\n";
  return kOk;
}

int cmd_evaluate(const std::string& model_path, const std::string& data, bool all, const std::string& split_path,
                 std::uint64_t split_seed, const std::string& out, const std::string& fuel_csv) {
  const Mlp net = model_from_json(read_json_file(model_path));
  const auto records = load_records(data, 0);
  if (model_family(net) != records.front().family) {
    throw std::invalid_argument("model family " + net.family + " does not match dataset family " +
                                std::string(to_string(records.front().family)));
  }
  std::vector<DatasetRecord> test;
  if (all) {
    test = records;
  } else {
    for (std::size_t i : resolve_split(records.size(), split_path, split_seed).test) test.push_back(records[i]);
  }
  const FamilyOptions opts = options_for_target(records.front().family, records.front().target.size());
  const EvalReport rep = evaluate(net, test, opts);
  write_text_file(out, dump_json(eval_report_to_json(rep), 2) + "\n");
  if (!fuel_csv.empty()) {
    std::string csv = "record,rmse,truth_fuel,network_fuel\n";
    for (std::size_t k = 0; k < rep.rmse.size(); ++k) {
      csv += std::to_string(k) + "," + num(rep.rmse[k]) + "," + num(rep.truth_fuel[k]) + "," +
             num(rep.network_fuel[k]) + "\n";
    }
    write_text_file(fuel_csv, csv);
  }
  std::cout << "rmse " << num(rep.rmse_stats.mean) << " +/- " << num(rep.rmse_stats.std) << ", fuel truth "
            << num(rep.truth_fuel_stats.mean) << " network " << num(rep.network_fuel_stats.mean) << ", p "
            << num(rep.fuel_test.p) << "\n";
  return kOk;
}

int cmd_bench(const std::string& model_path, std::string family, int count, std::uint64_t seed,
              const BenchOptions& bopts, const PlannerFlags& planner, const std::string& out) {
  const Mlp net = model_from_json(read_json_file(model_path));
  const Family f = family.empty() ? model_family(net) : family_from_string(family);
  if (net.input_size() != input_size(f)) throw std::invalid_argument("model input size does not match family");
  std::vector<Scenario> scenarios;
  for (int k = 0; k < count; ++k) scenarios.push_back(sample_scenario(f, seed + static_cast<std::uint64_t>(k)));
  const BenchReport rep = benchmark(planner.params(), net, scenarios, bopts);
  Json j = bench_report_to_json(rep);
  j["family"] = std::string(to_string(f));
  write_text_file(out, dump_json(j, 2) + "\n");
  std::cout << "planner " << num(rep.planner_mean) << " s, network " << num(rep.network_batch_mean)
            << " s per instance, speedup " << num(rep.speedup) << "\n";
  return kOk;
}

}  // namespace

int run(int argc, const char* const* argv) {
  CLI::App app{"Minimum-fuel swarm trajectory planning and neural imitation"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_help_all_flag("--help-all", "Show help for every subcommand");

  std::string section;
  for (int i = 1; i < argc; ++i) {
    if (std::find(kCommands.begin(), kCommands.end(), argv[i]) != kCommands.end()) {
      section = argv[i];
      break;
    }
  }
  app.config_formatter(std::make_shared<JsonConfig>(section));
  app.set_config("--config", "", "JSON file of option values (flat or per-subcommand); flags take precedence");

  const std::map<std::string, SlotAssignment> slot_names{{"indexed", SlotAssignment::Indexed},
                                                         {"nearest", SlotAssignment::NearestGreedy}};
  const std::map<std::string, SemiAxis> axis_names{{"along-track", SemiAxis::AlongTrack},
                                                   {"radial", SemiAxis::Radial}};
  const auto family_check = CLI::IsMember({"di2d-1", "di2d-10", "cwh3d-1", "cwh3d-10"});

  // generate
  std::string g_family, g_out, g_summary;
  int g_count = 0;
  int g_jobs = 1;
  std::uint64_t g_seed = 0;
  FamilyOptions g_opts;
  PlannerFlags g_planner;
  auto* gen = app.add_subcommand("generate", "Sample scenarios and solve them into a JSONL dataset");
  gen->add_option("--family", g_family, "di2d-1, di2d-10, cwh3d-1 or cwh3d-10")->required()->check(family_check);
  gen->add_option("--count", g_count, "number of records")->required()->check(CLI::Range(1, 100000000));
  gen->add_option("--seed", g_seed, "base seed; record k uses seed + k")->capture_default_str()
      ->envname("SWARMPLAN_SEED");
  gen->add_option("--out", g_out, "dataset path (JSON lines)")->required();
  gen->add_option("--summary", g_summary, "also write the generation summary as JSON");
  gen->add_option("--jobs", g_jobs, "parallel planner instances (output does not depend on it)")
      ->capture_default_str()->check(CLI::PositiveNumber);
  gen->add_option("--slots", g_opts.slots, "circle-slot assignment for di2d-10: indexed or nearest")
      ->transform(CLI::CheckedTransformer(slot_names, CLI::ignore_case));
  gen->add_option("--semi-axis", g_opts.semi_axis, "PRO axis sampled in [25,75]: along-track or radial")
      ->transform(CLI::CheckedTransformer(axis_names, CLI::ignore_case));
  gen->add_flag("--include-acceleration", g_opts.include_acceleration, "append knot accelerations to targets");
  gen->add_option("--mean-motion", g_opts.mean_motion, "chief mean motion for cwh families [rad/s]")
      ->capture_default_str()->check(CLI::PositiveNumber);
  g_planner.add_to(gen);

  // train
  std::string t_data, t_model, t_history, t_split_out;
  TrainFlags t_flags;
  auto* trn = app.add_subcommand("train", "Train a network on a dataset");
  trn->add_option("--data", t_data, "dataset path")->required()->check(CLI::ExistingFile);
  trn->add_option("--model", t_model, "output model JSON")->required();
  trn->add_option("--history", t_history, "per-epoch loss CSV (default: <model>.history.csv)");
  trn->add_option("--split-out", t_split_out, "write the split manifest used");
  t_flags.add_to(trn, true);

  // sweep
  std::string s_data, s_out;
  std::vector<int> s_layers{3, 4, 6};
  std::vector<int> s_units{10, 100, 200};
  TrainFlags s_flags;
  auto* swp = app.add_subcommand("sweep", "Validation loss over a grid of hidden layer counts and widths");
  swp->add_option("--data", s_data, "dataset path")->required()->check(CLI::ExistingFile);
  swp->add_option("--layer-grid", s_layers, "hidden layer counts, comma separated")->delimiter(',')
      ->capture_default_str()->check(CLI::NonNegativeNumber);
  swp->add_option("--unit-grid", s_units, "units per layer, comma separated")->delimiter(',')
      ->capture_default_str()->check(CLI::PositiveNumber);
  swp->add_option("--out", s_out, "grid CSV")->required();
  s_flags.add_to(swp, false);

  // predict
  std::string p_model, p_data, p_family, p_out;
  int p_index = 0;
  std::uint64_t p_seed = 0;
  auto* prd = app.add_subcommand("predict", "Predict knot trajectories for one scenario");
  prd->add_option("--model", p_model, "model JSON")->required()->check(CLI::ExistingFile);
  auto* p_data_opt = prd->add_option("--data", p_data, "take the scenario from this dataset")
                         ->check(CLI::ExistingFile);
  prd->add_option("--index", p_index, "record index within --data")->capture_default_str()->needs(p_data_opt);
  prd->add_option("--family", p_family, "sample a scenario of this family (default: the model's)")
      ->check(family_check)->excludes(p_data_opt);
  prd->add_option("--seed", p_seed, "scenario seed when sampling")->capture_default_str()
      ->envname("SWARMPLAN_SEED");
  prd->add_option("--out", p_out, "trajectory CSV")->required();

  // evaluate
  std::string e_model, e_data, e_split, e_out, e_fuel;
  std::uint64_t e_split_seed = 0;
  bool e_all = false;
  auto* evl = app.add_subcommand("evaluate", "RMSE, fuel comparison and separation audit on the test split");
  evl->add_option("--model", e_model, "model JSON")->required()->check(CLI::ExistingFile);
  evl->add_option("--data", e_data, "dataset path")->required()->check(CLI::ExistingFile);
  auto* e_split_opt = evl->add_option("--split", e_split, "split manifest JSON")->check(CLI::ExistingFile);
  evl->add_option("--split-seed", e_split_seed, "seed of the default split")->capture_default_str();
  evl->add_flag("--all", e_all, "evaluate every record instead of the test split")->excludes(e_split_opt);
  evl->add_option("--out", e_out, "report JSON")->required();
  evl->add_option("--fuel-csv", e_fuel, "per-record rmse and fuel CSV");

  // bench
  std::string b_model, b_family, b_out;
  int b_count = 50;
  std::uint64_t b_seed = 0;
  BenchOptions b_opts;
  PlannerFlags b_planner;
  auto* bch = app.add_subcommand("bench", "Time the planner against network inference");
  bch->add_option("--model", b_model, "model JSON")->required()->check(CLI::ExistingFile);
  bch->add_option("--family", b_family, "scenario family (default: the model's)")->check(family_check);
  bch->add_option("--count", b_count, "number of scenarios (>= 10)")->capture_default_str()
      ->check(CLI::Range(10, 1000000));
  bch->add_option("--seed", b_seed, "base scenario seed")->capture_default_str()->envname("SWARMPLAN_SEED");
  bch->add_option("--warmup", b_opts.warmup, "untimed warm-up runs")->capture_default_str()
      ->check(CLI::NonNegativeNumber);
  bch->add_option("--repeats", b_opts.batch_repeats, "timed repetitions of the batched inference")
      ->capture_default_str()->check(CLI::PositiveNumber);
  bch->add_option("--out", b_out, "timing JSON")->required();
  b_planner.add_to(bch);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kUsage;
  }

  try {
    if (gen->parsed()) return cmd_generate(g_family, g_count, g_seed, g_out, g_summary, g_jobs, g_planner, g_opts);
    if (trn->parsed()) return cmd_train(t_data, t_model, t_history, t_split_out, t_flags);
    if (swp->parsed()) return cmd_sweep(s_data, s_layers, s_units, s_out, s_flags);
    if (prd->parsed()) return cmd_predict(p_model, p_data, p_index, p_family, p_seed, p_out);
    if (evl->parsed()) return cmd_evaluate(e_model, e_data, e_all, e_split, e_split_seed, e_out, e_fuel);
    if (bch->parsed()) return cmd_bench(b_model, b_family, b_count, b_seed, b_opts, b_planner, b_out);
  } catch (const GenerationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kSolverFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kMismatch;
  }
  return kUsage;
}

}  // namespace swarmplan::cli
