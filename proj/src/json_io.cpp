#include "swarmplan/json_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace swarmplan {

namespace {

void dump_to(std::string& out, const Json& j, int indent, int level) {
  const auto newline = [&](int lvl) {
    if (indent < 0) return;
    out += '\n';
    out.append(static_cast<std::size_t>(indent * lvl), ' ');
  };
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += '{';
      bool first = true;
      for (const auto& [key, value] : j.items()) {
        if (!first) out += ',';
        first = false;
        newline(level + 1);
        out += Json(key).dump();
        out += indent < 0 ? ":" : ": ";
        dump_to(out, value, indent, level + 1);
      }
      newline(level);
      out += '}';
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      // Arrays of scalars stay on one line even in pretty mode.
      const bool flat = std::none_of(j.begin(), j.end(), [](const Json& e) { return e.is_structured(); });
      out += '[';
      bool first = true;
      for (const auto& e : j) {
        if (!first) out += indent >= 0 && flat ? ", " : ",";
        first = false;
        if (!flat) newline(level + 1);
        dump_to(out, e, indent, level + 1);
      }
      if (!flat) newline(level);
      out += ']';
      return;
    }
    case Json::value_t::number_float: {
      const double v = j.get<double>();
      if (!std::isfinite(v)) {
        out += "null";
        return;
      }
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.17g", v);
      out += buf;
      // Keep a float marker so the value reads back as a float.
      if (std::string_view(buf).find_first_of(".eEn") == std::string_view::npos) out += ".0";
      return;
    }
    default:
      out += j.dump();
  }
}

Json vec_json(const Eigen::VectorXd& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

Eigen::VectorXd json_vec(const Json& j) {
  if (!j.is_array()) throw std::invalid_argument("json: expected an array of numbers");
  Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (j[i].is_null()) {
      v[static_cast<Eigen::Index>(i)] = std::nan("");
    } else {
      v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
    }
  }
  return v;
}

// Rows of a matrix, each a JSON array.
Json rows_json(const Eigen::MatrixXd& m) {
  Json a = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) a.push_back(vec_json(m.row(r).transpose()));
  return a;
}

Eigen::MatrixXd json_rows(const Json& j, Eigen::Index cols_if_empty = 0) {
  if (!j.is_array()) throw std::invalid_argument("json: expected an array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  const Eigen::Index cols = rows > 0 ? static_cast<Eigen::Index>(j[0].size()) : cols_if_empty;
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const Eigen::VectorXd row = json_vec(j[static_cast<std::size_t>(r)]);
    if (row.size() != cols) throw std::invalid_argument("json: ragged matrix");
    m.row(r) = row.transpose();
  }
  return m;
}

// Time-major: one entry per column (knot), matching how trajectories are read.
Json columns_json(const Eigen::MatrixXd& m) { return rows_json(m.transpose()); }
Eigen::MatrixXd json_columns(const Json& j) { return json_rows(j).transpose(); }

Json standardizer_json(const Standardizer& s) {
  Json j;
  j["mean"] = vec_json(s.mean);
  j["scale"] = vec_json(s.scale);
  return j;
}

Standardizer json_standardizer(const Json& j) { return Standardizer{json_vec(j.at("mean")), json_vec(j.at("scale"))}; }

Json mean_std_json(const MeanStd& m) {
  Json j;
  j["mean"] = m.mean;
  j["std"] = m.std;
  return j;
}

}  // namespace

std::string dump_json(const Json& j, int indent) {
  std::string out;
  dump_to(out, j, indent, 0);
  return out;
}

Json scenario_to_json(const Scenario& sc) {
  Json j;
  j["kind"] = std::string(to_string(sc.kind));
  j["horizon"] = sc.horizon;
  j["dt"] = sc.dt;
  j["u_max"] = sc.u_max;
  j["agent_radius"] = sc.agent_radius;
  j["clearance"] = sc.clearance;
  j["mean_motion"] = sc.mean_motion;
  Json obs = Json::array();
  for (const auto& o : sc.obstacles) {
    Json oj;
    oj["center"] = vec_json(o.center);
    oj["radius"] = o.radius;
    oj["static"] = o.is_static;
    obs.push_back(std::move(oj));
  }
  j["obstacles"] = std::move(obs);
  Json starts = Json::array();
  Json goals = Json::array();
  for (const auto& s : sc.starts) starts.push_back(vec_json(s.stacked()));
  for (const auto& g : sc.goals) goals.push_back(vec_json(g.stacked()));
  j["starts"] = std::move(starts);
  j["goals"] = std::move(goals);
  return j;
}

Scenario scenario_from_json(const Json& j) {
  Scenario sc;
  sc.kind = dynamics_kind_from_string(j.at("kind").get<std::string>());
  sc.horizon = j.at("horizon").get<int>();
  sc.dt = j.at("dt").get<double>();
  sc.u_max = j.at("u_max").get<double>();
  sc.agent_radius = j.at("agent_radius").get<double>();
  sc.clearance = j.at("clearance").get<double>();
  sc.mean_motion = j.at("mean_motion").get<double>();
  for (const auto& oj : j.at("obstacles")) {
    sc.obstacles.push_back(Obstacle{json_vec(oj.at("center")), oj.at("radius").get<double>(),
                                    oj.value("static", true)});
  }
  for (const auto& s : j.at("starts")) sc.starts.push_back(AgentState::from_stacked(json_vec(s)));
  for (const auto& g : j.at("goals")) sc.goals.push_back(AgentState::from_stacked(json_vec(g)));
  sc.validate();
  return sc;
}

Json record_to_json(const DatasetRecord& r) {
  Json j;
  j["family"] = std::string(to_string(r.family));
  j["seed"] = r.seed;
  j["scenario"] = scenario_to_json(r.scenario);
  Json states = Json::array();
  Json controls = Json::array();
  for (const auto& X : r.plan.states) states.push_back(columns_json(X));
  for (const auto& U : r.plan.controls) controls.push_back(columns_json(U));
  j["states"] = std::move(states);
  j["controls"] = std::move(controls);
  j["fuel"] = r.plan.fuel;
  j["iterations"] = r.plan.iterations;
  j["input"] = vec_json(r.input);
  j["target"] = vec_json(r.target);
  return j;
}

DatasetRecord record_from_json(const Json& j) {
  DatasetRecord r;
  r.family = family_from_string(j.at("family").get<std::string>());
  r.seed = j.at("seed").get<std::uint64_t>();
  r.scenario = scenario_from_json(j.at("scenario"));
  for (const auto& s : j.at("states")) r.plan.states.push_back(json_columns(s));
  for (const auto& u : j.at("controls")) r.plan.controls.push_back(json_columns(u));
  r.plan.fuel = j.at("fuel").get<double>();
  r.plan.iterations = j.at("iterations").get<int>();
  r.plan.status = PlanStatus::Converged;
  r.input = json_vec(j.at("input"));
  r.target = json_vec(j.at("target"));
  if (r.input.size() != input_size(r.family)) throw std::invalid_argument("record: input length does not match family");
  if (static_cast<int>(r.plan.states.size()) != agents_in(r.family)) {
    throw std::invalid_argument("record: agent count does not match family");
  }
  return r;
}

void write_dataset(const std::filesystem::path& path, const std::vector<DatasetRecord>& records) {
  std::string text;
  for (const auto& r : records) {
    text += dump_json(record_to_json(r));
    text += '\n';
  }
  write_text_file(path, text);
}

std::vector<DatasetRecord> read_dataset(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open dataset " + path.string());
  std::vector<DatasetRecord> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      out.push_back(record_from_json(Json::parse(line)));
    } catch (const std::exception& e) {
      throw std::invalid_argument(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

Json split_to_json(const SplitIndices& s, std::uint64_t seed) {
  Json j;
  j["seed"] = seed;
  j["train"] = s.train;
  j["val"] = s.val;
  j["test"] = s.test;
  return j;
}

SplitIndices split_from_json(const Json& j) {
  SplitIndices s;
  s.train = j.at("train").get<std::vector<std::size_t>>();
  s.val = j.at("val").get<std::vector<std::size_t>>();
  s.test = j.at("test").get<std::vector<std::size_t>>();
  return s;
}

Json train_config_to_json(const TrainConfig& c) {
  Json j;
  j["learning_rate"] = c.learning_rate;
  j["batch_size"] = c.batch_size;
  j["max_epochs"] = c.max_epochs;
  j["patience"] = c.patience;
  j["seed"] = c.seed;
  j["knots"] = c.knots;
  return j;
}

TrainConfig train_config_from_json(const Json& j) {
  TrainConfig c;
  c.learning_rate = j.value("learning_rate", c.learning_rate);
  c.batch_size = j.value("batch_size", c.batch_size);
  c.max_epochs = j.value("max_epochs", c.max_epochs);
  c.patience = j.value("patience", c.patience);
  c.seed = j.value("seed", c.seed);
  c.knots = j.value("knots", c.knots);
  c.validate();
  return c;
}

Json model_to_json(const Mlp& net, const TrainConfig* config, const TrainHistory* history) {
  Json j;
  j["layer_sizes"] = net.layer_sizes;
  Json w = Json::array();
  Json b = Json::array();
  for (std::size_t l = 0; l < net.weights.size(); ++l) {
    w.push_back(rows_json(net.weights[l]));
    b.push_back(vec_json(net.biases[l]));
  }
  j["weights"] = std::move(w);
  j["biases"] = std::move(b);
  j["dropout_rate"] = net.dropout_rate;
  j["family"] = net.family;
  j["norm_stats"] = {{"input", standardizer_json(net.input_norm)}, {"output", standardizer_json(net.output_norm)}};
  j["train_config"] = config ? train_config_to_json(*config) : Json::object();
  Json hs = Json::object();
  if (history && !history->val_loss.empty()) {
    hs["epochs"] = history->val_loss.size();
    hs["best_epoch"] = history->best_epoch;
    hs["best_val_loss"] = history->best_val_loss();
    hs["final_train_loss"] = history->train_loss.back();
  }
  j["history_summary"] = std::move(hs);
  return j;
}

Mlp model_from_json(const Json& j) {
  Mlp net;
  net.layer_sizes = j.at("layer_sizes").get<std::vector<int>>();
  const auto& w = j.at("weights");
  const auto& b = j.at("biases");
  if (w.size() + 1 != net.layer_sizes.size() || b.size() != w.size()) {
    throw std::invalid_argument("model: layer count mismatch");
  }
  for (std::size_t l = 0; l < w.size(); ++l) {
    net.weights.push_back(json_rows(w[l], net.layer_sizes[l]));
    net.biases.push_back(json_vec(b[l]));
  }
  net.dropout_rate = j.at("dropout_rate").get<double>();
  net.family = j.value("family", std::string{});
  const auto& ns = j.at("norm_stats");
  net.input_norm = json_standardizer(ns.at("input"));
  net.output_norm = json_standardizer(ns.at("output"));
  net.validate();
  return net;
}

Json eval_report_to_json(const EvalReport& r) {
  Json j;
  j["records"] = r.rmse.size();
  j["rmse"] = mean_std_json(r.rmse_stats);
  j["truth_fuel"] = mean_std_json(r.truth_fuel_stats);
  j["network_fuel"] = mean_std_json(r.network_fuel_stats);
  j["fuel_gap"] = r.network_fuel_stats.mean - r.truth_fuel_stats.mean;
  j["t_statistic"] = r.fuel_test.t;
  j["p_value"] = r.fuel_test.p;
  j["dof"] = r.fuel_test.dof;
  j["separation"] = {{"min_obstacle_distance", r.separation.min_obstacle_distance},
                     {"min_agent_distance", r.separation.min_agent_distance},
                     {"obstacle_violations", r.separation.obstacle_violations},
                     {"agent_violations", r.separation.agent_violations}};
  if (r.timing) j["timing"] = bench_report_to_json(*r.timing);
  j["per_record_rmse"] = r.rmse;
  j["per_record_truth_fuel"] = r.truth_fuel;
  j["per_record_network_fuel"] = r.network_fuel;
  return j;
}

Json bench_report_to_json(const BenchReport& r) {
  Json j;
  j["instances"] = r.instances;
  j["planner_mean"] = r.planner_mean;
  j["planner_median"] = r.planner_median;
  j["network_single_mean"] = r.network_single_mean;
  j["network_single_median"] = r.network_single_median;
  j["network_batch_mean"] = r.network_batch_mean;
  j["speedup"] = r.speedup;
  j["speedup_single"] = r.speedup_single;
  j["planner_failures"] = r.planner_failures;
  return j;
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return Json::parse(ss.str());
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace swarmplan
