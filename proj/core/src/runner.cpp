#include "czest/runner.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace czest {

namespace {

double volume_root(const IntervalVector& hull) {
  if (hull.size() == 0) return 0.0;
  double log_sum = 0.0;
  for (Eigen::Index i = 0; i < hull.size(); ++i) {
    const double w = hull[i].width();
    if (w <= 0.0) return 0.0;
    log_sum += std::log(w);
  }
  return std::exp(log_sum / static_cast<double>(hull.size()));
}

std::string format_double(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

StepRecord make_record(const EstimatorState& state, bool contains) {
  StepRecord rec;
  rec.k = state.k;
  rec.hull_volume_root = volume_root(state.hull);
  rec.n_g = state.counts.gens;
  rec.n_c = state.counts.cons;
  rec.contains_truth = contains;
  rec.step_millis = state.step_millis;
  return rec;
}

}  // namespace

RunConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  RunConfig config;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const size_t comment = line.find('#');
    if (comment != std::string::npos) line.erase(comment);
    const auto not_space = [](unsigned char c) { return !std::isspace(c); };
    line.erase(line.begin(),
               std::find_if(line.begin(), line.end(), not_space));
    line.erase(std::find_if(line.rbegin(), line.rend(), not_space).base(),
               line.end());
    if (line.empty()) continue;
    const size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(line_no) +
                        ": expected key=value");
    std::string key = line.substr(0, eq);
    std::string value = line.substr(eq + 1);
    key.erase(std::find_if(key.rbegin(), key.rend(), not_space).base(),
              key.end());
    value.erase(value.begin(),
                std::find_if(value.begin(), value.end(), not_space));
    apply_config_entry(config, key, value);
  }
  return config;
}

void apply_config_entry(RunConfig& config, const std::string& key,
                        const std::string& value) {
  try {
    if (key == "system") {
      config.system = value;
    } else if (key == "steps") {
      config.steps = std::stoi(value);
    } else if (key == "seed") {
      config.seed = std::stoull(value);
    } else if (key == "gen_limit") {
      config.gen_limit = std::stol(value);
    } else if (key == "con_limit") {
      config.con_limit = std::stol(value);
    } else if (key == "out") {
      config.out_path = value;
    } else if (key == "noise_mode") {
      if (value == "uniform")
        config.noise_mode = NoiseMode::kUniform;
      else if (value == "extreme")
        config.noise_mode = NoiseMode::kExtreme;
      else
        throw ConfigError("noise_mode must be uniform or extreme, got: " +
                          value);
    } else if (key == "ts") {
      config.ts = std::stod(value);
      if (config.ts <= 0.0) throw ConfigError("ts must be positive");
    } else {
      throw ConfigError("unknown config key: " + key);
    }
  } catch (const std::invalid_argument&) {
    throw ConfigError("bad value for " + key + ": " + value);
  } catch (const std::out_of_range&) {
    throw ConfigError("value out of range for " + key + ": " + value);
  }
}

std::string to_csv(const std::vector<StepRecord>& records) {
  std::ostringstream out;
  out << "k,hull_volume_root,n_g,n_c,contains_truth,step_millis\n";
  for (const StepRecord& r : records) {
    out << r.k << ',' << format_double(r.hull_volume_root) << ',' << r.n_g
        << ',' << r.n_c << ',' << (r.contains_truth ? 1 : 0) << ','
        << format_double(r.step_millis) << '\n';
  }
  return out.str();
}

RunResult run(const RunConfig& config) {
  BenchmarkSystem sys = make_system(config.system, config.ts);
  const int steps = config.steps > 0 ? config.steps : sys.default_steps;
  if (steps < 1) throw ConfigError("steps must be >= 1");
  StepLimits limits;
  limits.max_gens = config.gen_limit >= 0 ? config.gen_limit : sys.default_gen_limit;
  limits.max_cons = config.con_limit >= 0 ? config.con_limit : sys.default_con_limit;
  if (limits.max_gens < sys.model.dims.n_x)
    throw ConfigError("gen_limit below the system dimension");
  if (limits.max_cons < 0) throw ConfigError("con_limit must be >= 0");

  const Trajectory truth =
      simulate_truth(sys, config.seed, steps, config.noise_mode);

  RunResult result;
  result.records.reserve(static_cast<size_t>(steps) + 1);

  EstimatorState state = make_initial_state(sys.model, sys.x0_set, sys.v_set,
                                            truth.measurements[0]);
  bool contains = contains_point(state.xhat, truth.states[0]);
  result.records.push_back(make_record(state, contains));
  if (!contains) ++result.violations;

  for (int k = 1; k <= steps; ++k) {
    const Eigen::VectorXd u = sys.input_fn(k - 1);
    state = estimate_step(state, sys.model, sys.w_set, sys.w_bounds, sys.v_set,
                          sys.v_bounds,
                          std::span<const double>(u.data(), u.size()),
                          truth.measurements[static_cast<size_t>(k)], limits);
    contains = contains_point(state.xhat, truth.states[static_cast<size_t>(k)]);
    result.records.push_back(make_record(state, contains));
    if (!contains) ++result.violations;
  }

  if (!config.out_path.empty()) {
    std::ofstream out(config.out_path);
    if (!out) throw ConfigError("cannot open output file: " + config.out_path);
    out << to_csv(result.records);
  }
  return result;
}

}  // namespace czest
