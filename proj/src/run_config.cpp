#include "htisim/run_config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

namespace htisim {

namespace {

void check_keys(const YAML::Node& node, const std::string& section, const std::set<std::string>& allowed) {
  if (!node.IsMap()) throw ConfigError("section '" + section + "' must be a mapping");
  for (const auto& kv : node) {
    const auto key = kv.first.as<std::string>();
    if (!allowed.contains(key)) throw ConfigError("unknown key '" + section + "." + key + "'");
  }
}

template <typename T>
void read(const YAML::Node& node, const char* key, const std::string& section, T& out) {
  const auto child = node[key];
  if (!child) return;
  try {
    out = child.as<T>();
  } catch (const YAML::Exception& e) {
    throw ConfigError("bad value for '" + section + "." + key + "': " + e.what());
  }
}

template <typename T>
void read_optional(const YAML::Node& node, const char* key, const std::string& section, std::optional<T>& out) {
  const auto child = node[key];
  if (!child) return;
  if (child.IsNull()) {
    out.reset();
    return;
  }
  T value{};
  read(node, key, section, value);
  out = value;
}

template <typename Parsed, typename Fn>
void read_parsed(const YAML::Node& node, const char* key, const std::string& section, Parsed& out, Fn parse) {
  const auto child = node[key];
  if (!child) return;
  try {
    out = parse(child.as<std::string>());
  } catch (const std::exception& e) {
    throw ConfigError("bad value for '" + section + "." + key + "': " + e.what());
  }
}

ProcessKind parse_process_kind(const std::string& s) {
  if (s == "reflecting_walk") return ProcessKind::reflecting_walk;
  if (s == "mean_reverting_walk") return ProcessKind::mean_reverting_walk;
  throw ConfigError("unknown price.kind '" + s + "'");
}

BaselineKind parse_baseline_kind(const std::string& s) {
  if (s == "bernoulli_trader") return BaselineKind::bernoulli_trader;
  if (s == "periodic_alternator") return BaselineKind::periodic_alternator;
  throw ConfigError("unknown strategy.kind '" + s + "'");
}

template <typename T>
nlohmann::json optional_json(const std::optional<T>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

}  // namespace

std::string_view to_string(ProcessKind kind) noexcept {
  return kind == ProcessKind::reflecting_walk ? "reflecting_walk" : "mean_reverting_walk";
}

std::string_view to_string(BaselineKind kind) noexcept {
  return kind == BaselineKind::bernoulli_trader ? "bernoulli_trader" : "periodic_alternator";
}

RunConfig default_config() {
  RunConfig c;
  c.instrument = Instrument{"DEMO", Decimal{1, 0}, Decimal{1, 2}, 9000, 11000};
  c.price = PriceProcessConfig{ProcessKind::reflecting_walk, 9000, 11000, 10000, Rational(1, 2), Rational(0), 1};
  c.strategy = BaselineConfig{BaselineKind::bernoulli_trader, Rational(1, 50), 10, 1, 0};
  c.dominance = DominanceParams{};
  c.run = RunSection{};
  return c;
}

void RunConfig::validate() const {
  try {
    instrument.validate();
    price.validate();
    strategy.validate();
    dominance.validate(price.grid_min, price.grid_max);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (run.half_spread < 0) throw ConfigError("run.half_spread must be >= 0");
  if (run.commission_per_unit < 0) throw ConfigError("run.commission_per_unit must be >= 0");
  if (price.grid_min - run.half_spread < instrument.grid_min || price.grid_max + run.half_spread > instrument.grid_max) {
    throw ConfigError("price grid widened by run.half_spread must stay inside the instrument grid");
  }
  if (run.total_ticks.has_value() == run.target_phases.has_value()) {
    throw ConfigError("set exactly one of run.total_ticks and run.target_phases");
  }
  if (run.total_ticks && *run.total_ticks < 1) throw ConfigError("run.total_ticks must be >= 1");
  if (run.target_phases && *run.target_phases < 1) throw ConfigError("run.target_phases must be >= 1");
  if (run.replications < 1) throw ConfigError("run.replications must be >= 1");
}

RunConfig parse_config(std::string_view yaml_text) {
  YAML::Node root;
  try {
    root = YAML::Load(std::string(yaml_text));
  } catch (const YAML::Exception& e) {
    throw ConfigError(std::string("config is not valid YAML: ") + e.what());
  }
  RunConfig c = default_config();
  if (!root || root.IsNull()) return c;
  check_keys(root, "<root>", {"instrument", "price", "strategy", "dominance", "run"});

  bool price_grid_set = false;
  if (const auto n = root["instrument"]) {
    const std::string sec = "instrument";
    check_keys(n, sec, {"symbol", "multiplier", "tick_size", "grid_min", "grid_max"});
    read(n, "symbol", sec, c.instrument.symbol);
    read_parsed(n, "multiplier", sec, c.instrument.multiplier, Decimal::parse);
    read_parsed(n, "tick_size", sec, c.instrument.tick_size, Decimal::parse);
    read(n, "grid_min", sec, c.instrument.grid_min);
    read(n, "grid_max", sec, c.instrument.grid_max);
  }
  if (const auto n = root["price"]) {
    const std::string sec = "price";
    check_keys(n, sec, {"kind", "grid_min", "grid_max", "start_price", "stay_probability", "reversion_strength"});
    read_parsed(n, "kind", sec, c.price.kind, parse_process_kind);
    read(n, "grid_min", sec, c.price.grid_min);
    read(n, "grid_max", sec, c.price.grid_max);
    price_grid_set = n["grid_min"] || n["grid_max"];
    read(n, "start_price", sec, c.price.start_price);
    read_parsed(n, "stay_probability", sec, c.price.stay_probability, Rational::parse);
    read_parsed(n, "reversion_strength", sec, c.price.reversion_strength, Rational::parse);
  }
  if (!price_grid_set) {
    c.price.grid_min = c.instrument.grid_min;
    c.price.grid_max = c.instrument.grid_max;
  }
  if (const auto n = root["strategy"]) {
    const std::string sec = "strategy";
    check_keys(n, sec, {"kind", "order_probability", "period", "quantity", "substream"});
    read_parsed(n, "kind", sec, c.strategy.kind, parse_baseline_kind);
    read_parsed(n, "order_probability", sec, c.strategy.order_probability, Rational::parse);
    read(n, "period", sec, c.strategy.period);
    read(n, "quantity", sec, c.strategy.quantity);
    read(n, "substream", sec, c.strategy.substream_index);
  }
  if (const auto n = root["dominance"]) {
    const std::string sec = "dominance";
    check_keys(n, sec, {"tau", "gamma", "delay_probability", "queue_cap", "min_distance", "stage1_fill_count",
                        "max_phase_ticks"});
    read(n, "tau", sec, c.dominance.tau);
    read(n, "gamma", sec, c.dominance.gamma);
    read_parsed(n, "delay_probability", sec, c.dominance.delay_probability, Rational::parse);
    read(n, "queue_cap", sec, c.dominance.queue_cap);
    read_optional(n, "min_distance", sec, c.dominance.min_distance);
    read(n, "stage1_fill_count", sec, c.dominance.stage1_fill_count);
    read(n, "max_phase_ticks", sec, c.dominance.max_phase_ticks);
  }
  if (const auto n = root["run"]) {
    const std::string sec = "run";
    check_keys(n, sec, {"total_ticks", "target_phases", "master_seed", "half_spread", "commission_per_unit",
                        "output_dir", "replications", "write_ticks", "never_delay", "audit_every_tick"});
    // Naming only total_ticks switches the run to a fixed horizon.
    if (n["total_ticks"] && !n["target_phases"]) c.run.target_phases.reset();
    read_optional(n, "total_ticks", sec, c.run.total_ticks);
    read_optional(n, "target_phases", sec, c.run.target_phases);
    read(n, "master_seed", sec, c.run.master_seed);
    read(n, "half_spread", sec, c.run.half_spread);
    read(n, "commission_per_unit", sec, c.run.commission_per_unit);
    read(n, "output_dir", sec, c.run.output_dir);
    read(n, "replications", sec, c.run.replications);
    read(n, "write_ticks", sec, c.run.write_ticks);
    read(n, "never_delay", sec, c.run.never_delay);
    read(n, "audit_every_tick", sec, c.run.audit_every_tick);
  }
  c.price.seed = c.run.master_seed;
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

nlohmann::json config_to_json(const RunConfig& c) {
  nlohmann::json j;
  j["instrument"] = {
      {"symbol", c.instrument.symbol},
      {"multiplier", c.instrument.multiplier.to_string()},
      {"tick_size", c.instrument.tick_size.to_string()},
      {"grid_min", c.instrument.grid_min},
      {"grid_max", c.instrument.grid_max},
  };
  j["price"] = {
      {"kind", std::string(to_string(c.price.kind))},
      {"grid_min", c.price.grid_min},
      {"grid_max", c.price.grid_max},
      {"start_price", c.price.start_price},
      {"stay_probability", c.price.stay_probability.to_string()},
      {"reversion_strength", c.price.reversion_strength.to_string()},
  };
  j["strategy"] = {
      {"kind", std::string(to_string(c.strategy.kind))},
      {"order_probability", c.strategy.order_probability.to_string()},
      {"period", c.strategy.period},
      {"quantity", c.strategy.quantity},
      {"substream", c.strategy.substream_index},
  };
  j["dominance"] = {
      {"tau", c.dominance.tau},
      {"gamma", c.dominance.gamma},
      {"delay_probability", c.dominance.delay_probability.to_string()},
      {"queue_cap", c.dominance.queue_cap},
      {"min_distance", optional_json(c.dominance.min_distance)},
      {"stage1_fill_count", c.dominance.stage1_fill_count},
      {"max_phase_ticks", c.dominance.max_phase_ticks},
  };
  j["run"] = {
      {"total_ticks", optional_json(c.run.total_ticks)},
      {"target_phases", optional_json(c.run.target_phases)},
      {"master_seed", c.run.master_seed},
      {"half_spread", c.run.half_spread},
      {"commission_per_unit", c.run.commission_per_unit},
      {"output_dir", c.run.output_dir},
      {"replications", c.run.replications},
      {"write_ticks", c.run.write_ticks},
      {"never_delay", c.run.never_delay},
      {"audit_every_tick", c.run.audit_every_tick},
  };
  return j;
}

}  // namespace htisim
