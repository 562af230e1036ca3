#include "config.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace tq::cli {

namespace {

using nlohmann::json;

void require_keys(const json& j, std::initializer_list<const char*> allowed,
                  const std::string& context) {
  for (const auto& item : j.items()) {
    bool known = false;
    for (const char* key : allowed)
      if (item.key() == key) {
        known = true;
        break;
      }
    if (!known)
      throw ConfigError("unknown key '" + item.key() + "' in " + context);
  }
}

unsigned parse_octal(const json& j, const std::string& context) {
  if (j.is_number_unsigned()) {
    // Digits read as octal: 67 means 0o67.
    unsigned value = 0;
    for (const char c : std::to_string(j.get<unsigned>())) {
      if (c < '0' || c > '7')
        throw ConfigError(context + ": octal digits only");
      value = value * 8 + static_cast<unsigned>(c - '0');
    }
    return value;
  }
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    unsigned value = 0;
    if (s.empty()) throw ConfigError(context + ": empty octal value");
    for (const char c : s) {
      if (c < '0' || c > '7')
        throw ConfigError(context + ": octal digits only");
      value = value * 8 + static_cast<unsigned>(c - '0');
    }
    return value;
  }
  throw ConfigError(context + ": expected an octal string or integer");
}

ConvCodeSpec parse_code(const json& j) {
  require_keys(j, {"memory", "feedback_octal", "feedforward_octal"}, "code");
  ConvCodeSpec code;
  if (j.contains("memory")) code.memory = j.at("memory").get<int>();
  if (j.contains("feedback_octal"))
    code.feedback = parse_octal(j.at("feedback_octal"), "code.feedback_octal");
  if (j.contains("feedforward_octal"))
    code.feedforward =
        parse_octal(j.at("feedforward_octal"), "code.feedforward_octal");
  code.validate();
  return code;
}

InterleaverSpec parse_interleaver(const json& j) {
  require_keys(j,
               {"kind", "read_dither", "write_dither", "prime", "offset",
                "seed", "path"},
               "interleaver");
  InterleaverSpec spec;
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "drp") {
    spec.kind = InterleaverSpec::Kind::drp;
    spec.read_dither = j.at("read_dither").get<std::vector<std::uint32_t>>();
    spec.write_dither = j.at("write_dither").get<std::vector<std::uint32_t>>();
    spec.prime = j.at("prime").get<std::uint64_t>();
    spec.offset = j.value("offset", std::uint64_t{0});
  } else if (kind == "random") {
    spec.kind = InterleaverSpec::Kind::random;
    spec.seed = j.at("seed").get<std::uint64_t>();
  } else if (kind == "file") {
    spec.kind = InterleaverSpec::Kind::file;
    spec.path = j.at("path").get<std::string>();
  } else {
    throw ConfigError("interleaver.kind must be drp, random or file");
  }
  return spec;
}

std::vector<Complex> parse_taps(const json& j) {
  std::vector<Complex> taps;
  for (const json& tap : j) {
    if (tap.is_number()) {
      taps.emplace_back(tap.get<double>(), 0.0);
    } else if (tap.is_array() && tap.size() == 2) {
      taps.emplace_back(tap[0].get<double>(), tap[1].get<double>());
    } else {
      throw ConfigError("taps entries must be numbers or [re, im] pairs");
    }
  }
  return taps;
}

ScenarioSpec parse_scenario(const json& j) {
  require_keys(j,
               {"name", "code", "interleaver", "taps", "modulation",
                "info_bits", "iterations", "ebno_grid_db"},
               "scenario");
  ScenarioSpec sc;
  sc.name = j.value("name", std::string{"custom"});
  if (j.contains("code")) sc.code = parse_code(j.at("code"));
  sc.interleaver = parse_interleaver(j.at("interleaver"));
  sc.taps = parse_taps(j.at("taps"));
  const std::string mod = j.at("modulation").get<std::string>();
  if (mod == "bpsk")
    sc.modulation = Modulation::bpsk;
  else if (mod == "16qam")
    sc.modulation = Modulation::qam16_gray;
  else
    throw ConfigError("modulation must be bpsk or 16qam");
  sc.info_bits = j.at("info_bits").get<int>();
  sc.iterations = j.value("iterations", 6);
  if (j.contains("ebno_grid_db"))
    sc.ebno_grid_db = j.at("ebno_grid_db").get<std::vector<double>>();
  sc.validate();
  return sc;
}

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& err) {
    throw ConfigError(path + ": " + err.what());
  }
  return j;
}

}  // namespace

ScenarioSpec load_scenario(const std::string& name_or_path) {
  for (const std::string& name : builtin_scenario_names())
    if (name == name_or_path) return builtin_scenario(name);
  return parse_scenario(load_json(name_or_path));
}

SweepConfig load_sweep_config(const std::string& path) {
  const json j = load_json(path);
  require_keys(j,
               {"scenario", "equalizers", "ebno_db", "min_errors", "max_blocks",
                "allow_low_confidence", "seed", "threads", "out"},
               "sweep config");
  SweepConfig cfg;
  const json& sc = j.at("scenario");
  cfg.scenario = sc.is_string() ? load_scenario(sc.get<std::string>())
                                : parse_scenario(sc);
  for (const json& e : j.at("equalizers")) {
    require_keys(e, {"algorithm", "budget"}, "equalizer");
    EqualizerConfig eq;
    eq.algorithm = algorithm_from_name(e.at("algorithm").get<std::string>());
    const int budget = e.value("budget", 0);
    if (eq.algorithm == Algorithm::rs)
      eq.reduced_memory = budget;
    else
      eq.state_budget = budget;
    cfg.equalizers.push_back(eq);
  }
  if (j.contains("ebno_db"))
    cfg.ebno_db = j.at("ebno_db").get<std::vector<double>>();
  cfg.min_errors = j.value("min_errors", cfg.min_errors);
  cfg.max_blocks = j.value("max_blocks", cfg.max_blocks);
  cfg.allow_low_confidence = j.value("allow_low_confidence", false);
  cfg.seed = j.value("seed", cfg.seed);
  cfg.threads = j.value("threads", cfg.threads);
  cfg.out = j.value("out", std::string{});
  return cfg;
}

std::string describe(const ScenarioSpec& sc) {
  std::ostringstream out;
  out << sc.name << ": " << modulation_name(sc.modulation) << ", "
      << sc.taps.size() << " taps (memory " << sc.channel_memory() << ", "
      << state_count(bits_per_symbol(sc.modulation), sc.channel_memory())
      << " states), info " << sc.info_bits << ", coded " << sc.coded_bits()
      << ", " << sc.iterations << " iterations, code CC(2,1," << sc.code.memory
      << ") fb=0" << std::oct << sc.code.feedback << " ff=0"
      << sc.code.feedforward << std::dec;
  return out.str();
}

}  // namespace tq::cli
