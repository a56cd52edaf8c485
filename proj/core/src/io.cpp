#include "vilenkin/io.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

namespace vilenkin {

namespace {

using nlohmann::json;

const json* find(const json& doc, const char* key) {
  const auto it = doc.find(key);
  return it == doc.end() ? nullptr : &*it;
}

template <class T>
T read_as(const json& v, const std::string& field, const char* type) {
  try {
    return v.get<T>();
  } catch (const json::exception&) {
    throw ConfigError(field, fmt::format("expected {}", type));
  }
}

int read_int(const json& v, const std::string& field) {
  if (!v.is_number_integer()) throw ConfigError(field, "expected an integer");
  return v.get<int>();
}

double read_number(const json& v, const std::string& field) {
  if (!v.is_number()) throw ConfigError(field, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ConfigError(field, "must be finite");
  return x;
}

GroupConfig parse_group(const json& g) {
  if (!g.is_object()) throw ConfigError("group", "expected an object");
  std::vector<int> radices;
  if (const json* r = find(g, "radices")) {
    if (!r->is_array() || r->empty()) throw ConfigError("group.radices", "expected a non-empty integer list");
    for (const auto& v : *r) radices.push_back(read_int(v, "group.radices"));
  } else {
    const json* radix = find(g, "radix");
    const json* depth = find(g, "depth");
    if (!radix) throw ConfigError("group.radix", "missing (or give group.radices)");
    if (!depth) throw ConfigError("group.depth", "missing");
    const int m = read_int(*radix, "group.radix");
    const int n = read_int(*depth, "group.depth");
    if (n < 2) throw ConfigError("group.depth", "must be >= 2");
    radices.assign(static_cast<std::size_t>(n), m);
  }
  for (int m : radices) {
    if (m < 2) throw ConfigError("group", fmt::format("radix {} is below 2", m));
  }
  if (radices.size() < 2) throw ConfigError("group", "depth must be >= 2");
  try {
    return GroupConfig(radices);
  } catch (const std::exception& e) {
    throw ConfigError("group", e.what());
  }
}

PhiFunction parse_phi(const json& v) {
  if (v.is_string()) return parse_phi(json{{"kind", v}});
  if (!v.is_object()) throw ConfigError("phi", "expected an object or a kind name");
  const json* kind = find(v, "kind");
  if (!kind || !kind->is_string()) throw ConfigError("phi.kind", "missing");
  const auto name = kind->get<std::string>();
  const json* par = find(v, "parameter");
  const double x = par ? read_number(*par, "phi.parameter") : 0.0;
  try {
    if (name == "constant") return PhiFunction::constant();
    if (name == "power") return PhiFunction::power(x);
    if (name == "log_power") return PhiFunction::log_power(x);
    if (name == "rate") return PhiFunction::rate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError("phi.parameter", e.what());
  }
  throw ConfigError("phi.kind", fmt::format("unknown kind '{}'", name));
}

const char* phi_kind_name(PhiFunction::Kind kind) {
  switch (kind) {
    case PhiFunction::Kind::Constant: return "constant";
    case PhiFunction::Kind::Power: return "power";
    case PhiFunction::Kind::LogPower: return "log_power";
    case PhiFunction::Kind::Rate: return "rate";
  }
  return "constant";
}

}  // namespace

ConfigError::ConfigError(std::string field, const std::string& message)
    : std::runtime_error(fmt::format("config field \"{}\": {}", field, message)), field_(std::move(field)) {}

ExperimentConfig parse_config(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("<document>", e.what());
  }
  if (!doc.is_object()) throw ConfigError("<document>", "expected an object");

  ExperimentConfig cfg;
  const json* group = find(doc, "group");
  if (!group) throw ConfigError("group", "missing");
  cfg.group = parse_group(*group);

  const json* seed = find(doc, "seed");
  if (!seed) throw ConfigError("seed", "missing");
  if (!seed->is_number_unsigned() && !(seed->is_number_integer() && seed->get<long long>() >= 0)) {
    throw ConfigError("seed", "expected a non-negative integer");
  }
  cfg.seed = seed->get<std::uint64_t>();

  if (const json* v = find(doc, "preset")) cfg.preset = read_as<std::string>(*v, "preset", "a string");
  if (!cfg.preset.empty() && cfg.preset != "thm1a" && cfg.preset != "sharpness" && cfg.preset != "rates") {
    throw ConfigError("preset", fmt::format("unknown preset '{}'", cfg.preset));
  }
  if (const json* v = find(doc, "p")) {
    cfg.p = read_number(*v, "p");
    if (!(cfg.p > 0.0)) throw ConfigError("p", "must be positive");
  } else if (!cfg.preset.empty()) {
    throw ConfigError("p", fmt::format("required by preset '{}'", cfg.preset));
  }
  if (!cfg.preset.empty() && !(cfg.p < 0.5)) {
    throw ConfigError("p", fmt::format("preset '{}' needs 0 < p < 1/2, got {}", cfg.preset, cfg.p));
  }

  if (const json* v = find(doc, "phi")) cfg.phi = parse_phi(*v);
  if (const json* v = find(doc, "index_set")) {
    if (!v->is_object()) throw ConfigError("index_set", "expected an object");
    if (const json* r = find(*v, "rho_cap")) {
      cfg.rho_cap = read_int(*r, "index_set.rho_cap");
      if (cfg.rho_cap < 0) throw ConfigError("index_set.rho_cap", "must be >= 0");
    }
    if (const json* r = find(*v, "rate_preset")) {
      cfg.rate_preset = read_as<std::string>(*r, "index_set.rate_preset", "a string");
      try {
        parse_rate_preset(cfg.rate_preset);
      } catch (const std::invalid_argument& e) {
        throw ConfigError("index_set.rate_preset", e.what());
      }
    }
  }
  if (const json* v = find(doc, "levels")) {
    if (!v->is_array() || v->empty()) throw ConfigError("levels", "expected a non-empty integer list");
    cfg.levels.clear();
    for (const auto& l : *v) cfg.levels.push_back(read_int(l, "levels"));
  }
  if (const json* v = find(doc, "atom_count")) {
    cfg.atom_count = read_int(*v, "atom_count");
    if (cfg.atom_count < 1) throw ConfigError("atom_count", "must be >= 1");
  }
  if (const json* v = find(doc, "selection")) {
    const auto rule = read_as<std::string>(*v, "selection", "a string");
    if (rule == "cap") {
      cfg.selection = SelectionRule::Cap;
    } else if (rule == "halving") {
      cfg.selection = SelectionRule::Halving;
    } else {
      throw ConfigError("selection", fmt::format("unknown rule '{}'", rule));
    }
  }
  if (const json* v = find(doc, "cap"); v && !v->is_null()) {
    cfg.cap = read_number(*v, "cap");
    if (!(*cfg.cap > 0.0)) throw ConfigError("cap", "must be positive");
  }
  if (const json* v = find(doc, "lambda_scale")) {
    cfg.lambda_scale = read_number(*v, "lambda_scale");
    if (!(cfg.lambda_scale > 0.0)) throw ConfigError("lambda_scale", "must be positive");
  }
  if (const json* v = find(doc, "output")) {
    if (!v->is_object()) throw ConfigError("output", "expected an object");
    if (const json* d = find(*v, "dir")) cfg.output_dir = read_as<std::string>(*d, "output.dir", "a string");
    if (const json* d = find(*v, "prefix")) cfg.output_prefix = read_as<std::string>(*d, "output.prefix", "a string");
  }
  if (const json* v = find(doc, "cache_budget")) {
    const int b = read_int(*v, "cache_budget");
    if (b < 1) throw ConfigError("cache_budget", "must be >= 1");
    cfg.cache_budget = static_cast<std::size_t>(b);
  }
  if (const json* v = find(doc, "reference_mode")) {
    if (!v->is_boolean()) throw ConfigError("reference_mode", "expected a boolean");
    cfg.reference_mode = v->get<bool>();
  }
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("<document>", fmt::format("cannot read '{}'", path.string()));
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

nlohmann::json to_json(const ExperimentConfig& cfg) {
  json out = {
      {"group", {{"radices", cfg.group.radices()}}},
      {"p", cfg.p},
      {"phi", {{"kind", phi_kind_name(cfg.phi.kind)}, {"parameter", cfg.phi.parameter}}},
      {"preset", cfg.preset},
      {"index_set", {{"rho_cap", cfg.rho_cap}, {"rate_preset", cfg.rate_preset}}},
      {"levels", cfg.levels},
      {"atom_count", cfg.atom_count},
      {"selection", cfg.selection == SelectionRule::Cap ? "cap" : "halving"},
      {"lambda_scale", cfg.lambda_scale},
      {"seed", cfg.seed},
      {"output", {{"dir", cfg.output_dir}, {"prefix", cfg.output_prefix}}},
      {"cache_budget", cfg.cache_budget},
      {"reference_mode", cfg.reference_mode},
  };
  out["cap"] = cfg.cap ? json(*cfg.cap) : json(nullptr);
  return out;
}

std::filesystem::path output_directory(const ExperimentConfig& cfg) {
  if (const char* env = std::getenv("VILENKIN_OUTPUT_DIR"); env && *env) return env;
  return cfg.output_dir;
}

WrittenReport write_report(const ExperimentReport& report, const ExperimentConfig& cfg) {
  const auto dir = output_directory(cfg);
  std::filesystem::create_directories(dir);
  WrittenReport out{dir / (cfg.output_prefix + report.name + ".csv"),
                    dir / (cfg.output_prefix + report.name + "_summary.json")};
  json summary = report.summary;
  summary["config"] = to_json(cfg);
  {
    std::ofstream f(out.csv, std::ios::binary);
    f << report.csv();
    if (!f) throw std::runtime_error(fmt::format("cannot write '{}'", out.csv.string()));
  }
  {
    std::ofstream f(out.summary, std::ios::binary);
    f << summary.dump(2) << '\n';
    if (!f) throw std::runtime_error(fmt::format("cannot write '{}'", out.summary.string()));
  }
  return out;
}

}  // namespace vilenkin
