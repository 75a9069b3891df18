#include "config_io.hpp"

#include <boost/algorithm/string.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <charconv>
#include <fstream>
#include <sstream>

#include "bbmsel/errors.hpp"

namespace bbmsel::cli {
namespace {

using json = nlohmann::ordered_json;

enum class Kind { Real, Int, Bool, RealList };

struct Field {
  const char* section;
  const char* key;
  Kind kind;
};

// Every accepted key. run.mode is read separately since it is not part of SimConfig.
constexpr Field kFields[] = {
    {"law", "q", Kind::RealList},
    {"interval", "a", Kind::Real},
    {"bbbm", "A", Kind::Real},
    {"bbbm", "epsilon", Kind::Real},
    {"bbbm", "eta", Kind::Real},
    {"bbbm", "y", Kind::Real},
    {"bbbm", "zeta", Kind::Real},
    {"bbbm", "delta", Kind::Real},
    {"bbbm", "blue_floor", Kind::Real},
    {"bbbm", "trial_work_cap", Kind::Int},
    {"selection", "N", Kind::Int},
    {"selection", "alpha", Kind::RealList},
    {"selection", "plus_slack", Kind::Int},
    {"selection", "minus_slack", Kind::Int},
    {"selection", "recentre_minus_A", Kind::Bool},
    {"run", "dt", Kind::Real},
    {"run", "trial_dt", Kind::Real},
    {"run", "horizon", Kind::Real},
    {"run", "record_interval", Kind::Real},
    {"run", "seed", Kind::Int},
    {"run", "replicas", Kind::Int},
    {"run", "population_cap", Kind::Int},
    {"run", "inject_fault_at", Kind::Int},
    {"run", "check_every_event", Kind::Bool},
};

const Field* find_field(const std::string& section, const std::string& key) {
  for (const auto& f : kFields)
    if (section == f.section && key == f.key) return &f;
  return nullptr;
}

std::string path(const Field& f) { return std::string(f.section) + "." + f.key; }

double parse_real(const std::string& s, const std::string& where) {
  const std::string t = boost::trim_copy(s);
  double v = 0;
  const auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || p != t.data() + t.size() || t.empty())
    throw DomainError(where + ": expected a number, got '" + s + "'");
  return v;
}

long long parse_int(const std::string& s, const std::string& where) {
  const std::string t = boost::trim_copy(s);
  long long v = 0;
  const auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || p != t.data() + t.size() || t.empty())
    throw DomainError(where + ": expected an integer, got '" + s + "'");
  return v;
}

bool parse_bool(const std::string& s, const std::string& where) {
  const std::string t = boost::to_lower_copy(boost::trim_copy(s));
  if (t == "true" || t == "1" || t == "yes") return true;
  if (t == "false" || t == "0" || t == "no") return false;
  throw DomainError(where + ": expected true or false, got '" + s + "'");
}

json typed_value(const Field& f, const std::string& raw) {
  const std::string where = path(f);
  switch (f.kind) {
    case Kind::Real: return parse_real(raw, where);
    case Kind::Int: return parse_int(raw, where);
    case Kind::Bool: return parse_bool(raw, where);
    case Kind::RealList: {
      std::vector<std::string> parts;
      boost::split(parts, raw, boost::is_any_of(","));
      json arr = json::array();
      for (const auto& p : parts) arr.push_back(parse_real(p, where));
      return arr;
    }
  }
  return {};
}

template <class T>
void read(const json& sec, const char* key, T& out) {
  if (sec.contains(key)) out = sec.at(key).get<T>();
}

template <class T>
void read_opt(const json& sec, const char* key, std::optional<T>& out) {
  if (sec.contains(key)) out = sec.at(key).get<T>();
}

template <class T>
void write_opt(json& sec, const char* key, const std::optional<T>& v) {
  if (v) sec[key] = *v;
}

ParsedConfig finish(json j, std::string mode_name, const std::string& mode_override) {
  if (!mode_override.empty()) mode_name = mode_override;
  if (mode_name.empty()) throw DomainError("run.mode: required (in the file or via --mode)");
  ParsedConfig out;
  out.mode = parse_mode(mode_name);
  out.cfg = config_from_json(j);
  out.warnings = validate(out.cfg, out.mode);
  return out;
}

}  // namespace

json config_to_json(const SimConfig& cfg) {
  json j;
  j["law"]["q"] = cfg.law.q();
  json& iv = j["interval"];
  iv = json::object();
  write_opt(iv, "a", cfg.a);
  json& bb = j["bbbm"];
  bb = json::object();
  write_opt(bb, "A", cfg.A);
  write_opt(bb, "epsilon", cfg.epsilon);
  write_opt(bb, "eta", cfg.eta);
  write_opt(bb, "y", cfg.y);
  write_opt(bb, "zeta", cfg.zeta);
  bb["delta"] = cfg.delta;
  write_opt(bb, "blue_floor", cfg.blue_floor);
  bb["trial_work_cap"] = cfg.trial_work_cap;
  json& sel = j["selection"];
  sel = json::object();
  write_opt(sel, "N", cfg.N);
  sel["alpha"] = cfg.alphas;
  sel["plus_slack"] = cfg.plus_rule.offset;
  sel["minus_slack"] = cfg.minus_rule.offset;
  sel["recentre_minus_A"] = cfg.recentre_minus_A;
  json& run = j["run"];
  run = json::object();
  write_opt(run, "dt", cfg.dt);
  run["trial_dt"] = cfg.trial_dt;
  run["horizon"] = cfg.horizon;
  run["record_interval"] = cfg.record_interval;
  run["seed"] = cfg.seed;
  run["replicas"] = cfg.replicas;
  run["population_cap"] = cfg.population_cap;
  run["inject_fault_at"] = cfg.inject_fault_at;
  run["check_every_event"] = cfg.check_every_event;
  return j;
}

SimConfig config_from_json(const json& j) {
  SimConfig cfg;
  for (const auto& [section, body] : j.items()) {
    if (!body.is_object()) throw DomainError(section + ": expected a section");
    for (const auto& [key, v] : body.items())
      if (!find_field(section, key)) throw DomainError(section + "." + key + ": unknown key");
  }
  static const json empty = json::object();
  auto sec = [&](const char* name) -> const json& { return j.contains(name) ? j.at(name) : empty; };
  try {
    if (sec("law").contains("q")) {
      try {
        cfg.law = ReproductionLaw(sec("law").at("q").get<std::vector<double>>());
      } catch (const DomainError& e) {
        throw DomainError(std::string("[law] ") + e.what());
      }
    }
    read_opt(sec("interval"), "a", cfg.a);
    const json& bb = sec("bbbm");
    read_opt(bb, "A", cfg.A);
    read_opt(bb, "epsilon", cfg.epsilon);
    read_opt(bb, "eta", cfg.eta);
    read_opt(bb, "y", cfg.y);
    read_opt(bb, "zeta", cfg.zeta);
    read(bb, "delta", cfg.delta);
    read_opt(bb, "blue_floor", cfg.blue_floor);
    read(bb, "trial_work_cap", cfg.trial_work_cap);
    const json& sel = sec("selection");
    read_opt(sel, "N", cfg.N);
    read(sel, "alpha", cfg.alphas);
    read(sel, "plus_slack", cfg.plus_rule.offset);
    read(sel, "minus_slack", cfg.minus_rule.offset);
    read(sel, "recentre_minus_A", cfg.recentre_minus_A);
    const json& run = sec("run");
    read_opt(run, "dt", cfg.dt);
    read(run, "trial_dt", cfg.trial_dt);
    read(run, "horizon", cfg.horizon);
    read(run, "record_interval", cfg.record_interval);
    read(run, "seed", cfg.seed);
    read(run, "replicas", cfg.replicas);
    read(run, "population_cap", cfg.population_cap);
    read(run, "inject_fault_at", cfg.inject_fault_at);
    read(run, "check_every_event", cfg.check_every_event);
  } catch (const json::exception& e) {
    throw DomainError(std::string("config: ") + e.what());
  }
  return cfg;
}

ParsedConfig parse_config_text(const std::string& text, const std::string& mode_override) {
  boost::property_tree::ptree tree;
  std::istringstream in(text);
  try {
    boost::property_tree::ini_parser::read_ini(in, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw DomainError(std::string("config: ") + e.message() + " at line " + std::to_string(e.line()));
  }
  json j = json::object();
  std::string mode_name;
  for (const auto& [section, body] : tree) {
    if (body.empty() && !body.data().empty())
      throw DomainError(section + ": keys must sit inside a section");
    for (const auto& [key, node] : body) {
      if (section == "run" && key == "mode") {
        mode_name = boost::trim_copy(node.data());
        continue;
      }
      const Field* f = find_field(section, key);
      if (!f) throw DomainError(section + "." + key + ": unknown key");
      j[section][key] = typed_value(*f, node.data());
    }
  }
  return finish(std::move(j), mode_name, mode_override);
}

ParsedConfig parse_config(const std::string& file, const std::string& mode_override) {
  std::ifstream in(file);
  if (!in) throw DomainError("config: cannot open '" + file + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str(), mode_override);
}

}  // namespace bbmsel::cli
