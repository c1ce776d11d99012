#include "ppfl/io/config_json.hpp"

#include <fstream>
#include <set>

#include "ppfl/core/error.hpp"

namespace ppfl {

using nlohmann::json;

namespace {

[[noreturn]] void bad_field(const std::string& path, const std::string& what) {
  throw Error(ErrCode::config, "config field " + path + ": " + what);
}

void check_keys(const json& j, const std::string& path, const std::set<std::string>& allowed) {
  if (!j.is_object()) bad_field(path.empty() ? "(root)" : path, "expected an object");
  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (!allowed.count(key)) bad_field(path.empty() ? key : path + "." + key, "unknown field");
  }
}

double get_number(const json& j, const std::string& path) {
  if (!j.is_number()) bad_field(path, "expected a number");
  return j.get<double>();
}

std::size_t get_uint(const json& j, const std::string& path) {
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<long long>() >= 0))
    bad_field(path, "expected a nonnegative integer");
  return j.get<std::size_t>();
}

std::string get_string(const json& j, const std::string& path) {
  if (!j.is_string()) bad_field(path, "expected a string");
  return j.get<std::string>();
}

bool get_bool(const json& j, const std::string& path) {
  if (!j.is_boolean()) bad_field(path, "expected a boolean");
  return j.get<bool>();
}

}  // namespace

RunConfig config_from_json(const json& j) {
  check_keys(j, "", {"seed", "M", "K", "T", "E", "eta", "lambda", "rho1", "rho2", "batch",
                     "architecture", "epsilon_floor", "algorithm", "snapshot_rounds",
                     "smoothness", "affinity_source", "affinity_csv"});
  RunConfig cfg;
  if (j.contains("seed")) cfg.seed = static_cast<std::uint64_t>(get_uint(j["seed"], "seed"));
  if (j.contains("M")) cfg.M = get_uint(j["M"], "M");
  if (j.contains("K")) cfg.K = get_uint(j["K"], "K");
  if (j.contains("T")) cfg.T = get_uint(j["T"], "T");
  if (j.contains("E")) cfg.E = get_uint(j["E"], "E");
  if (j.contains("eta")) {
    const json& e = j["eta"];
    check_keys(e, "eta", {"schedule", "value"});
    if (e.contains("schedule")) {
      const std::string s = get_string(e["schedule"], "eta.schedule");
      if (s == "constant")
        cfg.eta.schedule = EtaSchedule::constant;
      else if (s == "inv_sqrt")
        cfg.eta.schedule = EtaSchedule::inv_sqrt;
      else
        bad_field("eta.schedule", "expected constant or inv_sqrt");
    }
    if (e.contains("value")) cfg.eta.value = get_number(e["value"], "eta.value");
  }
  if (j.contains("lambda")) cfg.lambda = get_number(j["lambda"], "lambda");
  if (j.contains("rho1")) cfg.rho1 = get_number(j["rho1"], "rho1");
  if (j.contains("rho2")) cfg.rho2 = get_number(j["rho2"], "rho2");
  if (j.contains("batch")) {
    const json& b = j["batch"];
    check_keys(b, "batch", {"full", "size"});
    if (b.contains("full")) cfg.batch.full = get_bool(b["full"], "batch.full");
    if (b.contains("size")) cfg.batch.size = get_uint(b["size"], "batch.size");
  }
  if (j.contains("architecture")) {
    const std::string a = get_string(j["architecture"], "architecture");
    if (a == "prediction_mixture")
      cfg.architecture = Architecture::prediction_mixture;
    else if (a == "parameter_mixture")
      cfg.architecture = Architecture::parameter_mixture;
    else if (a == "loss_mixture")
      cfg.architecture = Architecture::loss_mixture;
    else
      bad_field("architecture", "expected prediction_mixture, parameter_mixture, or loss_mixture");
  }
  if (j.contains("epsilon_floor"))
    cfg.epsilon_floor = get_number(j["epsilon_floor"], "epsilon_floor");
  if (j.contains("algorithm")) {
    const std::string a = get_string(j["algorithm"], "algorithm");
    if (a == "rbcd")
      cfg.algorithm = Algorithm::rbcd;
    else if (a == "alternating")
      cfg.algorithm = Algorithm::alternating;
    else if (a == "fedavg")
      cfg.algorithm = Algorithm::fedavg;
    else if (a == "local")
      cfg.algorithm = Algorithm::local;
    else if (a == "clustered")
      cfg.algorithm = Algorithm::clustered;
    else
      bad_field("algorithm", "expected rbcd, alternating, fedavg, local, or clustered");
  }
  if (j.contains("snapshot_rounds")) {
    const json& s = j["snapshot_rounds"];
    if (!s.is_array()) bad_field("snapshot_rounds", "expected an array");
    for (std::size_t i = 0; i < s.size(); ++i)
      cfg.snapshot_rounds.push_back(
          get_uint(s[i], "snapshot_rounds[" + std::to_string(i) + "]"));
  }
  if (j.contains("smoothness")) {
    const json& s = j["smoothness"];
    check_keys(s, "smoothness", {"L1", "L2", "sigma1_sq", "sigma2_sq", "delta_sq"});
    if (s.contains("L1")) cfg.smoothness.L1 = get_number(s["L1"], "smoothness.L1");
    if (s.contains("L2")) cfg.smoothness.L2 = get_number(s["L2"], "smoothness.L2");
    if (s.contains("sigma1_sq"))
      cfg.smoothness.sigma1_sq = get_number(s["sigma1_sq"], "smoothness.sigma1_sq");
    if (s.contains("sigma2_sq"))
      cfg.smoothness.sigma2_sq = get_number(s["sigma2_sq"], "smoothness.sigma2_sq");
    if (s.contains("delta_sq"))
      cfg.smoothness.delta_sq = get_number(s["delta_sq"], "smoothness.delta_sq");
  }
  if (j.contains("affinity_source"))
    cfg.affinity_source = get_string(j["affinity_source"], "affinity_source");
  if (j.contains("affinity_csv")) cfg.affinity_csv = get_string(j["affinity_csv"], "affinity_csv");
  cfg.validate();
  return cfg;
}

nlohmann::ordered_json config_to_json(const RunConfig& cfg) {
  nlohmann::ordered_json j;
  j["seed"] = cfg.seed;
  j["M"] = cfg.M;
  j["K"] = cfg.K;
  j["T"] = cfg.T;
  j["E"] = cfg.E;
  j["eta"] = {{"schedule", to_string(cfg.eta.schedule)}, {"value", cfg.eta.value}};
  j["lambda"] = cfg.lambda;
  j["rho1"] = cfg.rho1;
  j["rho2"] = cfg.rho2;
  j["batch"] = {{"full", cfg.batch.full}, {"size", cfg.batch.size}};
  j["architecture"] = to_string(cfg.architecture);
  j["epsilon_floor"] = cfg.epsilon_floor;
  j["algorithm"] = to_string(cfg.algorithm);
  j["snapshot_rounds"] = cfg.effective_snapshot_rounds();
  nlohmann::ordered_json sm = nlohmann::ordered_json::object();
  if (cfg.smoothness.L1) sm["L1"] = *cfg.smoothness.L1;
  if (cfg.smoothness.L2) sm["L2"] = *cfg.smoothness.L2;
  if (cfg.smoothness.sigma1_sq) sm["sigma1_sq"] = *cfg.smoothness.sigma1_sq;
  if (cfg.smoothness.sigma2_sq) sm["sigma2_sq"] = *cfg.smoothness.sigma2_sq;
  if (cfg.smoothness.delta_sq) sm["delta_sq"] = *cfg.smoothness.delta_sq;
  j["smoothness"] = sm;
  j["affinity_source"] = cfg.affinity_source;
  j["affinity_csv"] = cfg.affinity_csv;
  return j;
}

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrCode::config, "cannot open config file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw Error(ErrCode::config, "config parse error in " + path + ": " + e.what());
  }
  return j;
}

json parse_json_text(const std::string& text, const std::string& where) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrCode::config, "config parse error in " + where + ": " + e.what());
  }
}

void apply_json_override(json& j, const std::string& dot_key, const std::string& value) {
  require(!dot_key.empty(), "empty override key", ErrCode::config);
  json* node = &j;
  std::size_t pos = 0;
  while (true) {
    const std::size_t dot = dot_key.find('.', pos);
    const std::string part = dot_key.substr(pos, dot - pos);
    require(!part.empty(), "bad override key: " + dot_key, ErrCode::config);
    if (dot == std::string::npos) {
      json parsed = json::parse(value, nullptr, false);
      (*node)[part] = parsed.is_discarded() ? json(value) : parsed;
      return;
    }
    node = &(*node)[part];
    pos = dot + 1;
  }
}

}  // namespace ppfl
