#include "qtran/config.hpp"

#include <cmath>
#include <cstdlib>
#include <set>

#include <json.hpp>

#include "qtran/error.hpp"

namespace qtran {

using nlohmann::json;

namespace {

[[noreturn]] void invalid(const std::string& path, const std::string& what) {
  throw Error(ErrorKind::ValidationError, (path.empty() ? std::string() : path + ": ") + what);
}

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

// Checks object-ness and rejects keys outside `allowed`.
const json& object_at(const json& j, const std::string& path, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) invalid(path, "expected an object");
  std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& item : j.items()) {
    if (!ok.count(item.key())) invalid(join(path, item.key()), "unknown key");
  }
  return j;
}

double number(const json& j, const std::string& path) {
  if (!j.is_number()) invalid(path, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) invalid(path, "not finite");
  return v;
}

double number_or(const json& obj, const char* key, const std::string& path, double fallback) {
  return obj.contains(key) ? number(obj.at(key), join(path, key)) : fallback;
}

int integer_or(const json& obj, const char* key, const std::string& path, int fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number_integer()) invalid(join(path, key), "expected an integer");
  return v.get<int>();
}

std::string string_or(const json& obj, const char* key, const std::string& path, const std::string& fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_string()) invalid(join(path, key), "expected a string");
  return v.get<std::string>();
}

std::vector<double> numbers(const json& j, const std::string& path) {
  if (!j.is_array()) invalid(path, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(number(j[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

cplx complex_entry(const json& j, const std::string& path) {
  if (j.is_number()) return {number(j, path), 0.0};
  if (j.is_array() && j.size() == 2) return {number(j[0], path + "[0]"), number(j[1], path + "[1]")};
  invalid(path, "expected a number or [re, im]");
}

CMatrix matrix(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) invalid(path, "expected a non-empty array of rows");
  const std::size_t rows = j.size();
  if (!j[0].is_array() || j[0].empty()) invalid(path + "[0]", "expected a non-empty row");
  const std::size_t cols = j[0].size();
  CMatrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    const std::string rp = path + "[" + std::to_string(r) + "]";
    if (!j[r].is_array() || j[r].size() != cols) invalid(rp, "rows must have equal length");
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = complex_entry(j[r][c], rp + "[" + std::to_string(c) + "]");
  }
  return m;
}

json matrix_json(const CMatrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(json::array({m(r, c).real(), m(r, c).imag()}));
    rows.push_back(row);
  }
  return rows;
}

void check_square(const CMatrix& m, int n, const std::string& path) {
  if (m.rows() != n || m.cols() != n) {
    invalid(path, "expected " + std::to_string(n) + "x" + std::to_string(n));
  }
}

ModelSpec parse_model(const json& j) {
  const std::string p = "model";
  ModelSpec m;
  if (!j.is_object()) invalid(p, "expected an object");
  if (j.contains("builtin")) {
    const std::string name = string_or(j, "builtin", p, "");
    if (name == "single_site") {
      object_at(j, p, {"builtin", "eps_d", "lambda_L", "lambda_R", "mu0"});
      m.kind = ModelSpec::Kind::SingleSite;
    } else if (name == "chain") {
      object_at(j, p, {"builtin", "eps_d", "lambda_L", "lambda_R", "mu0", "sites", "hop"});
      m.kind = ModelSpec::Kind::Chain;
      m.sites = integer_or(j, "sites", p, 2);
      m.hop = number_or(j, "hop", p, -1.0);
      if (m.sites < 1) invalid(p + ".sites", "must be positive");
    } else {
      invalid(p + ".builtin", "unknown builtin '" + name + "' (single_site, chain)");
    }
    m.eps_d = number_or(j, "eps_d", p, 0.0);
    m.lambda_L = number_or(j, "lambda_L", p, 0.0);
    m.lambda_R = number_or(j, "lambda_R", p, 0.0);
    m.mu0 = number_or(j, "mu0", p, 0.0);
    if (m.lambda_L < 0.0) invalid(p + ".lambda_L", "must be non-negative");
    if (m.lambda_R < 0.0) invalid(p + ".lambda_R", "must be non-negative");
    return m;
  }
  object_at(j, p, {"h0", "lambda_L", "lambda_R", "mu0"});
  m.kind = ModelSpec::Kind::Explicit;
  for (const char* key : {"h0", "lambda_L", "lambda_R"}) {
    if (!j.contains(key)) invalid(p, std::string("missing required key ") + key + " (or builtin)");
  }
  m.h0 = matrix(j.at("h0"), p + ".h0");
  const int n = static_cast<int>(m.h0.rows());
  check_square(m.h0, n, p + ".h0");
  if (hermiticity_defect(m.h0) > 1e-12) invalid(p + ".h0", "h0 not Hermitian");
  m.lambda_L_matrix = matrix(j.at("lambda_L"), p + ".lambda_L");
  m.lambda_R_matrix = matrix(j.at("lambda_R"), p + ".lambda_R");
  check_square(m.lambda_L_matrix, n, p + ".lambda_L");
  check_square(m.lambda_R_matrix, n, p + ".lambda_R");
  m.mu0 = number_or(j, "mu0", p, 0.0);
  return m;
}

json model_json(const ModelSpec& m) {
  switch (m.kind) {
    case ModelSpec::Kind::SingleSite:
      return {{"builtin", "single_site"}, {"eps_d", m.eps_d}, {"lambda_L", m.lambda_L},
              {"lambda_R", m.lambda_R},   {"mu0", m.mu0}};
    case ModelSpec::Kind::Chain:
      return {{"builtin", "chain"}, {"eps_d", m.eps_d}, {"lambda_L", m.lambda_L}, {"lambda_R", m.lambda_R},
              {"mu0", m.mu0},       {"sites", m.sites}, {"hop", m.hop}};
    case ModelSpec::Kind::Explicit:
      return {{"h0", matrix_json(m.h0)},
              {"lambda_L", matrix_json(m.lambda_L_matrix)},
              {"lambda_R", matrix_json(m.lambda_R_matrix)},
              {"mu0", m.mu0}};
  }
  return {};
}

LeadBias parse_lead_bias(const json& j, const std::string& p) {
  object_at(j, p, {"kind", "delta_v", "rise_time", "times", "voltages"});
  const std::string kind = string_or(j, "kind", p, "zero");
  LeadBias b;
  if (kind == "zero") {
    b = LeadBias::zero();
  } else if (kind == "smooth_step") {
    b.kind = LeadBias::Kind::SmoothStep;
    b.amplitude = number_or(j, "delta_v", p, 0.0);
    b.rise_time = number_or(j, "rise_time", p, 0.1);
  } else if (kind == "tabulated") {
    if (!j.contains("times") || !j.contains("voltages")) invalid(p, "tabulated bias needs times and voltages");
    b.kind = LeadBias::Kind::Tabulated;
    b.times = numbers(j.at("times"), p + ".times");
    b.voltages = numbers(j.at("voltages"), p + ".voltages");
  } else {
    invalid(p + ".kind", "unknown bias kind '" + kind + "' (zero, smooth_step, tabulated)");
  }
  try {
    b.validate();
  } catch (const Error& e) {
    invalid(p, e.what());
  }
  return b;
}

json lead_bias_json(const LeadBias& b) {
  switch (b.kind) {
    case LeadBias::Kind::Zero: return {{"kind", "zero"}};
    case LeadBias::Kind::SmoothStep:
      return {{"kind", "smooth_step"}, {"delta_v", b.amplitude}, {"rise_time", b.rise_time}};
    case LeadBias::Kind::Tabulated:
      return {{"kind", "tabulated"}, {"times", b.times}, {"voltages", b.voltages}};
  }
  return {};
}

InducedFockRule parse_rule(const json& j, int n_orb) {
  const std::string p = "rule";
  object_at(j, p, {"kind", "times", "values"});
  const std::string kind = string_or(j, "kind", p, "half_sum");
  InducedFockRule r;
  if (kind == "half_sum") {
    r = InducedFockRule::half_sum();
  } else if (kind == "none") {
    r = InducedFockRule::none();
  } else if (kind == "tabulated") {
    if (!j.contains("times") || !j.contains("values")) invalid(p, "tabulated rule needs times and values");
    r.kind = InducedFockRule::Kind::Tabulated;
    r.times = numbers(j.at("times"), p + ".times");
    const json& v = j.at("values");
    if (!v.is_array()) invalid(p + ".values", "expected an array of matrices");
    for (std::size_t i = 0; i < v.size(); ++i) r.values.push_back(matrix(v[i], p + ".values[" + std::to_string(i) + "]"));
  } else {
    invalid(p + ".kind", "unknown rule '" + kind + "' (half_sum, none, tabulated)");
  }
  try {
    r.validate(n_orb);
  } catch (const Error& e) {
    invalid(p, e.what());
  }
  return r;
}

json rule_json(const InducedFockRule& r) {
  switch (r.kind) {
    case InducedFockRule::Kind::HalfSum: return {{"kind", "half_sum"}};
    case InducedFockRule::Kind::None: return {{"kind", "none"}};
    case InducedFockRule::Kind::Tabulated: {
      json values = json::array();
      for (const CMatrix& m : r.values) values.push_back(matrix_json(m));
      return {{"kind", "tabulated"}, {"times", r.times}, {"values", values}};
    }
  }
  return {};
}

OracleSpec parse_oracle(const json& j) {
  const std::string p = "oracle";
  object_at(j, p, {"bandwidth", "levels", "dt", "decimation", "init", "tie"});
  OracleSpec o;
  o.bandwidth = number_or(j, "bandwidth", p, o.bandwidth);
  o.levels = integer_or(j, "levels", p, o.levels);
  o.dt = number_or(j, "dt", p, o.dt);
  o.decimation = integer_or(j, "decimation", p, o.decimation);
  const std::string init = string_or(j, "init", p, "partition_free");
  if (init == "partition_free") {
    o.init = OracleInit::PartitionFree;
  } else if (init == "partitioned") {
    o.init = OracleInit::Partitioned;
  } else {
    invalid(p + ".init", "expected partitioned or partition_free");
  }
  const std::string tie = string_or(j, "tie", p, "half");
  if (tie == "half") {
    o.tie = FermiTiePolicy::Half;
  } else if (tie == "error") {
    o.tie = FermiTiePolicy::Error;
  } else {
    invalid(p + ".tie", "expected half or error");
  }
  if (!(o.bandwidth > 0.0)) invalid(p + ".bandwidth", "must be positive");
  if (o.levels < 10) invalid(p + ".levels", "must be at least 10");
  if (!(o.dt > 0.0)) invalid(p + ".dt", "must be positive");
  if (o.decimation < 1) invalid(p + ".decimation", "must be at least 1");
  return o;
}

json oracle_json(const OracleSpec& o) {
  return {{"bandwidth", o.bandwidth},
          {"levels", o.levels},
          {"dt", o.dt},
          {"decimation", o.decimation},
          {"init", o.init == OracleInit::Partitioned ? "partitioned" : "partition_free"},
          {"tie", o.tie == FermiTiePolicy::Half ? "half" : "error"}};
}

DissipatorKind parse_dissipator(const std::string& s) {
  for (DissipatorKind k : {DissipatorKind::WblAdiabatic, DissipatorKind::WblExact, DissipatorKind::Cso}) {
    if (s == to_string(k)) return k;
  }
  invalid("dissipator", "unknown dissipator '" + s + "' (wbl_adiabatic, wbl_exact, cso)");
}

RunConfig from_json(const json& doc) {
  if (!doc.is_object()) invalid("", "top level must be an object");
  std::vector<std::string> missing;
  for (const char* key : {"model", "bias"}) {
    if (!doc.contains(key)) missing.push_back(key);
  }
  if (!missing.empty()) {
    std::string list;
    for (const auto& k : missing) list += (list.empty() ? "" : ", ") + k;
    invalid("", "missing required keys: " + list);
  }
  object_at(doc, "", {"model", "bias", "rule", "dissipator", "dt", "t_end", "decimation", "eps_min", "scba", "output",
                      "oracle", "transmission", "iv_voltages", "sweep"});

  RunConfig cfg;
  cfg.model = parse_model(doc.at("model"));
  DeviceModel model;
  try {
    model = cfg.model.build();
  } catch (const Error& e) {
    invalid("model", e.what());
  }

  const json& bias = object_at(doc.at("bias"), "bias", {"L", "R"});
  if (bias.contains("L")) cfg.bias.left = parse_lead_bias(bias.at("L"), "bias.L");
  if (bias.contains("R")) cfg.bias.right = parse_lead_bias(bias.at("R"), "bias.R");
  if (doc.contains("rule")) cfg.rule = parse_rule(doc.at("rule"), model.n_orb);

  cfg.dissipator = parse_dissipator(string_or(doc, "dissipator", "", to_string(cfg.dissipator)));
  cfg.dt = number_or(doc, "dt", "", cfg.dt);
  cfg.t_end = number_or(doc, "t_end", "", cfg.t_end);
  cfg.decimation = integer_or(doc, "decimation", "", cfg.decimation);
  cfg.eps_min = number_or(doc, "eps_min", "", cfg.eps_min);
  if (doc.contains("scba")) {
    if (!doc.at("scba").is_boolean()) invalid("scba", "expected true or false");
    cfg.scba = doc.at("scba").get<bool>();
  }
  cfg.output = string_or(doc, "output", "", "");
  if (!(cfg.dt > 0.0)) invalid("dt", "must be positive");
  if (!(cfg.t_end > 0.0)) invalid("t_end", "must be positive");
  if (cfg.decimation < 1) invalid("decimation", "must be at least 1");
  if (!(cfg.eps_min < model.mu0)) invalid("eps_min", "must lie below mu0");
  if (cfg.dissipator == DissipatorKind::Cso && !cfg.rule.is_scalar()) {
    invalid("dissipator", "cso needs a time-independent h (half_sum or none rule)");
  }

  if (doc.contains("oracle")) cfg.oracle = parse_oracle(doc.at("oracle"));
  if (doc.contains("transmission")) {
    const json& t = object_at(doc.at("transmission"), "transmission", {"e_lo", "e_hi", "points"});
    cfg.transmission.e_lo = number_or(t, "e_lo", "transmission", cfg.transmission.e_lo);
    cfg.transmission.e_hi = number_or(t, "e_hi", "transmission", cfg.transmission.e_hi);
    cfg.transmission.points = integer_or(t, "points", "transmission", cfg.transmission.points);
    if (!(cfg.transmission.e_hi > cfg.transmission.e_lo)) invalid("transmission", "e_hi must exceed e_lo");
    if (cfg.transmission.points < 2) invalid("transmission.points", "must be at least 2");
  }
  if (doc.contains("iv_voltages")) cfg.iv_voltages = numbers(doc.at("iv_voltages"), "iv_voltages");
  if (doc.contains("sweep")) {
    const json& s = doc.at("sweep");
    if (!s.is_array()) invalid("sweep", "expected an array of override objects");
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (!s[i].is_object()) invalid("sweep[" + std::to_string(i) + "]", "expected an object");
      if (s[i].contains("sweep")) invalid("sweep[" + std::to_string(i) + "]", "nested sweeps are not allowed");
      cfg.sweep.push_back(s[i].dump());
    }
  }
  return cfg;
}

json to_json(const RunConfig& cfg) {
  json doc = {{"model", model_json(cfg.model)},
              {"bias", {{"L", lead_bias_json(cfg.bias.left)}, {"R", lead_bias_json(cfg.bias.right)}}},
              {"rule", rule_json(cfg.rule)},
              {"dissipator", to_string(cfg.dissipator)},
              {"dt", cfg.dt},
              {"t_end", cfg.t_end},
              {"decimation", cfg.decimation},
              {"eps_min", cfg.eps_min},
              {"scba", cfg.scba},
              {"transmission",
               {{"e_lo", cfg.transmission.e_lo}, {"e_hi", cfg.transmission.e_hi}, {"points", cfg.transmission.points}}}};
  if (!cfg.output.empty()) doc["output"] = cfg.output;
  if (cfg.oracle) doc["oracle"] = oracle_json(*cfg.oracle);
  if (!cfg.iv_voltages.empty()) doc["iv_voltages"] = cfg.iv_voltages;
  if (!cfg.sweep.empty()) {
    json s = json::array();
    for (const auto& e : cfg.sweep) s.push_back(json::parse(e));
    doc["sweep"] = s;
  }
  return doc;
}

json parse_text(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1, col = 1;
    const std::size_t end = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    for (std::size_t i = 0; i < end; ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    std::string msg = e.what();
    const auto pos = msg.find("syntax error");
    if (pos != std::string::npos) msg = msg.substr(pos);
    throw Error(ErrorKind::ParseError, std::to_string(line) + ":" + std::to_string(col) + ": " + msg);
  }
}

bool same(const CMatrix& a, const CMatrix& b) {
  return a.rows() == b.rows() && a.cols() == b.cols() && (a.size() == 0 || a == b);
}

bool same(const LeadBias& a, const LeadBias& b) {
  return a.kind == b.kind && a.amplitude == b.amplitude && a.rise_time == b.rise_time && a.times == b.times &&
         a.voltages == b.voltages;
}

bool same(const ModelSpec& a, const ModelSpec& b) {
  if (a.kind != b.kind || a.mu0 != b.mu0) return false;
  if (a.kind == ModelSpec::Kind::Explicit) {
    return same(a.h0, b.h0) && same(a.lambda_L_matrix, b.lambda_L_matrix) && same(a.lambda_R_matrix, b.lambda_R_matrix);
  }
  const bool chain_ok = a.kind != ModelSpec::Kind::Chain || (a.sites == b.sites && a.hop == b.hop);
  return chain_ok && a.eps_d == b.eps_d && a.lambda_L == b.lambda_L && a.lambda_R == b.lambda_R;
}

bool same(const InducedFockRule& a, const InducedFockRule& b) {
  if (a.kind != b.kind || a.times != b.times || a.values.size() != b.values.size()) return false;
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    if (!same(a.values[i], b.values[i])) return false;
  }
  return true;
}

bool same(const std::optional<OracleSpec>& a, const std::optional<OracleSpec>& b) {
  if (a.has_value() != b.has_value()) return false;
  if (!a) return true;
  return a->bandwidth == b->bandwidth && a->levels == b->levels && a->dt == b->dt && a->decimation == b->decimation &&
         a->init == b->init && a->tie == b->tie;
}

}  // namespace

DeviceModel ModelSpec::build() const {
  switch (kind) {
    case Kind::SingleSite: return build_single_site(eps_d, lambda_L, lambda_R, mu0);
    case Kind::Chain: return build_chain(sites, eps_d, hop, lambda_L, lambda_R, mu0);
    case Kind::Explicit: return make_model(h0, lambda_L_matrix, lambda_R_matrix, mu0);
  }
  throw Error(ErrorKind::InvalidModel, "unknown model kind");
}

PropagatorOptions RunConfig::propagator_options() const {
  PropagatorOptions o;
  o.dt = dt;
  o.t_end = t_end;
  o.decimation = decimation;
  o.kind = dissipator;
  o.eps_min = effective_eps_min(*this);
  o.scba = scba;
  return o;
}

bool operator==(const RunConfig& a, const RunConfig& b) {
  return same(a.model, b.model) && same(a.bias.left, b.bias.left) && same(a.bias.right, b.bias.right) &&
         same(a.rule, b.rule) && a.dissipator == b.dissipator && a.dt == b.dt && a.t_end == b.t_end &&
         a.decimation == b.decimation && a.eps_min == b.eps_min && a.scba == b.scba && a.output == b.output &&
         same(a.oracle, b.oracle) && a.transmission.e_lo == b.transmission.e_lo &&
         a.transmission.e_hi == b.transmission.e_hi && a.transmission.points == b.transmission.points &&
         a.iv_voltages == b.iv_voltages && a.sweep == b.sweep;
}

RunConfig parse_config(const std::string& text) { return from_json(parse_text(text)); }

std::string serialize_config(const RunConfig& cfg) { return to_json(cfg).dump(2); }

RunConfig sweep_entry(const std::string& base_text, std::size_t index) {
  json doc = parse_text(base_text);
  if (!doc.is_object() || !doc.contains("sweep") || !doc.at("sweep").is_array() || index >= doc.at("sweep").size()) {
    invalid("sweep", "no entry " + std::to_string(index));
  }
  const json patch = doc.at("sweep")[index];
  doc.erase("sweep");
  doc.merge_patch(patch);
  return from_json(doc);
}

double effective_eps_min(const RunConfig& cfg) {
  const char* env = std::getenv("QTRAN_EPS_MIN");
  if (env == nullptr || *env == '\0') return cfg.eps_min;
  char* end = nullptr;
  const double v = std::strtod(env, &end);
  if (end == env || *end != '\0' || !std::isfinite(v)) {
    throw Error(ErrorKind::ValidationError, std::string("QTRAN_EPS_MIN is not a number: ") + env);
  }
  return v;
}

}  // namespace qtran
