#include "steerkit/report.hpp"

#include <algorithm>
#include <cstdio>
#include <iterator>
#include <sstream>
#include <stdexcept>
#include <type_traits>

#include "json.hpp"

namespace steerkit {

using json = nlohmann::ordered_json;

namespace {

// --- JSON encoding -------------------------------------------------------------

json encode(const SteeringValue& v) {
  return json{{"kind", "steering"},
              {"criterion", to_string(v.criterion)},
              {"inequality", criterion_inequality(v.criterion)},
              {"group", v.partition.steering_group},
              {"target", v.partition.target_site},
              {"value", v.value},
              {"bound", v.bound},
              {"verdict", v.verdict},
              {"method", v.method}};
}

json encode(const GenuineSteeringReport& g) {
  json values = json::array();
  for (const auto& v : g.values) values.push_back(encode(v));
  return json{{"kind", "genuine"},
              {"criterion", g.values.empty() ? std::string_view{} : to_string(g.values.front().criterion)},
              {"inequality", "S1 + S2 + S3 < 1"},
              {"bound", 1.0},
              {"sum", g.sum},
              {"genuine", g.genuine},
              {"method_notes", g.method_notes},
              {"values", values}};
}

json encode(const ThresholdResult& t) {
  return json{{"kind", "threshold"},     {"scenario", t.scenario}, {"parameter", t.parameter},
              {"criterion", to_string(t.criterion)}, {"bound", t.bound},   {"critical", t.critical},
              {"low", t.low},            {"high", t.high},         {"iterations", t.iterations}};
}

json encode(const EavesdropRecord& e) {
  return json{{"kind", "eavesdrop"},
              {"criterion", to_string(e.a_prime.criterion)},
              {"bound", e.a_prime.bound},
              {"r", e.r},
              {"eta", e.eta},
              {"a_prime", encode(e.a_prime)},
              {"eavesdropper", encode(e.eavesdropper)},
              {"monogamy_product", e.monogamy_product},
              {"monogamy_satisfied", e.monogamy_satisfied}};
}

json encode(const ShotEstimate& s) {
  return json{{"kind", "shots"},
              {"criterion", to_string(s.criterion)},
              {"group", s.partition.steering_group},
              {"target", s.partition.target_site},
              {"bound", s.bound},
              {"estimate", s.estimate},
              {"standard_error", s.standard_error},
              {"shots", s.shots},
              {"seed", s.seed}};
}

json encode(const CollectiveSteeringReport& c) {
  json subsets = json::array();
  for (const auto& v : c.subsets) subsets.push_back(encode(v));
  return json{{"kind", "collective"},
              {"criterion", to_string(c.full_group.criterion)},
              {"bound", c.full_group.bound},
              {"target", c.full_group.partition.target_site},
              {"collective", c.collective},
              {"full_group", encode(c.full_group)},
              {"subsets", subsets}};
}

json encode(const MonogamyRecord& m) {
  return json{{"kind", "monogamy"},        {"criterion", to_string(m.criterion)},
              {"bound", 1.0},              {"target", m.target},
              {"group_a", m.group_a},      {"group_c", m.group_c},
              {"value_a", m.value_a},      {"value_c", m.value_c},
              {"product", m.product},      {"satisfied", m.satisfied},
              {"exclusive", m.exclusive}};
}

json encode(const SecretSharingReport& s) {
  json targets = json::array();
  for (const auto& c : s.per_target) targets.push_back(encode(c));
  json mono = json::array();
  for (const auto& m : s.monogamy) mono.push_back(encode(m));
  return json{{"kind", "secret-sharing"},
              {"criterion", s.per_target.empty() ? std::string_view{} : to_string(s.per_target.front().full_group.criterion)},
              {"bound", 1.0},
              {"backend", to_string(s.backend)},
              {"n", s.n},
              {"r", s.r},
              {"all_collective", s.all_collective},
              {"min_subset_value", s.min_subset_value},
              {"per_target", targets},
              {"monogamy", mono}};
}

json encode(const PointResult& r) {
  return std::visit([](const auto& x) { return encode(x); }, r);
}

json encode(const SweepRecord& s) {
  json inner = encode(s.result);
  return json{{"kind", "sweep-point"},
              {"criterion", inner["criterion"]},
              {"bound", inner["bound"]},
              {"index", s.index},
              {"parameter", s.parameter},
              {"parameter_value", s.parameter_value},
              {"result", inner}};
}

// --- JSON decoding -------------------------------------------------------------

template <typename T>
T get(const json& j, const char* key) {
  if (!j.contains(key)) throw std::invalid_argument(std::string("missing field: ") + key);
  // nlohmann converts -1 to 2^64 - 1 without complaint
  if constexpr (std::is_unsigned_v<T> && !std::is_same_v<T, bool>)
    if (!j.at(key).is_number_unsigned()) throw std::invalid_argument(std::string("expected unsigned integer: ") + key);
  return j.at(key).get<T>();
}

template <typename T>
T get_or(const json& j, const char* key, T fallback) {
  return j.contains(key) ? get<T>(j, key) : fallback;
}

SteeringValue decode_steering(const json& j) {
  SteeringValue v;
  v.criterion = criterion_from_string(get<std::string>(j, "criterion"));
  v.partition.steering_group = get<std::vector<int>>(j, "group");
  v.partition.target_site = get<int>(j, "target");
  v.value = get<double>(j, "value");
  v.bound = get<double>(j, "bound");
  v.verdict = get<bool>(j, "verdict");
  v.method = get<std::string>(j, "method");
  return v;
}

std::vector<SteeringValue> decode_steering_list(const json& j) {
  std::vector<SteeringValue> out;
  for (const auto& e : j) out.push_back(decode_steering(e));
  return out;
}

CollectiveSteeringReport decode_collective(const json& j) {
  CollectiveSteeringReport c;
  c.full_group = decode_steering(j.at("full_group"));
  c.subsets = decode_steering_list(j.at("subsets"));
  c.collective = get<bool>(j, "collective");
  return c;
}

MonogamyRecord decode_monogamy(const json& j) {
  MonogamyRecord m;
  m.criterion = criterion_from_string(get<std::string>(j, "criterion"));
  m.target = get<int>(j, "target");
  m.group_a = get<std::vector<int>>(j, "group_a");
  m.group_c = get<std::vector<int>>(j, "group_c");
  m.value_a = get<double>(j, "value_a");
  m.value_c = get<double>(j, "value_c");
  m.product = get<double>(j, "product");
  m.satisfied = get<bool>(j, "satisfied");
  m.exclusive = get<bool>(j, "exclusive");
  return m;
}

Record decode(const json& j) {
  const auto kind = get<std::string>(j, "kind");
  if (kind == "steering") return decode_steering(j);
  if (kind == "genuine") {
    GenuineSteeringReport g;
    g.values = decode_steering_list(j.at("values"));
    g.sum = get<double>(j, "sum");
    g.genuine = get<bool>(j, "genuine");
    g.method_notes = get<std::string>(j, "method_notes");
    return g;
  }
  if (kind == "threshold") {
    ThresholdResult t;
    t.scenario = get<std::string>(j, "scenario");
    t.parameter = get<std::string>(j, "parameter");
    t.criterion = criterion_from_string(get<std::string>(j, "criterion"));
    t.bound = get<double>(j, "bound");
    t.critical = get<double>(j, "critical");
    t.low = get<double>(j, "low");
    t.high = get<double>(j, "high");
    t.iterations = get<int>(j, "iterations");
    return t;
  }
  if (kind == "eavesdrop") {
    EavesdropRecord e;
    e.r = get<double>(j, "r");
    e.eta = get<double>(j, "eta");
    e.a_prime = decode_steering(j.at("a_prime"));
    e.eavesdropper = decode_steering(j.at("eavesdropper"));
    e.monogamy_product = get<double>(j, "monogamy_product");
    e.monogamy_satisfied = get<bool>(j, "monogamy_satisfied");
    return e;
  }
  if (kind == "shots") {
    ShotEstimate s;
    s.criterion = criterion_from_string(get<std::string>(j, "criterion"));
    s.partition.steering_group = get<std::vector<int>>(j, "group");
    s.partition.target_site = get<int>(j, "target");
    s.bound = get<double>(j, "bound");
    s.estimate = get<double>(j, "estimate");
    s.standard_error = get<double>(j, "standard_error");
    s.shots = get<std::uint64_t>(j, "shots");
    s.seed = get<std::uint64_t>(j, "seed");
    return s;
  }
  if (kind == "collective") return decode_collective(j);
  if (kind == "monogamy") return decode_monogamy(j);
  if (kind == "secret-sharing") {
    SecretSharingReport s;
    s.backend = backend_from_string(get<std::string>(j, "backend"));
    s.n = get<int>(j, "n");
    s.r = get<double>(j, "r");
    s.all_collective = get<bool>(j, "all_collective");
    s.min_subset_value = get<double>(j, "min_subset_value");
    for (const auto& c : j.at("per_target")) s.per_target.push_back(decode_collective(c));
    for (const auto& m : j.at("monogamy")) s.monogamy.push_back(decode_monogamy(m));
    return s;
  }
  if (kind == "sweep-point") {
    SweepRecord s;
    s.index = get<std::size_t>(j, "index");
    s.parameter = get<std::string>(j, "parameter");
    s.parameter_value = get<double>(j, "parameter_value");
    Record inner = decode(j.at("result"));
    std::visit(
        [&](auto&& r) {
          using T = std::decay_t<decltype(r)>;
          if constexpr (std::is_constructible_v<PointResult, T>)
            s.result = std::move(r);
          else
            throw std::invalid_argument("sweep point holds an unsupported record");
        },
        inner);
    return s;
  }
  throw std::invalid_argument("unknown record kind: " + kind);
}

// --- CSV -----------------------------------------------------------------------

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string group_str(const std::vector<int>& g) {
  std::string s;
  for (int x : g) {
    if (!s.empty()) s += ' ';
    s += std::to_string(x);
  }
  return s;
}

std::string quote(std::string_view field) {
  if (field.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

struct CsvRow {
  std::string kind, criterion, group, target, parameter, parameter_value, value, bound, verdict, value_2, value_3,
      method;
};

class CsvWriter {
public:
  std::ostringstream out;
  std::string parameter;
  std::string parameter_value;

  void row(CsvRow r) {
    if (r.parameter.empty()) r.parameter = parameter;
    if (r.parameter_value.empty()) r.parameter_value = parameter_value;
    const std::string* fields[] = {&r.kind,  &r.criterion, &r.group,   &r.target,  &r.parameter, &r.parameter_value,
                                   &r.value, &r.bound,     &r.verdict, &r.value_2, &r.value_3,   &r.method};
    bool first = true;
    for (const auto* f : fields) {
      if (!first) out << ',';
      out << quote(*f);
      first = false;
    }
    out << '\n';
  }

  void write(const SteeringValue& v, std::string kind = "steering") {
    row({std::move(kind), std::string(to_string(v.criterion)), group_str(v.partition.steering_group),
         std::to_string(v.partition.target_site), "", "", num(v.value), num(v.bound), v.verdict ? "true" : "false",
         "", "", v.method});
  }

  void write(const GenuineSteeringReport& g) {
    for (const auto& v : g.values) write(v);
    row({"genuine", g.values.empty() ? "" : std::string(to_string(g.values.front().criterion)), "", "", "", "",
         num(g.sum), num(1.0), g.genuine ? "true" : "false", "", "", g.method_notes});
  }

  void write(const ThresholdResult& t) {
    row({"threshold", std::string(to_string(t.criterion)), "", "", t.parameter, num(t.critical), num(t.critical),
         num(t.bound), "", num(t.low), num(t.high), t.scenario});
  }

  void write(const EavesdropRecord& e) {
    const auto& a = e.a_prime;
    row({"eavesdrop", std::string(to_string(a.criterion)), group_str(a.partition.steering_group),
         std::to_string(a.partition.target_site), "eta", num(e.eta), num(a.value), num(a.bound),
         a.verdict ? "true" : "false", num(e.eavesdropper.value), num(e.monogamy_product), a.method});
  }

  void write(const ShotEstimate& s) {
    row({"shots", std::string(to_string(s.criterion)), group_str(s.partition.steering_group),
         std::to_string(s.partition.target_site), "", "", num(s.estimate), num(s.bound),
         s.estimate < s.bound ? "true" : "false", num(s.standard_error), std::to_string(s.shots),
         "seed " + std::to_string(s.seed)});
  }

  void write(const CollectiveSteeringReport& c) {
    double min_subset = c.subsets.empty() ? c.full_group.value : c.subsets.front().value;
    for (const auto& v : c.subsets) min_subset = std::min(min_subset, v.value);
    const auto& f = c.full_group;
    row({"collective", std::string(to_string(f.criterion)), group_str(f.partition.steering_group),
         std::to_string(f.partition.target_site), "", "", num(f.value), num(f.bound), c.collective ? "true" : "false",
         num(min_subset), "", f.method});
    for (const auto& v : c.subsets) write(v, "subset");
  }

  void write(const MonogamyRecord& m) {
    row({"monogamy", std::string(to_string(m.criterion)), group_str(m.group_a) + "|" + group_str(m.group_c),
         std::to_string(m.target), "", "", num(m.product), num(1.0), m.satisfied ? "true" : "false", num(m.value_a),
         num(m.value_c), m.exclusive ? "exclusive" : "both steer"});
  }

  void write(const SecretSharingReport& s) {
    for (const auto& c : s.per_target) write(c);
    for (const auto& m : s.monogamy) write(m);
  }

  void write(const SweepRecord& s) {
    parameter = s.parameter;
    parameter_value = num(s.parameter_value);
    std::visit([&](const auto& r) { write(r); }, s.result);
    parameter.clear();
    parameter_value.clear();
  }
};

} // namespace

std::string to_json_lines(const RunReport& report) {
  json params = json::object();
  for (const auto& [k, v] : report.parameters) std::visit([&](const auto& x) { params[k] = x; }, v);
  json head{{"kind", "run"},
            {"tool", "steerkit"},
            {"version", report.tool_version},
            {"scenario", report.scenario},
            {"parameters", params}};
  if (report.wall_time_s) head["wall_time_s"] = *report.wall_time_s;
  std::string out = head.dump() + '\n';
  for (const auto& r : report.records) out += std::visit([](const auto& x) { return encode(x); }, r).dump() + '\n';
  return out;
}

RunReport parse_json_lines(std::string_view text) {
  RunReport report;
  bool have_header = false;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    const std::string_view line = text.substr(0, nl);
    text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
    ++line_no;
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw std::invalid_argument("line " + std::to_string(line_no) + ": " + e.what());
    }
    try {
      if (!have_header) {
        if (get<std::string>(j, "kind") != "run") throw std::invalid_argument("first line must be the run header");
        report.tool_version = get<std::string>(j, "version");
        report.scenario = get<std::string>(j, "scenario");
        for (const auto& [k, v] : j.at("parameters").items()) {
          if (v.is_string())
            report.parameters[k] = v.get<std::string>();
          else if (v.is_number_unsigned())
            report.parameters[k] = v.get<std::uint64_t>();
          else if (v.is_number())
            report.parameters[k] = v.get<double>();
          else
            throw std::invalid_argument("parameter " + k + " has an unsupported type");
        }
        if (j.contains("wall_time_s")) report.wall_time_s = j.at("wall_time_s").get<double>();
        have_header = true;
      } else {
        report.records.push_back(decode(j));
      }
    } catch (const json::exception& e) {
      throw std::invalid_argument("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  if (!have_header) throw std::invalid_argument("empty report");
  return report;
}

SweepConfig parse_sweep_config(std::string_view text) {
  SweepConfig cfg;
  try {
    const json j = json::parse(text);
    if (!j.is_object()) throw std::invalid_argument("sweep config must be a JSON object");
    static const char* known[] = {"backend", "scenario", "parameter", "grid", "criterion",
                                  "policy",  "fixed",    "seed",      "shots"};
    for (const auto& [k, v] : j.items())
      if (std::find(std::begin(known), std::end(known), k) == std::end(known))
        throw std::invalid_argument("unknown sweep config key: " + k);
    cfg.scenario = get<std::string>(j, "scenario");
    cfg.parameter = get<std::string>(j, "parameter");
    cfg.backend = cfg.scenario == "ghz" ? Backend::Qubit : Backend::Cv;
    if (j.contains("backend")) cfg.backend = backend_from_string(j.at("backend").get<std::string>());
    const json& grid = j.at("grid");
    cfg.grid = grid.is_string() ? parse_grid(grid.get<std::string>()) : grid.get<std::vector<double>>();
    cfg.criterion = j.value("criterion", cfg.scenario == "ghz" ? std::string("two-obs") : std::string("eq6"));
    cfg.policy = j.value("policy", cfg.policy);
    if (j.contains("fixed")) cfg.fixed = j.at("fixed").get<std::map<std::string, double>>();
    cfg.seed = get_or(j, "seed", std::uint64_t{0});
    cfg.shots = get_or(j, "shots", std::uint64_t{0});
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("sweep config: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

std::string to_csv(const RunReport& report) {
  CsvWriter w;
  w.out << kCsvHeader << '\n';
  for (const auto& r : report.records) std::visit([&](const auto& x) { w.write(x); }, r);
  return w.out.str();
}

} // namespace steerkit
