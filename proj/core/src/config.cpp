#include "csiaug/config.hpp"

#include <fstream>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "csiaug/error.hpp"

namespace csiaug {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Collects every schema problem before failing, so one run of the tool
// reports all offending fields.
class SchemaReader {
 public:
  std::vector<std::string> problems;

  void problem(const std::string& where, const std::string& what) { problems.push_back(where + ": " + what); }

  void expect_object(const json& j, const std::string& where, std::initializer_list<const char*> allowed) {
    if (!j.is_object()) {
      problem(where, "expected an object");
      return;
    }
    for (const auto& [key, _] : j.items()) {
      if (std::find_if(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; }) == allowed.end()) {
        problem(where + "." + key, "unknown field");
      }
    }
  }

  template <typename T>
  std::optional<T> get(const json& j, const char* key, const std::string& where) {
    if (!j.is_object() || !j.contains(key)) return std::nullopt;
    const auto& v = j.at(key);
    try {
      if constexpr (std::is_same_v<T, std::uint64_t> || std::is_same_v<T, std::size_t>) {
        if (!v.is_number_unsigned()) throw std::invalid_argument("expected a non-negative integer");
      } else if constexpr (std::is_integral_v<T> && !std::is_same_v<T, bool>) {
        if (!v.is_number_integer()) throw std::invalid_argument("expected an integer");
      } else if constexpr (std::is_floating_point_v<T>) {
        if (!v.is_number()) throw std::invalid_argument("expected a number");
      } else if constexpr (std::is_same_v<T, bool>) {
        if (!v.is_boolean()) throw std::invalid_argument("expected true or false");
      } else if constexpr (std::is_same_v<T, std::string>) {
        if (!v.is_string()) throw std::invalid_argument("expected a string");
      }
      return v.get<T>();
    } catch (const std::exception& e) {
      problem(where + "." + key, e.what());
      return std::nullopt;
    }
  }

  void finish(const char* what) const {
    if (problems.empty()) return;
    std::string msg = fmt::format("{} does not validate:", what);
    for (const auto& p : problems) msg += "\n  " + p;
    fail(ErrorKind::schema, msg);
  }
};

AugmentationSpec read_operator(SchemaReader& r, const json& j, const std::string& where) {
  AugmentationSpec op;
  if (j.is_string()) {
    if (auto k = parse_augment_kind(j.get<std::string>())) op.kind = *k;
    else r.problem(where, fmt::format("unknown operator '{}'", j.get<std::string>()));
    return op;
  }
  r.expect_object(j, where, {"kind", "gate_p", "lo", "hi"});
  if (auto kind = r.get<std::string>(j, "kind", where)) {
    if (auto k = parse_augment_kind(*kind)) op.kind = *k;
    else r.problem(where + ".kind", fmt::format("unknown operator '{}'", *kind));
  } else {
    r.problem(where + ".kind", "missing");
  }
  if (auto p = r.get<double>(j, "gate_p", where)) {
    op.gate_p = *p;
    if (!(*p >= 0.0 && *p <= 1.0)) r.problem(where + ".gate_p", "must lie in [0, 1]");
  }
  op.param_lo = r.get<double>(j, "lo", where);
  op.param_hi = r.get<double>(j, "hi", where);
  if (op.param_lo && op.param_hi && *op.param_lo > *op.param_hi) r.problem(where, "lo > hi");
  return op;
}

PipelineSpec read_pipeline(SchemaReader& r, const json& j, const std::string& where, bool* seed_set = nullptr) {
  PipelineSpec spec;
  r.expect_object(j, where, {"operators", "seed", "channel_mode", "compress_mode"});
  if (!j.is_object()) return spec;
  if (j.contains("operators")) {
    if (!j["operators"].is_array()) {
      r.problem(where + ".operators", "expected an array");
    } else {
      std::size_t i = 0;
      for (const auto& op : j["operators"]) {
        spec.operators.push_back(read_operator(r, op, fmt::format("{}.operators[{}]", where, i++)));
      }
    }
  }
  if (auto s = r.get<std::uint64_t>(j, "seed", where)) {
    spec.global_seed = *s;
    if (seed_set) *seed_set = true;
  }
  if (auto m = r.get<std::string>(j, "channel_mode", where)) {
    if (*m == "per_subcarrier") spec.channel_mode = ChannelMode::per_subcarrier;
    else if (*m == "whole_image") spec.channel_mode = ChannelMode::whole_image;
    else r.problem(where + ".channel_mode", "expected per_subcarrier or whole_image");
  }
  if (auto m = r.get<std::string>(j, "compress_mode", where)) {
    if (*m == "tile") spec.compress_mode = CompressMode::tile;
    else if (*m == "resample") spec.compress_mode = CompressMode::resample;
    else r.problem(where + ".compress_mode", "expected tile or resample");
  }
  try {
    spec.validate();
  } catch (const Error& e) {
    r.problem(where, e.what());
  }
  return spec;
}

ClassifierConfig read_classifier(SchemaReader& r, const json& j, const std::string& where) {
  ClassifierConfig c;
  r.expect_object(j, where, {"channels", "beta1", "beta2", "epsilon", "normalization"});
  if (j.is_object() && j.contains("channels")) {
    const auto& ch = j["channels"];
    if (!ch.is_array() || ch.size() != 3 ||
        !std::all_of(ch.begin(), ch.end(), [](const json& v) { return v.is_number_unsigned() && v.get<std::size_t>() > 0; })) {
      r.problem(where + ".channels", "expected three positive integers");
    } else {
      for (std::size_t i = 0; i < 3; ++i) c.channels[i] = ch[i].get<std::size_t>();
    }
  }
  if (auto v = r.get<double>(j, "beta1", where)) c.beta1 = *v;
  if (auto v = r.get<double>(j, "beta2", where)) c.beta2 = *v;
  if (auto v = r.get<double>(j, "epsilon", where)) c.epsilon = *v;
  if (auto v = r.get<std::string>(j, "normalization", where)) {
    if (*v == "none") c.normalization = InputNormalization::none;
    else if (*v == "peak") c.normalization = InputNormalization::peak;
    else r.problem(where + ".normalization", "expected none or peak");
  }
  return c;
}

ExperimentSpec read_experiment(SchemaReader& r, const json& j, const std::string& where, bool* seed_set = nullptr) {
  ExperimentSpec e;
  r.expect_object(j, where, {"train_subset", "eval_subsets", "arms", "runs", "epochs", "lr", "batch", "classifier", "seed", "split"});
  if (!j.is_object()) return e;
  if (auto v = r.get<std::string>(j, "train_subset", where)) e.train_subset = *v;
  else r.problem(where + ".train_subset", "missing");
  if (j.contains("eval_subsets")) {
    const auto& ev = j["eval_subsets"];
    if (!ev.is_array() || !std::all_of(ev.begin(), ev.end(), [](const json& v) { return v.is_string(); }) || ev.empty()) {
      r.problem(where + ".eval_subsets", "expected a non-empty array of subset names");
    } else {
      e.eval_subsets = ev.get<std::vector<std::string>>();
    }
  } else {
    r.problem(where + ".eval_subsets", "missing");
  }
  if (j.contains("arms")) {
    if (!j["arms"].is_array()) {
      r.problem(where + ".arms", "expected an array");
    } else {
      std::size_t i = 0;
      for (const auto& a : j["arms"]) {
        const auto aw = fmt::format("{}.arms[{}]", where, i++);
        ExperimentArm arm;
        if (a.is_string()) {
          arm.name = a.get<std::string>();
          if (arm.name != kBaselineArm) {
            if (auto k = parse_augment_kind(arm.name)) arm.pipeline = PipelineSpec::of({*k}, 0);
            else r.problem(aw, fmt::format("unknown arm shorthand '{}'", arm.name));
          }
        } else {
          r.expect_object(a, aw, {"name", "pipeline"});
          if (auto n = r.get<std::string>(a, "name", aw)) arm.name = *n;
          else r.problem(aw + ".name", "missing");
          if (a.is_object() && a.contains("pipeline")) arm.pipeline = read_pipeline(r, a["pipeline"], aw + ".pipeline");
        }
        e.arms.push_back(std::move(arm));
      }
    }
  } else {
    r.problem(where + ".arms", "missing");
  }
  if (auto v = r.get<std::size_t>(j, "runs", where)) e.runs = *v;
  if (auto v = r.get<std::size_t>(j, "epochs", where)) e.epochs = *v;
  if (auto v = r.get<double>(j, "lr", where)) e.learning_rate = *v;
  if (auto v = r.get<std::size_t>(j, "batch", where)) e.batch = *v;
  if (auto v = r.get<std::uint64_t>(j, "seed", where)) {
    e.seed = *v;
    if (seed_set) *seed_set = true;
  }
  if (j.contains("classifier")) e.classifier = read_classifier(r, j["classifier"], where + ".classifier");
  if (j.contains("split")) {
    const auto& s = j["split"];
    const auto sw = where + ".split";
    r.expect_object(s, sw, {"train_fraction", "stratified", "seed"});
    if (auto v = r.get<double>(s, "train_fraction", sw)) e.split.train_fraction = *v;
    if (auto v = r.get<bool>(s, "stratified", sw)) e.split.stratified = *v;
    if (auto v = r.get<std::uint64_t>(s, "seed", sw)) e.split.seed = *v;
  }
  const auto before = r.problems.size();
  if (before == 0) {
    try {
      e.validate();
    } catch (const Error& err) {
      r.problems.push_back(err.what());
    }
  }
  return e;
}

ColumnMapping read_mapping(SchemaReader& r, const json& j, const std::string& where) {
  ColumnMapping m;
  r.expect_object(j, where, {"delimiter", "header", "columns", "iq_order"});
  if (!j.is_object()) return m;
  if (auto d = r.get<std::string>(j, "delimiter", where)) {
    if (d->size() != 1) r.problem(where + ".delimiter", "must be a single character");
    else m.delimiter = (*d)[0];
  }
  if (auto h = r.get<bool>(j, "header", where)) m.header = *h;
  if (auto o = r.get<std::string>(j, "iq_order", where)) {
    if (*o == "imag_real") m.order = IqOrder::imag_real;
    else if (*o == "real_imag") m.order = IqOrder::real_imag;
    else r.problem(where + ".iq_order", "expected imag_real or real_imag");
  }
  if (j.contains("columns")) {
    const auto& c = j["columns"];
    const auto cw = where + ".columns";
    r.expect_object(c, cw, {"seq", "timestamp", "rssi", "csi"});
    auto column = [&](const char* key, std::size_t& index, std::optional<std::string>& name) {
      if (!c.is_object() || !c.contains(key)) return;
      const auto& v = c[key];
      if (v.is_number_unsigned()) {
        index = v.get<std::size_t>();
      } else if (v.is_string()) {
        name = v.get<std::string>();
        if (!m.header) r.problem(cw + "." + key, "named columns need \"header\": true");
      } else {
        r.problem(cw + "." + key, "expected a column index or header name");
      }
    };
    column("seq", m.seq, m.column_names.seq);
    column("timestamp", m.timestamp, m.column_names.timestamp);
    column("csi", m.csi, m.column_names.csi);
    if (c.is_object() && c.contains("rssi")) {
      if (c["rssi"].is_null()) {
        m.rssi.reset();
      } else {
        std::size_t idx = 0;
        column("rssi", idx, m.column_names.rssi);
        m.rssi = idx;
      }
    }
  }
  return m;
}

IngestConfig read_ingest(SchemaReader& r, const json& j, const std::string& where, const fs::path& base) {
  IngestConfig in;
  r.expect_object(j, where, {"mapping", "selection", "window", "hop", "rate_hz", "subset", "scenario", "system", "logs"});
  if (!j.is_object()) return in;
  if (j.contains("mapping")) in.mapping = read_mapping(r, j["mapping"], where + ".mapping");
  if (j.contains("selection")) {
    const auto& s = j["selection"];
    if (s.is_string()) {
      if (auto p = SubcarrierSelection::preset(s.get<std::string>())) in.selection = *p;
      else r.problem(where + ".selection", fmt::format("unknown preset '{}'", s.get<std::string>()));
    } else if (s.is_object() && s.contains("indices") && s["indices"].is_array()) {
      try {
        in.selection.name = s.value("name", std::string("custom"));
        in.selection.indices = s["indices"].get<std::vector<std::size_t>>();
        in.selection.validate(std::numeric_limits<std::size_t>::max());
      } catch (const std::exception& e) {
        r.problem(where + ".selection", e.what());
      }
    } else {
      r.problem(where + ".selection", "expected a preset name or {name, indices}");
    }
  }
  if (auto v = r.get<std::size_t>(j, "window", where)) in.window = *v;
  if (auto v = r.get<std::size_t>(j, "hop", where)) in.hop = *v;
  if (in.window < 1) r.problem(where + ".window", "must be >= 1");
  if (in.hop < 1) r.problem(where + ".hop", "must be >= 1");
  if (auto v = r.get<double>(j, "rate_hz", where)) in.rate_hz = *v;
  if (auto v = r.get<std::string>(j, "subset", where)) in.subset = *v;
  if (auto v = r.get<std::string>(j, "scenario", where)) {
    if (auto s = parse_scenario(*v)) in.scenario = *s;
    else r.problem(where + ".scenario", "expected LOS or NLOS");
  }
  if (auto v = r.get<std::string>(j, "system", where)) {
    if (auto s = parse_system(*v)) in.system = *s;
    else r.problem(where + ".system", "expected PIFA or BQ");
  }
  if (j.contains("logs")) {
    if (!j["logs"].is_array()) {
      r.problem(where + ".logs", "expected an array");
    } else {
      std::size_t i = 0;
      for (const auto& l : j["logs"]) {
        const auto lw = fmt::format("{}.logs[{}]", where, i++);
        r.expect_object(l, lw, {"path", "label", "scenario", "system", "zone", "trim"});
        LogSource src;
        src.scenario = in.scenario;
        src.system = in.system;
        if (auto p = r.get<std::string>(l, "path", lw)) src.path = base / *p;
        else r.problem(lw + ".path", "missing");
        if (auto v = r.get<int>(l, "label", lw)) {
          src.label = *v;
          if (*v < -1 || *v > 2) r.problem(lw + ".label", "expected -1, 0, 1 or 2");
        }
        if (auto v = r.get<std::string>(l, "scenario", lw)) {
          if (auto s = parse_scenario(*v)) src.scenario = *s;
          else r.problem(lw + ".scenario", "expected LOS or NLOS");
        }
        if (auto v = r.get<std::string>(l, "system", lw)) {
          if (auto s = parse_system(*v)) src.system = *s;
          else r.problem(lw + ".system", "expected PIFA or BQ");
        }
        if (auto v = r.get<int>(l, "zone", lw)) {
          if (*v < 1 || *v > 5) r.problem(lw + ".zone", "expected 1..5");
          src.zone = *v;
        }
        if (l.is_object() && l.contains("trim")) {
          const auto& t = l["trim"];
          if (!t.is_array() || t.size() != 2 || !t[0].is_number_unsigned() || !t[1].is_number_unsigned() ||
              t[0].get<std::size_t>() >= t[1].get<std::size_t>()) {
            r.problem(lw + ".trim", "expected [start, end) with start < end");
          } else {
            src.trim = std::pair{t[0].get<std::size_t>(), t[1].get<std::size_t>()};
          }
        }
        in.logs.push_back(std::move(src));
      }
    }
  }
  return in;
}

}  // namespace

PipelineSpec pipeline_from_json(const json& j) {
  SchemaReader r;
  auto spec = read_pipeline(r, j, "pipeline");
  r.finish("pipeline");
  return spec;
}

ExperimentSpec experiment_from_json(const json& j) {
  SchemaReader r;
  auto spec = read_experiment(r, j, "experiment");
  r.finish("experiment");
  return spec;
}

json to_json(const PipelineSpec& spec) {
  json ops = json::array();
  for (const auto& op : spec.operators) {
    json o{{"kind", to_string(op.kind)}, {"gate_p", op.gate_p}};
    if (op.param_lo) o["lo"] = *op.param_lo;
    if (op.param_hi) o["hi"] = *op.param_hi;
    ops.push_back(std::move(o));
  }
  return json{{"operators", std::move(ops)},
              {"seed", spec.global_seed},
              {"channel_mode", spec.channel_mode == ChannelMode::per_subcarrier ? "per_subcarrier" : "whole_image"},
              {"compress_mode", spec.compress_mode == CompressMode::tile ? "tile" : "resample"}};
}

RunConfig RunConfig::from_json(const json& j, const fs::path& base_dir) {
  SchemaReader r;
  RunConfig cfg;
  r.expect_object(j, "config", {"seed", "output_dir", "ingest", "pipeline", "datasets", "experiment"});
  if (!j.is_object()) r.finish("config");
  cfg.seed = r.get<std::uint64_t>(j, "seed", "config");
  if (auto o = r.get<std::string>(j, "output_dir", "config")) cfg.output_dir = base_dir / *o;
  else cfg.output_dir = base_dir / "out";
  if (j.contains("ingest")) cfg.ingest = read_ingest(r, j["ingest"], "ingest", base_dir);
  if (j.contains("pipeline")) cfg.pipeline = read_pipeline(r, j["pipeline"], "pipeline", &cfg.pipeline_seed_set);
  if (j.contains("datasets")) {
    const auto& d = j["datasets"];
    if (!d.is_object()) {
      r.problem("datasets", "expected an object of subset name -> manifest path");
    } else {
      for (const auto& [name, path] : d.items()) {
        if (!path.is_string()) r.problem("datasets." + name, "expected a manifest path");
        else cfg.datasets[name] = base_dir / path.get<std::string>();
      }
    }
  }
  if (j.contains("experiment")) {
    cfg.experiment = read_experiment(r, j["experiment"], "experiment", &cfg.experiment_seed_set);
  }
  r.finish("config");
  return cfg;
}

RunConfig RunConfig::load(const fs::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::io, fmt::format("cannot open config {}", path.string()));
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    fail(ErrorKind::schema, fmt::format("{}: invalid JSON: {}", path.string(), e.what()));
  }
  return from_json(j, path.parent_path());
}

void RunConfig::resolve_seed(std::optional<std::uint64_t> override_seed) {
  if (override_seed) seed = override_seed;
  if (!seed) fail(ErrorKind::schema, "config: no seed (set \"seed\" or pass --seed)");
  if (!pipeline_seed_set) pipeline.global_seed = *seed;
  if (experiment && !experiment_seed_set) experiment->seed = *seed;
  if (experiment) {
    // The validation split is a property of the experiment, not of a run.
    if (experiment->split.seed == 0) experiment->split.seed = derive_seed(experiment->seed, {tag_key("split")});
  }
}

void RunConfig::validate_paths() const {
  std::vector<std::string> problems;
  for (const auto& l : ingest.logs) {
    if (!fs::exists(l.path)) problems.push_back(fmt::format("ingest.logs: {} does not exist", l.path.string()));
  }
  for (const auto& [name, path] : datasets) {
    if (!fs::exists(path)) problems.push_back(fmt::format("datasets.{}: {} does not exist", name, path.string()));
  }
  if (experiment) {
    auto check = [&](const std::string& subset, const char* field) {
      if (!datasets.contains(subset)) {
        problems.push_back(fmt::format("experiment.{}: subset \"{}\" has no entry in datasets", field, subset));
      }
    };
    check(experiment->train_subset, "train_subset");
    for (const auto& s : experiment->eval_subsets) check(s, "eval_subsets");
  }
  if (!problems.empty()) {
    std::string msg = "config paths do not validate:";
    for (const auto& p : problems) msg += "\n  " + p;
    fail(ErrorKind::schema, msg);
  }
}

}  // namespace csiaug
