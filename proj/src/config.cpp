// Copyright 2026 The ltwalk Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "ltwalk/config.hpp"

#include <fstream>
#include <initializer_list>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "ltwalk/error.hpp"
#include "ltwalk/format.hpp"

namespace ltw {
namespace {

// A YAML node plus the dotted path used in error messages.
class Field {
 public:
  Field(YAML::Node node, std::string path) : node_(std::move(node)), path_(std::move(path)) {}

  [[noreturn]] void fail(const std::string& message) const {
    throw Error(ErrorCode::kConfigParse, (path_.empty() ? "<root>" : path_) + ": " + message);
  }

  bool has(const char* key) const { return node_.IsMap() && node_[key].IsDefined() && !node_[key].IsNull(); }

  Field operator[](const char* key) const {
    if (!node_.IsMap()) fail("expected a mapping");
    return Field(node_[key], path_.empty() ? key : path_ + "." + key);
  }

  Field at(std::size_t i) const { return Field(node_[i], path_ + "[" + std::to_string(i) + "]"); }

  std::size_t size() const {
    if (!node_.IsSequence()) fail("expected a list");
    return node_.size();
  }

  void only(std::initializer_list<const char*> keys) const {
    if (!node_.IsMap()) fail("expected a mapping");
    for (const auto& kv : node_) {
      const auto k = kv.first.as<std::string>();
      bool known = false;
      for (const char* allowed : keys) known = known || k == allowed;
      if (!known) fail("unknown key '" + k + "'");
    }
  }

  template <class T>
  T as(const char* what) const {
    if (!node_.IsDefined() || node_.IsNull()) fail("missing " + std::string(what));
    try {
      return node_.as<T>();
    } catch (const YAML::Exception&) {
      fail("expected " + std::string(what));
    }
  }

  double real() const { return as<double>("a number"); }
  std::int64_t integer() const { return as<std::int64_t>("an integer"); }
  bool boolean() const { return as<bool>("true or false"); }
  std::string text() const { return as<std::string>("a string"); }

  Probability probability() const {
    try {
      return parse_probability(text());
    } catch (const Error& e) {
      fail(e.what());
    }
  }

  std::vector<double> reals() const {
    std::vector<double> out;
    for (std::size_t i = 0; i < size(); ++i) out.push_back(at(i).real());
    return out;
  }

  std::vector<std::int64_t> integers() const {
    std::vector<std::int64_t> out;
    for (std::size_t i = 0; i < size(); ++i) out.push_back(at(i).integer());
    return out;
  }

 private:
  YAML::Node node_;
  std::string path_;
};

StepDistribution parse_walk(const Field& w) {
  w.only({"preset", "dim", "p", "atoms"});
  const std::string name = w["preset"].text();
  const int dim = w.has("dim") ? static_cast<int>(w["dim"].integer()) : 1;
  std::optional<Probability> p;
  if (w.has("p")) p = w["p"].probability();
  std::vector<Atom> atoms;
  if (w.has("atoms")) {
    const Field list = w["atoms"];
    for (std::size_t i = 0; i < list.size(); ++i) {
      const Field a = list.at(i);
      a.only({"site", "prob"});
      Atom atom;
      atom.site = a["site"].integers();
      const Probability pr = a["prob"].probability();
      atom.prob = pr.value;
      atom.exact = pr.exact;
      atoms.push_back(std::move(atom));
    }
  }
  try {
    return preset(name, dim, p, std::move(atoms));
  } catch (const Error& e) {
    w.fail(e.what());
  }
}

Observable parse_observable(const Field& o, std::size_t index, std::vector<PendingExpCapped>& pending) {
  const std::string form = o["form"].text();
  try {
    if (form == "power") {
      o.only({"form", "alpha"});
      const double a = o["alpha"].real();
      if (!(a >= 0.0)) o["alpha"].fail("alpha must be >= 0, got " + format_double(a));
      return Observable::power(a);
    }
    if (form == "indicator") {
      o.only({"form", "members", "cofinite"});
      const bool cofinite = o.has("cofinite") && o["cofinite"].boolean();
      std::vector<std::int64_t> members;
      if (o.has("members")) members = o["members"].integers();
      return cofinite ? Observable::indicator_cofinite(std::move(members)) : Observable::indicator(std::move(members));
    }
    if (form == "visited") {
      o.only({"form"});
      return Observable::visited();
    }
    if (form == "table") {
      o.only({"form", "values", "tail"});
      TailRule tail = TailRule::kZero;
      if (o.has("tail")) {
        const std::string t = o["tail"].text();
        if (t == "zero") tail = TailRule::kZero;
        else if (t == "last") tail = TailRule::kLast;
        else if (t == "power") tail = TailRule::kPowerExtrapolation;
        else o["tail"].fail("tail must be zero, last or power");
      }
      return Observable::table(o["values"].reals(), tail);
    }
    if (form == "exp_capped") {
      o.only({"form", "c", "c_over_lambda", "p"});
      const double p = o["p"].real();
      if (o.has("c") == o.has("c_over_lambda")) o.fail("exp_capped needs exactly one of c, c_over_lambda");
      if (o.has("c")) return Observable::exp_capped(o["c"].real(), p);
      pending.push_back({index, o["c_over_lambda"].real(), p});
      return Observable::exp_capped(0.0, p);  // placeholder until gamma is known
    }
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kConfigParse) throw;
    o.fail(e.what());
  }
  o["form"].fail("unknown observable form '" + form + "'");
}

void parse_verify(const Field& v, ExperimentConfig& c) {
  v.only({"toggles", "variance", "maxlocal", "conditions", "subsequence", "truncation"});
  if (v.has("toggles")) {
    const Field t = v["toggles"];
    t.only({"slln", "variance", "maxlocal", "gamma", "conditions"});
    if (t.has("slln")) c.verify.slln = t["slln"].boolean();
    if (t.has("variance")) c.verify.variance = t["variance"].boolean();
    if (t.has("maxlocal")) c.verify.maxlocal = t["maxlocal"].boolean();
    if (t.has("gamma")) c.verify.gamma = t["gamma"].boolean();
    if (t.has("conditions")) c.verify.conditions = t["conditions"].boolean();
  }
  if (v.has("variance")) {
    const Field f = v["variance"];
    f.only({"split"});
    if (f.has("split")) c.variance_split = f["split"].boolean() ? VarianceSplit::kSplit : VarianceSplit::kRefuse;
  }
  if (v.has("maxlocal")) {
    const Field f = v["maxlocal"];
    f.only({"epsilon", "m", "t_grid", "max_violation"});
    if (f.has("epsilon")) c.maxlocal.epsilon = f["epsilon"].real();
    if (f.has("m")) c.maxlocal.m = static_cast<int>(f["m"].integer());
    if (f.has("t_grid")) c.maxlocal.t_grid = f["t_grid"].integers();
    if (f.has("max_violation")) c.maxlocal.max_violation = f["max_violation"].real();
    if (!(c.maxlocal.epsilon > 0.0)) f["epsilon"].fail("epsilon must be > 0");
    if (c.maxlocal.m < 0) f["m"].fail("m must be >= 0");
  }
  if (v.has("conditions")) {
    const Field f = v["conditions"];
    f.only({"mode", "eta", "grid"});
    if (f.has("mode")) {
      const std::string m = f["mode"].text();
      if (m == "log") c.conditions.mode.kind = ConditionMode::kLog;
      else if (m == "eta") c.conditions.mode.kind = ConditionMode::kEta;
      else f["mode"].fail("mode must be log or eta");
    }
    if (f.has("eta")) c.conditions.mode.eta = f["eta"].real();
    if (!(c.conditions.mode.eta > 0.0 && c.conditions.mode.eta < 1.0)) f["eta"].fail("eta must lie in (0, 1)");
    if (f.has("grid")) c.conditions.grid = f["grid"].integers();
  }
  if (v.has("subsequence")) {
    const Field f = v["subsequence"];
    f.only({"deltas", "count", "sequence"});
    if (f.has("deltas")) c.subsequence.deltas = f["deltas"].reals();
    if (f.has("count")) c.subsequence.count = static_cast<std::size_t>(f["count"].integer());
    if (f.has("sequence")) c.subsequence.sequence = f["sequence"].text();
  }
  if (v.has("truncation")) {
    const Field f = v["truncation"];
    f.only({"case", "eta", "observable"});
    if (f.has("case")) {
      const std::string k = f["case"].text();
      if (k == "i") c.truncation.which = TruncationCase::kI;
      else if (k == "ii") c.truncation.which = TruncationCase::kII;
      else f["case"].fail("case must be i or ii");
    }
    if (f.has("eta")) c.truncation.eta = f["eta"].real();
    if (f.has("observable")) {
      const auto idx = f["observable"].integer();
      if (idx < 0 || static_cast<std::size_t>(idx) >= c.observables.size()) {
        f["observable"].fail("index out of range");
      }
      c.truncation.observable = static_cast<std::size_t>(idx);
    }
  }
}

}  // namespace

ExperimentConfig parse_config(std::string_view yaml_text) {
  YAML::Node root;
  try {
    root = YAML::Load(std::string(yaml_text));
  } catch (const YAML::Exception& e) {
    throw Error(ErrorCode::kConfigParse, std::string("<yaml>: ") + e.what());
  }
  const Field r(root, "");
  if (!root.IsMap()) r.fail("config must be a mapping");
  r.only({"schema_version", "walk", "observables", "alphas", "replicas", "horizon", "checkpoints", "seed", "threads",
          "gamma", "exact", "memory_cap_mb", "exhaustive", "verify"});
  const auto version = r["schema_version"].integer();
  if (version != kSchemaVersion) {
    r["schema_version"].fail("unsupported version " + std::to_string(version) + " (expected " +
                             std::to_string(kSchemaVersion) + ")");
  }
  ExperimentConfig c(parse_walk(r["walk"]));

  if (r.has("observables")) {
    const Field list = r["observables"];
    for (std::size_t i = 0; i < list.size(); ++i) c.observables.push_back(parse_observable(list.at(i), i, c.pending));
  }
  if (r.has("alphas")) {
    const Field list = r["alphas"];
    for (std::size_t i = 0; i < list.size(); ++i) {
      const double a = list.at(i).real();
      if (!(a >= 0.0)) list.at(i).fail("alpha must be >= 0, got " + format_double(a));
      c.alphas.push_back(a);
    }
  }
  if (r.has("replicas")) {
    c.replicas = r["replicas"].integer();
    if (c.replicas < 1) r["replicas"].fail("replicas must be >= 1");
  }
  c.horizon = r["horizon"].integer();
  if (c.horizon < 1) r["horizon"].fail("horizon must be >= 1");
  if (r.has("checkpoints")) {
    const Field cp = r["checkpoints"];
    cp.only({"first", "ratio", "extra"});
    if (cp.has("first")) c.schedule.first = cp["first"].integer();
    if (cp.has("ratio")) c.schedule.ratio = cp["ratio"].real();
    if (cp.has("extra")) c.schedule.extra = cp["extra"].integers();
    if (c.schedule.first < 1) cp["first"].fail("first must be >= 1");
    if (!(c.schedule.ratio > 1.0)) cp["ratio"].fail("ratio must be > 1");
    if (c.horizon < c.schedule.first) r["horizon"].fail("horizon must be >= checkpoints.first");
  }
  if (r.has("seed")) c.seed = r["seed"].as<std::uint64_t>("an unsigned 64-bit integer");
  if (r.has("threads")) {
    const auto t = r["threads"].integer();
    if (t < 1) r["threads"].fail("threads must be >= 1");
    c.threads = static_cast<unsigned>(t);
  }
  if (r.has("gamma")) {
    const Field g = r["gamma"];
    g.only({"pin", "horizon", "allow_recurrent", "mc_horizon"});
    if (g.has("pin")) {
      const double pin = g["pin"].probability().value;
      if (!(pin > 0.0 && pin <= 1.0)) g["pin"].fail("pinned gamma must lie in (0, 1]");
      c.gamma_pin = pin;
    }
    if (g.has("horizon")) {
      const auto h = g["horizon"].integer();
      if (h < 2) g["horizon"].fail("horizon must be >= 2");
      c.gamma_horizon = static_cast<std::size_t>(h);
    }
    if (g.has("allow_recurrent")) c.allow_recurrent = g["allow_recurrent"].boolean();
    if (g.has("mc_horizon")) {
      c.gamma_mc_horizon = g["mc_horizon"].integer();
      if (c.gamma_mc_horizon < 1) g["mc_horizon"].fail("mc_horizon must be >= 1");
    }
  }
  if (r.has("exact")) {
    const Field e = r["exact"];
    e.only({"horizon"});
    const auto h = e["horizon"].integer();
    if (h < 0) e["horizon"].fail("horizon must be >= 0");
    c.exact_horizon = static_cast<std::size_t>(h);
  }
  if (r.has("memory_cap_mb")) {
    const auto mb = r["memory_cap_mb"].integer();
    if (mb < 1) r["memory_cap_mb"].fail("memory_cap_mb must be >= 1");
    c.memory_cap_bytes = static_cast<std::size_t>(mb) << 20;
  }
  if (r.has("exhaustive")) c.exhaustive = r["exhaustive"].boolean();
  if (r.has("verify")) parse_verify(r["verify"], c);
  return c;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ExperimentConfig load_config(const std::string& path) {
  std::string text;
  try {
    text = read_text_file(path);
  } catch (const Error& e) {
    throw Error(ErrorCode::kConfigParse, e.what());
  }
  return parse_config(text);
}

std::uint64_t config_digest(std::string_view text) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace ltw
