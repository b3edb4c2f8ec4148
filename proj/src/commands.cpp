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

#include "ltwalk/commands.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "ltwalk/bounds.hpp"
#include "ltwalk/config.hpp"
#include "ltwalk/csv.hpp"
#include "ltwalk/error.hpp"
#include "ltwalk/exact_q.hpp"
#include "ltwalk/experiments.hpp"
#include "ltwalk/format.hpp"

namespace ltw {
namespace {

std::string iso_time(std::chrono::system_clock::time_point t) {
  const std::time_t tt = std::chrono::system_clock::to_time_t(t);
  std::tm tm{};
  gmtime_r(&tt, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

std::string hex64(std::uint64_t v) {
  std::ostringstream os;
  os << "0x" << std::hex << std::setw(16) << std::setfill('0') << v;
  return os.str();
}

// Config, overrides and bookkeeping shared by every command.
class Session {
 public:
  Session(std::string command, const std::string& config_path, const RunOptions& options)
      : command_(std::move(command)),
        config_path_(config_path),
        options_(options),
        started_(std::chrono::system_clock::now()),
        wall_start_(std::chrono::steady_clock::now()),
        config_(load(config_path)) {
    if (options.seed) config_.seed = *options.seed;
    if (options.threads) {
      if (*options.threads < 1) throw Error(ErrorCode::kInvalidArgument, "--threads must be >= 1");
      config_.threads = *options.threads;
    }
    if (options.mem_cap_mb) config_.memory_cap_bytes = *options.mem_cap_mb << 20;
    std::error_code ec;
    std::filesystem::create_directories(options.out_dir, ec);
    if (ec) throw Error(ErrorCode::kIo, "cannot create " + options.out_dir + ": " + ec.message());
  }

  ExperimentConfig& config() { return config_; }

  void write(const CsvTable& table, const std::string& name) {
    table.write((std::filesystem::path(options_.out_dir) / name).string());
    outputs_.push_back(name);
  }

  void log(const std::string& line) const {
    if (options_.log) *options_.log << line << '\n';
  }

  CommandResult finish(bool all_hold, nlohmann::json extra = nlohmann::json::object()) {
    const auto wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - wall_start_).count();
    nlohmann::json m;
    m["tool"] = "ltwalk";
    m["version"] = kToolVersion;
    m["command"] = command_;
    m["schema_version"] = kSchemaVersion;
    m["config_path"] = config_path_;
    m["config_digest"] = hex64(digest_);
    m["seed"] = config_.seed;
    m["threads"] = config_.threads;
    m["started_at"] = iso_time(started_);
    m["finished_at"] = iso_time(std::chrono::system_clock::now());
    m["wall_seconds"] = wall;
    m["outputs"] = outputs_;
    m["all_hold"] = all_hold;
    for (auto& [k, v] : extra.items()) m[k] = v;
    const std::string name = command_ + ".manifest.json";
    const auto path = (std::filesystem::path(options_.out_dir) / name).string();
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw Error(ErrorCode::kIo, "cannot write " + path);
    f << m.dump(2) << '\n';
    CommandResult r;
    r.all_hold = all_hold;
    r.outputs = outputs_;
    r.outputs.push_back(name);
    return r;
  }

 private:
  ExperimentConfig load(const std::string& path) {
    std::string text;
    try {
      text = read_text_file(path);
    } catch (const Error& e) {
      throw Error(ErrorCode::kConfigParse, e.what());
    }
    digest_ = config_digest(text);
    return parse_config(text);
  }

  std::string command_;
  std::string config_path_;
  RunOptions options_;
  std::chrono::system_clock::time_point started_;
  std::chrono::steady_clock::time_point wall_start_;
  std::uint64_t digest_ = 0;
  ExperimentConfig config_;
  std::vector<std::string> outputs_;
};

SeriesOptions series_options(const ExperimentConfig& c) {
  SeriesOptions o;
  o.memory_cap_bytes = c.memory_cap_bytes;
  return o;
}

void resolve_pending(Session& s) {
  auto& c = s.config();
  if (c.pending.empty()) return;
  const auto g = resolve_gamma(c);
  resolve_pending_observables(c, g.gamma);
}

CsvTable certificate_table() {
  return CsvTable({"suite", "certificate", "x", "value", "reference", "holds", "note"});
}

bool add_certificate(CsvTable& t, const std::string& suite, const BoundCertificate& cert, const Session& s) {
  for (const auto& e : cert.evidence) {
    t.row().add(suite).add(cert.name).add(e.x).add(e.value).add(e.reference).add(e.holds).add(e.note);
  }
  std::string params;
  for (const auto& [k, v] : cert.parameters) params += " " + k + "=" + format_double(v);
  s.log(suite + " " + cert.name + ": " + to_string(cert.verdict) + params + " (" + cert.detail + ")");
  return cert.verdict == Verdict::kHolds;
}

bool suite_slln(Session& s, CsvTable& certs) {
  const auto report = run_slln(s.config());
  CsvTable t({"channel", "n", "replicas", "mean", "variance", "exact_mean", "limit", "z", "l2_distance", "cross_check"});
  for (const auto& r : report.rows) {
    t.row().add(r.channel).add(r.n).add(r.replicas).add(r.mean).add(r.variance).add(r.exact_mean).add(r.limit);
    t.add(r.z).add(r.l2_distance).add(r.cross_check);
  }
  s.write(t, "slln_report.csv");
  return add_certificate(certs, "slln", certify_slln(report), s);
}

bool suite_variance(Session& s, CsvTable& certs) {
  resolve_pending(s);
  std::vector<Observable> fs = s.config().observables;
  if (fs.empty()) fs.push_back(Observable::visited());
  bool ok = true;
  for (const auto& f : fs) ok = add_certificate(certs, "variance", verify_variance(s.config(), f), s) && ok;
  return ok;
}

bool suite_maxlocal(Session& s, CsvTable& certs) {
  const auto report = run_maxlocal(s.config());
  CsvTable tail({"n", "t", "empirical", "bound", "slack", "holds"});
  for (const auto& r : report.tail_rows) tail.row().add(r.n).add(r.t).add(r.empirical).add(r.bound).add(r.slack).add(r.holds);
  s.write(tail, "maxlocal_tail.csv");
  CsvTable cps({"n", "min_lmax", "max_lmax", "mean_lmax", "mean_lmax_over_log_n", "inverse_lambda_star",
                "proposition_bound", "violation_fraction"});
  for (const auto& c : report.checkpoints) {
    cps.row().add(c.n).add(c.min_lmax).add(c.max_lmax).add(c.mean_lmax).add(c.mean_over_log_n);
    cps.add(1.0 / report.lambda).add(c.proposition_bound).add(c.violation_fraction);
  }
  s.write(cps, "maxlocal_checkpoints.csv");
  return add_certificate(certs, "maxlocal", certify_maxlocal(report, s.config().maxlocal), s);
}

bool suite_conditions(Session& s, CsvTable& certs) {
  const auto& c = s.config();
  auto grid = c.conditions.grid.empty() ? default_condition_grid() : c.conditions.grid;
  std::int64_t top = 0;
  for (auto n : grid) top = std::max(top, n);
  const auto u = compute_u_series(c.dist, static_cast<std::size_t>(top), series_options(c));
  return add_certificate(certs, "conditions", condition_check(u, c.conditions.mode, grid), s);
}

bool suite_subsequence(Session& s, CsvTable& certs) {
  const auto& c = s.config();
  const Sequence seq = named_sequence(c.subsequence.sequence);
  CsvTable t({"delta", "r", "block_lo", "block_hi", "n_r", "v", "partial_sum", "evidence"});
  bool ok = true;
  for (double delta : c.subsequence.deltas) {
    const auto plan = build_subsequence(seq, delta, c.subsequence.count);
    for (std::size_t r = 0; r < plan.n_r.size(); ++r) {
      t.row().add(delta).add(r + 1).add(plan.blocks[r].first).add(plan.blocks[r].second).add(plan.n_r[r]);
      t.add(plan.v_at[r]).add(plan.partial_sums[r]).add(plan.evidence);
    }
    ok = add_certificate(certs, "subsequence", certify_subsequence(plan), s) && ok;
  }
  s.write(t, "subsequence.csv");
  return ok;
}

bool suite_gamma(Session& s, CsvTable& certs) {
  auto c = s.config();
  c.gamma_pin.reset();
  const auto series = resolve_gamma(c);
  const auto mc = estimate_gamma_mc(c, c.gamma_mc_horizon);
  BoundCertificate cert;
  cert.name = "gamma";
  cert.parameters = {{"series_estimate", series.gamma},
                     {"series_error", series.error_bound},
                     {"mc_estimate", mc.gamma_hat},
                     {"mc_lower", mc.ci.lower},
                     {"mc_upper", mc.ci.upper}};
  Evidence e;
  e.x = static_cast<double>(mc.horizon);
  e.value = series.gamma;
  e.reference = mc.gamma_hat;
  e.holds = series.gamma + series.error_bound >= mc.ci.lower && series.gamma - series.error_bound <= mc.ci.upper;
  e.note = "series estimate inside MC 95% CI [" + format_double(mc.ci.lower) + ", " + format_double(mc.ci.upper) +
           "]; MC targets gamma_n >= gamma";
  cert.evidence.push_back(e);
  cert.verdict = cert.replay();
  cert.detail = to_string(series.flag);
  return add_certificate(certs, "gamma", cert, s);
}

bool suite_truncation(Session& s, CsvTable& certs) {
  auto& c = s.config();
  const auto g = resolve_gamma(c);
  require_transient(g, c.allow_recurrent);
  resolve_pending_observables(c, g.gamma);
  const Observable f = c.truncation.observable ? c.observables.at(*c.truncation.observable)
                                               : Observable::exp_capped(lambda_star(g.gamma), 2.5);
  const auto report = run_truncation_split(c, f, c.truncation.which, g.gamma);
  CsvTable t({"replica", "n", "cut1", "cut2", "total", "head", "middle", "remainder", "l_max"});
  for (const auto& r : report.rows) {
    t.row().add(r.replica).add(r.n).add(r.cut1).add(r.cut2).add(r.total).add(r.head).add(r.middle);
    t.add(r.remainder).add(r.l_max);
  }
  s.write(t, "truncation.csv");
  return add_certificate(certs, "truncation", certify_truncation(report), s);
}

}  // namespace

CommandResult cmd_simulate(const std::string& config_path, const RunOptions& options) {
  Session s("simulate", config_path, options);
  resolve_pending(s);
  const auto& c = s.config();
  const auto checkpoints = c.schedule.points(c.horizon);
  const auto traces = simulate_replicas(c, c.observables, c.alphas, checkpoints);
  std::vector<std::string> header{"replica", "n", "range", "l_max"};
  for (const auto& f : c.observables) header.push_back("G[" + f.label() + "]/n");
  for (double a : c.alphas) header.push_back("L[" + format_double(a) + "]/n");
  CsvTable t(header);
  for (std::size_t r = 0; r < traces.size(); ++r) {
    for (const auto& cp : traces[r].checkpoints) {
      const double n = static_cast<double>(cp.n);
      t.row().add(r).add(cp.n).add(cp.range).add(cp.l_max);
      for (double g : cp.g) t.add(g / n);
      for (double l : cp.l) t.add(l / n);
    }
  }
  s.write(t, "simulate.csv");
  s.log("simulate: " + std::to_string(t.rows()) + " rows");
  return s.finish(true, {{"rows", t.rows()}});
}

CommandResult cmd_exact(const std::string& config_path, const RunOptions& options) {
  Session s("exact", config_path, options);
  auto& c = s.config();
  const std::size_t horizon = std::max(c.gamma_horizon, c.exact_horizon);
  const auto series = make_return_series(c.dist, horizon, series_options(c));
  const auto running = running_gamma_estimate(series.u, tail_model(c.dist));

  CsvTable rs({"n", "u", "f_tau", "gamma_n", "gamma_upper", "gamma_estimate"});
  double u_sum = 0.0;
  for (std::size_t n = 0; n <= horizon; ++n) {
    u_sum += series.u[n];
    const double est = n == horizon ? series.gamma.gamma_estimate : running[n];
    rs.row().add(n).add(series.u[n]).add(series.f_tau[n]).add(series.gamma.gamma_n[n]);
    rs.add(std::min(series.gamma.gamma_n[n], 1.0 / u_sum)).add(est);
  }
  s.write(rs, "return_series.csv");

  CsvTable summary({"quantity", "value"});
  summary.row().add("horizon").add(horizon);
  summary.row().add("gamma_N").add(series.gamma.gamma_n[horizon]);
  summary.row().add("gamma_upper").add(series.gamma.gamma_upper);
  summary.row().add("gamma_estimate").add(series.gamma.gamma_estimate);
  summary.row().add("error_bound").add(series.gamma.error_bound);
  summary.row().add("u_tail").add(series.gamma.u_tail);
  summary.row().add("period").add(series.gamma.period);
  summary.row().add("flag").add(to_string(series.gamma.flag));
  s.write(summary, "gamma_summary.csv");

  const std::size_t qh = std::min(c.exact_horizon, horizon);
  const ExactQTable table(series.f_tau, series.gamma.gamma_n, qh);
  CsvTable eq({"n", "j", "EQ"});
  for (std::size_t n = 0; n <= qh; ++n) {
    for (std::size_t j = 1; j <= table.j_max(); ++j) {
      const double v = table.expected_Q(n, j);
      if (v != 0.0) eq.row().add(n).add(j).add(v);
    }
  }
  s.write(eq, "exact_q.csv");

  double gamma = series.gamma.gamma_estimate;
  if (c.gamma_pin) gamma = *c.gamma_pin;
  if (series.gamma.flag == TransienceFlag::kTrivialTransient) gamma = 1.0;
  if (!c.pending.empty() && gamma > 0.0 && gamma < 1.0) resolve_pending_observables(c, gamma);
  std::vector<Observable> fs = c.observables;
  for (double a : c.alphas) fs.push_back(Observable::power(a));
  const double tol = 1e-12;
  CsvTable limits({"observable", "gamma", "limit", "tol", "growth_class"});
  for (std::size_t i = 0; i < fs.size(); ++i) {
    bool pending = false;
    for (const auto& p : c.pending) pending = pending || p.index == i;
    limits.row().add(fs[i].label()).add(gamma);
    if (pending || !(gamma > 0.0)) {
      limits.add("n/a").add(tol).add("n/a");
      continue;
    }
    try {
      limits.add(limit_constant(fs[i], gamma, tol));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kSeriesDivergent) throw;
      limits.add("divergent");
    }
    limits.add(tol).add(gamma < 1.0 ? to_string(check_condition_f(fs[i], gamma)) : std::string("n/a"));
  }
  s.write(limits, "limits.csv");
  s.log("exact: gamma_estimate=" + format_double(series.gamma.gamma_estimate) + " +- " +
        format_double(series.gamma.error_bound) + " (" + to_string(series.gamma.flag) + ")");
  return s.finish(true, {{"gamma_estimate", series.gamma.gamma_estimate}, {"flag", to_string(series.gamma.flag)}});
}

CommandResult cmd_verify(const std::string& config_path, const std::string& suite, const RunOptions& options) {
  static const std::vector<std::string> kSuites{"slln",  "variance",   "maxlocal", "conditions",
                                                "subsequence", "gamma", "truncation", "all"};
  if (std::find(kSuites.begin(), kSuites.end(), suite) == kSuites.end()) {
    throw Error(ErrorCode::kInvalidArgument, "unknown suite '" + suite + "'");
  }
  Session s("verify", config_path, options);
  CsvTable certs = certificate_table();
  bool ok = true;
  auto run = [&](const std::string& name) {
    if (name == "slln") ok = suite_slln(s, certs) && ok;
    if (name == "variance") ok = suite_variance(s, certs) && ok;
    if (name == "maxlocal") ok = suite_maxlocal(s, certs) && ok;
    if (name == "conditions") ok = suite_conditions(s, certs) && ok;
    if (name == "subsequence") ok = suite_subsequence(s, certs) && ok;
    if (name == "gamma") ok = suite_gamma(s, certs) && ok;
    if (name == "truncation") ok = suite_truncation(s, certs) && ok;
  };
  if (suite == "all") {
    const auto& t = s.config().verify;
    if (t.slln) run("slln");
    if (t.variance) run("variance");
    if (t.maxlocal) run("maxlocal");
    if (t.gamma) run("gamma");
    if (t.conditions) run("conditions");
  } else {
    run(suite);
  }
  s.write(certs, "certificates_" + suite + ".csv");
  s.log(std::string("verify ") + suite + ": " + (ok ? "all Holds" : "Fails"));
  return s.finish(ok, {{"suite", suite}});
}

CommandResult cmd_gamma(const std::string& config_path, const RunOptions& options) {
  Session s("gamma", config_path, options);
  auto c = s.config();
  c.gamma_pin.reset();
  const auto series = resolve_gamma(c);
  CsvTable t({"method", "horizon", "estimate", "lower", "upper", "flag"});
  const auto& g = series.series->gamma;
  t.row().add("series").add(series.series->horizon).add(g.gamma_estimate);
  t.add(std::max(0.0, g.gamma_estimate - g.error_bound)).add(g.gamma_estimate + g.error_bound).add(to_string(g.flag));
  t.row().add("series_upper").add(series.series->horizon).add(g.gamma_upper).add(0.0).add(g.gamma_upper);
  t.add("upper bound");
  if (c.replicas >= 100) {
    const auto mc = estimate_gamma_mc(c, c.gamma_mc_horizon);
    t.row().add("monte_carlo").add(mc.horizon).add(mc.gamma_hat).add(mc.ci.lower).add(mc.ci.upper);
    t.add("estimates gamma_n >= gamma");
    s.log("gamma: series " + format_double(g.gamma_estimate) + ", monte carlo " + format_double(mc.gamma_hat) + " [" +
          format_double(mc.ci.lower) + ", " + format_double(mc.ci.upper) + "]");
  } else {
    s.log("gamma: series " + format_double(g.gamma_estimate) + " (Monte Carlo skipped: replicas < 100)");
  }
  s.write(t, "gamma.csv");
  return s.finish(true);
}

}  // namespace ltw
