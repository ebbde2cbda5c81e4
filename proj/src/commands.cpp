#include "softcover/commands.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "softcover/phase.hpp"

namespace softcover {

namespace {

constexpr double kLn2 = 0.69314718055994530942;

nlohmann::json rows_json(const JointType& jt) {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t x = 0; x < jt.input_size(); ++x) {
    const auto p = jt.conditional(x).probs();
    rows.push_back(std::vector<double>(p.begin(), p.end()));
  }
  return rows;
}

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

ExponentResult md_at(const ExponentSolver& s, double tau, double rate) {
  return rate > 0.0 ? s.md(tau, rate) : s.r0(tau).second;
}

}  // namespace

double Units::to_user(double nats) const { return bits ? nats / kLn2 : nats; }
double Units::from_user(double v) const { return bits ? v * kLn2 : v; }
ExtReal Units::to_user(ExtReal nats) const { return nats.is_finite() ? ExtReal(to_user(nats.value())) : nats; }

std::string format_number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

std::string format_number(ExtReal v) { return format_number(v.value()); }

nlohmann::json to_json(ExtReal v) {
  if (v.is_pos_inf()) return "inf";
  if (v.is_neg_inf()) return "-inf";
  return v.value();
}

ExtReal ext_real_from_json(const nlohmann::json& j) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return ExtReal::pos_inf();
    if (s == "-inf") return ExtReal::neg_inf();
    throw std::invalid_argument("not an extended real: " + s);
  }
  return ExtReal(j.get<double>());
}

std::string Table::to_csv() const {
  std::string out;
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out += ',';
      out += cells[i];
    }
    out += '\n';
  };
  line(header);
  for (const auto& r : rows) line(r);
  return out;
}

nlohmann::json RunManifest::to_json() const {
  return {{"command", command}, {"spec_hash", spec_hash}, {"config", config},
          {"seed", seed},       {"version", version},     {"timestamp", timestamp}};
}

nlohmann::json config_json(const SolverConfig& cfg) {
  nlohmann::json j;
  if (cfg.grid_points_per_dim)
    j["grid_points_per_dim"] = *cfg.grid_points_per_dim;
  else
    j["grid_points_per_dim"] = "auto";
  j["refinement_rounds"] = cfg.refinement_rounds;
  j["refinement_shrink"] = cfg.refinement_shrink;
  j["constraint_slack"] = cfg.constraint_slack;
  j["tie_break"] = to_string(cfg.tie_break);
  j["workers"] = cfg.workers;
  return j;
}

RunManifest make_manifest(const std::string& command, const ChannelSpec& spec, const SolverConfig& cfg,
                          nlohmann::json arguments, std::uint64_t seed) {
  RunManifest m;
  m.command = command;
  m.spec_hash = spec_hash(spec);
  m.config = config_json(cfg);
  m.config["arguments"] = std::move(arguments);
  m.seed = seed;
  m.version = SOFTCOVER_VERSION;
  m.timestamp = utc_timestamp();
  return m;
}

void emit_table(const Table& table, const RunManifest& manifest, const std::string& path, std::ostream& out,
                std::ostream& err) {
  if (path.empty()) {
    out << table.to_csv();
    err << manifest.to_json().dump(2) << '\n';
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << table.to_csv();
  std::ofstream m(path + ".manifest.json", std::ios::binary);
  if (!m) throw std::runtime_error("cannot write " + path + ".manifest.json");
  m << manifest.to_json().dump(2) << '\n';
}

nlohmann::json run_info(const ExponentSolver& solver, const ChannelSpec& spec, const Units& units) {
  const auto& space = solver.space();
  nlohmann::json j;
  j["name"] = spec.name;
  j["spec_hash"] = spec_hash(spec);
  j["units"] = units.name();
  j["input_size"] = space.input_size();
  j["output_size"] = space.output_size();
  const auto py = space.output().probs();
  j["output_dist"] = std::vector<double>(py.begin(), py.end());
  j["i_xy"] = units.to_user(solver.mutual_information());
  j["search_dimension"] = space.dimension();
  j["grid_points_per_dim"] = solver.config().points_per_dim(space.dimension());
  return j;
}

Which parse_which(const std::string& s) {
  if (s == "fa") return Which::fa;
  if (s == "md") return Which::md;
  if (s == "both") return Which::both;
  throw std::invalid_argument("--which must be fa, md or both");
}

nlohmann::json run_exponent(const ExponentSolver& solver, double tau, double rate, Which which, const Units& units) {
  nlohmann::json j;
  j["tau"] = units.to_user(tau);
  j["rate"] = units.to_user(rate);
  j["units"] = units.name();
  nlohmann::json branch = nlohmann::json::object(), minimizer = nlohmann::json::object(),
                 feasible = nlohmann::json::object();
  auto put = [&](const char* key, const ExponentResult& r) {
    j[std::string("e_") + key] = to_json(units.to_user(r.value));
    feasible[key] = r.feasible;
    if (r.feasible) {
      branch[key] = to_string(r.branch);
      minimizer[key] = rows_json(*r.minimizer);
    } else {
      branch[key] = nullptr;
      minimizer[key] = nullptr;
    }
  };
  if (which != Which::md) put("fa", solver.fa(tau, rate));
  if (which != Which::fa) put("md", md_at(solver, tau, rate));
  j["branch"] = branch;
  j["minimizer"] = minimizer;
  j["feasible"] = feasible;
  return j;
}

Table run_sweep(const ExponentSolver& solver, double rate, double tau_min, double tau_max, int steps,
                const Units& units) {
  if (!(tau_min < tau_max)) throw std::invalid_argument("tau_min must be < tau_max");
  if (steps < 2) throw std::invalid_argument("steps must be >= 2");
  const PhaseReport report = phase_report(solver, rate);
  const Range taus{tau_min, tau_max, steps};
  Table t;
  t.header = {"tau", "e_fa", "e_md", "fa_region", "md_region"};
  for (int i = 0; i < steps; ++i) {
    const double tau = taus.at(i);
    const auto [fa_tag, md_tag] = classify(tau, report);
    t.rows.push_back({format_number(units.to_user(tau)), format_number(units.to_user(solver.fa(tau, rate).value)),
                      format_number(units.to_user(md_at(solver, tau, rate).value)), to_string(fa_tag),
                      to_string(md_tag)});
  }
  return t;
}

Table run_phase(const ExponentSolver& solver, double rate_min, double rate_max, int rate_steps, const Units& units) {
  if (rate_min < 0.0) throw std::invalid_argument("rate_min must be >= 0");
  if (!(rate_min < rate_max)) throw std::invalid_argument("rate_min must be < rate_max");
  if (rate_steps < 2) throw std::invalid_argument("rate_steps must be >= 2");
  const Range rates{rate_min, rate_max, rate_steps};
  Table t;
  t.header = {"rate", "i_xy", "tau_flat", "fa_flat_value", "lambda_min", "lambda_max", "tau_star", "tau_kink",
              "md_infinite_upto"};
  for (int i = 0; i < rate_steps; ++i) {
    const auto r = phase_report(solver, rates.at(i));
    t.rows.push_back({format_number(units.to_user(r.rate)), format_number(units.to_user(r.i_xy)),
                      format_number(units.to_user(r.tau_flat)), format_number(units.to_user(r.fa_flat_value)),
                      format_number(units.to_user(r.lambda_min)), format_number(units.to_user(r.lambda_max)),
                      format_number(units.to_user(r.tau_star)),
                      r.tau_kink ? format_number(units.to_user(*r.tau_kink)) : std::string(),
                      format_number(units.to_user(r.md_infinite_upto))});
  }
  return t;
}

TradeoffTables run_tradeoff(const ExponentSolver& solver, double rate, int samples, const Units& units) {
  if (!(rate > 0.0)) throw std::invalid_argument("tradeoff needs rate > 0; use `exponent` with --rate 0 for R = 0");
  const auto curve = tradeoff_curve(solver, rate, samples);
  TradeoffTables out;
  out.raw.header = {"tau", "e_fa", "e_md"};
  for (const auto& p : curve.points)
    out.raw.rows.push_back({format_number(units.to_user(p.tau)), format_number(units.to_user(p.e_fa)),
                            format_number(units.to_user(p.e_md))});
  out.envelope.header = {"e_fa", "e_md"};
  for (const auto& [fa, md] : curve.envelope)
    out.envelope.rows.push_back({format_number(units.to_user(fa)), format_number(units.to_user(md))});
  return out;
}

SimulateOutput run_simulate(const ChannelSpec& spec, int n, double rate, double tau, int trials, std::uint64_t seed,
                            SimMode mode, int workers, const Units& units) {
  const auto est = estimate_error_probs(n, rate, spec.channel(), spec.input(), tau, trials, seed, mode, workers);
  SimulateOutput out;
  out.trials.header = {"trial", "alpha", "beta"};
  for (std::size_t t = 0; t < est.alpha_trials.size(); ++t)
    out.trials.rows.push_back({std::to_string(t), format_number(est.alpha_trials[t]), format_number(est.beta_trials[t])});
  auto sim = [](const SimEstimate& e) {
    return nlohmann::json{{"mean", e.mean}, {"std_error", e.std_error}, {"trials", e.trials}, {"seed", e.seed}};
  };
  auto exponent = [n](double p) { return p > 0.0 ? to_json(ExtReal(-std::log(p) / n)) : to_json(ExtReal::pos_inf()); };
  out.summary = {{"n", n},
                 {"rate", units.to_user(rate)},
                 {"tau", units.to_user(tau)},
                 {"mode", mode == SimMode::mc ? "mc" : "exact-r0"},
                 {"alpha", sim(est.alpha)},
                 {"beta", sim(est.beta)},
                 {"codebook_size", est.codebook_size},
                 {"realized_rate", units.to_user(est.realized_rate)},
                 {"alpha_exponent", exponent(est.alpha.mean)},
                 {"beta_exponent", exponent(est.beta.mean)},
                 {"units", units.name()}};
  return out;
}

bool VerifyReport::all_pass() const {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

std::string VerifyReport::to_text() const {
  std::ostringstream o;
  char buf[160];
  std::snprintf(buf, sizeof buf, "%-28s %12s %12s %10s  %s\n", "check", "expected", "computed", "tolerance", "result");
  o << buf;
  for (const auto& c : checks) {
    std::snprintf(buf, sizeof buf, "%-28s %12.6g %12.6g %10.3g  %s\n", c.name.c_str(), c.expected, c.computed,
                  c.tolerance, c.pass ? "PASS" : "FAIL");
    o << buf;
  }
  return o.str();
}

VerifyReport run_verify_zchannel(const SolverConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto spec = zchannel_spec(0.45);
  ExponentSolver solver(spec.channel(), spec.input(), cfg);
  VerifyReport rep;
  auto check = [&](std::string name, double expected, double computed, double tol) {
    rep.checks.push_back({std::move(name), expected, computed, tol, std::abs(computed - expected) <= tol});
  };
  constexpr double R = 0.05;
  const auto report = phase_report(solver, R);
  check("I(X;Y)", 0.2441, report.i_xy, 5e-4);
  check("tau_star(0.05)", 0.1941, report.tau_star, 5e-4);
  check("tau_flat(0.05)", 0.033, report.tau_flat, 2e-3);
  check("fa_flat_value(0.05)", 0.111, report.fa_flat_value, 2e-3);
  check("lambda_max(0.05)", 0.457, report.lambda_max, 2e-3);
  check("lambda_min(0.05)", -0.078, report.lambda_min, 2e-3);
  check("tau_kink(0.05)", -0.047, report.tau_kink.value_or(std::nan("")), 2e-3);
  std::vector<double> rates;
  for (int i = 0; i <= 24; ++i) rates.push_back(0.01 * i);
  check("fa_cusp_rate", 0.106, fa_cusp_rate(solver, rates).value_or(std::nan("")), 3e-3);
  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  rep.checks.push_back({"runtime_s (< 60)", 60.0, rep.seconds, 0.0, rep.seconds < 60.0});
  return rep;
}

}  // namespace softcover
