// softcover: error exponents of soft-covering hypothesis tests from the
// command line. Run `softcover --help` for the subcommands.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "softcover/commands.hpp"

using namespace softcover;

namespace {

ChannelSpec load_spec(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::invalid_argument("cannot read channel spec " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_channel_spec(ss.str());
}

struct Common {
  std::string spec_path;
  bool bits = false;
  int grid = 0;
  int rounds = 4;
  double shrink = 0.1;
  double slack = 0.0;

  SolverConfig config() const {
    SolverConfig cfg;
    if (grid > 0) cfg.grid_points_per_dim = grid;
    cfg.refinement_rounds = rounds;
    cfg.refinement_shrink = shrink;
    cfg.constraint_slack = slack;
    cfg.workers = workers_from_environment();
    return cfg;
  }
};

void add_common(CLI::App* cmd, Common& c, bool needs_spec = true) {
  if (needs_spec) cmd->add_option("--spec", c.spec_path, "Channel spec file")->required();
  cmd->add_flag("--bits", c.bits, "Exponents, rates and tau in bits instead of nats");
  cmd->add_option("--grid", c.grid, "Lattice points per search dimension (default: by dimension)");
  cmd->add_option("--rounds", c.rounds, "Refinement rounds");
  cmd->add_option("--shrink", c.shrink, "Refinement box shrink factor per round");
  cmd->add_option("--slack", c.slack, "MD feasibility slack in nats");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Soft-covering hypothesis-testing exponents"};
  app.require_subcommand(1);
  Common common;

  auto* info = app.add_subcommand("info", "Channel summary and I(X;Y)");
  add_common(info, common);

  double tau = 0.0, rate = 0.0;
  std::string which = "both";
  bool scalar = false;
  auto* exponent = app.add_subcommand("exponent", "E_FA and/or E_MD at one (tau, R) as JSON");
  add_common(exponent, common);
  exponent->add_option("--tau", tau, "Threshold tau")->required();
  exponent->add_option("--rate", rate, "Rate R")->required();
  exponent->add_option("--which", which, "fa, md or both")->check(CLI::IsMember({"fa", "md", "both"}));
  exponent->add_flag("--scalar", scalar, "Print only the value (needs --which fa|md); exit 3 when it is inf");

  double tau_min = 0.0, tau_max = 0.0;
  int steps = 0;
  std::string out_path;
  auto* sweep = app.add_subcommand("sweep", "Exponents and regions along a tau ladder (CSV)");
  add_common(sweep, common);
  sweep->add_option("--rate", rate, "Rate R")->required();
  sweep->add_option("--tau-min", tau_min)->required();
  sweep->add_option("--tau-max", tau_max)->required();
  sweep->add_option("--steps", steps)->required();
  sweep->add_option("--out", out_path, "CSV path (default stdout)");

  double rate_min = 0.0, rate_max = 0.0;
  int rate_steps = 0;
  auto* phase = app.add_subcommand("phase", "Critical thresholds per rate (CSV)");
  add_common(phase, common);
  phase->add_option("--rate-min", rate_min)->required();
  phase->add_option("--rate-max", rate_max)->required();
  phase->add_option("--rate-steps", rate_steps)->required();
  phase->add_option("--out", out_path, "CSV path (default stdout)");

  int samples = 201;
  auto* tradeoff = app.add_subcommand("tradeoff", "Tradeoff curve and upper envelope (CSV)");
  add_common(tradeoff, common);
  tradeoff->add_option("--rate", rate, "Rate R > 0")->required();
  tradeoff->add_option("--samples", samples, "Number of tau samples");
  tradeoff->add_option("--out", out_path, "Prefix: writes PREFIX.raw.csv and PREFIX.envelope.csv");

  int n = 0, trials = 1;
  std::uint64_t seed = 1;
  std::string mode = "mc", summary_path;
  auto* simulate = app.add_subcommand("simulate", "Finite-n alpha/beta by exact inner sums (CSV + JSON)");
  add_common(simulate, common);
  simulate->add_option("--n", n, "Blocklength")->required();
  simulate->add_option("--rate", rate, "Rate R")->required();
  simulate->add_option("--tau", tau, "Threshold tau")->required();
  simulate->add_option("--trials", trials, "Codebook trials (mc mode)");
  simulate->add_option("--seed", seed, "Seed");
  simulate->add_option("--mode", mode, "mc or exact-r0")->check(CLI::IsMember({"mc", "exact-r0"}));
  simulate->add_option("--out", out_path, "Per-trial CSV path (default stdout)");
  simulate->add_option("--summary", summary_path, "Summary JSON path (default stderr)");

  auto* verify = app.add_subcommand("verify-zchannel", "Z-channel (w = 0.45) checkpoint table");
  add_common(verify, common, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInputError;
  }

  const Units units{common.bits};
  try {
    const SolverConfig cfg = common.config();
    if (verify->parsed()) {
      const auto rep = run_verify_zchannel(cfg);
      std::cout << rep.to_text();
      return rep.all_pass() ? kExitOk : kExitVerifyFailed;
    }

    const ChannelSpec spec = load_spec(common.spec_path);
    const std::string cmd_line = app.get_subcommands().front()->get_name();

    if (simulate->parsed()) {
      const SimMode m = mode == "mc" ? SimMode::mc : SimMode::exact_r0;
      const double r = units.from_user(rate), t = units.from_user(tau);
      const auto res = run_simulate(spec, n, r, t, trials, seed, m, cfg.workers, units);
      const auto manifest = make_manifest(cmd_line, spec, cfg,
                                          {{"n", n}, {"rate", rate}, {"tau", tau}, {"trials", trials}, {"mode", mode},
                                           {"units", units.name()}},
                                          seed);
      emit_table(res.trials, manifest, out_path, std::cout, std::cerr);
      if (summary_path.empty()) {
        std::cerr << res.summary.dump(2) << '\n';
      } else {
        std::ofstream f(summary_path, std::ios::binary);
        f << res.summary.dump(2) << '\n';
      }
      return kExitOk;
    }

    ExponentSolver solver(spec.channel(), spec.input(), cfg);

    if (info->parsed()) {
      std::cout << run_info(solver, spec, units).dump(2) << '\n';
      return kExitOk;
    }
    if (exponent->parsed()) {
      const Which w = parse_which(which);
      if (scalar && w == Which::both) throw std::invalid_argument("--scalar needs --which fa or md");
      const auto j = run_exponent(solver, units.from_user(tau), units.from_user(rate), w, units);
      if (!scalar) {
        std::cout << j.dump(2) << '\n';
        return kExitOk;
      }
      const auto v = ext_real_from_json(j[w == Which::fa ? "e_fa" : "e_md"]);
      std::cout << format_number(v) << '\n';
      return v.is_pos_inf() ? kExitInfeasible : kExitOk;
    }
    if (sweep->parsed()) {
      const auto t = run_sweep(solver, units.from_user(rate), units.from_user(tau_min), units.from_user(tau_max), steps,
                               units);
      emit_table(t, make_manifest(cmd_line, spec, cfg,
                                  {{"rate", rate}, {"tau_min", tau_min}, {"tau_max", tau_max}, {"steps", steps},
                                   {"units", units.name()}}),
                 out_path, std::cout, std::cerr);
      return kExitOk;
    }
    if (phase->parsed()) {
      const auto t = run_phase(solver, units.from_user(rate_min), units.from_user(rate_max), rate_steps, units);
      emit_table(t, make_manifest(cmd_line, spec, cfg,
                                  {{"rate_min", rate_min}, {"rate_max", rate_max}, {"rate_steps", rate_steps},
                                   {"units", units.name()}}),
                 out_path, std::cout, std::cerr);
      return kExitOk;
    }
    if (tradeoff->parsed()) {
      const auto t = run_tradeoff(solver, units.from_user(rate), samples, units);
      const auto manifest =
          make_manifest(cmd_line, spec, cfg, {{"rate", rate}, {"samples", samples}, {"units", units.name()}});
      if (out_path.empty()) {
        emit_table(t.raw, manifest, "", std::cout, std::cerr);
        std::cout << '\n';
        std::cout << t.envelope.to_csv();
      } else {
        emit_table(t.raw, manifest, out_path + ".raw.csv", std::cout, std::cerr);
        emit_table(t.envelope, manifest, out_path + ".envelope.csv", std::cout, std::cerr);
      }
      return kExitOk;
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInputError;
  } catch (const std::length_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return kExitOk;
}
