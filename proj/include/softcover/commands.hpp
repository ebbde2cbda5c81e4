#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "softcover/channel_spec.hpp"
#include "softcover/empirics.hpp"
#include "softcover/exponent_solver.hpp"
#include "softcover/solver_config.hpp"

namespace softcover {

enum ExitCode : int {
  kExitOk = 0,
  kExitInputError = 2,
  kExitInfeasible = 3,
  kExitVerifyFailed = 4,
};

// Exponents, rates and thresholds cross the CLI boundary in nats, or in bits
// with --bits. Nothing inside the library ever sees bits.
struct Units {
  bool bits = false;
  double to_user(double nats) const;
  double from_user(double v) const;
  ExtReal to_user(ExtReal nats) const;
  const char* name() const { return bits ? "bits" : "nats"; }
};

// %.9g, with "inf" / "-inf".
std::string format_number(double v);
std::string format_number(ExtReal v);

// Finite values as JSON numbers, infinities as "inf" / "-inf" strings.
nlohmann::json to_json(ExtReal v);
ExtReal ext_real_from_json(const nlohmann::json& j);

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::string to_csv() const;
};

struct RunManifest {
  std::string command;
  std::string spec_hash;
  nlohmann::json config;
  std::uint64_t seed = 0;
  std::string version;
  std::string timestamp;
  nlohmann::json to_json() const;
};

nlohmann::json config_json(const SolverConfig& cfg);
RunManifest make_manifest(const std::string& command, const ChannelSpec& spec, const SolverConfig& cfg,
                          nlohmann::json arguments, std::uint64_t seed = 0);

// Writes the CSV to `path` and its manifest to `path`.manifest.json; with an
// empty path the CSV goes to `out` and the manifest to `err`.
void emit_table(const Table& table, const RunManifest& manifest, const std::string& path, std::ostream& out,
                std::ostream& err);

nlohmann::json run_info(const ExponentSolver& solver, const ChannelSpec& spec, const Units& units);

enum class Which { fa, md, both };
Which parse_which(const std::string& s);

// At rate 0 the MD side comes from the R = 0 formulas.
nlohmann::json run_exponent(const ExponentSolver& solver, double tau, double rate, Which which, const Units& units);

Table run_sweep(const ExponentSolver& solver, double rate, double tau_min, double tau_max, int steps,
                const Units& units);

Table run_phase(const ExponentSolver& solver, double rate_min, double rate_max, int rate_steps, const Units& units);

struct TradeoffTables {
  Table raw;
  Table envelope;
};
TradeoffTables run_tradeoff(const ExponentSolver& solver, double rate, int samples, const Units& units);

struct SimulateOutput {
  Table trials;
  nlohmann::json summary;
};
SimulateOutput run_simulate(const ChannelSpec& spec, int n, double rate, double tau, int trials, std::uint64_t seed,
                            SimMode mode, int workers, const Units& units);

struct VerifyCheck {
  std::string name;
  double expected;
  double computed;
  double tolerance;
  bool pass;
};

struct VerifyReport {
  std::vector<VerifyCheck> checks;
  double seconds = 0.0;
  bool all_pass() const;
  std::string to_text() const;
};

// The w = 0.45, uniform-input checkpoint suite.
VerifyReport run_verify_zchannel(const SolverConfig& cfg);

}  // namespace softcover
