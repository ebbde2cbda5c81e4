#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>
#include <string>

#include <gtest/gtest.h>
#include <json.hpp>

#include "softcover/channel_spec.hpp"
#include "softcover/commands.hpp"

using namespace softcover;

namespace {

const std::string kCli = SOFTCOVER_CLI_PATH;
const std::string kData = SOFTCOVER_DATA_DIR;

struct Run {
  int status;
  std::string out;
};

// stdout only; stderr is discarded.
Run run(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + " " + kCli + " " + args + " 2>/dev/null";
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return {-1, ""};
  std::string out;
  char buf[4096];
  std::size_t got;
  while ((got = fread(buf, 1, sizeof buf, p)) > 0) out.append(buf, got);
  const int st = pclose(p);
  return {WIFEXITED(st) ? WEXITSTATUS(st) : -1, out};
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

ChannelSpecError::Kind kind_of(const std::string& text) {
  try {
    parse_channel_spec(text);
  } catch (const ChannelSpecError& e) {
    return e.kind();
  }
  ADD_FAILURE() << "parsed: " << text;
  return ChannelSpecError::Kind::syntax;
}

}  // namespace

TEST(ChannelSpec, ParsesDataFiles) {
  std::ifstream f(kData + "/zchannel.txt");
  std::stringstream ss;
  ss << f.rdbuf();
  const auto spec = parse_channel_spec(ss.str());
  EXPECT_EQ(spec.name, "zchannel");
  EXPECT_EQ(spec.matrix, (std::vector<double>{1, 0, 0.45, 0.55}));
  EXPECT_EQ(spec.channel(), make_z_channel(0.45));
  EXPECT_EQ(spec_hash(spec), spec_hash(zchannel_spec(0.45)));
  EXPECT_EQ(spec_hash(spec).size(), 16u);
}

TEST(ChannelSpec, Errors) {
  try {
    parse_channel_spec("name = x\ninput_size = 2\noutput_size = 2\nmatrix = 0.5 0.4\n 0.5 0.5\ninput_dist = 0.5 0.5\n");
    FAIL();
  } catch (const ChannelSpecError& e) {
    EXPECT_EQ(e.kind(), ChannelSpecError::Kind::non_stochastic);
    EXPECT_NE(std::string(e.what()).find("row 1 sums to 0.9"), std::string::npos) << e.what();
    EXPECT_EQ(e.line(), 4);
  }
  using K = ChannelSpecError::Kind;
  EXPECT_EQ(kind_of("name = x\ninput_size = 2\noutput_size = 2\nmatrix = 1 0 0.5\ninput_dist = 0.5 0.5\n"),
            K::size_mismatch);
  EXPECT_EQ(kind_of("name = x\ninput_size = 2\noutput_size = 2\nmatrix = 1.2 -0.2 0.5 0.5\ninput_dist = 0.5 0.5\n"),
            K::negative_entry);
  EXPECT_EQ(kind_of("name = x\ninput_size = 2\noutput_size = 2\nmatrix = 1 0 0.5 0.5\n"), K::missing_field);
  EXPECT_EQ(kind_of("name = x\ninput_size = 2\noutput_size = 3\nmatrix = 1 0 0 0.5 0.5 0\ninput_dist = 0.5 0.5\n"),
            K::unreachable_output);
  EXPECT_EQ(kind_of("name = x\ninput_size = two\noutput_size = 2\nmatrix = 1 0 0 1\ninput_dist = 0.5 0.5\n"), K::syntax);
  EXPECT_EQ(kind_of("name = x\ncolour = red\n"), K::syntax);
}

TEST(ChannelSpec, RenormalizesWithinTolerance) {
  const auto s = parse_channel_spec(
      "name = x\ninput_size = 2\noutput_size = 2\nmatrix = 0.9 0.1000000001\n 0.1 0.9\ninput_dist = 0.5 0.5\n");
  EXPECT_NO_THROW(s.channel());
}

TEST(Format, Numbers) {
  EXPECT_EQ(format_number(std::numeric_limits<double>::infinity()), "inf");
  EXPECT_EQ(format_number(-std::numeric_limits<double>::infinity()), "-inf");
  EXPECT_EQ(format_number(0.1), "0.1");
  EXPECT_EQ(format_number(1.0 / 3.0), "0.333333333");
  Table t{{"a", "b"}, {{"1", "inf"}}};
  EXPECT_EQ(t.to_csv(), "a,b\n1,inf\n");
}

TEST(Json, RoundTrip) {
  for (ExtReal v : {ExtReal(0.25), ExtReal::pos_inf(), ExtReal::neg_inf(), ExtReal(-1e-300)})
    EXPECT_EQ(ext_real_from_json(nlohmann::json::parse(to_json(v).dump())), v);
  const ExponentSolver s(make_z_channel(0.45), Distribution::uniform(2));
  const auto j = run_exponent(s, 0.1, 0.05, Which::both, Units{});
  EXPECT_EQ(nlohmann::json::parse(j.dump()), j);
  EXPECT_EQ(j["branch"]["fa"], "sparse");
  const auto k = run_exponent(s, 0.5, 0.05, Which::fa, Units{});
  EXPECT_EQ(k["e_fa"], "inf");
  EXPECT_TRUE(k["minimizer"]["fa"].is_null());
}

TEST(Units, Bits) {
  const Units b{true};
  EXPECT_NEAR(b.to_user(std::log(2.0)), 1.0, 1e-15);
  EXPECT_NEAR(b.from_user(1.0), std::log(2.0), 1e-15);
  EXPECT_TRUE(b.to_user(ExtReal::pos_inf()).is_pos_inf());
}

TEST(Cli, InfoAndExponent) {
  const auto info = run("info --spec " + kData + "/zchannel.txt");
  ASSERT_EQ(info.status, 0);
  EXPECT_NEAR(nlohmann::json::parse(info.out)["i_xy"].get<double>(), 0.2441, 5e-4);

  const auto a = run("exponent --spec " + kData + "/zchannel.txt --tau 0 --rate 0.30");
  ASSERT_EQ(a.status, 0);
  EXPECT_EQ(nlohmann::json::parse(a.out)["e_md"].get<double>(), 0.0);
  const auto b = run("exponent --spec " + kData + "/zchannel.txt --tau -10 --rate 0.05");
  EXPECT_NEAR(nlohmann::json::parse(b.out)["e_fa"].get<double>(), 0.111, 2e-3);
  const auto c = run("exponent --spec " + kData + "/zchannel.txt --tau 0.5 --rate 0.05");
  EXPECT_EQ(nlohmann::json::parse(c.out)["e_fa"], "inf");

  const auto bits = run("exponent --bits --spec " + kData + "/zchannel.txt --tau -10 --rate 0.0721 --which fa");
  EXPECT_NEAR(nlohmann::json::parse(bits.out)["e_fa"].get<double>(), 0.111 / std::log(2.0), 4e-3);
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run("exponent --spec " + kData + "/zchannel.txt --tau 0.5 --rate 0.05 --which fa --scalar").status, 3);
  EXPECT_EQ(run("exponent --spec " + kData + "/zchannel.txt --tau 0.1 --rate 0.05 --which fa --scalar").status, 0);
  EXPECT_EQ(run("exponent --spec /nonexistent --tau 0 --rate 0.1").status, 2);
  EXPECT_EQ(run("tradeoff --spec " + kData + "/zchannel.txt --rate 0").status, 2);
  EXPECT_EQ(run("sweep --spec " + kData + "/zchannel.txt --rate 0.05 --tau-min 1 --tau-max 0 --steps 5").status, 2);
  EXPECT_EQ(run("simulate --spec " + kData + "/zchannel.txt --n 7 --rate 0 --tau 0").status, 2);
  EXPECT_EQ(run("frobnicate").status, 2);
  EXPECT_EQ(run("verify-zchannel").status, 0);
}

TEST(Cli, SweepColumns) {
  const auto r = run("sweep --spec " + kData + "/zchannel.txt --rate 0.05 --tau-min -0.1 --tau-max 0.5 --steps 13");
  ASSERT_EQ(r.status, 0);
  const auto ls = lines(r.out);
  ASSERT_EQ(ls.size(), 14u);
  EXPECT_EQ(ls[0], "tau,e_fa,e_md,fa_region,md_region");
  std::set<std::string> fa_tags, md_tags;
  for (std::size_t i = 1; i < ls.size(); ++i) {
    std::vector<std::string> cells;
    std::stringstream ss(ls[i]);
    for (std::string c; std::getline(ss, c, ',');) cells.push_back(c);
    ASSERT_EQ(cells.size(), 5u);
    fa_tags.insert(cells[3]);
    md_tags.insert(cells[4]);
  }
  EXPECT_EQ(fa_tags, (std::set<std::string>{"FA_flat", "FA_active", "FA_infinite"}));
  EXPECT_EQ(md_tags, (std::set<std::string>{"MD_infinite", "MD_active", "MD_zero"}));
}

TEST(Cli, PhaseAndManifest) {
  const auto dir = std::filesystem::temp_directory_path() / "softcover_cli_test";
  std::filesystem::create_directories(dir);
  const auto out = (dir / "phase.csv").string();
  ASSERT_EQ(run("phase --spec " + kData + "/zchannel.txt --rate-min 0.05 --rate-max 0.3 --rate-steps 3 --out " + out)
                .status,
            0);
  std::ifstream f(out);
  std::stringstream ss;
  ss << f.rdbuf();
  const auto ls = lines(ss.str());
  ASSERT_EQ(ls.size(), 4u);
  EXPECT_EQ(ls[0].rfind("rate,i_xy,tau_flat,fa_flat_value,lambda_min,lambda_max,tau_star,tau_kink", 0), 0u);
  std::ifstream m(out + ".manifest.json");
  const auto manifest = nlohmann::json::parse(m);
  EXPECT_EQ(manifest["command"], "phase");
  EXPECT_EQ(manifest["spec_hash"], spec_hash(zchannel_spec(0.45)));
  EXPECT_TRUE(manifest.contains("timestamp"));
  EXPECT_TRUE(manifest.contains("version"));
  std::filesystem::remove_all(dir);
}

TEST(Cli, SimulateDeterministicAcrossThreads) {
  const std::string args = "simulate --spec " + kData + "/bsc.txt --n 10 --rate 0.2 --tau 0.05 --trials 24 --seed 9";
  const auto a = run(args, "SOFTCOVER_THREADS=1");
  const auto b = run(args, "SOFTCOVER_THREADS=4");
  const auto c = run(args, "SOFTCOVER_THREADS=1");
  ASSERT_EQ(a.status, 0);
  EXPECT_EQ(lines(a.out).size(), 25u);
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(a.out, c.out);
}
