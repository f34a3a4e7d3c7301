#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "grbb/cli.hpp"

using namespace grbb;
using namespace grbb::cli;

namespace {

struct Outcome {
  int status;
  std::string out;
  std::string err;
};

Outcome invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "grbb");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int status = main_entry(static_cast<int>(argv.size()), argv.data(), out, err);
  return {status, out.str(), err.str()};
}

std::filesystem::path temp_dir() {
  auto dir = std::filesystem::temp_directory_path() / "grbb_cli_test";
  std::filesystem::create_directories(dir);
  return dir;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p);
  std::stringstream s;
  s << f.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("grid parsing") {
  CHECK(parse_grid("4..7") == std::vector<std::uint64_t>{4, 5, 6, 7});
  CHECK(parse_grid("128,256") == std::vector<std::uint64_t>{128, 256});
  CHECK(parse_grid("10..40:10") == std::vector<std::uint64_t>{10, 20, 30, 40});
  CHECK(parse_grid("128..1024*2") == std::vector<std::uint64_t>{128, 256, 512, 1024});
  CHECK(parse_grid("3, 5..6") == std::vector<std::uint64_t>{3, 5, 6});
  CHECK_THROWS_AS(parse_grid("9..4"), UsageError);
  CHECK_THROWS_AS(parse_grid("a"), UsageError);
  CHECK_THROWS_AS(parse_grid("1..4*1"), UsageError);
}

TEST_CASE("law specifications") {
  CHECK(parse_pmf_spec("bernoulli:0.3") == Pmf::bernoulli(0.3));
  CHECK(parse_pmf_spec("pmf:0.5,0.5") == Pmf({0.5, 0.5}));
  CHECK(parse_pmf_spec("point:2") == Pmf::point(2));
  CHECK(parse_pmf_spec("poisson:0.5").tail() < 1e-25);
  CHECK_THROWS_AS(parse_pmf_spec("poisson"), UsageError);
  CHECK_THROWS_AS(parse_pmf_spec("binomial:3"), UsageError);
  CHECK_THROWS_AS(parse_pmf_spec("pmf:0.5,0.6"), UsageError);
  CHECK_THROWS_AS(parse_pmf_spec("cauchy:1"), UsageError);
}

TEST_CASE("parse_config maps flags") {
  const auto tv = parse_config({"tv-check", "--law", "fd", "--L", "4..30"});
  CHECK(tv.command == Command::TvCheck);
  CHECK(tv.law == ReassignmentLaw::FermiDirac);
  CHECK(tv.sizes.size() == 27);
  CHECK(tv.sizes.front() == 4);

  const auto chaos = parse_config(
      {"chaos", "--law", "mb", "--L", "128,256,512", "--T", "20", "--delta", "0.05", "--replicas", "2000", "--seed", "42"});
  CHECK(chaos.command == Command::Chaos);
  CHECK(chaos.sizes == std::vector<std::uint64_t>{128, 256, 512});
  CHECK(chaos.horizon == 20);
  CHECK(chaos.delta == 0.05);
  CHECK(chaos.replicas == 2000);
  CHECK(chaos.seed == 42);

  CHECK(parse_config({"mixing", "--L", "10", "--N", "3"}).replicas == 500);
  CHECK(parse_config({"chaos", "--law", "mb", "--L", "8"}).replicas == 2000);
  CHECK(parse_config({"equilibrium", "--law", "be", "--r", "0.2"}).horizon == 10000);
}

TEST_CASE("parse_config rejects bad input") {
  CHECK_THROWS_AS(parse_config({"tv-check", "--L", "4"}), UsageError);
  CHECK_THROWS_AS(parse_config({"tv-check", "--law", "xx", "--L", "4"}), UsageError);
  CHECK_THROWS_AS(parse_config({"nonsense"}), UsageError);
  CHECK_THROWS_AS(parse_config({"tv-check", "--law", "fd", "--L", "4", "--bogus", "1"}), UsageError);
  CHECK_THROWS_AS(validate(parse_config({"fixed-point", "--law", "mb", "--r", "1.5"})), UsageError);
  CHECK_THROWS_WITH_AS(validate(parse_config({"simulate", "--law", "fd", "--L", "4", "--N", "9"})),
                       doctest::Contains("statistic undefined"), UsageError);
}

TEST_CASE("exit statuses") {
  CHECK(invoke({"simulate", "--law", "fd", "--L", "4", "--N", "9"}).status == 2);
  const auto unstable = invoke({"stationary", "--arrivals", "poisson:1.1"});
  CHECK(unstable.status == 1);
  CHECK(unstable.err.find("unstable queue") != std::string::npos);
  const auto tv = invoke({"tv-check", "--law", "fd", "--L", "4..12"});
  CHECK(tv.status == 0);
  const auto j = nlohmann::json::parse(tv.out);
  CHECK(j.at("passed") == true);
  const auto help = invoke({"--help"});
  CHECK(help.status == 0);
  CHECK(help.out.find("tv-check") != std::string::npos);
  const auto sub_help = invoke({"chaos", "--help"});
  CHECK(sub_help.out.find("--replicas") != std::string::npos);
  CHECK(invoke({"tv-check", "--law", "fd", "--L", "4", "--output", "/nonexistent/dir/x"}).status == 2);
}

TEST_CASE("dry run validates without computing") {
  const auto r = invoke({"chaos", "--law", "mb", "--L", "128..4096*2", "--dry-run"});
  CHECK(r.status == 0);
  const auto plan = nlohmann::json::parse(r.out);
  CHECK(plan.at("L").size() == 6);
  CHECK(plan.at("replicas") == 2000);
  CHECK(invoke({"mixing", "--L", "10", "--N", "1", "--dry-run"}).status == 2);
}

TEST_CASE("fixed-point command reports a_star") {
  const auto r = invoke({"fixed-point", "--law", "mb", "--r", "0.75"});
  CHECK(r.status == 0);
  CHECK(std::abs(nlohmann::json::parse(r.out).at("results").at("a_star").get<double>() - 0.5) < 1e-8);
}

TEST_CASE("reports are written to files and reproducible") {
  const auto dir = temp_dir();
  const auto stem = (dir / "sim").string();
  const std::vector<std::string> args{"simulate", "--law", "be", "--L", "12", "--N", "20", "--T", "6",
                                      "--seed", "9", "--format", "both", "--output", stem};
  CHECK(invoke(args).status == 0);
  const auto csv1 = slurp(stem + ".csv");
  auto json1 = nlohmann::json::parse(slurp(stem + ".json"));
  CHECK(csv1.rfind("t,value,mass\n", 0) == 0);
  CHECK(invoke(args).status == 0);
  auto json2 = nlohmann::json::parse(slurp(stem + ".json"));
  CHECK(slurp(stem + ".csv") == csv1);
  json1.erase("wall_clock_seconds");
  json2.erase("wall_clock_seconds");
  CHECK(json1 == json2);
  CHECK(json1.at("generator") == "mt19937_64");
}

TEST_CASE("config file sections and flag precedence") {
  const auto path = temp_dir() / "run.ini";
  {
    std::ofstream f(path);
    f << "[chaos]\nlaw = be\nL = \"64,128\"\nreplicas = 300\nseed = 5\n";
  }
  const auto cfg = parse_config({"--config", path.string(), "chaos", "--seed", "8"});
  CHECK(cfg.law == ReassignmentLaw::BoseEinstein);
  CHECK(cfg.sizes == std::vector<std::uint64_t>{64, 128});
  CHECK(cfg.replicas == 300);
  CHECK(cfg.seed == 8);
  {
    std::ofstream f(path);
    f << "[chaos]\nlaw = be\nL = 64\nunknown_key = 1\n";
  }
  CHECK_THROWS_AS(parse_config({"--config", path.string(), "chaos"}), UsageError);
}

TEST_CASE("config keys for other subcommands do not leak") {
  const auto path = temp_dir() / "multi.ini";
  {
    std::ofstream f(path);
    f << "[chaos]\nlaw = be\nL = 64\nseed = 77\n[mixing]\nL = 50\nN = 20\n";
  }
  const auto cfg = parse_config({"--config", path.string(), "mixing"});
  CHECK(cfg.command == Command::Mixing);
  CHECK(cfg.seed == 0);
  CHECK(cfg.sizes == std::vector<std::uint64_t>{50});
  CHECK(cfg.replicas == 500);
}
