#include "grbb/cli.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "grbb/experiments.hpp"
#include "grbb/nonlinear.hpp"
#include "grbb/process.hpp"
#include "grbb/rng.hpp"

namespace grbb::cli {

namespace {

// Finite laws from the command line are truncated far below any reported
// tolerance, so that drift constants at moderate lambda stay resolved.
constexpr double kSpecTail = 1e-30;

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) return out;
    start = pos + 1;
  }
}

std::uint64_t to_uint(std::string_view s, std::string_view context) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    throw UsageError("invalid integer '" + std::string(s) + "' in " + std::string(context));
  }
  return v;
}

double to_double(std::string_view s, std::string_view context) {
  try {
    std::size_t used = 0;
    const std::string str(s);
    const double v = std::stod(str, &used);
    if (used != str.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw UsageError("invalid number '" + std::string(s) + "' in " + std::string(context));
  }
}

std::vector<double> to_doubles(std::string_view s, std::string_view context) {
  std::vector<double> out;
  for (const auto& part : split(s, ',')) out.push_back(to_double(part, context));
  return out;
}

void require_count(const std::vector<double>& v, std::size_t n, std::string_view what) {
  if (v.size() != n) throw UsageError(std::string(what) + " expects " + std::to_string(n) + " parameter(s)");
}

constexpr std::array<std::pair<Command, std::string_view>, 8> kCommands = {{
    {Command::Simulate, "simulate"},
    {Command::Chaos, "chaos"},
    {Command::TvCheck, "tv-check"},
    {Command::CouplingTest, "coupling-test"},
    {Command::Mixing, "mixing"},
    {Command::Stationary, "stationary"},
    {Command::FixedPoint, "fixed-point"},
    {Command::Equilibrium, "equilibrium"},
}};

// Holds the raw string options until the chosen subcommand is known.
struct RawOptions {
  std::string law;
  std::string grid;
  std::string format = "json";
};

struct Parser {
  CLI::App app{"Simulation and verification tools for repeated balls-into-bins processes", "grbb"};
  // Each subcommand binds to its own slot, so config-file keys from other
  // sections cannot leak into the selected command.
  struct Slot {
    RunConfig cfg;
    RawOptions raw;
  };
  std::array<Slot, kCommands.size()> slots;
  Slot* cur = nullptr;
  std::vector<std::pair<Command, CLI::App*>> subs;
  struct Default {
    CLI::App* sub;
    CLI::Option* option;
    std::uint64_t* target;
    std::uint64_t value;
  };
  std::vector<Default> defaults;

  Parser() {
    app.require_subcommand(1);
    app.set_config("--config", "", "INI file with one [section] per subcommand; flags override file keys");
    app.allow_config_extras(CLI::config_extras_mode::error);
    app.set_version_flag("--version", std::string("grbb 1.0 (generator ") + std::string(kGeneratorName) + ")");

    auto* simulate = sub(Command::Simulate, "Run one GRBB trajectory from an occupancy drawn from the statistic");
    law(simulate);
    size(simulate);
    balls(simulate);
    horizon(simulate, 20);
    seed(simulate);

    auto* chaos = sub(Command::Chaos, "Propagation-of-chaos sweep over a grid of L");
    law(chaos);
    grid(chaos);
    horizon(chaos, 20);
    chaos->add_option("--delta", cur->cfg.delta, "TV threshold for exceedance")->capture_default_str();
    replicas(chaos, 2000);
    chaos->add_option("--init", cur->cfg.init, "Per-site initial law, e.g. bernoulli:0.5 or pmf:0.2,0.5,0.3")
        ->capture_default_str();
    chaos->add_option("--max-slope", cur->cfg.max_slope, "Largest accepted log-log slope of the mean deviation")
        ->capture_default_str();
    seed(chaos);

    auto* tv = sub(Command::TvCheck, "Exact two-site TV gaps against their bounds");
    law(tv);
    grid(tv);

    auto* coupling = sub(Command::CouplingTest, "Chi-square and mismatch checks of the mb/be couplings");
    law(coupling);
    size(coupling);
    balls(coupling);
    coupling->add_option("--samples", cur->cfg.samples, "Number of coupled samples")
        ->capture_default_str()
        ->check(CLI::Range(std::uint64_t{1000}, std::uint64_t{1} << 40));
    seed(coupling);

    auto* mixing = sub(Command::Mixing, "Fermi-Dirac hitting-time study against the mixing bound");
    size(mixing);
    balls(mixing);
    replicas(mixing, 500);
    seed(mixing);

    auto* stationary = sub(Command::Stationary, "Stationary law of the G/D/1 queue for an arrival law");
    stationary->add_option("--arrivals", cur->cfg.arrivals, "Arrival law, e.g. poisson:0.5 or pmf:0.3,0.4,0.3")
        ->required();
    stationary->add_option("--lambda", cur->cfg.lambda, "Also report drift constants at this exponent");
    tolerance(stationary);

    auto* fixed = sub(Command::FixedPoint, "Fixed point of the nonlinear evolution with mean r");
    law(fixed);
    mean_target(fixed);
    tolerance(fixed);

    auto* equilibrium = sub(Command::Equilibrium, "Convergence of the nonlinear evolution to its fixed point");
    law(equilibrium);
    mean_target(equilibrium);
    horizon(equilibrium, 10000);
    seed(equilibrium);
  }

  CLI::App* sub(Command c, std::string description) {
    cur = &slots[static_cast<std::size_t>(c)];
    cur->cfg.command = c;
    auto* s = app.add_subcommand(std::string(command_name(c)), std::move(description));
    s->add_option("--output", cur->cfg.output, "Report path stem; .json/.csv are appended (default: stdout)");
    s->add_option("--format", cur->raw.format, "Report format")
        ->capture_default_str()
        ->check(CLI::IsMember({"json", "csv", "both"}));
    s->add_flag("--dry-run", cur->cfg.dry_run, "Validate and print the resolved plan without computing");
    subs.emplace_back(c, s);
    return s;
  }
  void law(CLI::App* s) {
    s->add_option("--law", cur->raw.law, "Occupancy statistic: fd, mb or be")->required();
  }
  void grid(CLI::App* s) {
    s->add_option("--L", cur->raw.grid, "Grid of bin counts: 4..30, 10..200:10, 128..4096*2 or a,b,c")->required();
  }
  void size(CLI::App* s) {
    s->add_option("--L", cur->raw.grid, "Number of bins")->required();
  }
  void balls(CLI::App* s) { s->add_option("--N", cur->cfg.balls, "Number of balls")->required(); }
  void horizon(CLI::App* s, std::uint64_t def) {
    auto* o = s->add_option("--T", cur->cfg.horizon, "Horizon in steps (default " + std::to_string(def) + ")");
    defaults.push_back({s, o, &cur->cfg.horizon, def});
  }
  void replicas(CLI::App* s, std::uint64_t def) {
    auto* o = s->add_option("--replicas", cur->cfg.replicas, "Independent replicas (default " + std::to_string(def) + ")");
    defaults.push_back({s, o, &cur->cfg.replicas, def});
  }
  void seed(CLI::App* s) {
    s->add_option("--seed", cur->cfg.seed, "64-bit master seed")->capture_default_str();
  }
  void tolerance(CLI::App* s) {
    s->add_option("--tol", cur->cfg.tol, "Numerical tolerance")->capture_default_str();
  }
  void mean_target(CLI::App* s) { s->add_option("--r", cur->cfg.r, "Target mean in [0, 1)")->required(); }
};

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::ios_base::failure("cannot open " + path + " for writing");
  f << text;
  f.close();
  if (!f) throw std::ios_base::failure("failed writing " + path);
}

ExperimentReport simulate_report(const RunConfig& cfg, std::string& trajectory_csv) {
  ExperimentReport rep;
  rep.name = "simulate";
  const auto bins = cfg.sizes.front();
  rep.config = {{"law", std::string(short_name(cfg.law))}, {"L", bins}, {"N", cfg.balls},
                {"T", cfg.horizon}, {"seed", cfg.seed}, {"initial_condition", "drawn from the statistic"}};
  Rng rng = make_stream(cfg.seed, "simulate", bins, 0);
  OccupancyVector state = sample_occupancy(cfg.law, bins, cfg.balls, rng);
  std::ostringstream csv;
  csv << std::setprecision(17) << "t,value,mass\n";
  nlohmann::json traj = nlohmann::json::array();
  bool conserved = true;
  for (std::uint64_t t = 0;; ++t) {
    const Pmf q = empirical_measure(state.counts());
    for (std::size_t v = 0; v < q.size(); ++v) {
      if (q(v) > 0.0) csv << t << ',' << v << ',' << q(v) << '\n';
    }
    traj.push_back({{"t", t}, {"measure", to_json(q)}, {"occupied", state.occupied()}});
    conserved = conserved && state.total() == cfg.balls;
    if (t == cfg.horizon) break;
    grbb_step_in_place(cfg.law, state, rng);
  }
  rep.results = {{"trajectory", traj}, {"final_state", state.vector()}};
  rep.require(conserved, "ball count changed during the trajectory");
  trajectory_csv = csv.str();
  return rep;
}

ExperimentReport dispatch(const RunConfig& cfg, std::string& custom_csv) {
  const auto bins = cfg.sizes.empty() ? std::uint64_t{0} : cfg.sizes.front();
  switch (cfg.command) {
    case Command::Simulate: return simulate_report(cfg, custom_csv);
    case Command::Chaos: {
      ChaosConfig c;
      c.law = cfg.law;
      c.sizes = cfg.sizes;
      c.horizon = cfg.horizon;
      c.delta = cfg.delta;
      c.replicas = cfg.replicas;
      c.init_law = parse_pmf_spec(cfg.init);
      c.seed = cfg.seed;
      c.max_mean_slope = cfg.max_slope;
      return chaos_sweep(c);
    }
    case Command::TvCheck: return tv_bound_suite(cfg.law, cfg.sizes);
    case Command::CouplingTest: {
      const auto kind = cfg.law == ReassignmentLaw::MaxwellBoltzmann ? CouplingKind::MaxwellBoltzmann
                                                                     : CouplingKind::BoseEinstein;
      return coupling_test(kind, bins, cfg.balls, cfg.samples, cfg.seed);
    }
    case Command::Mixing: return mixing_experiment(bins, cfg.balls, cfg.replicas, cfg.seed);
    case Command::Stationary: {
      const Pmf arrivals = parse_pmf_spec(cfg.arrivals);
      auto rep = stationary_report(arrivals, cfg.tol);
      if (cfg.lambda) {
        const auto d = drift_constants(arrivals, *cfg.lambda);
        rep.results["drift"] = {{"lambda", *cfg.lambda}, {"gamma", d.gamma}, {"C", d.c}, {"gamma_in_0_1", d.in_range}};
      }
      return rep;
    }
    case Command::FixedPoint: return fixed_point_report(cfg.law, cfg.r, cfg.tol);
    case Command::Equilibrium: return equilibrium_experiment(cfg.law, cfg.r, cfg.horizon, cfg.seed);
  }
  throw std::logic_error("unknown command");
}

nlohmann::json plan_json(const RunConfig& cfg) {
  nlohmann::json j = {{"command", std::string(command_name(cfg.command))},
                      {"law", std::string(short_name(cfg.law))},
                      {"L", cfg.sizes},
                      {"N", cfg.balls},
                      {"T", cfg.horizon},
                      {"delta", cfg.delta},
                      {"replicas", cfg.replicas},
                      {"samples", cfg.samples},
                      {"r", cfg.r},
                      {"arrivals", cfg.arrivals},
                      {"init", cfg.init},
                      {"tol", cfg.tol},
                      {"seed", cfg.seed},
                      {"output", cfg.output},
                      {"generator", std::string(kGeneratorName)}};
  if (cfg.lambda) j["lambda"] = *cfg.lambda;
  return j;
}

}  // namespace

std::string_view command_name(Command c) noexcept {
  for (const auto& [cmd, name] : kCommands) {
    if (cmd == c) return name;
  }
  return "?";
}

std::vector<std::uint64_t> parse_grid(std::string_view text) {
  std::vector<std::uint64_t> out;
  for (const auto& item : split(text, ',')) {
    const auto dots = item.find("..");
    if (dots == std::string::npos) {
      out.push_back(to_uint(item, "grid"));
      continue;
    }
    const std::string lo_text = item.substr(0, dots);
    std::string hi_text = item.substr(dots + 2);
    std::uint64_t step = 1;
    bool geometric = false;
    if (const auto sep = hi_text.find_first_of(":*"); sep != std::string::npos) {
      geometric = hi_text[sep] == '*';
      step = to_uint(hi_text.substr(sep + 1), "grid step");
      hi_text = hi_text.substr(0, sep);
    }
    const auto lo = to_uint(lo_text, "grid");
    const auto hi = to_uint(hi_text, "grid");
    if (lo > hi) throw UsageError("grid range " + item + " is empty");
    if (geometric ? (step < 2 || lo == 0) : step == 0) throw UsageError("invalid grid step in " + item);
    for (std::uint64_t v = lo; v <= hi; v = geometric ? v * step : v + step) out.push_back(v);
  }
  if (out.empty()) throw UsageError("empty grid");
  return out;
}

Pmf parse_pmf_spec(std::string_view text) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) throw UsageError("law '" + std::string(text) + "' needs a name:params form");
  const std::string kind = trim(text.substr(0, colon));
  const auto params = to_doubles(text.substr(colon + 1), "law parameters");
  try {
    if (kind == "bernoulli") {
      require_count(params, 1, kind);
      return Pmf::bernoulli(params[0]);
    }
    if (kind == "poisson") {
      require_count(params, 1, kind);
      return Pmf::poisson(params[0], kSpecTail);
    }
    if (kind == "geometric") {
      require_count(params, 1, kind);
      return Pmf::geometric(params[0], kSpecTail);
    }
    if (kind == "binomial") {
      require_count(params, 2, kind);
      if (params[0] < 0 || params[0] != std::floor(params[0])) throw UsageError("binomial n must be an integer");
      return Pmf::binomial(static_cast<std::uint64_t>(params[0]), params[1]);
    }
    if (kind == "point") {
      require_count(params, 1, kind);
      if (params[0] < 0 || params[0] != std::floor(params[0])) throw UsageError("point mass must be an integer");
      return Pmf::point(static_cast<std::size_t>(params[0]));
    }
    if (kind == "pmf") return Pmf(params);
  } catch (const UsageError&) {
    throw;
  } catch (const std::exception& e) {
    throw UsageError("invalid law '" + std::string(text) + "': " + e.what());
  }
  throw UsageError("unknown law family '" + kind + "'");
}

RunConfig parse_config(const std::vector<std::string>& args) {
  Parser p;
  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    p.app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    throw UsageError(p.app.help());
  } catch (const CLI::CallForVersion&) {
    throw UsageError(p.app.version());
  } catch (const CLI::CallForAllHelp&) {
    throw UsageError(p.app.help("", CLI::AppFormatMode::All));
  } catch (const CLI::Error& e) {
    throw UsageError(e.what());
  }
  Parser::Slot* chosen = nullptr;
  for (const auto& [cmd, sub] : p.subs) {
    if (sub->parsed()) chosen = &p.slots[static_cast<std::size_t>(cmd)];
  }
  if (chosen == nullptr) throw UsageError("a subcommand is required");
  for (const auto& d : p.defaults) {
    if (d.sub->parsed() && d.option->count() == 0) *d.target = d.value;
  }
  RunConfig& cfg = chosen->cfg;
  try {
    if (!chosen->raw.law.empty()) cfg.law = parse_law(chosen->raw.law);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  if (!chosen->raw.grid.empty()) cfg.sizes = parse_grid(chosen->raw.grid);
  const auto& format = chosen->raw.format;
  cfg.format = format == "csv" ? Format::Csv : format == "both" ? Format::Both : Format::Json;
  return cfg;
}

void validate(const RunConfig& cfg) {
  const auto fail = [](const std::string& what) { throw UsageError(what); };
  const bool single = cfg.command == Command::Simulate || cfg.command == Command::CouplingTest ||
                      cfg.command == Command::Mixing;
  if (single && cfg.sizes.size() != 1) fail("--L takes a single value for this command");
  for (auto l : cfg.sizes) {
    if (l == 0) fail("L must be positive");
  }
  try {
    switch (cfg.command) {
      case Command::Simulate:
        check_occupancy_parameters(cfg.law, cfg.sizes.front(), cfg.balls);
        break;
      case Command::Chaos: {
        ChaosConfig c;
        c.sizes = cfg.sizes;
        c.delta = cfg.delta;
        c.replicas = cfg.replicas;
        c.init_law = parse_pmf_spec(cfg.init);
        validate(c);
        break;
      }
      case Command::TvCheck:
        for (auto l : cfg.sizes) {
          if (l < 2) fail("tv-check needs L >= 2");
        }
        break;
      case Command::CouplingTest:
        if (cfg.law == ReassignmentLaw::FermiDirac) fail("coupling-test supports --law mb or be");
        if (cfg.sizes.front() < 2) fail("coupling-test needs L >= 2");
        if (cfg.law == ReassignmentLaw::BoseEinstein && cfg.balls == 0) fail("the be coupling needs N >= 1");
        break;
      case Command::Mixing:
        if (cfg.balls < 2 || cfg.balls > cfg.sizes.front()) fail("mixing needs 2 <= N <= L");
        if (cfg.replicas == 0) fail("mixing needs at least one replica");
        break;
      case Command::Stationary:
        parse_pmf_spec(cfg.arrivals);
        if (cfg.lambda && !(*cfg.lambda > 0.0)) fail("--lambda must be positive");
        if (!(cfg.tol > 0.0)) fail("--tol must be positive");
        break;
      case Command::FixedPoint:
      case Command::Equilibrium:
        if (!(cfg.r >= 0.0 && cfg.r < 1.0)) fail("--r must lie in [0, 1)");
        if (!(cfg.tol > 0.0)) fail("--tol must be positive");
        break;
    }
  } catch (const std::domain_error& e) {
    fail(e.what());
  } catch (const std::invalid_argument& e) {
    fail(e.what());
  }
}

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  if (cfg.dry_run) {
    out << plan_json(cfg).dump(2) << '\n';
    return 0;
  }
  ExperimentReport rep;
  std::string custom_csv;
  try {
    rep = dispatch(cfg, custom_csv);
  } catch (const std::domain_error& e) {
    // Reachable-state failures such as an unstable queue are assertion failures.
    err << "grbb " << command_name(cfg.command) << ": FAIL: " << e.what() << '\n';
    return 1;
  } catch (const std::runtime_error& e) {
    err << "grbb " << command_name(cfg.command) << ": FAIL: " << e.what() << '\n';
    return 1;
  }

  const std::string json_text = rep.to_json().dump(2) + "\n";
  const std::string csv_text = custom_csv.empty() ? rep.to_csv() : custom_csv;
  const bool want_json = cfg.format != Format::Csv;
  const bool want_csv = cfg.format != Format::Json;
  try {
    if (cfg.output.empty()) {
      if (want_json) out << json_text;
      if (want_csv) out << csv_text;
    } else {
      if (want_json) write_file(cfg.output + ".json", json_text);
      if (want_csv) write_file(cfg.output + ".csv", csv_text);
    }
  } catch (const std::ios_base::failure& e) {
    err << "grbb: " << e.what() << '\n';
    return 2;
  }
  auto& summary = cfg.output.empty() ? err : out;
  summary << "grbb " << command_name(cfg.command) << ": " << (rep.passed() ? "PASS" : "FAIL") << " ("
          << rep.points.size() << " points, " << rep.failures.size() << " failures, " << rep.warnings.size()
          << " warnings)";
  if (!rep.failures.empty()) summary << "; first failure: " << rep.failures.front();
  summary << '\n';
  return rep.passed() ? 0 : 1;
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args(argv + 1, argv + argc);
  RunConfig cfg;
  try {
    cfg = parse_config(args);
    validate(cfg);
  } catch (const UsageError& e) {
    const std::string msg = e.what();
    const bool help = std::find(args.begin(), args.end(), "--help") != args.end() ||
                      std::find(args.begin(), args.end(), "-h") != args.end();
    if (help) {
      out << msg;
      return 0;
    }
    if (std::find(args.begin(), args.end(), "--version") != args.end()) {
      out << msg << '\n';
      return 0;
    }
    err << "grbb: usage error: " << msg << "\nRun 'grbb --help' for the list of commands and flags.\n";
    return 2;
  }
  return run(cfg, out, err);
}

}  // namespace grbb::cli
