#pragma once

// Command-line front end: simulate, experiment, verify.
//
// Exit codes: 0 equilibrium / success, 1 error, 2 cycle or cap, 3 fixture failure.

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "mivote/mivote.hpp"

namespace mivote::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitNotConverged = 2;
inline constexpr int kExitVerifyFailed = 3;

inline constexpr const char* kOutDirEnv = "MIVOTE_OUT_DIR";

namespace detail {

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

inline std::vector<Rational> parse_radii(const std::string& text, std::size_t p) {
  std::vector<Rational> r;
  for (const auto& part : split(text, ',')) r.push_back(parse_rational(part));
  if (r.size() == 1) r.assign(p, r.front());
  if (r.size() != p)
    throw ParseError("--radii: expected 1 or " + std::to_string(p) + " values, got " + std::to_string(r.size()));
  for (const auto& x : r)
    if (x < 0) throw ParseError("--radii: values must be non-negative");
  return r;
}

inline std::pair<Rational, Rational> parse_alternating(const std::string& text) {
  auto parts = split(text, ':');
  if (parts.size() != 2) throw ParseError("--alternating: expected rc:ro");
  return {parse_rational(parts[0]), parse_rational(parts[1])};
}

template <class T>
std::vector<T> parse_list(const std::string& text, const char* flag) {
  std::vector<T> out;
  for (const auto& part : split(text, ',')) {
    try {
      std::size_t used = 0;
      const long long v = std::stoll(part, &used);
      if (used != part.size() || v < 0) throw std::invalid_argument(part);
      out.push_back(static_cast<T>(v));
    } catch (const std::exception&) {
      throw ParseError(std::string(flag) + ": invalid value '" + part + "'");
    }
  }
  if (out.empty()) throw ParseError(std::string(flag) + ": empty list");
  return out;
}

inline std::string default_out_dir() {
  const char* env = std::getenv(kOutDirEnv);
  return env && *env ? env : "";
}

inline std::filesystem::path prepare_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) throw std::runtime_error("cannot create output directory '" + dir + "'");
  return dir;
}

inline std::ofstream open_out(const std::filesystem::path& p) {
  std::ofstream f(p, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot write '" + p.string() + "'");
  return f;
}

}  // namespace detail

struct SimulateOptions {
  std::string profile;
  std::string dynamics = "ldi";
  std::string metric = "linf";
  std::string radii = "0";
  std::string alternating;
  std::string schedule = "roundrobin";
  long cap = kDefaultRoundCap;
  std::optional<std::uint64_t> seed;
  bool nonatomic = false;
  std::string epsilon;
  std::string batch = "single";
  std::string out;
  std::string trace;
};

struct ExperimentOptions {
  std::string n = "7,11";
  std::string p = "5";
  std::string r = "0,1,2,3";
  std::size_t m = 1000;
  std::optional<std::uint64_t> seed;
  long cap = kDefaultRoundCap;
  std::string metric = "linf";
  std::string dynamics = "ldi";
  unsigned workers = 1;
  std::string out;
};

struct VerifyOptions {
  std::vector<std::string> only;
};

inline int simulate(const SimulateOptions& o, std::ostream& out) {
  const ProfileFile file = load_profile(o.profile);
  const IssueDomain& d = file.prefs.domain;
  const std::size_t n = file.prefs.agents(), p = d.issues();
  const Metric metric = parse_metric(o.metric);
  if (o.dynamics != "br" && o.dynamics != "ldi") throw ParseError("--dynamics: expected br or ldi");
  const DynamicsKind kind = o.dynamics == "br" ? DynamicsKind::BestResponse : DynamicsKind::LocalDominance;
  if (o.cap < 1) throw ParseError("--cap: must be at least 1");

  SchedulerPolicy scheduler;
  if (o.schedule == "random") {
    if (!o.seed) throw ParseError("--schedule random requires --seed");
    scheduler = UniformRandom{*o.seed};
  } else if (o.schedule == "roundrobin") {
    scheduler = RoundRobin{};
  } else if (o.schedule.rfind("scripted:", 0) == 0) {
    scheduler = load_schedule(o.schedule.substr(9));
  } else {
    throw ParseError("--schedule: expected random, roundrobin or scripted:FILE");
  }

  const UncertaintySpec spec{metric, detail::parse_radii(o.radii, p)};
  std::optional<std::pair<Rational, Rational>> alt;
  if (!o.alternating.empty()) alt = detail::parse_alternating(o.alternating);
  if (kind == DynamicsKind::BestResponse && (!spec.is_exact() || alt))
    throw ParseError("--dynamics br takes no uncertainty (drop --radii/--alternating)");

  Json config{{"profile", o.profile}, {"dynamics", o.dynamics}, {"metric", o.metric},
              {"radii", o.radii},     {"schedule", o.schedule}, {"cap", o.cap}};
  if (alt) config["alternating"] = o.alternating;

  std::optional<std::filesystem::path> trace_path;
  if (!o.trace.empty()) {
    trace_path = o.trace;
  } else {
    const std::string dir = o.out.empty() ? detail::default_out_dir() : o.out;
    if (!dir.empty()) trace_path = detail::prepare_dir(dir) / "trace.jsonl";
  }
  std::ofstream trace_file;
  if (trace_path) trace_file = detail::open_out(*trace_path);

  RunResult res;
  std::ostringstream extra;
  if (o.nonatomic) {
    if (kind != DynamicsKind::LocalDominance) throw ParseError("--nonatomic supports --dynamics ldi only");
    std::size_t copies = 1;
    if (!o.epsilon.empty()) {
      const Rational eps = parse_rational(o.epsilon);
      if (eps <= 0 || eps.numerator() != 1 || eps.denominator() % static_cast<std::int64_t>(n) != 0)
        throw ParseError("--epsilon: must be 1/k with k a multiple of the agent count " + std::to_string(n));
      copies = static_cast<std::size_t>(eps.denominator()) / n;
    }
    BatchMode batch;
    if (o.batch == "single") batch = BatchMode::Single;
    else if (o.batch == "all") batch = BatchMode::All;
    else if (o.batch == "random") batch = BatchMode::RandomSubset;
    else throw ParseError("--batch: expected single, all or random");
    NonatomicConfig cfg;
    cfg.profile = MassProfile::from_agents(file.prefs, file.votes, std::vector<UncertaintySpec>(n, spec), copies);
    if (alt) cfg.uncertainty.alternating = std::vector<std::pair<Rational, Rational>>(cfg.profile.sets(), *alt);
    cfg.scheduler = scheduler;
    cfg.batch = batch;
    cfg.cap = o.cap;
    cfg.record_trace = trace_path.has_value();
    config["nonatomic"] = true;
    config["epsilon"] = format_rational(cfg.profile.epsilon());
    config["batch"] = o.batch;
    const NonatomicRunResult nres = nonatomic_run(cfg);
    if (trace_path) TraceWriter(trace_file).run(config, o.seed, nres, cfg.profile.sets());
    extra << " epsilon=" << format_rational(nres.epsilon);
    res = nres.run;
  } else {
    DynamicsConfig cfg;
    cfg.prefs = file.prefs;
    cfg.initial = file.votes;
    cfg.kind = kind;
    cfg.uncertainty = alt ? UncertaintyMode::alternating(metric, std::vector<std::pair<Rational, Rational>>(n, *alt))
                          : UncertaintyMode::fixed_uniform(n, spec);
    cfg.scheduler = scheduler;
    cfg.cap = o.cap;
    cfg.record_trace = trace_path.has_value();
    res = run(cfg);
    if (trace_path) TraceWriter(trace_file).run(config, o.seed, res);
  }
  if (trace_path && !trace_file.flush()) throw std::runtime_error("failed writing '" + trace_path->string() + "'");

  out << "terminal=" << terminal_name(res.terminal) << " rounds=" << res.rounds;
  if (res.cycle) out << " cycle_entry=" << res.cycle->entry << " period=" << res.cycle->period;
  out << " initial_outcome=" << to_string(res.initial_outcome) << " final_outcome=" << to_string(res.final_outcome)
      << extra.str();
  if (trace_path) out << " trace=" << trace_path->string();
  out << '\n';
  return res.terminal == Terminal::Equilibrium ? kExitOk : kExitNotConverged;
}

inline int experiment(const ExperimentOptions& o, std::ostream& out) {
  if (!o.seed) throw ParseError("--seed is required");
  ExperimentGrid g;
  g.n_values = detail::parse_list<std::size_t>(o.n, "--n");
  g.p_values = detail::parse_list<std::size_t>(o.p, "--p");
  g.r_values = detail::parse_list<std::int64_t>(o.r, "--r");
  g.m = o.m;
  g.cap = o.cap;
  g.master_seed = *o.seed;
  g.metric = parse_metric(o.metric);
  if (o.dynamics != "br" && o.dynamics != "ldi") throw ParseError("--dynamics: expected br or ldi");
  g.kind = o.dynamics == "br" ? DynamicsKind::BestResponse : DynamicsKind::LocalDominance;
  for (auto p : g.p_values)
    if (p > 20) throw ParseError("--p: at most 20 binary issues");
  g.check();

  std::string dir = o.out.empty() ? detail::default_out_dir() : o.out;
  if (dir.empty()) dir = ".";
  const auto base = detail::prepare_dir(dir);
  auto raw = detail::open_out(base / "raw.csv");
  auto agg = detail::open_out(base / "aggregate.csv");

  const ExperimentResult res = run_experiment(g, o.workers);
  write_raw_csv(raw, res.rows);
  write_aggregate_csv(agg, res.cells);
  if (!raw.flush() || !agg.flush()) throw std::runtime_error("failed writing CSV output in '" + dir + "'");

  char buf[256];
  for (const auto& c : res.cells) {
    std::snprintf(buf, sizeof buf,
                  "n=%zu p=%zu r=%lld m=%zu truthful_eq=%zu converged=%zu capped=%zu mean_steps=%.3f "
                  "welfare_pct=%.3f",
                  c.n, c.p, static_cast<long long>(c.r), c.m, c.truthful_equilibrium, c.converged, c.capped,
                  c.mean_steps, c.mean_welfare_pct_change);
    out << buf << '\n';
  }
  out << "raw=" << (base / "raw.csv").string() << " aggregate=" << (base / "aggregate.csv").string()
      << " rows=" << res.rows.size() << '\n';
  return kExitOk;
}

inline int verify(const VerifyOptions& o, const std::vector<Fixture>& fixtures, std::ostream& out) {
  std::vector<std::string> wanted;
  for (const auto& item : o.only)
    for (const auto& name : detail::split(item, ','))
      if (!name.empty()) wanted.push_back(name);
  for (const auto& name : wanted) {
    bool known = false;
    for (const auto& f : fixtures) known = known || f.name == name;
    if (!known) throw ParseError("--only: unknown fixture '" + name + "'");
  }
  bool all = true;
  std::size_t ran = 0;
  for (const auto& f : fixtures) {
    if (!wanted.empty() && std::find(wanted.begin(), wanted.end(), f.name) == wanted.end()) continue;
    ++ran;
    FixtureReport rep;
    try {
      rep = f.verify();
    } catch (const std::exception& e) {
      rep = FixtureReport{f.name, {{"replay", false, e.what()}}};
    }
    out << "fixture=" << f.name << " status=" << (rep.passed() ? "pass" : "fail") << " checks=" << rep.checks.size();
    if (const auto* bad = rep.first_failure()) {
      all = false;
      out << " failed_check=\"" << bad->label << "\"";
      if (!bad->detail.empty()) out << " detail=\"" << bad->detail << "\"";
    }
    out << '\n';
  }
  out << "fixtures=" << ran << " status=" << (all ? "pass" : "fail") << '\n';
  return all ? kExitOk : kExitVerifyFailed;
}

/// Parses `args` (without the program name) and runs the chosen command.
inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err,
               const std::vector<Fixture>& fixtures = bundled_fixtures()) {
  CLI::App app{"Multi-issue iterative plurality voting simulator", "mivote"};
  app.set_config("--config", "", "TOML config; command-line flags take precedence");
  app.require_subcommand(1);

  SimulateOptions so;
  auto* sim = app.add_subcommand("simulate", "Run improvement dynamics on a profile file");
  sim->add_option("--profile", so.profile, "Profile JSON")->required();
  sim->add_option("--dynamics", so.dynamics, "br or ldi")->capture_default_str();
  sim->add_option("--metric", so.metric, "linf or multiplicative")->capture_default_str();
  sim->add_option("--radii", so.radii, "Per-issue radii, comma-separated, or one value for all")->capture_default_str();
  sim->add_option("--alternating", so.alternating, "rc:ro alternating radii for every agent");
  sim->add_option("--schedule", so.schedule, "random, roundrobin or scripted:FILE")->capture_default_str();
  sim->add_option("--cap", so.cap, "Round cap")->capture_default_str();
  sim->add_option("--seed", so.seed, "Scheduler seed");
  sim->add_flag("--nonatomic", so.nonatomic, "Treat each agent as an eps-mass set");
  sim->add_option("--epsilon", so.epsilon, "Set mass 1/k; agents are replicated to k sets");
  sim->add_option("--batch", so.batch, "single, all or random")->capture_default_str();
  sim->add_option("--out", so.out, "Output directory (trace.jsonl)");
  sim->add_option("--trace", so.trace, "Trace file path");

  ExperimentOptions eo;
  auto* exp = app.add_subcommand("experiment", "Run the Monte-Carlo grid and write CSVs");
  exp->add_option("--n", eo.n, "Agent counts")->capture_default_str();
  exp->add_option("--p", eo.p, "Issue counts")->capture_default_str();
  exp->add_option("--r", eo.r, "Radii")->capture_default_str();
  exp->add_option("--m", eo.m, "Profiles per cell")->capture_default_str();
  exp->add_option("--seed", eo.seed, "Master seed")->required();
  exp->add_option("--cap", eo.cap, "Round cap")->capture_default_str();
  exp->add_option("--metric", eo.metric, "linf or multiplicative")->capture_default_str();
  exp->add_option("--dynamics", eo.dynamics, "br or ldi")->capture_default_str();
  exp->add_option("--workers", eo.workers, "Worker threads")->capture_default_str();
  exp->add_option("--out", eo.out, "Output directory");

  VerifyOptions vo;
  auto* ver = app.add_subcommand("verify", "Replay the bundled worked examples");
  ver->add_option("--only", vo.only, "Fixture names");

  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }

  try {
    if (*sim) return simulate(so, out);
    if (*exp) return experiment(eo, out);
    return verify(vo, fixtures, out);
  } catch (const SchedulerError& e) {
    err << "error: scheduler: " << e.what() << '\n';
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
  }
  return kExitError;
}

}  // namespace mivote::cli
