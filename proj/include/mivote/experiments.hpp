#pragma once

// Monte-Carlo experiments: preference samplers, Borda welfare, and the grid
// runner over (n, p, r) that reports per-profile rows and per-cell
// aggregates as CSV.

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cstdio>
#include <map>
#include <numeric>
#include <optional>
#include <ostream>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "mivote/domain.hpp"
#include "mivote/dynamics.hpp"
#include "mivote/uncertainty.hpp"

namespace mivote {

using Rng = std::mt19937_64;

inline Ranking uniform_ranking(const IssueDomain& d, Rng& rng) {
  std::vector<std::size_t> order(d.alternatives());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::shuffle(order.begin(), order.end(), rng);
  return Ranking(std::move(order));
}

/// n independent uniformly random rankings.
inline PreferenceProfile sample_impartial_culture(std::size_t n, const IssueDomain& d, Rng& rng) {
  std::vector<Ranking> r;
  r.reserve(n);
  for (std::size_t j = 0; j < n; ++j) r.push_back(uniform_ranking(d, rng));
  return PreferenceProfile(d, std::move(r));
}

/// Conditional preference tables for an O-legal ranking: for each position t
/// in the order, a map from the values of the issues placed before t to the
/// local ordering (best first) of the issue at t.
using ConditionalTables = std::vector<std::map<std::vector<Candidate>, std::vector<Candidate>>>;

/// Ranks alternatives lexicographically along `order`, each issue by its
/// local ordering given the earlier issues.
inline Ranking o_legal_ranking(const IssueDomain& d, const IssueOrder& order, const ConditionalTables& tables) {
  const std::size_t p = d.issues();
  order.check(p);
  if (tables.size() != p) throw DomainError("need one conditional table per issue");
  // Sort key: local rank of each issue in order.
  std::vector<std::vector<std::size_t>> keys(d.alternatives());
  for (std::size_t idx = 0; idx < d.alternatives(); ++idx) {
    const Alternative a = d.alternative(idx);
    std::vector<Candidate> prefix;
    for (std::size_t t = 0; t < p; ++t) {
      const std::size_t issue = order.order[t];
      auto it = tables[t].find(prefix);
      if (it == tables[t].end()) throw DomainError("conditional table misses a context");
      const auto& local = it->second;
      auto pos = std::find(local.begin(), local.end(), a[issue]);
      if (pos == local.end()) throw DomainError("local ordering misses a candidate");
      keys[idx].push_back(static_cast<std::size_t>(pos - local.begin()));
      prefix.push_back(a[issue]);
    }
  }
  std::vector<std::size_t> alts(d.alternatives());
  std::iota(alts.begin(), alts.end(), std::size_t{0});
  std::sort(alts.begin(), alts.end(), [&](std::size_t x, std::size_t y) { return keys[x] < keys[y]; });
  return Ranking(std::move(alts));
}

inline ConditionalTables sample_conditional_tables(const IssueDomain& d, const IssueOrder& order, Rng& rng) {
  const std::size_t p = d.issues();
  ConditionalTables tables(p);
  std::vector<std::vector<Candidate>> prefixes{{}};
  for (std::size_t t = 0; t < p; ++t) {
    const std::size_t issue = order.order[t];
    std::vector<std::vector<Candidate>> next;
    for (const auto& prefix : prefixes) {
      std::vector<Candidate> local(static_cast<std::size_t>(d.size(issue)));
      std::iota(local.begin(), local.end(), 0);
      std::shuffle(local.begin(), local.end(), rng);
      tables[t].emplace(prefix, std::move(local));
      for (Candidate c = 0; c < d.size(issue); ++c) {
        auto ext = prefix;
        ext.push_back(c);
        next.push_back(std::move(ext));
      }
    }
    prefixes = std::move(next);
  }
  return tables;
}

/// n rankings, all O-legal for the common `order`.
inline PreferenceProfile sample_O_legal(std::size_t n, const IssueDomain& d, const IssueOrder& order, Rng& rng) {
  order.check(d.issues());
  std::vector<Ranking> r;
  r.reserve(n);
  for (std::size_t j = 0; j < n; ++j) r.push_back(o_legal_ranking(d, order, sample_conditional_tables(d, order, rng)));
  return PreferenceProfile(d, std::move(r));
}

/// Sum over agents of D minus the outcome's 1-based position.
inline Score borda_welfare(const PreferenceProfile& prefs, const Alternative& outcome) {
  const std::size_t idx = prefs.domain.index(outcome);
  const auto D = static_cast<Score>(prefs.domain.alternatives());
  Score w = 0;
  for (const auto& r : prefs.rankings) w += D - static_cast<Score>(r.rank(idx) + 1);
  return w;
}

// ---------------------------------------------------------------------------
// Grid runner

struct ExperimentGrid {
  std::vector<std::size_t> n_values;
  std::vector<std::size_t> p_values;
  std::vector<std::int64_t> r_values;
  std::size_t m = 1000;
  long cap = kDefaultRoundCap;
  std::uint64_t master_seed = 0;
  DynamicsKind kind = DynamicsKind::LocalDominance;
  Metric metric = Metric::LInf;

  void check() const {
    if (n_values.empty() || p_values.empty() || r_values.empty()) throw DomainError("grid axes must be nonempty");
    if (m < 1) throw DomainError("profiles per cell must be at least 1");
    if (cap < 1) throw DomainError("round cap must be at least 1");
    for (auto n : n_values)
      if (n < 1) throw DomainError("n must be positive");
    for (auto p : p_values)
      if (p < 1) throw DomainError("p must be positive");
    for (auto r : r_values)
      if (r < 0) throw DomainError("r must be non-negative");
  }
};

struct ProfileRow {
  std::size_t n = 0, p = 0;
  std::int64_t r = 0;
  std::size_t profile_index = 0;
  std::uint64_t seed = 0;
  bool truthful_is_equilibrium = false;
  Terminal terminal = Terminal::Equilibrium;
  long steps = 0;
  Score welfare_truthful = 0;
  std::optional<Score> welfare_final;        // converged runs only
  std::optional<double> welfare_pct_change;  // converged runs with nonzero baseline
};

struct CellResult {
  std::size_t n = 0, p = 0;
  std::int64_t r = 0;
  std::size_t m = 0;
  std::size_t truthful_equilibrium = 0;  // converged with zero steps
  std::size_t converged = 0;             // converged after at least one step
  std::size_t capped = 0;                // cycled or hit the cap
  double mean_steps = 0;                 // over runs converged after >= 1 step
  long median_steps = 0;
  long p90_steps = 0;
  long max_steps = 0;
  double mean_welfare_truthful = 0;
  double mean_welfare_final = 0;  // over converged runs
  double mean_welfare_pct_change = 0;
  std::size_t welfare_pct_samples = 0;

  double non_equilibrium_fraction() const { return m ? 1.0 - static_cast<double>(truthful_equilibrium) / m : 0.0; }
  double capped_fraction() const { return m ? static_cast<double>(capped) / m : 0.0; }
};

struct ExperimentResult {
  std::vector<ProfileRow> rows;  // ordered by (cell, profile index)
  std::vector<CellResult> cells;
};

/// Seed of profile `index` in cell (n, p); shared across radii so every
/// radius sees the same preference profiles.
inline std::uint64_t profile_seed(std::uint64_t master, std::size_t n, std::size_t p, std::size_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(master), static_cast<std::uint32_t>(master >> 32),
                    static_cast<std::uint32_t>(n), static_cast<std::uint32_t>(p),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  std::uint32_t out[2];
  seq.generate(out, out + 2);
  return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

inline std::uint64_t scheduler_seed(std::uint64_t profile_seed_value, std::int64_t r) {
  std::seed_seq seq{static_cast<std::uint32_t>(profile_seed_value), static_cast<std::uint32_t>(profile_seed_value >> 32),
                    static_cast<std::uint32_t>(r), 0x5eedu};
  std::uint32_t out[2];
  seq.generate(out, out + 2);
  return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

/// Samples one impartial-culture profile and runs the dynamics from the
/// truthful vote profile with the uniform random scheduler.
inline ProfileRow run_profile(const ExperimentGrid& g, std::size_t n, std::size_t p, std::int64_t r,
                              std::size_t index) {
  ProfileRow row;
  row.n = n;
  row.p = p;
  row.r = r;
  row.profile_index = index;
  row.seed = profile_seed(g.master_seed, n, p, index);

  Rng rng(row.seed);
  const IssueDomain d = IssueDomain::binary(p);
  DynamicsConfig cfg;
  cfg.prefs = sample_impartial_culture(n, d, rng);
  cfg.initial = truthful_votes(cfg.prefs);
  cfg.kind = g.kind;
  cfg.uncertainty = UncertaintyMode::fixed_uniform(n, UncertaintySpec::uniform(p, Rational(r), g.metric));
  cfg.scheduler = UniformRandom{scheduler_seed(row.seed, r)};
  cfg.cap = g.cap;
  cfg.record_trace = false;

  const RunResult res = run(cfg);
  row.terminal = res.terminal;
  row.steps = res.rounds;
  row.truthful_is_equilibrium = res.terminal == Terminal::Equilibrium && res.rounds == 0;
  row.welfare_truthful = borda_welfare(cfg.prefs, res.initial_outcome);
  if (res.terminal == Terminal::Equilibrium) {
    row.welfare_final = borda_welfare(cfg.prefs, res.final_outcome);
    if (row.welfare_truthful != 0)
      row.welfare_pct_change = 100.0 * static_cast<double>(*row.welfare_final - row.welfare_truthful) /
                               static_cast<double>(row.welfare_truthful);
  }
  return row;
}

inline CellResult aggregate_cell(const std::vector<ProfileRow>& rows) {
  CellResult c;
  if (rows.empty()) return c;
  c.n = rows.front().n;
  c.p = rows.front().p;
  c.r = rows.front().r;
  c.m = rows.size();
  std::vector<long> steps;
  double welfare_truthful = 0, welfare_final = 0, pct = 0;
  std::size_t converged_total = 0;
  for (const auto& row : rows) {
    welfare_truthful += static_cast<double>(row.welfare_truthful);
    if (row.terminal != Terminal::Equilibrium) {
      ++c.capped;
      continue;
    }
    ++converged_total;
    welfare_final += static_cast<double>(*row.welfare_final);
    if (row.welfare_pct_change) {
      pct += *row.welfare_pct_change;
      ++c.welfare_pct_samples;
    }
    if (row.truthful_is_equilibrium) {
      ++c.truthful_equilibrium;
    } else {
      ++c.converged;
      steps.push_back(row.steps);
    }
  }
  c.mean_welfare_truthful = welfare_truthful / static_cast<double>(c.m);
  if (converged_total) c.mean_welfare_final = welfare_final / static_cast<double>(converged_total);
  if (c.welfare_pct_samples) c.mean_welfare_pct_change = pct / static_cast<double>(c.welfare_pct_samples);
  if (!steps.empty()) {
    std::sort(steps.begin(), steps.end());
    c.mean_steps = std::accumulate(steps.begin(), steps.end(), 0.0) / static_cast<double>(steps.size());
    c.median_steps = steps[(steps.size() - 1) / 2];
    c.p90_steps = steps[(steps.size() - 1) * 9 / 10];
    c.max_steps = steps.back();
  }
  return c;
}

/// Runs every cell of the grid. Output is independent of `workers`.
inline ExperimentResult run_experiment(const ExperimentGrid& g, unsigned workers = 1) {
  g.check();
  struct Task {
    std::size_t n, p;
    std::int64_t r;
    std::size_t index;
  };
  std::vector<Task> tasks;
  for (auto n : g.n_values)
    for (auto p : g.p_values)
      for (auto r : g.r_values)
        for (std::size_t k = 0; k < g.m; ++k) tasks.push_back({n, p, r, k});

  ExperimentResult out;
  out.rows.resize(tasks.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t t = next++; t < tasks.size(); t = next++)
      out.rows[t] = run_profile(g, tasks[t].n, tasks[t].p, tasks[t].r, tasks[t].index);
  };
  workers = std::max(1u, workers);
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }

  for (std::size_t start = 0; start < out.rows.size(); start += g.m) {
    std::vector<ProfileRow> cell(out.rows.begin() + static_cast<std::ptrdiff_t>(start),
                                 out.rows.begin() + static_cast<std::ptrdiff_t>(start + g.m));
    out.cells.push_back(aggregate_cell(cell));
  }
  return out;
}

// ---------------------------------------------------------------------------
// CSV

inline constexpr const char* kRawCsvSchema = "# mivote-experiment-raw v1";
inline constexpr const char* kAggregateCsvSchema = "# mivote-experiment-aggregate v1";

namespace detail {
inline std::string fixed6(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", x);
  return buf;
}
}  // namespace detail

inline void write_raw_csv(std::ostream& os, const std::vector<ProfileRow>& rows) {
  os << kRawCsvSchema << '\n'
     << "n,p,r,profile_index,seed,truthful_is_equilibrium,terminal,steps,welfare_truthful,welfare_final,"
        "welfare_pct_change\n";
  for (const auto& row : rows) {
    os << row.n << ',' << row.p << ',' << row.r << ',' << row.profile_index << ',' << row.seed << ','
       << (row.truthful_is_equilibrium ? 1 : 0) << ',' << terminal_name(row.terminal) << ',' << row.steps << ','
       << row.welfare_truthful << ',';
    if (row.welfare_final) os << *row.welfare_final;
    os << ',';
    if (row.welfare_pct_change) os << detail::fixed6(*row.welfare_pct_change);
    os << '\n';
  }
}

inline void write_aggregate_csv(std::ostream& os, const std::vector<CellResult>& cells) {
  os << kAggregateCsvSchema << '\n'
     << "n,p,r,m,truthful_equilibrium,converged,capped,non_equilibrium_fraction,capped_fraction,mean_steps,"
        "median_steps,p90_steps,max_steps,mean_welfare_truthful,mean_welfare_final,mean_welfare_pct_change,"
        "welfare_pct_samples\n";
  for (const auto& c : cells) {
    os << c.n << ',' << c.p << ',' << c.r << ',' << c.m << ',' << c.truthful_equilibrium << ',' << c.converged << ','
       << c.capped << ',' << detail::fixed6(c.non_equilibrium_fraction()) << ','
       << detail::fixed6(c.capped_fraction()) << ',' << detail::fixed6(c.mean_steps) << ',' << c.median_steps << ','
       << c.p90_steps << ',' << c.max_steps << ',' << detail::fixed6(c.mean_welfare_truthful) << ','
       << detail::fixed6(c.mean_welfare_final) << ',' << detail::fixed6(c.mean_welfare_pct_change) << ','
       << c.welfare_pct_samples << '\n';
  }
}

}  // namespace mivote
