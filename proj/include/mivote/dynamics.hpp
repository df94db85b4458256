#pragma once

// Iterative voting dynamics: one agent changes its vote on one issue per
// round until no improvement step remains, the deterministic system state
// repeats, or the round cap is hit.

#include <boost/functional/hash.hpp>

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <unordered_map>
#include <utility>
#include <variant>
#include <vector>

#include "mivote/domain.hpp"
#include "mivote/dominance.hpp"
#include "mivote/error.hpp"
#include "mivote/uncertainty.hpp"

namespace mivote {

inline constexpr long kDefaultRoundCap = 50'000;

enum class DynamicsKind { BestResponse, LocalDominance };

inline std::string_view dynamics_name(DynamicsKind k) { return k == DynamicsKind::BestResponse ? "br" : "ldi"; }

/// Per-agent uncertainty: either fixed radii, or alternating radii where the
/// issue being changed gets the smaller radius and all others the larger.
class UncertaintyMode {
 public:
  enum class Kind { Fixed, Alternating };

  static UncertaintyMode fixed(std::vector<UncertaintySpec> per_agent) {
    UncertaintyMode m;
    m.kind_ = Kind::Fixed;
    m.fixed_ = std::move(per_agent);
    return m;
  }
  static UncertaintyMode fixed_uniform(std::size_t n, const UncertaintySpec& spec) {
    return fixed(std::vector<UncertaintySpec>(n, spec));
  }
  /// (r_current, r_other) per agent.
  static UncertaintyMode alternating(Metric metric, std::vector<std::pair<Rational, Rational>> per_agent) {
    UncertaintyMode m;
    m.kind_ = Kind::Alternating;
    m.metric_ = metric;
    m.alternating_ = std::move(per_agent);
    for (const auto& [rc, ro] : m.alternating_)
      if (!(rc >= 0 && rc < ro)) throw DomainError("alternating uncertainty needs 0 <= r_current < r_other");
    return m;
  }

  Kind kind() const noexcept { return kind_; }
  Metric metric() const noexcept { return kind_ == Kind::Fixed && !fixed_.empty() ? fixed_.front().metric : metric_; }
  const std::vector<UncertaintySpec>& fixed_specs() const noexcept { return fixed_; }
  const std::vector<std::pair<Rational, Rational>>& alternating_radii() const noexcept { return alternating_; }

  void check(std::size_t n, std::size_t p) const {
    if (kind_ == Kind::Fixed) {
      if (fixed_.size() != n) throw DomainError("need one uncertainty spec per agent");
      for (const auto& s : fixed_) s.check(p);
    } else if (alternating_.size() != n) {
      throw DomainError("need one alternating radius pair per agent");
    }
  }

  /// Radii agent j uses when evaluating a change on `issue`.
  UncertaintySpec spec_for(std::size_t j, std::size_t issue, std::size_t p) const {
    if (kind_ == Kind::Fixed) return fixed_.at(j);
    const auto& [rc, ro] = alternating_.at(j);
    UncertaintySpec s = UncertaintySpec::uniform(p, ro, metric_);
    s.radii.at(issue) = rc;
    return s;
  }

 private:
  Kind kind_ = Kind::Fixed;
  Metric metric_ = Metric::LInf;
  std::vector<UncertaintySpec> fixed_;
  std::vector<std::pair<Rational, Rational>> alternating_;
};

/// (agent, issue, target candidate).
struct Step {
  std::size_t agent = 0;
  std::size_t issue = 0;
  Candidate target = 0;

  auto operator<=>(const Step&) const = default;
};

struct ScriptedStep {
  std::size_t agent = 0;
  std::size_t issue = 0;
  std::optional<Candidate> target;  // unset: first available target
};

/// Replays a fixed list of steps cyclically; each must be valid when due.
struct Scripted {
  std::vector<ScriptedStep> steps;
};
/// Scans (agent, issue) pairs cyclically from where it last stopped.
struct RoundRobin {};
/// Uniform over every available (agent, issue, target) triple.
struct UniformRandom {
  std::uint64_t seed = 0;
};

using SchedulerPolicy = std::variant<Scripted, RoundRobin, UniformRandom>;

inline bool is_deterministic(const SchedulerPolicy& s) { return !std::holds_alternative<UniformRandom>(s); }

struct DynamicsConfig {
  PreferenceProfile prefs;
  VoteProfile initial;
  DynamicsKind kind = DynamicsKind::LocalDominance;
  UncertaintyMode uncertainty;
  SchedulerPolicy scheduler = RoundRobin{};
  long cap = kDefaultRoundCap;
  bool record_trace = true;
};

struct StepRecord {
  long round = 0;
  std::size_t agent = 0;
  std::size_t issue = 0;
  Candidate from = 0;
  Candidate to = 0;
  Alternative outcome_after;
};

enum class Terminal { Equilibrium, CycleDetected, CapReached };

inline std::string_view terminal_name(Terminal t) {
  switch (t) {
    case Terminal::Equilibrium: return "equilibrium";
    case Terminal::CycleDetected: return "cycle";
    case Terminal::CapReached: return "cap";
  }
  return "?";
}

struct CycleInfo {
  long entry = 0;
  long period = 0;
  bool operator==(const CycleInfo&) const = default;
};

struct RunResult {
  Terminal terminal = Terminal::Equilibrium;
  long rounds = 0;  // executed steps
  std::optional<CycleInfo> cycle;
  std::vector<StepRecord> trace;
  VoteProfile initial_profile;
  VoteProfile final_profile;
  Alternative initial_outcome;
  Alternative final_outcome;
};

// ---------------------------------------------------------------------------

/// Improvement targets of agent j on `issue` at `profile`, given the tally
/// `full` of that profile.
inline std::vector<Candidate> agent_issue_targets(const PreferenceProfile& prefs, const VoteProfile& profile,
                                                  const ScoreTuple& full, std::size_t j, std::size_t issue,
                                                  DynamicsKind kind, const UncertaintyMode& mode) {
  const IssueDomain& d = prefs.domain;
  ScoreTuple center = full;
  center.add(profile[j], -1);
  if (kind == DynamicsKind::BestResponse) {
    StepContext ctx{d, prefs.rankings[j], std::move(center), profile[j], UncertaintySpec::exact(d.issues()), issue};
    const Alternative br = best_response(ctx);
    if (br == profile[j]) return {};
    return {br[issue]};
  }
  StepContext ctx{d, prefs.rankings[j], std::move(center), profile[j], mode.spec_for(j, issue, d.issues()), issue};
  return IssueDominance(ctx).ldi_targets();
}

/// Every valid improvement step at `profile`, ordered by (agent, issue, target).
inline std::vector<Step> enumerate_steps(const PreferenceProfile& prefs, const VoteProfile& profile,
                                         DynamicsKind kind, const UncertaintyMode& mode) {
  const IssueDomain& d = prefs.domain;
  const ScoreTuple full = score(profile, d);
  std::vector<Step> steps;
  for (std::size_t j = 0; j < profile.agents(); ++j)
    for (std::size_t i = 0; i < d.issues(); ++i)
      for (Candidate c : agent_issue_targets(prefs, profile, full, j, i, kind, mode)) steps.push_back({j, i, c});
  return steps;
}

/// First repeated state in a history of state keys: (entry round, period).
template <typename Key>
std::optional<CycleInfo> detect_cycle(const std::vector<Key>& history) {
  std::unordered_map<Key, long, boost::hash<Key>> seen;
  for (std::size_t t = 0; t < history.size(); ++t) {
    auto [it, inserted] = seen.emplace(history[t], static_cast<long>(t));
    if (!inserted) return CycleInfo{it->second, static_cast<long>(t) - it->second};
  }
  return std::nullopt;
}

namespace detail {

using ProfileKey = std::vector<std::uint32_t>;

inline ProfileKey profile_key(const VoteProfile& profile, const IssueDomain& d) {
  ProfileKey k;
  k.reserve(profile.agents());
  for (const auto& v : profile.votes) k.push_back(static_cast<std::uint32_t>(d.index(v)));
  return k;
}

// Step lists memoized by profile; cycling runs revisit the same profiles.
class StepCache {
 public:
  StepCache(const PreferenceProfile& prefs, DynamicsKind kind, const UncertaintyMode& mode)
      : prefs_(prefs), kind_(kind), mode_(mode) {}

  const std::vector<Step>& steps(const ProfileKey& key, const VoteProfile& profile) {
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    if (cache_.size() >= kMaxEntries) cache_.clear();
    return cache_.emplace(key, enumerate_steps(prefs_, profile, kind_, mode_)).first->second;
  }

 private:
  static constexpr std::size_t kMaxEntries = 1 << 18;
  const PreferenceProfile& prefs_;
  DynamicsKind kind_;
  const UncertaintyMode& mode_;
  std::unordered_map<ProfileKey, std::vector<Step>, boost::hash<ProfileKey>> cache_;
};

}  // namespace detail

inline void check_config(const DynamicsConfig& cfg) {
  const std::size_t n = cfg.prefs.agents();
  const std::size_t p = cfg.prefs.domain.issues();
  if (cfg.initial.agents() != n) throw DomainError("initial profile must have one vote per agent");
  cfg.initial.check(cfg.prefs.domain);
  if (cfg.kind == DynamicsKind::LocalDominance) cfg.uncertainty.check(n, p);
  if (cfg.cap < 1) throw DomainError("round cap must be at least 1");
  if (const auto* s = std::get_if<Scripted>(&cfg.scheduler)) {
    if (s->steps.empty()) throw DomainError("scripted scheduler needs at least one step");
    for (const auto& st : s->steps)
      if (st.agent >= n || st.issue >= p) throw DomainError("scripted step refers to an unknown agent or issue");
  }
}

/// Runs the dynamics from cfg.initial.
inline RunResult run(const DynamicsConfig& cfg) {
  check_config(cfg);
  const IssueDomain& d = cfg.prefs.domain;
  const std::size_t n = cfg.prefs.agents();
  const std::size_t p = d.issues();
  const bool deterministic = is_deterministic(cfg.scheduler);

  RunResult res;
  res.initial_profile = cfg.initial;
  res.initial_outcome = plurality_outcome(cfg.initial, d);

  VoteProfile profile = cfg.initial;
  detail::StepCache cache(cfg.prefs, cfg.kind, cfg.uncertainty);
  std::mt19937_64 rng(std::holds_alternative<UniformRandom>(cfg.scheduler)
                          ? std::get<UniformRandom>(cfg.scheduler).seed
                          : 0);
  std::size_t position = 0;  // scripted index or round-robin cursor
  std::unordered_map<detail::ProfileKey, long, boost::hash<detail::ProfileKey>> seen;

  long round = 0;
  for (;; ++round) {
    detail::ProfileKey key = detail::profile_key(profile, d);
    const std::vector<Step>& steps = cache.steps(key, profile);
    if (steps.empty()) {
      res.terminal = Terminal::Equilibrium;
      break;
    }
    if (deterministic) {
      key.push_back(static_cast<std::uint32_t>(position));
      auto [it, inserted] = seen.emplace(std::move(key), round);
      if (!inserted) {
        res.terminal = Terminal::CycleDetected;
        res.cycle = CycleInfo{it->second, round - it->second};
        break;
      }
    }
    if (round >= cfg.cap) {
      res.terminal = Terminal::CapReached;
      break;
    }

    Step chosen;
    if (const auto* script = std::get_if<Scripted>(&cfg.scheduler)) {
      const ScriptedStep& want = script->steps[position];
      auto it = std::find_if(steps.begin(), steps.end(), [&](const Step& s) {
        return s.agent == want.agent && s.issue == want.issue && (!want.target || s.target == *want.target);
      });
      if (it == steps.end())
        throw SchedulerError(round, "scripted step (agent " + std::to_string(want.agent) + ", issue " +
                                        std::to_string(want.issue) +
                                        (want.target ? ", target " + std::to_string(*want.target) : "") +
                                        ") is not a valid improvement step");
      chosen = *it;
      position = (position + 1) % script->steps.size();
    } else if (std::holds_alternative<RoundRobin>(cfg.scheduler)) {
      const std::size_t pairs = n * p;
      // Steps are sorted by (agent, issue); find the first pair at or after the cursor.
      auto pair_of = [p](const Step& s) { return s.agent * p + s.issue; };
      auto it = std::find_if(steps.begin(), steps.end(), [&](const Step& s) { return pair_of(s) >= position; });
      if (it == steps.end()) it = steps.begin();
      chosen = *it;
      position = (pair_of(chosen) + 1) % pairs;
    } else {
      std::uniform_int_distribution<std::size_t> pick(0, steps.size() - 1);
      chosen = steps[pick(rng)];
    }

    Alternative& vote = profile[chosen.agent];
    const Candidate from = vote[chosen.issue];
    vote[chosen.issue] = chosen.target;
    if (cfg.record_trace)
      res.trace.push_back({round, chosen.agent, chosen.issue, from, chosen.target, plurality_outcome(profile, d)});
  }

  res.rounds = round;
  res.final_profile = std::move(profile);
  res.final_outcome = plurality_outcome(res.final_profile, d);
  return res;
}

/// Re-derives every recorded step from the initial profile. Returns the index
/// of the first step that was not a valid improvement step, or nullopt.
inline std::optional<std::size_t> audit_trace(const DynamicsConfig& cfg, const RunResult& res) {
  VoteProfile profile = cfg.initial;
  for (std::size_t t = 0; t < res.trace.size(); ++t) {
    const StepRecord& rec = res.trace[t];
    if (rec.from == rec.to || profile[rec.agent][rec.issue] != rec.from) return t;
    auto steps = enumerate_steps(cfg.prefs, profile, cfg.kind, cfg.uncertainty);
    if (!std::binary_search(steps.begin(), steps.end(), Step{rec.agent, rec.issue, rec.to})) return t;
    profile[rec.agent][rec.issue] = rec.to;
    if (plurality_outcome(profile, cfg.prefs.domain) != rec.outcome_after) return t;
  }
  return std::nullopt;
}

}  // namespace mivote
