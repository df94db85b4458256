#pragma once

// Nonatomic iterative voting. The population is split into 1/eps sets of
// mass eps; identical sets may move together. Agents have negligible weight,
// so their uncertainty is centred on the real tally and their own ballot only
// decides exact ties among the leaders.
//
// Masses are kept as integer counts of eps-sets; uncertainty sets live on the
// same eps grid, so every comparison is exact.

#include <optional>
#include <random>
#include <unordered_map>
#include <utility>
#include <vector>

#include "mivote/dominance.hpp"
#include "mivote/dynamics.hpp"
#include "mivote/error.hpp"
#include "mivote/uncertainty.hpp"

namespace mivote {

using MassVector = std::vector<Rational>;
using MassTuple = std::vector<MassVector>;

/// Winner per issue of a mass tuple: the maximum, with `vote` taking any exact
/// tie it belongs to, and lexicographic tie-breaking otherwise.
inline Alternative nonatomic_outcome(const MassTuple& s, const Alternative& vote) {
  if (vote.size() != s.size()) throw DomainError("vote length does not match score tuple");
  Alternative out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const auto& v = s[i];
    const Rational top = *std::max_element(v.begin(), v.end());
    Candidate w = 0;
    if (v.at(static_cast<std::size_t>(vote[i])) == top) {
      w = vote[i];
    } else {
      while (v[static_cast<std::size_t>(w)] != top) ++w;
    }
    out.candidates.push_back(w);
  }
  return out;
}

/// One eps-mass set of identical agents.
struct MassSet {
  Ranking ranking;
  UncertaintySpec spec;  // radii in mass units
  Alternative vote;
};

class MassProfile {
 public:
  MassProfile() = default;
  MassProfile(IssueDomain domain, std::vector<MassSet> sets) : domain_(std::move(domain)), sets_(std::move(sets)) {
    if (sets_.empty()) throw DomainError("mass profile needs at least one set");
    for (const auto& s : sets_) {
      if (s.ranking.size() != domain_.alternatives()) throw DomainError("ranking size does not match domain");
      s.spec.check(domain_.issues());
      domain_.check(s.vote);
    }
  }
  MassProfile(IssueDomain domain, std::vector<MassSet> sets, const Rational& epsilon)
      : MassProfile(std::move(domain), std::move(sets)) {
    if (epsilon * static_cast<std::int64_t>(sets_.size()) != Rational(1))
      throw DomainError("epsilon must equal 1 / number of sets");
  }

  /// Every agent of a finite profile becomes `copies` identical sets; radii
  /// are given in mass units.
  static MassProfile from_agents(const PreferenceProfile& prefs, const VoteProfile& votes,
                                 const std::vector<UncertaintySpec>& specs, std::size_t copies = 1) {
    if (votes.agents() != prefs.agents() || specs.size() != prefs.agents())
      throw DomainError("need one vote and one spec per agent");
    if (copies == 0) throw DomainError("copies must be positive");
    std::vector<MassSet> sets;
    for (std::size_t j = 0; j < prefs.agents(); ++j)
      for (std::size_t c = 0; c < copies; ++c) sets.push_back({prefs.rankings[j], specs[j], votes[j]});
    return MassProfile(prefs.domain, std::move(sets));
  }

  const IssueDomain& domain() const noexcept { return domain_; }
  std::size_t sets() const noexcept { return sets_.size(); }
  const MassSet& operator[](std::size_t j) const { return sets_.at(j); }
  Rational epsilon() const { return Rational(1, static_cast<std::int64_t>(sets_.size())); }

  void set_vote(std::size_t j, std::size_t issue, Candidate c) {
    if (c < 0 || c >= domain_.size(issue)) throw DomainError("candidate outside issue");
    sets_.at(j).vote[issue] = c;
  }

  /// Tally in units of eps.
  ScoreTuple counts() const {
    ScoreTuple s = ScoreTuple::zeros(domain_);
    for (const auto& set : sets_) s.add(set.vote);
    return s;
  }

  MassTuple masses() const {
    const ScoreTuple c = counts();
    const Rational eps = epsilon();
    MassTuple out;
    for (const auto& v : c.issues) {
      MassVector m;
      for (Score x : v) m.push_back(eps * x);
      out.push_back(std::move(m));
    }
    return out;
  }

  Alternative outcome() const { return plurality_outcome(counts()); }

  VoteProfile votes() const {
    VoteProfile vp;
    for (const auto& s : sets_) vp.votes.push_back(s.vote);
    return vp;
  }

 private:
  IssueDomain domain_;
  std::vector<MassSet> sets_;
};

/// Mass-unit radii converted to eps-count units.
inline UncertaintySpec to_count_units(const UncertaintySpec& spec, std::size_t sets) {
  UncertaintySpec out = spec;
  if (spec.metric == Metric::LInf)
    for (auto& r : out.radii) r *= static_cast<std::int64_t>(sets);
  return out;
}

/// Optional alternating radii per set, in mass units.
struct NonatomicUncertainty {
  std::optional<std::vector<std::pair<Rational, Rational>>> alternating;

  UncertaintySpec spec_for(const MassProfile& prof, std::size_t j, std::size_t issue) const {
    if (!alternating) return prof[j].spec;
    const auto& [rc, ro] = alternating->at(j);
    UncertaintySpec s = UncertaintySpec::uniform(prof.domain().issues(), ro, prof[j].spec.metric);
    s.radii[issue] = rc;
    return s;
  }
};

inline StepContext nonatomic_context(const MassProfile& prof, const ScoreTuple& counts, std::size_t j,
                                     std::size_t issue, const NonatomicUncertainty& unc = {}) {
  if (j >= prof.sets()) throw DomainError("set index out of range");
  if (issue >= prof.domain().issues()) throw DomainError("issue index out of range");
  return StepContext{prof.domain(),   prof[j].ranking,
                     counts,          prof[j].vote,
                     to_count_units(unc.spec_for(prof, j, issue), prof.sets()),
                     issue,           BallotEffect::BreakTies};
}

/// LDI targets of set j on `issue`.
inline std::vector<Candidate> nonatomic_ldi_steps(const MassProfile& prof, std::size_t j, std::size_t issue,
                                                  const NonatomicUncertainty& unc = {}) {
  return IssueDominance(nonatomic_context(prof, prof.counts(), j, issue, unc)).ldi_targets();
}

inline std::vector<Step> enumerate_nonatomic_steps(const MassProfile& prof, const NonatomicUncertainty& unc = {}) {
  const ScoreTuple counts = prof.counts();
  std::vector<Step> steps;
  for (std::size_t j = 0; j < prof.sets(); ++j)
    for (std::size_t i = 0; i < prof.domain().issues(); ++i)
      for (Candidate c : IssueDominance(nonatomic_context(prof, counts, j, i, unc)).ldi_targets())
        steps.push_back({j, i, c});
  return steps;
}

/// Sets that share ranking, uncertainty and current vote.
inline bool identical_sets(const MassProfile& prof, std::size_t a, std::size_t b, const NonatomicUncertainty& unc = {}) {
  if (!(prof[a].ranking == prof[b].ranking) || prof[a].vote != prof[b].vote || !(prof[a].spec == prof[b].spec))
    return false;
  return !unc.alternating || unc.alternating->at(a) == unc.alternating->at(b);
}

/// Moves a batch of identical sets to `target` on `issue`.
inline void apply_batch(MassProfile& prof, const std::vector<std::size_t>& batch, std::size_t issue, Candidate target,
                        long round = 0, const NonatomicUncertainty& unc = {}) {
  if (batch.empty()) throw SchedulerError(round, "empty batch");
  for (auto j : batch) {
    if (j >= prof.sets()) throw SchedulerError(round, "batch refers to an unknown set");
    if (!identical_sets(prof, batch.front(), j, unc))
      throw SchedulerError(round, "batch mixes non-identical sets");
  }
  for (auto j : batch) prof.set_vote(j, issue, target);
}

enum class BatchMode {
  Single,        // one set per round
  All,           // every identical set with the same step
  RandomSubset,  // chosen set plus each identical set with probability 1/2
};

struct NonatomicConfig {
  MassProfile profile;
  NonatomicUncertainty uncertainty;
  SchedulerPolicy scheduler = RoundRobin{};
  BatchMode batch = BatchMode::Single;
  long cap = kDefaultRoundCap;
  bool record_trace = true;
};

struct NonatomicRunResult {
  RunResult run;
  std::vector<std::size_t> batch_sizes;  // parallel to run.trace
  Rational epsilon;
};

inline NonatomicRunResult nonatomic_run(const NonatomicConfig& cfg) {
  if (cfg.cap < 1) throw DomainError("round cap must be at least 1");
  const std::size_t sets = cfg.profile.sets();
  const std::size_t p = cfg.profile.domain().issues();
  if (cfg.uncertainty.alternating) {
    if (cfg.uncertainty.alternating->size() != sets) throw DomainError("need one alternating pair per set");
    for (const auto& [rc, ro] : *cfg.uncertainty.alternating)
      if (!(rc >= 0 && rc < ro)) throw DomainError("alternating uncertainty needs 0 <= r_current < r_other");
  }
  if (const auto* s = std::get_if<Scripted>(&cfg.scheduler))
    for (const auto& st : s->steps)
      if (st.agent >= sets || st.issue >= p) throw DomainError("scripted step refers to an unknown set or issue");

  const bool deterministic = is_deterministic(cfg.scheduler);
  const IssueDomain& d = cfg.profile.domain();

  NonatomicRunResult res;
  res.epsilon = cfg.profile.epsilon();
  res.run.initial_profile = cfg.profile.votes();
  res.run.initial_outcome = cfg.profile.outcome();

  MassProfile prof = cfg.profile;
  std::mt19937_64 rng(std::holds_alternative<UniformRandom>(cfg.scheduler)
                          ? std::get<UniformRandom>(cfg.scheduler).seed
                          : 0);
  std::size_t position = 0;
  std::unordered_map<detail::ProfileKey, long, boost::hash<detail::ProfileKey>> seen;
  std::unordered_map<detail::ProfileKey, std::vector<Step>, boost::hash<detail::ProfileKey>> cache;

  long round = 0;
  for (;; ++round) {
    const VoteProfile votes = prof.votes();
    detail::ProfileKey key = detail::profile_key(votes, d);
    auto cached = cache.find(key);
    if (cached == cache.end()) {
      if (cache.size() >= (1u << 16)) cache.clear();
      cached = cache.emplace(key, enumerate_nonatomic_steps(prof, cfg.uncertainty)).first;
    }
    const std::vector<Step>& steps = cached->second;
    if (steps.empty()) {
      res.run.terminal = Terminal::Equilibrium;
      break;
    }
    if (deterministic) {
      key.push_back(static_cast<std::uint32_t>(position));
      auto [it, inserted] = seen.emplace(std::move(key), round);
      if (!inserted) {
        res.run.terminal = Terminal::CycleDetected;
        res.run.cycle = CycleInfo{it->second, round - it->second};
        break;
      }
    }
    if (round >= cfg.cap) {
      res.run.terminal = Terminal::CapReached;
      break;
    }

    Step chosen;
    if (const auto* script = std::get_if<Scripted>(&cfg.scheduler)) {
      const ScriptedStep& want = script->steps[position];
      auto it = std::find_if(steps.begin(), steps.end(), [&](const Step& s) {
        return s.agent == want.agent && s.issue == want.issue && (!want.target || s.target == *want.target);
      });
      if (it == steps.end()) throw SchedulerError(round, "scripted step is not a valid improvement step");
      chosen = *it;
      position = (position + 1) % script->steps.size();
    } else if (std::holds_alternative<RoundRobin>(cfg.scheduler)) {
      auto pair_of = [p](const Step& s) { return s.agent * p + s.issue; };
      auto it = std::find_if(steps.begin(), steps.end(), [&](const Step& s) { return pair_of(s) >= position; });
      if (it == steps.end()) it = steps.begin();
      chosen = *it;
      position = (pair_of(chosen) + 1) % (sets * p);
    } else {
      std::uniform_int_distribution<std::size_t> pick(0, steps.size() - 1);
      chosen = steps[pick(rng)];
    }

    std::vector<std::size_t> batch{chosen.agent};
    if (cfg.batch != BatchMode::Single) {
      std::bernoulli_distribution coin(0.5);
      for (std::size_t j = 0; j < sets; ++j) {
        if (j == chosen.agent || !identical_sets(prof, chosen.agent, j, cfg.uncertainty)) continue;
        if (cfg.batch == BatchMode::All || coin(rng)) batch.push_back(j);
      }
    }
    const Candidate from = prof[chosen.agent].vote[chosen.issue];
    apply_batch(prof, batch, chosen.issue, chosen.target, round, cfg.uncertainty);
    if (cfg.record_trace) {
      res.run.trace.push_back({round, chosen.agent, chosen.issue, from, chosen.target, prof.outcome()});
      res.batch_sizes.push_back(batch.size());
    }
  }

  res.run.rounds = round;
  res.run.final_profile = prof.votes();
  res.run.final_outcome = prof.outcome();
  return res;
}

}  // namespace mivote
