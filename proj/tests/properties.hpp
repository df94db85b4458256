#pragma once

// Randomized property drivers shared by the unit tests (small counts) and the
// acceptance runner (full counts). Each returns how many instances were
// checked, how many violated the property, and the first violation.

#include <optional>
#include <sstream>
#include <string>

#include "gen.hpp"
#include "mivote/mivote.hpp"
#include "oracle.hpp"

namespace props {

using namespace mivote;

struct Outcome {
  std::size_t instances = 0;
  std::size_t violations = 0;
  std::size_t nontrivial = 0;  // instances where the property had something to bite on
  std::string first;

  void fail(const std::string& what) {
    if (violations++ == 0) first = what;
  }
};

inline std::string describe(std::size_t instance, std::uint64_t seed) {
  return "instance " + std::to_string(instance) + " (seed " + std::to_string(seed) + ")";
}

/// LQ within LD within LQ-hat over random binary states.
inline Outcome containment(std::size_t count, std::uint64_t seed) {
  Outcome out;
  Rng rng(seed);
  for (std::size_t t = 0; t < count; ++t) {
    const std::size_t p = gen::uniform(rng, 2, 4), n = gen::uniform(rng, 3, 15);
    const IssueDomain d = IssueDomain::binary(p);
    const PreferenceProfile prefs = sample_impartial_culture(n, d, rng);
    const VoteProfile votes = gen::random_votes(rng, d, n);
    const std::size_t j = gen::uniform(rng, 0, n - 1), i = gen::uniform(rng, 0, p - 1);
    const UncertaintySpec r = gen::random_spec(rng, p, 3);
    std::size_t k = gen::uniform(rng, 0, p - 2);
    if (k >= i) ++k;
    const Rational bump = r.metric == Metric::LInf ? Rational(static_cast<std::int64_t>(gen::uniform(rng, 1, 3)))
                                                   : Rational(static_cast<std::int64_t>(gen::uniform(rng, 1, 8)), 4);
    UncertaintySpec q = r, qhat = r;
    q.radii[k] += bump;
    qhat.radii[i] += bump;
    const auto ctx = make_step_context(prefs, votes, j, i, r);
    const auto rep = containment_check(ctx, ctx.with_spec(q), ctx.with_spec(qhat));
    ++out.instances;
    if (!rep.ld.empty() || !rep.lq.empty() || !rep.lq_hat.empty()) ++out.nontrivial;
    if (!rep.lower_holds || !rep.upper_holds) out.fail(describe(t, seed));
  }
  return out;
}

/// Library beat relation and LDI sets against exhaustive enumeration.
inline Outcome oracle_equivalence(std::size_t count, std::uint64_t seed, std::uint64_t max_product = 1'000'000) {
  Outcome out;
  Rng rng(seed);
  while (out.instances < count) {
    const IssueDomain d = gen::domain(rng, 3, 4);
    const std::size_t p = d.issues();
    const ScoreTuple center = gen::random_tuple(rng, d, 7);
    const UncertaintySpec spec = gen::random_spec(rng, p, 2);
    const std::uint64_t size = oracle::product_size(center, spec);
    if (size > max_product) continue;
    const Ranking ranking = uniform_ranking(d, rng);
    const Alternative vote = d.alternative(gen::uniform(rng, 0, d.alternatives() - 1));
    const std::size_t i = gen::uniform(rng, 0, p - 1);
    const BallotEffect effect = gen::uniform(rng, 0, 1) ? BallotEffect::AddVote : BallotEffect::BreakTies;
    const StepContext ctx{d, ranking, center, vote, spec, i, effect};
    const IssueDominance dom(ctx);
    const std::size_t t = out.instances++;
    const int k = d.size(i);
    const auto x = static_cast<Candidate>(gen::uniform(rng, 0, static_cast<std::size_t>(k - 1)));
    auto y = static_cast<Candidate>(gen::uniform(rng, 0, static_cast<std::size_t>(k - 2)));
    if (y >= x) ++y;
    const bool want = oracle::beats(d, ranking, center, spec, vote, i, x, y, effect);
    if (want) ++out.nontrivial;
    if (dom.beats(x, y) != want) {
      out.fail(describe(t, seed) + ": beats(" + std::to_string(x) + "," + std::to_string(y) + ")");
      continue;
    }
    if (size <= 20'000 && dom.ldi_targets() != oracle::ldi_targets(d, ranking, center, spec, vote, i, effect))
      out.fail(describe(t, seed) + ": LDI targets");
  }
  return out;
}

/// Per-issue possible outcomes against exhaustive enumeration of the issue box.
inline Outcome outcome_oracle(std::size_t count, std::uint64_t seed) {
  Outcome out;
  Rng rng(seed);
  while (out.instances < count) {
    const int k = static_cast<int>(gen::uniform(rng, 2, 5));
    const IssueDomain d({k});
    const ScoreTuple center = gen::random_tuple(rng, d, 9);
    const UncertaintySpec spec = gen::random_spec(rng, 1, 3);
    if (oracle::product_size(center, spec) > 1'000'000) continue;
    const Candidate voted = static_cast<Candidate>(gen::uniform(rng, 0, static_cast<std::size_t>(k - 1)));
    const BallotEffect effect = gen::uniform(rng, 0, 1) ? BallotEffect::AddVote : BallotEffect::BreakTies;
    const IssueBox box = build_issue_box(center[0], spec.metric, spec.radii[0]);
    const auto got = possible_issue_outcomes(box, Ballot{effect, voted});
    const auto want = oracle::possible_outcomes(spec.metric, center[0], spec.radii[0], effect, voted);
    const std::size_t t = out.instances++;
    if (want.size() > 1) ++out.nontrivial;
    if (got != want) out.fail(describe(t, seed));
  }
  return out;
}

namespace detail {
inline void certify(Outcome& out, const std::string& where, const DynamicsConfig& cfg, const RunResult& res) {
  if (res.terminal != Terminal::Equilibrium) {
    out.fail(where + ": " + std::string(terminal_name(res.terminal)) + " after " + std::to_string(res.rounds));
    return;
  }
  if (!enumerate_steps(cfg.prefs, res.final_profile, cfg.kind, cfg.uncertainty).empty())
    out.fail(where + ": final profile still has steps");
  else if (cfg.record_trace && audit_trace(cfg, res))
    out.fail(where + ": trace audit failed at step " + std::to_string(*audit_trace(cfg, res)));
}

inline void certify(Outcome& out, const std::string& where, const NonatomicConfig& cfg, const NonatomicRunResult& res) {
  if (res.run.terminal != Terminal::Equilibrium) {
    out.fail(where + ": " + std::string(terminal_name(res.run.terminal)) + " after " + std::to_string(res.run.rounds));
    return;
  }
  MassProfile final_prof = cfg.profile;
  for (std::size_t j = 0; j < final_prof.sets(); ++j)
    for (std::size_t i = 0; i < final_prof.domain().issues(); ++i)
      final_prof.set_vote(j, i, res.run.final_profile[j][i]);
  if (!enumerate_nonatomic_steps(final_prof, cfg.uncertainty).empty()) out.fail(where + ": final profile still has steps");
  for (const auto& issue : final_prof.counts().issues) {
    Score sum = 0;
    for (Score s : issue) sum += s;
    if (sum != static_cast<Score>(final_prof.sets())) out.fail(where + ": mass not conserved");
  }
}

inline VoteProfile initial_votes(Rng& rng, const PreferenceProfile& prefs) {
  return gen::uniform(rng, 0, 1) ? truthful_votes(prefs) : gen::random_votes(rng, prefs.domain, prefs.agents());
}

/// Per-set mass radii equal to `count_radii / sets`.
inline std::vector<UncertaintySpec> mass_specs(const std::vector<UncertaintySpec>& count_specs, std::size_t sets) {
  std::vector<UncertaintySpec> out = count_specs;
  for (auto& s : out)
    if (s.metric == Metric::LInf)
      for (auto& r : s.radii) r /= static_cast<std::int64_t>(sets);
  return out;
}
}  // namespace detail

/// Common-order legal preferences over binary issues always reach equilibrium.
inline Outcome legal_convergence(std::size_t count, std::uint64_t seed, bool nonatomic = false, long cap = kDefaultRoundCap) {
  Outcome out;
  Rng rng(seed);
  for (std::size_t t = 0; t < count; ++t) {
    const std::size_t p = gen::uniform(rng, 1, 4), n = gen::uniform(rng, 1, 19);
    const IssueDomain d = IssueDomain::binary(p);
    IssueOrder order = IssueOrder::identity(p);
    std::shuffle(order.order.begin(), order.order.end(), rng);
    const PreferenceProfile prefs = sample_O_legal(n, d, order, rng);
    const std::string where = describe(t, seed);
    ++out.instances;
    bool legal = true;
    for (const auto& r : prefs.rankings) legal = legal && is_O_legal(r, d, order);
    if (!legal) {
      out.fail(where + ": sampled ranking is not legal");
      continue;
    }
    std::vector<UncertaintySpec> specs;
    for (std::size_t j = 0; j < n; ++j) specs.push_back(gen::random_spec(rng, p, 3));
    const VoteProfile initial = detail::initial_votes(rng, prefs);
    const SchedulerPolicy sched = gen::random_scheduler(rng);
    if (nonatomic) {
      const std::size_t copies = gen::uniform(rng, 1, 2);
      NonatomicConfig cfg;
      cfg.profile = MassProfile::from_agents(prefs, initial, detail::mass_specs(specs, n * copies), copies);
      cfg.scheduler = sched;
      cfg.batch = static_cast<BatchMode>(gen::uniform(rng, 0, 2));
      cfg.cap = cap;
      cfg.record_trace = false;
      const auto res = nonatomic_run(cfg);
      if (res.run.rounds > 0) ++out.nontrivial;
      detail::certify(out, where, cfg, res);
    } else {
      DynamicsConfig cfg{prefs, initial, DynamicsKind::LocalDominance, UncertaintyMode::fixed(specs), sched, cap, true};
      const RunResult res = run(cfg);
      if (res.rounds > 0) ++out.nontrivial;
      detail::certify(out, where, cfg, res);
    }
  }
  return out;
}

/// Alternating uncertainty over binary issues always reaches equilibrium.
inline Outcome alternating_convergence(std::size_t count, std::uint64_t seed, bool nonatomic = false,
                                       long cap = kDefaultRoundCap) {
  Outcome out;
  Rng rng(seed);
  for (std::size_t t = 0; t < count; ++t) {
    const std::size_t p = gen::uniform(rng, 1, 4), n = gen::uniform(rng, 1, 19);
    const IssueDomain d = IssueDomain::binary(p);
    const PreferenceProfile prefs = sample_impartial_culture(n, d, rng);
    const Metric metric = gen::uniform(rng, 0, 3) == 0 ? Metric::Multiplicative : Metric::LInf;
    std::vector<std::pair<Rational, Rational>> pairs;
    for (std::size_t j = 0; j < n; ++j) {
      const auto rc = static_cast<std::int64_t>(gen::uniform(rng, 0, 2));
      const auto ro = rc + static_cast<std::int64_t>(gen::uniform(rng, 1, 3));
      if (metric == Metric::LInf)
        pairs.emplace_back(Rational(rc), Rational(ro));
      else
        pairs.emplace_back(Rational(rc, 4), Rational(ro, 4));
    }
    const VoteProfile initial = detail::initial_votes(rng, prefs);
    const SchedulerPolicy sched = gen::random_scheduler(rng);
    const std::string where = describe(t, seed);
    ++out.instances;
    if (nonatomic) {
      const std::size_t copies = gen::uniform(rng, 1, 2);
      const std::size_t sets = n * copies;
      const UncertaintySpec placeholder{metric, std::vector<Rational>(p, Rational(0))};
      NonatomicConfig cfg;
      cfg.profile = MassProfile::from_agents(prefs, initial, std::vector<UncertaintySpec>(n, placeholder), copies);
      std::vector<std::pair<Rational, Rational>> per_set;
      for (const auto& pr : pairs) {
        auto mass = pr;
        if (metric == Metric::LInf) {
          mass.first /= static_cast<std::int64_t>(sets);
          mass.second /= static_cast<std::int64_t>(sets);
        }
        per_set.insert(per_set.end(), copies, mass);
      }
      cfg.uncertainty.alternating = per_set;
      cfg.scheduler = sched;
      cfg.batch = static_cast<BatchMode>(gen::uniform(rng, 0, 2));
      cfg.cap = cap;
      cfg.record_trace = false;
      const auto res = nonatomic_run(cfg);
      if (res.run.rounds > 0) ++out.nontrivial;
      detail::certify(out, where, cfg, res);
    } else {
      DynamicsConfig cfg{prefs,      initial, DynamicsKind::LocalDominance, UncertaintyMode::alternating(metric, pairs),
                         sched,      cap,     true};
      const RunResult res = run(cfg);
      if (res.rounds > 0) ++out.nontrivial;
      detail::certify(out, where, cfg, res);
    }
  }
  return out;
}

/// Every LDI step over binary issues fits the strategic-response
/// characterization in terms of W, H and H_0.
inline Outcome response_characterization(std::size_t count, std::uint64_t seed) {
  Outcome out;
  Rng rng(seed);
  while (out.instances < count) {
    const std::size_t p = gen::uniform(rng, 1, 4), n = gen::uniform(rng, 2, 15);
    const IssueDomain d = IssueDomain::binary(p);
    const PreferenceProfile prefs = sample_impartial_culture(n, d, rng);
    const VoteProfile votes = gen::random_votes(rng, d, n);
    const std::size_t j = gen::uniform(rng, 0, n - 1), i = gen::uniform(rng, 0, p - 1);
    const UncertaintySpec spec = gen::random_spec(rng, p, 2);
    const auto ctx = make_step_context(prefs, votes, j, i, spec);
    const IssueDominance dom(ctx);
    const auto targets = dom.ldi_targets();
    const std::size_t t = out.instances++;
    if (targets.empty()) continue;
    ++out.nontrivial;
    const Candidate cur = votes[j][i], next = targets.front();
    const auto H = potential_winners(dom.perspective(), i);
    if (std::find(H.begin(), H.end(), cur) == H.end()) continue;  // case (1)
    const auto H0 = real_potential_winners(ctx.center, i);
    auto in = [](const std::vector<Candidate>& s, Candidate c) { return std::find(s.begin(), s.end(), c) != s.end(); };
    const Ranking& R = prefs.rankings[j];
    const std::size_t stride = d.stride(i);
    bool ok = true;
    for (auto base : dom.contexts()) {
      const std::size_t a_alt = base + stride * static_cast<std::size_t>(cur);
      bool case2 = true;
      for (Candidate b : H)
        if (b != cur && !R.prefers(base + stride * static_cast<std::size_t>(b), a_alt)) case2 = false;
      const bool case3 = spec.radii[i].numerator() == 0 && in(H0, cur) && in(H0, next) &&
                         R.prefers(base + stride * static_cast<std::size_t>(next), a_alt);
      ok = ok && (case2 || case3);
    }
    if (!ok) out.fail(describe(t, seed));
  }
  return out;
}

}  // namespace props
