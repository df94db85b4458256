#pragma once

// Local dominance between single-issue vote changes, the set of local
// dominance improvement (LDI) steps, and best response.
//
// Votes compared here differ from the agent's current vote only on one issue
// i. Because the uncertainty set is a product over issues, the outcome on
// every other issue k is some element of W^k whichever vote is cast, and is
// the same for both votes. A vote x beats y iff some achievable pair of
// issue-i winners (wx, wy), combined with some context drawn from the W^k,
// gives an outcome the agent strictly prefers under x.

#include <functional>
#include <utility>
#include <vector>

#include "mivote/domain.hpp"
#include "mivote/error.hpp"
#include "mivote/uncertainty.hpp"

namespace mivote {

/// The agent's current vote with issue `issue` replaced by `candidate`.
struct ProspectiveVote {
  Alternative base;
  std::size_t issue = 0;
  Candidate candidate = 0;

  Alternative vote() const { return base.with(issue, candidate); }
  bool operator==(const ProspectiveVote&) const = default;
};

/// Inputs of one (agent, issue) evaluation. Refers to the domain and ranking,
/// which must outlive the context.
struct StepContext {
  std::reference_wrapper<const IssueDomain> domain;
  std::reference_wrapper<const Ranking> ranking;
  ScoreTuple center;  // tally the uncertainty set is built around
  Alternative vote;   // agent's current vote
  UncertaintySpec spec;
  std::size_t issue = 0;
  BallotEffect effect = BallotEffect::AddVote;

  StepContext with_spec(UncertaintySpec s) const {
    StepContext c = *this;
    c.spec = std::move(s);
    return c;
  }
};

/// Atomic context for agent j: centre is the tally without j's vote.
inline StepContext make_step_context(const PreferenceProfile& prefs, const VoteProfile& profile, std::size_t j,
                                     std::size_t issue, UncertaintySpec spec) {
  if (j >= profile.agents() || j >= prefs.agents()) throw DomainError("agent index out of range");
  if (issue >= prefs.domain.issues()) throw DomainError("issue index out of range");
  spec.check(prefs.domain.issues());
  return StepContext{prefs.domain, prefs.rankings[j], adjusted_score(profile, prefs.domain, j), profile[j],
                     std::move(spec), issue, BallotEffect::AddVote};
}

/// Evaluates beat/dominance relations among the single-issue alternatives of
/// one context. Precomputes the uncertainty set and the outcome contexts on
/// the other issues; caches pairwise beat results.
class IssueDominance {
 public:
  explicit IssueDominance(const StepContext& ctx)
      : domain_(ctx.domain.get()),
        ranking_(ctx.ranking.get()),
        issue_(ctx.issue),
        view_(make_perspective(ctx.center, ctx.vote, ctx.spec, ctx.effect)) {
    const IssueDomain& d = domain_;
    if (issue_ >= d.issues()) throw DomainError("issue index out of range");
    d.check(ctx.vote);
    if (ctx.center.size() != d.issues()) throw DomainError("score tuple does not match domain");
    for (std::size_t k = 0; k < d.issues(); ++k)
      if (ctx.center[k].size() != static_cast<std::size_t>(d.size(k)))
        throw DomainError("score vector length does not match issue size");

    // Encoded alternatives with issue_ set to candidate 0, one per element of
    // the product of possible winners on the other issues.
    context_bases_.push_back(0);
    for (std::size_t k = 0; k < d.issues(); ++k) {
      if (k == issue_) continue;
      auto w = possible_winners(view_, k);
      std::vector<std::size_t> next;
      next.reserve(context_bases_.size() * w.size());
      for (auto base : context_bases_)
        for (Candidate c : w) next.push_back(base + d.stride(k) * static_cast<std::size_t>(c));
      context_bases_ = std::move(next);
    }
    const auto k = static_cast<std::size_t>(d.size(issue_));
    beats_.assign(k * k, -1);
  }

  std::size_t issue() const noexcept { return issue_; }
  Candidate current() const { return view_.vote[issue_]; }
  const Perspective& perspective() const noexcept { return view_; }
  /// Encoded outcome contexts on the other issues (issue() held at 0).
  const std::vector<std::size_t>& contexts() const noexcept { return context_bases_; }

  /// Does voting x on the issue beat voting y?
  bool beats(Candidate x, Candidate y) const {
    if (x == y) return false;
    const auto k = static_cast<std::size_t>(domain_.get().size(issue_));
    auto& slot = beats_[static_cast<std::size_t>(x) * k + static_cast<std::size_t>(y)];
    if (slot < 0) slot = compute_beats(x, y) ? 1 : 0;
    return slot == 1;
  }

  bool dominates(Candidate x, Candidate y) const { return beats(x, y) && !beats(y, x); }

  /// Candidates whose vote dominates the current vote.
  std::vector<Candidate> dominating_targets() const {
    std::vector<Candidate> out;
    const Candidate cur = current();
    for (Candidate c = 0; c < domain_.get().size(issue_); ++c)
      if (c != cur && dominates(c, cur)) out.push_back(c);
    return out;
  }

  /// LD: dominating targets not themselves dominated by another single-issue
  /// alternative.
  std::vector<Candidate> ldi_targets() const {
    std::vector<Candidate> out;
    const int k = domain_.get().size(issue_);
    for (Candidate c : dominating_targets()) {
      bool dominated = false;
      for (Candidate other = 0; other < k && !dominated; ++other)
        dominated = other != c && dominates(other, c);
      if (!dominated) out.push_back(c);
    }
    return out;
  }

 private:
  bool compute_beats(Candidate x, Candidate y) const {
    const IssueBox& box = view_.set.issues[issue_];
    const std::size_t stride = domain_.get().stride(issue_);
    const Ranking& r = ranking_;
    for (auto [wx, wy] : divergent_outcome_pairs(box, view_.ballot_for(x), view_.ballot_for(y))) {
      const std::size_t ox = stride * static_cast<std::size_t>(wx);
      const std::size_t oy = stride * static_cast<std::size_t>(wy);
      for (auto base : context_bases_)
        if (r.prefers(base + ox, base + oy)) return true;
    }
    return false;
  }

  std::reference_wrapper<const IssueDomain> domain_;
  std::reference_wrapper<const Ranking> ranking_;
  std::size_t issue_;
  Perspective view_;
  std::vector<std::size_t> context_bases_;
  mutable std::vector<signed char> beats_;
};

namespace detail {
inline void check_single_issue(const StepContext& ctx, const Alternative& x) {
  ctx.domain.get().check(x);
  for (std::size_t k = 0; k < x.size(); ++k)
    if (k != ctx.issue && x[k] != ctx.vote[k])
      throw DomainError("prospective vote " + to_string(x) + " differs from the current vote off the step issue");
}
}  // namespace detail

/// Some tuple in the uncertainty set makes x's outcome strictly preferred to y's.
inline bool s_beats(const StepContext& ctx, const Alternative& x, const Alternative& y) {
  detail::check_single_issue(ctx, x);
  detail::check_single_issue(ctx, y);
  return IssueDominance(ctx).beats(x[ctx.issue], y[ctx.issue]);
}

inline bool s_dominates(const StepContext& ctx, const Alternative& x, const Alternative& y) {
  detail::check_single_issue(ctx, x);
  detail::check_single_issue(ctx, y);
  return IssueDominance(ctx).dominates(x[ctx.issue], y[ctx.issue]);
}

/// LD^i_j as prospective votes; empty when the agent has no step on the issue.
inline std::vector<ProspectiveVote> ldi_steps(const StepContext& ctx) {
  std::vector<ProspectiveVote> out;
  for (Candidate c : IssueDominance(ctx).ldi_targets()) out.push_back({ctx.vote, ctx.issue, c});
  return out;
}

/// Best response on the context's issue against the exact tally. Evaluated as
/// LDI with zero radii; returns the current vote unless some change strictly
/// improves the outcome, otherwise the smallest candidate reaching the best
/// outcome.
inline Alternative best_response(const StepContext& ctx) {
  auto exact = ctx.with_spec(UncertaintySpec::exact(ctx.domain.get().issues()));
  auto targets = IssueDominance(exact).ldi_targets();
  if (targets.empty()) return ctx.vote;
  return ctx.vote.with(ctx.issue, targets.front());
}

struct ContainmentReport {
  std::vector<Candidate> lq;      // more uncertainty on another issue
  std::vector<Candidate> ld;      // baseline
  std::vector<Candidate> lq_hat;  // more uncertainty on the step issue
  bool lower_holds = false;       // lq within ld
  bool upper_holds = false;       // ld within lq_hat
};

/// Step sets under three radius settings for binary issues: a baseline, one
/// with a raised radius on some other issue, and one with a raised radius on
/// the step issue. Reports whether the sets nest in that order.
inline ContainmentReport containment_check(const StepContext& ctx, const StepContext& ctx_q,
                                           const StepContext& ctx_qhat) {
  const IssueDomain& d = ctx.domain;
  if (!d.is_binary()) throw UnsupportedError("containment check is defined for binary issues only");
  const std::size_t p = d.issues();
  ctx.spec.check(p);
  ctx_q.spec.check(p);
  ctx_qhat.spec.check(p);
  for (const StepContext* other : {&ctx_q, &ctx_qhat})
    if (other->issue != ctx.issue || other->vote != ctx.vote || !(other->center == ctx.center) ||
        other->spec.metric != ctx.spec.metric)
      throw DomainError("containment contexts must share profile, agent, issue and metric");

  std::size_t raised_other = 0;
  for (std::size_t k = 0; k < p; ++k) {
    if (ctx_q.spec.radii[k] < ctx.spec.radii[k]) throw DomainError("q radii must not decrease");
    if (ctx_q.spec.radii[k] != ctx.spec.radii[k]) {
      if (k == ctx.issue) throw DomainError("q may only raise the radius of another issue");
      ++raised_other;
    }
    if (k != ctx.issue && ctx_qhat.spec.radii[k] != ctx.spec.radii[k])
      throw DomainError("q-hat may only raise the radius of the step issue");
  }
  if (raised_other > 1) throw DomainError("q may raise the radius of a single issue only");
  if (ctx_qhat.spec.radii[ctx.issue] < ctx.spec.radii[ctx.issue]) throw DomainError("q-hat radius must not decrease");

  ContainmentReport rep;
  rep.ld = IssueDominance(ctx).ldi_targets();
  rep.lq = IssueDominance(ctx_q).ldi_targets();
  rep.lq_hat = IssueDominance(ctx_qhat).ldi_targets();
  rep.lower_holds = std::includes(rep.ld.begin(), rep.ld.end(), rep.lq.begin(), rep.lq.end());
  rep.upper_holds = std::includes(rep.lq_hat.begin(), rep.lq_hat.end(), rep.ld.begin(), rep.ld.end());
  return rep;
}

}  // namespace mivote
