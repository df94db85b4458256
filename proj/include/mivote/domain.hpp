#pragma once

// Multi-issue voting domain: issues, alternatives, rankings, vote profiles,
// score tuples, and simultaneous plurality with per-issue lexicographic
// tie-breaking.

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <map>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "mivote/error.hpp"

namespace mivote {

using Candidate = int;
using Score = std::int64_t;

// Largest joint domain we are willing to materialize rankings over.
inline constexpr std::size_t kMaxAlternatives = std::size_t{1} << 24;

/// One candidate per issue.
struct Alternative {
  std::vector<Candidate> candidates;

  Alternative() = default;
  explicit Alternative(std::vector<Candidate> c) : candidates(std::move(c)) {}
  Alternative(std::initializer_list<Candidate> c) : candidates(c) {}

  std::size_t size() const noexcept { return candidates.size(); }
  Candidate operator[](std::size_t i) const { return candidates[i]; }
  Candidate& operator[](std::size_t i) { return candidates[i]; }

  /// Copy of this alternative with `issue` replaced by `c`.
  Alternative with(std::size_t issue, Candidate c) const {
    Alternative out = *this;
    out.candidates.at(issue) = c;
    return out;
  }

  auto operator<=>(const Alternative&) const = default;
};

inline std::string to_string(const Alternative& a) {
  std::string s = "(";
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(a[i]);
  }
  return s + ")";
}

/// Candidate counts per issue. Alternatives are encoded in mixed radix with
/// issue 0 most significant.
class IssueDomain {
 public:
  IssueDomain() = default;
  explicit IssueDomain(std::vector<int> sizes) : sizes_(std::move(sizes)) {
    if (sizes_.empty()) throw DomainError("domain needs at least one issue");
    std::size_t total = 1;
    for (int s : sizes_) {
      if (s < 2) throw DomainError("every issue needs at least two candidates");
      if (total > kMaxAlternatives / static_cast<std::size_t>(s))
        throw DomainError("joint domain too large");
      total *= static_cast<std::size_t>(s);
    }
    total_ = total;
    strides_.assign(sizes_.size(), 1);
    for (std::size_t i = sizes_.size() - 1; i > 0; --i)
      strides_[i - 1] = strides_[i] * static_cast<std::size_t>(sizes_[i]);
  }

  static IssueDomain binary(std::size_t p) { return IssueDomain(std::vector<int>(p, 2)); }

  std::size_t issues() const noexcept { return sizes_.size(); }
  int size(std::size_t issue) const { return sizes_.at(issue); }
  const std::vector<int>& sizes() const noexcept { return sizes_; }
  std::size_t alternatives() const noexcept { return total_; }
  std::size_t stride(std::size_t issue) const { return strides_.at(issue); }
  bool is_binary() const {
    return std::all_of(sizes_.begin(), sizes_.end(), [](int s) { return s == 2; });
  }

  bool contains(const Alternative& a) const {
    if (a.size() != sizes_.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
      if (a[i] < 0 || a[i] >= sizes_[i]) return false;
    return true;
  }

  void check(const Alternative& a) const {
    if (!contains(a)) throw DomainError("alternative " + to_string(a) + " outside domain");
  }

  std::size_t index(const Alternative& a) const {
    check(a);
    std::size_t idx = 0;
    for (std::size_t i = 0; i < a.size(); ++i) idx += strides_[i] * static_cast<std::size_t>(a[i]);
    return idx;
  }

  Alternative alternative(std::size_t idx) const {
    if (idx >= total_) throw DomainError("alternative index out of range");
    Alternative a;
    a.candidates.resize(sizes_.size());
    for (std::size_t i = 0; i < sizes_.size(); ++i) {
      a[i] = static_cast<Candidate>(idx / strides_[i]);
      idx %= strides_[i];
    }
    return a;
  }

  /// Candidate of `issue` inside an encoded alternative.
  Candidate candidate_of(std::size_t idx, std::size_t issue) const {
    return static_cast<Candidate>((idx / strides_[issue]) % static_cast<std::size_t>(sizes_[issue]));
  }

  bool operator==(const IssueDomain& o) const { return sizes_ == o.sizes_; }

 private:
  std::vector<int> sizes_;
  std::vector<std::size_t> strides_;
  std::size_t total_ = 0;
};

/// Strict linear order over all alternative indices, most preferred first.
class Ranking {
 public:
  Ranking() = default;
  explicit Ranking(std::vector<std::size_t> order) : order_(std::move(order)) {
    rank_of_.assign(order_.size(), order_.size());
    for (std::size_t pos = 0; pos < order_.size(); ++pos) {
      std::size_t a = order_[pos];
      if (a >= order_.size() || rank_of_[a] != order_.size())
        throw DomainError("ranking is not a permutation of the alternatives");
      rank_of_[a] = pos;
    }
  }

  static Ranking from_alternatives(const IssueDomain& d, const std::vector<Alternative>& best_first) {
    if (best_first.size() != d.alternatives())
      throw DomainError("ranking must list every alternative exactly once");
    std::vector<std::size_t> order;
    order.reserve(best_first.size());
    for (const auto& a : best_first) order.push_back(d.index(a));
    return Ranking(std::move(order));
  }

  std::size_t size() const noexcept { return order_.size(); }
  const std::vector<std::size_t>& order() const noexcept { return order_; }
  std::size_t top() const { return order_.at(0); }
  /// 0-based position of alternative `idx`.
  std::size_t rank(std::size_t idx) const { return rank_of_[idx]; }
  bool prefers(std::size_t x, std::size_t y) const { return rank_of_[x] < rank_of_[y]; }

  bool operator==(const Ranking& o) const { return order_ == o.order_; }

 private:
  std::vector<std::size_t> order_;
  std::vector<std::size_t> rank_of_;
};

struct PreferenceProfile {
  IssueDomain domain;
  std::vector<Ranking> rankings;

  PreferenceProfile() = default;
  PreferenceProfile(IssueDomain d, std::vector<Ranking> r) : domain(std::move(d)), rankings(std::move(r)) {
    if (rankings.empty()) throw DomainError("preference profile needs at least one agent");
    for (const auto& rk : rankings)
      if (rk.size() != domain.alternatives()) throw DomainError("ranking size does not match domain");
  }

  std::size_t agents() const noexcept { return rankings.size(); }
};

struct VoteProfile {
  std::vector<Alternative> votes;

  std::size_t agents() const noexcept { return votes.size(); }
  const Alternative& operator[](std::size_t j) const { return votes[j]; }
  Alternative& operator[](std::size_t j) { return votes[j]; }

  void check(const IssueDomain& d) const {
    for (const auto& v : votes) d.check(v);
  }

  bool operator==(const VoteProfile&) const = default;
};

/// Every agent votes for their top alternative.
inline VoteProfile truthful_votes(const PreferenceProfile& prefs) {
  VoteProfile vp;
  vp.votes.reserve(prefs.agents());
  for (const auto& r : prefs.rankings) vp.votes.push_back(prefs.domain.alternative(r.top()));
  return vp;
}

/// Per-issue score vectors. Tuples built from vote profiles sum to n on every
/// issue; hand-written tuples need not.
struct ScoreTuple {
  std::vector<std::vector<Score>> issues;

  ScoreTuple() = default;
  explicit ScoreTuple(std::vector<std::vector<Score>> v) : issues(std::move(v)) {}
  ScoreTuple(std::initializer_list<std::vector<Score>> v) : issues(v) {}

  static ScoreTuple zeros(const IssueDomain& d) {
    ScoreTuple s;
    for (int k : d.sizes()) s.issues.emplace_back(static_cast<std::size_t>(k), 0);
    return s;
  }

  std::size_t size() const noexcept { return issues.size(); }
  const std::vector<Score>& operator[](std::size_t i) const { return issues[i]; }
  std::vector<Score>& operator[](std::size_t i) { return issues[i]; }

  void add(const Alternative& vote, Score delta = 1) {
    for (std::size_t i = 0; i < issues.size(); ++i) issues[i].at(static_cast<std::size_t>(vote[i])) += delta;
  }

  bool operator==(const ScoreTuple&) const = default;
};

struct IssueOrder {
  std::vector<std::size_t> order;

  IssueOrder() = default;
  explicit IssueOrder(std::vector<std::size_t> o) : order(std::move(o)) {}
  IssueOrder(std::initializer_list<std::size_t> o) : order(o) {}

  static IssueOrder identity(std::size_t p) {
    IssueOrder o;
    o.order.resize(p);
    std::iota(o.order.begin(), o.order.end(), std::size_t{0});
    return o;
  }

  void check(std::size_t p) const {
    std::vector<bool> seen(p, false);
    if (order.size() != p) throw DomainError("issue order has wrong length");
    for (auto i : order) {
      if (i >= p || seen[i]) throw DomainError("issue order is not a permutation");
      seen[i] = true;
    }
  }
};

// ---------------------------------------------------------------------------
// Plurality

/// Max-score candidate; ties go to the smallest index.
inline Candidate plurality_winner(std::span<const Score> scores) {
  Candidate best = 0;
  for (std::size_t c = 1; c < scores.size(); ++c)
    if (scores[c] > scores[static_cast<std::size_t>(best)]) best = static_cast<Candidate>(c);
  return best;
}

inline Alternative plurality_outcome(const ScoreTuple& s) {
  Alternative out;
  out.candidates.reserve(s.size());
  for (const auto& v : s.issues) out.candidates.push_back(plurality_winner(v));
  return out;
}

/// Winner of one issue after adding a single vote for `voted`.
inline Candidate plurality_winner_with_vote(std::span<const Score> scores, Candidate voted) {
  Candidate best = 0;
  Score best_score = scores[0] + (voted == 0 ? 1 : 0);
  for (std::size_t c = 1; c < scores.size(); ++c) {
    Score sc = scores[c] + (static_cast<Candidate>(c) == voted ? 1 : 0);
    if (sc > best_score) {
      best = static_cast<Candidate>(c);
      best_score = sc;
    }
  }
  return best;
}

/// f(s_without + vote): one extra vote on every issue, then plurality.
inline Alternative outcome_with_vote(const ScoreTuple& s_without, const Alternative& vote) {
  Alternative out;
  out.candidates.reserve(s_without.size());
  for (std::size_t i = 0; i < s_without.size(); ++i)
    out.candidates.push_back(plurality_winner_with_vote(s_without[i], vote[i]));
  return out;
}

inline ScoreTuple score(const VoteProfile& profile, const IssueDomain& d) {
  ScoreTuple s = ScoreTuple::zeros(d);
  for (const auto& v : profile.votes) {
    d.check(v);
    s.add(v);
  }
  return s;
}

/// Score tuple with agent `j`'s vote removed.
inline ScoreTuple adjusted_score(const VoteProfile& profile, const IssueDomain& d, std::size_t j) {
  if (j >= profile.agents()) throw DomainError("agent index out of range");
  ScoreTuple s = score(profile, d);
  s.add(profile[j], -1);
  return s;
}

inline Alternative plurality_outcome(const VoteProfile& profile, const IssueDomain& d) {
  return plurality_outcome(score(profile, d));
}

// ---------------------------------------------------------------------------
// Preferential structure

/// Ordering of the candidates of `issue` (best first) among the alternatives
/// that agree with `context` on every other issue.
inline std::vector<Candidate> induced_local_preference(const Ranking& r, const IssueDomain& d,
                                                       std::size_t issue, const Alternative& context) {
  std::vector<Candidate> cands(static_cast<std::size_t>(d.size(issue)));
  std::iota(cands.begin(), cands.end(), 0);
  Alternative probe = context;
  probe.candidates.at(issue) = 0;
  const std::size_t base = d.index(probe);
  const std::size_t stride = d.stride(issue);
  std::sort(cands.begin(), cands.end(), [&](Candidate x, Candidate y) {
    return r.prefers(base + stride * static_cast<std::size_t>(x), base + stride * static_cast<std::size_t>(y));
  });
  return cands;
}

/// True iff the local preference over each issue depends only on the issues
/// placed before it in `order`.
inline bool is_O_legal(const Ranking& r, const IssueDomain& d, const IssueOrder& order) {
  const std::size_t p = d.issues();
  order.check(p);
  for (std::size_t pos = 0; pos < p; ++pos) {
    const std::size_t issue = order.order[pos];
    std::map<std::vector<Candidate>, std::vector<Candidate>> by_prefix;
    for (std::size_t idx = 0; idx < d.alternatives(); ++idx) {
      if (d.candidate_of(idx, issue) != 0) continue;
      Alternative ctx = d.alternative(idx);
      std::vector<Candidate> prefix;
      for (std::size_t q = 0; q < pos; ++q) prefix.push_back(ctx[order.order[q]]);
      auto local = induced_local_preference(r, d, issue, ctx);
      auto [it, inserted] = by_prefix.emplace(std::move(prefix), local);
      if (!inserted && it->second != local) return false;
    }
  }
  return true;
}

/// True iff every issue's local preference is the same in every context.
inline bool is_separable(const Ranking& r, const IssueDomain& d) {
  for (std::size_t issue = 0; issue < d.issues(); ++issue) {
    std::vector<Candidate> first;
    for (std::size_t idx = 0; idx < d.alternatives(); ++idx) {
      if (d.candidate_of(idx, issue) != 0) continue;
      auto local = induced_local_preference(r, d, issue, d.alternative(idx));
      if (first.empty())
        first = std::move(local);
      else if (local != first)
        return false;
    }
  }
  return true;
}

}  // namespace mivote
