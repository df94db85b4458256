#pragma once

// Candidate-wise distance uncertainty: per-candidate score intervals whose
// product forms the set of score tuples an agent considers possible, and the
// winner sets that follow from it.

#include <boost/rational.hpp>

#include <algorithm>
#include <cstdint>
#include <limits>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mivote/domain.hpp"
#include "mivote/error.hpp"

namespace mivote {

using Rational = boost::rational<std::int64_t>;

/// "3" for integers, "1/2" otherwise.
inline std::string format_rational(const Rational& r) {
  std::string s = std::to_string(r.numerator());
  if (r.denominator() != 1) s += "/" + std::to_string(r.denominator());
  return s;
}

/// Accepts "3", "1/2" and finite decimals such as "0.25".
inline Rational parse_rational(std::string_view text) {
  auto fail = [&] { return ParseError("invalid number '" + std::string(text) + "'"); };
  auto parse_int = [&](std::string_view t) -> std::int64_t {
    if (t.empty() || t.size() > 18) throw fail();
    std::int64_t v = 0;
    bool neg = false;
    std::size_t i = 0;
    if (t[0] == '-') {
      neg = true;
      i = 1;
      if (t.size() == 1) throw fail();
    }
    for (; i < t.size(); ++i) {
      if (t[i] < '0' || t[i] > '9') throw fail();
      v = v * 10 + (t[i] - '0');
    }
    return neg ? -v : v;
  };
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    const std::int64_t den = parse_int(text.substr(slash + 1));
    if (den == 0) throw fail();
    return Rational(parse_int(text.substr(0, slash)), den);
  }
  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    std::string_view whole = text.substr(0, dot), frac = text.substr(dot + 1);
    if (frac.empty() || frac.size() > 12 || frac[0] == '-') throw fail();
    std::int64_t den = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
    const bool neg = !whole.empty() && whole[0] == '-';
    const std::int64_t w = whole.empty() || whole == "-" ? 0 : parse_int(whole);
    const std::int64_t f = parse_int(frac);
    return Rational(neg ? w * den - f : w * den + f, den);
  }
  return Rational(parse_int(text));
}

enum class Metric { LInf, Multiplicative };

inline std::string_view metric_name(Metric m) { return m == Metric::LInf ? "linf" : "multiplicative"; }

inline Metric parse_metric(std::string_view name) {
  if (name == "linf") return Metric::LInf;
  if (name == "multiplicative") return Metric::Multiplicative;
  throw ParseError("unknown metric '" + std::string(name) + "' (expected linf or multiplicative)");
}

/// Metric plus one radius per issue.
struct UncertaintySpec {
  Metric metric = Metric::LInf;
  std::vector<Rational> radii;

  static UncertaintySpec linf(std::initializer_list<std::int64_t> r) {
    UncertaintySpec s;
    for (auto v : r) s.radii.emplace_back(v);
    return s;
  }
  static UncertaintySpec uniform(std::size_t p, Rational r, Metric m = Metric::LInf) {
    return UncertaintySpec{m, std::vector<Rational>(p, r)};
  }
  static UncertaintySpec exact(std::size_t p) { return uniform(p, Rational(0)); }

  void check(std::size_t p) const {
    if (radii.size() != p) throw DomainError("uncertainty radii length does not match issue count");
    for (const auto& r : radii)
      if (r < 0) throw DomainError("uncertainty radius must be non-negative");
  }

  bool is_exact() const {
    return std::all_of(radii.begin(), radii.end(), [](const Rational& r) { return r.numerator() == 0; });
  }

  bool operator==(const UncertaintySpec&) const = default;
};

/// Closed integer interval [lo, hi].
struct Interval {
  Score lo = 0;
  Score hi = 0;

  bool contains(Score v) const noexcept { return lo <= v && v <= hi; }
  Score width() const noexcept { return hi - lo + 1; }
  bool operator==(const Interval&) const = default;
};

namespace detail {
inline Score floor_div(std::int64_t num, std::int64_t den) {
  Score q = num / den;
  if ((num % den != 0) && ((num < 0) != (den < 0))) --q;
  return q;
}
inline Score ceil_div(std::int64_t num, std::int64_t den) { return -floor_div(-num, den); }
}  // namespace detail

/// Largest set of non-negative integers v with distance(score, v) <= radius.
inline Interval candidate_interval(Metric metric, Score score, const Rational& radius) {
  if (radius < 0) throw DomainError("uncertainty radius must be non-negative");
  if (score < 0) throw DomainError("scores must be non-negative");
  if (metric == Metric::LInf) {
    const Score r = detail::floor_div(radius.numerator(), radius.denominator());
    return {std::max<Score>(0, score - r), score + r};
  }
  // max(v/s, s/v) - 1 <= r  <=>  s/(1+r) <= v <= s(1+r); undefined ratio at 0.
  if (score == 0) return {0, 0};
  const Rational grow = Rational(1) + radius;
  const Rational hi = grow * score;
  const Rational lo = Rational(score) / grow;
  return {detail::ceil_div(lo.numerator(), lo.denominator()), detail::floor_div(hi.numerator(), hi.denominator())};
}

/// Product of per-candidate intervals on a single issue.
struct IssueBox {
  std::vector<Interval> candidates;

  std::size_t size() const noexcept { return candidates.size(); }
  const Interval& operator[](std::size_t c) const { return candidates[c]; }

  bool contains(std::span<const Score> v) const {
    if (v.size() != candidates.size()) return false;
    for (std::size_t c = 0; c < v.size(); ++c)
      if (!candidates[c].contains(v[c])) return false;
    return true;
  }

  /// Number of score vectors in the box, saturating at the int64 maximum.
  std::uint64_t cardinality() const {
    std::uint64_t n = 1;
    for (const auto& iv : candidates) {
      auto w = static_cast<std::uint64_t>(iv.width());
      if (w != 0 && n > std::numeric_limits<std::uint64_t>::max() / w) return std::numeric_limits<std::uint64_t>::max();
      n *= w;
    }
    return n;
  }

  bool operator==(const IssueBox&) const = default;
};

/// Cartesian product of issue boxes.
struct UncertaintySet {
  std::vector<IssueBox> issues;

  std::size_t size() const noexcept { return issues.size(); }
  const IssueBox& operator[](std::size_t i) const { return issues[i]; }

  bool contains(const ScoreTuple& s) const {
    if (s.size() != issues.size()) return false;
    for (std::size_t i = 0; i < issues.size(); ++i)
      if (!issues[i].contains(s[i])) return false;
    return true;
  }

  bool operator==(const UncertaintySet&) const = default;
};

inline IssueBox build_issue_box(std::span<const Score> center, Metric metric, const Rational& radius) {
  IssueBox box;
  box.candidates.reserve(center.size());
  for (Score s : center) box.candidates.push_back(candidate_interval(metric, s, radius));
  return box;
}

inline UncertaintySet build_uncertainty_set(const ScoreTuple& center, const UncertaintySpec& spec) {
  spec.check(center.size());
  UncertaintySet set;
  set.issues.reserve(center.size());
  for (std::size_t i = 0; i < center.size(); ++i)
    set.issues.push_back(build_issue_box(center[i], spec.metric, spec.radii[i]));
  return set;
}

// ---------------------------------------------------------------------------
// Ballots and per-issue winner feasibility

/// How an agent's own ballot enters an issue's tally.
enum class BallotEffect {
  AddVote,    // one extra vote for the candidate (finite electorate)
  BreakTies,  // no mass; decides exact ties among the maxima (negligible agents)
};

struct Ballot {
  BallotEffect effect = BallotEffect::AddVote;
  Candidate candidate = 0;
};

/// Least v_w - v_d for which `w` finishes ahead of `d` given ballot `b`.
inline Score required_margin(const Ballot& b, Candidate w, Candidate d) {
  if (b.effect == BallotEffect::AddVote) {
    const Score bonus_w = (w == b.candidate) ? 1 : 0;
    const Score bonus_d = (d == b.candidate) ? 1 : 0;
    return bonus_d - bonus_w + (d < w ? 1 : 0);
  }
  return (w == b.candidate || (d != b.candidate && w < d)) ? 0 : 1;
}

/// Winner of one issue for the concrete score vector `v` and ballot `b`.
inline Candidate issue_winner(std::span<const Score> v, const Ballot& b) {
  if (b.effect == BallotEffect::AddVote) return plurality_winner_with_vote(v, b.candidate);
  const Score top = *std::max_element(v.begin(), v.end());
  if (v[static_cast<std::size_t>(b.candidate)] == top) return b.candidate;
  return plurality_winner(v);
}

/// Can `w` win the issue for some score vector in `box`?
inline bool winner_feasible(const IssueBox& box, const Ballot& b, Candidate w) {
  const auto wi = static_cast<std::size_t>(w);
  Score need = box[wi].lo;
  for (std::size_t d = 0; d < box.size(); ++d) {
    if (d == wi) continue;
    need = std::max(need, box[d].lo + required_margin(b, w, static_cast<Candidate>(d)));
  }
  return need <= box[wi].hi;
}

/// Is there one score vector in `box` where ballot x elects wx and ballot y
/// elects wy? Other candidates sit at their lower bounds; the two winners'
/// scores only interact through their difference.
inline bool pair_feasible(const IssueBox& box, const Ballot& x, const Ballot& y, Candidate wx, Candidate wy) {
  const auto ix = static_cast<std::size_t>(wx);
  const auto iy = static_cast<std::size_t>(wy);
  if (wx == wy) {
    Score need = box[ix].lo;
    for (std::size_t d = 0; d < box.size(); ++d) {
      if (d == ix) continue;
      const auto dc = static_cast<Candidate>(d);
      need = std::max(need, box[d].lo + std::max(required_margin(x, wx, dc), required_margin(y, wx, dc)));
    }
    return need <= box[ix].hi;
  }
  Score lo_x = box[ix].lo;
  Score lo_y = box[iy].lo;
  for (std::size_t d = 0; d < box.size(); ++d) {
    if (d == ix || d == iy) continue;
    const auto dc = static_cast<Candidate>(d);
    lo_x = std::max(lo_x, box[d].lo + required_margin(x, wx, dc));
    lo_y = std::max(lo_y, box[d].lo + required_margin(y, wy, dc));
  }
  const Score hi_x = box[ix].hi;
  const Score hi_y = box[iy].hi;
  if (lo_x > hi_x || lo_y > hi_y) return false;
  const Score diff_lo = std::max(required_margin(x, wx, wy), lo_x - hi_y);
  const Score diff_hi = std::min(-required_margin(y, wy, wx), hi_x - lo_y);
  return diff_lo <= diff_hi;
}

/// { winner(v, ballot) : v in box }, ascending.
inline std::vector<Candidate> possible_issue_outcomes(const IssueBox& box, const Ballot& b) {
  std::vector<Candidate> out;
  for (std::size_t c = 0; c < box.size(); ++c)
    if (winner_feasible(box, b, static_cast<Candidate>(c))) out.push_back(static_cast<Candidate>(c));
  return out;
}

inline std::vector<Candidate> possible_issue_outcomes(const IssueBox& box, Candidate voted) {
  return possible_issue_outcomes(box, Ballot{BallotEffect::AddVote, voted});
}

/// Achievable (winner under x, winner under y) pairs with wx != wy.
inline std::vector<std::pair<Candidate, Candidate>> divergent_outcome_pairs(const IssueBox& box, const Ballot& x,
                                                                            const Ballot& y) {
  std::vector<std::pair<Candidate, Candidate>> out;
  const auto k = static_cast<Candidate>(box.size());
  for (Candidate wx = 0; wx < k; ++wx)
    for (Candidate wy = 0; wy < k; ++wy)
      if (wx != wy && pair_feasible(box, x, y, wx, wy)) out.emplace_back(wx, wy);
  return out;
}

// ---------------------------------------------------------------------------
// Possible and potential winners

/// One agent's view of an issue set: the uncertainty set around the tally it
/// reasons about, its current vote, and how its ballot counts.
struct Perspective {
  UncertaintySet set;
  Alternative vote;
  BallotEffect effect = BallotEffect::AddVote;

  Ballot ballot(std::size_t issue) const { return Ballot{effect, vote[issue]}; }
  Ballot ballot_for(Candidate c) const { return Ballot{effect, c}; }
};

inline Perspective make_perspective(const ScoreTuple& center, const Alternative& vote, const UncertaintySpec& spec,
                                    BallotEffect effect = BallotEffect::AddVote) {
  if (vote.size() != center.size()) throw DomainError("vote length does not match score tuple");
  return Perspective{build_uncertainty_set(center, spec), vote, effect};
}

/// Atomic perspective of agent j: uncertainty centred on the tally without j.
inline Perspective make_perspective(const VoteProfile& profile, const IssueDomain& d, std::size_t j,
                                    const UncertaintySpec& spec) {
  return make_perspective(adjusted_score(profile, d, j), profile[j], spec);
}

/// W: candidates that can win `issue` with the agent's current vote.
inline std::vector<Candidate> possible_winners(const Perspective& view, std::size_t issue) {
  return possible_issue_outcomes(view.set.issues.at(issue), view.ballot(issue));
}

/// H: candidates c the agent can make win by voting c on `issue`.
inline std::vector<Candidate> potential_winners(const Perspective& view, std::size_t issue) {
  const IssueBox& box = view.set.issues.at(issue);
  std::vector<Candidate> out;
  for (std::size_t c = 0; c < box.size(); ++c) {
    const auto cc = static_cast<Candidate>(c);
    if (winner_feasible(box, view.ballot_for(cc), cc)) out.push_back(cc);
  }
  return out;
}

/// H_0: candidates that win `issue` when one vote is added for them to the
/// exact adjusted tally.
inline std::vector<Candidate> real_potential_winners(const ScoreTuple& s_adjusted, std::size_t issue) {
  const auto& v = s_adjusted.issues.at(issue);
  std::vector<Candidate> out;
  for (std::size_t c = 0; c < v.size(); ++c)
    if (plurality_winner_with_vote(v, static_cast<Candidate>(c)) == static_cast<Candidate>(c))
      out.push_back(static_cast<Candidate>(c));
  return out;
}

}  // namespace mivote
