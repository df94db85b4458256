#pragma once

// Brute-force reference implementations. Nothing here reuses the library's
// interval, feasibility or factoring code: uncertainty sets are rebuilt from
// the distance definition and every tuple of the full product is visited.

#include <algorithm>
#include <cstdint>
#include <vector>

#include "mivote/domain.hpp"
#include "mivote/uncertainty.hpp"

namespace oracle {

using namespace mivote;

/// All non-negative v within `radius` of `s` under the metric, by scanning.
inline std::vector<Score> values_within(Metric m, Score s, const Rational& radius) {
  std::vector<Score> out;
  const Score limit = s * (2 + radius.numerator() / radius.denominator() + 1) + 2 +
                      radius.numerator() / radius.denominator();
  for (Score v = 0; v <= limit; ++v) {
    bool ok;
    if (m == Metric::LInf) {
      ok = Rational(v > s ? v - s : s - v) <= radius;
    } else if (s == 0 || v == 0) {
      ok = s == 0 && v == 0;
    } else {
      const Rational ratio = std::max(Rational(v, s), Rational(s, v));
      ok = ratio - Rational(1) <= radius;
    }
    if (ok) out.push_back(v);
  }
  return out;
}

/// Every score vector of one issue's uncertainty box.
inline std::vector<std::vector<Score>> issue_vectors(Metric m, const std::vector<Score>& center, const Rational& r) {
  std::vector<std::vector<Score>> out{{}};
  for (Score s : center) {
    const auto vals = values_within(m, s, r);
    std::vector<std::vector<Score>> next;
    for (const auto& prefix : out)
      for (Score v : vals) {
        auto ext = prefix;
        ext.push_back(v);
        next.push_back(std::move(ext));
      }
    out = std::move(next);
  }
  return out;
}

inline std::uint64_t product_size(const ScoreTuple& center, const UncertaintySpec& spec) {
  std::uint64_t n = 1;
  for (std::size_t i = 0; i < center.size(); ++i)
    for (Score s : center[i]) {
      n *= values_within(spec.metric, s, spec.radii[i]).size();
      if (n > (std::uint64_t{1} << 40)) return n;
    }
  return n;
}

/// Issue winner when the agent's ballot for `voted` is applied to `v`.
inline Candidate winner(const std::vector<Score>& v, BallotEffect e, Candidate voted) {
  std::vector<Score> t = v;
  if (e == BallotEffect::AddVote) t[static_cast<std::size_t>(voted)] += 1;
  const Score best = *std::max_element(t.begin(), t.end());
  if (e == BallotEffect::BreakTies && t[static_cast<std::size_t>(voted)] == best) return voted;
  for (std::size_t c = 0; c < t.size(); ++c)
    if (t[c] == best) return static_cast<Candidate>(c);
  return 0;
}

inline std::vector<Candidate> possible_outcomes(Metric m, const std::vector<Score>& center, const Rational& r,
                                                BallotEffect e, Candidate voted) {
  std::vector<bool> hit(center.size(), false);
  for (const auto& v : issue_vectors(m, center, r)) hit[static_cast<std::size_t>(winner(v, e, voted))] = true;
  std::vector<Candidate> out;
  for (std::size_t c = 0; c < hit.size(); ++c)
    if (hit[c]) out.push_back(static_cast<Candidate>(c));
  return out;
}

/// Does voting `x` on `issue` beat voting `y`, over every tuple of the full
/// product set around `center`?
inline bool beats(const IssueDomain& d, const Ranking& r, const ScoreTuple& center, const UncertaintySpec& spec,
                  const Alternative& vote, std::size_t issue, Candidate x, Candidate y,
                  BallotEffect e = BallotEffect::AddVote) {
  const std::size_t p = d.issues();
  // Per issue: for each vector in the box, the winner under each ballot.
  std::vector<std::vector<std::pair<Candidate, Candidate>>> winners(p);
  for (std::size_t k = 0; k < p; ++k)
    for (const auto& v : issue_vectors(spec.metric, center[k], spec.radii[k])) {
      if (k == issue)
        winners[k].push_back({winner(v, e, x), winner(v, e, y)});
      else
        winners[k].push_back({winner(v, e, vote[k]), winner(v, e, vote[k])});
    }
  std::vector<std::size_t> pos(p, 0);
  for (;;) {
    std::size_t ox = 0, oy = 0;
    for (std::size_t k = 0; k < p; ++k) {
      const auto& [wx, wy] = winners[k][pos[k]];
      ox += d.stride(k) * static_cast<std::size_t>(wx);
      oy += d.stride(k) * static_cast<std::size_t>(wy);
    }
    if (r.prefers(ox, oy)) return true;
    std::size_t k = 0;
    while (k < p && ++pos[k] == winners[k].size()) pos[k++] = 0;
    if (k == p) return false;
  }
}

inline std::vector<Candidate> ldi_targets(const IssueDomain& d, const Ranking& r, const ScoreTuple& center,
                                          const UncertaintySpec& spec, const Alternative& vote, std::size_t issue,
                                          BallotEffect e = BallotEffect::AddVote) {
  const int k = d.size(issue);
  std::vector<std::vector<char>> b(static_cast<std::size_t>(k), std::vector<char>(static_cast<std::size_t>(k), 0));
  for (Candidate x = 0; x < k; ++x)
    for (Candidate y = 0; y < k; ++y)
      if (x != y) b[static_cast<std::size_t>(x)][static_cast<std::size_t>(y)] = beats(d, r, center, spec, vote, issue, x, y, e);
  auto dom = [&](Candidate x, Candidate y) {
    return b[static_cast<std::size_t>(x)][static_cast<std::size_t>(y)] && !b[static_cast<std::size_t>(y)][static_cast<std::size_t>(x)];
  };
  const Candidate cur = vote[issue];
  std::vector<Candidate> out;
  for (Candidate c = 0; c < k; ++c) {
    if (c == cur || !dom(c, cur)) continue;
    bool dominated = false;
    for (Candidate o = 0; o < k; ++o) dominated = dominated || (o != c && dom(o, c));
    if (!dominated) out.push_back(c);
  }
  return out;
}

/// Best response by trying every candidate against the exact tally of the
/// other agents.
inline Alternative best_response(const PreferenceProfile& prefs, const VoteProfile& profile, std::size_t j,
                                 std::size_t issue) {
  const IssueDomain& d = prefs.domain;
  std::vector<std::vector<Score>> others;
  for (std::size_t k = 0; k < d.issues(); ++k) {
    std::vector<Score> v(static_cast<std::size_t>(d.size(k)), 0);
    for (std::size_t u = 0; u < profile.agents(); ++u)
      if (u != j) v[static_cast<std::size_t>(profile[u][k])] += 1;
    others.push_back(v);
  }
  auto outcome = [&](const Alternative& vote) {
    std::size_t idx = 0;
    for (std::size_t k = 0; k < d.issues(); ++k)
      idx += d.stride(k) * static_cast<std::size_t>(winner(others[k], BallotEffect::AddVote, vote[k]));
    return idx;
  };
  const Alternative cur = profile[j];
  const std::size_t cur_out = outcome(cur);
  Alternative best = cur;
  std::size_t best_out = cur_out;
  for (Candidate c = 0; c < d.size(issue); ++c) {
    const Alternative v = cur.with(issue, c);
    const std::size_t o = outcome(v);
    if (prefs.rankings[j].prefers(o, best_out)) {
      best = v;
      best_out = o;
    }
  }
  return best;
}

}  // namespace oracle
