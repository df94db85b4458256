#include <gtest/gtest.h>

#include <algorithm>

#include "gen.hpp"
#include "mivote/uncertainty.hpp"
#include "oracle.hpp"
#include "properties.hpp"

using namespace mivote;

namespace {
bool subset(const std::vector<Candidate>& a, const std::vector<Candidate>& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}
}  // namespace

TEST(Interval, LInfClipsAtZero) {
  EXPECT_EQ(candidate_interval(Metric::LInf, 4, Rational(2)), (Interval{2, 6}));
  EXPECT_EQ(candidate_interval(Metric::LInf, 1, Rational(3)), (Interval{0, 4}));
  EXPECT_EQ(candidate_interval(Metric::LInf, 5, Rational(3, 2)), (Interval{4, 6}));
  EXPECT_EQ(candidate_interval(Metric::LInf, 5, Rational(0)), (Interval{5, 5}));
}

TEST(Interval, MultiplicativeIsRatioBand) {
  EXPECT_EQ(candidate_interval(Metric::Multiplicative, 4, Rational(1)), (Interval{2, 8}));
  EXPECT_EQ(candidate_interval(Metric::Multiplicative, 3, Rational(1, 2)), (Interval{2, 4}));
  EXPECT_EQ(candidate_interval(Metric::Multiplicative, 0, Rational(5)), (Interval{0, 0}));
  EXPECT_THROW(candidate_interval(Metric::LInf, 2, Rational(-1)), DomainError);
}

TEST(Interval, MatchesDistanceScan) {
  for (Metric m : {Metric::LInf, Metric::Multiplicative})
    for (Score s = 0; s <= 12; ++s)
      for (int num = 0; num <= 12; ++num) {
        const Rational r(num, 4);
        const Interval iv = candidate_interval(m, s, r);
        const auto vals = oracle::values_within(m, s, r);
        ASSERT_FALSE(vals.empty());
        EXPECT_EQ(iv.lo, vals.front());
        EXPECT_EQ(iv.hi, vals.back());
        EXPECT_EQ(static_cast<std::size_t>(iv.width()), vals.size());
      }
}

TEST(Interval, GrowsWithRadius) {
  for (Metric m : {Metric::LInf, Metric::Multiplicative})
    for (Score s = 0; s <= 10; ++s)
      for (int r = 0; r < 8; ++r) {
        const Interval a = candidate_interval(m, s, Rational(r, 2));
        const Interval b = candidate_interval(m, s, Rational(r + 1, 2));
        EXPECT_LE(b.lo, a.lo);
        EXPECT_GE(b.hi, a.hi);
        EXPECT_TRUE(a.contains(s));
      }
}

TEST(UncertaintySet, ContainsCenterAndHasProductSize) {
  const ScoreTuple s{{3, 1}, {0, 2, 2}};
  const auto set = build_uncertainty_set(s, UncertaintySpec::linf({1, 2}));
  EXPECT_TRUE(set.contains(s));
  EXPECT_EQ(set.issues[0].cardinality(), 3u * 3u);
  EXPECT_EQ(set.issues[1].cardinality(), 3u * 5u * 5u);
  EXPECT_FALSE(set.contains(ScoreTuple{{5, 1}, {0, 2, 2}}));
}

TEST(PossibleOutcomes, AgreeWithEnumeration) {
  const auto res = props::outcome_oracle(3000, 17);
  EXPECT_EQ(res.violations, 0u) << res.first;
  EXPECT_GT(res.nontrivial, 100u);
}

TEST(PossibleOutcomes, BreakTiesOnlyDecidesExactTies) {
  const IssueBox exact = build_issue_box(std::vector<Score>{3, 3, 1}, Metric::LInf, Rational(0));
  EXPECT_EQ(possible_issue_outcomes(exact, Ballot{BallotEffect::BreakTies, 1}), std::vector<Candidate>{1});
  EXPECT_EQ(possible_issue_outcomes(exact, Ballot{BallotEffect::BreakTies, 2}), std::vector<Candidate>{0});
  EXPECT_EQ(possible_issue_outcomes(exact, Ballot{BallotEffect::AddVote, 1}), std::vector<Candidate>{1});
}

TEST(Winners, PossibleWithinPotential) {
  Rng rng(3);
  for (int t = 0; t < 2000; ++t) {
    const IssueDomain d = gen::domain(rng, 3, 4);
    const ScoreTuple center = gen::random_tuple(rng, d, 8);
    const UncertaintySpec spec = gen::random_spec(rng, d.issues(), 3);
    const Alternative vote = d.alternative(gen::uniform(rng, 0, d.alternatives() - 1));
    const Perspective view = make_perspective(center, vote, spec);
    for (std::size_t i = 0; i < d.issues(); ++i) {
      const auto W = possible_winners(view, i), H = potential_winners(view, i);
      EXPECT_FALSE(W.empty());
      EXPECT_TRUE(subset(W, H));
    }
  }
}

TEST(Winners, ZeroRadiusCollapses) {
  Rng rng(4);
  for (int t = 0; t < 1000; ++t) {
    const IssueDomain d = gen::domain(rng, 3, 4);
    const ScoreTuple center = gen::random_tuple(rng, d, 8);
    const Alternative vote = d.alternative(gen::uniform(rng, 0, d.alternatives() - 1));
    const Perspective view = make_perspective(center, vote, UncertaintySpec::exact(d.issues()));
    const Alternative f = outcome_with_vote(center, vote);
    for (std::size_t i = 0; i < d.issues(); ++i) {
      EXPECT_EQ(possible_winners(view, i), std::vector<Candidate>{f[i]});
      EXPECT_EQ(potential_winners(view, i), real_potential_winners(center, i));
    }
  }
}

TEST(Winners, WidenWithRadius) {
  Rng rng(6);
  for (int t = 0; t < 1000; ++t) {
    const IssueDomain d = gen::domain(rng, 2, 4);
    const ScoreTuple center = gen::random_tuple(rng, d, 8);
    const Alternative vote = d.alternative(gen::uniform(rng, 0, d.alternatives() - 1));
    const auto lo = static_cast<std::int64_t>(gen::uniform(rng, 0, 2));
    const auto a = make_perspective(center, vote, UncertaintySpec::uniform(d.issues(), Rational(lo)));
    const auto b = make_perspective(center, vote, UncertaintySpec::uniform(d.issues(), Rational(lo + 1)));
    for (std::size_t i = 0; i < d.issues(); ++i) {
      EXPECT_TRUE(subset(possible_winners(a, i), possible_winners(b, i)));
      EXPECT_TRUE(subset(potential_winners(a, i), potential_winners(b, i)));
    }
  }
}

TEST(Rationals, ParseAndFormat) {
  EXPECT_EQ(parse_rational("3"), Rational(3));
  EXPECT_EQ(parse_rational("1/2"), Rational(1, 2));
  EXPECT_EQ(parse_rational("0.25"), Rational(1, 4));
  EXPECT_EQ(format_rational(Rational(6, 4)), "3/2");
  EXPECT_EQ(format_rational(Rational(2)), "2");
  EXPECT_THROW(parse_rational("x"), ParseError);
  EXPECT_THROW(parse_rational("1/0"), ParseError);
  EXPECT_THROW(parse_metric("l2"), ParseError);
}
