#pragma once

// Bundled worked examples with golden replays. Each fixture has a data
// builder and a verify function; the registry pairs them.
//
// Candidate letters map to indices a,b,c,d -> 0,1,2,3. Issues are 0-based.

#include <algorithm>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "mivote/domain.hpp"
#include "mivote/dominance.hpp"
#include "mivote/dynamics.hpp"
#include "mivote/uncertainty.hpp"

namespace mivote {

struct FixtureCheck {
  std::string label;
  bool passed = false;
  std::string detail;
};

struct FixtureReport {
  std::string name;
  std::vector<FixtureCheck> checks;

  bool passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const FixtureCheck& c) { return c.passed; });
  }
  const FixtureCheck* first_failure() const {
    for (const auto& c : checks)
      if (!c.passed) return &c;
    return nullptr;
  }
  void expect(std::string label, bool ok, std::string detail = {}) {
    checks.push_back({std::move(label), ok, std::move(detail)});
  }
};

struct Fixture {
  std::string name;
  std::function<FixtureReport()> verify;
};

namespace detail {

template <class T>
std::string join(const std::vector<T>& xs, const std::function<std::string(const T&)>& show) {
  std::string out = "{";
  for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? "," : "") + show(xs[i]);
  return out + "}";
}

inline std::string show_candidates(const std::vector<Candidate>& cs) {
  return join<Candidate>(cs, [](const Candidate& c) { return std::to_string(c); });
}

inline std::string show_alternatives(const std::vector<Alternative>& as) {
  return join<Alternative>(as, [](const Alternative& a) { return to_string(a); });
}

inline std::string show_steps(const std::vector<Step>& ss) {
  return join<Step>(ss, [](const Step& s) {
    return "(" + std::to_string(s.agent) + "," + std::to_string(s.issue) + "->" + std::to_string(s.target) + ")";
  });
}

inline std::string show_tuple(const ScoreTuple& s) {
  std::ostringstream os;
  os << '{';
  for (std::size_t i = 0; i < s.size(); ++i) {
    os << (i ? "," : "") << '(';
    for (std::size_t c = 0; c < s[i].size(); ++c) os << (c ? "," : "") << s[i][c];
    os << ')';
  }
  os << '}';
  return os.str();
}

inline std::string show_box(const IssueBox& box) {
  std::ostringstream os;
  for (std::size_t c = 0; c < box.size(); ++c) os << (c ? "x" : "") << '[' << box[c].lo << ".." << box[c].hi << ']';
  return os.str();
}

/// Lexicographic separable ranking: issue 0 most significant, each issue
/// ordered by `local[i]` (best first).
inline Ranking lexicographic_ranking(const IssueDomain& d, const std::vector<std::vector<Candidate>>& local) {
  std::vector<Alternative> best_first{Alternative{}};
  for (std::size_t i = 0; i < d.issues(); ++i) {
    std::vector<Alternative> next;
    for (const auto& prefix : best_first)
      for (Candidate c : local[i]) {
        Alternative a = prefix;
        a.candidates.push_back(c);
        next.push_back(std::move(a));
      }
    best_first = std::move(next);
  }
  return Ranking::from_alternatives(d, best_first);
}

inline std::vector<std::size_t> identity_order(std::size_t n) {
  std::vector<std::size_t> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = i;
  return v;
}

inline std::vector<Candidate> with_first(int size, Candidate top) {
  std::vector<Candidate> out{top};
  for (Candidate c = 0; c < size; ++c)
    if (c != top) out.push_back(c);
  return out;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// example1: two binary issues, three agents.

struct Example1Data {
  PreferenceProfile prefs;
  Alternative truthful_outcome;
  std::size_t improver = 1;
  std::size_t improve_issue = 0;
  Alternative improved_vote;
  ScoreTuple adjusted;  // tally without the improver
  Alternative improved_outcome;
  IssueOrder legal_order;  // order R_1 is legal for
};

inline Example1Data example1_data() {
  const IssueDomain d = IssueDomain::binary(2);
  auto R = [&](std::vector<Alternative> best_first) { return Ranking::from_alternatives(d, best_first); };
  Example1Data x{PreferenceProfile(d, {R({{1, 0}, {0, 0}, {0, 1}, {1, 1}}), R({{1, 1}, {0, 0}, {0, 1}, {1, 0}}),
                                       R({{0, 0}, {0, 1}, {1, 0}, {1, 1}})}),
                 Alternative{1, 0},
                 1,
                 0,
                 Alternative{0, 1},
                 ScoreTuple{{1, 1}, {2, 0}},
                 Alternative{0, 0},
                 IssueOrder{1, 0}};
  return x;
}

inline FixtureReport verify_example1(const Example1Data& x) {
  FixtureReport rep{"example1", {}};
  const IssueDomain& d = x.prefs.domain;
  const VoteProfile a = truthful_votes(x.prefs);
  const Alternative out = plurality_outcome(a, d);
  rep.expect("truthful outcome", out == x.truthful_outcome, "got " + to_string(out));

  const ScoreTuple adj = adjusted_score(a, d, x.improver);
  rep.expect("adjusted tally", adj == x.adjusted, "got " + detail::show_tuple(adj));

  const auto ctx = make_step_context(x.prefs, a, x.improver, x.improve_issue, UncertaintySpec::exact(d.issues()));
  const Alternative br = best_response(ctx);
  rep.expect("best response", br == x.improved_vote, "got " + to_string(br));
  const Alternative after = outcome_with_vote(adj, br);
  rep.expect("improved outcome", after == x.improved_outcome, "got " + to_string(after));
  const std::size_t j = x.improver;
  rep.expect("improvement is strict",
             x.prefs.rankings[j].prefers(d.index(after), d.index(out)), to_string(after) + " vs " + to_string(out));

  const Ranking& R1 = x.prefs.rankings[0];
  const Ranking& R2 = x.prefs.rankings[1];
  const Ranking& R3 = x.prefs.rankings[2];
  rep.expect("R_1 legal for the given order", is_O_legal(R1, d, x.legal_order));
  rep.expect("R_1 not separable", !is_separable(R1, d));
  rep.expect("R_3 separable", is_separable(R3, d));
  rep.expect("R_2 not separable", !is_separable(R2, d));
  rep.expect("R_2 not legal for (0,1)", !is_O_legal(R2, d, IssueOrder{0, 1}));
  rep.expect("R_2 not legal for (1,0)", !is_O_legal(R2, d, IssueOrder{1, 0}));
  return rep;
}

// ---------------------------------------------------------------------------
// example2: uncertainty set of one agent and its possible outcomes.

struct Example2Data {
  VoteProfile profile;  // 13 votes, agent 0 is the observer
  std::size_t agent = 0;
  UncertaintySpec spec;
  std::vector<std::vector<Interval>> expected_set;
  Alternative prospective;
  std::vector<std::vector<Candidate>> expected_outcomes;
};

inline Example2Data example2_data() {
  // Tally {(8,5),(9,4)} with agent 0 voting (0,1).
  std::vector<Alternative> votes{{0, 1}};
  const std::vector<Alternative> rest{{0, 0}, {0, 0}, {0, 0}, {0, 0}, {0, 0}, {0, 0}, {0, 0},
                                      {1, 0}, {1, 0}, {1, 1}, {1, 1}, {1, 1}};
  votes.insert(votes.end(), rest.begin(), rest.end());
  Example2Data x;
  x.profile = VoteProfile{votes};
  x.agent = 0;
  x.spec = UncertaintySpec::linf({1, 1});
  x.expected_set = {{{6, 8}, {4, 6}}, {{8, 10}, {2, 4}}};
  x.prospective = Alternative{1, 1};
  x.expected_outcomes = {{0, 1}, {0}};
  return x;
}

inline FixtureReport verify_example2(const Example2Data& x) {
  FixtureReport rep{"example2", {}};
  const IssueDomain d = IssueDomain::binary(2);
  const ScoreTuple s = score(x.profile, d);
  rep.expect("tally", s == ScoreTuple{{8, 5}, {9, 4}}, "got " + detail::show_tuple(s));
  const Perspective view = make_perspective(x.profile, d, x.agent, x.spec);
  for (std::size_t i = 0; i < d.issues(); ++i)
    rep.expect("uncertainty set issue " + std::to_string(i), view.set[i].candidates == x.expected_set[i],
               "got " + detail::show_box(view.set[i]));
  for (std::size_t i = 0; i < d.issues(); ++i) {
    auto outs = possible_issue_outcomes(view.set[i], x.prospective[i]);
    rep.expect("possible outcomes issue " + std::to_string(i), outs == x.expected_outcomes[i],
               "got " + detail::show_candidates(outs));
  }
  return rep;
}

// ---------------------------------------------------------------------------
// table1_br_cycle: best-response cycle with three agents.

struct Table1Data {
  PreferenceProfile prefs;
  Scripted script;
  std::vector<VoteProfile> cycle;  // profiles before each scripted step
  std::vector<Alternative> outcomes;
  long period = 4;
};

inline Table1Data table1_data() {
  const IssueDomain d = IssueDomain::binary(2);
  auto R = [&](std::vector<Alternative> best_first) { return Ranking::from_alternatives(d, best_first); };
  Table1Data x;
  x.prefs = PreferenceProfile(d, {R({{0, 1}, {1, 1}, {1, 0}, {0, 0}}), R({{0, 0}, {0, 1}, {1, 1}, {1, 0}}),
                                  R({{1, 0}, {1, 1}, {0, 0}, {0, 1}})});
  x.script.steps = {{0, 0, 1}, {1, 1, 1}, {0, 0, 0}, {1, 1, 0}};
  x.cycle = {VoteProfile{{{0, 1}, {0, 0}, {1, 0}}}, VoteProfile{{{1, 1}, {0, 0}, {1, 0}}},
             VoteProfile{{{1, 1}, {0, 1}, {1, 0}}}, VoteProfile{{{0, 1}, {0, 1}, {1, 0}}}};
  x.outcomes = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  x.period = 4;
  return x;
}

inline FixtureReport verify_table1(const Table1Data& x) {
  FixtureReport rep{"table1_br_cycle", {}};
  const IssueDomain& d = x.prefs.domain;
  const std::size_t n = x.prefs.agents();
  const auto mode = UncertaintyMode::fixed_uniform(n, UncertaintySpec::exact(d.issues()));
  rep.expect("initial profile is truthful", truthful_votes(x.prefs) == x.cycle.front());

  DynamicsConfig cfg{x.prefs, x.cycle.front(), DynamicsKind::BestResponse, mode, x.script, kDefaultRoundCap, true};
  try {
    const RunResult res = run(cfg);
    rep.expect("terminal", res.terminal == Terminal::CycleDetected, std::string(terminal_name(res.terminal)));
    const long period = res.cycle ? res.cycle->period : 0;
    rep.expect("period", period == x.period, "got " + std::to_string(period));
    std::vector<Alternative> seen{res.initial_outcome};
    for (const auto& rec : res.trace) seen.push_back(rec.outcome_after);
    seen.resize(std::min(seen.size(), x.outcomes.size()));
    rep.expect("outcome sequence", seen == x.outcomes, "got " + detail::show_alternatives(seen));
  } catch (const std::exception& e) {
    rep.expect("scripted run", false, e.what());
  }

  for (std::size_t t = 0; t < x.cycle.size(); ++t) {
    const VoteProfile& a = x.cycle[t];
    const auto& want = x.script.steps[t];
    auto steps = enumerate_steps(x.prefs, a, DynamicsKind::BestResponse, mode);
    const std::vector<Step> expected{{want.agent, want.issue, want.target.value_or(-1)}};
    rep.expect("a(" + std::to_string(t) + ") only step", steps == expected, "got " + detail::show_steps(steps));
    rep.expect("a(" + std::to_string(t) + ") outcome", plurality_outcome(a, d) == x.outcomes[t],
               "got " + to_string(plurality_outcome(a, d)));
  }
  return rep;
}

// ---------------------------------------------------------------------------
// table2_ldi_cycle: 13 agents of four types, LDI with radii (1,2).

struct Table2Data {
  PreferenceProfile prefs;
  std::vector<int> type_of;  // 1..4 per agent
  UncertaintySpec spec;
  Scripted script;
  /// Printed profiles, one vote per type, keyed by round.
  std::vector<std::pair<long, std::vector<Alternative>>> printed;
  long period = 16;
};

inline Table2Data table2_data() {
  const IssueDomain d = IssueDomain::binary(2);
  auto R = [&](std::vector<Alternative> best_first) { return Ranking::from_alternatives(d, best_first); };
  const Ranking t1 = R({{0, 1}, {1, 1}, {1, 0}, {0, 0}});
  const Ranking t2 = R({{0, 0}, {0, 1}, {1, 1}, {1, 0}});
  const Ranking t3 = R({{1, 0}, {1, 1}, {0, 0}, {0, 1}});
  const Ranking t4 = R({{1, 1}, {1, 0}, {0, 1}, {0, 0}});
  Table2Data x;
  std::vector<Ranking> rs;
  for (auto [type, count] : std::vector<std::pair<int, int>>{{1, 3}, {2, 5}, {3, 4}, {4, 1}})
    for (int c = 0; c < count; ++c) {
      rs.push_back(type == 1 ? t1 : type == 2 ? t2 : type == 3 ? t3 : t4);
      x.type_of.push_back(type);
    }
  x.prefs = PreferenceProfile(d, std::move(rs));
  x.spec = UncertaintySpec::linf({1, 2});
  const std::vector<std::size_t> type1{0, 1, 2}, type2{3, 4, 5, 6, 7};
  for (auto j : type1) x.script.steps.push_back({j, 0, 1});
  for (auto j : type2) x.script.steps.push_back({j, 1, 1});
  for (auto j : type1) x.script.steps.push_back({j, 0, 0});
  for (auto j : type2) x.script.steps.push_back({j, 1, 0});
  x.printed = {{0, {{0, 1}, {0, 0}, {1, 0}, {1, 1}}},
               {3, {{1, 1}, {0, 0}, {1, 0}, {1, 1}}},
               {8, {{1, 1}, {0, 1}, {1, 0}, {1, 1}}},
               {11, {{0, 1}, {0, 1}, {1, 0}, {1, 1}}}};
  x.period = 16;
  return x;
}

inline FixtureReport verify_table2(const Table2Data& x) {
  FixtureReport rep{"table2_ldi_cycle", {}};
  const IssueDomain& d = x.prefs.domain;
  const std::size_t n = x.prefs.agents();
  const auto mode = UncertaintyMode::fixed_uniform(n, x.spec);
  const VoteProfile a0 = truthful_votes(x.prefs);
  rep.expect("tally at a(0)", score(a0, d) == ScoreTuple{{8, 5}, {9, 4}}, detail::show_tuple(score(a0, d)));

  {
    auto ld = ldi_steps(make_step_context(x.prefs, a0, 0, 0, x.spec));
    std::vector<Alternative> got;
    for (const auto& v : ld) got.push_back(v.vote());
    rep.expect("LD on issue 0 for a Type 1 agent at a(0)", got == std::vector<Alternative>{{1, 1}},
               "got " + detail::show_alternatives(got));
  }

  // Replay the script; at each profile the available steps must be exactly
  // the remaining moves of the current phase.
  VoteProfile a = a0;
  const std::size_t len = x.script.steps.size();
  for (std::size_t t = 0; t < len; ++t) {
    for (const auto& [round, per_type] : x.printed) {
      if (static_cast<std::size_t>(round) != t) continue;
      bool ok = true;
      for (std::size_t j = 0; j < n; ++j) ok = ok && a[j] == per_type[static_cast<std::size_t>(x.type_of[j] - 1)];
      rep.expect("printed profile a(" + std::to_string(round) + ")", ok);
    }
    const auto phase = t / 8 * 8 + (t % 8 < 3 ? 0 : 3);
    const auto phase_end = t % 8 < 3 ? phase + 3 : phase + 5;
    std::vector<Step> expected;
    for (std::size_t u = t; u < phase_end; ++u) {
      const auto& s = x.script.steps[u];
      expected.push_back({s.agent, s.issue, s.target.value_or(-1)});
    }
    std::sort(expected.begin(), expected.end());
    auto steps = enumerate_steps(x.prefs, a, DynamicsKind::LocalDominance, mode);
    rep.expect("steps at a(" + std::to_string(t) + ")", steps == expected,
               "got " + detail::show_steps(steps) + " want " + detail::show_steps(expected));
    const auto& s = x.script.steps[t];
    a[s.agent][s.issue] = s.target.value_or(-1);
  }
  rep.expect("a(16) = a(0)", a == a0);

  DynamicsConfig cfg{x.prefs, a0, DynamicsKind::LocalDominance, mode, x.script, kDefaultRoundCap, false};
  try {
    const RunResult res = run(cfg);
    rep.expect("terminal", res.terminal == Terminal::CycleDetected, std::string(terminal_name(res.terminal)));
    const long period = res.cycle ? res.cycle->period : 0;
    rep.expect("period", period == x.period, "got " + std::to_string(period));
  } catch (const std::exception& e) {
    rep.expect("scripted run", false, e.what());
  }
  return rep;
}

// ---------------------------------------------------------------------------
// example4: multi-candidate cycle between two agents with legal preferences.

/// A tuple from the mover's uncertainty set under which `better` yields a
/// strictly preferred outcome to `worse`. Printed outcomes are optional.
struct Witness {
  ScoreTuple tuple;
  Candidate better = 0;
  Candidate worse = 0;
  std::optional<Alternative> better_outcome;
  std::optional<Alternative> worse_outcome;
};

struct Example4Step {
  std::size_t agent = 0;
  Candidate from = 0;
  Candidate to = 0;
  std::vector<Candidate> potential_winners;  // H on issue 1 before the step
  Witness beat;                              // sub-check (i)
  std::vector<Witness> not_dominated;        // sub-check (iii), one per rival
};

struct Example4Data {
  PreferenceProfile prefs;
  VoteProfile initial;
  UncertaintySpec spec;
  ScoreTuple initial_tally;
  std::vector<Example4Step> steps;
  long period = 4;
};

inline Example4Data example4_data() {
  const IssueDomain d({2, 4});
  constexpr Candidate a = 0, b = 1, c = 2, dd = 3;
  Example4Data x;
  std::vector<Ranking> rs;
  rs.push_back(Ranking::from_alternatives(
      d, {{0, b}, {0, c}, {0, a}, {0, dd}, {1, c}, {1, b}, {1, a}, {1, dd}}));
  rs.push_back(Ranking::from_alternatives(
      d, {{0, a}, {0, dd}, {0, b}, {0, c}, {1, a}, {1, dd}, {1, b}, {1, c}}));
  std::vector<Alternative> votes{{0, a}, {0, a}};
  // Remaining 13 agents: separable and truthful, filling the tally.
  const std::vector<Alternative> rest{{0, a}, {0, b}, {0, b}, {0, b}, {0, b}, {1, b}, {1, c},
                                      {1, c}, {1, c}, {1, c}, {1, c}, {1, dd}, {1, dd}};
  for (const auto& v : rest) {
    rs.push_back(detail::lexicographic_ranking(d, {detail::with_first(2, v[0]), detail::with_first(4, v[1])}));
    votes.push_back(v);
  }
  x.prefs = PreferenceProfile(d, std::move(rs));
  x.initial = VoteProfile{votes};
  x.spec = UncertaintySpec::linf({2, 1});
  x.initial_tally = ScoreTuple{{7, 8}, {3, 5, 5, 2}};

  x.steps.push_back({0, a, dd, {a, b, c},
                     {{{6, 8}, {3, 4, 4, 2}}, dd, a, Alternative{1, b}, Alternative{1, a}},
                     {{{{6, 8}, {2, 4, 5, 2}}, dd, b, {}, {}}, {{{7, 7}, {2, 4, 4, 2}}, dd, c, {}, {}}}});
  x.steps.push_back({1, a, dd, {b, c, dd},
                     {{{6, 8}, {2, 4, 4, 4}}, dd, a, Alternative{1, dd}, Alternative{1, b}},
                     {{{{6, 8}, {2, 4, 4, 4}}, dd, b, {}, {}}, {{{6, 8}, {2, 4, 4, 4}}, dd, c, {}, {}}}});
  x.steps.push_back({0, dd, a, {b, c, dd},
                     {{{6, 8}, {1, 4, 4, 4}}, a, dd, Alternative{1, b}, Alternative{1, dd}},
                     {{{{6, 8}, {2, 4, 5, 3}}, a, b, {}, {}}, {{{7, 7}, {2, 4, 4, 3}}, a, c, {}, {}}}});
  x.steps.push_back({1, dd, a, {a, b, c},
                     {{{6, 8}, {3, 4, 4, 2}}, a, dd, Alternative{1, a}, Alternative{1, b}},
                     {{{{6, 8}, {3, 4, 4, 2}}, a, b, {}, {}}, {{{6, 8}, {3, 4, 4, 2}}, a, c, {}, {}}}});
  x.period = 4;
  return x;
}

namespace detail {
inline std::string check_witness(const PreferenceProfile& prefs, const VoteProfile& profile, std::size_t j,
                                 const UncertaintySpec& spec, std::size_t issue, const Witness& w) {
  const IssueDomain& d = prefs.domain;
  const UncertaintySet set = build_uncertainty_set(adjusted_score(profile, d, j), spec);
  if (!set.contains(w.tuple)) return show_tuple(w.tuple) + " is outside the uncertainty set";
  const Alternative xb = outcome_with_vote(w.tuple, profile[j].with(issue, w.better));
  const Alternative xw = outcome_with_vote(w.tuple, profile[j].with(issue, w.worse));
  if (w.better_outcome && xb != *w.better_outcome) return "outcome " + to_string(xb) + " != " + to_string(*w.better_outcome);
  if (w.worse_outcome && xw != *w.worse_outcome) return "outcome " + to_string(xw) + " != " + to_string(*w.worse_outcome);
  if (!prefs.rankings[j].prefers(d.index(xb), d.index(xw))) return to_string(xb) + " not preferred to " + to_string(xw);
  return {};
}
}  // namespace detail

inline FixtureReport verify_example4(const Example4Data& x) {
  FixtureReport rep{"example4", {}};
  const IssueDomain& d = x.prefs.domain;
  constexpr std::size_t issue = 1;
  rep.expect("initial tally", score(x.initial, d) == x.initial_tally, detail::show_tuple(score(x.initial, d)));
  rep.expect("legal for (0,1)", std::all_of(x.prefs.rankings.begin(), x.prefs.rankings.end(), [&](const Ranking& r) {
               return is_O_legal(r, d, IssueOrder{0, 1});
             }));

  VoteProfile a = x.initial;
  Scripted script;
  for (std::size_t t = 0; t < x.steps.size(); ++t) {
    const Example4Step& st = x.steps[t];
    const std::string tag = "step " + std::to_string(t + 1) + " ";
    const std::size_t j = st.agent;
    rep.expect(tag + "current vote", a[j][issue] == st.from, to_string(a[j]));

    auto H = potential_winners(make_perspective(a, d, j, x.spec), issue);
    rep.expect(tag + "H", H == st.potential_winners, "got " + detail::show_candidates(H));

    const StepContext ctx = make_step_context(x.prefs, a, j, issue, x.spec);
    const IssueDominance dom(ctx);

    std::string why = detail::check_witness(x.prefs, a, j, x.spec, issue, st.beat);
    rep.expect(tag + "(i) beat witness", why.empty() && dom.beats(st.to, st.from), why);

    rep.expect(tag + "(ii) old vote does not beat new", !dom.beats(st.from, st.to));

    bool ok = true;
    std::string detail_text;
    for (const auto& w : st.not_dominated) {
      std::string e = detail::check_witness(x.prefs, a, j, x.spec, issue, w);
      if (!e.empty()) {
        ok = false;
        detail_text += e + "; ";
      }
    }
    for (Candidate e = 0; e < d.size(issue); ++e)
      if (e != st.to && dom.dominates(e, st.to)) {
        ok = false;
        detail_text += std::to_string(e) + " dominates; ";
      }
    rep.expect(tag + "(iii) new vote not dominated", ok, detail_text);

    auto targets = dom.ldi_targets();
    rep.expect(tag + "target in LD", std::binary_search(targets.begin(), targets.end(), st.to),
               "LD " + detail::show_candidates(targets));
    a[j][issue] = st.to;
    script.steps.push_back({j, issue, st.to});
  }
  rep.expect("returns to a(0)", a == x.initial);

  DynamicsConfig cfg{x.prefs,         x.initial, DynamicsKind::LocalDominance,
                     UncertaintyMode::fixed_uniform(x.prefs.agents(), x.spec), script, kDefaultRoundCap, false};
  try {
    const RunResult res = run(cfg);
    rep.expect("scripted run cycles", res.terminal == Terminal::CycleDetected, std::string(terminal_name(res.terminal)));
    const long period = res.cycle ? res.cycle->period : 0;
    rep.expect("period", period == x.period, "got " + std::to_string(period));
  } catch (const std::exception& e) {
    rep.expect("scripted run", false, e.what());
  }
  return rep;
}

// ---------------------------------------------------------------------------
// example5_radii_table: LD on issue 0 for one agent across five radius pairs.

struct Example5Row {
  UncertaintySpec spec;
  std::vector<Alternative> expected;  // LD on issue 0
};

struct Example5Data {
  IssueDomain domain{{4, 4}};
  Ranking ranking{detail::identity_order(16)};
  ScoreTuple tally;  // with the agent's vote
  Alternative vote;
  /// Printed single-issue boxes: (radii row, issue, expected intervals).
  std::vector<std::tuple<std::size_t, std::size_t, std::vector<Interval>>> printed_boxes;
  std::vector<Example5Row> rows;
};

inline Example5Data example5_data() {
  constexpr Candidate A = 0, B = 1, C = 2, D = 3;
  Example5Data x;
  x.domain = IssueDomain({4, 4});
  // Legal for issue order (1,0): issue 1 ranked first, issue 0 conditional.
  const std::vector<Candidate> issue1_order{C, B, A, D};
  auto conditional = [&](Candidate f1) -> std::vector<Candidate> {
    switch (f1) {
      case C: return {A, B, D, C};
      case B: return {B, A, D, C};
      case A: return {C, A, B, D};
      default: return {A, B, D, C};  // unspecified by the example
    }
  };
  std::vector<Alternative> best_first;
  for (Candidate f1 : issue1_order)
    for (Candidate f0 : conditional(f1)) best_first.push_back({f0, f1});
  x.ranking = Ranking::from_alternatives(x.domain, best_first);
  x.tally = ScoreTuple{{6, 6, 3, 5}, {2, 4, 6, 0}};
  x.vote = Alternative{D, C};
  x.printed_boxes = {{1, 0, {{5, 7}, {5, 7}, {2, 4}, {3, 5}}},
                     {2, 0, {{4, 8}, {4, 8}, {1, 5}, {2, 6}}},
                     {3, 1, {{1, 3}, {3, 5}, {4, 6}, {0, 1}}},
                     {4, 1, {{0, 4}, {2, 6}, {3, 7}, {0, 2}}}};
  x.rows = {{UncertaintySpec::linf({0, 0}), {}},
            {UncertaintySpec::linf({1, 0}), {{A, C}}},
            {UncertaintySpec::linf({2, 0}), {}},
            {UncertaintySpec::linf({1, 1}), {{A, C}, {B, C}}},
            {UncertaintySpec::linf({1, 2}), {}}};
  return x;
}

inline FixtureReport verify_example5(const Example5Data& x) {
  FixtureReport rep{"example5_radii_table", {}};
  ScoreTuple without = x.tally;
  without.add(x.vote, -1);
  auto row_name = [&](std::size_t r) {
    const auto& radii = x.rows[r].spec.radii;
    return "radii (" + format_rational(radii[0]) + "," + format_rational(radii[1]) + ")";
  };
  for (const auto& [row, issue, want] : x.printed_boxes) {
    const UncertaintySet set = build_uncertainty_set(without, x.rows[row].spec);
    rep.expect(row_name(row) + " box on issue " + std::to_string(issue), set[issue].candidates == want,
               "got " + detail::show_box(set[issue]));
  }
  for (std::size_t r = 0; r < x.rows.size(); ++r) {
    const StepContext ctx{x.domain, x.ranking, without, x.vote, x.rows[r].spec, 0, BallotEffect::AddVote};
    std::vector<Alternative> got;
    for (const auto& v : ldi_steps(ctx)) got.push_back(v.vote());
    rep.expect(row_name(r) + " LD", got == x.rows[r].expected,
               "got " + detail::show_alternatives(got) + " want " + detail::show_alternatives(x.rows[r].expected));
  }
  return rep;
}

// ---------------------------------------------------------------------------

inline std::vector<Fixture> bundled_fixtures() {
  return {
      {"example1", [] { return verify_example1(example1_data()); }},
      {"example2", [] { return verify_example2(example2_data()); }},
      {"table1_br_cycle", [] { return verify_table1(table1_data()); }},
      {"table2_ldi_cycle", [] { return verify_table2(table2_data()); }},
      {"example4", [] { return verify_example4(example4_data()); }},
      {"example5_radii_table", [] { return verify_example5(example5_data()); }},
  };
}

}  // namespace mivote
