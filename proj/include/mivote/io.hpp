#pragma once

// JSON profile and schedule files, and JSON-lines run traces.
//
// Profile:  {"sizes":[2,2], "agents":[{"ranking":[[0,1],[1,1],[1,0],[0,0]]}, ...],
//            "votes":[[0,1], ...]}            ("votes" optional, default truthful)
// Schedule: [[agent, issue, target], [agent, issue], ...]   (0-based; target optional)

#include <nlohmann/json.hpp>

#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "mivote/domain.hpp"
#include "mivote/dynamics.hpp"
#include "mivote/error.hpp"
#include "mivote/nonatomic.hpp"

namespace mivote {

using Json = nlohmann::json;

inline constexpr const char* kTraceSchema = "mivote.trace/1";

struct ProfileFile {
  PreferenceProfile prefs;
  VoteProfile votes;
};

namespace detail {

inline const Json& require(const Json& obj, const char* key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key)) throw ParseError(where + ": missing \"" + key + "\"");
  return obj.at(key);
}

inline long long as_int(const Json& v, const std::string& where) {
  if (!v.is_number_integer()) throw ParseError(where + ": expected an integer");
  return v.get<long long>();
}

inline Alternative parse_alternative(const Json& v, const IssueDomain& d, const std::string& where) {
  if (!v.is_array()) throw ParseError(where + ": expected an array of candidates");
  if (v.size() != d.issues())
    throw ParseError(where + ": expected " + std::to_string(d.issues()) + " candidates, got " +
                     std::to_string(v.size()));
  Alternative a;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const long long c = as_int(v[i], where + "[" + std::to_string(i) + "]");
    if (c < 0 || c >= d.size(i)) throw ParseError(where + "[" + std::to_string(i) + "]: candidate out of range");
    a.candidates.push_back(static_cast<Candidate>(c));
  }
  return a;
}

inline Json to_json(const Alternative& a) { return Json(a.candidates); }

inline Json to_json(const VoteProfile& v) {
  Json out = Json::array();
  for (const auto& a : v.votes) out.push_back(to_json(a));
  return out;
}

}  // namespace detail

inline ProfileFile parse_profile(const Json& doc) {
  const Json& sizes_j = detail::require(doc, "sizes", "profile");
  if (!sizes_j.is_array() || sizes_j.empty()) throw ParseError("profile.sizes: expected a nonempty array");
  std::vector<int> sizes;
  for (std::size_t i = 0; i < sizes_j.size(); ++i) {
    const long long k = detail::as_int(sizes_j[i], "profile.sizes[" + std::to_string(i) + "]");
    if (k < 2 || k > 1'000'000) throw ParseError("profile.sizes[" + std::to_string(i) + "]: issue needs at least 2 candidates");
    sizes.push_back(static_cast<int>(k));
  }
  std::optional<IssueDomain> dom;
  try {
    dom.emplace(sizes);
  } catch (const DomainError& e) {
    throw ParseError(std::string("profile.sizes: ") + e.what());
  }
  const IssueDomain& d = *dom;

  const Json& agents = detail::require(doc, "agents", "profile");
  if (!agents.is_array() || agents.empty()) throw ParseError("profile.agents: expected a nonempty array");
  std::vector<Ranking> rankings;
  for (std::size_t j = 0; j < agents.size(); ++j) {
    const std::string where = "profile.agents[" + std::to_string(j) + "].ranking";
    const Json& r = detail::require(agents[j], "ranking", "profile.agents[" + std::to_string(j) + "]");
    if (!r.is_array() || r.size() != d.alternatives())
      throw ParseError(where + ": expected " + std::to_string(d.alternatives()) + " alternatives");
    std::vector<Alternative> best_first;
    for (std::size_t t = 0; t < r.size(); ++t)
      best_first.push_back(detail::parse_alternative(r[t], d, where + "[" + std::to_string(t) + "]"));
    try {
      rankings.push_back(Ranking::from_alternatives(d, best_first));
    } catch (const DomainError& e) {
      throw ParseError(where + ": " + e.what());
    }
  }
  ProfileFile out{PreferenceProfile(d, std::move(rankings)), {}};
  if (doc.contains("votes")) {
    const Json& v = doc.at("votes");
    if (!v.is_array() || v.size() != agents.size())
      throw ParseError("profile.votes: expected one vote per agent");
    for (std::size_t j = 0; j < v.size(); ++j)
      out.votes.votes.push_back(detail::parse_alternative(v[j], d, "profile.votes[" + std::to_string(j) + "]"));
  } else {
    out.votes = truthful_votes(out.prefs);
  }
  return out;
}

inline Json parse_json_text(const std::string& text, const std::string& what) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ParseError(what + ": " + e.what());
  }
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline ProfileFile load_profile(const std::string& path) {
  return parse_profile(parse_json_text(read_file(path), path));
}

inline Json profile_to_json(const PreferenceProfile& prefs, const VoteProfile* votes = nullptr) {
  const IssueDomain& d = prefs.domain;
  Json agents = Json::array();
  for (const auto& r : prefs.rankings) {
    Json order = Json::array();
    for (auto idx : r.order()) order.push_back(detail::to_json(d.alternative(idx)));
    agents.push_back({{"ranking", order}});
  }
  Json doc{{"sizes", d.sizes()}, {"agents", agents}};
  if (votes) doc["votes"] = detail::to_json(*votes);
  return doc;
}

inline Scripted parse_schedule(const Json& doc) {
  if (!doc.is_array() || doc.empty()) throw ParseError("schedule: expected a nonempty array of steps");
  Scripted s;
  for (std::size_t t = 0; t < doc.size(); ++t) {
    const std::string where = "schedule[" + std::to_string(t) + "]";
    const Json& st = doc[t];
    if (!st.is_array() || st.size() < 2 || st.size() > 3) throw ParseError(where + ": expected [agent, issue, target?]");
    const long long agent = detail::as_int(st[0], where + "[0]");
    const long long issue = detail::as_int(st[1], where + "[1]");
    if (agent < 0 || issue < 0) throw ParseError(where + ": indices must be non-negative");
    ScriptedStep step{static_cast<std::size_t>(agent), static_cast<std::size_t>(issue), std::nullopt};
    if (st.size() == 3) {
      const long long c = detail::as_int(st[2], where + "[2]");
      if (c < 0) throw ParseError(where + "[2]: candidate must be non-negative");
      step.target = static_cast<Candidate>(c);
    }
    s.steps.push_back(step);
  }
  return s;
}

inline Scripted load_schedule(const std::string& path) { return parse_schedule(parse_json_text(read_file(path), path)); }

// ---------------------------------------------------------------------------
// Traces

/// Writes one JSON object per line: a header, one record per step, and a result.
class TraceWriter {
 public:
  explicit TraceWriter(std::ostream& os) : os_(os) {}

  void header(const Json& config, std::optional<std::uint64_t> seed) {
    Json h{{"type", "header"}, {"schema", kTraceSchema}, {"config", config}};
    h["seed"] = seed ? Json(*seed) : Json(nullptr);
    line(h);
  }

  void step(const StepRecord& r, std::optional<std::size_t> batch = std::nullopt, std::size_t sets = 0) {
    Json s{{"type", "step"},   {"round", r.round}, {"agent", r.agent},
           {"issue", r.issue}, {"from", r.from},   {"to", r.to},
           {"outcome", detail::to_json(r.outcome_after)}};
    if (batch) {
      s["batch"] = *batch;
      s["mass"] = format_rational(Rational(static_cast<std::int64_t>(*batch), static_cast<std::int64_t>(sets)));
    }
    line(s);
  }

  void result(const RunResult& res) {
    Json r{{"type", "result"},
           {"terminal", terminal_name(res.terminal)},
           {"rounds", res.rounds},
           {"initial_outcome", detail::to_json(res.initial_outcome)},
           {"final_outcome", detail::to_json(res.final_outcome)},
           {"final_votes", detail::to_json(res.final_profile)}};
    if (res.cycle) {
      r["cycle_entry"] = res.cycle->entry;
      r["period"] = res.cycle->period;
    }
    line(r);
  }

  void run(const Json& config, std::optional<std::uint64_t> seed, const RunResult& res) {
    header(config, seed);
    for (const auto& rec : res.trace) step(rec);
    result(res);
  }

  void run(const Json& config, std::optional<std::uint64_t> seed, const NonatomicRunResult& res, std::size_t sets) {
    header(config, seed);
    for (std::size_t t = 0; t < res.run.trace.size(); ++t) step(res.run.trace[t], res.batch_sizes[t], sets);
    result(res.run);
  }

 private:
  void line(const Json& j) { os_ << j.dump() << '\n'; }
  std::ostream& os_;
};

/// Parses a trace back into its records; validates the schema and order.
inline std::vector<Json> read_trace(std::istream& in) {
  std::vector<Json> out;
  std::string text;
  while (std::getline(in, text)) {
    if (text.empty()) continue;
    out.push_back(parse_json_text(text, "trace line " + std::to_string(out.size() + 1)));
  }
  if (out.empty() || out.front().value("type", "") != "header" || out.front().value("schema", "") != kTraceSchema)
    throw ParseError("trace: missing header");
  if (out.back().value("type", "") != "result") throw ParseError("trace: missing result record");
  return out;
}

}  // namespace mivote
