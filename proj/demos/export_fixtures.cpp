// Writes the bundled fixture profiles and schedules as JSON files.
//   export_fixtures [DIR]

#include <filesystem>
#include <fstream>
#include <iostream>

#include "mivote/mivote.hpp"

using namespace mivote;

namespace {

void write(const std::filesystem::path& p, const Json& j) {
  std::ofstream(p) << j.dump(1) << '\n';
  std::cout << p.string() << '\n';
}

Json schedule_json(const Scripted& s) {
  Json out = Json::array();
  for (const auto& st : s.steps) {
    Json step{st.agent, st.issue};
    if (st.target) step.push_back(*st.target);
    out.push_back(step);
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  const std::filesystem::path dir = argc > 1 ? argv[1] : "data";
  std::filesystem::create_directories(dir);

  const auto t1 = table1_data();
  write(dir / "table1.json", profile_to_json(t1.prefs));
  write(dir / "table1_schedule.json", schedule_json(t1.script));

  const auto t2 = table2_data();
  write(dir / "table2.json", profile_to_json(t2.prefs));
  write(dir / "table2_schedule.json", schedule_json(t2.script));

  const auto e4 = example4_data();
  write(dir / "example4.json", profile_to_json(e4.prefs, &e4.initial));
  Scripted s4;
  for (const auto& st : e4.steps) s4.steps.push_back({st.agent, 1, st.to});
  write(dir / "example4_schedule.json", schedule_json(s4));

  // Three agents with separable lexicographic rankings.
  const IssueDomain d = IssueDomain::binary(3);
  std::vector<Ranking> rs;
  for (const auto& top : std::vector<Alternative>{{0, 0, 1}, {1, 0, 0}, {0, 1, 0}})
    rs.push_back(detail::lexicographic_ranking(
        d, {detail::with_first(2, top[0]), detail::with_first(2, top[1]), detail::with_first(2, top[2])}));
  write(dir / "separable.json", profile_to_json(PreferenceProfile(d, std::move(rs))));
  return 0;
}
