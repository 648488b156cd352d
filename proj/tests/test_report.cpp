#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "wavesim/error.hpp"
#include "wavesim/report.hpp"
#include "wavesim/simulation.hpp"

using namespace wavesim;

namespace {

PlatoonLog constant_pair() {
  std::vector<TrajectorySample> a, b;
  for (int k = 0; k <= 300; ++k) {
    const double t = k * 0.1;
    a.push_back({t, 40 + 10 * t, 10, 0});
    b.push_back({t, 10 * t, 10, 0});
  }
  return PlatoonLog(0, {VehicleTrajectory("lead", 0.1, a), VehicleTrajectory("ego", 0.1, b)});
}

const PlatoonRun& fixture(const char* name) {
  static std::map<std::string, PlatoonRun> cache;
  auto it = cache.find(name);
  if (it == cache.end()) it = cache.emplace(name, simulate(make_template(name))).first;
  return it->second;
}

// Fraction of samples where the distance curve is nearly flat while not at the start.
double flat_fraction(const std::vector<double>& d, double dt) {
  std::size_t flat = 0;
  for (std::size_t i = 1; i < d.size(); ++i) flat += (d[i] - d[i - 1]) / dt < 0.5;
  return double(flat) / (d.size() - 1);
}

// Value of `attr` on every element whose text starts with `open`.
std::vector<std::string> attributes(const std::string& doc, const std::string& open, const std::string& attr) {
  std::vector<std::string> out;
  for (auto at = doc.find(open); at != std::string::npos; at = doc.find(open, at + 1)) {
    const auto end = doc.find('>', at);
    const auto key = doc.find(" " + attr + "=\"", at);
    if (key == std::string::npos || key > end) continue;
    const auto first = key + attr.size() + 3;
    out.push_back(doc.substr(first, doc.find('"', first) - first));
  }
  return out;
}

double sd(const std::vector<double>& v) {
  double m = 0;
  for (double x : v) m += x;
  m /= v.size();
  double ss = 0;
  for (double x : v) ss += (x - m) * (x - m);
  return std::sqrt(ss / v.size());
}

}  // namespace

TEST(Ecd, ConstantFixture) {
  const auto r = ecd(constant_pair(), "ego", {}, {});
  ASSERT_EQ(r.t.size(), 301u);
  EXPECT_NEAR(r.distance.back(), 300.0, 1e-9);
  EXPECT_NEAR(r.front_gap.front(), 35.5, 1e-9);
  EXPECT_NEAR(r.space_ideal.front(), 20.0, 1e-12);
  for (std::size_t i = 0; i < r.t.size(); ++i) EXPECT_NEAR(r.front_threshold[i], d_safe(10, 10, {}), 1e-12);
  ASSERT_EQ(r.rear_extension.size(), 301u);
  EXPECT_GE(r.rear_extension.front(), 8 * 4.5);
  EXPECT_NEAR(r.rear_extension.front(), r.rear_extension.back(), 1e-3);
}

TEST(Ecd, LeaderSubjectAndOptions) {
  const auto r = ecd(constant_pair(), "lead", {}, {}, {0, 2.0, {}});
  EXPECT_TRUE(r.space_actual.empty());
  EXPECT_TRUE(r.front_gap.empty());
  EXPECT_TRUE(r.rear_extension.empty());
  EXPECT_FALSE(r.notices.empty());
  EXPECT_THROW(ecd(constant_pair(), "ghost", {}, {}), Error);
}

TEST(Ecd, DistanceIntegratesSpeed) {
  const auto& run = fixture("ecd_dd");
  const auto r = ecd(run.log, "v2", {}, {});
  double integral = 0;
  for (std::size_t i = 1; i < r.speed.size(); ++i) integral += 0.5 * (r.speed[i] + r.speed[i - 1]) * 0.1;
  EXPECT_NEAR(r.distance.back(), integral, 1e-6);
  EXPECT_TRUE(std::is_sorted(r.distance.begin(), r.distance.end()));
  for (double x : r.fuel) EXPECT_GE(x, 0.0);
}

TEST(Ecd, DdVersusDiStructure) {
  const auto dd = ecd(fixture("ecd_dd").log, "v2", {}, {});
  const auto di = ecd(fixture("ecd_di").log, "v2", {}, {});
  EXPECT_GT(flat_fraction(dd.distance, 0.1), 0.1);
  EXPECT_LT(flat_fraction(di.distance, 0.1), flat_fraction(dd.distance, 0.1));
  EXPECT_GT(sd(dd.rear_extension), 1.0);
  EXPECT_LT(sd(di.rear_extension), sd(dd.rear_extension));
  for (std::size_t i = 0; i < di.front_gap.size(); ++i)
    EXPECT_GE(di.front_gap[i], di.front_threshold[i]) << "t " << di.t[i];
}

TEST(Ecd, JsonPanels) {
  const auto js = ecd_to_json(ecd(constant_pair(), "ego", {}, {}));
  for (const char* key : {"SPEED", "FUEL", "DISTANCE", "SPACE_SAFETY", "SAFETY_FRONT", "SAFETY_REAR"})
    EXPECT_NE(js.find(key), std::string::npos) << key;
}

TEST(Svg, StructureAndDeterminism) {
  const auto r = ecd(fixture("ecd_dd").log, "v2", {}, {});
  const auto svg = render_svg(r);
  EXPECT_NE(svg.find("<svg"), std::string::npos);
  EXPECT_NE(svg.find("</svg>"), std::string::npos);
  std::vector<std::string> ids;
  for (auto at = svg.find("<g "); at != std::string::npos; at = svg.find("<g ", at + 1)) {
    const auto end = svg.find('>', at);
    if (svg.substr(at, end - at).find("class=\"panel\"") == std::string::npos) continue;
    const auto first = svg.find("id=\"", at) + 4;
    ids.push_back(svg.substr(first, svg.find('"', first) - first));
  }
  const std::vector<std::string> expected{"speed", "fuel", "distance", "space-safety", "safety-front",
                                          "safety-rear"};
  EXPECT_EQ(ids, expected);
  const auto points = attributes(svg, "<polyline", "points");
  for (const auto& pts : points)
    EXPECT_EQ(std::count(pts.begin(), pts.end(), ','), static_cast<long>(r.t.size()));
  const std::size_t polylines = points.size();
  EXPECT_EQ(polylines, 8u);
  EXPECT_EQ(render_svg(r), svg);
  EXPECT_EQ(std::count(svg.begin(), svg.end(), '<'), std::count(svg.begin(), svg.end(), '>'));
}

TEST(Svg, EmptyPanelsMarked) {
  const auto svg = render_svg(ecd(constant_pair(), "lead", {}, {}, {0, 2.0, {}}));
  EXPECT_NE(svg.find("not available"), std::string::npos);
}

TEST(Table, Cells) {
  EXPECT_EQ(format_t_cell(6.30, 24, 1e-6), "6.30 (24, <.001)");
  EXPECT_EQ(format_t_cell(0.0, 10, 1.0), "0.00 (10, 1.000)");
  EXPECT_EQ(format_t_cell(2.1, 11, 0.0594), "2.10 (11, .059)");
}

TEST(Table, RenderAndCsv) {
  std::vector<ComparisonRow> rows{{"energy", 12.3, 1.1, 10.9, 0.9, 6.30, 24, 1e-6, 1.26},
                                  {"speed_mean", 7.7, 0.79, 7.7, 0.79, 0, 24, 1.0, 0}};
  const auto text = render_table(rows);
  EXPECT_NE(text.find("Pretest M (SD)"), std::string::npos);
  EXPECT_NE(text.find("6.30 (24, "), std::string::npos);
  EXPECT_NE(text.find("1.26"), std::string::npos);
  EXPECT_NE(text.find("0.00 (24, 1.000)"), std::string::npos);
  const auto back = table_from_csv(table_to_csv(rows));
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[0].variable, "energy");
  EXPECT_EQ(back[0].df, 24);
  EXPECT_NEAR(back[0].t, 6.30, 1e-9);
  EXPECT_EQ(table_to_csv(back), table_to_csv(rows));
}
