#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "cyclproj/cyclproj.hpp"
#include "cyclproj/trace_io.hpp"

using namespace cyclproj;

namespace {

template <class Point>
void expect_round_trip(const Trace<Point>& tr) {
  std::stringstream ss;
  write_csv(ss, tr);
  const CsvTable t = read_csv(ss);
  ASSERT_EQ(t.header.size(), 5 + Coordinates<Point>::names().size());
  ASSERT_EQ(t.n.size(), tr.records.size());
  for (std::size_t row = 0; row < t.n.size(); ++row) {
    const auto& rec = tr.records[row];
    EXPECT_EQ(t.n[row], rec.index);
    const double r = at_or_nan(tr.r, rec.index);
    if (std::isnan(r)) {
      EXPECT_TRUE(std::isnan(t.columns[0][row]));
    } else {
      EXPECT_EQ(t.columns[0][row], r);  // %.17g is exact for doubles
    }
    const auto coords = Coordinates<Point>::values(rec.iterate);
    for (std::size_t k = 0; k < coords.size(); ++k) EXPECT_EQ(t.columns[4 + k][row], coords[k]);
  }
}

TEST(TraceIo, PlaneRoundTrip) {
  const auto sc = build_plane_two_sets(0.5);
  for (std::size_t stride : {1u, 7u}) {
    IterateOptions opts;
    opts.stride = stride;
    expect_round_trip(iterate(sc.space, sc.sets, sc.start("default"), 60, opts));
  }
}

TEST(TraceIo, TripodAndChainRoundTrip) {
  const auto tri = build_tripod_counterexample();
  expect_round_trip(iterate(tri.space, tri.sets, tri.start("endpoint"), 10));
  const auto ch = build_twisted_chain(1.0, 0.1, 3.0);
  expect_round_trip(iterate(ch.space, ch.sets, ch.start("boundary"), 10));
}

TEST(TraceIo, PlaneHeaderAndEmptyFields) {
  const auto sc = build_plane_two_sets(1.0);
  std::stringstream ss;
  write_csv(ss, iterate(sc.space, sc.sets, sc.start("default"), 3));
  std::string header, first;
  std::getline(ss, header);
  std::getline(ss, first);
  EXPECT_EQ(header, "n,r,s,a,b,x,y");
  // Row 0 has r and b but no s or a.
  EXPECT_NE(first.find(",,,"), std::string::npos) << first;
  EXPECT_EQ(first.rfind("0,", 0), 0u);
}

TEST(TraceIo, ChainCoordinatesRebuildPoint) {
  const ChainPoint p{{0.03, -0.04}, 1.25};
  const auto v = Coordinates<ChainPoint>::values(p);
  ASSERT_EQ(v.size(), 3u);
  const ChainPoint q = Coordinates<ChainPoint>::from(v);
  EXPECT_EQ(q.disc.x, p.disc.x);
  EXPECT_EQ(q.height, p.height);
}

TEST(TraceIo, ReadCsvRejectsBadInput) {
  std::stringstream empty;
  EXPECT_THROW(read_csv(empty), DomainError);
  std::stringstream bad_header("m,r\n0,1\n");
  EXPECT_THROW(read_csv(bad_header), DomainError);
  std::stringstream short_row("n,r,s\n0,1\n");
  EXPECT_THROW(read_csv(short_row), DomainError);
}

TEST(TraceIo, SummaryJsonKeys) {
  RunSummary s;
  s.scenario = "tripod";
  s.params = {{"k", 3}};
  s.n = 5;
  s.verdict.classification = Regularity::NotRegular;
  s.verdict.final_r = 1.0;
  s.verdict.liminf_r = 1.0;
  s.sum_r_sq = 5.0;
  const auto j = to_json(s);
  for (const char* key : {"scenario", "params", "n", "verdict", "final_r", "liminf_r", "slope", "sums"}) {
    EXPECT_TRUE(j.contains(key)) << key;
  }
  EXPECT_EQ(j["verdict"], "NotRegular");
  EXPECT_TRUE(j["slope"].is_null());
  EXPECT_DOUBLE_EQ(j["sums"]["r_sq"].get<double>(), 5.0);
  EXPECT_FALSE(j.contains("aborted"));
  EXPECT_TRUE(json_number(kUndefined).is_null());
}

TEST(TraceIo, FormatNumber) {
  EXPECT_EQ(format_number(kUndefined), "");
  EXPECT_EQ(std::stod(format_number(0.1)), 0.1);
}

}  // namespace
