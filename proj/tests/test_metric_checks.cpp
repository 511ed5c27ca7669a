#include <gtest/gtest.h>

#include <numbers>
#include <random>

#include "cyclproj/metric.hpp"
#include "cyclproj/product.hpp"

using namespace cyclproj;

namespace {

TEST(ComparisonAngle, Examples) {
  EXPECT_NEAR(comparison_angle(1, 1, 1), std::numbers::pi / 3, 1e-15);
  EXPECT_NEAR(comparison_angle(3, 4, 5), std::numbers::pi / 2, 1e-15);
  EXPECT_NEAR(comparison_angle(1, 1, 2), std::numbers::pi, 1e-15);
}

TEST(ComparisonAngle, ClampsRoundingAndRejectsBadTriangles) {
  EXPECT_NEAR(comparison_angle(1, 1, 2 + 1e-12), std::numbers::pi, 1e-15);
  EXPECT_THROW(comparison_angle(1, 1, 3), DomainError);
  EXPECT_THROW(comparison_angle(0, 1, 1), UndefinedAngle);
  EXPECT_THROW(comparison_angle(1, 0, 1), UndefinedAngle);
}

TEST(CnMargin, EuclideanEquality) {
  const Plane P;
  EXPECT_NEAR(cn_margin(P, {0, 0}, {2, 0}, {0, 2}), 0.0, 1e-15);
}

TEST(CnMargin, DegenerateSegment) {
  const TreeProduct X = unit_tripod_product();
  const TreeProductPoint x{{0, 0.3}, {2, 0.9}};
  const TreeProductPoint y{{1, 0.7}, {1, 0.2}};
  EXPECT_EQ(cn_margin(X, x, y, y), 0.0);
}

TEST(CnMargin, TreeProductTriplesAreCat0) {
  const TreeProduct X = unit_tripod_product();
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<std::size_t> leg(0, 2);
  auto draw = [&] { return TreeProductPoint{{leg(rng), unit(rng)}, {leg(rng), unit(rng)}}; };
  for (int i = 0; i < 2000; ++i) {
    const auto x = draw();
    const auto y = draw();
    const auto z = draw();
    // The midpoint really is equidistant from y and z at half their distance.
    const auto m = X.geodesic(y, z, 0.5);
    const double half = 0.5 * X.distance(y, z);
    ASSERT_NEAR(X.distance(y, m), half, 1e-12);
    ASSERT_NEAR(X.distance(m, z), half, 1e-12);
    EXPECT_GE(cn_margin(X, x, y, z), -1e-12);
  }
}

TEST(CnMargin, TripodBranchingIsStrict) {
  // x on a third leg sees the midpoint of a path through the center strictly closer than in the plane.
  const StarTree S = StarTree::unit();
  EXPECT_GT(cn_margin(S, StarPoint{2, 1.0}, StarPoint{0, 1.0}, StarPoint{1, 1.0}), 0.5);
}

}  // namespace
