// Copyright (C) 2026 signforge contributors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include "signforge/errors.hpp"
#include "signforge/geometry.hpp"

using namespace signforge;

TEST(PixelBox, IntersectionIsHalfOpen) {
  EXPECT_EQ(intersection_area({0, 0, 10, 10}, {10, 0, 5, 5}), 0);
  EXPECT_EQ(intersection_area({0, 0, 10, 10}, {9, 9, 5, 5}), 1);
  EXPECT_EQ(intersection_area({0, 0, 10, 10}, {2, 3, 4, 4}), 16);
}

TEST(Homography, QuarterRotationIsExact) {
  const Homography r = Homography::rotation(90.0, {5, 5});
  const Point p = r.apply({10, 5});
  EXPECT_EQ(p.x, 5.0);
  EXPECT_EQ(p.y, 0.0);  // counter-clockwise on screen: right goes up
}

TEST(Homography, FromQuadsMapsCorners) {
  const std::array<Point, 4> src{Point{0, 0}, {10, 0}, {10, 10}, {0, 10}};
  const std::array<Point, 4> dst{Point{1, 2}, {12, 1}, {11, 13}, {-1, 9}};
  const Homography h = Homography::from_quads(src, dst);
  for (int k = 0; k < 4; ++k) {
    const Point p = h.apply(src[k]);
    EXPECT_NEAR(p.x, dst[k].x, 1e-9);
    EXPECT_NEAR(p.y, dst[k].y, 1e-9);
  }
  const Point back = h.inverse().apply(dst[2]);
  EXPECT_NEAR(back.x, 10.0, 1e-9);
  EXPECT_NEAR(back.y, 10.0, 1e-9);
}

TEST(Homography, CollinearQuadIsRejected) {
  const std::array<Point, 4> src{Point{0, 0}, {10, 0}, {10, 10}, {0, 10}};
  const std::array<Point, 4> line{Point{0, 0}, {1, 1}, {2, 2}, {3, 3}};
  EXPECT_THROW(Homography::from_quads(src, line), GeometryError);
}

TEST(Convexity, Cases) {
  EXPECT_TRUE(is_strictly_convex({Point{0, 0}, {4, 0}, {4, 4}, {0, 4}}));
  EXPECT_FALSE(is_strictly_convex({Point{0, 0}, {4, 0}, {1, 1}, {0, 4}}));
  EXPECT_FALSE(is_strictly_convex({Point{0, 0}, {4, 4}, {4, 0}, {0, 4}}));
}
