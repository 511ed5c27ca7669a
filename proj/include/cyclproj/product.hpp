#pragma once

#include <cmath>

#include "cyclproj/plane.hpp"
#include "cyclproj/star_tree.hpp"

namespace cyclproj {

template <class LeftPoint, class RightPoint>
struct ProductPoint {
  LeftPoint left;
  RightPoint right;

  friend bool operator==(const ProductPoint&, const ProductPoint&) = default;
};

/// l2-product of two geodesic spaces: d = sqrt(d_left^2 + d_right^2).
template <class Left, class Right>
class Product {
public:
  using Point = ProductPoint<typename Left::Point, typename Right::Point>;

  Product(Left left, Right right) : left_(std::move(left)), right_(std::move(right)) {}

  const Left& left() const { return left_; }
  const Right& right() const { return right_; }

  friend bool operator==(const Product&, const Product&) = default;

  void validate(const Point& p) const {
    left_.validate(p.left);
    right_.validate(p.right);
  }

  double distance(const Point& p, const Point& q) const {
    return std::hypot(left_.distance(p.left, q.left), right_.distance(p.right, q.right));
  }

  // Product geodesics are componentwise geodesics with the same parameter.
  Point geodesic(const Point& p, const Point& q, double t) const {
    return {left_.geodesic(p.left, q.left, t), right_.geodesic(p.right, q.right, t)};
  }

private:
  Left left_;
  Right right_;
};

using TreeProduct = Product<StarTree, StarTree>;
using TreeProductPoint = TreeProduct::Point;

inline TreeProduct unit_tripod_product() { return {StarTree::unit(3), StarTree::unit(3)}; }

}  // namespace cyclproj
