// Walks the endpoint of C1 around the three tripod segments and prints each stop.

#include <cstdio>

#include "cyclproj/cyclproj.hpp"

int main() {
  using namespace cyclproj;
  const auto sc = build_tripod_counterexample();
  auto x = sc.start("endpoint");
  for (int cycle = 1; cycle <= 4; ++cycle) {
    const auto [next, path] = cycle_apply(sc.space, std::span(sc.sets), x);
    std::printf("cycle %d:", cycle);
    for (const auto& p : path) {
      std::printf("  ((%zu, %.4f), (%zu, %.4f))", p.left.leg(), p.left.offset(), p.right.leg(), p.right.offset());
    }
    std::printf("  step %.12f\n", sc.space.distance(x, next));
    x = next;
  }
}
