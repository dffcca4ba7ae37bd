#include <doctest.h>

#include <algorithm>
#include <vector>

#include "tpng/height.hpp"
#include "tpng/rng.hpp"
#include "tpng/scp.hpp"
#include "tpng/sweep.hpp"
#include "worked_example.hpp"

using namespace tpng;

TEST_CASE("particle layer on the reference configuration") {
  Diagram base = worked::base();
  ScpLayer layer =
      build_layer(base, worked::extra_sources, worked::dropped_sinks, worked::layer_coins());

  REQUIRE(layer.paths.size() == 5);
  CHECK(layer.coins_drawn == 7);

  SUBCASE("paths, point by point") {
    const ScpPath& m1 = layer.path_of(-1);
    CHECK(m1.entry_kind == OriginKind::sink);
    CHECK(m1.points == std::vector<Point>{{0.0, 7.5}, {2.0, 7.5}, {2.0, 8.0}});
    CHECK(m1.exit_kind == ScpPath::Exit::top);

    const ScpPath& p0 = layer.path_of(0);
    CHECK(p0.points == std::vector<Point>{{0.0, 4.0},
                                          {1.5, 4.0},
                                          {1.5, 6.0},
                                          {2.0, 6.0},
                                          {2.0, 7.5},
                                          {2.4, 7.5},
                                          {2.4, 8.0}});

    const ScpPath& p1 = layer.path_of(1);
    CHECK(p1.entry_kind == OriginKind::source);
    CHECK(p1.points == std::vector<Point>{{1.5, 0.0},
                                          {1.5, 4.0},
                                          {2.4, 4.0},
                                          {2.4, 7.5},
                                          {2.8, 7.5},
                                          {2.8, 8.0}});

    const ScpPath& p2 = layer.path_of(2);
    CHECK(p2.points ==
          std::vector<Point>{{6.3, 0.0}, {6.3, 0.5}, {10.0, 0.5}, {10.0, 8.0}});

    const ScpPath& p3 = layer.path_of(3);
    CHECK(p3.points == std::vector<Point>{{10.0, 0.0}, {10.0, 0.5}, {12.0, 0.5}});
    CHECK(p3.exit_kind == ScpPath::Exit::right);
  }

  SUBCASE("trades in sweep order") {
    REQUIRE(layer.swaps.size() == 4);
    CHECK(layer.swaps[0].at == Point{10.0, 0.5});
    CHECK(layer.swaps[0].lower_label == 2);
    CHECK(layer.swaps[1].at == Point{1.5, 4.0});
    CHECK(layer.swaps[1].lower_label == 0);
    CHECK(layer.swaps[2].at == Point{2.0, 7.5});
    CHECK(layer.swaps[2].lower_label == -1);
    CHECK(layer.swaps[3].at == Point{2.4, 7.5});
    CHECK(layer.swaps[3].lower_label == 0);
  }

  SUBCASE("enlarged diagram") {
    const Diagram& psi = layer.psi;
    CHECK(psi.sources == std::vector<double>{1.5, 3.0, 5.0, 6.3, 8.0, 10.0, 11.5});
    CHECK(psi.sinks == std::vector<double>{1.0, 3.0, 6.0});
    CHECK(psi.verticals.size() == 17);
    CHECK(psi.horizontals.size() == 13);
    CHECK(psi.corners() == 11);
    CHECK(psi.crossings() == 12);
    CHECK(psi.exits_top == 6);
    CHECK(psi.exits_right == 2);
    CHECK(validate_diagram(psi).empty());
    CHECK(conservation_holds(psi));

    // runs contributed by the particles fuse with the segments they extend
    const auto* v = worked::vertical_at(psi, 1.5);
    REQUIRE(v != nullptr);
    CHECK(v->y_lo == 0.0);
    CHECK(v->y_hi == 6.0);
    CHECK(v->upper == EndKind::corner);

    v = worked::vertical_at(psi, 2.0);
    REQUIRE(v != nullptr);
    CHECK(v->y_lo == 5.0);
    CHECK(v->y_hi == 8.0);
    CHECK(v->upper == EndKind::exit);

    v = worked::vertical_at(psi, 2.4);
    REQUIRE(v != nullptr);
    CHECK(v->y_lo == 2.5);
    CHECK(v->y_hi == 8.0);

    v = worked::vertical_at(psi, 10.0);
    REQUIRE(v != nullptr);
    CHECK(v->y_lo == 0.0);
    CHECK(v->y_hi == 8.0);

    v = worked::vertical_at(psi, 6.3);
    REQUIRE(v != nullptr);
    CHECK(v->y_hi == 0.5);
    CHECK(v->upper == EndKind::corner);

    // ridden stretches vanish; the rest is truncated to the boarding point
    CHECK(worked::horizontal_at(psi, 4.0) == nullptr);
    CHECK(worked::horizontal_at(psi, 7.5) == nullptr);

    const auto* h = worked::horizontal_at(psi, 0.5);
    REQUIRE(h != nullptr);
    CHECK(h->x_hi == 6.3);
    CHECK(h->right == EndKind::corner);

    h = worked::horizontal_at(psi, 6.0);
    REQUIRE(h != nullptr);
    CHECK(h->x_hi == 1.5);
    CHECK(h->right == EndKind::corner);

    h = worked::horizontal_at(psi, 2.0);
    REQUIRE(h != nullptr);
    CHECK(h->x_hi == 12.0);
    CHECK(h->right == EndKind::exit);
  }

  SUBCASE("layer input validation") {
    CHECK_THROWS_AS(build_layer(base, {1.5, 1.5}, {}, worked::layer_coins()),
                    std::invalid_argument);
    CHECK_THROWS_AS(build_layer(base, {}, {2.2}, worked::layer_coins()),
                    std::invalid_argument); // not a sink of the base
  }
}

TEST_CASE("sampled coupled pairs stay ordered and well formed") {
  for (std::uint64_t seed : {51ULL, 52ULL, 53ULL}) {
    ModelParams lower = ModelParams::stationary(0.8, 0.5, Box{9.0, 6.0}, seed);
    ModelParams upper = lower;
    upper.source_rate = 1.3;
    upper.sink_rate = 0.0;
    CoupledPair pair = couple_pair(lower, upper);

    CHECK(validate_diagram(pair.lower).empty());
    CHECK(validate_diagram(pair.layer.psi).empty());

    // boundary containment
    for (double s : pair.lower.sources)
      CHECK(std::binary_search(pair.layer.psi.sources.begin(), pair.layer.psi.sources.end(), s));
    for (double k : pair.layer.psi.sinks)
      CHECK(std::binary_search(pair.lower.sinks.begin(), pair.lower.sinks.end(), k));
    CHECK(pair.layer.psi.bulk.size() == pair.lower.bulk.size());

    // enlargement only ever extends verticals and truncates horizontals
    for (const auto& s : pair.lower.verticals) {
      bool covered = false;
      for (const auto& w : pair.layer.psi.verticals)
        covered |= w.x == s.x && w.y_lo <= s.y_lo && w.y_hi >= s.y_hi;
      CHECK(covered);
    }
    for (const auto& h : pair.layer.psi.horizontals) {
      bool inside = false;
      for (const auto& g : pair.lower.horizontals)
        inside |= g.y == h.y && g.x_lo <= h.x_lo && g.x_hi >= h.x_hi;
      CHECK(inside);
    }

    // particle labels are consecutive around zero and paths stay ordered
    for (const auto& sw : pair.layer.swaps)
      CHECK(pair.layer.has_label(sw.lower_label + 1));
    for (const auto& p : pair.layer.paths) {
      REQUIRE(!p.points.empty());
      for (std::size_t i = 1; i < p.points.size(); ++i) {
        CHECK(p.points[i].x >= p.points[i - 1].x);
        CHECK(p.points[i].y >= p.points[i - 1].y);
        // axis-aligned staircase
        CHECK((p.points[i].x == p.points[i - 1].x || p.points[i].y == p.points[i - 1].y));
      }
    }
  }
}

TEST_CASE("extra sources alone push the level field up everywhere") {
  // with the sink set shared, the enlargement only adds particles, so the
  // reading at every point can move up but never down
  for (std::uint64_t seed : {54ULL, 55ULL, 56ULL}) {
    ModelParams lower = ModelParams::stationary(0.8, 0.5, Box{9.0, 6.0}, seed);
    ModelParams upper = lower;
    upper.source_rate = 1.6;
    CoupledPair pair = couple_pair(lower, upper);
    CHECK(pair.layer.psi.sinks == pair.lower.sinks);

    Rng pick(seed * 7 + 1);
    for (int q = 0; q < 120; ++q) {
      const Point v{pick.uniform(0.0, 9.0), pick.uniform(0.0, 6.0)};
      const int lo = height(pair.lower, v);
      const int hi = height(pair.layer.psi, v);
      CHECK(hi >= lo);
      CHECK(hi - lo <= static_cast<int>(pair.layer.paths.size()));
    }
  }
}

TEST_CASE("coupling rejects inconsistent parameter pairs") {
  ModelParams lower = ModelParams::stationary(1.0, 0.5, Box{5.0, 5.0}, 1);
  ModelParams upper = lower;
  upper.source_rate = 0.5; // below the lower rate
  CHECK_THROWS_AS(couple_pair(lower, upper), std::invalid_argument);

  upper = lower;
  upper.sink_rate = lower.sink_rate + 1.0; // above the lower rate
  CHECK_THROWS_AS(couple_pair(lower, upper), std::invalid_argument);

  upper = lower;
  upper.source_rate = 1.5;
  upper.sink_rate = 0.0;
  upper.box = Box{6.0, 5.0};
  CHECK_THROWS_AS(couple_pair(lower, upper), std::invalid_argument);
}
