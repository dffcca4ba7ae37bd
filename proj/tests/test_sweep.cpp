#include <doctest.h>

#include <vector>

#include "tpng/diagram.hpp"
#include "tpng/io.hpp"
#include "tpng/sweep.hpp"
#include "worked_example.hpp"

using namespace tpng;

TEST_CASE("two interior points at t = 0") {
  ModelParams p;
  p.t = 0.0;
  p.box = Box{4.0, 4.0};
  Diagram d = build_from_geometry(p, {}, {}, {{2.0, 1.0}, {1.0, 2.0}},
                                  [](std::uint64_t, std::uint64_t) { return 0.0; });

  REQUIRE(d.verticals.size() == 2);
  REQUIRE(d.horizontals.size() == 2);

  const auto* v2 = worked::vertical_at(d, 2.0);
  REQUIRE(v2 != nullptr);
  CHECK(v2->y_lo == 1.0);
  CHECK(v2->y_hi == 2.0);
  CHECK(v2->upper == EndKind::corner);

  const auto* v1 = worked::vertical_at(d, 1.0);
  REQUIRE(v1 != nullptr);
  CHECK(v1->y_hi == 4.0);
  CHECK(v1->upper == EndKind::exit);

  const auto* h2 = worked::horizontal_at(d, 2.0);
  REQUIRE(h2 != nullptr);
  CHECK(h2->x_lo == 1.0);
  CHECK(h2->x_hi == 2.0);
  CHECK(h2->right == EndKind::corner);

  const auto* h1 = worked::horizontal_at(d, 1.0);
  REQUIRE(h1 != nullptr);
  CHECK(h1->x_hi == 4.0);
  CHECK(h1->right == EndKind::exit);

  CHECK(d.corners() == 1);
  CHECK(worked::has_vertex(d, {2.0, 2.0}, VertexKind::corner));
  CHECK(d.crossings() == 0);
  CHECK(d.exits_top == 1);
  CHECK(d.exits_right == 1);
  CHECK(d.coins_drawn == 1);
  CHECK(validate_diagram(d).empty());
}

TEST_CASE("scripted reference configuration resolves exactly") {
  Diagram d = worked::base();

  CHECK(d.verticals.size() == 14);
  CHECK(d.horizontals.size() == 15);
  CHECK(d.corners() == 12);
  CHECK(d.crossings() == 9);
  CHECK(d.exits_top == 2);
  CHECK(d.exits_right == 3);
  CHECK(d.coins_drawn == 21);
  CHECK(validate_diagram(d).empty());
  CHECK(conservation_holds(d));

  SUBCASE("individual segments") {
    const auto* v = worked::vertical_at(d, 4.0);
    REQUIRE(v != nullptr);
    CHECK(v->y_lo == 0.5);
    CHECK(v->y_hi == 5.0);
    CHECK(v->upper == EndKind::corner);

    v = worked::vertical_at(d, 8.0);
    REQUIRE(v != nullptr);
    CHECK(v->y_lo == 0.0);
    CHECK(v->y_hi == 3.8);

    v = worked::vertical_at(d, 7.0);
    REQUIRE(v != nullptr);
    CHECK(v->y_hi == 8.0);
    CHECK(v->upper == EndKind::exit);

    const auto* h = worked::horizontal_at(d, 0.5);
    REQUIRE(h != nullptr);
    CHECK(h->x_lo == 4.0);
    CHECK(h->x_hi == 12.0);
    CHECK(h->right == EndKind::exit);

    h = worked::horizontal_at(d, 7.5);
    REQUIRE(h != nullptr);
    CHECK(h->x_lo == 0.0);
    CHECK(h->x_hi == 2.8);
    CHECK(h->right == EndKind::corner);
    CHECK(h->left == OriginKind::sink);
  }

  SUBCASE("individual vertices") {
    CHECK(worked::has_vertex(d, {8.0, 0.5}, VertexKind::crossing));
    CHECK(worked::has_vertex(d, {4.0, 3.0}, VertexKind::crossing));
    CHECK(worked::has_vertex(d, {9.5, 2.0}, VertexKind::crossing));
    CHECK(worked::has_vertex(d, {2.0, 6.0}, VertexKind::corner));
    CHECK(worked::has_vertex(d, {11.5, 1.4}, VertexKind::corner));
    CHECK(worked::has_vertex(d, {4.0, 0.5}, VertexKind::nucleation));
    CHECK(!worked::has_vertex(d, {4.0, 0.5}, VertexKind::corner));
  }

  SUBCASE("staircase extraction") {
    auto trajectories = extract_trajectories(d);
    REQUIRE(trajectories.size() == 7); // 4 + 5 + 10 - 12

    const Trajectory* from_8 = nullptr;
    for (const auto& t : trajectories)
      if (t.origin_kind == OriginKind::source && t.origin == Point{8.0, 0.0}) from_8 = &t;
    REQUIRE(from_8 != nullptr);
    CHECK(from_8->terminus == Trajectory::Terminus::left_edge);
    CHECK(from_8->points == std::vector<Point>{{8.0, 0.0},
                                               {8.0, 3.8},
                                               {6.0, 3.8},
                                               {6.0, 6.9},
                                               {2.8, 6.9},
                                               {2.8, 7.5},
                                               {0.0, 7.5}});
  }
}

TEST_CASE("random builds are valid, conservative, and reproducible") {
  for (std::uint64_t seed : {1ULL, 2ULL, 3ULL, 4ULL}) {
    ModelParams p = ModelParams::stationary(1.0, 0.4, Box{9.0, 7.0}, seed);
    Diagram d = build_diagram(p);
    CHECK(validate_diagram(d).empty());
    CHECK(conservation_holds(d));
    CHECK(extract_trajectories(d).size() ==
          d.bulk.size() + d.sources.size() + d.sinks.size() -
              static_cast<std::size_t>(d.corners()));
    CHECK(diagram_to_json(build_diagram(p)) == diagram_to_json(d));
  }
}

TEST_CASE("t = 0 never crosses") {
  for (std::uint64_t seed : {10ULL, 11ULL, 12ULL}) {
    Diagram d = build_diagram(ModelParams::stationary(1.2, 0.0, Box{8.0, 8.0}, seed));
    CHECK(d.crossings() == 0);
    CHECK(validate_diagram(d).empty());
  }
}

TEST_CASE("degenerate inputs") {
  ModelParams p;
  p.t = 0.5;
  p.bulk_intensity = 0.0;
  p.box = Box{5.0, 5.0};
  Diagram d = build_from_geometry(p, {}, {}, {},
                                  [](std::uint64_t, std::uint64_t) -> double {
                                    throw std::logic_error("no contacts expected");
                                  });
  CHECK(d.verticals.empty());
  CHECK(d.horizontals.empty());
  CHECK(d.coins_drawn == 0);
  CHECK(validate_diagram(d).empty());

  CHECK_THROWS_AS(build_from_geometry(p, {2.0, 2.0}, {}, {},
                                      [](std::uint64_t, std::uint64_t) { return 0.5; }),
                  std::invalid_argument);
  CHECK_THROWS_AS(build_from_geometry(p, {}, {1.0}, {{3.0, 1.0}},
                                      [](std::uint64_t, std::uint64_t) { return 0.5; }),
                  std::invalid_argument);
}
