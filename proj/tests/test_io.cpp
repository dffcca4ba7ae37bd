#include <doctest.h>

#include <string>

#include <json.hpp>

#include "tpng/io.hpp"
#include "tpng/scp.hpp"
#include "tpng/sweep.hpp"

using namespace tpng;

namespace {

ModelParams small_params(std::uint64_t seed) {
  ModelParams p;
  p.t = 0.5;
  p.source_rate = 1.0;
  p.sink_rate = 2.0;
  p.bulk_intensity = 1.0;
  p.box = Box{9.0, 6.0};
  p.seed = seed;
  return p;
}

int count_of(const std::string& text, const std::string& needle) {
  int n = 0;
  for (std::size_t pos = text.find(needle); pos != std::string::npos;
       pos = text.find(needle, pos + needle.size()))
    ++n;
  return n;
}

} // namespace

TEST_CASE("diagram documents survive a round trip byte for byte") {
  const Diagram d = build_diagram(small_params(101));
  const std::string s1 = diagram_to_json(d);
  const Diagram d2 = diagram_from_json(s1);
  const std::string s2 = diagram_to_json(d2);
  CHECK(s1 == s2);
  CHECK(d2.sources == d.sources);
  CHECK(d2.sinks == d.sinks);
  CHECK(d2.bulk.size() == d.bulk.size());
  CHECK(d2.verticals.size() == d.verticals.size());
  CHECK(d2.horizontals.size() == d.horizontals.size());
  CHECK(d2.vertices.size() == d.vertices.size());
  CHECK(d2.coins_drawn == d.coins_drawn);
  CHECK(d2.params.seed == d.params.seed);
  CHECK(validate_diagram(d2).empty());
}

TEST_CASE("layer documents embed an enforced base hash") {
  ModelParams lower = small_params(102);
  ModelParams upper = lower;
  upper.source_rate = 1.5;
  upper.sink_rate = 1.0;
  const CoupledPair pair = couple_pair(lower, upper);

  const std::string s1 = layer_to_json(pair);
  const CoupledPair back = layer_from_json(s1);
  CHECK(layer_to_json(back) == s1);
  CHECK(back.lower.sources == pair.lower.sources);
  CHECK(back.layer.paths.size() == pair.layer.paths.size());
  CHECK(back.layer.swaps.size() == pair.layer.swaps.size());
  CHECK(back.layer.psi.verticals.size() == pair.layer.psi.verticals.size());
  CHECK(back.layer.coins_drawn == pair.layer.coins_drawn);

  nlohmann::json j = nlohmann::json::parse(s1);
  j["base"]["coins_drawn"] = j["base"]["coins_drawn"].get<std::uint64_t>() + 1;
  CHECK_THROWS_WITH_AS(layer_from_json(j.dump(2)), "base diagram hash mismatch",
                       std::runtime_error);
}

TEST_CASE("documents of one kind are rejected by the other reader") {
  const Diagram d = build_diagram(small_params(103));
  CHECK_THROWS_AS(layer_from_json(diagram_to_json(d)), std::runtime_error);
  CHECK_THROWS_AS(report_from_json(diagram_to_json(d)), std::runtime_error);
  CHECK_THROWS_AS(diagram_from_json("{\"schema\":\"nope/9\"}"), std::runtime_error);
}

TEST_CASE("report documents round trip and tabulate") {
  ExperimentReport rep;
  rep.name = "example";
  rep.seed = 7;
  rep.replicas = 3;
  rep.params = {{"t", 0.5}, {"lambda", 1.0}};
  rep.add({"gap", 0.01, 0.0, 0.05, -1.0, true});
  rep.add({"fit", 1.2, 1.0, 0.1, 0.04, false});
  rep.notes.push_back("shrunken run");
  rep.columns = {"corners", "coins"};
  rep.rows = {{3.0, 5.0}, {4.0, 8.0}, {0.5, 1.25}};

  const std::string s1 = report_to_json(rep);
  const ExperimentReport back = report_from_json(s1);
  CHECK(report_to_json(back) == s1);
  CHECK(back.name == rep.name);
  CHECK(back.measurements.size() == 2);
  CHECK(back.measurements[1].p_value == doctest::Approx(0.04));
  CHECK(!back.passed());
  CHECK(back.find("gap") != nullptr);
  CHECK(back.find("absent") == nullptr);

  const std::string csv = report_csv(rep);
  CHECK(csv.rfind("replica,corners,coins\n", 0) == 0);
  CHECK(count_of(csv, "\n") == 4);
  CHECK(csv.find("2,0.5,1.25\n") != std::string::npos);
}

TEST_CASE("content hash matches the published 64-bit FNV-1a vectors") {
  CHECK(content_hash("") == 0xcbf29ce484222325ULL);
  CHECK(content_hash("a") == 0xaf63dc4c8601ec8cULL);
  CHECK(content_hash("foobar") == 0x85944171f73967e8ULL);
}

TEST_CASE("single-diagram pictures hold one panel with every glyph family") {
  const Diagram d = build_diagram(small_params(104));
  const std::string svg = render_svg(d);
  CHECK(svg.rfind("<svg xmlns=\"http://www.w3.org/2000/svg\"", 0) == 0);
  CHECK(svg.find("</svg>") != std::string::npos);
  CHECK(count_of(svg, "<g transform=") == 1);
  CHECK(count_of(svg, "</g>") == 1);
  CHECK(count_of(svg, "<line ") ==
        static_cast<int>(d.verticals.size() + d.horizontals.size()));

  int corners = 0, crossings = 0, nucleations = 0;
  for (const auto& v : d.vertices) {
    corners += v.kind == VertexKind::corner;
    crossings += v.kind == VertexKind::crossing;
    nucleations += v.kind == VertexKind::nucleation;
  }
  REQUIRE(corners > 0);
  REQUIRE(crossings > 0);
  REQUIRE(nucleations > 0);
  CHECK(count_of(svg, "<circle ") == corners + crossings);
  CHECK(count_of(svg, "fill=\"white\"") == crossings);
  CHECK(count_of(svg, "<rect ") == nucleations + 1); // glyphs plus the frame
}

TEST_CASE("coupled-pair pictures hold three aligned panels") {
  ModelParams lower = small_params(105);
  ModelParams upper = lower;
  upper.source_rate = 1.5;
  upper.sink_rate = 1.0;
  const CoupledPair pair = couple_pair(lower, upper);
  const std::string svg = render_svg(pair);
  CHECK(count_of(svg, "<g transform=") == 3);
  CHECK(count_of(svg, "</g>") == 3);
  CHECK(count_of(svg, "<polyline ") == static_cast<int>(pair.layer.paths.size()));
  CHECK(svg.find("crimson") != std::string::npos);
  CHECK(svg.find("royalblue") != std::string::npos);
  CHECK(count_of(svg, "stroke=\"black\"") >=
        3 + static_cast<int>(pair.layer.paths.size()));
}

TEST_CASE("file helpers write and read bytes verbatim") {
  const std::string path = "io_test_scratch.bin";
  const std::string payload("alpha\nbeta\0gamma\n", 17);
  write_file(path, payload);
  CHECK(read_file(path) == payload);
  CHECK_THROWS_AS(read_file("definitely/not/here.json"), std::runtime_error);
}
