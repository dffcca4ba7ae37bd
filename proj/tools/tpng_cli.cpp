// Command-line front end. Exit codes: 0 success / experiment passed,
// 1 usage, config, or runtime error, 2 experiment failed, 3 underpowered.

#include <cmath>
#include <cstdint>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tpng/chains.hpp"
#include "tpng/diagram.hpp"
#include "tpng/experiments.hpp"
#include "tpng/io.hpp"
#include "tpng/scp.hpp"
#include "tpng/sweep.hpp"

namespace {

struct Options {
  double t = 0.5;
  double width = 30.0;
  double height = 30.0;
  double source_rate = 1.0;
  double sink_rate = -1.0; // negative: stationary partner of source_rate
  double bulk_intensity = 1.0;
  std::uint64_t seed = 1;
  int replicas = -1; // negative: each experiment's pinned count
  std::string out;

  // subcommand extras
  double upper_source_rate = -1.0; // negative: source_rate + 0.5
  double upper_sink_rate = 0.0;
  double eps = 0.25;
  double scale = 1.0;
  bool serial = false;
  std::string experiment;
  std::string input;
};

double resolved_sink_rate(const Options& o) {
  if (o.sink_rate >= 0.0) return o.sink_rate;
  if (o.source_rate <= 0.0 || o.t >= 1.0)
    throw std::invalid_argument("cannot infer --sink-rate: need positive --source-rate");
  return 1.0 / (o.source_rate * (1.0 - o.t));
}

tpng::ModelParams base_params(const Options& o) {
  tpng::ModelParams p;
  p.t = o.t;
  p.source_rate = o.source_rate;
  p.sink_rate = resolved_sink_rate(o);
  p.bulk_intensity = o.bulk_intensity;
  p.box = tpng::Box{o.width, o.height};
  p.seed = o.seed;
  p.check();
  return p;
}

std::string default_out(const Options& o, const std::string& fallback) {
  return o.out.empty() ? fallback : o.out;
}

void report_written(const std::string& path, const std::string& content) {
  std::cout << "wrote " << path << " (" << content.size() << " bytes)\n";
}

int cmd_simulate(const Options& o) {
  tpng::Diagram d = tpng::build_diagram(base_params(o));
  std::string text = tpng::diagram_to_json(d);
  std::string path = default_out(o, "diagram.json");
  tpng::write_file(path, text);
  std::cout << "diagram: box " << d.box().width << "x" << d.box().height << ", t=" << d.params.t
            << ", seed=" << d.params.seed << "\n"
            << "  sources=" << d.sources.size() << " sinks=" << d.sinks.size()
            << " bulk=" << d.bulk.size() << "\n"
            << "  verticals=" << d.verticals.size() << " horizontals=" << d.horizontals.size()
            << " corners=" << d.corners() << " crossings=" << d.crossings() << "\n"
            << "  exits: top=" << d.exits_top << " right=" << d.exits_right
            << "  coins=" << d.coins_drawn << "\n";
  report_written(path, text);
  return 0;
}

int cmd_couple(const Options& o) {
  tpng::ModelParams lower = base_params(o);
  tpng::ModelParams upper = lower;
  upper.source_rate = o.upper_source_rate >= 0.0 ? o.upper_source_rate : lower.source_rate + 0.5;
  upper.sink_rate = o.upper_sink_rate;
  tpng::CoupledPair pair = tpng::couple_pair(lower, upper);

  int bottom = 0, left = 0;
  for (const auto& p : pair.layer.paths)
    (p.label >= 1 ? bottom : left)++;
  std::cout << "coupled pair: box " << lower.box.width << "x" << lower.box.height
            << ", t=" << lower.t << ", seed=" << lower.seed << "\n"
            << "  source rates " << lower.source_rate << " -> " << upper.source_rate
            << ", sink rates " << lower.sink_rate << " -> " << upper.sink_rate << "\n"
            << "  layer paths=" << pair.layer.paths.size() << " (bottom " << bottom << ", left "
            << left << ") swaps=" << pair.layer.swaps.size()
            << " coins=" << pair.layer.coins_drawn << "\n"
            << "  enlarged: verticals=" << pair.layer.psi.verticals.size()
            << " horizontals=" << pair.layer.psi.horizontals.size() << "\n";
  std::string text = tpng::layer_to_json(pair);
  std::string path = default_out(o, "layer.json");
  tpng::write_file(path, text);
  report_written(path, text);
  return 0;
}

int cmd_triple(const Options& o) {
  tpng::TripleRun run =
      tpng::triple_run(o.source_rate, o.eps, o.t, tpng::Box{o.width, o.height}, o.seed);
  auto show = [](std::optional<int> site) {
    return site ? std::to_string(*site) : std::string("none");
  };
  int final_rightmost = run.trace.empty() ? tpng::no_rider : run.trace.back().rightmost_after;
  std::cout << "triple run: box " << o.width << "x" << o.height << ", lambda=" << o.source_rate
            << ", eps=" << o.eps << ", t=" << o.t << ", seed=" << o.seed << "\n"
            << "  meetings=" << run.meetings.size() << " steps=" << run.trace.size()
            << " riders=" << run.carriers0.size() << "\n"
            << "  rightmost occupied site: initial=" << show(tpng::rightmost_one(run.v0))
            << " final="
            << (final_rightmost == tpng::no_rider ? std::string("none")
                                                  : std::to_string(final_rightmost))
            << "\n"
            << "  window edge contact: " << (run.edge_contact ? "yes" : "no") << "\n";
  std::string text = tpng::trace_csv(run);
  std::string path = default_out(o, "triple.csv");
  tpng::write_file(path, text);
  report_written(path, text);
  return 0;
}

std::string resolve_experiment(const std::string& given) {
  std::vector<std::string> names = tpng::experiment_names();
  std::vector<std::string> hits;
  for (const auto& n : names) {
    if (n == given) return n;
    if (n.rfind(given, 0) == 0) hits.push_back(n);
  }
  if (hits.size() == 1) return hits.front();
  std::ostringstream msg;
  msg << (hits.empty() ? "unknown" : "ambiguous") << " experiment '" << given << "'; choose from:";
  for (const auto& n : names)
    msg << ' ' << n;
  throw std::invalid_argument(msg.str());
}

int verdict_exit(const std::vector<tpng::ExperimentReport>& reports) {
  bool any_inconclusive = false, any_fail = false;
  for (const auto& rep : reports) {
    if (rep.inconclusive) any_inconclusive = true;
    if (!rep.passed()) any_fail = true;
  }
  if (any_inconclusive) return 3;
  return any_fail ? 2 : 0;
}

int cmd_experiment(const Options& o) {
  std::string name = resolve_experiment(o.experiment);
  double scale = o.scale;
  if (o.replicas > 0) scale = static_cast<double>(o.replicas) / tpng::pinned_replicas(name);
  std::vector<tpng::ExperimentReport> reports =
      tpng::run_named_experiment(name, o.seed, !o.serial, scale);

  std::string base = default_out(o, name + "-report");
  if (base.size() > 5 && base.substr(base.size() - 5) == ".json") base.resize(base.size() - 5);
  for (std::size_t i = 0; i < reports.size(); ++i) {
    std::cout << tpng::format_report(reports[i]) << "\n";
    std::string stem = reports.size() == 1 ? base : base + "-" + std::to_string(i);
    std::string json = tpng::report_to_json(reports[i]);
    std::string csv = tpng::report_csv(reports[i]);
    tpng::write_file(stem + ".json", json);
    tpng::write_file(stem + ".csv", csv);
    report_written(stem + ".json", json);
    report_written(stem + ".csv", csv);
  }
  return verdict_exit(reports);
}

int cmd_render(const Options& o) {
  std::string text = tpng::read_file(o.input);
  std::string svg;
  try {
    svg = tpng::render_svg(tpng::diagram_from_json(text));
  } catch (const std::runtime_error&) {
    svg = tpng::render_svg(tpng::layer_from_json(text));
  }
  std::string path = o.out;
  if (path.empty()) {
    path = o.input;
    std::size_t dot = path.find_last_of('.');
    if (dot != std::string::npos && path.find('/', dot) == std::string::npos) path.resize(dot);
    path += ".svg";
  }
  tpng::write_file(path, svg);
  report_written(path, svg);
  return 0;
}

int cmd_oracle_check(const Options& o) {
  int boxes = o.replicas > 0 ? o.replicas : 200;
  tpng::ExperimentReport rep = tpng::oracle_experiment(boxes, 20, o.seed, !o.serial);
  std::cout << tpng::format_report(rep) << "\n";
  if (!o.out.empty()) {
    std::string json = tpng::report_to_json(rep);
    tpng::write_file(o.out, json);
    report_written(o.out, json);
  }
  return verdict_exit({rep});
}

} // namespace

int main(int argc, char** argv) {
  Options o;
  CLI::App app{"Polynuclear growth sampler and statistical test bench"};
  app.require_subcommand(1);
  app.set_config("--config", "", "Config file, key=value lines ([section] per subcommand)")
      ->envname("TPNG_CONFIG");
  app.allow_config_extras(false);

  app.add_option("--t", o.t, "Crossing probability, in [0,1)")->envname("TPNG_T");
  app.add_option("--width", o.width, "Box width")->envname("TPNG_WIDTH");
  app.add_option("--height", o.height, "Box height")->envname("TPNG_HEIGHT");
  app.add_option("--source-rate", o.source_rate, "Bottom-edge entry rate")
      ->envname("TPNG_SOURCE_RATE");
  app.add_option("--sink-rate", o.sink_rate,
                 "Left-edge entry rate; negative picks the stationary partner of --source-rate")
      ->envname("TPNG_SINK_RATE");
  app.add_option("--bulk-intensity", o.bulk_intensity, "Interior nucleation intensity")
      ->envname("TPNG_BULK_INTENSITY");
  app.add_option("--seed", o.seed, "Master seed")->envname("TPNG_SEED");
  app.add_option("--replicas", o.replicas, "Replica count; negative keeps the pinned count")
      ->envname("TPNG_REPLICAS");
  app.add_option("--out", o.out, "Output path (per-command default otherwise)")
      ->envname("TPNG_OUT");

  CLI::App* sim = app.add_subcommand("simulate", "Sample one diagram and write it as JSON");
  sim->fallthrough();

  CLI::App* cpl = app.add_subcommand(
      "couple", "Sample a monotone coupled pair and write the discrepancy layer");
  cpl->fallthrough();
  cpl->add_option("--upper-source-rate", o.upper_source_rate,
                  "Enlarged process's source rate; negative means --source-rate + 0.5");
  cpl->add_option("--upper-sink-rate", o.upper_sink_rate, "Enlarged process's sink rate");

  CLI::App* tri = app.add_subcommand(
      "triple", "Stationary process, sink-free enlargement, and the boundary site chain");
  tri->fallthrough();
  tri->add_option("--eps", o.eps, "Source-rate excess of the enlargement");

  CLI::App* exp = app.add_subcommand("experiment", "Run a named experiment and write its report");
  exp->fallthrough();
  exp->add_option("name", o.experiment, "Experiment name (unique prefixes accepted)")->required();
  exp->add_option("--scale", o.scale, "Replica-count multiplier (overridden by --replicas)");
  exp->add_flag("--serial", o.serial, "Run replicas on one thread");

  CLI::App* ren = app.add_subcommand("render", "Draw a diagram or layer file as SVG");
  ren->fallthrough();
  ren->add_option("input", o.input, "Diagram or layer JSON file")
      ->required()
      ->check(CLI::ExistingFile);

  CLI::App* ora =
      app.add_subcommand("oracle-check", "Cross-check height readings against slow re-counts");
  ora->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (app.got_subcommand(sim)) return cmd_simulate(o);
    if (app.got_subcommand(cpl)) return cmd_couple(o);
    if (app.got_subcommand(tri)) return cmd_triple(o);
    if (app.got_subcommand(exp)) return cmd_experiment(o);
    if (app.got_subcommand(ren)) return cmd_render(o);
    if (app.got_subcommand(ora)) return cmd_oracle_check(o);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
