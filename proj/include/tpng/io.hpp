#pragma once

#include <cstdint>
#include <string>

#include "tpng/diagram.hpp"
#include "tpng/experiments.hpp"
#include "tpng/scp.hpp"

namespace tpng {

/**
 * Serialization formats:
 *   "tpng-diagram/1"  one realized diagram with its parameters
 *   "tpng-layer/1"    a coupled pair: base diagram, discrepancy layer, enlarged
 *                     diagram; embeds a hash of the base for integrity
 *   "tpng-report/1"   an experiment report (per-replica table goes to CSV)
 *
 * Writers are deterministic; serialize -> parse -> serialize is byte-identical.
 * Readers throw std::runtime_error on schema or integrity mismatches.
 */

std::string diagram_to_json(const Diagram& d);
Diagram diagram_from_json(const std::string& text);

std::string layer_to_json(const CoupledPair& pair);
CoupledPair layer_from_json(const std::string& text);

std::string report_to_json(const ExperimentReport& rep);
ExperimentReport report_from_json(const std::string& text);

/** Per-replica table: header row, then one line per replica. */
std::string report_csv(const ExperimentReport& rep);

/** FNV-1a over the bytes; the integrity and provenance hash used in files. */
std::uint64_t content_hash(const std::string& bytes);

/** Diagram as a standalone SVG 1.1 document (red, corner/crossing glyphs). */
std::string render_svg(const Diagram& d);

/**
 * Coupled pair as three aligned panels: base (red), base with the particle
 * layer (black paths, swap marks), and the enlarged diagram (blue).
 */
std::string render_svg(const CoupledPair& pair);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

} // namespace tpng
