#pragma once

// End-to-end run: dissolve -> graph -> seeds -> Voronoi -> clip/merge -> flags.

#include <chrono>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "roadsect/error.hpp"
#include "roadsect/geojson.hpp"
#include "roadsect/geom.hpp"
#include "roadsect/partition.hpp"
#include "roadsect/roadgraph.hpp"
#include "roadsect/seeding.hpp"
#include "roadsect/tessellate.hpp"

namespace roadsect {

struct RunConfig {
  SeedingConfig seeding;
  double snap_tol = kDefaultSnapTolerance;
  double envelope_margin = 10.0;
  double width_hint = kDefaultWidthHint;

  void validate() const {
    seeding.validate();
    if (!(snap_tol > 0.0)) throw InputError("snap tolerance must be positive");
    if (!(envelope_margin >= 0.0)) throw InputError("envelope margin must be non-negative");
    if (!(width_hint > 0.0)) throw InputError("width hint must be positive");
  }
};

struct StageTiming {
  std::string stage;
  double milliseconds = 0.0;
};

struct RunReport {
  std::size_t nodes = 0;
  std::size_t edges = 0;
  std::size_t seeds = 0;
  std::size_t sections = 0;
  std::vector<StageTiming> timings;
  std::vector<Warning> warnings;
  double footprint_area = 0.0;
  double unassigned_area = 0.0;
  double residual = 0.0;
};

struct RunOutput {
  Footprint footprint;
  RoadGraph graph;
  SeedingResult seeding;
  VoronoiDiagram diagram;
  PartitionResult result;
  RunReport report;
};

// Envelope around the footprint and every seed, grown by `margin`.
inline Polygon run_envelope(const MultiPolygon& footprint, const std::vector<SourcePoint>& seeds, double margin) {
  Box box = bounding_box(footprint);
  for (const SourcePoint& s : seeds) bg::expand(box, s.position);
  MultiPolygon hull{make_rectangle(box.min_corner().x, box.min_corner().y, box.max_corner().x, box.max_corner().y)};
  return envelope_for(hull, margin);
}

inline RunOutput run_partition(const std::vector<LineFeature>& lines, const std::vector<Polygon>& surface,
                               const RunConfig& cfg) {
  cfg.validate();
  RunOutput out;
  using clock = std::chrono::steady_clock;
  auto stage = [&](const char* name, auto&& body) {
    const auto t0 = clock::now();
    body();
    out.report.timings.push_back({name, std::chrono::duration<double, std::milli>(clock::now() - t0).count()});
  };

  stage("dissolve", [&] { out.footprint = dissolve(surface); });
  stage("graph", [&] { out.graph = build_graph(lines, cfg.snap_tol); });
  stage("seeding", [&] { out.seeding = seed_all(out.graph, cfg.seeding); });
  if (out.seeding.seeds.empty()) throw InputError("no edge received a seed; nothing to partition");
  stage("voronoi", [&] {
    out.diagram = voronoi(out.seeding.seeds, run_envelope(out.footprint.geometry, out.seeding.seeds, cfg.envelope_margin));
  });
  stage("partition", [&] { out.result = partition(out.footprint, out.graph, out.seeding.seeds, out.diagram); });
  stage("flags", [&] { out.result = flag_suspicious(std::move(out.result), out.graph, cfg.width_hint); });

  RunReport& r = out.report;
  r.nodes = out.graph.nodes().size();
  r.edges = out.graph.edges().size();
  r.seeds = out.seeding.seeds.size();
  r.sections = out.result.sections.size();
  r.warnings = out.seeding.warnings;
  r.warnings.insert(r.warnings.end(), out.result.warnings.begin(), out.result.warnings.end());
  r.footprint_area = out.result.footprint_area;
  r.unassigned_area = out.result.unassigned_area;
  r.residual = out.result.residual();
  return out;
}

inline nlohmann::json report_json(const RunReport& r) {
  nlohmann::json timings = nlohmann::json::object();
  for (const StageTiming& t : r.timings) timings[t.stage] = t.milliseconds;
  return {{"counts", {{"nodes", r.nodes}, {"edges", r.edges}, {"seeds", r.seeds}, {"sections", r.sections}}},
          {"timings_ms", timings},
          {"warnings", geojson::warnings_json(r.warnings)},
          {"footprint_area_m2", geojson::round9(r.footprint_area)},
          {"unassigned_area_m2", geojson::round9(r.unassigned_area)},
          {"conservation_residual", r.residual}};
}

inline std::string report_text(const RunReport& r) {
  std::ostringstream out;
  out << "nodes     " << r.nodes << '\n'
      << "edges     " << r.edges << '\n'
      << "seeds     " << r.seeds << '\n'
      << "sections  " << r.sections << '\n';
  out.setf(std::ios::fixed);
  out.precision(3);
  out << "footprint " << r.footprint_area << " m2\n";
  out << "unassigned " << r.unassigned_area << " m2\n";
  out.unsetf(std::ios::fixed);
  out.precision(3);
  out << "residual  " << std::scientific << r.residual << std::defaultfloat << '\n';
  out.precision(1);
  out.setf(std::ios::fixed);
  for (const StageTiming& t : r.timings) out << "time " << t.stage << ' ' << t.milliseconds << " ms\n";
  out << "warnings  " << r.warnings.size() << '\n';
  for (const Warning& w : r.warnings) out << "  [" << w.kind << "] " << w.message << '\n';
  return out.str();
}

} // namespace roadsect
