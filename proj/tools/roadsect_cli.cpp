// roadsect: split a road surface into one section per centerline edge.
//
//   roadsect dissolve surface.geojson footprint.geojson
//   roadsect partition --lines L --surface S --out-sections X [--out-seeds --out-cells --report R]
//   roadsect validate --modeled X --reference R [--report --table --svg]
//   roadsect classify --a A --b B
//   roadsect synth --kind grid --rows 10 --cols 10 --out-lines L --out-surface S --out-reference R

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "roadsect/roadsect.hpp"

namespace {

using namespace roadsect;
using nlohmann::json;

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path);
  out << text;
}

std::vector<Geometry> read_geometries(const std::string& path) {
  const json doc = geojson::parse_file(path);
  if (doc.value("type", "") != "FeatureCollection") throw InputError(path + " is not a FeatureCollection");
  std::vector<Geometry> out;
  json lines = {{"type", "FeatureCollection"}, {"features", json::array()}};
  json polys = lines;
  std::vector<bool> is_line;
  for (const json& f : doc["features"]) {
    const std::string type = f.contains("geometry") && f["geometry"].is_object() ? f["geometry"].value("type", "") : "";
    const bool line = type == "LineString" || type == "MultiLineString";
    is_line.push_back(line);
    (line ? lines : polys)["features"].push_back(f);
  }
  std::vector<LineFeature> ls = lines["features"].empty() ? std::vector<LineFeature>{} : geojson::parse_lines(lines);
  std::size_t li = 0;
  std::size_t pi = 0;
  const json& pf = polys["features"];
  for (bool line : is_line) {
    if (line) {
      out.emplace_back(ls[li++].geometry);
      continue;
    }
    std::vector<Polygon> parts = geojson::parse_surface(json{{"type", "FeatureCollection"}, {"features", {pf[pi++]}}});
    MultiPolygon mp;
    for (Polygon& p : parts) {
      MultiPolygon n = normalized(p);
      mp.insert(mp.end(), n.begin(), n.end());
    }
    out.emplace_back(std::move(mp));
  }
  return out;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Road surface sectioning by Voronoi seeding of the centerline graph"};
  app.require_subcommand(1);

  // dissolve
  std::string dissolve_in;
  std::string dissolve_out;
  auto* dissolve_cmd = app.add_subcommand("dissolve", "Union raw surface polygons into one footprint");
  dissolve_cmd->add_option("input", dissolve_in, "Surface feature collection")->required();
  dissolve_cmd->add_option("output", dissolve_out, "Footprint feature collection")->required();

  // partition
  RunConfig cfg;
  std::string lines_path;
  std::string surface_path;
  std::string sections_path;
  std::string seeds_path;
  std::string cells_path;
  std::string report_path;
  std::string report_text_path;
  std::string svg_path;
  std::size_t self_check = 0;
  std::uint64_t rng_seed = 1;
  bool strict = false;
  auto* part_cmd = app.add_subcommand("partition", "Cut the footprint into one section per edge");
  part_cmd->add_option("--lines", lines_path, "Centerline feature collection")->required();
  part_cmd->add_option("--surface", surface_path, "Surface feature collection")->required();
  part_cmd->add_option("--out-sections", sections_path, "Output sections")->required();
  part_cmd->add_option("--out-seeds", seeds_path, "Output seeds");
  part_cmd->add_option("--out-cells", cells_path, "Output Voronoi cells");
  part_cmd->add_option("--report", report_path, "Run report (JSON)");
  part_cmd->add_option("--report-text", report_text_path, "Run report (text)");
  part_cmd->add_option("--svg", svg_path, "Map overlay");
  part_cmd->add_option("--radius-max", cfg.seeding.radius_max, "Largest junction buffer radius (m)")->capture_default_str();
  part_cmd->add_option("--radius-ratio", cfg.seeding.radius_ratio, "Buffer radius / shortest incident edge")->capture_default_str();
  part_cmd->add_option("--spacing", cfg.seeding.spacing, "Intermediate seed spacing (m)")->capture_default_str();
  part_cmd->add_option("--snap-tol", cfg.snap_tol, "Endpoint snapping tolerance (m)")->capture_default_str();
  part_cmd->add_option("--envelope-margin", cfg.envelope_margin, "Voronoi envelope margin (m)")->capture_default_str();
  part_cmd->add_option("--width-hint", cfg.width_hint, "Typical road width for area flags (m)")->capture_default_str();
  part_cmd->add_option("--self-check", self_check, "Verify N sampled points against nearest-seed ownership");
  part_cmd->add_option("--seed", rng_seed, "Random seed for --self-check sampling")->capture_default_str();
  part_cmd->add_flag("--strict", strict, "Fail when any warning is raised");

  // validate
  std::string modeled_path;
  std::string reference_path;
  std::string val_report;
  std::string val_table;
  std::string val_svg;
  auto* val_cmd = app.add_subcommand("validate", "Regress modeled section areas on reference areas");
  val_cmd->add_option("--modeled", modeled_path, "Modeled sections")->required();
  val_cmd->add_option("--reference", reference_path, "Reference sections (edge_id, area_m2)")->required();
  val_cmd->add_option("--report", val_report, "Match report (JSON)");
  val_cmd->add_option("--table", val_table, "Per-section table (CSV)");
  val_cmd->add_option("--svg", val_svg, "Scatter plot");

  // classify
  std::string a_path;
  std::string b_path;
  std::string labels_path;
  double min_overlap = kDefaultMinOverlap;
  auto* cls_cmd = app.add_subcommand("classify", "Label correspondences between two collections");
  cls_cmd->add_option("--a", a_path, "First collection")->required();
  cls_cmd->add_option("--b", b_path, "Second collection")->required();
  cls_cmd->add_option("--min-overlap", min_overlap, "Overlap fraction that makes two objects correspond")->capture_default_str();
  cls_cmd->add_option("--out", labels_path, "Labels (JSON); stdout when omitted");

  // synth
  SyntheticSpec spec;
  std::string kind = "grid";
  std::string out_lines;
  std::string out_surface;
  std::string out_reference;
  spec.origin = {1000.0, 1000.0};
  auto* syn_cmd = app.add_subcommand("synth", "Generate a synthetic network with its reference decomposition");
  syn_cmd->add_option("--kind", kind, "grid|cross|t|y|star|parallel|close-junctions")->capture_default_str();
  syn_cmd->add_option("--rows", spec.rows, "Grid blocks per column")->capture_default_str();
  syn_cmd->add_option("--cols", spec.cols, "Grid blocks per row")->capture_default_str();
  syn_cmd->add_option("--block", spec.block, "Block / arm / edge length (m)")->capture_default_str();
  syn_cmd->add_option("--width", spec.width, "Road width (m)")->capture_default_str();
  syn_cmd->add_option("--arms", spec.arms, "Star arm count")->capture_default_str();
  syn_cmd->add_option("--gap", spec.gap, "Parallel centerline gap (m)")->capture_default_str();
  syn_cmd->add_option("--link", spec.link, "Close-junction link length (m)")->capture_default_str();
  syn_cmd->add_option("--seed", spec.seed, "Grid jitter seed (0 = regular)")->capture_default_str();
  syn_cmd->add_option("--origin-x", spec.origin.x, "Easting offset (m)")->capture_default_str();
  syn_cmd->add_option("--origin-y", spec.origin.y, "Northing offset (m)")->capture_default_str();
  syn_cmd->add_option("--out-lines", out_lines, "Centerlines")->required();
  syn_cmd->add_option("--out-surface", out_surface, "Raw surface pieces")->required();
  syn_cmd->add_option("--out-reference", out_reference, "Reference areas")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*dissolve_cmd) {
      const Footprint fp = dissolve(geojson::read_surface(dissolve_in));
      geojson::write_file(dissolve_out, geojson::footprint_json(fp));
      std::cout << "footprint: " << fp.geometry.size() << " part(s), " << area(fp.geometry) << " m2 from "
                << fp.source_count << " polygon(s)\n";
    } else if (*part_cmd) {
      const RunOutput run = run_partition(geojson::read_lines(lines_path), geojson::read_surface(surface_path), cfg);
      geojson::write_file(sections_path, geojson::sections_json(run.result.sections));
      if (!seeds_path.empty()) geojson::write_file(seeds_path, geojson::seeds_json(run.seeding.seeds));
      if (!cells_path.empty()) geojson::write_file(cells_path, geojson::cells_json(run.diagram));
      json report = report_json(run.report);
      if (self_check > 0) {
        const OwnerCheck check =
            nearest_owner_check(run.result, run.seeding.seeds, run.footprint.geometry, self_check, rng_seed);
        report["self_check"] = {{"sampled", check.sampled},
                                {"tested", check.tested},
                                {"agreed", check.agreed},
                                {"agreement", check.agreement()}};
      }
      if (!report_path.empty()) geojson::write_file(report_path, report);
      if (!report_text_path.empty()) write_text(report_text_path, report_text(run.report));
      if (!svg_path.empty()) svg::write_partition(svg_path, run.result, run.graph, run.seeding.seeds);
      std::cout << report_text(run.report);
      if (strict && !run.report.warnings.empty()) {
        std::cerr << "strict mode: " << run.report.warnings.size() << " warning(s)\n";
        return 2;
      }
    } else if (*val_cmd) {
      const MatchReport r = compare(geojson::read_sections(modeled_path), geojson::read_reference(reference_path));
      if (!val_report.empty()) geojson::write_file(val_report, geojson::match_report_json(r));
      if (!val_table.empty()) write_text(val_table, geojson::match_report_table(r));
      if (!val_svg.empty()) svg::write_scatter(val_svg, r);
      std::cout.precision(12);
      std::cout << "pairs " << r.pairs.size() << " (unmatched " << r.unmatched.size() << ")\n"
                << "slope " << r.slope << "\nintercept " << r.intercept << "\nr_squared " << r.r_squared << '\n'
                << "below 5% " << r.bucket_5 << "\nbelow 10% " << r.bucket_10 << "\nbelow 15% " << r.bucket_15 << '\n';
    } else if (*cls_cmd) {
      const RelationResult r = classify_relation(read_geometries(a_path), read_geometries(b_path), min_overlap);
      json out = {{"a", json::array()}, {"b", json::array()}};
      for (RelationLabel l : r.a) out["a"].push_back(to_string(l));
      for (RelationLabel l : r.b) out["b"].push_back(to_string(l));
      if (labels_path.empty()) std::cout << out.dump(1) << '\n';
      else geojson::write_file(labels_path, out);
    } else if (*syn_cmd) {
      spec.kind = parse_synthetic_kind(kind);
      const SyntheticNetwork net = synthesize(spec);
      geojson::write_file(out_lines, geojson::lines_json(net.lines));
      geojson::write_file(out_surface, geojson::surface_json(net.surface));
      geojson::write_file(out_reference, geojson::reference_json(net.reference));
      std::cout << net.lines.size() << " edges, " << net.surface.size() << " surface pieces\n";
    }
  } catch (const roadsect::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
