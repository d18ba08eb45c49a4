#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "fwg/contamination.hpp"
#include "fwg/robustness.hpp"

namespace fwg::io {

using Json = nlohmann::ordered_json;

/// A gauge loaded from a descriptor: polyhedral family or black box.
struct LoadedGauge {
  std::string type;
  std::optional<PolyhedralGauge> poly;
  std::optional<BlackBoxGauge> black_box;

  bool polyhedral() const { return poly.has_value(); }
  const PolyhedralGauge& p() const {
    if (!poly) throw PreconditionError("gauge: operation needs a polyhedral gauge");
    return *poly;
  }
};

/// Descriptors: {"type":"polyhedral","dim":d,"primal_vertices":[[..]],
/// "dual_vertices":[[..]]}, {"type":"tropical","d":n},
/// {"type":"quantile","b":x}, {"type":"euclidean","dim":d}.
LoadedGauge gauge_from_json_text(const std::string& text, double tol = kTol);
LoadedGauge gauge_from_json_file(const std::string& path, double tol = kTol);

double jnum(double x);  // 12 significant digits
Json vec_to_json(const Vector& v);
Json mat_to_json(const Matrix& m);

Json gauge_info_json(const LoadedGauge& g);
Json solution_to_json(const FWSolution& sol);
Json region_to_json(const cells::Region& region);
Json cl_to_json(const cl::CLRegion& region);
Json report_to_json(const robust::RobustnessReport& rep);
Json escape_to_json(const robust::EscapeResult& res);
std::string escape_trace_csv(const robust::EscapeResult& res);

std::string dump(const Json& j);
void write_file(const std::string& path, const std::string& text);
std::string read_file(const std::string& path);

/// SVG rendering of a cell complex: bounded hull cells grey, contamination
/// cells black, sample points white with weight labels.
std::string svg_render(const WeightedSample& s, const cells::Region& hull,
                       const cl::CLRegion* cl_region);

}  // namespace fwg::io
