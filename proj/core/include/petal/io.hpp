#pragma once
#include <string>
#include <vector>

#include "petal/param_ray.hpp"
#include "petal/rays.hpp"

namespace petal::io {

// shortest exact decimal is overkill; %.17g round-trips and is stable
std::string g17(double x);

// write via temp file + rename so readers never see partial artifacts
void atomic_write_text(const std::string& path, const std::string& content);

std::string read_text(const std::string& path);

// --- CSV ---------------------------------------------------------------

// header t,re,im; potentials descending
std::string ray_csv(const RayCurve& r);
// header t,a_re,a_im,residual,method
std::string param_ray_csv(const ParameterRay& pr);

// --- JSON sidecars (serialized strings; keys sorted, no timestamps) -----

std::string member_json(const FamilyMember& m);
std::string comb_json(const Combinatorics& c);
std::string ray_sidecar_json(const RayCurve& r);
std::string param_ray_sidecar_json(const ParameterRay& pr);

// --- SVG ----------------------------------------------------------------

// single polyline with min/max axis annotations, plain SVG 1.1
std::string svg_polyline(const std::vector<cplx>& points, const std::string& caption);

// --- replay ---------------------------------------------------------------

// Re-parses an emitted CSV (schema detected from the header) together with
// its .json sidecar (same path, .csv replaced by .json) and re-runs the
// module invariant checks; throws petal::Error on violation.
struct Replay {
  bool is_param{false};
  RayCurve ray;
  ParameterRay pray;
};

std::string sidecar_path(const std::string& csv_path);
Replay read_replay(const std::string& csv_path);
void check_replay(const Replay& r);

}  // namespace petal::io
