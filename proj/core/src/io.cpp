#include "petal/io.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "petal/errors.hpp"

namespace petal::io {

using nlohmann::json;

std::string g17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void atomic_write_text(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    require(out.good(), errc::usage, "cannot open for writing: " + tmp.string());
    out << content;
    out.flush();
    require(out.good(), errc::usage, "write failed: " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  require(!ec, errc::usage, "rename failed: " + target.string());
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(in.good(), errc::usage, "cannot open: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string ray_csv(const RayCurve& r) {
  std::string out = "t,re,im\n";
  for (const RaySample& s : r.samples)
    out += g17(s.t) + "," + g17(s.z.real()) + "," + g17(s.z.imag()) + "\n";
  return out;
}

std::string param_ray_csv(const ParameterRay& pr) {
  std::string out = "t,a_re,a_im,residual,method\n";
  for (const ParamSample& s : pr.samples)
    out += g17(s.t) + "," + g17(s.a.real()) + "," + g17(s.a.imag()) + "," + g17(s.residual) + "," +
           method_name(s.method) + "\n";
  return out;
}

namespace {

json member_j(const FamilyMember& m) {
  return json{{"family", family_name(m.id)},
              {"n", m.id.n},
              {"a_re", m.a.real()},
              {"a_im", m.a.imag()}};
}

FamilyMember member_from_j(const json& j) {
  FamilyId id = family_from_name(j.at("family").get<std::string>(), j.value("n", 1));
  return member(id.kind, cplx(j.at("a_re").get<double>(), j.at("a_im").get<double>()), id.n);
}

json comb_j(const Combinatorics& c) {
  if (c.kind == Combinatorics::Kind::ExternalAngle)
    return json{{"kind", "angle"}, {"num", c.num}, {"den", c.den}};
  return json{{"kind", "address"}, {"address", c.address}, {"entry_bound", c.entry_bound}};
}

Combinatorics comb_from_j(const json& j) {
  std::string kind = j.at("kind").get<std::string>();
  if (kind == "angle") return external_angle(j.at("num").get<long>(), j.at("den").get<long>());
  if (kind == "address")
    return external_address(j.at("address").get<std::vector<int>>(), j.value("entry_bound", 10));
  fail(errc::usage, "unknown combinatorics kind: " + kind);
}

json parse_json(const std::string& text, const std::string& what) {
  json j = json::parse(text, nullptr, false);
  require(!j.is_discarded(), errc::usage, "malformed JSON in " + what);
  return j;
}

}  // namespace

std::string member_json(const FamilyMember& m) { return member_j(m).dump(); }
std::string comb_json(const Combinatorics& c) { return comb_j(c).dump(); }

std::string ray_sidecar_json(const RayCurve& r) {
  json j{{"schema", "ray"},
         {"member", member_j(r.member)},
         {"comb", comb_j(r.comb)},
         {"invariance_residual", r.invariance_residual},
         {"samples", r.samples.size()}};
  return j.dump(2) + "\n";
}

std::string param_ray_sidecar_json(const ParameterRay& pr) {
  json j{{"schema", "param_ray"},
         {"family", family_name(pr.family)},
         {"n", pr.family.n},
         {"comb", comb_j(pr.comb)},
         {"landing",
          {{"a_re", pr.landing.value.real()},
           {"a_im", pr.landing.value.imag()},
           {"uncertainty", pr.landing.uncertainty}}},
         {"samples", pr.samples.size()}};
  return j.dump(2) + "\n";
}

std::string svg_polyline(const std::vector<cplx>& points, const std::string& caption) {
  require(!points.empty(), errc::usage, "nothing to plot");
  double xmin = points[0].real(), xmax = xmin, ymin = points[0].imag(), ymax = ymin;
  for (const cplx& p : points) {
    xmin = std::min(xmin, p.real());
    xmax = std::max(xmax, p.real());
    ymin = std::min(ymin, p.imag());
    ymax = std::max(ymax, p.imag());
  }
  double dx = xmax - xmin, dy = ymax - ymin;
  if (dx <= 0) dx = 1.0;
  if (dy <= 0) dy = 1.0;
  const double W = 800, H = 600, M = 60;
  auto sx = [&](double x) { return M + (x - xmin) / dx * (W - 2 * M); };
  auto sy = [&](double y) { return H - M - (y - ymin) / dy * (H - 2 * M); };
  auto num = [](double v) {
    char b[32];
    std::snprintf(b, sizeof b, "%.6g", v);
    return std::string(b);
  };
  std::ostringstream s;
  s << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
    << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << W
    << "\" height=\"" << H << "\" viewBox=\"0 0 " << W << " " << H << "\">\n"
    << "<rect width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n"
    << "<line x1=\"" << M << "\" y1=\"" << H - M << "\" x2=\"" << W - M << "\" y2=\"" << H - M
    << "\" stroke=\"black\"/>\n"
    << "<line x1=\"" << M << "\" y1=\"" << M << "\" x2=\"" << M << "\" y2=\"" << H - M
    << "\" stroke=\"black\"/>\n"
    << "<text x=\"" << M << "\" y=\"" << H - M / 2 << "\" font-size=\"12\">" << num(xmin)
    << "</text>\n"
    << "<text x=\"" << W - M << "\" y=\"" << H - M / 2
    << "\" font-size=\"12\" text-anchor=\"end\">" << num(xmax) << "</text>\n"
    << "<text x=\"" << M / 4 << "\" y=\"" << H - M << "\" font-size=\"12\">" << num(ymin)
    << "</text>\n"
    << "<text x=\"" << M / 4 << "\" y=\"" << M << "\" font-size=\"12\">" << num(ymax)
    << "</text>\n"
    << "<text x=\"" << W / 2 << "\" y=\"" << M / 2
    << "\" font-size=\"14\" text-anchor=\"middle\">" << caption << "</text>\n"
    << "<polyline fill=\"none\" stroke=\"#1f6feb\" stroke-width=\"1.5\" points=\"";
  for (size_t i = 0; i < points.size(); ++i) {
    if (i) s << " ";
    s << num(sx(points[i].real())) << "," << num(sy(points[i].imag()));
  }
  s << "\"/>\n</svg>\n";
  return s.str();
}

std::string sidecar_path(const std::string& csv_path) {
  if (csv_path.size() >= 4 && csv_path.substr(csv_path.size() - 4) == ".csv")
    return csv_path.substr(0, csv_path.size() - 4) + ".json";
  return csv_path + ".json";
}

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

double parse_num(const std::string& s) {
  try {
    size_t pos = 0;
    double v = std::stod(s, &pos);
    require(pos == s.size(), errc::usage, "bad numeric field: " + s);
    return v;
  } catch (const Error&) {
    throw;
  } catch (...) {
    fail(errc::usage, "bad numeric field: " + s);
  }
}

}  // namespace

Replay read_replay(const std::string& csv_path) {
  std::istringstream in(read_text(csv_path));
  std::string header;
  require(bool(std::getline(in, header)), errc::usage, "empty CSV: " + csv_path);
  json side = parse_json(read_text(sidecar_path(csv_path)), sidecar_path(csv_path));

  Replay rep;
  std::string line;
  if (header == "t,re,im") {
    rep.is_param = false;
    rep.ray.member = member_from_j(side.at("member"));
    rep.ray.comb = comb_from_j(side.at("comb"));
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      auto f = split(line, ',');
      require(f.size() == 3, errc::usage, "ray CSV row needs 3 fields");
      rep.ray.samples.push_back({parse_num(f[0]), cplx(parse_num(f[1]), parse_num(f[2]))});
    }
    require(!rep.ray.samples.empty(), errc::usage, "ray CSV has no samples");
  } else if (header == "t,a_re,a_im,residual,method") {
    rep.is_param = true;
    rep.pray.family = family_from_name(side.at("family").get<std::string>(), side.value("n", 1));
    rep.pray.comb = comb_from_j(side.at("comb"));
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      auto f = split(line, ',');
      require(f.size() == 5, errc::usage, "parameter-ray CSV row needs 5 fields");
      SolveMethod m;
      if (f[4] == "newton")
        m = SolveMethod::Newton;
      else if (f[4] == "winding")
        m = SolveMethod::Winding;
      else
        fail(errc::usage, "unknown method tag: " + f[4]);
      rep.pray.samples.push_back(
          {parse_num(f[0]), cplx(parse_num(f[1]), parse_num(f[2])), parse_num(f[3]), m});
    }
    require(!rep.pray.samples.empty(), errc::usage, "parameter-ray CSV has no samples");
  } else {
    fail(errc::usage, "unrecognized CSV header: " + header);
  }
  return rep;
}

void check_replay(const Replay& r) {
  if (!r.is_param) {
    const auto& s = r.ray.samples;
    for (size_t i = 1; i < s.size(); ++i)
      require(s[i].t < s[i - 1].t, errc::invariant_violation, "potentials not descending");
    bool has_pair = false;
    for (size_t i = 0; i < s.size() && !has_pair; ++i)
      for (size_t j = 0; j < i && !has_pair; ++j)
        if (std::abs(s[j].t - s[i].t - 1.0) < 1e-9) has_pair = true;
    if (has_pair)
      require(invariance_residual(r.ray) <= 1e-8, errc::invariant_violation,
              "forward invariance residual above 1e-8");
    return;
  }
  const auto& s = r.pray.samples;
  for (size_t i = 1; i < s.size(); ++i)
    require(s[i].t < s[i - 1].t, errc::invariant_violation, "potentials not descending");
  for (const ParamSample& p : s)
    require(p.residual <= 1e-8, errc::invariant_violation, "defect residual above 1e-8");
  cplx a0 = base_param(r.pray.family);
  size_t first = s.size() - std::min<size_t>(10, s.size());
  for (size_t i = first + 1; i < s.size(); ++i)
    require(std::abs(s[i].a - a0) <= std::abs(s[i - 1].a - a0) + 1e-12, errc::invariant_violation,
            "approach to the base parameter is not monotone over the final samples");
}

}  // namespace petal::io
