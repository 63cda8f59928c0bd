#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "petal/errors.hpp"
#include "petal/family.hpp"
#include "petal/fatou.hpp"
#include "petal/fixed_points.hpp"
#include "petal/io.hpp"
#include "petal/parallel.hpp"
#include "petal/param_ray.hpp"
#include "petal/phase.hpp"
#include "petal/rays.hpp"

namespace {

using nlohmann::json;
using namespace petal;

struct Cfg {
  std::string family = "quadratic";
  int n = 1;
  double a_re = 0.0, a_im = 0.0;
  bool a_set = false;
  std::string angle = "0";
  std::string address;
  double t_start = 1.0, t_end = -12.0, step = 1.0;
  std::string out = ".";
  // tolerance profile
  double model_tol = 1e-9;
  double fatou_tol = 1e-10;
  double petal_l = 10.0;
  double residual_tol = 1e-8;
  double mu_tol = 1e-3;
  double consistency_tol = 1e-4;
  double horn_height = 0.15;
  double trust_scale = 0.1;
  double trust_base = 1e-3;
  double min_step = 1e-3;
  double seed_agreement = 1e-9;
  double green_min = 40.0;
  double escape_radius = 1e8;
  double disk_re = 0.0, disk_im = 0.0, disk_radius = 0.0;
  bool force_fallback = false;
  std::string suite, replay;
};

long parse_long(const std::string& s, const std::string& what) {
  try {
    size_t pos = 0;
    long v = std::stol(s, &pos);
    require(pos == s.size(), errc::usage, "malformed " + what + ": " + s);
    return v;
  } catch (const Error&) {
    throw;
  } catch (...) {
    fail(errc::usage, "malformed " + what + ": " + s);
  }
}

Combinatorics comb_of(const Cfg& cfg) {
  FamilyId id = family_from_name(cfg.family, cfg.n);
  if (id.kind == FamilyKind::ExponentialLambda) {
    require(!cfg.address.empty(), errc::usage, "exponential rays need --address");
    std::vector<int> entries;
    std::string cur;
    auto flush = [&] {
      entries.push_back(int(parse_long(cur, "address entry")));
      cur.clear();
    };
    for (char ch : cfg.address) {
      if (ch == ',')
        flush();
      else
        cur += ch;
    }
    flush();
    return external_address(entries);
  }
  // angle "num" or "num/den"
  auto slash = cfg.angle.find('/');
  long num, den;
  if (slash == std::string::npos) {
    num = parse_long(cfg.angle, "angle");
    den = 1;
  } else {
    num = parse_long(cfg.angle.substr(0, slash), "angle");
    den = parse_long(cfg.angle.substr(slash + 1), "angle");
  }
  return external_angle(num, den);
}

FamilyMember member_of(const Cfg& cfg) {
  require(cfg.a_set, errc::usage, "this command needs a parameter (--a-re/--a-im, --c, --lambda)");
  FamilyId id = family_from_name(cfg.family, cfg.n);
  return member(id.kind, cplx(cfg.a_re, cfg.a_im), id.n);
}

void check_tolerances(const Cfg& c) {
  for (double v : {c.model_tol, c.fatou_tol, c.petal_l, c.residual_tol, c.mu_tol,
                   c.consistency_tol, c.horn_height, c.trust_scale, c.trust_base, c.min_step,
                   c.seed_agreement, c.green_min, c.escape_radius})
    require(v > 0.0, errc::usage, "all tolerances must be positive");
}

RayOptions ray_options(const Cfg& c) {
  RayOptions o;
  o.model.tol = c.model_tol;
  o.seed_agreement = c.seed_agreement;
  o.green_min = c.green_min;
  o.escape_radius = c.escape_radius;
  return o;
}

std::filesystem::path out_path(const Cfg& c, const std::string& name) {
  std::filesystem::create_directories(c.out);
  return std::filesystem::path(c.out) / name;
}

void emit(const Cfg& c, const std::string& name, const std::string& content) {
  auto p = out_path(c, name);
  io::atomic_write_text(p.string(), content);
  std::cout << p.string() << "\n";
}

// ---- commands ------------------------------------------------------------

int cmd_fixed_points(const Cfg& cfg) {
  FamilyMember m = member_of(cfg);
  Circle disk{{cfg.disk_re, cfg.disk_im}, cfg.disk_radius, 256};
  if (cfg.disk_radius <= 0.0) disk = default_pair_disk(m);
  FixedPair p = find_pair(m, disk);
  json j{{"member", json::parse(io::member_json(m))},
         {"z1_re", p.z1.real()},
         {"z1_im", p.z1.imag()},
         {"z2_re", p.z2.real()},
         {"z2_im", p.z2.imag()},
         {"mu1_re", p.mu1.real()},
         {"mu1_im", p.mu1.imag()},
         {"mu2_re", p.mu2.real()},
         {"mu2_im", p.mu2.imag()},
         {"sum", {{"re", (p.z1 + p.z2).real()}, {"im", (p.z1 + p.z2).imag()}}}};
  emit(cfg, "fixed_points.json", j.dump(2) + "\n");
  return 0;
}

json chart_diag(const FatouChart& chart, const char* side) {
  // Abel residual |phi(f(w)) - phi(w) - 1| on a fan of petal points
  double L = chart.opts.L;
  json samples = json::array();
  double worst = 0.0;
  for (int j = 0; j < 8; ++j) {
    cplx u(L + 4.0 + 2.0 * j, 3.0 * (j - 4));
    if (!chart.incoming) u = -u;
    cplx w = -1.0 / u;
    cplx zeta = fatou_eval(chart, w);
    cplx zeta_next = fatou_eval(chart, chart.map.f(w));
    double res = std::abs(zeta_next - zeta - 1.0);
    worst = std::max(worst, res);
    samples.push_back(json{{"w_re", w.real()},
                           {"w_im", w.imag()},
                           {"zeta_re", zeta.real()},
                           {"zeta_im", zeta.imag()},
                           {"abel_residual", res}});
  }
  return json{{"side", side},
              {"a_star", {{"re", chart.map.series.a_star().real()},
                          {"im", chart.map.series.a_star().imag()}}},
              {"offset", {{"re", chart.offset.real()}, {"im", chart.offset.imag()}}},
              {"residual", worst},
              {"petal_scale", L},
              {"samples", samples}};
}

int cmd_fatou(const Cfg& cfg) {
  FamilyId id = family_from_name(cfg.family, cfg.n);
  FamilyMember base = member(id.kind, base_param(id), id.n);
  FatouOptions fo;
  fo.L = cfg.petal_l;
  fo.tol = cfg.fatou_tol;
  ParabolicMap germ = germ_of(base);
  FatouChart inc = make_incoming(germ, fo);
  FatouChart out = make_outgoing(germ, fo);
  HornFit fit = horn_normalize(inc, out, normalized_singular(base));
  json j{{"member", json::parse(io::member_json(base))},
         {"incoming", chart_diag(inc, "incoming")},
         {"outgoing", chart_diag(out, "outgoing")},
         {"horn", {{"c_re", fit.c.real()},
                   {"c_im", fit.c.imag()},
                   {"h", fit.h},
                   {"horn_residual", fit.horn_residual},
                   {"consistency", fit.consistency}}}};
  emit(cfg, "fatou.json", j.dump(2) + "\n");
  return 0;
}

int cmd_phase_b(const Cfg& cfg) {
  FamilyMember m = member_of(cfg);
  PhaseOptions po;
  po.mu_tol = cfg.mu_tol;
  po.consistency_tol = cfg.consistency_tol;
  po.horn_height = cfg.horn_height;
  PhaseB b = phase_B(m, po);
  double identity_err = std::abs(b.mu_check - b.mu_direct);
  json j{{"member", json::parse(io::member_json(m))},
         {"B_re", b.value.real()},
         {"B_im", b.value.imag()},
         {"mu_check_re", b.mu_check.real()},
         {"mu_check_im", b.mu_check.imag()},
         {"mu_direct_re", b.mu_direct.real()},
         {"mu_direct_im", b.mu_direct.imag()},
         {"identity_error", identity_err},
         {"horn_residual", b.horn_residual},
         {"route", b.route}};
  emit(cfg, "phase_b.json", j.dump(2) + "\n");
  return 0;
}

int cmd_ray(const Cfg& cfg) {
  FamilyMember m = member_of(cfg);
  require(cfg.t_start > cfg.t_end, errc::usage, "potential range is empty");
  RayCurve r = trace_ray(m, comb_of(cfg), cfg.t_start, cfg.t_end, cfg.step, ray_options(cfg));
  emit(cfg, "ray.csv", io::ray_csv(r));
  emit(cfg, "ray.json", io::ray_sidecar_json(r));
  std::vector<cplx> pts;
  for (const RaySample& s : r.samples) pts.push_back(s.z);
  emit(cfg, "ray.svg", io::svg_polyline(pts, "dynamic ray"));
  return 0;
}

int cmd_param_ray(const Cfg& cfg) {
  FamilyId id = family_from_name(cfg.family, cfg.n);
  require(cfg.t_start > cfg.t_end, errc::usage, "potential range is empty");
  ParamRayOptions po;
  po.residual_tol = cfg.residual_tol;
  po.trust_scale = cfg.trust_scale;
  po.trust_base = cfg.trust_base;
  po.min_step = cfg.min_step;
  po.force_fallback = cfg.force_fallback;
  po.ray = ray_options(cfg);
  if (cfg.a_set) po.seed_hint = cplx(cfg.a_re, cfg.a_im);
  ParameterRay pr = trace_parameter_ray(id, comb_of(cfg), cfg.t_start, cfg.t_end, cfg.step, po);
  emit(cfg, "param_ray.csv", io::param_ray_csv(pr));
  emit(cfg, "param_ray.json", io::param_ray_sidecar_json(pr));
  std::vector<cplx> pts;
  for (const ParamSample& s : pr.samples) pts.push_back(s.a);
  emit(cfg, "param_ray.svg", io::svg_polyline(pts, "parameter ray"));
  if (pr.samples.size() >= 10) {
    LandingReport rep = landing_report(pr, base_param(id));
    json j{{"monotone", rep.monotone},
           {"limit_re", rep.limit.real()},
           {"limit_im", rep.limit.imag()},
           {"limit_error", rep.limit_error},
           {"distances", rep.distances}};
    emit(cfg, "landing.json", j.dump(2) + "\n");
  }
  return 0;
}

int cmd_verify(const Cfg& cfg) {
  if (!cfg.replay.empty()) {
    io::Replay rep = io::read_replay(cfg.replay);
    io::check_replay(rep);
    std::cout << "replay ok: " << (rep.is_param ? rep.pray.samples.size() : rep.ray.samples.size())
              << " samples\n";
    return 0;
  }
  require(cfg.suite == "multiplier-phase", errc::usage,
          "verify needs --replay <file> or --suite multiplier-phase");

  std::vector<double> radii = {0.02, 0.05, 0.1};
  std::vector<double> args = {kPi / 6.0, kPi / 4.0, kPi / 3.0};
  struct Row {
    cplx lambda;
    double err;
    bool sector_ok;
  };
  std::vector<Row> rows(radii.size() * args.size());
  parallel_for(rows.size(), [&](size_t i) {
    cplx lam = radii[i / args.size()] * std::exp(kI * args[i % args.size()]);
    FamilyMember m = member(FamilyKind::NormalizedParabolic, lam, 1);
    PhaseB b = phase_B(m);
    rows[i] = {lam, std::abs(b.mu_check - (1.0 + 2.0 * lam)), b.value.real() < 0.0};
  });
  bool all_ok = true;
  for (const Row& r : rows) {
    bool ok = r.err <= 1e-3 && r.sector_ok;
    all_ok = all_ok && ok;
    std::printf("lambda=%.17g%+.17gi identity_error=%.3e sector=%s %s\n", r.lambda.real(),
                r.lambda.imag(), r.err, r.sector_ok ? "ok" : "violated", ok ? "pass" : "FAIL");
  }
  return all_ok ? 0 : 1;
}

// ---- config / main ---------------------------------------------------------

void load_config(const std::string& path, Cfg& c) {
  json j = json::parse(io::read_text(path), nullptr, false);
  require(!j.is_discarded(), errc::usage, "malformed JSON config: " + path);
  require(j.is_object(), errc::usage, "config must be a JSON object");
  auto num = [&](const char* k, double& v) {
    if (j.contains(k)) v = j.at(k).get<double>();
  };
  if (j.contains("family")) c.family = j.at("family").get<std::string>();
  if (j.contains("n")) c.n = j.at("n").get<int>();
  if (j.contains("a_re")) {
    c.a_re = j.at("a_re").get<double>();
    c.a_set = true;
  }
  if (j.contains("a_im")) {
    c.a_im = j.at("a_im").get<double>();
    c.a_set = true;
  }
  if (j.contains("c")) {
    c.a_re = j.at("c").get<double>();
    c.a_set = true;
  }
  if (j.contains("lambda")) {
    c.a_re = j.at("lambda").get<double>();
    c.a_set = true;
  }
  if (j.contains("angle")) {
    if (j.at("angle").is_number_integer())
      c.angle = std::to_string(j.at("angle").get<long>());
    else
      c.angle = j.at("angle").get<std::string>();
  }
  if (j.contains("address")) {
    if (j.at("address").is_array()) {
      c.address.clear();
      for (const auto& e : j.at("address")) {
        if (!c.address.empty()) c.address += ",";
        c.address += std::to_string(e.get<long>());
      }
    } else {
      c.address = j.at("address").get<std::string>();
    }
  }
  num("t_start", c.t_start);
  num("t_end", c.t_end);
  num("step", c.step);
  if (j.contains("out")) c.out = j.at("out").get<std::string>();
  num("model_tol", c.model_tol);
  num("fatou_tol", c.fatou_tol);
  num("petal_l", c.petal_l);
  num("residual_tol", c.residual_tol);
  num("mu_tol", c.mu_tol);
  num("consistency_tol", c.consistency_tol);
  num("horn_height", c.horn_height);
  num("trust_scale", c.trust_scale);
  num("trust_base", c.trust_base);
  num("min_step", c.min_step);
  num("seed_agreement", c.seed_agreement);
  num("green_min", c.green_min);
  num("escape_radius", c.escape_radius);
  num("disk_re", c.disk_re);
  num("disk_im", c.disk_im);
  num("disk_radius", c.disk_radius);
  if (j.contains("force_fallback")) c.force_fallback = j.at("force_fallback").get<bool>();
}

void add_common(CLI::App* cmd, Cfg& c, bool with_param, bool with_comb, bool with_range) {
  cmd->add_option("--family", c.family, "normalized | quadratic | exponential");
  cmd->add_option("--n", c.n, "iterate order for the normalized family");
  if (with_param) {
    auto mark = [&c](double Cfg::* field) {
      return std::function<void(const double&)>([&c, field](const double& v) {
        c.*field = v;
        c.a_set = true;
      });
    };
    cmd->add_option_function<double>("--a-re", mark(&Cfg::a_re), "parameter real part");
    cmd->add_option_function<double>("--a-im", mark(&Cfg::a_im), "parameter imaginary part");
    cmd->add_option_function<double>("--c", mark(&Cfg::a_re), "quadratic parameter (real)");
    cmd->add_option_function<double>("--lambda", mark(&Cfg::a_re), "exponential parameter (real)");
  }
  if (with_comb) {
    cmd->add_option("--angle", c.angle, "external angle, num or num/den");
    cmd->add_option("--address", c.address, "external address entries, comma separated");
  }
  if (with_range) {
    cmd->add_option("--t-start", c.t_start, "highest potential");
    cmd->add_option("--t-end", c.t_end, "lowest potential");
    cmd->add_option("--step", c.step, "potential step");
  }
  cmd->add_option("--out", c.out, "output directory");
  cmd->add_option("--model-tol", c.model_tol, "");
  cmd->add_option("--fatou-tol", c.fatou_tol, "");
  cmd->add_option("--petal-l", c.petal_l, "");
  cmd->add_option("--residual-tol", c.residual_tol, "");
  cmd->add_option("--mu-tol", c.mu_tol, "");
  cmd->add_option("--consistency-tol", c.consistency_tol, "");
  cmd->add_option("--horn-height", c.horn_height, "");
  cmd->add_option("--trust-scale", c.trust_scale, "");
  cmd->add_option("--trust-base", c.trust_base, "");
  cmd->add_option("--min-step", c.min_step, "");
  cmd->add_option("--seed-agreement", c.seed_agreement, "");
  cmd->add_option("--green-min", c.green_min, "");
  cmd->add_option("--escape-radius", c.escape_radius, "");
}

}  // namespace

int main(int argc, char** argv) {
  Cfg cfg;
  try {
    // config file first, flags override
    for (int i = 1; i < argc; ++i) {
      std::string arg = argv[i];
      if (arg == "--config" && i + 1 < argc) {
        load_config(argv[i + 1], cfg);
      } else if (arg.rfind("--config=", 0) == 0) {
        load_config(arg.substr(9), cfg);
      }
    }

    CLI::App app{"parabolic parameter-ray toolkit"};
    app.require_subcommand(1);
    std::string config_path;
    app.add_option("--config", config_path, "JSON config file (flags override)");

    auto* fp = app.add_subcommand("fixed-points", "locate the fixed-point pair by contour");
    add_common(fp, cfg, true, false, false);
    fp->add_option("--disk-re", cfg.disk_re, "pair disk center, real part");
    fp->add_option("--disk-im", cfg.disk_im, "pair disk center, imaginary part");
    fp->add_option("--disk-radius", cfg.disk_radius, "pair disk radius (0 = auto)");

    auto* fa = app.add_subcommand("fatou", "base-germ Fatou charts and horn normalization");
    add_common(fa, cfg, false, false, false);

    auto* pb = app.add_subcommand("phase-b", "phase B(a) with the multiplier identity check");
    add_common(pb, cfg, true, false, false);

    auto* ry = app.add_subcommand("ray", "trace a fixed dynamic ray");
    add_common(ry, cfg, true, true, true);

    auto* pr = app.add_subcommand("param-ray", "trace the parameter ray for a combinatorics");
    add_common(pr, cfg, true, true, true);
    pr->add_flag("--force-fallback", cfg.force_fallback,
                 "use the winding-number contour instead of Newton");

    auto* vf = app.add_subcommand("verify", "replay artifacts or run a verification suite");
    vf->add_option("--replay", cfg.replay, "re-parse an emitted CSV and re-check invariants");
    vf->add_option("--suite", cfg.suite, "suite name (multiplier-phase)");

    try {
      app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
      return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
      return app.exit(e);
    } catch (const CLI::ParseError& e) {
      nlohmann::json diag{{"error", "UsageError"}, {"message", e.what()}};
      std::cerr << diag.dump() << "\n";
      return 2;
    }

    check_tolerances(cfg);
    if (fp->parsed()) return cmd_fixed_points(cfg);
    if (fa->parsed()) return cmd_fatou(cfg);
    if (pb->parsed()) return cmd_phase_b(cfg);
    if (ry->parsed()) return cmd_ray(cfg);
    if (pr->parsed()) return cmd_param_ray(cfg);
    if (vf->parsed()) return cmd_verify(cfg);
    return 2;
  } catch (const Error& e) {
    nlohmann::json diag{{"error", errc_name(e.code())}, {"message", e.what()}};
    std::cerr << diag.dump() << "\n";
    return e.code() == errc::usage ? 2 : 1;
  } catch (const std::exception& e) {
    nlohmann::json diag{{"error", "Unexpected"}, {"message", e.what()}};
    std::cerr << diag.dump() << "\n";
    return 1;
  }
}
