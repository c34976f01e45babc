#include <bbound/scenario.hpp>

#include <bbound/kernels/kernels.hpp>
#include <bbound/numerics/fd.hpp>
#include <bbound/numerics/interp.hpp>
#include <bbound/profiles.hpp>

#include <algorithm>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>

namespace bbound {

using nlohmann::json;

namespace {

[[noreturn]] void config_fail(const std::string& field, const std::string& why) {
  throw ConfigError("config field '" + field + "': " + why);
}

double get_num(const json& j, const std::string& key, double dflt,
               bool required = false) {
  if (!j.contains(key)) {
    if (required) config_fail(key, "missing");
    return dflt;
  }
  if (!j[key].is_number()) config_fail(key, "expected a number");
  return j[key].get<double>();
}

std::string get_str(const json& j, const std::string& key,
                    const std::string& dflt, bool required = false) {
  if (!j.contains(key)) {
    if (required) config_fail(key, "missing");
    return dflt;
  }
  if (!j[key].is_string()) config_fail(key, "expected a string");
  return j[key].get<std::string>();
}

std::vector<double> get_vec(const json& j, const std::string& key,
                            std::vector<double> dflt) {
  if (!j.contains(key)) return dflt;
  if (!j[key].is_array()) config_fail(key, "expected an array");
  std::vector<double> out;
  for (const auto& v : j[key]) {
    if (!v.is_number()) config_fail(key, "array entries must be numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

// ------------------------------------------------------------- builders

Poly poly_from(const std::vector<double>& c) {
  Poly p;
  p.c = c;
  if (p.c.empty()) p.c.push_back(0.0);
  return p;
}

// Built-in potentials. The Allen-Cahn well is stated in the convention of
// the divergence-form equation with q = Q': q(u) = u - u^3, so
// Q(u) = u^2/2 - u^4/4 and c_u sits at the range endpoints.
Poly builtin_Q(const std::string& name) {
  if (name == "zero") return poly_from({0.0});
  if (name == "allen-cahn-well") return poly_from({0.0, 0.0, 0.5, 0.0, -0.25});
  if (name == "double-well") return poly_from({0.25, 0.0, -0.5, 0.0, 0.25});
  if (name == "linear") return poly_from({0.0, 1.0});
  config_fail("profile.Q", "unknown built-in potential '" + name + "'");
}

VariationalProfile build_profile(const json& j) {
  if (!j.is_object()) config_fail("profile", "expected an object");
  std::string kind = get_str(j, "kind", "", true);
  std::array<double, 2> range{get_vec(j, "range", {-1.0, 1.0})[0],
                              get_vec(j, "range", {-1.0, 1.0})[1]};
  Poly Q;
  if (j.contains("Q") && j["Q"].is_array()) {
    Q = poly_from(get_vec(j, "Q", {}));
  } else if (j.contains("Q") && j["Q"].is_string()) {
    Q = builtin_Q(j["Q"].get<std::string>());
  } else if (kind == "allen-cahn-well") {
    Q = builtin_Q("allen-cahn-well");
  } else {
    Q = builtin_Q("zero");
  }

  VariationalProfile pr = [&] {
    if (kind == "linear" || kind == "allen-cahn-well")
      return VariationalProfile::linear(Q, range);
    if (kind == "p-laplace")
      return VariationalProfile::p_power(get_num(j, "p", 2.0, true), Q, range,
                                         get_num(j, "tau", 0.0));
    config_fail("profile.kind", "unknown kind '" + kind + "'");
  }();
  if (j.contains("c1") || j.contains("c2"))
    pr.with_structure_constants(get_num(j, "c1", pr.c1()),
                                get_num(j, "c2", pr.c2()));
  if (j.contains("Q_table")) {
    const auto& tj = j["Q_table"];
    if (!tj.is_object() || !tj.contains("u") || !tj.contains("values"))
      config_fail("profile.Q_table", "expected {u: [...], values: [...]}");
    pr.with_tabulated_Q(get_vec(tj, "u", {}), get_vec(tj, "values", {}));
  }
  return pr;
}

ModelManifold build_model(const json& j) {
  if (!j.is_object()) config_fail("model", "expected an object");
  std::string kind = get_str(j, "kind", "", true);
  if (kind == "circle") return ModelManifold::circle(get_num(j, "radius", 1.0));
  if (kind == "flat-torus") {
    auto periods = get_vec(j, "periods", {1.0, 1.0});
    if (j.contains("norm")) {
      const auto& nj = j["norm"];
      double a = get_num(nj, "exponent", 2.0, true);
      auto w = get_vec(nj, "weights", std::vector<double>(periods.size(), 1.0));
      return ModelManifold::flat_torus_minkowski(periods,
                                                 MinkowskiNorm(a, w));
    }
    return ModelManifold::flat_torus(periods);
  }
  if (kind == "sphere-radial")
    return ModelManifold::sphere_radial(int(get_num(j, "dimension", 2)),
                                        get_num(j, "radius", 1.0));
  if (kind == "warped-product") {
    auto iv = get_vec(j, "interval", {-1.0, 1.0});
    int n = int(get_num(j, "dimension", 2));
    if (j.contains("warp") && j["warp"].is_object()) {
      const auto& wj = j["warp"];
      return ModelManifold::warped_product(
          n, {iv[0], iv[1]},
          warp_factor(get_num(wj, "kappa", -1.0, true),
                      get_num(wj, "z0", 0.0)));
    }
    return ModelManifold::warped_product(n, {iv[0], iv[1]}, flat_warp());
  }
  if (kind == "radial-ball")
    return ModelManifold::radial_ball(int(get_num(j, "dimension", 3)),
                                      get_num(j, "radius", 1.0));
  config_fail("model.kind", "unknown kind '" + kind + "'");
}

AuditKind audit_kind_from(const std::string& s) {
  if (s == "two-point") return AuditKind::two_point;
  if (s == "gradient") return AuditKind::gradient;
  if (s == "modica") return AuditKind::modica;
  if (s == "rigidity") return AuditKind::rigidity;
  if (s == "dirichlet-boundary") return AuditKind::dirichlet_boundary;
  config_fail("audits.kind", "unknown audit '" + s + "'");
}

struct SweepPoint {
  std::string label;  // e.g. "delta=1e-3" or "c_offset=1e-2" or "-"
  double delta = 0.0;
  double c_offset = 0.0;
  bool has_delta = false;
  bool has_c = false;
};

std::string fmt_g(double v) {
  std::ostringstream os;
  os << std::setprecision(6) << v;
  return os.str();
}

}  // namespace

json parse_scenario(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    // parse_error.what() carries the byte offset and context line.
    throw ConfigError(std::string("config: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config: top level must be an object");
  if (!j.contains("spec_version") || !j["spec_version"].is_number_integer() ||
      j["spec_version"].get<int>() != 1)
    throw ConfigError("config: spec_version must be 1");
  if (!j.contains("name") || !j["name"].is_string())
    throw ConfigError("config: scenario name missing");
  std::string kind = get_str(j, "kind", "pipeline");
  if (kind != "pipeline" && kind != "barrier-study" && kind != "oracles")
    throw ConfigError("config: unknown scenario kind '" + kind + "'");
  if (kind == "pipeline") {
    if (!j.contains("profile") || !j.contains("model"))
      throw ConfigError("config: pipeline scenario needs profile and model");
    if (j.contains("field") && j["field"].contains("resolutions")) {
      for (const auto& r : j["field"]["resolutions"]) {
        int n = r.get<int>();
        if (n <= 0 || (n & (n - 1)) != 0)
          throw ConfigError("config: resolutions must be powers of two");
      }
      if (j["field"]["resolutions"].empty())
        throw ConfigError("config: resolution list must be nonempty");
    }
  }
  return j;
}

namespace {

// ---------------------------------------------------------------- pipeline

struct PipelineState {
  VariationalProfile profile;
  ModelManifold model;
  json cfg;
  RunOverrides ov;
  ordered_json results = ordered_json::array();
  std::string summary;
  std::string name;
  int worst = 0;  // 0 pass, 2 fail
  std::vector<std::pair<std::string, std::string>> artifacts;
};

// Gradient-bound comparison plot and a two-point heat summary.
void emit_audit_plots(PipelineState& st, const ScalarField& field,
                      const BarrierCurve& curve, const InverseBarrier& inverse,
                      int res) {
  numerics::CubicHermite dphi_interp(
      curve.grid, curve.dphi, numerics::fd_derivative(curve.grid, curve.dphi));
  auto bound_at = [&](double u) {
    double v = std::clamp(u, inverse.domain()[0], inverse.domain()[1]);
    return dphi_interp.eval(inverse.psi(v));
  };
  const std::string tag = std::to_string(res);

  if (!field.is_grid2d()) {
    std::vector<double> bound(field.size());
    for (std::size_t k = 0; k < field.size(); ++k)
      bound[k] = bound_at(field.values[k]);
    st.artifacts.emplace_back(
        "gradient_bound_" + tag + ".svg",
        svg_line_plot("|grad u| against phi'(psi(u))", field.grid,
                      {field.gradient_norm, bound},
                      {"|grad u|", "phi'(psi(u))"}));
    // Z(x, y) over a coarse pair grid.
    const int m = std::min<std::size_t>(128, field.size());
    std::vector<double> zmap(std::size_t(m) * m);
    std::vector<double> psi_u(m);
    std::vector<std::size_t> pick(m);
    for (int k = 0; k < m; ++k) {
      pick[k] = k * field.size() / m;
      psi_u[k] = inverse.psi(std::clamp(field.values[pick[k]],
                                        inverse.domain()[0],
                                        inverse.domain()[1]));
    }
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b)
        zmap[std::size_t(a) * m + b] =
            psi_u[b] - psi_u[a] -
            st.model.distance(field.point_at(pick[a]), field.point_at(pick[b]));
    st.artifacts.emplace_back(
        "two_point_" + tag + ".svg",
        svg_heatmap("Z(x, y) over sampled pairs", zmap, m, m));
  } else {
    // Pointwise gradient margin as the 2-D summary.
    std::vector<double> margin(field.size());
    for (std::size_t k = 0; k < field.size(); ++k)
      margin[k] = bound_at(field.values[k]) - field.gradient_norm[k];
    st.artifacts.emplace_back(
        "gradient_margin_" + tag + ".svg",
        svg_heatmap("phi'(psi(u)) - |grad u|", margin, field.nx, field.ny));
  }
}

ScalarField build_field(PipelineState& st, const json& fj, int resolution,
                        const BarrierCurve* lift_curve) {
  std::string kind = get_str(fj, "kind", "", true);
  double tol = get_num(fj, "tol", 1e-7);
  int n_points = int(get_num(fj, "n_points", 1025));

  if (kind == "analytic") {
    std::string which = get_str(fj, "analytic", "", true);
    if (which == "tanh-kink") {
      auto u = [](double s) { return std::tanh(s / std::sqrt(2.0)); };
      auto du = [](double s) {
        return (1.0 - sq(std::tanh(s / std::sqrt(2.0)))) / std::sqrt(2.0);
      };
      return analytic_field_1d(st.model, u, du, n_points, 0.0, 1e-8);
    }
    if (which == "constant")
      return constant_field(st.model, get_num(fj, "value", 0.0), n_points);
    config_fail("field.analytic", "unknown analytic field '" + which + "'");
  }
  if (kind == "symmetric") {
    const json bj = fj.contains("bc") ? fj["bc"] : json::object();
    SymmetricBC bc;
    std::string bk = get_str(bj, "kind", "dirichlet");
    if (bk == "dirichlet") bc.kind = SymmetricBC::Kind::dirichlet;
    else if (bk == "neumann") bc.kind = SymmetricBC::Kind::neumann;
    else if (bk == "center-dirichlet")
      bc.kind = SymmetricBC::Kind::center_dirichlet;
    else config_fail("field.bc.kind", "unknown bc '" + bk + "'");
    bc.left_value = get_num(bj, "left", 0.0);
    bc.right_value = get_num(bj, "right", 0.0);
    auto br = get_vec(bj, "shoot", {0.0, 0.0});
    bc.shoot_lo = br[0];
    bc.shoot_hi = br.size() > 1 ? br[1] : 0.0;
    return solve_symmetric(st.model, st.profile.coefficients(), bc, n_points,
                           get_num(fj, "tol", 1e-8));
  }
  if (kind == "relax") {
    RelaxOptions ro;
    ro.nx = ro.ny = resolution;
    ro.tol = tol;
    std::string seed = get_str(fj, "seed", "stripe");
    if (seed == "stripe") ro.seed = SeedKind::stripe;
    else if (seed == "checkerboard") ro.seed = SeedKind::checkerboard;
    else if (seed == "random") ro.seed = SeedKind::seeded_random;
    else config_fail("field.seed", "unknown seed '" + seed + "'");
    ro.seed_amplitude = get_num(fj, "seed_amplitude", 0.5);
    ro.max_pseudo_sweeps = long(get_num(fj, "max_pseudo_sweeps", 4000));
    return relax_to_steady(st.model, st.profile, ro);
  }
  if (kind == "lift") {
    if (!lift_curve)
      throw ConstructionError("field.kind=lift requires a barrier");
    return lift_barrier(st.model, *lift_curve, st.profile.coefficients(),
                        get_num(fj, "tol", 1e-8));
  }
  config_fail("field.kind", "unknown kind '" + kind + "'");
}

BarrierCurve build_barrier(PipelineState& st, const json& bj,
                           const SweepPoint& sp, const ScalarField* field) {
  std::string kind = get_str(bj, "kind", "", true);
  std::array<double, 2> range{0.0, 0.0};
  if (bj.contains("range")) {
    auto r = get_vec(bj, "range", {});
    if (r.size() != 2) config_fail("barrier.range", "expected [m, M]");
    range = {r[0], r[1]};
  } else if (field) {
    range = {field->min_value(), field->max_value()};
  } else {
    config_fail("barrier.range", "required when no field precedes the barrier");
  }

  if (kind == "flat") {
    auto iv = get_vec(bj, "interval", {0.0, 1.0});
    return solve_flat_barrier(st.profile.coefficients(), iv[0], iv[1], range,
                              sp.delta);
  }
  if (kind == "warped") {
    auto iv = get_vec(bj, "interval",
                      {st.model.interval()[0], st.model.interval()[1]});
    int n = int(get_num(bj, "dimension", st.model.dimension()));
    const WarpFactor& w = st.model.kind() == ModelKind::warped_product
                              ? st.model.warp()
                              : warp_factor(get_num(bj, "kappa", -1.0), 0.0);
    return solve_warped_barrier(st.profile.coefficients(), w, n, iv[0], iv[1],
                                range);
  }
  if (kind == "modica") {
    VariationalProfile pr = st.profile;
    pr.with_range(range);
    double c = pr.c_sup() + sp.c_offset;
    return modica_barrier(pr, c, get_num(bj, "s0", 0.0));
  }
  if (kind == "sphere-family") {
    VariationalProfile pr = st.profile;
    if (bj.contains("range")) pr.with_range(range);
    double c = pr.c_sup() + sp.c_offset;
    return solve_sphere_family(pr, c,
                               int(get_num(bj, "dimension",
                                           st.model.dimension())));
  }
  config_fail("barrier.kind", "unknown kind '" + kind + "'");
}

std::vector<SweepPoint> sweep_points(const json& bj, const RunOverrides& ov) {
  std::vector<SweepPoint> pts;
  bool has_delta = bj.contains("delta");
  bool has_c = bj.contains("c_offsets");
  if (has_delta) {
    auto ds = get_vec(bj, "delta", {0.0});
    if (ds.empty()) config_fail("barrier.delta", "sweep list must be nonempty");
    if (ov.sweep_only == "resolution" || ov.sweep_only == "c")
      ds.resize(1);
    for (double d : ds) {
      SweepPoint sp;
      sp.delta = d;
      sp.has_delta = true;
      sp.label = "delta=" + fmt_g(d);
      pts.push_back(sp);
    }
    return pts;
  }
  if (has_c) {
    auto cs = get_vec(bj, "c_offsets", {});
    if (cs.empty())
      config_fail("barrier.c_offsets", "sweep list must be nonempty");
    if (ov.sweep_only == "resolution" || ov.sweep_only == "delta")
      cs.resize(1);
    for (double c : cs) {
      SweepPoint sp;
      sp.c_offset = c;
      sp.has_c = true;
      sp.label = "c_offset=" + fmt_g(c);
      pts.push_back(sp);
    }
    return pts;
  }
  pts.push_back(SweepPoint{"-", 0, 0, false, false});
  return pts;
}

int run_pipeline(PipelineState& st) {
  const json& cfg = st.cfg;
  const json fj = cfg.contains("field") ? cfg["field"] : json::object();
  const json bj = cfg.contains("barrier") ? cfg["barrier"] : json();
  const bool has_barrier =
      !bj.is_null() && get_str(bj, "kind", "none") != "none";
  const bool lift_field = get_str(fj, "kind", "analytic") == "lift";
  bool plots = st.ov.force_plots;
  if (cfg.contains("outputs") && cfg["outputs"].contains("plots") &&
      cfg["outputs"]["plots"].is_boolean())
    plots = plots || cfg["outputs"]["plots"].get<bool>();

  std::vector<int> resolutions;
  if (fj.contains("resolutions"))
    for (const auto& r : fj["resolutions"]) resolutions.push_back(r.get<int>());
  else
    resolutions.push_back(int(get_num(fj, "n_points", 1025)));
  if (st.ov.resolution_override > 0)
    resolutions = {st.ov.resolution_override};
  else if (st.ov.sweep_only == "delta" || st.ov.sweep_only == "c")
    resolutions.resize(1);

  std::vector<AuditKind> audits;
  std::vector<double> audit_tols;
  if (cfg.contains("audits"))
    for (const auto& aj : cfg["audits"]) {
      audits.push_back(audit_kind_from(get_str(aj, "kind", "", true)));
      audit_tols.push_back(get_num(aj, "tolerance", 1e-9));
    }

  auto sweeps = sweep_points(bj.is_null() ? json::object() : bj, st.ov);

  // reports keyed by (audit index, sweep index) across resolutions
  std::map<std::pair<int, int>, std::vector<VerificationReport>> collected;
  ordered_json res_arr = ordered_json::array();

  for (int res : resolutions) {
    ordered_json rj;
    rj["resolution"] = res;

    ScalarField field = [&] {
      if (lift_field) {
        BarrierCurve curve = build_barrier(st, bj, sweeps[0], nullptr);
        return build_field(st, fj, res, &curve);
      }
      return build_field(st, fj, res, nullptr);
    }();
    rj["field"] = field_sidecar(field);
    rj["h"] = field.spacing();

    if (res == resolutions.back()) {
      std::ostringstream os;
      write_field_csv(os, field);
      st.artifacts.emplace_back("field_" + std::to_string(res) + ".csv",
                                os.str());
      if (plots && field.is_grid2d())
        st.artifacts.emplace_back(
            "field_" + std::to_string(res) + ".svg",
            svg_heatmap("u on torus (" + std::to_string(res) + "^2)",
                        field.values, field.nx, field.ny));
      if (plots && !field.is_grid2d())
        st.artifacts.emplace_back(
            "field_" + std::to_string(res) + ".svg",
            svg_line_plot("u and |grad u|", field.grid,
                          {field.values, field.gradient_norm},
                          {"u", "|grad u|"}));
    }

    ordered_json sweep_arr = ordered_json::array();
    for (std::size_t sw = 0; sw < sweeps.size(); ++sw) {
      ordered_json swj;
      swj["param"] = sweeps[sw].label;

      BarrierCurve curve;
      InverseBarrier inverse;
      bool have_curve = false;
      if (has_barrier) {
        curve = build_barrier(st, bj, sweeps[sw],
                              lift_field ? nullptr : &field);
        inverse = invert_barrier(curve);
        have_curve = true;
        swj["barrier"] = curve_metadata(curve);
        if (res == resolutions.back()) {
          std::ostringstream os;
          write_curve_csv(os, curve);
          st.artifacts.emplace_back(
              "barrier_" + std::to_string(res) + "_" + sweeps[sw].label +
                  ".csv",
              os.str());
        }
        if (plots && res == resolutions.back() && sw == 0 &&
            !curve.is_constant)
          emit_audit_plots(st, field, curve, inverse, res);
      }

      ordered_json audit_arr = ordered_json::array();
      for (std::size_t ai = 0; ai < audits.size(); ++ai) {
        const bool needs_curve = audits[ai] == AuditKind::two_point ||
                                 audits[ai] == AuditKind::gradient ||
                                 audits[ai] == AuditKind::dirichlet_boundary;
        if (needs_curve && !have_curve)
          throw ConstructionError("audit '" + audit_kind_name(audits[ai]) +
                                  "' requires a barrier in the scenario");
        SamplingPlan plan;
        plan.base_tol = audit_tols[ai];
        VerificationReport rep;
        switch (audits[ai]) {
          case AuditKind::two_point:
            rep = two_point_audit(field, inverse, st.model, plan);
            break;
          case AuditKind::gradient:
            rep = gradient_audit(field, curve, inverse, plan);
            break;
          case AuditKind::modica:
            rep = modica_audit(field, st.profile, plan);
            break;
          case AuditKind::rigidity:
            rep = rigidity_audit(field, st.profile, audit_tols[ai]);
            break;
          case AuditKind::dirichlet_boundary:
            rep = dirichlet_boundary_audit(field, inverse, st.model, plan);
            break;
        }
        collected[{int(ai), int(sw)}].push_back(rep);
        audit_arr.push_back(report_to_json(rep));
      }
      swj["audits"] = audit_arr;
      sweep_arr.push_back(swj);
    }
    rj["sweeps"] = sweep_arr;
    res_arr.push_back(rj);
  }

  // Tolerance-model recalibration across resolutions, then verdicts.
  for (auto& [key, reps] : collected) {
    recalibrate(reps, audit_tols[key.first]);
    for (std::size_t li = 0; li < reps.size(); ++li) {
      const auto& rep = reps[li];
      res_arr[li]["sweeps"][key.second]["audits"][key.first] =
          report_to_json(rep);
      st.summary += summary_csv_row(
          st.name, audit_kind_name(rep.kind), resolutions[li],
          sweeps[key.second].label, rep.max_defect, rep.tolerance_model,
          verdict_name(rep.verdict));
      if (rep.verdict != Verdict::pass) st.worst = 2;
    }
  }

  st.results = res_arr;
  return st.worst;
}

// ------------------------------------------------------------ barrier study

int run_barrier_study(PipelineState& st) {
  const json& cfg = st.cfg;
  const json bj = cfg["barrier"];
  std::string kind = get_str(bj, "kind", "", true);
  auto sweeps = sweep_points(bj, st.ov);

  std::vector<VariationalProfile> profiles;
  std::vector<std::string> profile_names;
  for (const auto& pj : cfg["profiles"]) {
    profiles.push_back(build_profile(pj));
    profile_names.push_back(get_str(pj, "kind", "?") +
                            (pj.contains("p")
                                 ? "(p=" + fmt_g(pj["p"].get<double>()) + ")"
                                 : ""));
  }

  ordered_json res_arr = ordered_json::array();
  double prev_len = 0.0;
  bool growth_monotone = true;

  for (std::size_t pi = 0; pi < profiles.size(); ++pi) {
    for (const auto& sp : sweeps) {
      ordered_json row;
      row["profile"] = profile_names[pi];
      row["param"] = sp.label;
      double cu = profiles[pi].c_sup();
      double c = cu + sp.c_offset;
      std::string verdict = "pass";
      double defect = 0.0;
      if (kind == "modica") {
        BarrierCurve curve =
            modica_barrier(profiles[pi], c, get_num(bj, "s0", 0.0));
        row["barrier"] = curve_metadata(curve);
        double tol_fi = get_num(bj, "first_integral_tol", 1e-8);
        double tol_x = get_num(bj, "ode_cross_tol", 1e-6);
        defect = std::max(curve.first_integral_defect - tol_fi,
                          curve.ode_cross_defect - tol_x);
        if (defect > 0.0) verdict = "fail";
        st.summary += summary_csv_row(st.name, "modica-cross", 0,
                                      profile_names[pi] + ";" + sp.label,
                                      curve.ode_cross_defect, tol_x, verdict);
      } else if (kind == "sphere-family") {
        BarrierCurve curve = solve_sphere_family(
            profiles[pi], c, int(get_num(bj, "dimension", 2)));
        row["barrier"] = curve_metadata(curve);
        double bound = std::sqrt(profiles[pi].invert_K(c - cu));
        double worst = 0.0;
        for (double d : curve.dphi) worst = std::min(worst, d - bound);
        double len = curve.interval[1] - curve.interval[0];
        row["interval_length"] = len;
        row["lower_bound_gap"] = worst;
        if (worst < -get_num(bj, "lower_bound_tol", 1e-10)) verdict = "fail";
        if (prev_len > 0.0 && len <= prev_len) growth_monotone = false;
        prev_len = len;
        defect = worst;
        st.summary += summary_csv_row(st.name, "family-lower-bound", 0,
                                      profile_names[pi] + ";" + sp.label,
                                      worst, get_num(bj, "lower_bound_tol",
                                                     1e-10),
                                      verdict);
      } else {
        config_fail("barrier.kind", "barrier-study supports modica or "
                                    "sphere-family");
      }
      row["verdict"] = verdict;
      if (verdict != "pass") st.worst = 2;
      res_arr.push_back(row);
    }
  }
  if (kind == "sphere-family") {
    ordered_json growth;
    growth["interval_growth_monotone"] = growth_monotone;
    if (!growth_monotone) st.worst = 2;
    res_arr.push_back(growth);
    st.summary += summary_csv_row(st.name, "family-interval-growth", 0, "-",
                                  growth_monotone ? 0.0 : 1.0, 0.5,
                                  growth_monotone ? "pass" : "fail");
  }
  st.results = res_arr;
  return st.worst;
}

// ---------------------------------------------------------------- oracles

int run_oracles(PipelineState& st) {
  ordered_json arr = ordered_json::array();
  auto push = [&](const std::string& name, double defect, double tol) {
    ordered_json row;
    row["check"] = name;
    row["defect"] = defect;
    row["tolerance"] = tol;
    bool ok = defect <= tol;
    row["verdict"] = ok ? "pass" : "fail";
    if (!ok) st.worst = 2;
    arr.push_back(row);
    st.summary += summary_csv_row(st.name, name, 0, "-", defect, tol,
                                  ok ? "pass" : "fail");
  };

  // invert_K o eval_K identity on a log-spaced grid, p in {2, 3, 4}.
  {
    double worst = 0.0;
    for (double p : {2.0, 3.0, 4.0}) {
      auto pr = VariationalProfile::p_power(p, Poly{{0.0}}, {-1.0, 1.0});
      for (int k = -12; k <= 6; ++k) {
        double s = std::pow(10.0, k / 2.0);
        double back = pr.invert_K(pr.K(s));
        worst = std::max(worst, std::fabs(back - s) / std::max(1.0, s));
      }
    }
    push("invert-k-identity", worst, 1e-10);
  }
  // numeric dual vs the Hoelder-dual closed form.
  {
    MinkowskiNorm H(4.0, {1.0, 1.0});
    double worst = 0.0;
    for (int k = 0; k < 32; ++k) {
      double th = 0.1 + k * 0.19;
      Point v{std::cos(th) * 1.7, std::sin(th) * 1.7, 0.0};
      double analytic = std::pow(std::pow(std::fabs(v[0]), 4.0 / 3.0) +
                                     std::pow(std::fabs(v[1]), 4.0 / 3.0),
                                 3.0 / 4.0);
      worst = std::max(worst, std::fabs(H.dual(v, 2) - analytic) /
                                  std::max(1.0, analytic));
    }
    push("dual-norm-hoelder", worst, 1e-8);
  }
  // thin-torus reduction: 2-D relax vs 1-D (nx x 1) relax, matched h.
  {
    double L = 6.6;
    auto torus = ModelManifold::flat_torus({L, L / 16.0});
    auto line = ModelManifold::flat_torus({L, L / 256.0});
    auto prof = VariationalProfile::linear(builtin_Q("allen-cahn-well"),
                                           {-1.0, 1.0});
    RelaxOptions ro;
    ro.nx = 256;
    ro.ny = 16;
    ro.tol = 1e-9;
    ro.seed_amplitude = 0.35;
    ScalarField f2 = relax_to_steady(torus, prof, ro);
    RelaxOptions r1 = ro;
    r1.ny = 1;
    ScalarField f1 = relax_to_steady(line, prof, r1);
    double worst = 0.0;
    for (int j = 0; j < 16; ++j)
      for (int i = 0; i < 256; ++i)
        worst = std::max(worst, std::fabs(f2.values[std::size_t(j) * 256 + i] -
                                          f1.values[i]));
    push("thin-torus-reduction", worst, 1e-5);
  }
  // warp residual rho'' + kappa rho.
  {
    double worst = 0.0;
    for (double kappa : {-1.0, -4.0}) {
      WarpFactor w = warp_factor(kappa, 0.3);
      for (int i = 0; i <= 1000; ++i) {
        double z = -2.0 + 4.0 * i / 1000.0;
        worst = std::max(worst,
                         std::fabs(w.ddrho(z) + kappa * w.rho(z)) /
                             std::max(1.0, w.rho(z)));
      }
    }
    push("warp-residual", worst, 1e-14);
  }

  st.results = arr;
  return st.worst;
}

}  // namespace

ScenarioResult run_scenario(const json& config, const RunOverrides& overrides) {
  PipelineState st{
      VariationalProfile::linear(Poly{{0.0}}, {0.0, 1.0}),
      ModelManifold::circle(1.0),
      config,
      overrides,
      ordered_json::array(),
      "",
      config["name"].get<std::string>(),
      0,
      {}};

  std::string kind = get_str(config, "kind", "pipeline");
  st.summary = summary_csv_header();

  int code = 0;
  if (kind == "pipeline") {
    st.profile = build_profile(config["profile"]);
    st.model = build_model(config["model"]);
    code = run_pipeline(st);
  } else if (kind == "barrier-study") {
    code = run_barrier_study(st);
  } else {
    code = run_oracles(st);
  }

  ScenarioResult out;
  out.name = st.name;
  out.exit_code = code;
  out.summary_csv = st.summary;
  out.artifacts = std::move(st.artifacts);

  ordered_json bundle;
  bundle["schema"] = {{"spec_version", 1}, {"report_version", 1}};
  bundle["scenario"] = ordered_json::parse(config.dump());
  bundle["simd_lane"] = kernels::lane_name();
  bundle["results"] = st.results;
  bundle["summary"] = {{"exit_code", code},
                       {"all_pass", code == 0}};
  out.report = std::move(bundle);
  return out;
}

void write_artifacts(const ScenarioResult& result, const std::string& out_dir) {
  namespace fs = std::filesystem;
  fs::path dir = fs::path(out_dir) / result.name;
  fs::create_directories(dir);
  {
    std::ofstream os(dir / "report.json");
    ordered_json with_ts;
    with_ts["timestamp"] = std::to_string(std::time(nullptr));
    for (auto& [key, value] : result.report.items()) with_ts[key] = value;
    os << with_ts.dump(2) << '\n';
  }
  {
    std::ofstream os(dir / "summary.csv");
    os << result.summary_csv;
  }
  for (const auto& [name, payload] : result.artifacts) {
    std::ofstream os(dir / name);
    os << payload;
  }
}

MergeResult merge_reports(const std::vector<std::string>& paths) {
  MergeResult out;
  out.csv = summary_csv_header();
  std::map<std::string, int> seen;
  for (const auto& p : paths) {
    std::ifstream is(p);
    if (!is) {
      ++out.skipped;
      continue;
    }
    json j = json::parse(is, nullptr, false);
    if (j.is_discarded() || !j.contains("scenario") ||
        !j["scenario"].contains("name")) {
      ++out.skipped;
      continue;
    }
    std::string name = j["scenario"]["name"].get<std::string>();
    int n = ++seen[name];
    if (n > 1) name += "-" + std::to_string(n);
    ++out.merged;

    if (j.contains("results") && j["results"].is_array()) {
      for (const auto& rj : j["results"]) {
        int res = rj.contains("resolution") ? rj["resolution"].get<int>() : 0;
        if (rj.contains("sweeps"))
          for (const auto& sj : rj["sweeps"])
            for (const auto& aj : sj["audits"])
              out.csv += summary_csv_row(
                  name, aj["kind"].get<std::string>(), res,
                  sj["param"].get<std::string>(),
                  aj["max_defect"].get<double>(),
                  aj["tolerance_model"].get<double>(),
                  aj["verdict"].get<std::string>());
        if (rj.contains("check"))
          out.csv += summary_csv_row(name, rj["check"].get<std::string>(), 0,
                                     "-", rj["defect"].get<double>(),
                                     rj["tolerance"].get<double>(),
                                     rj["verdict"].get<std::string>());
        if (rj.contains("param") && rj.contains("barrier"))
          out.csv += summary_csv_row(
              name, "barrier", 0, rj["param"].get<std::string>(),
              rj["barrier"].contains("residual_norm")
                  ? rj["barrier"]["residual_norm"].get<double>()
                  : 0.0,
              0.0, rj["verdict"].get<std::string>());
      }
    }
  }
  return out;
}

}  // namespace bbound
