#include <bbound/report.hpp>

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace bbound {

namespace {

const char* kind_tag(BarrierKind k) {
  switch (k) {
    case BarrierKind::flat: return "flat";
    case BarrierKind::warped: return "warped";
    case BarrierKind::sphere_family: return "sphere-family";
    case BarrierKind::modica: return "modica";
    case BarrierKind::constant: return "constant";
  }
  return "?";
}

const char* provenance_tag(FieldProvenance p) {
  switch (p) {
    case FieldProvenance::symmetric_ode: return "symmetric-ode";
    case FieldProvenance::relaxed: return "relaxed";
    case FieldProvenance::manufactured: return "manufactured";
    case FieldProvenance::analytic: return "analytic";
  }
  return "?";
}

}  // namespace

ordered_json curve_metadata(const BarrierCurve& curve) {
  ordered_json j;
  j["kind"] = kind_tag(curve.kind);
  if (curve.is_constant) {
    j["constant_value"] = curve.constant_value;
    return j;
  }
  j["interval"] = {curve.interval[0], curve.interval[1]};
  j["range"] = {curve.range[0], curve.range[1]};
  j["delta"] = curve.delta;
  j["c"] = curve.c;
  j["samples"] = curve.grid.size();
  j["min_dphi"] = curve.min_dphi();
  j["residual_norm"] = curve.residual_norm;
  j["first_integral_defect"] = curve.first_integral_defect;
  if (curve.kind == BarrierKind::modica)
    j["ode_cross_defect"] = curve.ode_cross_defect;
  if (curve.kind == BarrierKind::flat && curve.delta > 0.0)
    j["delta_slope_max"] = curve.delta_slope_max;
  if (curve.kind == BarrierKind::sphere_family)
    j["coverage_complete"] = curve.coverage_complete;
  if (!curve.note.empty()) j["note"] = curve.note;
  return j;
}

void write_curve_csv(std::ostream& os, const BarrierCurve& curve) {
  os << "z,phi,dphi\n";
  os << std::setprecision(17);
  if (curve.is_constant) {
    os << 0.0 << ',' << curve.constant_value << ',' << 0.0 << '\n';
    return;
  }
  for (std::size_t i = 0; i < curve.grid.size(); ++i)
    os << curve.grid[i] << ',' << curve.phi[i] << ',' << curve.dphi[i] << '\n';
}

ordered_json field_sidecar(const ScalarField& field) {
  ordered_json j;
  j["model"] = field.model.describe();
  j["provenance"] = provenance_tag(field.provenance);
  if (field.is_grid2d()) {
    j["grid"] = {field.nx, field.ny};
  } else {
    j["grid"] = field.grid.size();
  }
  j["h"] = field.spacing();
  j["range"] = {field.min_value(), field.max_value()};
  j["residual_norm"] = field.residual_norm;
  j["residual_norm_unregularized"] = field.residual_norm_unregularized;
  j["declared_tol"] = field.declared_tol;
  j["certified"] = field.certified();
  return j;
}

void write_field_csv(std::ostream& os, const ScalarField& field) {
  os << std::setprecision(17);
  if (field.is_grid2d()) {
    os << "x,y,u,grad_norm\n";
    const auto& P = field.model.periods();
    for (int jy = 0; jy < field.ny; ++jy)
      for (int ix = 0; ix < field.nx; ++ix) {
        std::size_t k = std::size_t(jy) * field.nx + ix;
        os << P[0] * ix / field.nx << ',' << P[1] * jy / field.ny << ','
           << field.values[k] << ',' << field.gradient_norm[k] << '\n';
      }
    return;
  }
  os << "s,u,grad_norm\n";
  for (std::size_t k = 0; k < field.grid.size(); ++k)
    os << field.grid[k] << ',' << field.values[k] << ','
       << field.gradient_norm[k] << '\n';
}

ordered_json report_to_json(const VerificationReport& rep) {
  ordered_json j;
  j["kind"] = audit_kind_name(rep.kind);
  j["max_defect"] = rep.max_defect;
  j["tolerance_model"] = rep.tolerance_model;
  j["verdict"] = verdict_name(rep.verdict);
  if (rep.vacuous) j["vacuous"] = true;
  if (rep.sharp) j["sharp"] = true;
  if (rep.witness.pair) {
    j["witness"] = {{"x", {rep.witness.x[0], rep.witness.x[1]}},
                    {"y", {rep.witness.y[0], rep.witness.y[1]}}};
  } else {
    j["witness"] = {{"x", {rep.witness.x[0], rep.witness.x[1]}}};
  }
  ordered_json hist = ordered_json::array();
  for (const auto& lvl : rep.refinement_history)
    hist.push_back({{"h", lvl.h}, {"max_defect", lvl.max_defect}});
  j["refinement_history"] = hist;
  if (auto ord = empirical_order(rep.refinement_history))
    j["empirical_order"] = *ord;
  if (!rep.note.empty()) j["note"] = rep.note;
  return j;
}

std::string summary_csv_header() {
  return "scenario,audit,resolution,sweep,defect,tolerance,verdict\n";
}

std::string summary_csv_row(const std::string& scenario,
                            const std::string& audit, int resolution,
                            const std::string& sweep, double defect,
                            double tolerance, const std::string& verdict) {
  std::ostringstream os;
  os << std::setprecision(12);
  os << scenario << ',' << audit << ',' << resolution << ',' << sweep << ','
     << defect << ',' << tolerance << ',' << verdict << '\n';
  return os.str();
}

// ------------------------------------------------------------------ SVG

namespace {

struct Extent {
  double lo, hi;
};

Extent extent_of(const std::vector<double>& v) {
  Extent e{v.empty() ? 0.0 : v[0], v.empty() ? 1.0 : v[0]};
  for (double x : v) {
    e.lo = std::min(e.lo, x);
    e.hi = std::max(e.hi, x);
  }
  if (e.hi == e.lo) e.hi = e.lo + 1.0;
  return e;
}

}  // namespace

std::string svg_line_plot(const std::string& title,
                          const std::vector<double>& x,
                          const std::vector<std::vector<double>>& series,
                          const std::vector<std::string>& labels) {
  const int W = 640, H = 400, M = 48;
  Extent ex = extent_of(x);
  Extent ey{0, 1};
  bool first = true;
  for (const auto& s : series) {
    Extent e = extent_of(s);
    if (first) {
      ey = e;
      first = false;
    } else {
      ey.lo = std::min(ey.lo, e.lo);
      ey.hi = std::max(ey.hi, e.hi);
    }
  }
  auto px = [&](double v) { return M + (v - ex.lo) / (ex.hi - ex.lo) * (W - 2 * M); };
  auto py = [&](double v) { return H - M - (v - ey.lo) / (ey.hi - ey.lo) * (H - 2 * M); };
  const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd"};

  std::ostringstream os;
  os << "<svg xmlns='http://www.w3.org/2000/svg' width='" << W << "' height='"
     << H << "'>\n";
  os << "<rect width='100%' height='100%' fill='white'/>\n";
  os << "<text x='" << W / 2 << "' y='20' text-anchor='middle' font-size='14'>"
     << title << "</text>\n";
  os << "<line x1='" << M << "' y1='" << H - M << "' x2='" << W - M << "' y2='"
     << H - M << "' stroke='black'/>\n";
  os << "<line x1='" << M << "' y1='" << M << "' x2='" << M << "' y2='"
     << H - M << "' stroke='black'/>\n";
  for (std::size_t s = 0; s < series.size(); ++s) {
    os << "<polyline fill='none' stroke='" << colors[s % 4]
       << "' stroke-width='1.2' points='";
    for (std::size_t i = 0; i < x.size() && i < series[s].size(); ++i)
      os << px(x[i]) << ',' << py(series[s][i]) << ' ';
    os << "'/>\n";
    if (s < labels.size())
      os << "<text x='" << W - M - 150 << "' y='" << (M + 16 * (s + 1))
         << "' font-size='12' fill='" << colors[s % 4] << "'>" << labels[s]
         << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

std::string svg_heatmap(const std::string& title,
                        const std::vector<double>& values, int nx, int ny,
                        int max_cells) {
  const int sx = std::max(1, nx / max_cells), sy = std::max(1, ny / max_cells);
  const int cx = nx / sx, cy = ny / sy;
  Extent e = extent_of(values);
  const int cell = 8, M = 40;
  const int W = cx * cell + 2 * M, H = cy * cell + 2 * M;
  std::ostringstream os;
  os << "<svg xmlns='http://www.w3.org/2000/svg' width='" << W << "' height='"
     << H << "'>\n<rect width='100%' height='100%' fill='white'/>\n";
  os << "<text x='" << W / 2 << "' y='20' text-anchor='middle' font-size='13'>"
     << title << "</text>\n";
  for (int j = 0; j < cy; ++j)
    for (int i = 0; i < cx; ++i) {
      double v = values[std::size_t(j * sy) * nx + i * sx];
      double t = (v - e.lo) / (e.hi - e.lo);
      int r = int(255 * t), b = int(255 * (1 - t));
      os << "<rect x='" << (M + i * cell) << "' y='" << (M + j * cell)
         << "' width='" << cell << "' height='" << cell << "' fill='rgb(" << r
         << ",64," << b << ")'/>\n";
    }
  os << "</svg>\n";
  return os.str();
}

}  // namespace bbound
