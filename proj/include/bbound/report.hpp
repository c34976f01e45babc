#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <bbound/barriers.hpp>
#include <bbound/pde.hpp>
#include <bbound/verify.hpp>

#include <json.hpp>

namespace bbound {

using ordered_json = nlohmann::ordered_json;

ordered_json curve_metadata(const BarrierCurve& curve);
void write_curve_csv(std::ostream& os, const BarrierCurve& curve);

ordered_json field_sidecar(const ScalarField& field);
void write_field_csv(std::ostream& os, const ScalarField& field);

ordered_json report_to_json(const VerificationReport& rep);

// Flat CSV summary, stable column order.
std::string summary_csv_header();
std::string summary_csv_row(const std::string& scenario,
                            const std::string& audit, int resolution,
                            const std::string& sweep, double defect,
                            double tolerance, const std::string& verdict);

// Minimal SVG writers; plots are post-processing only, never audit inputs.
std::string svg_line_plot(const std::string& title,
                          const std::vector<double>& x,
                          const std::vector<std::vector<double>>& series,
                          const std::vector<std::string>& labels);
std::string svg_heatmap(const std::string& title,
                        const std::vector<double>& values, int nx, int ny,
                        int max_cells = 64);

}  // namespace bbound
