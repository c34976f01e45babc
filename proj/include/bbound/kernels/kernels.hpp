#pragma once

#include <cstddef>
#include <string>

namespace bbound::kernels {

// Grid kernels for periodic nx-by-ny lattices (row-major, index = j*nx + i).
// Each kernel has a scalar reference implementation and an AVX2 variant; the
// active lane is selected at runtime from CPU features (override with the
// BARRIER_BOUND_SIMD env var: auto | scalar | avx2). The two lanes are kept
// bitwise-identical per element: same operation order, no FMA contraction,
// so solver output does not depend on the lane.
enum class Lane { scalar, avx2 };

Lane active_lane();
void set_lane(Lane lane);
bool avx2_available();
std::string lane_name();

// Semilinear residual r = lap(u) + qc0 + u*(qc1 + u*(qc2 + u*qc3)) with the
// periodic 5-point Laplacian; rows [j0, j1). Returns sup|r| over those rows.
double residual_semilinear(const double* u, double* r, int nx, int ny, int j0,
                           int j1, double inv_hx2, double inv_hy2,
                           const double qc[4]);

// u += dt * r over [i0, i1).
void axpy(double* u, const double* r, double dt, std::size_t i0, std::size_t i1);

// Squared central-difference gradient magnitude per point, rows [j0, j1).
void grad_sq_central(const double* u, double* g2, int nx, int ny, int j0,
                     int j1, double inv_2hx, double inv_2hy);

double max_abs(const double* v, std::size_t n);

namespace detail {
double residual_semilinear_scalar(const double* u, double* r, int nx, int ny,
                                  int j0, int j1, double inv_hx2,
                                  double inv_hy2, const double qc[4]);
void axpy_scalar(double* u, const double* r, double dt, std::size_t i0,
                 std::size_t i1);
void grad_sq_central_scalar(const double* u, double* g2, int nx, int ny,
                            int j0, int j1, double inv_2hx, double inv_2hy);
double max_abs_scalar(const double* v, std::size_t n);

double residual_semilinear_avx2(const double* u, double* r, int nx, int ny,
                                int j0, int j1, double inv_hx2, double inv_hy2,
                                const double qc[4]);
void axpy_avx2(double* u, const double* r, double dt, std::size_t i0,
               std::size_t i1);
void grad_sq_central_avx2(const double* u, double* g2, int nx, int ny, int j0,
                          int j1, double inv_2hx, double inv_2hy);
double max_abs_avx2(const double* v, std::size_t n);
}  // namespace detail

}  // namespace bbound::kernels
