#include <bbound/kernels/kernels.hpp>

#include <cmath>

// Reference lane. The AVX2 lane mirrors the exact expression grouping used
// here; keep the two in sync when changing any formula.

namespace bbound::kernels::detail {

namespace {
inline double cubic(const double qc[4], double u) {
  return qc[0] + u * (qc[1] + u * (qc[2] + u * qc[3]));
}

inline double point_residual(double uc, double uw, double ue, double us,
                             double un, double inv_hx2, double inv_hy2,
                             const double qc[4]) {
  double lx = ((uw + ue) - (uc + uc)) * inv_hx2;
  double ly = ((us + un) - (uc + uc)) * inv_hy2;
  return (lx + ly) + cubic(qc, uc);
}
}  // namespace

double residual_semilinear_scalar(const double* u, double* r, int nx, int ny,
                                  int j0, int j1, double inv_hx2,
                                  double inv_hy2, const double qc[4]) {
  double m = 0.0;
  for (int j = j0; j < j1; ++j) {
    const double* row = u + std::size_t(j) * nx;
    const double* rowS = u + std::size_t((j + ny - 1) % ny) * nx;
    const double* rowN = u + std::size_t((j + 1) % ny) * nx;
    double* out = r + std::size_t(j) * nx;
    for (int i = 0; i < nx; ++i) {
      int im = (i == 0) ? nx - 1 : i - 1;
      int ip = (i == nx - 1) ? 0 : i + 1;
      double v = point_residual(row[i], row[im], row[ip], rowS[i], rowN[i],
                                inv_hx2, inv_hy2, qc);
      out[i] = v;
      m = std::fmax(m, std::fabs(v));
    }
  }
  return m;
}

void axpy_scalar(double* u, const double* r, double dt, std::size_t i0,
                 std::size_t i1) {
  for (std::size_t i = i0; i < i1; ++i) u[i] += dt * r[i];
}

void grad_sq_central_scalar(const double* u, double* g2, int nx, int ny,
                            int j0, int j1, double inv_2hx, double inv_2hy) {
  for (int j = j0; j < j1; ++j) {
    const double* row = u + std::size_t(j) * nx;
    const double* rowS = u + std::size_t((j + ny - 1) % ny) * nx;
    const double* rowN = u + std::size_t((j + 1) % ny) * nx;
    double* out = g2 + std::size_t(j) * nx;
    for (int i = 0; i < nx; ++i) {
      int im = (i == 0) ? nx - 1 : i - 1;
      int ip = (i == nx - 1) ? 0 : i + 1;
      double gx = (row[ip] - row[im]) * inv_2hx;
      double gy = (rowN[i] - rowS[i]) * inv_2hy;
      out[i] = gx * gx + gy * gy;
    }
  }
}

double max_abs_scalar(const double* v, std::size_t n) {
  double m = 0.0;
  for (std::size_t i = 0; i < n; ++i) m = std::fmax(m, std::fabs(v[i]));
  return m;
}

}  // namespace bbound::kernels::detail
