#include <bbound/kernels/kernels.hpp>

#include <cstdlib>
#include <cstring>

namespace bbound::kernels {

namespace {

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(__i386__)
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

Lane initial_lane() {
  const char* env = std::getenv("BARRIER_BOUND_SIMD");
  if (env) {
    if (std::strcmp(env, "scalar") == 0) return Lane::scalar;
    if (std::strcmp(env, "avx2") == 0)
      return cpu_has_avx2() ? Lane::avx2 : Lane::scalar;
  }
  return cpu_has_avx2() ? Lane::avx2 : Lane::scalar;
}

Lane g_lane = initial_lane();

}  // namespace

Lane active_lane() { return g_lane; }
void set_lane(Lane lane) {
  g_lane = (lane == Lane::avx2 && !cpu_has_avx2()) ? Lane::scalar : lane;
}
bool avx2_available() { return cpu_has_avx2(); }
std::string lane_name() { return g_lane == Lane::avx2 ? "avx2" : "scalar"; }

double residual_semilinear(const double* u, double* r, int nx, int ny, int j0,
                           int j1, double inv_hx2, double inv_hy2,
                           const double qc[4]) {
  return g_lane == Lane::avx2
             ? detail::residual_semilinear_avx2(u, r, nx, ny, j0, j1, inv_hx2,
                                                inv_hy2, qc)
             : detail::residual_semilinear_scalar(u, r, nx, ny, j0, j1,
                                                  inv_hx2, inv_hy2, qc);
}

void axpy(double* u, const double* r, double dt, std::size_t i0,
          std::size_t i1) {
  if (g_lane == Lane::avx2)
    detail::axpy_avx2(u, r, dt, i0, i1);
  else
    detail::axpy_scalar(u, r, dt, i0, i1);
}

void grad_sq_central(const double* u, double* g2, int nx, int ny, int j0,
                     int j1, double inv_2hx, double inv_2hy) {
  if (g_lane == Lane::avx2)
    detail::grad_sq_central_avx2(u, g2, nx, ny, j0, j1, inv_2hx, inv_2hy);
  else
    detail::grad_sq_central_scalar(u, g2, nx, ny, j0, j1, inv_2hx, inv_2hy);
}

double max_abs(const double* v, std::size_t n) {
  return g_lane == Lane::avx2 ? detail::max_abs_avx2(v, n)
                              : detail::max_abs_scalar(v, n);
}

}  // namespace bbound::kernels
