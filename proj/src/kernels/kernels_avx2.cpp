#include <bbound/kernels/kernels.hpp>

#include <cmath>

#if defined(__AVX2__)
#include <immintrin.h>
#endif

// AVX2 lane. Mirrors kernels_scalar.cpp expression-for-expression; FMA is
// deliberately not used so per-element results match the scalar lane bitwise.

namespace bbound::kernels::detail {

#if defined(__AVX2__)

namespace {

inline __m256d cubic4(const double qc[4], __m256d u) {
  __m256d acc = _mm256_set1_pd(qc[3]);
  acc = _mm256_add_pd(_mm256_set1_pd(qc[2]), _mm256_mul_pd(u, acc));
  acc = _mm256_add_pd(_mm256_set1_pd(qc[1]), _mm256_mul_pd(u, acc));
  acc = _mm256_add_pd(_mm256_set1_pd(qc[0]), _mm256_mul_pd(u, acc));
  return acc;
}

inline double hmax(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  __m128d m = _mm_max_pd(lo, hi);
  m = _mm_max_sd(m, _mm_unpackhi_pd(m, m));
  return _mm_cvtsd_f64(m);
}

inline double scalar_point(const double* row, const double* rowS,
                           const double* rowN, int i, int im, int ip,
                           double inv_hx2, double inv_hy2, const double qc[4]) {
  double uc = row[i];
  double lx = ((row[im] + row[ip]) - (uc + uc)) * inv_hx2;
  double ly = ((rowS[i] + rowN[i]) - (uc + uc)) * inv_hy2;
  return (lx + ly) + (qc[0] + uc * (qc[1] + uc * (qc[2] + uc * qc[3])));
}

}  // namespace

double residual_semilinear_avx2(const double* u, double* r, int nx, int ny,
                                int j0, int j1, double inv_hx2, double inv_hy2,
                                const double qc[4]) {
  const __m256d vhx = _mm256_set1_pd(inv_hx2);
  const __m256d vhy = _mm256_set1_pd(inv_hy2);
  const __m256d sign_mask = _mm256_set1_pd(-0.0);
  __m256d vmax = _mm256_setzero_pd();
  double m = 0.0;
  for (int j = j0; j < j1; ++j) {
    const double* row = u + std::size_t(j) * nx;
    const double* rowS = u + std::size_t((j + ny - 1) % ny) * nx;
    const double* rowN = u + std::size_t((j + 1) % ny) * nx;
    double* out = r + std::size_t(j) * nx;

    double v0 = scalar_point(row, rowS, rowN, 0, nx - 1, 1, inv_hx2, inv_hy2, qc);
    out[0] = v0;
    m = std::fmax(m, std::fabs(v0));

    int i = 1;
    for (; i + 4 <= nx - 1; i += 4) {
      __m256d uc = _mm256_loadu_pd(row + i);
      __m256d uw = _mm256_loadu_pd(row + i - 1);
      __m256d ue = _mm256_loadu_pd(row + i + 1);
      __m256d us = _mm256_loadu_pd(rowS + i);
      __m256d un = _mm256_loadu_pd(rowN + i);
      __m256d two_c = _mm256_add_pd(uc, uc);
      __m256d lx = _mm256_mul_pd(
          _mm256_sub_pd(_mm256_add_pd(uw, ue), two_c), vhx);
      __m256d ly = _mm256_mul_pd(
          _mm256_sub_pd(_mm256_add_pd(us, un), two_c), vhy);
      __m256d res = _mm256_add_pd(_mm256_add_pd(lx, ly), cubic4(qc, uc));
      _mm256_storeu_pd(out + i, res);
      vmax = _mm256_max_pd(vmax, _mm256_andnot_pd(sign_mask, res));
    }
    for (; i < nx - 1; ++i) {
      double v = scalar_point(row, rowS, rowN, i, i - 1, i + 1, inv_hx2,
                              inv_hy2, qc);
      out[i] = v;
      m = std::fmax(m, std::fabs(v));
    }
    double vl = scalar_point(row, rowS, rowN, nx - 1, nx - 2, 0, inv_hx2,
                             inv_hy2, qc);
    out[nx - 1] = vl;
    m = std::fmax(m, std::fabs(vl));
  }
  return std::fmax(m, hmax(vmax));
}

void axpy_avx2(double* u, const double* r, double dt, std::size_t i0,
               std::size_t i1) {
  const __m256d vdt = _mm256_set1_pd(dt);
  std::size_t i = i0;
  for (; i + 4 <= i1; i += 4) {
    __m256d uu = _mm256_loadu_pd(u + i);
    __m256d rr = _mm256_loadu_pd(r + i);
    _mm256_storeu_pd(u + i, _mm256_add_pd(uu, _mm256_mul_pd(vdt, rr)));
  }
  for (; i < i1; ++i) u[i] += dt * r[i];
}

void grad_sq_central_avx2(const double* u, double* g2, int nx, int ny, int j0,
                          int j1, double inv_2hx, double inv_2hy) {
  const __m256d vhx = _mm256_set1_pd(inv_2hx);
  const __m256d vhy = _mm256_set1_pd(inv_2hy);
  for (int j = j0; j < j1; ++j) {
    const double* row = u + std::size_t(j) * nx;
    const double* rowS = u + std::size_t((j + ny - 1) % ny) * nx;
    const double* rowN = u + std::size_t((j + 1) % ny) * nx;
    double* out = g2 + std::size_t(j) * nx;

    auto edge = [&](int i, int im, int ip) {
      double gx = (row[ip] - row[im]) * inv_2hx;
      double gy = (rowN[i] - rowS[i]) * inv_2hy;
      out[i] = gx * gx + gy * gy;
    };
    edge(0, nx - 1, 1);
    int i = 1;
    for (; i + 4 <= nx - 1; i += 4) {
      __m256d gx = _mm256_mul_pd(
          _mm256_sub_pd(_mm256_loadu_pd(row + i + 1), _mm256_loadu_pd(row + i - 1)),
          vhx);
      __m256d gy = _mm256_mul_pd(
          _mm256_sub_pd(_mm256_loadu_pd(rowN + i), _mm256_loadu_pd(rowS + i)),
          vhy);
      _mm256_storeu_pd(
          out + i, _mm256_add_pd(_mm256_mul_pd(gx, gx), _mm256_mul_pd(gy, gy)));
    }
    for (; i < nx - 1; ++i) edge(i, i - 1, i + 1);
    edge(nx - 1, nx - 2, 0);
  }
}

double max_abs_avx2(const double* v, std::size_t n) {
  const __m256d sign_mask = _mm256_set1_pd(-0.0);
  __m256d vmax = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    vmax = _mm256_max_pd(vmax, _mm256_andnot_pd(sign_mask, _mm256_loadu_pd(v + i)));
  double m = hmax(vmax);
  for (; i < n; ++i) m = std::fmax(m, std::fabs(v[i]));
  return m;
}

#else  // !__AVX2__: forward to the scalar lane so the symbol always exists.

double residual_semilinear_avx2(const double* u, double* r, int nx, int ny,
                                int j0, int j1, double inv_hx2, double inv_hy2,
                                const double qc[4]) {
  return residual_semilinear_scalar(u, r, nx, ny, j0, j1, inv_hx2, inv_hy2, qc);
}
void axpy_avx2(double* u, const double* r, double dt, std::size_t i0,
               std::size_t i1) {
  axpy_scalar(u, r, dt, i0, i1);
}
void grad_sq_central_avx2(const double* u, double* g2, int nx, int ny, int j0,
                          int j1, double inv_2hx, double inv_2hy) {
  grad_sq_central_scalar(u, g2, nx, ny, j0, j1, inv_2hx, inv_2hy);
}
double max_abs_avx2(const double* v, std::size_t n) {
  return max_abs_scalar(v, n);
}

#endif

}  // namespace bbound::kernels::detail
