#include <bbound/numerics/quadrature.hpp>

#include <cmath>

namespace bbound::numerics {

namespace {

// Kronrod 15-point nodes/weights on [-1, 1] plus embedded Gauss 7.
constexpr double xk[8] = {0.991455371120813, 0.949107912342759,
                          0.864864423359769, 0.741531185599394,
                          0.586087235467691, 0.405845151377397,
                          0.207784955007898, 0.0};
constexpr double wk[8] = {0.022935322010529, 0.063092092629979,
                          0.104790010322250, 0.140653259715525,
                          0.169004726639267, 0.190350578064785,
                          0.204432940075298, 0.209482141084728};
constexpr double wg[4] = {0.129484966168870, 0.279705391489277,
                          0.381830050505119, 0.417959183673469};

struct Panel {
  double kronrod;
  double err;
};

Panel gk15(const std::function<double(double)>& f, double a, double b) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  double resk = 0.0, resg = 0.0;
  for (int i = 0; i < 7; ++i) {
    double fv = f(c - h * xk[i]) + f(c + h * xk[i]);
    resk += wk[i] * fv;
    if (i % 2 == 1) resg += wg[i / 2] * fv;
  }
  double f0 = f(c);
  resk += wk[7] * f0;
  resg += wg[3] * f0;
  Panel p;
  p.kronrod = resk * h;
  p.err = std::fabs((resk - resg) * h);
  return p;
}

double adapt(const std::function<double(double)>& f, double a, double b,
             double tol, int depth, int max_depth) {
  Panel p = gk15(f, a, b);
  if (p.err <= tol || depth >= max_depth) return p.kronrod;
  double m = 0.5 * (a + b);
  return adapt(f, a, m, 0.5 * tol, depth + 1, max_depth) +
         adapt(f, m, b, 0.5 * tol, depth + 1, max_depth);
}

}  // namespace

double integrate_gk(const std::function<double(double)>& f, double a, double b,
                    double abs_tol, double rel_tol, int max_depth) {
  if (a == b) return 0.0;
  Panel first = gk15(f, a, b);
  double tol = abs_tol + rel_tol * std::fabs(first.kronrod);
  if (first.err <= tol) return first.kronrod;
  double m = 0.5 * (a + b);
  return adapt(f, a, m, 0.5 * tol, 1, max_depth) +
         adapt(f, m, b, 0.5 * tol, 1, max_depth);
}

}  // namespace bbound::numerics
