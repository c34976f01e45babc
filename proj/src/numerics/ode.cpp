#include <bbound/numerics/ode.hpp>

#include <bbound/common.hpp>

#include <algorithm>
#include <cmath>

namespace bbound::numerics {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                 a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                 b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

using Vec = std::array<double, 4>;

struct Stepper {
  const OdeRhs& f;
  int dim;
  const OdeOptions& opts;
  Vec y;
  Vec k1;
  double t;
  double h;
  long steps = 0;

  Stepper(const OdeRhs& rhs, int d, double t0, const Vec& y0,
          const OdeOptions& o, double dir)
      : f(rhs), dim(d), opts(o), y(y0), t(t0) {
    f(t, y, k1);
    h = dir * std::fabs(opts.initial_step);
  }

  // One accepted step, clipped to not pass t_limit. Returns actual dt.
  double step_toward(double t_limit) {
    const double dir = (t_limit >= t) ? 1.0 : -1.0;
    h = dir * std::fabs(h);
    for (;;) {
      if (++steps > opts.max_steps)
        throw ConstructionError("ode: step budget exhausted");
      double dt = h;
      if (dir * (t + dt - t_limit) > 0.0) dt = t_limit - t;
      Vec k2, k3, k4, k5, k6, k7, y5;
      auto stage = [&](const Vec& base, Vec& out, double tc) {
        f(tc, base, out);
      };
      Vec tmp;
      for (int i = 0; i < dim; ++i) tmp[i] = y[i] + dt * a21 * k1[i];
      stage(tmp, k2, t + c2 * dt);
      for (int i = 0; i < dim; ++i)
        tmp[i] = y[i] + dt * (a31 * k1[i] + a32 * k2[i]);
      stage(tmp, k3, t + c3 * dt);
      for (int i = 0; i < dim; ++i)
        tmp[i] = y[i] + dt * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
      stage(tmp, k4, t + c4 * dt);
      for (int i = 0; i < dim; ++i)
        tmp[i] = y[i] + dt * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
      stage(tmp, k5, t + c5 * dt);
      for (int i = 0; i < dim; ++i)
        tmp[i] = y[i] + dt * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] +
                              a64 * k4[i] + a65 * k5[i]);
      stage(tmp, k6, t + dt);
      for (int i = 0; i < dim; ++i)
        y5[i] = y[i] + dt * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] +
                             b6 * k6[i]);
      stage(y5, k7, t + dt);

      double err = 0.0;
      for (int i = 0; i < dim; ++i) {
        double ei = dt * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                          e6 * k6[i] + e7 * k7[i]);
        double sc = opts.abs_tol +
                    opts.rel_tol * std::max(std::fabs(y[i]), std::fabs(y5[i]));
        err = std::max(err, std::fabs(ei) / sc);
      }
      if (err <= 1.0) {
        t += dt;
        y = y5;
        k1 = k7;  // FSAL
        double grow = 0.9 * std::pow(std::max(err, 1e-10), -0.2);
        h = dt * std::clamp(grow, 0.2, 5.0);
        if (std::fabs(h) < opts.min_step) h = dir * opts.min_step;
        return dt;
      }
      h = dt * std::clamp(0.9 * std::pow(err, -0.2), 0.1, 0.9);
      if (std::fabs(h) < opts.min_step)
        throw ConstructionError("ode: step underflow at t=" + std::to_string(t));
    }
  }
};

}  // namespace

OdeResult integrate(const OdeRhs& f, int dim, double t0, const Vec& y0,
                    const std::vector<double>& report, const OdeOptions& opts,
                    const OdeEvent& event) {
  OdeResult out;
  if (report.empty()) return out;
  Stepper s(f, dim, t0, y0, opts, report.back() >= t0 ? 1.0 : -1.0);

  auto record = [&](double t, const Vec& y) {
    OdeSample smp;
    smp.t = t;
    smp.y = y;
    f(t, y, smp.dy);
    out.samples.push_back(smp);
  };

  std::size_t next = 0;
  if (report[0] == t0) {
    record(t0, y0);
    ++next;
  }
  double ev_prev = event ? event(t0, y0) : -1.0;
  if (event && ev_prev >= 0.0) {
    out.event_hit = true;
    out.event_t = t0;
    out.event_y = y0;
    return out;
  }

  while (next < report.size()) {
    const double target = report[next];
    const double t_before = s.t;
    const Vec y_before = s.y;
    const Vec k_before = s.k1;
    s.step_toward(target);

    if (event) {
      double ev = event(s.t, s.y);
      if (ev >= 0.0) {
        // Locate the crossing by bisecting the step interval.
        double lo = t_before, hi = s.t;
        Vec y_lo = y_before;
        for (int it = 0; it < 60 && std::fabs(hi - lo) > 1e-13 * (1 + std::fabs(hi));
             ++it) {
          double mid = 0.5 * (lo + hi);
          Stepper probe(f, dim, lo, y_lo, opts, mid >= lo ? 1.0 : -1.0);
          while ((mid - probe.t) * (mid - lo) > 0.0 &&
                 std::fabs(probe.t - mid) > 1e-15 * (1 + std::fabs(mid)))
            probe.step_toward(mid);
          if (event(probe.t, probe.y) >= 0.0) {
            hi = mid;
          } else {
            lo = mid;
            y_lo = probe.y;
          }
        }
        Stepper fin(f, dim, t_before, y_before, opts, hi >= t_before ? 1.0 : -1.0);
        while (std::fabs(fin.t - hi) > 1e-15 * (1 + std::fabs(hi)) &&
               (hi - fin.t) * (hi - t_before) > 0.0)
          fin.step_toward(hi);
        out.event_hit = true;
        out.event_t = fin.t;
        out.event_y = fin.y;
        return out;
      }
      (void)k_before;
    }

    while (next < report.size() &&
           ((report.back() >= t0 && s.t >= report[next] - 1e-15 * (1 + std::fabs(report[next]))) ||
            (report.back() < t0 && s.t <= report[next] + 1e-15 * (1 + std::fabs(report[next]))))) {
      record(report[next], s.y);
      ++next;
    }
  }
  return out;
}

std::array<double, 4> integrate_to(const OdeRhs& f, int dim, double t0,
                                   const std::array<double, 4>& y0, double t1,
                                   const OdeOptions& opts) {
  OdeResult r = integrate(f, dim, t0, y0, {t1}, opts);
  if (r.samples.empty()) throw ConstructionError("ode: empty result");
  return r.samples.back().y;
}

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = a + (b - a) * i / double(n - 1);
  v.back() = b;
  return v;
}

}  // namespace bbound::numerics
