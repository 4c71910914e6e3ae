#pragma once

#include <algorithm>
#include <cmath>
#include <limits>

#include "ibcsym/types.hpp"

namespace ibcsym {

struct FlowTolerance {
  double rtol = 1e-8;
  double atol = 1e-12;
  double h_min = 1e-14;
  double h_max = std::numeric_limits<double>::infinity();
};

// Dormand-Prince 5(4) embedded pair for autonomous flows dy/dt = f(y) in R^3.
namespace dopri {

template <class F>
Vec3 trial_step(const F& f, const Vec3& y, const Vec3& k1, double h, Vec3* err) {
  constexpr double a21 = 1.0 / 5.0;
  constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
  constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
  constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0, a53 = 64448.0 / 6561.0,
                   a54 = -212.0 / 729.0;
  constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                   a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;
  constexpr double b1 = 35.0 / 384.0, b3 = 500.0 / 1113.0, b4 = 125.0 / 192.0,
                   b5 = -2187.0 / 6784.0, b6 = 11.0 / 84.0;
  constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                   e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;

  const Vec3 k2 = f(Vec3(y + h * a21 * k1));
  const Vec3 k3 = f(Vec3(y + h * (a31 * k1 + a32 * k2)));
  const Vec3 k4 = f(Vec3(y + h * (a41 * k1 + a42 * k2 + a43 * k3)));
  const Vec3 k5 = f(Vec3(y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4)));
  const Vec3 k6 = f(Vec3(y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5)));
  const Vec3 y1 = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
  if (err) {
    const Vec3 k7 = f(y1);
    *err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
  }
  return y1;
}

}  // namespace dopri

struct FlowAdvance {
  Vec3 y;
  double t = 0.0;        // time actually reached
  double h_next = 0.0;   // suggested next step
  bool event = false;    // stopped because the event function became <= 0
};

// Integrate dy/dt = f(y) from t0 to t1. If event(y) drops to <= 0 the crossing
// is localized by bisection on the last step and integration stops there.
// Throws NumericalError when the step size underflows tol.h_min.
template <class F, class G>
FlowAdvance advance_flow(const F& f, const G& event, Vec3 y, double t0, double t1, double h,
                         const FlowTolerance& tol) {
  FlowAdvance out;
  double t = t0;
  h = std::clamp(h, tol.h_min, tol.h_max);
  while (t < t1) {
    const double remaining = t1 - t;
    const bool last = h >= remaining;
    const double hs = last ? remaining : h;
    const Vec3 k1 = f(y);
    Vec3 err;
    const Vec3 y1 = dopri::trial_step(f, y, k1, hs, &err);
    double e = 0.0;
    for (int c = 0; c < 3; ++c) {
      const double sc = tol.atol + tol.rtol * std::max(std::abs(y[c]), std::abs(y1[c]));
      e = std::max(e, std::abs(err[c]) / sc);
    }
    if (!std::isfinite(e)) e = 1e10;
    if (e <= 1.0) {
      if (event(y1) <= 0.0) {
        double lo = 0.0, hi = 1.0;
        Vec3 yhi = y1;
        for (int it = 0; it < 60 && (hi - lo) * hs > 1e-13 * std::max(1.0, std::abs(t)); ++it) {
          const double mid = 0.5 * (lo + hi);
          const Vec3 ym = dopri::trial_step(f, y, k1, mid * hs, nullptr);
          if (event(ym) <= 0.0) {
            hi = mid;
            yhi = ym;
          } else {
            lo = mid;
          }
        }
        out.y = yhi;
        out.t = t + hi * hs;
        out.h_next = h;
        out.event = true;
        return out;
      }
      y = y1;
      t = last ? t1 : t + hs;
      const double fac = e == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(e, -0.2), 0.2, 5.0);
      if (!last) h = std::min(hs * fac, tol.h_max);
    } else {
      h = hs * std::clamp(0.9 * std::pow(e, -0.25), 0.1, 0.5);
      if (h < tol.h_min) throw NumericalError("flow integration step size underflow");
    }
  }
  out.y = y;
  out.t = t1;
  out.h_next = h;
  return out;
}

}  // namespace ibcsym
