#pragma once

#include <algorithm>
#include <cmath>
#include <string>

#include "focksynth/errors.hpp"

namespace focksynth {

struct IntegratorOptions {
  double rtol = 1e-9;
  double atol = 1e-9;
  /// Upper bound on the step; <= 0 means unbounded.
  double max_step = 0.0;
  /// Steps below this (ns) signal a stiff or ill-posed problem.
  double min_step = 1e-13;
  long max_steps = 50'000'000;
};

struct IntegrationStats {
  long accepted = 0;
  long rejected = 0;
};

/// Dormand-Prince 5(4) with FSAL and an elementwise mixed error norm.
/// `f(t, y, dy)` writes dy/dt into dy. State is any Eigen dense type.
template <class State, class Rhs>
IntegrationStats integrate_dp45(Rhs&& f, double t0, double t1, State& y, const IntegratorOptions& opt) {
  IntegrationStats stats;
  if (t1 <= t0) return stats;

  constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  constexpr double a21 = 1.0 / 5;
  constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                   a65 = -5103.0 / 18656;
  constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  // b - b_hat
  constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                   e6 = 22.0 / 525, e7 = -1.0 / 40;

  State k1, k2, k3, k4, k5, k6, k7, ytmp, ynew, err;
  k1 = y;
  f(t0, y, k1);

  double t = t0;
  double hmax = opt.max_step > 0.0 ? opt.max_step : (t1 - t0);
  double h = std::min(hmax, t1 - t0);
  {
    // Rough initial guess from the derivative scale.
    double ynorm = y.cwiseAbs().maxCoeff(), dnorm = k1.cwiseAbs().maxCoeff();
    if (dnorm > 0.0) h = std::min(h, 0.1 * std::max(ynorm, opt.atol) / dnorm);
  }

  while (t < t1) {
    if (stats.accepted + stats.rejected > opt.max_steps) throw StepSizeUnderflow("integrator exceeded max_steps");
    bool last = false;
    if (t + h >= t1) {
      h = t1 - t;
      last = true;
    }
    if (h < opt.min_step && !last) throw StepSizeUnderflow("step size fell below " + std::to_string(opt.min_step));

    ytmp = y + h * (a21 * k1);
    f(t + c2 * h, ytmp, k2);
    ytmp = y + h * (a31 * k1 + a32 * k2);
    f(t + c3 * h, ytmp, k3);
    ytmp = y + h * (a41 * k1 + a42 * k2 + a43 * k3);
    f(t + c4 * h, ytmp, k4);
    ytmp = y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
    f(t + c5 * h, ytmp, k5);
    ytmp = y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
    f(t + h, ytmp, k6);
    ynew = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    f(t + h, ynew, k7);
    err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

    // Squared magnitudes avoid a hypot per element.
    double en = std::sqrt((err.array().abs2() /
                           (opt.atol + opt.rtol * y.array().abs2().max(ynew.array().abs2()).sqrt()).square())
                              .maxCoeff());
    if (!std::isfinite(en)) throw StepSizeUnderflow("non-finite error estimate");

    if (en <= 1.0) {
      t = last ? t1 : t + h;
      y.swap(ynew);
      k1.swap(k7);
      ++stats.accepted;
      double fac = en == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(en, -0.2), 0.2, 5.0);
      h = std::min(hmax, h * fac);
    } else {
      ++stats.rejected;
      h *= std::clamp(0.9 * std::pow(en, -0.2), 0.1, 1.0);
      if (h < opt.min_step) throw StepSizeUnderflow("step size fell below " + std::to_string(opt.min_step));
    }
  }
  return stats;
}

}  // namespace focksynth
