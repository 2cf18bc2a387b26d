#pragma once

// Embedded Dormand-Prince 5(4) pair with Shampine's 4th order continuous
// extension. Autonomous systems only; time always runs forward (callers
// integrate a negated field for backward time).

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <string>

#include "lienard/errors.hpp"

namespace lienard::ode {

template <std::size_t N>
using State = std::array<double, N>;

struct StepControl {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  double max_step = 0.5;
};

namespace dp {
inline constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
inline constexpr double a21 = 1.0 / 5;
inline constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
inline constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
inline constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
inline constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                        a65 = -5103.0 / 18656;
inline constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784,
                        a76 = 11.0 / 84;
inline constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                        e6 = 22.0 / 525, e7 = -1.0 / 40;
inline constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                        d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                        d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;
}  // namespace dp

/// Adaptive stepper. `Rhs` is callable as rhs(const State<N>& y, State<N>& dy).
template <std::size_t N, class Rhs>
class DormandPrince {
 public:
  DormandPrince(Rhs rhs, StepControl control) : rhs_(std::move(rhs)), ctl_(control) {}

  void start(double t0, const State<N>& y0) {
    t_ = t_prev_ = t0;
    y_ = y_prev_ = y0;
    rhs_(y_, k1_);
    h_ = initial_step();
    steps_ = 0;
  }

  /// One accepted step, never passing `t_limit`.
  void step(double t_limit) {
    bool rejected = false;
    for (;;) {
      double h = std::min(h_, ctl_.max_step);
      bool clamped = false;
      if (t_ + h >= t_limit) {
        h = t_limit - t_;
        clamped = true;
      }
      const double min_h = 1e-14 * std::max(1.0, std::abs(t_));
      if (!(h > min_h) && !(clamped && h > 0.0)) {
        throw StepFailure("step size underflow at t=" + std::to_string(t_) + " (last good state retained)");
      }
      State<N> y_new{};
      State<N> err{};
      stages(y_, k1_, h, y_new, &err, k_);
      double norm = 0.0;
      for (std::size_t i = 0; i < N; ++i) {
        const double sc = ctl_.abs_tol + ctl_.rel_tol * std::max(std::abs(y_[i]), std::abs(y_new[i]));
        const double r = err[i] / sc;
        norm += r * r;
      }
      norm = std::sqrt(norm / static_cast<double>(N));
      if (!std::isfinite(norm)) {
        h_ = 0.1 * h;
        rejected = true;
        continue;
      }
      if (norm <= 1.0) {
        t_prev_ = t_;
        y_prev_ = y_;
        k1_prev_ = k1_;
        h_last_ = h;
        k_last_ = k_;
        t_ = clamped ? t_limit : t_ + h;
        y_ = y_new;
        k1_ = k_[6];
        double fac = norm == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(norm, -0.2), 0.2, 5.0);
        if (rejected) fac = std::min(fac, 1.0);
        if (!clamped || h >= h_) h_ = h * fac;
        ++steps_;
        return;
      }
      h_ = h * std::max(0.2, 0.9 * std::pow(norm, -0.2));
      rejected = true;
    }
  }

  double t() const { return t_; }
  double t_prev() const { return t_prev_; }
  const State<N>& y() const { return y_; }
  const State<N>& y_prev() const { return y_prev_; }
  std::size_t steps() const { return steps_; }

  /// Continuous extension over the last accepted step.
  State<N> dense(double t) const {
    const double h = h_last_;
    const double th = h == 0.0 ? 0.0 : (t - t_prev_) / h;
    const double th1 = 1.0 - th;
    State<N> out{};
    for (std::size_t i = 0; i < N; ++i) {
      const double r1 = y_prev_[i];
      const double r2 = y_[i] - y_prev_[i];
      const double r3 = h * k1_prev_[i] - r2;
      const double r4 = r2 - h * k_last_[6][i] - r3;
      const double r5 = h * (dp::d1 * k1_prev_[i] + dp::d3 * k_last_[2][i] + dp::d4 * k_last_[3][i] +
                             dp::d5 * k_last_[4][i] + dp::d6 * k_last_[5][i] + dp::d7 * k_last_[6][i]);
      out[i] = r1 + th * (r2 + th1 * (r3 + th * (r4 + th1 * r5)));
    }
    return out;
  }

  /// A fresh 5th order step from the start of the last step to `t`. More
  /// accurate than dense() and used to polish located events.
  State<N> restep(double t) const {
    State<N> out{};
    std::array<State<N>, 7> k{};
    stages(y_prev_, k1_prev_, t - t_prev_, out, nullptr, k);
    return out;
  }

  void rhs(const State<N>& y, State<N>& dy) const { rhs_(y, dy); }

 private:
  void stages(const State<N>& y0, const State<N>& k1, double h, State<N>& y_new, State<N>* err,
              std::array<State<N>, 7>& k) const {
    using namespace dp;
    k[0] = k1;
    State<N> tmp{};
    for (std::size_t i = 0; i < N; ++i) tmp[i] = y0[i] + h * a21 * k[0][i];
    rhs_(tmp, k[1]);
    for (std::size_t i = 0; i < N; ++i) tmp[i] = y0[i] + h * (a31 * k[0][i] + a32 * k[1][i]);
    rhs_(tmp, k[2]);
    for (std::size_t i = 0; i < N; ++i) tmp[i] = y0[i] + h * (a41 * k[0][i] + a42 * k[1][i] + a43 * k[2][i]);
    rhs_(tmp, k[3]);
    for (std::size_t i = 0; i < N; ++i)
      tmp[i] = y0[i] + h * (a51 * k[0][i] + a52 * k[1][i] + a53 * k[2][i] + a54 * k[3][i]);
    rhs_(tmp, k[4]);
    for (std::size_t i = 0; i < N; ++i)
      tmp[i] = y0[i] + h * (a61 * k[0][i] + a62 * k[1][i] + a63 * k[2][i] + a64 * k[3][i] + a65 * k[4][i]);
    rhs_(tmp, k[5]);
    for (std::size_t i = 0; i < N; ++i)
      y_new[i] = y0[i] + h * (a71 * k[0][i] + a73 * k[2][i] + a74 * k[3][i] + a75 * k[4][i] + a76 * k[5][i]);
    rhs_(y_new, k[6]);
    if (err != nullptr) {
      for (std::size_t i = 0; i < N; ++i) {
        (*err)[i] =
            h * (e1 * k[0][i] + e3 * k[2][i] + e4 * k[3][i] + e5 * k[4][i] + e6 * k[5][i] + e7 * k[6][i]);
      }
    }
  }

  double initial_step() {
    auto scaled_norm = [this](const State<N>& v) {
      double s = 0.0;
      for (std::size_t i = 0; i < N; ++i) {
        const double sc = ctl_.abs_tol + ctl_.rel_tol * std::abs(y_[i]);
        s += (v[i] / sc) * (v[i] / sc);
      }
      return std::sqrt(s / static_cast<double>(N));
    };
    const double d0 = scaled_norm(y_);
    const double d1 = scaled_norm(k1_);
    double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
    h0 = std::min(h0, ctl_.max_step);
    State<N> y1{};
    for (std::size_t i = 0; i < N; ++i) y1[i] = y_[i] + h0 * k1_[i];
    State<N> f1{};
    rhs_(y1, f1);
    State<N> df{};
    for (std::size_t i = 0; i < N; ++i) df[i] = f1[i] - k1_[i];
    const double d2 = scaled_norm(df) / h0;
    const double dm = std::max(d1, d2);
    const double h1 = dm <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / dm, 1.0 / 5.0);
    return std::min({100.0 * h0, h1, ctl_.max_step});
  }

  mutable Rhs rhs_;
  StepControl ctl_;
  double t_ = 0.0;
  double t_prev_ = 0.0;
  double h_ = 0.0;
  double h_last_ = 0.0;
  State<N> y_{};
  State<N> y_prev_{};
  State<N> k1_{};
  State<N> k1_prev_{};
  std::array<State<N>, 7> k_{};
  std::array<State<N>, 7> k_last_{};
  std::size_t steps_ = 0;
};

/// Locates a sign change of `event(y)` inside the last accepted step by
/// bisection on the dense output until |event| < tol, then re-steps to the
/// bracketed time and applies one Newton correction in time.
///   event(y) -> double, event_rate(y, dy) -> d(event)/dt
template <std::size_t N, class Rhs, class Event, class EventRate>
std::pair<double, State<N>> locate_event(const DormandPrince<N, Rhs>& stepper, Event&& event,
                                         EventRate&& event_rate, double tol = 1e-12) {
  double a = stepper.t_prev();
  double b = stepper.t();
  double ga = event(stepper.y_prev());
  double tc = b;
  State<N> yc = stepper.y();
  if (std::abs(event(yc)) >= tol) {
    for (int it = 0; it < 200; ++it) {
      const double m = 0.5 * (a + b);
      const State<N> ym = stepper.dense(m);
      const double gm = event(ym);
      tc = m;
      yc = ym;
      if (std::abs(gm) < tol || b - a <= 1e-16 * std::max(1.0, std::abs(m))) break;
      if ((gm < 0) == (ga < 0)) {
        a = m;
        ga = gm;
      } else {
        b = m;
      }
    }
  }
  if (tc != stepper.t()) yc = stepper.restep(tc);
  State<N> dy{};
  stepper.rhs(yc, dy);
  const double rate = event_rate(yc, dy);
  if (rate != 0.0 && std::isfinite(rate)) {
    const double dt = -event(yc) / rate;
    for (std::size_t i = 0; i < N; ++i) yc[i] += dt * dy[i];
    tc += dt;
  }
  return {tc, yc};
}

}  // namespace lienard::ode
