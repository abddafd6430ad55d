// Offline TW1 oracle: integrates the Hastings-McLeod solution of Painleve II
// backwards from a point deep in the right tail, where q(s) ~ Ai(s).
//
//   q'' = s q + 2 q^3
//   F1(s) = exp(-1/2 * [ int_s^inf q(x) dx + int_s^inf (x - s) q(x)^2 dx ])
//
// Auxiliary quantities carried along with (q, q'):
//   I1(s) = int_s^inf q,   J(s) = int_s^inf q^2,   I2(s) = int_s^inf (x-s) q^2
// with I1' = -q, J' = -q^2, I2' = -J.
//
// Everything runs in long double with a fixed-step classical RK4. This code
// is used to produce data/tw1_table.txt and by the tests that check that
// table; the library itself never links against it.
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/special_functions/airy.hpp>

namespace netpop::oracle {

class PainleveTw1 {
 public:
  using Real = long double;

  explicit PainleveTw1(Real start = 10.0L, Real step = 1.0e-4L)
      : start_(start), step_(step) {}

  /// F1 at each requested point. Points may be in any order; all must be
  /// below the starting abscissa.
  std::vector<Real> cdf(const std::vector<Real>& points) const {
    std::vector<std::size_t> order(points.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return points[a] > points[b]; });

    std::vector<Real> out(points.size());
    State y = initial_state();
    Real s = start_;
    for (std::size_t idx : order) {
      const Real target = points[idx];
      if (target > start_) throw std::domain_error("point above oracle start");
      // March in whole steps, then land exactly on the target.
      const auto whole = static_cast<long long>(std::floor((s - target) / step_));
      for (long long k = 0; k < whole; ++k) {
        y = rk4(y, s, -step_);
        s -= step_;
      }
      const Real rest = s - target;
      if (rest > 0) {
        y = rk4(y, s, -rest);
        s = target;
      }
      out[idx] = std::exp(-0.5L * (y[2] + y[4]));
    }
    return out;
  }

  Real cdf(Real s) const { return cdf(std::vector<Real>{s}).front(); }

 private:
  // q, q', I1, J, I2
  using State = std::array<Real, 5>;

  State initial_state() const {
    using boost::math::airy_ai;
    using boost::math::airy_ai_prime;
    const Real s0 = start_;
    boost::math::quadrature::exp_sinh<Real> integrator;
    auto ai = [](Real x) { return airy_ai(x); };
    const Real i1 = integrator.integrate([&](Real t) { return ai(s0 + t); });
    const Real j = integrator.integrate([&](Real t) {
      const Real a = ai(s0 + t);
      return a * a;
    });
    const Real i2 = integrator.integrate([&](Real t) {
      const Real a = ai(s0 + t);
      return t * a * a;
    });
    return {airy_ai(s0), airy_ai_prime(s0), i1, j, i2};
  }

  static State rhs(const State& y, Real s) {
    const Real q = y[0];
    return {y[1], s * q + 2 * q * q * q, -q, -q * q, -y[3]};
  }

  static State axpy(const State& y, Real a, const State& k) {
    State r;
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = y[i] + a * k[i];
    return r;
  }

  static State rk4(const State& y, Real s, Real h) {
    const State k1 = rhs(y, s);
    const State k2 = rhs(axpy(y, h / 2, k1), s + h / 2);
    const State k3 = rhs(axpy(y, h / 2, k2), s + h / 2);
    const State k4 = rhs(axpy(y, h, k3), s + h);
    State r;
    for (std::size_t i = 0; i < r.size(); ++i)
      r[i] = y[i] + h / 6 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
    return r;
  }

  Real start_;
  Real step_;
};

}  // namespace netpop::oracle
