// Cyclic Jacobi eigenvalue iteration in long double. Slow and simple; used
// only to check the library's eigen solver.
#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include <Eigen/Dense>

namespace netpop::testing {

inline std::vector<long double> jacobi_eigenvalues(const Eigen::MatrixXd& m) {
  const int n = static_cast<int>(m.rows());
  std::vector<long double> a(static_cast<std::size_t>(n) * n);
  auto at = [&](int i, int j) -> long double& { return a[static_cast<std::size_t>(i) * n + j]; };
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) at(i, j) = m(i, j);

  for (int sweep = 0; sweep < 100; ++sweep) {
    long double off = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) off += at(i, j) * at(i, j);
    if (off < 1e-40L) break;
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        if (at(p, q) == 0) continue;
        const long double theta = (at(q, q) - at(p, p)) / (2 * at(p, q));
        const long double t = (theta >= 0 ? 1 : -1) / (std::fabs(theta) + std::sqrt(theta * theta + 1));
        const long double c = 1 / std::sqrt(t * t + 1), s = t * c;
        for (int k = 0; k < n; ++k) {
          const long double akp = at(k, p), akq = at(k, q);
          at(k, p) = c * akp - s * akq;
          at(k, q) = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          const long double apk = at(p, k), aqk = at(q, k);
          at(p, k) = c * apk - s * aqk;
          at(q, k) = s * apk + c * aqk;
        }
      }
    }
  }
  std::vector<long double> ev(n);
  for (int i = 0; i < n; ++i) ev[i] = at(i, i);
  std::sort(ev.begin(), ev.end());
  return ev;
}

inline Eigen::MatrixXd random_symmetric(int n, unsigned seed) {
  Eigen::MatrixXd m(n, n);
  unsigned long long x = seed * 0x9E3779B97F4A7C15ULL + 1;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i <= j; ++i) {
      x = x * 6364136223846793005ULL + 1442695040888963407ULL;
      const double u = static_cast<double>(x >> 11) * 0x1.0p-53 * 2.0 - 1.0;
      m(i, j) = m(j, i) = u;
    }
  return m;
}

}  // namespace netpop::testing
