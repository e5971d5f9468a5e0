#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace qsr {

struct QuadratureError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Gauss-Legendre nodes/weights on [-1,1], computed by Newton iteration on P_n.
struct GaussLegendre {
  std::vector<double> x, w;
  explicit GaussLegendre(int n);

  template <class F>
  auto integrate(F&& f, double a, double b) const {
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    auto acc = decltype(f(mid)){};
    for (size_t i = 0; i < x.size(); ++i) acc += w[i] * f(mid + half * x[i]);
    return half * acc;
  }

  template <class F>
  auto composite(F&& f, double a, double b, int panels) const {
    const double h = (b - a) / panels;
    auto acc = decltype(f(a)){};
    for (int p = 0; p < panels; ++p) acc += integrate(f, a + p * h, a + (p + 1) * h);
    return acc;
  }

  // Panel-doubling until successive values differ by <= tol (absolute).
  template <class F>
  auto converge(F&& f, double a, double b, int panels0, double tol, long max_nodes,
                const char* what) const {
    if (b <= a) return decltype(f(a)){};
    int n = std::max(1, panels0);
    auto prev = composite(f, a, b, n);
    for (n *= 2;; n *= 2) {
      if (static_cast<long>(x.size()) * n > max_nodes)
        throw QuadratureError(std::string(what) + ": node budget exhausted");
      auto cur = composite(f, a, b, n);
      if (std::abs(cur - prev) <= tol) return cur;
      prev = cur;
    }
  }
};

const GaussLegendre& gl16();

}  // namespace qsr
