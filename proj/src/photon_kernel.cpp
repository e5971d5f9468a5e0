#include "qsr/photon_kernel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qsr {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr std::complex<double> kI{0.0, 1.0};

double j_val(double lambda, double w) {
  const double s = w / lambda;
  return w * w * w * std::exp(-2.0 * s * s) / (3.0 * kPi * kPi);
}

double tail_val(double lambda, double w) {
  const double a = 2.0 / (lambda * lambda);
  return (w * w / (2.0 * a) + 1.0 / (2.0 * a * a)) * std::exp(-a * w * w) / (3.0 * kPi * kPi);
}

// Upper integration limit: tail mass (damped by `scale`) below 1% of tol.
double omega_top(const BathKernel& k, double floor_at = 0.0, double scale = 1.0) {
  double top = std::max(2.0 * k.cutoff.lambda, floor_at);
  const double target = 0.01 * k.quad.tol;
  for (int it = 0; it < 80; ++it) {
    if (tail_val(k.cutoff.lambda, top) * scale <= target) return top;
    top *= 2.0;
  }
  throw QuadratureError("omega_top: spectral tail does not decay");
}

// P.V. int_0^top J(w)/(pole - w) dw by symmetric excision with radius halving.
double pv_at_pole(const BathKernel& k, double pole, double* radius_out) {
  const double lam = k.cutoff.lambda;
  const double tol = k.quad.tol;
  const double top = omega_top(k, 2.0 * pole, 1.0);
  const double d0 = std::min(0.5 * pole, 0.25 * lam);
  auto f = [&](double w) { return j_val(lam, w) / (pole - w); };
  const auto& gl = gl16();
  const int nl = std::max(4, static_cast<int>(std::ceil((pole - d0) / 0.5)));
  const int nr = std::max(4, static_cast<int>(std::ceil((top - pole - d0) / 0.5)));
  double val = gl.converge(f, 0.0, pole - d0, nl, 0.25 * tol, k.quad.max_nodes, "pv left") +
               gl.converge(f, pole + d0, top, nr, 0.25 * tol, k.quad.max_nodes, "pv right");
  // Inside the excised window, integrate the symmetric pair in pole-distance
  // coordinates; the raw one-sided panels would have to cancel to ~tol out of
  // O(1) magnitudes, which double precision cannot sustain as delta shrinks.
  auto pair = [&](double x) { return (j_val(lam, pole - x) - j_val(lam, pole + x)) / x; };
  double delta = d0;
  for (int it = 0; it < 46; ++it) {
    const double half = 0.5 * delta;
    const double add = gl.integrate(pair, half, delta);
    val += add;
    delta = half;
    if (std::abs(add) < 0.5 * tol) {
      if (radius_out) *radius_out = delta;
      return val;
    }
  }
  throw QuadratureError("pv_at_pole: excision radius failed to stabilize");
}

struct UGrid {
  std::vector<double> t, w;
  std::vector<std::complex<double>> u;
};

UGrid build_ugrid(const BathKernel& k) {
  // u decays like t^-4 on the cutoff's time scale; beyond t_top the Abel
  // integrand is negligible for every epsilon in the schedule below.
  const double t_top = 600.0 / k.cutoff.lambda;
  const int panels = 1200;
  const double h = t_top / panels;
  const auto& gl = gl16();
  UGrid grid;
  grid.t.reserve(static_cast<size_t>(panels) * gl.x.size());
  for (int p = 0; p < panels; ++p) {
    const double mid = (p + 0.5) * h, half = 0.5 * h;
    for (size_t i = 0; i < gl.x.size(); ++i) {
      grid.t.push_back(mid + half * gl.x[i]);
      grid.w.push_back(half * gl.w[i]);
    }
  }
  grid.u.reserve(grid.t.size());
  for (double t : grid.t) grid.u.push_back(u_of_t(k, t));
  return grid;
}

std::complex<double> abel_integral(const UGrid& g, double om, double eps) {
  std::complex<double> acc{};
  for (size_t i = 0; i < g.t.size(); ++i)
    acc += g.w[i] * g.u[i] * std::exp((kI * om - eps) * g.t[i]);
  return acc;
}

std::complex<double> abel_limit(const UGrid& g, double om, AbelDiagnostics* diag) {
  constexpr int n = 6;
  std::array<double, n> eps;
  std::array<std::complex<double>, n> tab;
  for (int j = 0; j < n; ++j) {
    eps[j] = 0.4 / (1 << j);
    tab[j] = abel_integral(g, om, eps[j]);
  }
  if (diag) {
    diag->epsilons.assign(eps.begin(), eps.end());
    diag->integrals.assign(tab.begin(), tab.end());
  }
  // Neville extrapolation of the polynomial through (eps_j, I_j) to eps = 0.
  std::complex<double> prev{};
  for (int lvl = 1; lvl < n; ++lvl) {
    prev = tab[0];
    for (int i = 0; i + lvl < n; ++i)
      tab[i] = (eps[i + lvl] * tab[i] - eps[i] * tab[i + 1]) / (eps[i + lvl] - eps[i]);
  }
  if (diag) {
    diag->value = tab[0];
    diag->residual = std::abs(tab[0] - prev);
  }
  return tab[0];
}

}  // namespace

void CutoffSpec::validate() const {
  if (kind != "gaussian") throw std::invalid_argument("invalid cutoff: unknown kind '" + kind + "'");
  if (!(lambda > 0.0) || !std::isfinite(lambda))
    throw std::invalid_argument("invalid cutoff: lambda must be positive");
}

void BathKernel::validate() const {
  cutoff.validate();
  if (!(beta > 0.0) || !std::isfinite(beta)) throw std::invalid_argument("beta must be positive");
  if (!(quad.tol > 0.0)) throw std::invalid_argument("quadrature tolerance must be positive");
}

double chi(const CutoffSpec& cutoff, double r) {
  cutoff.validate();
  if (r < 0.0) throw std::invalid_argument("chi: r must be nonnegative");
  const double s = r / cutoff.lambda;
  return std::exp(-s * s);
}

double radial_density(const CutoffSpec& cutoff, double knorm) {
  const double c = chi(cutoff, knorm);
  return (2.0 / 3.0) * c * c * knorm / std::pow(2.0 * kPi, 3);
}

double spectral_density(const BathKernel& k, double omega) {
  k.validate();
  if (omega < 0.0) throw std::invalid_argument("spectral_density: omega must be nonnegative");
  return j_val(k.cutoff.lambda, omega);
}

double spectral_tail(const BathKernel& k, double omega) {
  k.validate();
  if (omega < 0.0) throw std::invalid_argument("spectral_tail: omega must be nonnegative");
  return tail_val(k.cutoff.lambda, omega);
}

std::complex<double> u_of_t(const BathKernel& k, double t) {
  k.validate();
  const double top = omega_top(k);
  const double lam = k.cutoff.lambda;
  auto f = [&](double w) { return j_val(lam, w) * std::exp(-kI * w * t); };
  const int n0 = static_cast<int>(std::ceil(top * (1.0 + std::abs(t)) / 8.0));
  return gl16().converge(f, 0.0, top, n0, k.quad.tol, k.quad.max_nodes, "u_of_t");
}

int DCoefficients::slot(int m) {
  switch (m) {
    case 1: return 0;
    case 0: return 1;
    case -1: return 2;
  }
  throw std::out_of_range("DCoefficients: m must be in {1,0,-1}");
}

std::complex<double> d_coefficient(const BathKernel& k, int m, double* pv_radius) {
  k.validate();
  DCoefficients::slot(m);  // range check
  if (pv_radius) *pv_radius = 0.0;
  const double lam = k.cutoff.lambda;
  double re = 0.0, im = 0.0;
  if (m == 1) {
    re = kPi * j_val(lam, 2.0 * k.beta);
    im = pv_at_pole(k, 2.0 * k.beta, pv_radius);
  } else if (m == 0) {
    const double top = omega_top(k);
    auto f = [&](double w) { return w > 0.0 ? -j_val(lam, w) / w : 0.0; };
    im = gl16().converge(f, 0.0, top, static_cast<int>(std::ceil(top)), k.quad.tol,
                         k.quad.max_nodes, "d_coefficient m=0");
  } else {
    const double top = omega_top(k);
    auto f = [&](double w) { return -j_val(lam, w) / (2.0 * k.beta + w); };
    im = gl16().converge(f, 0.0, top, static_cast<int>(std::ceil(top)), k.quad.tol,
                         k.quad.max_nodes, "d_coefficient m=-1");
  }
  return {re, im};
}

std::complex<double> d_timeside(const BathKernel& k, int m, AbelDiagnostics* diag) {
  k.validate();
  DCoefficients::slot(m);
  const UGrid grid = build_ugrid(k);
  return abel_limit(grid, 2.0 * m * k.beta, diag);
}

DCoefficients d_coefficients(const BathKernel& k, bool with_timeside) {
  k.validate();
  DCoefficients out;
  for (int m : {1, 0, -1}) {
    const int s = DCoefficients::slot(m);
    out.freq[s] = d_coefficient(k, m, &out.pv_radius[s]);
  }
  if (with_timeside) {
    const UGrid grid = build_ugrid(k);
    for (int m : {1, 0, -1}) abel_limit(grid, 2.0 * m * k.beta, &out.timeside[DCoefficients::slot(m)]);
    out.has_timeside = true;
  }
  return out;
}

}  // namespace qsr
