#pragma once

#include <array>
#include <complex>
#include <string>
#include <vector>

#include "qsr/quadrature.hpp"

namespace qsr {

struct CutoffSpec {
  std::string kind = "gaussian";
  double lambda = 4.0;
  void validate() const;
};

struct QuadratureSettings {
  double tol = 1e-9;          // absolute, per integral
  long max_nodes = 1 << 22;   // node budget, per integral
};

struct BathKernel {
  CutoffSpec cutoff;
  double beta = 1.0;
  QuadratureSettings quad;
  void validate() const;
};

double chi(const CutoffSpec& cutoff, double r);
// F(k) of the 3-D correlation integral, as a function of |k|.
double radial_density(const CutoffSpec& cutoff, double knorm);
// J(w) = w^3 chi(w)^2 / (3 pi^2), so that u(t) = int_0^inf J(w) e^{-iwt} dw.
double spectral_density(const BathKernel& k, double omega);
// Closed-form Gaussian tail mass int_omega^inf J.
double spectral_tail(const BathKernel& k, double omega);
std::complex<double> u_of_t(const BathKernel& k, double t);

struct AbelDiagnostics {
  std::vector<double> epsilons;
  std::vector<std::complex<double>> integrals;  // regularized values, one per epsilon
  std::complex<double> value;                   // extrapolated to epsilon -> 0
  double residual = 0.0;                        // magnitude of the last extrapolation step
};

struct DCoefficients {
  std::array<std::complex<double>, 3> freq{};     // frequency-side d_m, order m = 1, 0, -1
  std::array<double, 3> pv_radius{};              // final excision radius (0: no pole)
  std::array<AbelDiagnostics, 3> timeside{};      // Abel-limit oracle, when computed
  bool has_timeside = false;

  static int slot(int m);
  std::complex<double> at(int m) const { return freq[slot(m)]; }
};

// Frequency-side route: Re d_m = pi J(2m beta) (m=1; 0 otherwise),
// Im d_m = P.V. int_0^inf J(w)/(2m beta - w) dw.
std::complex<double> d_coefficient(const BathKernel& k, int m, double* pv_radius = nullptr);
// Time-side Abel oracle: lim_{eps->0+} int_0^inf u(t) e^{(2im beta - eps) t} dt.
std::complex<double> d_timeside(const BathKernel& k, int m, AbelDiagnostics* diag = nullptr);
DCoefficients d_coefficients(const BathKernel& k, bool with_timeside = false);

}  // namespace qsr
