#include "qsr/spin_algebra.hpp"

#include <cmath>
#include <stdexcept>

namespace qsr {

namespace {
constexpr std::complex<double> kI{0.0, 1.0};
const double kSqrt2 = std::sqrt(2.0);
}  // namespace

double ExternalField::norm() const { return std::sqrt(b1 * b1 + b2 * b2 + b3 * b3); }

bool ExternalField::zero() const { return b1 == 0.0 && b2 == 0.0 && b3 == 0.0; }

bool ExternalField::canonical() const { return b1 == 0.0 && b2 == 0.0 && b3 > 0.0; }

Mat2 pauli(int j) {
  Mat2 m;
  switch (j) {
    case 1:
      m << 0, 1, 1, 0;
      return m;
    case 2:
      m << 0, -kI, kI, 0;
      return m;
    case 3:
      m << 1, 0, 0, -1;
      return m;
    default:
      throw std::out_of_range("pauli: index must be in {1,2,3}");
  }
}

Mat2 ladder(int m) {
  Mat2 s;
  switch (m) {
    case 1:
      s << 0, kSqrt2, 0, 0;
      return s;
    case 0:
      return pauli(3);
    case -1:
      s << 0, 0, kSqrt2, 0;
      return s;
    default:
      throw std::out_of_range("ladder: index must be in {1,0,-1}");
  }
}

Mat2 h_mag(const ExternalField& field) {
  return field.b1 * pauli(1) + field.b2 * pauli(2) + field.b3 * pauli(3);
}

Mat2 free_evolve(double t, const ExternalField& field, const Mat2& a) {
  if (field.zero()) throw std::invalid_argument("free_evolve: external field must be nonzero");
  const double b = field.norm();
  // e^{it b (n.sigma)} = cos(tb) I + i sin(tb) (n.sigma)
  const Mat2 n_sigma = h_mag(field) / b;
  const Mat2 u = std::cos(t * b) * Mat2::Identity() + kI * std::sin(t * b) * n_sigma;
  return u * a * u.adjoint();
}

Coeffs4 decompose(const Mat2& a) {
  Coeffs4 c;
  c(0) = (a(0, 0) + a(1, 1)) / 2.0;
  c(1) = a(0, 1) / kSqrt2;
  c(2) = (a(0, 0) - a(1, 1)) / 2.0;
  c(3) = a(1, 0) / kSqrt2;
  return c;
}

Mat2 reconstruct(const Coeffs4& c) {
  return c(0) * Mat2::Identity() + c(1) * ladder(1) + c(2) * ladder(0) + c(3) * ladder(-1);
}

}  // namespace qsr
