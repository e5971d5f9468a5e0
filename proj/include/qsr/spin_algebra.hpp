#pragma once

#include <Eigen/Dense>
#include <complex>

namespace qsr {

using Mat2 = Eigen::Matrix2cd;
using SpinObservable = Mat2;
// Ladder-basis coefficients (c_I, c_+, c_0, c_-) of A = c_I I + c_+ s(1) + c_0 s(0) + c_- s(-1).
using Coeffs4 = Eigen::Vector4cd;

struct ExternalField {
  double b1 = 0.0, b2 = 0.0, b3 = 0.0;

  double norm() const;
  bool zero() const;
  // (0, 0, beta) with beta > 0: the axis all generator-level operations assume.
  bool canonical() const;
};

Mat2 pauli(int j);   // j in {1,2,3}
Mat2 ladder(int m);  // m in {1,0,-1}

Mat2 h_mag(const ExternalField& field);

// gamma_t A = e^{it H_mag} A e^{-it H_mag}, exact 2x2 exponentiation.
Mat2 free_evolve(double t, const ExternalField& field, const Mat2& a);

Coeffs4 decompose(const Mat2& a);
Mat2 reconstruct(const Coeffs4& c);

}  // namespace qsr
