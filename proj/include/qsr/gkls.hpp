#pragma once

#include <Eigen/Dense>
#include <array>
#include <complex>

#include "qsr/photon_kernel.hpp"
#include "qsr/spin_algebra.hpp"

namespace qsr {

using Mat4 = Eigen::Matrix4cd;

// L(A) = sum_m Re(d_m) [s(m) A s(m)+ - (1/2){A, s(m)s(m)+}] - (i/2)[A, H_L],
// H_L = sum_m Im(d_m) s(m)s(m)+, stored in the ladder basis {I, s(1), s(0), s(-1)}.
struct GklsGenerator {
  Mat4 matrix4;
  DCoefficients d;
  Mat2 h_l;
};

struct EigenPair {
  std::complex<double> value;
  Mat2 vector;
};

struct Eigensystem {
  std::array<EigenPair, 4> pairs;
  bool defective = false;
};

struct Semigroup {
  double tau = 0.0;
  Mat4 matrix4;
};

struct CpReport {
  double min_choi_eigenvalue = 0.0;
  double trace_defect = 0.0;
  double unitality_defect = 0.0;
  bool pass(double tol = 1e-10) const {
    return min_choi_eigenvalue >= -tol && trace_defect <= tol && unitality_defect <= tol;
  }
};

GklsGenerator build_generator(const DCoefficients& d);
Mat2 apply(const GklsGenerator& l, const Mat2& a);
Eigensystem eigensystem(const GklsGenerator& l);
Semigroup semigroup(const GklsGenerator& l, double tau);
Mat2 apply(const Semigroup& s, const Mat2& a);
// Schrodinger-picture dual as a matrix on vec(rho), column-major 2x2.
Mat4 predual_matrix(const Semigroup& s);
Mat4 choi_matrix(const Semigroup& s);
CpReport verify_cp(const Semigroup& s);

}  // namespace qsr
