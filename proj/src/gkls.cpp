#include "qsr/gkls.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unsupported/Eigen/MatrixFunctions>

namespace qsr {

namespace {

Mat2 basis_elem(int k) {
  switch (k) {
    case 0: return Mat2::Identity();
    case 1: return ladder(1);
    case 2: return ladder(0);
    default: return ladder(-1);
  }
}

Mat2 defining_sum(const DCoefficients& d, const Mat2& h_l, const Mat2& a) {
  Mat2 out = Mat2::Zero();
  for (int m : {1, 0, -1}) {
    const double r = d.at(m).real();
    const Mat2 s = ladder(m);
    const Mat2 ss = s * s.adjoint();
    out += r * (s * a * s.adjoint() - 0.5 * (a * ss + ss * a));
  }
  out -= std::complex<double>(0.0, 0.5) * (a * h_l - h_l * a);
  return out;
}

// Eigendecomposition of matrix4 if well-conditioned; else invalid decomposition.
struct EigDecomp {
  Eigen::Vector4cd values;
  Mat4 v, v_inv;
  bool usable = false;
};

EigDecomp decompose4(const Mat4& m) {
  EigDecomp e;
  Eigen::ComplexEigenSolver<Mat4> es(m);
  if (es.info() != Eigen::Success) return e;
  e.values = es.eigenvalues();
  e.v = es.eigenvectors();
  Eigen::JacobiSVD<Mat4> svd(e.v);
  const double smin = svd.singularValues()(3);
  if (smin <= 0.0 || svd.singularValues()(0) / smin > 1e6) return e;
  e.v_inv = e.v.inverse();
  e.usable = true;
  return e;
}

}  // namespace

GklsGenerator build_generator(const DCoefficients& d) {
  for (int m : {1, 0, -1}) {
    const auto z = d.at(m);
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
      throw std::invalid_argument("build_generator: nonfinite coefficient");
  }
  if (d.at(1).real() < 0.0)
    throw std::invalid_argument("build_generator: Re d_1 < 0 (no valid GKLS rate)");
  GklsGenerator g;
  g.d = d;
  g.h_l = Mat2::Zero();
  for (int m : {1, 0, -1}) g.h_l += d.at(m).imag() * ladder(m) * ladder(m).adjoint();
  for (int k = 0; k < 4; ++k)
    g.matrix4.col(k) = decompose(defining_sum(d, g.h_l, basis_elem(k)));
  return g;
}

Mat2 apply(const GklsGenerator& l, const Mat2& a) {
  return reconstruct(l.matrix4 * decompose(a));
}

Eigensystem eigensystem(const GklsGenerator& l) {
  Eigensystem out;
  Eigen::ComplexEigenSolver<Mat4> es(l.matrix4);
  Eigen::Vector4cd vals = es.eigenvalues();
  Mat4 vecs = es.eigenvectors();
  out.defective = es.info() != Eigen::Success;
  if (!out.defective) {
    Eigen::JacobiSVD<Mat4> svd(vecs);
    const double smin = svd.singularValues()(3);
    out.defective = smin <= 0.0 || svd.singularValues()(0) / smin > 1e8;
  }
  std::array<int, 4> order{0, 1, 2, 3};
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (vals(a).real() != vals(b).real()) return vals(a).real() > vals(b).real();
    return vals(a).imag() > vals(b).imag();
  });
  for (int i = 0; i < 4; ++i) {
    Eigen::Vector4cd c = vecs.col(order[i]);
    int top = 0;
    for (int j = 1; j < 4; ++j)
      if (std::abs(c(j)) > std::abs(c(top)) + 1e-12) top = j;
    c /= c(top);
    out.pairs[i] = {vals(order[i]), reconstruct(c)};
  }
  return out;
}

Semigroup semigroup(const GklsGenerator& l, double tau) {
  if (!(tau >= 0.0)) throw std::invalid_argument("semigroup: tau must be nonnegative");
  Semigroup s;
  s.tau = tau;
  const EigDecomp e = decompose4(l.matrix4);
  if (e.usable) {
    Eigen::Vector4cd ph = (tau * e.values.array()).exp().matrix();
    s.matrix4 = e.v * ph.asDiagonal() * e.v_inv;
  } else {
    s.matrix4 = Mat4(tau * l.matrix4).exp();
  }
  return s;
}

Mat2 apply(const Semigroup& s, const Mat2& a) {
  return reconstruct(s.matrix4 * decompose(a));
}

namespace {

Mat2 matrix_unit(int r, int c) {
  Mat2 e = Mat2::Zero();
  e(r, c) = 1.0;
  return e;
}

}  // namespace

Mat4 predual_matrix(const Semigroup& s) {
  // Phi*(rho)[i,j] = tr(rho Phi(E_ji)); columns indexed by rho = E_kl (vec index k+2l).
  std::array<Mat2, 4> heis;  // Phi(E_ji) at slot j+2i
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) heis[j + 2 * i] = qsr::apply(s, matrix_unit(j, i));
  Mat4 p;
  for (int k = 0; k < 2; ++k)
    for (int l = 0; l < 2; ++l)
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
          p(i + 2 * j, k + 2 * l) = heis[j + 2 * i](l, k);
  return p;
}

Mat4 choi_matrix(const Semigroup& s) {
  const Mat4 p = predual_matrix(s);
  Mat4 c;
  for (int k = 0; k < 2; ++k)
    for (int l = 0; l < 2; ++l) {
      Eigen::Vector4cd col = p.col(k + 2 * l);
      Mat2 block;
      block << col(0), col(2), col(1), col(3);
      c.block<2, 2>(2 * k, 2 * l) = block;
    }
  return c;
}

CpReport verify_cp(const Semigroup& s) {
  CpReport rep;
  const Mat4 p = predual_matrix(s);
  for (int k = 0; k < 2; ++k)
    for (int l = 0; l < 2; ++l) {
      const std::complex<double> tr = p(0, k + 2 * l) + p(3, k + 2 * l);
      rep.trace_defect = std::max(rep.trace_defect, std::abs(tr - (k == l ? 1.0 : 0.0)));
    }
  const Mat4 c = choi_matrix(s);
  Eigen::SelfAdjointEigenSolver<Mat4> es(0.5 * (c + c.adjoint()));
  rep.min_choi_eigenvalue = es.eigenvalues()(0);
  rep.unitality_defect = (qsr::apply(s, Mat2::Identity()) - Mat2::Identity()).cwiseAbs().maxCoeff();
  return rep;
}

}  // namespace qsr
