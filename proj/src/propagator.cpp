#include "qsr/propagator.hpp"

#include <cmath>
#include <stdexcept>
#include <unsupported/Eigen/MatrixFunctions>

namespace qsr {

Propagator::Propagator(GklsGenerator gen, ExternalField field)
    : gen_(std::move(gen)), field_(field) {
  if (!field_.canonical())
    throw std::invalid_argument("Propagator: field must be (0,0,beta) with beta > 0");
  Eigen::ComplexEigenSolver<Mat4> es(gen_.matrix4);
  if (es.info() == Eigen::Success) {
    eig_ = es.eigenvalues();
    v_ = es.eigenvectors();
    Eigen::JacobiSVD<Mat4> svd(v_);
    const double smin = svd.singularValues()(3);
    if (smin > 0.0 && svd.singularValues()(0) / smin < 1e6) {
      v_inv_ = v_.inverse();
      use_eig_ = true;
    }
  }
}

Mat4 Propagator::semigroup_matrix(double tau) const {
  if (!use_eig_) return Mat4(tau * gen_.matrix4).exp();
  Eigen::Vector4cd ph = (tau * eig_.array()).exp().matrix();
  return v_ * ph.asDiagonal() * v_inv_;
}

Mat2 Propagator::approx_heisenberg(double t, double g, const Mat2& sigma) const {
  if (!(t >= 0.0)) throw std::invalid_argument("approx_heisenberg: t must be nonnegative");
  if (!(g >= 0.0)) throw std::invalid_argument("approx_heisenberg: g must be nonnegative");
  const Mat2 rotated = free_evolve(t, field_, sigma);
  const double tau = t * g * g;
  if (tau == 0.0) return rotated;
  return reconstruct(Coeffs4(semigroup_matrix(tau) * decompose(rotated)));
}

Trajectory Propagator::bloch_trajectory(const Eigen::Vector2cd& a,
                                        const std::vector<double>& times, double g) const {
  if (std::abs(a.norm() - 1.0) > 1e-9)
    throw std::invalid_argument("bloch_trajectory: spinor must have unit norm");
  for (size_t i = 1; i < times.size(); ++i)
    if (!(times[i] > times[i - 1]))
      throw std::invalid_argument("bloch_trajectory: times must be strictly increasing");
  Trajectory traj;
  traj.times = times;
  traj.bloch.reserve(times.size());
  for (double t : times) {
    Eigen::Vector3d v;
    for (int j = 1; j <= 3; ++j) {
      const std::complex<double> e = (a.adjoint() * (approx_heisenberg(t, g, pauli(j)) * a))(0, 0);
      if (std::abs(e.imag()) > 1e-10)
        throw std::runtime_error("bloch_trajectory: non-real expectation (Hermiticity defect)");
      if (std::abs(e.real()) > 1.0 + 1e-9)
        throw std::runtime_error("bloch_trajectory: expectation outside [-1,1]");
      v(j - 1) = e.real();
    }
    traj.bloch.push_back(v);
  }
  return traj;
}

RelaxationRates relaxation_rates(double g, const DCoefficients& d) {
  if (!(g > 0.0)) throw std::invalid_argument("relaxation_rates: g must be positive");
  const double r1 = d.at(1).real();
  RelaxationRates r;
  r.longitudinal_rate = 2.0 * g * g * r1;
  r.transverse_rate = g * g * r1;
  r.frequency_shift = g * g * (d.at(1).imag() - d.at(-1).imag());
  return r;
}

}  // namespace qsr
