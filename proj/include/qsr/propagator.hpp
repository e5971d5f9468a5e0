#pragma once

#include <Eigen/Dense>
#include <vector>

#include "qsr/gkls.hpp"
#include "qsr/spin_algebra.hpp"

namespace qsr {

struct Trajectory {
  std::vector<double> times;
  std::vector<Eigen::Vector3d> bloch;
};

struct RelaxationRates {
  double longitudinal_rate = 0.0;
  double transverse_rate = 0.0;
  double frequency_shift = 0.0;
};

// Evaluates e^{t g^2 L} gamma_t sigma with L diagonalized once at construction.
class Propagator {
 public:
  Propagator(GklsGenerator gen, ExternalField field);

  Mat2 approx_heisenberg(double t, double g, const Mat2& sigma) const;
  Trajectory bloch_trajectory(const Eigen::Vector2cd& a, const std::vector<double>& times,
                              double g) const;
  Mat4 semigroup_matrix(double tau) const;

  const GklsGenerator& generator() const { return gen_; }
  const ExternalField& field() const { return field_; }

 private:
  GklsGenerator gen_;
  ExternalField field_;
  Eigen::Vector4cd eig_;
  Mat4 v_, v_inv_;
  bool use_eig_ = false;
};

RelaxationRates relaxation_rates(double g, const DCoefficients& d);

}  // namespace qsr
