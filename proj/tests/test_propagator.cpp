#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "qsr/propagator.hpp"

using namespace qsr;
using std::complex;

namespace {

const complex<double> I{0.0, 1.0};
const ExternalField kField{0.0, 0.0, 1.0};

double mdist(const Mat2& a, const Mat2& b) { return (a - b).cwiseAbs().maxCoeff(); }

Propagator default_propagator() {
  return Propagator(build_generator(d_coefficients(BathKernel{})), kField);
}

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) out[i] = a + (b - a) * i / (n - 1);
  return out;
}

}  // namespace

TEST_SUITE("propagator") {

TEST_CASE("construction requires the canonical field axis") {
  GklsGenerator l = build_generator(d_coefficients(BathKernel{}));
  CHECK_THROWS_AS(Propagator(l, ExternalField{1.0, 0.0, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(Propagator(l, ExternalField{0.0, 0.0, -1.0}), std::invalid_argument);
  CHECK_THROWS_AS(Propagator(l, ExternalField{0.0, 0.0, 0.0}), std::invalid_argument);
}

TEST_CASE("g = 0 reduces exactly to the free rotation") {
  Propagator p = default_propagator();
  for (double t : {0.0, 0.4, 2.0, 9.3}) {
    for (int m : {1, 0, -1}) {
      Mat2 expect = std::exp(2.0 * I * double(m) * t) * ladder(m);
      CHECK(mdist(p.approx_heisenberg(t, 0.0, ladder(m)), expect) < 1e-12);
    }
  }
}

TEST_CASE("identity is fixed for all (t, g)") {
  Propagator p = default_propagator();
  for (double t : {0.0, 1.0, 20.0})
    for (double g : {0.0, 0.1, 0.5})
      CHECK(mdist(p.approx_heisenberg(t, g, Mat2::Identity()), Mat2::Identity()) < 1e-12);
}

TEST_CASE("longitudinal closed form") {
  Propagator p = default_propagator();
  const double r1 = p.generator().d.at(1).real();
  for (double t : {0.5, 3.0, 12.0}) {
    for (double g : {0.05, 0.3}) {
      const double decay = std::exp(-2.0 * t * g * g * r1);
      Mat2 expect = decay * ladder(0) + (decay - 1.0) * Mat2::Identity();
      CHECK(mdist(p.approx_heisenberg(t, g, ladder(0)), expect) < 1e-12);
    }
  }
}

TEST_CASE("t = 0 returns sigma unchanged") {
  Propagator p = default_propagator();
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Mat2 sigma;
  sigma << complex<double>(u(rng), u(rng)), complex<double>(u(rng), u(rng)),
      complex<double>(u(rng), u(rng)), complex<double>(u(rng), u(rng));
  CHECK(mdist(p.approx_heisenberg(0.0, 0.7, sigma), sigma) < 1e-14);
}

TEST_CASE("domain validation") {
  Propagator p = default_propagator();
  CHECK_THROWS_AS(p.approx_heisenberg(-1.0, 0.1, pauli(3)), std::invalid_argument);
  CHECK_THROWS_AS(p.approx_heisenberg(1.0, -0.1, pauli(3)), std::invalid_argument);
}

TEST_CASE("Hermitian inputs stay Hermitian") {
  Propagator p = default_propagator();
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 10; ++trial) {
    Mat2 a;
    a << u(rng), complex<double>(u(rng), u(rng)), 0.0, u(rng);
    Mat2 h = a + a.adjoint();
    Mat2 out = p.approx_heisenberg(1.7, 0.2, h);
    CHECK(mdist(out, out.adjoint()) < 1e-12);
  }
}

TEST_CASE("quadratic coupling consistency: error against free dynamics scales as g^2") {
  Propagator p = default_propagator();
  auto sup_err = [&](double g) {
    double worst = 0.0;
    for (double t : linspace(0.0, 10.0, 41)) {
      Mat2 diff = p.approx_heisenberg(t, g, pauli(1)) -
                  free_evolve(t, kField, pauli(1));
      worst = std::max(worst, diff.cwiseAbs().maxCoeff());
    }
    return worst;
  };
  const double e2 = sup_err(1e-2), e3 = sup_err(1e-3);
  CHECK(e2 / e3 == doctest::Approx(100.0).epsilon(0.05));
  CHECK(e3 < 1e-4);
}

TEST_CASE("spin-up Bloch trajectory follows the exact longitudinal relaxation") {
  Propagator p = default_propagator();
  const double r1 = p.generator().d.at(1).real();
  const double g = 0.2;
  auto times = linspace(0.0, 30.0, 61);
  Trajectory traj = p.bloch_trajectory(Eigen::Vector2cd(1.0, 0.0), times, g);
  REQUIRE(traj.bloch.size() == times.size());
  for (size_t i = 0; i < times.size(); ++i) {
    const double expect = 2.0 * std::exp(-2.0 * times[i] * g * g * r1) - 1.0;
    CHECK(traj.bloch[i](2) == doctest::Approx(expect).epsilon(1e-10));
    CHECK(std::abs(traj.bloch[i](0)) < 1e-12);
    CHECK(std::abs(traj.bloch[i](1)) < 1e-12);
  }
  CHECK(traj.bloch.back()(2) < -0.4);
}

TEST_CASE("free transverse trajectory traces the Larmor circle") {
  Propagator p = default_propagator();
  const double inv = 1.0 / std::sqrt(2.0);
  auto times = linspace(0.0, 6.0, 121);
  Trajectory traj = p.bloch_trajectory(Eigen::Vector2cd(inv, inv), times, 0.0);
  for (size_t i = 0; i < times.size(); ++i) {
    const double sx = traj.bloch[i](0), sy = traj.bloch[i](1);
    CHECK(sx * sx + sy * sy == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(sx == doctest::Approx(std::cos(2.0 * times[i])).epsilon(1e-9));
  }
}

TEST_CASE("damped trajectories stay in the Bloch ball and approach the ground state") {
  Propagator p = default_propagator();
  auto times = linspace(0.0, 20.0, 81);
  Trajectory traj =
      p.bloch_trajectory(Eigen::Vector2cd(0.6, complex<double>(0.48, 0.64)), times, 0.25);
  const Eigen::Vector3d fixed_point(0.0, 0.0, -1.0);
  double prev = 1e300;
  for (const auto& v : traj.bloch) {
    CHECK(v.norm() <= 1.0 + 1e-9);
    const double dist = (v - fixed_point).norm();
    CHECK(dist <= prev + 1e-9);
    prev = dist;
  }
}

TEST_CASE("trajectory input validation") {
  Propagator p = default_propagator();
  CHECK_THROWS_AS(p.bloch_trajectory(Eigen::Vector2cd(1.0, 1.0), {0.0, 1.0}, 0.1),
                  std::invalid_argument);
  CHECK_THROWS_AS(p.bloch_trajectory(Eigen::Vector2cd(1.0, 0.0), {0.0, 2.0, 1.0}, 0.1),
                  std::invalid_argument);
}

TEST_CASE("relaxation rates: closed forms, T1/T2 structure, quartic coupling scaling") {
  const DCoefficients d = d_coefficients(BathKernel{});
  RelaxationRates r = relaxation_rates(0.1, d);
  CHECK(r.longitudinal_rate == doctest::Approx(2.0 * 0.01 * d.at(1).real()).epsilon(1e-14));
  CHECK(r.transverse_rate == doctest::Approx(0.01 * d.at(1).real()).epsilon(1e-14));
  CHECK(r.longitudinal_rate / r.transverse_rate == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(r.frequency_shift ==
        doctest::Approx(0.01 * (d.at(1).imag() - d.at(-1).imag())).epsilon(1e-12));
  CHECK(r.frequency_shift < 0.0);
  RelaxationRates r4 = relaxation_rates(0.4, d);
  CHECK(r4.longitudinal_rate == doctest::Approx(16.0 * r.longitudinal_rate).epsilon(1e-13));
  CHECK_THROWS_AS(relaxation_rates(0.0, d), std::invalid_argument);
}

}  // TEST_SUITE
