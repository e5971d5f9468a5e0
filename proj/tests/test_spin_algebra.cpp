#include <doctest.h>

#include <complex>
#include <random>

#include "qsr/spin_algebra.hpp"

using namespace qsr;
using std::complex;

namespace {

const complex<double> I{0.0, 1.0};

double mdist(const Mat2& a, const Mat2& b) { return (a - b).cwiseAbs().maxCoeff(); }

Mat2 random_mat2(std::mt19937& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Mat2 m;
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) m(r, c) = complex<double>(u(rng), u(rng));
  return m;
}

}  // namespace

TEST_SUITE("spin_algebra") {

TEST_CASE("pauli matrices have the standard entries") {
  Mat2 s1 = pauli(1), s2 = pauli(2), s3 = pauli(3);
  CHECK(s1(0, 1) == complex<double>(1, 0));
  CHECK(s1(1, 0) == complex<double>(1, 0));
  CHECK(s1(0, 0) == complex<double>(0, 0));
  CHECK(s2(0, 1) == complex<double>(0, -1));
  CHECK(s2(1, 0) == complex<double>(0, 1));
  CHECK(s3(0, 0) == complex<double>(1, 0));
  CHECK(s3(1, 1) == complex<double>(-1, 0));
  CHECK_THROWS_AS(pauli(0), std::out_of_range);
  CHECK_THROWS_AS(pauli(4), std::out_of_range);
}

TEST_CASE("pauli algebra: involutions and sigma1 sigma2 = i sigma3") {
  for (int j = 1; j <= 3; ++j) {
    CHECK(mdist(pauli(j) * pauli(j), Mat2::Identity()) < 1e-15);
    CHECK(mdist(pauli(j), pauli(j).adjoint()) < 1e-15);
  }
  CHECK(mdist(pauli(1) * pauli(2), I * pauli(3)) < 1e-15);
  CHECK(mdist(pauli(2) * pauli(3), I * pauli(1)) < 1e-15);
  CHECK(mdist(pauli(3) * pauli(1), I * pauli(2)) < 1e-15);
}

TEST_CASE("ladder operators: definition and adjoints") {
  const double s2 = std::sqrt(2.0);
  CHECK(mdist(ladder(1), (pauli(1) + I * pauli(2)) / s2) < 1e-15);
  CHECK(mdist(ladder(-1), (pauli(1) - I * pauli(2)) / s2) < 1e-15);
  CHECK(mdist(ladder(0), pauli(3)) < 1e-15);
  for (int m : {1, 0, -1}) CHECK(mdist(ladder(m).adjoint(), ladder(-m)) < 1e-15);
  CHECK_THROWS_AS(ladder(2), std::out_of_range);
  CHECK_THROWS_AS(ladder(-2), std::out_of_range);
}

TEST_CASE("ladder multiplication table") {
  Mat2 id = Mat2::Identity();
  CHECK(mdist(ladder(1) * ladder(-1), id + ladder(0)) < 1e-15);
  CHECK(mdist(ladder(-1) * ladder(1), id - ladder(0)) < 1e-15);
  CHECK(mdist(ladder(0) * ladder(1), ladder(1)) < 1e-15);
  CHECK(mdist(ladder(0) * ladder(-1), -ladder(-1)) < 1e-15);
  CHECK(mdist(ladder(1) * ladder(0), -ladder(1)) < 1e-15);
  CHECK(mdist(ladder(-1) * ladder(0), ladder(-1)) < 1e-15);
  CHECK(mdist(ladder(1) * ladder(1), Mat2::Zero()) < 1e-15);
  CHECK(mdist(ladder(-1) * ladder(-1), Mat2::Zero()) < 1e-15);
  CHECK(mdist(ladder(0) * ladder(0), id) < 1e-15);
}

TEST_CASE("h_mag assembles the field Hamiltonian") {
  ExternalField f{0.0, 0.0, 2.5};
  CHECK(mdist(h_mag(f), 2.5 * pauli(3)) < 1e-15);
  CHECK(f.canonical());
  CHECK(f.norm() == doctest::Approx(2.5));

  ExternalField g{1.0, 1.0, 0.0};
  Eigen::SelfAdjointEigenSolver<Mat2> es(h_mag(g));
  CHECK(es.eigenvalues()(0) == doctest::Approx(-std::sqrt(2.0)));
  CHECK(es.eigenvalues()(1) == doctest::Approx(std::sqrt(2.0)));
  CHECK_FALSE(g.canonical());
  CHECK_FALSE(g.zero());
}

TEST_CASE("free evolution multiplies ladder operators by phases") {
  const double beta = 1.3;
  ExternalField f{0.0, 0.0, beta};
  for (double t : {0.0, 0.37, 1.0, 4.9}) {
    for (int m : {1, 0, -1}) {
      Mat2 expect = std::exp(2.0 * I * double(m) * beta * t) * ladder(m);
      CHECK(mdist(free_evolve(t, f, ladder(m)), expect) < 1e-12);
    }
  }
}

TEST_CASE("free evolution is periodic with period pi/beta") {
  const double beta = 0.8;
  ExternalField f{0.0, 0.0, beta};
  std::mt19937 rng(7);
  Mat2 a = random_mat2(rng);
  CHECK(mdist(free_evolve(M_PI / beta, f, a), a) < 1e-12);
}

TEST_CASE("free evolution is a *-homomorphism group action") {
  ExternalField f{0.4, -0.2, 1.1};
  std::mt19937 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    Mat2 a = random_mat2(rng), b = random_mat2(rng);
    double s = 0.3 + 0.1 * trial, t = 1.7 - 0.05 * trial;
    CHECK(mdist(free_evolve(s + t, f, a), free_evolve(s, f, free_evolve(t, f, a))) < 1e-12);
    CHECK(mdist(free_evolve(t, f, a * b), free_evolve(t, f, a) * free_evolve(t, f, b)) < 1e-12);
    CHECK(mdist(free_evolve(t, f, a).adjoint(), free_evolve(t, f, Mat2(a.adjoint()))) < 1e-12);
  }
  CHECK(mdist(free_evolve(2.2, f, Mat2::Identity()), Mat2::Identity()) < 1e-14);
}

TEST_CASE("free evolution rejects the zero field") {
  ExternalField z{0.0, 0.0, 0.0};
  CHECK(z.zero());
  CHECK_THROWS_AS(free_evolve(1.0, z, pauli(3)), std::invalid_argument);
}

TEST_CASE("decompose: known coefficient vectors") {
  Coeffs4 c3 = decompose(pauli(3));
  CHECK(std::abs(c3(0)) < 1e-15);
  CHECK(std::abs(c3(1)) < 1e-15);
  CHECK(std::abs(c3(2) - 1.0) < 1e-15);
  CHECK(std::abs(c3(3)) < 1e-15);

  const double inv_s2 = 1.0 / std::sqrt(2.0);
  Coeffs4 c1 = decompose(pauli(1));
  CHECK(std::abs(c1(0)) < 1e-15);
  CHECK(std::abs(c1(1) - inv_s2) < 1e-15);
  CHECK(std::abs(c1(2)) < 1e-15);
  CHECK(std::abs(c1(3) - inv_s2) < 1e-15);

  Coeffs4 cid = decompose(Mat2::Identity());
  CHECK(std::abs(cid(0) - 1.0) < 1e-15);
  CHECK(std::abs(cid(1)) + std::abs(cid(2)) + std::abs(cid(3)) < 1e-15);
}

TEST_CASE("decompose and reconstruct are mutually inverse") {
  std::mt19937 rng(23);
  for (int trial = 0; trial < 50; ++trial) {
    Mat2 a = random_mat2(rng);
    CHECK(mdist(reconstruct(decompose(a)), a) < 1e-14);
    Coeffs4 c = decompose(a);
    Coeffs4 c2 = decompose(reconstruct(c));
    CHECK((c - c2).cwiseAbs().maxCoeff() < 1e-14);
  }
  for (int m : {1, 0, -1}) {
    Coeffs4 c = decompose(ladder(m));
    int idx = (m == 1) ? 1 : (m == 0 ? 2 : 3);
    for (int k = 0; k < 4; ++k) CHECK(std::abs(c(k) - (k == idx ? 1.0 : 0.0)) < 1e-15);
  }
}

TEST_CASE("decomposition is linear") {
  std::mt19937 rng(31);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    Mat2 a = random_mat2(rng), b = random_mat2(rng);
    complex<double> z(u(rng), u(rng));
    Coeffs4 lhs = decompose(a + z * b);
    Coeffs4 rhs = decompose(a) + z * decompose(b);
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-14);
  }
}

}  // TEST_SUITE
