#include <doctest.h>

#include <cmath>

#include "support.hpp"

using namespace conicgame;
using support::Rng;

TEST_SUITE("cones") {
  TEST_CASE("svec examples") {
    CHECK(svec(Matrix::Identity(2, 2)).isApprox(Vector::Map(std::vector<double>{1, 0, 1}.data(), 3)));
    Matrix m(2, 2);
    m << 1, 2, 2, 3;
    const Vector v = svec(m);
    CHECK(v(0) == 1.0);
    CHECK(v(1) == doctest::Approx(2 * std::sqrt(2.0)));
    CHECK(v(2) == 3.0);
    Matrix n(2, 2);
    n << 0, 1, 1, 0;
    CHECK(dot(svec(m), svec(n)) == doctest::Approx(4.0));
  }

  TEST_CASE("svec order is row-wise upper triangle") {
    Matrix m(3, 3);
    m << 1, 2, 3, 2, 4, 5, 3, 5, 6;
    const double r2 = std::sqrt(2.0);
    const Vector v = svec(m);
    const std::vector<double> want = {1, 2 * r2, 3 * r2, 4, 5 * r2, 6};
    for (int i = 0; i < 6; ++i) CHECK(v(i) == doctest::Approx(want[i]));
  }

  TEST_CASE("svec rejects non-square and asymmetric input") {
    CHECK_THROWS_AS(svec(Matrix::Zero(2, 3)), InputError);
    Matrix m(2, 2);
    m << 1, 2, 2.5, 3;
    CHECK_THROWS_AS(svec(m), InputError);
  }

  TEST_CASE("smat examples and round trip") {
    Vector v(3);
    v << 1, 0, 1;
    CHECK(smat(v).isApprox(Matrix::Identity(2, 2)));
    v << 1, 2 * std::sqrt(2.0), 3;
    Matrix m(2, 2);
    m << 1, 2, 2, 3;
    CHECK((smat(v) - m).cwiseAbs().maxCoeff() <= 1e-15);
    CHECK_THROWS_AS(smat(Vector::Zero(4)), InputError);

    Rng rng(11);
    double worst = 0.0;
    for (int t = 0; t < 100; ++t) {
      const Matrix r = support::random_sym(rng, support::uniform_int(rng, 1, 6));
      worst = std::max(worst, (smat(svec(r)) - r).cwiseAbs().maxCoeff());
    }
    CHECK(worst <= 1e-14);
  }

  TEST_CASE("min_eig examples") {
    Vector o(3);
    o << 2, 0.5, 7;
    CHECK(min_eig(ConeBlock::orthant(3), o) == 0.5);
    CHECK(min_eig(ConeBlock::psd(2), svec(Eigen::Vector2d(2, -1).asDiagonal().toDenseMatrix())) ==
          doctest::Approx(-1.0));
    Matrix m(2, 2);
    m << 1, 2, 2, 3;
    CHECK(min_eig(ConeBlock::psd(2), svec(m)) == doctest::Approx(2 - std::sqrt(5.0)));
    CHECK_THROWS_AS(min_eig(ConeBlock::psd(2), Vector::Zero(2)), InputError);
  }

  TEST_CASE("membership examples") {
    Vector v(2);
    v << 0, 1;
    CHECK(in_cone(ConeProduct::orthant(2), v, 1e-9));
    CHECK_FALSE(in_interior(ConeProduct::orthant(2), v, 1e-9));
    CHECK(in_interior(ConeProduct::psd(2), svec(Matrix::Identity(2, 2))));
    Matrix y = Matrix::Zero(3, 3);
    y(0, 0) = 1;
    CHECK(in_cone(ConeProduct::psd(3), svec(y)));
    CHECK_FALSE(in_interior(ConeProduct::psd(3), svec(y)));
    CHECK_THROWS_AS(in_cone(ConeProduct::psd(3), Vector::Zero(5)), InputError);
  }

  TEST_CASE("canonical interior") {
    CHECK(canonical_interior(ConeProduct::orthant(2)) == Vector::Ones(2));
    CHECK(canonical_interior(ConeProduct::psd(3)) == svec(Matrix::Identity(3, 3)));
    const ConeProduct k({ConeBlock::orthant(1), ConeBlock::psd(2)});
    Vector want(4);
    want << 1, 1, 0, 1;
    CHECK(canonical_interior(k) == want);
    CHECK(in_interior(k, canonical_interior(k), 1e-9));
  }

  TEST_CASE("product bookkeeping") {
    const ConeProduct k({ConeBlock::orthant(2), ConeBlock::psd(3), ConeBlock::orthant(1)});
    CHECK(k.total_dim() == 9);
    CHECK(k.offset(1) == 2);
    CHECK(k.offset(2) == 8);
    CHECK(k.degree() == 6);
    CHECK_THROWS_AS(ConeProduct(std::vector<ConeBlock>{}), InputError);
    CHECK_THROWS_AS(ConeBlock::psd(0), InputError);
  }

  TEST_CASE("isometry") {
    Rng rng(12);
    for (int t = 0; t < 200; ++t) {
      const int m = support::uniform_int(rng, 1, 7);
      const Matrix a = support::random_sym(rng, m), b = support::random_sym(rng, m);
      const double tr = (a * b).trace();
      CHECK(std::abs(dot(svec(a), svec(b)) - tr) <= 1e-12 * (1.0 + std::abs(tr)));
    }
  }

  TEST_CASE("interior points pair positively with nonzero cone points") {
    Rng rng(13);
    for (int t = 0; t < 100; ++t) {
      const ConeProduct k = support::random_cones(rng);
      const Vector a = support::random_cone_point(rng, k, 0.01);
      REQUIRE(in_interior(k, a, 1e-9));
      const Vector x = support::random_cone_point(rng, k, 0.0, true);
      if (x.norm() == 0.0) continue;
      CHECK(dot(a, x) > 0.0);
    }
  }

  TEST_CASE("interior implies cone; cone and its negative only at zero") {
    Rng rng(14);
    for (int t = 0; t < 100; ++t) {
      const ConeProduct k = support::random_cones(rng);
      const Vector v = support::random_vector(rng, k.total_dim());
      if (in_interior(k, v)) CHECK(in_cone(k, v));
      if (in_cone(k, v, 0.0) && in_cone(k, -v, 0.0)) CHECK(v.norm() == 0.0);
    }
    const ConeProduct k({ConeBlock::orthant(2), ConeBlock::psd(2)});
    CHECK(in_cone(k, Vector::Zero(5), 0.0));
    CHECK(in_cone(k, -Vector::Zero(5), 0.0));
  }

  TEST_CASE("projection lands in the cone") {
    Rng rng(15);
    for (int t = 0; t < 50; ++t) {
      const ConeProduct k = support::random_cones(rng);
      const Vector v = support::random_vector(rng, k.total_dim());
      const Vector p = project(k, v);
      CHECK(in_cone(k, p, 1e-12));
      CHECK(std::abs(dot(v - p, p)) <= 1e-12);
    }
  }
}
