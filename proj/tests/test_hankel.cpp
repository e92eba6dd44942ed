#include <cmath>

#include "doctest.h"
#include "optomech/hankel.hpp"
#include "oracles.hpp"

using namespace optomech::hankel;

TEST_CASE("transform is an involution after orthogonalization") {
  const auto g = HankelGrid::make(256, 1e-3);
  const Eigen::MatrixXd& t = g->transform();
  CHECK((t * t - Eigen::MatrixXd::Identity(256, 256)).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(g->raw_defect() > 0.0);
  CHECK(g->raw_defect() < 1e-2);
}

TEST_CASE("forward then inverse returns the field") {
  const auto g = HankelGrid::make(256, 1e-3);
  Eigen::VectorXcd f(256);
  for (int i = 0; i < 256; ++i) {
    const double r = g->r()[i];
    f[i] = {std::exp(-r * r / 1e-8) * std::cos(r / 3e-5), std::exp(-r / 2e-4)};
  }
  CHECK((g->inverse(g->forward(f)) - f).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("forward transform matches direct quadrature") {
  const double w = 1e-4, aperture = 1e-3;
  const auto g = HankelGrid::make(256, aperture);
  const auto fn = [w](double r) { return std::exp(-r * r / (w * w)); };
  Eigen::VectorXcd f(256);
  for (int i = 0; i < 256; ++i) f[i] = fn(g->r()[i]);
  const Eigen::VectorXcd big = g->forward(f);
  const double peak = 0.5 * w * w;
  for (int j : {0, 1, 3, 7, 12, 20, 30, 45, 60, 80}) {
    const double want = oracle::hankel_integral(fn, g->k()[j], aperture);
    CHECK(std::abs(big[j] - want) / peak < 1e-9);
  }
}

TEST_CASE("propagated Gaussian matches the paraxial beam") {
  const double w0 = 15e-6, lambda = 1e-6;
  const auto g = HankelGrid::make(512, 3e-4);
  const double zr = oracle::kPi * w0 * w0 / lambda;
  for (double z : {0.5 * zr, 2.0 * zr, -1.5 * zr}) {
    const FieldProfile out = propagate(gaussian_field(g, w0, lambda), z);
    double err = 0.0;
    for (int i = 0; i < g->size(); ++i)
      err = std::max(err, std::abs(out.values[i] - oracle::gaussian_beam(g->r()[i], z, w0, lambda)));
    const double peak = w0 / oracle::gaussian_waist(z, w0, lambda);
    CHECK(err / peak < 1e-3);
    CHECK(second_moment_waist(out) == doctest::Approx(oracle::gaussian_waist(z, w0, lambda)).epsilon(1e-3));
  }
}

TEST_CASE("propagation conserves power") {
  const auto g = HankelGrid::make(512, 3e-4);
  const FieldProfile in = gaussian_field(g, 15e-6, 1e-6);
  const double p0 = in.power();
  CHECK(p0 == doctest::Approx(oracle::kPi * 15e-6 * 15e-6 / 2.0).epsilon(1e-8));
  FieldProfile f = in;
  for (int i = 0; i < 20; ++i) f = propagate(f, 1e-3);
  CHECK(f.power() == doctest::Approx(p0).epsilon(1e-8));
}

TEST_CASE("transform domains are checked") {
  const auto g = HankelGrid::make(64, 1e-3);
  const FieldProfile f = gaussian_field(g, 1e-4, 1e-6);
  const FieldProfile fk = qdht(f, Direction::Forward);
  CHECK(fk.domain == Domain::Frequency);
  CHECK_THROWS(qdht(fk, Direction::Forward));
  CHECK((qdht(fk, Direction::Backward).values - f.values).cwiseAbs().maxCoeff() < 1e-12);
  CHECK_THROWS(gaussian_field(g, 0.0, 1e-6));
}
