// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The dmtlab Authors

#include <doctest.h>

#include <cmath>
#include <complex>
#include <stdexcept>

#include "dmtlab/channel.hpp"
#include "dmtlab/rng.hpp"

using namespace dmtlab;

namespace {

ComplexMatrix random_unitary(int dim, RandomStream& rng) {
  const ComplexMatrix g = sample_rayleigh(dim, dim, rng);
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  return qr.householderQ() * ComplexMatrix::Identity(dim, dim);
}

}  // namespace

TEST_CASE("rayleigh draws have unit-variance entries and the right shape") {
  RandomStream rng(3, StreamTag::kTest);
  const ComplexMatrix h = sample_rayleigh(2, 3, rng);
  CHECK(h.rows() == 3);
  CHECK(h.cols() == 2);
  double sum = 0.0;
  std::complex<double> cross = 0.0;
  const int draws = 200000;
  for (int t = 0; t < draws; ++t) {
    const ComplexMatrix s = sample_rayleigh(1, 1, rng);
    sum += std::norm(s(0, 0));
    cross += s(0, 0) * s(0, 0);
  }
  CHECK(sum / draws == doctest::Approx(1.0).epsilon(0.01));
  CHECK(std::abs(cross / static_cast<double>(draws)) < 0.01);
  CHECK_THROWS_AS(sample_rayleigh(0, 1, rng), std::invalid_argument);
  CHECK_THROWS_AS(sample_rayleigh(1, kMaxDim + 1, rng), std::invalid_argument);
}

TEST_CASE("mutual information closed forms") {
  ComplexMatrix h(1, 1);
  h(0, 0) = 1.0;
  CHECK(mutual_information(h, 3.0) == doctest::Approx(2.0));
  CHECK(mutual_information(h, 0.0) == 0.0);
  CHECK_THROWS_AS(mutual_information(h, -1.0), std::invalid_argument);
  const ComplexMatrix eye = ComplexMatrix::Identity(2, 2);
  CHECK(mutual_information(eye, 2.0) == doctest::Approx(2.0));
  ComplexMatrix diag = ComplexMatrix::Zero(2, 2);
  diag(0, 0) = 2.0;
  diag(1, 1) = 0.5;
  // log2((1 + 4 * 1.5)(1 + 0.25 * 1.5))
  CHECK(mutual_information(diag, 3.0) ==
        doctest::Approx(std::log2(7.0 * 1.375)));
}

TEST_CASE("mutual information is invariant under unitary rotations") {
  RandomStream rng(17, StreamTag::kTest);
  for (int t = 0; t < 50; ++t) {
    const ComplexMatrix h = sample_rayleigh(3, 2, rng);
    const ComplexMatrix u = random_unitary(2, rng);
    const ComplexMatrix v = random_unitary(3, rng);
    const ComplexMatrix rotated = u * h * v.adjoint();
    CHECK(std::abs(mutual_information(h, 10.0) - mutual_information(rotated, 10.0)) < 1e-10);
  }
}

TEST_CASE("effective mutual information folds the estimation error into noise") {
  RandomStream rng(19, StreamTag::kTest);
  const ComplexMatrix h_hat = sample_rayleigh(2, 2, rng);
  const ComplexMatrix zero = ComplexMatrix::Zero(2, 2);
  CHECK(effective_mutual_information(h_hat, zero, 50.0, 2, 2) ==
        doctest::Approx(mutual_information(h_hat, 50.0)));
  const ComplexMatrix err = sample_rayleigh(2, 2, rng);
  const double inflation = 1.0 + 50.0 / 4.0 * err.squaredNorm();
  CHECK(effective_mutual_information(h_hat, err, 50.0, 2, 2) ==
        doctest::Approx(mutual_information(h_hat, 50.0 / inflation)));
  CHECK(effective_mutual_information(h_hat, err, 50.0, 2, 2) <
        mutual_information(h_hat, 50.0));
  CHECK_THROWS_AS(effective_mutual_information(h_hat, ComplexMatrix::Zero(1, 2), 1.0, 2, 2),
                  std::invalid_argument);
}

TEST_CASE("MMSE estimate decomposes into estimate plus orthogonal error") {
  RandomStream rng(23, StreamTag::kTest);
  const int m = 2, n_train = 4;
  const double p_train = 3.0;
  const double rho = mmse_correlation(m, n_train, p_train);
  const double err_var = mmse_error_variance(m, n_train, p_train);
  CHECK(rho == doctest::Approx(1.0 / std::sqrt(1.0 + 2.0 / 12.0)));
  CHECK(err_var == doctest::Approx(1.0 / 7.0));
  CHECK(rho * rho + err_var == doctest::Approx(1.0));

  double hat_power = 0.0, err_power = 0.0;
  std::complex<double> cross = 0.0, corr = 0.0;
  const int draws = 100000;
  for (int t = 0; t < draws; ++t) {
    const ComplexMatrix h = sample_rayleigh(m, 1, rng);
    const EstimateResult est = mmse_estimate(h, p_train, n_train, rng);
    CHECK(est.rho == rho);
    const ComplexMatrix e = h - est.h_hat;
    hat_power += std::norm(est.h_hat(0, 0));
    err_power += std::norm(e(0, 0));
    cross += est.h_hat(0, 0) * std::conj(e(0, 0));
    corr += h(0, 0) * std::conj(est.h_hat(0, 0));
  }
  const double var_hat = hat_power / draws;
  CHECK(var_hat == doctest::Approx(rho * rho).epsilon(0.02));
  CHECK(err_power / draws == doctest::Approx(err_var).epsilon(0.03));
  CHECK(std::abs(cross / static_cast<double>(draws)) < 0.01);
  CHECK(std::abs(corr / static_cast<double>(draws)) / std::sqrt(var_hat) ==
        doctest::Approx(rho).epsilon(0.01));
}

TEST_CASE("MMSE estimate with a given noise draw and argument checks") {
  ComplexMatrix h(1, 1), w(1, 1);
  h(0, 0) = 1.0;
  w(0, 0) = 0.0;
  const EstimateResult est = mmse_estimate(h, w, 9.0, 1);
  CHECK(std::real(est.h_hat(0, 0)) == doctest::Approx(0.9));
  CHECK_THROWS_AS(mmse_estimate(h, w, 0.0, 1), std::invalid_argument);
  CHECK_THROWS_AS(mmse_estimate(ComplexMatrix::Zero(1, 2), ComplexMatrix::Zero(1, 2), 1.0, 1),
                  std::invalid_argument);
}

TEST_CASE("eigen exponents") {
  ComplexMatrix h = ComplexMatrix::Zero(2, 2);
  h(0, 0) = 0.1;  // eigenvalue 1e-2
  h(1, 1) = 1.0;
  const auto a = eigen_exponents(h, 100.0);
  REQUIRE(a.size() == 2);
  CHECK(a[0] == doctest::Approx(1.0));
  CHECK(std::abs(a[1]) < 1e-12);
  CHECK_THROWS_AS(eigen_exponents(h, 1.0), std::invalid_argument);

  RandomStream rng(29, StreamTag::kTest);
  const double snr = 1e3;
  for (int t = 0; t < 20; ++t) {
    const ComplexMatrix g = sample_rayleigh(3, 2, rng);
    const auto base = eigen_exponents(g, snr);
    const auto scaled = eigen_exponents(std::pow(snr, -0.25) * g, snr);
    REQUIRE(base.size() == 2);
    CHECK(base[0] >= base[1]);
    for (std::size_t i = 0; i < base.size(); ++i) {
      CHECK(scaled[i] == doctest::Approx(base[i] + 0.5).epsilon(1e-9));
    }
  }
}
