// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The dmtlab Authors

#include "dmtlab/channel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dmtlab {
namespace {

constexpr double kInvLn2 = 1.44269504088896340736;
constexpr double kEigenFloor = 1e-300;

using GramMatrix =
    Eigen::Matrix<std::complex<double>, Eigen::Dynamic, Eigen::Dynamic,
                  Eigen::ColMajor, kMaxDim, kMaxDim>;

// Gram matrix on the smaller side; its nonzero spectrum equals that of H H^H.
GramMatrix small_gram(const ComplexMatrix& h) {
  if (h.rows() <= h.cols()) return h * h.adjoint();
  return h.adjoint() * h;
}

// ln det(I + c G) for a Hermitian PSD G.
double log_det_identity_plus(const GramMatrix& g, double c) {
  GramMatrix a = c * g;
  a.diagonal().array() += 1.0;
  Eigen::LLT<GramMatrix> llt(a);
  if (llt.info() != Eigen::Success) {
    throw std::runtime_error("log-det: matrix not positive definite");
  }
  double acc = 0.0;
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    acc += std::log(std::real(llt.matrixL()(i, i)));
  }
  return 2.0 * acc;
}

}  // namespace

ComplexMatrix sample_rayleigh(int m, int n, RandomStream& rng) {
  if (m < 1 || n < 1 || m > kMaxDim || n > kMaxDim) {
    throw std::invalid_argument("sample_rayleigh: dimensions out of range");
  }
  ComplexMatrix h(n, m);
  for (Eigen::Index j = 0; j < h.cols(); ++j) {
    for (Eigen::Index i = 0; i < h.rows(); ++i) h(i, j) = rng.complex_normal();
  }
  return h;
}

double mmse_correlation(int m, int n_train, double p_train) {
  return 1.0 / std::sqrt(1.0 + m / (n_train * p_train));
}

double mmse_error_variance(int m, int n_train, double p_train) {
  return 1.0 / (1.0 + n_train * p_train / m);
}

EstimateResult mmse_estimate(const ComplexMatrix& h, const ComplexMatrix& w2,
                             double p_train, int n_train) {
  const int m = static_cast<int>(h.cols());
  if (!(p_train > 0.0)) {
    throw std::invalid_argument("mmse_estimate: training power must be > 0");
  }
  if (n_train < m) {
    throw std::invalid_argument("mmse_estimate: pilot length must be >= m");
  }
  if (w2.rows() != h.rows() || w2.cols() != h.cols()) {
    throw std::invalid_argument("mmse_estimate: noise shape mismatch");
  }
  const double snr_per_antenna = n_train * p_train / m;
  const double c1 = 1.0 / (1.0 + m / (n_train * p_train));
  const double c2 = std::sqrt(snr_per_antenna) / (1.0 + snr_per_antenna);
  EstimateResult out;
  out.h_hat = c1 * h + c2 * w2;
  out.rho = mmse_correlation(m, n_train, p_train);
  out.error_variance = mmse_error_variance(m, n_train, p_train);
  return out;
}

EstimateResult mmse_estimate(const ComplexMatrix& h, double p_train,
                             int n_train, RandomStream& rng) {
  if (!(p_train > 0.0)) {
    throw std::invalid_argument("mmse_estimate: training power must be > 0");
  }
  const ComplexMatrix w2 = sample_rayleigh(static_cast<int>(h.cols()),
                                           static_cast<int>(h.rows()), rng);
  return mmse_estimate(h, w2, p_train, n_train);
}

double mutual_information(const ComplexMatrix& h, double p) {
  if (p < 0.0) throw std::invalid_argument("mutual_information: p < 0");
  if (p == 0.0 || h.size() == 0) return 0.0;
  const double c = p / static_cast<double>(h.cols());
  // Rank-one channels: det(I + c h h^H) = 1 + c |h|^2.
  if (h.rows() == 1 || h.cols() == 1) {
    return std::log1p(c * h.squaredNorm()) * kInvLn2;
  }
  return log_det_identity_plus(small_gram(h), c) * kInvLn2;
}

double effective_mutual_information(const ComplexMatrix& h_hat2,
                                    const ComplexMatrix& h_tilde, double p,
                                    int m, int n) {
  if (h_tilde.rows() != h_hat2.rows() || h_tilde.cols() != h_hat2.cols()) {
    throw std::invalid_argument(
        "effective_mutual_information: estimate/error shape mismatch");
  }
  if (p < 0.0) {
    throw std::invalid_argument("effective_mutual_information: p < 0");
  }
  const double inflation =
      1.0 + p / (static_cast<double>(m) * n) * h_tilde.squaredNorm();
  return mutual_information(h_hat2, p / inflation);
}

std::vector<double> gram_eigenvalues(const ComplexMatrix& h) {
  const GramMatrix g = small_gram(h);
  std::vector<double> out;
  if (g.rows() == 1) {
    out.push_back(std::real(g(0, 0)));
    return out;
  }
  Eigen::SelfAdjointEigenSolver<GramMatrix> solver(g, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("gram_eigenvalues: eigen decomposition failed");
  }
  const auto& ev = solver.eigenvalues();
  out.assign(ev.data(), ev.data() + ev.size());
  return out;
}

ExponentVector eigen_exponents(const ComplexMatrix& h, double snr) {
  if (!(snr > 1.0)) throw std::invalid_argument("eigen_exponents: snr <= 1");
  const double log_snr = std::log(snr);
  ExponentVector alphas = gram_eigenvalues(h);
  for (double& a : alphas) a = -std::log(std::max(a, kEigenFloor)) / log_snr;
  std::sort(alphas.begin(), alphas.end(), std::greater<>());
  return alphas;
}

}  // namespace dmtlab
