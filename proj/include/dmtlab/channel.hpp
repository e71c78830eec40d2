// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The dmtlab Authors

#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "dmtlab/rng.hpp"

namespace dmtlab {

/// Largest matrix dimension handled without heap allocation. MAC subset
/// channels concatenate users, so this bounds l_users * m as well.
inline constexpr int kMaxDim = 16;

/// n x m channel matrix (rows = receive antennas, cols = transmit antennas).
using ComplexMatrix =
    Eigen::Matrix<std::complex<double>, Eigen::Dynamic, Eigen::Dynamic,
                  Eigen::ColMajor, kMaxDim, kMaxDim>;

/// Descending list of negative SNR exponents, one per nonzero eigenvalue.
using ExponentVector = std::vector<double>;

struct EstimateResult {
  ComplexMatrix h_hat;
  double rho = 0.0;             // per-entry correlation between H and H_hat
  double error_variance = 0.0;  // per-entry variance of H - H_hat
};

/// Fresh i.i.d. CN(0,1) n x m matrix.
ComplexMatrix sample_rayleigh(int m, int n, RandomStream& rng);

/// MMSE estimate from an N-symbol orthogonal pilot at power p_train, using
/// the statistically equivalent scalar mixing form
///   H_hat = H c1 + W2 c2,  c1 = 1/(1 + m/(N p)),  c2 = sqrt(N p/m)/(1 + N p/m).
/// The pilot matrix itself is never materialized.
EstimateResult mmse_estimate(const ComplexMatrix& h, double p_train,
                             int n_train, RandomStream& rng);

/// Same as above with the pilot noise W2 supplied by the caller.
EstimateResult mmse_estimate(const ComplexMatrix& h, const ComplexMatrix& w2,
                             double p_train, int n_train);

double mmse_correlation(int m, int n_train, double p_train);
double mmse_error_variance(int m, int n_train, double p_train);

/// log2 det(I + (p/m) H H^H), m = number of columns of H.
double mutual_information(const ComplexMatrix& h, double p);

/// Mutual information with the estimation error treated as Gaussian noise:
/// log2 det(I + (p/m) Hh Hh^H / (1 + p/(m n) tr(Ht Ht^H))).
double effective_mutual_information(const ComplexMatrix& h_hat2,
                                    const ComplexMatrix& h_tilde, double p,
                                    int m, int n);

/// Eigenvalues of H H^H restricted to the min(m,n) largest, ascending.
std::vector<double> gram_eigenvalues(const ComplexMatrix& h);

/// alpha_i = -ln(lambda_i)/ln(snr), eigenvalues clipped below at 1e-300,
/// sorted descending.
ExponentVector eigen_exponents(const ComplexMatrix& h, double snr);

}  // namespace dmtlab
