#pragma once

#include <cstddef>
#include <cstdint>

namespace regret {

/// Standard normal density phi(x).
double norm_pdf(double x);

/// Standard normal CDF Phi(x), accurate in both tails (erfc based).
double norm_cdf(double x);

/// Inverse standard normal CDF on p in (0,1).
/// Wichura's PPND16 rational approximation, |relative error| < 1e-15.
/// Throws DomainError outside (0,1).
double norm_quantile(double p);

/// CDF of a chi-square with one degree of freedom.
double chi2_cdf_1(double x);

/// Smoothed positive part: s * log(1 + exp(x/s)) for s > 0, overflow safe.
/// For s == 0 returns max(x, 0).
double softplus(double x, double s);

/// Logistic sigmoid 1 / (1 + exp(-x)), overflow safe.
double sigmoid(double x);

/// FNV-1a 64-bit hash of a byte buffer; `seed` chains multiple buffers.
std::uint64_t fnv1a64(const void* data, std::size_t nbytes,
                      std::uint64_t seed = 0xcbf29ce484222325ULL);

}  // namespace regret
