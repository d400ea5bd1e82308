#include <cmath>
#include <numbers>

#include "kernels_impl.hpp"

namespace bimsense::simd::scalar {

namespace {

// Entropy of sigma(L) written in terms of u = exp(-|L|):
//   H = ln(1 + u) + |L| * u / (1 + u)   [nats]
// which is exactly symmetric in L and avoids 0 * log(0).
inline void cell_layers(double l, std::uint8_t prior, double& prob,
                        double& entropy, double& discrepancy) {
  const double a = std::fabs(l);
  const double u = std::exp(-a);
  const double inv = 1.0 / (1.0 + u);
  const double small = u * inv;
  prob = l >= 0.0 ? inv : small;
  entropy = (std::log1p(u) + a * small) * std::numbers::log2e;
  discrepancy = std::fabs(prob - (prior ? 1.0 : 0.0));
}

}  // namespace

void occupancy_probability(const double* logodds, double* prob,
                           std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double u = std::exp(-std::fabs(logodds[i]));
    const double inv = 1.0 / (1.0 + u);
    prob[i] = logodds[i] >= 0.0 ? inv : u * inv;
  }
}

void fill_layers(const double* logodds, const std::uint8_t* prior, double* prob,
                 double* entropy, double* discrepancy, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i)
    cell_layers(logodds[i], prior[i], prob[i], entropy[i], discrepancy[i]);
}

void combine_risk(const double* entropy, const double* discrepancy,
                  double alpha, double beta, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i)
    out[i] = alpha * entropy[i] + beta * discrepancy[i];
}

}  // namespace bimsense::simd::scalar
