#pragma once

#include <cstddef>
#include <cstdint>

namespace bimsense::simd {

namespace scalar {
void occupancy_probability(const double* logodds, double* prob, std::size_t n);
void fill_layers(const double* logodds, const std::uint8_t* prior, double* prob,
                 double* entropy, double* discrepancy, std::size_t n);
void combine_risk(const double* entropy, const double* discrepancy,
                  double alpha, double beta, double* out, std::size_t n);
}  // namespace scalar

#if defined(BIMSENSE_HAVE_AVX2)
namespace avx2 {
void occupancy_probability(const double* logodds, double* prob, std::size_t n);
void fill_layers(const double* logodds, const std::uint8_t* prior, double* prob,
                 double* entropy, double* discrepancy, std::size_t n);
void combine_risk(const double* entropy, const double* discrepancy,
                  double alpha, double beta, double* out, std::size_t n);
}  // namespace avx2
#endif

}  // namespace bimsense::simd
