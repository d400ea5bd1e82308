#pragma once

// Data-parallel per-cell kernels behind the map layers.
//
// Every kernel has a portable scalar reference and, where the build targets
// x86-64, an AVX2+FMA variant. The variant is chosen once at runtime from the
// CPU features; BIMSENSE_SIMD=scalar|avx2 in the environment overrides it.
// The two paths agree to within a few ulps (see tests/unit/simd_test.cpp).

#include <cstdint>
#include <span>
#include <string_view>

namespace bimsense::simd {

enum class Level : std::uint8_t { kScalar = 0, kAvx2 = 1 };

std::string_view level_name(Level level);
bool level_supported(Level level);

/// Widest level the running CPU supports.
Level best_level();

/// Level used by the default-dispatch overloads below.
Level active_level();
void set_active_level(Level level);

/// prob[i] = 1 / (1 + exp(-logodds[i])).
void occupancy_probability(Level level, std::span<const double> logodds,
                           std::span<double> prob);

/// From log-odds and the binary as-designed raster fill occupancy
/// probability, Shannon entropy in bits and |prob - prior|.
void fill_layers(Level level, std::span<const double> logodds,
                 std::span<const std::uint8_t> prior, std::span<double> prob,
                 std::span<double> entropy, std::span<double> discrepancy);

/// out[i] = alpha * entropy[i] + beta * discrepancy[i].
void combine_risk(Level level, std::span<const double> entropy,
                  std::span<const double> discrepancy, double alpha,
                  double beta, std::span<double> out);

inline void occupancy_probability(std::span<const double> logodds,
                                  std::span<double> prob) {
  occupancy_probability(active_level(), logodds, prob);
}
inline void fill_layers(std::span<const double> logodds,
                        std::span<const std::uint8_t> prior,
                        std::span<double> prob, std::span<double> entropy,
                        std::span<double> discrepancy) {
  fill_layers(active_level(), logodds, prior, prob, entropy, discrepancy);
}
inline void combine_risk(std::span<const double> entropy,
                         std::span<const double> discrepancy, double alpha,
                         double beta, std::span<double> out) {
  combine_risk(active_level(), entropy, discrepancy, alpha, beta, out);
}

}  // namespace bimsense::simd
