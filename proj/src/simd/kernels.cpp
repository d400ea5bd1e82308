#include "bimsense/simd/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "kernels_impl.hpp"

namespace bimsense::simd {

namespace {

Level initial_level() {
  if (const char* env = std::getenv("BIMSENSE_SIMD")) {
    const std::string v(env);
    if (v == "scalar") return Level::kScalar;
    if (v == "avx2" && level_supported(Level::kAvx2)) return Level::kAvx2;
  }
  return best_level();
}

std::atomic<Level>& active() {
  static std::atomic<Level> level{initial_level()};
  return level;
}

void check_sizes(std::size_t a, std::size_t b) {
  if (a != b) throw std::invalid_argument("simd kernel: span size mismatch");
}

}  // namespace

std::string_view level_name(Level level) {
  switch (level) {
    case Level::kScalar:
      return "scalar";
    case Level::kAvx2:
      return "avx2";
  }
  return "unknown";
}

bool level_supported(Level level) {
  switch (level) {
    case Level::kScalar:
      return true;
    case Level::kAvx2:
#if defined(BIMSENSE_HAVE_AVX2)
      __builtin_cpu_init();
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
  }
  return false;
}

Level best_level() {
  return level_supported(Level::kAvx2) ? Level::kAvx2 : Level::kScalar;
}

Level active_level() { return active().load(std::memory_order_relaxed); }

void set_active_level(Level level) {
  if (!level_supported(level))
    throw std::invalid_argument("simd level not supported on this CPU");
  active().store(level, std::memory_order_relaxed);
}

void occupancy_probability(Level level, std::span<const double> logodds,
                           std::span<double> prob) {
  check_sizes(logodds.size(), prob.size());
#if defined(BIMSENSE_HAVE_AVX2)
  if (level == Level::kAvx2) {
    avx2::occupancy_probability(logodds.data(), prob.data(), prob.size());
    return;
  }
#endif
  (void)level;
  scalar::occupancy_probability(logodds.data(), prob.data(), prob.size());
}

void fill_layers(Level level, std::span<const double> logodds,
                 std::span<const std::uint8_t> prior, std::span<double> prob,
                 std::span<double> entropy, std::span<double> discrepancy) {
  const std::size_t n = logodds.size();
  check_sizes(n, prior.size());
  check_sizes(n, prob.size());
  check_sizes(n, entropy.size());
  check_sizes(n, discrepancy.size());
#if defined(BIMSENSE_HAVE_AVX2)
  if (level == Level::kAvx2) {
    avx2::fill_layers(logodds.data(), prior.data(), prob.data(), entropy.data(),
                      discrepancy.data(), n);
    return;
  }
#endif
  (void)level;
  scalar::fill_layers(logodds.data(), prior.data(), prob.data(), entropy.data(),
                      discrepancy.data(), n);
}

void combine_risk(Level level, std::span<const double> entropy,
                  std::span<const double> discrepancy, double alpha,
                  double beta, std::span<double> out) {
  check_sizes(entropy.size(), discrepancy.size());
  check_sizes(entropy.size(), out.size());
#if defined(BIMSENSE_HAVE_AVX2)
  if (level == Level::kAvx2) {
    avx2::combine_risk(entropy.data(), discrepancy.data(), alpha, beta, out.data(),
                       out.size());
    return;
  }
#endif
  (void)level;
  scalar::combine_risk(entropy.data(), discrepancy.data(), alpha, beta, out.data(),
                       out.size());
}

}  // namespace bimsense::simd
