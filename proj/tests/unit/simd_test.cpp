#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"

#include "bimsense/simd/kernels.hpp"

using namespace bimsense;
using simd::Level;

namespace {

struct Inputs {
  std::vector<double> logodds;
  std::vector<std::uint8_t> prior;
  std::vector<double> entropy;
  std::vector<double> discrepancy;
};

Inputs make_inputs(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> l(-6.0, 6.0);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Inputs in;
  for (std::size_t i = 0; i < n; ++i) {
    // Exercise the exact values the grid produces as well as random ones.
    const double v = i % 7 == 0 ? (i % 2 ? 5.0 : -5.0) : (i % 11 == 0 ? 0.0 : l(rng));
    in.logodds.push_back(v);
    in.prior.push_back(rng() & 1);
    in.entropy.push_back(u(rng));
    in.discrepancy.push_back(u(rng));
  }
  return in;
}

double ref_entropy(double p) {
  if (p <= 0.0 || p >= 1.0) return 0.0;
  return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

void check_close(const std::vector<double>& a, const std::vector<double>& b, double tol) {
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == doctest::Approx(b[i]).epsilon(tol));
}

}  // namespace

TEST_SUITE("simd") {
  TEST_CASE("scalar kernels match closed forms") {
    const Inputs in = make_inputs(257, 3);
    const std::size_t n = in.logodds.size();
    std::vector<double> prob(n), ent(n), disc(n), risk(n);
    simd::fill_layers(Level::kScalar, in.logodds, in.prior, prob, ent, disc);
    simd::combine_risk(Level::kScalar, in.entropy, in.discrepancy, 0.5, 0.5, risk);
    for (std::size_t i = 0; i < n; ++i) {
      const double p = 1.0 / (1.0 + std::exp(-in.logodds[i]));
      CHECK(prob[i] == doctest::Approx(p).epsilon(1e-14));
      CHECK(ent[i] == doctest::Approx(ref_entropy(p)).epsilon(1e-12));
      CHECK(disc[i] == doctest::Approx(std::fabs(p - in.prior[i])).epsilon(1e-14));
      CHECK(risk[i] == doctest::Approx(0.5 * in.entropy[i] + 0.5 * in.discrepancy[i]));
    }
  }

  TEST_CASE("vector kernels agree with the scalar reference") {
    if (!simd::level_supported(Level::kAvx2)) {
      MESSAGE("AVX2 not available on this CPU; equivalence not exercised");
      return;
    }
    // Lengths around the vector width check the tail handling.
    for (std::size_t n : {0u, 1u, 3u, 4u, 5u, 8u, 63u, 1000u, 4099u}) {
      CAPTURE(n);
      const Inputs in = make_inputs(n, 11 + n);
      std::vector<double> p_s(n), e_s(n), d_s(n), p_v(n), e_v(n), d_v(n);
      simd::fill_layers(Level::kScalar, in.logodds, in.prior, p_s, e_s, d_s);
      simd::fill_layers(Level::kAvx2, in.logodds, in.prior, p_v, e_v, d_v);
      check_close(p_s, p_v, 1e-13);
      check_close(e_s, e_v, 1e-12);
      check_close(d_s, d_v, 1e-12);

      std::vector<double> q_s(n), q_v(n);
      simd::occupancy_probability(Level::kScalar, in.logodds, q_s);
      simd::occupancy_probability(Level::kAvx2, in.logodds, q_v);
      check_close(q_s, q_v, 1e-13);

      std::vector<double> r_s(n), r_v(n);
      simd::combine_risk(Level::kScalar, in.entropy, in.discrepancy, 0.3, 0.7, r_s);
      simd::combine_risk(Level::kAvx2, in.entropy, in.discrepancy, 0.3, 0.7, r_v);
      check_close(r_s, r_v, 1e-15);
    }
  }

  TEST_CASE("entropy stays in [0, 1] and is symmetric on both paths") {
    for (Level lv : {Level::kScalar, Level::kAvx2}) {
      if (!simd::level_supported(lv)) continue;
      std::vector<double> l;
      for (double v = -5.0; v <= 5.0; v += 0.01) l.push_back(v);
      std::vector<double> neg = l;
      for (auto& v : neg) v = -v;
      std::vector<std::uint8_t> prior(l.size(), 0);
      std::vector<double> p(l.size()), e(l.size()), d(l.size());
      std::vector<double> p2(l.size()), e2(l.size()), d2(l.size());
      simd::fill_layers(lv, l, prior, p, e, d);
      simd::fill_layers(lv, neg, prior, p2, e2, d2);
      for (std::size_t i = 0; i < l.size(); ++i) {
        CHECK(e[i] >= 0.0);
        CHECK(e[i] <= 1.0 + 1e-12);
        // neg[i] = -l[i], so O' = 1 - O
        CHECK(e[i] == doctest::Approx(e2[i]).epsilon(1e-12));
      }
    }
  }

  TEST_CASE("dispatch level can be forced") {
    const Level before = simd::active_level();
    simd::set_active_level(Level::kScalar);
    CHECK(simd::active_level() == Level::kScalar);
    simd::set_active_level(before);
    CHECK(simd::level_supported(Level::kScalar));
    CHECK(simd::level_supported(simd::best_level()));
  }
}
