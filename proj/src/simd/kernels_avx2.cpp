// AVX2 + FMA variants of the per-cell layer kernels. Compiled only into this
// translation unit with -mavx2 -mfma; callers reach it through the runtime
// dispatcher after a CPU feature check.

#include <immintrin.h>

#include <cmath>
#include <numbers>

#include "kernels_impl.hpp"

namespace bimsense::simd::avx2 {

namespace {

constexpr double kLn2Hi = 6.93147180369123816490e-01;
constexpr double kLn2Lo = 1.90821492927058770002e-10;

// 2^52 + 2^51: adding it to an integral double in (-2^51, 2^51) leaves the
// integer in the low mantissa bits.
constexpr double kRoundMagic = 6755399441055744.0;

inline __m256d exp_pd(__m256d x) {
  x = _mm256_max_pd(_mm256_min_pd(x, _mm256_set1_pd(708.0)),
                    _mm256_set1_pd(-708.0));
  const __m256d n = _mm256_round_pd(
      _mm256_mul_pd(x, _mm256_set1_pd(std::numbers::log2e)),
      _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  __m256d r = _mm256_fnmadd_pd(n, _mm256_set1_pd(kLn2Hi), x);
  r = _mm256_fnmadd_pd(n, _mm256_set1_pd(kLn2Lo), r);

  // Taylor series to degree 13; |r| <= ln2 / 2 keeps the truncation error
  // below 1e-17.
  __m256d p = _mm256_set1_pd(1.0 / 6227020800.0);
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 479001600.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 39916800.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 3628800.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 362880.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 40320.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 5040.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 720.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 120.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 24.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 6.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(0.5));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0));

  // Scale by 2^n through the exponent field.
  const __m256d magic = _mm256_set1_pd(kRoundMagic);
  const __m256i ni = _mm256_sub_epi64(_mm256_castpd_si256(_mm256_add_pd(n, magic)),
                                      _mm256_castpd_si256(magic));
  const __m256i bits =
      _mm256_slli_epi64(_mm256_add_epi64(ni, _mm256_set1_epi64x(1023)), 52);
  return _mm256_mul_pd(p, _mm256_castsi256_pd(bits));
}

// Natural log for positive normal inputs.
inline __m256d log_pd(__m256d x) {
  const __m256i bits = _mm256_castpd_si256(x);
  const __m256i exp_bits = _mm256_srli_epi64(bits, 52);
  const __m256d magic = _mm256_set1_pd(kRoundMagic);
  __m256d e = _mm256_sub_pd(
      _mm256_castsi256_pd(_mm256_add_epi64(exp_bits, _mm256_castpd_si256(magic))),
      magic);
  e = _mm256_sub_pd(e, _mm256_set1_pd(1023.0));

  const __m256i mant_mask = _mm256_set1_epi64x(0x000FFFFFFFFFFFFFLL);
  const __m256i one_bits = _mm256_set1_epi64x(0x3FF0000000000000LL);
  __m256d m = _mm256_castsi256_pd(
      _mm256_or_si256(_mm256_and_si256(bits, mant_mask), one_bits));

  // Fold m into [sqrt(2)/2, sqrt(2)].
  const __m256d big = _mm256_cmp_pd(m, _mm256_set1_pd(std::numbers::sqrt2), _CMP_GT_OQ);
  m = _mm256_blendv_pd(m, _mm256_mul_pd(m, _mm256_set1_pd(0.5)), big);
  e = _mm256_add_pd(e, _mm256_and_pd(big, _mm256_set1_pd(1.0)));

  // log(m) = 2 atanh(s), s = (m - 1) / (m + 1), |s| < 0.1716.
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d s = _mm256_div_pd(_mm256_sub_pd(m, one), _mm256_add_pd(m, one));
  const __m256d s2 = _mm256_mul_pd(s, s);
  __m256d p = _mm256_set1_pd(1.0 / 21.0);
  p = _mm256_fmadd_pd(p, s2, _mm256_set1_pd(1.0 / 19.0));
  p = _mm256_fmadd_pd(p, s2, _mm256_set1_pd(1.0 / 17.0));
  p = _mm256_fmadd_pd(p, s2, _mm256_set1_pd(1.0 / 15.0));
  p = _mm256_fmadd_pd(p, s2, _mm256_set1_pd(1.0 / 13.0));
  p = _mm256_fmadd_pd(p, s2, _mm256_set1_pd(1.0 / 11.0));
  p = _mm256_fmadd_pd(p, s2, _mm256_set1_pd(1.0 / 9.0));
  p = _mm256_fmadd_pd(p, s2, _mm256_set1_pd(1.0 / 7.0));
  p = _mm256_fmadd_pd(p, s2, _mm256_set1_pd(1.0 / 5.0));
  p = _mm256_fmadd_pd(p, s2, _mm256_set1_pd(1.0 / 3.0));
  // 2 s (1 + s2 p) = 2s + 2 s^3 p
  const __m256d two_s = _mm256_add_pd(s, s);
  const __m256d logm = _mm256_fmadd_pd(_mm256_mul_pd(two_s, s2), p, two_s);

  return _mm256_add_pd(_mm256_fmadd_pd(e, _mm256_set1_pd(kLn2Lo), logm),
                       _mm256_mul_pd(e, _mm256_set1_pd(kLn2Hi)));
}

inline __m256d abs_pd(__m256d x) {
  return _mm256_andnot_pd(_mm256_set1_pd(-0.0), x);
}

struct Sigmoid {
  __m256d abs_l;
  __m256d u;      // exp(-|L|)
  __m256d large;  // 1 / (1 + u), the probability of the likelier state
  __m256d small;  // u / (1 + u)
  __m256d prob;
};

inline Sigmoid sigmoid(__m256d l) {
  Sigmoid s;
  s.abs_l = abs_pd(l);
  s.u = exp_pd(_mm256_sub_pd(_mm256_setzero_pd(), s.abs_l));
  s.large = _mm256_div_pd(_mm256_set1_pd(1.0), _mm256_add_pd(_mm256_set1_pd(1.0), s.u));
  s.small = _mm256_mul_pd(s.u, s.large);
  const __m256d nonneg = _mm256_cmp_pd(l, _mm256_setzero_pd(), _CMP_GE_OQ);
  s.prob = _mm256_blendv_pd(s.small, s.large, nonneg);
  return s;
}

}  // namespace

void occupancy_probability(const double* logodds, double* prob, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(prob + i, sigmoid(_mm256_loadu_pd(logodds + i)).prob);
  if (i < n) scalar::occupancy_probability(logodds + i, prob + i, n - i);
}

void fill_layers(const double* logodds, const std::uint8_t* prior, double* prob,
                 double* entropy, double* discrepancy, std::size_t n) {
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d log2e = _mm256_set1_pd(std::numbers::log2e);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const Sigmoid s = sigmoid(_mm256_loadu_pd(logodds + i));
    const __m256d log1p_u = log_pd(_mm256_add_pd(one, s.u));
    const __m256d h = _mm256_mul_pd(_mm256_fmadd_pd(s.abs_l, s.small, log1p_u), log2e);

    const __m256d target = _mm256_set_pd(prior[i + 3] ? 1.0 : 0.0, prior[i + 2] ? 1.0 : 0.0,
                                         prior[i + 1] ? 1.0 : 0.0, prior[i] ? 1.0 : 0.0);
    _mm256_storeu_pd(prob + i, s.prob);
    _mm256_storeu_pd(entropy + i, h);
    _mm256_storeu_pd(discrepancy + i, abs_pd(_mm256_sub_pd(s.prob, target)));
  }
  if (i < n)
    scalar::fill_layers(logodds + i, prior + i, prob + i, entropy + i, discrepancy + i,
                        n - i);
}

void combine_risk(const double* entropy, const double* discrepancy, double alpha,
                  double beta, double* out, std::size_t n) {
  const __m256d a = _mm256_set1_pd(alpha);
  const __m256d b = _mm256_set1_pd(beta);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d h = _mm256_loadu_pd(entropy + i);
    const __m256d d = _mm256_loadu_pd(discrepancy + i);
    _mm256_storeu_pd(out + i, _mm256_fmadd_pd(a, h, _mm256_mul_pd(b, d)));
  }
  if (i < n) scalar::combine_risk(entropy + i, discrepancy + i, alpha, beta, out + i, n - i);
}

}  // namespace bimsense::simd::avx2
