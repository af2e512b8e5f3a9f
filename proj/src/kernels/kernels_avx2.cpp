// Built with -mavx2 -mfma; reached only through the runtime check in
// dispatch.cpp.

#include <immintrin.h>

#include <cmath>

#include "numsys/kernels.hpp"

namespace numsys::kernels::avx2 {

namespace {

// exp on [-700, 700]: x = n ln2 + r with a two-part ln2, then a degree-13
// Taylor polynomial on |r| <= ln2/2 (truncation < 1e-17 relative).
inline __m256d exp_pd(__m256d x) {
  const __m256d log2e = _mm256_set1_pd(1.4426950408889634074);
  const __m256d ln2_hi = _mm256_set1_pd(6.93147180369123816490e-01);
  const __m256d ln2_lo = _mm256_set1_pd(1.90821492927058770002e-10);
  const __m256d n = _mm256_round_pd(_mm256_mul_pd(x, log2e), _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  __m256d r = _mm256_fnmadd_pd(n, ln2_hi, x);
  r = _mm256_fnmadd_pd(n, ln2_lo, r);

  static constexpr double c[] = {1.0 / 6227020800.0, 1.0 / 479001600.0, 1.0 / 39916800.0, 1.0 / 3628800.0,
                                 1.0 / 362880.0,     1.0 / 40320.0,     1.0 / 5040.0,      1.0 / 720.0,
                                 1.0 / 120.0,        1.0 / 24.0,        1.0 / 6.0,         0.5,
                                 1.0,                1.0};
  __m256d p = _mm256_set1_pd(c[0]);
  for (int i = 1; i < 14; ++i) p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(c[i]));

  // 2^n by building the exponent field directly.
  const __m128i ni = _mm256_cvtpd_epi32(n);
  __m256i e = _mm256_cvtepi32_epi64(ni);
  e = _mm256_slli_epi64(_mm256_add_epi64(e, _mm256_set1_epi64x(1023)), 52);
  return _mm256_mul_pd(p, _mm256_castsi256_pd(e));
}

// sin and cos together for |x| <= 1e5: Cody-Waite reduction by pi/2 with a
// three-part constant, fdlibm kernel polynomials on [-pi/4, pi/4].
inline void sincos_pd(__m256d x, __m256d* s_out, __m256d* c_out) {
  const __m256d two_over_pi = _mm256_set1_pd(6.36619772367581382433e-01);
  const __m256d p1 = _mm256_set1_pd(1.57079632673412561417e+00);
  const __m256d p2 = _mm256_set1_pd(6.07710050630396597660e-11);
  const __m256d p3 = _mm256_set1_pd(2.02226624871116645580e-21);
  const __m256d n = _mm256_round_pd(_mm256_mul_pd(x, two_over_pi), _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  __m256d r = _mm256_fnmadd_pd(n, p1, x);
  r = _mm256_fnmadd_pd(n, p2, r);
  r = _mm256_fnmadd_pd(n, p3, r);
  const __m256d z = _mm256_mul_pd(r, r);

  __m256d ps = _mm256_set1_pd(1.58969099521155010221e-10);
  ps = _mm256_fmadd_pd(ps, z, _mm256_set1_pd(-2.50507602534068634195e-08));
  ps = _mm256_fmadd_pd(ps, z, _mm256_set1_pd(2.75573137070700676789e-06));
  ps = _mm256_fmadd_pd(ps, z, _mm256_set1_pd(-1.98412698298579493134e-04));
  ps = _mm256_fmadd_pd(ps, z, _mm256_set1_pd(8.33333333332248946124e-03));
  ps = _mm256_fmadd_pd(ps, z, _mm256_set1_pd(-1.66666666666666324348e-01));
  const __m256d sn = _mm256_fmadd_pd(_mm256_mul_pd(ps, z), r, r);

  __m256d pc = _mm256_set1_pd(-1.13596475577881948265e-11);
  pc = _mm256_fmadd_pd(pc, z, _mm256_set1_pd(2.08757232129817482790e-09));
  pc = _mm256_fmadd_pd(pc, z, _mm256_set1_pd(-2.75573143513906633035e-07));
  pc = _mm256_fmadd_pd(pc, z, _mm256_set1_pd(2.48015872894767294178e-05));
  pc = _mm256_fmadd_pd(pc, z, _mm256_set1_pd(-1.38888888888741095749e-03));
  pc = _mm256_fmadd_pd(pc, z, _mm256_set1_pd(4.16666666666666019037e-02));
  const __m256d z2 = _mm256_mul_pd(z, z);
  const __m256d cs = _mm256_fmadd_pd(pc, z2, _mm256_fnmadd_pd(_mm256_set1_pd(0.5), z, _mm256_set1_pd(1.0)));

  // Quadrant q = n mod 4: (sin, cos) = (s, c), (c, -s), (-s, -c), (-c, s).
  const __m256i q = _mm256_cvtepi32_epi64(_mm256_cvtpd_epi32(n));
  const __m256i one = _mm256_set1_epi64x(1), two = _mm256_set1_epi64x(2);
  const __m256d swap = _mm256_castsi256_pd(_mm256_cmpeq_epi64(_mm256_and_si256(q, one), one));
  const __m256d sign_bit = _mm256_set1_pd(-0.0);
  const __m256i q1 = _mm256_add_epi64(q, one);
  const __m256d neg_s = _mm256_castsi256_pd(_mm256_cmpeq_epi64(_mm256_and_si256(q, two), two));
  const __m256d neg_c = _mm256_castsi256_pd(_mm256_cmpeq_epi64(_mm256_and_si256(q1, two), two));
  __m256d s = _mm256_blendv_pd(sn, cs, swap);
  __m256d c = _mm256_blendv_pd(cs, sn, swap);
  s = _mm256_xor_pd(s, _mm256_and_pd(neg_s, sign_bit));
  c = _mm256_xor_pd(c, _mm256_and_pd(neg_c, sign_bit));
  *s_out = s;
  *c_out = c;
}

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

}  // namespace

std::complex<double> exp_sum(std::span<const double> w, std::span<const double> x, std::complex<double> s) {
  const double a = s.real(), b = s.imag();
  const __m256d va = _mm256_set1_pd(-a), vb = _mm256_set1_pd(b);
  const __m256d lim_e = _mm256_set1_pd(700.0), lim_t = _mm256_set1_pd(1e5);
  const __m256d abs_mask = _mm256_castsi256_pd(_mm256_set1_epi64x(0x7fffffffffffffffLL));
  __m256d acc_re = _mm256_setzero_pd(), acc_im = _mm256_setzero_pd();
  std::complex<double> tail{0.0, 0.0};
  const std::size_t n = x.size();
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    const __m256d xv = _mm256_loadu_pd(x.data() + j);
    const __m256d wv = _mm256_loadu_pd(w.data() + j);
    const __m256d ea = _mm256_mul_pd(va, xv);
    const __m256d t = _mm256_mul_pd(vb, xv);
    const __m256d bad = _mm256_or_pd(_mm256_cmp_pd(_mm256_and_pd(ea, abs_mask), lim_e, _CMP_GT_OQ),
                                     _mm256_cmp_pd(_mm256_and_pd(t, abs_mask), lim_t, _CMP_GT_OQ));
    if (_mm256_movemask_pd(bad)) {
      // Out of the vector range: this block goes through libm.
      tail += scalar::exp_sum(w.subspan(j, 4), x.subspan(j, 4), s);
      continue;
    }
    const __m256d m = _mm256_mul_pd(wv, exp_pd(ea));
    __m256d sv, cv;
    sincos_pd(t, &sv, &cv);
    acc_re = _mm256_fmadd_pd(m, cv, acc_re);
    acc_im = _mm256_fnmadd_pd(m, sv, acc_im);
  }
  if (j < n) tail += scalar::exp_sum(w.subspan(j), x.subspan(j), s);
  return std::complex<double>(hsum(acc_re), hsum(acc_im)) + tail;
}

bool add_shifted_u64(std::span<std::uint64_t> dst, std::span<const std::uint64_t> src, std::size_t shift) {
  const std::size_t n = dst.size();
  if (shift >= n) return false;
  const __m256i bias = _mm256_set1_epi64x(static_cast<long long>(0x8000000000000000ULL));
  __m256i over = _mm256_setzero_si256();
  std::size_t i = shift;
  for (; i + 4 <= n; i += 4) {
    const __m256i a = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(dst.data() + i));
    const __m256i b = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(src.data() + i - shift));
    const __m256i v = _mm256_add_epi64(a, b);
    // Unsigned a > v detects wraparound; flip sign bits for a signed compare.
    over = _mm256_or_si256(over, _mm256_cmpgt_epi64(_mm256_xor_si256(a, bias), _mm256_xor_si256(v, bias)));
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(dst.data() + i), v);
  }
  bool overflow = !_mm256_testz_si256(over, over);
  for (; i < n; ++i) {
    const std::uint64_t v = dst[i] + src[i - shift];
    overflow |= v < dst[i];
    dst[i] = v;
  }
  return overflow;
}

}  // namespace numsys::kernels::avx2
