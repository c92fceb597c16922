// Vectorized variants of the brute-force distance kernel. Each lane performs
// the exact scalar operation sequence (subtract, two separate multiplies and
// adds, min, one final sqrt), so results are bit-identical to
// distance_field_scalar; the equivalence test relies on this.

#include "strata/cubical_oracle.hpp"

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

namespace strata {

bool distance_field_simd_available() { return __builtin_cpu_supports("avx2") != 0; }

__attribute__((target("avx2"))) void distance_field_simd(const double* sx, const double* sy,
                                                         const double* sz, size_t nsites,
                                                         const double* px, const double* py,
                                                         const double* pz, size_t n,
                                                         double* out) {
    size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d x = _mm256_loadu_pd(px + i);
        __m256d y = _mm256_loadu_pd(py + i);
        __m256d z = _mm256_loadu_pd(pz + i);
        __m256d best = _mm256_set1_pd(kInf);
        for (size_t s = 0; s < nsites; ++s) {
            __m256d dx = _mm256_sub_pd(x, _mm256_set1_pd(sx[s]));
            __m256d dy = _mm256_sub_pd(y, _mm256_set1_pd(sy[s]));
            __m256d dz = _mm256_sub_pd(z, _mm256_set1_pd(sz[s]));
            __m256d d2 = _mm256_add_pd(
                _mm256_add_pd(_mm256_mul_pd(dx, dx), _mm256_mul_pd(dy, dy)),
                _mm256_mul_pd(dz, dz));
            // lane-wise: d2 < best ? d2 : best, matching the scalar update
            best = _mm256_min_pd(d2, best);
        }
        _mm256_storeu_pd(out + i, _mm256_sqrt_pd(best));
    }
    if (i < n) distance_field_scalar(sx, sy, sz, nsites, px + i, py + i, pz + i, n - i, out + i);
}

}  // namespace strata

#elif defined(__aarch64__)

#include <arm_neon.h>

namespace strata {

bool distance_field_simd_available() { return true; }

void distance_field_simd(const double* sx, const double* sy, const double* sz, size_t nsites,
                         const double* px, const double* py, const double* pz, size_t n,
                         double* out) {
    size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        float64x2_t x = vld1q_f64(px + i);
        float64x2_t y = vld1q_f64(py + i);
        float64x2_t z = vld1q_f64(pz + i);
        float64x2_t best = vdupq_n_f64(kInf);
        for (size_t s = 0; s < nsites; ++s) {
            float64x2_t dx = vsubq_f64(x, vdupq_n_f64(sx[s]));
            float64x2_t dy = vsubq_f64(y, vdupq_n_f64(sy[s]));
            float64x2_t dz = vsubq_f64(z, vdupq_n_f64(sz[s]));
            float64x2_t d2 = vaddq_f64(vaddq_f64(vmulq_f64(dx, dx), vmulq_f64(dy, dy)),
                                       vmulq_f64(dz, dz));
            best = vminq_f64(d2, best);
        }
        vst1q_f64(out + i, vsqrtq_f64(best));
    }
    if (i < n) distance_field_scalar(sx, sy, sz, nsites, px + i, py + i, pz + i, n - i, out + i);
}

}  // namespace strata

#else

namespace strata {

bool distance_field_simd_available() { return false; }

void distance_field_simd(const double* sx, const double* sy, const double* sz, size_t nsites,
                         const double* px, const double* py, const double* pz, size_t n,
                         double* out) {
    distance_field_scalar(sx, sy, sz, nsites, px, py, pz, n, out);
}

}  // namespace strata

#endif
