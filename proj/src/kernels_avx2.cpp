// AVX2+FMA kernel backend. Compiled with -mavx2 -mfma in its own TU; the
// dispatcher only routes here after a runtime cpuid check, so the rest of
// the binary stays runnable on older cores.

#include "edsa/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)
#define EDSA_HAVE_AVX2_BUILD 1
#include <immintrin.h>
#else
#define EDSA_HAVE_AVX2_BUILD 0
#endif

namespace edsa::kernels::avx2 {

#if EDSA_HAVE_AVX2_BUILD

bool available() {
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
}

double dot(const double* x, const double* y, size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i),
                           acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i + 4),
                           _mm256_loadu_pd(y + i + 4), acc1);
  }
  for (; i + 4 <= n; i += 4) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i),
                           acc0);
  }
  acc0 = _mm256_add_pd(acc0, acc1);
  __m128d lo = _mm256_castpd256_pd128(acc0);
  __m128d hi = _mm256_extractf128_pd(acc0, 1);
  lo = _mm_add_pd(lo, hi);
  double s = _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
  for (; i < n; ++i) s += x[i] * y[i];
  return s;
}

void axpy(double a, const double* x, double* y, size_t n) {
  __m256d va = _mm256_set1_pd(a);
  size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d vy = _mm256_loadu_pd(y + i);
    vy = _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), vy);
    _mm256_storeu_pd(y + i, vy);
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

void scal(double a, double* x, size_t n) {
  __m256d va = _mm256_set1_pd(a);
  size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(x + i, _mm256_mul_pd(va, _mm256_loadu_pd(x + i)));
  }
  for (; i < n; ++i) x[i] *= a;
}

void matvec(const double* a, size_t rows, size_t cols, const double* x,
            double* y) {
  for (size_t r = 0; r < rows; ++r) y[r] = dot(a + r * cols, x, cols);
}

void matvec_t_acc(const double* a, size_t rows, size_t cols, const double* x,
                  double* y) {
  for (size_t r = 0; r < rows; ++r) axpy(x[r], a + r * cols, y, cols);
}

#else  // non-x86 build: never selected, route to scalar

bool available() { return false; }
double dot(const double* x, const double* y, size_t n) {
  return scalar::dot(x, y, n);
}
void axpy(double a, const double* x, double* y, size_t n) {
  scalar::axpy(a, x, y, n);
}
void scal(double a, double* x, size_t n) { scalar::scal(a, x, n); }
void matvec(const double* a, size_t rows, size_t cols, const double* x,
            double* y) {
  scalar::matvec(a, rows, cols, x, y);
}
void matvec_t_acc(const double* a, size_t rows, size_t cols, const double* x,
                  double* y) {
  scalar::matvec_t_acc(a, rows, cols, x, y);
}

#endif

}  // namespace edsa::kernels::avx2
