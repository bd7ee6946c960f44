#pragma once

#include <cstddef>
#include <string_view>

// Dense double-precision primitives behind the model training loops (CBOW
// negative sampling, LSTM matvecs, softmax head). Scalar reference
// implementations always exist; an AVX2+FMA variant is selected at runtime
// when the CPU supports it. Force a backend with EDSA_KERNELS=scalar|avx2
// or set_backend() (tests rely on both).
namespace edsa::kernels {

enum class Backend { Scalar, Avx2 };

Backend active_backend();
bool set_backend(Backend b);         // false if unsupported on this CPU
bool backend_supported(Backend b);
std::string_view backend_name(Backend b);

// y . x
double dot(const double* x, const double* y, size_t n);
// y += a * x
void axpy(double a, const double* x, double* y, size_t n);
// x *= a
void scal(double a, double* x, size_t n);
// y = A x, A row-major (rows x cols)
void matvec(const double* a, size_t rows, size_t cols, const double* x,
            double* y);
// y += A^T x, A row-major (rows x cols), x has `rows` entries, y `cols`
void matvec_t_acc(const double* a, size_t rows, size_t cols, const double* x,
                  double* y);

namespace scalar {
double dot(const double* x, const double* y, size_t n);
void axpy(double a, const double* x, double* y, size_t n);
void scal(double a, double* x, size_t n);
void matvec(const double* a, size_t rows, size_t cols, const double* x,
            double* y);
void matvec_t_acc(const double* a, size_t rows, size_t cols, const double* x,
                  double* y);
}  // namespace scalar

namespace avx2 {
bool available();
double dot(const double* x, const double* y, size_t n);
void axpy(double a, const double* x, double* y, size_t n);
void scal(double a, double* x, size_t n);
void matvec(const double* a, size_t rows, size_t cols, const double* x,
            double* y);
void matvec_t_acc(const double* a, size_t rows, size_t cols, const double* x,
                  double* y);
}  // namespace avx2

}  // namespace edsa::kernels
