#include "edsa/kernels.hpp"

#include <cstdlib>
#include <string>

namespace edsa::kernels {

namespace scalar {

double dot(const double* x, const double* y, size_t n) {
  double s = 0.0;
  for (size_t i = 0; i < n; ++i) s += x[i] * y[i];
  return s;
}

void axpy(double a, const double* x, double* y, size_t n) {
  for (size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void scal(double a, double* x, size_t n) {
  for (size_t i = 0; i < n; ++i) x[i] *= a;
}

void matvec(const double* a, size_t rows, size_t cols, const double* x,
            double* y) {
  for (size_t r = 0; r < rows; ++r) y[r] = dot(a + r * cols, x, cols);
}

void matvec_t_acc(const double* a, size_t rows, size_t cols, const double* x,
                  double* y) {
  for (size_t r = 0; r < rows; ++r) axpy(x[r], a + r * cols, y, cols);
}

}  // namespace scalar

namespace {

struct Vtable {
  double (*dot)(const double*, const double*, size_t);
  void (*axpy)(double, const double*, double*, size_t);
  void (*scal)(double, double*, size_t);
  void (*matvec)(const double*, size_t, size_t, const double*, double*);
  void (*matvec_t_acc)(const double*, size_t, size_t, const double*, double*);
};

constexpr Vtable kScalar{scalar::dot, scalar::axpy, scalar::scal,
                         scalar::matvec, scalar::matvec_t_acc};
constexpr Vtable kAvx2{avx2::dot, avx2::axpy, avx2::scal, avx2::matvec,
                       avx2::matvec_t_acc};

struct Dispatch {
  Backend backend;
  const Vtable* vt;

  Dispatch() {
    backend = avx2::available() ? Backend::Avx2 : Backend::Scalar;
    if (const char* env = std::getenv("EDSA_KERNELS")) {
      std::string v(env);
      if (v == "scalar") backend = Backend::Scalar;
      if (v == "avx2" && avx2::available()) backend = Backend::Avx2;
    }
    vt = backend == Backend::Avx2 ? &kAvx2 : &kScalar;
  }
};

Dispatch& dispatch() {
  static Dispatch d;
  return d;
}

}  // namespace

Backend active_backend() { return dispatch().backend; }

bool backend_supported(Backend b) {
  return b == Backend::Scalar || avx2::available();
}

bool set_backend(Backend b) {
  if (!backend_supported(b)) return false;
  dispatch().backend = b;
  dispatch().vt = b == Backend::Avx2 ? &kAvx2 : &kScalar;
  return true;
}

std::string_view backend_name(Backend b) {
  return b == Backend::Avx2 ? "avx2" : "scalar";
}

double dot(const double* x, const double* y, size_t n) {
  return dispatch().vt->dot(x, y, n);
}
void axpy(double a, const double* x, double* y, size_t n) {
  dispatch().vt->axpy(a, x, y, n);
}
void scal(double a, double* x, size_t n) { dispatch().vt->scal(a, x, n); }
void matvec(const double* a, size_t rows, size_t cols, const double* x,
            double* y) {
  dispatch().vt->matvec(a, rows, cols, x, y);
}
void matvec_t_acc(const double* a, size_t rows, size_t cols, const double* x,
                  double* y) {
  dispatch().vt->matvec_t_acc(a, rows, cols, x, y);
}

}  // namespace edsa::kernels
