#include <atomic>
#include <cstdlib>
#include <cstring>

#include "pdrwm/errors.hpp"
#include "pdrwm/simd/kernels.hpp"

namespace pdrwm::simd {
namespace {

Backend detect() {
  const char* forced = std::getenv("PDRWM_SIMD");
  if (forced != nullptr && std::strcmp(forced, "scalar") == 0) return Backend::Scalar;
  return avx2_available() ? Backend::Avx2 : Backend::Scalar;
}

std::atomic<Backend>& current() {
  static std::atomic<Backend> backend{detect()};
  return backend;
}

bool use_avx2() { return current().load(std::memory_order_relaxed) == Backend::Avx2; }

}  // namespace

bool avx2_available() {
#if defined(__x86_64__) || defined(__i386__)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Backend active_backend() { return current().load(); }

void set_backend(Backend backend) {
  if (backend == Backend::Avx2 && !avx2_available())
    throw Error("AVX2 backend requested on a CPU without AVX2/FMA");
  current().store(backend);
}

const char* backend_name(Backend backend) {
  return backend == Backend::Avx2 ? "avx2" : "scalar";
}

double dot(const double* a, const double* b, std::size_t n) {
  return use_avx2() ? avx2::dot(a, b, n) : scalar::dot(a, b, n);
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
  use_avx2() ? avx2::axpy(alpha, x, y, n) : scalar::axpy(alpha, x, y, n);
}

double l1_distance(const double* a, const double* b, std::size_t n) {
  return use_avx2() ? avx2::l1_distance(a, b, n) : scalar::l1_distance(a, b, n);
}

double sum(const double* a, std::size_t n) {
  return use_avx2() ? avx2::sum(a, n) : scalar::sum(a, n);
}

void gemv(const double* a, std::size_t rows, std::size_t cols, const double* x, double* y) {
  use_avx2() ? avx2::gemv(a, rows, cols, x, y) : scalar::gemv(a, rows, cols, x, y);
}

void vecmat(const double* v, const double* a, std::size_t rows, std::size_t cols, double* out) {
  use_avx2() ? avx2::vecmat(v, a, rows, cols, out) : scalar::vecmat(v, a, rows, cols, out);
}

}  // namespace pdrwm::simd
