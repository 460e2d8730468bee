#pragma once

#include <cstddef>

namespace pdrwm::simd {

enum class Backend { Scalar, Avx2 };

/// True when the CPU reports both AVX2 and FMA.
bool avx2_available();

/// Backend used by the dispatching entry points below. Chosen once from the
/// CPU features; PDRWM_SIMD=scalar forces the reference kernels.
Backend active_backend();

/// Overrides the dispatch choice (tests). Requesting Avx2 on a CPU without it
/// throws Error.
void set_backend(Backend backend);

const char* backend_name(Backend backend);

double dot(const double* a, const double* b, std::size_t n);
/// y += alpha * x
void axpy(double alpha, const double* x, double* y, std::size_t n);
double l1_distance(const double* a, const double* b, std::size_t n);
double sum(const double* a, std::size_t n);
/// y = A x, A row-major rows x cols.
void gemv(const double* a, std::size_t rows, std::size_t cols, const double* x, double* y);
/// out = v^T A, A row-major rows x cols.
void vecmat(const double* v, const double* a, std::size_t rows, std::size_t cols, double* out);

namespace scalar {
double dot(const double* a, const double* b, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
double l1_distance(const double* a, const double* b, std::size_t n);
double sum(const double* a, std::size_t n);
void gemv(const double* a, std::size_t rows, std::size_t cols, const double* x, double* y);
void vecmat(const double* v, const double* a, std::size_t rows, std::size_t cols, double* out);
}  // namespace scalar

namespace avx2 {
double dot(const double* a, const double* b, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
double l1_distance(const double* a, const double* b, std::size_t n);
double sum(const double* a, std::size_t n);
void gemv(const double* a, std::size_t rows, std::size_t cols, const double* x, double* y);
void vecmat(const double* v, const double* a, std::size_t rows, std::size_t cols, double* out);
}  // namespace avx2

}  // namespace pdrwm::simd
