#pragma once

// Dense vector kernels used by skip-gram training, typicality scoring and the
// role classifier. Each instruction-set level provides the same entry points;
// `kernels()` returns the table selected for the running CPU.

#include <cstddef>
#include <string_view>

namespace teamscope::simd {

enum class Level { Scalar, Avx2, Neon };

struct KernelTable {
  Level level;
  // sum_i x[i] * y[i]
  float (*dot_f32)(const float* x, const float* y, std::size_t n);
  double (*dot_f64)(const double* x, const double* y, std::size_t n);
  // y[i] += a * x[i]
  void (*axpy_f32)(float a, const float* x, float* y, std::size_t n);
  void (*axpy_f64)(double a, const double* x, double* y, std::size_t n);
};

namespace scalar {
float dot_f32(const float* x, const float* y, std::size_t n);
double dot_f64(const double* x, const double* y, std::size_t n);
void axpy_f32(float a, const float* x, float* y, std::size_t n);
void axpy_f64(double a, const double* x, double* y, std::size_t n);
}  // namespace scalar

namespace avx2 {
float dot_f32(const float* x, const float* y, std::size_t n);
double dot_f64(const double* x, const double* y, std::size_t n);
void axpy_f32(float a, const float* x, float* y, std::size_t n);
void axpy_f64(double a, const double* x, double* y, std::size_t n);
}  // namespace avx2

namespace neon {
float dot_f32(const float* x, const float* y, std::size_t n);
double dot_f64(const double* x, const double* y, std::size_t n);
void axpy_f32(float a, const float* x, float* y, std::size_t n);
void axpy_f64(double a, const double* x, double* y, std::size_t n);
}  // namespace neon

// True when the level was compiled in and the CPU supports it.
bool available(Level level);

// Table for a specific level; throws std::invalid_argument if unavailable.
const KernelTable& table(Level level);

// Active table. Defaults to the best available level; TEAMSCOPE_SIMD=scalar|avx2|neon
// in the environment overrides the default at first use.
const KernelTable& kernels();

// Pins the active level (tests, `--simd` flag). Not thread-safe against
// concurrent kernel use; call before starting work.
void set_level(Level level);

std::string_view level_name(Level level);
Level parse_level(std::string_view name);

}  // namespace teamscope::simd
