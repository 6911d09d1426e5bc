#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "teamscope/simd/kernels.hpp"

namespace teamscope::simd {
namespace {

constexpr KernelTable kScalar{Level::Scalar, scalar::dot_f32, scalar::dot_f64, scalar::axpy_f32, scalar::axpy_f64};
#if TEAMSCOPE_HAVE_AVX2
constexpr KernelTable kAvx2{Level::Avx2, avx2::dot_f32, avx2::dot_f64, avx2::axpy_f32, avx2::axpy_f64};
#endif
#if TEAMSCOPE_HAVE_NEON
constexpr KernelTable kNeon{Level::Neon, neon::dot_f32, neon::dot_f64, neon::axpy_f32, neon::axpy_f64};
#endif

const KernelTable* detect() {
  if (const char* env = std::getenv("TEAMSCOPE_SIMD"); env != nullptr && *env != '\0') {
    return &table(parse_level(env));
  }
  if (available(Level::Avx2)) return &table(Level::Avx2);
  if (available(Level::Neon)) return &table(Level::Neon);
  return &kScalar;
}

std::atomic<const KernelTable*> g_active{nullptr};

}  // namespace

bool available(Level level) {
  switch (level) {
    case Level::Scalar:
      return true;
    case Level::Avx2:
#if TEAMSCOPE_HAVE_AVX2
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
    case Level::Neon:
#if TEAMSCOPE_HAVE_NEON
      return true;
#else
      return false;
#endif
  }
  return false;
}

const KernelTable& table(Level level) {
  if (!available(level)) throw std::invalid_argument("SIMD level not available: " + std::string(level_name(level)));
  switch (level) {
#if TEAMSCOPE_HAVE_AVX2
    case Level::Avx2:
      return kAvx2;
#endif
#if TEAMSCOPE_HAVE_NEON
    case Level::Neon:
      return kNeon;
#endif
    default:
      return kScalar;
  }
}

const KernelTable& kernels() {
  const KernelTable* t = g_active.load(std::memory_order_acquire);
  if (t == nullptr) {
    t = detect();
    g_active.store(t, std::memory_order_release);
  }
  return *t;
}

void set_level(Level level) { g_active.store(&table(level), std::memory_order_release); }

std::string_view level_name(Level level) {
  switch (level) {
    case Level::Scalar:
      return "scalar";
    case Level::Avx2:
      return "avx2";
    case Level::Neon:
      return "neon";
  }
  return "unknown";
}

Level parse_level(std::string_view name) {
  if (name == "scalar") return Level::Scalar;
  if (name == "avx2") return Level::Avx2;
  if (name == "neon") return Level::Neon;
  throw std::invalid_argument("unknown SIMD level: " + std::string(name));
}

}  // namespace teamscope::simd
