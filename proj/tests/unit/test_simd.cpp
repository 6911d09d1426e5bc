#include <doctest.h>

#include <cmath>
#include <vector>

#include "teamscope/rng.hpp"
#include "teamscope/simd/kernels.hpp"

using namespace teamscope;

namespace {

template <typename T>
std::vector<T> random_vector(Rng& rng, std::size_t n) {
  std::vector<T> v(n);
  for (auto& x : v) x = static_cast<T>(2.0 * uniform01(rng) - 1.0);
  return v;
}

std::vector<simd::Level> levels() {
  std::vector<simd::Level> out;
  for (auto l : {simd::Level::Scalar, simd::Level::Avx2, simd::Level::Neon}) {
    if (simd::available(l)) out.push_back(l);
  }
  return out;
}

}  // namespace

TEST_CASE("scalar level is always available and names round-trip") {
  CHECK(simd::available(simd::Level::Scalar));
  for (auto l : {simd::Level::Scalar, simd::Level::Avx2, simd::Level::Neon}) {
    CHECK(simd::parse_level(simd::level_name(l)) == l);
  }
}

TEST_CASE("every compiled level agrees with the scalar kernels") {
  Rng rng(7);
  const auto& ref = simd::table(simd::Level::Scalar);
  for (auto level : levels()) {
    const auto& k = simd::table(level);
    CAPTURE(simd::level_name(level));
    for (std::size_t n = 0; n <= 70; ++n) {
      CAPTURE(n);
      const auto xf = random_vector<float>(rng, n), yf = random_vector<float>(rng, n);
      const auto xd = random_vector<double>(rng, n), yd = random_vector<double>(rng, n);

      double abs_sum = 0.0;
      for (std::size_t i = 0; i < n; ++i) abs_sum += std::abs(static_cast<double>(xf[i]) * yf[i]);
      CHECK(std::abs(k.dot_f32(xf.data(), yf.data(), n) - ref.dot_f32(xf.data(), yf.data(), n)) <=
            1e-5 * (1.0 + abs_sum));
      CHECK(std::abs(k.dot_f64(xd.data(), yd.data(), n) - ref.dot_f64(xd.data(), yd.data(), n)) <=
            1e-13 * (1.0 + static_cast<double>(n)));

      auto af = yf, bf = yf;
      k.axpy_f32(0.37f, xf.data(), af.data(), n);
      ref.axpy_f32(0.37f, xf.data(), bf.data(), n);
      for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(af[i] - bf[i]) <= 1e-6f);

      auto ad = yd, bd = yd;
      k.axpy_f64(-1.25, xd.data(), ad.data(), n);
      ref.axpy_f64(-1.25, xd.data(), bd.data(), n);
      for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(ad[i] - bd[i]) <= 1e-15);
    }
  }
}

TEST_CASE("scalar dot matches a plain loop exactly") {
  Rng rng(11);
  const auto x = random_vector<double>(rng, 33), y = random_vector<double>(rng, 33);
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  CHECK(simd::table(simd::Level::Scalar).dot_f64(x.data(), y.data(), x.size()) == doctest::Approx(s).epsilon(1e-14));
}

TEST_CASE("set_level switches the active table") {
  const auto before = simd::kernels().level;
  simd::set_level(simd::Level::Scalar);
  CHECK(simd::kernels().level == simd::Level::Scalar);
  simd::set_level(before);
  CHECK(simd::kernels().level == before);
}
