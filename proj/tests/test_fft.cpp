#include <doctest.h>

#include <cmath>
#include <random>

#include "impulse/fft.hpp"
#include "impulse/reference.hpp"

using namespace impulse;

namespace {

std::vector<std::complex<double>> random_signal(int n, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<std::complex<double>> a(static_cast<std::size_t>(n));
  for (auto& v : a) v = {u(rng), u(rng)};
  return a;
}

double max_diff(const std::vector<std::complex<double>>& a,
                const std::vector<std::complex<double>>& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

}  // namespace

TEST_CASE("transform matches the naive reference") {
  auto a = random_signal(256, 7);
  auto expected = ref::dft(a, false);
  auto b = a;
  fft::transform(b, false);
  CHECK(max_diff(expected, b) < 1e-10);

  auto inv = ref::dft(expected, true);
  fft::transform(b, true);
  CHECK(max_diff(inv, b) < 1e-10);
  CHECK(max_diff(b, a) < 1e-10);
}

TEST_CASE("parseval holds") {
  auto a = random_signal(512, 11);
  double time_norm = 0.0;
  for (const auto& v : a) time_norm += std::norm(v);
  auto b = a;
  fft::transform(b, false);
  double freq_norm = 0.0;
  for (const auto& v : b) freq_norm += std::norm(v);
  CHECK(freq_norm / a.size() == doctest::Approx(time_norm).epsilon(1e-12));
}

TEST_CASE("2d transform factorizes over rows and columns") {
  const int nx = 8, ny = 16;
  auto a = random_signal(nx * ny, 23);
  auto b = a;
  fft::transform_2d(b, nx, ny, false);

  // Rows first, then columns, with the serial reference.
  auto rows = a;
  for (int ix = 0; ix < nx; ++ix) {
    std::vector<std::complex<double>> line(rows.begin() + ix * ny, rows.begin() + (ix + 1) * ny);
    auto out = ref::dft(line, false);
    std::copy(out.begin(), out.end(), rows.begin() + ix * ny);
  }
  for (int iy = 0; iy < ny; ++iy) {
    std::vector<std::complex<double>> line(static_cast<std::size_t>(nx));
    for (int ix = 0; ix < nx; ++ix) line[static_cast<std::size_t>(ix)] = rows[ix * ny + iy];
    auto out = ref::dft(line, false);
    for (int ix = 0; ix < nx; ++ix) rows[ix * ny + iy] = out[static_cast<std::size_t>(ix)];
  }
  CHECK(max_diff(rows, b) < 1e-10);

  fft::transform_2d(b, nx, ny, true);
  CHECK(max_diff(b, a) < 1e-12);
}

TEST_CASE("fft convolution equals direct convolution") {
  std::mt19937 rng(41);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const int n = 512;
  std::vector<double> x(n), w(n);
  for (auto& v : x) v = u(rng);
  double total = 0.0;
  for (auto& v : w) {
    v = u(rng);
    total += v;
  }
  for (auto& v : w) v /= total;

  auto direct = ref::convolve_direct(x, w);
  auto fast = fft::convolve(x, w);
  double d = 0.0;
  for (int i = 0; i < n; ++i) d = std::max(d, std::abs(direct[i] - fast[i]));
  CHECK(d < 1e-12);
}

TEST_CASE("transform rejects non power-of-two sizes") {
  std::vector<std::complex<double>> a(100);
  CHECK_THROWS_AS(fft::transform(a, false), std::invalid_argument);
  CHECK(fft::next_pow2(100) == 128);
  CHECK(fft::is_pow2(128));
  CHECK_FALSE(fft::is_pow2(96));
}
