// Timing comparison of the parallel kernels against the serial references.
// Not a correctness gate (the unit tests cover that); run it to see what the
// transform and the OpenMP loops buy on a given machine.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "impulse/fft.hpp"
#include "impulse/hybrid.hpp"
#include "impulse/reference.hpp"
#include "impulse/season.hpp"

using namespace impulse;

namespace {

double ms_per_call(const std::function<void()>& fn, int reps) {
  auto t0 = std::chrono::steady_clock::now();
  for (int i = 0; i < reps; ++i) fn();
  auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double, std::milli>(t1 - t0).count() / reps;
}

std::vector<double> wave(int n) {
  std::vector<double> u(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    u[static_cast<std::size_t>(i)] = std::exp(-0.001 * (i - n / 2) * (i - n / 2)) +
                                     0.1 * std::sin(0.05 * i);
  }
  return u;
}

}  // namespace

int main() {
  int threads = 1;
#ifdef _OPENMP
  threads = omp_get_max_threads();
#endif
  std::printf("kernel benchmark (threads=%d)\n", threads);
  std::printf("%-28s %12s %12s %9s %12s\n", "kernel", "serial[ms]", "parallel[ms]", "ratio",
              "max|diff|");

  {
    const int n = 2048;
    std::vector<std::complex<double>> a(static_cast<std::size_t>(n));
    auto u = wave(n);
    for (int i = 0; i < n; ++i) a[static_cast<std::size_t>(i)] = u[static_cast<std::size_t>(i)];
    auto serial = ms_per_call([&]() { ref::dft(a, false); }, 3);
    auto fast = ms_per_call(
        [&]() {
          auto b = a;
          fft::transform(b, false);
        },
        50);
    auto exact = ref::dft(a, false);
    auto b = a;
    fft::transform(b, false);
    double diff = 0.0;
    for (int i = 0; i < n; ++i) {
      diff = std::max(diff, std::abs(exact[static_cast<std::size_t>(i)] -
                                     b[static_cast<std::size_t>(i)]));
    }
    std::printf("%-28s %12.3f %12.3f %9.1fx %12.3e\n", "transform n=2048", serial, fast,
                serial / fast, diff);
  }

  {
    const int n = 4096;
    auto u = wave(n);
    auto w = wave(n);
    double total = 0.0;
    for (double v : w) total += v;
    for (double& v : w) v /= total;
    auto serial = ms_per_call([&]() { ref::convolve_direct(u, w); }, 3);
    auto fast = ms_per_call([&]() { fft::convolve(u, w); }, 50);
    auto a = ref::convolve_direct(u, w);
    auto b = fft::convolve(u, w);
    double diff = 0.0;
    for (int i = 0; i < n; ++i) {
      diff = std::max(diff, std::abs(a[static_cast<std::size_t>(i)] -
                                     b[static_cast<std::size_t>(i)]));
    }
    std::printf("%-28s %12.3f %12.3f %9.1fx %12.3e\n", "convolution n=4096", serial, fast,
                serial / fast, diff);
  }

  {
    ModelParams p;  // Fisher defaults
    GridAxis ax = season::centered_axis(25.0, 0.05);
    Field f = Field::zeros(ax);
    f = hybrid::seed_ball(p, f);
    season::SeasonConfig cfg;
    cfg.check_boundary = false;
    auto serial = ms_per_call([&]() { ref::advance_free_serial(p, f, cfg); }, 2);
    auto fast = ms_per_call([&]() { season::advance_free(p, f, cfg); }, 20);
    Field a = ref::advance_free_serial(p, f, cfg);
    Field b = season::advance_free(p, f, cfg);
    double diff = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i) {
      diff = std::max(diff, std::abs(a.values[i] - b.values[i]));
    }
    std::printf("%-28s %12.3f %12.3f %9.1fx %12.3e\n", "season advance n=1024", serial, fast,
                serial / fast, diff);
  }

  return 0;
}
