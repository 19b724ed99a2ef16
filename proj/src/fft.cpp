#include "impulse/fft.hpp"

#include <cmath>
#include <stdexcept>

namespace impulse::fft {

bool is_pow2(int n) { return n > 0 && (n & (n - 1)) == 0; }

int next_pow2(int n) {
  int p = 1;
  while (p < n) p <<= 1;
  return p;
}

void transform(std::complex<double>* a, int n, bool inverse) {
  if (!is_pow2(n)) throw std::invalid_argument("fft size must be a power of two");

  // Bit-reversal permutation.
  for (int i = 1, j = 0; i < n; ++i) {
    int bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }

  for (int len = 2; len <= n; len <<= 1) {
    double ang = 2.0 * M_PI / len * (inverse ? 1.0 : -1.0);
    std::complex<double> wlen(std::cos(ang), std::sin(ang));
    for (int i = 0; i < n; i += len) {
      std::complex<double> w(1.0, 0.0);
      for (int j = 0; j < len / 2; ++j) {
        // Resynchronize the twiddle recurrence: drift of w seeds the whole
        // domain at ~len*eps, which matters once a growth term amplifies it.
        if ((j & 15) == 0) w = std::polar(1.0, ang * j);
        std::complex<double> u = a[i + j];
        std::complex<double> v = a[i + j + len / 2] * w;
        a[i + j] = u + v;
        a[i + j + len / 2] = u - v;
        w *= wlen;
      }
    }
  }
  if (inverse) {
    double scale = 1.0 / n;
    for (int i = 0; i < n; ++i) a[i] *= scale;
  }
}

void transform_2d(std::vector<std::complex<double>>& data, int nx, int ny, bool inverse) {
  if (static_cast<int>(data.size()) != nx * ny) {
    throw std::invalid_argument("fft: 2d buffer size mismatch");
  }
#pragma omp parallel for schedule(static)
  for (int ix = 0; ix < nx; ++ix) {
    transform(data.data() + static_cast<std::size_t>(ix) * ny, ny, inverse);
  }
#pragma omp parallel
  {
    std::vector<std::complex<double>> line(nx);
#pragma omp for schedule(static)
    for (int iy = 0; iy < ny; ++iy) {
      for (int ix = 0; ix < nx; ++ix) line[ix] = data[static_cast<std::size_t>(ix) * ny + iy];
      transform(line.data(), nx, inverse);
      for (int ix = 0; ix < nx; ++ix) data[static_cast<std::size_t>(ix) * ny + iy] = line[ix];
    }
  }
}

std::vector<double> convolve(const std::vector<double>& u, const std::vector<double>& w) {
  int n = static_cast<int>(u.size());
  if (w.size() != u.size()) throw std::invalid_argument("convolve: size mismatch");
  std::vector<std::complex<double>> fu(u.begin(), u.end());
  std::vector<std::complex<double>> fw(w.begin(), w.end());
  transform(fu, false);
  transform(fw, false);
  for (int i = 0; i < n; ++i) fu[i] *= fw[i];
  transform(fu, true);
  std::vector<double> out(u.size());
  for (int i = 0; i < n; ++i) out[i] = fu[i].real();
  return out;
}

std::vector<double> convolve_2d(const std::vector<double>& u, const std::vector<double>& w,
                                int nx, int ny) {
  if (u.size() != w.size() || static_cast<int>(u.size()) != nx * ny) {
    throw std::invalid_argument("convolve_2d: size mismatch");
  }
  std::vector<std::complex<double>> fu(u.begin(), u.end());
  std::vector<std::complex<double>> fw(w.begin(), w.end());
  transform_2d(fu, nx, ny, false);
  transform_2d(fw, nx, ny, false);
  std::size_t total = u.size();
#pragma omp parallel for schedule(static)
  for (long long i = 0; i < static_cast<long long>(total); ++i) {
    fu[static_cast<std::size_t>(i)] *= fw[static_cast<std::size_t>(i)];
  }
  transform_2d(fu, nx, ny, true);
  std::vector<double> out(total);
  for (std::size_t i = 0; i < total; ++i) out[i] = fu[i].real();
  return out;
}

}  // namespace impulse::fft
