#pragma once

#include <complex>
#include <vector>

namespace impulse::fft {

bool is_pow2(int n);
int next_pow2(int n);

// In-place iterative radix-2 transform; n must be a power of two. The inverse
// applies the 1/n scaling.
void transform(std::complex<double>* data, int n, bool inverse);
inline void transform(std::vector<std::complex<double>>& data, bool inverse) {
  transform(data.data(), static_cast<int>(data.size()), inverse);
}

// Row-major nx-by-ny transform; line transforms run in parallel.
void transform_2d(std::vector<std::complex<double>>& data, int nx, int ny, bool inverse);

// Periodic convolution of real samples with real weights via the transform.
// Sizes must match and be a power of two (per axis for 2D).
std::vector<double> convolve(const std::vector<double>& u, const std::vector<double>& w);
std::vector<double> convolve_2d(const std::vector<double>& u, const std::vector<double>& w,
                                int nx, int ny);

}  // namespace impulse::fft
