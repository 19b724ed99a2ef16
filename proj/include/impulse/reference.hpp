#pragma once

#include <complex>
#include <vector>

#include "impulse/model.hpp"
#include "impulse/season.hpp"

// Serial reference implementations of the parallel kernels. They trade speed
// for directness and stay independent of the fft module, so tests can compare
// the two routes and the benchmark can report the gap.
namespace impulse::ref {

// O(n^2) discrete Fourier transform.
std::vector<std::complex<double>> dft(const std::vector<std::complex<double>>& a, bool inverse);

// Direct periodic convolution of real samples with real weights.
std::vector<double> convolve_direct(const std::vector<double>& u, const std::vector<double>& w);

// One free-space season using the naive transform and plain loops (1D only).
Field advance_free_serial(const ModelParams& p, const Field& u0, const season::SeasonConfig& cfg);

// Direct convolution of a field with the heat kernel of the linearized
// season; the closed-form route the spectral step must reproduce when the
// growth is purely linear.
Field green_convolution(const ModelParams& p, const Field& u0, double t);

}  // namespace impulse::ref
