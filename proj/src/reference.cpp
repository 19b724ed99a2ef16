#include "impulse/reference.hpp"

#include <cmath>
#include <stdexcept>

namespace impulse::ref {

std::vector<std::complex<double>> dft(const std::vector<std::complex<double>>& a, bool inverse) {
  int n = static_cast<int>(a.size());
  std::vector<std::complex<double>> out(a.size());
  double sign = inverse ? 1.0 : -1.0;
  for (int k = 0; k < n; ++k) {
    std::complex<double> acc(0.0, 0.0);
    for (int j = 0; j < n; ++j) {
      double ang = sign * 2.0 * M_PI * k * j / n;
      acc += a[j] * std::complex<double>(std::cos(ang), std::sin(ang));
    }
    out[k] = inverse ? acc / static_cast<double>(n) : acc;
  }
  return out;
}

std::vector<double> convolve_direct(const std::vector<double>& u, const std::vector<double>& w) {
  int n = static_cast<int>(u.size());
  if (w.size() != u.size()) throw std::invalid_argument("convolve_direct: size mismatch");
  std::vector<double> out(u.size(), 0.0);
  for (int i = 0; i < n; ++i) {
    double acc = 0.0;
    for (int j = 0; j < n; ++j) {
      int k = i - j;
      if (k < 0) k += n;
      acc += u[j] * w[k];
    }
    out[i] = acc;
  }
  return out;
}

Field advance_free_serial(const ModelParams& p, const Field& u0, const season::SeasonConfig& cfg) {
  if (u0.dim != 1) throw std::invalid_argument("advance_free_serial supports 1D fields");
  int n = u0.nx();
  double dt = 1.0 / cfg.substeps;

  std::vector<std::complex<double>> mult(n);
  for (int k = 0; k < n; ++k) {
    int kk = (k <= n / 2) ? k : k - n;
    double z = 2.0 * M_PI * kk / (n * u0.ax.spacing);
    mult[k] = std::polar(std::exp(-dt * p.A.xx * z * z), -dt * p.q.x * z);
  }

  Field f = u0;
  for (int s = 0; s < cfg.substeps; ++s) {
    for (double& v : f.values) v = growth_flow(p.growth, v, 0.5 * dt);
    std::vector<std::complex<double>> buf(f.values.begin(), f.values.end());
    buf = dft(buf, false);
    for (int k = 0; k < n; ++k) buf[k] *= mult[k];
    buf = dft(buf, true);
    for (int k = 0; k < n; ++k) f.values[k] = std::max(0.0, buf[k].real());
    for (double& v : f.values) v = growth_flow(p.growth, v, 0.5 * dt);
  }
  return f;
}

Field green_convolution(const ModelParams& p, const Field& u0, double t) {
  Field out = u0;
  double cell = u0.cell_volume();
  if (u0.dim == 1) {
    for (int i = 0; i < u0.nx(); ++i) {
      double acc = 0.0;
      for (int j = 0; j < u0.nx(); ++j) {
        Vec d = Vec::of(u0.ax.coord(i) - u0.ax.coord(j));
        acc += season::green_eval(p, d, t) * u0.at(j);
      }
      out.at(i) = acc * cell;
    }
    return out;
  }
  for (int ix = 0; ix < u0.nx(); ++ix) {
    for (int iy = 0; iy < u0.ny(); ++iy) {
      double acc = 0.0;
      for (int jx = 0; jx < u0.nx(); ++jx) {
        for (int jy = 0; jy < u0.ny(); ++jy) {
          Vec d = Vec::of2(u0.ax.coord(ix) - u0.ax.coord(jx), u0.ay.coord(iy) - u0.ay.coord(jy));
          acc += season::green_eval(p, d, t) * u0.at(jx, jy);
        }
      }
      out.at(ix, iy) = acc * cell;
    }
  }
  return out;
}

}  // namespace impulse::ref
