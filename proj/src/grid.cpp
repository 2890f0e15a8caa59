#include "ncgw/grid.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstring>

namespace ncgw {

namespace {

bool power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

// compensated sum, keeps reductions deterministic and tight
struct Kahan {
  double s = 0.0, c = 0.0;
  void add(double v) {
    const double y = v - c;
    const double t = s + y;
    c = (t - s) - y;
    s = t;
  }
};

} // namespace

void GridSpec::validate() const {
  if (!power_of_two(n) || n < 64)
    throw ConfigError("GridSpec: n must be a power of two >= 64");
  if (!(x_max > x_min) || !(y_max > y_min))
    throw ConfigError("GridSpec: empty domain");
  if (!std::isfinite(x_min) || !std::isfinite(x_max) ||
      !std::isfinite(y_min) || !std::isfinite(y_max))
    throw ConfigError("GridSpec: non-finite bounds");
}

GridSpec auto_grid(int n, double cx, double cy, double sigma_x, double sigma_y,
                   double pad_sigmas) {
  if (!(sigma_x > 0.0) || !(sigma_y > 0.0) || !(pad_sigmas >= 8.0))
    throw ConfigError("auto_grid: sigmas must be positive, pad_sigmas >= 8");
  GridSpec g;
  g.n = n;
  const double hx = pad_sigmas * sigma_x;
  const double hy = pad_sigmas * sigma_y;
  g.x_min = cx - hx;
  g.x_max = cx + hx;
  g.y_min = cy - hy;
  g.y_max = cy + hy;
  g.validate();
  return g;
}

WaveFunction2D make_wavefunction(const GridSpec& g, double time) {
  g.validate();
  WaveFunction2D w;
  w.grid = g;
  w.time = time;
  w.amp.assign(size_t(g.n) * g.n, cplx(0.0, 0.0));
  return w;
}

double WaveFunction2D::norm2() const {
  Kahan acc;
  for (const cplx& a : amp) acc.add(std::norm(a));
  return acc.s * grid.dx() * grid.dy();
}

double WaveFunction2D::norm() const { return std::sqrt(norm2()); }

void WaveFunction2D::normalize() {
  const double n = norm();
  if (!(n > 0.0) || !std::isfinite(n))
    throw OracleError("normalize: state has zero or non-finite norm");
  for (cplx& a : amp) a /= n;
}

double WaveFunction2D::max_abs() const {
  double m = 0.0;
  for (const cplx& a : amp) m = std::max(m, std::abs(a));
  return m;
}

double WaveFunction2D::boundary_peak_ratio() const {
  const int n = grid.n;
  double edge = 0.0;
  for (int i = 0; i < n; ++i) {
    edge = std::max(edge, std::abs(amp[idx(i, 0)]));
    edge = std::max(edge, std::abs(amp[idx(i, n - 1)]));
    edge = std::max(edge, std::abs(amp[idx(0, i)]));
    edge = std::max(edge, std::abs(amp[idx(n - 1, i)]));
  }
  const double peak = max_abs();
  return peak > 0.0 ? edge / peak : 0.0;
}

cplx overlap(const WaveFunction2D& a, const WaveFunction2D& b) {
  if (a.grid.n != b.grid.n)
    throw ConfigError("overlap: mismatched grids");
  Kahan re, im;
  for (size_t k = 0; k < a.amp.size(); ++k) {
    const cplx v = std::conj(a.amp[k]) * b.amp[k];
    re.add(v.real());
    im.add(v.imag());
  }
  return cplx(re.s, im.s) * a.grid.dx() * a.grid.dy();
}

double fidelity(const WaveFunction2D& a, const WaveFunction2D& b) {
  return std::abs(overlap(a, b)) / (a.norm() * b.norm());
}

std::vector<double> spectral_freqs(int n, double h) {
  std::vector<double> k(n);
  const double base = 2.0 * M_PI / (n * h);
  for (int i = 0; i < n; ++i) k[i] = base * (i < n / 2 ? i : i - n);
  return k;
}

Fft2D::Fft2D(int n) : n_(n), buf_(size_t(n) * n) {
  auto* b = reinterpret_cast<fftw_complex*>(buf_.data());
  plan_fwd2d_ = fftw_plan_dft_2d(n, n, b, b, FFTW_FORWARD, FFTW_ESTIMATE);
  plan_bwd2d_ = fftw_plan_dft_2d(n, n, b, b, FFTW_BACKWARD, FFTW_ESTIMATE);
  const int sz[1] = {n};
  // rows are contiguous in x
  plan_fwd_x_ = fftw_plan_many_dft(1, sz, n, b, nullptr, 1, n, b, nullptr, 1,
                                   n, FFTW_FORWARD, FFTW_ESTIMATE);
  plan_bwd_x_ = fftw_plan_many_dft(1, sz, n, b, nullptr, 1, n, b, nullptr, 1,
                                   n, FFTW_BACKWARD, FFTW_ESTIMATE);
  plan_fwd_y_ = fftw_plan_many_dft(1, sz, n, b, nullptr, n, 1, b, nullptr, n,
                                   1, FFTW_FORWARD, FFTW_ESTIMATE);
  plan_bwd_y_ = fftw_plan_many_dft(1, sz, n, b, nullptr, n, 1, b, nullptr, n,
                                   1, FFTW_BACKWARD, FFTW_ESTIMATE);
}

Fft2D::~Fft2D() {
  for (void* p : {plan_fwd2d_, plan_bwd2d_, plan_fwd_x_, plan_bwd_x_,
                  plan_fwd_y_, plan_bwd_y_})
    fftw_destroy_plan(static_cast<fftw_plan>(p));
}

namespace {
void run_inplace(void* plan, cplx* data, std::vector<cplx>& buf, int n,
                 double scale) {
  const size_t bytes = sizeof(cplx) * size_t(n) * n;
  std::memcpy(buf.data(), data, bytes);
  fftw_execute(static_cast<fftw_plan>(plan));
  if (scale == 1.0) {
    std::memcpy(data, buf.data(), bytes);
  } else {
    for (size_t k = 0; k < buf.size(); ++k) data[k] = buf[k] * scale;
  }
}
} // namespace

void Fft2D::forward2d(cplx* d) { run_inplace(plan_fwd2d_, d, buf_, n_, 1.0); }
void Fft2D::backward2d(cplx* d) {
  run_inplace(plan_bwd2d_, d, buf_, n_, 1.0 / (double(n_) * n_));
}
void Fft2D::forward_x(cplx* d) { run_inplace(plan_fwd_x_, d, buf_, n_, 1.0); }
void Fft2D::backward_x(cplx* d) {
  run_inplace(plan_bwd_x_, d, buf_, n_, 1.0 / n_);
}
void Fft2D::forward_y(cplx* d) { run_inplace(plan_fwd_y_, d, buf_, n_, 1.0); }
void Fft2D::backward_y(cplx* d) {
  run_inplace(plan_bwd_y_, d, buf_, n_, 1.0 / n_);
}

} // namespace ncgw
