#pragma once

#include <vector>

#include "ncgw/params.hpp"

namespace ncgw {

// Uniform periodic grid over [x_min, x_max) x [y_min, y_max); the upper edges
// are excluded so spectral derivatives see an exact period.
struct GridSpec {
  int n = 256;
  double x_min, x_max, y_min, y_max;

  double dx() const { return (x_max - x_min) / n; }
  double dy() const { return (y_max - y_min) / n; }
  double x(int i) const { return x_min + i * dx(); }
  double y(int j) const { return y_min + j * dy(); }
  void validate() const;
};

// Square grid centered at (cx, cy) with half-width chosen to cover
// pad_sigmas standard deviations of a Gaussian with the given widths.
GridSpec auto_grid(int n, double cx, double cy, double sigma_x, double sigma_y,
                   double pad_sigmas);

// Row-major with x fastest: amp[iy * n + ix].
struct WaveFunction2D {
  GridSpec grid;
  double time = 0.0;
  std::vector<cplx> amp;

  size_t idx(int ix, int iy) const { return size_t(iy) * grid.n + ix; }
  double norm2() const;                 // integral of |psi|^2
  double norm() const;
  void normalize();                     // throws OracleError on zero norm
  double max_abs() const;
  double boundary_peak_ratio() const;   // outermost ring vs global peak
};

WaveFunction2D make_wavefunction(const GridSpec& g, double time = 0.0);

cplx overlap(const WaveFunction2D& a, const WaveFunction2D& b); // <a|b>
double fidelity(const WaveFunction2D& a, const WaveFunction2D& b);

// Angular wavenumbers in transform ordering (0, 1, ..., n/2-1, -n/2, ..., -1)
// scaled by 2 pi / (n h).
std::vector<double> spectral_freqs(int n, double h);

// Deterministic single-threaded complex 2D FFT plus batched 1D transforms
// along either axis, for an n x n row-major array.
class Fft2D {
 public:
  explicit Fft2D(int n);
  ~Fft2D();
  Fft2D(const Fft2D&) = delete;
  Fft2D& operator=(const Fft2D&) = delete;

  void forward2d(cplx* data);       // unnormalized
  void backward2d(cplx* data);      // divides by n^2
  void forward_x(cplx* data);       // rows: x -> kx
  void backward_x(cplx* data);
  void forward_y(cplx* data);       // columns: y -> ky
  void backward_y(cplx* data);

 private:
  int n_;
  void* plan_fwd2d_;
  void* plan_bwd2d_;
  void* plan_fwd_x_;
  void* plan_bwd_x_;
  void* plan_fwd_y_;
  void* plan_bwd_y_;
  std::vector<cplx> buf_;
};

} // namespace ncgw
