#ifndef HN_GRID_HPP
#define HN_GRID_HPP

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

namespace hn {

struct GridSpec {
  double re_min = -3.0, re_max = 3.0;
  double im_min = -2.0, im_max = 2.0;
  int nx = 2, ny = 2;

  double dx() const { return (re_max - re_min) / (nx - 1); }
  double dy() const { return (im_max - im_min) / (ny - 1); }
  double step() const { return dx() > dy() ? dx() : dy(); }
  std::complex<double> node(int i, int j) const {
    return {re_min + i * dx(), im_min + j * dy()};
  }
};

// Rectangular field of Lyapunov exponents L(E) = L_0(E) with per-node
// convergence diagnostics.
struct LyapunovField {
  GridSpec grid;
  std::vector<double> value;   // row-major: j*nx + i
  std::vector<double> stderr_; // cross-phase standard deviation
  std::vector<std::uint8_t> flag;  // 1 = non-convergence suspected

  double& at(int i, int j) { return value[static_cast<std::size_t>(j) * grid.nx + i]; }
  double at(int i, int j) const { return value[static_cast<std::size_t>(j) * grid.nx + i]; }
  double stderr_at(int i, int j) const { return stderr_[static_cast<std::size_t>(j) * grid.nx + i]; }
  bool flagged(int i, int j) const { return flag[static_cast<std::size_t>(j) * grid.nx + i] != 0; }
  double max_stderr() const;
  // Bilinear interpolation; clamps to the grid boundary.
  double interp(std::complex<double> e) const;
};

void write_field_csv(const LyapunovField& f, const std::string& path);
// Binary layout: "HNGRID01", int32 nx, int32 ny, 4 doubles (re_min, re_max,
// im_min, im_max), nx*ny row-major doubles of L, nx*ny of stderr, nx*ny bytes
// of flags.
void write_field_bin(const LyapunovField& f, const std::string& path);
LyapunovField read_field_bin(const std::string& path);

}  // namespace hn

#endif
