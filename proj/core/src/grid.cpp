#include "hn/grid.hpp"

#include <algorithm>
#include <cstdio>
#include <cstring>
#include <stdexcept>

namespace hn {

double LyapunovField::max_stderr() const {
  double m = 0.0;
  for (double s : stderr_) m = std::max(m, s);
  return m;
}

double LyapunovField::interp(std::complex<double> e) const {
  double fx = (e.real() - grid.re_min) / grid.dx();
  double fy = (e.imag() - grid.im_min) / grid.dy();
  fx = std::clamp(fx, 0.0, static_cast<double>(grid.nx - 1));
  fy = std::clamp(fy, 0.0, static_cast<double>(grid.ny - 1));
  int i = std::min(static_cast<int>(fx), grid.nx - 2);
  int j = std::min(static_cast<int>(fy), grid.ny - 2);
  double tx = fx - i, ty = fy - j;
  return (1 - tx) * (1 - ty) * at(i, j) + tx * (1 - ty) * at(i + 1, j) +
         (1 - tx) * ty * at(i, j + 1) + tx * ty * at(i + 1, j + 1);
}

void write_field_csv(const LyapunovField& f, const std::string& path) {
  std::FILE* fp = std::fopen(path.c_str(), "w");
  if (!fp) throw std::runtime_error("cannot open " + path);
  std::fprintf(fp, "re,im,L,stderr,flag\n");
  for (int j = 0; j < f.grid.ny; ++j)
    for (int i = 0; i < f.grid.nx; ++i) {
      auto e = f.grid.node(i, j);
      std::fprintf(fp, "%.17g,%.17g,%.17g,%.17g,%d\n", e.real(), e.imag(), f.at(i, j),
                   f.stderr_at(i, j), f.flagged(i, j) ? 1 : 0);
    }
  std::fclose(fp);
}

namespace {
constexpr char kMagic[8] = {'H', 'N', 'G', 'R', 'I', 'D', '0', '1'};
}

void write_field_bin(const LyapunovField& f, const std::string& path) {
  std::FILE* fp = std::fopen(path.c_str(), "wb");
  if (!fp) throw std::runtime_error("cannot open " + path);
  std::fwrite(kMagic, 1, 8, fp);
  std::int32_t dims[2] = {f.grid.nx, f.grid.ny};
  std::fwrite(dims, sizeof(std::int32_t), 2, fp);
  double bounds[4] = {f.grid.re_min, f.grid.re_max, f.grid.im_min, f.grid.im_max};
  std::fwrite(bounds, sizeof(double), 4, fp);
  std::fwrite(f.value.data(), sizeof(double), f.value.size(), fp);
  std::fwrite(f.stderr_.data(), sizeof(double), f.stderr_.size(), fp);
  std::fwrite(f.flag.data(), 1, f.flag.size(), fp);
  std::fclose(fp);
}

LyapunovField read_field_bin(const std::string& path) {
  std::FILE* fp = std::fopen(path.c_str(), "rb");
  if (!fp) throw std::runtime_error("cannot open " + path);
  char magic[8];
  if (std::fread(magic, 1, 8, fp) != 8 || std::memcmp(magic, kMagic, 8) != 0) {
    std::fclose(fp);
    throw std::runtime_error(path + ": not a HNGRID01 file");
  }
  LyapunovField f;
  std::int32_t dims[2];
  double bounds[4];
  if (std::fread(dims, sizeof(std::int32_t), 2, fp) != 2 ||
      std::fread(bounds, sizeof(double), 4, fp) != 4) {
    std::fclose(fp);
    throw std::runtime_error(path + ": truncated header");
  }
  f.grid.nx = dims[0];
  f.grid.ny = dims[1];
  f.grid.re_min = bounds[0];
  f.grid.re_max = bounds[1];
  f.grid.im_min = bounds[2];
  f.grid.im_max = bounds[3];
  std::size_t n = static_cast<std::size_t>(f.grid.nx) * f.grid.ny;
  f.value.resize(n);
  f.stderr_.resize(n);
  f.flag.resize(n);
  bool ok = std::fread(f.value.data(), sizeof(double), n, fp) == n &&
            std::fread(f.stderr_.data(), sizeof(double), n, fp) == n &&
            std::fread(f.flag.data(), 1, n, fp) == n;
  std::fclose(fp);
  if (!ok) throw std::runtime_error(path + ": truncated payload");
  return f;
}

}  // namespace hn
