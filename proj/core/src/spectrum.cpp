#include "hn/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>

#include <json.hpp>

namespace hn {

ClassifiedGrid classify(const LyapunovField& field, double g, double tol0) {
  if (tol0 <= 2.0 * field.max_stderr())
    throw std::invalid_argument("classify: tol0 must exceed 2x the field's max stderr");
  std::size_t flagged = 0;
  for (auto f : field.flag) flagged += f;
  if (flagged > 0)
    throw std::invalid_argument("classify: field has " + std::to_string(flagged) +
                                " unresolved non-convergence flags");
  ClassifiedGrid out;
  out.grid = field.grid;
  out.cells.resize(field.value.size());
  for (std::size_t k = 0; k < field.value.size(); ++k) {
    double d = field.value[k] - g;
    EnergyClass& c = out.cells[k];
    c.margin = std::abs(d);
    if (d < -tol0)
      c.label = EnergyLabel::E_minus;
    else if (d > tol0)
      c.label = EnergyLabel::E_plus;
    else
      c.label = EnergyLabel::E_zero;
  }
  return out;
}

double oracle_free_L(cplx E) {
  cplx s = std::sqrt(E * E - 4.0);
  double r = std::abs(E / 2.0 + s / 2.0);
  if (r < 1e-300) return 0.0;
  return std::log(std::max(r, 1.0 / r));
}

double oracle_single_exp_L(cplx E, cplx lambda) {
  return std::max(oracle_free_L(E), std::log(std::abs(lambda)));
}

Sigma0Result real_spectrum_sigma0(const BaseSystem& base, const Potential& p,
                                  const Sigma0Cfg& cfg) {
  if (!p.real_valued() && p.form != PotentialForm::iid_diagonal)
    throw std::invalid_argument("real_spectrum_sigma0: potential must be real-valued at y=0");
  double sup = p.sup_abs();
  if (p.form == PotentialForm::iid_diagonal) sup = base.iid_halfwidth;
  double R = 2.0 + sup + cfg.margin;
  int npts = static_cast<int>(std::ceil(2.0 * R / cfg.scan_step)) + 1;

  Sigma0Result res;
  auto in_spectrum = [&](double e) {
    UHCertificate c = uh_test(base, p, cplx(e, 0.0), cfg.uh);
    if (c.verdict == UHVerdict::inconclusive) ++res.inconclusive_points;
    return c.verdict != UHVerdict::uniformly_hyperbolic;
  };

  std::vector<char> inside(static_cast<std::size_t>(npts));
  std::vector<double> xs(static_cast<std::size_t>(npts));
  for (int i = 0; i < npts; ++i) {
    xs[static_cast<std::size_t>(i)] = -R + 2.0 * R * i / (npts - 1);
    inside[static_cast<std::size_t>(i)] = in_spectrum(xs[static_cast<std::size_t>(i)]) ? 1 : 0;
  }

  auto refine = [&](double out_pt, double in_pt) {
    while (std::abs(out_pt - in_pt) > cfg.refine_resolution) {
      double mid = 0.5 * (out_pt + in_pt);
      (in_spectrum(mid) ? in_pt : out_pt) = mid;
    }
    return in_pt;
  };

  int i = 0;
  while (i < npts) {
    if (!inside[static_cast<std::size_t>(i)]) {
      ++i;
      continue;
    }
    int j = i;
    while (j + 1 < npts && inside[static_cast<std::size_t>(j + 1)]) ++j;
    Interval iv{xs[static_cast<std::size_t>(i)], xs[static_cast<std::size_t>(j)]};
    if (i > 0) iv.lo = refine(xs[static_cast<std::size_t>(i - 1)], iv.lo);
    if (j + 1 < npts) iv.hi = refine(xs[static_cast<std::size_t>(j + 1)], iv.hi);
    res.intervals.push_back(iv);
    i = j + 1;
  }
  return res;
}

namespace {

struct SegKey {
  long long a, b;
  bool operator<(const SegKey& o) const { return a != o.a ? a < o.a : b < o.b; }
};

SegKey quantize(cplx z, double h) {
  return {static_cast<long long>(std::llround(z.real() / h * 64.0)),
          static_cast<long long>(std::llround(z.imag() / h * 64.0))};
}

}  // namespace

std::vector<Polyline> extract_contours(const LyapunovField& field, double level,
                                       bool upper_half_only) {
  const GridSpec& gr = field.grid;
  double h = gr.step();
  struct Seg {
    cplx p, q;
    bool used = false;
  };
  std::vector<Seg> segs;
  auto interp_edge = [&](cplx a, cplx b, double va, double vb) {
    double t = va / (va - vb);
    return a + t * (b - a);
  };
  for (int j = 0; j + 1 < gr.ny; ++j) {
    for (int i = 0; i + 1 < gr.nx; ++i) {
      if (upper_half_only && gr.node(i, j).imag() < -1e-12) continue;
      double v00 = field.at(i, j) - level, v10 = field.at(i + 1, j) - level;
      double v01 = field.at(i, j + 1) - level, v11 = field.at(i + 1, j + 1) - level;
      int code = (v00 > 0 ? 1 : 0) | (v10 > 0 ? 2 : 0) | (v11 > 0 ? 4 : 0) | (v01 > 0 ? 8 : 0);
      if (code == 0 || code == 15) continue;
      cplx n00 = gr.node(i, j), n10 = gr.node(i + 1, j);
      cplx n01 = gr.node(i, j + 1), n11 = gr.node(i + 1, j + 1);
      cplx eb = interp_edge(n00, n10, v00, v10);  // bottom
      cplx er = interp_edge(n10, n11, v10, v11);  // right
      cplx et = interp_edge(n01, n11, v01, v11);  // top
      cplx el = interp_edge(n00, n01, v00, v01);  // left
      auto add = [&](cplx p, cplx q) { segs.push_back({p, q, false}); };
      switch (code) {
        case 1: case 14: add(el, eb); break;
        case 2: case 13: add(eb, er); break;
        case 3: case 12: add(el, er); break;
        case 4: case 11: add(er, et); break;
        case 6: case 9:  add(eb, et); break;
        case 7: case 8:  add(el, et); break;
        case 5: case 10: {
          // Saddle: split by the cell-center value.
          double vc = 0.25 * (v00 + v10 + v01 + v11);
          bool center_pos = vc > 0;
          if ((code == 5) == center_pos) {
            add(el, et);
            add(eb, er);
          } else {
            add(el, eb);
            add(er, et);
          }
          break;
        }
        default: break;
      }
    }
  }

  // Chain segments into polylines by matching quantized endpoints.
  std::multimap<SegKey, std::size_t> by_end;
  for (std::size_t s = 0; s < segs.size(); ++s) {
    by_end.emplace(quantize(segs[s].p, h), s);
    by_end.emplace(quantize(segs[s].q, h), s);
  }
  auto take_neighbor = [&](cplx pt, std::size_t self) -> std::size_t {
    auto [lo, hi] = by_end.equal_range(quantize(pt, h));
    for (auto it = lo; it != hi; ++it)
      if (it->second != self && !segs[it->second].used) return it->second;
    return segs.size();
  };

  std::vector<Polyline> out;
  for (std::size_t s0 = 0; s0 < segs.size(); ++s0) {
    if (segs[s0].used) continue;
    segs[s0].used = true;
    std::vector<cplx> chain = {segs[s0].p, segs[s0].q};
    // Extend forward from the tail, then from the head.
    for (int dir = 0; dir < 2; ++dir) {
      for (;;) {
        cplx tip = dir == 0 ? chain.back() : chain.front();
        std::size_t nxt = take_neighbor(tip, s0);
        if (nxt == segs.size()) break;
        segs[nxt].used = true;
        cplx other = std::abs(segs[nxt].p - tip) <= std::abs(segs[nxt].q - tip)
                         ? segs[nxt].q
                         : segs[nxt].p;
        if (dir == 0)
          chain.push_back(other);
        else
          chain.insert(chain.begin(), other);
      }
    }
    Polyline pl;
    pl.points = std::move(chain);
    pl.closed = std::abs(pl.points.front() - pl.points.back()) < 2.0 * h;
    double len = 0.0;
    for (std::size_t q = 1; q < pl.points.size(); ++q)
      len += std::abs(pl.points[q] - pl.points[q - 1]);
    if (len < 0.5 * h) continue;  // sub-resolution fragment
    out.push_back(std::move(pl));
  }
  return out;
}

double SpectrumSet::filled_area() const {
  double a = 0.0;
  for (const Cell& c : filled_cells) a += c.area();
  return a;
}

std::vector<cplx> SpectrumSet::sample_points() const {
  std::vector<cplx> pts;
  double h = grid_step > 0 ? grid_step : 0.05;
  for (const Interval& iv : real_part) {
    int m = std::max(1, static_cast<int>(std::ceil(iv.length() / h)));
    for (int k = 0; k <= m; ++k) pts.emplace_back(iv.lo + iv.length() * k / m, 0.0);
  }
  for (const Polyline& pl : complex_part)
    for (const cplx& z : pl.points) pts.push_back(z);
  // Filled regions contribute their boundary cells only: finite-volume
  // eigenvalue clouds concentrate on the critical curve, and the interior is
  // covered by the area diagnostic instead.
  if (!filled_cells.empty()) {
    auto key = [&](double re, double im) {
      return std::make_pair(static_cast<long long>(std::llround(re / h * 8.0)),
                            static_cast<long long>(std::llround(im / h * 8.0)));
    };
    std::set<std::pair<long long, long long>> centers;
    for (const Cell& c : filled_cells)
      centers.insert(key(0.5 * (c.re_lo + c.re_hi), 0.5 * (c.im_lo + c.im_hi)));
    for (const Cell& c : filled_cells) {
      double cx = 0.5 * (c.re_lo + c.re_hi), cy = 0.5 * (c.im_lo + c.im_hi);
      double w = c.re_hi - c.re_lo, hh = c.im_hi - c.im_lo;
      bool interior = centers.count(key(cx - w, cy)) && centers.count(key(cx + w, cy)) &&
                      centers.count(key(cx, cy - hh)) && centers.count(key(cx, cy + hh));
      if (!interior) {
        pts.emplace_back(cx, cy);
        pts.emplace_back(c.re_lo, c.im_lo);
        pts.emplace_back(c.re_hi, c.im_hi);
      }
    }
  }
  return pts;
}

SpectrumSet assemble_spectrum(const LyapunovField& field, double g,
                              const std::vector<Interval>& sigma0, const AssembleCfg& cfg) {
  SpectrumSet s;
  s.g = g;
  s.grid_step = field.grid.step();
  s.tol0 = cfg.tol0 > 0 ? cfg.tol0 : std::max(3.0 * field.max_stderr(), 1e-3);
  double grad_floor = cfg.grad_floor > 0 ? cfg.grad_floor : s.tol0 / s.grid_step;

  // Real component: Sigma(0) where L > g + tol0.
  double fine = s.grid_step / 4.0;
  for (const Interval& iv : sigma0) {
    int m = std::max(1, static_cast<int>(std::ceil(iv.length() / fine)));
    bool open = false;
    double start = 0.0;
    for (int k = 0; k <= m; ++k) {
      double e = iv.lo + iv.length() * k / m;
      bool plus = field.interp(cplx(e, 0.0)) > g + s.tol0;
      if (plus && !open) {
        open = true;
        start = e;
      } else if (!plus && open) {
        open = false;
        s.real_part.push_back({start, e});
      }
    }
    if (open) s.real_part.push_back({start, iv.hi});
  }

  s.complex_part = extract_contours(field, g, false);

  // Plateau detection: all four cell corners inside the band and flat in a
  // 3x3 neighborhood around each corner.
  const GridSpec& gr = field.grid;
  auto grad_ok = [&](int i, int j) {
    int i0 = std::max(1, std::min(i, gr.nx - 2));
    int j0 = std::max(1, std::min(j, gr.ny - 2));
    double gx = (field.at(i0 + 1, j0) - field.at(i0 - 1, j0)) / (2.0 * gr.dx());
    double gy = (field.at(i0, j0 + 1) - field.at(i0, j0 - 1)) / (2.0 * gr.dy());
    return std::hypot(gx, gy) < grad_floor;
  };
  for (int j = 0; j + 1 < gr.ny; ++j) {
    for (int i = 0; i + 1 < gr.nx; ++i) {
      bool band = std::abs(field.at(i, j) - g) < s.tol0 &&
                  std::abs(field.at(i + 1, j) - g) < s.tol0 &&
                  std::abs(field.at(i, j + 1) - g) < s.tol0 &&
                  std::abs(field.at(i + 1, j + 1) - g) < s.tol0;
      if (!band) continue;
      if (grad_ok(i, j) && grad_ok(i + 1, j) && grad_ok(i, j + 1) && grad_ok(i + 1, j + 1)) {
        cplx lo = gr.node(i, j), hi = gr.node(i + 1, j + 1);
        s.filled_cells.push_back({lo.real(), hi.real(), lo.imag(), hi.imag()});
      }
    }
  }

  // Inside a plateau the level set L = g is met everywhere up to noise, so
  // marching squares emits spurious fragments there; keep only contours with
  // at least one vertex outside the filled cells.
  if (!s.filled_cells.empty() && !s.complex_part.empty()) {
    std::set<std::pair<int, int>> occupied;
    for (const Cell& c : s.filled_cells) {
      int i = static_cast<int>(std::lround((c.re_lo - gr.re_min) / gr.dx()));
      int j = static_cast<int>(std::lround((c.im_lo - gr.im_min) / gr.dy()));
      occupied.insert({i, j});
    }
    auto in_plateau = [&](cplx z) {
      int i = static_cast<int>(std::floor((z.real() - gr.re_min) / gr.dx()));
      int j = static_cast<int>(std::floor((z.imag() - gr.im_min) / gr.dy()));
      for (int di = -1; di <= 1; ++di)
        for (int dj = -1; dj <= 1; ++dj)
          if (occupied.count({i + di, j + dj})) return true;
      return false;
    };
    std::vector<Polyline> kept;
    for (Polyline& pl : s.complex_part) {
      bool interior = true;
      for (cplx z : pl.points)
        if (!in_plateau(z)) {
          interior = false;
          break;
        }
      if (!interior) kept.push_back(std::move(pl));
    }
    s.complex_part = std::move(kept);
  }
  return s;
}

TransitionReport transition_report(const LyapunovField& field,
                                   const std::vector<Interval>& sigma0, double tol0) {
  const GridSpec& gr = field.grid;
  if (gr.im_min > 0.0 || gr.im_max < 0.0)
    throw std::invalid_argument("transition_report: field must straddle the real axis");
  TransitionReport rep;
  rep.tol0 = tol0;
  double gmin = 1e300;
  int m = 4 * gr.nx;
  for (int k = 0; k <= m; ++k) {
    double e = gr.re_min + (gr.re_max - gr.re_min) * k / m;
    gmin = std::min(gmin, field.interp(cplx(e, 0.0)));
  }
  rep.g_lower = gmin;
  double gmax = -1e300;
  for (const Interval& iv : sigma0) {
    // Keep one grid step away from the edges: interpolation there blends in
    // nodes outside the interval where L is already rising.
    double lo = iv.lo + gr.dx(), hi = iv.hi - gr.dx();
    if (hi <= lo) {
      lo = 0.5 * (iv.lo + iv.hi);
      hi = lo;
    }
    int mm = std::max(1, static_cast<int>(std::ceil((hi - lo) / (gr.dx() / 4.0))));
    for (int k = 0; k <= mm; ++k)
      gmax = std::max(gmax, field.interp(cplx(lo + (hi - lo) * k / mm, 0.0)));
  }
  if (!sigma0.empty()) rep.g_upper = gmax;
  // Continuity sanity check along grid rows/columns.
  for (int j = 0; j < gr.ny && !rep.continuity_warning; ++j)
    for (int i = 0; i + 1 < gr.nx; ++i)
      if (std::abs(field.at(i + 1, j) - field.at(i, j)) > 10.0 * std::max(tol0, 0.05)) {
        rep.continuity_warning = true;
        break;
      }
  return rep;
}

ContourCount count_contours(const SpectrumSet& s) {
  ContourCount cc;
  double h = s.grid_step;
  for (const Polyline& pl : s.complex_part) {
    bool touches_upper = false;
    for (const cplx& z : pl.points)
      if (z.imag() > h) {
        touches_upper = true;
        break;
      }
    if (!touches_upper) continue;  // lower-half mirror, counted via its partner
    ++cc.count;
    if (pl.closed) {
      cc.closed.push_back(true);
    } else {
      bool anchored = std::abs(pl.points.front().imag()) < 2.0 * h &&
                      std::abs(pl.points.back().imag()) < 2.0 * h;
      cc.closed.push_back(false);
      if (!anchored) ++cc.unresolved;
    }
  }
  return cc;
}

std::string spectrum_to_json(const SpectrumSet& s) {
  nlohmann::json j;
  j["g"] = s.g;
  j["tol0"] = s.tol0;
  j["grid_step"] = s.grid_step;
  j["real_part"] = nlohmann::json::array();
  for (const Interval& iv : s.real_part) j["real_part"].push_back({iv.lo, iv.hi});
  j["complex_part"] = nlohmann::json::array();
  for (const Polyline& pl : s.complex_part) {
    nlohmann::json arr = nlohmann::json::array();
    for (const cplx& z : pl.points) arr.push_back({z.real(), z.imag()});
    j["complex_part"].push_back({{"closed", pl.closed}, {"points", arr}});
  }
  j["filled_cells"] = nlohmann::json::array();
  for (const Cell& c : s.filled_cells)
    j["filled_cells"].push_back({c.re_lo, c.re_hi, c.im_lo, c.im_hi});
  return j.dump(2);
}

}  // namespace hn
