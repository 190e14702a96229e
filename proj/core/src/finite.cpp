#include "hn/finite.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <stdexcept>

#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

namespace hn {

FiniteOperator build_operator(const BaseSystem& base, const Potential& p, const Phase& x0,
                              std::int64_t n, double g, Boundary boundary) {
  if (n < 3) throw std::invalid_argument("build_operator: n must be >= 3 (corner overlap)");
  FiniteOperator op;
  op.n = n;
  op.g = g;
  op.boundary = boundary;
  op.diagonal.resize(static_cast<std::size_t>(n));
  potential_sequence(p, base, x0, 0, op.diagonal.size(), op.diagonal.data());
  return op;
}

std::vector<cplx> FiniteOperator::to_dense() const {
  std::size_t N = static_cast<std::size_t>(n);
  std::vector<cplx> a(N * N, cplx(0.0));
  const double ep = std::exp(g), em = std::exp(-g);
  for (std::size_t k = 0; k < N; ++k) a[k * N + k] = diagonal[k];
  for (std::size_t k = 0; k + 1 < N; ++k) {
    a[(k + 1) * N + k] = -ep;  // (row k, col k+1)
    a[k * N + (k + 1)] = -em;  // (row k+1, col k)
  }
  if (boundary == Boundary::periodic) {
    a[(N - 1) * N + 0] = -em;  // top-right
    a[0 * N + (N - 1)] = -ep;  // bottom-left
  }
  return a;  // column-major
}

cplx FiniteOperator::trace() const {
  return std::accumulate(diagonal.begin(), diagonal.end(), cplx(0.0));
}

EigenResult eigenvalues(const FiniteOperator& op, bool with_vectors) {
  if (op.n > kDenseCap)
    throw std::invalid_argument("eigenvalues: n exceeds the dense cap (4096)");
  lapack_int n = static_cast<lapack_int>(op.n);
  std::vector<cplx> a = op.to_dense();
  std::vector<cplx> a0;
  if (with_vectors) a0 = a;
  EigenResult res;
  res.eigenvalues.resize(static_cast<std::size_t>(n));
  std::vector<cplx> vr;
  if (with_vectors) vr.resize(static_cast<std::size_t>(n) * n);
  lapack_int info = LAPACKE_zgeev(LAPACK_COL_MAJOR, 'N', with_vectors ? 'V' : 'N', n,
                                  a.data(), n, res.eigenvalues.data(), nullptr, 1,
                                  with_vectors ? vr.data() : nullptr, with_vectors ? n : 1);
  if (info < 0) throw std::runtime_error("zgeev: illegal argument");
  if (info > 0) {
    // Eigenvalues 0..info-1 did not converge; report rather than drop.
    for (lapack_int i = 0; i < info; ++i) res.failed_indices.push_back(static_cast<int>(i));
  }
  if (with_vectors) {
    double hnorm = 0.0;
    for (const cplx& z : a0) hnorm += std::norm(z);
    hnorm = std::sqrt(hnorm);
    double worst = 0.0;
    std::size_t N = static_cast<std::size_t>(n);
    std::vector<cplx> hv(N);
    for (std::size_t j = 0; j < N; ++j) {
      const cplx* v = &vr[j * N];
      for (std::size_t r = 0; r < N; ++r) hv[r] = 0.0;
      for (std::size_t c = 0; c < N; ++c)
        for (std::size_t r = 0; r < N; ++r) hv[r] += a0[c * N + r] * v[c];
      double rnorm = 0.0;
      for (std::size_t r = 0; r < N; ++r) rnorm += std::norm(hv[r] - res.eigenvalues[j] * v[r]);
      worst = std::max(worst, std::sqrt(rnorm) / hnorm);
    }
    res.backward_error = worst;
    res.vectors = std::move(vr);
  } else {
    res.backward_error = std::numeric_limits<double>::quiet_NaN();
  }
  return res;
}

std::vector<double> seam_weights(const EigenResult& res, std::int64_t n, int width) {
  std::size_t N = static_cast<std::size_t>(n);
  if (res.vectors.size() != N * N)
    throw std::invalid_argument("seam_weights: eigenvectors not available");
  std::vector<double> w(N, 0.0);
  for (std::size_t j = 0; j < N; ++j) {
    const cplx* v = &res.vectors[j * N];
    double total = 0.0, seam = 0.0;
    for (std::size_t r = 0; r < N; ++r) {
      double m = std::norm(v[r]);
      total += m;
      if (r < static_cast<std::size_t>(width) || r + width >= N) seam += m;
    }
    w[j] = total > 0.0 ? seam / total : 0.0;
  }
  return w;
}

namespace {

// Active row of the bordered band elimination. w0,w1,w2 sit at columns
// (k, k+1, k+2); t0,t1 at columns (n-2, n-1). Window slots are only used for
// columns < n-2, everything at the right edge is folded into the tail.
struct ActiveRow {
  cplx w0{}, w1{}, w2{}, t0{}, t1{};
  std::int64_t orig = -1;
};

struct DetAccumulator {
  double log_abs = 0.0;
  double arg = 0.0;
  bool singular = false;
  std::vector<std::int64_t> consumed;

  void pivot(cplx p, std::int64_t orig) {
    consumed.push_back(orig);
    double m = std::abs(p);
    if (m == 0.0) {
      singular = true;
      return;
    }
    log_abs += std::log(m);
    arg += std::arg(p);
  }
};

int permutation_parity(const std::vector<std::int64_t>& order) {
  std::int64_t n = static_cast<std::int64_t>(order.size());
  std::vector<std::int64_t> pos(static_cast<std::size_t>(n));
  for (std::int64_t i = 0; i < n; ++i) pos[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])] = i;
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  std::int64_t cycles = 0;
  for (std::int64_t i = 0; i < n; ++i) {
    if (seen[static_cast<std::size_t>(i)]) continue;
    ++cycles;
    std::int64_t j = i;
    while (!seen[static_cast<std::size_t>(j)]) {
      seen[static_cast<std::size_t>(j)] = 1;
      j = pos[static_cast<std::size_t>(j)];
    }
  }
  return static_cast<int>((n - cycles) % 2);
}

CharpolyValue dense_charpoly(const FiniteOperator& op, cplx E) {
  std::size_t N = static_cast<std::size_t>(op.n);
  std::vector<cplx> a = op.to_dense();
  for (std::size_t k = 0; k < N; ++k) a[k * N + k] -= E;
  DetAccumulator det;
  int swaps = 0;
  for (std::size_t k = 0; k < N; ++k) {
    std::size_t piv = k;
    for (std::size_t r = k + 1; r < N; ++r)
      if (std::abs(a[k * N + r]) > std::abs(a[k * N + piv])) piv = r;
    if (piv != k) {
      for (std::size_t c = 0; c < N; ++c) std::swap(a[c * N + k], a[c * N + piv]);
      ++swaps;
    }
    cplx p = a[k * N + k];
    det.pivot(p, static_cast<std::int64_t>(k));
    if (det.singular) break;
    for (std::size_t r = k + 1; r < N; ++r) {
      cplx f = a[k * N + r] / p;
      if (f == cplx(0.0)) continue;
      for (std::size_t c = k + 1; c < N; ++c) a[c * N + r] -= f * a[c * N + k];
    }
  }
  CharpolyValue out;
  if (det.singular) {
    out.singular = true;
    out.log_abs = -std::numeric_limits<double>::infinity();
    return out;
  }
  if (swaps % 2) det.arg += M_PI;
  out.log_abs = det.log_abs;
  out.arg = std::remainder(det.arg, 2.0 * M_PI);
  return out;
}

}  // namespace

CharpolyValue charpoly_eval(const FiniteOperator& op, cplx E) {
  const std::int64_t n = op.n;
  if (n < 6) return dense_charpoly(op, E);
  const double ep = std::exp(op.g), em = std::exp(-op.g);
  const bool pbc = op.boundary == Boundary::periodic;

  auto fold = [&](ActiveRow& row, std::int64_t k, std::int64_t col, cplx val) {
    if (col >= n - 2) {
      (col == n - 2 ? row.t0 : row.t1) += val;
    } else if (col == k) {
      row.w0 += val;
    } else if (col == k + 1) {
      row.w1 += val;
    } else {
      row.w2 += val;
    }
  };

  ActiveRow R, B;
  R.orig = 0;
  fold(R, 0, 0, op.diagonal[0] - E);
  fold(R, 0, 1, -ep);
  if (pbc) fold(R, 0, n - 1, -em);
  B.orig = n - 1;
  if (pbc) fold(B, 0, 0, -ep);
  B.t0 = -em;  // subdiagonal entry at (n-1, n-2)
  B.t1 = op.diagonal[static_cast<std::size_t>(n - 1)] - E;

  DetAccumulator det;
  for (std::int64_t k = 0; k <= n - 3; ++k) {
    ActiveRow inc;
    inc.orig = k + 1;
    fold(inc, k, k, -em);
    fold(inc, k, k + 1, op.diagonal[static_cast<std::size_t>(k + 1)] - E);
    fold(inc, k, k + 2, -ep);

    ActiveRow* rows[3] = {&R, &B, &inc};
    int piv = 0;
    for (int r = 1; r < 3; ++r)
      if (std::abs(rows[r]->w0) > std::abs(rows[piv]->w0)) piv = r;
    ActiveRow* P = rows[piv];
    det.pivot(P->w0, P->orig);
    if (det.singular) break;
    ActiveRow* rest[2];
    int ri = 0;
    for (int r = 0; r < 3; ++r)
      if (r != piv) rest[ri++] = rows[r];
    for (ActiveRow* row : rest) {
      cplx f = row->w0 / P->w0;
      row->w1 -= f * P->w1;
      row->w2 -= f * P->w2;
      row->t0 -= f * P->t0;
      row->t1 -= f * P->t1;
    }
    // Shift the window from k to k+1.
    ActiveRow nr[2];
    for (int r = 0; r < 2; ++r) {
      nr[r].orig = rest[r]->orig;
      nr[r].w0 = rest[r]->w1;
      nr[r].w1 = (k + 2 < n - 2) ? rest[r]->w2 : cplx(0.0);
      nr[r].w2 = 0.0;
      nr[r].t0 = rest[r]->t0 + ((k + 2 < n - 2) ? cplx(0.0) : rest[r]->w2);
      nr[r].t1 = rest[r]->t1;
    }
    R = nr[0];
    B = nr[1];
  }

  CharpolyValue out;
  if (!det.singular) {
    // Final 2x2 on columns (n-2, n-1).
    ActiveRow* top = (std::abs(R.t0) >= std::abs(B.t0)) ? &R : &B;
    ActiveRow* bot = (top == &R) ? &B : &R;
    det.pivot(top->t0, top->orig);
    if (!det.singular) {
      cplx last = bot->t1 - (bot->t0 / top->t0) * top->t1;
      det.pivot(last, bot->orig);
    }
  }
  if (det.singular) {
    out.singular = true;
    out.log_abs = -std::numeric_limits<double>::infinity();
    return out;
  }
  if (permutation_parity(det.consumed)) det.arg += M_PI;
  out.log_abs = det.log_abs;
  out.arg = std::remainder(det.arg, 2.0 * M_PI);
  return out;
}

namespace {

double dist2(cplx a, cplx b) { return std::norm(a - b); }

// O(n^3) assignment (Kuhn-Munkres with potentials) on the pairwise distances.
double optimal_assignment_max_distance(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  int n = static_cast<int>(a.size());
  const double INF = std::numeric_limits<double>::infinity();
  std::vector<double> u(static_cast<std::size_t>(n) + 1), v(static_cast<std::size_t>(n) + 1);
  std::vector<int> p(static_cast<std::size_t>(n) + 1), way(static_cast<std::size_t>(n) + 1);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(static_cast<std::size_t>(n) + 1, INF);
    std::vector<char> used(static_cast<std::size_t>(n) + 1, 0);
    do {
      used[static_cast<std::size_t>(j0)] = 1;
      int i0 = p[static_cast<std::size_t>(j0)], j1 = 0;
      double delta = INF;
      for (int j = 1; j <= n; ++j) {
        if (used[static_cast<std::size_t>(j)]) continue;
        double cur = std::sqrt(dist2(a[static_cast<std::size_t>(i0 - 1)], b[static_cast<std::size_t>(j - 1)])) -
                     u[static_cast<std::size_t>(i0)] - v[static_cast<std::size_t>(j)];
        if (cur < minv[static_cast<std::size_t>(j)]) {
          minv[static_cast<std::size_t>(j)] = cur;
          way[static_cast<std::size_t>(j)] = j0;
        }
        if (minv[static_cast<std::size_t>(j)] < delta) {
          delta = minv[static_cast<std::size_t>(j)];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[static_cast<std::size_t>(j)]) {
          u[static_cast<std::size_t>(p[static_cast<std::size_t>(j)])] += delta;
          v[static_cast<std::size_t>(j)] -= delta;
        } else {
          minv[static_cast<std::size_t>(j)] -= delta;
        }
      }
      j0 = j1;
    } while (p[static_cast<std::size_t>(j0)] != 0);
    do {
      int j1 = way[static_cast<std::size_t>(j0)];
      p[static_cast<std::size_t>(j0)] = p[static_cast<std::size_t>(j1)];
      j0 = j1;
    } while (j0);
  }
  double worst = 0.0;
  for (int j = 1; j <= n; ++j)
    worst = std::max(worst, std::abs(a[static_cast<std::size_t>(p[static_cast<std::size_t>(j)] - 1)] -
                                     b[static_cast<std::size_t>(j - 1)]));
  return worst;
}

}  // namespace

MatchReport match_spectra(std::vector<cplx> a, std::vector<cplx> b, double tol) {
  if (a.size() != b.size()) throw std::invalid_argument("match_spectra: size mismatch");
  auto lex = [](cplx x, cplx y) {
    if (x.real() != y.real()) return x.real() < y.real();
    return x.imag() < y.imag();
  };
  std::sort(a.begin(), a.end(), lex);
  std::sort(b.begin(), b.end(), lex);
  MatchReport rep;
  for (std::size_t i = 0; i < a.size(); ++i)
    rep.max_distance = std::max(rep.max_distance, std::abs(a[i] - b[i]));
  if (rep.max_distance > tol) {
    rep.used_optimal_assignment = true;
    rep.max_distance = optimal_assignment_max_distance(a, b);
  }
  return rep;
}

MatchReport dirichlet_g_invariance(const BaseSystem& base, const Potential& p,
                                   const Phase& x0, std::int64_t n, double g1, double g2) {
  FiniteOperator o1 = build_operator(base, p, x0, n, g1, Boundary::dirichlet);
  FiniteOperator o2 = build_operator(base, p, x0, n, g2, Boundary::dirichlet);
  MatchReport rep = match_spectra(eigenvalues(o1).eigenvalues, eigenvalues(o2).eigenvalues, 1e-8);
  double gmax = std::max(std::abs(g1), std::abs(g2));
  double le = std::min(700.0, static_cast<double>(n) * gmax);
  rep.conditioning_estimate = std::exp(le) * std::numeric_limits<double>::epsilon();
  return rep;
}

void write_eigenvalues_csv(const std::vector<cplx>& ev, const std::string& path) {
  std::FILE* fp = std::fopen(path.c_str(), "w");
  if (!fp) throw std::runtime_error("cannot open " + path);
  std::fprintf(fp, "re,im\n");
  for (const cplx& z : ev) std::fprintf(fp, "%.17g,%.17g\n", z.real(), z.imag());
  std::fclose(fp);
}

}  // namespace hn
