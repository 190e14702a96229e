#ifndef HN_FINITE_HPP
#define HN_FINITE_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "hn/dynamics.hpp"

namespace hn {

enum class Boundary { periodic, dirichlet };

// Truncated Hatano-Nelson operator. Off-diagonals are -e^{g} on the first
// superdiagonal (and bottom-left corner for PBC) and -e^{-g} on the first
// subdiagonal (and top-right corner).
struct FiniteOperator {
  std::int64_t n = 0;
  double g = 0.0;
  Boundary boundary = Boundary::periodic;
  std::vector<cplx> diagonal;  // v(T^k x0), k = 0..n-1

  // Column-major dense matrix (LAPACK layout).
  std::vector<cplx> to_dense() const;
  cplx trace() const;
};

FiniteOperator build_operator(const BaseSystem& base, const Potential& p, const Phase& x0,
                              std::int64_t n, double g, Boundary boundary);

inline constexpr std::int64_t kDenseCap = 4096;

struct EigenResult {
  std::vector<cplx> eigenvalues;
  double backward_error = 0.0;  // max ||(H - lambda) v|| / ||H||_F, NaN if no vectors
  std::vector<int> failed_indices;  // QR iteration failures (empty on success)
  std::vector<cplx> vectors;  // column-major right eigenvectors when requested
};

// Dense complex non-Hermitian eigensolve (Hessenberg + shifted QR via zgeev).
EigenResult eigenvalues(const FiniteOperator& op, bool with_vectors = false);

// Per-eigenvector probability mass on the `width` sites adjacent to the
// periodic closure bond (sites 0..width-1 and n-width..n-1). Values near 1
// identify boundary modes created by the truncation seam.
std::vector<double> seam_weights(const EigenResult& res, std::int64_t n, int width);

struct CharpolyValue {
  double log_abs = 0.0;  // log|det(H - E)|; -inf when E is numerically an eigenvalue
  double arg = 0.0;
  bool singular = false;
};

// Pivoted elimination on the tridiagonal+corners structure; O(n) memory and
// time, stable up to n ~ 1e6 via log-magnitude accumulation.
CharpolyValue charpoly_eval(const FiniteOperator& op, cplx E);

struct MatchReport {
  double max_distance = 0.0;
  double conditioning_estimate = 0.0;  // ~ e^{n g_max} * machine epsilon
  bool used_optimal_assignment = false;
};

// Dirichlet spectra are g-independent (similarity by diag(e^{-g},...,e^{-ng})).
MatchReport dirichlet_g_invariance(const BaseSystem& base, const Potential& p,
                                   const Phase& x0, std::int64_t n, double g1, double g2);

// Distance under greedy nearest-neighbor pairing of lexicographically sorted
// lists, falling back to an optimal assignment when greedy exceeds `tol`.
MatchReport match_spectra(std::vector<cplx> a, std::vector<cplx> b, double tol);

void write_eigenvalues_csv(const std::vector<cplx>& ev, const std::string& path);

}  // namespace hn

#endif
