#pragma once
// Bessel and Hankel functions of orders 0, 1 and integer m, plus Bessel zeros.
// Scope: H^(1)_nu for nu in {0,1} on Re z > 0; J_m / J_m' for m <= 200 on the
// real half line; positive zeros of J_m and J_m'.

#include <complex>
#include <vector>

namespace nodal::specfun {

using cplx = std::complex<double>;

// H^(1)_nu(z) = J_nu(z) + i Y_nu(z), nu in {0,1}, Re z > 0.
// Ascending series for |z| <= 12, large-argument asymptotic expansion beyond.
// Throws std::domain_error for Re z <= 0 or unsupported order.
cplx hankel1(int order, cplx z);

// J_nu(z) for nu in {0,1}, complex argument (entire; valid everywhere we need).
cplx bessel_j01(int order, cplx z);

// J_m(x), J_m'(x) for integer 0 <= m <= 200, x >= 0 (Miller downward
// recurrence with series normalization). Throws std::domain_error otherwise.
double bessel_j(int m, double x);
double bessel_j_prime(int m, double x);

// Y_nu(x) for nu in {0,1}, real x > 0.
double bessel_y(int order, double x);

enum class RootKind { J, Jprime };

// n-th nonnegative zero (n >= 1) of J_m (kind J) or J_m' (kind Jprime).
// Convention: the zeros of J_0' are 0 = j'_{0,1} < j'_{0,2} = j_{1,1} < ...
double bessel_root(int m, int n, RootKind kind);

struct BesselRootTable {
  int m = 0;
  int n = 0;
  RootKind kind = RootKind::J;
  double value = 0.0;
};

// Roots for orders 0..m_max, indices 1..n_max, one kind.
std::vector<BesselRootTable> bessel_root_table(int m_max, int n_max, RootKind kind);

}  // namespace nodal::specfun
