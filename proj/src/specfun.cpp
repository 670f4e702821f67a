#include "nodal/specfun.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace nodal::specfun {

namespace {

constexpr double kEulerGamma = 0.5772156649015328606;
constexpr double kPi = 3.14159265358979323846;
// The ascending series is accumulated in long double so it stays accurate
// through the crossover; the asymptotic truncation error ~ e^{-2|z|} reaches
// the 1e-10 cross-regime target only beyond |z| ~ 14, hence the radius 17.
constexpr double kSeriesAsymptoticCrossover = 17.0;

using lcplx = std::complex<long double>;

// Ascending series J_0, J_1 (entire functions, safe for moderate |z|).
cplx series_j(int order, cplx z0) {
  const lcplx z(z0.real(), z0.imag());
  const lcplx q = -0.25L * z * z;
  lcplx term = (order == 0) ? lcplx(1.0L) : 0.5L * z;
  lcplx sum = term;
  for (int k = 1; k < 200; ++k) {
    term *= q / (static_cast<long double>(k) * static_cast<long double>(k + order));
    sum += term;
    if (std::abs(term) < 1e-22L * (1.0L + std::abs(sum))) break;
  }
  return cplx(static_cast<double>(sum.real()), static_cast<double>(sum.imag()));
}

// Ascending series Y_0, Y_1 via the standard logarithmic expansions.
cplx series_y(int order, cplx z0) {
  const lcplx z(z0.real(), z0.imag());
  const long double lpi = 3.141592653589793238462643383279503L;
  const long double lgam = 0.577215664901532860606512090082402L;
  const lcplx lg = std::log(0.5L * z) + lgam;
  const cplx jn0 = series_j(order, z0);
  const lcplx jn(jn0.real(), jn0.imag());
  lcplx result;
  if (order == 0) {
    // Y_0 = (2/pi)[ (ln(z/2)+gamma) J_0 + sum_{k>=1} (-1)^{k+1} H_k (z^2/4)^k / (k!)^2 ]
    const lcplx q = 0.25L * z * z;
    lcplx pk = 1.0L;  // (z^2/4)^k / (k!)^2
    long double hk = 0.0L;
    long double sgn = -1.0L;
    lcplx sum = 0.0L;
    for (int k = 1; k < 200; ++k) {
      pk *= q / (static_cast<long double>(k) * static_cast<long double>(k));
      hk += 1.0L / k;
      sgn = -sgn;
      const lcplx term = sgn * hk * pk;
      sum += term;
      if (std::abs(term) < 1e-22L * (1.0L + std::abs(sum))) break;
    }
    result = (2.0L / lpi) * (lg * jn + sum);
  } else {
    // Y_1 = (2/pi)(ln(z/2)+gamma) J_1 - (2/(pi z))
    //       - (1/pi) sum_{k>=0} (-1)^k (H_k + H_{k+1}) (z/2)^{2k+1} / (k! (k+1)!)
    lcplx pk = 0.5L * z;  // (z/2)^{2k+1} / (k! (k+1)!)
    const lcplx q = 0.25L * z * z;
    long double hk = 0.0L, hk1 = 1.0L;
    long double sgn = 1.0L;
    lcplx sum = pk * (hk + hk1);
    for (int k = 1; k < 200; ++k) {
      pk *= q / (static_cast<long double>(k) * static_cast<long double>(k + 1));
      hk += 1.0L / k;
      hk1 += 1.0L / (k + 1);
      sgn = -sgn;
      const lcplx term = sgn * (hk + hk1) * pk;
      sum += term;
      if (std::abs(term) < 1e-22L * (1.0L + std::abs(sum))) break;
    }
    result = (2.0L / lpi) * lg * jn - 2.0L / (lpi * z) - sum / lpi;
  }
  return cplx(static_cast<double>(result.real()), static_cast<double>(result.imag()));
}

// Large-argument expansion of H^(1)_nu, truncated at the smallest term.
cplx asymptotic_h1(int order, cplx z) {
  const double nu = order;
  const double mu = 4.0 * nu * nu;
  // H1_nu ~ sqrt(2/(pi z)) e^{i(z - nu pi/2 - pi/4)} sum_k a_k i^k / z^k,
  // a_k = prod_{j=1..k} (mu - (2j-1)^2) / (8 j)
  cplx sum = 1.0;
  cplx term = 1.0;
  double last = 1.0;
  for (int k = 1; k <= 30; ++k) {
    const double odd = 2.0 * k - 1.0;
    term *= cplx(0.0, 1.0) * (mu - odd * odd) / (8.0 * k * z);
    const double mag = std::abs(term);
    if (mag > last) break;  // divergent tail reached
    sum += term;
    last = mag;
    if (mag < 1e-17 * std::abs(sum)) break;
  }
  const cplx phase = z - cplx(nu * kPi / 2.0 + kPi / 4.0);
  return std::sqrt(2.0 / (kPi * z)) * std::exp(cplx(0.0, 1.0) * phase) * sum;
}

}  // namespace

cplx hankel1(int order, cplx z) {
  if (order != 0 && order != 1) throw std::domain_error("hankel1: order must be 0 or 1");
  if (!(z.real() > 0.0)) throw std::domain_error("hankel1: requires Re z > 0");
  if (std::abs(z) <= kSeriesAsymptoticCrossover)
    return series_j(order, z) + cplx(0.0, 1.0) * series_y(order, z);
  return asymptotic_h1(order, z);
}

cplx bessel_j01(int order, cplx z) {
  if (order != 0 && order != 1) throw std::domain_error("bessel_j01: order must be 0 or 1");
  if (std::abs(z) <= kSeriesAsymptoticCrossover || z.real() <= 0.0) return series_j(order, z);
  // J = (H1 + H2)/2; recover from the asymptotic H1 plus its conjugate form.
  const cplx h1 = asymptotic_h1(order, z);
  // H^(2)_nu(z) = conj(H^(1)_nu(conj z)) for these real-coefficient series.
  const cplx h2 = std::conj(asymptotic_h1(order, std::conj(z)));
  return 0.5 * (h1 + h2);
}

double bessel_y(int order, double x) {
  if (!(x > 0.0)) throw std::domain_error("bessel_y: requires x > 0");
  return hankel1(order, cplx(x)).imag();
}

namespace {

// Miller downward recurrence: fills J_0..J_mmax at x, normalized by
// J_0 + 2 sum_k J_{2k} = 1.
void miller_row(int mmax, double x, std::vector<double>& out) {
  out.assign(mmax + 1, 0.0);
  if (x == 0.0) {
    out[0] = 1.0;
    return;
  }
  const double big = std::max(static_cast<double>(mmax), x);
  const int start = static_cast<int>(big + 12.0 + 10.0 * std::cbrt(big + 1.0)) | 1;
  double jp = 0.0, jc = 1e-300;
  double norm = 0.0;
  for (int k = start; k >= 1; --k) {
    const double jm = (2.0 * k / x) * jc - jp;
    jp = jc;
    jc = jm;
    if (k - 1 <= mmax) out[k - 1] = jc;
    if (((k - 1) & 1) == 0) norm += (k - 1 == 0) ? jc : 2.0 * jc;
    if (std::abs(jc) > 1e250) {  // rescale to avoid overflow
      jp /= 1e250;
      jc /= 1e250;
      norm /= 1e250;
      for (auto& v : out) v /= 1e250;
    }
  }
  for (auto& v : out) v /= norm;
}

}  // namespace

double bessel_j(int m, double x) {
  if (m < 0 || m > 200) throw std::domain_error("bessel_j: order out of range [0,200]");
  if (x < 0.0) throw std::domain_error("bessel_j: requires x >= 0");
  if (x == 0.0) return m == 0 ? 1.0 : 0.0;
  std::vector<double> row;
  miller_row(m, x, row);
  return row[m];
}

double bessel_j_prime(int m, double x) {
  if (m < 0 || m > 200) throw std::domain_error("bessel_j_prime: order out of range [0,200]");
  if (x < 0.0) throw std::domain_error("bessel_j_prime: requires x >= 0");
  if (x == 0.0) return m == 1 ? 0.5 : 0.0;
  std::vector<double> row;
  miller_row(m + 1, x, row);
  if (m == 0) return -row[1];
  return 0.5 * (row[m - 1] - row[m + 1]);
}

namespace {

double second_derivative_j(int m, double x) {
  // From the Bessel equation: J'' = -J'/x - (1 - m^2/x^2) J.
  return -bessel_j_prime(m, x) / x - (1.0 - static_cast<double>(m) * m / (x * x)) * bessel_j(m, x);
}

double refine_root(int m, double lo, double hi, RootKind kind) {
  auto f = [&](double x) { return kind == RootKind::J ? bessel_j(m, x) : bessel_j_prime(m, x); };
  auto df = [&](double x) {
    return kind == RootKind::J ? bessel_j_prime(m, x) : second_derivative_j(m, x);
  };
  double flo = f(lo);
  for (int it = 0; it < 200; ++it) {  // bisect to a tight bracket
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if ((flo < 0) == (fm < 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
    if (hi - lo < 1e-9) break;
  }
  double x = 0.5 * (lo + hi);
  for (int it = 0; it < 50; ++it) {  // Newton polish
    const double fx = f(x);
    const double dx = fx / df(x);
    x -= dx;
    if (x < lo || x > hi) x = 0.5 * (lo + hi);
    if (std::abs(fx) <= 1e-13 && std::abs(dx) < 1e-14 * (1.0 + x)) break;
  }
  return x;
}

}  // namespace

double bessel_root(int m, int n, RootKind kind) {
  if (n < 1) throw std::domain_error("bessel_root: requires n >= 1");
  if (m < 0 || m > 200) throw std::domain_error("bessel_root: order out of range");
  if (m == 0 && kind == RootKind::Jprime) {
    // J_0' = -J_1: zeros are 0, j_{1,1}, j_{1,2}, ...
    if (n == 1) return 0.0;
    return bessel_root(1, n - 1, RootKind::J);
  }
  auto f = [&](double x) { return kind == RootKind::J ? bessel_j(m, x) : bessel_j_prime(m, x); };
  // Scan for sign changes starting just below the first-zero estimate.
  const double mm = static_cast<double>(m);
  double x0;
  if (m == 0) {
    x0 = 1.0;
  } else if (kind == RootKind::J) {
    x0 = mm + 1.4 * std::cbrt(mm);  // below j_{m,1} ~ m + 1.8557 m^{1/3}
  } else {
    x0 = mm + 0.5 * std::cbrt(mm);  // below j'_{m,1} ~ m + 0.8086 m^{1/3}
  }
  x0 = std::max(x0, 1e-3);
  const double step = 0.8;  // consecutive zeros are separated by > pi
  double prev = f(x0);
  double xp = x0;
  int found = 0;
  for (int i = 1; i < 200000; ++i) {
    const double x = x0 + step * i;
    const double fx = f(x);
    if ((prev < 0) != (fx < 0)) {
      ++found;
      if (found == n) return refine_root(m, xp, x, kind);
    }
    prev = fx;
    xp = x;
  }
  throw std::runtime_error("bessel_root: bracket scan failed for m=" + std::to_string(m));
}

std::vector<BesselRootTable> bessel_root_table(int m_max, int n_max, RootKind kind) {
  std::vector<BesselRootTable> out;
  out.reserve(static_cast<size_t>(m_max + 1) * n_max);
  for (int m = 0; m <= m_max; ++m)
    for (int n = 1; n <= n_max; ++n)
      out.push_back({m, n, kind, bessel_root(m, n, kind)});
  return out;
}

}  // namespace nodal::specfun
