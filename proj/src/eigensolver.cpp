#include "nodal/eigensolver.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <random>

#include "nodal/errors.hpp"
#include "nodal/fft.hpp"
#include "nodal/specfun.hpp"

namespace nodal::eigensolver {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;
constexpr double kEulerGamma = 0.57721566490153286;

using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

// Product-quadrature weights for the periodic logarithmic kernel:
//   sum_j R_{|i-j|} f(t_j) ~ int_0^{2pi} ln(4 sin^2((t_i-tau)/2)) f(tau) dtau,
// exact for trigonometric polynomials of degree < n/2 (checked against
// int ln(4 sin^2((t-tau)/2)) cos(m tau) dtau = -(2 pi/m) cos(m t)).
std::vector<double> kress_weights(int n) {
  std::vector<double> R(n);
  for (int d = 0; d < n; ++d) {
    const double td = kTwoPi * d / n;
    double s = 0.0;
    for (int m = 1; m <= n / 2 - 1; ++m) s += std::cos(m * td) / m;
    s += std::cos((n / 2) * td) / n;
    R[d] = -(4.0 * kPi / n) * s;
  }
  return R;
}

struct BoundaryNodes {
  std::vector<double> t, x, y, nx, ny, sp, kappa;
};

BoundaryNodes boundary_nodes(const geometry::AnalyticClosedCurve& c, int n) {
  BoundaryNodes b;
  b.t.resize(n);
  b.x.resize(n);
  b.y.resize(n);
  b.nx.resize(n);
  b.ny.resize(n);
  b.sp.resize(n);
  b.kappa.resize(n);
  for (int j = 0; j < n; ++j) {
    const double t = kTwoPi * j / n;
    b.t[j] = t;
    const auto p = geometry::eval_curve(c, {t, 0.0});
    b.x[j] = p.x.real();
    b.y[j] = p.y.real();
    const auto f = geometry::frame(c, t);
    b.nx[j] = f.nx;
    b.ny[j] = f.ny;
    b.sp[j] = geometry::speed(c, t);
    b.kappa[j] = f.kappa;
  }
  return b;
}

cplx hankel(int order, double x) {
  return {std::cyl_bessel_j(order, x), std::cyl_neumann(order, x)};
}

// Single-layer matrix: (S psi)(t_i) ~ sum_j S_ij psi_j with the |r'(tau)|
// factor and quadrature weights folded in.
Mat single_layer(const BoundaryNodes& b, double k) {
  const int n = static_cast<int>(b.t.size());
  const auto R = kress_weights(n);
  Mat A(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) {
        const cplx K2 =
            cplx(0.0, 0.25) -
            (kEulerGamma + std::log(k * b.sp[j] / 2.0)) / (2.0 * kPi);
        A(i, j) = (R[0] * (-1.0 / (4.0 * kPi)) + (kTwoPi / n) * K2) * b.sp[j];
      } else {
        const double rho = std::hypot(b.x[i] - b.x[j], b.y[i] - b.y[j]);
        const double lg =
            std::log(4.0 * std::pow(std::sin((b.t[i] - b.t[j]) / 2.0), 2));
        const cplx K = cplx(0.0, 0.25) * hankel(0, k * rho) * b.sp[j];
        const cplx K1 = -std::cyl_bessel_j(0, k * rho) / (4.0 * kPi) * b.sp[j];
        A(i, j) = R[std::abs(i - j)] * K1 + (kTwoPi / n) * (K - K1 * lg);
      }
    }
  }
  return A;
}

// Interior normal-derivative matrix of the single layer: 1/2 I + K' with
// K'(t,tau) = -(ik/4) H1(k rho) <nu(t), r(t)-r(tau)>/rho |r'(tau)|.
// Also the operator whose kernel detects interior Neumann eigenvalues.
Mat half_plus_kprime(const BoundaryNodes& b, double k) {
  const int n = static_cast<int>(b.t.size());
  const auto R = kress_weights(n);
  Mat A(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      cplx val;
      if (i == j) {
        // Continuous diagonal limit of K': -kappa |r'| / (4 pi).
        val = (kTwoPi / n) * (-b.kappa[i] * b.sp[i] / (4.0 * kPi));
      } else {
        const double dx = b.x[i] - b.x[j], dy = b.y[i] - b.y[j];
        const double rho = std::hypot(dx, dy);
        const double c = (b.nx[i] * dx + b.ny[i] * dy) / rho * b.sp[j];
        const double lg =
            std::log(4.0 * std::pow(std::sin((b.t[i] - b.t[j]) / 2.0), 2));
        const cplx M = -cplx(0.0, k / 4.0) * hankel(1, k * rho) * c;
        const cplx M1 = (k / (4.0 * kPi)) * std::cyl_bessel_j(1, k * rho) * c;
        val = R[std::abs(i - j)] * M1 + (kTwoPi / n) * (M - M1 * lg);
      }
      A(i, j) = val + ((i == j) ? 0.5 : 0.0);
    }
  }
  return A;
}

Mat detector(const geometry::AnalyticClosedCurve& dom, double k,
             BoundaryCondition bc, int n) {
  const auto b = boundary_nodes(dom, n);
  return bc == BoundaryCondition::Dirichlet ? single_layer(b, k)
                                            : half_plus_kprime(b, k);
}

double diameter(const geometry::AnalyticClosedCurve& c) {
  double d = 0.0;
  for (int i = 0; i < 64; ++i) {
    const auto p = geometry::eval_curve(c, {kTwoPi * i / 64, 0.0});
    for (int j = i + 1; j < 64; ++j) {
      const auto q = geometry::eval_curve(c, {kTwoPi * j / 64, 0.0});
      d = std::max(d, std::hypot(p.x.real() - q.x.real(),
                                 p.y.real() - q.y.real()));
    }
  }
  return d;
}

// Dominant angular mode and parity of a trace sampled on nq nodes.
void tag_mode(EigenPair& p) {
  std::vector<cplx> a(p.trace.begin(), p.trace.end());
  if (!fft::is_power_of_two(a.size())) {
    p.dominant_mode = -1;
    return;
  }
  auto F = fft::forward(a);
  const int n = static_cast<int>(F.size());
  int best = 0;
  double bestmag = -1.0;
  for (int m = 0; m <= n / 2; ++m) {
    const double mag =
        std::abs(F[m]) + (m > 0 && m < n / 2 ? std::abs(F[n - m]) : 0.0);
    if (mag > bestmag) {
      bestmag = mag;
      best = m;
    }
  }
  p.dominant_mode = best;
  if (best == 0 || best == n / 2) {
    p.parity = Parity::Even;
  } else {
    // cos-mode: F[m] and F[n-m] in phase; sin-mode: opposite phase.
    const cplx ce = F[best] + F[n - best];  // ~ 2 * cos coefficient
    const cplx co = F[best] - F[n - best];  // ~ 2i * sin coefficient
    p.parity = std::abs(ce) >= std::abs(co) ? Parity::Even : Parity::Odd;
  }
}

// L2(domain) norm^2 of the eigenfunction from boundary data alone
// (divergence identity div[x(k^2 phi^2 - |grad phi|^2)/2 + (x.grad phi)
// grad phi] = k^2 phi^2 for Helmholtz solutions), using the bilinear square.
cplx rellich_norm2(const geometry::AnalyticClosedCurve& dom, double k,
                   BoundaryCondition bc, const std::vector<cplx>& trace) {
  const int n = static_cast<int>(trace.size());
  const auto b = boundary_nodes(dom, n);
  // Tangential derivative of the trace by spectral differentiation.
  std::vector<cplx> a(trace.begin(), trace.end());
  std::vector<cplx> dt(n, 0.0);
  if (fft::is_power_of_two(a.size())) {
    auto F = fft::forward(a);
    for (int m = 0; m < n; ++m) {
      const int freq = (m <= n / 2) ? m : m - n;
      F[m] *= cplx(0.0, freq == n / 2 ? 0.0 : freq);
    }
    dt = fft::inverse(F);
  } else {
    throw ConfigError("rellich_norm2: nq must be a power of two");
  }
  cplx acc = 0.0;
  for (int j = 0; j < n; ++j) {
    const double xn = b.x[j] * b.nx[j] + b.y[j] * b.ny[j];
    cplx integrand;
    if (bc == BoundaryCondition::Dirichlet) {
      // trace = h * dphi/dnu  =>  (dphi/dnu)^2 = k^2 trace^2
      integrand = 0.5 * xn * (k * k) * trace[j] * trace[j];
    } else {
      const cplx dphids = dt[j] / b.sp[j];
      integrand =
          0.5 * xn * (k * k * trace[j] * trace[j] - dphids * dphids);
    }
    acc += integrand * b.sp[j] * (kTwoPi / n);
  }
  return acc / (k * k);
}

double golden_min(const std::function<double(double)>& f, double a, double b,
                 double tol) {
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
  double f1 = f(x1), f2 = f(x2);
  while (b - a > tol) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - gr * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + gr * (b - a);
      f2 = f(x2);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

EigenPair disc_eigenpair(int m, int n, BoundaryCondition bc, Parity parity,
                         int nq) {
  if (m < 0 || n < 1) throw ConfigError("disc_eigenpair: invalid indices");
  if (parity == Parity::Odd && m == 0)
    throw ConfigError("disc_eigenpair: m = 0 has no odd partner");
  const bool neumann = (bc == BoundaryCondition::Neumann);
  const double lam = specfun::bessel_root(
      m, n, neumann ? specfun::RootKind::Jprime : specfun::RootKind::J);
  if (lam == 0.0)
    throw ConfigError("disc_eigenpair: zero mode (constant) excluded");

  const double jm = specfun::bessel_j(m, lam);
  const double jmp = specfun::bessel_j_prime(m, lam);
  // Radial integral int_0^1 J_m(lam r)^2 r dr at the respective root, then
  // C^2 * (angular factor) * (radial integral) = 1.
  const double radial = neumann
                            ? (lam * lam - m * m) / (2.0 * lam * lam) * jm * jm
                            : 0.5 * jmp * jmp;
  const double angular = (m == 0) ? kTwoPi : kPi;
  const double C = 1.0 / std::sqrt(angular * radial);

  EigenPair p;
  p.lambda = lam;
  p.h = 1.0 / lam;
  p.bc = bc;
  p.nq = nq;
  p.boundary = geometry::make_circle(1.0);
  p.normalized = true;
  p.dominant_mode = m;
  p.parity = parity;
  p.trace.resize(nq);
  for (int j = 0; j < nq; ++j) {
    const double t = kTwoPi * j / nq;
    const double ang =
        (parity == Parity::Even) ? std::cos(m * t) : std::sin(m * t);
    if (neumann) {
      p.trace[j] = C * jm * ang;
    } else {
      p.trace[j] = p.h * C * lam * jmp * ang;
    }
  }
  return p;
}

std::vector<std::vector<cplx>> bie_matrix(const geometry::AnalyticClosedCurve& domain,
                                          double k, BoundaryCondition bc, int nq) {
  const Mat A = detector(domain, k, bc, nq);
  std::vector<std::vector<cplx>> out(nq, std::vector<cplx>(nq));
  for (int i = 0; i < nq; ++i)
    for (int j = 0; j < nq; ++j) out[i][j] = A(i, j);
  return out;
}

double bie_singular_values(const geometry::AnalyticClosedCurve& domain, double k,
                           BoundaryCondition bc, int nq) {
  const Mat A = detector(domain, k, bc, nq);
  Eigen::BDCSVD<Mat> svd(A);
  return svd.singularValues()(nq - 1);
}

SmallSingularData bie_smallest(const geometry::AnalyticClosedCurve& domain,
                               double k, BoundaryCondition bc, int count,
                               int nq) {
  const Mat A = detector(domain, k, bc, nq);
  Eigen::BDCSVD<Mat> svd(A, Eigen::ComputeThinV);
  SmallSingularData out;
  for (int i = 0; i < count; ++i) {
    out.sigma.push_back(svd.singularValues()(nq - 1 - i));
    const Vec v = svd.matrixV().col(nq - 1 - i);
    out.vectors.emplace_back(v.data(), v.data() + nq);
  }
  return out;
}

cplx interior_field(const geometry::AnalyticClosedCurve& domain, double k,
                    const std::vector<cplx>& density, double x, double y) {
  const int n = static_cast<int>(density.size());
  const auto b = boundary_nodes(domain, n);
  cplx acc = 0.0;
  for (int j = 0; j < n; ++j) {
    const double rho = std::hypot(x - b.x[j], y - b.y[j]);
    acc += cplx(0.0, 0.25) * hankel(0, k * rho) * b.sp[j] * density[j];
  }
  return acc * (kTwoPi / n);
}

std::vector<EigenPair> eig_scan(const geometry::AnalyticClosedCurve& domain,
                                double k_lo, double k_hi, BoundaryCondition bc,
                                int nq) {
  if (!(k_lo > 0.0 && k_hi > k_lo)) throw ConfigError("eig_scan: bad window");
  const double diam = diameter(domain);
  if (nq < 10.0 * k_hi * diam)
    throw ConfigError("eig_scan: nq below resolution limit");

  auto sigma = [&](double k) { return bie_singular_values(domain, k, bc, nq); };

  // Interior eigenvalues are zeros of det A(k), but the sigma_min dip can be
  // far narrower than any affordable grid (the compact-tail floor masks it).
  // Instead detect poles of d/dk log|det A(k)| ~ mult/(k - k*): they show as
  // ascending sign changes with wide basins, then polish on sigma_min.
  auto dlogdet = [&](double k) {
    const double dk = 1e-6;
    auto ld = [&](double kk) {
      const Mat A = detector(domain, kk, bc, nq);
      Eigen::PartialPivLU<Mat> lu(A);
      double acc = 0.0;
      for (int i = 0; i < nq; ++i) acc += std::log(std::abs(lu.matrixLU()(i, i)));
      return acc;
    };
    return (ld(k + dk) - ld(k - dk)) / (2.0 * dk);
  };

  const double step = kPi / (16.0 * diam);
  const int ng = static_cast<int>(std::ceil((k_hi - k_lo) / step)) + 1;
  std::vector<double> ks(ng), phi(ng);
  for (int i = 0; i < ng; ++i) {
    ks[i] = std::min(k_lo + i * step, k_hi);
    phi[i] = dlogdet(ks[i]);
  }

  std::vector<EigenPair> result;
  for (int i = 0; i + 1 < ng; ++i) {
    if (!(phi[i] < 0.0 && phi[i + 1] > 0.0)) continue;
    double lo = ks[i], hi = ks[i + 1];
    while (hi - lo > 5e-4) {
      const double mid = 0.5 * (lo + hi);
      (dlogdet(mid) < 0.0 ? lo : hi) = mid;
    }
    const double pad = 2.0 * (hi - lo);
    const double kstar =
        golden_min(sigma, std::max(k_lo, lo - pad), std::min(k_hi, hi + pad),
                   1e-10);
    const auto small = bie_smallest(domain, kstar, bc, 3, nq);
    // Count kernel vectors: threshold well above the discretization floor
    // and well below the off-resonance level.
    const double thresh = 1e-4;
    int mult = 0;
    while (mult < 3 && small.sigma[mult] < thresh) ++mult;
    if (mult == 0) continue;  // shallow dip, not an eigenvalue

    const auto b = boundary_nodes(domain, nq);
    const Mat S = single_layer(b, kstar);
    const Mat D = half_plus_kprime(b, kstar);

    // Interior Helmholtz residual at random probes (spurious-mode filter);
    // any kernel density represents a field of the same eigenspace.
    {
      std::mt19937 rng(12345);
      std::uniform_real_distribution<double> uni(-1.0, 1.0);
      double cx = 0.0, cy = 0.0, rmin = 1e300;
      for (int j = 0; j < nq; ++j) {
        cx += b.x[j] / nq;
        cy += b.y[j] / nq;
      }
      for (int j = 0; j < nq; ++j)
        rmin = std::min(rmin, std::hypot(b.x[j] - cx, b.y[j] - cy));
      const auto& dens = small.vectors[0];
      const double fd = 1.5e-3 / kstar;
      double worst = 0.0;
      int used = 0;
      for (int pr = 0; pr < 20; ++pr) {
        double px, py;
        do {
          px = uni(rng);
          py = uni(rng);
        } while (px * px + py * py > 1.0);
        px = cx + 0.55 * rmin * px;
        py = cy + 0.55 * rmin * py;
        const cplx f0 = interior_field(domain, kstar, dens, px, py);
        if (std::abs(f0) < 1e-3) continue;  // near a nodal line
        const cplx lap =
            (interior_field(domain, kstar, dens, px + fd, py) +
             interior_field(domain, kstar, dens, px - fd, py) +
             interior_field(domain, kstar, dens, px, py + fd) +
             interior_field(domain, kstar, dens, px, py - fd) - 4.0 * f0) /
            (fd * fd);
        worst = std::max(worst, std::abs(lap + kstar * kstar * f0) /
                                    (kstar * kstar * std::abs(f0)));
        ++used;
      }
      if (used == 0 || worst > 1e-5)
        throw ConvergenceError("eig_scan: interior residual check failed");
    }

    // Traces of the kernel vectors; the physical eigenfunctions are real, so
    // extract an orthonormal real basis of the span of Re/Im parts.
    Eigen::MatrixXd W(nq, 2 * mult);
    for (int q = 0; q < mult; ++q) {
      const Vec psi = Eigen::Map<const Vec>(small.vectors[q].data(), nq);
      const Vec tr = (bc == BoundaryCondition::Neumann)
                         ? Vec(S * psi)
                         : Vec((1.0 / kstar) * (D * psi));
      W.col(2 * q) = tr.real();
      W.col(2 * q + 1) = tr.imag();
    }
    Eigen::BDCSVD<Eigen::MatrixXd> wsvd(W, Eigen::ComputeThinU);
    for (int q = 0; q < mult; ++q) {
      if (wsvd.singularValues()(q) < 1e-10 * wsvd.singularValues()(0))
        throw NumericalError("eig_scan: degenerate trace span");
      Eigen::VectorXd tr = wsvd.matrixU().col(q);

      EigenPair p;
      p.lambda = kstar;
      p.h = 1.0 / kstar;
      p.bc = bc;
      p.nq = nq;
      p.boundary = domain;

      // Sign fix: largest entry positive.
      int imax = 0;
      for (int j = 1; j < nq; ++j)
        if (std::abs(tr(j)) > std::abs(tr(imax))) imax = j;
      if (tr(imax) < 0.0) tr = -tr;
      p.trace.resize(nq);
      for (int j = 0; j < nq; ++j) p.trace[j] = tr(j);

      // L2(domain) normalization from boundary data.
      const cplx n2 = rellich_norm2(domain, kstar, bc, p.trace);
      if (!(n2.real() > 0.0) || std::abs(n2.imag()) > 1e-6 * std::abs(n2))
        throw NumericalError("eig_scan: normalization integral not positive");
      const double scale = 1.0 / std::sqrt(n2.real());
      for (auto& v : p.trace) v *= scale;
      p.normalized = true;
      tag_mode(p);
      result.push_back(std::move(p));
    }
  }
  std::sort(result.begin(), result.end(), [](const auto& a, const auto& c) {
    return a.lambda < c.lambda ||
           (a.lambda == c.lambda && a.parity < c.parity);
  });
  return result;
}

double trace_l2_norm(const EigenPair& pair) {
  if (!pair.normalized) throw ConfigError("trace_l2_norm: unnormalized pair");
  const int n = pair.nq;
  double acc = 0.0;
  for (int j = 0; j < n; ++j) {
    const double sp = geometry::speed(pair.boundary, kTwoPi * j / n);
    acc += std::norm(pair.trace[j]) * sp * (kTwoPi / n);
  }
  return std::sqrt(acc);
}

}  // namespace nodal::eigensolver
