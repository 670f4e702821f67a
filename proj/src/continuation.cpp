#include "nodal/continuation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "nodal/errors.hpp"
#include "nodal/specfun.hpp"

namespace nodal::continuation {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;

struct BoundaryCache {
  std::vector<double> x, y, nx, ny, sp;
};

BoundaryCache cache_boundary(const AnalyticClosedCurve& c, int n) {
  BoundaryCache b;
  b.x.resize(n);
  b.y.resize(n);
  b.nx.resize(n);
  b.ny.resize(n);
  b.sp.resize(n);
  for (int j = 0; j < n; ++j) {
    const double t = kTwoPi * j / n;
    const auto p = geometry::eval_curve(c, {t, 0.0});
    b.x[j] = p.x.real();
    b.y[j] = p.y.real();
    const auto f = geometry::frame(c, t);
    b.nx[j] = f.nx;
    b.ny[j] = f.ny;
    b.sp[j] = geometry::speed(c, t);
  }
  return b;
}

double curve_distance(const AnalyticClosedCurve& a, const AnalyticClosedCurve& b) {
  double d = 1e300;
  for (int i = 0; i < 128; ++i) {
    const auto p = geometry::eval_curve(a, {kTwoPi * i / 128, 0.0});
    for (int j = 0; j < 128; ++j) {
      const auto q = geometry::eval_curve(b, {kTwoPi * j / 128, 0.0});
      d = std::min(d, std::hypot(p.x.real() - q.x.real(),
                                 p.y.real() - q.y.real()));
    }
  }
  return d;
}

double sup_speed_strip(const AnalyticClosedCurve& c, double eps) {
  double m = 0.0;
  for (int j = -4; j <= 4; ++j) {
    const double y = eps * j / 4.0;
    for (int i = 0; i < 128; ++i) {
      const auto d = geometry::eval_curve_deriv(c, {kTwoPi * i / 128, y});
      m = std::max(m, std::abs(std::sqrt(d.x * d.x + d.y * d.y)));
    }
  }
  return m;
}

// Shared quadrature core: complexified kernel against the boundary trace.
cplx field_at(const EigenPair& pair, const AnalyticClosedCurve& H,
              const BoundaryCache& b, cplx t) {
  const int n = pair.nq;
  const double h = pair.h;
  const auto q = geometry::eval_curve(H, t);
  cplx acc = 0.0;
  for (int j = 0; j < n; ++j) {
    const cplx dx = q.x - b.x[j];
    const cplx dy = q.y - b.y[j];
    const cplx rho2 = dx * dx + dy * dy;
    if (!(rho2.real() > 0.0))
      throw BranchError("continuation: complexified distance left Re > 0");
    const cplx rho = std::sqrt(rho2);
    cplx kern;
    if (pair.bc == eigensolver::BoundaryCondition::Neumann) {
      const cplx costh = (dx * b.nx[j] + dy * b.ny[j]) / rho;
      kern = -cplx(0.0, 0.25 / h) * specfun::hankel1(1, rho / h) * costh;
    } else {
      kern = (1.0 / h) * cplx(0.0, 0.25) * specfun::hankel1(0, rho / h);
    }
    acc += kern * pair.trace[j] * b.sp[j];
  }
  return acc * (kTwoPi / n);
}

void check_strip(const EigenPair& pair, const AnalyticClosedCurve& H, double im) {
  const double dist = curve_distance(H, pair.boundary);
  if (!(dist > 1e-9))
    throw ConfigError("continuation: curve touches the boundary");
  if (im != 0.0) {
    const double sup = sup_speed_strip(H, std::abs(im));
    if (!(2.0 * std::abs(im) * sup < dist))
      throw StripError("continuation: strip hypothesis violated");
  }
}

}  // namespace

double restrict_to_curve(const EigenPair& pair, const AnalyticClosedCurve& H,
                         double t) {
  check_strip(pair, H, 0.0);
  const auto b = cache_boundary(pair.boundary, pair.nq);
  return field_at(pair, H, b, {t, 0.0}).real();
}

cplx continue_complex(const EigenPair& pair, const AnalyticClosedCurve& H,
                      cplx t) {
  check_strip(pair, H, t.imag());
  const auto b = cache_boundary(pair.boundary, pair.nq);
  return field_at(pair, H, b, t);
}

StripGrid sample_strip(const EigenPair& pair, const AnalyticClosedCurve& H,
                       double eps, int n_re, int n_im, int threads) {
  check_strip(pair, H, eps);
  if (n_im < 3 || n_im % 2 == 0)
    throw ConfigError("sample_strip: n_im must be odd and >= 3");
  const auto b = cache_boundary(pair.boundary, pair.nq);

  StripGrid g;
  g.n_re = n_re;
  g.n_im = n_im;
  g.eps = eps;
  g.re_grid.resize(n_re);
  g.im_grid.resize(n_im);
  g.samples.resize(static_cast<size_t>(n_re) * n_im);
  for (int i = 0; i < n_re; ++i) g.re_grid[i] = kTwoPi * i / n_re;
  for (int j = 0; j < n_im; ++j)
    g.im_grid[j] = -eps + 2.0 * eps * j / (n_im - 1);

  int nthreads = threads > 0
                     ? threads
                     : static_cast<int>(std::thread::hardware_concurrency());
  nthreads = std::max(1, std::min(nthreads, n_im));
  std::vector<std::thread> pool;
  std::atomic<int> next{0};
  auto worker = [&]() {
    for (int j = next.fetch_add(1); j < n_im; j = next.fetch_add(1)) {
      for (int i = 0; i < n_re; ++i) {
        g.samples[static_cast<size_t>(j) * n_re + i] =
            field_at(pair, H, b, {g.re_grid[i], g.im_grid[j]});
      }
    }
  };
  for (int k = 0; k < nthreads; ++k) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  return g;
}

TubeMax grauert_max(const EigenPair& pair, const AnalyticClosedCurve& H,
                    double eps, double delta, int n_re, int n_im) {
  TubeMax out;
  if (eps == 0.0) {
    const auto b = cache_boundary(pair.boundary, pair.nq);
    double best = -1.0;
    double bt = 0.0;
    for (int i = 0; i < n_re; ++i) {
      const double t = kTwoPi * i / n_re;
      const double v = std::abs(field_at(pair, H, b, {t, 0.0}));
      if (v > best) {
        best = v;
        bt = t;
      }
    }
    out.max_abs = out.annulus_max = best;
    out.argmax = {bt, 0.0};
    return out;
  }
  const auto g = sample_strip(pair, H, eps, n_re, n_im);
  double best = -1.0;
  int bi = 0, bj = 0;
  for (int j = 0; j < n_im; ++j)
    for (int i = 0; i < n_re; ++i) {
      const double v = std::abs(g.samples[static_cast<size_t>(j) * n_re + i]);
      if (v > best) {
        best = v;
        bi = i;
        bj = j;
      }
      if (std::abs(g.im_grid[j]) >= eps - delta - 1e-12)
        out.annulus_max = std::max(out.annulus_max, v);
    }

  // One local refinement around the grid argmax (golden section along Re t
  // on the extremal Im-row; |u^C| peaks on the tube boundary).
  const auto b = cache_boundary(pair.boundary, pair.nq);
  const double y = g.im_grid[bj];
  auto f = [&](double x) { return -std::abs(field_at(pair, H, b, {x, y})); };
  double lo = g.re_grid[bi] - kTwoPi / n_re, hi = g.re_grid[bi] + kTwoPi / n_re;
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
  double f1 = f(x1), f2 = f(x2);
  for (int it = 0; it < 40; ++it) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - gr * (hi - lo);
      f1 = f(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + gr * (hi - lo);
      f2 = f(x2);
    }
  }
  const double xref = 0.5 * (lo + hi);
  const double vref = std::abs(field_at(pair, H, b, {xref, y}));
  out.max_abs = std::max(best, vref);
  out.argmax = {xref, y};
  if (std::abs(y) >= eps - delta - 1e-12)
    out.annulus_max = std::max(out.annulus_max, vref);
  return out;
}

Evaluator::Evaluator(const EigenPair& pair, const AnalyticClosedCurve& H,
                     double eps)
    : pair_(pair), curve_(H), eps_(eps) {
  check_strip(pair_, curve_, eps_);
  const auto b = cache_boundary(pair_.boundary, pair_.nq);
  bx_ = b.x;
  by_ = b.y;
  bnx_ = b.nx;
  bny_ = b.ny;
  bsp_ = b.sp;
}

cplx Evaluator::operator()(cplx t) const {
  if (std::abs(t.imag()) > eps_ + 1e-12)
    throw StripError("evaluator: |Im t| exceeds the certified radius");
  const int n = pair_.nq;
  const double h = pair_.h;
  const auto q = geometry::eval_curve(curve_, t);
  cplx acc = 0.0;
  for (int j = 0; j < n; ++j) {
    const cplx dx = q.x - bx_[j];
    const cplx dy = q.y - by_[j];
    const cplx rho2 = dx * dx + dy * dy;
    if (!(rho2.real() > 0.0))
      throw BranchError("continuation: complexified distance left Re > 0");
    const cplx rho = std::sqrt(rho2);
    cplx kern;
    if (pair_.bc == eigensolver::BoundaryCondition::Neumann) {
      const cplx costh = (dx * bnx_[j] + dy * bny_[j]) / rho;
      kern = -cplx(0.0, 0.25 / h) * specfun::hankel1(1, rho / h) * costh;
    } else {
      kern = (1.0 / h) * cplx(0.0, 0.25) * specfun::hankel1(0, rho / h);
    }
    acc += kern * pair_.trace[j] * bsp_[j];
  }
  return acc * (kTwoPi / n);
}

cplx neumann_kernel(const AnalyticClosedCurve& H, const AnalyticClosedCurve& bdry,
                    cplx t, double s, double h) {
  const auto q = geometry::eval_curve(H, t);
  const auto r = geometry::eval_curve(bdry, {s, 0.0});
  const auto f = geometry::frame(bdry, s);
  const cplx dx = q.x - r.x, dy = q.y - r.y;
  const cplx rho = std::sqrt(dx * dx + dy * dy);
  const cplx costh = (dx * f.nx + dy * f.ny) / rho;
  return -cplx(0.0, 0.25 / h) * specfun::hankel1(1, rho / h) * costh;
}

cplx neumann_kernel_wkb(const AnalyticClosedCurve& H,
                        const AnalyticClosedCurve& bdry, cplx t, double s,
                        double h) {
  const auto q = geometry::eval_curve(H, t);
  const auto r = geometry::eval_curve(bdry, {s, 0.0});
  const auto f = geometry::frame(bdry, s);
  const cplx dx = q.x - r.x, dy = q.y - r.y;
  const cplx rho = std::sqrt(dx * dx + dy * dy);
  if (!(rho.real() > 0.0)) throw BranchError("wkb: Re rho <= 0");
  const cplx costh = (dx * f.nx + dy * f.ny) / rho;
  const cplx a0 = std::polar(1.0, 3.0 * kPi / 4.0) * costh / (2.0 * std::sqrt(rho));
  return std::exp(cplx(0.0, 1.0) * rho / h) * a0 / std::sqrt(kTwoPi * h);
}

double wkb_validate(const AnalyticClosedCurve& H, const AnalyticClosedCurve& bdry,
                    cplx t, double s, double h) {
  const cplx exact = neumann_kernel(H, bdry, t, s, h);
  const cplx wkb = neumann_kernel_wkb(H, bdry, t, s, h);
  return std::abs(exact - wkb) / std::abs(exact);
}

}  // namespace nodal::continuation
