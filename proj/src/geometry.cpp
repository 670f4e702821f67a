#include "nodal/geometry.hpp"

#include <algorithm>
#include <cmath>

#include "nodal/fft.hpp"

namespace nodal::geometry {

namespace {
constexpr double kTwoPi = 2.0 * M_PI;

double wrap_pi(double x) {
  x = std::fmod(x + M_PI, kTwoPi);
  if (x < 0) x += kTwoPi;
  return x - M_PI;
}
}  // namespace

AnalyticClosedCurve make_circle(double radius, double cx, double cy) {
  AnalyticClosedCurve c;
  c.ax = {cx, radius};
  c.bx = {0.0, 0.0};
  c.ay = {cy, 0.0};
  c.by = {0.0, radius};
  c.strip_halfwidth = 2.0;  // parametrization itself is entire; pairs re-certify
  c.is_arclength = true;    // constant speed radius = L/(2 pi)
  c.convex = true;
  return c;
}

AnalyticClosedCurve make_ellipse(double a, double b) {
  AnalyticClosedCurve c;
  c.ax = {0.0, a};
  c.bx = {0.0, 0.0};
  c.ay = {0.0, 0.0};
  c.by = {0.0, b};
  c.strip_halfwidth = 2.0;
  c.is_arclength = false;
  c.convex = true;
  return c;
}

StadiumCurve make_stadium(double half, double radius, int nharm) {
  if (!(half > 0.0) || !(radius > 0.0) || nharm < 8)
    throw ConfigError("make_stadium: bad parameters");
  const double P = 4.0 * half + kTwoPi * radius;  // perimeter
  const double cap = M_PI * radius, straight = 2.0 * half;
  // Exact boundary point at arclength s, starting at (half, -radius) and
  // running counterclockwise: right cap, top straight, left cap, bottom.
  auto point = [&](double s) {
    s = std::fmod(s, P);
    if (s < 0.0) s += P;
    if (s < cap) {
      const double a = -M_PI / 2.0 + s / radius;
      return std::pair{half + radius * std::cos(a), radius * std::sin(a)};
    }
    s -= cap;
    if (s < straight) return std::pair{half - s, radius};
    s -= straight;
    if (s < cap) {
      const double a = M_PI / 2.0 + s / radius;
      return std::pair{-half + radius * std::cos(a), radius * std::sin(a)};
    }
    s -= cap;
    return std::pair{-half + s, -radius};
  };

  const int n = 8192;
  std::vector<cplx> xs(n), ys(n);
  for (int i = 0; i < n; ++i) {
    auto [x, y] = point(P * i / n);
    xs[i] = x;
    ys[i] = y;
  }
  auto cx = fft::forward(xs);
  auto cy = fft::forward(ys);
  StadiumCurve st;
  auto& c = st.curve;
  c.ax.assign(nharm + 1, 0.0);
  c.bx.assign(nharm + 1, 0.0);
  c.ay.assign(nharm + 1, 0.0);
  c.by.assign(nharm + 1, 0.0);
  c.ax[0] = cx[0].real() / n;
  c.ay[0] = cy[0].real() / n;
  const double k0 = nharm / 2.0;
  for (int k = 1; k <= nharm; ++k) {
    const double damp = std::exp(-(k / k0) * (k / k0));
    c.ax[k] = 2.0 * cx[k].real() / n * damp;
    c.bx[k] = -2.0 * cx[k].imag() / n * damp;
    c.ay[k] = 2.0 * cy[k].real() / n * damp;
    c.by[k] = -2.0 * cy[k].imag() / n * damp;
  }
  c.is_arclength = true;  // built from the arclength parametrization
  c.convex = true;
  c.strip_halfwidth = 1.0;
  c.strip_halfwidth = certify_strip(c, 1.0);
  // Junction parameters: the sampling starts at the beginning of the right
  // cap, so the cap/straight transitions sit at arclengths
  // {0, cap, cap + straight, 2 cap + straight}, rescaled to [0, 2 pi).
  st.junctions = {0.0, kTwoPi * cap / P, kTwoPi * (cap + straight) / P,
                  kTwoPi * (2.0 * cap + straight) / P};
  return st;
}

Vec2C eval_curve(const AnalyticClosedCurve& c, cplx t) {
  if (std::abs(t.imag()) > c.strip_halfwidth + 1e-12)
    throw StripError("eval_curve: |Im t| exceeds certified strip halfwidth");
  Vec2C p;
  p.x = c.ax.empty() ? 0.0 : c.ax[0];
  p.y = c.ay.empty() ? 0.0 : c.ay[0];
  const size_t n = std::max(c.ax.size(), c.ay.size());
  for (size_t k = 1; k < n; ++k) {
    const cplx ck = std::cos(static_cast<double>(k) * t);
    const cplx sk = std::sin(static_cast<double>(k) * t);
    if (k < c.ax.size()) p.x += c.ax[k] * ck;
    if (k < c.bx.size()) p.x += c.bx[k] * sk;
    if (k < c.ay.size()) p.y += c.ay[k] * ck;
    if (k < c.by.size()) p.y += c.by[k] * sk;
  }
  return p;
}

Vec2C eval_curve_deriv(const AnalyticClosedCurve& c, cplx t, int order) {
  if (std::abs(t.imag()) > c.strip_halfwidth + 1e-12)
    throw StripError("eval_curve_deriv: |Im t| exceeds certified strip halfwidth");
  Vec2C p;
  const size_t n = std::max(c.ax.size(), c.ay.size());
  for (size_t k = 1; k < n; ++k) {
    const double kk = static_cast<double>(k);
    const cplx ck = std::cos(kk * t);
    const cplx sk = std::sin(kk * t);
    double pw = std::pow(kk, order);
    // d/dt cos = -k sin, d/dt sin = k cos; fourth-order cycle
    cplx dc, ds;
    switch (order & 3) {
      case 0: dc = ck; ds = sk; break;
      case 1: dc = -sk; ds = ck; break;
      case 2: dc = -ck; ds = -sk; break;
      default: dc = sk; ds = -ck; break;
    }
    if (k < c.ax.size()) p.x += c.ax[k] * pw * dc;
    if (k < c.bx.size()) p.x += c.bx[k] * pw * ds;
    if (k < c.ay.size()) p.y += c.ay[k] * pw * dc;
    if (k < c.by.size()) p.y += c.by[k] * pw * ds;
  }
  return p;
}

double speed(const AnalyticClosedCurve& c, double t) {
  const Vec2C d = eval_curve_deriv(c, cplx(t, 0.0));
  return std::hypot(d.x.real(), d.y.real());
}

double curve_length(const AnalyticClosedCurve& c) {
  const int n = 2048;  // trapezoid on a periodic analytic integrand: spectral
  double acc = 0.0;
  for (int i = 0; i < n; ++i) acc += speed(c, kTwoPi * i / n);
  return acc * kTwoPi / n;
}

FrenetData frame(const AnalyticClosedCurve& c, double s) {
  const Vec2C d1 = eval_curve_deriv(c, cplx(s, 0.0), 1);
  const Vec2C d2 = eval_curve_deriv(c, cplx(s, 0.0), 2);
  const double xp = d1.x.real(), yp = d1.y.real();
  const double xpp = d2.x.real(), ypp = d2.y.real();
  const double sp = std::hypot(xp, yp);
  if (sp <= 1e-14) throw NumericalError("frame: vanishing speed");
  FrenetData f;
  f.tx = xp / sp;
  f.ty = yp / sp;
  // positively oriented curve: outward normal is the tangent rotated by -90 deg
  f.nx = f.ty;
  f.ny = -f.tx;
  f.kappa = (xp * ypp - yp * xpp) / (sp * sp * sp);
  return f;
}

AnalyticClosedCurve arclength_reparametrize(const AnalyticClosedCurve& c, int nharm) {
  const int n = 4096;
  // cumulative arclength A(t) = mean * t + periodic part (spectral integration)
  std::vector<std::complex<double>> sp(n);
  for (int i = 0; i < n; ++i) sp[i] = speed(c, kTwoPi * i / n);
  auto coef = fft::forward(sp);
  const double mean = coef[0].real() / n;
  if (mean <= 1e-12) throw NumericalError("arclength_reparametrize: speed floor violated");
  std::vector<std::complex<double>> icoef(n, 0.0);
  for (int k = 1; k < n; ++k) {
    const int kk = (k <= n / 2) ? k : k - n;  // signed frequency
    if (kk == 0) continue;
    icoef[k] = coef[k] / std::complex<double>(0.0, static_cast<double>(kk));
  }
  const double total = mean * kTwoPi;
  // significant Fourier modes of the periodic antiderivative
  std::vector<std::pair<int, std::complex<double>>> modes;
  std::complex<double> p0(0.0);
  for (int k = 1; k < n; ++k) {
    const int kk = (k <= n / 2) ? k : k - n;
    if (kk == 0) continue;
    const auto v = icoef[k] / static_cast<double>(n);
    if (std::abs(v) < 1e-17) continue;
    modes.emplace_back(kk, v);
    p0 += v;
  }
  auto cumlen = [&](double t) {
    // A(t) = mean*t + P(t) - P(0)
    std::complex<double> p(0.0);
    for (const auto& [kk, v] : modes)
      p += v * std::exp(std::complex<double>(0.0, kk * t));
    return mean * t + (p - p0).real();
  };
  // invert: t_j with A(t_j) = total * j / n2
  const int n2 = 1024;
  std::vector<double> tj(n2);
  double t = 0.0;
  for (int j = 0; j < n2; ++j) {
    const double target = total * j / n2;
    for (int it = 0; it < 60; ++it) {
      const double f = cumlen(t) - target;
      const double df = speed(c, t);
      const double dt = f / df;
      t -= dt;
      if (std::abs(dt) < 1e-14) break;
    }
    tj[j] = t;
  }
  // sample curve at t_j and re-project to Fourier coefficients
  std::vector<std::complex<double>> xs(n2), ys(n2);
  for (int j = 0; j < n2; ++j) {
    const Vec2C p = eval_curve(c, cplx(tj[j], 0.0));
    xs[j] = p.x.real();
    ys[j] = p.y.real();
  }
  auto cx = fft::forward(xs);
  auto cy = fft::forward(ys);
  AnalyticClosedCurve out;
  out.ax.assign(nharm + 1, 0.0);
  out.bx.assign(nharm + 1, 0.0);
  out.ay.assign(nharm + 1, 0.0);
  out.by.assign(nharm + 1, 0.0);
  out.ax[0] = cx[0].real() / n2;
  out.ay[0] = cy[0].real() / n2;
  for (int k = 1; k <= nharm; ++k) {
    out.ax[k] = 2.0 * cx[k].real() / n2;
    out.bx[k] = -2.0 * cx[k].imag() / n2;
    out.ay[k] = 2.0 * cy[k].real() / n2;
    out.by[k] = -2.0 * cy[k].imag() / n2;
  }
  out.is_arclength = true;
  out.convex = c.convex;
  out.strip_halfwidth = 1e9;  // provisional; certify below
  out.strip_halfwidth = certify_strip(out, std::min(c.strip_halfwidth, 1.5));
  return out;
}

double certify_strip(const AnalyticClosedCurve& c, double eps_request, double floor_frac) {
  double floor = 1e300;
  for (int i = 0; i < 256; ++i) floor = std::min(floor, speed(c, kTwoPi * i / 256));
  floor *= floor_frac;
  const AnalyticClosedCurve* cc = &c;
  AnalyticClosedCurve tmp;
  if (c.strip_halfwidth < eps_request) {
    tmp = c;
    tmp.strip_halfwidth = 1e9;
    cc = &tmp;
  }
  // The bilinear speed can vanish strictly inside the strip even when it is
  // healthy on the top edge, so scan the whole rectangle |Im t| <= eps.
  auto ok_at = [&](double eps) {
    for (int j = -16; j <= 16; ++j) {
      const double y = eps * j / 16.0;
      for (int i = 0; i < 256; ++i) {
        const cplx t(kTwoPi * i / 256 - M_PI, y);
        const Vec2C d = eval_curve_deriv(*cc, t);
        const double m = std::abs(std::sqrt(d.x * d.x + d.y * d.y));
        if (!(m > floor)) return false;
      }
    }
    return true;
  };
  double lo = 0.0, hi = eps_request;
  if (ok_at(hi)) return hi;
  for (int it = 0; it < 40; ++it) {
    const double mid = 0.5 * (lo + hi);
    (ok_at(mid) ? lo : hi) = mid;
  }
  return lo;
}

cplx complex_distance(const AnalyticClosedCurve& H, const AnalyticClosedCurve& bdry,
                      cplx t, double s) {
  const Vec2C q = eval_curve(H, t);
  const Vec2C r = eval_curve(bdry, cplx(s, 0.0));
  const cplx dx = q.x - r.x.real();
  const cplx dy = q.y - r.y.real();
  const cplx rad = dx * dx + dy * dy;  // bilinear, not Hermitian
  if (!(rad.real() > 0.0))
    throw BranchError("complex_distance: radicand left the right half-plane "
                      "(curve too close to the boundary for this strip width)");
  return std::sqrt(rad);  // principal branch: Re > 0
}

namespace {

// g(Y) = <nu_H(Y), q(Y) - r(s)>: zero at tangency points.
double tangency_residual(const AnalyticClosedCurve& H, double Y, double rx, double ry) {
  const FrenetData f = frame(H, Y);
  const Vec2C q = eval_curve(H, cplx(Y, 0.0));
  return f.nx * (q.x.real() - rx) + f.ny * (q.y.real() - ry);
}

double tangency_tangent_dot(const AnalyticClosedCurve& H, double Y, double rx, double ry) {
  const FrenetData f = frame(H, Y);
  const Vec2C q = eval_curve(H, cplx(Y, 0.0));
  const double wx = q.x.real() - rx, wy = q.y.real() - ry;
  const double len = std::hypot(wx, wy);
  return (f.tx * wx + f.ty * wy) / len;
}

}  // namespace

double glancing_map(const AnalyticClosedCurve& H, const AnalyticClosedCurve& bdry,
                    double s) {
  const Vec2C r = eval_curve(bdry, cplx(s, 0.0));
  const double rx = r.x.real(), ry = r.y.real();
  auto g = [&](double Y) { return tangency_residual(H, Y, rx, ry); };
  double best = 0.0;
  bool found = false;
  const int nseed = 32;
  double prev = g(0.0);
  for (int i = 1; i <= nseed; ++i) {
    const double y1 = kTwoPi * i / nseed;
    const double gv = g(y1);
    if ((prev < 0) != (gv < 0)) {
      // Newton from the midpoint of the bracket
      double lo = kTwoPi * (i - 1) / nseed, hi = y1;
      double y = 0.5 * (lo + hi);
      for (int it = 0; it < 50; ++it) {
        const double f0 = g(y);
        const double df = (g(y + 1e-7) - g(y - 1e-7)) / 2e-7;
        const double dy = f0 / df;
        y -= dy;
        if (std::abs(dy) < 1e-14) break;
      }
      if (std::abs(g(y)) <= 1e-12 && tangency_tangent_dot(H, y, rx, ry) < 0.0) {
        best = y;
        found = true;
        break;
      }
    }
    prev = gv;
  }
  if (!found)
    throw ConvergenceError("glancing_map: no tangency point passed the branch sign test");
  return wrap_pi(best);
}

double glancing_map_inverse(const AnalyticClosedCurve& H, const AnalyticClosedCurve& bdry,
                            double u) {
  // monotone circle diffeomorphism: Newton on Y(s) - u with dense seeding
  double bests = 0.0, bestd = 1e300;
  for (int i = 0; i < 64; ++i) {
    const double s = kTwoPi * i / 64 - M_PI;
    const double d = std::abs(wrap_pi(glancing_map(H, bdry, s) - u));
    if (d < bestd) {
      bestd = d;
      bests = s;
    }
  }
  double s = bests;
  for (int it = 0; it < 60; ++it) {
    const double f = wrap_pi(glancing_map(H, bdry, s) - u);
    const double df = (wrap_pi(glancing_map(H, bdry, s + 1e-6) - glancing_map(H, bdry, s - 1e-6))) / 2e-6;
    const double ds = f / df;
    s -= ds;
    if (std::abs(ds) < 1e-13) break;
  }
  return wrap_pi(s);
}

namespace {

double neg_im_rho(const AnalyticClosedCurve& H, const AnalyticClosedCurve& bdry,
                  cplx t, double s) {
  return -complex_distance(H, bdry, t, s).imag();
}

}  // namespace

double critical_point(const AnalyticClosedCurve& H, const AnalyticClosedCurve& bdry,
                      cplx t) {
  auto f = [&](double s) { return neg_im_rho(H, bdry, t, s); };
  double s0;
  if (t.imag() <= 0.0)
    throw ConvergenceError("critical_point: requires Im t > 0");
  try {
    s0 = glancing_map_inverse(H, bdry, wrap_pi(t.real()));
  } catch (const std::exception&) {
    s0 = 0.0;
  }
  // safeguard: coarse grid max as fallback seed
  double gbest = s0, gval = f(s0);
  for (int i = 0; i < 32; ++i) {
    const double s = kTwoPi * i / 32 - M_PI;
    const double v = f(s);
    if (v > gval) {
      gval = v;
      gbest = s;
    }
  }
  double s = gbest;
  const double d = 1e-5;
  for (int it = 0; it < 60; ++it) {
    const double f1 = (f(s + d) - f(s - d)) / (2 * d);
    const double f2 = (f(s + d) - 2 * f(s) + f(s - d)) / (d * d);
    if (f2 >= 0.0) break;  // handled by the optimality check below
    const double ds = f1 / f2;
    s -= ds;
    if (std::abs(ds) < 1e-13) break;
  }
  const double f2 = (f(s + d) - 2 * f(s) + f(s - d)) / (d * d);
  if (!(f2 < 0.0))
    throw SaddleError("critical_point: second-order optimality failed (eps too large)");
  return wrap_pi(s);
}

double weight(const AnalyticClosedCurve& H, const AnalyticClosedCurve& bdry, cplx t) {
  if (std::abs(t.imag()) < 1e-14) return 0.0;
  const cplx tu = (t.imag() > 0) ? t : std::conj(t);  // conjugate branch symmetry
  const double s = critical_point(H, bdry, tu);
  const double S = -complex_distance(H, bdry, tu, s).imag();
  return S;
}

double weight_asymptotic(double kappa_at_re_t, double im_t) {
  return im_t + kappa_at_re_t * kappa_at_re_t / 6.0 * im_t * im_t * im_t;
}

std::pair<double, double> glancing_taylor(const AnalyticClosedCurve& H,
                                          const AnalyticClosedCurve& bdry, cplx t,
                                          double s) {
  const double Y = glancing_map(H, bdry, s);
  const Vec2C q = eval_curve(H, cplx(Y, 0.0));
  const Vec2C r = eval_curve(bdry, cplx(s, 0.0));
  const double d0 = std::hypot(q.x.real() - r.x.real(), q.y.real() - r.y.real());
  const double kap = frame(H, Y).kappa;
  const double v = speed(H, Y);
  cplx dt = cplx(wrap_pi(t.real() - Y), t.imag());
  const cplx rho = d0 - v * dt + kap * kap * v * v * v / 6.0 * dt * dt * dt;
  return {rho.real(), rho.imag()};
}

GlancingChart::GlancingChart(AnalyticClosedCurve H, AnalyticClosedCurve bdry, double eps,
                             int n_s, int n_im)
    : H_(std::move(H)), bdry_(std::move(bdry)), eps_(eps) {
  sgrid_.resize(n_s);
  ysamples_.resize(n_s);
  double prev = 0.0;
  for (int i = 0; i < n_s; ++i) {
    sgrid_[i] = kTwoPi * i / n_s - M_PI;
    double y = glancing_map(H_, bdry_, sgrid_[i]);
    if (i > 0) {  // unwrap to a monotone lift
      while (y < prev - M_PI) y += kTwoPi;
      while (y > prev + M_PI) y -= kTwoPi;
    }
    ysamples_[i] = y;
    prev = y;
  }
  const int n_re = 64;
  regrid_.resize(n_re);
  imgrid_.resize(n_im);
  ssamples_.assign(static_cast<size_t>(n_im) * n_re, 0.0);
  for (int i = 0; i < n_re; ++i) regrid_[i] = kTwoPi * i / n_re - M_PI;
  for (int j = 0; j < n_im; ++j) imgrid_[j] = eps_ * j / (n_im - 1);
  for (int j = 0; j < n_im; ++j)
    for (int i = 0; i < n_re; ++i)
      ssamples_[static_cast<size_t>(j) * n_re + i] =
          (j == 0) ? 0.0 : weight(H_, bdry_, cplx(regrid_[i], imgrid_[j]));
}

double GlancingChart::Y(double s) const { return glancing_map(H_, bdry_, s); }
double GlancingChart::Yinv(double u) const { return glancing_map_inverse(H_, bdry_, u); }
double GlancingChart::sstar(cplx t) const { return critical_point(H_, bdry_, t); }
double GlancingChart::S(cplx t) const { return weight(H_, bdry_, t); }

}  // namespace nodal::geometry
