#include "nodal/microlocal.hpp"

#include <algorithm>
#include <cmath>

#include "nodal/errors.hpp"
#include "nodal/fft.hpp"
#include "nodal/quadrature.hpp"

namespace nodal::microlocal {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;

size_t next_pow2(double x) {
  size_t n = 1;
  while (static_cast<double>(n) < x) n <<= 1;
  return n;
}

// Least-squares fit y ~ slope * x + intercept.
void linear_fit(const std::vector<double>& x, const std::vector<double>& y,
                double& slope, double& intercept) {
  const size_t n = x.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < n; ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double den = n * sxx - sx * sx;
  if (den == 0.0) throw NumericalError("linear_fit: degenerate abscissae");
  slope = (n * sxy - sx * sy) / den;
  intercept = (sy - slope * sx) / n;
}

double interp_monotone(const std::vector<double>& xs,
                       const std::vector<double>& ys, double x) {
  if (xs.empty() || x < xs.front() || x > xs.back()) return 0.0;
  const auto it = std::lower_bound(xs.begin(), xs.end(), x);
  if (it == xs.begin()) return ys.front();
  const size_t j = static_cast<size_t>(it - xs.begin());
  const double x0 = xs[j - 1], x1 = xs[j];
  const double w = (x1 > x0) ? (x - x0) / (x1 - x0) : 0.0;
  return (1.0 - w) * ys[j - 1] + w * ys[j];
}

}  // namespace

double smoothstep7(double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double x2 = x * x;
  return x2 * x2 * (35.0 + x * (-84.0 + x * (70.0 - 20.0 * x)));
}

double PeriodicMultiplier::operator()(double xi) const {
  const double ax = std::abs(xi);
  if (ax <= R) return 1.0;
  if (ax >= 2.0 * R) return 0.0;
  return 1.0 - smoothstep7((ax - R) / R);
}

std::vector<cplx> apply_multiplier(const std::vector<cplx>& f,
                                   const PeriodicMultiplier& chi, double h) {
  const size_t n = f.size();
  if (!fft::is_power_of_two(n))
    throw ConfigError("apply_multiplier: sample count must be a power of two");
  if (static_cast<double>(n) < 4.0 * (2.0 * chi.R / h) * (1.0 - 1e-12))
    throw ConfigError("apply_multiplier: sample count aliases the window");
  auto c = fft::forward(f);
  for (size_t k = 0; k < n; ++k) {
    const double freq =
        (k < n / 2) ? static_cast<double>(k)
                    : static_cast<double>(k) - static_cast<double>(n);
    c[k] *= chi(h * freq);
  }
  return fft::inverse(c);
}

std::vector<double> wavefront_check(const std::vector<EigenPair>& family,
                                    const AnalyticClosedCurve& H,
                                    const PeriodicMultiplier& chi) {
  std::vector<double> sups;
  sups.reserve(family.size());
  for (const auto& pair : family) {
    const size_t n =
        std::max<size_t>(512, next_pow2(4.0 * 2.0 * chi.R / pair.h));
    continuation::Evaluator ev(pair, H, 0.0);
    std::vector<cplx> u(n);
    for (size_t j = 0; j < n; ++j) u[j] = ev(cplx(kTwoPi * j / n, 0.0));
    const auto filtered = apply_multiplier(u, chi, pair.h);
    double sup = 0.0;
    for (size_t j = 0; j < n; ++j)
      sup = std::max(sup, std::abs(u[j] - filtered[j]));
    sups.push_back(sup);
  }
  return sups;
}

ResidualTable residual_decay(const std::vector<EigenPair>& family,
                             const AnalyticClosedCurve& H,
                             const zeros::OvalDomain& oval,
                             const std::vector<double>& Rs, int n_samples) {
  if (family.empty()) throw ConfigError("residual_decay: empty family");
  if (Rs.empty()) throw ConfigError("residual_decay: empty R list");
  const double rmax = *std::max_element(Rs.begin(), Rs.end());

  ResidualTable table;
  for (const auto& pair : family) table.hs.push_back(pair.h);
  for (double r : Rs) {
    ResidualFit fit;
    fit.R = r;
    table.fits.push_back(fit);
  }

  // Constant-speed parametrization of the oval boundary in the strip: the
  // analysis and the decay rates live in arclength frequencies, and for thin
  // ovals the angle parametrization would misplace the frequency content of
  // the crowded ends.  Cumulative arclength by spectral integration of the
  // speed, inverted by Newton.
  const int nsp = 16384;
  std::vector<cplx> spv(nsp);
  for (int i = 0; i < nsp; ++i) {
    const double th = kTwoPi * i / nsp;
    spv[i] = std::hypot(oval.a * std::sin(th), oval.b * std::cos(th));
  }
  auto spc = fft::forward(spv);
  const double mean_speed = spc[0].real() / nsp;
  std::vector<std::pair<int, cplx>> modes;
  for (int k = 1; k < nsp; ++k) {
    const int kk = (k <= nsp / 2) ? k : k - nsp;
    const cplx v = spc[k] / (cplx(0.0, kk) * static_cast<double>(nsp));
    if (std::abs(v) > 1e-17) modes.emplace_back(kk, v);
  }
  cplx p0 = 0.0;
  for (const auto& [kk, v] : modes) p0 += v;
  auto cumlen = [&](double th) {
    cplx p = 0.0;
    for (const auto& [kk, v] : modes) p += v * std::polar(1.0, kk * th);
    return mean_speed * th + (p - p0).real();
  };
  auto oval_speed = [&](double th) {
    return std::hypot(oval.a * std::sin(th), oval.b * std::cos(th));
  };

  for (const auto& pair : family) {
    const size_t n = std::max<size_t>(
        next_pow2(static_cast<double>(n_samples)),
        next_pow2(4.0 * 2.0 * rmax / pair.h));
    continuation::Evaluator ev(pair, H, oval.b);
    std::vector<cplx> u(n);
    double th = 0.0;
    for (size_t j = 0; j < n; ++j) {
      const double target = mean_speed * kTwoPi * j / n;
      for (int it = 0; it < 60; ++it) {
        const double step = (cumlen(th) - target) / oval_speed(th);
        th -= step;
        if (std::abs(step) < 1e-14) break;
      }
      u[j] = ev(cplx(oval.a * std::cos(th), oval.b * std::sin(th)));
    }
    // Semiclassical tangential derivative h d/dtheta, spectrally.
    auto c = fft::forward(u);
    for (size_t k = 0; k < n; ++k) {
      const double freq =
          (k < n / 2) ? static_cast<double>(k)
                      : static_cast<double>(k) - static_cast<double>(n);
      c[k] *= cplx(0.0, pair.h * freq);
    }
    const auto g = fft::inverse(c);

    for (auto& fit : table.fits) {
      const auto filtered = apply_multiplier(g, PeriodicMultiplier{fit.R},
                                             pair.h);
      double acc = 0.0;
      for (size_t j = 0; j < n; ++j) acc += std::norm(g[j] - filtered[j]);
      fit.norms.push_back(std::sqrt(acc * mean_speed * kTwoPi / n));
    }
  }

  // A single-member family carries no rate information; leave the fit at
  // zero and report the norms only.
  if (family.size() >= 2) {
    std::vector<double> inv_h;
    for (double h : table.hs) inv_h.push_back(1.0 / h);
    for (auto& fit : table.fits) {
      std::vector<double> logs;
      for (double v : fit.norms) logs.push_back(std::log(std::max(v, 1e-300)));
      double slope = 0.0;
      linear_fit(inv_h, logs, slope, fit.intercept);
      fit.c = -slope;
    }
  }
  return table;
}

std::function<double(double, double)> tube_cutoff(double eps) {
  if (!(eps > 0.0)) throw ConfigError("tube_cutoff: eps must be positive");
  const double lo = eps / 6.0, hi = 5.0 * eps / 6.0;
  const double ramp = (hi - lo) / 4.0;
  return [lo, hi, ramp](double /*re*/, double im) {
    const double up = smoothstep7((im - lo) / ramp);
    const double dn = smoothstep7((hi - im) / ramp);
    return std::min(up, dn);
  };
}

GlancingSymbol glancing_symbol(const AnalyticClosedCurve& H,
                               const AnalyticClosedCurve& bdry,
                               const std::function<double(double, double)>& a,
                               double eps, int n_s, int n_sigma, int n_beta) {
  if (!(eps > 0.0) || n_s < 4 || n_sigma < 9 || n_beta < 16)
    throw ConfigError("glancing_symbol: bad grid");

  GlancingSymbol sym;
  sym.s_grid.resize(n_s);
  for (int i = 0; i < n_s; ++i) sym.s_grid[i] = kTwoPi * i / n_s;

  const double beta_lo = eps / 24.0;
  const double beta_hi = 5.0 * eps / 6.0 + eps / 24.0;
  const double dbeta = (beta_hi - beta_lo) / (n_beta + 1);
  sym.beta_grid.resize(n_beta);
  for (int j = 0; j < n_beta; ++j)
    sym.beta_grid[j] = beta_lo + dbeta * (j + 1);

  sym.fiber_y.resize(n_s);
  sym.fiber_sigma.assign(n_s, std::vector<double>(n_beta));
  sym.fiber_ag.assign(n_s, std::vector<double>(n_beta));

  for (int i = 0; i < n_s; ++i) {
    const double s = sym.s_grid[i];
    const double y = geometry::glancing_map(H, bdry, s);
    sym.fiber_y[i] = y;

    // Glancing frequency: the Im t -> 0 limit of d/d(Im t) of the weight on
    // this fiber.  The chord from r(s) meets H tangentially at q(Y(s)), so
    // that limit is exactly the parametrization speed of H there.
    const double sig0 = geometry::speed(H, y);

    // Weight along the fiber Re t = Y(s), including one ghost node per end
    // for the centered first and second differences.
    std::vector<double> sv(n_beta + 2);
    for (int j = 0; j < n_beta + 2; ++j)
      sv[j] = geometry::weight(H, bdry, cplx(y, beta_lo + dbeta * j));

    auto& fs = sym.fiber_sigma[i];
    auto& fa = sym.fiber_ag[i];
    for (int j = 0; j < n_beta; ++j) {
      const double beta = sym.beta_grid[j];
      const double sig = (sv[j + 2] - sv[j]) / (2.0 * dbeta);
      const double spp = (sv[j + 2] - 2.0 * sv[j + 1] + sv[j]) / (dbeta * dbeta);
      fs[j] = sig;
      const double aval = a(y, beta);
      if (aval <= 0.0) {
        fa[j] = 0.0;
        continue;
      }
      if (!(sig < 1.0))
        throw ConfigError(
            "glancing_symbol: cutoff support reaches the tangential sphere");
      if (!(spp > 0.0))
        throw NumericalError("glancing_symbol: weight fiber not convex");
      if (!(sig > sig0))
        throw NumericalError(
            "glancing_symbol: fiber frequency below its glancing value");
      const double gamma = std::sqrt(1.0 - sig * sig);
      const double tha = std::sqrt(sig * sig - sig0 * sig0) / sig;
      fa[j] = std::sqrt(kPi / spp) * gamma * aval / (4.0 * sig * tha);
      sym.sigma_lo = std::min(sym.sigma_lo, sig);
      sym.sigma_hi = std::max(sym.sigma_hi, sig);
    }
    for (int j = 0; j + 1 < n_beta; ++j)
      if (!(fs[j + 1] > fs[j]))
        throw ConfigError("glancing_symbol: sigma fiber not monotone");
  }

  sym.sigma_grid.resize(n_sigma);
  for (int k = 0; k < n_sigma; ++k)
    sym.sigma_grid[k] = static_cast<double>(k) / (n_sigma - 1);
  sym.table.assign(static_cast<size_t>(n_s) * n_sigma, 0.0);
  for (int i = 0; i < n_s; ++i)
    for (int k = 0; k < n_sigma; ++k)
      sym.table[static_cast<size_t>(i) * n_sigma + k] =
          interp_monotone(sym.fiber_sigma[i], sym.fiber_ag[i],
                          sym.sigma_grid[k]);
  return sym;
}

double GlancingSymbol::eval(double s, double sigma) const {
  const int n_s = static_cast<int>(s_grid.size());
  double sw = std::fmod(s, kTwoPi);
  if (sw < 0.0) sw += kTwoPi;
  const double pos = sw / (kTwoPi / n_s);
  int i0 = static_cast<int>(std::floor(pos)) % n_s;
  const int i1 = (i0 + 1) % n_s;
  const double w = pos - std::floor(pos);
  const double x = std::abs(sigma);
  const double v0 = interp_monotone(fiber_sigma[i0], fiber_ag[i0], x);
  const double v1 = interp_monotone(fiber_sigma[i1], fiber_ag[i1], x);
  return (1.0 - w) * v0 + w * v1;
}

TubeGrid make_tube_grid(const AnalyticClosedCurve& H,
                        const AnalyticClosedCurve& bdry, double eps, int n_re,
                        int n_im) {
  if (!(eps > 0.0) || n_re < 8 || n_im < 3)
    throw ConfigError("make_tube_grid: bad grid");
  TubeGrid g;
  g.eps = eps;
  g.n_re = n_re;
  g.n_im = n_im;
  g.re.resize(n_re);
  for (int i = 0; i < n_re; ++i) g.re[i] = -kPi + kTwoPi * i / n_re;
  // Composite Gauss-Legendre in Im t, with panel breaks at the joints of the
  // standard plateau cutoff (its smoothstep ramps are only C^3 there); within
  // each panel the integrand is analytic, so doubling n_im converges
  // spectrally instead of being pinned at the joint smoothness.
  const double breaks[] = {0.0,       eps / 6.0, eps / 3.0,
                           2.0 * eps / 3.0, 5.0 * eps / 6.0, eps};
  g.im.clear();
  g.w_im.clear();
  for (int p = 0; p + 1 < 6; ++p) {
    const double lo = breaks[p], hi = breaks[p + 1];
    const int k = std::max(3, static_cast<int>(std::lround(n_im * (hi - lo) / eps)));
    std::vector<double> x, w;
    quadrature::gauss_legendre(k, x, w);
    for (int j = 0; j < k; ++j) {
      g.im.push_back(0.5 * (hi - lo) * (x[j] + 1.0) + lo);
      g.w_im.push_back(0.5 * (hi - lo) * w[j]);
    }
  }
  n_im = static_cast<int>(g.im.size());
  g.n_im = n_im;
  g.S.resize(static_cast<size_t>(n_re) * n_im);
  for (int j = 0; j < n_im; ++j)
    for (int i = 0; i < n_re; ++i)
      g.S[static_cast<size_t>(j) * n_re + i] =
          geometry::weight(H, bdry, cplx(g.re[i], g.im[j]));
  return g;
}

double qer_lhs(const EigenPair& pair, const AnalyticClosedCurve& H,
               const TubeGrid& grid,
               const std::function<double(double, double)>& chi) {
  continuation::Evaluator ev(pair, H, grid.eps);
  const double dre = kTwoPi / grid.n_re;
  double acc = 0.0;
  double weight_mass = 0.0;  // integral of e^{-2S/h} chi (same measure)
  double max_u2 = 0.0;
  for (int j = 0; j < grid.n_im; ++j) {
    for (int i = 0; i < grid.n_re; ++i) {
      const double cv = chi(grid.re[i], grid.im[j]);
      if (cv <= 0.0) continue;
      const double S = grid.S[static_cast<size_t>(j) * grid.n_re + i];
      const double damp = std::exp(-2.0 * S / pair.h);
      const double u2 = std::norm(ev(cplx(grid.re[i], grid.im[j])));
      max_u2 = std::max(max_u2, u2);
      const double meas = grid.w_im[j] * dre * 2.0;
      acc += damp * u2 * cv * meas;
      weight_mass += damp * cv * meas;
    }
  }
  const double value = acc / std::sqrt(pair.h);
  const double bound = max_u2 * weight_mass / std::sqrt(pair.h);
  if (value > bound * (1.0 + 1e-9))
    throw NumericalError("qer_lhs: weighted mass exceeds its trivial bound");
  return value;
}

double qer_lhs(const EigenPair& pair, const AnalyticClosedCurve& H, double eps,
               const std::function<double(double, double)>& chi, int n_re,
               int n_im) {
  return qer_lhs(pair, H, make_tube_grid(H, pair.boundary, eps, n_re, n_im),
                 chi);
}

QuantizedForm quantize_form(const std::vector<cplx>& trace,
                            const AnalyticClosedCurve& bdry, double h,
                            const std::function<double(double, double)>& symbol) {
  const size_t n = trace.size();
  if (!fft::is_power_of_two(n))
    throw ConfigError("quantize_form: sample count must be a power of two");
  if (static_cast<double>(n) < 4.0 / h * (1.0 - 1e-12))
    throw ConfigError("quantize_form: trace undersampled for this h");
  auto c = fft::forward(trace);
  for (auto& v : c) v /= static_cast<double>(n);
  double cmax = 0.0;
  for (const auto& v : c) cmax = std::max(cmax, std::abs(v));
  // Left-quantized symbol sum over the occupied frequencies only.
  std::vector<size_t> active;
  for (size_t k = 0; k < n; ++k)
    if (std::abs(c[k]) > 1e-14 * cmax) active.push_back(k);

  cplx form = 0.0;
  for (size_t i = 0; i < n; ++i) {
    const double s = kTwoPi * i / n;
    const double spd = geometry::speed(bdry, s);
    cplx g = 0.0;
    for (size_t k : active) {
      const double freq =
          (k < n / 2) ? static_cast<double>(k)
                      : static_cast<double>(k) - static_cast<double>(n);
      // The symbol's frequency variable is dual to arclength; a parameter
      // frequency k oscillates at k / |q'(s)| per unit of arclength.
      g += symbol(s, h * freq / spd) * c[k] *
           std::polar(1.0, freq * s);
    }
    form += g * std::conj(trace[i]) * spd * (kTwoPi / n);
  }
  QuantizedForm out;
  out.value = form.real();
  out.imag_part = std::abs(form.imag());
  return out;
}

QuantizedForm qer_rhs(const EigenPair& pair, const GlancingSymbol& symbol) {
  return quantize_form(
      pair.trace, pair.boundary, pair.h,
      [&symbol](double s, double xi) { return symbol.eval(s, xi); });
}

double liouville_limit(const GlancingSymbol& symbol,
                       const AnalyticClosedCurve& bdry, double margin) {
  if (symbol.sigma_hi > 1.0 - margin)
    throw ConfigError("liouville_limit: support within margin of |sigma| = 1");
  const int n_s = static_cast<int>(symbol.s_grid.size());
  const double ds = kTwoPi / n_s;
  double total = 0.0;
  for (int i = 0; i < n_s; ++i) {
    const auto& fs = symbol.fiber_sigma[i];
    const auto& fa = symbol.fiber_ag[i];
    double inner = 0.0;
    for (size_t j = 0; j + 1 < fs.size(); ++j) {
      const double f0 = fa[j] > 0.0 ? fa[j] / std::sqrt(1.0 - fs[j] * fs[j])
                                    : 0.0;
      const double f1 =
          fa[j + 1] > 0.0 ? fa[j + 1] / std::sqrt(1.0 - fs[j + 1] * fs[j + 1])
                          : 0.0;
      inner += 0.5 * (f0 + f1) * (fs[j + 1] - fs[j]);
    }
    // Both signs of sigma; arclength measure in s.
    total += 2.0 * inner * geometry::speed(bdry, symbol.s_grid[i]) * ds;
  }
  return total;
}

double FaceWindow::operator()(double s) const {
  double sw = std::fmod(s - lo, kTwoPi);
  if (sw < 0.0) sw += kTwoPi;
  sw += lo;
  if (sw >= hi) return 0.0;
  return std::min(smoothstep7((sw - lo) / eps_face),
                  smoothstep7((hi - sw) / eps_face));
}

std::vector<FaceWindow> face_windows(const std::vector<double>& junctions,
                                     double eps_face) {
  if (junctions.empty())
    throw ConfigError("face_windows: need at least one junction");
  if (!(eps_face > 0.0))
    throw ConfigError("face_windows: eps_face must be positive");
  std::vector<double> j = junctions;
  std::sort(j.begin(), j.end());
  std::vector<FaceWindow> out;
  const size_t k = j.size();
  for (size_t i = 0; i < k; ++i) {
    FaceWindow w;
    w.lo = j[i];
    w.hi = (i + 1 < k) ? j[i + 1] : j[0] + kTwoPi;
    w.eps_face = eps_face;
    if (!(w.hi - eps_face > w.lo + eps_face))
      throw ConfigError("face_windows: eps_face leaves an empty plateau");
    out.push_back(w);
  }
  return out;
}

}  // namespace nodal::microlocal
