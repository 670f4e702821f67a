#include "nodal/zeros.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "nodal/errors.hpp"
#include "nodal/fft.hpp"
#include "nodal/quadrature.hpp"

namespace nodal::zeros {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;

double wrap_pi(double x) {
  x = std::fmod(x + kPi, kTwoPi);
  if (x < 0) x += kTwoPi;
  return x - kPi;
}

}  // namespace

RealZeroReport count_real_zeros(const std::vector<double>& samples,
                                bool refine) {
  const int n = static_cast<int>(samples.size());
  if (n < 8) throw ConfigError("count_real_zeros: too few samples");
  double sup = 0.0;
  for (double v : samples) sup = std::max(sup, std::abs(v));
  if (sup == 0.0) throw ConfigError("count_real_zeros: identically zero input");
  const double atol = 1e-9 * sup;
  const double dt = kTwoPi / n;

  RealZeroReport rep;
  // Walk the circular sequence between consecutive decided (|u| >= atol)
  // samples; runs of undecided samples between equal signs are tangential
  // touches, between opposite signs a single crossing.
  std::vector<int> decided;
  for (int i = 0; i < n; ++i)
    if (std::abs(samples[i]) >= atol) decided.push_back(i);
  if (decided.empty())
    throw ConfigError("count_real_zeros: all samples below tolerance");

  const int nd = static_cast<int>(decided.size());
  for (int a = 0; a < nd; ++a) {
    const int i = decided[a];
    const int j = decided[(a + 1) % nd];
    const double ui = samples[i], uj = samples[j];
    const int gap = (j - i + n) % n;  // undecided samples strictly between
    if (ui * uj < 0.0) {
      ++rep.count;
      if (refine) {
        double loc;
        if (gap == 1) {
          // Linear interpolation on the bracketing interval.
          loc = -kPi + dt * (i + ui / (ui - uj));
        } else {
          loc = -kPi + dt * 0.5 * (i + (i + gap));
        }
        rep.locations.push_back(wrap_pi(loc));
      }
    } else if (gap > 1) {
      ++rep.tangential;
    }
  }

  if (refine && rep.locations.size() >= 2) {
    auto locs = rep.locations;
    std::sort(locs.begin(), locs.end());
    for (size_t i = 0; i < locs.size(); ++i) {
      const double next =
          (i + 1 < locs.size()) ? locs[i + 1] : locs[0] + kTwoPi;
      if (next - locs[i] < 4.0 * dt) rep.resolution_warning = true;
    }
    rep.locations = locs;
  }
  return rep;
}

int count_complex_zeros(const std::function<cplx(cplx)>& f,
                        const std::function<cplx(double)>& contour, int n0,
                        double floor_frac, double max_step) {
  if (n0 < 16) throw ConfigError("count_complex_zeros: n0 too small");
  std::vector<double> th(n0);
  std::vector<cplx> fv(n0);
  double fmax = 0.0;
  for (int i = 0; i < n0; ++i) {
    th[i] = kTwoPi * i / n0;
    fv[i] = f(contour(th[i]));
    fmax = std::max(fmax, std::abs(fv[i]));
  }
  if (fmax == 0.0) throw ConfigError("count_complex_zeros: zero on contour");
  const double floor = floor_frac * fmax;

  double total = 0.0;
  // Phase increment on one segment, refined until each step is below pi/2
  // (and, with max_step, until the contour image moves by less than that).
  std::function<double(double, cplx, cplx, double, cplx, cplx, int)> seg =
      [&](double ta, cplx ga, cplx fa, double tb, cplx gb, cplx fb,
          int depth) -> double {
    if (std::abs(fa) < floor || std::abs(fb) < floor)
      throw ConfigError("count_complex_zeros: zero on contour");
    const double dphi = std::arg(fb / fa);
    const bool coarse = max_step > 0.0 && std::abs(gb - ga) > max_step;
    if (!coarse && std::abs(dphi) < 0.5 * kPi * 0.999) return dphi;
    if (depth > 60)
      throw ConvergenceError("count_complex_zeros: unwrap failure");
    const double tm = 0.5 * (ta + tb);
    const cplx gm = contour(tm);
    const cplx fm = f(gm);
    return seg(ta, ga, fa, tm, gm, fm, depth + 1) +
           seg(tm, gm, fm, tb, gb, fb, depth + 1);
  };
  std::vector<cplx> gv(n0);
  for (int i = 0; i < n0; ++i) gv[i] = contour(th[i]);
  for (int i = 0; i < n0; ++i) {
    const int j = (i + 1) % n0;
    total += seg(th[i], gv[i], fv[i], th[i] + kTwoPi / n0, gv[j], fv[j], 0);
  }
  const double winding = total / kTwoPi;
  const double rounded = std::round(winding);
  if (std::abs(winding - rounded) > 0.1)
    throw ConvergenceError("count_complex_zeros: non-integer winding");
  return static_cast<int>(rounded);
}

Frequency frequency_function(const std::function<cplx(cplx)>& f, int n_theta,
                             int n_rad) {
  if (!fft::is_power_of_two(static_cast<size_t>(n_theta)))
    throw ConfigError("frequency_function: n_theta must be a power of two");

  // Boundary samples and the spectral tangential-derivative ratio.
  std::vector<cplx> circ(n_theta);
  for (int i = 0; i < n_theta; ++i)
    circ[i] = f(std::polar(1.0, kTwoPi * i / n_theta));
  auto coef = fft::forward(circ);
  double den = 0.0, num_t = 0.0;
  for (int i = 0; i < n_theta; ++i) {
    const double k =
        (i <= n_theta / 2) ? static_cast<double>(i)
                           : static_cast<double>(i - n_theta);
    const double c2 = std::norm(coef[i] / static_cast<double>(n_theta));
    den += c2;
    num_t += k * k * c2;
  }
  if (den < 1e-280)
    throw ConfigError("frequency_function: boundary norm below floor");

  // Area integral of |f'|^2 by Gauss-Legendre (radial) x trapezoid (angular);
  // f' by centered differences in the holomorphic variable.
  std::vector<double> gx, gw;
  quadrature::gauss_legendre(n_rad, gx, gw);
  const double d = 1e-5;
  double area = 0.0;
  for (int r = 0; r < n_rad; ++r) {
    const double rr = 0.5 * (gx[r] + 1.0);
    const double wr = 0.5 * gw[r];
    double ring = 0.0;
    for (int i = 0; i < n_theta; ++i) {
      const cplx z = std::polar(rr, kTwoPi * i / n_theta);
      const cplx fp = (f(z + d) - f(z - d)) / (2.0 * d);
      ring += std::norm(fp);
    }
    area += wr * rr * ring * (kTwoPi / n_theta);
  }

  Frequency out;
  out.value = area / (kTwoPi * den);
  out.boundary_ratio = std::sqrt(num_t / den);
  return out;
}

// ---------------------------------------------------------------------------
// Conformal transport

cplx carlson_rf(cplx x, cplx y, cplx z) {
  for (int it = 0; it < 300; ++it) {
    cplx sx = std::sqrt(x), sy = std::sqrt(y), sz = std::sqrt(z);
    if (sx.real() < 0) sx = -sx;
    if (sy.real() < 0) sy = -sy;
    if (sz.real() < 0) sz = -sz;
    const cplx lam = sx * sy + sy * sz + sz * sx;
    x = 0.25 * (x + lam);
    y = 0.25 * (y + lam);
    z = 0.25 * (z + lam);
    const cplx mu = (x + y + z) / 3.0;
    if (std::abs(x - mu) + std::abs(y - mu) + std::abs(z - mu) <
        1e-14 * std::abs(mu))
      break;
  }
  const cplx mu = (x + y + z) / 3.0;
  const cplx X = 1.0 - x / mu, Y = 1.0 - y / mu, Z = 1.0 - z / mu;
  const cplx e2 = X * Y + Y * Z + Z * X, e3 = X * Y * Z;
  return (1.0 - 0.1 * e2 + e3 / 14.0 + e2 * e2 / 24.0 -
          3.0 / 44.0 * e2 * e3) /
         std::sqrt(mu);
}

namespace {

// Semi-minor axis of the image ellipse (foci +-1) at complementary modulus
// squared kp2: b = sinh(pi Im F(i / sqrt(k)) / (2K)).
double ellipse_b_unit(double kp2) {
  const double bigk = carlson_rf(0.0, kp2, 1.0).real();
  const double k = std::sqrt(1.0 - kp2);
  const double y = std::exp(-0.25 * std::log1p(-kp2));  // 1/sqrt(k)
  const double g = y * carlson_rf(1.0 + y * y, 1.0 + k, 1.0).real();
  return std::sinh(0.5 * kPi * g / bigk);
}

// End-cap branch: psi = int_1^w dt / sqrt((t^2-1)(1-k^2 t^2)) for real
// w in (1, 1/k), via t = 1 + u^2 and composite Simpson.
double endcap_psi(double w, double kp2) {
  const double k2 = 1.0 - kp2;
  const double U = std::sqrt(w - 1.0);
  const int ns = 800;
  double acc = 0.0;
  for (int i = 0; i <= ns; ++i) {
    const double u = U * i / ns;
    const double t = 1.0 + u * u;
    const double rad = (2.0 + u * u) * (1.0 - k2 * t * t);
    const double f = 2.0 / std::sqrt(std::max(rad, 1e-300));
    acc += f * ((i == 0 || i == ns) ? 1.0 : (i % 2 ? 4.0 : 2.0));
  }
  return acc * U / ns / 3.0;
}

}  // namespace

bool OvalDomain::contains(cplx t) const {
  const double ex = t.real() / a, ey = t.imag() / b;
  return ex * ex + ey * ey < 1.0;
}

OvalDomain make_oval(double eps) {
  if (!(eps > 0.0) || eps > 1.2)
    throw ConfigError("make_oval: eps out of range");
  OvalDomain o;
  o.shape = OvalDomain::Shape::Ellipse;
  o.a = 1.5 * kPi;
  o.b = 1.75 * eps;
  o.eps = eps;
  o.boundary = geometry::make_ellipse(o.a, o.b);
  return o;
}

OvalDomain make_circle_oval(double radius) {
  if (!(radius > 0.0)) throw ConfigError("make_circle_oval: radius <= 0");
  OvalDomain o;
  o.shape = OvalDomain::Shape::Circle;
  o.a = o.b = radius;
  o.boundary = geometry::make_circle(radius);
  return o;
}

ConformalMap conformal_disc_to_oval(const OvalDomain& oval) {
  ConformalMap m;
  m.shape = oval.shape;
  m.a = oval.a;
  m.b = oval.b;
  if (oval.shape == OvalDomain::Shape::Circle) {
    m.focus_scale = oval.a;
    return m;
  }
  // Calibrate the complementary modulus to the aspect ratio by bisection on
  // its logarithm (the aspect is monotone in kp2).
  const double tau = oval.b / oval.a;
  double lo = std::log(1e-40), hi = std::log(1.0 - 1e-12);
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double bu = ellipse_b_unit(std::exp(mid));
    if (bu / std::sqrt(1.0 + bu * bu) < tau)
      lo = mid;
    else
      hi = mid;
  }
  m.kp2 = std::exp(0.5 * (lo + hi));
  m.bigk = carlson_rf(0.0, m.kp2, 1.0).real();
  m.sqrtk = std::exp(0.25 * std::log1p(-m.kp2));
  const double bu = ellipse_b_unit(m.kp2);
  m.focus_scale = oval.a / std::sqrt(1.0 + bu * bu);
  return m;
}

cplx ConformalMap::map(cplx z) const {
  if (shape == OvalDomain::Shape::Circle) return focus_scale * z;
  if (std::abs(z) > 1.0 + 1e-9)
    throw ConfigError("conformal map: point outside the closed disc");
  bool neg = false, conj = false;
  if (z.real() < 0.0) {
    z = -z;
    neg = true;
  }
  if (z.imag() < 0.0) {
    z = std::conj(z);
    conj = true;
  }
  const cplx w = z / sqrtk;
  cplx g;
  if (z.imag() == 0.0 && w.real() > 1.0) {
    g = std::cosh(0.5 * kPi * endcap_psi(w.real(), kp2) / bigk);
  } else {
    const cplx a1 = 1.0 - w * w;
    g = std::sin(0.5 * kPi / bigk * w *
                 carlson_rf(a1, a1 + kp2 * w * w, 1.0));
  }
  cplx out = focus_scale * g;
  if (conj) out = std::conj(out);
  if (neg) out = -out;
  return out;
}

cplx ConformalMap::deriv(cplx z) const {
  if (shape == OvalDomain::Shape::Circle) return focus_scale;
  // Centered difference with a step adapted to the distance from the branch
  // points +-sqrt(k), where the map varies on a short scale.
  const double dist =
      std::min(std::abs(z - sqrtk), std::abs(z + sqrtk));
  const double d = std::max(1e-9, std::min(1e-6, 1e-3 * dist));
  return (map(z + d) - map(z - d)) / (2.0 * d);
}

cplx ConformalMap::inverse(cplx w) const {
  if (shape == OvalDomain::Shape::Circle) return w / focus_scale;
  // Coarse polar seed, then Newton.
  cplx best = 0.0;
  double bestd = std::abs(w - map(0.0));
  for (int ir = 1; ir <= 12; ++ir)
    for (int it = 0; it < 48; ++it) {
      const cplx z = std::polar(ir / 12.6, kTwoPi * it / 48.0);
      const double dd = std::abs(w - map(z));
      if (dd < bestd) {
        bestd = dd;
        best = z;
      }
    }
  cplx z = best;
  for (int it = 0; it < 60; ++it) {
    const cplx r = map(z) - w;
    if (std::abs(r) < 1e-12) break;
    cplx step = r / deriv(z);
    // Keep the iterate inside the closed disc.
    while (std::abs(z - step) > 1.0 && std::abs(step) > 1e-14) step *= 0.5;
    z -= step;
  }
  if (std::abs(map(z) - w) > 1e-8)
    throw ConvergenceError("conformal inverse: Newton failed");
  return z;
}

double ConformalMap::boundary_angle(double theta) const {
  const cplx g = map(std::polar(1.0, theta));
  if (shape == OvalDomain::Shape::Circle) return std::arg(g);
  return std::atan2(g.imag() / b, g.real() / a);
}

double ConformalMap::max_radial_defect(int n) const {
  double worst = 0.0;
  for (int i = 0; i < n; ++i) {
    const double th = kTwoPi * (i + 0.21) / n;
    const cplx g = map(std::polar(1.0, th));
    const double ex = g.real() / a, ey = g.imag() / b;
    worst = std::max(worst, std::abs(std::hypot(ex, ey) - 1.0));
  }
  return worst;
}

bool ConformalMap::certify_univalent() const {
  if (shape == OvalDomain::Shape::Circle) return true;
  const double r = 1.0 - 1e-6;
  const int zeros = count_complex_zeros(
      [this](cplx z) { return deriv(z); },
      [r](double th) { return std::polar(r, th); }, 1024);
  return zeros == 0;
}

ChainReport theorem1_chain(const EigenPair& pair, const AnalyticClosedCurve& H,
                           double eps, int n_theta, int n_rad) {
  ChainReport rep;
  rep.lambda = pair.lambda;
  rep.h = pair.h;

  const auto oval = make_oval(eps);
  const auto kmap = conformal_disc_to_oval(oval);
  if (kmap.max_radial_defect() > 1e-8)
    throw ConvergenceError("theorem1_chain: conformal boundary defect");

  // Real crossings on H at >= 8 samples per expected oscillation.
  const double len = geometry::curve_length(H);
  int ns = 256;
  while (ns < 8.0 * pair.lambda * len / kTwoPi) ns *= 2;
  continuation::Evaluator on_axis(pair, H, 0.0);
  std::vector<double> u(ns);
  for (int i = 0; i < ns; ++i)
    u[i] = on_axis(cplx(-kPi + kTwoPi * i / ns, 0.0)).real();
  rep.n_real = count_real_zeros(u).count;

  continuation::Evaluator field(pair, H, oval.b);

  // delta: smallest radius whose image covers [-pi, pi] plus a small margin.
  // The margin is chosen so the contour's real-axis crossings at +- margin*pi
  // do not land on a real zero of the field (a fixed 5% parks the crossing
  // exactly on a zero whenever cos(m * 1.05 pi) = 0, e.g. m = 10): take the
  // first candidate whose coarse contour minimum is safely above the
  // zero-on-contour floor of the winding count.
  const double margins[] = {1.05, 1.06, 1.075, 1.09};
  bool placed = false;
  for (double margin : margins) {
    double lo = 0.0, hi = 1.0;
    for (int it = 0; it < 80; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (kmap.map(cplx(mid, 0.0)).real() < margin * kPi)
        lo = mid;
      else
        hi = mid;
    }
    if (!(kmap.map(cplx(1.0, 0.0)).real() >= margin * kPi))
      throw ConfigError("theorem1_chain: oval cannot cover [-pi, pi]");
    rep.delta = 0.5 * (lo + hi);
    double fmin = 1e300, fmax = 0.0;
    for (int i = 0; i < 256; ++i) {
      const double av =
          std::abs(field(kmap.map(std::polar(rep.delta, kTwoPi * i / 256))));
      fmin = std::min(fmin, av);
      fmax = std::max(fmax, av);
    }
    if (fmin > 1e-6 * fmax) {
      placed = true;
      break;
    }
  }
  if (!placed)
    throw ConvergenceError(
        "theorem1_chain: contour pinned near a zero for every margin");

  // Winding over the image of the delta-circle, walked in the t-plane so the
  // boundary crowding of the map cannot hide phase cycles between samples.
  rep.n_complex = count_complex_zeros(
      [&](cplx t) { return field(t); },
      [&](double th) { return kmap.map(std::polar(rep.delta, th)); }, 512,
      1e-12, 1.0 / pair.lambda);

  // Frequency of the transported function.  The Dirichlet integral is
  // conformally invariant, so it is evaluated over the oval in the t-plane
  // (elliptical polar tensor grid), where the quadrature sees the whole
  // domain; a disc-side polar grid would put almost no nodes in the crowded
  // preimage of the ends.
  std::vector<double> gx, gw;
  quadrature::gauss_legendre(n_rad, gx, gw);
  const double d = 1e-5;
  std::vector<double> ring(n_rad, 0.0);
  {
    std::atomic<int> next{0};
    auto worker = [&]() {
      for (int r = next.fetch_add(1); r < n_rad; r = next.fetch_add(1)) {
        const double rho = 0.5 * (gx[r] + 1.0);
        double acc = 0.0;
        for (int i = 0; i < n_theta; ++i) {
          const double sg = kTwoPi * i / n_theta;
          const cplx t(oval.a * rho * std::cos(sg),
                       oval.b * rho * std::sin(sg));
          const cplx up = (field(t + d) - field(t - d)) / (2.0 * d);
          acc += std::norm(up);
        }
        ring[r] = acc;
      }
    };
    const int nthreads = std::max(
        1u, std::min(std::thread::hardware_concurrency(),
                     static_cast<unsigned>(n_rad)));
    std::vector<std::thread> pool;
    for (int k = 0; k < nthreads; ++k) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  double area = 0.0;
  for (int r = 0; r < n_rad; ++r)
    area += 0.5 * gw[r] * 0.5 * (gx[r] + 1.0) * ring[r] * (kTwoPi / n_theta) *
            oval.a * oval.b;

  // Boundary samples of g on the unit circle: denominator and the spectral
  // tangential ratio.
  const int nb = 512;
  std::vector<cplx> circ(nb);
  for (int i = 0; i < nb; ++i)
    circ[i] = field(kmap.map(std::polar(1.0, kTwoPi * i / nb)));
  auto coef = fft::forward(circ);
  double den = 0.0, num_t = 0.0;
  for (int i = 0; i < nb; ++i) {
    const double k =
        (i <= nb / 2) ? static_cast<double>(i) : static_cast<double>(i - nb);
    const double c2 = std::norm(coef[i] / static_cast<double>(nb));
    den += c2;
    num_t += k * k * c2;
  }
  if (den < 1e-280) throw ConfigError("theorem1_chain: zero boundary norm");

  rep.two_f = 2.0 * area / (kTwoPi * den);
  rep.boundary_ratio = std::sqrt(num_t / den);

  const double tol = 1.02;  // quadrature slack on the continuum members
  rep.chain_ok = rep.n_real <= rep.n_complex &&
                 rep.n_complex <= rep.two_f * tol &&
                 rep.two_f <= 2.0 * rep.boundary_ratio * tol;
  return rep;
}

}  // namespace nodal::zeros
