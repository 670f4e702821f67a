#pragma once
// Semiclassical Fourier-multiplier cutoffs on periodic traces, wavefront and
// residual-decay diagnostics, the glancing symbol on the boundary ball bundle,
// and the two sides of the quadratic-form identity that compares the weighted
// tube mass of the continued restriction with a boundary pseudodifferential
// form.

#include <complex>
#include <functional>
#include <vector>

#include "nodal/continuation.hpp"
#include "nodal/eigensolver.hpp"
#include "nodal/geometry.hpp"
#include "nodal/zeros.hpp"

namespace nodal::microlocal {

using cplx = std::complex<double>;
using eigensolver::EigenPair;
using geometry::AnalyticClosedCurve;

// Degree-7 smoothstep: 0 for x <= 0, 1 for x >= 1, C^3 at the joints.
double smoothstep7(double x);

// Even C^3 frequency window: 1 on |xi| <= R, 0 beyond 2R, monotone between.
struct PeriodicMultiplier {
  double R = 1.0;
  double operator()(double xi) const;
};

// Op_h(chi) on periodic samples: transform, multiply coefficient n by
// chi(h * n), transform back.  Requires a power-of-two sample count of at
// least 4 * (2R/h) (ConfigError otherwise: the window would alias).
std::vector<cplx> apply_multiplier(const std::vector<cplx>& f,
                                   const PeriodicMultiplier& chi, double h);

// sup |(1 - Op_h(chi)) u restricted to H| per family member; sample count is
// the smallest admissible power of two (at least 512).
std::vector<double> wavefront_check(const std::vector<EigenPair>& family,
                                    const AnalyticClosedCurve& H,
                                    const PeriodicMultiplier& chi);

// L2 norms of (1 - Op_h(chi_R)) h d/dtau u^C on the oval boundary, where tau
// is the constant-speed (arclength) parameter of the oval in the strip; one
// row per R, plus the exponential fit log norm ~ -c/h + intercept over the
// family.  The constant-speed parameter matters: for thin ovals the angle
// parametrization crowds near the ends and misplaces frequency content.
struct ResidualFit {
  double R = 0.0;
  double c = 0.0;          // fitted decay rate (positive = decay)
  double intercept = 0.0;
  std::vector<double> norms;  // one per family member
};
struct ResidualTable {
  std::vector<double> hs;
  std::vector<ResidualFit> fits;
};
ResidualTable residual_decay(const std::vector<EigenPair>& family,
                             const AnalyticClosedCurve& H,
                             const zeros::OvalDomain& oval,
                             const std::vector<double>& Rs,
                             int n_samples = 1024);

// Plateau cutoff in Im t supported on (eps/6, 5 eps/6): smoothstep-7 ramps of
// width a quarter of the support on either side, identically 1 between.
std::function<double(double, double)> tube_cutoff(double eps);

// Glancing symbol a_G(s, sigma) on B* of the boundary associated with a tube
// cutoff a(Re t, Im t) supported in {eps/6 <= Im t <= 5 eps/6}.  Built per
// boundary point s from the fiber Im t -> (sigma, a_G):
//   Y = glancing map at s,  S(beta) = weight at Y + i beta,
//   sigma(beta) = S'(beta)   (tangential frequency reached at height beta),
//   a_G = sqrt(pi / S''(beta)) * gamma(sigma) * a(Y, beta)
//         / (4 * sigma * sqrt(sigma^2 - sigma_0^2)/sigma),
// with sigma_0 = |q_H'(Y(s))| the glancing frequency (the beta -> 0 limit of
// sigma on this fiber: the chord from s meets H tangentially at Y(s), so the
// limit is the speed of H there) and gamma = sqrt(1 - sigma^2).  The Gaussian factor
// sqrt(pi / S'') normalizes the saddle of the weighted fiber integral; the
// widely quoted leading-order shorthand (kappa^-2 |Im t|^-1 gamma^2 variants)
// drops it and does not reproduce the quadratic-form identity numerically.
// Even in sigma; zero outside the image of supp a.
struct GlancingSymbol {
  std::vector<double> s_grid;    // uniform on [0, 2 pi)
  std::vector<double> beta_grid;  // fiber ordinates Im t
  std::vector<double> fiber_y;    // Y(s) per fiber
  std::vector<std::vector<double>> fiber_sigma;  // [s][beta], increasing
  std::vector<std::vector<double>> fiber_ag;     // [s][beta], >= 0
  std::vector<double> sigma_grid;  // uniform resampling grid on [0, 1]
  std::vector<double> table;       // a_G on s_grid x sigma_grid, row-major
  double sigma_lo = 1.0, sigma_hi = 0.0;  // support bounds in |sigma|

  // Monotone interpolation in sigma along the bracketing fibers, linear
  // blend in s; even in sigma, zero outside the fiber range.
  double eval(double s, double sigma) const;
};
GlancingSymbol glancing_symbol(const AnalyticClosedCurve& H,
                               const AnalyticClosedCurve& bdry,
                               const std::function<double(double, double)>& a,
                               double eps, int n_s = 48, int n_sigma = 257,
                               int n_beta = 400);

// Precomputed weight table for the tube quadrature: trapezoid nodes in Re t,
// composite Gauss-Legendre nodes in Im t on [0, eps] (panels split at the
// plateau-cutoff joints so each panel sees an analytic integrand), S(t) per
// node.  n_im is a target total; the actual count may differ slightly.
// Reusable across eigenpairs sharing (H, boundary, eps).
struct TubeGrid {
  double eps = 0.0;
  int n_re = 0, n_im = 0;
  std::vector<double> re;        // n_re nodes on [-pi, pi)
  std::vector<double> im, w_im;  // Gauss-Legendre nodes/weights on [0, eps]
  std::vector<double> S;         // weight, row-major [im][re]
};
TubeGrid make_tube_grid(const AnalyticClosedCurve& H,
                        const AnalyticClosedCurve& bdry, double eps,
                        int n_re = 512, int n_im = 33);

// Weighted tube mass of the continued restriction:
//   h^{-1/2} * integral over the upper half-strip of
//   e^{-2 S(t)/h} |u^C(t)|^2 chi(Re t, Im t) * 2 dRe t dIm t.
// Also verifies the trivial upper bound
//   value <= h^{-1/2} max|u^C|^2 * integral e^{-2S/h} chi
// on the same samples (NumericalError if quadrature breaks it).
double qer_lhs(const EigenPair& pair, const AnalyticClosedCurve& H,
               const TubeGrid& grid,
               const std::function<double(double, double)>& chi);
double qer_lhs(const EigenPair& pair, const AnalyticClosedCurve& H, double eps,
               const std::function<double(double, double)>& chi,
               int n_re = 512, int n_im = 33);

// Left-quantized boundary form <Op_h(a_G) u, u> on the trace samples with
// arclength measure.  The symbol's frequency argument is dual to arclength:
// a parameter-frequency k is evaluated at h * k / |q'(s)|.  value is the real part; imag_part reports the size of
// the discarded imaginary component.
struct QuantizedForm {
  double value = 0.0;
  double imag_part = 0.0;
};
QuantizedForm qer_rhs(const EigenPair& pair, const GlancingSymbol& symbol);
// Same quantization with an arbitrary symbol (used for identity/Parseval
// checks and piecewise-window premultiplication).
QuantizedForm quantize_form(const std::vector<cplx>& trace,
                            const AnalyticClosedCurve& bdry, double h,
                            const std::function<double(double, double)>& symbol);

// integral of a_G(s, sigma) gamma^{-1} over the ball bundle (arclength in s,
// both signs of sigma).  ConfigError when the support reaches within margin
// of |sigma| = 1 (the gamma^{-1} factor would blow up).
double liouville_limit(const GlancingSymbol& symbol,
                       const AnalyticClosedCurve& bdry, double margin = 1e-3);

// Smooth per-face windows for a piecewise boundary: junctions are the face
// endpoints in parameter (sorted, within [0, 2 pi)); window j rises from
// junction j over eps_face, is 1 on the interior plateau and vanishes at the
// next junction.  ConfigError when eps_face leaves no plateau.
struct FaceWindow {
  double lo = 0.0, hi = 0.0;  // face interval, hi may exceed 2 pi (wrap)
  double eps_face = 0.0;
  double operator()(double s) const;
};
std::vector<FaceWindow> face_windows(const std::vector<double>& junctions,
                                     double eps_face);

}  // namespace nodal::microlocal
