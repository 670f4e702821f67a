#pragma once
// Analytic closed plane curves: holomorphic continuation of the parametrization,
// Frenet data, complexified distance, glancing map, critical points and the
// weight function S(t).

#include <complex>
#include <utility>
#include <vector>

#include "nodal/errors.hpp"

namespace nodal::geometry {

using cplx = std::complex<double>;

struct Vec2C {
  cplx x{0.0}, y{0.0};
};

// Closed real-analytic curve stored as truncated Fourier series per coordinate:
//   x(t) = ax[0] + sum_{k>=1} ax[k] cos(kt) + bx[k] sin(kt),  same for y.
// The parametrization continues holomorphically to |Im t| <= strip_halfwidth.
struct AnalyticClosedCurve {
  std::vector<double> ax, bx, ay, by;  // bx[0], by[0] unused (kept for alignment)
  double strip_halfwidth = 0.0;
  bool is_arclength = false;  // constant speed |q'| = length/(2 pi)
  bool convex = false;
};

AnalyticClosedCurve make_circle(double radius, double cx = 0.0, double cy = 0.0);
AnalyticClosedCurve make_ellipse(double a, double b);

// Analytic approximation of a stadium (two semicircular caps of the given
// radius joined by straight segments of length 2*half): the exact boundary is
// only C^1 at the four junctions, so its arclength Fourier coefficients are
// damped by a Gaussian of width nharm/2 to yield an entire parametrization.
// The deviation from the exact stadium is O(nharm^-2); junction parameters
// (for face windows) sit at the arclength fractions of the cap/straight
// transitions.
struct StadiumCurve {
  AnalyticClosedCurve curve;
  std::vector<double> junctions;  // 4 parameter values in [0, 2 pi)
};
StadiumCurve make_stadium(double half, double radius, int nharm = 64);

// Parametrization and derivatives at a strip point; throws StripError when
// |Im t| exceeds the certified halfwidth.
Vec2C eval_curve(const AnalyticClosedCurve& c, cplx t);
Vec2C eval_curve_deriv(const AnalyticClosedCurve& c, cplx t, int order = 1);

// Speed |q'(t)| at real t; curve length by spectral quadrature.
double speed(const AnalyticClosedCurve& c, double t);
double curve_length(const AnalyticClosedCurve& c);

struct FrenetData {
  double tx = 0, ty = 0;  // unit tangent
  double nx = 0, ny = 0;  // outward unit normal
  double kappa = 0;       // curvature (> 0 for positively oriented convex curves)
};
FrenetData frame(const AnalyticClosedCurve& c, double s);

// Re-parametrize to constant speed length/(2 pi); period stays 2 pi.
AnalyticClosedCurve arclength_reparametrize(const AnalyticClosedCurve& c, int nharm = 64);

// Certify a continuation strip numerically: largest eps <= eps_request such
// that |q'(t)| stays above floor_frac * min real-axis speed on the strip grid.
double certify_strip(const AnalyticClosedCurve& c, double eps_request,
                     double floor_frac = 0.4);

// Complexified distance rho^C(t,s): principal square root (Re > 0) of the
// bilinear inner product <q^C(t)-r(s), q^C(t)-r(s)>. Throws BranchError when
// the radicand leaves the right half-plane.
cplx complex_distance(const AnalyticClosedCurve& H, const AnalyticClosedCurve& bdry,
                      cplx t, double s);

// Glancing map Y(s): tangency point on H of the chord from r(s), branch fixed
// by <T_H(Y(s)), omega(s,Y(s))> = -1 (the Im t > 0 branch).
double glancing_map(const AnalyticClosedCurve& H, const AnalyticClosedCurve& bdry,
                    double s);

// Inverse glancing map: s with Y(s) = u (monotone; Newton).
double glancing_map_inverse(const AnalyticClosedCurve& H, const AnalyticClosedCurve& bdry,
                            double u);

// Critical point s*(t): maximizer of -Im rho^C(t, .) for Im t > 0, Newton
// seeded at Y^{-1}(Re t); throws SaddleError if second-order optimality fails.
double critical_point(const AnalyticClosedCurve& H, const AnalyticClosedCurve& bdry,
                      cplx t);

// Weight S(t) = -Im rho^C(t, s*(t)) >= 0; S = 0 on the real axis.
double weight(const AnalyticClosedCurve& H, const AnalyticClosedCurve& bdry, cplx t);

// Unit-speed expansion Im t + kappa^2/6 (Im t)^3, exactly as displayed.
double weight_asymptotic(double kappa_at_re_t, double im_t);

// Near-glancing cubic model of rho^C: returns (predicted Re rho, predicted
// Im rho) from rho = d0 - v (t - Y) + kappa^2 v^3 (t - Y)^3 / 6 with v the
// (constant) parametrization speed of H.
std::pair<double, double> glancing_taylor(const AnalyticClosedCurve& H,
                                          const AnalyticClosedCurve& bdry, cplx t,
                                          double s);

// Tabulated glancing data for one (H, boundary) pair.
class GlancingChart {
 public:
  GlancingChart(AnalyticClosedCurve H, AnalyticClosedCurve bdry, double eps,
                int n_s = 512, int n_im = 33);

  double Y(double s) const;       // interpolating seed + Newton polish
  double Yinv(double u) const;
  double sstar(cplx t) const;
  double S(cplx t) const;         // weight, recomputed (not interpolated)
  double eps() const { return eps_; }
  int branch() const { return branch_; }

  const std::vector<double>& s_grid() const { return sgrid_; }
  const std::vector<double>& Y_samples() const { return ysamples_; }
  // S sampled on the strip grid [-pi,pi] x [0, eps], row-major [im][re].
  const std::vector<double>& re_grid() const { return regrid_; }
  const std::vector<double>& im_grid() const { return imgrid_; }
  const std::vector<double>& S_samples() const { return ssamples_; }

  const AnalyticClosedCurve& curve_H() const { return H_; }
  const AnalyticClosedCurve& curve_bdry() const { return bdry_; }

 private:
  AnalyticClosedCurve H_, bdry_;
  double eps_;
  int branch_ = +1;  // Im t > 0 pairs with the <T,omega> = -1 branch
  std::vector<double> sgrid_, ysamples_;
  std::vector<double> regrid_, imgrid_, ssamples_;
};

}  // namespace nodal::geometry
