#pragma once
// Real nodal-intersection counting, complex zero counting by the argument
// principle, holomorphic frequency functions and conformal transport of the
// continued restriction to the unit disc.

#include <complex>
#include <functional>
#include <vector>

#include "nodal/continuation.hpp"
#include "nodal/eigensolver.hpp"
#include "nodal/geometry.hpp"

namespace nodal::zeros {

using cplx = std::complex<double>;
using eigensolver::EigenPair;
using geometry::AnalyticClosedCurve;

// Sign-change count of uniformly spaced periodic samples.  Near-tangential
// touches (|u| below 1e-9 * ||u||_inf without a sign change) are reported
// separately and not counted.  With refine = true the crossing locations are
// sharpened by linear interpolation and returned; a warning flag is raised
// when consecutive crossings are closer than 4 sample spacings.
struct RealZeroReport {
  int count = 0;
  int tangential = 0;
  bool resolution_warning = false;
  std::vector<double> locations;  // parameter values in [-pi, pi)
};
RealZeroReport count_real_zeros(const std::vector<double>& samples,
                                bool refine = true);

// Winding number of f along a closed contour (gamma: [0, 2pi) -> C) by
// adaptive argument accumulation; every phase step is refined below pi/2.
// Throws ConfigError when |f| dips under floor_frac * max|f| on the contour
// (zero on contour), ConvergenceError when unwrapping fails or the raw
// winding is further than 0.1 from an integer.
// max_step > 0 additionally refines any segment whose endpoints are farther
// apart than max_step in the contour image; use it when the parametrization
// crowds (uniform parameter steps can then hide whole phase cycles).
int count_complex_zeros(const std::function<cplx(cplx)>& f,
                        const std::function<cplx(double)>& contour,
                        int n0 = 512, double floor_frac = 1e-12,
                        double max_step = 0.0);

// Frequency function of a holomorphic f on the closed unit disc:
//   value = (integral over B1 of |f'|^2 dA) / (integral over dB1 of |f|^2 dtheta)
// by polar tensor quadrature (Gauss-Legendre radial x trapezoid angular, f'
// by centered differences), together with the spectral boundary ratio
// ||d f/dtheta|| / ||f|| on the unit circle.  value <= boundary_ratio always.
struct Frequency {
  double value = 0.0;
  double boundary_ratio = 0.0;
};
Frequency frequency_function(const std::function<cplx(cplx)>& f,
                             int n_theta = 512, int n_rad = 48);

// Oval hosting the complexified parameter: an ellipse with semi-axes
// (3 pi / 2, 7 eps / 4) about the real parameter interval, or a circle.
struct OvalDomain {
  enum class Shape { Circle, Ellipse };
  Shape shape = Shape::Ellipse;
  double a = 0.0, b = 0.0;  // semi-axes (circle: a == b == radius)
  double eps = 0.0;
  AnalyticClosedCurve boundary;
  bool contains(cplx t) const;
};
OvalDomain make_oval(double eps);
OvalDomain make_circle_oval(double radius);

// Conformal map of the unit disc onto the oval, odd with map(0) = 0 and
// deriv(0) > 0.  Built in closed form from the incomplete elliptic integral
// F(w) = w RF(1-w^2, 1-k^2 w^2, 1):  map(z) = c sin(pi F(z/sqrt(k)) / (2K)),
// modulus calibrated to the aspect ratio.  Coefficient-iteration schemes are
// unusable for thin ovals: the map is analytic only up to |z| = 1/sqrt(k),
// which exceeds 1 by roughly exp(-pi^2/(4 * aspect)), so no truncated
// Fourier/Taylor representation of practical degree can reach the required
// boundary defect; the closed form has no such limitation.
class ConformalMap {
 public:
  cplx map(cplx z) const;
  cplx deriv(cplx z) const;              // adaptive-step centered difference
  cplx inverse(cplx w) const;            // coarse seed + Newton
  double boundary_angle(double theta) const;  // ellipse parameter of map(e^{i theta})
  double max_radial_defect(int n = 2048) const;  // self-test on the circle
  bool certify_univalent() const;        // winding of deriv on |z| = 1 - 1e-6

  OvalDomain::Shape shape = OvalDomain::Shape::Circle;
  double a = 1.0, b = 1.0;    // target semi-axes
  double kp2 = 0.0;           // complementary modulus squared
  double bigk = 0.0;          // complete elliptic integral K
  double sqrtk = 1.0;         // sqrt(modulus)
  double focus_scale = 1.0;   // c: foci of the image at +-c
};
ConformalMap conformal_disc_to_oval(const OvalDomain& oval);

// Carlson symmetric elliptic integral R_F for arguments off (-inf, 0).
cplx carlson_rf(cplx x, cplx y, cplx z);

// Full bound chain for one eigenpair: real crossing count on H, complex
// count in the image of the delta-disc (delta covers [-pi, pi] plus 5%
// margin along the real axis), twice the frequency of the transported
// continuation, and twice its boundary ratio.
struct ChainReport {
  double lambda = 0.0;
  double h = 0.0;
  int n_real = 0;
  int n_complex = 0;
  double two_f = 0.0;
  double boundary_ratio = 0.0;
  double delta = 0.0;
  bool chain_ok = false;
};
ChainReport theorem1_chain(const EigenPair& pair, const AnalyticClosedCurve& H,
                           double eps, int n_theta = 256, int n_rad = 24);

}  // namespace nodal::zeros
