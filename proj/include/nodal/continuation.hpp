#pragma once
// Restriction of eigenfunctions to interior curves via layer potentials and
// holomorphic continuation of the restriction into the parameter strip.

#include <complex>
#include <string>
#include <vector>

#include "nodal/eigensolver.hpp"
#include "nodal/geometry.hpp"

namespace nodal::continuation {

using cplx = std::complex<double>;
using eigensolver::EigenPair;
using geometry::AnalyticClosedCurve;

// u(t) on the interior curve H from the boundary data:
//   Neumann:   u(t) = int N(q(t), r(s); h) trace(s) ds,
//              N = -(i/(4h)) H1(rho/h) <(q-r)/rho, nu_s>,
//   Dirichlet: u(t) = h^{-1} int (i/4) H0(rho/h) trace(s) ds
// (trace = h * normal derivative), arclength measure, periodic trapezoid.
// Throws ConfigError when H touches the boundary.
double restrict_to_curve(const EigenPair& pair, const AnalyticClosedCurve& H,
                         double t);

// Holomorphic continuation: the same quadrature with rho^C(t, s) and the
// bilinear direction cosine. Valid while 2 |Im t| sup|q'| < dist(H, bdry);
// throws StripError outside, BranchError from the complexified distance.
cplx continue_complex(const EigenPair& pair, const AnalyticClosedCurve& H,
                      cplx t);

// Samples of u^C on the rectangle [0, 2pi) x [-eps, eps] (n_re x n_im,
// row-major by Im-row, Im ascending; the middle row is the real axis).
struct StripGrid {
  int n_re = 0, n_im = 0;
  double eps = 0.0;
  std::vector<double> re_grid, im_grid;
  std::vector<cplx> samples;
  std::string pair_id, curve_id;
};
StripGrid sample_strip(const EigenPair& pair, const AnalyticClosedCurve& H,
                       double eps, int n_re = 512, int n_im = 33,
                       int threads = 0);

// Maxima of |u^C| over the closed tube of radius eps: full-tube maximum with
// one golden-section refinement around the grid argmax, and the maximum
// restricted to the outer annulus eps - delta <= |Im t| <= eps.
struct TubeMax {
  double max_abs = 0.0;
  cplx argmax;
  double annulus_max = 0.0;
};
TubeMax grauert_max(const EigenPair& pair, const AnalyticClosedCurve& H,
                    double eps, double delta = 0.0, int n_re = 256,
                    int n_im = 17);

// Batched evaluator: performs the strip certification and boundary caching
// once at construction, then evaluates u^C(t) pointwise for |Im t| <= eps.
// Use this instead of continue_complex inside quadrature loops.
class Evaluator {
 public:
  Evaluator(const EigenPair& pair, const AnalyticClosedCurve& H, double eps);
  cplx operator()(cplx t) const;
  double eps() const { return eps_; }

 private:
  EigenPair pair_;
  AnalyticClosedCurve curve_;
  double eps_ = 0.0;
  std::vector<double> bx_, by_, bnx_, bny_, bsp_;
};

// Relative deviation of the exact complexified Neumann kernel from its
// one-term WKB form (2 pi h)^{-1/2} e^{i rho^C/h} a0 with
// a0 = e^{3 pi i/4} costheta^C / (2 sqrt(rho^C)).
double wkb_validate(const AnalyticClosedCurve& H, const AnalyticClosedCurve& bdry,
                    cplx t, double s, double h);

// Exact and WKB kernel values (exposed for phase diagnostics).
cplx neumann_kernel(const AnalyticClosedCurve& H, const AnalyticClosedCurve& bdry,
                    cplx t, double s, double h);
cplx neumann_kernel_wkb(const AnalyticClosedCurve& H,
                        const AnalyticClosedCurve& bdry, cplx t, double s,
                        double h);

}  // namespace nodal::continuation
