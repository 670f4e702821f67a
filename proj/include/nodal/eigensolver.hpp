#pragma once
// Laplace eigenpairs on planar domains: closed forms on the unit disc and a
// boundary-integral singular-value scan for general analytic convex domains.

#include <complex>
#include <string>
#include <vector>

#include "nodal/geometry.hpp"

namespace nodal::eigensolver {

using cplx = std::complex<double>;

enum class BoundaryCondition { Neumann, Dirichlet };
enum class Parity { Even, Odd };

// Eigenvalue lambda with its boundary data sampled on nq equispaced nodes
// t_j = 2 pi j / nq. Convention for the trace:
//   Neumann pairs:  trace = phi restricted to the boundary,
//   Dirichlet pairs: trace = h * (outward normal derivative of phi).
struct EigenPair {
  double lambda = 0.0;
  double h = 0.0;  // 1/lambda
  BoundaryCondition bc = BoundaryCondition::Neumann;
  int nq = 0;
  std::vector<cplx> trace;
  geometry::AnalyticClosedCurve boundary;
  bool normalized = false;   // L2(domain) norm of phi equals 1
  int dominant_mode = -1;    // dominant angular Fourier mode of the trace
  Parity parity = Parity::Even;
};

// Exact unit-disc eigenpair with angular index m and radial index n >= 1.
// Neumann: lambda is the n-th positive root of J_m'; Dirichlet: of J_m.
// Throws ConfigError for the Neumann zero mode (m = 0, n = 1, lambda = 0).
EigenPair disc_eigenpair(int m, int n, BoundaryCondition bc,
                         Parity parity = Parity::Even, int nq = 256);

// Nystrom matrix of the boundary operator whose kernel detects interior
// eigenvalues: single layer S_k (Dirichlet) or 1/2 I + adjoint double layer
// (Neumann); logarithmic singularity handled by trigonometric product
// quadrature on the nq-point periodic grid.
std::vector<std::vector<cplx>> bie_matrix(const geometry::AnalyticClosedCurve& domain,
                                          double k, BoundaryCondition bc, int nq);

// Smallest singular value of the discretized operator.
double bie_singular_values(const geometry::AnalyticClosedCurve& domain, double k,
                           BoundaryCondition bc, int nq = 256);

// The count smallest singular values (ascending) with their right singular
// vectors; used to resolve near-degenerate doublets.
struct SmallSingularData {
  std::vector<double> sigma;
  std::vector<std::vector<cplx>> vectors;  // densities at the nodes
};
SmallSingularData bie_smallest(const geometry::AnalyticClosedCurve& domain, double k,
                               BoundaryCondition bc, int count, int nq = 256);

// Scan [k_lo, k_hi] for interior eigenvalues: locate minima of sigma_min,
// refine, extract kernel densities, convert to boundary traces and normalize
// over the domain. Doublets produce two pairs. Throws ConvergenceError when a
// candidate fails the interior Helmholtz residual check.
std::vector<EigenPair> eig_scan(const geometry::AnalyticClosedCurve& domain,
                                double k_lo, double k_hi, BoundaryCondition bc,
                                int nq = 256);

// L2 norm of the boundary trace with respect to arclength.
// Throws ConfigError for unnormalized pairs.
double trace_l2_norm(const EigenPair& pair);

// Interior field of a single-layer density via its potential representation;
// used for normalization and interior residual checks.
cplx interior_field(const geometry::AnalyticClosedCurve& domain, double k,
                    const std::vector<cplx>& density, double x, double y);

}  // namespace nodal::eigensolver
