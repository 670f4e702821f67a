#pragma once
// Shared quadrature rules.

#include <vector>

namespace nodal::quadrature {

// Gauss-Legendre nodes and weights on [-1, 1] (Newton on the Legendre
// recurrence; machine accurate for n up to a few hundred).
void gauss_legendre(int n, std::vector<double>& nodes,
                    std::vector<double>& weights);

}  // namespace nodal::quadrature
