#pragma once

#include <utility>
#include <vector>

namespace etdms {

// Gauss-Legendre nodes and weights on [-1, 1] (Newton on the Legendre
// recurrence; accurate to ~1e-15 for n up to several hundred).
struct GaussLegendre {
    std::vector<double> x;  // nodes, ascending
    std::vector<double> w;  // weights, sum = 2
};

GaussLegendre gauss_legendre(int n);

}  // namespace etdms
