#pragma once

#include <vector>

#include "mpr/matrix.hpp"

namespace mpr {

// Euclidean projection onto the probability simplex {w >= 0, sum w = 1}.
// Sort-based thresholding, O(n log n).
std::vector<double> project_simplex(const std::vector<double>& v);

// Frobenius projection onto {X >= 0, Tr X = 1}: eigendecompose and project
// the spectrum onto the probability simplex.
SymMatrix project_psd_trace1(const SymMatrix& a);

// Frobenius projection onto {||X||_1 <= radius} (entrywise l1). Uniform
// soft-thresholding with the exact threshold computed over the
// upper-triangle magnitudes (diagonal weight 1, off-diagonal weight 2).
// Throws std::invalid_argument when radius <= 0.
SymMatrix project_l1_ball(const SymMatrix& a, double radius);

}  // namespace mpr
