#pragma once

#include <vector>

namespace eie {

struct DenseSolveResult {
    std::vector<double> x;
    double condition_estimate = 0.0; // ||A||_1 * ||A^-1||_1 from the explicit inverse
    bool singular = false;
};

/// Gaussian elimination with partial pivoting on a row-major n x n matrix.
/// Cheap at the sizes used here (collocation systems of a few dozen rows),
/// so the condition number is computed exactly from the inverse.
DenseSolveResult solve_partial_pivoting(std::vector<double> a, std::vector<double> b, int n);

/// Householder QR least squares for a row-major rows x cols matrix
/// (rows >= cols). Near-zero diagonal entries of R are truncated.
std::vector<double> solve_least_squares(std::vector<double> a, std::vector<double> b, int rows,
                                        int cols);

} // namespace eie
