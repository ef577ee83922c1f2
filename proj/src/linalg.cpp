#include "eie/linalg.hpp"

#include "eie/errors.hpp"

#include <cmath>
#include <limits>

namespace eie {

namespace {

double one_norm(const std::vector<double>& a, int n) {
    double best = 0.0;
    for (int j = 0; j < n; ++j) {
        double col = 0.0;
        for (int i = 0; i < n; ++i) col += std::abs(a[static_cast<std::size_t>(i) * n + j]);
        best = std::max(best, col);
    }
    return best;
}

// In-place LU with partial pivoting; returns false when a pivot underflows.
bool lu_factor(std::vector<double>& a, std::vector<int>& perm, int n) {
    perm.resize(n);
    for (int i = 0; i < n; ++i) perm[i] = i;
    for (int col = 0; col < n; ++col) {
        int pivot = col;
        double best = std::abs(a[static_cast<std::size_t>(col) * n + col]);
        for (int i = col + 1; i < n; ++i) {
            const double v = std::abs(a[static_cast<std::size_t>(i) * n + col]);
            if (v > best) {
                best = v;
                pivot = i;
            }
        }
        if (best < std::numeric_limits<double>::min()) return false;
        if (pivot != col) {
            for (int j = 0; j < n; ++j)
                std::swap(a[static_cast<std::size_t>(pivot) * n + j],
                          a[static_cast<std::size_t>(col) * n + j]);
            std::swap(perm[pivot], perm[col]);
        }
        const double d = a[static_cast<std::size_t>(col) * n + col];
        for (int i = col + 1; i < n; ++i) {
            const double f = a[static_cast<std::size_t>(i) * n + col] / d;
            a[static_cast<std::size_t>(i) * n + col] = f;
            for (int j = col + 1; j < n; ++j)
                a[static_cast<std::size_t>(i) * n + j] -= f * a[static_cast<std::size_t>(col) * n + j];
        }
    }
    return true;
}

std::vector<double> lu_solve(const std::vector<double>& lu, const std::vector<int>& perm,
                             const std::vector<double>& b, int n) {
    std::vector<double> x(n);
    for (int i = 0; i < n; ++i) x[i] = b[perm[i]];
    for (int i = 1; i < n; ++i)
        for (int j = 0; j < i; ++j) x[i] -= lu[static_cast<std::size_t>(i) * n + j] * x[j];
    for (int i = n - 1; i >= 0; --i) {
        for (int j = i + 1; j < n; ++j) x[i] -= lu[static_cast<std::size_t>(i) * n + j] * x[j];
        x[i] /= lu[static_cast<std::size_t>(i) * n + i];
    }
    return x;
}

} // namespace

DenseSolveResult solve_partial_pivoting(std::vector<double> a, std::vector<double> b, int n) {
    if (n < 1 || a.size() != static_cast<std::size_t>(n) * n ||
        b.size() != static_cast<std::size_t>(n))
        throw ValidationError("dense solve: inconsistent dimensions");

    DenseSolveResult result;
    const double norm_a = one_norm(a, n);
    std::vector<double> lu = a;
    std::vector<int> perm;
    if (!lu_factor(lu, perm, n)) {
        result.singular = true;
        result.condition_estimate = std::numeric_limits<double>::infinity();
        return result;
    }

    result.x = lu_solve(lu, perm, b, n);

    // Inverse column by column for the exact 1-norm condition number.
    double norm_inv = 0.0;
    std::vector<double> e(n, 0.0);
    for (int j = 0; j < n; ++j) {
        e[j] = 1.0;
        const std::vector<double> col = lu_solve(lu, perm, e, n);
        e[j] = 0.0;
        double sum = 0.0;
        for (double v : col) sum += std::abs(v);
        norm_inv = std::max(norm_inv, sum);
    }
    result.condition_estimate = norm_a * norm_inv;
    return result;
}

std::vector<double> solve_least_squares(std::vector<double> a, std::vector<double> b, int rows,
                                        int cols) {
    if (rows < cols || cols < 1 || a.size() != static_cast<std::size_t>(rows) * cols ||
        b.size() != static_cast<std::size_t>(rows))
        throw ValidationError("least squares: inconsistent dimensions");

    auto at = [&](int i, int j) -> double& { return a[static_cast<std::size_t>(i) * cols + j]; };

    double scale = 0.0;
    for (double v : a) scale = std::max(scale, std::abs(v));
    const double tiny = scale * 1e-14;

    // Householder QR, applying the reflectors to b as we go.
    for (int k = 0; k < cols; ++k) {
        double norm = 0.0;
        for (int i = k; i < rows; ++i) norm += at(i, k) * at(i, k);
        norm = std::sqrt(norm);
        if (norm <= tiny) continue;
        if (at(k, k) < 0.0) norm = -norm; // keep the reflector head away from zero
        for (int i = k; i < rows; ++i) at(i, k) /= norm;
        at(k, k) += 1.0;
        for (int j = k + 1; j < cols; ++j) {
            double s = 0.0;
            for (int i = k; i < rows; ++i) s += at(i, k) * at(i, j);
            s = -s / at(k, k);
            for (int i = k; i < rows; ++i) at(i, j) += s * at(i, k);
        }
        double s = 0.0;
        for (int i = k; i < rows; ++i) s += at(i, k) * b[i];
        s = -s / at(k, k);
        for (int i = k; i < rows; ++i) b[i] += s * at(i, k);
        at(k, k) = -norm; // R diagonal
    }

    std::vector<double> x(cols, 0.0);
    for (int i = cols - 1; i >= 0; --i) {
        const double d = at(i, i);
        if (std::abs(d) <= tiny) {
            x[i] = 0.0; // rank-deficient direction, truncated
            continue;
        }
        double s = b[i];
        for (int j = i + 1; j < cols; ++j) s -= at(i, j) * x[j];
        x[i] = s / d;
    }
    return x;
}

} // namespace eie
