#include "eie/boundary_fit.hpp"

#include "eie/errors.hpp"
#include "eie/linalg.hpp"
#include "eie/spline.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace eie {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr int kErrorSegments = 1000;
constexpr double kDropFactor = 1e-10;
constexpr double kConditionLimit = 1e12;
} // namespace

TraceSet boundary_traces(const FormalPowerSet& powers) {
    TraceSet set;
    const int rays = powers.lattice.rays;
    const int n_max = powers.max_exponent;
    set.traces.reserve(2 * n_max + 1);
    set.provenance.reserve(2 * n_max + 1);

    for (int n = 0; n <= n_max; ++n) {
        BoundaryTrace t(rays);
        for (int r = 0; r < rays; ++r) t[r] = powers.boundary_value(n, 0, r).real();
        set.traces.push_back(std::move(t));
        set.provenance.push_back({n, 0});
    }
    for (int n = 1; n <= n_max; ++n) {
        BoundaryTrace t(rays);
        for (int r = 0; r < rays; ++r) t[r] = powers.boundary_value(n, 1, r).real();
        set.traces.push_back(std::move(t));
        set.provenance.push_back({n, 1});
    }
    return set;
}

double inner_product(const BoundaryTrace& f, const BoundaryTrace& g) {
    const std::size_t n = f.size();
    if (n == 0 || g.size() != n)
        throw ValidationError("inner product needs two equally sized traces");
    // Periodic trapezoid: the closing segment from theta_{R-1} back to 2 pi
    // makes every sample carry full weight.
    double sum = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
        const std::size_t rp = (r + 1) % n;
        sum += 0.5 * (f[r] * g[r] + f[rp] * g[rp]);
    }
    return sum * (kTwoPi / static_cast<double>(n));
}

OrthonormalSystem orthonormalize(const TraceSet& set) {
    const std::size_t count = set.traces.size();
    if (count == 0) throw ValidationError("orthonormalization needs at least one trace");
    if (set.provenance.size() != count)
        throw ValidationError("orthonormalization: provenance size mismatch");

    double max_norm = 0.0;
    for (const auto& t : set.traces) max_norm = std::max(max_norm, std::sqrt(inner_product(t, t)));
    const double drop_threshold = kDropFactor * max_norm;

    OrthonormalSystem sys;
    sys.input_provenance = set.provenance;
    for (std::size_t i = 0; i < count; ++i) {
        BoundaryTrace v = set.traces[i];
        std::vector<double> row(count, 0.0);
        row[i] = 1.0;
        // Two modified Gram-Schmidt sweeps keep the system orthonormal well
        // below the 1e-8 verification tolerance.
        for (int sweep = 0; sweep < 2; ++sweep) {
            for (std::size_t k = 0; k < sys.members.size(); ++k) {
                const double proj = inner_product(v, sys.members[k]);
                const auto& uk = sys.members[k];
                for (std::size_t r = 0; r < v.size(); ++r) v[r] -= proj * uk[r];
                for (std::size_t j = 0; j < count; ++j) row[j] -= proj * sys.combination[k][j];
            }
        }
        const double norm = std::sqrt(inner_product(v, v));
        if (norm < drop_threshold) {
            sys.dropped.push_back(static_cast<int>(i));
            continue;
        }
        for (double& x : v) x /= norm;
        for (double& x : row) x /= norm;
        sys.members.push_back(std::move(v));
        sys.combination.push_back(std::move(row));
        sys.provenance.push_back(set.provenance[i]);
    }
    sys.ill_conditioned = sys.dropped.size() > 1;
    return sys;
}

double gram_defect(const OrthonormalSystem& system) {
    double worst = 0.0;
    for (std::size_t i = 0; i < system.members.size(); ++i)
        for (std::size_t j = i; j < system.members.size(); ++j) {
            const double g = inner_product(system.members[i], system.members[j]);
            worst = std::max(worst, std::abs(g - (i == j ? 1.0 : 0.0)));
        }
    return worst;
}

double evaluate_trace(const BoundaryTrace& trace, double theta) {
    return PeriodicCubicSpline(trace, kTwoPi)(theta);
}

namespace {

BoundaryTrace combine(const OrthonormalSystem& system, const std::vector<double>& alpha) {
    const std::size_t r_count = system.members.front().size();
    BoundaryTrace combined(r_count, 0.0);
    for (std::size_t k = 0; k < system.members.size(); ++k)
        for (std::size_t r = 0; r < r_count; ++r) combined[r] += alpha[k] * system.members[k][r];
    return combined;
}

struct ErrorAndSup {
    double error;
    double sup;
};

ErrorAndSup error_against_condition(const OrthonormalSystem& system,
                                    const std::vector<double>& alpha,
                                    const BoundaryConditionFn& condition) {
    const BoundaryTrace combined = combine(system, alpha);
    const PeriodicCubicSpline spline(combined, kTwoPi);
    double sum = 0.0;
    double sup = 0.0;
    for (int i = 0; i < kErrorSegments; ++i) {
        const double theta = kTwoPi * i / kErrorSegments;
        const double c = condition(theta);
        const double d = spline(theta) - c;
        sum += d * d;
        sup = std::max(sup, std::abs(c));
    }
    return {std::sqrt(sum * (kTwoPi / kErrorSegments)), sup};
}

} // namespace

FitResult collocation_fit(const OrthonormalSystem& system, const BoundaryConditionFn& condition,
                          const FitOptions& opts) {
    const int m = static_cast<int>(system.members.size());
    if (m == 0) throw ValidationError("collocation fit needs a non-empty system");

    FitResult fit;

    if (opts.least_squares_all_samples) {
        const int rows = static_cast<int>(system.members.front().size());
        std::vector<double> a(static_cast<std::size_t>(rows) * m);
        std::vector<double> b(rows);
        for (int r = 0; r < rows; ++r) {
            for (int k = 0; k < m; ++k) a[static_cast<std::size_t>(r) * m + k] = system.members[k][r];
            b[r] = condition(kTwoPi * r / rows);
        }
        fit.alpha = solve_least_squares(a, b, rows, m);
        fit.used_least_squares = true;
        fit.collocation_residuals.assign(m, 0.0);
    } else {
        // One periodic spline per member; collocation nodes rarely sit on the
        // sample grid.
        std::vector<PeriodicCubicSpline> splines;
        splines.reserve(m);
        for (const auto& member : system.members) splines.emplace_back(member, kTwoPi);

        std::vector<double> matrix(static_cast<std::size_t>(m) * m);
        std::vector<double> rhs(m);
        for (int j = 0; j < m; ++j) {
            const double theta = kTwoPi * j / m;
            for (int k = 0; k < m; ++k) matrix[static_cast<std::size_t>(j) * m + k] = splines[k](theta);
            rhs[j] = condition(theta);
        }

        DenseSolveResult solved = solve_partial_pivoting(matrix, rhs, m);
        fit.condition_estimate = solved.condition_estimate;
        if (solved.singular || solved.condition_estimate > kConditionLimit) {
            fit.ill_conditioned = true;
            fit.used_least_squares = true;
            fit.alpha = solve_least_squares(matrix, rhs, m, m);
        } else {
            fit.alpha = std::move(solved.x);
            // One refinement step keeps the interpolation residuals at roundoff.
            std::vector<double> residual(m);
            for (int j = 0; j < m; ++j) {
                double s = rhs[j];
                for (int k = 0; k < m; ++k) s -= matrix[static_cast<std::size_t>(j) * m + k] * fit.alpha[k];
                residual[j] = s;
            }
            const DenseSolveResult corr = solve_partial_pivoting(matrix, residual, m);
            if (!corr.singular)
                for (int k = 0; k < m; ++k) fit.alpha[k] += corr.x[k];
        }

        fit.collocation_residuals.resize(m);
        for (int j = 0; j < m; ++j) {
            double s = rhs[j];
            for (int k = 0; k < m; ++k) s -= matrix[static_cast<std::size_t>(j) * m + k] * fit.alpha[k];
            fit.collocation_residuals[j] = s;
        }
    }

    const ErrorAndSup e = error_against_condition(system, fit.alpha, condition);
    fit.error = e.error;
    fit.condition_sup = e.sup;
    return fit;
}

double absolute_error(const OrthonormalSystem& system, const std::vector<double>& alpha,
                      const BoundaryConditionFn& condition) {
    if (alpha.size() != system.members.size())
        throw ValidationError("absolute error: alpha length must match the system");
    return error_against_condition(system, alpha, condition).error;
}

double reconstruct_at(const OrthonormalSystem& system, const std::vector<double>& alpha,
                      const FactorField& factors, Complex z, int nodes, int target_parity) {
    if (alpha.size() != system.members.size())
        throw ValidationError("reconstruction: alpha length must match the system");
    if (system.input_provenance.empty())
        throw ValidationError("reconstruction: system carries no input provenance");
    int n_max = 0;
    for (const auto& prov : system.input_provenance) n_max = std::max(n_max, prov.n);
    const auto powers = powers_at_point(factors, z, nodes, n_max, target_parity);

    double value = 0.0;
    for (std::size_t k = 0; k < system.members.size(); ++k) {
        const auto& row = system.combination[k];
        double member_value = 0.0;
        for (std::size_t j = 0; j < row.size(); ++j) {
            if (row[j] == 0.0) continue;
            const auto& prov = system.input_provenance[j];
            member_value += row[j] * powers[prov.n][prov.coeff].real();
        }
        value += alpha[k] * member_value;
    }
    return value;
}

} // namespace eie
