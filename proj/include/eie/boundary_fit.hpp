#pragma once

#include "eie/pseudoanalytic.hpp"

#include <functional>
#include <vector>

namespace eie {

/// R real samples on the unit circle at theta_r = 2 pi r / R, periodic.
using BoundaryTrace = std::vector<double>;

/// Which formal power a trace (or a fitted coefficient) descends from.
struct TraceProvenance {
    int n = 0;     // formal exponent
    int coeff = 0; // 0 -> coefficient 1, 1 -> coefficient i
};

struct TraceSet {
    std::vector<BoundaryTrace> traces;
    std::vector<TraceProvenance> provenance;
};

/// Ordered boundary traces of a formal power set: Re Z^(n)(1) for n = 0..N
/// followed by Re Z^(n)(i) for n = 1..N (2N+1 traces; Re Z^(0)(i) vanishes
/// identically and is omitted).
TraceSet boundary_traces(const FormalPowerSet& powers);

/// Trapezoid approximation of the circle inner product int_0^{2pi} f g dl,
/// dl = dtheta, over the periodic closure of the sample grid.
double inner_product(const BoundaryTrace& f, const BoundaryTrace& g);

struct OrthonormalSystem {
    std::vector<BoundaryTrace> members;
    std::vector<TraceProvenance> provenance;
    /// members[k] = sum_j combination[k][j] * input_trace[j]; used by the
    /// interior reconstruction diagnostic.
    std::vector<std::vector<double>> combination;
    std::vector<TraceProvenance> input_provenance; // column meaning of combination
    std::vector<int> dropped;                      // input indices rejected as degenerate
    bool ill_conditioned = false;                  // more than one input dropped
};

/// Modified Gram-Schmidt (with one re-orthogonalization sweep) under
/// inner_product, preserving the input order. Inputs whose residual norm
/// falls below 1e-10 times the largest input norm are dropped and reported.
OrthonormalSystem orthonormalize(const TraceSet& set);

/// Largest deviation of the Gram matrix from the identity.
double gram_defect(const OrthonormalSystem& system);

/// Periodic cubic-spline interpolation through the R samples; exact at the
/// sample angles.
double evaluate_trace(const BoundaryTrace& trace, double theta);

using BoundaryConditionFn = std::function<double(double)>;

struct FitOptions {
    /// Replace collocation by least squares over all R boundary samples.
    bool least_squares_all_samples = false;
};

struct FitResult {
    std::vector<double> alpha;
    double error = 0.0; // Lebesgue-norm boundary misfit
    std::vector<double> collocation_residuals;
    double condition_estimate = 0.0;
    double condition_sup = 0.0; // max |boundary condition| seen on the error grid
    bool ill_conditioned = false;
    bool used_least_squares = false;
};

/// Interpolation fit: the system's m members are matched to the condition at
/// the m equidistant angles theta_j = j 2pi/m by elimination with partial
/// pivoting (least-squares fallback when the system is singular or its
/// condition estimate exceeds 1e12). Condition values come from the exact
/// evaluator, never from interpolation.
FitResult collocation_fit(const OrthonormalSystem& system, const BoundaryConditionFn& condition,
                          const FitOptions& opts = {});

/// E = sqrt( int_0^{2pi} (sum_k alpha_k u_k - condition)^2 dl ), the integral
/// by the trapezoid rule over 1000 equidistant segments, the combination
/// evaluated through its periodic spline.
double absolute_error(const OrthonormalSystem& system, const std::vector<double>& alpha,
                      const BoundaryConditionFn& condition);

/// Diagnostic interior extension of a fitted combination: applies alpha and
/// the Gram-Schmidt combination rows to formal-power values at z. Nothing in
/// the error measurements depends on it.
double reconstruct_at(const OrthonormalSystem& system, const std::vector<double>& alpha,
                      const FactorField& factors, Complex z, int nodes, int target_parity = 0);

} // namespace eie
