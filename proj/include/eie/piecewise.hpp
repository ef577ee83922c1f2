#pragma once

#include "eie/conductivity.hpp"
#include "eie/execution.hpp"
#include "eie/spline.hpp"

#include <string>
#include <utility>
#include <vector>

namespace eie {

/// Vertical-strip decomposition of the unit disk: M equidistant strips over
/// [-1,1], one crossing line in the middle of every strip and one constant
/// K_j > 1 per strip so that x + K_j never vanishes. M must be odd so the
/// center x = 0 falls strictly inside the middle strip.
struct StripDecomposition {
    int strip_count = 0;            // M
    std::vector<double> edges;      // M+1 ascending abscissae, -1 .. 1
    std::vector<double> crossing;   // chi_j, strip midpoints
    std::vector<double> k_const;    // K_j

    /// Strip membership: half-open [x_j, x_{j+1}) with the last strip closed.
    int strip_index(double x) const;
};

StripDecomposition build_strips(int strip_count, double k_const);

struct CrossingSamples {
    std::vector<double> knots;  // y positions along the crossing line
    std::vector<double> values; // sigma(chi, y)
};

/// n_samples equidistant conductivity samples over the chord of the crossing
/// line at abscissa chi (y in [-y_max, y_max], y_max = sqrt(1 - chi^2)).
/// A chord shorter than 1e-6 degenerates to a two-point constant sample.
CrossingSamples sample_crossing_line(const ScalarField& sigma, double chi, int n_samples);

/// Strip-wise separable approximation sigma ~ ((x+K_j)/(chi_j+K_j)) * f_j(y)
/// with one natural cubic spline f_j fitted along every crossing line.
/// Immutable once built; safe for shared concurrent reads.
class PiecewiseSeparableConductivity {
public:
    PiecewiseSeparableConductivity(StripDecomposition decomposition,
                                   std::vector<NaturalCubicSpline> line_splines,
                                   std::vector<double> chord_half_length);

    /// Value at a point of the closed disk. Queries whose |y| exceeds the
    /// crossing-line chord evaluate the spline at the clamped ordinate.
    double operator()(double x, double y) const;

    /// The per-strip factorization (sigma1, sigma2); their product equals
    /// operator() exactly.
    std::pair<double, double> factors(double x, double y) const;

    const StripDecomposition& decomposition() const { return decomposition_; }
    const std::vector<NaturalCubicSpline>& line_splines() const { return splines_; }
    const std::vector<double>& chord_half_length() const { return chord_; }

private:
    StripDecomposition decomposition_;
    std::vector<NaturalCubicSpline> splines_;
    std::vector<double> chord_; // y_max per strip
};

PiecewiseSeparableConductivity build_piecewise(const ScalarField& sigma, int strip_count,
                                               double k_const, int n_samples,
                                               Execution exec = Execution::parallel);

struct DeviationStats {
    double max_rel_deviation = 0.0; // max |pw - ref| / ref over the disk grid
    double min_value = 0.0;         // min of the piecewise values seen
};

/// Compares the piecewise approximation against a reference conductivity on a
/// grid_resolution^2 lattice intersected with the disk.
DeviationStats deviation_stats(const PiecewiseSeparableConductivity& pw,
                               const ScalarField& reference, int grid_resolution);

/// Writes edges, crossing lines, constants and the per-strip knot/value
/// arrays as JSON for inspection and cross-implementation diffing.
void dump_decomposition_json(const PiecewiseSeparableConductivity& pw, const std::string& path);

} // namespace eie
