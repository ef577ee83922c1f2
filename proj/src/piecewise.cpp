#include "eie/piecewise.hpp"

#include "eie/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>

namespace eie {

namespace {
constexpr double kDiskSlack = 1e-9;
constexpr double kDegenerateChord = 1e-6;
} // namespace

int StripDecomposition::strip_index(double x) const {
    const auto it = std::upper_bound(edges.begin(), edges.end(), x);
    long j = static_cast<long>(it - edges.begin()) - 1;
    if (j < 0) j = 0;
    if (j >= strip_count) j = strip_count - 1; // closes the last strip at x = 1
    return static_cast<int>(j);
}

StripDecomposition build_strips(int strip_count, double k_const) {
    if (strip_count < 3 || strip_count % 2 == 0)
        throw ValidationError("strip count must be odd and >= 3 so the center "
                              "does not sit on a strip edge");
    if (!(k_const > 1.0))
        throw ValidationError("strip constant K must exceed 1 so x + K stays positive");

    StripDecomposition d;
    d.strip_count = strip_count;
    d.edges.resize(strip_count + 1);
    d.crossing.resize(strip_count);
    d.k_const.assign(strip_count, k_const);
    for (int j = 0; j <= strip_count; ++j)
        d.edges[j] = -1.0 + 2.0 * j / strip_count;
    for (int j = 0; j < strip_count; ++j)
        d.crossing[j] = -1.0 + (2.0 * j + 1.0) / strip_count;
    return d;
}

CrossingSamples sample_crossing_line(const ScalarField& sigma, double chi, int n_samples) {
    if (!(std::abs(chi) < 1.0))
        throw ValidationError("crossing line must lie strictly inside the disk");
    if (n_samples < 2)
        throw ValidationError("crossing line needs at least 2 samples");

    const double y_max = std::sqrt(std::max(0.0, 1.0 - chi * chi));
    CrossingSamples s;
    if (y_max < kDegenerateChord) {
        // Chord too short for a spline: constant sample at the clamped ordinate.
        const double v = sigma(chi, 0.0);
        const double t = std::max(y_max, 1e-9);
        s.knots = {-t, t};
        s.values = {v, v};
        return s;
    }
    s.knots.resize(n_samples);
    s.values.resize(n_samples);
    for (int k = 0; k < n_samples; ++k) {
        const double y = -y_max + 2.0 * y_max * k / (n_samples - 1);
        s.knots[k] = y;
        s.values[k] = sigma(chi, y);
    }
    return s;
}

PiecewiseSeparableConductivity::PiecewiseSeparableConductivity(
    StripDecomposition decomposition, std::vector<NaturalCubicSpline> line_splines,
    std::vector<double> chord_half_length)
    : decomposition_(std::move(decomposition)), splines_(std::move(line_splines)),
      chord_(std::move(chord_half_length)) {
    if (splines_.size() != static_cast<std::size_t>(decomposition_.strip_count) ||
        chord_.size() != splines_.size())
        throw ValidationError("piecewise conductivity: one spline and chord per strip required");
}

std::pair<double, double> PiecewiseSeparableConductivity::factors(double x, double y) const {
    if (x * x + y * y > 1.0 + kDiskSlack)
        throw ValidationError("piecewise conductivity evaluated outside the closed unit disk");
    const int j = decomposition_.strip_index(x);
    const double sigma1 =
        (x + decomposition_.k_const[j]) / (decomposition_.crossing[j] + decomposition_.k_const[j]);
    const double yc = std::clamp(y, -chord_[j], chord_[j]);
    return {sigma1, splines_[j](yc)};
}

double PiecewiseSeparableConductivity::operator()(double x, double y) const {
    const auto [s1, s2] = factors(x, y);
    return s1 * s2;
}

PiecewiseSeparableConductivity build_piecewise(const ScalarField& sigma, int strip_count,
                                               double k_const, int n_samples, Execution exec) {
    StripDecomposition d = build_strips(strip_count, k_const);

    std::vector<NaturalCubicSpline> splines(strip_count);
    std::vector<double> chord(strip_count, 0.0);
    std::atomic<int> bad_strip{-1};

    auto fit_strip = [&](int j) {
        try {
            const CrossingSamples s = sample_crossing_line(sigma, d.crossing[j], n_samples);
            for (double v : s.values)
                if (!(v > 0.0)) throw NumericalError("non-positive sample");
            chord[j] = s.knots.back();
            splines[j] = NaturalCubicSpline(s.knots, s.values);
        } catch (...) {
            int expected = -1;
            bad_strip.compare_exchange_strong(expected, j);
        }
    };

    if (exec == Execution::parallel) {
#pragma omp parallel for schedule(static)
        for (int j = 0; j < strip_count; ++j) fit_strip(j);
    } else {
        for (int j = 0; j < strip_count; ++j) fit_strip(j);
    }

    if (bad_strip.load() >= 0)
        throw NumericalError("piecewise conductivity: non-positive or invalid samples on the "
                             "crossing line of strip " +
                             std::to_string(bad_strip.load()));

    return PiecewiseSeparableConductivity(std::move(d), std::move(splines), std::move(chord));
}

DeviationStats deviation_stats(const PiecewiseSeparableConductivity& pw,
                               const ScalarField& reference, int grid_resolution) {
    if (grid_resolution < 2)
        throw ValidationError("deviation scan needs grid_resolution >= 2");
    DeviationStats stats;
    bool first = true;
    const int n = grid_resolution;
    for (int j = 0; j < n; ++j) {
        const double y = -1.0 + 2.0 * j / (n - 1);
        for (int i = 0; i < n; ++i) {
            const double x = -1.0 + 2.0 * i / (n - 1);
            if (x * x + y * y > 1.0) continue;
            const double approx = pw(x, y);
            const double exact = reference(x, y);
            const double rel = std::abs(approx - exact) / exact;
            if (first || approx < stats.min_value) stats.min_value = approx;
            if (rel > stats.max_rel_deviation) stats.max_rel_deviation = rel;
            first = false;
        }
    }
    return stats;
}

void dump_decomposition_json(const PiecewiseSeparableConductivity& pw, const std::string& path) {
    nlohmann::json j;
    const auto& d = pw.decomposition();
    j["strips"] = d.strip_count;
    j["edges"] = d.edges;
    j["crossing"] = d.crossing;
    j["k"] = d.k_const;
    nlohmann::json lines = nlohmann::json::array();
    for (const auto& s : pw.line_splines()) {
        nlohmann::json line;
        line["knots"] = s.knots();
        line["values"] = s.values();
        lines.push_back(std::move(line));
    }
    j["lines"] = std::move(lines);

    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path + " for writing");
    out << j.dump(2) << '\n';
    if (!out) throw IoError("failed writing " + path);
}

} // namespace eie
