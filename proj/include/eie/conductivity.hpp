#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace eie {

using ScalarField = std::function<double(double, double)>;
using Profile1D = std::function<double(double)>;

/// One-dimensional factors of a separable conductivity sigma1(x)*sigma2(y).
struct SeparableFactors1D {
    Profile1D sigma1;
    Profile1D sigma2;
};

/// A conductivity on the closed unit disk together with one exact potential
/// solving div(sigma grad u) = 0. Evaluation outside the closed disk is
/// rejected. `separable_factors` is present only when sigma factors exactly.
struct AnalyticConductivity {
    std::string id;
    ScalarField sigma;
    ScalarField exact_u;
    std::optional<SeparableFactors1D> separable_factors;
};

/// The six catalogued conductivities: exp, lorentz (both separable),
/// expxy, lorentzxy, poly, sin.
const std::vector<AnalyticConductivity>& catalog();

/// sigma == 1 with u = x. Test fixture and self-test model; not part of the
/// catalog.
const AnalyticConductivity& constant_model();

/// Lookup by id over the catalog plus the constant model. Throws on unknown id.
const AnalyticConductivity& catalog_entry(const std::string& id);

/// Dirichlet datum raised from the exact solution: u(cos theta, sin theta).
double boundary_condition(const AnalyticConductivity& model, double theta);

struct PositivityReport {
    double min_sigma = 0.0;
    double x = 0.0;
    double y = 0.0;
    bool positive = false; // cleared when min_sigma <= 0
};

/// Scans a resolution x resolution lattice over [-1,1]^2 intersected with the
/// closed disk (the center is always included) and reports the minimum of
/// sigma and where it occurs. Never throws on a non-positive value; the
/// report's flag signals it instead.
PositivityReport validate_positivity(const AnalyticConductivity& model, int grid_resolution);

} // namespace eie
