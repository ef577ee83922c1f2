#include "eie/conductivity.hpp"

#include "eie/errors.hpp"

#include <cmath>

namespace eie {

namespace {

constexpr double kDiskSlack = 1e-9;

void require_in_disk(double x, double y) {
    if (x * x + y * y > 1.0 + kDiskSlack)
        throw ValidationError("conductivity evaluated outside the closed unit disk");
}

// Wraps a plain formula with the closed-disk domain guard.
ScalarField on_disk(double (*f)(double, double)) {
    return [f](double x, double y) {
        require_in_disk(x, y);
        return f(x, y);
    };
}

std::vector<AnalyticConductivity> make_catalog() {
    std::vector<AnalyticConductivity> c;

    c.push_back({"exp",
                 on_disk(+[](double x, double y) { return std::exp(x + y); }),
                 on_disk(+[](double x, double y) { return std::exp(-x - y); }),
                 SeparableFactors1D{[](double x) { return std::exp(x); },
                                    [](double y) { return std::exp(y); }}});

    c.push_back({"lorentz",
                 on_disk(+[](double x, double y) {
                     return (1.0 / (x * x + 0.1)) * (1.0 / (y * y + 0.1));
                 }),
                 on_disk(+[](double x, double y) {
                     return (x * x * x + y * y * y) / 3.0 + 0.1 * (x + y);
                 }),
                 SeparableFactors1D{[](double x) { return 1.0 / (x * x + 0.1); },
                                    [](double y) { return 1.0 / (y * y + 0.1); }}});

    c.push_back({"expxy",
                 on_disk(+[](double x, double y) { return std::exp(x * y); }),
                 on_disk(+[](double x, double y) { return std::exp(-x * y); }),
                 std::nullopt});

    c.push_back({"lorentzxy",
                 on_disk(+[](double x, double y) {
                     const double s = x + y;
                     return 1.0 / (s * s + 1.0);
                 }),
                 on_disk(+[](double x, double y) {
                     const double s = x + y;
                     return s * s * s / 3.0 + s;
                 }),
                 std::nullopt});

    c.push_back({"poly",
                 on_disk(+[](double x, double y) { return x + y + 10.0; }),
                 on_disk(+[](double x, double y) { return std::log(x + y + 10.0); }),
                 std::nullopt});

    // Inside the closed disk |xy/2| <= 1/4, so tan stays far from its poles
    // and tan(xy/2) + 1 >= 1 - tan(1/4) > 0.
    c.push_back({"sin",
                 on_disk(+[](double x, double y) { return 1.0 + std::sin(x * y); }),
                 on_disk(+[](double x, double y) {
                     return 1.0 / (std::tan(x * y / 2.0) + 1.0);
                 }),
                 std::nullopt});

    return c;
}

} // namespace

const std::vector<AnalyticConductivity>& catalog() {
    static const std::vector<AnalyticConductivity> c = make_catalog();
    return c;
}

const AnalyticConductivity& constant_model() {
    static const AnalyticConductivity c{
        "const",
        on_disk(+[](double, double) { return 1.0; }),
        on_disk(+[](double x, double) { return x; }),
        SeparableFactors1D{[](double) { return 1.0; }, [](double) { return 1.0; }}};
    return c;
}

const AnalyticConductivity& catalog_entry(const std::string& id) {
    for (const auto& m : catalog())
        if (m.id == id) return m;
    if (id == constant_model().id) return constant_model();
    throw ValidationError("unknown conductivity id: " + id);
}

double boundary_condition(const AnalyticConductivity& model, double theta) {
    return model.exact_u(std::cos(theta), std::sin(theta));
}

PositivityReport validate_positivity(const AnalyticConductivity& model, int grid_resolution) {
    if (grid_resolution < 2)
        throw ValidationError("positivity scan needs grid_resolution >= 2");

    PositivityReport report;
    report.min_sigma = model.sigma(0.0, 0.0);
    report.x = 0.0;
    report.y = 0.0;

    const int n = grid_resolution;
    for (int j = 0; j < n; ++j) {
        const double y = -1.0 + 2.0 * j / (n - 1);
        for (int i = 0; i < n; ++i) {
            const double x = -1.0 + 2.0 * i / (n - 1);
            if (x * x + y * y > 1.0) continue;
            const double s = model.sigma(x, y);
            if (s < report.min_sigma) {
                report.min_sigma = s;
                report.x = x;
                report.y = y;
            }
        }
    }
    report.positive = report.min_sigma > 0.0;
    return report;
}

} // namespace eie
