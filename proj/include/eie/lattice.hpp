#pragma once

#include "eie/errors.hpp"

#include <complex>
#include <numbers>

namespace eie {

/// Radial quadrature lattice on the unit disk: R rays from the center to R
/// equidistant boundary points, P uniformly spaced nodes per ray. Node 0 of
/// every ray is the shared center z0 = 0 and node P-1 sits on the circle.
struct RayLattice {
    int rays = 0;          // R
    int nodes_per_ray = 0; // P

    RayLattice(int r, int p) : rays(r), nodes_per_ray(p) {
        if (r < 1) throw ValidationError("ray lattice needs at least one ray");
        if (p < 2) throw ValidationError("ray lattice needs at least two nodes per ray");
    }

    double theta(int r) const { return 2.0 * std::numbers::pi * r / rays; }
    double spacing() const { return 1.0 / (nodes_per_ray - 1); }
    double radius(int k) const { return static_cast<double>(k) / (nodes_per_ray - 1); }

    std::complex<double> node(int r, int k) const {
        const double t = theta(r);
        const double s = radius(k);
        return {s * std::cos(t), s * std::sin(t)};
    }

    long index(int r, int k) const { return static_cast<long>(r) * nodes_per_ray + k; }
    long size() const { return static_cast<long>(rays) * nodes_per_ray; }

    friend bool operator==(const RayLattice&, const RayLattice&) = default;
};

} // namespace eie
