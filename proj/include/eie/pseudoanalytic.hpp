#pragma once

#include "eie/execution.hpp"
#include "eie/lattice.hpp"

#include <array>
#include <complex>
#include <functional>
#include <utility>
#include <vector>

namespace eie {

using Complex = std::complex<double>;

// Conventions used throughout this module:
//   d_z    = d_x - i d_y,   d_zbar = d_x + i d_y   (no 1/2 factor),
// so d_z acts on analytic functions as twice the classical derivative.
// Generating pairs have the form (F, G) = (p, i/p) with a real positive
// profile p; their adjoint is (F*, G*) = (-iF, -iG) = (-ip, 1/p). The
// characteristic coefficients of such a pair are A = a = 0, B = d_z p / p,
// b = d_zbar p / p, and the associated Vekua equation reads
//   d_zbar W - (d_zbar p / p) conj(W) = 0.

/// Evaluator of the separable factors (sigma1, sigma2) at a point. For
/// piecewise conductivities the factorization depends on the strip of x.
using FactorField = std::function<std::pair<double, double>(double, double)>;

/// Real profile evaluator p(x, y).
using ProfileField = std::function<double(double, double)>;

/// Generating pair (p, i/p) sampled on a ray lattice.
/// parity 0: p = sqrt(sigma2)/sqrt(sigma1); parity 1: p = sqrt(sigma1*sigma2).
/// The two parities form the period-2 generating sequence of the conductivity.
struct GeneratingPairField {
    int parity = 0;
    RayLattice lattice{1, 2};
    std::vector<double> p; // lattice.size() values, row-major by ray
    double p_center = 0.0; // p at z0 = 0

    Complex F(long idx) const { return {p[idx], 0.0}; }
    Complex G(long idx) const { return {0.0, 1.0 / p[idx]}; }
};

/// Profile value of the given parity at one point.
double pair_profile(const FactorField& factors, int parity, double x, double y);

/// Samples the parity-m pair on the lattice. Throws NumericalError naming the
/// node if a factor is non-positive anywhere.
GeneratingPairField build_pair(const FactorField& factors, int parity, const RayLattice& lattice,
                               Execution exec = Execution::parallel);

struct CharacteristicCoefficients {
    Complex A, a, B, b;
};

/// Characteristic coefficients of a (p, i/p) pair at an interior point.
/// A and a vanish identically for this pair form; B and b come from central
/// differences of p with step h (the stencil must stay inside the disk).
CharacteristicCoefficients characteristic_coefficients(const ProfileField& p, double x, double y,
                                                       double h);

/// Complex field sampled on a uniform Cartesian grid, for derivative checks.
struct CartesianField {
    double x0 = 0.0, y0 = 0.0; // position of sample (0, 0)
    double h = 0.0;            // grid spacing
    int nx = 0, ny = 0;
    std::vector<Complex> values; // row-major, j*nx + i

    Complex& at(int i, int j) { return values[static_cast<std::size_t>(j) * nx + i]; }
    const Complex& at(int i, int j) const { return values[static_cast<std::size_t>(j) * nx + i]; }
    double x(int i) const { return x0 + i * h; }
    double y(int j) const { return y0 + j * h; }
};

/// Samples a complex-valued function on a Cartesian grid.
CartesianField sample_field(const std::function<Complex(double, double)>& f, double x0, double y0,
                            double h, int nx, int ny);

/// Pair derivative d_z W - A W - B conj(W) on the interior nodes of the grid
/// (the returned field is two nodes smaller in each direction). With the
/// unhalved d_z, analytic inputs come out at twice the classical derivative:
/// for the trivial pair, fg_derivative of z^2 is 4z.
CartesianField fg_derivative(const CartesianField& w, const ProfileField& p);

/// Max-norm over interior grid nodes of |d_zbar W - (d_zbar p / p) conj(W)|.
double vekua_residual(const CartesianField& w, const ProfileField& p);

/// Cumulative pair integral of W along one ray of uniformly spaced samples:
/// out[k] = F(z_k) Re(int G* W dz) + G(z_k) Re(int F* W dz), the path
/// integrals accumulated by the trapezoid rule with dz = spacing * e^{i theta}.
std::vector<Complex> fg_integral_cumulative(const std::vector<Complex>& w,
                                            const std::vector<double>& p, double theta,
                                            double spacing);

enum class PowerStorage { boundary_only, full_lattice };

/// Formal powers Z^(n)(a, 0; z) of the target pair for n = 0..N and the
/// coefficients a = 1 and a = i, sampled on the lattice (or its boundary).
struct FormalPowerSet {
    int max_exponent = 0; // N
    int parity = 0;       // parity of the pair the returned powers belong to
    RayLattice lattice{1, 2};
    PowerStorage storage = PowerStorage::boundary_only;
    /// values[n][c]: c = 0 for coefficient 1, c = 1 for coefficient i.
    /// boundary_only: R entries (node P-1 of each ray); full_lattice: R*P.
    std::vector<std::array<std::vector<Complex>, 2>> values;

    Complex boundary_value(int n, int c, int ray) const;
    Complex lattice_value(int n, int c, int ray, int k) const;
};

/// Builds the formal powers by the recursive pair integration
///   Z_m^(n) = n * cumulative (F_m, G_m)-integral of Z_{1-m}^(n-1)
/// along every ray, with Z_m^(0)(1) = F_m / p_m(z0) and
/// Z_m^(0)(i) = p_m(z0) * G_m. Rays are independent; the recursion over n is
/// sequential within a ray. Levels for n >= 1 vanish exactly at the center.
FormalPowerSet formal_powers(const GeneratingPairField& pair0, const GeneratingPairField& pair1,
                             int max_exponent, PowerStorage storage = PowerStorage::boundary_only,
                             int target_parity = 0, Execution exec = Execution::parallel);

/// Same recursion started from one arbitrary complex coefficient a, split as
/// Z^(0)(a) = Re(a) Z^(0)(1) + Im(a) Z^(0)(i). Returns one array per level.
std::vector<std::vector<Complex>> formal_powers_for_coefficient(
    const GeneratingPairField& pair0, const GeneratingPairField& pair1, int max_exponent,
    Complex coefficient, PowerStorage storage = PowerStorage::boundary_only,
    int target_parity = 0, Execution exec = Execution::parallel);

/// Formal powers at a single point: integrates a fresh ray of `nodes` samples
/// from the center to z. Entry n holds {Z^(n)(1,0;z), Z^(n)(i,0;z)}.
std::vector<std::array<Complex, 2>> powers_at_point(const FactorField& factors, Complex z,
                                                    int nodes, int max_exponent,
                                                    int target_parity = 0);

/// W = sqrt(sigma) (d_x u - i d_y u) by central differences; used to generate
/// Vekua-equation test inputs from exact solutions.
Complex transform_solution_to_W(const ProfileField& u, const ProfileField& sigma, double x,
                                double y, double h);

} // namespace eie
