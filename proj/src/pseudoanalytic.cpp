#include "eie/pseudoanalytic.hpp"

#include "eie/errors.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <sstream>

namespace eie {

namespace {

constexpr double kDiskSlack = 1e-9;

void require_stencil_in_disk(double x, double y, double h) {
    const double r = std::hypot(std::abs(x) + h, std::abs(y) + h);
    if (r > 1.0 + kDiskSlack)
        throw ValidationError("finite-difference stencil leaves the closed unit disk");
}

// Cumulative trapezoid pair integral along one ray; the recursion kernel.
// out[k] = p[k]*Re(IG_k) + (i/p[k])*Re(IF_k) with
//   IG = int (W/p) dz  and  IF = int (-i p W) dz,  dz = spacing*e^{i theta}.
void fg_cumulative(const Complex* w, const double* p, int n, Complex dz, Complex* out) {
    Complex ig{0.0, 0.0};
    Complex iff{0.0, 0.0};
    Complex g_prev = w[0] / p[0];
    Complex f_prev = Complex(0.0, -1.0) * (p[0] * w[0]);
    out[0] = Complex(0.0, 0.0);
    for (int k = 1; k < n; ++k) {
        const Complex gk = w[k] / p[k];
        const Complex fk = Complex(0.0, -1.0) * (p[k] * w[k]);
        ig += 0.5 * (g_prev + gk) * dz;
        iff += 0.5 * (f_prev + fk) * dz;
        out[k] = Complex(p[k] * ig.real(), iff.real() / p[k]);
        g_prev = gk;
        f_prev = fk;
    }
}

// Full recursion along one ray for one starting coefficient. `record` is
// called once per level with the target-parity array.
template <typename Record>
void ray_recursion(const double* p0, const double* p1, double p0_center, double p1_center, int n,
                   Complex dz, Complex coefficient, int max_exponent, int target_parity,
                   Record&& record) {
    const double a1 = coefficient.real();
    const double a2 = coefficient.imag();

    std::vector<Complex> cur0(n), cur1(n), nxt0(n), nxt1(n);
    for (int k = 0; k < n; ++k) {
        cur0[k] = Complex(a1 * p0[k] / p0_center, a2 * p0_center / p0[k]);
        cur1[k] = Complex(a1 * p1[k] / p1_center, a2 * p1_center / p1[k]);
    }
    record(0, target_parity == 0 ? cur0.data() : cur1.data());

    for (int level = 1; level <= max_exponent; ++level) {
        // Level `level` of parity m integrates the previous level of the
        // other parity with respect to the parity-m pair.
        fg_cumulative(cur1.data(), p0, n, dz, nxt0.data());
        fg_cumulative(cur0.data(), p1, n, dz, nxt1.data());
        const double factor = static_cast<double>(level);
        for (int k = 0; k < n; ++k) {
            nxt0[k] *= factor;
            nxt1[k] *= factor;
        }
        cur0.swap(nxt0);
        cur1.swap(nxt1);
        record(level, target_parity == 0 ? cur0.data() : cur1.data());
    }
}

void check_parity(int parity) {
    if (parity != 0 && parity != 1) throw ValidationError("pair parity must be 0 or 1");
}

} // namespace

double pair_profile(const FactorField& factors, int parity, double x, double y) {
    const auto [s1, s2] = factors(x, y);
    if (!(s1 > 0.0) || !(s2 > 0.0))
        throw NumericalError("non-positive separable factor");
    return parity == 0 ? std::sqrt(s2) / std::sqrt(s1) : std::sqrt(s1 * s2);
}

GeneratingPairField build_pair(const FactorField& factors, int parity, const RayLattice& lattice,
                               Execution exec) {
    check_parity(parity);
    GeneratingPairField pair;
    pair.parity = parity;
    pair.lattice = lattice;
    pair.p.assign(lattice.size(), 0.0);
    pair.p_center = pair_profile(factors, parity, 0.0, 0.0);

    std::atomic<long> bad{-1};
    auto fill_ray = [&](int r) {
        const double t = lattice.theta(r);
        const double ct = std::cos(t);
        const double st = std::sin(t);
        for (int k = 0; k < lattice.nodes_per_ray; ++k) {
            const double s = lattice.radius(k);
            const auto [s1, s2] = factors(s * ct, s * st);
            if (!(s1 > 0.0) || !(s2 > 0.0)) {
                long expected = -1;
                bad.compare_exchange_strong(expected, lattice.index(r, k));
                return;
            }
            pair.p[lattice.index(r, k)] =
                parity == 0 ? std::sqrt(s2) / std::sqrt(s1) : std::sqrt(s1 * s2);
        }
    };

    if (exec == Execution::parallel) {
#pragma omp parallel for schedule(static)
        for (int r = 0; r < lattice.rays; ++r) fill_ray(r);
    } else {
        for (int r = 0; r < lattice.rays; ++r) fill_ray(r);
    }

    if (bad.load() >= 0) {
        const long idx = bad.load();
        const int r = static_cast<int>(idx / lattice.nodes_per_ray);
        const int k = static_cast<int>(idx % lattice.nodes_per_ray);
        const Complex z = lattice.node(r, k);
        std::ostringstream msg;
        msg << "generating pair: non-positive factor at ray " << r << ", node " << k << " (x="
            << z.real() << ", y=" << z.imag() << ")";
        throw NumericalError(msg.str());
    }
    return pair;
}

CharacteristicCoefficients characteristic_coefficients(const ProfileField& p, double x, double y,
                                                       double h) {
    if (!(h > 0.0)) throw ValidationError("finite-difference step must be positive");
    require_stencil_in_disk(x, y, h);
    const double px = (p(x + h, y) - p(x - h, y)) / (2.0 * h);
    const double py = (p(x, y + h) - p(x, y - h)) / (2.0 * h);
    const double pc = p(x, y);
    CharacteristicCoefficients c;
    c.A = Complex(0.0, 0.0); // exact for pairs of the form (p, i/p)
    c.a = Complex(0.0, 0.0);
    c.B = Complex(px, -py) / pc;
    c.b = Complex(px, py) / pc;
    return c;
}

CartesianField sample_field(const std::function<Complex(double, double)>& f, double x0, double y0,
                            double h, int nx, int ny) {
    CartesianField field;
    field.x0 = x0;
    field.y0 = y0;
    field.h = h;
    field.nx = nx;
    field.ny = ny;
    field.values.resize(static_cast<std::size_t>(nx) * ny);
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) field.at(i, j) = f(x0 + i * h, y0 + j * h);
    return field;
}

CartesianField fg_derivative(const CartesianField& w, const ProfileField& p) {
    if (w.nx < 3 || w.ny < 3)
        throw ValidationError("pair derivative needs a grid of at least 3x3 samples");
    CartesianField out;
    out.x0 = w.x0 + w.h;
    out.y0 = w.y0 + w.h;
    out.h = w.h;
    out.nx = w.nx - 2;
    out.ny = w.ny - 2;
    out.values.resize(static_cast<std::size_t>(out.nx) * out.ny);
    for (int j = 1; j + 1 < w.ny; ++j) {
        for (int i = 1; i + 1 < w.nx; ++i) {
            const Complex dx = (w.at(i + 1, j) - w.at(i - 1, j)) / (2.0 * w.h);
            const Complex dy = (w.at(i, j + 1) - w.at(i, j - 1)) / (2.0 * w.h);
            const Complex dz = dx - Complex(0.0, 1.0) * dy;
            const auto c = characteristic_coefficients(p, w.x(i), w.y(j), w.h);
            out.at(i - 1, j - 1) = dz - c.B * std::conj(w.at(i, j));
        }
    }
    return out;
}

double vekua_residual(const CartesianField& w, const ProfileField& p) {
    if (w.nx < 3 || w.ny < 3)
        throw ValidationError("Vekua residual needs a grid of at least 3x3 samples");
    double worst = 0.0;
    for (int j = 1; j + 1 < w.ny; ++j) {
        for (int i = 1; i + 1 < w.nx; ++i) {
            const Complex dx = (w.at(i + 1, j) - w.at(i - 1, j)) / (2.0 * w.h);
            const Complex dy = (w.at(i, j + 1) - w.at(i, j - 1)) / (2.0 * w.h);
            const Complex dzbar = dx + Complex(0.0, 1.0) * dy;
            const auto c = characteristic_coefficients(p, w.x(i), w.y(j), w.h);
            worst = std::max(worst, std::abs(dzbar - c.b * std::conj(w.at(i, j))));
        }
    }
    return worst;
}

std::vector<Complex> fg_integral_cumulative(const std::vector<Complex>& w,
                                            const std::vector<double>& p, double theta,
                                            double spacing) {
    if (w.size() < 2) throw ValidationError("pair integral needs at least 2 nodes");
    if (w.size() != p.size())
        throw ValidationError("pair integral: W and pair samples must have equal length");
    if (!(spacing > 0.0)) throw ValidationError("pair integral needs positive node spacing");
    std::vector<Complex> out(w.size());
    const Complex dz = spacing * Complex(std::cos(theta), std::sin(theta));
    fg_cumulative(w.data(), p.data(), static_cast<int>(w.size()), dz, out.data());
    return out;
}

Complex FormalPowerSet::boundary_value(int n, int c, int ray) const {
    if (storage == PowerStorage::boundary_only) return values[n][c][ray];
    return values[n][c][lattice.index(ray, lattice.nodes_per_ray - 1)];
}

Complex FormalPowerSet::lattice_value(int n, int c, int ray, int k) const {
    if (storage != PowerStorage::full_lattice)
        throw ValidationError("formal power set holds boundary values only");
    return values[n][c][lattice.index(ray, k)];
}

namespace {

void check_power_inputs(const GeneratingPairField& pair0, const GeneratingPairField& pair1,
                        int max_exponent, int target_parity) {
    if (!(pair0.lattice == pair1.lattice))
        throw ValidationError("formal powers need both pairs on the same lattice");
    if (pair0.parity != 0 || pair1.parity != 1)
        throw ValidationError("formal powers expect pair parities 0 and 1");
    if (max_exponent < 0) throw ValidationError("maximum formal exponent must be >= 0");
    check_parity(target_parity);
    for (double pc : {pair0.p_center, pair1.p_center})
        if (!std::isfinite(pc) || !(pc > 0.0))
            throw NumericalError("formal powers: profile at the center must be finite and "
                                 "positive");
}

// Shared driver: runs the ray recursion for the given coefficients and stores
// the target-parity levels. `sets` has one destination per coefficient.
void run_power_recursion(const GeneratingPairField& pair0, const GeneratingPairField& pair1,
                         int max_exponent, const std::vector<Complex>& coefficients,
                         PowerStorage storage, int target_parity, Execution exec,
                         std::vector<std::vector<std::vector<Complex>>*> sets) {
    const RayLattice& lat = pair0.lattice;
    const int p_nodes = lat.nodes_per_ray;

    for (std::size_t c = 0; c < coefficients.size(); ++c) {
        auto& levels = *sets[c];
        levels.assign(max_exponent + 1, {});
        for (auto& level : levels)
            level.assign(storage == PowerStorage::full_lattice ? lat.size() : lat.rays,
                         Complex(0.0, 0.0));
    }

    auto run_ray = [&](int r) {
        const Complex dz = lat.spacing() * Complex(std::cos(lat.theta(r)), std::sin(lat.theta(r)));
        const double* p0row = pair0.p.data() + lat.index(r, 0);
        const double* p1row = pair1.p.data() + lat.index(r, 0);
        for (std::size_t c = 0; c < coefficients.size(); ++c) {
            auto& levels = *sets[c];
            ray_recursion(p0row, p1row, pair0.p_center, pair1.p_center, p_nodes, dz,
                          coefficients[c], max_exponent, target_parity,
                          [&](int level, const Complex* vals) {
                              if (storage == PowerStorage::full_lattice) {
                                  std::copy(vals, vals + p_nodes,
                                            levels[level].begin() + lat.index(r, 0));
                              } else {
                                  levels[level][r] = vals[p_nodes - 1];
                              }
                          });
        }
    };

    if (exec == Execution::parallel) {
#pragma omp parallel for schedule(static)
        for (int r = 0; r < lat.rays; ++r) run_ray(r);
    } else {
        for (int r = 0; r < lat.rays; ++r) run_ray(r);
    }
}

} // namespace

FormalPowerSet formal_powers(const GeneratingPairField& pair0, const GeneratingPairField& pair1,
                             int max_exponent, PowerStorage storage, int target_parity,
                             Execution exec) {
    check_power_inputs(pair0, pair1, max_exponent, target_parity);

    FormalPowerSet set;
    set.max_exponent = max_exponent;
    set.parity = target_parity;
    set.lattice = pair0.lattice;
    set.storage = storage;
    set.values.resize(max_exponent + 1);

    std::vector<std::vector<std::vector<Complex>>> work(2);
    run_power_recursion(pair0, pair1, max_exponent, {Complex(1.0, 0.0), Complex(0.0, 1.0)},
                        storage, target_parity, exec, {&work[0], &work[1]});
    for (int n = 0; n <= max_exponent; ++n) {
        set.values[n][0] = std::move(work[0][n]);
        set.values[n][1] = std::move(work[1][n]);
    }
    return set;
}

std::vector<std::vector<Complex>> formal_powers_for_coefficient(const GeneratingPairField& pair0,
                                                                const GeneratingPairField& pair1,
                                                                int max_exponent,
                                                                Complex coefficient,
                                                                PowerStorage storage,
                                                                int target_parity, Execution exec) {
    check_power_inputs(pair0, pair1, max_exponent, target_parity);
    std::vector<std::vector<std::vector<Complex>>> work(1);
    run_power_recursion(pair0, pair1, max_exponent, {coefficient}, storage, target_parity, exec,
                        {&work[0]});
    return std::move(work[0]);
}

std::vector<std::array<Complex, 2>> powers_at_point(const FactorField& factors, Complex z,
                                                    int nodes, int max_exponent,
                                                    int target_parity) {
    check_parity(target_parity);
    if (nodes < 2) throw ValidationError("point evaluation needs at least 2 ray nodes");
    if (max_exponent < 0) throw ValidationError("maximum formal exponent must be >= 0");
    const double rho = std::abs(z);
    if (rho > 1.0 + kDiskSlack)
        throw ValidationError("formal-power evaluation point outside the closed unit disk");

    std::vector<std::array<Complex, 2>> out(max_exponent + 1);
    const double p0c = pair_profile(factors, 0, 0.0, 0.0);
    const double p1c = pair_profile(factors, 1, 0.0, 0.0);

    if (rho == 0.0) {
        out[0] = {Complex(1.0, 0.0), Complex(0.0, 1.0)};
        for (int n = 1; n <= max_exponent; ++n) out[n] = {Complex(0.0, 0.0), Complex(0.0, 0.0)};
        return out;
    }

    // Fresh ray from the center through z; node P-1 lands exactly on z.
    const double theta = std::arg(z);
    const double spacing = rho / (nodes - 1);
    const Complex dir(std::cos(theta), std::sin(theta));
    std::vector<double> p0(nodes), p1(nodes);
    for (int k = 0; k < nodes; ++k) {
        const double s = rho * static_cast<double>(k) / (nodes - 1);
        const double x = s * dir.real();
        const double y = s * dir.imag();
        p0[k] = pair_profile(factors, 0, x, y);
        p1[k] = pair_profile(factors, 1, x, y);
    }

    const Complex coeffs[2] = {Complex(1.0, 0.0), Complex(0.0, 1.0)};
    for (int c = 0; c < 2; ++c) {
        ray_recursion(p0.data(), p1.data(), p0c, p1c, nodes, spacing * dir, coeffs[c],
                      max_exponent, target_parity, [&](int level, const Complex* vals) {
                          out[level][c] = vals[nodes - 1];
                      });
    }
    return out;
}

Complex transform_solution_to_W(const ProfileField& u, const ProfileField& sigma, double x,
                                double y, double h) {
    if (!(h > 0.0)) throw ValidationError("finite-difference step must be positive");
    require_stencil_in_disk(x, y, h);
    const double ux = (u(x + h, y) - u(x - h, y)) / (2.0 * h);
    const double uy = (u(x, y + h) - u(x, y - h)) / (2.0 * h);
    const double rs = std::sqrt(sigma(x, y));
    return Complex(rs * ux, -rs * uy);
}

} // namespace eie
