#pragma once

#include <functional>
#include <span>
#include <vector>

#include "pompeiu/vec3.hpp"

namespace pompeiu {

/// Gauss-Legendre rule on [-1, 1]; integrates polynomials of degree <= 2n-1
/// exactly, weights sum to 2.
struct Quadrature1D {
    std::vector<double> nodes;
    std::vector<double> weights;
};

Quadrature1D gauss_legendre(int n);

/// Product quadrature on the unit sphere: Gauss-Legendre in cos(theta) times
/// a uniform trapezoid in phi. Exact for spherical harmonics up to `degree`,
/// weights sum to 4*pi. Nodes never touch the poles.
struct SphericalGrid {
    std::vector<Vec3> directions;
    std::vector<double> weights;
    int degree = 0;
};

SphericalGrid sphere_grid(int degree);

/// Polar/azimuthal factors behind sphere_grid, for callers that need the
/// angles themselves (surface parametrizations, silhouette scans).
struct ProductGridAngles {
    Quadrature1D polar;  // nodes are cos(theta)
    int n_phi = 0;       // phi_j = 2*pi*j/n_phi, each with weight 2*pi/n_phi
};

ProductGridAngles product_grid_angles(int degree);

double spherical_bessel_j(int l, double x);
double spherical_bessel_j_deriv(int l, double x);

/// j_0(x) .. j_lmax(x) in one pass; out.size() must be lmax+1.
void spherical_bessel_j_all(int lmax, double x, std::span<double> out);

constexpr int harmonic_index(int l, int m) noexcept { return l * (l + 1) + m; }
constexpr int harmonic_count(int lmax) noexcept { return (lmax + 1) * (lmax + 1); }

/// Real orthonormal spherical harmonic Y_lm, |m| <= l. m > 0 pairs with
/// cos(m*phi), m < 0 with sin(|m|*phi).
double real_spherical_harmonic(int l, int m, const Vec3& direction);

/// Evaluates every Y_lm up to a fixed degree at one direction, optionally
/// with d/dtheta and d/dphi. Reused across calls to amortize the Legendre
/// recurrences; one instance is not thread-safe, clone per worker.
class HarmonicTable {
public:
    explicit HarmonicTable(int max_degree);

    void evaluate(const Vec3& direction) { evaluate_impl(direction, false); }
    void evaluate_with_derivatives(const Vec3& direction) { evaluate_impl(direction, true); }

    int max_degree() const noexcept { return lmax_; }
    double value(int l, int m) const { return values_[harmonic_index(l, m)]; }
    double theta_derivative(int l, int m) const { return dtheta_[harmonic_index(l, m)]; }
    double phi_derivative(int l, int m) const { return dphi_[harmonic_index(l, m)]; }
    std::span<const double> values() const { return values_; }

    double cos_theta() const noexcept { return cos_theta_; }
    double sin_theta() const noexcept { return sin_theta_; }
    double cos_phi() const noexcept { return cos_phi_; }
    double sin_phi() const noexcept { return sin_phi_; }

private:
    void evaluate_impl(const Vec3& direction, bool with_derivatives);

    int lmax_;
    double cos_theta_ = 0.0, sin_theta_ = 0.0, cos_phi_ = 1.0, sin_phi_ = 0.0;
    std::vector<double> plm_;     // normalized associated Legendre, m >= 0
    std::vector<double> dplm_;    // d/dtheta of the above
    std::vector<double> cos_m_;
    std::vector<double> sin_m_;
    std::vector<double> values_;
    std::vector<double> dtheta_;
    std::vector<double> dphi_;
};

/// Sign-change roots of f on [a, b], strictly increasing, each bisected to
/// machine-level width (never wider than tol). residuals[i] = |f(roots[i])|.
struct RootList {
    std::vector<double> roots;
    std::vector<double> residuals;
};

RootList find_roots(const std::function<double(double)>& f, double a, double b,
                    int n_scan, double tol = 1e-12);

struct ScalarMinimum {
    double x = 0.0;
    double value = 0.0;
};

/// Golden-section minimization of a unimodal f on [a, b] to x-width x_tol.
ScalarMinimum golden_section_min(const std::function<double(double)>& f,
                                 double a, double b, double x_tol);

}  // namespace pompeiu
