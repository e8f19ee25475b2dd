#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include "pompeiu/geometry.hpp"
#include "pompeiu/numerics.hpp"
#include "pompeiu/vec3.hpp"

namespace pompeiu {

/// xi = k * alpha with k > 0 and |alpha| = 1.
struct WaveVector {
    double k = 1.0;
    Vec3 alpha{0.0, 0.0, 1.0};

    Vec3 xi() const { return k * alpha; }
    static WaveVector from_xi(const Vec3& xi);
};

/// chi(xi) = integral over D of e^{i xi . x} dx, ball centered at the origin
/// (real-valued closed form; a Taylor branch covers |xi| R < 1e-2).
Complex chi_ft_ball(double radius, const Vec3& xi);

/// Ball with a center: translation phase times the centered form.
Complex chi_ft_ball(const Ball& ball, const Vec3& xi);

/// Affine reduction to the unit ball: det(A) e^{i xi.c} chi_B1(A^T xi).
Complex chi_ft_ellipsoid(const Ellipsoid& ellipsoid, const Vec3& xi);

/// Closed form when the shape has one (ball or ellipsoid); throws otherwise.
Complex chi_ft_closed_form(const Shape& shape, const Vec3& xi);
bool has_chi_closed_form(const Shape& shape);

/// Direct volume quadrature; the independent oracle for everything else.
Complex chi_ft_volume(const Shape& shape, const Vec3& xi, const Resolution& res = {});
Complex chi_ft_volume(std::span<const VolumeSample> samples, const Vec3& xi);

/// Divergence-theorem reduction to the boundary:
/// chi(xi) = (1 / (i |xi|^2)) integral_S e^{i xi.s} (xi . N) ds.
/// Rejects |xi| < 1e-8 (use the volume route there).
Complex chi_ft_surface(const Shape& shape, const Vec3& xi, const Resolution& res = {});
Complex chi_ft_surface(std::span<const SurfaceSample> samples, const Vec3& xi);

struct ScanConfig {
    double k_min = 0.5;
    double k_max = 10.0;
    double k_step = 0.01;
    int grid_degree = 30;
    double zero_rel_tol = 1e-8;  // candidate when m(k) < tol * |D|
    int threads = 1;
    Resolution res{};
};

struct PompeiuScanResult {
    std::vector<double> k_grid;
    // m(k) = max over the direction grid of |chi(k alpha)|: the zero-sphere
    // condition asks chi to vanish for every direction at a shared k, so the
    // max is the faithful scalar (a min only detects directional zeros).
    std::vector<double> m_values;
    std::vector<Vec3> argmin_directions;  // most nearly vanishing direction per k
    RootList zero_candidates;            // refined k values with m below tolerance
    std::vector<double> local_minima_k;  // every refined local minimum
    std::vector<double> local_minima_m;
    double normalization = 0.0;          // |D|
    int grid_degree = 0;
    double zero_rel_tol = 0.0;
};

/// Zero-sphere scanner: sweeps k, tracks |chi| over the direction grid,
/// golden-section refines each local minimum in k (direction grid fixed),
/// and reports candidates where m(k) < zero_rel_tol * |D|.
PompeiuScanResult pompeiu_scan(const Shape& shape, const ScanConfig& config);

/// Quadrature value of integral over D of e^{i xi.(y + x)} dx for a ball,
/// the plane-wave instance of the moving-average condition. Rejects
/// non-ball shapes (the rotation average is only dropped for balls).
Complex moving_average_plane_wave(const Shape& shape, const WaveVector& wave, const Vec3& y,
                                  const Resolution& res = {});

/// CSV columns: k, m, argmin_theta, argmin_phi (17 significant digits).
void write_scan_csv(const PompeiuScanResult& result, std::ostream& out);

}  // namespace pompeiu
