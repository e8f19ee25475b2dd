#include "pompeiu/indicator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <stdexcept>

#include "pompeiu/format.hpp"
#include "pompeiu/parallel.hpp"

namespace pompeiu {

namespace {

Complex unit_phase(double angle) { return {std::cos(angle), std::sin(angle)}; }

// (sin r - r cos r) / r^3 with the cancellation-free branch near 0.
double ball_kernel(double r) {
    if (r < 1e-2) {
        const double r2 = r * r;
        return 1.0 / 3.0 - r2 / 30.0 + r2 * r2 / 840.0 - r2 * r2 * r2 / 45360.0;
    }
    return (std::sin(r) - r * std::cos(r)) / (r * r * r);
}

}  // namespace

WaveVector WaveVector::from_xi(const Vec3& xi) {
    const double k = norm(xi);
    if (!(k > 0.0)) throw std::invalid_argument("WaveVector: |xi| must be positive");
    return {k, xi / k};
}

Complex chi_ft_ball(double radius, const Vec3& xi) {
    if (!(radius > 0.0)) throw std::invalid_argument("chi_ft_ball: radius must be positive");
    const double k = norm(xi);
    const double r3 = radius * radius * radius;
    return {4.0 * std::numbers::pi * r3 * ball_kernel(k * radius), 0.0};
}

Complex chi_ft_ball(const Ball& ball, const Vec3& xi) {
    return unit_phase(dot(xi, ball.center)) * chi_ft_ball(ball.radius, xi);
}

Complex chi_ft_ellipsoid(const Ellipsoid& e, const Vec3& xi) {
    const Vec3 at_xi{e.semi_axes.x * dot(e.axes[0], xi), e.semi_axes.y * dot(e.axes[1], xi),
                     e.semi_axes.z * dot(e.axes[2], xi)};
    const double det = e.semi_axes.x * e.semi_axes.y * e.semi_axes.z;
    return det * unit_phase(dot(xi, e.center)) * chi_ft_ball(1.0, at_xi);
}

bool has_chi_closed_form(const Shape& shape) {
    return std::holds_alternative<Ball>(shape) || std::holds_alternative<Ellipsoid>(shape);
}

Complex chi_ft_closed_form(const Shape& shape, const Vec3& xi) {
    if (const auto* b = std::get_if<Ball>(&shape)) return chi_ft_ball(*b, xi);
    if (const auto* e = std::get_if<Ellipsoid>(&shape)) return chi_ft_ellipsoid(*e, xi);
    throw std::invalid_argument("chi_ft_closed_form: no closed form for this shape");
}

Complex chi_ft_volume(std::span<const VolumeSample> samples, const Vec3& xi) {
    Complex sum{};
    for (const auto& s : samples) sum += s.weight * unit_phase(dot(xi, s.point));
    return sum;
}

Complex chi_ft_volume(const Shape& shape, const Vec3& xi, const Resolution& res) {
    const auto samples = volume_samples(shape, res);
    return chi_ft_volume(samples, xi);
}

Complex chi_ft_surface(std::span<const SurfaceSample> samples, const Vec3& xi) {
    const double k2 = norm_squared(xi);
    if (k2 < 1e-16)
        throw std::invalid_argument("chi_ft_surface: |xi| too small, use the volume route");
    Complex sum{};
    for (const auto& s : samples)
        sum += s.weight * dot(xi, s.normal) * unit_phase(dot(xi, s.point));
    return sum / Complex{0.0, k2};
}

Complex chi_ft_surface(const Shape& shape, const Vec3& xi, const Resolution& res) {
    const auto samples = surface_samples(shape, res);
    return chi_ft_surface(samples, xi);
}

PompeiuScanResult pompeiu_scan(const Shape& shape, const ScanConfig& config) {
    if (!(config.k_min > 0.0) || !(config.k_min < config.k_max) || !(config.k_step > 0.0))
        throw std::invalid_argument("pompeiu_scan: require 0 < k_min < k_max and k_step > 0");
    validate_shape(shape);

    const SphericalGrid grid = sphere_grid(config.grid_degree);
    const bool closed_form = has_chi_closed_form(shape);
    std::vector<SurfaceSample> boundary;
    if (!closed_form) boundary = surface_samples(shape, config.res);

    // A zero sphere requires chi to vanish for every direction at once, so
    // the scan statistic is the maximum of |chi| over the grid; the minimum
    // only witnesses directional zeros. The argmin direction is still
    // recorded as the most nearly vanishing one. Ties resolve to the first
    // index, keeping the reduction order independent.
    auto sweep_directions = [&](double k, int* argmin) {
        double largest = 0.0;
        double smallest = std::numeric_limits<double>::infinity();
        int smallest_i = 0;
        for (std::size_t i = 0; i < grid.directions.size(); ++i) {
            const Vec3 xi = k * grid.directions[i];
            const double v = closed_form ? std::abs(chi_ft_closed_form(shape, xi))
                                         : std::abs(chi_ft_surface(boundary, xi));
            largest = std::max(largest, v);
            if (v < smallest) {
                smallest = v;
                smallest_i = static_cast<int>(i);
            }
        }
        if (argmin) *argmin = smallest_i;
        return largest;
    };

    PompeiuScanResult result;
    result.grid_degree = config.grid_degree;
    result.zero_rel_tol = config.zero_rel_tol;
    result.normalization = shape_volume(shape, config.res);

    const int n_k = static_cast<int>(std::floor((config.k_max - config.k_min) / config.k_step + 1e-9)) + 1;
    result.k_grid.resize(n_k);
    result.m_values.resize(n_k);
    result.argmin_directions.resize(n_k);
    parallel_for(n_k, config.threads, [&](int i) {
        const double k = config.k_min + i * config.k_step;
        int argmin = 0;
        result.k_grid[i] = k;
        result.m_values[i] = sweep_directions(k, &argmin);
        result.argmin_directions[i] = grid.directions[argmin];
    });

    const double abs_tol = config.zero_rel_tol * result.normalization;
    result.zero_candidates.roots.clear();
    for (int i = 1; i + 1 < n_k; ++i) {
        if (result.m_values[i] > result.m_values[i - 1] ||
            result.m_values[i] > result.m_values[i + 1])
            continue;
        if (i >= 2 && !result.local_minima_k.empty() &&
            result.k_grid[i] - result.local_minima_k.back() < 1.5 * config.k_step)
            continue;  // flat bottom already refined
        const ScalarMinimum refined = golden_section_min(
            [&](double k) { return sweep_directions(k, nullptr); }, result.k_grid[i - 1],
            result.k_grid[i + 1], 1e-9);
        result.local_minima_k.push_back(refined.x);
        result.local_minima_m.push_back(refined.value);
        if (refined.value < abs_tol) {
            result.zero_candidates.roots.push_back(refined.x);
            result.zero_candidates.residuals.push_back(refined.value);
        }
    }
    return result;
}

Complex moving_average_plane_wave(const Shape& shape, const WaveVector& wave, const Vec3& y,
                                  const Resolution& res) {
    if (!std::holds_alternative<Ball>(shape))
        throw std::invalid_argument(
            "moving_average_plane_wave: rotation averaging is only dropped for balls");
    const Vec3 xi = wave.xi();
    Complex sum{};
    for (const auto& s : volume_samples(shape, res))
        sum += s.weight * unit_phase(dot(xi, y + s.point));
    return sum;
}

void write_scan_csv(const PompeiuScanResult& result, std::ostream& out) {
    out << "k,m,argmin_theta,argmin_phi\n";
    for (std::size_t i = 0; i < result.k_grid.size(); ++i) {
        const Vec3& d = result.argmin_directions[i];
        const double theta = std::acos(std::clamp(d.z, -1.0, 1.0));
        const double phi = std::atan2(d.y, d.x);
        write_scientific(out, result.k_grid[i]);
        out << ',';
        write_scientific(out, result.m_values[i]);
        out << ',';
        write_scientific(out, theta);
        out << ',';
        write_scientific(out, phi);
        out << '\n';
    }
}

}  // namespace pompeiu
