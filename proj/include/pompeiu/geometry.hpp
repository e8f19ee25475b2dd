#pragma once

#include <array>
#include <filesystem>
#include <span>
#include <variant>
#include <vector>

#include "pompeiu/numerics.hpp"
#include "pompeiu/vec3.hpp"

namespace pompeiu {

struct Ball {
    double radius = 1.0;
    Vec3 center{};
};

/// Semi-axes along an orthonormal frame (axes[i] is the i-th principal
/// direction in world coordinates).
struct Ellipsoid {
    Vec3 semi_axes{1.0, 1.0, 1.0};
    Vec3 center{};
    std::array<Vec3, 3> axes{Vec3{1, 0, 0}, Vec3{0, 1, 0}, Vec3{0, 0, 1}};
};

struct StarTerm {
    int l = 0;
    int m = 0;
    double amplitude = 0.0;
};

/// Radial graph over the sphere: rho(dir) = R0 * (1 + sum eps_lm Y_lm(dir)).
struct StarShape {
    double base_radius = 1.0;
    std::vector<StarTerm> terms;
    Vec3 center{};
};

struct TriMesh {
    std::vector<Vec3> vertices;
    std::vector<std::array<int, 3>> faces;
};

using Shape = std::variant<Ball, Ellipsoid, StarShape, TriMesh>;

/// Throws std::invalid_argument on non-positive parameters, a star radial
/// function that dips <= 0 anywhere, or an open/mis-oriented mesh.
void validate_shape(const Shape& shape);

/// Checks closedness (every directed edge paired with its reverse exactly
/// once), face sanity, and outward global orientation (positive signed
/// volume). Error messages name the offending edge.
void validate_mesh(const TriMesh& mesh);

TriMesh load_mesh(const std::filesystem::path& path);

struct SurfaceSample {
    Vec3 point;
    Vec3 normal;     // unit, outward
    double weight;   // area measure
};

struct VolumeSample {
    Vec3 point;
    double weight;
};

/// Surface point with parameter-line tangents; p is the polar angle theta,
/// q the azimuth phi for all parametric shapes.
struct ParamPoint {
    double p = 0.0;
    double q = 0.0;
    Vec3 point;
    Vec3 s_p;
    Vec3 s_q;
    Vec3 normal;
};

/// Quadrature resolution for parametric shapes: spherical-grid degree and
/// radial Gauss order. Mesh rules are fixed (degree-2 triangle/tet points).
struct Resolution {
    int grid_degree = 40;
    int radial_order = 40;
};

std::vector<SurfaceSample> surface_samples(const Shape& shape, const Resolution& res = {});
std::vector<VolumeSample> volume_samples(const Shape& shape, const Resolution& res = {});

ParamPoint parametric_point(const Shape& shape, double theta, double phi);

/// Boundary point and outward normal in a given radial direction from the
/// shape center. Parametric shapes only.
SurfaceSample surface_point_toward(const Shape& shape, const Vec3& direction);

/// [s, N] per sample, positions taken in world coordinates.
std::vector<Vec3> cross_field(std::span<const SurfaceSample> samples);

/// Sphericity diagnostics: a surface is a sphere about the origin iff
/// all three vanish.
struct SphericityReport {
    double max_s_dot_sp = 0.0;
    double max_s_dot_sq = 0.0;
    double radius_sq_variance = 0.0;
};

SphericityReport sphericity_check(const Shape& shape, const Resolution& res = {});

/// Same geometry translated by a: boundary points become s + a, normals
/// unchanged.
Shape shift_origin(const Shape& shape, const Vec3& a);

/// Points where the outward normal is orthogonal to p, located by meridian
/// scans in a frame whose pole is p. Returns every point found (the set may
/// have several components); weights are set to 1.
std::vector<SurfaceSample> silhouette_points(const Shape& shape, const Vec3& p,
                                             int n_meridians = 64, double tol = 1e-10);

Vec3 shape_center(const Shape& shape);

/// Radius of a ball about the center guaranteed to contain the shape.
double bounding_radius(const Shape& shape);

/// |D|: closed form for ball/ellipsoid, quadrature otherwise.
double shape_volume(const Shape& shape, const Resolution& res = {});

bool shape_is_parametric(const Shape& shape);

const char* shape_kind(const Shape& shape);

}  // namespace pompeiu
