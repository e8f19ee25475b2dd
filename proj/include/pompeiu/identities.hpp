#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "pompeiu/geometry.hpp"
#include "pompeiu/helmholtz.hpp"
#include "pompeiu/linalg.hpp"
#include "pompeiu/vec3.hpp"

namespace pompeiu {

enum class CheckStatus { pass, fail, skipped };

struct IdentityReport {
    std::string name;
    std::vector<double> lhs;
    std::vector<double> rhs;
    double abs_discrepancy = 0.0;
    double rel_discrepancy = 0.0;  // relative to |D| unless noted
    double tolerance = 0.0;
    CheckStatus status = CheckStatus::skipped;
    std::string note;
};

/// integral over D of U dx.
Complex integral_over_domain(const Field& field, const Shape& shape, const Resolution& res = {});

/// integral over D of grad U . [alpha, x] dx (the phi-derivative of the
/// rotated-domain integral at phi = 0).
Complex rotational_derivative_integral(const Field& field, const Vec3& alpha, const Shape& shape,
                                       const Resolution& res = {});

/// integral over S of U(s) [s, N] ds, componentwise.
std::array<Complex, 3> surface_moment(const Field& field, const Shape& shape,
                                      const Resolution& res = {});

/// integral over S of U(s) u_jN(s) ds on the ball carrying the
/// eigenfunction. Rejects fields whose wavenumber differs from the
/// eigenvalue (the orthogonality presumes a shared k).
Complex boundary_trace_orthogonality(const Field& field, const BallEigenfunction& eig, const Ball& ball,
                           const Resolution& res = {});

struct GramReport {
    Matrix gram;
    double min_eigenvalue = 0.0;
};

/// Gram matrix of the normal-derivative traces over the sphere; strictly
/// positive spectrum certifies their linear independence in L2(S).
GramReport gram_normal_derivatives(const std::vector<BallEigenfunction>& eigs, const Ball& ball,
                                   const Resolution& res = {});

/// det(u_jN(s_m)) for J eigenfunctions at J boundary points.
double det_sample_matrix(const std::vector<BallEigenfunction>& eigs,
                         std::span<const Vec3> points);

struct DetHarnessResult {
    int n_trials = 0;
    int n_above = 0;
    double threshold = 0.0;  // 1e-6 * scale^J, scale = max |u_jN|
    double scale = 0.0;
    std::uint64_t seed = 0;
};

/// Draws point tuples area-uniformly (via the sample weights) and counts
/// how many give |det| above the scale-relative threshold.
DetHarnessResult det_nondegeneracy_harness(const std::vector<BallEigenfunction>& eigs,
                                           const Ball& ball, int n_trials, std::uint64_t seed,
                                           const Resolution& res = {});

struct CrossExpansion {
    int component = 0;
    std::vector<double> coefficients;
    double residual = 0.0;  // L2(S) norm of the unfitted remainder
};

/// Least-squares fit of each component of [s, N] onto span{u_jN} over the
/// given surface samples. Positions enter the cross product in world
/// coordinates; the traces are evaluated about the shape center.
std::array<CrossExpansion, 3> cross_expansion(const Shape& shape,
                                              const std::vector<BallEigenfunction>& eigs,
                                              std::span<const SurfaceSample> samples);

/// (i) pointwise additivity [s+a, N] = [s,N] + [a,N]; (ii) growth of
/// max |[s + t a, N]| across t in {1, 10, 100} (bounded right side vs
/// growing left side of the translated expansion).
struct TranslationReport {
    double max_additivity_error = 0.0;
    std::array<double, 3> max_cross_norm{};  // at |a|, 10|a|, 100|a|
};

TranslationReport translation_mechanics_check(const Shape& shape, const Vec3& a,
                                              const Resolution& res = {});

struct ProjectedNormalFit {
    Vec3 p{};
    double max_np_on_silhouette = 0.0;
    std::vector<double> fit_coefficients;
    double fit_residual = 0.0;
};

/// p = [q, a]; checks N.p vanishes on the silhouette for p and fits N.p
/// over the full surface onto span{u_jN}.
ProjectedNormalFit projected_normal_fit(const Shape& shape, const Vec3& a, const Vec3& q,
                                        const std::vector<BallEigenfunction>& eigs,
                                        const Resolution& res = {});

/// Tolerance tiers for the assembled verification suite.
struct SuiteConfig {
    Resolution res{};
    bool mesh_tier = false;
    std::uint64_t seed = 12345;
    int scan_grid_degree = 30;
};

/// The full identity suite for one shape. Ball-only checks are skipped (not
/// failed) on other shapes and marked accordingly.
std::vector<IdentityReport> run_identity_suite(const Shape& shape, const SuiteConfig& config);

const char* to_string(CheckStatus status);

}  // namespace pompeiu
