#pragma once

#include <variant>
#include <vector>

#include "pompeiu/geometry.hpp"
#include "pompeiu/numerics.hpp"
#include "pompeiu/vec3.hpp"

namespace pompeiu {

/// e^{i k beta . x}, an entire Helmholtz solution.
struct PlaneWave {
    double k = 1.0;
    Vec3 beta{0.0, 0.0, 1.0};
};

/// U(x) = sum a_lm j_l(k|x|) Y_lm(x^), entire on every ball about the origin.
struct HelmholtzBasisField {
    double k = 1.0;
    int max_degree = 0;
    std::vector<double> coefficients;  // harmonic_index packing, size (L+1)^2

    static HelmholtzBasisField single_mode(double k, int l, int m);
};

/// Dirichlet eigenfunction of the ball of radius `radius` about the origin:
/// u = norm * j_l(k r) Y_lm, with k R the n-th positive zero of j_l and
/// ||u||_{L2(ball)} = 1.
struct BallEigenfunction {
    int l = 0;
    int m = 0;
    int n = 1;
    double radius = 1.0;
    double k = 0.0;
    double norm = 1.0;
};

using Field = std::variant<PlaneWave, HelmholtzBasisField, BallEigenfunction>;

struct FieldValue {
    Complex value{};
    CVec3 gradient{};
};

Complex field_value(const Field& field, const Vec3& x);
FieldValue eval_field(const Field& field, const Vec3& x);
double field_wavenumber(const Field& field);

/// |(lap + k^2) u| at x via fourth-order central differences of the analytic
/// evaluator, step 1e-3 * (1 + |x|).
double helmholtz_residual(const Field& field, const Vec3& x, double k);

/// Throws std::invalid_argument for bad (l, m, n); std::runtime_error when
/// the root bracket is exhausted.
BallEigenfunction ball_dirichlet_eigenfunction(int l, int m, int n, double radius);

/// u_jN at the boundary point R * direction (closed-form trace).
double eigenfunction_normal_trace(const BallEigenfunction& eig, const Vec3& direction);

/// Solution of (lap + k*^2) u = 1, u = u_N = 0 on the sphere of radius R,
/// at k* the n-th root of j_1(k R) = 0:
///     u(x) = (1 - j_0(k* r) / j_0(k* R)) / k*^2.
struct OverdeterminedBallSolution {
    double radius = 1.0;
    double k_star = 0.0;
    int root_index = 1;
    double j0_at_boundary = 0.0;  // j_0(k* R)

    double value(const Vec3& x) const;
    Vec3 gradient(const Vec3& x) const;
    /// Constant-boundary companion v = u - k*^{-2}; v = const = -k*^{-2} on S.
    double companion_value(const Vec3& x) const { return value(x) - 1.0 / (k_star * k_star); }
    double companion_boundary_constant() const { return -1.0 / (k_star * k_star); }
};

OverdeterminedBallSolution overdetermined_ball_solution(double radius, int n);

/// Fourier transform of the zero-extended solution and the residual of
/// u~(xi) (k*^2 - |xi|^2) = chi~(xi). Rejects xi with |k*^2 - |xi|^2| <= 1e-6.
struct ExtendedSolutionFt {
    Complex u_hat{};
    double residual = 0.0;
};

ExtendedSolutionFt extended_solution_ft(const OverdeterminedBallSolution& sol, const Vec3& xi,
                                        const Resolution& res = {});

/// Method-of-particular-solutions defect for the over-determined problem
/// (lap + k^2) u = 0, u|_S = const, u_N|_S = 0. Basis fields j_l(kr) Y_lm up
/// to degree L about the shape center are L2(D)-orthonormalized (Gram
/// whitening), the boundary conditions are collocated at weighted surface
/// samples, and defect = sigma_min / sigma_max of the resulting matrix.
struct DefectResult {
    double k = 0.0;
    int basis_degree = 0;
    double defect = 0.0;
    std::vector<double> coefficients;   // minimizer, ||u||_{L2(D)} = 1
    double boundary_value_misfit = 0.0; // ||u - mean_S u||_{L2(S)}
    double normal_misfit = 0.0;         // ||u_N||_{L2(S)}
    double recovered_const = 0.0;       // mean_S u of the minimizer
};

DefectResult mps_defect(const Shape& shape, double k, int basis_degree,
                        const Resolution& res = {});

struct DefectSweepConfig {
    double k_min = 3.0;
    double k_max = 8.0;
    double k_step = 0.05;
    int basis_degree = 8;
    int threads = 1;
    Resolution res{};
};

struct DefectSweep {
    std::vector<DefectResult> results;
    std::vector<DefectResult> minima;  // golden-section refined local minima
};

DefectSweep defect_sweep(const Shape& shape, const DefectSweepConfig& config);

}  // namespace pompeiu
