#include "pompeiu/helmholtz.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "pompeiu/indicator.hpp"
#include "pompeiu/linalg.hpp"
#include "pompeiu/parallel.hpp"

namespace pompeiu {

namespace {

constexpr double kInvSqrt4Pi = 0.28209479177387814;  // Y_00

struct Angles {
    double ct, st, cp, sp;
};

Angles angles_of(const Vec3& dir) {
    const double st = std::hypot(dir.x, dir.y);
    if (st > 1e-300) return {dir.z, st, dir.x / st, dir.y / st};
    return {dir.z >= 0.0 ? 1.0 : -1.0, 0.0, 1.0, 0.0};
}

// Real field U = sum a_lm j_l(k r) Y_lm evaluated with its gradient.
struct RadialHarmonicField {
    double value = 0.0;
    Vec3 gradient{};
};

RadialHarmonicField eval_radial_harmonic(double k, int lmax, std::span<const double> coeff,
                                         const Vec3& x) {
    RadialHarmonicField out;
    const double r = norm(x);
    if (r < 1e-10) {
        // j_l(kr) ~ delta_l0 + (kr/3) for l = 1; the l = 1 block carries the
        // whole gradient because r Y_1m is linear in x.
        out.value = coeff[harmonic_index(0, 0)] * kInvSqrt4Pi;
        if (lmax >= 1) {
            const double c = k / 3.0 * std::sqrt(3.0) * kInvSqrt4Pi;
            out.gradient = c * Vec3{coeff[harmonic_index(1, 1)], coeff[harmonic_index(1, -1)],
                                    coeff[harmonic_index(1, 0)]};
        }
        return out;
    }
    const Vec3 dir = x / r;
    const Angles a = angles_of(dir);
    const Vec3 theta_hat{a.ct * a.cp, a.ct * a.sp, -a.st};
    const Vec3 phi_hat{-a.sp, a.cp, 0.0};

    HarmonicTable table(lmax);
    table.evaluate_with_derivatives(dir);
    std::vector<double> jl(static_cast<std::size_t>(lmax) + 1);
    spherical_bessel_j_all(lmax, k * r, jl);

    const double st_safe = std::max(a.st, 1e-300);
    for (int l = 0; l <= lmax; ++l) {
        double radial_sum = 0.0, dtheta_sum = 0.0, dphi_sum = 0.0;
        for (int m = -l; m <= l; ++m) {
            const double c = coeff[harmonic_index(l, m)];
            if (c == 0.0) continue;
            radial_sum += c * table.value(l, m);
            dtheta_sum += c * table.theta_derivative(l, m);
            dphi_sum += c * table.phi_derivative(l, m);
        }
        if (radial_sum == 0.0 && dtheta_sum == 0.0 && dphi_sum == 0.0) continue;
        const double jd = spherical_bessel_j_deriv(l, k * r);
        out.value += jl[l] * radial_sum;
        out.gradient += (k * jd * radial_sum) * dir;
        out.gradient += (jl[l] / r) * (dtheta_sum * theta_hat + (dphi_sum / st_safe) * phi_hat);
    }
    return out;
}

}  // namespace

HelmholtzBasisField HelmholtzBasisField::single_mode(double k, int l, int m) {
    if (l < 0 || std::abs(m) > l)
        throw std::invalid_argument("single_mode: require l >= 0 and |m| <= l");
    HelmholtzBasisField f;
    f.k = k;
    f.max_degree = l;
    f.coefficients.assign(harmonic_count(l), 0.0);
    f.coefficients[harmonic_index(l, m)] = 1.0;
    return f;
}

double field_wavenumber(const Field& field) {
    if (const auto* pw = std::get_if<PlaneWave>(&field)) return pw->k;
    if (const auto* bf = std::get_if<HelmholtzBasisField>(&field)) return bf->k;
    return std::get<BallEigenfunction>(field).k;
}

FieldValue eval_field(const Field& field, const Vec3& x) {
    FieldValue out;
    if (const auto* pw = std::get_if<PlaneWave>(&field)) {
        const double phase = pw->k * dot(pw->beta, x);
        out.value = {std::cos(phase), std::sin(phase)};
        out.gradient = (Complex{0.0, pw->k} * out.value) * pw->beta;
        return out;
    }
    if (const auto* bf = std::get_if<HelmholtzBasisField>(&field)) {
        if (static_cast<int>(bf->coefficients.size()) != harmonic_count(bf->max_degree))
            throw std::invalid_argument("HelmholtzBasisField: coefficient size mismatch");
        const RadialHarmonicField v =
            eval_radial_harmonic(bf->k, bf->max_degree, bf->coefficients, x);
        out.value = v.value;
        out.gradient = {v.gradient.x, v.gradient.y, v.gradient.z};
        return out;
    }
    const auto& eig = std::get<BallEigenfunction>(field);
    std::vector<double> coeff(harmonic_count(eig.l), 0.0);
    coeff[harmonic_index(eig.l, eig.m)] = eig.norm;
    const RadialHarmonicField v = eval_radial_harmonic(eig.k, eig.l, coeff, x);
    out.value = v.value;
    out.gradient = {v.gradient.x, v.gradient.y, v.gradient.z};
    return out;
}

Complex field_value(const Field& field, const Vec3& x) {
    if (const auto* pw = std::get_if<PlaneWave>(&field)) {
        const double phase = pw->k * dot(pw->beta, x);
        return {std::cos(phase), std::sin(phase)};
    }
    return eval_field(field, x).value;
}

double helmholtz_residual(const Field& field, const Vec3& x, double k) {
    const double h = 1e-3 * (1.0 + norm(x));
    const Complex u0 = field_value(field, x);
    Complex lap{};
    const Vec3 axes[3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
    for (const Vec3& e : axes) {
        const Complex up1 = field_value(field, x + h * e);
        const Complex um1 = field_value(field, x - h * e);
        const Complex up2 = field_value(field, x + 2.0 * h * e);
        const Complex um2 = field_value(field, x - 2.0 * h * e);
        lap += (-up2 + 16.0 * up1 - 30.0 * u0 + 16.0 * um1 - um2) / (12.0 * h * h);
    }
    return std::abs(lap + k * k * u0);
}

BallEigenfunction ball_dirichlet_eigenfunction(int l, int m, int n, double radius) {
    if (l < 0 || std::abs(m) > l || n < 1)
        throw std::invalid_argument(
            "ball_dirichlet_eigenfunction: require l >= 0, |m| <= l, n >= 1");
    if (!(radius > 0.0))
        throw std::invalid_argument("ball_dirichlet_eigenfunction: radius must be positive");
    // j_l > 0 on (0, first zero); zeros are ~pi apart thereafter.
    const double hi = l + (n + 2) * std::numbers::pi + 5.0;
    const RootList roots = find_roots([l](double x) { return spherical_bessel_j(l, x); }, 0.1, hi,
                                      std::max(200, static_cast<int>(hi * 16)));
    if (static_cast<int>(roots.roots.size()) < n)
        throw std::runtime_error("ball_dirichlet_eigenfunction: root bracket exhausted");
    BallEigenfunction eig;
    eig.l = l;
    eig.m = m;
    eig.n = n;
    eig.radius = radius;
    eig.k = roots.roots[n - 1] / radius;

    const Quadrature1D q = gauss_legendre(64);
    double radial_norm2 = 0.0;
    for (std::size_t i = 0; i < q.nodes.size(); ++i) {
        const double r = 0.5 * radius * (1.0 + q.nodes[i]);
        const double j = spherical_bessel_j(l, eig.k * r);
        radial_norm2 += q.weights[i] * 0.5 * radius * j * j * r * r;
    }
    eig.norm = 1.0 / std::sqrt(radial_norm2);
    return eig;
}

double eigenfunction_normal_trace(const BallEigenfunction& eig, const Vec3& direction) {
    const double jd = spherical_bessel_j_deriv(eig.l, eig.k * eig.radius);
    return eig.norm * eig.k * jd * real_spherical_harmonic(eig.l, eig.m, normalized(direction));
}

double OverdeterminedBallSolution::value(const Vec3& x) const {
    const double r = norm(x);
    return (1.0 - spherical_bessel_j(0, k_star * r) / j0_at_boundary) / (k_star * k_star);
}

Vec3 OverdeterminedBallSolution::gradient(const Vec3& x) const {
    const double r = norm(x);
    if (r < 1e-12) return {};
    // d/dr of -j0(kr)/(k^2 j0(kR)) is j1(kr)/(k j0(kR)).
    const double du_dr = spherical_bessel_j(1, k_star * r) / (k_star * j0_at_boundary);
    return (du_dr / r) * x;
}

OverdeterminedBallSolution overdetermined_ball_solution(double radius, int n) {
    if (!(radius > 0.0))
        throw std::invalid_argument("overdetermined_ball_solution: radius must be positive");
    if (n < 1) throw std::invalid_argument("overdetermined_ball_solution: n must be >= 1");
    const double hi = (n + 2) * std::numbers::pi + 5.0;
    const RootList roots = find_roots([](double x) { return spherical_bessel_j(1, x); }, 0.5, hi,
                                      std::max(200, static_cast<int>(hi * 16)));
    if (static_cast<int>(roots.roots.size()) < n)
        throw std::runtime_error("overdetermined_ball_solution: root bracket exhausted");
    OverdeterminedBallSolution sol;
    sol.radius = radius;
    sol.root_index = n;
    sol.k_star = roots.roots[n - 1] / radius;
    sol.j0_at_boundary = spherical_bessel_j(0, sol.k_star * radius);
    // Zeros of j0 and j1 interlace, so j0(k* R) cannot vanish.
    if (std::abs(sol.j0_at_boundary) < 1e-8)
        throw std::runtime_error("overdetermined_ball_solution: j0(k* R) unexpectedly small");
    return sol;
}

ExtendedSolutionFt extended_solution_ft(const OverdeterminedBallSolution& sol, const Vec3& xi,
                                        const Resolution& res) {
    const double k2 = sol.k_star * sol.k_star;
    const double gap = k2 - norm_squared(xi);
    if (std::abs(gap) <= 1e-6)
        throw std::invalid_argument(
            "extended_solution_ft: xi lies on the characteristic variety |xi| = k*");
    const Ball ball{sol.radius, {}};
    Complex u_hat{};
    for (const auto& s : volume_samples(Shape{ball}, res)) {
        const double phase = dot(xi, s.point);
        u_hat += s.weight * sol.value(s.point) * Complex{std::cos(phase), std::sin(phase)};
    }
    ExtendedSolutionFt out;
    out.u_hat = u_hat;
    const Complex chi = chi_ft_ball(sol.radius, xi);
    out.residual = std::abs(u_hat * gap - chi);
    return out;
}

namespace {

// Boundary-collocation matrix in the L2(D)-whitened basis. Row blocks:
// sqrt(w) (u(s) - mean_S u) then sqrt(w) u_N(s).
struct DefectSystem {
    Matrix whitened;      // 2 n_s x n
    Matrix chol_lower;    // Gram = L L^T
    int n_modes = 0;
};

DefectSystem build_defect_system(const Shape& shape, double k, int lmax,
                                 std::span<const SurfaceSample> boundary,
                                 std::span<const VolumeSample> interior) {
    const int n = harmonic_count(lmax);
    const Vec3 center = shape_center(shape);
    const int n_s = static_cast<int>(boundary.size());
    if (2 * n_s < 4 * n)
        throw std::invalid_argument("mps_defect: surface sampling too coarse for the basis");

    HarmonicTable table(lmax);
    std::vector<double> jl(static_cast<std::size_t>(lmax) + 1);
    std::vector<double> mode(n);

    // Gram matrix of the raw modes in L2(D).
    Matrix gram(n, n);
    for (const auto& vs : interior) {
        const Vec3 rel = vs.point - center;
        const double r = norm(rel);
        if (r < 1e-14) continue;
        table.evaluate(rel / r);
        spherical_bessel_j_all(lmax, k * r, jl);
        for (int l = 0; l <= lmax; ++l)
            for (int m = -l; m <= l; ++m) mode[harmonic_index(l, m)] = jl[l] * table.value(l, m);
        for (int i = 0; i < n; ++i) {
            const double wi = vs.weight * mode[i];
            for (int j = i; j < n; ++j) gram(i, j) += wi * mode[j];
        }
    }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < i; ++j) gram(i, j) = gram(j, i);

    DefectSystem sys;
    sys.n_modes = n;
    try {
        sys.chol_lower = cholesky_lower(gram);
    } catch (const std::runtime_error&) {
        throw std::runtime_error("mps_defect: degenerate basis (Gram matrix not positive definite)");
    }

    Matrix b(2 * n_s, n);
    std::vector<double> mean(n, 0.0);
    double area = 0.0;
    for (int si = 0; si < n_s; ++si) {
        const auto& ss = boundary[si];
        const Vec3 rel = ss.point - center;
        const double r = norm(rel);
        const Vec3 dir = rel / r;
        const Angles a = angles_of(dir);
        const Vec3 theta_hat{a.ct * a.cp, a.ct * a.sp, -a.st};
        const Vec3 phi_hat{-a.sp, a.cp, 0.0};
        const double st_safe = std::max(a.st, 1e-300);
        table.evaluate_with_derivatives(dir);
        spherical_bessel_j_all(lmax, k * r, jl);
        const double sw = std::sqrt(ss.weight);
        area += ss.weight;
        for (int l = 0; l <= lmax; ++l) {
            const double jd = spherical_bessel_j_deriv(l, k * r);
            for (int m = -l; m <= l; ++m) {
                const int idx = harmonic_index(l, m);
                const double val = jl[l] * table.value(l, m);
                const Vec3 grad = (k * jd * table.value(l, m)) * dir +
                                  (jl[l] / r) * (table.theta_derivative(l, m) * theta_hat +
                                                 (table.phi_derivative(l, m) / st_safe) * phi_hat);
                b(si, idx) = val;  // mean subtracted below
                b(n_s + si, idx) = sw * dot(grad, ss.normal);
                mean[idx] += ss.weight * val;
            }
        }
    }
    for (int idx = 0; idx < n; ++idx) mean[idx] /= area;
    for (int si = 0; si < n_s; ++si) {
        const double sw = std::sqrt(boundary[si].weight);
        for (int idx = 0; idx < n; ++idx) b(si, idx) = sw * (b(si, idx) - mean[idx]);
    }

    // Whiten: B~ = B L^{-T}, forward solve per row.
    sys.whitened = Matrix(2 * n_s, n);
    const Matrix& l = sys.chol_lower;
    for (int i = 0; i < 2 * n_s; ++i) {
        auto src = b.row(i);
        auto dst = sys.whitened.row(i);
        for (int j = 0; j < n; ++j) {
            double s = src[j];
            for (int t = 0; t < j; ++t) s -= l(j, t) * dst[t];
            dst[j] = s / l(j, j);
        }
    }
    return sys;
}

}  // namespace

DefectResult mps_defect(const Shape& shape, double k, int basis_degree, const Resolution& res) {
    if (!(k > 0.0)) throw std::invalid_argument("mps_defect: k must be positive");
    if (basis_degree < 2) throw std::invalid_argument("mps_defect: basis degree must be >= 2");
    validate_shape(shape);
    const auto boundary = surface_samples(shape, res);
    const auto interior = volume_samples(shape, res);
    const DefectSystem sys = build_defect_system(shape, k, basis_degree, boundary, interior);

    const SvdSpectrum svd = svd_spectrum(sys.whitened);
    const int n = sys.n_modes;
    const double sigma_max = svd.singular_values.front();
    const double sigma_min = svd.singular_values.back();
    if (sigma_max < 1e-12) throw std::runtime_error("mps_defect: degenerate basis (sigma_max ~ 0)");

    DefectResult out;
    out.k = k;
    out.basis_degree = basis_degree;
    out.defect = sigma_min / sigma_max;

    // Unwhiten the minimizing coefficient vector: L^T a = v_min.
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) v[i] = svd.right_vectors(i, n - 1);
    out.coefficients.assign(n, 0.0);
    const Matrix& l = sys.chol_lower;
    for (int i = n - 1; i >= 0; --i) {
        double s = v[i];
        for (int t = i + 1; t < n; ++t) s -= l(t, i) * out.coefficients[t];
        out.coefficients[i] = s / l(i, i);
    }

    // Split the misfit using the whitened matrix: rows 0..n_s-1 carry the
    // boundary values, the rest the normal derivative.
    const int n_s = sys.whitened.rows() / 2;
    double mis_u = 0.0, mis_un = 0.0;
    for (int i = 0; i < 2 * n_s; ++i) {
        double row_dot = 0.0;
        for (int j = 0; j < n; ++j) row_dot += sys.whitened(i, j) * v[j];
        (i < n_s ? mis_u : mis_un) += row_dot * row_dot;
    }
    out.boundary_value_misfit = std::sqrt(mis_u);
    out.normal_misfit = std::sqrt(mis_un);

    // Weighted surface mean of the minimizer.
    HarmonicTable table(basis_degree);
    std::vector<double> jl(static_cast<std::size_t>(basis_degree) + 1);
    const Vec3 center = shape_center(shape);
    double mean = 0.0, area = 0.0;
    for (const auto& ss : boundary) {
        const Vec3 rel = ss.point - center;
        const double r = norm(rel);
        table.evaluate(rel / r);
        spherical_bessel_j_all(basis_degree, k * r, jl);
        double u = 0.0;
        for (int lq = 0; lq <= basis_degree; ++lq)
            for (int m = -lq; m <= lq; ++m)
                u += out.coefficients[harmonic_index(lq, m)] * jl[lq] * table.value(lq, m);
        mean += ss.weight * u;
        area += ss.weight;
    }
    out.recovered_const = mean / area;
    return out;
}

DefectSweep defect_sweep(const Shape& shape, const DefectSweepConfig& config) {
    if (!(config.k_min > 0.0) || !(config.k_min < config.k_max) || !(config.k_step > 0.0))
        throw std::invalid_argument("defect_sweep: require 0 < k_min < k_max and k_step > 0");
    const int n_k =
        static_cast<int>(std::floor((config.k_max - config.k_min) / config.k_step + 1e-9)) + 1;
    DefectSweep sweep;
    sweep.results.resize(n_k);
    parallel_for(n_k, config.threads, [&](int i) {
        sweep.results[i] =
            mps_defect(shape, config.k_min + i * config.k_step, config.basis_degree, config.res);
    });
    for (int i = 1; i + 1 < n_k; ++i) {
        if (sweep.results[i].defect > sweep.results[i - 1].defect ||
            sweep.results[i].defect > sweep.results[i + 1].defect)
            continue;
        const ScalarMinimum refined = golden_section_min(
            [&](double k) { return mps_defect(shape, k, config.basis_degree, config.res).defect; },
            sweep.results[i - 1].k, sweep.results[i + 1].k, 1e-6);
        sweep.minima.push_back(mps_defect(shape, refined.x, config.basis_degree, config.res));
    }
    return sweep;
}

}  // namespace pompeiu
