#include "pompeiu/identities.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "pompeiu/indicator.hpp"
#include "pompeiu/random.hpp"

namespace pompeiu {

namespace {

Complex domain_integral(const Field& field, std::span<const VolumeSample> vol) {
    Complex sum{};
    for (const auto& s : vol) sum += s.weight * field_value(field, s.point);
    return sum;
}

Complex rotational_integral(const Field& field, const Vec3& alpha,
                            std::span<const VolumeSample> vol) {
    Complex sum{};
    for (const auto& s : vol) {
        const FieldValue fv = eval_field(field, s.point);
        sum += s.weight * dot(fv.gradient, cross(alpha, s.point));
    }
    return sum;
}

std::array<Complex, 3> moment_integral(const Field& field, std::span<const SurfaceSample> surf) {
    std::array<Complex, 3> sum{};
    for (const auto& s : surf) {
        const Complex u = field_value(field, s.point);
        const Vec3 c = cross(s.point, s.normal);
        sum[0] += s.weight * u * c.x;
        sum[1] += s.weight * u * c.y;
        sum[2] += s.weight * u * c.z;
    }
    return sum;
}

Vec3 rotate(const Vec3& v, const Vec3& axis, double angle) {
    // Rodrigues rotation about a unit axis.
    const double c = std::cos(angle), s = std::sin(angle);
    return c * v + s * cross(axis, v) + (1.0 - c) * dot(axis, v) * axis;
}

}  // namespace

Complex integral_over_domain(const Field& field, const Shape& shape, const Resolution& res) {
    const auto vol = volume_samples(shape, res);
    return domain_integral(field, vol);
}

Complex rotational_derivative_integral(const Field& field, const Vec3& alpha, const Shape& shape,
                                       const Resolution& res) {
    const auto vol = volume_samples(shape, res);
    return rotational_integral(field, alpha, vol);
}

std::array<Complex, 3> surface_moment(const Field& field, const Shape& shape,
                                      const Resolution& res) {
    const auto surf = surface_samples(shape, res);
    return moment_integral(field, surf);
}

Complex boundary_trace_orthogonality(const Field& field, const BallEigenfunction& eig, const Ball& ball,
                           const Resolution& res) {
    const double k = field_wavenumber(field);
    if (std::abs(k - eig.k) > 1e-9 * std::max(1.0, eig.k))
        throw std::invalid_argument(
            "boundary_trace_orthogonality: field wavenumber must equal the eigenvalue");
    if (std::abs(ball.radius - eig.radius) > 1e-12)
        throw std::invalid_argument("boundary_trace_orthogonality: eigenfunction radius mismatch");
    Complex sum{};
    for (const auto& s : surface_samples(Shape{ball}, res)) {
        const Vec3 rel = s.point - ball.center;
        sum += s.weight * field_value(field, rel) * eigenfunction_normal_trace(eig, rel);
    }
    return sum;
}

GramReport gram_normal_derivatives(const std::vector<BallEigenfunction>& eigs, const Ball& ball,
                                   const Resolution& res) {
    if (eigs.empty()) throw std::invalid_argument("gram_normal_derivatives: no eigenfunctions");
    for (const auto& e : eigs)
        if (std::abs(e.k - eigs.front().k) > 1e-9)
            throw std::invalid_argument(
                "gram_normal_derivatives: eigenfunctions must share one eigenvalue");
    const int j = static_cast<int>(eigs.size());
    const auto surf = surface_samples(Shape{ball}, res);
    GramReport report;
    report.gram = Matrix(j, j);
    std::vector<double> trace(j);
    for (const auto& s : surf) {
        const Vec3 rel = s.point - ball.center;
        for (int a = 0; a < j; ++a) trace[a] = eigenfunction_normal_trace(eigs[a], rel);
        for (int a = 0; a < j; ++a)
            for (int b = a; b < j; ++b) report.gram(a, b) += s.weight * trace[a] * trace[b];
    }
    for (int a = 0; a < j; ++a)
        for (int b = 0; b < a; ++b) report.gram(a, b) = report.gram(b, a);
    report.min_eigenvalue = min_singular_value(report.gram).value;
    return report;
}

double det_sample_matrix(const std::vector<BallEigenfunction>& eigs,
                         std::span<const Vec3> points) {
    const int j = static_cast<int>(eigs.size());
    if (static_cast<int>(points.size()) != j)
        throw std::invalid_argument("det_sample_matrix: need as many points as eigenfunctions");
    Matrix m(j, j);
    for (int a = 0; a < j; ++a)
        for (int b = 0; b < j; ++b) m(a, b) = eigenfunction_normal_trace(eigs[a], points[b]);
    // Gaussian elimination with partial pivoting.
    double det = 1.0;
    for (int col = 0; col < j; ++col) {
        int pivot = col;
        for (int r = col + 1; r < j; ++r)
            if (std::abs(m(r, col)) > std::abs(m(pivot, col))) pivot = r;
        if (m(pivot, col) == 0.0) return 0.0;
        if (pivot != col) {
            for (int c = 0; c < j; ++c) std::swap(m(pivot, c), m(col, c));
            det = -det;
        }
        det *= m(col, col);
        for (int r = col + 1; r < j; ++r) {
            const double f = m(r, col) / m(col, col);
            for (int c = col; c < j; ++c) m(r, c) -= f * m(col, c);
        }
    }
    return det;
}

DetHarnessResult det_nondegeneracy_harness(const std::vector<BallEigenfunction>& eigs,
                                           const Ball& ball, int n_trials, std::uint64_t seed,
                                           const Resolution& res) {
    const int j = static_cast<int>(eigs.size());
    const auto surf = surface_samples(Shape{ball}, res);
    std::vector<double> cumulative(surf.size());
    double total = 0.0;
    for (std::size_t i = 0; i < surf.size(); ++i) {
        total += surf[i].weight;
        cumulative[i] = total;
    }
    double scale = 0.0;
    for (const auto& s : surf)
        for (const auto& e : eigs)
            scale = std::max(scale, std::abs(eigenfunction_normal_trace(e, s.point - ball.center)));

    DetHarnessResult out;
    out.n_trials = n_trials;
    out.seed = seed;
    out.scale = scale;
    out.threshold = 1e-6 * std::pow(scale, j);
    const RandomStream base(seed);
    for (int t = 0; t < n_trials; ++t) {
        RandomStream stream = base.split(t);
        std::vector<Vec3> pts(j);
        for (int a = 0; a < j; ++a) {
            const double u = stream.uniform(0.0, total);
            const auto it = std::lower_bound(cumulative.begin(), cumulative.end(), u);
            const std::size_t idx = std::min<std::size_t>(it - cumulative.begin(), surf.size() - 1);
            pts[a] = surf[idx].point - ball.center;
        }
        if (std::abs(det_sample_matrix(eigs, pts)) > out.threshold) ++out.n_above;
    }
    return out;
}

std::array<CrossExpansion, 3> cross_expansion(const Shape& shape,
                                              const std::vector<BallEigenfunction>& eigs,
                                              std::span<const SurfaceSample> samples) {
    const Vec3 center = shape_center(shape);
    const int j = static_cast<int>(eigs.size());
    const int n_s = static_cast<int>(samples.size());
    Matrix a(n_s, j);
    std::array<std::vector<double>, 3> rhs;
    for (auto& r : rhs) r.assign(n_s, 0.0);
    for (int i = 0; i < n_s; ++i) {
        const double sw = std::sqrt(samples[i].weight);
        for (int col = 0; col < j; ++col)
            a(i, col) = sw * eigenfunction_normal_trace(eigs[col], samples[i].point - center);
        const Vec3 c = cross(samples[i].point, samples[i].normal);
        rhs[0][i] = sw * c.x;
        rhs[1][i] = sw * c.y;
        rhs[2][i] = sw * c.z;
    }
    std::array<CrossExpansion, 3> out;
    for (int comp = 0; comp < 3; ++comp) {
        const LeastSquares ls = least_squares_solve(a, rhs[comp]);
        out[comp].component = comp;
        out[comp].coefficients = ls.solution;
        out[comp].residual = ls.residual_norm;
    }
    return out;
}

TranslationReport translation_mechanics_check(const Shape& shape, const Vec3& a,
                                              const Resolution& res) {
    const auto surf = surface_samples(shape, res);
    TranslationReport report;
    for (const auto& s : surf) {
        const Vec3 lhs = cross(s.point + a, s.normal);
        const Vec3 rhs = cross(s.point, s.normal) + cross(a, s.normal);
        report.max_additivity_error = std::max(report.max_additivity_error, norm(lhs - rhs));
    }
    const double scales[3] = {1.0, 10.0, 100.0};
    for (int i = 0; i < 3; ++i) {
        double hi = 0.0;
        for (const auto& s : surf) hi = std::max(hi, norm(cross(s.point + scales[i] * a, s.normal)));
        report.max_cross_norm[i] = hi;
    }
    return report;
}

ProjectedNormalFit projected_normal_fit(const Shape& shape, const Vec3& a, const Vec3& q,
                                        const std::vector<BallEigenfunction>& eigs,
                                        const Resolution& res) {
    const Vec3 p = cross(q, a);
    if (norm(p) < 1e-12)
        throw std::invalid_argument("projected_normal_fit: q parallel to a gives p = 0");
    ProjectedNormalFit out;
    out.p = p;
    const Vec3 p_hat = normalized(p);
    for (const auto& s : silhouette_points(shape, p_hat)) {
        out.max_np_on_silhouette =
            std::max(out.max_np_on_silhouette, std::abs(dot(s.normal, p_hat)));
    }
    const Vec3 center = shape_center(shape);
    const auto surf = surface_samples(shape, res);
    const int n_s = static_cast<int>(surf.size());
    const int j = static_cast<int>(eigs.size());
    Matrix m(n_s, j);
    std::vector<double> rhs(n_s);
    for (int i = 0; i < n_s; ++i) {
        const double sw = std::sqrt(surf[i].weight);
        for (int col = 0; col < j; ++col)
            m(i, col) = sw * eigenfunction_normal_trace(eigs[col], surf[i].point - center);
        rhs[i] = sw * dot(surf[i].normal, p_hat);
    }
    const LeastSquares ls = least_squares_solve(m, rhs);
    out.fit_coefficients = ls.solution;
    out.fit_residual = ls.residual_norm;
    return out;
}

const char* to_string(CheckStatus status) {
    switch (status) {
        case CheckStatus::pass: return "pass";
        case CheckStatus::fail: return "fail";
        default: return "skipped";
    }
}

namespace {

HelmholtzBasisField random_basis_field(RandomStream& rng, double k, int lmax) {
    HelmholtzBasisField f;
    f.k = k;
    f.max_degree = lmax;
    f.coefficients.resize(harmonic_count(lmax));
    double n2 = 0.0;
    for (auto& c : f.coefficients) {
        c = rng.uniform(-1.0, 1.0);
        n2 += c * c;
    }
    for (auto& c : f.coefficients) c /= std::sqrt(n2);
    return f;
}

struct SuiteBuilder {
    const Shape& shape;
    const SuiteConfig& config;
    std::vector<SurfaceSample> surf;
    std::vector<VolumeSample> vol;
    double volume = 0.0;
    double area = 0.0;
    double route_tol = 0.0;
    double identity_tol = 0.0;
    std::vector<IdentityReport> reports;

    IdentityReport& add(const std::string& name) {
        reports.push_back({});
        reports.back().name = name;
        return reports.back();
    }

    void finish(IdentityReport& r, double measured, double target, double tol, double rel_base) {
        r.lhs = {measured};
        r.rhs = {target};
        r.abs_discrepancy = std::abs(measured - target);
        r.rel_discrepancy = rel_base > 0.0 ? r.abs_discrepancy / rel_base : r.abs_discrepancy;
        r.tolerance = tol;
        r.status = (r.rel_discrepancy <= tol) ? CheckStatus::pass : CheckStatus::fail;
    }

    void skip(const std::string& name, const std::string& why) {
        IdentityReport& r = add(name);
        r.status = CheckStatus::skipped;
        r.note = why;
    }
};

}  // namespace

std::vector<IdentityReport> run_identity_suite(const Shape& shape, const SuiteConfig& config) {
    validate_shape(shape);
    SuiteBuilder sb{shape, config};
    sb.surf = surface_samples(shape, config.res);
    sb.vol = volume_samples(shape, config.res);
    sb.volume = shape_volume(shape, config.res);
    for (const auto& s : sb.surf) sb.area += s.weight;
    sb.route_tol = config.mesh_tier ? 1e-2 : 1e-8;
    sb.identity_tol = config.mesh_tier ? 1e-3 : 1e-7;
    RandomStream rng(config.seed);

    {  // closed surface: integral of N vanishes
        Vec3 total{};
        for (const auto& s : sb.surf) total += s.weight * s.normal;
        auto& r = sb.add("surface_closure");
        sb.finish(r, norm(total), 0.0, 1e-8, sb.area);
    }
    {  // volume via the divergence theorem vs the volume rule
        double flux = 0.0;
        for (const auto& s : sb.surf) flux += s.weight * dot(s.point, s.normal);
        double direct = 0.0;
        for (const auto& s : sb.vol) direct += s.weight;
        auto& r = sb.add("volume_two_ways");
        sb.finish(r, flux / 3.0, direct, config.mesh_tier ? 1e-6 : 1e-6, sb.volume);
    }
    {  // chi routes against each other
        RandomStream stream = rng.split(1);
        double worst_vs = 0.0, worst_cf = 0.0;
        const bool closed = has_chi_closed_form(shape);
        for (int t = 0; t < 10; ++t) {
            const Vec3 xi = stream.uniform(0.1, 10.0) * stream.unit_vector();
            const Complex cv = chi_ft_volume(sb.vol, xi);
            const Complex cs = chi_ft_surface(sb.surf, xi);
            worst_vs = std::max(worst_vs, std::abs(cv - cs));
            if (closed) {
                const Complex cc = chi_ft_closed_form(shape, xi);
                worst_cf = std::max({worst_cf, std::abs(cc - cv), std::abs(cc - cs)});
            }
        }
        auto& r = sb.add("chi_route_volume_vs_surface");
        sb.finish(r, worst_vs, 0.0, sb.route_tol, sb.volume);
        if (closed) {
            auto& rc = sb.add("chi_route_closed_form");
            sb.finish(rc, worst_cf, 0.0, sb.route_tol, sb.volume);
        } else {
            sb.skip("chi_route_closed_form", "no closed form for this shape");
        }
    }
    {  // conjugate symmetry of the volume route
        RandomStream stream = rng.split(2);
        double worst = 0.0;
        for (int t = 0; t < 5; ++t) {
            const Vec3 xi = stream.uniform(0.1, 8.0) * stream.unit_vector();
            worst = std::max(worst,
                             std::abs(chi_ft_volume(sb.vol, -xi) - std::conj(chi_ft_volume(sb.vol, xi))));
        }
        auto& r = sb.add("chi_conjugate_symmetry");
        sb.finish(r, worst, 0.0, 1e-12, sb.volume);
    }
    {  // rotational-derivative route equals the surface-moment route
        RandomStream stream = rng.split(3);
        double worst = 0.0;
        for (int t = 0; t < 3; ++t) {
            Field field;
            if (t == 0)
                field = PlaneWave{2.0, stream.unit_vector()};
            else
                field = random_basis_field(stream, stream.uniform(1.0, 5.0), 4);
            for (int d = 0; d < 3; ++d) {
                const Vec3 alpha = stream.unit_vector();
                const Complex lhs = rotational_integral(field, alpha, sb.vol);
                const std::array<Complex, 3> mom = moment_integral(field, sb.surf);
                const Complex rhs = alpha.x * mom[0] + alpha.y * mom[1] + alpha.z * mom[2];
                worst = std::max(worst, std::abs(lhs - rhs));
            }
        }
        auto& r = sb.add("divergence_two_route");
        sb.finish(r, worst, 0.0, sb.identity_tol, sb.volume);
    }
    {  // translation mechanics
        const Vec3 a = normalized(Vec3{1.0, 2.0, 2.0});
        const TranslationReport tr = translation_mechanics_check(shape, a, config.res);
        auto& r = sb.add("translation_additivity");
        sb.finish(r, tr.max_additivity_error, 0.0, 1e-13,
                  std::max(1.0, bounding_radius(shape)));
        auto& g = sb.add("translation_growth");
        const double ratio = tr.max_cross_norm[2] / tr.max_cross_norm[1];
        g.lhs = {ratio};
        g.rhs = {10.0};
        g.abs_discrepancy = std::abs(ratio - 10.0);
        g.rel_discrepancy = g.abs_discrepancy / 10.0;
        g.tolerance = 0.05;
        g.status = (ratio >= 9.5 && ratio <= 10.5) ? CheckStatus::pass : CheckStatus::fail;
        g.note = "max |[s+ta,N]| at t=10 and t=100 must scale linearly";
    }

    const auto* ball = std::get_if<Ball>(&shape);
    const bool centered_ball = ball && norm(ball->center) < 1e-12;
    const char* skip_reason =
        ball ? "ball must be centered at the origin" : "ball-only check";
    if (!centered_ball) {
        for (const char* name :
             {"interior_solution_pde_residual", "interior_solution_boundary_trace", "companion_boundary_constant", "zero_sphere_witness",
              "moving_average_witness", "extended_solution_fourier_identity", "domain_integral_vanishes",
              "rotation_average_spotcheck", "rotational_derivative_vanishes", "surface_moment_vanishes",
              "eigentrace_orthogonality", "sphericity_diagnostics", "trace_gram_definiteness", "trace_determinant_harness",
              "cross_field_expansion_zero", "projected_normal"})
            sb.skip(name, skip_reason);
        return sb.reports;
    }

    const double radius = ball->radius;
    const OverdeterminedBallSolution sol = overdetermined_ball_solution(radius, 1);
    const double k_star = sol.k_star;

    {  // (lap + k*^2) u = 1 inside
        RandomStream stream = rng.split(4);
        double worst = 0.0;
        for (int t = 0; t < 100; ++t) {
            const Vec3 x = stream.point_in_ball(0.95 * radius);
            const double h = 1e-3 * (1.0 + norm(x));
            double lap = 0.0;
            const Vec3 axes[3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
            for (const Vec3& e : axes)
                lap += (-sol.value(x + 2.0 * h * e) + 16.0 * sol.value(x + h * e) -
                        30.0 * sol.value(x) + 16.0 * sol.value(x - h * e) -
                        sol.value(x - 2.0 * h * e)) /
                       (12.0 * h * h);
            worst = std::max(worst, std::abs(lap + k_star * k_star * sol.value(x) - 1.0));
        }
        auto& r = sb.add("interior_solution_pde_residual");
        sb.finish(r, worst, 0.0, 1e-6, 1.0);
    }
    {  // u and u_N vanish on S
        const auto trace_samples = surface_samples(shape, Resolution{31, config.res.radial_order});
        double worst = 0.0;
        for (const auto& s : trace_samples) {
            worst = std::max(worst, std::abs(sol.value(s.point)));
            worst = std::max(worst, std::abs(dot(sol.gradient(s.point), s.normal)));
        }
        auto& r = sb.add("interior_solution_boundary_trace");
        r.note = "max of |u| and |u_N| over boundary samples";
        sb.finish(r, worst, 0.0, 1e-8, 1.0);
    }
    {  // companion constant -1/k*^2
        double worst = 0.0;
        for (const auto& s : sb.surf)
            worst = std::max(worst,
                             std::abs(sol.companion_value(s.point) - sol.companion_boundary_constant()));
        auto& r = sb.add("companion_boundary_constant");
        sb.finish(r, worst, 0.0, 1e-10, 1.0);
    }
    {  // 3 => 2: chi vanishes on the sphere |xi| = k*
        RandomStream stream = rng.split(5);
        double worst = 0.0;
        for (int t = 0; t < 10; ++t)
            worst = std::max(worst, std::abs(chi_ft_ball(radius, k_star * stream.unit_vector())));
        auto& r = sb.add("zero_sphere_witness");
        sb.finish(r, worst, 0.0, 1e-10, 1.0);
    }
    {  // 3 => 1: plane-wave moving averages vanish at k*
        RandomStream stream = rng.split(6);
        double worst = 0.0;
        for (int t = 0; t < 20; ++t) {
            const WaveVector wave{k_star, stream.unit_vector()};
            const Vec3 y = stream.uniform(0.0, 3.0 * radius) * stream.unit_vector();
            worst = std::max(worst, std::abs(moving_average_plane_wave(shape, wave, y, config.res)));
        }
        auto& r = sb.add("moving_average_witness");
        sb.finish(r, worst, 0.0, 1e-8, 1.0);
    }
    {  // 3 => 1: u~(xi)(k*^2 - |xi|^2) = chi~(xi)
        RandomStream stream = rng.split(7);
        double worst = 0.0;
        int done = 0;
        while (done < 20) {
            const Vec3 xi = stream.uniform(0.1, 8.0) * stream.unit_vector();
            if (std::abs(k_star * k_star - norm_squared(xi)) <= 1e-3) continue;
            worst = std::max(worst, extended_solution_ft(sol, xi, config.res).residual);
            ++done;
        }
        auto& r = sb.add("extended_solution_fourier_identity");
        sb.finish(r, worst, 0.0, 1e-6, sb.volume);
    }

    std::vector<Field> star_fields;
    {
        RandomStream stream = rng.split(8);
        for (int t = 0; t < 10; ++t)
            star_fields.push_back(random_basis_field(stream, k_star, 5));
    }
    {  // domain integrals of entire solutions vanish at k*
        double worst = 0.0;
        for (const auto& f : star_fields)
            worst = std::max(worst, std::abs(domain_integral(f, sb.vol)));
        auto& r = sb.add("domain_integral_vanishes");
        sb.finish(r, worst, 0.0, 1e-8, sb.volume);
    }
    {  // the same under explicit random rotations (Eq. 12 spot check)
        RandomStream stream = rng.split(9);
        double worst = 0.0;
        const Field& f = star_fields.front();
        for (int t = 0; t < 10; ++t) {
            const Vec3 axis = stream.unit_vector();
            const double angle = stream.uniform(0.0, 2.0 * std::numbers::pi);
            Complex sum{};
            for (const auto& s : sb.vol)
                sum += s.weight * field_value(f, rotate(s.point, axis, angle));
            worst = std::max(worst, std::abs(sum));
        }
        auto& r = sb.add("rotation_average_spotcheck");
        sb.finish(r, worst, 0.0, 1e-8, sb.volume);
    }
    {  // Eq. 13
        RandomStream stream = rng.split(10);
        double worst = 0.0;
        for (const auto& f : star_fields)
            for (int d = 0; d < 5; ++d)
                worst = std::max(worst,
                                 std::abs(rotational_integral(f, stream.unit_vector(), sb.vol)));
        auto& r = sb.add("rotational_derivative_vanishes");
        sb.finish(r, worst, 0.0, 1e-8, sb.volume);
    }
    {  // Eq. 14
        double worst = 0.0;
        for (const auto& f : star_fields) {
            const std::array<Complex, 3> mom = moment_integral(f, sb.surf);
            worst = std::max({worst, std::abs(mom[0]), std::abs(mom[1]), std::abs(mom[2])});
        }
        auto& r = sb.add("surface_moment_vanishes");
        sb.finish(r, worst, 0.0, 1e-8, sb.volume);
    }
    {  // Eq. 16 for the l = 0 and l = 1 eigenspaces
        RandomStream stream = rng.split(11);
        double worst = 0.0;
        std::vector<BallEigenfunction> eigs;
        eigs.push_back(ball_dirichlet_eigenfunction(0, 0, 1, radius));
        for (int m = -1; m <= 1; ++m) eigs.push_back(ball_dirichlet_eigenfunction(1, m, 1, radius));
        for (const auto& eig : eigs) {
            for (int t = 0; t < 3; ++t) {
                const Field u = random_basis_field(stream, eig.k, 5);
                worst = std::max(worst, std::abs(boundary_trace_orthogonality(u, eig, *ball, config.res)));
            }
        }
        auto& r = sb.add("eigentrace_orthogonality");
        sb.finish(r, worst, 0.0, 1e-8, sb.volume);
    }
    {  // sphericity diagnostics, scale-free
        const SphericityReport sp = sphericity_check(shape, config.res);
        const double r2 = radius * radius;
        const double worst = std::max({sp.max_s_dot_sp / r2, sp.max_s_dot_sq / r2,
                                       sp.radius_sq_variance / (r2 * r2)});
        auto& r = sb.add("sphericity_diagnostics");
        sb.finish(r, worst, 0.0, 1e-10, 1.0);
    }
    std::vector<BallEigenfunction> triple;
    for (int m = -1; m <= 1; ++m) triple.push_back(ball_dirichlet_eigenfunction(1, m, 1, radius));
    {  // Gram of the l = 1 traces is diagonal and positive
        const GramReport gr = gram_normal_derivatives(triple, *ball, config.res);
        double off = 0.0, diag = 0.0;
        for (int a = 0; a < 3; ++a) {
            diag = std::max(diag, gr.gram(a, a));
            for (int b = 0; b < 3; ++b)
                if (a != b) off = std::max(off, std::abs(gr.gram(a, b)));
        }
        auto& r = sb.add("trace_gram_definiteness");
        r.lhs = {off, gr.min_eigenvalue};
        r.rhs = {0.0, diag};
        r.abs_discrepancy = off;
        r.rel_discrepancy = off / diag;
        r.tolerance = 1e-8;
        r.status = (off <= 1e-8 * diag && gr.min_eigenvalue > 0.1 * diag) ? CheckStatus::pass
                                                                          : CheckStatus::fail;
        r.note = "off-diagonal mass and minimum eigenvalue of the trace Gram matrix";
    }
    {  // determinant Monte-Carlo harness
        const DetHarnessResult h =
            det_nondegeneracy_harness(triple, *ball, 100, config.seed, config.res);
        auto& r = sb.add("trace_determinant_harness");
        r.lhs = {static_cast<double>(h.n_above)};
        r.rhs = {static_cast<double>(h.n_trials)};
        r.abs_discrepancy = static_cast<double>(h.n_trials - h.n_above);
        r.rel_discrepancy = r.abs_discrepancy / h.n_trials;
        r.tolerance = 0.05;
        r.status = (h.n_above >= 95 * h.n_trials / 100) ? CheckStatus::pass : CheckStatus::fail;
        r.note = "fraction of random point-triples with |det| above threshold";
    }
    {  // Eq. 4 on the centered ball: the zero expansion
        const auto exps = cross_expansion(shape, triple, sb.surf);
        double worst = 0.0;
        for (const auto& e : exps) {
            worst = std::max(worst, e.residual);
            for (double c : e.coefficients) worst = std::max(worst, std::abs(c));
        }
        auto& r = sb.add("cross_field_expansion_zero");
        sb.finish(r, worst, 0.0, 1e-8, 1.0);
    }
    {  // Eq. 6a projection
        const Vec3 a{0.0, 0.0, 0.7 * radius};
        const Vec3 q{1.0, 0.0, 0.0};
        const ProjectedNormalFit p6 = projected_normal_fit(shape, a, q, triple, config.res);
        auto& r = sb.add("projected_normal");
        const double worst = std::max(p6.max_np_on_silhouette, p6.fit_residual);
        sb.finish(r, worst, 0.0, 1e-8, 1.0);
        r.note = "N.p on the silhouette and the l=1 fit residual over S";
    }
    return sb.reports;
}

}  // namespace pompeiu
