#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "pompeiu/helmholtz.hpp"
#include "pompeiu/indicator.hpp"
#include "pompeiu/random.hpp"

using namespace pompeiu;

namespace {

constexpr double kFourPi = 4.0 * std::numbers::pi;

Ellipsoid make_ellipsoid(double a, double b, double c) {
    Ellipsoid e;
    e.semi_axes = {a, b, c};
    return e;
}

HelmholtzBasisField random_field(RandomStream& rng, double k, int lmax) {
    HelmholtzBasisField f;
    f.k = k;
    f.max_degree = lmax;
    f.coefficients.resize(harmonic_count(lmax));
    for (auto& c : f.coefficients) c = rng.uniform(-1.0, 1.0);
    return f;
}

// Closed-form radial norm for a Dirichlet mode: the full L2 norm of
// norm*j_l(k r)Y_lm over the ball is norm^2 (R^3/2) j_{l+1}(k R)^2.
double dirichlet_radial_norm2(int l, double k, double radius) {
    return radius * radius * radius / 2.0 *
           std::pow(std::sph_bessel(l + 1, k * radius), 2);
}

}  // namespace

TEST_CASE("field evaluation closed forms") {
    const Field pw = PlaneWave{1.0, {0, 0, 1}};
    const FieldValue v = eval_field(pw, Vec3{});
    CHECK(std::abs(v.value - Complex{1.0, 0.0}) < 1e-15);
    CHECK(std::abs(v.gradient.x) < 1e-15);
    CHECK(std::abs(v.gradient.y) < 1e-15);
    CHECK(std::abs(v.gradient.z - Complex{0.0, 1.0}) < 1e-15);

    const Field mono = HelmholtzBasisField::single_mode(2.0, 0, 0);
    CHECK(std::abs(field_value(mono, Vec3{}) -
                   Complex{1.0 / std::sqrt(kFourPi), 0.0}) < 1e-14);
    const Vec3 x{0.3, -0.1, 0.2};
    CHECK(std::abs(field_value(mono, x).real() -
                   std::sph_bessel(0, 2.0 * norm(x)) / std::sqrt(kFourPi)) < 1e-13);
}

TEST_CASE("analytic gradients match finite differences") {
    RandomStream rng(42);
    std::vector<Field> fields;
    fields.push_back(PlaneWave{1.7, rng.unit_vector()});
    fields.push_back(random_field(rng, 3.1, 4));
    fields.push_back(ball_dirichlet_eigenfunction(2, 1, 1, 1.0));
    const double h = 1e-6;
    for (const Field& f : fields) {
        for (int t = 0; t < 20; ++t) {
            const Vec3 x = rng.point_in_ball(1.5);
            const FieldValue fv = eval_field(f, x);
            const Vec3 axes[3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
            const Complex grad[3] = {fv.gradient.x, fv.gradient.y, fv.gradient.z};
            double scale = std::abs(fv.value);
            for (const Complex& g : grad) scale = std::max(scale, std::abs(g));
            for (int a = 0; a < 3; ++a) {
                const Complex fd =
                    (field_value(f, x + h * axes[a]) - field_value(f, x - h * axes[a])) /
                    (2.0 * h);
                CHECK(std::abs(grad[a] - fd) < 1e-6 * std::max(1.0, scale));
            }
        }
    }
}

TEST_CASE("helmholtz residual") {
    RandomStream rng(9);
    for (int t = 0; t < 5; ++t) {
        const Field pw = PlaneWave{2.0, rng.unit_vector()};
        CHECK(helmholtz_residual(pw, rng.point_in_ball(2.0), 2.0) < 1e-6);
    }
    const double k = 4.493409457909064;
    const Field bf = random_field(rng, k, 3);
    for (int t = 0; t < 5; ++t)
        CHECK(helmholtz_residual(bf, rng.point_in_ball(0.9), k) < 1e-5);

    const BallEigenfunction eig = ball_dirichlet_eigenfunction(2, 1, 1, 1.0);
    for (int t = 0; t < 5; ++t)
        CHECK(helmholtz_residual(Field{eig}, rng.point_in_ball(0.9), eig.k) < 1e-5);

    // wrong-k sanity: (lap + 1) e^{i 2 b.x} = -3 e^{...}
    const Field pw2 = PlaneWave{2.0, {0, 0, 1}};
    const Vec3 x{0.2, 0.1, -0.3};
    CHECK(helmholtz_residual(pw2, x, 1.0) == doctest::Approx(3.0).epsilon(1e-5));

    // the stencil itself on a non-solution: u = |x|^2 has lap u = 6
    {
        auto u = [](const Vec3& p) { return norm_squared(p); };
        const double h = 1e-3 * (1.0 + norm(x));
        double lap = 0.0;
        const Vec3 axes[3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
        for (const Vec3& e : axes)
            lap += (-u(x + 2.0 * h * e) + 16.0 * u(x + h * e) - 30.0 * u(x) +
                    16.0 * u(x - h * e) - u(x - 2.0 * h * e)) /
                   (12.0 * h * h);
        const double residual = std::abs(lap + 1.0 * u(x));
        CHECK(residual == doctest::Approx(6.0 + norm_squared(x)).epsilon(1e-9));
    }
}

TEST_CASE("ball dirichlet eigenfunctions") {
    const BallEigenfunction e01 = ball_dirichlet_eigenfunction(0, 0, 1, 1.0);
    CHECK(e01.k == doctest::Approx(std::numbers::pi).epsilon(1e-12));

    const BallEigenfunction e11 = ball_dirichlet_eigenfunction(1, 0, 1, 1.0);
    CHECK(e11.k == doctest::Approx(4.493409457909064).epsilon(1e-11));

    // L2 normalization against the closed-form radial integral
    for (int l : {0, 1}) {
        for (int n : {1, 2}) {
            const BallEigenfunction e = ball_dirichlet_eigenfunction(l, 0, n, 1.0);
            CHECK(e.norm * e.norm * dirichlet_radial_norm2(l, e.k, 1.0) ==
                  doctest::Approx(1.0).epsilon(1e-8));
            // boundary truly is a node
            CHECK(std::abs(spherical_bessel_j(l, e.k)) < 1e-12);
        }
    }

    // full quadrature check of one norm
    const BallEigenfunction e21 = ball_dirichlet_eigenfunction(2, -1, 1, 1.0);
    double norm2 = 0.0;
    for (const auto& s : volume_samples(Shape{Ball{1.0, {}}})) {
        const double u = field_value(Field{e21}, s.point).real();
        norm2 += s.weight * u * u;
    }
    CHECK(norm2 == doctest::Approx(1.0).epsilon(1e-8));

    // normal trace formula vs the gradient
    for (const auto& s : surface_samples(Shape{Ball{1.0, {}}}, Resolution{10, 10})) {
        const FieldValue fv = eval_field(Field{e21}, s.point);
        const Complex gn = dot(fv.gradient, s.normal);
        CHECK(std::abs(gn.real() - eigenfunction_normal_trace(e21, s.point)) < 1e-10);
        CHECK(std::abs(gn.imag()) < 1e-14);
    }

    CHECK_THROWS_AS(ball_dirichlet_eigenfunction(1, 2, 1, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(ball_dirichlet_eigenfunction(0, 0, 0, 1.0), std::invalid_argument);
}

TEST_CASE("eigenfunction orthonormality in L2(D)") {
    std::vector<BallEigenfunction> eigs;
    for (int l = 0; l <= 2; ++l)
        for (int m = -l; m <= l; ++m)
            for (int n = 1; n <= 2; ++n) eigs.push_back(ball_dirichlet_eigenfunction(l, m, n, 1.0));
    const auto vol = volume_samples(Shape{Ball{1.0, {}}});
    for (std::size_t a = 0; a < eigs.size(); ++a) {
        for (std::size_t b = a; b < eigs.size(); ++b) {
            double inner = 0.0;
            for (const auto& s : vol)
                inner += s.weight * field_value(Field{eigs[a]}, s.point).real() *
                         field_value(Field{eigs[b]}, s.point).real();
            CHECK(std::abs(inner - (a == b ? 1.0 : 0.0)) < 1e-6);
        }
    }
}

TEST_CASE("over-determined ball solution") {
    const OverdeterminedBallSolution sol = overdetermined_ball_solution(1.0, 1);
    CHECK(sol.k_star == doctest::Approx(4.493409457909064).epsilon(1e-11));
    CHECK(sol.j0_at_boundary == doctest::Approx(-0.21723362821122165).epsilon(1e-10));
    CHECK(sol.value(Vec3{}) ==
          doctest::Approx((1.0 - 1.0 / sol.j0_at_boundary) / (sol.k_star * sol.k_star))
              .epsilon(1e-12));

    RandomStream rng(17);
    {  // interior PDE residual
        double worst = 0.0;
        for (int t = 0; t < 100; ++t) {
            const Vec3 x = rng.point_in_ball(0.95);
            const double h = 1e-3 * (1.0 + norm(x));
            double lap = 0.0;
            const Vec3 axes[3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
            for (const Vec3& e : axes)
                lap += (-sol.value(x + 2.0 * h * e) + 16.0 * sol.value(x + h * e) -
                        30.0 * sol.value(x) + 16.0 * sol.value(x - h * e) -
                        sol.value(x - 2.0 * h * e)) /
                       (12.0 * h * h);
            worst = std::max(worst, std::abs(lap + sol.k_star * sol.k_star * sol.value(x) - 1.0));
        }
        CHECK(worst < 1e-6);
    }
    {  // boundary traces over > 500 samples
        const auto samples = surface_samples(Shape{Ball{1.0, {}}}, Resolution{31, 31});
        REQUIRE(samples.size() >= 500);
        double worst = 0.0;
        for (const auto& s : samples) {
            worst = std::max(worst, std::abs(sol.value(s.point)));
            worst = std::max(worst, std::abs(dot(sol.gradient(s.point), s.normal)));
        }
        CHECK(worst < 1e-8);
    }
    {  // gradient against finite differences
        for (int t = 0; t < 10; ++t) {
            const Vec3 x = rng.point_in_ball(0.9);
            const double h = 1e-6;
            const Vec3 g = sol.gradient(x);
            const Vec3 axes[3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
            const double comps[3] = {g.x, g.y, g.z};
            for (int a = 0; a < 3; ++a) {
                const double fd =
                    (sol.value(x + h * axes[a]) - sol.value(x - h * axes[a])) / (2.0 * h);
                CHECK(std::abs(comps[a] - fd) < 1e-7);
            }
        }
    }
    {  // 3 => 2 witness
        for (int t = 0; t < 10; ++t)
            CHECK(std::abs(chi_ft_ball(1.0, sol.k_star * rng.unit_vector())) < 1e-10);
    }
    {  // constant-boundary companion
        const auto samples = surface_samples(Shape{Ball{1.0, {}}}, Resolution{20, 20});
        for (const auto& s : samples)
            CHECK(std::abs(sol.companion_value(s.point) - (-1.0 / (sol.k_star * sol.k_star))) <
                  1e-10);
    }
    CHECK_THROWS_AS(overdetermined_ball_solution(-1.0, 1), std::invalid_argument);
    CHECK_THROWS_AS(overdetermined_ball_solution(1.0, 0), std::invalid_argument);
}

TEST_CASE("extended solution fourier identity") {
    const OverdeterminedBallSolution sol = overdetermined_ball_solution(1.0, 1);
    const double k2 = sol.k_star * sol.k_star;
    const double volume = kFourPi / 3.0;

    const ExtendedSolutionFt at_zero = extended_solution_ft(sol, Vec3{});
    CHECK(std::abs(at_zero.u_hat * k2 - Complex{volume, 0.0}) < 1e-6);

    RandomStream rng(23);
    for (int t = 0; t < 20; ++t) {
        Vec3 xi = rng.uniform(0.1, 8.0) * rng.unit_vector();
        while (std::abs(k2 - norm_squared(xi)) <= 1e-3)
            xi = rng.uniform(0.1, 8.0) * rng.unit_vector();
        CHECK(extended_solution_ft(sol, xi).residual < 1e-6 * volume);
    }
    {  // far from the variety
        const Vec3 xi = 2.0 * sol.k_star * Vec3{0, 0, 1};
        CHECK(extended_solution_ft(sol, xi).residual < 1e-6 * volume);
    }
    {  // on the variety: rejected
        const Vec3 xi = sol.k_star * Vec3{1, 0, 0};
        CHECK_THROWS_AS(extended_solution_ft(sol, xi), std::invalid_argument);
    }
}

TEST_CASE("mps defect on the ball") {
    const double k_star = overdetermined_ball_solution(1.0, 1).k_star;
    const Shape ball = Ball{1.0, {}};

    const DefectResult at_root = mps_defect(ball, k_star, 6);
    CHECK(at_root.defect < 1e-6);
    // sigma_min splits into the two boundary misfits
    const double recomposed = std::hypot(at_root.boundary_value_misfit, at_root.normal_misfit);
    CHECK(recomposed == doctest::Approx(at_root.defect * 1.0).epsilon(1.0));  // same order
    CHECK(at_root.boundary_value_misfit < 1e-6);
    CHECK(at_root.normal_misfit < 1e-6);

    const DefectResult off_root = mps_defect(ball, 3.0, 6);
    CHECK(off_root.defect > 1e-2);  // regression floor

    // defect decreases with L and is tiny by L = 6 at k*
    double prev = 1e300;
    for (int basis = 2; basis <= 6; ++basis) {
        const double d = mps_defect(ball, k_star, basis).defect;
        CHECK(d <= prev + 1e-8);
        prev = d;
    }
    CHECK(prev < 1e-6);

    CHECK_THROWS_AS(mps_defect(ball, -1.0, 6), std::invalid_argument);
    CHECK_THROWS_AS(mps_defect(ball, 3.0, 1), std::invalid_argument);
    // surface sampling too coarse for the basis
    CHECK_THROWS_AS(mps_defect(ball, 3.0, 8, Resolution{10, 10}), std::invalid_argument);
}

TEST_CASE("defect is invariant under rigid rotation of the shape") {
    Ellipsoid e = make_ellipsoid(1.0, 1.0, 1.3);
    const double d0 = mps_defect(Shape{e}, 3.7, 6).defect;
    const double c = std::cos(0.6), s = std::sin(0.6);
    e.axes = {Vec3{c, 0, s}, Vec3{0, 1, 0}, Vec3{-s, 0, c}};
    const double d1 = mps_defect(Shape{e}, 3.7, 6).defect;
    CHECK(std::abs(d0 - d1) < 1e-8);
}

TEST_CASE("defect is invariant under translation of the shape") {
    const Resolution res{24, 24};
    const double d0 = mps_defect(Shape{Ball{1.0, {}}}, 3.7, 4, res).defect;
    const double d1 = mps_defect(Shape{Ball{1.0, {0.5, -0.2, 0.9}}}, 3.7, 4, res).defect;
    CHECK(std::abs(d0 - d1) < 1e-10);
}

TEST_CASE("defect sweeps") {
    const Resolution res{24, 24};
    {  // ball minima sit at the j1 roots
        DefectSweepConfig cfg;
        cfg.k_min = 4.0;
        cfg.k_max = 8.0;
        cfg.k_step = 0.1;
        cfg.basis_degree = 6;
        cfg.threads = 2;
        cfg.res = res;
        const DefectSweep sweep = defect_sweep(Shape{Ball{1.0, {}}}, cfg);
        REQUIRE(sweep.minima.size() >= 2);
        CHECK(std::abs(sweep.minima.front().k - 4.493409457909064) < 1e-4);
        CHECK(std::abs(sweep.minima.back().k - 7.725251836937707) < 1e-4);
    }
    {  // radius 1/2 doubles the minima locations
        DefectSweepConfig cfg;
        cfg.k_min = 8.0;
        cfg.k_max = 10.0;
        cfg.k_step = 0.1;
        cfg.basis_degree = 6;
        cfg.threads = 2;
        cfg.res = res;
        const DefectSweep sweep = defect_sweep(Shape{Ball{0.5, {}}}, cfg);
        REQUIRE(!sweep.minima.empty());
        CHECK(std::abs(sweep.minima.front().k - 2.0 * 4.493409457909064) < 1e-3);
    }
    {  // a 5% star perturbation lifts the floor by far more than 10x
        StarShape star;
        star.terms = {{2, 0, 0.05}};
        const double k_star = 4.493409457909064;
        const double ball_best = mps_defect(Shape{Ball{1.0, {}}}, k_star, 6, res).defect;
        double star_best = 1e300;
        for (double k = 4.2; k <= 4.8; k += 0.1)
            star_best = std::min(star_best, mps_defect(Shape{star}, k, 6, res).defect);
        CHECK(star_best > 10.0 * ball_best);
    }
}
