// Acceptance suite: every release-gating property, one pass/fail line each.
// Exits nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "pompeiu/geometry.hpp"
#include "pompeiu/helmholtz.hpp"
#include "pompeiu/identities.hpp"
#include "pompeiu/indicator.hpp"
#include "pompeiu/random.hpp"

using namespace pompeiu;
namespace fs = std::filesystem;

namespace {

constexpr double kVolumeUnitBall = 4.0 * std::numbers::pi / 3.0;

struct Criterion {
    std::string name;
    std::function<std::string()> run;  // empty string = pass, else failure detail
};

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

std::string fail_msg(const char* what, double measured, double bound) {
    std::ostringstream ss;
    ss << what << ": " << measured << " exceeds " << bound;
    return ss.str();
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// ---- criterion bodies ------------------------------------------------------

std::string zero_sphere_recovery() {
    const auto start = std::chrono::steady_clock::now();
    ScanConfig cfg;  // defaults: k in [0.5, 10] step 0.01, degree-30 grid
    cfg.threads = 2;
    const PompeiuScanResult scan = pompeiu_scan(Shape{Ball{1.0, {}}}, cfg);
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (scan.zero_candidates.roots.size() != 2)
        return "expected 2 candidates, got " + std::to_string(scan.zero_candidates.roots.size());
    const double expected[2] = {4.493409457909064, 7.725251836937707};
    for (int i = 0; i < 2; ++i) {
        const double dk = std::abs(scan.zero_candidates.roots[i] - expected[i]);
        if (dk >= 1e-6) return fail_msg("candidate k offset", dk, 1e-6);
        const double rel = scan.zero_candidates.residuals[i] / scan.normalization;
        if (rel >= 1e-8) return fail_msg("m/|D| at candidate", rel, 1e-8);
    }
    if (elapsed >= 30.0) return fail_msg("runtime seconds", elapsed, 30.0);
    return {};
}

std::string route_agreement() {
    RandomStream rng(101);
    for (const Shape& shape : {Shape{Ball{1.0, {}}}, Shape{make_ellipsoid(1.0, 1.0, 1.3)}}) {
        const auto vol = volume_samples(shape);
        const auto surf = surface_samples(shape);
        const double volume = shape_volume(shape);
        for (int t = 0; t < 50; ++t) {
            const Vec3 xi = rng.uniform(0.1, 10.0) * rng.unit_vector();
            const Complex cf = chi_ft_closed_form(shape, xi);
            const Complex cv = chi_ft_volume(vol, xi);
            const Complex cs = chi_ft_surface(surf, xi);
            const double worst =
                std::max({std::abs(cf - cv), std::abs(cf - cs), std::abs(cv - cs)});
            if (worst >= 1e-8 * volume)
                return fail_msg("parametric route disagreement / |D|", worst / volume, 1e-8);
        }
    }
    const Shape mesh{load_mesh(fs::path(POMPEIU_TEST_DATA_DIR) / "icosphere.off")};
    const auto vol = volume_samples(mesh);
    const auto surf = surface_samples(mesh);
    const double volume = shape_volume(mesh);
    for (int t = 0; t < 50; ++t) {
        const Vec3 xi = rng.uniform(0.1, 10.0) * rng.unit_vector();
        const Complex cf = chi_ft_ball(1.0, xi);  // the fixture approximates the unit ball
        const Complex cv = chi_ft_volume(vol, xi);
        const Complex cs = chi_ft_surface(surf, xi);
        const double worst = std::max({std::abs(cf - cv), std::abs(cf - cs), std::abs(cv - cs)});
        if (worst >= 1e-2 * volume)
            return fail_msg("mesh route disagreement / |D|", worst / volume, 1e-2);
    }
    return {};
}

std::string overdetermined_solution_checks() {
    const OverdeterminedBallSolution sol = overdetermined_ball_solution(1.0, 1);
    RandomStream rng(102);
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
        const double residual = std::abs(lap + sol.k_star * sol.k_star * sol.value(x) - 1.0);
        if (residual >= 1e-6) return fail_msg("PDE residual", residual, 1e-6);
    }
    const auto samples = surface_samples(Shape{Ball{1.0, {}}}, Resolution{31, 31});
    if (samples.size() < 500) return "fewer than 500 surface samples";
    for (const auto& s : samples) {
        const double trace = std::max(std::abs(sol.value(s.point)),
                                      std::abs(dot(sol.gradient(s.point), s.normal)));
        if (trace >= 1e-8) return fail_msg("boundary trace", trace, 1e-8);
        const double c = std::abs(sol.companion_value(s.point) -
                                  sol.companion_boundary_constant());
        if (c >= 1e-10) return fail_msg("companion constant deviation", c, 1e-10);
    }
    return {};
}

std::string equivalence_witnesses() {
    const OverdeterminedBallSolution sol = overdetermined_ball_solution(1.0, 1);
    const double k2 = sol.k_star * sol.k_star;
    RandomStream rng(103);
    for (int t = 0; t < 10; ++t) {
        const double v = std::abs(chi_ft_ball(1.0, sol.k_star * rng.unit_vector()));
        if (v >= 1e-10) return fail_msg("(a) chi at the zero sphere", v, 1e-10);
    }
    const Shape ball = Ball{1.0, {}};
    for (int t = 0; t < 20; ++t) {
        const WaveVector wave{sol.k_star, rng.unit_vector()};
        const Vec3 y = rng.uniform(0.0, 3.0) * rng.unit_vector();
        const double v = std::abs(moving_average_plane_wave(ball, wave, y));
        if (v >= 1e-8) return fail_msg("(b) moving average", v, 1e-8);
    }
    int done = 0;
    while (done < 20) {
        const Vec3 xi = rng.uniform(0.1, 8.0) * rng.unit_vector();
        if (std::abs(k2 - norm_squared(xi)) <= 1e-3) continue;
        const double r = extended_solution_ft(sol, xi).residual;
        if (r >= 1e-6 * kVolumeUnitBall)
            return fail_msg("(c) Fourier identity residual / |D|", r / kVolumeUnitBall, 1e-6);
        ++done;
    }
    return {};
}

std::string identity_chain() {
    const Shape ball = Ball{1.0, {}};
    const double k_star = overdetermined_ball_solution(1.0, 1).k_star;
    const auto vol = volume_samples(ball);
    const auto surf = surface_samples(ball);
    RandomStream rng(104);

    std::vector<HelmholtzBasisField> fields;
    for (int t = 0; t < 10; ++t) fields.push_back(random_field(rng, k_star, 5));

    for (const auto& f : fields) {
        Complex domain{};
        for (const auto& s : vol) domain += s.weight * field_value(Field{f}, s.point);
        if (std::abs(domain) >= 1e-8 * kVolumeUnitBall)
            return fail_msg("domain integral / |D|", std::abs(domain) / kVolumeUnitBall, 1e-8);

        const std::array<Complex, 3> mom = surface_moment(Field{f}, ball);
        for (const Complex& c : mom)
            if (std::abs(c) >= 1e-8 * kVolumeUnitBall)
                return fail_msg("surface moment / |D|", std::abs(c) / kVolumeUnitBall, 1e-8);

        for (int d = 0; d < 5; ++d) {
            const Complex rot = rotational_derivative_integral(Field{f}, rng.unit_vector(), ball);
            if (std::abs(rot) >= 1e-8 * kVolumeUnitBall)
                return fail_msg("rotational integral / |D|", std::abs(rot) / kVolumeUnitBall, 1e-8);
        }
    }

    // Eq. 16 for l = 0 and l = 1 eigenspaces, fields sharing each eigenvalue.
    std::vector<BallEigenfunction> eigs;
    eigs.push_back(ball_dirichlet_eigenfunction(0, 0, 1, 1.0));
    for (int m = -1; m <= 1; ++m) eigs.push_back(ball_dirichlet_eigenfunction(1, m, 1, 1.0));
    for (const auto& eig : eigs) {
        for (int t = 0; t < 3; ++t) {
            const Field u = Field{random_field(rng, eig.k, 5)};
            const double v = std::abs(boundary_trace_orthogonality(u, eig, Ball{1.0, {}}));
            if (v >= 1e-8 * kVolumeUnitBall)
                return fail_msg("trace orthogonality integral / |D|", v / kVolumeUnitBall, 1e-8);
        }
    }

    // Divergence two-route identity on the ellipsoid.
    const Shape ell{make_ellipsoid(1.0, 1.0, 1.3)};
    const double ell_volume = shape_volume(ell);
    for (int t = 0; t < 3; ++t) {
        const Field f = (t == 0) ? Field{PlaneWave{2.0, rng.unit_vector()}}
                                 : Field{random_field(rng, rng.uniform(1.0, 4.0), 4)};
        const std::array<Complex, 3> mom = surface_moment(f, ell);
        for (int d = 0; d < 3; ++d) {
            const Vec3 alpha = rng.unit_vector();
            const Complex lhs = rotational_derivative_integral(f, alpha, ell);
            const Complex rhs = alpha.x * mom[0] + alpha.y * mom[1] + alpha.z * mom[2];
            if (std::abs(lhs - rhs) >= 1e-7 * ell_volume)
                return fail_msg("two-route identity / |D|", std::abs(lhs - rhs) / ell_volume, 1e-7);
        }
    }
    return {};
}

std::string diagnostics_suite() {
    {  // sphericity split between ball and star shapes
        const SphericityReport ball = sphericity_check(Shape{Ball{1.0, {}}});
        const double worst =
            std::max({ball.max_s_dot_sp, ball.max_s_dot_sq, ball.radius_sq_variance});
        if (worst >= 1e-10) return fail_msg("ball sphericity diagnostics", worst, 1e-10);
        for (const StarTerm term : {StarTerm{2, 0, 0.05}, StarTerm{3, 0, 0.05}}) {
            StarShape star;
            star.terms = {term};
            const SphericityReport r = sphericity_check(Shape{star});
            if (r.radius_sq_variance <= 1e-4)
                return fail_msg("star variance (should exceed)", r.radius_sq_variance,
                                1e-4);
        }
    }
    std::vector<BallEigenfunction> triple;
    for (int m = -1; m <= 1; ++m) triple.push_back(ball_dirichlet_eigenfunction(1, m, 1, 1.0));
    {  // Gram matrix of the l = 1 traces
        const GramReport g = gram_normal_derivatives(triple, Ball{1.0, {}});
        double diag = 0.0, off = 0.0;
        for (int a = 0; a < 3; ++a) {
            diag = std::max(diag, g.gram(a, a));
            for (int b = 0; b < 3; ++b)
                if (a != b) off = std::max(off, std::abs(g.gram(a, b)));
        }
        if (off >= 1e-8 * diag) return fail_msg("trace Gram off-diagonal", off / diag, 1e-8);
        if (!(g.min_eigenvalue > 0.0)) return "trace Gram matrix not positive definite";
    }
    {  // determinant harness
        const DetHarnessResult h = det_nondegeneracy_harness(triple, Ball{1.0, {}}, 100, 12345);
        if (h.n_above < 95)
            return "determinant harness: only " + std::to_string(h.n_above) + "/100 above threshold";
    }
    return {};
}

std::string defect_separation() {
    const Shape ball = Ball{1.0, {}};
    const double k_star = overdetermined_ball_solution(1.0, 1).k_star;
    double prev = 1e300;
    for (int basis = 2; basis <= 6; ++basis) {
        const double d = mps_defect(ball, k_star, basis).defect;
        if (d > prev + 1e-8) return fail_msg("ball defect not decreasing in L", d, prev);
        prev = d;
    }
    if (prev >= 1e-6) return fail_msg("ball defect at k*, L = 6", prev, 1e-6);

    const Shape ell{make_ellipsoid(1.0, 1.0, 1.3)};
    DefectSweepConfig cfg;
    cfg.k_min = 3.0;
    cfg.k_max = 8.0;
    cfg.k_step = 0.05;
    cfg.basis_degree = 8;
    cfg.threads = 2;
    const DefectSweep sweep = defect_sweep(ell, cfg);
    double floor = 1e300;
    for (const auto& r : sweep.results) floor = std::min(floor, r.defect);
    for (const auto& r : sweep.minima) floor = std::min(floor, r.defect);
    if (floor <= 1e-2) return fail_msg("ellipsoid defect floor (should exceed)", floor, 1e-2);
    return {};
}

std::string determinism() {
    const fs::path base = fs::temp_directory_path() / "pompeiu_acceptance_det";
    const fs::path a = base / "a";
    const fs::path b = base / "b";
    fs::remove_all(base);
    fs::create_directories(a);
    fs::create_directories(b);
    const std::string cli = POMPEIU_CLI_PATH;
    auto run = [&](const std::string& cmd) {
        return WEXITSTATUS(std::system((cmd + " > /dev/null 2>&1").c_str()));
    };
    const std::string scan =
        " scan --shape ellipsoid --semi-axes 1,1,1.3 --k-min 0.5 --k-max 4 --k-step 0.02 --seed 5";
    const std::string verify = " verify --shape ball --seed 5";
    if (run("POMPEIU_LAB_THREADS=1 " + cli + scan + " --out " + a.string()) != 0) return "scan run failed";
    if (run("POMPEIU_LAB_THREADS=2 " + cli + scan + " --out " + b.string()) != 0) return "scan run failed";
    if (run("POMPEIU_LAB_THREADS=1 " + cli + verify + " --out " + a.string()) != 0) return "verify run failed";
    if (run("POMPEIU_LAB_THREADS=2 " + cli + verify + " --out " + b.string()) != 0) return "verify run failed";
    for (const char* name : {"scan_summary.json", "scan.csv", "identities.json"}) {
        if (slurp(a / name) != slurp(b / name))
            return std::string("outputs differ across thread counts: ") + name;
    }
    return {};
}

}  // namespace

int main() {
    const std::vector<Criterion> criteria{
        {"1 zero-sphere recovery on the unit ball", zero_sphere_recovery},
        {"2 route agreement, parametric and mesh tiers", route_agreement},
        {"3 over-determined ball solution", overdetermined_solution_checks},
        {"4 equivalence-chain witnesses", equivalence_witnesses},
        {"5 integral identity chain and two-route agreement", identity_chain},
        {"6 sphericity, Gram, and determinant diagnostics", diagnostics_suite},
        {"7 defect separation between ball and ellipsoid", defect_separation},
        {"8 determinism across threads with fixed seed", determinism},
    };
    int failures = 0;
    for (const auto& c : criteria) {
        std::string detail;
        try {
            detail = c.run();
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        if (detail.empty()) {
            std::printf("PASS criterion %s\n", c.name.c_str());
        } else {
            std::printf("FAIL criterion %s: %s\n", c.name.c_str(), detail.c_str());
            ++failures;
        }
        std::fflush(stdout);
    }
    return failures == 0 ? 0 : 1;
}
