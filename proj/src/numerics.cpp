#include "pompeiu/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace pompeiu {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// P_n and P_n' at x via the three-term recurrence.
void legendre_pair(int n, double x, double& p, double& dp) {
    double p0 = 1.0, p1 = x;
    for (int k = 1; k < n; ++k) {
        const double p2 = ((2.0 * k + 1.0) * x * p1 - k * p0) / (k + 1.0);
        p0 = p1;
        p1 = p2;
    }
    p = (n == 0) ? 1.0 : p1;
    dp = (n == 0) ? 0.0 : n * (x * p1 - p0) / (x * x - 1.0);
}

}  // namespace

Quadrature1D gauss_legendre(int n) {
    if (n < 1) throw std::invalid_argument("gauss_legendre: n must be >= 1");
    Quadrature1D q;
    q.nodes.assign(n, 0.0);
    q.weights.assign(n, 0.0);
    const int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        // Tricomi initial guess, then Newton on P_n.
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double p = 0.0, dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            legendre_pair(n, x, p, dp);
            const double dx = p / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        legendre_pair(n, x, p, dp);
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        q.nodes[n - 1 - i] = x;
        q.weights[n - 1 - i] = w;
        q.nodes[i] = -x;
        q.weights[i] = w;
    }
    if (n % 2 == 1) q.nodes[n / 2] = 0.0;
    return q;
}

ProductGridAngles product_grid_angles(int degree) {
    if (degree < 0) throw std::invalid_argument("product_grid_angles: degree must be >= 0");
    ProductGridAngles g;
    g.polar = gauss_legendre(degree / 2 + 1);  // 2n-1 >= degree
    g.n_phi = degree + 1;
    return g;
}

SphericalGrid sphere_grid(int degree) {
    const ProductGridAngles angles = product_grid_angles(degree);
    SphericalGrid grid;
    grid.degree = degree;
    const int nt = static_cast<int>(angles.polar.nodes.size());
    grid.directions.reserve(static_cast<std::size_t>(nt) * angles.n_phi);
    grid.weights.reserve(grid.directions.capacity());
    const double wphi = kTwoPi / angles.n_phi;
    for (int i = 0; i < nt; ++i) {
        const double ct = angles.polar.nodes[i];
        const double st = std::sqrt(std::max(0.0, 1.0 - ct * ct));
        for (int j = 0; j < angles.n_phi; ++j) {
            const double phi = kTwoPi * j / angles.n_phi;
            grid.directions.push_back({st * std::cos(phi), st * std::sin(phi), ct});
            grid.weights.push_back(angles.polar.weights[i] * wphi);
        }
    }
    return grid;
}

namespace {

double bessel_j0(double x) {
    if (std::abs(x) < 1e-2) {
        const double x2 = x * x;
        return 1.0 - x2 / 6.0 * (1.0 - x2 / 20.0 * (1.0 - x2 / 42.0));
    }
    return std::sin(x) / x;
}

double bessel_j1(double x) {
    if (std::abs(x) < 1e-2) {
        const double x2 = x * x;
        return x / 3.0 * (1.0 - x2 / 10.0 * (1.0 - x2 / 28.0));
    }
    return std::sin(x) / (x * x) - std::cos(x) / x;
}

// Truncated ascending series, adequate for x < 1e-2.
double bessel_small_x(int l, double x) {
    double lead = 1.0;  // x^l / (2l+1)!!
    for (int k = 1; k <= l; ++k) lead *= x / (2.0 * k + 1.0);
    const double x2 = x * x;
    const double c1 = 2.0 * l + 3.0;
    const double c2 = 2.0 * l + 5.0;
    return lead * (1.0 - x2 / (2.0 * c1) + x2 * x2 / (8.0 * c1 * c2));
}

double bessel_small_x_deriv(int l, double x) {
    if (l == 0) return -bessel_j1(x);
    double lead = 1.0;  // x^(l-1) / (2l+1)!!
    for (int k = 1; k <= l; ++k) lead *= (k < l ? x : 1.0) / (2.0 * k + 1.0);
    const double x2 = x * x;
    const double c1 = 2.0 * l + 3.0;
    const double c2 = 2.0 * l + 5.0;
    const double g = 1.0 - x2 / (2.0 * c1) + x2 * x2 / (8.0 * c1 * c2);
    const double dg = -x / c1 + x2 * x / (2.0 * c1 * c2);
    return lead * (l * g + x * dg);
}

}  // namespace

void spherical_bessel_j_all(int lmax, double x, std::span<double> out) {
    if (lmax < 0) throw std::invalid_argument("spherical_bessel_j_all: lmax must be >= 0");
    if (x < 0.0) throw std::invalid_argument("spherical_bessel_j_all: x must be >= 0");
    if (out.size() != static_cast<std::size_t>(lmax) + 1)
        throw std::invalid_argument("spherical_bessel_j_all: output span size mismatch");
    if (x < 1e-2) {
        for (int l = 0; l <= lmax; ++l) out[l] = bessel_small_x(l, x);
        return;
    }
    if (x >= lmax) {
        // Upward recurrence is stable while l <= x.
        out[0] = bessel_j0(x);
        if (lmax >= 1) out[1] = bessel_j1(x);
        for (int l = 1; l < lmax; ++l)
            out[l + 1] = (2.0 * l + 1.0) / x * out[l] - out[l - 1];
        return;
    }
    // Miller's downward recurrence, normalized against j0 or j1.
    const int start = lmax + 20 + static_cast<int>(x);
    double fp = 0.0;
    double f = 1e-30;
    for (int n = start; n >= 1; --n) {
        const double fm = (2.0 * n + 1.0) / x * f - fp;
        fp = f;
        f = fm;
        if (n - 1 <= lmax) out[n - 1] = f;
        if (std::abs(f) > 1e250) {
            const double scale = 1e-250;
            f *= scale;
            fp *= scale;
            for (int k = std::min(lmax, n - 1); k <= lmax; ++k) out[k] *= scale;
        }
    }
    const double j0 = bessel_j0(x);
    const double j1 = bessel_j1(x);
    const double scale =
        (std::abs(j0) >= std::abs(j1)) ? j0 / out[0] : j1 / out[1];
    for (int l = 0; l <= lmax; ++l) out[l] *= scale;
}

double spherical_bessel_j(int l, double x) {
    if (l == 0) return bessel_j0(x);
    if (l == 1) return bessel_j1(x);
    std::vector<double> buf(static_cast<std::size_t>(l) + 1);
    spherical_bessel_j_all(l, x, buf);
    return buf[l];
}

double spherical_bessel_j_deriv(int l, double x) {
    if (l < 0) throw std::invalid_argument("spherical_bessel_j_deriv: l must be >= 0");
    if (x < 1e-2) return bessel_small_x_deriv(l, x);
    if (l == 0) return -bessel_j1(x);
    std::vector<double> buf(static_cast<std::size_t>(l) + 1);
    spherical_bessel_j_all(l, x, buf);
    return buf[l - 1] - (l + 1.0) / x * buf[l];
}

HarmonicTable::HarmonicTable(int max_degree) : lmax_(max_degree) {
    if (max_degree < 0) throw std::invalid_argument("HarmonicTable: degree must be >= 0");
    const int n = harmonic_count(lmax_);
    const int np = (lmax_ + 1) * (lmax_ + 2) / 2;
    plm_.assign(np, 0.0);
    dplm_.assign(np, 0.0);
    cos_m_.assign(lmax_ + 1, 0.0);
    sin_m_.assign(lmax_ + 1, 0.0);
    values_.assign(n, 0.0);
    dtheta_.assign(n, 0.0);
    dphi_.assign(n, 0.0);
}

namespace {
constexpr int plm_index(int l, int m) { return l * (l + 1) / 2 + m; }
}  // namespace

void HarmonicTable::evaluate_impl(const Vec3& direction, bool with_derivatives) {
    const double ct = std::clamp(direction.z, -1.0, 1.0);
    const double st = std::hypot(direction.x, direction.y);
    cos_theta_ = ct;
    sin_theta_ = st;
    if (st > 1e-300) {
        cos_phi_ = direction.x / st;
        sin_phi_ = direction.y / st;
    } else {
        cos_phi_ = 1.0;
        sin_phi_ = 0.0;
    }

    cos_m_[0] = 1.0;
    sin_m_[0] = 0.0;
    for (int m = 1; m <= lmax_; ++m) {
        cos_m_[m] = cos_m_[m - 1] * cos_phi_ - sin_m_[m - 1] * sin_phi_;
        sin_m_[m] = sin_m_[m - 1] * cos_phi_ + cos_m_[m - 1] * sin_phi_;
    }

    // Fully normalized associated Legendre functions, Condon-Shortley free.
    plm_[0] = 1.0 / std::sqrt(4.0 * std::numbers::pi);
    for (int m = 1; m <= lmax_; ++m)
        plm_[plm_index(m, m)] =
            plm_[plm_index(m - 1, m - 1)] * st * std::sqrt((2.0 * m + 1.0) / (2.0 * m));
    for (int m = 0; m < lmax_; ++m)
        plm_[plm_index(m + 1, m)] = plm_[plm_index(m, m)] * ct * std::sqrt(2.0 * m + 3.0);
    for (int m = 0; m <= lmax_; ++m) {
        for (int l = m + 2; l <= lmax_; ++l) {
            const double a = std::sqrt((4.0 * l * l - 1.0) / (double(l) * l - double(m) * m));
            const double b = std::sqrt(
                ((double(l) - 1.0) * (l - 1.0) - double(m) * m) /
                (4.0 * (double(l) - 1.0) * (l - 1.0) - 1.0));
            plm_[plm_index(l, m)] =
                a * (ct * plm_[plm_index(l - 1, m)] - b * plm_[plm_index(l - 2, m)]);
        }
    }

    if (with_derivatives) {
        const double st_safe = std::max(st, 1e-300);
        dplm_[0] = 0.0;
        for (int l = 1; l <= lmax_; ++l) {
            for (int m = 0; m <= l; ++m) {
                const double below =
                    (m <= l - 1) ? plm_[plm_index(l - 1, m)] : 0.0;
                const double c =
                    std::sqrt((2.0 * l + 1.0) * (double(l) * l - double(m) * m) / (2.0 * l - 1.0));
                dplm_[plm_index(l, m)] =
                    (l * ct * plm_[plm_index(l, m)] - c * below) / st_safe;
            }
        }
    }

    const double sqrt2 = std::numbers::sqrt2;
    for (int l = 0; l <= lmax_; ++l) {
        values_[harmonic_index(l, 0)] = plm_[plm_index(l, 0)];
        if (with_derivatives) {
            dtheta_[harmonic_index(l, 0)] = dplm_[plm_index(l, 0)];
            dphi_[harmonic_index(l, 0)] = 0.0;
        }
        for (int m = 1; m <= l; ++m) {
            const double p = plm_[plm_index(l, m)];
            values_[harmonic_index(l, m)] = sqrt2 * p * cos_m_[m];
            values_[harmonic_index(l, -m)] = sqrt2 * p * sin_m_[m];
            if (with_derivatives) {
                const double dp = dplm_[plm_index(l, m)];
                dtheta_[harmonic_index(l, m)] = sqrt2 * dp * cos_m_[m];
                dtheta_[harmonic_index(l, -m)] = sqrt2 * dp * sin_m_[m];
                dphi_[harmonic_index(l, m)] = -m * sqrt2 * p * sin_m_[m];
                dphi_[harmonic_index(l, -m)] = m * sqrt2 * p * cos_m_[m];
            }
        }
    }
}

double real_spherical_harmonic(int l, int m, const Vec3& direction) {
    if (l < 0 || std::abs(m) > l)
        throw std::invalid_argument("real_spherical_harmonic: require l >= 0 and |m| <= l");
    HarmonicTable table(l);
    table.evaluate(direction);
    return table.value(l, m);
}

namespace {

double bisect(const std::function<double(double)>& f, double lo, double hi,
              double flo, double tol) {
    // Shrink past the requested tol while the floating-point grid allows it.
    for (int it = 0; it < 200; ++it) {
        const double width = hi - lo;
        const double floor_width =
            4.0 * std::numeric_limits<double>::epsilon() * std::max({1.0, std::abs(lo), std::abs(hi)});
        if (width <= std::max(floor_width, 1e-3 * tol)) break;
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if ((flo < 0.0) == (fm < 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace

RootList find_roots(const std::function<double(double)>& f, double a, double b,
                    int n_scan, double tol) {
    if (!(a < b)) throw std::invalid_argument("find_roots: require a < b");
    if (n_scan < 2) throw std::invalid_argument("find_roots: require n_scan >= 2");
    RootList result;
    const double h = (b - a) / n_scan;
    double x_prev = a;
    double f_prev = f(a);
    auto push = [&](double root) {
        if (!result.roots.empty() &&
            root - result.roots.back() < std::max(4e-15 * std::abs(root), 1e-300))
            return;
        result.roots.push_back(root);
        result.residuals.push_back(std::abs(f(root)));
    };
    if (f_prev == 0.0) push(a);
    for (int i = 1; i <= n_scan; ++i) {
        const double x = (i == n_scan) ? b : a + i * h;
        const double fx = f(x);
        if (fx == 0.0) {
            push(x);
        } else if (f_prev != 0.0 && (f_prev < 0.0) != (fx < 0.0)) {
            push(bisect(f, x_prev, x, f_prev, tol));
        }
        x_prev = x;
        f_prev = fx;
    }
    return result;
}

ScalarMinimum golden_section_min(const std::function<double(double)>& f,
                                 double a, double b, double x_tol) {
    if (!(a < b)) throw std::invalid_argument("golden_section_min: require a < b");
    constexpr double inv_phi = 0.6180339887498949;
    double x1 = b - inv_phi * (b - a);
    double x2 = a + inv_phi * (b - a);
    double f1 = f(x1);
    double f2 = f(x2);
    while (b - a > x_tol) {
        if (f1 <= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2);
        }
    }
    const double xm = 0.5 * (a + b);
    const double fm = f(xm);
    ScalarMinimum best{xm, fm};
    if (f1 < best.value) best = {x1, f1};
    if (f2 < best.value) best = {x2, f2};
    return best;
}

}  // namespace pompeiu
