#include "pompeiu/geometry.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>

namespace pompeiu {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct LocalFrame {
    Vec3 radial, polar, azimuthal;  // r^, theta^, phi^
};

LocalFrame local_frame(double ct, double st, double cp, double sp) {
    return {{st * cp, st * sp, ct}, {ct * cp, ct * sp, -st}, {-sp, cp, 0.0}};
}

int max_star_degree(const StarShape& s) {
    int lmax = 0;
    for (const auto& t : s.terms) lmax = std::max(lmax, t.l);
    return lmax;
}

struct StarLocal {
    double rho, rho_theta, rho_phi;
};

StarLocal star_local(const StarShape& s, HarmonicTable& table, const Vec3& dir,
                     bool with_derivatives) {
    if (with_derivatives)
        table.evaluate_with_derivatives(dir);
    else
        table.evaluate(dir);
    double f = 1.0, ft = 0.0, fp = 0.0;
    for (const auto& t : s.terms) {
        f += t.amplitude * table.value(t.l, t.m);
        if (with_derivatives) {
            ft += t.amplitude * table.theta_derivative(t.l, t.m);
            fp += t.amplitude * table.phi_derivative(t.l, t.m);
        }
    }
    return {s.base_radius * f, s.base_radius * ft, s.base_radius * fp};
}

Vec3 to_world(const Ellipsoid& e, const Vec3& body) {
    return e.center + body.x * e.axes[0] + body.y * e.axes[1] + body.z * e.axes[2];
}

Vec3 world_dir_to_body(const Ellipsoid& e, const Vec3& d) {
    return {dot(e.axes[0], d), dot(e.axes[1], d), dot(e.axes[2], d)};
}

Vec3 body_dir_to_world(const Ellipsoid& e, const Vec3& d) {
    return d.x * e.axes[0] + d.y * e.axes[1] + d.z * e.axes[2];
}

ParamPoint param_point_ball(const Ball& b, double theta, double phi) {
    const LocalFrame f = local_frame(std::cos(theta), std::sin(theta), std::cos(phi), std::sin(phi));
    ParamPoint pp;
    pp.p = theta;
    pp.q = phi;
    pp.point = b.center + b.radius * f.radial;
    pp.s_p = b.radius * f.polar;
    pp.s_q = b.radius * std::sin(theta) * f.azimuthal;
    pp.normal = f.radial;
    return pp;
}

ParamPoint param_point_ellipsoid(const Ellipsoid& e, double theta, double phi) {
    const double ct = std::cos(theta), st = std::sin(theta);
    const double cp = std::cos(phi), sp = std::sin(phi);
    const Vec3 u{st * cp, st * sp, ct};
    const Vec3 u_theta{ct * cp, ct * sp, -st};
    const Vec3 u_phi{-st * sp, st * cp, 0.0};
    const Vec3 a = e.semi_axes;
    ParamPoint pp;
    pp.p = theta;
    pp.q = phi;
    pp.point = to_world(e, {a.x * u.x, a.y * u.y, a.z * u.z});
    pp.s_p = body_dir_to_world(e, {a.x * u_theta.x, a.y * u_theta.y, a.z * u_theta.z});
    pp.s_q = body_dir_to_world(e, {a.x * u_phi.x, a.y * u_phi.y, a.z * u_phi.z});
    pp.normal = normalized(body_dir_to_world(e, {u.x / a.x, u.y / a.y, u.z / a.z}));
    return pp;
}

ParamPoint param_point_star(const StarShape& s, HarmonicTable& table, double theta, double phi) {
    const double ct = std::cos(theta), st = std::sin(theta);
    const double cp = std::cos(phi), sp = std::sin(phi);
    const LocalFrame f = local_frame(ct, st, cp, sp);
    const StarLocal loc = star_local(s, table, f.radial, true);
    ParamPoint pp;
    pp.p = theta;
    pp.q = phi;
    pp.point = s.center + loc.rho * f.radial;
    pp.s_p = loc.rho_theta * f.radial + loc.rho * f.polar;
    pp.s_q = loc.rho_phi * f.radial + loc.rho * st * f.azimuthal;
    pp.normal = normalized(loc.rho * f.radial - loc.rho_theta * f.polar -
                           (loc.rho_phi / st) * f.azimuthal);
    return pp;
}

double triangle_area(const Vec3& a, const Vec3& b, const Vec3& c) {
    return 0.5 * norm(cross(b - a, c - a));
}

double mesh_signed_volume(const TriMesh& mesh) {
    double v = 0.0;
    for (const auto& f : mesh.faces) {
        const Vec3& a = mesh.vertices[f[0]];
        const Vec3& b = mesh.vertices[f[1]];
        const Vec3& c = mesh.vertices[f[2]];
        v += dot(a, cross(b, c)) / 6.0;
    }
    return v;
}

// Dense positivity scan of the star radial factor.
double star_min_radial_factor(const StarShape& s) {
    HarmonicTable table(max_star_degree(s));
    const SphericalGrid grid = sphere_grid(128);
    double lo = std::numeric_limits<double>::infinity();
    auto probe = [&](const Vec3& dir) {
        table.evaluate(dir);
        double f = 1.0;
        for (const auto& t : s.terms) f += t.amplitude * table.value(t.l, t.m);
        lo = std::min(lo, f);
    };
    for (const auto& dir : grid.directions) probe(dir);
    probe({0, 0, 1});
    probe({0, 0, -1});
    return lo;
}

}  // namespace

void validate_mesh(const TriMesh& mesh) {
    if (mesh.vertices.size() < 4 || mesh.faces.size() < 4)
        throw std::invalid_argument("mesh: too few vertices or faces for a closed surface");
    const int nv = static_cast<int>(mesh.vertices.size());
    std::map<std::pair<int, int>, int> directed;
    for (const auto& f : mesh.faces) {
        for (int e = 0; e < 3; ++e) {
            const int a = f[e], b = f[(e + 1) % 3];
            if (a < 0 || a >= nv || b < 0 || b >= nv)
                throw std::invalid_argument("mesh: face references vertex out of range");
            if (a == b) throw std::invalid_argument("mesh: degenerate face with repeated vertex");
            if (++directed[{a, b}] > 1) {
                std::ostringstream msg;
                msg << "mesh: directed edge (" << a << "," << b
                    << ") appears twice; faces are inconsistently oriented or non-manifold";
                throw std::invalid_argument(msg.str());
            }
        }
    }
    for (const auto& [edge, count] : directed) {
        if (directed.find({edge.second, edge.first}) == directed.end()) {
            std::ostringstream msg;
            msg << "mesh: edge (" << edge.first << "," << edge.second
                << ") has no oppositely oriented twin; surface is not closed";
            throw std::invalid_argument(msg.str());
        }
    }
    if (mesh_signed_volume(mesh) <= 0.0)
        throw std::invalid_argument("mesh: negative signed volume; faces are oriented inward");
}

void validate_shape(const Shape& shape) {
    std::visit(
        [](const auto& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Ball>) {
                if (!(s.radius > 0.0)) throw std::invalid_argument("ball: radius must be positive");
            } else if constexpr (std::is_same_v<T, Ellipsoid>) {
                if (!(s.semi_axes.x > 0.0 && s.semi_axes.y > 0.0 && s.semi_axes.z > 0.0))
                    throw std::invalid_argument("ellipsoid: semi-axes must be positive");
                for (int i = 0; i < 3; ++i) {
                    if (std::abs(norm(s.axes[i]) - 1.0) > 1e-10)
                        throw std::invalid_argument("ellipsoid: frame axes must be unit vectors");
                    if (std::abs(dot(s.axes[i], s.axes[(i + 1) % 3])) > 1e-10)
                        throw std::invalid_argument("ellipsoid: frame axes must be orthogonal");
                }
            } else if constexpr (std::is_same_v<T, StarShape>) {
                if (!(s.base_radius > 0.0))
                    throw std::invalid_argument("star shape: base radius must be positive");
                for (const auto& t : s.terms)
                    if (t.l < 0 || std::abs(t.m) > t.l)
                        throw std::invalid_argument("star shape: term requires l >= 0 and |m| <= l");
                if (star_min_radial_factor(s) <= 0.0)
                    throw std::invalid_argument("star shape: radial function is not positive everywhere");
            } else {
                validate_mesh(s);
            }
        },
        shape);
}

ParamPoint parametric_point(const Shape& shape, double theta, double phi) {
    if (const auto* b = std::get_if<Ball>(&shape)) return param_point_ball(*b, theta, phi);
    if (const auto* e = std::get_if<Ellipsoid>(&shape)) return param_point_ellipsoid(*e, theta, phi);
    if (const auto* s = std::get_if<StarShape>(&shape)) {
        HarmonicTable table(max_star_degree(*s));
        return param_point_star(*s, table, theta, phi);
    }
    throw std::invalid_argument("parametric_point: shape is not parametric");
}

std::vector<SurfaceSample> surface_samples(const Shape& shape, const Resolution& res) {
    validate_shape(shape);
    std::vector<SurfaceSample> out;

    if (const auto* mesh = std::get_if<TriMesh>(&shape)) {
        // Per-triangle Gauss points through the Duffy collapse of a 3x3
        // tensor rule; resolves e^{i xi.x} up to |xi| ~ 10 on the fixtures.
        const Quadrature1D g = gauss_legendre(3);
        out.reserve(mesh->faces.size() * 9);
        for (const auto& f : mesh->faces) {
            const Vec3& a = mesh->vertices[f[0]];
            const Vec3& b = mesh->vertices[f[1]];
            const Vec3& c = mesh->vertices[f[2]];
            const Vec3 n = cross(b - a, c - a);
            const double two_area = norm(n);
            if (two_area <= 0.0) continue;
            const Vec3 unit_n = n / two_area;
            for (std::size_t iu = 0; iu < g.nodes.size(); ++iu) {
                const double u = 0.5 * (1.0 + g.nodes[iu]);
                for (std::size_t iv = 0; iv < g.nodes.size(); ++iv) {
                    const double v = 0.5 * (1.0 + g.nodes[iv]);
                    const double xi1 = u;
                    const double xi2 = v * (1.0 - u);
                    const Vec3 p = a + xi1 * (b - a) + xi2 * (c - a);
                    const double w = two_area * 0.25 * g.weights[iu] * g.weights[iv] * (1.0 - u);
                    out.push_back({p, unit_n, w});
                }
            }
        }
        return out;
    }

    const ProductGridAngles angles = product_grid_angles(res.grid_degree);
    const double wphi = kTwoPi / angles.n_phi;
    const int nt = static_cast<int>(angles.polar.nodes.size());
    out.reserve(static_cast<std::size_t>(nt) * angles.n_phi);
    HarmonicTable table(std::holds_alternative<StarShape>(shape)
                            ? max_star_degree(std::get<StarShape>(shape))
                            : 0);
    for (int i = 0; i < nt; ++i) {
        const double theta = std::acos(angles.polar.nodes[i]);
        const double st = std::sin(theta);
        for (int j = 0; j < angles.n_phi; ++j) {
            const double phi = kTwoPi * j / angles.n_phi;
            ParamPoint pp;
            if (const auto* b = std::get_if<Ball>(&shape))
                pp = param_point_ball(*b, theta, phi);
            else if (const auto* e = std::get_if<Ellipsoid>(&shape))
                pp = param_point_ellipsoid(*e, theta, phi);
            else
                pp = param_point_star(std::get<StarShape>(shape), table, theta, phi);
            // ds = |s_theta x s_phi| dtheta dphi = (|...|/sin) dOmega
            const double jac = norm(cross(pp.s_p, pp.s_q)) / st;
            out.push_back({pp.point, pp.normal, angles.polar.weights[i] * wphi * jac});
        }
    }
    return out;
}

std::vector<VolumeSample> volume_samples(const Shape& shape, const Resolution& res) {
    validate_shape(shape);
    std::vector<VolumeSample> out;

    if (const auto* mesh = std::get_if<TriMesh>(&shape)) {
        Vec3 centroid{};
        for (const auto& v : mesh->vertices) centroid += v;
        centroid = centroid / static_cast<double>(mesh->vertices.size());
        // Centroid fan into tetrahedra, 3x3x3 Duffy-Gauss points per tet.
        const Quadrature1D g = gauss_legendre(3);
        const std::size_t ng = g.nodes.size();
        for (const auto& f : mesh->faces) {
            const Vec3 v0 = centroid;
            const Vec3 e1 = mesh->vertices[f[0]] - v0;
            const Vec3 e2 = mesh->vertices[f[1]] - v0;
            const Vec3 e3 = mesh->vertices[f[2]] - v0;
            const double jac = dot(e1, cross(e2, e3));  // 6 * volume
            if (jac <= 0.0)
                throw std::invalid_argument(
                    "mesh: centroid fan produced a flipped tetrahedron; volume sampling "
                    "requires a mesh star-shaped about its centroid");
            for (std::size_t iu = 0; iu < ng; ++iu) {
                const double u = 0.5 * (1.0 + g.nodes[iu]);
                for (std::size_t iv = 0; iv < ng; ++iv) {
                    const double v = 0.5 * (1.0 + g.nodes[iv]);
                    for (std::size_t iw = 0; iw < ng; ++iw) {
                        const double w = 0.5 * (1.0 + g.nodes[iw]);
                        const double xi1 = u;
                        const double xi2 = v * (1.0 - u);
                        const double xi3 = w * (1.0 - u) * (1.0 - v);
                        const double duffy = (1.0 - u) * (1.0 - u) * (1.0 - v);
                        const double weight = jac * 0.125 * g.weights[iu] * g.weights[iv] *
                                              g.weights[iw] * duffy;
                        out.push_back({v0 + xi1 * e1 + xi2 * e2 + xi3 * e3, weight});
                    }
                }
            }
        }
        return out;
    }

    const ProductGridAngles angles = product_grid_angles(res.grid_degree);
    const Quadrature1D radial = gauss_legendre(res.radial_order);
    const double wphi = kTwoPi / angles.n_phi;
    const int nt = static_cast<int>(angles.polar.nodes.size());
    const Vec3 center = shape_center(shape);
    HarmonicTable table(std::holds_alternative<StarShape>(shape)
                            ? max_star_degree(std::get<StarShape>(shape))
                            : 0);
    for (int i = 0; i < nt; ++i) {
        const double ct = angles.polar.nodes[i];
        const double st = std::sqrt(std::max(0.0, 1.0 - ct * ct));
        for (int j = 0; j < angles.n_phi; ++j) {
            const double phi = kTwoPi * j / angles.n_phi;
            const Vec3 dir{st * std::cos(phi), st * std::sin(phi), ct};
            double rho;
            if (const auto* b = std::get_if<Ball>(&shape)) {
                rho = b->radius;
            } else if (const auto* e = std::get_if<Ellipsoid>(&shape)) {
                const Vec3 d = world_dir_to_body(*e, dir);
                rho = 1.0 / std::sqrt(d.x * d.x / (e->semi_axes.x * e->semi_axes.x) +
                                      d.y * d.y / (e->semi_axes.y * e->semi_axes.y) +
                                      d.z * d.z / (e->semi_axes.z * e->semi_axes.z));
            } else {
                rho = star_local(std::get<StarShape>(shape), table, dir, false).rho;
            }
            const double w_dir = angles.polar.weights[i] * wphi;
            for (std::size_t t = 0; t < radial.nodes.size(); ++t) {
                const double r = 0.5 * rho * (1.0 + radial.nodes[t]);
                const double w = w_dir * radial.weights[t] * 0.5 * rho * r * r;
                out.push_back({center + r * dir, w});
            }
        }
    }
    return out;
}

std::vector<Vec3> cross_field(std::span<const SurfaceSample> samples) {
    std::vector<Vec3> out;
    out.reserve(samples.size());
    for (const auto& s : samples) out.push_back(cross(s.point, s.normal));
    return out;
}

SphericityReport sphericity_check(const Shape& shape, const Resolution& res) {
    if (!shape_is_parametric(shape))
        throw std::invalid_argument("sphericity_check: parametric shape required");
    validate_shape(shape);
    const ProductGridAngles angles = product_grid_angles(res.grid_degree);
    const double wphi = kTwoPi / angles.n_phi;
    SphericityReport report;
    std::vector<double> r2;
    std::vector<double> w;
    HarmonicTable table(std::holds_alternative<StarShape>(shape)
                            ? max_star_degree(std::get<StarShape>(shape))
                            : 0);
    for (std::size_t i = 0; i < angles.polar.nodes.size(); ++i) {
        const double theta = std::acos(angles.polar.nodes[i]);
        for (int j = 0; j < angles.n_phi; ++j) {
            const double phi = kTwoPi * j / angles.n_phi;
            ParamPoint pp;
            if (const auto* b = std::get_if<Ball>(&shape))
                pp = param_point_ball(*b, theta, phi);
            else if (const auto* e = std::get_if<Ellipsoid>(&shape))
                pp = param_point_ellipsoid(*e, theta, phi);
            else
                pp = param_point_star(std::get<StarShape>(shape), table, theta, phi);
            report.max_s_dot_sp = std::max(report.max_s_dot_sp, std::abs(dot(pp.point, pp.s_p)));
            report.max_s_dot_sq = std::max(report.max_s_dot_sq, std::abs(dot(pp.point, pp.s_q)));
            r2.push_back(norm_squared(pp.point));
            w.push_back(angles.polar.weights[i] * wphi * norm(cross(pp.s_p, pp.s_q)) /
                        std::sin(theta));
        }
    }
    double wsum = 0.0, mean = 0.0;
    for (std::size_t i = 0; i < r2.size(); ++i) {
        wsum += w[i];
        mean += w[i] * r2[i];
    }
    mean /= wsum;
    double var = 0.0;
    for (std::size_t i = 0; i < r2.size(); ++i) var += w[i] * (r2[i] - mean) * (r2[i] - mean);
    report.radius_sq_variance = var / wsum;
    return report;
}

Shape shift_origin(const Shape& shape, const Vec3& a) {
    Shape out = shape;
    std::visit(
        [&](auto& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, TriMesh>) {
                for (auto& v : s.vertices) v += a;
            } else {
                s.center += a;
            }
        },
        out);
    return out;
}

SurfaceSample surface_point_toward(const Shape& shape, const Vec3& direction) {
    const Vec3 dir = normalized(direction);
    if (const auto* b = std::get_if<Ball>(&shape))
        return {b->center + b->radius * dir, dir, 1.0};
    if (const auto* e = std::get_if<Ellipsoid>(&shape)) {
        const Vec3 d = world_dir_to_body(*e, dir);
        const Vec3 a = e->semi_axes;
        const double t = 1.0 / std::sqrt(d.x * d.x / (a.x * a.x) + d.y * d.y / (a.y * a.y) +
                                         d.z * d.z / (a.z * a.z));
        const Vec3 body{t * d.x, t * d.y, t * d.z};
        const Vec3 n = body_dir_to_world(*e, {body.x / (a.x * a.x), body.y / (a.y * a.y),
                                              body.z / (a.z * a.z)});
        return {e->center + t * dir, normalized(n), 1.0};
    }
    if (const auto* s = std::get_if<StarShape>(&shape)) {
        HarmonicTable table(max_star_degree(*s));
        const StarLocal loc = star_local(*s, table, dir, true);
        const double ct = table.cos_theta();
        const double st = std::max(table.sin_theta(), 1e-12);
        const LocalFrame f = local_frame(ct, st, table.cos_phi(), table.sin_phi());
        const Vec3 n = normalized(loc.rho * f.radial - loc.rho_theta * f.polar -
                                  (loc.rho_phi / st) * f.azimuthal);
        return {s->center + loc.rho * dir, n, 1.0};
    }
    throw std::invalid_argument("surface_point_toward: parametric shape required");
}

std::vector<SurfaceSample> silhouette_points(const Shape& shape, const Vec3& p,
                                             int n_meridians, double tol) {
    if (!shape_is_parametric(shape))
        throw std::invalid_argument("silhouette_points: parametric shape required");
    if (norm(p) < 1e-14) throw std::invalid_argument("silhouette_points: direction must be nonzero");
    const Vec3 pole = normalized(p);
    const Vec3 seed = std::abs(pole.x) < 0.9 ? Vec3{1, 0, 0} : Vec3{0, 1, 0};
    const Vec3 e1 = normalized(cross(pole, seed));
    const Vec3 e2 = cross(pole, e1);

    std::vector<SurfaceSample> out;
    for (int j = 0; j < n_meridians; ++j) {
        const double phi = kTwoPi * j / n_meridians;
        const Vec3 m1 = std::cos(phi) * e1 + std::sin(phi) * e2;
        auto f = [&](double theta) {
            const Vec3 dir = std::cos(theta) * pole + std::sin(theta) * m1;
            return dot(surface_point_toward(shape, dir).normal, pole);
        };
        const RootList roots = find_roots(f, 1e-3, std::numbers::pi - 1e-3, 64);
        for (double theta : roots.roots) {
            const Vec3 dir = std::cos(theta) * pole + std::sin(theta) * m1;
            SurfaceSample s = surface_point_toward(shape, dir);
            if (std::abs(dot(s.normal, pole)) < tol) out.push_back(s);
        }
    }
    return out;
}

namespace {

// Token reader that skips blanks and '#' comments, tracking line numbers.
class OffTokenizer {
public:
    explicit OffTokenizer(std::istream& in) : in_(in) {}

    std::string next(const char* what) {
        std::string tok;
        while (true) {
            if (pos_ >= line_.size()) {
                if (!std::getline(in_, line_)) {
                    std::ostringstream msg;
                    msg << "OFF parse error: unexpected end of file while reading " << what;
                    throw std::runtime_error(msg.str());
                }
                ++line_no_;
                pos_ = 0;
                continue;
            }
            const char c = line_[pos_];
            if (c == '#') {
                pos_ = line_.size();
                continue;
            }
            if (std::isspace(static_cast<unsigned char>(c))) {
                ++pos_;
                continue;
            }
            break;
        }
        while (pos_ < line_.size() && !std::isspace(static_cast<unsigned char>(line_[pos_])) &&
               line_[pos_] != '#')
            tok.push_back(line_[pos_++]);
        return tok;
    }

    double next_double(const char* what) {
        const std::string tok = next(what);
        try {
            std::size_t used = 0;
            const double v = std::stod(tok, &used);
            if (used != tok.size()) throw std::invalid_argument(tok);
            return v;
        } catch (const std::exception&) {
            throw std::runtime_error(parse_msg(what, tok));
        }
    }

    long next_int(const char* what) {
        const std::string tok = next(what);
        try {
            std::size_t used = 0;
            const long v = std::stol(tok, &used);
            if (used != tok.size()) throw std::invalid_argument(tok);
            return v;
        } catch (const std::exception&) {
            throw std::runtime_error(parse_msg(what, tok));
        }
    }

    int line_number() const { return line_no_; }

private:
    std::string parse_msg(const char* what, const std::string& tok) const {
        std::ostringstream msg;
        msg << "OFF parse error at line " << line_no_ << ": bad " << what << " '" << tok << "'";
        return msg.str();
    }

    std::istream& in_;
    std::string line_;
    std::size_t pos_ = 0;
    int line_no_ = 0;
};

}  // namespace

TriMesh load_mesh(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_mesh: cannot open '" + path.string() + "'");
    OffTokenizer tok(in);
    const std::string header = tok.next("header");
    if (header != "OFF")
        throw std::runtime_error("OFF parse error: expected 'OFF' header, got '" + header + "'");
    const long nv = tok.next_int("vertex count");
    const long nf = tok.next_int("face count");
    tok.next_int("edge count");  // present in the format, unused
    if (nv <= 0 || nf <= 0) throw std::runtime_error("OFF parse error: non-positive counts");

    TriMesh mesh;
    mesh.vertices.reserve(nv);
    for (long i = 0; i < nv; ++i) {
        const double x = tok.next_double("vertex coordinate");
        const double y = tok.next_double("vertex coordinate");
        const double z = tok.next_double("vertex coordinate");
        mesh.vertices.push_back({x, y, z});
    }
    mesh.faces.reserve(nf);
    for (long i = 0; i < nf; ++i) {
        const long count = tok.next_int("face vertex count");
        if (count != 3) {
            std::ostringstream msg;
            msg << "OFF parse error at line " << tok.line_number()
                << ": only triangles supported, face has " << count << " vertices";
            throw std::runtime_error(msg.str());
        }
        std::array<int, 3> f{};
        for (int k = 0; k < 3; ++k) {
            const long idx = tok.next_int("face vertex index");
            if (idx < 0 || idx >= nv) {
                std::ostringstream msg;
                msg << "OFF parse error at line " << tok.line_number() << ": vertex index " << idx
                    << " out of range";
                throw std::runtime_error(msg.str());
            }
            f[k] = static_cast<int>(idx);
        }
        mesh.faces.push_back(f);
    }
    validate_mesh(mesh);
    return mesh;
}

Vec3 shape_center(const Shape& shape) {
    if (const auto* b = std::get_if<Ball>(&shape)) return b->center;
    if (const auto* e = std::get_if<Ellipsoid>(&shape)) return e->center;
    if (const auto* s = std::get_if<StarShape>(&shape)) return s->center;
    const auto& mesh = std::get<TriMesh>(shape);
    Vec3 c{};
    for (const auto& v : mesh.vertices) c += v;
    return c / static_cast<double>(mesh.vertices.size());
}

double bounding_radius(const Shape& shape) {
    if (const auto* b = std::get_if<Ball>(&shape)) return b->radius;
    if (const auto* e = std::get_if<Ellipsoid>(&shape))
        return std::max({e->semi_axes.x, e->semi_axes.y, e->semi_axes.z});
    if (const auto* s = std::get_if<StarShape>(&shape)) {
        HarmonicTable table(max_star_degree(*s));
        const SphericalGrid grid = sphere_grid(128);
        double hi = 0.0;
        for (const auto& dir : grid.directions)
            hi = std::max(hi, star_local(*s, table, dir, false).rho);
        return hi * (1.0 + 1e-6);
    }
    const auto& mesh = std::get<TriMesh>(shape);
    const Vec3 c = shape_center(shape);
    double hi = 0.0;
    for (const auto& v : mesh.vertices) hi = std::max(hi, norm(v - c));
    return hi;
}

double shape_volume(const Shape& shape, const Resolution& res) {
    if (const auto* b = std::get_if<Ball>(&shape))
        return 4.0 / 3.0 * std::numbers::pi * b->radius * b->radius * b->radius;
    if (const auto* e = std::get_if<Ellipsoid>(&shape))
        return 4.0 / 3.0 * std::numbers::pi * e->semi_axes.x * e->semi_axes.y * e->semi_axes.z;
    if (std::holds_alternative<TriMesh>(shape)) return mesh_signed_volume(std::get<TriMesh>(shape));
    double v = 0.0;
    for (const auto& s : volume_samples(shape, res)) v += s.weight;
    return v;
}

bool shape_is_parametric(const Shape& shape) { return !std::holds_alternative<TriMesh>(shape); }

const char* shape_kind(const Shape& shape) {
    if (std::holds_alternative<Ball>(shape)) return "ball";
    if (std::holds_alternative<Ellipsoid>(shape)) return "ellipsoid";
    if (std::holds_alternative<StarShape>(shape)) return "star";
    return "mesh";
}

}  // namespace pompeiu
