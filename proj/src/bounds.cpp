#include "wachspress/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Dense>

#include "wachspress/basis.hpp"
#include "wachspress/errors.hpp"
#include "wachspress/format.hpp"
#include "wachspress/sampling.hpp"

namespace wachspress {

namespace {

constexpr double kShapeTolerance = 1e-9;
constexpr double kProbeDistance = 1e-6;

double cross2(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

bool close_rel(double a, double b, double scale) {
    return std::abs(a - b) <= kShapeTolerance * scale;
}

bool is_rectangle(const Polygon& p) {
    if (p.size() != 4) return false;
    for (std::size_t i = 0; i < 4; ++i) {
        const Vec2 a = p.vertices[(i + 1) % 4] - p.vertices[i];
        const Vec2 b = p.vertices[(i + 3) % 4] - p.vertices[i];
        if (std::abs(a.dot(b)) > kShapeTolerance * a.norm() * b.norm()) return false;
    }
    return true;
}

bool is_regular(const Polygon& p) {
    const Vec2 c = vertex_centroid(p);
    const double edge = (p.vertices[1] - p.vertices[0]).norm();
    const double radius = (p.vertices[0] - c).norm();
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (!close_rel((p.vertices[(i + 1) % p.size()] - p.vertices[i]).norm(), edge, edge)) return false;
        if (!close_rel((p.vertices[i] - c).norm(), radius, radius)) return false;
    }
    return true;
}

// Side lengths if p is a box (possibly rotated), else empty.
std::vector<double> box_sides(const Polyhedron& p) {
    if (p.size() != 8 || p.faces.size() != 6) return {};
    for (const Loop& f : p.faces)
        if (f.size() != 4) return {};
    const auto nb = vertex_neighbors(p, 0);
    if (nb.size() != 3) return {};
    std::array<Vec3, 3> e;
    for (int i = 0; i < 3; ++i) e[i] = p.vertices[nb[i]] - p.vertices[0];
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j)
            if (std::abs(e[i].dot(e[j])) > kShapeTolerance * e[i].norm() * e[j].norm()) return {};
    const double diam = diameter(p);
    for (const Vec3& v : p.vertices) {
        bool found = false;
        for (int mask = 0; mask < 8 && !found; ++mask) {
            Vec3 corner = p.vertices[0];
            for (int i = 0; i < 3; ++i)
                if (mask & (1 << i)) corner += e[i];
            found = (corner - v).norm() <= kShapeTolerance * diam;
        }
        if (!found) return {};
    }
    return {e[0].norm(), e[1].norm(), e[2].norm()};
}

void fill_general(BoundReport& r) {
    r.upper_bound_general = bound_general(r.dimension, r.h_star);
    r.lower_bound_general = 1.0 / r.h_star;
}

}  // namespace

std::string to_string(ShapeTag tag) {
    switch (tag) {
        case ShapeTag::simplex: return "simplex";
        case ShapeTag::hyper_rectangle: return "hyper-rectangle";
        case ShapeTag::regular_ngon: return "regular-n-gon";
        case ShapeTag::polygon_angle: return "polygon-angle";
    }
    return "unknown";
}

double lambda_at(const Polygon& p, const Vec2& x) {
    const auto basis = wachspress_2d(p, x);
    double sum = 0.0;
    for (const Vec2& g : basis.dphi) sum += g.norm();
    return sum;
}

double lambda_at(const Polyhedron& p, const Vec3& x) {
    const auto basis = wachspress_3d(p, x);
    double sum = 0.0;
    for (const Vec3& g : basis.dphi) sum += g.norm();
    return sum;
}

double lambda_at_vertex_2d(const Polygon& p, Index i) {
    const std::size_t n = p.size();
    if (i >= n) throw ShapeError("vertex index out of range");
    const Vec2 e_prev = p.vertices[i] - p.vertices[(i + n - 1) % n];
    const Vec2 e_next = p.vertices[(i + 1) % n] - p.vertices[i];
    const double cross = cross2(e_prev, e_next);
    if (!(cross > 0.0))
        throw DegenerateGeometry("edges at vertex " + std::to_string(i) + " are not strictly convex");
    return (e_next.norm() + (e_next + e_prev).norm() + e_prev.norm()) / cross;
}

double lambda_at_vertex_3d(const Polyhedron& p, Index v) {
    if (v >= p.size()) throw ShapeError("vertex index out of range");
    std::size_t valence = 0;
    for (const Loop& f : p.faces)
        if (std::find(f.begin(), f.end(), v) != f.end()) ++valence;
    const auto nb = vertex_neighbors(p, v);
    if (valence != 3 || nb.size() != 3) throw NonSimpleVertex(v, valence);

    const Vec3 e1 = p.vertices[nb[0]] - p.vertices[v];
    const Vec3 e2 = p.vertices[nb[1]] - p.vertices[v];
    const Vec3 e3 = p.vertices[nb[2]] - p.vertices[v];
    const double det = e1.dot(e2.cross(e3));
    if (!(std::abs(det) > 0.0)) throw DegenerateGeometry("vertex edges are coplanar");
    const Vec3 g1 = e2.cross(e3) / det;
    const Vec3 g2 = e3.cross(e1) / det;
    const Vec3 g3 = e1.cross(e2) / det;
    const Vec3 gv = -(g1 + g2 + g3);
    return gv.norm() + g1.norm() + g2.norm() + g3.norm();
}

BoundReport estimate_Lambda(const Polygon& p, std::size_t budget, std::uint64_t seed) {
    BoundReport r;
    r.dimension = 2;
    r.h_star = h_star(p);  // throws NotConvex
    fill_general(r);

    const double diam = diameter(p);
    const Vec2 c = vertex_centroid(p);
    std::vector<Vec2> points = interior_samples(p, budget, seed);
    for (const Vec2& v : p.vertices) points.push_back(v + kProbeDistance * diam * (c - v).normalized());
    r.samples = points.size();
    for (const Vec2& x : points) r.lambda_max_sampled = std::max(r.lambda_max_sampled, lambda_at(p, x));
    for (Index i = 0; i < p.size(); ++i)
        r.lambda_vertex_max = std::max(r.lambda_vertex_max, lambda_at_vertex_2d(p, i));

    if (p.size() == 3) {
        r.special_bound = SpecialBound{ShapeTag::simplex, 1.0 / r.h_star, bound_simplex(2, r.h_star), {}};
    } else if (is_rectangle(p)) {
        const double sides[] = {(p.vertices[1] - p.vertices[0]).norm(), (p.vertices[2] - p.vertices[1]).norm()};
        const auto exact = bound_hyper_rectangle(sides);
        r.special_bound = SpecialBound{ShapeTag::hyper_rectangle, exact.lambda, exact.lambda, {}};
    } else if (is_regular(p)) {
        const double cos_pi_n = std::cos(std::numbers::pi / static_cast<double>(p.size()));
        r.special_bound = SpecialBound{ShapeTag::regular_ngon, 2.0 * (1.0 + cos_pi_n) / r.h_star,
                                       4.0 / r.h_star, {}};
    } else {
        const auto angle = polygon_angle_bound(p);
        const double lower = angle.min_angle >= std::numbers::pi / 2 ? 2.0 / r.h_star : 1.0 / r.h_star;
        r.special_bound = SpecialBound{ShapeTag::polygon_angle, lower, {}, angle.bound};
    }
    return r;
}

BoundReport estimate_Lambda(const Polyhedron& p, std::size_t budget, std::uint64_t seed) {
    BoundReport r;
    r.dimension = 3;
    r.h_star = h_star(p);  // throws NotConvex
    fill_general(r);

    const double diam = diameter(p);
    const Vec3 c = vertex_centroid(p);
    std::vector<Vec3> points = interior_samples(p, budget, seed);
    for (const Vec3& v : p.vertices) points.push_back(v + kProbeDistance * diam * (c - v).normalized());
    r.samples = points.size();
    const auto planes = face_planes(p);
    for (const Vec3& x : points) {
        const auto basis = wachspress_3d(p, planes, x);
        double lambda = 0.0;
        for (const Vec3& g : basis.dphi) lambda += g.norm();
        r.lambda_max_sampled = std::max(r.lambda_max_sampled, lambda);
    }
    for (Index v = 0; v < p.size(); ++v) {
        try {
            r.lambda_vertex_max = std::max(r.lambda_vertex_max, lambda_at_vertex_3d(p, v));
        } catch (const NonSimpleVertex&) {
            r.non_simple_vertices.push_back(v);
        }
    }

    if (p.size() == 4) {
        r.special_bound = SpecialBound{ShapeTag::simplex, 1.0 / r.h_star, bound_simplex(3, r.h_star), {}};
    } else if (const auto sides = box_sides(p); !sides.empty()) {
        const auto exact = bound_hyper_rectangle(sides);
        r.special_bound = SpecialBound{ShapeTag::hyper_rectangle, exact.lambda, exact.lambda, {}};
    }
    return r;
}

std::vector<std::pair<std::string, std::string>> to_key_values(const BoundReport& r) {
    std::vector<std::pair<std::string, std::string>> kv = {
        {"dimension", std::to_string(r.dimension)},
        {"samples", std::to_string(r.samples)},
        {"h_star", format_double(r.h_star)},
        {"lambda_max_sampled", format_double(r.lambda_max_sampled)},
        {"lambda_vertex_max", format_double(r.lambda_vertex_max)},
        {"lower_bound_general", format_double(r.lower_bound_general)},
        {"upper_bound_general", format_double(r.upper_bound_general)},
    };
    if (r.special_bound) {
        const SpecialBound& s = *r.special_bound;
        kv.emplace_back("special_shape", to_string(s.tag));
        if (s.lambda_lower) kv.emplace_back("special_lambda_lower", format_double(*s.lambda_lower));
        if (s.lambda_upper) kv.emplace_back("special_lambda_upper", format_double(*s.lambda_upper));
        if (s.gradient_upper) kv.emplace_back("special_gradient_upper", format_double(*s.gradient_upper));
    }
    std::string non_simple;
    for (Index v : r.non_simple_vertices) {
        if (!non_simple.empty()) non_simple += ' ';
        non_simple += std::to_string(v);
    }
    kv.emplace_back("non_simple_vertices", non_simple);
    return kv;
}

double bound_general(int d, double h_star) {
    if (d < 2) throw DomainError("dimension must be at least 2");
    if (!(h_star > 0.0)) throw DomainError("h_star must be positive");
    return 2.0 * d / h_star;
}

double bound_simplex(int d, double h_star) {
    if (d < 1) throw DomainError("dimension must be at least 1");
    if (!(h_star > 0.0)) throw DomainError("h_star must be positive");
    return (d + 1.0) / h_star;
}

HyperRectangleBound bound_hyper_rectangle(std::span<const double> sides) {
    if (sides.empty()) throw DomainError("need at least one side length");
    double inv_sq = 0.0;
    double inv = 0.0;
    double shortest = sides.front();
    for (double h : sides) {
        if (!(h > 0.0)) throw DomainError("side lengths must be positive");
        inv_sq += 1.0 / (h * h);
        inv += 1.0 / h;
        shortest = std::min(shortest, h);
    }
    const HyperRectangleBound out{std::sqrt(inv_sq) + inv, shortest};
    const double d = static_cast<double>(sides.size());
    if (out.lambda > (std::sqrt(d) + d) / shortest * (1.0 + 1e-12))
        throw Error("hyper-rectangle Lambda exceeds (sqrt(d) + d) / h_*");
    return out;
}

RegularNgonReference regular_ngon_reference(int n) {
    if (n < 3) throw DomainError("regular n-gon needs n >= 3");
    const double a = std::numbers::pi / n;
    const double s = std::sin(a);
    const double c = std::cos(a);
    RegularNgonReference out{};
    out.h_star = 4.0 * s * s * c;
    out.lambda_vertex = (1.0 + c) / (2.0 * s * s * c);
    out.lower_bound = 2.0 * (1.0 + c) / out.h_star;
    out.upper_bound = 4.0 / out.h_star;
    return out;
}

PolygonAngleBound polygon_angle_bound(const Polygon& p) {
    const std::size_t n = p.size();
    if (!validate(p).is_convex) throw DegenerateGeometry("polygon is not strictly convex");
    PolygonAngleBound out{};
    out.min_edge = std::numeric_limits<double>::infinity();
    out.min_angle = std::numeric_limits<double>::infinity();
    out.max_angle = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < n; ++k) {
        const Vec2 a = p.vertices[(k + 1) % n] - p.vertices[k];
        const Vec2 b = p.vertices[(k + n - 1) % n] - p.vertices[k];
        out.min_edge = std::min(out.min_edge, a.norm());
        const double beta = std::atan2(cross2(a, b), a.dot(b));
        if (beta < out.min_angle) {
            out.min_angle = beta;
            out.min_angle_vertex = k;
        }
        if (beta > out.max_angle) {
            out.max_angle = beta;
            out.max_angle_vertex = k;
        }
    }
    const double denom = out.min_edge * std::sin(out.min_angle) * std::sin(out.max_angle);
    if (!(denom > 0.0)) throw DegenerateGeometry("degenerate angles");
    out.bound = 4.0 / denom;
    if (h_star(p) < denom * (1.0 - 1e-12)) throw Error("h_* below d_* sin(beta_*) sin(beta^*)");
    return out;
}

}  // namespace wachspress
