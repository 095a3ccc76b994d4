#include "wachspress/geometry.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <utility>

#include <Eigen/Dense>

#include "wachspress/errors.hpp"

namespace wachspress {

namespace {

double cross2(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

// Newell normal of a loop, not normalized. Length equals twice the area.
Vec3 newell_normal(const Polyhedron& p, const Loop& loop) {
    Vec3 c = Vec3::Zero();
    for (Index i : loop) c += p.vertices[i];
    c /= static_cast<double>(loop.size());
    Vec3 n = Vec3::Zero();
    for (std::size_t i = 0; i < loop.size(); ++i) {
        const Vec3 a = p.vertices[loop[i]] - c;
        const Vec3 b = p.vertices[loop[(i + 1) % loop.size()]] - c;
        n += a.cross(b);
    }
    return n;
}

bool loop_contains(const Loop& loop, Index v) {
    return std::find(loop.begin(), loop.end(), v) != loop.end();
}

std::vector<std::vector<Index>> incident_faces(const Polyhedron& p) {
    std::vector<std::vector<Index>> inc(p.vertices.size());
    for (Index f = 0; f < p.faces.size(); ++f)
        for (Index v : p.faces[f]) inc[v].push_back(f);
    return inc;
}

using DirectedEdges = std::map<std::pair<Index, Index>, std::vector<Index>>;

DirectedEdges directed_edges(const Polyhedron& p) {
    DirectedEdges edges;
    for (Index f = 0; f < p.faces.size(); ++f) {
        const Loop& loop = p.faces[f];
        for (std::size_t i = 0; i < loop.size(); ++i)
            edges[{loop[i], loop[(i + 1) % loop.size()]}].push_back(f);
    }
    return edges;
}

// Sum of the fan determinants det(n_i, n_{i+1}, n_k) of the unit normals in
// the given cycle; the sign of the Wachspress weight of the vertex.
double fan_orientation(const std::vector<FacePlane>& planes, const Loop& cycle) {
    const std::size_t k = cycle.size();
    const Vec3& last = planes[cycle[k - 1]].unit_normal;
    double sum = 0.0;
    for (std::size_t i = 0; i + 2 < k; ++i) {
        Eigen::Matrix3d m;
        m.row(0) = planes[cycle[i]].unit_normal;
        m.row(1) = planes[cycle[i + 1]].unit_normal;
        m.row(2) = last;
        sum += m.determinant();
    }
    return sum;
}

}  // namespace

double diameter(const Polygon& p) {
    double d = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i)
        for (std::size_t j = i + 1; j < p.size(); ++j)
            d = std::max(d, (p.vertices[i] - p.vertices[j]).norm());
    return d;
}

double diameter(const Polyhedron& p) {
    double d = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i)
        for (std::size_t j = i + 1; j < p.size(); ++j)
            d = std::max(d, (p.vertices[i] - p.vertices[j]).norm());
    return d;
}

Vec2 vertex_centroid(const Polygon& p) {
    Vec2 c = Vec2::Zero();
    for (const Vec2& v : p.vertices) c += v;
    return c / static_cast<double>(p.size());
}

Vec3 vertex_centroid(const Polyhedron& p) {
    Vec3 c = Vec3::Zero();
    for (const Vec3& v : p.vertices) c += v;
    return c / static_cast<double>(p.size());
}

std::vector<Vec2> outward_normals_2d(const Polygon& p) {
    const std::size_t n = p.size();
    std::vector<Vec2> normals(n);
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2 d = p.vertices[(i + 1) % n] - p.vertices[i];
        const double len = d.norm();
        if (!(len > 0.0))
            throw DegenerateGeometry("edge " + std::to_string(i) + " has zero length");
        normals[i] = Vec2(d.y(), -d.x()) / len;
    }
    return normals;
}

namespace {

FacePlane plane_of(const Polyhedron& p, Index f, double diam, const Vec3& centroid) {
    const Loop& loop = p.faces.at(f);
    if (loop.size() < 3)
        throw DegenerateGeometry("face " + std::to_string(f) + " has fewer than 3 vertices");
    const Vec3 n = newell_normal(p, loop);
    const double len = n.norm();
    if (!(len > 1e-14 * diam * diam))
        throw DegenerateGeometry("face " + std::to_string(f) + " is collinear");
    FacePlane plane{n / len, p.vertices[loop.front()]};

    double deviation = 0.0;
    for (Index v : loop)
        deviation = std::max(deviation, std::abs(h_f(plane, p.vertices[v])));
    if (deviation > Tolerances{}.planar * diam) throw NonPlanarFace(f, deviation);

    if (h_f(plane, centroid) < 0.0) plane.unit_normal = -plane.unit_normal;
    return plane;
}

}  // namespace

FacePlane face_plane(const Polyhedron& p, Index f) {
    return plane_of(p, f, diameter(p), vertex_centroid(p));
}

std::vector<FacePlane> face_planes(const Polyhedron& p) {
    const double diam = diameter(p);
    const Vec3 centroid = vertex_centroid(p);
    std::vector<FacePlane> planes;
    planes.reserve(p.faces.size());
    for (Index f = 0; f < p.faces.size(); ++f) planes.push_back(plane_of(p, f, diam, centroid));
    return planes;
}

ConvexityReport validate(const Polygon& p, const Tolerances& tol) {
    ConvexityReport report;
    const std::size_t n = p.size();
    if (n < 3) {
        report.offending_entities.push_back("polygon has fewer than 3 vertices");
        return report;
    }
    const double diam = diameter(p);
    bool ok = diam > 0.0;

    for (std::size_t i = 0; i < n; ++i) {
        const Vec2 prev = p.vertices[i] - p.vertices[(i + n - 1) % n];
        const Vec2 next = p.vertices[(i + 1) % n] - p.vertices[i];
        if (!(next.norm() > tol.length * diam)) {
            ok = false;
            report.offending_entities.push_back("edge " + std::to_string(i));
            continue;
        }
        if (!(cross2(prev, next) > tol.convex * diam * diam)) {
            ok = false;
            report.offending_entities.push_back("vertex " + std::to_string(i));
        }
    }
    if (ok) {
        // Local convexity does not exclude a loop that winds twice.
        const auto normals = outward_normals_2d(p);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                const double h = h_f(normals[i], p.vertices[i], p.vertices[j]);
                if (j == i || j == (i + 1) % n) continue;
                report.worst_side_violation = std::max(report.worst_side_violation, -h);
                if (!(h > tol.side * diam)) {
                    ok = false;
                    report.offending_entities.push_back("vertex " + std::to_string(j) +
                                                        " vs edge " + std::to_string(i));
                }
            }
        }
    }
    report.is_convex = ok;
    report.is_simple = ok;
    return report;
}

ConvexityReport validate(const Polyhedron& p, const Tolerances& tol) {
    ConvexityReport report;
    auto flag = [&](std::string what) { report.offending_entities.push_back(std::move(what)); };
    bool ok = p.vertices.size() >= 4 && p.faces.size() >= 4;
    if (!ok) flag("polyhedron needs at least 4 vertices and 4 faces");

    for (Index f = 0; f < p.faces.size(); ++f) {
        const Loop& loop = p.faces[f];
        if (loop.size() < 3) {
            ok = false;
            flag("face " + std::to_string(f) + " has fewer than 3 vertices");
        }
        for (Index v : loop) {
            if (v >= p.vertices.size()) {
                report.offending_entities.push_back("face " + std::to_string(f) +
                                                    " references missing vertex");
                report.is_convex = false;
                return report;
            }
        }
    }
    if (!ok) return report;

    // Closed, consistently oriented surface.
    const DirectedEdges edges = directed_edges(p);
    for (const auto& [edge, owners] : edges) {
        const auto twin = edges.find({edge.second, edge.first});
        if (owners.size() != 1 || twin == edges.end() || twin->second.size() != 1) {
            ok = false;
            flag("edge " + std::to_string(edge.first) + "-" + std::to_string(edge.second));
        }
    }

    const double diam = diameter(p);
    const Vec3 centroid = vertex_centroid(p);
    std::vector<FacePlane> planes(p.faces.size());
    for (Index f = 0; f < p.faces.size(); ++f) {
        const Loop& loop = p.faces[f];
        const Vec3 n = newell_normal(p, loop);
        const double len = n.norm();
        if (!(len > 1e-14 * diam * diam)) {
            ok = false;
            flag("face " + std::to_string(f) + " is degenerate");
            planes[f] = FacePlane{Vec3::Zero(), p.vertices[loop.front()]};
            continue;
        }
        planes[f] = FacePlane{n / len, p.vertices[loop.front()]};
        if (h_f(planes[f], centroid) < 0.0) {
            ok = false;
            flag("face " + std::to_string(f) + " is oriented inward");
            planes[f].unit_normal = -planes[f].unit_normal;
        }
        double dev = 0.0;
        for (Index v : loop) dev = std::max(dev, std::abs(h_f(planes[f], p.vertices[v])));
        report.worst_planarity = std::max(report.worst_planarity, dev);
        if (dev > tol.planar * diam) {
            ok = false;
            flag("face " + std::to_string(f) + " is not planar");
        }
    }

    for (Index f = 0; f < p.faces.size(); ++f) {
        for (Index v = 0; v < p.vertices.size(); ++v) {
            const double h = h_f(planes[f], p.vertices[v]);
            if (loop_contains(p.faces[f], v)) continue;
            report.worst_side_violation = std::max(report.worst_side_violation, -h);
            if (!(h > tol.side * diam)) {
                ok = false;
                flag("vertex " + std::to_string(v) + " vs face " + std::to_string(f));
            }
        }
    }

    const auto inc = incident_faces(p);
    bool simple = true;
    for (Index v = 0; v < p.vertices.size(); ++v) {
        if (inc[v].size() < 3) {
            ok = false;
            flag("vertex " + std::to_string(v) + " has fewer than 3 faces");
        }
        if (inc[v].size() != 3) simple = false;
    }

    if (!p.vertex_faces.empty()) {
        if (p.vertex_faces.size() != p.vertices.size()) {
            ok = false;
            flag("vertex_faces size mismatch");
        } else {
            for (Index v = 0; v < p.vertices.size(); ++v) {
                Loop sorted = p.vertex_faces[v];
                std::sort(sorted.begin(), sorted.end());
                if (sorted != inc[v]) {
                    ok = false;
                    flag("vertex " + std::to_string(v) + " has a wrong face cycle");
                }
            }
        }
    }

    report.is_convex = ok;
    report.is_simple = ok && simple;
    return report;
}

double h_star(const Polygon& p) {
    const auto report = validate(p);
    if (!report.is_convex) throw NotConvex("polygon is not strictly convex");
    const std::size_t n = p.size();
    const auto normals = outward_normals_2d(p);
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (j != i && j != (i + 1) % n)
                best = std::min(best, h_f(normals[i], p.vertices[i], p.vertices[j]));
    return best;
}

double h_star(const Polyhedron& p) {
    const auto report = validate(p);
    if (!report.is_convex) throw NotConvex("polyhedron is not strictly convex");
    const auto planes = face_planes(p);
    double best = std::numeric_limits<double>::infinity();
    for (Index f = 0; f < p.faces.size(); ++f)
        for (Index v = 0; v < p.vertices.size(); ++v)
            if (!loop_contains(p.faces[f], v))
                best = std::min(best, h_f(planes[f], p.vertices[v]));
    return best;
}

Polyhedron order_incident_faces(Polyhedron p) {
    const DirectedEdges edges = directed_edges(p);
    for (const auto& [edge, owners] : edges) {
        if (owners.size() != 1 || !edges.contains({edge.second, edge.first}))
            throw BadTopology("edge " + std::to_string(edge.first) + "-" +
                              std::to_string(edge.second) +
                              " is not shared by exactly two oppositely oriented faces");
    }
    const auto inc = incident_faces(p);
    std::vector<FacePlane> planes;
    try {
        planes = face_planes(p);
    } catch (const NonPlanarFace&) {
        // Orientation of a non-planar face is still meaningful for the sign test.
        planes.clear();
        const Vec3 c = vertex_centroid(p);
        for (const Loop& loop : p.faces) {
            FacePlane plane{newell_normal(p, loop).normalized(), p.vertices[loop.front()]};
            if (h_f(plane, c) < 0.0) plane.unit_normal = -plane.unit_normal;
            planes.push_back(plane);
        }
    }

    p.vertex_faces.assign(p.vertices.size(), {});
    for (Index v = 0; v < p.vertices.size(); ++v) {
        if (inc[v].size() < 3)
            throw BadTopology("vertex " + std::to_string(v) + " has fewer than 3 faces");
        Loop cycle;
        Index f = inc[v].front();
        do {
            cycle.push_back(f);
            const Loop& loop = p.faces[f];
            const auto pos = std::find(loop.begin(), loop.end(), v) - loop.begin();
            const Index next = loop[(static_cast<std::size_t>(pos) + 1) % loop.size()];
            f = edges.at({next, v}).front();
        } while (f != cycle.front() && cycle.size() <= inc[v].size());
        if (cycle.size() != inc[v].size())
            throw BadTopology("faces around vertex " + std::to_string(v) +
                              " do not form a single cycle");
        if (fan_orientation(planes, cycle) < 0.0) std::reverse(cycle.begin(), cycle.end());
        p.vertex_faces[v] = std::move(cycle);
    }
    return p;
}

Polyhedron make_polyhedron(std::vector<Vec3> vertices, std::vector<Loop> faces) {
    Polyhedron p{std::move(vertices), std::move(faces), {}};
    p = order_incident_faces(std::move(p));
    const auto report = validate(p);
    if (!report.is_convex) {
        std::string what = "polyhedron is not strictly convex";
        if (!report.offending_entities.empty()) what += ": " + report.offending_entities.front();
        throw NotConvex(what);
    }
    return p;
}

std::vector<Index> vertex_neighbors(const Polyhedron& p, Index v) {
    std::vector<Index> out;
    for (const Loop& loop : p.faces) {
        const auto it = std::find(loop.begin(), loop.end(), v);
        if (it == loop.end()) continue;
        const std::size_t i = static_cast<std::size_t>(it - loop.begin());
        out.push_back(loop[(i + 1) % loop.size()]);
        out.push_back(loop[(i + loop.size() - 1) % loop.size()]);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

double volume(const Polyhedron& p) {
    const Vec3 c = vertex_centroid(p);
    double vol = 0.0;
    for (const Loop& loop : p.faces) {
        const Vec3 a = p.vertices[loop[0]] - c;
        for (std::size_t i = 1; i + 1 < loop.size(); ++i) {
            const Vec3 b = p.vertices[loop[i]] - c;
            const Vec3 d = p.vertices[loop[i + 1]] - c;
            vol += a.dot(b.cross(d));
        }
    }
    return vol / 6.0;
}

CircumradiusCheck triangle_circumradius_check(const Polygon& t) {
    if (t.size() != 3) throw DegenerateGeometry("triangle must have exactly 3 vertices");
    std::array<double, 3> len{};
    for (std::size_t i = 0; i < 3; ++i) len[i] = (t.vertices[(i + 1) % 3] - t.vertices[i]).norm();
    const double longest = *std::max_element(len.begin(), len.end());
    if (!(longest > 0.0)) throw DegenerateGeometry("triangle has zero size");

    Polygon scaled = t;
    for (Vec2& v : scaled.vertices) v = (v - t.vertices[0]) / longest;
    if (cross2(scaled.vertices[1] - scaled.vertices[0], scaled.vertices[2] - scaled.vertices[0]) < 0.0)
        std::swap(scaled.vertices[1], scaled.vertices[2]);
    if (!validate(scaled).is_convex) throw DegenerateGeometry("triangle is degenerate");

    for (double& l : len) l /= longest;
    std::sort(len.begin(), len.end());
    const Vec2 e1 = scaled.vertices[1] - scaled.vertices[0];
    const Vec2 e2 = scaled.vertices[2] - scaled.vertices[0];
    const double area = 0.5 * cross2(e1, e2);

    CircumradiusCheck out{};
    out.r_circ = len[0] * len[1] * len[2] / (4.0 * area);
    out.h_star = h_star(scaled);
    out.bound = 1.0 / (2.0 * out.h_star);
    out.l_min = len[0];
    out.l_med = len[1];
    const double identity = out.l_min * out.l_med / (2.0 * out.h_star);
    if (std::abs(identity - out.r_circ) > 1e-12 * out.r_circ)
        throw DegenerateGeometry("circumradius identity violated beyond rounding");
    return out;
}

}  // namespace wachspress
