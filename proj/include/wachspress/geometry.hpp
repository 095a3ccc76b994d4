#ifndef WACHSPRESS_GEOMETRY_HPP
#define WACHSPRESS_GEOMETRY_HPP

#include <string>
#include <vector>

#include "wachspress/types.hpp"

namespace wachspress {

/// Convex polygon, vertices listed counter-clockwise. Edge i joins vertex i
/// to vertex i+1 (cyclically).
struct Polygon {
    std::vector<Vec2> vertices;

    std::size_t size() const noexcept { return vertices.size(); }
};

/// Convex polyhedron.
///
/// `faces` are vertex loops ordered counter-clockwise as seen from outside.
/// `vertex_faces[v]` is the cycle of faces incident to v; it is derived by
/// order_incident_faces() and may be empty on raw input.
struct Polyhedron {
    std::vector<Vec3> vertices;
    std::vector<Loop> faces;
    std::vector<Loop> vertex_faces;

    std::size_t size() const noexcept { return vertices.size(); }
};

/// Supporting plane of a face: outward unit normal plus one point on it.
struct FacePlane {
    Vec3 unit_normal;
    Vec3 anchor;
};

/// Scale-relative tolerances; each is multiplied by diam(P) (or diam(P)^2
/// for the convexity cross product) before use.
struct Tolerances {
    double planar = 1e-9;
    double side = 1e-9;
    double convex = 1e-12;
    double length = 1e-12;
};

struct ConvexityReport {
    bool is_convex = false;
    bool is_simple = false;
    double worst_planarity = 0.0;
    double worst_side_violation = 0.0;
    std::vector<std::string> offending_entities;
};

double diameter(const Polygon& p);
double diameter(const Polyhedron& p);

Vec2 vertex_centroid(const Polygon& p);
Vec3 vertex_centroid(const Polyhedron& p);

std::vector<Vec2> outward_normals_2d(const Polygon& p);

FacePlane face_plane(const Polyhedron& p, Index f);
std::vector<FacePlane> face_planes(const Polyhedron& p);

/// Signed distance from x to the face plane, positive inside.
inline double h_f(const FacePlane& plane, const Vec3& x) {
    return (plane.anchor - x).dot(plane.unit_normal);
}

/// 2D edge version: `anchor` is any point on the edge line.
inline double h_f(const Vec2& unit_normal, const Vec2& anchor, const Vec2& x) {
    return (anchor - x).dot(unit_normal);
}

/// Minimum over faces f and vertices u not on f of h_f(u).
/// Throws NotConvex unless the polytope validates.
double h_star(const Polygon& p);
double h_star(const Polyhedron& p);

ConvexityReport validate(const Polygon& p, const Tolerances& tol = {});
ConvexityReport validate(const Polyhedron& p, const Tolerances& tol = {});

/// Builds vertex_faces by walking shared edges around each vertex. Each cycle
/// is oriented so that the Wachspress weight of the vertex is positive.
Polyhedron order_incident_faces(Polyhedron p);

/// order_incident_faces() followed by validation; throws NotConvex on failure.
Polyhedron make_polyhedron(std::vector<Vec3> vertices, std::vector<Loop> faces);

/// Neighbors of vertex v along polyhedron edges, sorted ascending.
std::vector<Index> vertex_neighbors(const Polyhedron& p, Index v);

/// Volume by the divergence theorem over the face loops.
double volume(const Polyhedron& p);

struct CircumradiusCheck {
    double r_circ;
    double bound;  ///< 1/(2 h_*), longest edge scaled to 1
    double h_star;
    double l_min;
    double l_med;
};

/// Scales t so its longest edge is 1, then reports the circumradius and the
/// bound 1/(2 h_*). Throws DegenerateGeometry if r_circ differs from
/// l_min l_med / (2 h_*) beyond relative 1e-12 or t is degenerate.
CircumradiusCheck triangle_circumradius_check(const Polygon& t);

}  // namespace wachspress

#endif
