#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"

#include "support/corpus.hpp"
#include "wachspress/basis.hpp"
#include "wachspress/errors.hpp"
#include "wachspress/geometry.hpp"
#include "wachspress/shapes.hpp"

using namespace wachspress;
using doctest::Approx;

namespace {

// Brute-force h_* : the plane of each face from three of its vertices, no
// Newell normals and no orientation bookkeeping beyond an absolute value.
double h_star_brute_force(const Polyhedron& p) {
    double best = 1e300;
    for (const Loop& f : p.faces) {
        const Vec3 a = p.vertices[f[0]];
        const Vec3 n = (p.vertices[f[1]] - a).cross(p.vertices[f[2]] - a).normalized();
        for (Index v = 0; v < p.size(); ++v)
            if (std::find(f.begin(), f.end(), v) == f.end())
                best = std::min(best, std::abs((p.vertices[v] - a).dot(n)));
    }
    return best;
}

Polyhedron rigid_motion(const Polyhedron& p, const Eigen::Matrix3d& R, const Vec3& t) {
    Polyhedron q = p;
    for (Vec3& v : q.vertices) v = R * v + t;
    return q;
}

}  // namespace

TEST_CASE("outward normals of the unit square") {
    const auto n = outward_normals_2d(unit_square());
    REQUIRE(n.size() == 4);
    CHECK((n[0] - Vec2(0, -1)).norm() < 1e-15);
    CHECK((n[1] - Vec2(1, 0)).norm() < 1e-15);
    CHECK((n[2] - Vec2(0, 1)).norm() < 1e-15);
    CHECK((n[3] - Vec2(-1, 0)).norm() < 1e-15);
}

TEST_CASE("outward normals of a regular triangle point radially through edge midpoints") {
    const double s = std::sqrt(3.0) / 2.0;
    const Polygon t{{Vec2(1, 0), Vec2(-0.5, s), Vec2(-0.5, -s)}};
    const auto n = outward_normals_2d(t);
    for (std::size_t i = 0; i < 3; ++i) {
        const Vec2 mid = 0.5 * (t.vertices[i] + t.vertices[(i + 1) % 3]);
        CHECK((n[i] - mid.normalized()).norm() < 1e-15);
    }
}

TEST_CASE("outward normals keep all other vertices on the inner side") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 30; ++trial) {
        const Polygon p = testing::random_convex_polygon(rng, 5 + trial % 8);
        const auto n = outward_normals_2d(p);
        for (std::size_t i = 0; i < p.size(); ++i) {
            CHECK(std::abs(n[i].norm() - 1.0) < 1e-14);
            CHECK(n[i].dot(p.vertices[(i + 2) % p.size()] - p.vertices[i]) < 0.0);
        }
    }
}

TEST_CASE("degenerate edge has no normal") {
    const Polygon p{{Vec2(0, 0), Vec2(0, 0), Vec2(1, 1)}};
    CHECK_THROWS_AS(outward_normals_2d(p), DegenerateGeometry);
}

TEST_CASE("face planes of the unit cube") {
    const Polyhedron cube = unit_cube();
    // face 1 is z = 1, face 5 is x = 0
    CHECK((face_plane(cube, 1).unit_normal - Vec3(0, 0, 1)).norm() < 1e-15);
    CHECK((face_plane(cube, 5).unit_normal - Vec3(-1, 0, 0)).norm() < 1e-15);
    CHECK(h_f(face_plane(cube, 1), Vec3(0.5, 0.5, 0.5)) == Approx(0.5).epsilon(1e-15));
    CHECK(h_f(face_plane(cube, 1), Vec3(0.3, 0.9, 1.0)) == 0.0);
}

TEST_CASE("regular tetrahedron normals are anti-parallel to centroid-to-opposite-vertex") {
    const Polyhedron t = regular_tetrahedron();
    for (Index f = 0; f < t.faces.size(); ++f) {
        Vec3 c = Vec3::Zero();
        for (Index v : t.faces[f]) c += t.vertices[v];
        c /= 3.0;
        Index opposite = 0;
        while (std::find(t.faces[f].begin(), t.faces[f].end(), opposite) != t.faces[f].end()) ++opposite;
        const Vec3 dir = (t.vertices[opposite] - c).normalized();
        CHECK(face_plane(t, f).unit_normal.dot(dir) == Approx(-1.0).epsilon(1e-14));
    }
}

TEST_CASE("non-planar and collinear faces are rejected") {
    Polyhedron cube = unit_cube();
    cube.vertices[6] += Vec3(0, 0, 0.1);
    CHECK_THROWS_AS(face_plane(cube, 1), NonPlanarFace);

    Polyhedron flat = unit_cube();
    flat.faces[1] = {4, 5, 5};
    CHECK_THROWS_AS(face_plane(flat, 1), DegenerateGeometry);
}

TEST_CASE("edge distance in the unit square") {
    const auto n = outward_normals_2d(unit_square());
    CHECK(h_f(n[1], Vec2(1, 0), Vec2(0.25, 0.7)) == Approx(0.75).epsilon(1e-15));
}

TEST_CASE("h_star of reference shapes") {
    CHECK(h_star(unit_square()) == Approx(1.0).epsilon(1e-15));
    CHECK(h_star(unit_cube()) == Approx(1.0).epsilon(1e-15));
    CHECK(h_star(regular_ngon(6)) == Approx(std::sqrt(3.0) / 2.0).epsilon(1e-14));
    const Polyhedron tet = regular_tetrahedron();
    const double brute = h_star_brute_force(tet);
    CHECK(brute == Approx(std::sqrt(2.0 / 3.0)).epsilon(1e-14));
    CHECK(h_star(tet) == Approx(brute).epsilon(1e-14));
}

TEST_CASE("h_star matches brute force on random prisms") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        const Polyhedron p = testing::random_prism(rng, 3 + trial % 8);
        CHECK(h_star(p) == Approx(h_star_brute_force(p)).epsilon(1e-12));
    }
}

TEST_CASE("h_star rejects non-convex input") {
    Polygon dart{{Vec2(0, 0), Vec2(2, 0), Vec2(0.5, 0.5), Vec2(0, 2)}};
    CHECK_THROWS_AS(h_star(dart), NotConvex);
}

TEST_CASE("validate classifies cube, pyramid and dented cube") {
    const auto cube = validate(unit_cube());
    CHECK(cube.is_convex);
    CHECK(cube.is_simple);

    const auto pyramid = validate(square_pyramid());
    CHECK(pyramid.is_convex);
    CHECK_FALSE(pyramid.is_simple);

    // Pushing a corner to the cube centre leaves its three faces non-planar
    // and the corner on the wrong side of the far faces' neighbors.
    Polyhedron dented = unit_cube();
    dented.vertices[6] = Vec3(0.6, 0.6, 0.6);
    const auto report = validate(dented);
    CHECK_FALSE(report.is_convex);
    CHECK_FALSE(report.is_simple);
    CHECK(report.worst_planarity > 0.1);
    CHECK_FALSE(report.offending_entities.empty());
}

TEST_CASE("validate flags a reflex edge while faces stay planar") {
    const Polygon dart{{Vec2(0, 0), Vec2(2, 0), Vec2(0.5, 0.5), Vec2(0, 2)}};
    CHECK_THROWS_AS(prism(dart, Vec3(0, 0, 1)), NotConvex);
    Polyhedron p;
    for (double z : {0.0, 1.0})
        for (const Vec2& v : dart.vertices) p.vertices.emplace_back(v.x(), v.y(), z);
    p.faces = {{3, 2, 1, 0}, {4, 5, 6, 7}, {0, 1, 5, 4}, {1, 2, 6, 5}, {2, 3, 7, 6}, {3, 0, 4, 7}};
    const auto report = validate(order_incident_faces(p));
    CHECK_FALSE(report.is_convex);
    CHECK(report.worst_planarity < 1e-12);
    CHECK(report.worst_side_violation > 0.1);
}

TEST_CASE("polygon validation catches collinear and reflex vertices") {
    CHECK(validate(regular_ngon(7)).is_convex);
    const Polygon collinear{{Vec2(0, 0), Vec2(1, 0), Vec2(2, 0), Vec2(1, 1)}};
    CHECK_FALSE(validate(collinear).is_convex);
    const Polygon clockwise{{Vec2(0, 0), Vec2(0, 1), Vec2(1, 1), Vec2(1, 0)}};
    CHECK_FALSE(validate(clockwise).is_convex);
    // Pentagram-like double winding: locally convex turns everywhere.
    Polygon star;
    for (int i = 0; i < 5; ++i)
        star.vertices.emplace_back(std::cos(4 * std::numbers::pi * i / 5), std::sin(4 * std::numbers::pi * i / 5));
    CHECK_FALSE(validate(star).is_convex);
}

TEST_CASE("incident face cycles") {
    SUBCASE("cube: consecutive faces share an edge through the vertex; weights positive") {
        const Polyhedron cube = unit_cube();
        for (Index v = 0; v < cube.size(); ++v) {
            const Loop& cycle = cube.vertex_faces[v];
            REQUIRE(cycle.size() == 3);
            for (std::size_t i = 0; i < 3; ++i) {
                const Loop& a = cube.faces[cycle[i]];
                const Loop& b = cube.faces[cycle[(i + 1) % 3]];
                int shared = 0;
                for (Index u : a)
                    if (u != v && std::find(b.begin(), b.end(), u) != b.end()) ++shared;
                CHECK(shared == 1);
            }
        }
        for (const Vec3 x : {Vec3(0.1, 0.2, 0.3), Vec3(0.9, 0.5, 0.05), Vec3(0.5, 0.5, 0.5)}) {
            const auto basis = wachspress_3d(cube, x);
            for (double phi : basis.phi) CHECK(phi > 0.0);
        }
    }
    SUBCASE("tetrahedron and hexagonal prism are simple") {
        for (const Loop& c : regular_tetrahedron().vertex_faces) CHECK(c.size() == 3);
        const Polyhedron hex = prism(regular_ngon(6), Vec3(0, 0, 1));
        for (const Loop& c : hex.vertex_faces) CHECK(c.size() == 3);
        CHECK(validate(hex).is_simple);
    }
    SUBCASE("pyramid apex has a 4-cycle") {
        const Polyhedron p = square_pyramid();
        CHECK(p.vertex_faces[4].size() == 4);
    }
    SUBCASE("idempotent") {
        std::mt19937_64 rng(3);
        const Polyhedron p = testing::random_prism(rng, 7);
        const Polyhedron q = order_incident_faces(p);
        CHECK(q.vertex_faces == p.vertex_faces);
    }
    SUBCASE("open surface is rejected") {
        Polyhedron open = unit_cube();
        open.faces.pop_back();
        open.vertex_faces.clear();
        CHECK_THROWS_AS(order_incident_faces(open), BadTopology);
    }
    SUBCASE("inconsistent orientation is rejected") {
        Polyhedron flipped = unit_cube();
        std::reverse(flipped.faces[2].begin(), flipped.faces[2].end());
        flipped.vertex_faces.clear();
        CHECK_THROWS_AS(order_incident_faces(flipped), BadTopology);
    }
}

TEST_CASE("h_f(u) >= h_star and the minimizer neighbors the face") {
    std::mt19937_64 rng(5);
    std::vector<Polyhedron> corpus = {unit_cube(), regular_tetrahedron(), square_pyramid()};
    for (int i = 0; i < 15; ++i) corpus.push_back(testing::random_prism(rng, 3 + i % 9));
    for (int i = 0; i < 5; ++i) corpus.push_back(testing::random_tetrahedron(rng));
    for (const Polyhedron& p : corpus) {
        const double hs = h_star(p);
        const auto planes = face_planes(p);
        for (Index f = 0; f < p.faces.size(); ++f) {
            const Loop& face = p.faces[f];
            double best = 1e300;
            for (Index u = 0; u < p.size(); ++u) {
                if (std::find(face.begin(), face.end(), u) != face.end()) continue;
                const double h = h_f(planes[f], p.vertices[u]);
                CHECK(h >= hs * (1 - 1e-12));
                best = std::min(best, h);
            }
            // Every minimizer is a neighbor of some vertex of f.
            for (Index u = 0; u < p.size(); ++u) {
                if (std::find(face.begin(), face.end(), u) != face.end()) continue;
                if (h_f(planes[f], p.vertices[u]) > best * (1 + 1e-12)) continue;
                const auto nb = vertex_neighbors(p, u);
                const bool adjacent = std::any_of(nb.begin(), nb.end(), [&](Index w) {
                    return std::find(face.begin(), face.end(), w) != face.end();
                });
                CHECK(adjacent);
            }
        }
    }
}

TEST_CASE("h_star under rigid motion and scaling") {
    std::mt19937_64 rng(9);
    const Polyhedron p = testing::random_prism(rng, 6);
    const double hs = h_star(p);
    const Eigen::Matrix3d R =
        Eigen::AngleAxisd(0.7, Vec3(1, 2, 3).normalized()).toRotationMatrix();
    CHECK(h_star(rigid_motion(p, R, Vec3(3, -1, 2))) == Approx(hs).epsilon(1e-12));
    Polyhedron scaled = p;
    for (Vec3& v : scaled.vertices) v *= 4.0;  // power of two: exact
    CHECK(h_star(scaled) == 4.0 * hs);
}

TEST_CASE("volume by divergence theorem") {
    CHECK(volume(unit_cube()) == Approx(1.0).epsilon(1e-15));
    CHECK(volume(box(1, 2, 4)) == Approx(8.0).epsilon(1e-15));
    CHECK(volume(regular_tetrahedron()) == Approx(std::sqrt(2.0) / 12.0).epsilon(1e-14));
}

TEST_CASE("triangle circumradius identity") {
    SUBCASE("equilateral") {
        const auto r = triangle_circumradius_check(equilateral_triangle());
        CHECK(r.h_star == Approx(std::sqrt(3.0) / 2.0).epsilon(1e-14));
        CHECK(r.bound == Approx(1.0 / std::sqrt(3.0)).epsilon(1e-14));
        CHECK(r.r_circ == Approx(1.0 / std::sqrt(3.0)).epsilon(1e-14));
        CHECK(r.l_min * r.l_med / (2 * r.h_star) == Approx(1.0 / std::sqrt(3.0)).epsilon(1e-14));
    }
    SUBCASE("right isoceles") {
        const auto r = triangle_circumradius_check(Polygon{{Vec2(0, 0), Vec2(1, 0), Vec2(0, 1)}});
        // hypotenuse scaled to 1
        CHECK(r.r_circ == Approx(0.5).epsilon(1e-14));
    }
    SUBCASE("random triangles against a circumcenter construction") {
        std::mt19937_64 rng(21);
        std::uniform_real_distribution<double> u(-1, 1);
        for (int i = 0; i < 50; ++i) {
            Polygon t{{Vec2(u(rng), u(rng)), Vec2(u(rng), u(rng)), Vec2(u(rng), u(rng))}};
            const Vec2 a = t.vertices[0], b = t.vertices[1], c = t.vertices[2];
            const double d = 2 * (a.x() * (b.y() - c.y()) + b.x() * (c.y() - a.y()) + c.x() * (a.y() - b.y()));
            if (std::abs(d) < 1e-3) continue;
            const Vec2 center((a.squaredNorm() * (b.y() - c.y()) + b.squaredNorm() * (c.y() - a.y()) +
                               c.squaredNorm() * (a.y() - b.y())) / d,
                              (a.squaredNorm() * (c.x() - b.x()) + b.squaredNorm() * (a.x() - c.x()) +
                               c.squaredNorm() * (b.x() - a.x())) / d);
            const double longest = std::max({(b - a).norm(), (c - b).norm(), (a - c).norm()});
            const double expected = (center - a).norm() / longest;
            const auto r = triangle_circumradius_check(t);
            CHECK(r.r_circ == Approx(expected).epsilon(1e-9));
            CHECK(r.r_circ <= r.bound * (1 + 1e-12));
        }
    }
    SUBCASE("degenerate") {
        CHECK_THROWS_AS(triangle_circumradius_check(Polygon{{Vec2(0, 0), Vec2(1, 0), Vec2(2, 0)}}),
                        DegenerateGeometry);
    }
}
