#include <cmath>
#include <random>

#include "doctest.h"

#include "support/corpus.hpp"
#include "wachspress/errors.hpp"
#include "wachspress/quadrature.hpp"
#include "wachspress/sampling.hpp"
#include "wachspress/shapes.hpp"

using namespace wachspress;
using doctest::Approx;

namespace {

/// c + g.x + x^T H x with symmetric H.
struct Quadratic {
    double c;
    Vec3 g;
    Eigen::Matrix3d H;

    double operator()(const Vec3& x) const { return c + g.dot(x) + x.dot(H * x); }
};

Quadratic random_quadratic(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1, 1);
    Quadratic q{u(rng), Vec3(u(rng), u(rng), u(rng)), Eigen::Matrix3d::Zero()};
    for (int i = 0; i < 3; ++i)
        for (int j = i; j < 3; ++j) q.H(i, j) = q.H(j, i) = u(rng);
    return q;
}

/// Exact integral over a tetrahedron: the integral of x_i x_j is
/// |T|/20 (sum_v v_i v_j + S_i S_j) with S the vertex sum.
double exact_tet_integral(const Quadratic& q, const Tet& t) {
    const double vol = std::abs(tet_volume(t));
    Vec3 s = Vec3::Zero();
    Eigen::Matrix3d second = Eigen::Matrix3d::Zero();
    for (const Vec3& v : t) {
        s += v;
        second += v * v.transpose();
    }
    second = vol / 20.0 * (second + s * s.transpose());
    return q.c * vol + q.g.dot(vol * s / 4.0) + (q.H.cwiseProduct(second)).sum();
}

/// Exact integral over a convex cell by a fan from vertex 0, a decomposition
/// unrelated to the one used by the quadrature.
double exact_cell_integral(const Quadratic& q, const Polyhedron& p) {
    const Vec3 apex = p.vertices[0];
    double sum = 0.0;
    for (const Loop& f : p.faces) {
        if (std::find(f.begin(), f.end(), Index{0}) != f.end()) continue;
        for (std::size_t i = 1; i + 1 < f.size(); ++i)
            sum += exact_tet_integral(q, Tet{apex, p.vertices[f[0]], p.vertices[f[i]], p.vertices[f[i + 1]]});
    }
    return sum;
}

std::vector<Polyhedron> random_cells(std::mt19937_64& rng) {
    std::vector<Polyhedron> cells = {unit_cube(), square_pyramid()};
    for (int i = 0; i < 5; ++i) cells.push_back(testing::random_prism(rng, 3 + 2 * i));
    for (int i = 0; i < 3; ++i) cells.push_back(testing::random_tetrahedron(rng));
    return cells;
}

const Tet kReference = {Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0, 1, 0), Vec3(0, 0, 1)};

double integrate_tet(const Tet& t, const std::function<double(const Vec3&)>& f) {
    double sum = 0.0;
    for (const QuadPoint& q : rule_tet4(t)) sum += q.weight * f(q.position);
    return sum;
}

}  // namespace

TEST_CASE("reference tetrahedron moments") {
    CHECK(integrate_tet(kReference, [](const Vec3&) { return 1.0; }) == Approx(1.0 / 6).epsilon(1e-15));
    CHECK(integrate_tet(kReference, [](const Vec3& x) { return x.x(); }) == Approx(1.0 / 24).epsilon(1e-15));
    CHECK(integrate_tet(kReference, [](const Vec3& x) { return x.x() * x.x(); }) == Approx(1.0 / 60).epsilon(1e-14));
    CHECK(integrate_tet(kReference, [](const Vec3& x) { return x.x() * x.y(); }) == Approx(1.0 / 120).epsilon(1e-14));
}

TEST_CASE("rule weights and orientation") {
    for (const QuadPoint& q : rule_tet4(kReference)) CHECK(q.weight == Approx(1.0 / 24).epsilon(1e-15));
    Tet inverted = kReference;
    std::swap(inverted[1], inverted[2]);
    CHECK_THROWS_AS(rule_tet4(inverted), DegenerateGeometry);
    const Tet flat = {Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0, 1, 0), Vec3(1, 1, 0)};
    CHECK_THROWS_AS(rule_tet4(flat), DegenerateGeometry);
}

TEST_CASE("centroid-fan decomposition") {
    SUBCASE("unit cube has 24 tetrahedra of total volume 1") {
        const auto tets = tetrahedralize(unit_cube());
        CHECK(tets.size() == 24);
        double vol = 0.0;
        for (const Tet& t : tets) {
            CHECK(tet_volume(t) > 0.0);
            vol += tet_volume(t);
        }
        CHECK(vol == Approx(1.0).epsilon(1e-15));
    }
    SUBCASE("tetrahedron volume matches the determinant") {
        std::mt19937_64 rng(1);
        const Polyhedron t = testing::random_tetrahedron(rng);
        double vol = 0.0;
        for (const Tet& s : tetrahedralize(t)) vol += tet_volume(s);
        const double det = tet_volume({t.vertices[0], t.vertices[1], t.vertices[2], t.vertices[3]});
        CHECK(std::abs(vol - std::abs(det)) < 1e-14 * std::abs(det));
    }
    SUBCASE("triangular prism volume is base area times height") {
        const Polygon base{{Vec2(0, 0), Vec2(2, 0), Vec2(0.5, 1.5)}};
        const Polyhedron p = prism(base, Vec3(0.3, -0.2, 1.7));
        double vol = 0.0;
        for (const Tet& s : tetrahedralize(p)) vol += tet_volume(s);
        CHECK(vol == Approx(1.5 * 1.7).epsilon(1e-12));
    }
}

TEST_CASE("cell integrals over the unit cube") {
    const Polyhedron cube = unit_cube();
    CHECK(integrate_cell(cube, [](const Vec3&) { return 1.0; }) == Approx(1.0).epsilon(1e-15));
    CHECK(integrate_cell(cube, [](const Vec3& x) { return x.sum(); }) == Approx(1.5).epsilon(1e-15));
    // cubic, but the decomposition is symmetric under x -> 1 - x per axis
    CHECK(std::abs(integrate_cell(cube, [](const Vec3& x) { return x.x() * x.y() * x.z(); }) - 0.125) < 1e-12);
}

TEST_CASE("degree-2 exactness on random cells") {
    std::mt19937_64 rng(31);
    const auto cells = random_cells(rng);
    for (int k = 0; k < 20; ++k) {
        const Quadratic q = random_quadratic(rng);
        for (const Polyhedron& cell : cells) {
            const double exact = exact_cell_integral(q, cell);
            const double quad = integrate_cell(cell, q);
            const double scale = std::max(std::abs(exact), integrate_cell(cell, [&](const Vec3& x) {
                return std::abs(q.c) + q.g.cwiseAbs().dot(x.cwiseAbs()) + x.cwiseAbs().dot(q.H.cwiseAbs() * x.cwiseAbs());
            }));
            CHECK(std::abs(quad - exact) <= 1e-12 * scale);
        }
    }
}

TEST_CASE("points are interior and weights sum to the volume") {
    std::mt19937_64 rng(37);
    for (const Polyhedron& cell : random_cells(rng)) {
        double total = 0.0;
        for (const QuadPoint& q : cell_points(cell)) {
            CHECK(q.weight > 0.0);
            CHECK(min_face_distance(cell, q.position) > 0.0);
            total += q.weight;
        }
        CHECK(total == Approx(volume(cell)).epsilon(1e-12));
    }
}

TEST_CASE("splitting a cell by a plane is additive") {
    std::mt19937_64 rng(41);
    const Quadratic q = random_quadratic(rng);
    const double whole = integrate_cell(box(1, 1, 1), q);
    Polyhedron left = box(0.37, 1, 1);
    Polyhedron right = box(0.63, 1, 1);
    for (Vec3& v : right.vertices) v.x() += 0.37;
    CHECK(integrate_cell(left, q) + integrate_cell(right, q) == Approx(whole).epsilon(1e-10));

    const Polygon base{{Vec2(0, 0), Vec2(1, 0), Vec2(1.2, 0.8), Vec2(0.1, 1)}};
    const Polyhedron tall = prism(base, Vec3(0, 0, 2));
    const Polyhedron low = prism(base, Vec3(0, 0, 0.7));
    Polyhedron high = prism(base, Vec3(0, 0, 1.3));
    for (Vec3& v : high.vertices) v.z() += 0.7;
    CHECK(integrate_cell(low, q) + integrate_cell(high, q) == Approx(integrate_cell(tall, q)).epsilon(1e-10));
}

TEST_CASE("face rule") {
    const Polyhedron cube = unit_cube();
    double area = 0.0, second = 0.0;
    for (const QuadPoint& q : face_points(cube, 1)) {
        CHECK(q.position.z() == Approx(1.0).epsilon(1e-15));
        CHECK(q.position.x() > 0.0);
        CHECK(q.position.x() < 1.0);
        area += q.weight;
        second += q.weight * q.position.x() * q.position.y();
    }
    CHECK(area == Approx(1.0).epsilon(1e-15));
    CHECK(second == Approx(0.25).epsilon(1e-15));

    // hexagonal cap: area of the regular hexagon on the unit circle
    const Polyhedron hex = prism(regular_ngon(6), Vec3(0, 0, 1));
    double cap = 0.0;
    for (const QuadPoint& q : face_points(hex, 0)) cap += q.weight;
    CHECK(cap == Approx(3 * std::sqrt(3.0) / 2).epsilon(1e-14));
}
