#include "wachspress/shapes.hpp"

#include <charconv>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "wachspress/errors.hpp"

namespace wachspress {

namespace {

double parse_number(std::string_view text, std::string_view what) {
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size())
        throw DomainError("bad " + std::string(what) + " '" + std::string(text) + "'");
    return value;
}

std::vector<double> parse_list(std::string_view text, std::string_view what) {
    std::vector<double> out;
    while (true) {
        const auto comma = text.find(',');
        out.push_back(parse_number(text.substr(0, comma), what));
        if (comma == std::string_view::npos) break;
        text.remove_prefix(comma + 1);
    }
    return out;
}

}  // namespace

Polygon unit_square() { return rectangle(1.0, 1.0); }

Polygon rectangle(double a, double b) {
    if (!(a > 0.0 && b > 0.0)) throw DomainError("rectangle sides must be positive");
    return Polygon{{Vec2(0, 0), Vec2(a, 0), Vec2(a, b), Vec2(0, b)}};
}

Polygon regular_ngon(int n) {
    if (n < 3) throw DomainError("regular n-gon needs n >= 3");
    Polygon p;
    const double theta = 2.0 * std::numbers::pi / n;
    for (int i = 1; i <= n; ++i) p.vertices.emplace_back(std::cos(i * theta), std::sin(i * theta));
    return p;
}

Polygon equilateral_triangle() {
    return Polygon{{Vec2(0, 0), Vec2(1, 0), Vec2(0.5, std::sqrt(3.0) / 2.0)}};
}

Polyhedron unit_cube() { return box(1.0, 1.0, 1.0); }

Polyhedron box(double a, double b, double c) {
    if (!(a > 0.0 && b > 0.0 && c > 0.0)) throw DomainError("box sides must be positive");
    std::vector<Vec3> v = {{0, 0, 0}, {a, 0, 0}, {a, b, 0}, {0, b, 0},
                           {0, 0, c}, {a, 0, c}, {a, b, c}, {0, b, c}};
    std::vector<Loop> faces = {{0, 3, 2, 1}, {4, 5, 6, 7}, {0, 1, 5, 4},
                               {1, 2, 6, 5}, {2, 3, 7, 6}, {3, 0, 4, 7}};
    return make_polyhedron(std::move(v), std::move(faces));
}

Polyhedron tetrahedron(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d) {
    // With (b-a, c-a, d-a) positively oriented, d sees the base a,b,c as
    // counter-clockwise, so the base seen from outside is a,c,b.
    return make_polyhedron({a, b, c, d}, {{0, 2, 1}, {0, 1, 3}, {1, 2, 3}, {2, 0, 3}});
}

Polyhedron regular_tetrahedron() {
    const double s3 = std::sqrt(3.0);
    return tetrahedron(Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0.5, s3 / 2.0, 0),
                       Vec3(0.5, s3 / 6.0, std::sqrt(2.0 / 3.0)));
}

Polyhedron square_pyramid() {
    std::vector<Vec3> v = {{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0}, {0.5, 0.5, 1}};
    std::vector<Loop> faces = {{0, 3, 2, 1}, {0, 1, 4}, {1, 2, 4}, {2, 3, 4}, {3, 0, 4}};
    return make_polyhedron(std::move(v), std::move(faces));
}

Polyhedron prism(const Polygon& base, const Vec3& offset) {
    if (!(offset.z() > 0.0)) throw DomainError("prism offset must point upward");
    const std::size_t n = base.size();
    std::vector<Vec3> v;
    v.reserve(2 * n);
    for (const Vec2& b : base.vertices) v.emplace_back(b.x(), b.y(), 0.0);
    for (const Vec2& b : base.vertices) v.emplace_back(b.x() + offset.x(), b.y() + offset.y(), offset.z());
    std::vector<Loop> faces;
    Loop bottom, top;
    for (std::size_t i = 0; i < n; ++i) {
        bottom.push_back(n - 1 - i);
        top.push_back(n + i);
    }
    faces.push_back(bottom);
    faces.push_back(top);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t j = (i + 1) % n;
        faces.push_back({i, j, n + j, n + i});
    }
    return make_polyhedron(std::move(v), std::move(faces));
}

Shape builtin_shape(std::string_view name) {
    const auto colon = name.find(':');
    const std::string_view kind = name.substr(0, colon);
    const std::string_view arg = colon == std::string_view::npos ? "" : name.substr(colon + 1);
    auto no_arg = [&] {
        if (!arg.empty()) throw DomainError("shape '" + std::string(kind) + "' takes no parameters");
    };
    if (kind == "unit-square") {
        no_arg();
        return unit_square();
    }
    if (kind == "unit-cube") {
        no_arg();
        return unit_cube();
    }
    if (kind == "square-pyramid") {
        no_arg();
        return square_pyramid();
    }
    if (kind == "regular-ngon") {
        const double n = parse_number(arg, "n-gon size");
        if (n != std::floor(n) || n < 3 || n > 1e6) throw DomainError("regular-ngon needs an integer n >= 3");
        return regular_ngon(static_cast<int>(n));
    }
    if (kind == "regular-simplex") {
        const double d = parse_number(arg, "simplex dimension");
        if (d == 2) return equilateral_triangle();
        if (d == 3) return regular_tetrahedron();
        throw DomainError("regular-simplex supports d = 2 or 3");
    }
    if (kind == "box") {
        const auto sides = parse_list(arg, "box side");
        if (sides.size() == 2) return rectangle(sides[0], sides[1]);
        if (sides.size() == 3) return box(sides[0], sides[1], sides[2]);
        throw DomainError("box needs 2 or 3 side lengths");
    }
    throw DomainError("unknown builtin shape '" + std::string(name) + "'");
}

}  // namespace wachspress
