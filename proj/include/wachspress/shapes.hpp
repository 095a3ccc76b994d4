#ifndef WACHSPRESS_SHAPES_HPP
#define WACHSPRESS_SHAPES_HPP

#include <span>
#include <variant>

#include "wachspress/geometry.hpp"

namespace wachspress {

using Shape = std::variant<Polygon, Polyhedron>;

Polygon unit_square();
Polygon rectangle(double a, double b);
/// Regular n-gon with vertices (cos 2πi/n, sin 2πi/n), i = 1..n.
Polygon regular_ngon(int n);
/// Equilateral triangle with unit edges.
Polygon equilateral_triangle();

Polyhedron unit_cube();
Polyhedron box(double a, double b, double c);
/// Regular tetrahedron with unit edges.
Polyhedron regular_tetrahedron();
/// Tetrahedron with the given (positively oriented) vertices.
Polyhedron tetrahedron(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d);
/// Square base [0,1]^2 at z = 0 with apex (0.5, 0.5, 1); the apex is on 4 faces.
Polyhedron square_pyramid();
/// Prism over a counter-clockwise base polygon: bottom at z = 0, top cap
/// translated by `offset` (offset.z() > 0).
Polyhedron prism(const Polygon& base, const Vec3& offset);

/// Parses a builtin shape name: unit-square, unit-cube, regular-ngon:n,
/// regular-simplex:d (d = 2, 3), box:a,b[,c], square-pyramid.
/// Throws DomainError for unknown names or bad parameters.
Shape builtin_shape(std::string_view name);

}  // namespace wachspress

#endif
