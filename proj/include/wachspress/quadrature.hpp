#ifndef WACHSPRESS_QUADRATURE_HPP
#define WACHSPRESS_QUADRATURE_HPP

#include <array>
#include <functional>
#include <vector>

#include "wachspress/geometry.hpp"

namespace wachspress {

using Tet = std::array<Vec3, 4>;

struct QuadPoint {
    Vec3 position;
    double weight;
};

/// Signed volume det(b-a, c-a, d-a)/6.
double tet_volume(const Tet& t);

/// Centroid-fan decomposition: for every face f and face edge (a, b), the tet
/// (c, c_f, a, b) with c the vertex centroid of the cell and c_f that of f.
/// Vertex order within each tet is chosen to make it positively oriented.
std::vector<Tet> tetrahedralize(const Polyhedron& cell);

/// Symmetric 4-point rule, exact for total degree <= 2: barycentric
/// (alpha, beta, beta, beta) and permutations, weight volume/4 each.
/// Throws DegenerateGeometry for non-positive volume.
std::array<QuadPoint, 4> rule_tet4(const Tet& t);

std::vector<QuadPoint> cell_points(const Polyhedron& cell);

/// Degree-2 rule on one face: the face is fanned from its vertex centroid
/// and each triangle gets the 3-point rule at barycentric (2/3, 1/6, 1/6).
/// Weights are areas; all points lie strictly inside the face.
std::vector<QuadPoint> face_points(const Polyhedron& cell, Index face);

double integrate_cell(const Polyhedron& cell, const std::function<double(const Vec3&)>& f);

}  // namespace wachspress

#endif
