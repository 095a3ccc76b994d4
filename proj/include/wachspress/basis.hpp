#ifndef WACHSPRESS_BASIS_HPP
#define WACHSPRESS_BASIS_HPP

#include <span>
#include <vector>

#include <Eigen/Core>

#include "wachspress/errors.hpp"
#include "wachspress/geometry.hpp"

namespace wachspress {

/// Coordinate values and gradients of every vertex at one point.
template <int Dim>
struct BasisEval {
    using Vector = Eigen::Matrix<double, Dim, 1>;

    std::vector<double> phi;
    std::vector<Vector> dphi;

    std::size_t size() const noexcept { return phi.size(); }
};

using BasisEval2d = BasisEval<2>;
using BasisEval3d = BasisEval<3>;

/// Wachspress coordinates on a convex polygon. Throws PointNotInterior when
/// some h_i(x) <= 1e-12 diam(P).
BasisEval2d wachspress_2d(const Polygon& p, const Vec2& x);

/// Wachspress coordinates on a convex polyhedron, including vertices with
/// more than three incident faces (fan formula). Requires vertex_faces.
BasisEval3d wachspress_3d(const Polyhedron& p, const Vec3& x);

/// As above with precomputed face planes, so repeated evaluation on one cell
/// skips the Newell normals. `planes[f]` must belong to face f of p.
BasisEval3d wachspress_3d(const Polyhedron& p, std::span<const FacePlane> planes, const Vec3& x);

/// Sum of the coordinates of the vertices of one face (edge i for polygons).
double mu_f(const Polygon& p, const Vec2& x, Index edge);
double mu_f(const Polyhedron& p, const Vec3& x, Index face);

template <int Dim>
struct Interpolant {
    double value;
    Eigen::Matrix<double, Dim, 1> gradient;
};

/// I(u)(x) and its gradient from nodal values u(v).
template <int Dim>
Interpolant<Dim> interpolate(const BasisEval<Dim>& basis, std::span<const double> nodal_values) {
    if (nodal_values.size() != basis.size())
        throw ShapeError("expected " + std::to_string(basis.size()) + " nodal values, got " +
                         std::to_string(nodal_values.size()));
    Interpolant<Dim> out{0.0, Eigen::Matrix<double, Dim, 1>::Zero()};
    for (std::size_t i = 0; i < basis.size(); ++i) {
        out.value += nodal_values[i] * basis.phi[i];
        out.gradient += nodal_values[i] * basis.dphi[i];
    }
    return out;
}

}  // namespace wachspress

#endif
