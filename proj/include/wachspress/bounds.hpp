#ifndef WACHSPRESS_BOUNDS_HPP
#define WACHSPRESS_BOUNDS_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "wachspress/geometry.hpp"

namespace wachspress {

/// lambda(x) = sum over vertices of |grad phi_v(x)|.
double lambda_at(const Polygon& p, const Vec2& x);
double lambda_at(const Polyhedron& p, const Vec3& x);

/// Closed-form limit of lambda at polygon vertex i, from the two edges
/// meeting there. Throws DegenerateGeometry for collinear edges.
double lambda_at_vertex_2d(const Polygon& p, Index i);

/// Closed-form limit of lambda at a simple polyhedron vertex, from the three
/// edge vectors to its neighbors. Throws NonSimpleVertex otherwise.
double lambda_at_vertex_3d(const Polyhedron& p, Index v);

enum class ShapeTag { simplex, hyper_rectangle, regular_ngon, polygon_angle };

std::string to_string(ShapeTag tag);

/// Shape-specific refinement of the general bracket. `lambda_lower` and
/// `lambda_upper` bound Lambda itself (equal when Lambda is known exactly);
/// `gradient_upper` bounds every single |grad phi_v| (polygon-angle only).
struct SpecialBound {
    ShapeTag tag;
    std::optional<double> lambda_lower;
    std::optional<double> lambda_upper;
    std::optional<double> gradient_upper;
};

struct BoundReport {
    int dimension = 0;
    std::size_t samples = 0;
    double h_star = 0.0;
    double lambda_max_sampled = 0.0;
    double lambda_vertex_max = 0.0;   ///< 0 when no vertex is simple
    double upper_bound_general = 0.0; ///< 2d / h_*
    double lower_bound_general = 0.0; ///< 1 / h_*
    std::optional<SpecialBound> special_bound;
    std::vector<Index> non_simple_vertices;

    double lambda_estimate() const { return std::max(lambda_max_sampled, lambda_vertex_max); }
};

/// Brackets Lambda = sup lambda: sampled maximum over `budget` interior
/// Halton points plus one probe per vertex at distance 1e-6 diam(P) towards
/// the vertex centroid, closed-form vertex values, and the general bounds.
/// Throws NotConvex.
BoundReport estimate_Lambda(const Polygon& p, std::size_t budget, std::uint64_t seed);
BoundReport estimate_Lambda(const Polyhedron& p, std::size_t budget, std::uint64_t seed);

/// Flat key/value view used for JSON and CSV output. Absent optionals are
/// omitted; values are printed with shortest round-trip formatting.
std::vector<std::pair<std::string, std::string>> to_key_values(const BoundReport& report);

/// 2d / h_*. Throws DomainError unless d >= 2 and h_star > 0.
double bound_general(int d, double h_star);

/// (d + 1) / h_*, attained by the regular simplex.
double bound_simplex(int d, double h_star);

struct HyperRectangleBound {
    double lambda;  ///< exact Lambda
    double h_star;  ///< shortest side
};

/// Exact Lambda for a box with the given side lengths (any d >= 1).
HyperRectangleBound bound_hyper_rectangle(std::span<const double> sides);

struct RegularNgonReference {
    double h_star;
    double lambda_vertex;
    double lower_bound;
    double upper_bound;
};

/// Closed forms for the regular n-gon inscribed in the unit circle.
RegularNgonReference regular_ngon_reference(int n);

struct PolygonAngleBound {
    double bound;      ///< 4 / (d_* sin(beta_*) sin(beta^*))
    double min_edge;   ///< d_*
    double min_angle;  ///< beta_*
    double max_angle;  ///< beta^*
    Index min_angle_vertex;
    Index max_angle_vertex;
};

/// Gradient bound in terms of the shortest edge and extreme interior angles.
PolygonAngleBound polygon_angle_bound(const Polygon& p);

}  // namespace wachspress

#endif
