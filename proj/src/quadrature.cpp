#include "wachspress/quadrature.hpp"

#include <utility>

#include "wachspress/errors.hpp"

namespace wachspress {

namespace {

constexpr double kAlpha = 0.5854101966249685;
constexpr double kBeta = 0.1381966011250105;

}  // namespace

double tet_volume(const Tet& t) {
    return (t[1] - t[0]).dot((t[2] - t[0]).cross(t[3] - t[0])) / 6.0;
}

std::vector<Tet> tetrahedralize(const Polyhedron& cell) {
    const Vec3 c = vertex_centroid(cell);
    std::vector<Tet> tets;
    for (const Loop& face : cell.faces) {
        Vec3 cf = Vec3::Zero();
        for (Index v : face) cf += cell.vertices[v];
        cf /= static_cast<double>(face.size());
        for (std::size_t i = 0; i < face.size(); ++i) {
            Tet t = {c, cf, cell.vertices[face[i]], cell.vertices[face[(i + 1) % face.size()]]};
            if (tet_volume(t) < 0.0) std::swap(t[2], t[3]);
            if (!(tet_volume(t) > 0.0)) throw NotConvex("degenerate tetrahedron in centroid fan");
            tets.push_back(t);
        }
    }
    return tets;
}

std::array<QuadPoint, 4> rule_tet4(const Tet& t) {
    const double vol = tet_volume(t);
    if (!(vol > 0.0)) throw DegenerateGeometry("tetrahedron is inverted or flat");
    std::array<QuadPoint, 4> pts;
    for (int i = 0; i < 4; ++i) {
        Vec3 x = Vec3::Zero();
        for (int j = 0; j < 4; ++j) x += (i == j ? kAlpha : kBeta) * t[j];
        pts[i] = QuadPoint{x, vol / 4.0};
    }
    return pts;
}

std::vector<QuadPoint> cell_points(const Polyhedron& cell) {
    std::vector<QuadPoint> out;
    for (const Tet& t : tetrahedralize(cell)) {
        const auto pts = rule_tet4(t);
        out.insert(out.end(), pts.begin(), pts.end());
    }
    return out;
}

std::vector<QuadPoint> face_points(const Polyhedron& cell, Index face) {
    const Loop& loop = cell.faces.at(face);
    Vec3 cf = Vec3::Zero();
    for (Index v : loop) cf += cell.vertices[v];
    cf /= static_cast<double>(loop.size());
    std::vector<QuadPoint> out;
    for (std::size_t i = 0; i < loop.size(); ++i) {
        const Vec3& a = cell.vertices[loop[i]];
        const Vec3& b = cell.vertices[loop[(i + 1) % loop.size()]];
        const double area = 0.5 * (a - cf).cross(b - cf).norm();
        if (!(area > 0.0)) throw DegenerateGeometry("degenerate triangle in face fan");
        const std::array<Vec3, 3> corners = {cf, a, b};
        for (int k = 0; k < 3; ++k) {
            Vec3 x = Vec3::Zero();
            for (int j = 0; j < 3; ++j) x += (j == k ? 2.0 / 3.0 : 1.0 / 6.0) * corners[j];
            out.push_back(QuadPoint{x, area / 3.0});
        }
    }
    return out;
}

double integrate_cell(const Polyhedron& cell, const std::function<double(const Vec3&)>& f) {
    double sum = 0.0;
    for (const QuadPoint& q : cell_points(cell)) sum += q.weight * f(q.position);
    return sum;
}

}  // namespace wachspress
