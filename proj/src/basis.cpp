#include "wachspress/basis.hpp"

#include <algorithm>
#include <limits>

#include <Eigen/Dense>

namespace wachspress {

namespace {

constexpr double kInteriorTolerance = 1e-12;

double det2(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

double det3(const Vec3& a, const Vec3& b, const Vec3& c) { return a.dot(b.cross(c)); }

template <int Dim>
void finish(BasisEval<Dim>& out, const std::vector<double>& w,
            const std::vector<typename BasisEval<Dim>::Vector>& R) {
    using Vector = typename BasisEval<Dim>::Vector;
    const std::size_t n = w.size();
    double wsum = 0.0;
    for (double wi : w) wsum += wi;
    out.phi.resize(n);
    for (std::size_t i = 0; i < n; ++i) out.phi[i] = w[i] / wsum;

    Vector phiR = Vector::Zero();
    for (std::size_t i = 0; i < n; ++i) phiR += out.phi[i] * R[i];
    out.dphi.resize(n);
    for (std::size_t i = 0; i < n; ++i) out.dphi[i] = out.phi[i] * (R[i] - phiR);
}

}  // namespace

BasisEval2d wachspress_2d(const Polygon& p, const Vec2& x) {
    const std::size_t n = p.size();
    if (n < 3) throw ShapeError("polygon needs at least 3 vertices");
    const auto normals = outward_normals_2d(p);

    std::vector<Vec2> scaled(n);
    double min_h = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        const double h = h_f(normals[i], p.vertices[i], x);
        min_h = std::min(min_h, h);
        scaled[i] = normals[i] / h;
    }
    if (!(min_h > kInteriorTolerance * diameter(p))) throw PointNotInterior(min_h);

    std::vector<double> w(n);
    std::vector<Vec2> R(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t im1 = (i + n - 1) % n;
        w[i] = det2(scaled[im1], scaled[i]);
        R[i] = scaled[im1] + scaled[i];
    }
    BasisEval2d out;
    finish<2>(out, w, R);
    return out;
}

BasisEval3d wachspress_3d(const Polyhedron& p, const Vec3& x) {
    const auto planes = face_planes(p);
    return wachspress_3d(p, planes, x);
}

BasisEval3d wachspress_3d(const Polyhedron& p, std::span<const FacePlane> planes, const Vec3& x) {
    const std::size_t n = p.size();
    if (p.vertex_faces.size() != n)
        throw BadTopology("vertex_faces missing; call order_incident_faces first");
    if (planes.size() != p.faces.size()) throw ShapeError("one plane per face expected");

    double min_h = std::numeric_limits<double>::infinity();
    for (const FacePlane& plane : planes) min_h = std::min(min_h, h_f(plane, x));
    if (!(min_h > kInteriorTolerance * diameter(p))) throw PointNotInterior(min_h);

    std::vector<double> w(n);
    std::vector<Vec3> R(n);
    std::vector<Vec3> scaled;
    for (std::size_t i = 0; i < n; ++i) {
        const Loop& cycle = p.vertex_faces[i];
        const std::size_t k = cycle.size();
        scaled.resize(k);
        for (std::size_t j = 0; j < k; ++j) {
            const Vec3& normal = planes[cycle[j]].unit_normal;
            scaled[j] = normal / (p.vertices[i] - x).dot(normal);
        }
        // Fan of triangles (j, j+1, k-1) over the polar face of the vertex.
        double wi = 0.0;
        Vec3 Ri = Vec3::Zero();
        for (std::size_t j = 0; j + 2 < k; ++j) {
            const double wloc = det3(scaled[j], scaled[j + 1], scaled[k - 1]);
            wi += wloc;
            Ri += wloc * (scaled[j] + scaled[j + 1] + scaled[k - 1]);
        }
        w[i] = wi;
        R[i] = Ri / wi;
    }
    BasisEval3d out;
    finish<3>(out, w, R);
    return out;
}

double mu_f(const Polygon& p, const Vec2& x, Index edge) {
    const auto basis = wachspress_2d(p, x);
    return basis.phi.at(edge) + basis.phi.at((edge + 1) % p.size());
}

double mu_f(const Polyhedron& p, const Vec3& x, Index face) {
    const auto basis = wachspress_3d(p, x);
    double sum = 0.0;
    for (Index v : p.faces.at(face)) sum += basis.phi[v];
    return sum;
}

}  // namespace wachspress
