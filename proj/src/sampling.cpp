#include "wachspress/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "wachspress/errors.hpp"

namespace wachspress {

namespace {

constexpr unsigned kPrimes[] = {2, 3, 5};
constexpr double kMargin = 1e-9;

template <int Dim, typename Shape, typename Point, typename Distance>
std::vector<Point> sample(const Shape& p, std::size_t count, std::uint64_t seed,
                          const Distance& distance) {
    Point lo = p.vertices.front();
    Point hi = p.vertices.front();
    for (const Point& v : p.vertices) {
        lo = lo.cwiseMin(v);
        hi = hi.cwiseMax(v);
    }
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    Point shift;
    for (int k = 0; k < Dim; ++k) shift[k] = unit(rng);

    const double margin = kMargin * diameter(p);
    std::vector<Point> out;
    out.reserve(count);
    const std::uint64_t max_tries = 1000 * static_cast<std::uint64_t>(count) + 1000;
    for (std::uint64_t i = 1; out.size() < count; ++i) {
        if (i > max_tries) throw DegenerateGeometry("rejection sampling found too few interior points");
        Point x;
        for (int k = 0; k < Dim; ++k) {
            const double u = std::fmod(halton(i, kPrimes[k]) + shift[k], 1.0);
            x[k] = lo[k] + u * (hi[k] - lo[k]);
        }
        if (distance(x) > margin) out.push_back(x);
    }
    return out;
}

}  // namespace

double halton(std::uint64_t index, unsigned base) {
    double result = 0.0;
    double f = 1.0;
    while (index > 0) {
        f /= base;
        result += f * static_cast<double>(index % base);
        index /= base;
    }
    return result;
}

double min_face_distance(const Polygon& p, const Vec2& x) {
    const auto normals = outward_normals_2d(p);
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < p.size(); ++i)
        best = std::min(best, h_f(normals[i], p.vertices[i], x));
    return best;
}

double min_face_distance(const Polyhedron& p, const Vec3& x) {
    double best = std::numeric_limits<double>::infinity();
    for (const FacePlane& plane : face_planes(p)) best = std::min(best, h_f(plane, x));
    return best;
}

std::vector<Vec2> interior_samples(const Polygon& p, std::size_t count, std::uint64_t seed) {
    const auto normals = outward_normals_2d(p);
    return sample<2, Polygon, Vec2>(p, count, seed, [&](const Vec2& x) {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < p.size(); ++i)
            best = std::min(best, h_f(normals[i], p.vertices[i], x));
        return best;
    });
}

std::vector<Vec3> interior_samples(const Polyhedron& p, std::size_t count, std::uint64_t seed) {
    const auto planes = face_planes(p);
    return sample<3, Polyhedron, Vec3>(p, count, seed, [&](const Vec3& x) {
        double best = std::numeric_limits<double>::infinity();
        for (const FacePlane& plane : planes) best = std::min(best, h_f(plane, x));
        return best;
    });
}

}  // namespace wachspress
