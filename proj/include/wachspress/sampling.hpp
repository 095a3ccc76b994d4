#ifndef WACHSPRESS_SAMPLING_HPP
#define WACHSPRESS_SAMPLING_HPP

#include <cstdint>
#include <vector>

#include "wachspress/geometry.hpp"

namespace wachspress {

/// Radical inverse of `index` in the given prime base.
double halton(std::uint64_t index, unsigned base);

/// Deterministic interior points: a Halton sequence over the bounding box,
/// shifted modulo 1 by a seed-dependent random offset, keeping only points
/// at distance > 1e-9 diam(P) from every face plane.
std::vector<Vec2> interior_samples(const Polygon& p, std::size_t count, std::uint64_t seed);
std::vector<Vec3> interior_samples(const Polyhedron& p, std::size_t count, std::uint64_t seed);

/// Smallest h_f(x) over all faces (edges), i.e. distance to the boundary for
/// interior x.
double min_face_distance(const Polygon& p, const Vec2& x);
double min_face_distance(const Polyhedron& p, const Vec3& x);

}  // namespace wachspress

#endif
