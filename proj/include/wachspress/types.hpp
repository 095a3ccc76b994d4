#ifndef WACHSPRESS_TYPES_HPP
#define WACHSPRESS_TYPES_HPP

#include <cstddef>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace wachspress {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Index = std::size_t;

/// A closed vertex loop given by indices into some vertex array.
using Loop = std::vector<Index>;

}  // namespace wachspress

#endif
