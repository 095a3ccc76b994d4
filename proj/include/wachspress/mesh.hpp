#ifndef WACHSPRESS_MESH_HPP
#define WACHSPRESS_MESH_HPP

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "wachspress/geometry.hpp"

namespace wachspress {

/// Conforming polyhedral mesh. Each face is stored once, ordered
/// counter-clockwise as seen from outside its lower-index owning cell; the
/// other owner (if any) sees it reversed.
struct PolyMesh {
    std::vector<Vec3> points;
    std::vector<Loop> faces;
    std::vector<Loop> cells;          ///< face indices per cell
    std::vector<Index> boundary_nodes; ///< sorted
};

/// One cell as a standalone polyhedron plus the global id of each local vertex.
struct CellView {
    Polyhedron poly;
    std::vector<Index> nodes;
};

struct MeshStats {
    std::size_t n_nodes = 0;
    std::size_t n_cells = 0;
    double h = 0.0;                 ///< largest cell diameter
    double min_h_star_scaled = 0.0; ///< min over cells of h_*/diam
};

/// Owning cells of each face (one or two entries), cells in increasing order.
std::vector<std::vector<Index>> face_owners(const PolyMesh& mesh);

CellView cell_view(const PolyMesh& mesh, Index cell);
/// Same, with owners precomputed by face_owners() for repeated use.
CellView cell_view(const PolyMesh& mesh, const std::vector<std::vector<Index>>& owners, Index cell);

/// Nodes on faces owned by a single cell, sorted.
std::vector<Index> boundary(const PolyMesh& mesh);

MeshStats stats(const PolyMesh& mesh);

/// Structural checks plus geometry.validate on every cell. Throws BadTopology
/// for dangling references or over-shared faces and NotConvex (naming the
/// cell) for bad geometry.
void check_mesh(const PolyMesh& mesh);

/// Parses the text format; throws ParseError with a 1-based line number.
/// Does not run geometric validation (load() does).
PolyMesh read_mesh(std::istream& in);
void write_mesh(const PolyMesh& mesh, std::ostream& out);
PolyMesh load(const std::filesystem::path& path);
void save(const PolyMesh& mesh, const std::filesystem::path& path);

/// n^3 axis-aligned cubes filling (0,1)^3.
PolyMesh generate_hex_mesh(int n);

/// Hexagonal tiling of the unit square, clipped to the square and extruded
/// into 2^(level+1) layers. Tiles shrink by half per level.
PolyMesh generate_prism_mesh(int level);

/// Incremental builder for conforming meshes: cells are added with faces
/// oriented outward from that cell; shared faces are matched by vertex set.
class MeshBuilder {
public:
    Index add_point(const Vec3& p);
    void add_cell(const std::vector<Loop>& outward_faces);
    PolyMesh finish() &&;

private:
    PolyMesh mesh_;
    std::map<Loop, Index> face_ids_;  // sorted vertex set -> face
    std::vector<std::size_t> face_uses_;
};

}  // namespace wachspress

#endif
