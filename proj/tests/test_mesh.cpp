#include <cmath>
#include <fstream>
#include <sstream>

#include "doctest.h"

#include "wachspress/errors.hpp"
#include "wachspress/mesh.hpp"
#include "wachspress/shapes.hpp"

using namespace wachspress;
using doctest::Approx;

namespace {

std::string to_text(const PolyMesh& mesh) {
    std::ostringstream out;
    write_mesh(mesh, out);
    return out.str();
}

PolyMesh from_text(const std::string& text) {
    std::istringstream in(text);
    return read_mesh(in);
}

std::size_t parse_error_line(const std::string& text) {
    try {
        from_text(text);
    } catch (const ParseError& e) {
        return e.line();
    }
    return 0;
}

bool on_cube_boundary(const Vec3& p) {
    for (int k = 0; k < 3; ++k)
        if (std::abs(p[k]) < 1e-12 || std::abs(p[k] - 1) < 1e-12) return true;
    return false;
}

double mesh_volume(const PolyMesh& mesh) {
    const auto owners = face_owners(mesh);
    double total = 0.0;
    for (Index c = 0; c < mesh.cells.size(); ++c) total += volume(cell_view(mesh, owners, c).poly);
    return total;
}

const char* kUnitCube = R"(polymesh 1
# one cube
points 8
0 0 0
1 0 0
1 1 0
0 1 0
0 0 1
1 0 1
1 1 1
0 1 1
faces 6
0 3 2 1
4 5 6 7
0 1 5 4
1 2 6 5
2 3 7 6
3 0 4 7
cells 1
0 1 2 3 4 5
)";

}  // namespace

TEST_CASE("single-cube file") {
    const PolyMesh mesh = from_text(kUnitCube);
    check_mesh(mesh);
    CHECK(mesh.points.size() == 8);
    CHECK(mesh.cells.size() == 1);
    CHECK(mesh.boundary_nodes.size() == 8);
    const auto s = stats(mesh);
    CHECK(s.h == Approx(std::sqrt(3.0)).epsilon(1e-15));
}

TEST_CASE("hex meshes") {
    SUBCASE("n = 1 is the unit cube") {
        const auto s = stats(generate_hex_mesh(1));
        CHECK(s.n_cells == 1);
        CHECK(s.min_h_star_scaled == Approx(1 / std::sqrt(3.0)).epsilon(1e-14));
    }
    SUBCASE("n = 2") {
        const PolyMesh mesh = generate_hex_mesh(2);
        CHECK(mesh.points.size() == 27);
        CHECK(mesh.cells.size() == 8);
        CHECK(mesh.boundary_nodes.size() == 26);
        CHECK(stats(mesh).h == Approx(std::sqrt(3.0) / 2).epsilon(1e-15));
        // round trip through the file format
        const PolyMesh again = from_text(to_text(mesh));
        check_mesh(again);
        CHECK(again.boundary_nodes.size() == 26);
    }
    SUBCASE("n = 4") {
        const PolyMesh mesh = generate_hex_mesh(4);
        CHECK(mesh.points.size() == 125);
        std::vector<int> incident(mesh.points.size(), 0);
        for (Index c = 0; c < mesh.cells.size(); ++c)
            for (Index v : cell_view(mesh, c).nodes) ++incident[v];
        for (Index v = 0; v < mesh.points.size(); ++v)
            if (!on_cube_boundary(mesh.points[v])) CHECK(incident[v] == 8);
        for (Index c = 0; c < mesh.cells.size(); ++c) CHECK(validate(cell_view(mesh, c).poly).is_simple);
        CHECK(mesh_volume(mesh) == Approx(1.0).epsilon(1e-12));
    }
    CHECK_THROWS_AS(generate_hex_mesh(0), DomainError);
}

TEST_CASE("prism meshes") {
    std::vector<MeshStats> levels;
    for (int level = 0; level <= 3; ++level) {
        const PolyMesh mesh = generate_prism_mesh(level);
        check_mesh(mesh);
        CHECK(mesh_volume(mesh) == Approx(1.0).epsilon(1e-10));
        const auto owners = face_owners(mesh);
        for (Index c = 0; c < mesh.cells.size(); ++c) CHECK(validate(cell_view(mesh, owners, c).poly).is_simple);

        std::vector<Index> expected;
        for (Index v = 0; v < mesh.points.size(); ++v)
            if (on_cube_boundary(mesh.points[v])) expected.push_back(v);
        CHECK(boundary(mesh) == expected);
        CHECK(mesh.boundary_nodes == expected);

        for (Index f = 0; f < mesh.faces.size(); ++f) {
            CHECK(owners[f].size() >= 1);
            CHECK(owners[f].size() <= 2);
        }
        levels.push_back(stats(mesh));
    }
    CHECK(levels[0].n_cells >= 12);
    CHECK(levels[0].n_cells <= 48);
    for (std::size_t l = 1; l < levels.size(); ++l) {
        const double ratio = levels[l - 1].h / levels[l].h;
        CHECK(ratio >= 2 / 1.2);
        CHECK(ratio <= 2 * 1.2);
    }
    CHECK(levels[3].min_h_star_scaled >= 0.9 * levels[1].min_h_star_scaled);
    for (const auto& s : levels) {
        CHECK(s.min_h_star_scaled > 0.0);
        CHECK(s.min_h_star_scaled <= 1.0);
    }
    CHECK_THROWS_AS(generate_prism_mesh(-1), DomainError);
}

TEST_CASE("save, load, save is byte-identical") {
    const PolyMesh mesh = generate_prism_mesh(1);
    const std::string first = to_text(mesh);
    const std::string second = to_text(from_text(first));
    CHECK(first == second);

    const auto path = std::filesystem::temp_directory_path() / "wachspress_roundtrip.mesh";
    save(mesh, path);
    const PolyMesh loaded = load(path);
    std::filesystem::remove(path);
    CHECK(to_text(loaded) == first);
    CHECK(loaded.points == mesh.points);
}

TEST_CASE("parse errors carry line numbers") {
    std::string bad_vertex = kUnitCube;
    bad_vertex.replace(bad_vertex.find("3 0 4 7"), 7, "3 0 4 9");
    CHECK(parse_error_line(bad_vertex) == 18);

    std::string bad_face = kUnitCube;
    bad_face.replace(bad_face.find("0 1 2 3 4 5"), 11, "0 1 2 3 4 6");
    CHECK(parse_error_line(bad_face) == 20);

    CHECK(parse_error_line("polymesh 2\n") == 1);
    CHECK(parse_error_line("polymesh 1\npoints 1\n0 0\n") == 3);
    CHECK(parse_error_line("polymesh 1\npoints 1\n0 0 zero\n") == 3);
    CHECK(parse_error_line("polymesh 1\npoints 2\n0 0 0\n") > 0);
    CHECK(parse_error_line("") > 0);
    CHECK_THROWS_AS(load("/nonexistent/file.mesh"), Error);
}

TEST_CASE("invalid geometry is reported with the cell id") {
    std::string dented = kUnitCube;
    dented.replace(dented.find("1 1 1"), 5, "0.6 0.6 0.6");
    const auto path = std::filesystem::temp_directory_path() / "wachspress_dented.mesh";
    {
        std::ofstream out(path);
        out << dented;
    }
    try {
        load(path);
        FAIL("expected NotConvex");
    } catch (const NotConvex& e) {
        CHECK(std::string(e.what()).find("cell 0") != std::string::npos);
    }
    std::filesystem::remove(path);
}

TEST_CASE("builder matches shared faces and rejects same-orientation reuse") {
    MeshBuilder b;
    for (const Vec3& v : unit_cube().vertices) b.add_point(v);
    for (const Vec3& v : unit_cube().vertices) b.add_point(v + Vec3(1, 0, 0));
    const auto cube_faces = unit_cube().faces;
    b.add_cell(cube_faces);
    auto shifted = cube_faces;
    for (Loop& f : shifted)
        for (Index& v : f) v += 8;
    // the shared wall x = 1 of the first cube is x = 0 of the second
    for (Loop& f : shifted)
        for (Index& v : f) {
            const Index local = v - 8;
            if (local == 0) v = 1;
            if (local == 3) v = 2;
            if (local == 4) v = 5;
            if (local == 7) v = 6;
        }
    b.add_cell(shifted);
    const PolyMesh mesh = std::move(b).finish();
    CHECK(mesh.faces.size() == 11);
    CHECK(mesh.boundary_nodes.size() == 12);

    MeshBuilder bad;
    for (const Vec3& v : unit_cube().vertices) bad.add_point(v);
    bad.add_cell(cube_faces);
    CHECK_THROWS_AS(bad.add_cell(cube_faces), BadTopology);
}
