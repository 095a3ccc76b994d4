#include "wachspress/mesh.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string_view>

#include "wachspress/errors.hpp"
#include "wachspress/format.hpp"

namespace wachspress {

namespace {

Loop sorted_copy(Loop loop) {
    std::sort(loop.begin(), loop.end());
    return loop;
}

// True if b is a as traversed in the opposite direction (any rotation).
bool is_reversed_cycle(const Loop& a, const Loop& b) {
    if (a.size() != b.size() || a.empty()) return false;
    const auto it = std::find(b.begin(), b.end(), a.front());
    if (it == b.end()) return false;
    const std::size_t n = a.size();
    const std::size_t start = static_cast<std::size_t>(it - b.begin());
    for (std::size_t i = 0; i < n; ++i)
        if (a[i] != b[(start + n - i) % n]) return false;
    return true;
}

class LineReader {
public:
    explicit LineReader(std::istream& in) : in_(in) {}

    // Next non-comment, non-blank line; false at end of input.
    bool next(std::string& line) {
        while (std::getline(in_, line)) {
            ++number_;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            const auto first = line.find_first_not_of(" \t");
            if (first == std::string::npos || line[first] == '#') continue;
            return true;
        }
        return false;
    }

    std::string require(std::string_view what) {
        std::string line;
        if (!next(line)) throw ParseError(number_ + 1, "unexpected end of file, expected " + std::string(what));
        return line;
    }

    std::size_t number() const noexcept { return number_; }

private:
    std::istream& in_;
    std::size_t number_ = 0;
};

std::vector<std::string_view> split(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
        std::size_t j = i;
        while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
        if (j > i) out.push_back(line.substr(i, j - i));
        i = j;
    }
    return out;
}

Index parse_index(std::string_view token, std::size_t line) {
    Index value = 0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc{} || ptr != token.data() + token.size())
        throw ParseError(line, "expected a non-negative integer, got '" + std::string(token) + "'");
    return value;
}

std::size_t parse_header(LineReader& reader, std::string_view keyword) {
    const std::string line = reader.require(keyword);
    const auto tokens = split(line);
    if (tokens.size() != 2 || tokens[0] != keyword)
        throw ParseError(reader.number(), "expected '" + std::string(keyword) + " <count>'");
    return parse_index(tokens[1], reader.number());
}

}  // namespace

std::vector<std::vector<Index>> face_owners(const PolyMesh& mesh) {
    std::vector<std::vector<Index>> owners(mesh.faces.size());
    for (Index c = 0; c < mesh.cells.size(); ++c)
        for (Index f : mesh.cells[c]) owners.at(f).push_back(c);
    return owners;
}

CellView cell_view(const PolyMesh& mesh, Index cell) {
    return cell_view(mesh, face_owners(mesh), cell);
}

CellView cell_view(const PolyMesh& mesh, const std::vector<std::vector<Index>>& owners, Index cell) {
    CellView view;
    for (Index f : mesh.cells.at(cell))
        view.nodes.insert(view.nodes.end(), mesh.faces[f].begin(), mesh.faces[f].end());
    std::sort(view.nodes.begin(), view.nodes.end());
    view.nodes.erase(std::unique(view.nodes.begin(), view.nodes.end()), view.nodes.end());

    auto local = [&](Index global) {
        return static_cast<Index>(std::lower_bound(view.nodes.begin(), view.nodes.end(), global) -
                                  view.nodes.begin());
    };
    Polyhedron poly;
    for (Index g : view.nodes) poly.vertices.push_back(mesh.points[g]);
    for (Index f : mesh.cells[cell]) {
        Loop loop;
        for (Index g : mesh.faces[f]) loop.push_back(local(g));
        if (owners[f].front() != cell) std::reverse(loop.begin(), loop.end());
        poly.faces.push_back(std::move(loop));
    }
    view.poly = order_incident_faces(std::move(poly));
    return view;
}

std::vector<Index> boundary(const PolyMesh& mesh) {
    const auto owners = face_owners(mesh);
    std::vector<Index> nodes;
    for (Index f = 0; f < mesh.faces.size(); ++f)
        if (owners[f].size() == 1) nodes.insert(nodes.end(), mesh.faces[f].begin(), mesh.faces[f].end());
    std::sort(nodes.begin(), nodes.end());
    nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
    return nodes;
}

MeshStats stats(const PolyMesh& mesh) {
    MeshStats s;
    s.n_nodes = mesh.points.size();
    s.n_cells = mesh.cells.size();
    s.min_h_star_scaled = mesh.cells.empty() ? 0.0 : 1.0;
    const auto owners = face_owners(mesh);
    for (Index c = 0; c < mesh.cells.size(); ++c) {
        const CellView view = cell_view(mesh, owners, c);
        const double diam = diameter(view.poly);
        s.h = std::max(s.h, diam);
        s.min_h_star_scaled = std::min(s.min_h_star_scaled, h_star(view.poly) / diam);
    }
    return s;
}

void check_mesh(const PolyMesh& mesh) {
    for (Index f = 0; f < mesh.faces.size(); ++f) {
        if (mesh.faces[f].size() < 3) throw BadTopology("face " + std::to_string(f) + " has fewer than 3 vertices");
        for (Index v : mesh.faces[f])
            if (v >= mesh.points.size())
                throw BadTopology("face " + std::to_string(f) + " references missing point " + std::to_string(v));
    }
    for (Index c = 0; c < mesh.cells.size(); ++c)
        for (Index f : mesh.cells[c])
            if (f >= mesh.faces.size())
                throw BadTopology("cell " + std::to_string(c) + " references missing face " + std::to_string(f));
    const auto owners = face_owners(mesh);
    for (Index f = 0; f < owners.size(); ++f)
        if (owners[f].empty() || owners[f].size() > 2)
            throw BadTopology("face " + std::to_string(f) + " is used by " + std::to_string(owners[f].size()) +
                              " cells");
    for (Index c = 0; c < mesh.cells.size(); ++c) {
        CellView view;
        try {
            view = cell_view(mesh, owners, c);
        } catch (const Error& e) {
            throw NotConvex("cell " + std::to_string(c) + ": " + e.what());
        }
        const auto report = validate(view.poly);
        if (!report.is_convex) {
            std::string what = "cell " + std::to_string(c) + " is not convex";
            if (!report.offending_entities.empty()) what += " (" + report.offending_entities.front() + ")";
            throw NotConvex(what);
        }
    }
}

PolyMesh read_mesh(std::istream& in) {
    LineReader reader(in);
    PolyMesh mesh;
    {
        const std::string line = reader.require("header");
        const auto tokens = split(line);
        if (tokens.size() != 2 || tokens[0] != "polymesh" || tokens[1] != "1")
            throw ParseError(reader.number(), "expected header 'polymesh 1'");
    }
    const std::size_t n_points = parse_header(reader, "points");
    mesh.points.reserve(n_points);
    for (std::size_t i = 0; i < n_points; ++i) {
        const std::string line = reader.require("point");
        const auto tokens = split(line);
        if (tokens.size() != 3) throw ParseError(reader.number(), "expected 3 coordinates");
        Vec3 p;
        for (int k = 0; k < 3; ++k) {
            const auto value = parse_double(tokens[k]);
            if (!value || !std::isfinite(*value))
                throw ParseError(reader.number(), "bad coordinate '" + std::string(tokens[k]) + "'");
            p[k] = *value;
        }
        mesh.points.push_back(p);
    }
    const std::size_t n_faces = parse_header(reader, "faces");
    mesh.faces.reserve(n_faces);
    for (std::size_t i = 0; i < n_faces; ++i) {
        const std::string line = reader.require("face");
        Loop loop;
        for (auto token : split(line)) {
            const Index v = parse_index(token, reader.number());
            if (v >= n_points)
                throw ParseError(reader.number(), "face references missing vertex " + std::to_string(v));
            loop.push_back(v);
        }
        if (loop.size() < 3) throw ParseError(reader.number(), "face needs at least 3 vertices");
        mesh.faces.push_back(std::move(loop));
    }
    const std::size_t n_cells = parse_header(reader, "cells");
    std::vector<std::size_t> uses(n_faces, 0);
    mesh.cells.reserve(n_cells);
    for (std::size_t i = 0; i < n_cells; ++i) {
        const std::string line = reader.require("cell");
        Loop cell;
        for (auto token : split(line)) {
            const Index f = parse_index(token, reader.number());
            if (f >= n_faces) throw ParseError(reader.number(), "cell references missing face " + std::to_string(f));
            if (++uses[f] > 2) throw ParseError(reader.number(), "face " + std::to_string(f) + " used by 3 cells");
            cell.push_back(f);
        }
        if (cell.size() < 4) throw ParseError(reader.number(), "cell needs at least 4 faces");
        mesh.cells.push_back(std::move(cell));
    }
    std::string extra;
    if (reader.next(extra)) throw ParseError(reader.number(), "unexpected trailing content");
    for (std::size_t f = 0; f < n_faces; ++f)
        if (uses[f] == 0) throw ParseError(reader.number(), "face " + std::to_string(f) + " belongs to no cell");
    mesh.boundary_nodes = boundary(mesh);
    return mesh;
}

void write_mesh(const PolyMesh& mesh, std::ostream& out) {
    out << "polymesh 1\n";
    out << "points " << mesh.points.size() << '\n';
    for (const Vec3& p : mesh.points)
        out << format_double(p.x()) << ' ' << format_double(p.y()) << ' ' << format_double(p.z()) << '\n';
    auto write_loops = [&out](const std::vector<Loop>& loops) {
        for (const Loop& loop : loops) {
            for (std::size_t i = 0; i < loop.size(); ++i) out << (i ? " " : "") << loop[i];
            out << '\n';
        }
    };
    out << "faces " << mesh.faces.size() << '\n';
    write_loops(mesh.faces);
    out << "cells " << mesh.cells.size() << '\n';
    write_loops(mesh.cells);
}

PolyMesh load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open mesh file " + path.string());
    PolyMesh mesh = read_mesh(in);
    check_mesh(mesh);
    return mesh;
}

void save(const PolyMesh& mesh, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write mesh file " + path.string());
    write_mesh(mesh, out);
    if (!out) throw Error("failed writing mesh file " + path.string());
}

Index MeshBuilder::add_point(const Vec3& p) {
    mesh_.points.push_back(p);
    return mesh_.points.size() - 1;
}

void MeshBuilder::add_cell(const std::vector<Loop>& outward_faces) {
    Loop cell;
    for (const Loop& loop : outward_faces) {
        auto [it, inserted] = face_ids_.try_emplace(sorted_copy(loop), mesh_.faces.size());
        if (inserted) {
            mesh_.faces.push_back(loop);
            face_uses_.push_back(1);
        } else {
            const Index f = it->second;
            if (face_uses_[f] != 1 || !is_reversed_cycle(mesh_.faces[f], loop))
                throw BadTopology("non-conforming face shared by cells");
            ++face_uses_[f];
        }
        cell.push_back(it->second);
    }
    mesh_.cells.push_back(std::move(cell));
}

PolyMesh MeshBuilder::finish() && {
    mesh_.boundary_nodes = boundary(mesh_);
    return std::move(mesh_);
}

PolyMesh generate_hex_mesh(int n) {
    if (n < 1) throw DomainError("hex mesh needs n >= 1");
    MeshBuilder builder;
    const double h = 1.0 / n;
    for (int k = 0; k <= n; ++k)
        for (int j = 0; j <= n; ++j)
            for (int i = 0; i <= n; ++i) builder.add_point(Vec3(i * h, j * h, k * h));
    const auto id = [n](int i, int j, int k) {
        return static_cast<Index>(i + (n + 1) * (j + (n + 1) * k));
    };
    for (int k = 0; k < n; ++k) {
        for (int j = 0; j < n; ++j) {
            for (int i = 0; i < n; ++i) {
                const std::array<Index, 8> v = {id(i, j, k),         id(i + 1, j, k),
                                                id(i + 1, j + 1, k), id(i, j + 1, k),
                                                id(i, j, k + 1),     id(i + 1, j, k + 1),
                                                id(i + 1, j + 1, k + 1), id(i, j + 1, k + 1)};
                builder.add_cell({{v[0], v[3], v[2], v[1]},
                                  {v[4], v[5], v[6], v[7]},
                                  {v[0], v[1], v[5], v[4]},
                                  {v[1], v[2], v[6], v[5]},
                                  {v[2], v[3], v[7], v[6]},
                                  {v[3], v[0], v[4], v[7]}});
            }
        }
    }
    return std::move(builder).finish();
}

namespace {

using LatticePoint = std::array<long, 2>;

// Clip a convex lattice polygon to lo <= coord[axis] (sign = +1) or
// coord[axis] <= hi (sign = -1). All crossings used by the prism tiling fall
// on lattice points, so integer arithmetic is exact.
std::vector<LatticePoint> clip(const std::vector<LatticePoint>& poly, int axis, long bound, int sign) {
    std::vector<LatticePoint> out;
    auto inside = [&](const LatticePoint& p) { return sign * (p[axis] - bound) >= 0; };
    for (std::size_t i = 0; i < poly.size(); ++i) {
        const LatticePoint& s = poly[(i + poly.size() - 1) % poly.size()];
        const LatticePoint& e = poly[i];
        const bool s_in = inside(s);
        const bool e_in = inside(e);
        if (s_in != e_in) {
            const long ds = s[axis] - bound;
            const long de = e[axis] - bound;
            const int other = 1 - axis;
            const long num = s[other] * de - e[other] * ds;
            const long den = de - ds;
            if (num % den != 0) throw Error("prism tiling crossing is off the lattice");
            LatticePoint x{};
            x[axis] = bound;
            x[other] = num / den;
            if (!(s_in && x == s)) out.push_back(x);
        }
        if (e_in && (out.empty() || out.back() != e)) out.push_back(e);
    }
    if (out.size() > 1 && out.front() == out.back()) out.pop_back();
    return out;
}

long twice_area(const std::vector<LatticePoint>& poly) {
    long a = 0;
    for (std::size_t i = 0; i < poly.size(); ++i) {
        const LatticePoint& p = poly[i];
        const LatticePoint& q = poly[(i + 1) % poly.size()];
        a += p[0] * q[1] - p[1] * q[0];
    }
    return a;
}

}  // namespace

PolyMesh generate_prism_mesh(int level) {
    if (level < 0 || level > 8) throw DomainError("prism mesh level must be in 0..8");
    // Lattice units: x in steps of 1/(3 k), y in steps of 1/(2 m). A tile
    // centred at (X, Y) has corners (X±2, Y) and (X±1, Y±1); column i sits
    // at X = 3 i, even columns at even Y and odd columns at odd Y. The square
    // edges then run through tile centres or along tile edges, so clipping
    // leaves halves and quarters but never slivers.
    const long k = 1L << (level + 1);
    const long m = k;
    const long layers = 1L << (level + 1);
    const long x_max = 3 * k;
    const long y_max = 2 * m;
    const long full_area = 12;  // twice the area of one whole tile

    std::vector<std::vector<LatticePoint>> tiles;
    for (long i = 0; i <= k; ++i) {
        const long X = 3 * i;
        for (long Y = (i % 2 == 0 ? 0 : 1); Y <= y_max; Y += 2) {
            std::vector<LatticePoint> tile = {{X + 2, Y}, {X + 1, Y + 1}, {X - 1, Y + 1},
                                              {X - 2, Y}, {X - 1, Y - 1}, {X + 1, Y - 1}};
            tile = clip(tile, 0, 0, +1);
            tile = clip(tile, 0, x_max, -1);
            tile = clip(tile, 1, 0, +1);
            tile = clip(tile, 1, y_max, -1);
            if (tile.size() < 3) continue;
            if (10 * twice_area(tile) < full_area)
                throw Error("prism tiling produced a sliver");
            tiles.push_back(std::move(tile));
        }
    }

    std::map<LatticePoint, Index> planar_ids;
    std::vector<LatticePoint> planar_points;
    std::vector<Loop> planar_cells;
    for (const auto& tile : tiles) {
        Loop loop;
        for (const LatticePoint& p : tile) {
            auto [it, inserted] = planar_ids.try_emplace(p, planar_points.size());
            if (inserted) planar_points.push_back(p);
            loop.push_back(it->second);
        }
        planar_cells.push_back(std::move(loop));
    }

    MeshBuilder builder;
    const Index np = planar_points.size();
    for (long l = 0; l <= layers; ++l)
        for (const LatticePoint& p : planar_points)
            builder.add_point(Vec3(static_cast<double>(p[0]) / static_cast<double>(x_max),
                                   static_cast<double>(p[1]) / static_cast<double>(y_max),
                                   static_cast<double>(l) / static_cast<double>(layers)));
    for (long l = 0; l < layers; ++l) {
        const Index below = static_cast<Index>(l) * np;
        const Index above = below + np;
        for (const Loop& loop : planar_cells) {
            const std::size_t n = loop.size();
            std::vector<Loop> faces;
            Loop bottom, top;
            for (std::size_t i = 0; i < n; ++i) {
                bottom.push_back(below + loop[n - 1 - i]);
                top.push_back(above + loop[i]);
            }
            faces.push_back(std::move(bottom));
            faces.push_back(std::move(top));
            for (std::size_t i = 0; i < n; ++i) {
                const Index a = loop[i];
                const Index b = loop[(i + 1) % n];
                faces.push_back({below + a, below + b, above + b, above + a});
            }
            builder.add_cell(faces);
        }
    }
    return std::move(builder).finish();
}

}  // namespace wachspress
