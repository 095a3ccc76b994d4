#include "wachspress/fem.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <thread>

#include <Eigen/SparseCore>

#include "wachspress/basis.hpp"
#include "wachspress/errors.hpp"
#include "wachspress/format.hpp"
#include "wachspress/quadrature.hpp"

namespace wachspress {

std::vector<Vec3> boundary_flux(const Polyhedron& cell, std::span<const FacePlane> planes) {
    std::vector<Vec3> flux(cell.size(), Vec3::Zero());
    for (Index f = 0; f < cell.faces.size(); ++f) {
        const Loop& loop = cell.faces[f];
        // Right-handed frame (e1, e2, n) keeps the outward-ccw loop ccw in 2D.
        const Vec3 n = planes[f].unit_normal;
        const Vec3 origin = cell.vertices[loop[0]];
        const Vec3 e1 = (cell.vertices[loop[1]] - origin).normalized();
        const Vec3 e2 = n.cross(e1);
        auto local = [&](const Vec3& x) { return Vec2((x - origin).dot(e1), (x - origin).dot(e2)); };
        Polygon face;
        for (Index v : loop) face.vertices.push_back(local(cell.vertices[v]));
        for (const QuadPoint& q : face_points(cell, f)) {
            const auto basis = wachspress_2d(face, local(q.position));
            for (std::size_t k = 0; k < loop.size(); ++k) flux[loop[k]] += q.weight * basis.phi[k] * n;
        }
    }
    return flux;
}

ElementSystem element_system(const Polyhedron& cell, const ScalarField& f, GradientMode mode) {
    const std::size_t n = cell.size();
    const auto planes = face_planes(cell);
    const auto points = cell_points(cell);
    ElementSystem e{Eigen::MatrixXd::Zero(n, n), Eigen::VectorXd::Zero(n)};

    std::vector<BasisEval3d> bases;
    bases.reserve(points.size());
    for (const QuadPoint& q : points) bases.push_back(wachspress_3d(cell, planes, q.position));

    std::vector<Vec3> shift(n, Vec3::Zero());
    if (mode == GradientMode::corrected) {
        shift = boundary_flux(cell, planes);
        double vol = 0.0;
        for (std::size_t k = 0; k < points.size(); ++k) {
            vol += points[k].weight;
            for (std::size_t i = 0; i < n; ++i) shift[i] -= points[k].weight * bases[k].dphi[i];
        }
        for (Vec3& s : shift) s /= vol;
    }

    Eigen::Matrix<double, Eigen::Dynamic, 3> grads(n, 3);
    for (std::size_t k = 0; k < points.size(); ++k) {
        const QuadPoint& q = points[k];
        const auto& basis = bases[k];
        for (std::size_t i = 0; i < n; ++i) grads.row(i) = (basis.dphi[i] + shift[i]).transpose();
        e.stiffness.noalias() += q.weight * grads * grads.transpose();
        if (f) {
            const double fq = q.weight * f(q.position);
            for (std::size_t i = 0; i < n; ++i) e.load[i] += fq * basis.phi[i];
        }
    }
    return e;
}

SparseSystem assemble(const PolyMesh& mesh, const ScalarField& f, unsigned threads, GradientMode mode) {
    const std::size_t n_cells = mesh.cells.size();
    const auto owners = face_owners(mesh);
    std::vector<CellView> views(n_cells);
    std::vector<ElementSystem> elements(n_cells);

    auto work = [&](std::size_t begin, std::size_t end) {
        for (std::size_t c = begin; c < end; ++c) {
            views[c] = cell_view(mesh, owners, c);
            try {
                elements[c] = element_system(views[c].poly, f, mode);
            } catch (const PointNotInterior& e) {
                throw Error("quadrature point not interior in cell " + std::to_string(c) + ": " + e.what());
            }
        }
    };
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(n_cells, 1))));
    if (threads == 1) {
        work(0, n_cells);
    } else {
        std::vector<std::exception_ptr> errors(threads);
        {
            std::vector<std::jthread> pool;
            const std::size_t chunk = (n_cells + threads - 1) / threads;
            for (unsigned t = 0; t < threads; ++t) {
                const std::size_t begin = std::min(n_cells, t * chunk);
                const std::size_t end = std::min(n_cells, begin + chunk);
                pool.emplace_back([&, t, begin, end] {
                    try {
                        work(begin, end);
                    } catch (...) {
                        errors[t] = std::current_exception();
                    }
                });
            }
        }
        for (const auto& e : errors)
            if (e) std::rethrow_exception(e);
    }

    const std::size_t n = mesh.points.size();
    SparseSystem system;
    system.load = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
    std::vector<Eigen::Triplet<double>> triplets;
    for (std::size_t c = 0; c < n_cells; ++c) {
        const auto& nodes = views[c].nodes;
        const auto& e = elements[c];
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            system.load[static_cast<Eigen::Index>(nodes[i])] += e.load[static_cast<Eigen::Index>(i)];
            for (std::size_t j = 0; j < nodes.size(); ++j)
                triplets.emplace_back(static_cast<int>(nodes[i]), static_cast<int>(nodes[j]),
                                      e.stiffness(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
        }
    }
    system.stiffness.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    system.stiffness.setFromTriplets(triplets.begin(), triplets.end());
    system.dirichlet.assign(n, false);
    for (Index v : boundary(mesh)) system.dirichlet[v] = true;
    return system;
}

CgResult conjugate_gradient(const SparseMatrix& A, const Eigen::VectorXd& b, double rel_tol,
                            std::size_t max_iterations) {
    const Eigen::Index n = b.size();
    if (max_iterations == 0) max_iterations = 10 * static_cast<std::size_t>(std::max<Eigen::Index>(n, 1));
    CgResult result;
    result.x = Eigen::VectorXd::Zero(n);
    const double b_norm = b.norm();
    if (b_norm == 0.0) return result;

    Eigen::VectorXd inv_diag(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double d = A.coeff(i, i);
        if (!(d > 0.0)) throw SolveError("matrix has a non-positive diagonal entry", {});
        inv_diag[i] = 1.0 / d;
    }
    Eigen::VectorXd r = b;
    Eigen::VectorXd z = inv_diag.cwiseProduct(r);
    Eigen::VectorXd p = z;
    Eigen::VectorXd Ap(n);
    double rz = r.dot(z);
    while (result.iterations < max_iterations) {
        Ap.noalias() = A * p;
        const double pAp = p.dot(Ap);
        if (!(pAp > 0.0)) throw SolveError("matrix is not positive definite", result.residuals);
        const double alpha = rz / pAp;
        result.x += alpha * p;
        r -= alpha * Ap;
        ++result.iterations;
        const double rel = r.norm() / b_norm;
        result.residuals.push_back(rel);
        if (rel <= rel_tol) return result;
        z = inv_diag.cwiseProduct(r);
        const double rz_next = r.dot(z);
        p = z + (rz_next / rz) * p;
        rz = rz_next;
    }
    throw SolveError("conjugate gradients did not converge in " + std::to_string(max_iterations) + " iterations",
                     result.residuals);
}

FemSolution solve(const SparseSystem& system) {
    const Eigen::Index n = system.load.size();
    SparseMatrix A = system.stiffness;
    Eigen::VectorXd b = system.load;
    for (int k = 0; k < A.outerSize(); ++k) {
        for (SparseMatrix::InnerIterator it(A, k); it; ++it) {
            const bool fixed = system.dirichlet[static_cast<std::size_t>(it.row())] ||
                               system.dirichlet[static_cast<std::size_t>(it.col())];
            if (fixed) it.valueRef() = it.row() == it.col() ? 1.0 : 0.0;
        }
    }
    for (Eigen::Index i = 0; i < n; ++i)
        if (system.dirichlet[static_cast<std::size_t>(i)]) {
            b[i] = 0.0;
            if (A.coeff(i, i) != 1.0) A.coeffRef(i, i) = 1.0;
        }
    FemSolution sol;
    sol.nodal = conjugate_gradient(A, b).x;
    for (Eigen::Index i = 0; i < n; ++i)
        if (system.dirichlet[static_cast<std::size_t>(i)]) sol.nodal[i] = 0.0;
    return sol;
}

ErrorNorms error_norms(const PolyMesh& mesh, const Eigen::VectorXd& nodal, const ScalarField& u,
                       const VectorField& grad_u) {
    if (static_cast<std::size_t>(nodal.size()) != mesh.points.size())
        throw ShapeError("one nodal value per mesh point expected");
    const auto owners = face_owners(mesh);
    double err_l2 = 0.0, ref_l2 = 0.0, err_h1 = 0.0, ref_h1 = 0.0;
    std::vector<double> local;
    for (Index c = 0; c < mesh.cells.size(); ++c) {
        const CellView view = cell_view(mesh, owners, c);
        const auto planes = face_planes(view.poly);
        local.resize(view.nodes.size());
        for (std::size_t i = 0; i < view.nodes.size(); ++i)
            local[i] = nodal[static_cast<Eigen::Index>(view.nodes[i])];
        for (const QuadPoint& q : cell_points(view.poly)) {
            const auto basis = wachspress_3d(view.poly, planes, q.position);
            const auto uh = interpolate(basis, std::span<const double>(local));
            const double ue = u(q.position);
            const Vec3 ge = grad_u(q.position);
            err_l2 += q.weight * (ue - uh.value) * (ue - uh.value);
            ref_l2 += q.weight * ue * ue;
            err_h1 += q.weight * (ge - uh.gradient).squaredNorm();
            ref_h1 += q.weight * ge.squaredNorm();
        }
    }
    if (!(ref_l2 > 0.0) || !(ref_h1 > 0.0)) throw DomainError("exact solution has zero norm");
    return ErrorNorms{std::sqrt(err_l2 / ref_l2), std::sqrt(err_h1 / ref_h1)};
}

double model_solution(const Vec3& x) {
    return x.x() * x.y() * x.z() * (1 - x.x()) * (1 - x.y()) * (1 - x.z());
}

Vec3 model_gradient(const Vec3& x) {
    const double a = x.x() * (1 - x.x());
    const double b = x.y() * (1 - x.y());
    const double c = x.z() * (1 - x.z());
    return Vec3((1 - 2 * x.x()) * b * c, a * (1 - 2 * x.y()) * c, a * b * (1 - 2 * x.z()));
}

double model_source(const Vec3& x) {
    const double a = x.x() * (1 - x.x());
    const double b = x.y() * (1 - x.y());
    const double c = x.z() * (1 - x.z());
    return 2.0 * (b * c + a * c + a * b);
}

PolyMesh family_mesh(MeshFamily family, int level) {
    if (level < 0 || level > 8) throw DomainError("mesh level must be in 0..8");
    if (family == MeshFamily::hex) return generate_hex_mesh(1 << level);
    return generate_prism_mesh(level);
}

std::string family_name(MeshFamily family) { return family == MeshFamily::hex ? "hex" : "prism"; }

std::vector<ConvergenceRow> convergence_study(MeshFamily family, int first, int last, unsigned threads,
                                              GradientMode mode) {
    if (first > last) throw DomainError("empty level range");
    std::vector<ConvergenceRow> rows;
    for (int level = first; level <= last; ++level) {
        const PolyMesh mesh = family_mesh(family, level);
        const SparseSystem system = assemble(mesh, model_source, threads, mode);
        const FemSolution sol = solve(system);
        const ErrorNorms err = error_norms(mesh, sol.nodal, model_solution, model_gradient);
        ConvergenceRow row;
        row.mesh = family_name(family) + "-" + std::to_string(level);
        row.n_nodes = mesh.points.size();
        row.h = stats(mesh).h;
        row.rel_l2 = err.rel_l2;
        row.rel_h1 = err.rel_h1_semi;
        if (!rows.empty()) {
            const ConvergenceRow& prev = rows.back();
            const double dh = std::log(prev.h / row.h);
            row.l2_rate = std::log(prev.rel_l2 / row.rel_l2) / dh;
            row.h1_rate = std::log(prev.rel_h1 / row.rel_h1) / dh;
        }
        rows.push_back(row);
    }
    return rows;
}

void write_convergence_csv(const std::vector<ConvergenceRow>& rows, std::ostream& out) {
    out << "mesh,n_nodes,h,rel_l2,l2_rate,rel_h1,h1_rate\n";
    for (const auto& r : rows) {
        out << r.mesh << ',' << r.n_nodes << ',' << format_double(r.h) << ',' << format_double(r.rel_l2) << ','
            << (r.l2_rate ? format_double(*r.l2_rate) : "") << ',' << format_double(r.rel_h1) << ','
            << (r.h1_rate ? format_double(*r.h1_rate) : "") << '\n';
    }
}

}  // namespace wachspress
