#ifndef WACHSPRESS_FEM_HPP
#define WACHSPRESS_FEM_HPP

#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "wachspress/mesh.hpp"

namespace wachspress {

using SparseMatrix = Eigen::SparseMatrix<double>;
using ScalarField = std::function<double(const Vec3&)>;
using VectorField = std::function<Vec3(const Vec3&)>;

/// Galerkin system K d = f before boundary conditions.
struct SparseSystem {
    SparseMatrix stiffness;
    Eigen::VectorXd load;
    std::vector<bool> dirichlet;  ///< true on boundary nodes
};

struct FemSolution {
    Eigen::VectorXd nodal;
    const PolyMesh* mesh = nullptr;
};

struct ErrorNorms {
    double rel_l2 = 0.0;
    double rel_h1_semi = 0.0;
};

struct ElementSystem {
    Eigen::MatrixXd stiffness;
    Eigen::VectorXd load;
};

/// How basis gradients enter the element stiffness.
///   corrected: each gradient is shifted by a per-element constant so that its
///     quadrature sum equals the boundary integral of phi times the normal.
///     This passes the patch test under the inexact degree-2 rule and leaves
///     cells where the rule is already exact (boxes) unchanged.
///   plain: raw Wachspress gradients at the quadrature points.
enum class GradientMode { corrected, plain };

/// Element matrix and load vector of one cell, integrated with the 4-point
/// rule on its centroid-fan tetrahedra. Local numbering follows cell.vertices.
ElementSystem element_system(const Polyhedron& cell, const ScalarField& f,
                             GradientMode mode = GradientMode::corrected);

/// Integral over the boundary of phi_v times the outward normal, per vertex.
/// Equals the exact integral of grad phi_v over the cell.
std::vector<Vec3> boundary_flux(const Polyhedron& cell, std::span<const FacePlane> planes);

/// Global assembly. Element systems may be computed on `threads` workers;
/// accumulation always runs in cell order, so the result does not depend on
/// the thread count.
SparseSystem assemble(const PolyMesh& mesh, const ScalarField& f, unsigned threads = 1,
                      GradientMode mode = GradientMode::corrected);

struct CgResult {
    Eigen::VectorXd x;
    std::vector<double> residuals;  ///< relative residual per iteration
    std::size_t iterations = 0;
};

/// Jacobi-preconditioned conjugate gradients on an SPD matrix. Stops at
/// |r| <= rel_tol |b|; throws SolveError after max_iterations (0 means 10 n).
CgResult conjugate_gradient(const SparseMatrix& A, const Eigen::VectorXd& b, double rel_tol = 1e-10,
                            std::size_t max_iterations = 0);

/// Homogeneous Dirichlet conditions by symmetric elimination, then CG.
FemSolution solve(const SparseSystem& system);

ErrorNorms error_norms(const PolyMesh& mesh, const Eigen::VectorXd& nodal, const ScalarField& u,
                       const VectorField& grad_u);
inline ErrorNorms error_norms(const FemSolution& solution, const ScalarField& u, const VectorField& grad_u) {
    return error_norms(*solution.mesh, solution.nodal, u, grad_u);
}

/// Model problem on (0,1)^3: u = xyz(1-x)(1-y)(1-z), f = -laplace(u).
double model_solution(const Vec3& x);
Vec3 model_gradient(const Vec3& x);
double model_source(const Vec3& x);

enum class MeshFamily { hex, prism };

/// Hex level L has 2^L cells per axis; prism level L is generate_prism_mesh(L).
PolyMesh family_mesh(MeshFamily family, int level);
std::string family_name(MeshFamily family);

struct ConvergenceRow {
    std::string mesh;
    std::size_t n_nodes = 0;
    double h = 0.0;
    double rel_l2 = 0.0;
    std::optional<double> l2_rate;
    double rel_h1 = 0.0;
    std::optional<double> h1_rate;
};

/// Solves the model problem on levels first..last of a family.
std::vector<ConvergenceRow> convergence_study(MeshFamily family, int first, int last, unsigned threads = 1,
                                              GradientMode mode = GradientMode::corrected);

/// CSV with header mesh,n_nodes,h,rel_l2,l2_rate,rel_h1,h1_rate; missing
/// rates are left empty.
void write_convergence_csv(const std::vector<ConvergenceRow>& rows, std::ostream& out);

}  // namespace wachspress

#endif
