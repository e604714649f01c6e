#pragma once

#include <array>
#include <cmath>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include "lattice/network.hpp"

namespace lattice {

using Mat12 = Eigen::Matrix<double, 12, 12>;
using Vec12 = Eigen::Matrix<double, 12, 1>;
using Vec6 = Eigen::Matrix<double, 6, 1>;

inline constexpr int kDofsPerNode = 6;

enum Dof : int { Ux = 0, Uy, Uz, Rx, Ry, Rz };

inline const char* dof_name(int dof) {
    static constexpr const char* names[] = {"ux", "uy", "uz", "rx", "ry", "rz"};
    return names[dof];
}

// ---------------------------------------------------------------------------
// Material and section
// ---------------------------------------------------------------------------

/// Isotropic linear-elastic material in N, mm, MPa, kg.
struct Material {
    double elastic_modulus = 2800.0;  // MPa
    double poisson_ratio = 0.33;
    double density = 1.27e-6;  // kg/mm^3

    double shear_modulus() const { return elastic_modulus / (2.0 * (1.0 + poisson_ratio)); }

    static Material petg() { return {2800.0, 0.33, 1.27e-6}; }

    void validate() const {
        if (!(elastic_modulus > 0.0)) throw Error(ErrorKind::ParameterDomain, "elastic modulus must be positive");
        if (!(poisson_ratio > -1.0 && poisson_ratio < 0.5)) throw Error(ErrorKind::ParameterDomain, "poisson ratio must lie in (-1, 0.5)");
        if (!(density > 0.0)) throw Error(ErrorKind::ParameterDomain, "density must be positive");
    }
};

struct SectionProperties {
    double area = 0.0;          // mm^2
    double inertia_y = 0.0;     // mm^4, bending in the local x-z plane
    double inertia_z = 0.0;     // mm^4, bending in the local x-y plane
    double torsion = 0.0;       // mm^4, Saint-Venant constant
    double extreme_fiber = 0.0; // mm

    /// Square of side t. J uses the Saint-Venant coefficient 0.1406, not the
    /// polar moment, which would double the torsional stiffness.
    static SectionProperties square(double side) {
        const double t4 = side * side * side * side;
        return {side * side, t4 / 12.0, t4 / 12.0, 0.1406 * t4, side / 2.0};
    }
};

// ---------------------------------------------------------------------------
// Element kinematics
// ---------------------------------------------------------------------------

/// Rows are the element's local x, y, z axes expressed in global coordinates.
struct ElementRotation {
    Mat3 matrix = Mat3::Identity();

    Vec3 axis_x() const { return matrix.row(0).transpose(); }
    Vec3 axis_y() const { return matrix.row(1).transpose(); }
    Vec3 axis_z() const { return matrix.row(2).transpose(); }
};

/// Local axes for the element a->b.
///
/// Local x runs along the element. For non-vertical elements local y is
/// normalize(Z x x), so local z is the component of global Z normal to the
/// element. When |x . Z| > 0.999 the auxiliary vector switches to global Y
/// and local y is that vector's component normal to the element. In both
/// cases local z = x cross y. Element end-force signs depend on this choice.
inline ElementRotation element_rotation(const Vec3& a, const Vec3& b) {
    const Vec3 d = b - a;
    const double len = d.norm();
    if (!(len > 0.0)) throw Error(ErrorKind::Geometry, "element endpoints coincide");
    const Vec3 x = d / len;
    Vec3 y;
    if (std::abs(x.z()) > 0.999) {
        const Vec3 aux = Vec3::UnitY();
        y = (aux - aux.dot(x) * x).normalized();
    } else {
        y = Vec3::UnitZ().cross(x).normalized();
    }
    const Vec3 z = x.cross(y);
    ElementRotation r;
    r.matrix.row(0) = x.transpose();
    r.matrix.row(1) = y.transpose();
    r.matrix.row(2) = z.transpose();
    return r;
}

/// Block-diagonal T with four copies of R, mapping global element DOFs to local.
inline Mat12 transformation(const ElementRotation& r) {
    Mat12 t = Mat12::Zero();
    for (int b = 0; b < 4; ++b) t.block<3, 3>(3 * b, 3 * b) = r.matrix;
    return t;
}

/// Euler-Bernoulli space-frame stiffness in local coordinates, DOF order
/// (u, v, w, rx, ry, rz) at end a then end b.
inline Mat12 local_stiffness(const SectionProperties& s, const Material& m, double length) {
    if (!(length > 0.0)) throw Error(ErrorKind::Geometry, "element length must be positive");
    const double e = m.elastic_modulus;
    const double l = length;
    const double l2 = l * l;
    const double l3 = l2 * l;
    Mat12 k = Mat12::Zero();

    auto set = [&k](int i, int j, double v) {
        k(i, j) = v;
        k(j, i) = v;
    };

    const double axial = e * s.area / l;
    set(0, 0, axial);
    set(6, 6, axial);
    set(0, 6, -axial);

    const double torsion = m.shear_modulus() * s.torsion / l;
    set(3, 3, torsion);
    set(9, 9, torsion);
    set(3, 9, -torsion);

    // bending in the x-y plane: v, rz
    const double iz = s.inertia_z;
    set(1, 1, 12.0 * e * iz / l3);
    set(7, 7, 12.0 * e * iz / l3);
    set(1, 7, -12.0 * e * iz / l3);
    set(1, 5, 6.0 * e * iz / l2);
    set(1, 11, 6.0 * e * iz / l2);
    set(5, 7, -6.0 * e * iz / l2);
    set(7, 11, -6.0 * e * iz / l2);
    set(5, 5, 4.0 * e * iz / l);
    set(11, 11, 4.0 * e * iz / l);
    set(5, 11, 2.0 * e * iz / l);

    // bending in the x-z plane: w, ry
    const double iy = s.inertia_y;
    set(2, 2, 12.0 * e * iy / l3);
    set(8, 8, 12.0 * e * iy / l3);
    set(2, 8, -12.0 * e * iy / l3);
    set(2, 4, -6.0 * e * iy / l2);
    set(2, 10, -6.0 * e * iy / l2);
    set(4, 8, 6.0 * e * iy / l2);
    set(8, 10, 6.0 * e * iy / l2);
    set(4, 4, 4.0 * e * iy / l);
    set(10, 10, 4.0 * e * iy / l);
    set(4, 10, 2.0 * e * iy / l);

    return k;
}

// ---------------------------------------------------------------------------
// Model
// ---------------------------------------------------------------------------

struct NodeConstraint {
    int node = 0;
    std::array<bool, 6> fixed{true, true, true, true, true, true};
};

/// Forces in N (first three) and moments in N*mm (last three).
struct NodalLoad {
    int node = 0;
    Vec6 values = Vec6::Zero();
};

struct LoadCase {
    std::string name;
    std::vector<NodalLoad> loads;
};

struct StructuralModel {
    BeamNetwork network;
    Material material;
    std::vector<SectionProperties> sections;  // one per strut
    std::vector<NodeConstraint> constraints;
    std::vector<LoadCase> load_cases;

    /// Square sections taken from each strut's side.
    static StructuralModel from_network(BeamNetwork network, const Material& material) {
        StructuralModel m;
        m.network = std::move(network);
        m.material = material;
        m.sections.reserve(m.network.struts.size());
        for (const auto& s : m.network.struts) m.sections.push_back(SectionProperties::square(s.side));
        return m;
    }

    std::size_t dof_count() const { return kDofsPerNode * network.nodes.size(); }

    std::size_t dof_index(int node_id, int dof) const {
        return kDofsPerNode * network.index_of(node_id) + static_cast<std::size_t>(dof);
    }

    /// Per-DOF fixed flags, size 6N.
    std::vector<bool> fixed_mask() const {
        std::vector<bool> mask(dof_count(), false);
        for (const auto& c : constraints) {
            for (int d = 0; d < kDofsPerNode; ++d) {
                if (c.fixed[static_cast<std::size_t>(d)]) mask[dof_index(c.node, d)] = true;
            }
        }
        return mask;
    }

    Eigen::VectorXd load_vector(const LoadCase& lc) const {
        Eigen::VectorXd f = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dof_count()));
        for (const auto& l : lc.loads) {
            f.segment<6>(static_cast<Eigen::Index>(dof_index(l.node, 0))) += l.values;
        }
        return f;
    }

    void validate() const {
        material.validate();
        validate_network(network);
        if (sections.size() != network.struts.size()) {
            throw Error(ErrorKind::Mismatch, "section count does not match strut count");
        }
        for (const auto& c : constraints) (void)network.index_of(c.node);
        for (const auto& lc : load_cases)
            for (const auto& l : lc.loads) (void)network.index_of(l.node);
    }
};

// ---------------------------------------------------------------------------
// Assembly
// ---------------------------------------------------------------------------

using SparseMatrix = Eigen::SparseMatrix<double>;

/// Element stiffness in global coordinates, T^T K T.
inline Mat12 global_element_stiffness(const BeamNetwork& net, std::size_t strut, const SectionProperties& section,
                                      const Material& material) {
    const auto& s = net.struts[strut];
    const Vec3& a = net.position(s.node_a);
    const Vec3& b = net.position(s.node_b);
    const Mat12 t = transformation(element_rotation(a, b));
    return t.transpose() * local_stiffness(section, material, (b - a).norm()) * t;
}

/// Scatter-add of all element matrices; no connectivity requirement.
inline SparseMatrix assemble_stiffness(const BeamNetwork& net, const std::vector<SectionProperties>& sections,
                                       const Material& material) {
    const auto n = static_cast<Eigen::Index>(kDofsPerNode * net.nodes.size());
    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(144 * net.struts.size());
    for (std::size_t e = 0; e < net.struts.size(); ++e) {
        const Mat12 ke = global_element_stiffness(net, e, sections[e], material);
        const std::array<std::size_t, 2> base{kDofsPerNode * net.index_of(net.struts[e].node_a),
                                              kDofsPerNode * net.index_of(net.struts[e].node_b)};
        for (int i = 0; i < 12; ++i) {
            const auto gi = static_cast<Eigen::Index>(base[static_cast<std::size_t>(i / 6)] + static_cast<std::size_t>(i % 6));
            for (int j = 0; j < 12; ++j) {
                const auto gj = static_cast<Eigen::Index>(base[static_cast<std::size_t>(j / 6)] + static_cast<std::size_t>(j % 6));
                triplets.emplace_back(gi, gj, ke(i, j));
            }
        }
    }
    SparseMatrix k(n, n);
    k.setFromTriplets(triplets.begin(), triplets.end());
    return k;
}

/// Global stiffness of a validated, connected model.
inline SparseMatrix assemble(const StructuralModel& model) {
    model.validate();
    const int components = component_count(model.network);
    if (components > 1) {
        throw Error(ErrorKind::Disconnected, "network has " + std::to_string(components) + " disconnected components");
    }
    return assemble_stiffness(model.network, model.sections, model.material);
}

/// Number of eigenvalues below 1e-10 * max diagonal. With
/// `apply_constraints` the fixed DOFs are removed first.
inline int rigid_body_mode_count(const StructuralModel& model, bool apply_constraints = false) {
    const SparseMatrix k = assemble_stiffness(model.network, model.sections, model.material);
    Eigen::MatrixXd dense(k);
    if (apply_constraints) {
        const auto mask = model.fixed_mask();
        std::vector<Eigen::Index> keep;
        for (std::size_t i = 0; i < mask.size(); ++i)
            if (!mask[i]) keep.push_back(static_cast<Eigen::Index>(i));
        dense = Eigen::MatrixXd(dense(keep, keep));
    }
    if (dense.rows() == 0) return 0;
    const double scale = dense.diagonal().cwiseAbs().maxCoeff();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(dense, Eigen::EigenvaluesOnly);
    int count = 0;
    for (Eigen::Index i = 0; i < eig.eigenvalues().size(); ++i) {
        if (eig.eigenvalues()(i) < 1e-10 * scale) ++count;
    }
    return count;
}

// ---------------------------------------------------------------------------
// Results
// ---------------------------------------------------------------------------

struct SolveResult {
    std::string load_case;
    Eigen::VectorXd displacements;  // 6N: translations mm, rotations rad
    Eigen::VectorXd reactions;      // 6N, nonzero only at fixed DOFs
    std::vector<Vec12> element_forces;  // local end forces per strut
    std::vector<double> element_stress; // beam stress estimate per strut, MPa
    double max_displacement = 0.0;
    int max_displacement_node = 0;
    double residual = 0.0;  // ||K d - f|| / ||f|| over free DOFs
    std::vector<std::string> warnings;

    Vec3 translation(const BeamNetwork& net, int id) const {
        return displacements.segment<3>(static_cast<Eigen::Index>(kDofsPerNode * net.index_of(id)));
    }
    Vec3 rotation(const BeamNetwork& net, int id) const {
        return displacements.segment<3>(static_cast<Eigen::Index>(kDofsPerNode * net.index_of(id) + 3));
    }
    double max_stress() const {
        double m = 0.0;
        for (double s : element_stress) m = std::max(m, s);
        return m;
    }
};

struct ElementForces {
    std::vector<Vec12> end_forces;
    std::vector<double> stress;
};

/// Extreme-fiber von Mises estimate at one end: axial plus the larger
/// bending stress, combined with the torsional shear.
inline double beam_stress_estimate(const SectionProperties& s, double axial, double torque, double moment_y, double moment_z) {
    const double normal = std::abs(axial) / s.area +
                          std::max(std::abs(moment_y) * s.extreme_fiber / s.inertia_y,
                                   std::abs(moment_z) * s.extreme_fiber / s.inertia_z);
    const double shear = std::abs(torque) * s.extreme_fiber / s.torsion;
    return std::sqrt(normal * normal + 3.0 * shear * shear);
}

/// Local end forces K_local * T * d_e for every strut, plus stress estimates.
inline ElementForces recover_element_forces(const StructuralModel& model, const Eigen::VectorXd& displacements) {
    if (static_cast<std::size_t>(displacements.size()) != model.dof_count()) {
        throw Error(ErrorKind::Mismatch, "displacement vector has " + std::to_string(displacements.size()) +
                                             " entries, model has " + std::to_string(model.dof_count()) + " DOFs");
    }
    if (model.sections.size() != model.network.struts.size()) {
        throw Error(ErrorKind::Mismatch, "section count does not match strut count");
    }
    ElementForces out;
    out.end_forces.reserve(model.network.struts.size());
    out.stress.reserve(model.network.struts.size());
    for (std::size_t e = 0; e < model.network.struts.size(); ++e) {
        const auto& s = model.network.struts[e];
        const Vec3& a = model.network.position(s.node_a);
        const Vec3& b = model.network.position(s.node_b);
        const Mat12 t = transformation(element_rotation(a, b));
        Vec12 de;
        de.head<6>() = displacements.segment<6>(static_cast<Eigen::Index>(model.dof_index(s.node_a, 0)));
        de.tail<6>() = displacements.segment<6>(static_cast<Eigen::Index>(model.dof_index(s.node_b, 0)));
        const Vec12 f = local_stiffness(model.sections[e], model.material, (b - a).norm()) * (t * de);
        out.end_forces.push_back(f);
        const auto& sec = model.sections[e];
        out.stress.push_back(std::max(beam_stress_estimate(sec, f(0), f(3), f(4), f(5)),
                                      beam_stress_estimate(sec, f(6), f(9), f(10), f(11))));
    }
    return out;
}

inline ElementForces recover_element_forces(const StructuralModel& model, const SolveResult& result) {
    return recover_element_forces(model, result.displacements);
}

// ---------------------------------------------------------------------------
// Solver
// ---------------------------------------------------------------------------

/// Factorizes the reduced stiffness of a model once; load cases may then be
/// solved independently (and concurrently, the factorization is read-only).
///
/// Reduced systems under 600 DOFs use a dense LDLT, larger ones a sparse
/// simplicial LDLT. Either way a pivot below 1e-12 of the largest marks a
/// mechanism, reported with the DOFs that dominate each zero-energy mode.
class StaticSolver {
public:
    static constexpr std::size_t kDenseLimit = 600;
    static constexpr double kPivotTolerance = 1e-12;

    explicit StaticSolver(StructuralModel model) : model_(std::move(model)) {
        k_ = assemble(model_);
        const auto mask = model_.fixed_mask();
        free_index_.assign(mask.size(), -1);
        for (std::size_t i = 0; i < mask.size(); ++i) {
            if (!mask[i]) {
                free_index_[i] = static_cast<Eigen::Index>(free_dofs_.size());
                free_dofs_.push_back(static_cast<Eigen::Index>(i));
            }
        }
        factorize();
    }

    StaticSolver(const StaticSolver&) = delete;
    StaticSolver& operator=(const StaticSolver&) = delete;

    const StructuralModel& model() const { return model_; }
    const SparseMatrix& stiffness() const { return k_; }
    bool uses_dense() const { return dense_ != nullptr; }
    std::size_t free_dof_count() const { return free_dofs_.size(); }

    SolveResult solve(const LoadCase& lc) const {
        for (const auto& l : lc.loads) (void)model_.network.index_of(l.node);
        const Eigen::VectorXd f = model_.load_vector(lc);
        Eigen::VectorXd f_free(static_cast<Eigen::Index>(free_dofs_.size()));
        for (std::size_t i = 0; i < free_dofs_.size(); ++i) f_free(static_cast<Eigen::Index>(i)) = f(free_dofs_[i]);

        const Eigen::VectorXd d_free = dense_ ? Eigen::VectorXd(dense_->solve(f_free)) : Eigen::VectorXd(sparse_->solve(f_free));

        SolveResult r;
        r.load_case = lc.name;
        r.displacements = Eigen::VectorXd::Zero(f.size());
        for (std::size_t i = 0; i < free_dofs_.size(); ++i) r.displacements(free_dofs_[i]) = d_free(static_cast<Eigen::Index>(i));

        const Eigen::VectorXd kd = k_ * r.displacements;
        r.reactions = Eigen::VectorXd::Zero(f.size());
        double res2 = 0.0;
        for (Eigen::Index i = 0; i < f.size(); ++i) {
            if (free_index_[static_cast<std::size_t>(i)] < 0) {
                r.reactions(i) = kd(i) - f(i);
            } else {
                res2 += (kd(i) - f(i)) * (kd(i) - f(i));
            }
        }
        const double fnorm = f_free.norm();
        r.residual = fnorm > 0.0 ? std::sqrt(res2) / fnorm : std::sqrt(res2);

        for (const auto& n : model_.network.nodes) {
            const double mag = r.translation(model_.network, n.id).norm();
            if (mag > r.max_displacement) {
                r.max_displacement = mag;
                r.max_displacement_node = n.id;
            }
        }
        if (r.max_displacement_node == 0 && !model_.network.nodes.empty()) r.max_displacement_node = model_.network.nodes.front().id;

        auto forces = recover_element_forces(model_, r.displacements);
        r.element_forces = std::move(forces.end_forces);
        r.element_stress = std::move(forces.stress);
        r.warnings = slenderness_warnings();
        return r;
    }

    SolveResult solve(std::size_t load_case_index) const { return solve(model_.load_cases.at(load_case_index)); }

private:
    void factorize() {
        const auto n = static_cast<Eigen::Index>(free_dofs_.size());
        if (n == 0) throw Error(ErrorKind::Mechanism, "every DOF is fixed; nothing to solve");
        const SparseMatrix reduced = reduced_stiffness();
        double min_pivot = 0.0;
        double max_pivot = 0.0;
        if (static_cast<std::size_t>(n) < kDenseLimit) {
            dense_ = std::make_unique<Eigen::LDLT<Eigen::MatrixXd>>(Eigen::MatrixXd(reduced));
            const auto d = dense_->vectorD();
            min_pivot = d.minCoeff();
            max_pivot = d.cwiseAbs().maxCoeff();
        } else {
            sparse_ = std::make_unique<Eigen::SimplicialLDLT<SparseMatrix>>(reduced);
            if (sparse_->info() != Eigen::Success) throw Error(ErrorKind::Mechanism, "sparse factorization failed" + describe_modes(reduced));
            const auto d = sparse_->vectorD();
            min_pivot = d.minCoeff();
            max_pivot = d.cwiseAbs().maxCoeff();
        }
        if (!(min_pivot > kPivotTolerance * max_pivot)) {
            throw Error(ErrorKind::Mechanism, "reduced stiffness is singular or indefinite (insufficient constraints)" +
                                                  describe_modes(reduced));
        }
    }

    SparseMatrix reduced_stiffness() const {
        std::vector<Eigen::Triplet<double>> triplets;
        for (Eigen::Index col = 0; col < k_.outerSize(); ++col) {
            for (SparseMatrix::InnerIterator it(k_, col); it; ++it) {
                const Eigen::Index ri = free_index_[static_cast<std::size_t>(it.row())];
                const Eigen::Index ci = free_index_[static_cast<std::size_t>(it.col())];
                if (ri >= 0 && ci >= 0) triplets.emplace_back(ri, ci, it.value());
            }
        }
        const auto n = static_cast<Eigen::Index>(free_dofs_.size());
        SparseMatrix reduced(n, n);
        reduced.setFromTriplets(triplets.begin(), triplets.end());
        return reduced;
    }

    /// Names the zero-energy modes of the reduced system by their largest
    /// components. Skipped for systems too large for a dense eigensolve.
    std::string describe_modes(const SparseMatrix& reduced) const {
        if (reduced.rows() > 3000) return "";
        const Eigen::MatrixXd dense(reduced);
        const double scale = dense.diagonal().cwiseAbs().maxCoeff();
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(dense);
        std::ostringstream out;
        int modes = 0;
        for (Eigen::Index m = 0; m < eig.eigenvalues().size(); ++m) {
            if (eig.eigenvalues()(m) >= 1e-10 * scale) continue;
            ++modes;
            if (modes > 12) continue;
            const Eigen::VectorXd v = eig.eigenvectors().col(m);
            std::vector<Eigen::Index> order(static_cast<std::size_t>(v.size()));
            std::iota(order.begin(), order.end(), 0);
            const auto top = std::min<std::size_t>(3, order.size());
            std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(top), order.end(),
                              [&v](Eigen::Index a, Eigen::Index b) { return std::abs(v(a)) > std::abs(v(b)); });
            out << "; mode " << modes << ":";
            for (std::size_t k = 0; k < top; ++k) {
                const auto g = static_cast<std::size_t>(free_dofs_[static_cast<std::size_t>(order[k])]);
                out << " node " << model_.network.nodes[g / kDofsPerNode].id << " " << dof_name(static_cast<int>(g % kDofsPerNode));
            }
        }
        if (modes == 0) return "";
        return " [" + std::to_string(modes) + " zero-energy mode(s)" + out.str() + "]";
    }

    std::vector<std::string> slenderness_warnings() const {
        std::vector<std::string> out;
        for (std::size_t e = 0; e < model_.network.struts.size(); ++e) {
            const auto& s = model_.network.struts[e];
            const double side = 2.0 * model_.sections[e].extreme_fiber;
            if (model_.network.length(s) < 5.0 * side) {
                out.push_back("strut " + std::to_string(s.node_a) + "-" + std::to_string(s.node_b) +
                              " has L/t below 5; Euler-Bernoulli results are approximate");
            }
        }
        return out;
    }

    StructuralModel model_;
    SparseMatrix k_;
    std::vector<Eigen::Index> free_dofs_;
    std::vector<Eigen::Index> free_index_;
    std::unique_ptr<Eigen::LDLT<Eigen::MatrixXd>> dense_;
    std::unique_ptr<Eigen::SimplicialLDLT<SparseMatrix>> sparse_;
};

inline SolveResult solve_static(const StructuralModel& model, const LoadCase& lc) {
    return StaticSolver(model).solve(lc);
}

inline double strain_energy(const SparseMatrix& k, const Eigen::VectorXd& d) { return 0.5 * d.dot(k * d); }

}  // namespace lattice
