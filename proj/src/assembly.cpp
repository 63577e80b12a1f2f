#include "wabc/assembly.hpp"

#include "wabc/errors.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace wabc {

namespace {

double factorial(int n) {
    double r = 1.0;
    for (int i = 2; i <= n; ++i) r *= i;
    return r;
}

struct FacetRule {
    // Barycentric coordinates of each point w.r.t. the facet vertices, and
    // weights summing to 1 (multiply by the facet measure).
    std::vector<std::array<double, 3>> points;
    std::vector<double> weights;
};

const FacetRule& facet_rule(int dim) {
    // 2-point Gauss on edges; 3-point degree-2 rule on triangles.
    static const FacetRule edge = [] {
        const double g = 0.5 / std::sqrt(3.0);
        return FacetRule{{{0.5 + g, 0.5 - g, 0.0}, {0.5 - g, 0.5 + g, 0.0}}, {0.5, 0.5}};
    }();
    static const FacetRule tri{{{2.0 / 3.0, 1.0 / 6.0, 1.0 / 6.0}, {1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0}, {1.0 / 6.0, 1.0 / 6.0, 2.0 / 3.0}},
                               {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0}};
    return dim == 2 ? edge : tri;
}

double cos_deg(double deg) { return std::cos(deg * std::numbers::pi / 180.0); }

}  // namespace

double simplex_moment(int dim, double measure, std::span<const int> exponents) {
    int total = 0;
    double num = factorial(dim) * measure;
    for (int p : exponents) {
        total += p;
        num *= factorial(p);
    }
    return num / factorial(dim + total);
}

SparseMatrix assemble_mass(const Mesh& mesh, std::shared_ptr<const SparsityPattern> pattern) {
    SparseMatrix m(std::move(pattern));
    auto& v = m.values();
    const int npe = mesh.nodes_per_element();
    const double denom = static_cast<double>((mesh.dim() + 1) * (mesh.dim() + 2));
    for (std::size_t e = 0; e < mesh.num_elements(); ++e) {
        const double vol = element_measure(mesh, e);
        const auto slots = m.pattern().element_slots(e);
        for (int a = 0; a < npe; ++a)
            for (int b = 0; b < npe; ++b) v[static_cast<std::size_t>(slots[static_cast<std::size_t>(a * npe + b)])] += vol * (a == b ? 2.0 : 1.0) / denom;
    }
    return m;
}

SparseMatrix assemble_laplacian(const Mesh& mesh, std::shared_ptr<const SparsityPattern> pattern) {
    SparseMatrix l(std::move(pattern));
    auto& v = l.values();
    const int npe = mesh.nodes_per_element();
    for (std::size_t e = 0; e < mesh.num_elements(); ++e) {
        const double vol = element_measure(mesh, e);
        const auto g = basis_gradients(mesh, e);
        const auto slots = l.pattern().element_slots(e);
        for (int a = 0; a < npe; ++a)
            for (int b = 0; b < npe; ++b) {
                const double gg = g[a][0] * g[b][0] + g[a][1] * g[b][1] + g[a][2] * g[b][2];
                v[static_cast<std::size_t>(slots[static_cast<std::size_t>(a * npe + b)])] += vol * gg;
            }
    }
    return l;
}

SparseMatrix assemble_mass(const Mesh& mesh) { return assemble_mass(mesh, std::make_shared<SparsityPattern>(mesh)); }

SparseMatrix assemble_laplacian(const Mesh& mesh) {
    return assemble_laplacian(mesh, std::make_shared<SparsityPattern>(mesh));
}

void assemble_tensor_matrix(const Mesh& mesh, std::span<const double> v, double k, SparseMatrix& out) {
    auto& vals = out.values();
    std::fill(vals.begin(), vals.end(), 0.0);
    if (k == 0.0) return;
    const int npe = mesh.nodes_per_element();
    // int N_a N_b N_c = scale * (multiplicity factor): 1 distinct, 2 pair, 6 triple.
    const double base = factorial(mesh.dim()) / factorial(mesh.dim() + 3);
    for (std::size_t e = 0; e < mesh.num_elements(); ++e) {
        const double scale = k * base * element_measure(mesh, e);
        const auto el = mesh.element(e);
        std::array<double, 4> vl{};
        double vsum = 0.0;
        for (int a = 0; a < npe; ++a) {
            vl[a] = v[static_cast<std::size_t>(el[a])];
            vsum += vl[a];
        }
        const auto slots = out.pattern().element_slots(e);
        // sum_b v_b m(i,a,b): vsum + v_i + v_a for i != a, 2 vsum + 4 v_i for i == a.
        for (int i = 0; i < npe; ++i)
            for (int a = 0; a < npe; ++a) {
                double s = vsum + vl[i] + vl[a];
                if (i == a) s = 2.0 * vsum + 4.0 * vl[i];
                vals[static_cast<std::size_t>(slots[static_cast<std::size_t>(i * npe + a)])] += scale * s;
            }
    }
}

std::vector<double> tensor_action(const Mesh& mesh, std::span<const double> w, std::span<const double> v,
                                  const PhysParams& params) {
    if (w.size() != mesh.num_nodes() || v.size() != mesh.num_nodes())
        throw std::invalid_argument("tensor_action: vector length does not match node count");
    std::vector<double> out(mesh.num_nodes(), 0.0);
    const double k = params.k();
    if (k == 0.0) return out;
    const int npe = mesh.nodes_per_element();
    const double base = factorial(mesh.dim()) / factorial(mesh.dim() + 3);
    for (std::size_t e = 0; e < mesh.num_elements(); ++e) {
        const double scale = k * base * element_measure(mesh, e);
        const auto el = mesh.element(e);
        for (int i = 0; i < npe; ++i) {
            double s = 0.0;
            for (int a = 0; a < npe; ++a)
                for (int b = 0; b < npe; ++b) {
                    const double m = (a == b && b == i) ? 6.0 : (a == b || a == i || b == i) ? 2.0 : 1.0;
                    s += m * w[static_cast<std::size_t>(el[a])] * v[static_cast<std::size_t>(el[b])];
                }
            out[static_cast<std::size_t>(el[i])] += scale * s;
        }
    }
    return out;
}

double abc_weight(double psi_t, double cos_theta, double sigma, const PhysParams& params) {
    const double radicand = 1.0 - sigma * params.k() * psi_t;
    if (!(radicand > 0.0)) {
        std::ostringstream msg;
        msg << "ABC degeneracy: sigma*k*psi_t >= 1 (psi_t = " << psi_t << ")";
        throw NumericalError(NumericalError::Kind::AbcDegeneracy, msg.str());
    }
    const double root = radicand < 1e-14 ? 0.0 : std::sqrt(radicand);
    return params.c() * cos_theta * root;
}

std::vector<double> assemble_abc_vector(const Mesh& mesh, std::span<const double> psi_dot, const AngleField& angles,
                                        double sigma, const PhysParams& params) {
    std::vector<double> out(mesh.num_nodes(), 0.0);
    const FacetRule& rule = facet_rule(mesh.dim());
    const int nf = mesh.dim();
    for (std::size_t f = 0; f < mesh.num_facets(); ++f) {
        if (angles.facet_slot[f] < 0) continue;
        const double ct = cos_deg(angles.facet_theta(f));
        const double meas = facet_geometry(mesh, f).measure;
        const auto ids = mesh.facet_nodes(f);
        for (std::size_t q = 0; q < rule.weights.size(); ++q) {
            double vq = 0.0;
            for (int a = 0; a < nf; ++a) vq += rule.points[q][a] * psi_dot[static_cast<std::size_t>(ids[a])];
            const double w = rule.weights[q] * meas * abc_weight(vq, ct, sigma, params) * vq;
            for (int a = 0; a < nf; ++a) out[static_cast<std::size_t>(ids[a])] += w * rule.points[q][a];
        }
    }
    return out;
}

void assemble_abc_matrix(const Mesh& mesh, std::span<const double> psi_dot_lagged, const AngleField& angles,
                         double sigma, const PhysParams& params, SparseMatrix& out) {
    auto& vals = out.values();
    std::fill(vals.begin(), vals.end(), 0.0);
    const FacetRule& rule = facet_rule(mesh.dim());
    const int nf = mesh.dim();
    for (std::size_t f = 0; f < mesh.num_facets(); ++f) {
        if (angles.facet_slot[f] < 0) continue;
        const double ct = cos_deg(angles.facet_theta(f));
        const double meas = facet_geometry(mesh, f).measure;
        const auto ids = mesh.facet_nodes(f);
        std::array<std::array<std::int32_t, 3>, 3> slots{};
        for (int a = 0; a < nf; ++a)
            for (int b = 0; b < nf; ++b) slots[a][b] = out.pattern().find(ids[a], ids[b]);
        for (std::size_t q = 0; q < rule.weights.size(); ++q) {
            double vq = 0.0;
            for (int a = 0; a < nf; ++a) vq += rule.points[q][a] * psi_dot_lagged[static_cast<std::size_t>(ids[a])];
            const double w = rule.weights[q] * meas * abc_weight(vq, ct, sigma, params);
            for (int a = 0; a < nf; ++a)
                for (int b = 0; b < nf; ++b)
                    vals[static_cast<std::size_t>(slots[a][b])] += w * rule.points[q][a] * rule.points[q][b];
        }
    }
}

std::vector<double> sample_nodal(const Mesh& mesh, const std::function<double(const Vec3&, double)>& f, double t) {
    std::vector<double> out(mesh.num_nodes());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = f(mesh.node(i), t);
    return out;
}

std::vector<double> assemble_source(const SparseMatrix& mass, std::span<const double> f_nodal) {
    return mass * f_nodal;
}

DofPartition DofPartition::from_mesh(const Mesh& mesh) {
    DofPartition p;
    p.is_dirichlet.assign(mesh.num_nodes(), 0);
    p.dirichlet = mesh.nodes_with_tag(BoundaryTag::Excitation);
    for (auto i : p.dirichlet) p.is_dirichlet[static_cast<std::size_t>(i)] = 1;
    for (std::size_t i = 0; i < mesh.num_nodes(); ++i)
        if (!p.is_dirichlet[i]) p.interior.push_back(static_cast<std::int32_t>(i));
    return p;
}

std::vector<double> dirichlet_rhs(const Mesh& mesh, const SparseMatrix& mass, const SparseMatrix& laplacian,
                                  const PhysParams& params, const DirichletValues& values,
                                  const DofPartition& partition) {
    const std::size_t n = mesh.num_nodes();
    std::vector<double> psi(n, 0.0);
    std::vector<double> vel(n, 0.0);
    std::vector<double> acc(n, 0.0);
    for (std::size_t d = 0; d < partition.dirichlet.size(); ++d) {
        const auto i = static_cast<std::size_t>(partition.dirichlet[d]);
        psi[i] = values.psi[d];
        vel[i] = values.psi_dot[d];
        acc[i] = values.psi_ddot[d];
    }
    const auto m_acc = mass * acc;
    const auto l_psi = laplacian * psi;
    const auto l_vel = laplacian * vel;
    const auto t_dd = tensor_action(mesh, acc, vel, params);
    const double c2 = params.c() * params.c();
    const double b = params.b();

    std::vector<double> out(partition.interior.size());
    for (std::size_t r = 0; r < out.size(); ++r) {
        const auto i = static_cast<std::size_t>(partition.interior[r]);
        // The residual carries -T[a, v], so its Dirichlet block moves over as +T.
        out[r] = -m_acc[i] - c2 * l_psi[i] - b * l_vel[i] + t_dd[i];
    }
    return out;
}

}  // namespace wabc
