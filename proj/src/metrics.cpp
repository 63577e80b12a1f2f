#include "wabc/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace wabc {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double trapezoid(std::span<const double> t, std::span<const double> f) {
    if (t.size() == 1) return f[0];
    double s = 0.0;
    for (std::size_t i = 1; i < t.size(); ++i) s += 0.5 * (t[i] - t[i - 1]) * (f[i] + f[i - 1]);
    return s;
}

}  // namespace

std::vector<double> pressure_field(std::span<const double> psi_dot, double rho) {
    std::vector<double> u(psi_dot.size());
    for (std::size_t i = 0; i < u.size(); ++i) u[i] = rho * psi_dot[i];
    return u;
}

std::vector<std::int32_t> match_nodes(const Mesh& mesh, const Mesh& ref, double tol) {
    // Bucket reference nodes on a grid much coarser than tol; probe the
    // neighbouring buckets too.
    const double cell = std::max(1e3 * tol, 1e-9);
    struct Key {
        long long x, y, z;
        bool operator==(const Key&) const = default;
    };
    struct Hash {
        std::size_t operator()(const Key& k) const {
            return static_cast<std::size_t>(k.x * 73856093LL ^ k.y * 19349663LL ^ k.z * 83492791LL);
        }
    };
    auto key = [cell](const Vec3& p) {
        return Key{std::llround(p[0] / cell), std::llround(p[1] / cell), std::llround(p[2] / cell)};
    };
    std::unordered_multimap<Key, std::int32_t, Hash> buckets;
    buckets.reserve(ref.num_nodes());
    for (std::size_t i = 0; i < ref.num_nodes(); ++i) buckets.emplace(key(ref.node(i)), static_cast<std::int32_t>(i));

    std::vector<std::int32_t> map(mesh.num_nodes(), -1);
    std::vector<std::size_t> missing;
    for (std::size_t i = 0; i < mesh.num_nodes(); ++i) {
        const Vec3& p = mesh.node(i);
        const Key k = key(p);
        for (long long dx = -1; dx <= 1 && map[i] < 0; ++dx)
            for (long long dy = -1; dy <= 1 && map[i] < 0; ++dy)
                for (long long dz = -1; dz <= 1 && map[i] < 0; ++dz) {
                    const auto range = buckets.equal_range(Key{k.x + dx, k.y + dy, k.z + dz});
                    for (auto it = range.first; it != range.second; ++it) {
                        const Vec3& q = ref.node(static_cast<std::size_t>(it->second));
                        if (std::abs(p[0] - q[0]) <= tol && std::abs(p[1] - q[1]) <= tol && std::abs(p[2] - q[2]) <= tol) {
                            map[i] = it->second;
                            break;
                        }
                    }
                }
        if (map[i] < 0) missing.push_back(i);
    }
    if (!missing.empty()) {
        std::ostringstream msg;
        msg << "node mismatch: " << missing.size() << " node(s) without a reference counterpart:";
        for (std::size_t j = 0; j < std::min<std::size_t>(missing.size(), 10); ++j) {
            const Vec3& p = mesh.node(missing[j]);
            msg << ' ' << missing[j] << " (" << p[0] << ", " << p[1] << ", " << p[2] << ")";
        }
        if (missing.size() > 10) msg << " ...";
        throw MeshError(msg.str());
    }
    return map;
}

std::vector<double> restrict_reference(std::span<const double> ref_values, std::span<const std::int32_t> node_map) {
    std::vector<double> out(node_map.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = ref_values[static_cast<std::size_t>(node_map[i])];
    return out;
}

std::vector<double> restrict_reference(std::span<const double> ref_values, const Mesh& ref, const Mesh& mesh) {
    return restrict_reference(ref_values, match_nodes(mesh, ref));
}

double mass_norm(const SparseMatrix& mass, std::span<const double> x) {
    const auto mx = mass * x;
    return std::sqrt(std::max(0.0, dot(x, mx)));
}

RelativeError relative_l2_error(std::span<const double> a, std::span<const double> b, const SparseMatrix& mass) {
    if (a.size() != b.size() || a.size() != mass.size()) throw std::invalid_argument("relative_l2_error: length mismatch");
    std::vector<double> d(a.size());
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = a[i] - b[i];
    const double num = mass_norm(mass, d);
    const double den = mass_norm(mass, b);
    if (den == 0.0) return {num, true};
    return {num / den, false};
}

double space_time_error(const ErrorSamples& s) {
    if (s.t.empty() || s.err_sq.size() != s.t.size() || s.ref_sq.size() != s.t.size())
        throw std::invalid_argument("space_time_error: length mismatch");
    const double den = trapezoid(s.t, s.ref_sq);
    const double num = trapezoid(s.t, s.err_sq);
    if (den <= 0.0) return std::sqrt(num);
    return std::sqrt(num / den);
}

SpaceTimeErrors space_time_error(std::span<const double> t, const std::vector<std::vector<double>>& psi,
                                 const std::vector<std::vector<double>>& psi_ref,
                                 const std::vector<std::vector<double>>& psi_dot,
                                 const std::vector<std::vector<double>>& psi_dot_ref, const SparseMatrix& mass,
                                 double rho) {
    const std::size_t n = t.size();
    if (psi.size() != n || psi_ref.size() != n || psi_dot.size() != n || psi_dot_ref.size() != n)
        throw std::invalid_argument("space_time_error: trajectory length mismatch");
    ErrorSamples sp, su;
    sp.t.assign(t.begin(), t.end());
    su.t = sp.t;
    for (std::size_t s = 0; s < n; ++s) {
        std::vector<double> d(psi[s].size());
        for (std::size_t i = 0; i < d.size(); ++i) d[i] = psi[s][i] - psi_ref[s][i];
        sp.err_sq.push_back(std::pow(mass_norm(mass, d), 2));
        sp.ref_sq.push_back(std::pow(mass_norm(mass, psi_ref[s]), 2));
        const auto u = pressure_field(psi_dot[s], rho);
        const auto u_ref = pressure_field(psi_dot_ref[s], rho);
        for (std::size_t i = 0; i < d.size(); ++i) d[i] = u[i] - u_ref[i];
        su.err_sq.push_back(std::pow(mass_norm(mass, d), 2));
        su.ref_sq.push_back(std::pow(mass_norm(mass, u_ref), 2));
    }
    return {space_time_error(sp), space_time_error(su)};
}

double energy_diagnostic(std::span<const double> psi, std::span<const double> psi_dot, const SparseMatrix& mass,
                         const SparseMatrix& laplacian, const PhysParams& phys) {
    const double inv_c2 = 1.0 / (phys.c() * phys.c());
    const double k = phys.k();
    std::vector<double> w(psi_dot.size());
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = std::sqrt(std::max(0.0, inv_c2 - 0.5 * k * psi_dot[i])) * psi_dot[i];
    const auto mw = mass * w;
    const auto lp = laplacian * psi;
    return 0.5 * (dot(w, mw) + dot(psi, lp));
}

double improvement(double e_base, double e_new) {
    if (!(e_base > 0.0)) throw std::invalid_argument("improvement: baseline error must be positive");
    return (e_base - e_new) / e_base;
}

}  // namespace wabc
