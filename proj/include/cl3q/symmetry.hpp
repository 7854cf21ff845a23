#pragma once

// The two explicit matrix groups stabilizing the quadric pencil: Psi (order
// q^2, elementary abelian, transitive on each E_lambda minus the base point)
// and Phi (order q+1, the norm-one rotations of the X1X2 block). Matrices act
// on column vectors from the left; projective equality is decided by scaling
// the first nonzero entry (row-major) to one.

#include <algorithm>
#include <array>
#include <cstdint>
#include <set>
#include <vector>

#include "cl3q/errors.hpp"
#include "cl3q/geometry.hpp"

namespace cl3q {

using ProjMatrix = std::array<std::uint16_t, 16>; // row-major

inline ProjMatrix canonical(const Field& f, ProjMatrix m) {
    for (int i = 0; i < 16; ++i) {
        if (m[i] == 0) continue;
        int inv = f.inv(m[i]);
        for (int j = i; j < 16; ++j) m[j] = static_cast<std::uint16_t>(f.mul(m[j], inv));
        return m;
    }
    throw StructureViolation("zero matrix has no canonical form");
}

inline ProjMatrix matmul(const Field& f, const ProjMatrix& a, const ProjMatrix& b) {
    ProjMatrix c{};
    for (int i = 0; i < 4; ++i)
        for (int k = 0; k < 4; ++k) {
            int aik = a[4 * i + k];
            if (aik == 0) continue;
            for (int j = 0; j < 4; ++j)
                c[4 * i + j] = static_cast<std::uint16_t>(
                    f.add(c[4 * i + j], f.mul(aik, b[4 * k + j])));
        }
    return canonical(f, c);
}

inline ProjMatrix projective_identity() {
    return ProjMatrix{1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1};
}

// rows (1,0,0,-x), (0,1,0,-y), (2x,-2wy,1,wy^2-x^2), (0,0,0,1)
inline ProjMatrix psi_matrix(const Field& f, int omega, int x, int y) {
    auto u16 = [](int v) { return static_cast<std::uint16_t>(v); };
    int two = f.from_int(2);
    ProjMatrix m{1, 0, 0, u16(f.neg(x)),
                 0, 1, 0, u16(f.neg(y)),
                 u16(f.mul(two, x)), u16(f.neg(f.mul(two, f.mul(omega, y)))), 1,
                 u16(f.sub(f.mul(omega, f.mul(y, y)), f.mul(x, x))),
                 0, 0, 0, 1};
    return canonical(f, m);
}

inline std::vector<ProjMatrix> psi_elements(const Field& f, int omega) {
    std::vector<ProjMatrix> out;
    out.reserve(static_cast<std::size_t>(f.q()) * f.q());
    for (int x = 0; x < f.q(); ++x)
        for (int y = 0; y < f.q(); ++y) out.push_back(psi_matrix(f, omega, x, y));
    return out;
}

// blockdiag([[z, wt], [t, z]], u, u) with z^2 - w t^2 = u^2; scaling by u
// reduces every solution to u = 1, and the q+1 norm-one pairs (z, t) give
// pairwise distinct projectivities
inline std::vector<ProjMatrix> phi_elements(const Field& f, int omega) {
    std::vector<ProjMatrix> out;
    auto u16 = [](int v) { return static_cast<std::uint16_t>(v); };
    for (int z = 0; z < f.q(); ++z)
        for (int t = 0; t < f.q(); ++t) {
            if (f.sub(f.mul(z, z), f.mul(omega, f.mul(t, t))) != 1) continue;
            ProjMatrix m{u16(z), u16(f.mul(omega, t)), 0, 0,
                         u16(t), u16(z), 0, 0,
                         0, 0, 1, 0,
                         0, 0, 0, 1};
            out.push_back(canonical(f, m));
        }
    if (static_cast<int>(out.size()) != f.q() + 1)
        throw StructureViolation("norm-one pair count is not q+1");
    return out;
}

struct GroupClosure {
    std::vector<ProjMatrix> elements; // sorted, canonical
    long long order() const { return static_cast<long long>(elements.size()); }
};

inline GroupClosure close(const Field& f, const std::vector<ProjMatrix>& generators,
                          long long budget = 200000) {
    if (generators.empty()) throw EmptySet("group closure of no generators");
    std::set<ProjMatrix> seen;
    std::vector<ProjMatrix> frontier;
    auto push = [&](const ProjMatrix& m) {
        if (seen.insert(m).second) {
            if (static_cast<long long>(seen.size()) > budget)
                throw ClosureBudgetExceeded("group closure exceeded " + std::to_string(budget) +
                                            " elements");
            frontier.push_back(m);
        }
    };
    push(projective_identity());
    for (const ProjMatrix& g : generators) push(canonical(f, g));
    while (!frontier.empty()) {
        ProjMatrix m = frontier.back();
        frontier.pop_back();
        for (const ProjMatrix& g : generators) push(matmul(f, g, m));
    }
    GroupClosure out;
    out.elements.assign(seen.begin(), seen.end());
    return out;
}

inline PointId act_on_point(const Geometry& g, const ProjMatrix& m, PointId p) {
    const Field& f = g.field();
    Coords4 x = g.point_coords(p), y{};
    for (int i = 0; i < 4; ++i) {
        int acc = 0;
        for (int j = 0; j < 4; ++j) acc = f.add(acc, f.mul(m[4 * i + j], x[j]));
        y[i] = static_cast<std::uint16_t>(acc);
    }
    return g.point_id(y);
}

inline LineId act_on_line(const Geometry& g, const ProjMatrix& m, LineId ln) {
    auto pts = g.line_points(ln);
    PointId a = act_on_point(g, m, pts[0]);
    PointId b = act_on_point(g, m, pts[1]);
    return g.line_through(a, b);
}

// Orbit partition of `domain` under the subgroup generated by `matrices`
// (pass a full closure or any generating set; orbits are identical). Images
// must stay inside the domain.
template <typename Act>
std::vector<std::vector<std::int32_t>> orbits_under(const std::vector<ProjMatrix>& matrices,
                                                    const std::vector<std::int32_t>& domain,
                                                    Act act) {
    std::vector<std::int32_t> index(domain.size());
    std::vector<std::int64_t> slot; // domain id -> position, -1 outside
    std::int32_t max_id = 0;
    for (std::int32_t d : domain) max_id = std::max(max_id, d);
    slot.assign(max_id + 1, -1);
    for (std::size_t i = 0; i < domain.size(); ++i) slot[domain[i]] = static_cast<std::int64_t>(i);

    std::vector<char> visited(domain.size(), 0);
    std::vector<std::vector<std::int32_t>> out;
    for (std::size_t i = 0; i < domain.size(); ++i) {
        if (visited[i]) continue;
        std::vector<std::int32_t> orbit{domain[i]};
        visited[i] = 1;
        for (std::size_t k = 0; k < orbit.size(); ++k) {
            for (const ProjMatrix& m : matrices) {
                std::int32_t img = act(m, orbit[k]);
                if (img < 0 || img > max_id || slot[img] < 0)
                    throw DomainNotClosed("group image escapes the requested domain");
                auto pos = static_cast<std::size_t>(slot[img]);
                if (!visited[pos]) {
                    visited[pos] = 1;
                    orbit.push_back(img);
                }
            }
        }
        std::sort(orbit.begin(), orbit.end());
        out.push_back(std::move(orbit));
    }
    std::sort(out.begin(), out.end(),
              [](const auto& a, const auto& b) { return a.front() < b.front(); });
    return out;
}

inline std::vector<std::vector<PointId>> point_orbits(const Geometry& g,
                                                      const std::vector<ProjMatrix>& matrices,
                                                      const std::vector<PointId>& domain) {
    return orbits_under(matrices, domain,
                        [&](const ProjMatrix& m, PointId p) { return act_on_point(g, m, p); });
}

inline std::vector<std::vector<LineId>> line_orbits(const Geometry& g,
                                                    const std::vector<ProjMatrix>& matrices,
                                                    const std::vector<LineId>& domain) {
    return orbits_under(matrices, domain,
                        [&](const ProjMatrix& m, LineId ln) { return act_on_line(g, m, ln); });
}

// True when every matrix maps the sorted line set into itself. Checking a
// generating set is enough; a full closure works too.
inline bool is_invariant(const Geometry& g, const std::vector<ProjMatrix>& matrices,
                         const std::vector<LineId>& sorted_lines) {
    for (const ProjMatrix& m : matrices)
        for (LineId ln : sorted_lines)
            if (!std::binary_search(sorted_lines.begin(), sorted_lines.end(),
                                    act_on_line(g, m, ln)))
                return false;
    return true;
}

// A small generating set for Gamma: Psi restricted to coordinate axes along a
// polynomial basis of the field, plus one Phi element of full order q+1.
inline std::vector<ProjMatrix> gamma_generators(const Field& f, int omega) {
    std::vector<ProjMatrix> gens;
    for (int i = 0, b = 1; i < f.e(); ++i, b *= f.p()) {
        gens.push_back(psi_matrix(f, omega, b, 0));
        gens.push_back(psi_matrix(f, omega, 0, b));
    }
    ProjMatrix best = projective_identity();
    int best_order = 1;
    for (const ProjMatrix& m : phi_elements(f, omega)) {
        ProjMatrix acc = m;
        int ord = 1;
        while (acc != projective_identity()) {
            acc = matmul(f, acc, m);
            ++ord;
        }
        if (ord > best_order) {
            best_order = ord;
            best = m;
        }
    }
    if (best_order == f.q() + 1) {
        gens.push_back(best);
    } else {
        // the norm-one group is cyclic, but fall back to all of Phi if no
        // single element reaches full order
        for (const ProjMatrix& m : phi_elements(f, omega)) gens.push_back(m);
    }
    return gens;
}

} // namespace cl3q
