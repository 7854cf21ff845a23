#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <random>
#include <set>
#include <vector>

#include "cl3q/field.hpp"
#include "cl3q/geometry.hpp"
#include "cl3q/line_classes.hpp"
#include "cl3q/symmetry.hpp"

using namespace cl3q;

namespace {

Geometry make_geometry(int q) {
    if (q == 9) return Geometry::build(Field::build(3, 2));
    return Geometry::build(Field::build(q, 1));
}

std::vector<ProjMatrix> gamma_elements(const Geometry& g) {
    const Field& f = g.field();
    std::vector<ProjMatrix> gens = psi_elements(f, g.omega());
    auto phi = phi_elements(f, g.omega());
    gens.insert(gens.end(), phi.begin(), phi.end());
    return close(f, gens).elements;
}

std::vector<PointId> quadric_points(const Geometry& g, int lambda) {
    std::vector<PointId> out;
    for (PointId pt = 0; pt < g.num_points(); ++pt)
        if (g.pencil_class(lambda, pt) == QuadClass::Zero) out.push_back(pt);
    return out;
}

} // namespace

TEST_CASE("psi matrices compose additively") {
    Geometry g = make_geometry(5);
    const Field& f = g.field();
    int w = g.omega();
    for (int x1 = 0; x1 < 5; ++x1)
        for (int y1 = 0; y1 < 5; ++y1)
            for (int x2 = 0; x2 < 5; ++x2)
                for (int y2 = 0; y2 < 5; ++y2) {
                    ProjMatrix prod = matmul(f, psi_matrix(f, w, x1, y1), psi_matrix(f, w, x2, y2));
                    REQUIRE(prod == psi_matrix(f, w, f.add(x1, x2), f.add(y1, y2)));
                }
}

TEST_CASE("group orders") {
    for (int q : {5, 7, 9}) {
        CAPTURE(q);
        Geometry g = make_geometry(q);
        const Field& f = g.field();
        int w = g.omega();

        auto psi = psi_elements(f, w);
        auto phi = phi_elements(f, w);
        REQUIRE(std::set<ProjMatrix>(psi.begin(), psi.end()).size() ==
                static_cast<std::size_t>(q) * q);
        REQUIRE(std::set<ProjMatrix>(phi.begin(), phi.end()).size() ==
                static_cast<std::size_t>(q) + 1);

        std::vector<ProjMatrix> gens = psi;
        gens.insert(gens.end(), phi.begin(), phi.end());
        GroupClosure gamma = close(f, gens);
        REQUIRE(gamma.order() == static_cast<long long>(q) * q * (q + 1));

        // a small generating set reaches the same group
        GroupClosure from_gens = close(f, gamma_generators(f, w));
        REQUIRE(from_gens.elements == gamma.elements);
    }
}

TEST_CASE("every element fixes the base point, the distinguished plane, and all pencil values") {
    Geometry g = make_geometry(5);
    const Field& f = g.field();
    auto gamma = gamma_elements(g);
    REQUIRE(gamma.size() == 150);

    for (const ProjMatrix& m : gamma) {
        REQUIRE(act_on_point(g, m, g.u3()) == g.u3());
        for (PointId pt = 0; pt < g.num_points(); ++pt) {
            bool on_pi = g.point_coords(pt)[3] == 0;
            PointId img = act_on_point(g, m, pt);
            REQUIRE((g.point_coords(img)[3] == 0) == on_pi);
            // the substitution preserves each Q_lambda exactly, so the square
            // class of the value is a projective invariant of the action
            for (int lambda = 0; lambda < f.q(); ++lambda)
                REQUIRE(g.pencil_class(lambda, img) == g.pencil_class(lambda, pt));
        }
    }
}

TEST_CASE("psi is transitive on each quadric minus the base point") {
    for (int q : {5, 7}) {
        CAPTURE(q);
        Geometry g = make_geometry(q);
        auto psi = psi_elements(g.field(), g.omega());
        for (int lambda = 0; lambda < q; ++lambda) {
            CAPTURE(lambda);
            auto eq = quadric_points(g, lambda);
            REQUIRE(eq.size() == static_cast<std::size_t>(q) * q + 1);
            auto orbs = point_orbits(g, psi, eq);
            REQUIRE(orbs.size() == 2);
            std::vector<std::size_t> sizes{orbs[0].size(), orbs[1].size()};
            std::sort(sizes.begin(), sizes.end());
            REQUIRE(sizes[0] == 1);
            REQUIRE(sizes[1] == static_cast<std::size_t>(q) * q);
            // the fixed point is U3
            bool u3_alone = orbs[0] == std::vector<PointId>{g.u3()} ||
                            orbs[1] == std::vector<PointId>{g.u3()};
            REQUIRE(u3_alone);
        }
    }
}

TEST_CASE("orbits on the distinguished plane") {
    for (int q : {5, 7}) {
        CAPTURE(q);
        Geometry g = make_geometry(q);
        OrbitDecomposition d = decompose(g);
        auto gens = gamma_generators(g.field(), g.omega());

        std::vector<PointId> pi_points;
        for (PointId pt = 0; pt < g.num_points(); ++pt)
            if (g.point_coords(pt)[3] == 0) pi_points.push_back(pt);
        auto orbs = point_orbits(g, gens, pi_points);
        REQUIRE(orbs.size() == 3);

        std::vector<std::vector<PointId>> expected{{g.u3()}, d.pi0, d.pi1};
        for (auto& o : expected) std::sort(o.begin(), o.end());
        for (const auto& o : orbs)
            REQUIRE(std::count(expected.begin(), expected.end(), o) == 1);
    }
}

TEST_CASE("orbits on lines off the distinguished plane") {
    for (int q : {5, 7}) {
        CAPTURE(q);
        Geometry g = make_geometry(q);
        auto gens = gamma_generators(g.field(), g.omega());

        std::vector<LineId> off_pi;
        for (LineId ln = 0; ln < g.num_lines(); ++ln)
            if (!g.line_in_pi(ln)) off_pi.push_back(ln);
        auto orbs = line_orbits(g, gens, off_pi);

        // all orbits have size q^2(q+1)/2 except the lines through U3, which
        // form a single orbit of size q^2
        std::size_t regular = static_cast<std::size_t>(q) * q * (q + 1) / 2;
        std::size_t small_count = 0;
        for (const auto& o : orbs) {
            if (o.size() == static_cast<std::size_t>(q) * q) {
                ++small_count;
                for (LineId ln : o) REQUIRE(g.line_through_u3(ln));
            } else {
                REQUIRE(o.size() == regular);
            }
        }
        REQUIRE(small_count == 1);
        REQUIRE(orbs.size() == 1 + (off_pi.size() - static_cast<std::size_t>(q) * q) / regular);
    }
}

TEST_CASE("constructed line classes are invariant") {
    for (int q : {5, 7}) {
        CAPTURE(q);
        Geometry g = make_geometry(q);
        OrbitDecomposition d = decompose(g);
        auto gens = gamma_generators(g.field(), g.omega());

        LineClass base = bruen_drudge(g, d);
        REQUIRE(is_invariant(g, gens, base.lines));

        LineClass perturbed = cp_gmp(g, d);
        REQUIRE(is_invariant(g, gens, perturbed.lines));

        DerivationPair pair{1, q == 7 ? 3 : 2};
        LineClass derived = derive(g, d, base, pair);
        REQUIRE(is_invariant(g, gens, derived.lines));

        // invariance under the generators extends to the full closure
        auto gamma = gamma_elements(g);
        REQUIRE(is_invariant(g, gamma, derived.lines));
    }
}

TEST_CASE("random line sets are not invariant") {
    Geometry g = make_geometry(5);
    auto gens = gamma_generators(g.field(), g.omega());
    std::mt19937 rng(24680);
    std::vector<LineId> all(g.num_lines());
    for (LineId ln = 0; ln < g.num_lines(); ++ln) all[ln] = ln;
    for (int trial = 0; trial < 20; ++trial) {
        std::shuffle(all.begin(), all.end(), rng);
        std::vector<LineId> pick(all.begin(), all.begin() + 65);
        std::sort(pick.begin(), pick.end());
        REQUIRE_FALSE(is_invariant(g, gens, pick));
    }
}

TEST_CASE("closure and orbit guardrails") {
    Geometry g = make_geometry(7);
    const Field& f = g.field();
    auto psi = psi_elements(f, g.omega());

    REQUIRE_THROWS_AS(close(f, psi, 10), ClosureBudgetExceeded);
    REQUIRE_THROWS_AS(close(f, {}), EmptySet);

    // a singleton domain is not closed under psi
    PointId moved = -1;
    for (PointId pt = 0; pt < g.num_points(); ++pt)
        if (g.point_coords(pt)[3] != 0 && pt != g.u3()) {
            moved = pt;
            break;
        }
    REQUIRE(moved >= 0);
    REQUIRE_THROWS_AS(point_orbits(g, psi, {moved}), DomainNotClosed);
}
