#include <catch2/catch_amalgamated.hpp>

#include <map>
#include <set>
#include <vector>

#include "cl3q/geometry.hpp"

using namespace cl3q;

namespace {

Geometry make(int p, int e = 1) { return Geometry::build(Field::build(p, e)); }

// Oracle: evaluate Q_lambda directly from the definition, bypassing the
// pencil cache and line machinery.
QuadClass quad_oracle(const Geometry& g, int lambda, Coords4 x) {
    const Field& f = g.field();
    int v = f.sub(f.mul(x[0], x[0]), f.mul(g.omega(), f.mul(x[1], x[1])));
    v = f.add(v, f.add(f.mul(lambda, f.mul(x[3], x[3])), f.mul(x[2], x[3])));
    return f.quad_class(v);
}

long long n_points(int q) { return static_cast<long long>(q) * q * q + q * q + q + 1; }
long long n_lines(int q) {
    return (static_cast<long long>(q) * q + 1) * (static_cast<long long>(q) * q + q + 1);
}

} // namespace

TEST_CASE("element counts match the closed forms", "[geometry]") {
    for (int q : {3, 5, 7}) {
        Geometry g = make(q);
        REQUIRE(g.num_points() == n_points(q));
        REQUIRE(g.num_planes() == n_points(q));
        REQUIRE(g.num_lines() == n_lines(q));
    }
    Geometry g9 = make(3, 2);
    REQUIRE(g9.num_points() == n_points(9));
    REQUIRE(g9.num_lines() == n_lines(9));
}

TEST_CASE("ids are lexicographic and normalization collapses scalars", "[geometry]") {
    Geometry g = make(5);
    REQUIRE(g.point_id({0, 0, 0, 1}) == 0);
    REQUIRE(g.point_id({0, 0, 1, 0}) == g.u3());
    REQUIRE(g.plane_id({0, 0, 0, 1}) == g.pi());
    // id order is strictly increasing in the coordinate tuples
    for (PointId id = 1; id < g.num_points(); ++id)
        REQUIRE(g.point_coords(id - 1) < g.point_coords(id));
    // scalar multiples give the same id: (2,4,0,2) = 2*(1,2,0,1)
    REQUIRE(g.point_id({2, 4, 0, 2}) == g.point_id({1, 2, 0, 1}));
    // and the stored representative is normalized
    for (PointId id = 0; id < g.num_points(); ++id) {
        Coords4 c = g.point_coords(id);
        int first = 0;
        while (c[first] == 0) ++first;
        REQUIRE(c[first] == 1);
    }
}

TEST_CASE("line incidence agrees with direct evaluation", "[geometry]") {
    Geometry g = make(3);
    for (LineId ln = 0; ln < g.num_lines(); ++ln) {
        auto pts = g.line_points(ln);
        auto pls = g.line_planes(ln);
        REQUIRE(pts.size() == 4);
        REQUIRE(pls.size() == 4);
        // every listed point lies on every listed plane
        for (PointId pt : pts)
            for (PlaneId pl : pls) REQUIRE(g.point_on_plane(pt, pl));
        // and no other point lies on all of them
        for (PointId pt = 0; pt < g.num_points(); ++pt) {
            bool on_all = true;
            for (PlaneId pl : pls) on_all = on_all && g.point_on_plane(pt, pl);
            REQUIRE(on_all == g.line_has_point(ln, pt));
        }
    }
}

TEST_CASE("lines through a point and in a plane have the right counts", "[geometry]") {
    Geometry g = make(3);
    std::vector<int> through(g.num_points(), 0), contained(g.num_planes(), 0);
    for (LineId ln = 0; ln < g.num_lines(); ++ln) {
        for (PointId pt : g.line_points(ln)) ++through[pt];
        for (PlaneId pl : g.line_planes(ln)) ++contained[pl];
    }
    for (int c : through) REQUIRE(c == 13);   // q^2+q+1
    for (int c : contained) REQUIRE(c == 13); // dually
}

TEST_CASE("Plucker coordinates and line lookup", "[geometry]") {
    Geometry g = make(7);
    // span of (1,0,0,0) and (0,1,0,0): only p01 nonzero
    LineId u1u2 = g.line_through(g.point_id({1, 0, 0, 0}), g.point_id({0, 1, 0, 0}));
    REQUIRE(g.line_plucker(u1u2) == Plucker{1, 0, 0, 0, 0, 0});
    REQUIRE(g.line_id(Plucker{1, 0, 0, 0, 0, 0}) == u1u2);
    REQUIRE(g.line_id(Plucker{3, 0, 0, 0, 0, 0}) == u1u2); // scalar multiple
    // a tuple violating the Klein relation is not a line
    REQUIRE(g.line_id(Plucker{1, 0, 0, 0, 0, 1}) == -1);

    Geometry g3 = make(3);
    for (LineId ln = 0; ln < g3.num_lines(); ++ln) {
        auto pts = g3.line_points(ln);
        REQUIRE(g3.line_through(pts[0], pts[2]) == ln);
        REQUIRE(g3.line_through(pts[3], pts[1]) == ln);
    }
}

TEST_CASE("pencil evaluation matches the defining form", "[geometry]") {
    Geometry g = make(7);
    REQUIRE(g.omega() == 3);
    REQUIRE(quad_oracle(g, 0, {0, 1, 0, 0}) == QuadClass::Square); // -3 = 4, a square mod 7
    for (int lambda = 0; lambda < 7; ++lambda) {
        for (PointId pt = 0; pt < g.num_points(); ++pt)
            REQUIRE(g.pencil_class(lambda, pt) == quad_oracle(g, lambda, g.point_coords(pt)));
        REQUIRE(g.pencil_class(lambda, g.u3()) == QuadClass::Zero);
        // Q_lambda(U4) = lambda
        REQUIRE(g.pencil_class(lambda, g.point_id({0, 0, 0, 1})) == g.field().quad_class(lambda));
    }
}

TEST_CASE("pencil members partition the points off pi", "[geometry]") {
    for (int q : {3, 5, 7}) {
        Geometry g = make(q);
        long long on_pi = 0, u3_members = 0;
        for (PointId pt = 0; pt < g.num_points(); ++pt) {
            int members = 0;
            for (int lambda = 0; lambda < q; ++lambda)
                if (g.pencil_class(lambda, pt) == QuadClass::Zero) ++members;
            if (pt == g.u3()) {
                REQUIRE(members == q); // base point: on every member
                ++u3_members;
            } else if (g.point_on_plane(pt, g.pi())) {
                REQUIRE(members == 0);
                ++on_pi;
            } else {
                REQUIRE(members == 1);
            }
        }
        REQUIRE(on_pi == static_cast<long long>(q) * q + q);
        REQUIRE(u3_members == 1);
        // each member has q^2+1 points
        for (int lambda = 0; lambda < q; ++lambda) {
            long long sz = 0;
            for (PointId pt = 0; pt < g.num_points(); ++pt)
                if (g.pencil_class(lambda, pt) == QuadClass::Zero) ++sz;
            REQUIRE(sz == static_cast<long long>(q) * q + 1);
        }
    }
}

TEST_CASE("members sit inside one Q-class depending on -lambda", "[geometry]") {
    for (int q : {5, 7, 9}) {
        Geometry g = q == 9 ? make(3, 2) : make(q);
        const Field& f = g.field();
        for (int lambda = 1; lambda < q; ++lambda) {
            QuadClass expect = f.quad_class(f.neg(lambda));
            for (PointId pt = 0; pt < g.num_points(); ++pt) {
                if (pt == g.u3() || g.pencil_class(lambda, pt) != QuadClass::Zero) continue;
                REQUIRE(g.pencil_class(0, pt) == expect);
            }
        }
    }
}

TEST_CASE("points of pi evaluate identically under every member", "[geometry]") {
    Geometry g = make(5);
    for (PointId pt = 0; pt < g.num_points(); ++pt) {
        if (!g.point_on_plane(pt, g.pi())) continue;
        QuadClass c0 = g.pencil_class(0, pt);
        for (int lambda = 1; lambda < 5; ++lambda) REQUIRE(g.pencil_class(lambda, pt) == c0);
    }
}

TEST_CASE("polarity basics", "[geometry]") {
    Geometry g = make(5);
    // the polar plane of the base point is pi, for every member
    for (int lambda = 0; lambda < 5; ++lambda) REQUIRE(g.polar_plane(lambda, g.u3()) == g.pi());
    // P lies on its own polar plane exactly when P is on the quadric
    for (int lambda : {0, 2}) {
        for (PointId pt = 0; pt < g.num_points(); ++pt) {
            bool on_quadric = g.pencil_class(lambda, pt) == QuadClass::Zero;
            REQUIRE(g.point_on_plane(pt, g.polar_plane(lambda, pt)) == on_quadric);
        }
    }
    // the polar of the line U1U3 with respect to E_0 is U2U3
    LineId u1u3 = g.line_through(g.point_id({1, 0, 0, 0}), g.u3());
    LineId u2u3 = g.line_through(g.point_id({0, 1, 0, 0}), g.u3());
    REQUIRE(g.polar_line(0, u1u3) == u2u3);
}

TEST_CASE("line polarity is an incidence-reversing involution", "[geometry]") {
    Geometry g3 = make(3);
    for (int lambda = 0; lambda < 3; ++lambda) {
        for (LineId ln = 0; ln < g3.num_lines(); ++ln) {
            LineId img = g3.polar_line(lambda, ln);
            REQUIRE(g3.polar_line(lambda, img) == ln);
            // the polar line lies in the polar plane of each point of ln
            for (PointId pt : g3.line_points(ln))
                REQUIRE(g3.line_in_plane(img, g3.polar_plane(lambda, pt)));
        }
    }
    Geometry g5 = make(5);
    for (LineId ln = 0; ln < g5.num_lines(); ln += 7)
        REQUIRE(g5.polar_line(0, g5.polar_line(0, ln)) == ln);
}

TEST_CASE("line versus quadric profiles", "[geometry]") {
    Geometry g = make(7);
    LineId ln = g.line_through(g.point_id({1, 0, 0, 0}), g.point_id({0, 0, 0, 1}));
    // Q_lambda(s,0,0,t) = s^2 + lambda t^2
    auto pr0 = g.line_profile(ln, 0);
    REQUIRE(pr0.zeros == 1);
    REQUIRE(pr0.at[0] == g.point_id({0, 0, 0, 1}));
    for (int lambda = 1; lambda < 7; ++lambda) {
        int expect = g.field().quad_class(g.field().neg(lambda)) == QuadClass::Square ? 2 : 0;
        REQUIRE(g.line_profile(ln, lambda).zeros == expect);
    }
}

TEST_CASE("tangency classification partitions the lines", "[geometry]") {
    for (int q : {3, 5}) {
        Geometry g = make(q);
        long long unique = 0, secant_all = 0, pi_u3 = 0, pi_other = 0;
        for (LineId ln = 0; ln < g.num_lines(); ++ln) {
            // oracle: recount tangent members from raw coordinates
            int tangent_members = 0, tangent_lambda = -1;
            for (int lambda = 0; lambda < q; ++lambda) {
                int zeros = 0;
                for (PointId pt : g.line_points(ln))
                    if (quad_oracle(g, lambda, g.point_coords(pt)) == QuadClass::Zero) ++zeros;
                if (zeros == 1) {
                    ++tangent_members;
                    tangent_lambda = lambda;
                }
            }
            const auto& t = g.tangency(ln);
            bool in_pi = g.line_in_pi(ln);
            bool thru = g.line_through_u3(ln);
            if (!in_pi && !thru) {
                REQUIRE(t.kind == Geometry::TangencyKind::UniqueMember);
                REQUIRE(tangent_members == 1);
                REQUIRE(t.lambda == tangent_lambda);
                REQUIRE(g.line_has_point(ln, t.tangent_at));
                REQUIRE(g.pencil_class(t.lambda, t.tangent_at) == QuadClass::Zero);
                ++unique;
            } else if (!in_pi) {
                REQUIRE(t.kind == Geometry::TangencyKind::SecantAllMembers);
                REQUIRE(tangent_members == 0);
                ++secant_all;
            } else if (thru) {
                REQUIRE(t.kind == Geometry::TangencyKind::PiThroughU3);
                REQUIRE(tangent_members == q); // tangent to every member, at U3
                ++pi_u3;
            } else {
                REQUIRE(t.kind == Geometry::TangencyKind::PiAvoidingU3);
                REQUIRE(tangent_members == 0);
                ++pi_other;
            }
        }
        REQUIRE(unique == static_cast<long long>(q) * q * q * (q + 1));
        REQUIRE(secant_all == static_cast<long long>(q) * q);
        REQUIRE(pi_u3 == q + 1);
        REQUIRE(pi_other == static_cast<long long>(q) * q);
    }
}

TEST_CASE("pi traces", "[geometry]") {
    Geometry g = make(3);
    for (LineId ln = 0; ln < g.num_lines(); ++ln) {
        if (g.line_in_pi(ln)) continue;
        PointId tr = g.pi_trace(ln);
        REQUIRE(g.line_has_point(ln, tr));
        REQUIRE(g.point_on_plane(tr, g.pi()));
    }
}

TEST_CASE("capacity and omega validation", "[geometry]") {
    REQUIRE_THROWS_AS(Geometry::build(Field::build(17, 1)), CapacityExceeded);
    REQUIRE_THROWS_AS(Geometry::build(Field::build(13, 1), -1, 11), CapacityExceeded);
    REQUIRE_NOTHROW(Geometry::build(Field::build(11, 1)));
    REQUIRE_THROWS_AS(Geometry::build(Field::build(7, 1), 2), StructureViolation); // 2 is a square
    REQUIRE_THROWS_AS(Geometry::build(Field::build(7, 1), 0), StructureViolation);
    Geometry g = Geometry::build(Field::build(7, 1), 5); // 5 is a nonsquare mod 7
    REQUIRE(g.omega() == 5);
    REQUIRE(g.num_lines() == n_lines(7));
}
