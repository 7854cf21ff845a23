#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <random>
#include <vector>

#include "cl3q/field.hpp"
#include "cl3q/geometry.hpp"
#include "cl3q/klein.hpp"

using namespace cl3q;

namespace {

// Oracle: two lines meet iff they share a point. Checked against the
// bilinear-form route, which never touches point sets.
bool share_point(const Geometry& g, LineId a, LineId b) {
    for (PointId p : g.line_points(a))
        for (PointId q : g.line_points(b))
            if (p == q) return true;
    return false;
}

// Tangent lines whose off-quadric points are squares, plus external lines.
// Rebuilt here from raw line profiles so the check below does not depend on
// the class-construction module.
std::vector<LineId> tangent_square_union_external(const Geometry& g) {
    std::vector<LineId> out;
    for (LineId ln = 0; ln < g.num_lines(); ++ln) {
        auto pr = g.line_profile(ln, 0);
        if (pr.zeros == 0) {
            out.push_back(ln);
        } else if (pr.zeros == 1) {
            for (PointId pt : g.line_points(ln)) {
                if (pt == pr.at[0]) continue;
                if (g.pencil_class(0, pt) == QuadClass::Square) out.push_back(ln);
                break;
            }
        }
    }
    return out;
}

} // namespace

TEST_CASE("klein form agrees with point intersection on all pairs at q=3") {
    Geometry g = Geometry::build(Field::build(3, 1));
    for (LineId a = 0; a < g.num_lines(); ++a) {
        CHECK(klein_form(g.field(), g.line_plucker(a), g.line_plucker(a)) == 0);
        for (LineId b = a + 1; b < g.num_lines(); ++b) {
            CAPTURE(a, b);
            REQUIRE(lines_meet(g, a, b) == share_point(g, a, b));
        }
    }
}

TEST_CASE("klein form agrees with point intersection on random pairs at q=5") {
    Geometry g = Geometry::build(Field::build(5, 1));
    std::mt19937 rng(12345);
    std::uniform_int_distribution<LineId> pick(0, g.num_lines() - 1);
    for (int i = 0; i < 100000; ++i) {
        LineId a = pick(rng), b = pick(rng);
        CAPTURE(a, b);
        REQUIRE(lines_meet(g, a, b) == (a == b || share_point(g, a, b)));
    }
}

TEST_CASE("opposite coordinate axes are skew") {
    Geometry g = Geometry::build(Field::build(7, 1));
    Coords4 u1{1, 0, 0, 0}, u2{0, 1, 0, 0}, u3{0, 0, 1, 0}, u4{0, 0, 0, 1};
    LineId a = g.line_through(g.point_id(u1), g.point_id(u2));
    LineId b = g.line_through(g.point_id(u3), g.point_id(u4));
    REQUIRE(g.line_plucker(a) == Plucker{1, 0, 0, 0, 0, 0});
    REQUIRE(g.line_plucker(b) == Plucker{0, 0, 0, 0, 0, 1});
    CHECK(klein_form(g.field(), g.line_plucker(a), g.line_plucker(b)) == 1);
    CHECK_FALSE(lines_meet(g, a, b));
}

TEST_CASE("tight set check accepts the set of all lines") {
    Geometry g = Geometry::build(Field::build(3, 1));
    std::vector<LineId> all(g.num_lines());
    for (LineId ln = 0; ln < g.num_lines(); ++ln) all[ln] = ln;

    auto rep = tight_set_check(g, all, Rational{10, 1});
    REQUIRE(rep.structural_ok);
    REQUIRE(rep.x == 10); // (q^2+1)(q^2+q+1) lines / (q^2+q+1)
    REQUIRE(rep.expect_in == 49);
    CHECK(rep.pass);
    CHECK(rep.histogram_out.empty());
    REQUIRE(rep.histogram_in.at(49) == g.num_lines());
    for (std::int32_t c : rep.counts) CHECK(c == 49);
}

TEST_CASE("tight set check accepts tangent-square plus external lines at q=3") {
    Geometry g = Geometry::build(Field::build(3, 1));
    std::vector<LineId> cls = tangent_square_union_external(g);
    REQUIRE(cls.size() == 65);

    auto rep = tight_set_check(g, cls, Rational{5, 1});
    REQUIRE(rep.structural_ok);
    CHECK(rep.x == 5);
    CHECK(rep.expect_in == 29);
    CHECK(rep.expect_out == 20);
    CHECK(rep.pass);
    CHECK(rep.witnesses.empty());
    REQUIRE(rep.histogram_in.at(29) == 65);
    REQUIRE(rep.histogram_out.at(20) == 65);

    // spot check the per-line counts against a direct double loop
    std::mt19937 rng(777);
    std::uniform_int_distribution<LineId> pick(0, g.num_lines() - 1);
    for (int i = 0; i < 25; ++i) {
        LineId ell = pick(rng);
        long long direct = 0;
        for (LineId m : cls)
            if (lines_meet(g, m, ell)) ++direct;
        CHECK(rep.counts[ell] == direct);
    }
}

TEST_CASE("tight set check rejects a single-line perturbation") {
    Geometry g = Geometry::build(Field::build(3, 1));
    std::vector<LineId> cls = tangent_square_union_external(g);

    std::vector<char> member(g.num_lines(), 0);
    for (LineId ln : cls) member[ln] = 1;
    LineId outsider = 0;
    while (member[outsider]) ++outsider;
    cls.back() = outsider;
    std::sort(cls.begin(), cls.end());

    auto rep = tight_set_check(g, cls, Rational{5, 1});
    REQUIRE(rep.structural_ok); // size still fits, the counts do not
    CHECK_FALSE(rep.pass);
    CHECK_FALSE(rep.witnesses.empty());
}

TEST_CASE("tight set check reports structural failures without counting") {
    Geometry g = Geometry::build(Field::build(3, 1));
    std::vector<LineId> cls = tangent_square_union_external(g);

    SECTION("empty set throws") {
        std::vector<LineId> none;
        CHECK_THROWS_AS(tight_set_check(g, none), EmptySet);
    }
    SECTION("size not a multiple of the line count per point") {
        cls.pop_back();
        auto rep = tight_set_check(g, cls);
        CHECK_FALSE(rep.structural_ok);
        CHECK_FALSE(rep.pass);
        CHECK(rep.counts.empty());
    }
    SECTION("claimed parameter disagrees with the inferred one") {
        auto rep = tight_set_check(g, cls, Rational{4, 1});
        CHECK_FALSE(rep.structural_ok);
        CHECK_FALSE(rep.pass);
    }
}
