#pragma once

// Orbit decomposition of PG(3,q) under the stabilizer of the elliptic quadric
// E = E_0, and the Cameron-Liebler line classes of parameter (q^2+1)/2 built
// from it:
//
//   bruen_drudge   L' = L0 u L3      (tangents with q square points + externals)
//   cp_gmp         L'' = L' with the q^2 external lines inside pi swapped for
//                   the q^2 secant lines through U3
//   derive         one tangency swap step: remove A = T11 u T20, add
//                   B = T10 u T21 for a pair (lambda1 square, lambda2 nonsquare)
//
// verify_cl counts through point incidences (star counts), deliberately a
// different route from the Klein-form counting in tight_set_check.

#include <algorithm>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "cl3q/detail/parallel.hpp"
#include "cl3q/errors.hpp"
#include "cl3q/geometry.hpp"
#include "cl3q/klein.hpp"

namespace cl3q {

enum class LineOrbit : std::uint8_t {
    L0, // tangent, q off-quadric points all square
    L1, // tangent, q off-quadric points all nonsquare
    L2, // secant
    L3, // external
};
enum class PointOrbit : std::uint8_t { OnQuadric, Square, NonSquare };

struct OrbitDecomposition {
    std::vector<LineOrbit> line_orbit;   // per line id
    std::vector<PointOrbit> point_orbit; // per point id
    std::vector<LineId> L0, L1, L2, L3;
    std::vector<LineId> t0, t1; // pi lines through U3, split by point class
    std::vector<PointId> E, Os, On;
    std::vector<PointId> pi0, pi1;
};

inline OrbitDecomposition decompose(const Geometry& g) {
    const int q = g.q();
    OrbitDecomposition d;
    d.point_orbit.resize(g.num_points());
    d.line_orbit.resize(g.num_lines());

    for (PointId pt = 0; pt < g.num_points(); ++pt) {
        QuadClass c = g.pencil_class(0, pt);
        bool on_pi = g.point_coords(pt)[3] == 0;
        switch (c) {
        case QuadClass::Zero:
            d.point_orbit[pt] = PointOrbit::OnQuadric;
            d.E.push_back(pt);
            if (on_pi && pt != g.u3())
                throw StructureViolation("quadric point on pi other than U3");
            break;
        case QuadClass::Square:
            d.point_orbit[pt] = PointOrbit::Square;
            d.Os.push_back(pt);
            if (on_pi) d.pi0.push_back(pt);
            break;
        case QuadClass::NonSquare:
            d.point_orbit[pt] = PointOrbit::NonSquare;
            d.On.push_back(pt);
            if (on_pi) d.pi1.push_back(pt);
            break;
        }
    }

    for (LineId ln = 0; ln < g.num_lines(); ++ln) {
        auto pr = g.line_profile(ln, 0);
        LineOrbit o;
        if (pr.zeros == 2) {
            o = LineOrbit::L2;
        } else if (pr.zeros == 0) {
            o = LineOrbit::L3;
        } else {
            // tangent: the q remaining points must share one class
            PointOrbit cls = PointOrbit::OnQuadric;
            for (PointId pt : g.line_points(ln)) {
                if (pt == pr.at[0]) continue;
                if (cls == PointOrbit::OnQuadric) cls = d.point_orbit[pt];
                if (d.point_orbit[pt] != cls || cls == PointOrbit::OnQuadric)
                    throw StructureViolation("tangent line with mixed point classes");
            }
            o = cls == PointOrbit::Square ? LineOrbit::L0 : LineOrbit::L1;
        }
        d.line_orbit[ln] = o;
        (o == LineOrbit::L0   ? d.L0
         : o == LineOrbit::L1 ? d.L1
         : o == LineOrbit::L2 ? d.L2
                              : d.L3)
            .push_back(ln);

        if (g.line_in_pi(ln) && g.line_through_u3(ln)) {
            if (o == LineOrbit::L0)
                d.t0.push_back(ln);
            else if (o == LineOrbit::L1)
                d.t1.push_back(ln);
            else
                throw StructureViolation("pi line through U3 outside L0 u L1");
        }
    }

    const long long qq = q, q2 = qq * qq;
    auto want = [](long long got, long long expect, const char* what) {
        if (got != expect)
            throw StructureViolation(std::string("orbit size mismatch for ") + what);
    };
    want(d.E.size(), q2 + 1, "E");
    want(d.Os.size(), qq * (q2 + 1) / 2, "Os");
    want(d.On.size(), qq * (q2 + 1) / 2, "On");
    want(d.pi0.size(), qq * (qq + 1) / 2, "pi0");
    want(d.pi1.size(), qq * (qq + 1) / 2, "pi1");
    want(d.L0.size(), (qq + 1) * (q2 + 1) / 2, "L0");
    want(d.L1.size(), (qq + 1) * (q2 + 1) / 2, "L1");
    want(d.L2.size(), q2 * (q2 + 1) / 2, "L2");
    want(d.L3.size(), q2 * (q2 + 1) / 2, "L3");
    want(d.t0.size(), (qq + 1) / 2, "t0");
    want(d.t1.size(), (qq + 1) / 2, "t1");
    return d;
}

struct DerivationPair {
    int lambda1 = 0; // nonzero square
    int lambda2 = 0; // nonsquare
    friend bool operator==(const DerivationPair&, const DerivationPair&) = default;
};

struct Provenance {
    std::string family; // "bd" or "cpgmp"
    std::vector<DerivationPair> pairs;
};

struct LineClass {
    int q = 0;
    long long parameter = 0;
    std::vector<LineId> lines; // sorted, unique
    Provenance provenance;
};

inline long long cl_parameter(int q) { return (static_cast<long long>(q) * q + 1) / 2; }

inline LineClass bruen_drudge(const Geometry& g, const OrbitDecomposition& d) {
    LineClass c;
    c.q = g.q();
    c.parameter = cl_parameter(g.q());
    c.lines.reserve(d.L0.size() + d.L3.size());
    std::merge(d.L0.begin(), d.L0.end(), d.L3.begin(), d.L3.end(), std::back_inserter(c.lines));
    c.provenance.family = "bd";
    return c;
}

inline LineClass cp_gmp(const Geometry& g, const OrbitDecomposition& d) {
    const long long q2 = static_cast<long long>(g.q()) * g.q();
    std::vector<LineId> ext_in_pi, sec_thru_u3;
    for (LineId ln : d.L3)
        if (g.line_in_pi(ln)) ext_in_pi.push_back(ln);
    for (LineId ln : d.L2)
        if (g.line_through_u3(ln) && !g.line_in_pi(ln)) sec_thru_u3.push_back(ln);
    if (static_cast<long long>(ext_in_pi.size()) != q2)
        throw StructureViolation("external lines in pi: expected q^2");
    if (static_cast<long long>(sec_thru_u3.size()) != q2)
        throw StructureViolation("secant lines through U3: expected q^2");

    LineClass base = bruen_drudge(g, d);
    std::vector<LineId> kept;
    kept.reserve(base.lines.size());
    std::set_difference(base.lines.begin(), base.lines.end(), ext_in_pi.begin(), ext_in_pi.end(),
                        std::back_inserter(kept));
    LineClass c;
    c.q = g.q();
    c.parameter = base.parameter;
    std::merge(kept.begin(), kept.end(), sec_thru_u3.begin(), sec_thru_u3.end(),
               std::back_inserter(c.lines));
    c.provenance.family = "cpgmp";
    return c;
}

// The four tangency classes swapped by one derivation step. For ell tangent
// to E_mu at a point other than U3, with trace P = ell n pi:
//   mu square:    P in pi0 -> ell secant (T10-side), P in pi1 -> external (T11)
//   mu nonsquare: P in pi0 -> ell external (T20),    P in pi1 -> secant (T21)
// Any other combination is impossible and treated as a structure violation.
struct DerivationSets {
    DerivationPair pair;
    std::vector<LineId> T10, T11, T20, T21;
    std::vector<LineId> A; // T11 u T20: external lines, removed by derive
    std::vector<LineId> B; // T10 u T21: secant lines, added by derive
};

inline void validate_pair(const Geometry& g, DerivationPair p, std::size_t step) {
    const Field& f = g.field();
    if (p.lambda1 <= 0 || p.lambda1 >= g.q() || f.quad_class(p.lambda1) != QuadClass::Square)
        throw PreconditionViolated("lambda1 must be a nonzero square", {}, {}, step);
    if (p.lambda2 <= 0 || p.lambda2 >= g.q() || f.quad_class(p.lambda2) != QuadClass::NonSquare)
        throw PreconditionViolated("lambda2 must be a nonsquare", {}, {}, step);
}

inline DerivationSets derivation_sets(const Geometry& g, const OrbitDecomposition& d,
                                      DerivationPair p) {
    validate_pair(g, p, 0);
    DerivationSets s;
    s.pair = p;
    for (LineId ln = 0; ln < g.num_lines(); ++ln) {
        const auto& t = g.tangency(ln);
        if (t.kind != Geometry::TangencyKind::UniqueMember) continue;
        if (t.lambda != p.lambda1 && t.lambda != p.lambda2) continue;
        bool trace_sq = d.point_orbit[g.pi_trace(ln)] == PointOrbit::Square;
        LineOrbit o = d.line_orbit[ln];
        if (t.lambda == p.lambda1) {
            if (trace_sq && o == LineOrbit::L2)
                s.T10.push_back(ln);
            else if (!trace_sq && o == LineOrbit::L3)
                s.T11.push_back(ln);
            else
                throw StructureViolation("square-member tangent line off pattern");
        } else {
            if (trace_sq && o == LineOrbit::L3)
                s.T20.push_back(ln);
            else if (!trace_sq && o == LineOrbit::L2)
                s.T21.push_back(ln);
            else
                throw StructureViolation("nonsquare-member tangent line off pattern");
        }
    }
    const long long expect = static_cast<long long>(g.q()) * g.q() * (g.q() + 1) / 2;
    for (const auto* t : {&s.T10, &s.T11, &s.T20, &s.T21})
        if (static_cast<long long>(t->size()) != expect)
            throw StructureViolation("tangency class size is not q^2(q+1)/2");
    std::merge(s.T11.begin(), s.T11.end(), s.T20.begin(), s.T20.end(), std::back_inserter(s.A));
    std::merge(s.T10.begin(), s.T10.end(), s.T21.begin(), s.T21.end(), std::back_inserter(s.B));
    return s;
}

// Lines of `set` meeting ell, by the Klein form. Self-inclusive by default;
// include_self = false counts proper meets only.
inline long long count_meeting(const Geometry& g, const std::vector<LineId>& set, LineId ell,
                               bool include_self = true) {
    long long n = 0;
    for (LineId r : set) {
        if (!include_self && r == ell) continue;
        if (lines_meet(g, r, ell)) ++n;
    }
    return n;
}

inline LineClass derive(const Geometry& g, const OrbitDecomposition& d, const LineClass& base,
                        DerivationPair p, std::size_t step = 0) {
    validate_pair(g, p, step);
    const long long per_point = static_cast<long long>(g.q()) * g.q() + g.q() + 1;
    if (static_cast<long long>(base.lines.size()) != cl_parameter(g.q()) * per_point)
        throw SizeMismatch("derivation base does not have parameter (q^2+1)/2");

    DerivationSets s = derivation_sets(g, d, p);
    std::vector<LineId> missing, colliding;
    for (LineId ln : s.A)
        if (!std::binary_search(base.lines.begin(), base.lines.end(), ln)) {
            if (missing.size() < 10) missing.push_back(ln);
        }
    for (LineId ln : s.B)
        if (std::binary_search(base.lines.begin(), base.lines.end(), ln)) {
            if (colliding.size() < 10) colliding.push_back(ln);
        }
    if (!missing.empty() || !colliding.empty())
        throw PreconditionViolated("derivation preconditions failed: A must be contained, B absent",
                                   std::move(missing), std::move(colliding), step);

    LineClass out;
    out.q = base.q;
    out.parameter = base.parameter;
    std::vector<LineId> removed;
    removed.reserve(base.lines.size() - s.A.size());
    std::set_difference(base.lines.begin(), base.lines.end(), s.A.begin(), s.A.end(),
                        std::back_inserter(removed));
    std::merge(removed.begin(), removed.end(), s.B.begin(), s.B.end(),
               std::back_inserter(out.lines));
    out.provenance = base.provenance;
    out.provenance.pairs.push_back(p);
    return out;
}

inline LineClass derive_sequence(const Geometry& g, const OrbitDecomposition& d, LineClass base,
                                 const std::vector<DerivationPair>& pairs) {
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        validate_pair(g, pairs[i], i);
        for (std::size_t j = 0; j < i; ++j) {
            if (pairs[j].lambda1 == pairs[i].lambda1)
                throw PreconditionViolated("repeated lambda1 across derivation steps", {}, {}, i);
            if (pairs[j].lambda2 == pairs[i].lambda2)
                throw PreconditionViolated("repeated lambda2 across derivation steps", {}, {}, i);
        }
    }
    for (std::size_t i = 0; i < pairs.size(); ++i) base = derive(g, d, base, pairs[i], i);
    return base;
}

using VerifyReport = CountCheckReport;

// Cameron-Liebler counting criterion through point incidences: with
// x = |L| / (q^2+q+1), every line of the space must meet L in x(q+1)+q^2
// members when it belongs to L and x(q+1) otherwise, counting itself.
// Star counts turn this into star sums: distinct meeting lines share exactly
// one point, and the line itself is counted once per point, q extra times.
inline VerifyReport verify_cl(const Geometry& g, const LineClass& cls, int threads = 0) {
    if (cls.lines.empty()) throw EmptySet("verify_cl on an empty class");
    const long long q = g.q();
    const long long per_point = q * q + q + 1;
    if (static_cast<long long>(cls.lines.size()) % per_point != 0)
        throw SizeMismatch("line-set size is not a multiple of q^2+q+1");

    VerifyReport rep;
    rep.x = static_cast<long long>(cls.lines.size()) / per_point;
    rep.structural_ok = cls.parameter == rep.x;
    rep.expect_in = rep.x * (q + 1) + q * q;
    rep.expect_out = rep.x * (q + 1);

    std::vector<std::int32_t> star(g.num_points(), 0);
    std::vector<char> member(g.num_lines(), 0);
    for (LineId ln : cls.lines) {
        member[ln] = 1;
        for (PointId pt : g.line_points(ln)) ++star[pt];
    }

    rep.counts.assign(g.num_lines(), 0);
    auto plan = detail::plan_chunks(g.num_lines(), threads);
    std::vector<std::map<long long, long long>> hin(plan.chunks), hout(plan.chunks);
    std::vector<std::vector<LineId>> wit(plan.chunks);

    detail::run_chunks(plan, [&](long long b, long long e, int chunk) {
        for (long long ln = b; ln < e; ++ln) {
            long long cnt = 0;
            for (PointId pt : g.line_points(static_cast<LineId>(ln))) cnt += star[pt];
            if (member[ln]) cnt -= q; // self counted q+1 times
            rep.counts[ln] = static_cast<std::int32_t>(cnt);
            long long want = member[ln] ? rep.expect_in : rep.expect_out;
            (member[ln] ? hin : hout)[chunk][cnt]++;
            if (cnt != want && wit[chunk].size() < 10)
                wit[chunk].push_back(static_cast<LineId>(ln));
        }
    });

    for (int c = 0; c < plan.chunks; ++c) {
        for (auto& [k, v] : hin[c]) rep.histogram_in[k] += v;
        for (auto& [k, v] : hout[c]) rep.histogram_out[k] += v;
        for (LineId w : wit[c])
            if (rep.witnesses.size() < 10) rep.witnesses.push_back(w);
    }
    rep.pass = rep.structural_ok && rep.histogram_in.size() == 1 &&
               rep.histogram_in.count(rep.expect_in) == 1 &&
               (rep.histogram_out.empty() ||
                (rep.histogram_out.size() == 1 && rep.histogram_out.count(rep.expect_out) == 1));
    return rep;
}

} // namespace cl3q
