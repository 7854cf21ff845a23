#pragma once

// Klein correspondence: lines of PG(3,q) are points of the quadric Q+(5,q)
// through their Plucker tuples, and two lines meet exactly when their images
// are conjugate under the polarization of the Klein form,
//
//   B(p, p') = p01 p'23 + p23 p'01 - p02 p'13 - p13 p'02 + p03 p'12 + p12 p'03.
//
// tight_set_check counts conjugate pairs with this form only. It shares no
// code with the point-incidence counting in verify_cl, which is the point:
// the two routes must reproduce each other's numbers on every line.

#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <vector>

#include "cl3q/detail/parallel.hpp"
#include "cl3q/errors.hpp"
#include "cl3q/geometry.hpp"

namespace cl3q {

inline int klein_form(const Field& f, const Plucker& a, const Plucker& b) {
    int acc = f.add(f.mul(a[0], b[5]), f.mul(a[5], b[0]));
    acc = f.sub(acc, f.add(f.mul(a[1], b[4]), f.mul(a[4], b[1])));
    return f.add(acc, f.add(f.mul(a[2], b[3]), f.mul(a[3], b[2])));
}

inline bool lines_meet(const Geometry& g, LineId a, LineId b) {
    return klein_form(g.field(), g.line_plucker(a), g.line_plucker(b)) == 0;
}

struct Rational {
    long long num = 0;
    long long den = 1;
};

// Shared result shape of the two counting checkers. counts[ln] is the
// self-inclusive number of members meeting line ln.
struct CountCheckReport {
    bool pass = false;
    bool structural_ok = false; // size divides q^2+q+1 and matches the claim
    long long x = 0;            // inferred parameter
    long long expect_in = 0, expect_out = 0;
    std::map<long long, long long> histogram_in, histogram_out;
    std::vector<LineId> witnesses; // first lines (by id) with a wrong count
    std::vector<std::int32_t> counts;
};

using TightSetReport = CountCheckReport;

// An x-tight set of Q+(5,q) meets the perp of each of its points in
// x(q+1)+q^2 points and the perp of any other point in x(q+1). Back in
// PG(3,q): members see their own line self-inclusively.
inline TightSetReport tight_set_check(const Geometry& g, const std::vector<LineId>& set,
                                      std::optional<Rational> claimed = std::nullopt,
                                      int threads = 0) {
    if (set.empty()) throw EmptySet("tight_set_check on an empty line set");

    const long long q = g.q();
    const long long per_point = q * q + q + 1;
    const long long n = g.num_lines();

    TightSetReport rep;
    rep.structural_ok = static_cast<long long>(set.size()) % per_point == 0;
    if (rep.structural_ok) rep.x = static_cast<long long>(set.size()) / per_point;
    if (claimed) {
        // the claim must be exactly the inferred integer
        rep.structural_ok = rep.structural_ok && claimed->den != 0 &&
                            claimed->num == rep.x * claimed->den;
    }
    if (!rep.structural_ok) return rep; // graceful structural failure

    rep.expect_in = rep.x * (q + 1) + q * q;
    rep.expect_out = rep.x * (q + 1);

    std::vector<char> member(n, 0);
    for (LineId ln : set) member[ln] = 1;

    // dense copy of the member tuples for the inner loop
    std::vector<std::uint16_t> tuples(set.size() * 6);
    for (std::size_t i = 0; i < set.size(); ++i) {
        Plucker p = g.line_plucker(set[i]);
        std::copy(p.begin(), p.end(), &tuples[i * 6]);
    }

    const Field& f = g.field();
    rep.counts.assign(n, 0);
    auto plan = detail::plan_chunks(n, threads);
    std::vector<std::map<long long, long long>> hin(plan.chunks), hout(plan.chunks);
    std::vector<std::vector<LineId>> wit(plan.chunks);

    detail::run_chunks(plan, [&](long long b, long long e, int chunk) {
        for (long long ln = b; ln < e; ++ln) {
            Plucker p = g.line_plucker(static_cast<LineId>(ln));
            long long cnt = 0;
            const std::uint16_t* t = tuples.data();
            for (std::size_t i = 0; i < set.size(); ++i, t += 6) {
                int acc = f.add(f.mul(p[0], t[5]), f.mul(p[5], t[0]));
                acc = f.sub(acc, f.add(f.mul(p[1], t[4]), f.mul(p[4], t[1])));
                acc = f.add(acc, f.add(f.mul(p[2], t[3]), f.mul(p[3], t[2])));
                if (acc == 0) ++cnt;
            }
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
    rep.pass = rep.histogram_in.size() == 1 && rep.histogram_in.count(rep.expect_in) == 1 &&
               (rep.histogram_out.empty() ||
                (rep.histogram_out.size() == 1 && rep.histogram_out.count(rep.expect_out) == 1));
    return rep;
}

} // namespace cl3q
