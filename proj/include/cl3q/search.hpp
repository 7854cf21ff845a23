#pragma once

// Derivation search. A depth-d derivation sequence uses d distinct square
// values and d distinct nonsquare values; whatever the pairing and order, the
// resulting line set depends only on the chosen value sets, because each
// value lambda contributes the same swap (drop the external tangents of
// E_lambda, add its secant tangents). Enumeration therefore runs over
// (square-subset, nonsquare-subset) combinations, with the zip of the two
// sorted sets as the representative pair sequence. Outcomes are deduplicated
// by spectrum fingerprint and each distinct class is verified.

#include <algorithm>
#include <map>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "cl3q/errors.hpp"
#include "cl3q/geometry.hpp"
#include "cl3q/line_classes.hpp"
#include "cl3q/spectra.hpp"

namespace cl3q {

struct SearchFingerprint {
    std::string plane_string;
    std::string star_string;
    std::vector<DerivationPair> pairs; // representative sequence reaching it
    long long combinations = 0;        // value-set choices mapping here
    bool verified = false;             // the class passed verify_cl
};

struct SearchResult {
    int q = 0;
    std::string start_family;
    int depth = 0;
    long long explored = 0; // combinations examined
    bool partial = false;   // stopped by budget before exhausting the space
    std::vector<SearchFingerprint> fingerprints;
};

namespace detail {

// all size-d subsets of {0, ..., n-1}, ascending
template <typename F>
bool for_each_combination(int n, int d, F visit) {
    std::vector<int> idx(d);
    for (int i = 0; i < d; ++i) idx[i] = i;
    while (true) {
        if (!visit(idx)) return false;
        int i = d - 1;
        while (i >= 0 && idx[i] == n - d + i) --i;
        if (i < 0) return true;
        ++idx[i];
        for (int j = i + 1; j < d; ++j) idx[j] = idx[j - 1] + 1;
    }
}

} // namespace detail

inline SearchResult derivation_search(const Geometry& g, const OrbitDecomposition& d,
                                      const LineClass& start, int depth,
                                      long long budget = -1, int threads = 0) {
    const Field& f = g.field();
    int q = f.q();
    if (depth < 0 || depth > (q - 1) / 2)
        throw PreconditionViolated("search depth must lie in [0, (q-1)/2]", {}, {}, 0);

    // per-value swap sets: external and secant tangents of each pencil member
    std::vector<std::vector<LineId>> ext(q), sec(q);
    for (LineId ln = 0; ln < g.num_lines(); ++ln) {
        const auto& t = g.tangency(ln);
        if (t.kind != Geometry::TangencyKind::UniqueMember) continue;
        if (d.line_orbit[ln] == LineOrbit::L3) ext[t.lambda].push_back(ln);
        else if (d.line_orbit[ln] == LineOrbit::L2) sec[t.lambda].push_back(ln);
    }

    std::vector<int> squares, nonsquares;
    for (int v = 1; v < q; ++v)
        (f.quad_class(v) == QuadClass::Square ? squares : nonsquares).push_back(v);

    SearchResult out;
    out.q = q;
    out.start_family = start.provenance.family;
    out.depth = depth;

    std::map<std::pair<std::string, std::string>, std::size_t> seen;
    std::vector<LineId> removed, added, stripped, candidate;

    auto consider = [&](const std::vector<int>& sq_idx, const std::vector<int>& ns_idx) {
        removed.clear();
        added.clear();
        for (int i : sq_idx) {
            removed.insert(removed.end(), ext[squares[i]].begin(), ext[squares[i]].end());
            added.insert(added.end(), sec[squares[i]].begin(), sec[squares[i]].end());
        }
        for (int i : ns_idx) {
            removed.insert(removed.end(), ext[nonsquares[i]].begin(), ext[nonsquares[i]].end());
            added.insert(added.end(), sec[nonsquares[i]].begin(), sec[nonsquares[i]].end());
        }
        std::sort(removed.begin(), removed.end());
        std::sort(added.begin(), added.end());

        stripped.clear();
        std::set_difference(start.lines.begin(), start.lines.end(), removed.begin(),
                            removed.end(), std::back_inserter(stripped));
        if (stripped.size() + removed.size() != start.lines.size())
            throw StructureViolation("swap set is not contained in the start class");
        candidate.clear();
        std::merge(stripped.begin(), stripped.end(), added.begin(), added.end(),
                   std::back_inserter(candidate));
        if (candidate.size() != start.lines.size())
            throw StructureViolation("added tangents collide with the start class");

        std::string planes = spectrum_string(plane_spectrum(g, candidate));
        std::string stars = spectrum_string(star_spectrum(g, candidate));
        auto key = std::make_pair(planes, stars);
        auto it = seen.find(key);
        if (it != seen.end()) {
            ++out.fingerprints[it->second].combinations;
            return;
        }

        LineClass cls;
        cls.q = q;
        cls.parameter = start.parameter;
        cls.lines = candidate;
        cls.provenance = start.provenance;
        for (std::size_t k = 0; k < sq_idx.size(); ++k)
            cls.provenance.pairs.push_back(
                DerivationPair{squares[sq_idx[k]], nonsquares[ns_idx[k]]});

        SearchFingerprint fp;
        fp.plane_string = std::move(planes);
        fp.star_string = std::move(stars);
        fp.pairs = cls.provenance.pairs;
        fp.combinations = 1;
        fp.verified = verify_cl(g, cls, threads).pass;
        seen.emplace(std::make_pair(fp.plane_string, fp.star_string), out.fingerprints.size());
        out.fingerprints.push_back(std::move(fp));
    };

    for (int dd = 0; dd <= depth && !out.partial; ++dd) {
        bool finished = detail::for_each_combination(
            static_cast<int>(squares.size()), dd, [&](const std::vector<int>& sq_idx) {
                return detail::for_each_combination(
                    static_cast<int>(nonsquares.size()), dd, [&](const std::vector<int>& ns_idx) {
                        if (budget >= 0 && out.explored >= budget) return false;
                        ++out.explored;
                        consider(sq_idx, ns_idx);
                        return true;
                    });
            });
        if (!finished) out.partial = true;
    }

    std::sort(out.fingerprints.begin(), out.fingerprints.end(),
              [](const SearchFingerprint& a, const SearchFingerprint& b) {
                  return std::tie(a.plane_string, a.star_string) <
                         std::tie(b.plane_string, b.star_string);
              });
    return out;
}

} // namespace cl3q
