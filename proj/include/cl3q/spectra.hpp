#pragma once

// Character spectra of a line set: the multiset of |L n plane| over all
// planes, and of |L n star| over all points. Spectrum strings follow the
// "value^multiplicity" convention with multiplicity one printed bare.
// classify matches spectra against the closed-form value sets of the three
// families; it is a necessary-condition classifier only (distinct labels
// imply inequivalence, equal labels imply nothing).

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "cl3q/geometry.hpp"

namespace cl3q {

enum class SpectrumKind : std::uint8_t { Planes, Stars };

struct CharacterSpectrum {
    SpectrumKind kind = SpectrumKind::Planes;
    std::map<long long, long long> entries; // value -> multiplicity
};

inline std::vector<std::int32_t> plane_counts(const Geometry& g, const std::vector<LineId>& lines) {
    std::vector<std::int32_t> c(g.num_planes(), 0);
    for (LineId ln : lines)
        for (PlaneId pl : g.line_planes(ln)) ++c[pl];
    return c;
}

inline std::vector<std::int32_t> star_counts(const Geometry& g, const std::vector<LineId>& lines) {
    std::vector<std::int32_t> c(g.num_points(), 0);
    for (LineId ln : lines)
        for (PointId pt : g.line_points(ln)) ++c[pt];
    return c;
}

inline CharacterSpectrum aggregate(const std::vector<std::int32_t>& counts, SpectrumKind kind) {
    CharacterSpectrum s;
    s.kind = kind;
    for (std::int32_t c : counts) ++s.entries[c];
    return s;
}

inline CharacterSpectrum plane_spectrum(const Geometry& g, const std::vector<LineId>& lines) {
    return aggregate(plane_counts(g, lines), SpectrumKind::Planes);
}

inline CharacterSpectrum star_spectrum(const Geometry& g, const std::vector<LineId>& lines) {
    return aggregate(star_counts(g, lines), SpectrumKind::Stars);
}

inline long long spectrum_total(const CharacterSpectrum& s) {
    long long acc = 0;
    for (auto& [v, m] : s.entries) acc += v * m;
    return acc;
}

inline std::set<long long> spectrum_support(const CharacterSpectrum& s) {
    std::set<long long> out;
    for (auto& [v, m] : s.entries) out.insert(v);
    return out;
}

inline std::string spectrum_string(const CharacterSpectrum& s) {
    std::string out;
    for (auto& [v, m] : s.entries) {
        if (!out.empty()) out += ", ";
        out += std::to_string(v);
        if (m != 1) out += "^" + std::to_string(m);
    }
    return out;
}

// Closed-form character value sets, by family.

inline std::set<long long> bd_plane_values(int q) {
    const long long Q = q;
    return {Q * Q + (Q + 1) / 2, Q * (Q - 1) / 2, Q * (Q + 1) / 2 + 1};
}
inline std::set<long long> bd_star_values(int q) {
    const long long Q = q;
    return {(Q + 1) / 2, Q * (Q + 1) / 2, Q * (Q + 1) / 2 + Q + 1};
}
inline std::set<long long> cpgmp_plane_values(int q) {
    const long long Q = q;
    return {(Q + 1) / 2, Q * (Q - 1) / 2 - 1, Q * (Q + 1) / 2, Q * (Q + 1) / 2 + Q + 1,
            Q * Q + (Q - 1) / 2};
}
inline std::set<long long> cpgmp_star_values(int q) {
    const long long Q = q;
    return {(Q + 3) / 2, Q * (Q - 1) / 2, Q * (Q + 1) / 2 + 1, Q * (Q + 1) / 2 + Q + 2,
            Q * Q + (Q + 1) / 2};
}
inline std::set<long long> derived_plane_values(int q) {
    const long long Q = q;
    return {Q * Q + (Q + 1) / 2,
            Q * Q - 3 * (Q + 1) / 2,
            Q * (Q - 1) / 2 + 3 * (Q + 1),
            Q * (Q - 1) / 2 + 2 * (Q + 1),
            Q * (Q - 1) / 2 + Q + 1,
            Q * (Q - 1) / 2,
            Q * (Q - 1) / 2 - (Q + 1),
            Q * (Q - 1) / 2 - 2 * (Q + 1)};
}
inline std::set<long long> derived_star_values(int q) {
    const long long Q = q;
    return {(Q + 1) / 2,
            5 * (Q + 1) / 2,
            Q * (Q + 1) / 2 - 2 * (Q + 1),
            Q * (Q + 1) / 2 - (Q + 1),
            Q * (Q + 1) / 2,
            Q * (Q + 1) / 2 + Q + 1,
            Q * (Q + 1) / 2 + 2 * (Q + 1),
            Q * (Q + 1) / 2 + 3 * (Q + 1)};
}

enum class FamilyLabel : std::uint8_t { BruenDrudge, PerturbedBD, DerivedNew, Unknown };

inline const char* family_label_name(FamilyLabel l) {
    switch (l) {
    case FamilyLabel::BruenDrudge: return "BruenDrudge";
    case FamilyLabel::PerturbedBD: return "PerturbedBD";
    case FamilyLabel::DerivedNew: return "DerivedNew";
    default: return "Unknown";
    }
}

// Reliable only for q >= 7: below that the family value sets overlap.
inline FamilyLabel classify(int q, const CharacterSpectrum& planes,
                            const CharacterSpectrum& stars) {
    auto within = [](const CharacterSpectrum& s, const std::set<long long>& allowed) {
        for (auto& [v, m] : s.entries)
            if (!allowed.count(v)) return false;
        return true;
    };
    if (within(planes, bd_plane_values(q)) && within(stars, bd_star_values(q)))
        return FamilyLabel::BruenDrudge;
    if (within(planes, cpgmp_plane_values(q)) && within(stars, cpgmp_star_values(q)))
        return FamilyLabel::PerturbedBD;
    const long long star_mark = 5LL * (q + 1) / 2; // stars at quadric points
    const long long union_mark = static_cast<long long>(q) * q + q + 1;
    if (within(planes, derived_plane_values(q)) && within(stars, derived_star_values(q)) &&
        stars.entries.count(star_mark) && !stars.entries.count(union_mark) &&
        !planes.entries.count(union_mark))
        return FamilyLabel::DerivedNew;
    return FamilyLabel::Unknown;
}

} // namespace cl3q
