#pragma once

// Projective space PG(3,q) with the pencil of quadrics
//
//     Q_lambda(X) = X1^2 - omega X2^2 + lambda X4^2 + X3 X4,
//
// omega a fixed nonsquare. Every member is elliptic; the degenerate direction
// of the pencil is the plane pi : X4 = 0, which meets every member exactly in
// the base point U3 = (0,0,1,0).
//
// Points and planes are normalized 4-tuples (first nonzero coordinate 1) and
// share one id space ordered lexicographically; lines carry normalized
// Plucker 6-tuples, again with lexicographic ids, plus their full point and
// plane incidence lists. Everything is enumerated once at build time and the
// structure is immutable afterwards.

#include <algorithm>
#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

#include "cl3q/errors.hpp"
#include "cl3q/field.hpp"

namespace cl3q {

using Coords4 = std::array<std::uint16_t, 4>;
using Plucker = std::array<std::uint16_t, 6>;
using PointId = std::int32_t;
using LineId = std::int32_t;
using PlaneId = std::int32_t;

class Geometry {
public:
    // omega = -1 selects the canonical (smallest-code) nonsquare.
    static Geometry build(Field f, int omega = -1, int max_q = 13) {
        return Geometry(std::move(f), omega, max_q);
    }

    const Field& field() const { return f_; }
    int q() const { return q_; }
    int omega() const { return omega_; }

    int num_points() const { return static_cast<int>(reps_.size()); }
    int num_planes() const { return static_cast<int>(reps_.size()); }
    int num_lines() const { return n_lines_; }

    Coords4 point_coords(PointId id) const { return reps_[id]; }
    Coords4 plane_coords(PlaneId id) const { return reps_[id]; }

    PointId point_id(Coords4 raw) const { return rep_id(raw); }
    PlaneId plane_id(Coords4 raw) const { return rep_id(raw); }

    Plucker line_plucker(LineId id) const {
        Plucker p;
        std::copy_n(&plucker_[static_cast<std::size_t>(id) * 6], 6, p.begin());
        return p;
    }
    std::span<const PointId> line_points(LineId id) const {
        return {&line_points_[static_cast<std::size_t>(id) * (q_ + 1)],
                static_cast<std::size_t>(q_ + 1)};
    }
    std::span<const PlaneId> line_planes(LineId id) const {
        return {&line_planes_[static_cast<std::size_t>(id) * (q_ + 1)],
                static_cast<std::size_t>(q_ + 1)};
    }

    // -1 when the (normalized) tuple is not a line of this geometry.
    LineId line_id(Plucker raw) const {
        Plucker key = normalize(raw);
        LineId lo = 0, hi = n_lines_;
        while (lo < hi) { // ids are assigned in lexicographic Plucker order
            LineId mid = lo + (hi - lo) / 2;
            const std::uint16_t* a = &plucker_[static_cast<std::size_t>(mid) * 6];
            if (std::lexicographical_compare(a, a + 6, key.begin(), key.end()))
                lo = mid + 1;
            else
                hi = mid;
        }
        if (lo == n_lines_) return -1;
        return line_plucker(lo) == key ? lo : -1;
    }

    LineId line_through(PointId a, PointId b) const {
        LineId id = line_id(plucker_of(reps_[a], reps_[b]));
        if (id < 0) throw StructureViolation("span of two points is not a line");
        return id;
    }

    bool point_on_plane(PointId pt, PlaneId pl) const {
        const Coords4& x = reps_[pt];
        const Coords4& a = reps_[pl];
        int acc = 0;
        for (int i = 0; i < 4; ++i) acc = f_.add(acc, f_.mul(x[i], a[i]));
        return acc == 0;
    }
    bool line_in_plane(LineId ln, PlaneId pl) const {
        auto pls = line_planes(ln);
        return std::binary_search(pls.begin(), pls.end(), pl);
    }
    bool line_has_point(LineId ln, PointId pt) const {
        auto pts = line_points(ln);
        return std::binary_search(pts.begin(), pts.end(), pt);
    }

    PointId u3() const { return u3_; }
    PlaneId pi() const { return pi_; }

    bool line_in_pi(LineId id) const { return line_flags_[id] & kInPi; }
    bool line_through_u3(LineId id) const { return line_flags_[id] & kThroughU3; }

    // For a line not in pi: its unique point on pi.
    PointId pi_trace(LineId id) const { return pi_trace_[id]; }

    // ---- pencil ----

    int quadric_value(int lambda, const Coords4& x) const {
        int v = f_.sub(f_.mul(x[0], x[0]), f_.mul(omega_, f_.mul(x[1], x[1])));
        v = f_.add(v, f_.mul(lambda, f_.mul(x[3], x[3])));
        return f_.add(v, f_.mul(x[2], x[3]));
    }

    QuadClass pencil_class(int lambda, PointId pt) const {
        return pencil_cache_[static_cast<std::size_t>(lambda) * reps_.size() + pt];
    }

    PlaneId polar_plane(int lambda, PointId pt) const {
        return rep_id(polar_dual(lambda, reps_[pt]));
    }

    // Polar line: intersection of the polar planes of two of its points.
    LineId polar_line(int lambda, LineId ln) const {
        auto pts = line_points(ln);
        Coords4 a = polar_dual(lambda, reps_[pts[0]]);
        Coords4 b = polar_dual(lambda, reps_[pts[1]]);
        auto [c, d] = nullspace_pair(a, b);
        LineId id = line_id(plucker_of(c, d));
        if (id < 0) throw StructureViolation("polar image is not a line");
        return id;
    }

    struct QuadricProfile {
        int zeros = 0;                     // 0 external, 1 tangent, 2 secant
        std::array<PointId, 2> at{-1, -1}; // the intersection points, if any
    };

    QuadricProfile line_profile(LineId ln, int lambda) const {
        QuadricProfile pr;
        for (PointId pt : line_points(ln)) {
            if (pencil_class(lambda, pt) == QuadClass::Zero) {
                if (pr.zeros > 1)
                    throw StructureViolation("line meets an elliptic quadric in 3 points");
                pr.at[pr.zeros++] = pt;
            }
        }
        return pr;
    }

    enum class TangencyKind : std::uint8_t {
        UniqueMember,     // off pi, not through U3: tangent to exactly one member
        SecantAllMembers, // off pi through U3: meets every member in {U3, one more}
        PiThroughU3,      // in pi through U3: tangent to every member at U3
        PiAvoidingU3,     // in pi, U3 not on it: external to every member
    };
    struct Tangency {
        TangencyKind kind;
        int lambda = -1;        // valid for UniqueMember
        PointId tangent_at = -1;
    };
    const Tangency& tangency(LineId id) const { return tangency_[id]; }

    Coords4 normalize(Coords4 v) const { return normalize_tuple(v); }
    Plucker normalize(Plucker v) const { return normalize_tuple(v); }

    Plucker plucker_of(const Coords4& x, const Coords4& y) const {
        auto d = [&](int i, int j) { return f_.sub(f_.mul(x[i], y[j]), f_.mul(x[j], y[i])); };
        return normalize(Plucker{static_cast<std::uint16_t>(d(0, 1)), static_cast<std::uint16_t>(d(0, 2)),
                                 static_cast<std::uint16_t>(d(0, 3)), static_cast<std::uint16_t>(d(1, 2)),
                                 static_cast<std::uint16_t>(d(1, 3)), static_cast<std::uint16_t>(d(2, 3))});
    }

private:
    static constexpr std::uint8_t kInPi = 1;
    static constexpr std::uint8_t kThroughU3 = 2;

    Geometry(Field f, int omega, int max_q) : f_(std::move(f)), q_(f_.q()) {
        if (q_ > max_q)
            throw CapacityExceeded("q = " + std::to_string(q_) + " exceeds the working bound " +
                                   std::to_string(max_q) + " (raise it explicitly if intended)");
        if (q_ > 1021) // Plucker keys are packed into 6 ten-bit fields
            throw CapacityExceeded("geometry enumeration supports q <= 1021");
        omega_ = omega < 0 ? f_.canonical_nonsquare() : omega;
        if (omega_ <= 0 || omega_ >= q_ || f_.quad_class(omega_) != QuadClass::NonSquare)
            throw StructureViolation("omega must be a nonsquare field element");

        enumerate_reps();
        enumerate_lines();
        u3_ = rep_id(Coords4{0, 0, 1, 0});
        pi_ = rep_id(Coords4{0, 0, 0, 1});
        build_pencil_cache();
        classify_lines();
    }

    template <typename Tuple>
    Tuple normalize_tuple(Tuple v) const {
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (v[i] == 0) continue;
            if (v[i] != 1) {
                int s = f_.inv(v[i]);
                for (std::size_t j = i; j < v.size(); ++j)
                    v[j] = static_cast<std::uint16_t>(f_.mul(v[j], s));
            }
            return v;
        }
        throw StructureViolation("cannot normalize the zero tuple");
    }

    std::int32_t rep_id(Coords4 raw) const {
        Coords4 key = normalize(raw);
        auto it = std::lower_bound(reps_.begin(), reps_.end(), key);
        if (it == reps_.end() || *it != key)
            throw StructureViolation("tuple is not a normalized representative");
        return static_cast<std::int32_t>(it - reps_.begin());
    }

    void enumerate_reps() {
        // ascending scan emits normalized tuples in lexicographic order
        for (int a = 0; a < q_; ++a)
            for (int b = 0; b < q_; ++b)
                for (int c = 0; c < q_; ++c)
                    for (int d = 0; d < q_; ++d) {
                        Coords4 v{static_cast<std::uint16_t>(a), static_cast<std::uint16_t>(b),
                                  static_cast<std::uint16_t>(c), static_cast<std::uint16_t>(d)};
                        int first = 0;
                        while (first < 4 && v[first] == 0) ++first;
                        if (first == 4 || v[first] != 1) continue;
                        reps_.push_back(v);
                    }
        long long expect = static_cast<long long>(q_) * q_ * q_ + q_ * q_ + q_ + 1;
        if (static_cast<long long>(reps_.size()) != expect)
            throw StructureViolation("point enumeration has the wrong size");
    }

    static std::uint64_t pack6(const Plucker& p) {
        std::uint64_t k = 0;
        for (int i = 0; i < 6; ++i) k = (k << 10) | p[i];
        return k;
    }

    void enumerate_lines() {
        const int n_pts = static_cast<int>(reps_.size());
        std::unordered_set<std::uint64_t> seen;
        std::vector<std::pair<Plucker, std::pair<PointId, PointId>>> raw;
        long long expect = (static_cast<long long>(q_) * q_ + 1) *
                           (static_cast<long long>(q_) * q_ + q_ + 1);
        seen.reserve(static_cast<std::size_t>(expect) * 2);
        raw.reserve(static_cast<std::size_t>(expect));

        for (PointId i = 0; i < n_pts; ++i) {
            for (PointId j = i + 1; j < n_pts; ++j) {
                Plucker p = plucker_of(reps_[i], reps_[j]);
                if (seen.insert(pack6(p)).second) raw.emplace_back(p, std::make_pair(i, j));
            }
        }
        if (static_cast<long long>(raw.size()) != expect)
            throw StructureViolation("line enumeration has the wrong size");

        std::sort(raw.begin(), raw.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });

        n_lines_ = static_cast<int>(raw.size());
        plucker_.resize(static_cast<std::size_t>(n_lines_) * 6);
        line_points_.resize(static_cast<std::size_t>(n_lines_) * (q_ + 1));
        line_planes_.resize(static_cast<std::size_t>(n_lines_) * (q_ + 1));

        for (LineId id = 0; id < n_lines_; ++id) {
            const auto& [p, span] = raw[id];
            std::copy(p.begin(), p.end(), &plucker_[static_cast<std::size_t>(id) * 6]);

            // Klein relation p01 p23 - p02 p13 + p03 p12 = 0
            int rel = f_.add(f_.sub(f_.mul(p[0], p[5]), f_.mul(p[1], p[4])), f_.mul(p[2], p[3]));
            if (rel != 0) throw StructureViolation("Plucker tuple violates the Klein relation");

            const Coords4& P = reps_[span.first];
            const Coords4& Q = reps_[span.second];

            PointId* pts = &line_points_[static_cast<std::size_t>(id) * (q_ + 1)];
            pts[0] = span.first;
            for (int mu = 0; mu < q_; ++mu) {
                Coords4 x;
                for (int c = 0; c < 4; ++c)
                    x[c] = static_cast<std::uint16_t>(f_.add(f_.mul(mu, P[c]), Q[c]));
                pts[mu + 1] = rep_id(x);
            }
            std::sort(pts, pts + q_ + 1);
            if (std::adjacent_find(pts, pts + q_ + 1) != pts + q_ + 1)
                throw StructureViolation("line has repeated points");

            auto [a, b] = nullspace_pair(P, Q);
            PlaneId* pls = &line_planes_[static_cast<std::size_t>(id) * (q_ + 1)];
            pls[0] = rep_id(a);
            for (int mu = 0; mu < q_; ++mu) {
                Coords4 x;
                for (int c = 0; c < 4; ++c)
                    x[c] = static_cast<std::uint16_t>(f_.add(f_.mul(mu, a[c]), b[c]));
                pls[mu + 1] = rep_id(x);
            }
            std::sort(pls, pls + q_ + 1);
            if (std::adjacent_find(pls, pls + q_ + 1) != pls + q_ + 1)
                throw StructureViolation("line has repeated planes");
        }
    }

    // Solution basis of { a.x = 0, b.x = 0 } for independent a, b: two
    // independent 4-tuples spanning the annihilated 2-space.
    std::pair<Coords4, Coords4> nullspace_pair(Coords4 a, Coords4 b) const {
        std::array<std::array<int, 4>, 2> m{};
        for (int i = 0; i < 4; ++i) {
            m[0][i] = a[i];
            m[1][i] = b[i];
        }
        std::array<int, 2> pivot{-1, -1};
        int row = 0;
        for (int col = 0; col < 4 && row < 2; ++col) {
            int pr = -1;
            for (int r = row; r < 2; ++r)
                if (m[r][col] != 0) { pr = r; break; }
            if (pr == -1) continue;
            std::swap(m[row], m[pr]);
            int s = f_.inv(m[row][col]);
            for (int c = 0; c < 4; ++c) m[row][c] = f_.mul(m[row][c], s);
            for (int r = 0; r < 2; ++r) {
                if (r == row || m[r][col] == 0) continue;
                int factor = m[r][col];
                for (int c = 0; c < 4; ++c) m[r][c] = f_.sub(m[r][c], f_.mul(factor, m[row][c]));
            }
            pivot[row++] = col;
        }
        if (row != 2) throw StructureViolation("nullspace of dependent rows requested");

        std::array<Coords4, 2> basis;
        int k = 0;
        for (int col = 0; col < 4; ++col) {
            if (col == pivot[0] || col == pivot[1]) continue;
            Coords4 x{0, 0, 0, 0};
            x[col] = 1;
            for (int r = 0; r < 2; ++r)
                x[pivot[r]] = static_cast<std::uint16_t>(f_.neg(m[r][col]));
            basis[k++] = x;
        }
        return {basis[0], basis[1]};
    }

    Coords4 polar_dual(int lambda, const Coords4& x) const {
        int h = f_.inv(f_.from_int(2)); // q odd, so 2 is invertible
        return Coords4{x[0], static_cast<std::uint16_t>(f_.neg(f_.mul(omega_, x[1]))),
                       static_cast<std::uint16_t>(f_.mul(h, x[3])),
                       static_cast<std::uint16_t>(f_.add(f_.mul(h, x[2]), f_.mul(lambda, x[3])))};
    }

    void build_pencil_cache() {
        pencil_cache_.resize(static_cast<std::size_t>(q_) * reps_.size());
        for (int lambda = 0; lambda < q_; ++lambda)
            for (std::size_t pt = 0; pt < reps_.size(); ++pt)
                pencil_cache_[static_cast<std::size_t>(lambda) * reps_.size() + pt] =
                    f_.quad_class(quadric_value(lambda, reps_[pt]));
    }

    void classify_lines() {
        line_flags_.assign(n_lines_, 0);
        pi_trace_.assign(n_lines_, -1);
        tangency_.resize(n_lines_);

        for (LineId id = 0; id < n_lines_; ++id) {
            bool in_pi = line_in_plane(id, pi_);
            bool thru_u3 = line_has_point(id, u3_);
            if (in_pi) line_flags_[id] |= kInPi;
            if (thru_u3) line_flags_[id] |= kThroughU3;
            if (!in_pi) {
                for (PointId pt : line_points(id))
                    if (reps_[pt][3] == 0) {
                        if (pi_trace_[id] != -1)
                            throw StructureViolation("off-pi line with two points on pi");
                        pi_trace_[id] = pt;
                    }
                if (pi_trace_[id] == -1) throw StructureViolation("line missing its pi trace");
            }

            Tangency t{};
            if (in_pi) {
                t.kind = thru_u3 ? TangencyKind::PiThroughU3 : TangencyKind::PiAvoidingU3;
                int expect_zeros = thru_u3 ? 1 : 0;
                for (int lambda = 0; lambda < q_; ++lambda)
                    if (line_profile(id, lambda).zeros != expect_zeros)
                        throw StructureViolation("pi line with unexpected quadric profile");
                if (thru_u3) t.tangent_at = u3_;
            } else {
                int tangents = 0;
                for (int lambda = 0; lambda < q_; ++lambda) {
                    QuadricProfile pr = line_profile(id, lambda);
                    if (pr.zeros == 1) {
                        ++tangents;
                        t.lambda = lambda;
                        t.tangent_at = pr.at[0];
                    } else if (thru_u3 && pr.zeros != 2) {
                        throw StructureViolation("U3 line not secant to a pencil member");
                    }
                }
                if (thru_u3) {
                    if (tangents != 0)
                        throw StructureViolation("U3 line tangent to a pencil member");
                    t = Tangency{TangencyKind::SecantAllMembers, -1, -1};
                } else {
                    if (tangents != 1)
                        throw StructureViolation("off-pi line without unique tangent member");
                    t.kind = TangencyKind::UniqueMember;
                }
            }
            tangency_[id] = t;
        }
    }

    Field f_;
    int q_;
    int omega_ = 0;
    std::vector<Coords4> reps_; // shared point/plane representatives, lex order
    int n_lines_ = 0;
    std::vector<std::uint16_t> plucker_;
    std::vector<PointId> line_points_;
    std::vector<PlaneId> line_planes_;
    PointId u3_ = -1;
    PlaneId pi_ = -1;
    std::vector<std::uint8_t> line_flags_;
    std::vector<PointId> pi_trace_;
    std::vector<Tangency> tangency_;
    std::vector<QuadClass> pencil_cache_;
};

} // namespace cl3q
