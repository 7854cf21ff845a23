#pragma once

// GF(p^e) for odd q = p^e up to 2^16, on integer element codes.
//
// An element sum c_i x^i is encoded as the integer sum c_i p^i, so the codes
// 0..p-1 are the prime subfield and arithmetic on codes is table-driven:
// multiplication through log/antilog tables of a fixed primitive element,
// addition through a dense table for small q (digit-wise base p otherwise).
// The representation is fully deterministic: the modulus is the first
// irreducible monic polynomial in coefficient order (leading term down) and
// the generator is the smallest primitive code, so element codes mean the
// same thing across runs and across processes.

#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "cl3q/errors.hpp"

namespace cl3q {

enum class QuadClass : std::uint8_t { Zero, Square, NonSquare };

class Field {
public:
    static Field build(int p, int e) { return Field(p, e); }

    int p() const { return p_; }
    int e() const { return e_; }
    int q() const { return q_; }

    // Ascending-degree coefficient list, monic, size e+1. For e = 1 this is x.
    const std::vector<int>& modulus() const { return modulus_; }
    int generator() const { return generator_; }

    int add(int a, int b) const {
        if (!add_.empty()) return add_[static_cast<std::size_t>(a) * q_ + b];
        return add_digitwise(a, b);
    }
    int neg(int a) const { return neg_[a]; }
    int sub(int a, int b) const { return add(a, neg_[b]); }

    int mul(int a, int b) const {
        if (a == 0 || b == 0) return 0;
        int s = log_[a] + log_[b];
        if (s >= q_ - 1) s -= q_ - 1;
        return exp_[s];
    }
    int inv(int a) const {
        if (a == 0) throw DivisionByZero("inverse of zero in GF(" + std::to_string(q_) + ")");
        int s = (q_ - 1) - log_[a];
        if (s == q_ - 1) s = 0;
        return exp_[s];
    }
    int div(int a, int b) const {
        if (b == 0) throw DivisionByZero("division by zero in GF(" + std::to_string(q_) + ")");
        if (a == 0) return 0;
        int s = log_[a] - log_[b];
        if (s < 0) s += q_ - 1;
        return exp_[s];
    }

    int pow(int a, long long k) const {
        if (a == 0) {
            if (k == 0) return 1;
            if (k < 0) throw DivisionByZero("negative power of zero");
            return 0;
        }
        long long m = k % (q_ - 1);
        if (m < 0) m += q_ - 1;
        return exp_[static_cast<int>(static_cast<long long>(log_[a]) * m % (q_ - 1))];
    }

    // Square iff the discrete log is even; q is odd so the classes split q-1 evenly.
    QuadClass quad_class(int a) const {
        if (a == 0) return QuadClass::Zero;
        return (log_[a] & 1) ? QuadClass::NonSquare : QuadClass::Square;
    }

    // Smallest code that is a nonsquare; the default omega of the quadric pencil.
    int canonical_nonsquare() const { return nonsquare_; }

    // Prime-subfield embedding of an integer (useful for small literals).
    int from_int(long long n) const {
        long long r = n % p_;
        if (r < 0) r += p_;
        return static_cast<int>(r);
    }

private:
    Field(int p, int e) : p_(p), e_(e) {
        if (p < 3 || !is_prime(p)) throw NotOddPrime("p must be an odd prime, got " + std::to_string(p));
        if (e < 1) throw InvalidDegree("extension degree must be >= 1, got " + std::to_string(e));
        long long qq = 1;
        for (int i = 0; i < e; ++i) {
            qq *= p;
            if (qq > 65536) throw CapacityExceeded("q = p^e exceeds 2^16");
        }
        q_ = static_cast<int>(qq);

        find_modulus();
        find_generator();
        build_tables();

        nonsquare_ = -1;
        for (int a = 1; a < q_; ++a) {
            if (quad_class(a) == QuadClass::NonSquare) {
                nonsquare_ = a;
                break;
            }
        }
        if (nonsquare_ == -1) throw StructureViolation("no nonsquare found; q must be odd");
    }

    static bool is_prime(int n) {
        if (n < 2) return false;
        for (int d = 2; static_cast<long long>(d) * d <= n; ++d)
            if (n % d == 0) return false;
        return true;
    }

    int add_digitwise(int a, int b) const {
        int r = 0, mult = 1;
        while (a > 0 || b > 0) {
            r += ((a % p_) + (b % p_)) % p_ * mult;
            a /= p_;
            b /= p_;
            mult *= p_;
        }
        return r;
    }

    // --- polynomial helpers over GF(p), ascending coefficient vectors ---

    static void poly_trim(std::vector<int>& f) {
        while (!f.empty() && f.back() == 0) f.pop_back();
    }

    std::vector<int> poly_mul_mod(const std::vector<int>& a, const std::vector<int>& b,
                                  const std::vector<int>& m) const {
        std::vector<int> prod(a.size() + b.size() - 1, 0);
        for (std::size_t i = 0; i < a.size(); ++i) {
            if (a[i] == 0) continue;
            for (std::size_t j = 0; j < b.size(); ++j)
                prod[i + j] = (prod[i + j] + a[i] * b[j]) % p_;
        }
        // m is monic, so reduction is plain back-substitution
        int deg_m = static_cast<int>(m.size()) - 1;
        for (int i = static_cast<int>(prod.size()) - 1; i >= deg_m; --i) {
            int c = prod[i];
            if (c == 0) continue;
            prod[i] = 0;
            for (int j = 0; j < deg_m; ++j)
                prod[i - deg_m + j] = ((prod[i - deg_m + j] - c * m[j]) % p_ + p_) % p_;
        }
        prod.resize(deg_m);
        return prod;
    }

    std::vector<int> poly_pow_mod(std::vector<int> base, long long k,
                                  const std::vector<int>& m) const {
        std::vector<int> r{1};
        r.resize(m.size() - 1, 0);
        base.resize(m.size() - 1, 0);
        while (k > 0) {
            if (k & 1) r = poly_mul_mod(r, base, m);
            base = poly_mul_mod(base, base, m);
            k >>= 1;
        }
        return r;
    }

    std::vector<int> poly_gcd(std::vector<int> a, std::vector<int> b) const {
        poly_trim(a);
        poly_trim(b);
        while (!b.empty()) {
            // a mod b with b made monic first
            int lead_inv = 1;
            for (int t = 1; t < p_; ++t)
                if (t * b.back() % p_ == 1) { lead_inv = t; break; }
            for (auto& c : b) c = c * lead_inv % p_;
            while (a.size() >= b.size()) {
                int c = a.back();
                if (c != 0) {
                    std::size_t off = a.size() - b.size();
                    for (std::size_t j = 0; j < b.size(); ++j)
                        a[off + j] = ((a[off + j] - c * b[j]) % p_ + p_) % p_;
                }
                a.pop_back();
                poly_trim(a);
                if (a.size() < b.size()) break;
            }
            std::swap(a, b);
        }
        return a;
    }

    bool is_irreducible(const std::vector<int>& f) const {
        int deg = static_cast<int>(f.size()) - 1;
        if (deg == 1) return true;
        if (deg <= 3) {
            // degree 2 or 3: irreducible iff no root
            for (int x = 0; x < p_; ++x) {
                int v = 0, xp = 1;
                for (int c : f) {
                    v = (v + c * xp) % p_;
                    xp = xp * x % p_;
                }
                if (v == 0) return false;
            }
            return true;
        }
        // Rabin test: x^(p^deg) == x mod f, and x^(p^(deg/r)) != x for prime r | deg
        auto frob_fix = [&](long long steps) {
            // x^(p^steps) mod f
            std::vector<int> x{0, 1};
            std::vector<int> r = x;
            r.resize(f.size() - 1, 0);
            for (long long i = 0; i < steps; ++i) r = poly_pow_mod(r, p_, f);
            return r;
        };
        std::vector<int> xe = frob_fix(deg);
        std::vector<int> x{0, 1};
        x.resize(f.size() - 1, 0);
        if (xe != x) return false;
        int d = deg;
        for (int r = 2; r <= d; ++r) {
            if (d % r != 0) continue;
            while (d % r == 0) d /= r;
            std::vector<int> xr = frob_fix(deg / r);
            std::vector<int> diff = xr;
            diff[1] = ((diff[1] - 1) % p_ + p_) % p_;
            std::vector<int> g = poly_gcd(diff, f);
            if (!(g.size() == 1)) return false;
        }
        return true;
    }

    // First irreducible monic polynomial of degree e, candidates ordered by
    // their coefficients read from the leading term down (equivalently by the
    // integer code of the non-monic tail).
    void find_modulus() {
        if (e_ == 1) {
            modulus_ = {0, 1};
            return;
        }
        for (int tail = 0; tail < q_; ++tail) {
            std::vector<int> f(e_ + 1, 0);
            int t = tail;
            for (int i = 0; i < e_; ++i) {
                f[i] = t % p_;
                t /= p_;
            }
            f[e_] = 1;
            if (is_irreducible(f)) {
                modulus_ = f;
                return;
            }
        }
        throw StructureViolation("no irreducible polynomial found");
    }

    // Code-level product without tables, used only while bootstrapping.
    int raw_mul(int a, int b) const {
        std::vector<int> fa(e_, 0), fb(e_, 0);
        for (int i = 0; i < e_; ++i) {
            fa[i] = a % p_;
            a /= p_;
            fb[i] = b % p_;
            b /= p_;
        }
        std::vector<int> r = poly_mul_mod(fa, fb, modulus_);
        int code = 0, mult = 1;
        for (int i = 0; i < e_; ++i) {
            code += r[i] * mult;
            mult *= p_;
        }
        return code;
    }

    int raw_pow(int a, long long k) const {
        int r = 1;
        while (k > 0) {
            if (k & 1) r = raw_mul(r, a);
            a = raw_mul(a, a);
            k >>= 1;
        }
        return r;
    }

    void find_generator() {
        std::vector<long long> prime_factors;
        long long n = q_ - 1;
        for (long long d = 2; d * d <= n; ++d) {
            if (n % d == 0) {
                prime_factors.push_back(d);
                while (n % d == 0) n /= d;
            }
        }
        if (n > 1) prime_factors.push_back(n);
        for (int g = 2; g < q_; ++g) {
            bool primitive = true;
            for (long long r : prime_factors) {
                if (raw_pow(g, (q_ - 1) / r) == 1) {
                    primitive = false;
                    break;
                }
            }
            if (primitive) {
                generator_ = g;
                return;
            }
        }
        throw StructureViolation("no primitive element found");
    }

    void build_tables() {
        exp_.resize(q_ - 1);
        log_.assign(q_, 0);
        exp_[0] = 1;
        for (int k = 1; k < q_ - 1; ++k) exp_[k] = raw_mul(exp_[k - 1], generator_);
        for (int k = 0; k < q_ - 1; ++k) log_[exp_[k]] = k;

        neg_.resize(q_);
        for (int a = 0; a < q_; ++a) {
            int r = 0, x = a, mult = 1;
            for (int i = 0; i < e_; ++i) {
                r += (p_ - x % p_) % p_ * mult;
                x /= p_;
                mult *= p_;
            }
            neg_[a] = r;
        }

        if (q_ <= 1024) {
            add_.resize(static_cast<std::size_t>(q_) * q_);
            for (int a = 0; a < q_; ++a)
                for (int b = 0; b < q_; ++b)
                    add_[static_cast<std::size_t>(a) * q_ + b] =
                        static_cast<std::uint16_t>(add_digitwise(a, b));
        }
    }

    int p_ = 0, e_ = 0, q_ = 0;
    std::vector<int> modulus_;
    int generator_ = 0;
    int nonsquare_ = 0;
    std::vector<int> exp_, log_, neg_;
    std::vector<std::uint16_t> add_;
};

} // namespace cl3q
