#pragma once

// Finitely generated abelian groups of the form Z^f + Z/p^{r_1} + ... with
// p-primary torsion only, their homomorphisms, quotients V/p^i, and the
// functor Ext^1_Z(-, Z/p) together with its stationarity analysis.

#include <cctype>
#include <cstdint>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "extlab/fp.hpp"

namespace extlab {

inline uint64_t ipow(uint64_t b, uint32_t e) {
    uint64_t r = 1;
    while (e--) {
        if (r > UINT64_MAX / b) throw std::overflow_error("power overflow");
        r *= b;
    }
    return r;
}

struct AbGroup {
    uint32_t p = 2;
    uint32_t free_rank = 0;
    std::vector<uint32_t> torsion;  // exponents r_1 <= r_2 <= ..., all >= 1

    AbGroup() = default;
    AbGroup(uint32_t p_, uint32_t f, std::vector<uint32_t> tors) : p(p_), free_rank(f), torsion(std::move(tors)) {
        check_prime_modulus(p);
        for (size_t i = 0; i < torsion.size(); ++i) {
            if (torsion[i] == 0) throw std::invalid_argument("torsion exponent must be >= 1");
            if (i && torsion[i] < torsion[i - 1]) throw std::invalid_argument("torsion exponents must be sorted");
        }
    }

    static AbGroup zero(uint32_t p) { return AbGroup(p, 0, {}); }
    static AbGroup cyclic(uint32_t p, uint32_t r) { return AbGroup(p, 0, {r}); }
    static AbGroup free(uint32_t p, uint32_t f) { return AbGroup(p, f, {}); }

    bool is_finite() const { return free_rank == 0; }
    bool is_zero() const { return free_rank == 0 && torsion.empty(); }
    size_t num_gens() const { return free_rank + torsion.size(); }
    size_t num_torsion() const { return torsion.size(); }
    uint32_t torsion_exponent() const { return torsion.empty() ? 0 : torsion.back(); }

    uint64_t size() const {
        if (!is_finite()) throw std::domain_error("size of infinite group");
        uint32_t total = std::accumulate(torsion.begin(), torsion.end(), 0u);
        return ipow(p, total);
    }

    // generator order: free generators first, then torsion in increasing exponent
    // gen_order_exp: 0 means infinite order (free)
    uint32_t gen_exp(size_t i) const {
        if (i < free_rank) return 0;
        return torsion[i - free_rank];
    }

    bool operator==(const AbGroup& o) const { return p == o.p && free_rank == o.free_rank && torsion == o.torsion; }
    bool operator!=(const AbGroup& o) const { return !(*this == o); }

    AbGroup direct_sum(const AbGroup& o) const {
        if (p != o.p) throw std::invalid_argument("direct sum across primes");
        std::vector<uint32_t> t = torsion;
        t.insert(t.end(), o.torsion.begin(), o.torsion.end());
        std::sort(t.begin(), t.end());
        return AbGroup(p, free_rank + o.free_rank, std::move(t));
    }

    // V/p^i: Z -> Z/p^i, Z/p^r -> Z/p^min(r, i).  i = 0 gives the zero group.
    AbGroup quotient_mod(uint32_t i) const {
        if (i == 0) return zero(p);
        std::vector<uint32_t> t;
        for (uint32_t r : torsion) t.push_back(std::min(r, i));
        for (uint32_t k = 0; k < free_rank; ++k) t.push_back(i);
        std::sort(t.begin(), t.end());
        return AbGroup(p, 0, std::move(t));
    }

    std::string to_string() const {
        if (is_zero()) return "0";
        std::string s;
        if (free_rank == 1) s = "Z";
        else if (free_rank > 1) s = "Z^" + std::to_string(free_rank);
        for (uint32_t r : torsion) {
            if (!s.empty()) s += " + ";
            s += "Z/" + std::to_string(ipow(p, r));
        }
        return s;
    }

    // Text notation "Z^f + Z/p^r1 + ..." (whitespace-insensitive).  Torsion
    // orders that are not powers of p are rejected.
    static AbGroup parse(uint32_t p, const std::string& text) {
        check_prime_modulus(p);
        std::string s;
        for (char c : text)
            if (!std::isspace(static_cast<unsigned char>(c))) s += c;
        if (s.empty() || s == "0") return zero(p);
        uint32_t f = 0;
        std::vector<uint32_t> tors;
        size_t pos = 0;
        while (pos < s.size()) {
            size_t next = s.find('+', pos);
            std::string tok = s.substr(pos, next == std::string::npos ? std::string::npos : next - pos);
            pos = next == std::string::npos ? s.size() : next + 1;
            if (tok.empty()) throw std::invalid_argument("empty summand in group notation");
            if (tok == "Z") { ++f; continue; }
            if (tok.rfind("Z^", 0) == 0) {
                long k = std::stol(tok.substr(2));
                if (k < 0) throw std::invalid_argument("negative free rank");
                f += static_cast<uint32_t>(k);
                continue;
            }
            if (tok.rfind("Z/", 0) == 0) {
                unsigned long long n = std::stoull(tok.substr(2));
                if (n < 2) throw std::invalid_argument("torsion order must be >= 2");
                uint32_t r = 0;
                while (n % p == 0) { n /= p; ++r; }
                if (n != 1 || r == 0)
                    throw std::invalid_argument("torsion order is not a power of p=" + std::to_string(p) +
                                                " in \"" + tok + "\"");
                tors.push_back(r);
                continue;
            }
            throw std::invalid_argument("cannot parse group summand \"" + tok + "\"");
        }
        std::sort(tors.begin(), tors.end());
        return AbGroup(p, f, std::move(tors));
    }
};

// Homomorphism V -> W.  Entry (i, j) is the coefficient of target generator i
// in the image of source generator j; entries into torsion targets are
// reduced modulo the generator order.
struct AbHom {
    AbGroup source, target;
    std::vector<long long> mat;  // row-major, rows = target gens, cols = source gens

    AbHom() = default;
    AbHom(AbGroup src, AbGroup tgt, std::vector<long long> m) : source(std::move(src)), target(std::move(tgt)), mat(std::move(m)) {
        if (mat.size() != source.num_gens() * target.num_gens()) throw std::invalid_argument("hom matrix size mismatch");
        reduce_and_check();
    }

    static AbHom zero(const AbGroup& src, const AbGroup& tgt) {
        return AbHom(src, tgt, std::vector<long long>(src.num_gens() * tgt.num_gens(), 0));
    }
    static AbHom identity(const AbGroup& v) {
        AbHom h = zero(v, v);
        for (size_t i = 0; i < v.num_gens(); ++i) h.mat[i * v.num_gens() + i] = 1;
        return h;
    }

    long long at(size_t i, size_t j) const { return mat[i * source.num_gens() + j]; }

    // this o inner
    AbHom compose(const AbHom& inner) const {
        if (inner.target != source) throw std::invalid_argument("hom composition mismatch");
        size_t rows = target.num_gens(), mid = source.num_gens(), cols = inner.source.num_gens();
        std::vector<long long> m(rows * cols, 0);
        for (size_t i = 0; i < rows; ++i)
            for (size_t k = 0; k < mid; ++k) {
                long long v = at(i, k);
                if (!v) continue;
                for (size_t j = 0; j < cols; ++j) m[i * cols + j] += v * inner.at(k, j);
            }
        return AbHom(inner.source, target, std::move(m));
    }

    AbHom operator+(const AbHom& o) const {
        if (source != o.source || target != o.target) throw std::invalid_argument("hom addition mismatch");
        std::vector<long long> m(mat.size());
        for (size_t i = 0; i < mat.size(); ++i) m[i] = mat[i] + o.mat[i];
        return AbHom(source, target, std::move(m));
    }

    bool operator==(const AbHom& o) const { return source == o.source && target == o.target && mat == o.mat; }

private:
    void reduce_and_check() {
        uint32_t p = source.p;
        size_t cols = source.num_gens();
        for (size_t i = 0; i < target.num_gens(); ++i) {
            uint32_t ri = target.gen_exp(i);  // 0 = free
            for (size_t j = 0; j < cols; ++j) {
                uint32_t rj = source.gen_exp(j);
                long long& v = mat[i * cols + j];
                if (ri != 0) {
                    long long mod = (long long)ipow(p, ri);
                    v = ((v % mod) + mod) % mod;
                    if (rj != 0 && ri > rj) {
                        long long need = (long long)ipow(p, ri - rj);
                        if (v % need != 0)
                            throw std::invalid_argument("ill-defined hom: entry not divisible by p^(s-r)");
                    }
                } else {
                    if (rj != 0 && v != 0)
                        throw std::invalid_argument("ill-defined hom: torsion generator cannot map to free target");
                }
            }
        }
    }
};

struct HomGroup {
    AbGroup group;             // structure of Hom_Z(V, W)
    std::vector<AbHom> gens;   // one generating hom per listed generator of `group`
};

// Hom_Z(V, W) via Hom(Z/p^a, Z/p^b) = Z/p^min(a,b), Hom(Z, W) = W,
// Hom(Z/p^a, Z) = 0, summand-wise.
inline HomGroup hom_group(const AbGroup& V, const AbGroup& W) {
    if (V.p != W.p) throw std::invalid_argument("hom across primes");
    uint32_t p = V.p;
    // collect (order_exp, source gen j, target gen i); order_exp 0 = free
    struct Summand { uint32_t exp; size_t j, i; };
    std::vector<Summand> sums;
    for (size_t j = 0; j < V.num_gens(); ++j)
        for (size_t i = 0; i < W.num_gens(); ++i) {
            uint32_t a = V.gen_exp(j), b = W.gen_exp(i);
            if (a == 0 && b == 0) sums.push_back({0, j, i});                    // Hom(Z, Z) = Z
            else if (a == 0) sums.push_back({b, j, i});                          // Hom(Z, Z/p^b) = Z/p^b
            else if (b == 0) continue;                                           // Hom(Z/p^a, Z) = 0
            else sums.push_back({std::min(a, b), j, i});                         // Z/p^min(a,b)
        }
    std::stable_sort(sums.begin(), sums.end(), [](const Summand& x, const Summand& y) {
        if ((x.exp == 0) != (y.exp == 0)) return x.exp == 0;  // free summands first
        return x.exp < y.exp;
    });
    uint32_t f = 0;
    std::vector<uint32_t> tors;
    std::vector<AbHom> gens;
    for (const auto& s : sums) {
        if (s.exp == 0) ++f;
        else tors.push_back(s.exp);
        AbHom h = AbHom::zero(V, W);
        uint32_t a = V.gen_exp(s.j), b = W.gen_exp(s.i);
        long long entry = 1;
        if (a != 0 && b != 0 && b > a) entry = (long long)ipow(p, b - a);  // canonical generator of Z/p^min
        h.mat[s.i * V.num_gens() + s.j] = entry;
        gens.push_back(AbHom(V, W, std::move(h.mat)));
    }
    return HomGroup{AbGroup(p, f, std::move(tors)), std::move(gens)};
}

inline uint64_t hom_group_size(const AbGroup& V, const AbGroup& W) {
    HomGroup h = hom_group(V, W);
    return h.group.size();  // throws if infinite
}

// dim_{F_p} Ext^1_Z(V, Z/p) = dim Hom_Z(Z/p, V) = number of torsion summands.
inline size_t ext1_zp_dim(const AbGroup& V) { return V.num_torsion(); }

// Stationarity of Ext^1_Z(-, Z/p) on V: behaviour of the canonical maps
//   Ext^1_Z(V/p^m, Z/p) -> Ext^1_Z(V, Z/p)
// induced by V ->> V/p^m.  The matrix of the map in canonical presentation
// coordinates sends the column of torsion summand j of V/p^m derived from
// torsion summand j of V to e_j when r_j <= m (the relation lifts with unit
// coefficient) and to 0 otherwise; free-derived columns map to 0.
struct StationarityReport {
    uint32_t index = 0;            // smallest n with stable behaviour for all m in [n, cap]
    bool stationary = false;       // true iff the map is an isomorphism for all m >= index
    uint32_t cap = 0;
    std::vector<size_t> ext1_dims;  // dim Ext^1(V/p^m, Z/p), m = 0..cap
    std::vector<size_t> map_ranks;  // rank of the canonical map, m = 0..cap
    std::vector<bool> is_iso;       // per m
};

inline FpMatrix ext1_comparison_matrix(const AbGroup& V, uint32_t m, uint32_t p_field_unused = 0) {
    (void)p_field_unused;
    // rows: torsion summands of V (target Ext^1(V)); columns: torsion summands
    // of V/p^m in the order (torsion-derived j = 1..k, then free-derived).
    size_t k = V.num_torsion();
    size_t cols = m == 0 ? 0 : k + V.free_rank;
    FpMatrix M(V.p, k, cols);
    if (m == 0) return M;
    for (size_t j = 0; j < k; ++j)
        if (V.torsion[j] <= m) M.set(j, j, 1);
    return M;
}

inline StationarityReport stationarity_analysis(const AbGroup& V) {
    StationarityReport rep;
    uint32_t rmax = V.torsion_exponent();
    rep.cap = rmax + V.free_rank + 2;
    size_t k = V.num_torsion();
    for (uint32_t m = 0; m <= rep.cap; ++m) {
        FpMatrix M = ext1_comparison_matrix(V, m);
        rep.ext1_dims.push_back(M.cols());
        size_t rank = M.rank();
        rep.map_ranks.push_back(rank);
        rep.is_iso.push_back(rank == k && M.cols() == k);
    }
    // stationary: iso for every m from some point on
    std::optional<uint32_t> first_all_iso;
    for (uint32_t n = 0; n <= rep.cap; ++n) {
        bool all = true;
        for (uint32_t m = n; m <= rep.cap; ++m) all = all && rep.is_iso[m];
        if (all) { first_all_iso = n; break; }
    }
    if (first_all_iso) {
        rep.stationary = true;
        rep.index = *first_all_iso;
    } else {
        rep.stationary = false;
        // index where rank and image stabilize (the map is then an iso onto
        // its stable image)
        uint32_t n = rep.cap;
        while (n > 0 && rep.map_ranks[n - 1] == rep.map_ranks[rep.cap]) --n;
        rep.index = n;
    }
    return rep;
}

inline uint32_t stationarity_index(const AbGroup& V) { return stationarity_analysis(V).index; }

// Finite-family variant of the stationarity check: for a finite family the
// product of the canonical maps is an isomorphism for all m >= n iff each
// factor is.  Infinite families are out of reach of the model and are not
// claimed.
inline bool family_stationary(const std::vector<AbGroup>& family, uint32_t* index_out = nullptr) {
    uint32_t idx = 0;
    for (const AbGroup& V : family) {
        StationarityReport r = stationarity_analysis(V);
        if (!r.stationary) return false;
        idx = std::max(idx, r.index);
    }
    if (index_out) *index_out = idx;
    return true;
}

}  // namespace extlab
