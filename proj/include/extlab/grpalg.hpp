#pragma once

// The group algebra F_p[V] for finite abelian p-groups V, the filtration by
// powers of the augmentation ideal I, the graded pieces S^d = I^d / I^{d+1}
// with their truncated-symmetric-algebra monomial model, and the spaces
// Pol_d(V, F_p) of polynomial functions.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "extlab/abelian.hpp"
#include "extlab/fp.hpp"

namespace extlab {

// ---------------------------------------------------------------------------
// Element enumeration of a finite abelian p-group given by generator orders.
// Coordinates are (c_1, ..., c_k) with 0 <= c_j < p^{r_j}; the index uses the
// first coordinate as the least significant digit (lexicographic sweep).
// ---------------------------------------------------------------------------
class ElementTable {
public:
    ElementTable(uint32_t p, std::vector<uint32_t> exps) : p_(p), exps_(std::move(exps)) {
        radix_.reserve(exps_.size());
        size_ = 1;
        for (uint32_t r : exps_) {
            uint64_t o = ipow(p_, r);
            radix_.push_back(o);
            size_ *= o;
            if (size_ > (1ull << 40)) throw std::overflow_error("group too large to enumerate");
        }
    }

    static ElementTable of(const AbGroup& V) {
        if (!V.is_finite()) throw std::domain_error("element enumeration of infinite group");
        return ElementTable(V.p, V.torsion);
    }

    uint32_t p() const { return p_; }
    size_t gens() const { return exps_.size(); }
    uint64_t size() const { return size_; }
    uint64_t gen_order(size_t j) const { return radix_[j]; }

    std::vector<uint64_t> coords(uint64_t idx) const {
        std::vector<uint64_t> c(exps_.size());
        for (size_t j = 0; j < exps_.size(); ++j) {
            c[j] = idx % radix_[j];
            idx /= radix_[j];
        }
        return c;
    }

    uint64_t index(const std::vector<uint64_t>& c) const {
        uint64_t idx = 0;
        for (size_t j = exps_.size(); j-- > 0;) idx = idx * radix_[j] + (c[j] % radix_[j]);
        return idx;
    }

    uint64_t add(uint64_t x, uint64_t y) const {
        std::vector<uint64_t> a = coords(x), b = coords(y);
        for (size_t j = 0; j < a.size(); ++j) a[j] = (a[j] + b[j]) % radix_[j];
        return index(a);
    }

    uint64_t generator(size_t j) const {
        std::vector<uint64_t> c(exps_.size(), 0);
        c[j] = 1;
        return index(c);
    }

    std::string label(uint64_t idx) const {
        std::vector<uint64_t> c = coords(idx);
        std::string s = "(";
        for (size_t j = 0; j < c.size(); ++j) {
            if (j) s += ",";
            s += std::to_string(c[j]);
        }
        return s + ")";
    }

private:
    uint32_t p_;
    std::vector<uint32_t> exps_;
    std::vector<uint64_t> radix_;
    uint64_t size_;
};

// ---------------------------------------------------------------------------
// Monomial model of the truncated symmetric algebra: one symbol per group
// generator with cap p^{r_j} for torsion and no cap for free generators.
// Basis of degree d: exponent vectors (e_j) with e_j < cap_j, sum e_j = d.
// ---------------------------------------------------------------------------
struct MonomialBasis {
    uint32_t p = 2;
    std::vector<uint64_t> caps;  // 0 = unbounded (free generator)
    uint32_t degree = 0;
    std::vector<std::vector<uint32_t>> exps;  // lexicographic

    size_t dim() const { return exps.size(); }

    std::map<std::vector<uint32_t>, size_t> index_map() const {
        std::map<std::vector<uint32_t>, size_t> m;
        for (size_t i = 0; i < exps.size(); ++i) m[exps[i]] = i;
        return m;
    }
};

inline void enumerate_exps(const std::vector<uint64_t>& caps, uint32_t d, size_t j, std::vector<uint32_t>& cur,
                           std::vector<std::vector<uint32_t>>& out) {
    if (j == caps.size()) {
        if (d == 0) out.push_back(cur);
        return;
    }
    uint64_t cap = caps[j] == 0 ? uint64_t(d) + 1 : std::min<uint64_t>(caps[j], uint64_t(d) + 1);
    for (uint32_t e = 0; e < cap; ++e) {
        cur[j] = e;
        enumerate_exps(caps, d - e, j + 1, cur, out);
    }
    cur[j] = 0;
}

inline MonomialBasis monomial_basis(uint32_t p, const std::vector<uint64_t>& caps, uint32_t d) {
    MonomialBasis b;
    b.p = p;
    b.caps = caps;
    b.degree = d;
    std::vector<uint32_t> cur(caps.size(), 0);
    enumerate_exps(caps, d, 0, cur, b.exps);
    return b;
}

inline size_t monomial_dim(uint32_t p, const std::vector<uint64_t>& caps, uint32_t d) {
    return monomial_basis(p, caps, d).dim();
}

inline std::vector<uint64_t> caps_of(const AbGroup& V) {
    std::vector<uint64_t> caps;
    for (uint32_t i = 0; i < V.free_rank; ++i) caps.push_back(0);
    for (uint32_t r : V.torsion) caps.push_back(ipow(V.p, r));
    return caps;
}

// dim S^d_{(p)}(V) by the monomial model.
inline size_t s_monomial_dim(const AbGroup& V, uint32_t d) { return monomial_dim(V.p, caps_of(V), d); }

// ---------------------------------------------------------------------------
// Augmentation filtration of F_p[V], V finite.
// ---------------------------------------------------------------------------
struct FiltrationLevel {
    uint32_t degree = 0;
    FpMatrix basis;  // columns span I^degree inside F_p[V]
    size_t dim() const { return basis.cols(); }
};

class GroupAlgebra {
public:
    explicit GroupAlgebra(const AbGroup& V) : V_(V), tab_(ElementTable::of(V)) {
        if (!V.is_finite()) throw std::domain_error("group algebra of infinite group");
    }

    // Generator exponents in a caller-chosen order (kept unsorted so that the
    // element enumeration lines up with external coordinates, e.g. morphism
    // entries of a hom group).
    GroupAlgebra(uint32_t p, const std::vector<uint32_t>& exps)
        : V_(p, 0, [&] {
              std::vector<uint32_t> s = exps;
              std::sort(s.begin(), s.end());
              return s;
          }()),
          tab_(p, exps) {}

    const AbGroup& group() const { return V_; }
    const ElementTable& elements() const { return tab_; }
    uint32_t p() const { return V_.p; }
    size_t dim() const { return static_cast<size_t>(tab_.size()); }

    FpSpace space() const {
        std::vector<std::string> labels;
        for (uint64_t v = 0; v < tab_.size(); ++v) labels.push_back("[" + tab_.label(v) + "]");
        return FpSpace(p(), dim(), std::move(labels));
    }

    // Multiplication by ([g_j] - [0]) as a dim x dim matrix.
    FpMatrix delta_action(size_t j) const {
        FpMatrix m(p(), dim(), dim());
        uint64_t g = tab_.generator(j);
        for (uint64_t v = 0; v < tab_.size(); ++v) {
            m.add_at(tab_.add(v, g), v, 1);
            m.add_at(v, v, p() - 1);
        }
        return m;
    }

    // Bases of I^0, I^1, ..., I^{dmax}.  I^{d+1} is generated from I^d by
    // multiplying a basis with the generator differences [g_j] - [0]; the
    // augmentation ideal powers are shift-invariant, so generator differences
    // suffice and the spanning sets stay polynomial in |V|.
    std::vector<FiltrationLevel> filtration(uint32_t dmax) const {
        std::vector<FiltrationLevel> levels;
        size_t n = dim();
        {
            FiltrationLevel l0;
            l0.degree = 0;
            l0.basis = FpMatrix::identity(p(), n);
            levels.push_back(std::move(l0));
        }
        if (dmax == 0) return levels;
        std::vector<FpMatrix> deltas;
        for (size_t j = 0; j < tab_.gens(); ++j) deltas.push_back(delta_action(j));
        // I^1 = span{[v] - [0] : v in V}
        FpSpan span1(p(), n);
        for (uint64_t v = 1; v < tab_.size(); ++v) {
            FpMatrix col(p(), n, 1);
            col.set(v, 0, 1);
            col.add_at(0, 0, p() - 1);
            span1.insert(col);
        }
        FiltrationLevel l1;
        l1.degree = 1;
        l1.basis = span1.basis_matrix();
        levels.push_back(std::move(l1));
        for (uint32_t d = 2; d <= dmax; ++d) {
            const FpMatrix& prev = levels.back().basis;
            FpSpan sp(p(), n);
            if (prev.cols() > 0) {
                for (const FpMatrix& delta : deltas) {
                    FpMatrix prod = delta * prev;
                    for (size_t c = 0; c < prod.cols(); ++c) sp.insert(prod.column(c));
                }
            }
            FiltrationLevel l;
            l.degree = d;
            l.basis = sp.basis_matrix();
            levels.push_back(std::move(l));
        }
        return levels;
    }

    FiltrationLevel augmentation_power(uint32_t d) const { return filtration(d).back(); }

private:
    AbGroup V_;
    ElementTable tab_;
};

// dim I^d/I^{d+1} by elimination; throws if the filtration quotient disagrees
// with the monomial model count (they are two routes to the same number).
inline size_t s_graded_dim(const AbGroup& V, uint32_t d) {
    GroupAlgebra A(V);
    auto levels = A.filtration(d + 1);
    size_t byfilt = levels[d].dim() - levels[d + 1].dim();
    size_t bymono = s_monomial_dim(V, d);
    if (byfilt != bymono)
        throw std::logic_error("graded dimension mismatch: filtration " + std::to_string(byfilt) +
                               " vs monomial model " + std::to_string(bymono) + " for " + V.to_string() +
                               " at d = " + std::to_string(d));
    return byfilt;
}

// ---------------------------------------------------------------------------
// Polynomial functions V -> F_p of degree <= d, as value vectors over the
// element enumeration.
// ---------------------------------------------------------------------------
struct PolSpace {
    AbGroup V;
    uint32_t degree = 0;
    FpMatrix basis;  // columns = functions, rows indexed by elements of V
    size_t dim() const { return basis.cols(); }
};

// Annihilator-dual construction: Pol_d = (F_p[V] / I^{d+1})^dual, i.e. the
// functions orthogonal to I^{d+1} under the evaluation pairing.
inline PolSpace pol_space(const AbGroup& V, uint32_t d) {
    GroupAlgebra A(V);
    FiltrationLevel lvl = A.augmentation_power(d + 1);
    PolSpace ps;
    ps.V = V;
    ps.degree = d;
    ps.basis = lvl.basis.transposed().kernel_basis();
    return ps;
}

// Rows C with ker C = column space of B (exact annihilator check matrix).
inline FpMatrix annihilator_rows(const FpMatrix& B) { return B.transposed().kernel_basis().transposed(); }

// Independent oracle: Pol_0 = constants, Pol_d = {f : (shift_v - 1) f lies in
// Pol_{d-1} for every v in V}, computed by downward recursion on d over all
// group elements (finite differences).
inline PolSpace pol_space_by_differences(const AbGroup& V, uint32_t d) {
    GroupAlgebra A(V);
    const ElementTable& tab = A.elements();
    size_t n = A.dim();
    uint32_t p = V.p;
    FpMatrix basis(p, n, 1);
    for (size_t i = 0; i < n; ++i) basis.set(i, 0, 1);  // constants
    for (uint32_t k = 1; k <= d; ++k) {
        FpMatrix check = annihilator_rows(basis);
        std::vector<FpMatrix> constraints;
        for (uint64_t v = 1; v < tab.size(); ++v) {
            // (S_v - 1) f value at w is f(w + v) - f(w)
            FpMatrix sv(p, n, n);
            for (uint64_t w = 0; w < tab.size(); ++w) {
                sv.add_at(w, tab.add(w, v), 1);
                sv.add_at(w, w, p - 1);
            }
            constraints.push_back(check * sv);
        }
        FpMatrix stacked(p, 0, n);
        for (const FpMatrix& c : constraints) stacked = FpMatrix::vcat(stacked, c);
        basis = stacked.kernel_basis();
        FpMatrix next = basis;
        basis = std::move(next);
    }
    PolSpace ps;
    ps.V = V;
    ps.degree = d;
    ps.basis = basis;
    return ps;
}

inline bool same_column_space(const FpMatrix& A, const FpMatrix& B) {
    if (A.rows() != B.rows() || A.p() != B.p()) return false;
    size_t ra = A.rank(), rb = B.rank();
    if (ra != rb) return false;
    return FpMatrix::hcat(A, B).rank() == ra;
}

// Pullback of functions along V ->> V/p^i.
inline FpMatrix quotient_pullback(const AbGroup& V, uint32_t i) {
    ElementTable tv = ElementTable::of(V);
    AbGroup Q = V.quotient_mod(i);
    if (Q.is_zero()) {
        FpMatrix m(V.p, static_cast<size_t>(tv.size()), 1);
        for (uint64_t w = 0; w < tv.size(); ++w) m.set(w, 0, 1);
        return m;  // functions on the zero group = constants
    }
    ElementTable tq = ElementTable::of(Q);
    // Q's exponents are min(r_j, i) sorted; V's torsion is sorted, and
    // min(.,i) preserves the order, so coordinates correspond index-wise.
    FpMatrix m(V.p, static_cast<size_t>(tv.size()), static_cast<size_t>(tq.size()));
    for (uint64_t w = 0; w < tv.size(); ++w) {
        std::vector<uint64_t> c = tv.coords(w);
        std::vector<uint64_t> cq(c.size());
        for (size_t j = 0; j < c.size(); ++j) cq[j] = c[j] % tq.gen_order(j);
        m.set(w, tq.index(cq), 1);
    }
    return m;
}

// True iff precomposition with V ->> V/p^i maps Pol_d(V/p^i) onto Pol_d(V)
// (equality of subspaces, not just of dimensions).
inline bool pol_stationarity_check(const AbGroup& V, uint32_t d, uint32_t i) {
    PolSpace pv = pol_space(V, d);
    AbGroup Q = V.quotient_mod(i);
    FpMatrix pulled = [&]() {
        if (Q.is_zero()) {
            return quotient_pullback(V, i);  // constants
        }
        PolSpace pq = pol_space(Q, d);
        return quotient_pullback(V, i) * pq.basis;
    }();
    return same_column_space(pulled, pv.basis);
}

}  // namespace extlab
