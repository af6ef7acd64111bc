#pragma once

// Generalized stabilization complexes D^{(n)}_*(F): the unnormalized
// alternating-sum complexes of the comonad T coming from the adjunction
// between the iterated diagonal and (n+1)-st cross-effects, T(F)(a) =
// cr_{n+1}(F)(a, ..., a).  Term i is T^i(F), a natural direct summand of
// F(a^{(n+1)^i}); evaluation carries the hard skeleton guard.  Once a term
// vanishes on every evaluable object, all later terms are the zero functor
// (T of the zero functor is zero) and are represented formally.

#include <vector>

#include "extlab/chain.hpp"
#include "extlab/crosseff.hpp"
#include "extlab/functor.hpp"

namespace extlab {

struct DComplex {
    FunctorPtr F;
    uint32_t n = 1;
    size_t i_max = 0;
    std::vector<FunctorPtr> terms;   // terms[i] = T^i(F), i = 0..i_max
    std::vector<bool> formal_zero;   // term is the zero functor by the shortcut
};

inline bool zero_on_all_evaluable(const FunctorPtr& F) {
    bool any_evaluated = false;
    for (const CatObject& a : F->skel().objects()) {
        try {
            if (F->dim(a) != 0) return false;
            any_evaluated = true;
        } catch (const GuardError&) {
            // out of guard: unknowable here
        }
    }
    return any_evaluated;
}

inline DComplex build_dcomplex(FunctorPtr F, uint32_t n, size_t i_max) {
    if (n < 1) throw std::invalid_argument("D-complex arity parameter n must be >= 1");
    DComplex D;
    D.F = F;
    D.n = n;
    D.i_max = i_max;
    D.terms.push_back(F);
    D.formal_zero.push_back(false);
    for (size_t i = 1; i <= i_max; ++i) {
        if (D.formal_zero.back() || zero_on_all_evaluable(D.terms.back())) {
            bool already_formal = D.formal_zero.back();
            D.terms.push_back(zero_functor(F->skel_ptr()));
            D.formal_zero.push_back(true);
            (void)already_formal;
        } else {
            D.terms.push_back(diagonal_cross_effect(D.terms.back(), n));
            D.formal_zero.push_back(false);
        }
    }
    return D;
}

namespace detail {

inline FpMatrix term_basis(const FunctorPtr& term, const CatObject& a) {
    auto sub = std::dynamic_pointer_cast<const SubFunctor>(term);
    if (!sub) throw std::logic_error("D-complex term is not a cross-effect subfunctor");
    return sub->basis_at(a);
}

// counit component at a: T(G) -> G along the codiagonal
inline FpMatrix counit_component(const FunctorPtr& TG, const FunctorPtr& G, uint32_t n, const CatObject& a) {
    const Skeleton& sk = G->skel();
    return G->action(sk.codiagonal(a, n + 1)) * term_basis(TG, a);
}

// component at a of T(eta) for eta: G -> G' with component function eta_comp
inline FpMatrix T_component(const FunctorPtr& TG, const FunctorPtr& TG2,
                            const std::function<FpMatrix(const CatObject&)>& eta_comp, uint32_t n,
                            const CatObject& a) {
    const Skeleton& sk = TG->skel();
    CatObject blown = sk.obj_power(a, n + 1);
    FpMatrix img = eta_comp(blown) * term_basis(TG, a);
    auto sol = term_basis(TG2, a).solve(img);
    if (!sol) throw std::logic_error("T of a natural transformation left the cross-effect subspace");
    return *sol;
}

}  // namespace detail

// face d_j : T^i F -> T^{i-1} F at object a, d_j = T^j(counit of T^{i-1-j} F)
inline FpMatrix dcomplex_face(const DComplex& D, size_t i, size_t j, const CatObject& a) {
    if (i == 0 || i > D.i_max || j >= i) throw std::invalid_argument("face index out of range");
    if (D.formal_zero[i]) return FpMatrix(D.F->p(), D.terms[i - 1]->dim(a), 0);
    // eta_0 = counit: T^{i-j} F -> T^{i-1-j} F
    std::function<FpMatrix(const CatObject&)> comp = [&D, i, j](const CatObject& b) {
        return detail::counit_component(D.terms[i - j], D.terms[i - 1 - j], D.n, b);
    };
    for (size_t k = 0; k < j; ++k) {
        size_t src_level = i - j + k + 1;
        std::function<FpMatrix(const CatObject&)> inner = comp;
        const DComplex* Dp = &D;
        comp = [Dp, inner, src_level](const CatObject& b) {
            return detail::T_component(Dp->terms[src_level], Dp->terms[src_level - 1], inner, Dp->n, b);
        };
    }
    return comp(a);
}

inline FpMatrix dcomplex_differential(const DComplex& D, size_t i, const CatObject& a) {
    FpMatrix d(D.F->p(), D.terms[i - 1]->dim(a), D.terms[i]->dim(a));
    for (size_t j = 0; j < i; ++j) {
        FpMatrix f = dcomplex_face(D, i, j, a);
        d = (j % 2 == 0) ? d + f : d - f;
    }
    return d;
}

// number of terms evaluable at a within the guard
inline size_t evaluable_terms(const DComplex& D, const CatObject& a) {
    size_t count = 0;
    for (size_t i = 0; i <= D.i_max; ++i) {
        try {
            (void)D.terms[i]->dim(a);
            ++count;
        } catch (const GuardError&) {
            break;
        }
    }
    return count;
}

// the evaluated chain complex at a (terms 0..up_to)
inline ChainComplex dcomplex_at(const DComplex& D, const CatObject& a, size_t up_to) {
    if (up_to > D.i_max) throw std::invalid_argument("D-complex not built that far");
    ChainComplex c;
    c.p = D.F->p();
    for (size_t i = 0; i <= up_to; ++i) c.dims.push_back(D.terms[i]->dim(a));
    c.d.resize(up_to + 1);
    for (size_t i = 1; i <= up_to; ++i) c.d[i] = dcomplex_differential(D, i, a);
    return c;
}

// H_0(D^{(n)} F)(a) = coker of the counit; its kernel subspace in F(a)
// coordinates is im(d_1), directly comparable with q_n(F).
inline FpMatrix h0_relations(const DComplex& D, const CatObject& a) {
    if (D.i_max < 1) throw std::invalid_argument("need i_max >= 1 for H_0");
    if (D.formal_zero[1]) return FpMatrix(D.F->p(), D.F->dim(a), 0);
    return dcomplex_differential(D, 1, a).column_space_basis();
}

// simplicial face identities d_j d_k = d_{k-1} d_j for j < k, checked as
// matrices at one object
inline bool simplicial_identities_at(const DComplex& D, size_t i, const CatObject& a) {
    if (i < 2 || i > D.i_max) throw std::invalid_argument("need 2 <= i <= i_max");
    for (size_t k = 1; k < i; ++k)
        for (size_t j = 0; j < k; ++j) {
            FpMatrix lhs = dcomplex_face(D, i - 1, j, a) * dcomplex_face(D, i, k, a);
            FpMatrix rhs = dcomplex_face(D, i - 1, k - 1, a) * dcomplex_face(D, i, j, a);
            if (!(lhs == rhs)) return false;
        }
    return true;
}

// split-inclusion property: the cross-effect projector fixes the term basis,
// so coordinates along the basis give an explicit retraction
inline bool term_split_at(const DComplex& D, size_t i, const CatObject& a) {
    if (i == 0 || D.formal_zero[i]) return true;
    std::vector<CatObject> tuple(D.n + 1, a);
    FpMatrix P = cross_effect_projector(D.terms[i - 1], tuple);
    FpMatrix B = detail::term_basis(D.terms[i], a);
    return (P * B) == B;
}

// --- dual complexes -----------------------------------------------------------

struct DualDComplex {
    DComplex primal;  // D-complex of the dual functor
    FunctorPtr F;     // the original functor
};

inline DualDComplex dual_dcomplex(FunctorPtr F, uint32_t n, size_t i_max) {
    return DualDComplex{build_dcomplex(dual_of(F), n, i_max), F};
}

// cochain complex at a: linear dual of the primal chain complex at a
inline ChainComplex dual_dcomplex_at(const DualDComplex& D, const CatObject& a, size_t up_to) {
    ChainComplex primal = dcomplex_at(D.primal, a, up_to);
    // cochain in homological indexing: degree i holds (T^i(F dual)(a))^dual,
    // with d_i^T pointing up; reuse dual() which also reverses, then re-index
    ChainComplex c;
    c.p = primal.p;
    c.dims = primal.dims;
    c.d.resize(primal.dims.size());
    // we keep cohomological degree i stored at chain degree i; homology of
    // this "chain complex" read backwards is the cohomology of the dual
    for (size_t i = 1; i < primal.dims.size(); ++i) c.d[i] = primal.d[i];
    return c;
}

// H^i dims of the dual complex at a (= H_i dims of the primal at a, by exact
// duality of finite-dimensional spaces)
inline std::vector<size_t> dual_cohomology_dims(const DualDComplex& D, const CatObject& a, size_t up_to) {
    return dcomplex_at(D.primal, a, up_to).homology_dims();
}

// H^0 of the dual complex as a subspace of F(a): the kernel of the transposed
// counit, using the canonical identification (F^dual(a))^dual = F(a)
inline FpMatrix dual_h0_basis(const DualDComplex& D, const CatObject& a) {
    if (D.primal.i_max < 1) throw std::invalid_argument("need i_max >= 1 for H^0");
    if (D.primal.formal_zero[1]) return FpMatrix::identity(D.F->p(), D.F->dim(a));
    return dcomplex_differential(D.primal, 1, a).transposed().kernel_basis();
}

}  // namespace extlab
