#pragma once

// Cross-effects, polynomial degree detection, and the truncation adjoints
// q_d (largest polynomial quotient) and p_d (largest polynomial subfunctor)
// on the truncated skeleton.  Every operation that needs a tuple of objects
// carries the guard "the direct sum fits in the skeleton"; violations raise
// GuardError and are never silent.

#include <map>
#include <vector>

#include "extlab/functor.hpp"
#include "extlab/skeleton.hpp"

namespace extlab {

// product of the commuting idempotents (1 - F(collapse_i)) on F(sum of tuple)
inline FpMatrix cross_effect_projector(const FunctorPtr& F, const std::vector<CatObject>& tuple) {
    const Skeleton& sk = F->skel();
    CatObject s = sk.obj_sum(tuple);  // throws GuardError when out of skeleton
    size_t n = F->dim(s);
    FpMatrix P = FpMatrix::identity(F->p(), n);
    for (size_t i = 0; i < tuple.size(); ++i) {
        FpMatrix e = F->action(sk.collapse(tuple, i));
        P = (FpMatrix::identity(F->p(), n) - e) * P;
    }
    return P;
}

// basis (columns) of cr_n(F)(tuple) inside F(sum of tuple)
inline FpMatrix cross_effect_basis(const FunctorPtr& F, const std::vector<CatObject>& tuple) {
    return cross_effect_projector(F, tuple).column_space_basis();
}

inline size_t cross_effect_dim(const FunctorPtr& F, const std::vector<CatObject>& tuple) {
    return cross_effect_projector(F, tuple).rank();
}

// map induced on cross-effects by a natural transformation, in the chosen
// bases (solves coordinates; cross-effects are functorial in F)
inline FpMatrix cross_effect_map(const NatTransform& eta, const std::vector<CatObject>& tuple) {
    const Skeleton& sk = eta.source->skel();
    CatObject s = sk.obj_sum(tuple);
    FpMatrix bsrc = cross_effect_basis(eta.source, tuple);
    FpMatrix btgt = cross_effect_basis(eta.target, tuple);
    auto sol = btgt.solve(eta.at(s) * bsrc);
    if (!sol) throw std::logic_error("cross-effect not preserved by natural transformation");
    return *sol;
}

// All multisets of generator objects of size n whose sum stays in the
// skeleton.  By additivity of cross-effects in each variable, vanishing on
// these tuples is vanishing on all in-skeleton tuples.
inline std::vector<std::vector<CatObject>> generator_tuples(const Skeleton& sk, uint32_t n) {
    std::vector<std::vector<CatObject>> out;
    size_t g = sk.num_generators();
    std::vector<uint32_t> counts(g, 0);
    // multisets = compositions n = sum counts_g with counts_g <= K
    std::function<void(size_t, uint32_t)> rec = [&](size_t gi, uint32_t left) {
        if (gi == g) {
            if (left == 0) {
                std::vector<CatObject> tuple;
                for (size_t k = 0; k < g; ++k)
                    for (uint32_t c = 0; c < counts[k]; ++c) tuple.push_back(sk.generator_object(k));
                out.push_back(std::move(tuple));
            }
            return;
        }
        for (uint32_t c = 0; c <= std::min<uint32_t>(left, sk.K()); ++c) {
            counts[gi] = c;
            rec(gi + 1, left - c);
        }
        counts[gi] = 0;
    };
    rec(0, n);
    return out;
}

struct PolyDegreeResult {
    enum class Status { Found, ExceedsMax, GuardLimited } status;
    uint32_t degree = 0;       // valid when Found
    uint32_t tested_up_to = 0; // largest cross-effect arity testable inside the skeleton
    std::string detail;
};

// Degree on the skeleton: cross-effects at a compound object decompose into
// cross-effects of equal or higher arity at generator tuples, so F has degree
// <= d on all in-skeleton tuples iff cr_e vanishes on admissible generator
// tuples for every testable arity e > d.  The skeleton degree is therefore
// the largest testable arity with a nonvanishing cross-effect.  When that
// largest arity is itself nonvanishing and d_max reaches past it, higher
// cross-effects are untestable and the guard is reported instead.
inline PolyDegreeResult poly_degree(const FunctorPtr& F, uint32_t d_max) {
    const Skeleton& sk = F->skel();
    uint32_t max_arity = 0;
    while (!generator_tuples(sk, max_arity + 1).empty()) ++max_arity;
    uint32_t top_nonzero = 0;  // e* = largest arity e with cr_e != 0
    for (uint32_t e = 1; e <= max_arity; ++e) {
        bool vanished = true;
        for (const auto& t : generator_tuples(sk, e))
            if (cross_effect_dim(F, t) != 0) {
                vanished = false;
                break;
            }
        if (!vanished) top_nonzero = e;
    }
    if (top_nonzero > d_max)
        return {PolyDegreeResult::Status::ExceedsMax, 0, max_arity,
                "cr_" + std::to_string(top_nonzero) + " nonzero"};
    if (top_nonzero == max_arity && d_max >= max_arity)
        return {PolyDegreeResult::Status::GuardLimited, 0, max_arity,
                "cr_" + std::to_string(max_arity + 1) + " does not fit K = " + std::to_string(sk.K())};
    return {PolyDegreeResult::Status::Found, top_nonzero, max_arity, ""};
}

// --- diagonal cross-effect comonad T(F)(a) = cr_{n+1}(F)(a, ..., a) ---------

class BlowupFunctor final : public Functor {
public:
    BlowupFunctor(SkeletonPtr sk, FunctorPtr base, uint32_t copies)
        : Functor(std::move(sk)), base_(std::move(base)), copies_(copies) {}
    std::string name() const override { return base_->name() + "^(+" + std::to_string(copies_) + ")"; }

protected:
    size_t compute_dim(const CatObject& a) const override { return base_->dim(sk_->obj_power(a, copies_)); }
    FpMatrix compute_action(const Mor& f) const override { return base_->action(sk_->block_power(f, copies_)); }

private:
    FunctorPtr base_;
    uint32_t copies_;
};

// T(F) as a subfunctor of F((n+1) . -): evaluation at a requires the blown-up
// object to lie in the skeleton (hard guard).
inline FunctorPtr diagonal_cross_effect(const FunctorPtr& F, uint32_t n) {
    SkeletonPtr sk = F->skel_ptr();
    FunctorPtr blow = std::make_shared<BlowupFunctor>(sk, F, n + 1);
    FunctorPtr Fc = F;
    auto basis = [Fc, n](const CatObject& a) {
        std::vector<CatObject> tuple(n + 1, a);
        return cross_effect_basis(Fc, tuple);
    };
    return std::make_shared<SubFunctor>(sk, blow, basis, "cr" + std::to_string(n + 1) + "diag");
}

// --- saturated subfunctor machinery ------------------------------------------

// closure of per-object seed spans under the action of a morphism family
// (composition-generating, so closure under the family is closure under all)
inline std::map<std::string, FpMatrix> saturate_subfunctor(const FunctorPtr& F,
                                                           std::map<std::string, FpSpan>& seeds,
                                                           const std::vector<Mor>& mors) {
    bool grew = true;
    while (grew) {
        grew = false;
        for (const Mor& g : mors) {
            FpSpan& src = seeds.at(obj_key(g.src));
            if (src.dim() == 0) continue;
            FpSpan& tgt = seeds.at(obj_key(g.tgt));
            FpMatrix img = F->action(g) * src.basis_matrix();
            for (size_t c = 0; c < img.cols(); ++c) grew = tgt.insert(img.column(c)) || grew;
        }
    }
    std::map<std::string, FpMatrix> out;
    for (auto& [k, span] : seeds) out.emplace(k, span.basis_matrix());
    return out;
}

struct PolyTruncation {
    FunctorPtr functor;     // q_d F (quotient) or p_d F (subfunctor)
    NatTransform structure; // projection F ->> q_d F, or inclusion p_d F -> F
};

// Decompositions of s into exactly m nonzero objects, parts nondecreasing to
// kill permutation duplicates.  Every such tuple stays inside the skeleton,
// so the degree constraints below never hit the guard.
inline std::vector<std::vector<CatObject>> object_decompositions(const Skeleton& sk, const CatObject& s, uint32_t m) {
    std::vector<std::vector<CatObject>> out;
    std::vector<CatObject> cur;
    std::function<void(const CatObject&, uint32_t, const CatObject&)> rec = [&](const CatObject& rem, uint32_t left,
                                                                                const CatObject& min_part) {
        if (left == 1) {
            if (sk.total_mult(rem) > 0 && !(rem < min_part)) {
                cur.push_back(rem);
                out.push_back(cur);
                cur.pop_back();
            }
            return;
        }
        // enumerate nonzero parts <= rem componentwise, >= min_part in object order
        CatObject a(rem.size(), 0);
        while (true) {
            // advance the multi-index
            size_t g = 0;
            while (g < a.size() && a[g] == rem[g]) a[g++] = 0;
            if (g == a.size()) break;
            ++a[g];
            if (sk.total_mult(a) == 0 || a < min_part) continue;
            CatObject rest(rem.size());
            for (size_t k = 0; k < rem.size(); ++k) rest[k] = rem[k] - a[k];
            cur.push_back(a);
            rec(rest, left - 1, a);
            cur.pop_back();
        }
    };
    rec(s, m, CatObject(s.size(), 0));
    return out;
}

// q_d(F): quotient by the subfunctor spanned by the (d+1)-st cross-effects of
// every decomposition of every object, saturated under the morphism action.
// At objects whose (d+1)-fold diagonal stays inside the skeleton this agrees
// with the cokernel of the diagonal evaluation cr_{d+1}(F)(a,...,a) -> F(a).
inline PolyTruncation q_trunc(const FunctorPtr& F, uint32_t d) {
    const Skeleton& sk = F->skel();
    SkeletonPtr skp = F->skel_ptr();
    if (generator_tuples(sk, d + 1).empty())
        throw GuardError("q_" + std::to_string(d) + " needs tuples of size " + std::to_string(d + 1) +
                         " inside K = " + std::to_string(sk.K()));
    std::map<std::string, FpSpan> seeds;
    for (const CatObject& a : sk.objects()) seeds.emplace(obj_key(a), FpSpan(F->p(), F->dim(a)));
    for (const CatObject& s : sk.objects()) {
        FpSpan& span = seeds.at(obj_key(s));
        for (const auto& dec : object_decompositions(sk, s, d + 1)) {
            FpMatrix b = cross_effect_basis(F, dec);
            for (size_t c = 0; c < b.cols(); ++c) span.insert(b.column(c));
        }
    }
    auto sub = saturate_subfunctor(F, seeds, sk.generating_morphisms());
    auto subfn = [sub](const CatObject& a) { return sub.at(obj_key(a)); };
    auto q = std::make_shared<QuotientFunctor>(skp, F, subfn, "q" + std::to_string(d));
    NatTransform proj{F, q, [q](const CatObject& a) { return q->data_at(a).proj; }, "q-projection"};
    return PolyTruncation{q, std::move(proj)};
}

// p_d(F): the largest action-stable family of subspaces killed by the
// (d+1)-st cross-effect projectors of every decomposition.
inline PolyTruncation p_trunc(const FunctorPtr& F, uint32_t d) {
    const Skeleton& sk = F->skel();
    SkeletonPtr skp = F->skel_ptr();
    if (generator_tuples(sk, d + 1).empty())
        throw GuardError("p_" + std::to_string(d) + " needs tuples of size " + std::to_string(d + 1) +
                         " inside K = " + std::to_string(sk.K()));
    std::map<std::string, FpMatrix> basis;
    for (const CatObject& s : sk.objects()) {
        FpMatrix b = FpMatrix::identity(F->p(), F->dim(s));
        for (const auto& dec : object_decompositions(sk, s, d + 1)) {
            if (b.cols() == 0) break;
            FpMatrix proj = cross_effect_projector(F, dec);
            b = b * (proj * b).kernel_basis();
        }
        basis.emplace(obj_key(s), std::move(b));
    }
    // refine to the largest action-stable family
    std::vector<Mor> mors = sk.generating_morphisms();
    bool shrunk = true;
    while (shrunk) {
        shrunk = false;
        for (const Mor& g : mors) {
            FpMatrix& bsrc = basis.at(obj_key(g.src));
            if (bsrc.cols() == 0) continue;
            const FpMatrix& btgt = basis.at(obj_key(g.tgt));
            FpMatrix check = annihilator_rows(btgt);
            FpMatrix viol = check * (F->action(g) * bsrc);
            if (viol.is_zero()) continue;
            FpMatrix keep = viol.kernel_basis();  // coordinates within bsrc
            bsrc = bsrc * keep;
            shrunk = true;
        }
    }
    auto basisfn = [basis](const CatObject& a) { return basis.at(obj_key(a)); };
    auto pf = std::make_shared<SubFunctor>(skp, F, basisfn, "p" + std::to_string(d));
    auto pfc = pf;
    NatTransform incl{pf, F, [pfc](const CatObject& a) { return pfc->basis_at(a); }, "p-inclusion"};
    return PolyTruncation{pf, std::move(incl)};
}

}  // namespace extlab
