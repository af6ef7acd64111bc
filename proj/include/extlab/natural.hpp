#pragma once

// The space of natural transformations F -> G as the solution space of the
// naturality linear system.  Used as an independent oracle against the
// Yoneda/resolution route; constraints run over a composition-generating
// morphism set by default (naturality for f and g gives it for g o f), with
// an exhaustive mode for small skeletons.

#include <vector>

#include "extlab/functor.hpp"
#include "extlab/skeleton.hpp"

namespace extlab {

struct NatSpace {
    std::vector<CatObject> objs;
    std::vector<size_t> offsets;  // unknown offset per object (column-major vec of each component)
    size_t unknowns = 0;
    FpMatrix basis;               // columns = solutions
    size_t dim() const { return basis.cols(); }

    // component of solution #s at object index oi
    FpMatrix component(size_t s, size_t oi, size_t rows, size_t cols) const {
        FpMatrix m(basis.p(), rows, cols);
        for (size_t c = 0; c < cols; ++c)
            for (size_t r = 0; r < rows; ++r) m.set(r, c, basis.at(offsets[oi] + c * rows + r, s));
        return m;
    }
};

inline std::vector<Mor> all_morphisms(const Skeleton& sk, uint64_t cap = 1u << 22) {
    uint64_t total = 0;
    for (const CatObject& a : sk.objects())
        for (const CatObject& b : sk.objects()) {
            total += sk.hom_count(a, b);
            if (total > cap) throw GuardError("exhaustive morphism enumeration exceeds cap");
        }
    std::vector<Mor> out;
    out.reserve(total);
    for (const CatObject& a : sk.objects())
        for (const CatObject& b : sk.objects()) {
            uint64_t n = sk.hom_count(a, b);
            for (uint64_t i = 0; i < n; ++i) out.push_back(sk.morphism_at(a, b, i));
        }
    return out;
}

inline NatSpace nat_space(const FunctorPtr& F, const FunctorPtr& G, const std::vector<Mor>& mors) {
    const Skeleton& sk = F->skel();
    uint32_t p = F->p();
    NatSpace ns;
    ns.objs = sk.objects();
    std::vector<size_t> df(ns.objs.size()), dg(ns.objs.size());
    size_t off = 0;
    for (size_t i = 0; i < ns.objs.size(); ++i) {
        df[i] = F->dim(ns.objs[i]);
        dg[i] = G->dim(ns.objs[i]);
        ns.offsets.push_back(off);
        off += df[i] * dg[i];
    }
    ns.unknowns = off;
    std::unordered_map<std::string, size_t> oindex;
    for (size_t i = 0; i < ns.objs.size(); ++i) oindex[obj_key(ns.objs[i])] = i;

    // constraint rows: for f: a -> b, G(f) eta_a - eta_b F(f) = 0
    size_t rows = 0;
    for (const Mor& f : mors) rows += dg[oindex.at(obj_key(f.tgt))] * df[oindex.at(obj_key(f.src))];
    FpMatrix sys(p, rows, ns.unknowns);
    size_t r0 = 0;
    for (const Mor& f : mors) {
        size_t ia = oindex.at(obj_key(f.src)), ib = oindex.at(obj_key(f.tgt));
        FpMatrix gf = G->action(f);  // dg[b] x dg[a]
        FpMatrix ff = F->action(f);  // df[b] x df[a]
        size_t block_rows = dg[ib] * df[ia];
        // vec(G(f) eta_a): row (c * dg[b] + r) gets gf(r, s) at unknown (a, c * dg[a] + s)
        for (size_t c = 0; c < df[ia]; ++c)
            for (size_t r = 0; r < dg[ib]; ++r) {
                size_t row = r0 + c * dg[ib] + r;
                for (size_t s = 0; s < dg[ia]; ++s) {
                    uint32_t v = gf.at(r, s);
                    if (v) sys.add_at(row, ns.offsets[ia] + c * dg[ia] + s, v);
                }
                // minus vec(eta_b F(f)): eta_b(r, t) * ff(t, c)
                for (size_t t = 0; t < df[ib]; ++t) {
                    uint32_t v = ff.at(t, c);
                    if (v) sys.add_at(row, ns.offsets[ib] + t * dg[ib] + r, (p - v) % p);
                }
            }
        r0 += block_rows;
    }
    ns.basis = sys.kernel_basis();
    return ns;
}

inline size_t nat_dim(const FunctorPtr& F, const FunctorPtr& G) {
    return nat_space(F, G, F->skel().generating_morphisms()).dim();
}

inline size_t nat_dim_exhaustive(const FunctorPtr& F, const FunctorPtr& G, uint64_t cap = 1u << 22) {
    return nat_space(F, G, all_morphisms(F->skel(), cap)).dim();
}

}  // namespace extlab
