#pragma once

// Truncated Koszul-type complexes K^n_*: terms S^{n-i}_{(p)} (x) Lambda^i in
// homological degree i, with the differential induced by the exterior
// coproduct followed by the product of the truncated symmetric algebra.  The
// sign convention is (-1)^{t-1} on removal of the t-th wedge factor, fixed
// here once and pinned by the tests.  Also the classical (untruncated) Koszul
// complex over a vector space and its linear dual.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "extlab/abelian.hpp"
#include "extlab/chain.hpp"
#include "extlab/fp.hpp"
#include "extlab/grpalg.hpp"

namespace extlab {

// Strictly increasing i-subsets of {0, ..., g-1}, lexicographic.
inline std::vector<std::vector<uint32_t>> wedge_basis(uint32_t g, uint32_t i) {
    std::vector<std::vector<uint32_t>> out;
    if (i > g) return out;
    std::vector<uint32_t> cur(i);
    for (uint32_t k = 0; k < i; ++k) cur[k] = k;
    while (true) {
        out.push_back(cur);
        if (i == 0) break;
        int k = (int)i - 1;
        while (k >= 0 && cur[k] == g - i + k) --k;
        if (k < 0) break;
        ++cur[k];
        for (uint32_t l = k + 1; l < i; ++l) cur[l] = cur[l - 1] + 1;
    }
    return out;
}

inline size_t wedge_dim(uint32_t g, uint32_t i) { return wedge_basis(g, i).size(); }

struct KoszulComplex {
    uint32_t p = 2;
    uint32_t n = 0;
    std::vector<uint64_t> caps;                    // generator caps, 0 = free
    std::vector<MonomialBasis> s_bases;            // s_bases[i] = basis of S^{n-i}
    std::vector<std::vector<std::vector<uint32_t>>> w_bases;  // w_bases[i] = wedge i-subsets
    ChainComplex chain;                            // term i = S^{n-i} (x) Lambda^i
    // flat index of (s_idx, w_idx) in degree i: s_idx * |Lambda^i| + w_idx
};

inline KoszulComplex build_koszul(uint32_t p, const std::vector<uint64_t>& caps, uint32_t n) {
    KoszulComplex K;
    K.p = p;
    K.n = n;
    K.caps = caps;
    uint32_t g = static_cast<uint32_t>(caps.size());
    K.chain.p = p;
    uint32_t top = std::min(n, g);
    K.s_bases.resize(top + 1);
    K.w_bases.resize(top + 1);
    K.chain.dims.resize(top + 1);
    K.chain.d.resize(top + 1);
    for (uint32_t i = 0; i <= top; ++i) {
        K.s_bases[i] = monomial_basis(p, caps, n - i);
        K.w_bases[i] = wedge_basis(g, i);
        K.chain.dims[i] = K.s_bases[i].dim() * K.w_bases[i].size();
    }
    for (uint32_t i = 1; i <= top; ++i) {
        FpMatrix d(p, K.chain.dims[i - 1], K.chain.dims[i]);
        auto tgt_sidx = K.s_bases[i - 1].index_map();
        auto tgt_widx = [&](const std::vector<uint32_t>& w) {
            const auto& wb = K.w_bases[i - 1];
            for (size_t k = 0; k < wb.size(); ++k)
                if (wb[k] == w) return k;
            throw std::logic_error("wedge basis lookup failed");
        };
        size_t wcount = K.w_bases[i].size();
        for (size_t s = 0; s < K.s_bases[i].dim(); ++s) {
            const std::vector<uint32_t>& alpha = K.s_bases[i].exps[s];
            for (size_t w = 0; w < wcount; ++w) {
                const std::vector<uint32_t>& omega = K.w_bases[i][w];
                size_t col = s * wcount + w;
                for (uint32_t t = 0; t < i; ++t) {
                    uint32_t j = omega[t];
                    std::vector<uint32_t> alpha2 = alpha;
                    alpha2[j] += 1;
                    if (caps[j] != 0 && alpha2[j] >= caps[j]) continue;  // truncation x_j^{cap} = 0
                    std::vector<uint32_t> omega2 = omega;
                    omega2.erase(omega2.begin() + t);
                    size_t row = tgt_sidx.at(alpha2) * K.w_bases[i - 1].size() + tgt_widx(omega2);
                    uint32_t sign = (t % 2 == 0) ? 1 : p - 1;  // (-1)^{t-1}, t one-based
                    d.add_at(row, col, sign);
                }
            }
        }
        K.chain.d[i] = std::move(d);
    }
    K.chain.validate();
    return K;
}

inline KoszulComplex build_koszul(const AbGroup& V, uint32_t n) { return build_koszul(V.p, caps_of(V), n); }

struct HomologyTable {
    std::map<std::pair<uint32_t, uint32_t>, size_t> dims;  // (n, i) -> dim H_i(n)
    std::vector<std::pair<uint32_t, uint32_t>> violations;  // (n, i) with n > p^r i but H != 0
};

// Prop-style vanishing sweep: H_i(n)(V) must vanish whenever n > p^r i, where
// p^r bounds the p-primary torsion of V.
inline HomologyTable verify_vanishing(const AbGroup& V, uint32_t n_max) {
    HomologyTable table;
    uint64_t bound = ipow(V.p, V.torsion_exponent());
    for (uint32_t n = 0; n <= n_max; ++n) {
        KoszulComplex K = build_koszul(V, n);
        std::vector<size_t> h = K.chain.homology_dims();
        for (uint32_t i = 0; i < h.size(); ++i) {
            table.dims[{n, i}] = h[i];
            if (h[i] != 0 && (uint64_t)n > bound * i) table.violations.push_back({n, i});
        }
    }
    return table;
}

// ---------------------------------------------------------------------------
// Tensor product of chain complexes (total complex of the double complex):
// blocks of degree i ordered by ascending first factor degree s, with
// D(x (x) y) = dx (x) y + (-1)^s x (x) dy.
// ---------------------------------------------------------------------------
inline ChainComplex tensor_complex(const ChainComplex& A, const ChainComplex& B) {
    ChainComplex C;
    C.p = A.p;
    size_t la = A.dims.size(), lb = B.dims.size();
    size_t lc = la + lb - 1;
    C.dims.assign(lc, 0);
    std::vector<std::vector<size_t>> offset(lc);  // offset[i][s] = start of block (s, i-s)
    for (size_t i = 0; i < lc; ++i) {
        offset[i].assign(la, 0);
        size_t off = 0;
        for (size_t s = 0; s < la; ++s) {
            offset[i][s] = off;
            if (i >= s && i - s < lb) off += A.dims[s] * B.dims[i - s];
        }
        C.dims[i] = off;
    }
    C.d.resize(lc);
    for (size_t i = 1; i < lc; ++i) {
        FpMatrix d(C.p, C.dims[i - 1], C.dims[i]);
        for (size_t s = 0; s < la; ++s) {
            if (i < s || i - s >= lb) continue;
            size_t t = i - s;
            size_t adim = A.dims[s], bdim = B.dims[t];
            if (adim * bdim == 0) continue;
            // d_A (x) id
            if (s >= 1 && A.dims[s - 1] > 0) {
                const FpMatrix& dA = A.d[s];
                for (size_t r = 0; r < A.dims[s - 1]; ++r)
                    for (size_t c = 0; c < adim; ++c) {
                        uint32_t v = dA.at(r, c);
                        if (!v) continue;
                        for (size_t y = 0; y < bdim; ++y)
                            d.add_at(offset[i - 1][s - 1] + r * bdim + y, offset[i][s] + c * bdim + y, v);
                    }
            }
            // (-1)^s id (x) d_B
            if (t >= 1 && B.dims[t - 1] > 0) {
                const FpMatrix& dB = B.d[t];
                uint32_t sign = (s % 2 == 0) ? 1 : C.p - 1;
                for (size_t r = 0; r < B.dims[t - 1]; ++r)
                    for (size_t c = 0; c < bdim; ++c) {
                        uint32_t v = dB.at(r, c);
                        if (!v) continue;
                        for (size_t x = 0; x < adim; ++x)
                            d.add_at(offset[i - 1][s] + x * B.dims[t - 1] + r, offset[i][s] + x * bdim + c,
                                     (sign * v) % C.p);
                    }
            }
        }
        C.d[i] = std::move(d);
    }
    return C;
}

struct ExponentialIso {
    std::vector<ChainComplex> totals;        // totals[n]: sum over a+b=n of K^a(U) (x) K^b(V), blocks by a
    std::vector<std::vector<FpMatrix>> phi;  // phi[n][i]: K^n_i(U + V) -> totals[n]_i
    bool commutes = false;
    bool bijective = false;
};

// Explicit chain isomorphism K^n_*(U + V) = sum_{a+b=n} K^a_*(U) (x) K^b_*(V)
// by splitting monomials and wedges along the two generator blocks (U
// generators first, so the ordered wedge splits with no extra sign).
inline ExponentialIso exponential_iso(const AbGroup& U, const AbGroup& V, uint32_t n_max) {
    ExponentialIso iso;
    iso.commutes = true;
    iso.bijective = true;
    // caps by concatenation, U generators first, so ordered wedges split with
    // no extra sign
    std::vector<uint64_t> capsU = caps_of(U), capsV = caps_of(V);
    std::vector<uint64_t> capsUV = capsU;
    capsUV.insert(capsUV.end(), capsV.begin(), capsV.end());
    uint32_t gU = static_cast<uint32_t>(capsU.size());
    uint32_t p = U.p;

    for (uint32_t n = 0; n <= n_max; ++n) {
        KoszulComplex KUV = build_koszul(p, capsUV, n);
        // totals and per-(a) complexes
        std::vector<KoszulComplex> KU, KV;
        for (uint32_t a = 0; a <= n; ++a) {
            KU.push_back(build_koszul(p, capsU, a));
            KV.push_back(build_koszul(p, capsV, n - a));
        }
        std::vector<ChainComplex> tens;
        for (uint32_t a = 0; a <= n; ++a) tens.push_back(tensor_complex(KU[a].chain, KV[a].chain));
        // assemble the direct sum over a (block order: a ascending)
        ChainComplex total;
        total.p = p;
        size_t len = KUV.chain.dims.size();
        total.dims.assign(len, 0);
        std::vector<std::vector<size_t>> aoff(len, std::vector<size_t>(n + 1, 0));
        for (size_t i = 0; i < len; ++i) {
            size_t off = 0;
            for (uint32_t a = 0; a <= n; ++a) {
                aoff[i][a] = off;
                if (i < tens[a].dims.size()) off += tens[a].dims[i];
            }
            total.dims[i] = off;
        }
        total.d.resize(len);
        for (size_t i = 1; i < len; ++i) {
            FpMatrix d(p, total.dims[i - 1], total.dims[i]);
            for (uint32_t a = 0; a <= n; ++a) {
                if (i >= tens[a].dims.size()) continue;
                const FpMatrix& db = tens[a].d[i];
                for (size_t r = 0; r < db.rows(); ++r)
                    for (size_t c = 0; c < db.cols(); ++c)
                        if (uint32_t v = db.at(r, c)) d.add_at(aoff[i - 1][a] + r, aoff[i][a] + c, v);
            }
            total.d[i] = std::move(d);
        }

        // iso matrices
        std::vector<FpMatrix> phin(len);
        for (size_t i = 0; i < len; ++i) {
            FpMatrix m(p, total.dims[i], KUV.chain.dims[i]);
            const MonomialBasis& sb = KUV.s_bases[i];
            const auto& wb = KUV.w_bases[i];
            size_t wcount = wb.size();
            for (size_t s = 0; s < sb.dim(); ++s)
                for (size_t w = 0; w < wcount; ++w) {
                    const std::vector<uint32_t>& alpha = sb.exps[s];
                    const std::vector<uint32_t>& omega = wb[w];
                    uint32_t sdegU = 0;
                    for (uint32_t j = 0; j < gU; ++j) sdegU += alpha[j];
                    std::vector<uint32_t> alphaU(alpha.begin(), alpha.begin() + gU);
                    std::vector<uint32_t> alphaV(alpha.begin() + gU, alpha.end());
                    std::vector<uint32_t> omegaU, omegaV;
                    for (uint32_t j : omega) (j < gU ? omegaU : omegaV).push_back(j);
                    for (uint32_t& j : omegaV) j -= gU;
                    uint32_t sW = static_cast<uint32_t>(omegaU.size());
                    uint32_t a = sdegU + sW;  // total U-degree
                    if (a > n) throw std::logic_error("exponential iso: degree bookkeeping");
                    const KoszulComplex& ku = KU[a];
                    const KoszulComplex& kv = KV[a];
                    if (sW >= ku.s_bases.size() || (i - sW) >= kv.s_bases.size())
                        throw std::logic_error("exponential iso: block out of range");
                    size_t su = ku.s_bases[sW].index_map().at(alphaU);
                    size_t wu = [&] {
                        const auto& b = ku.w_bases[sW];
                        for (size_t k = 0; k < b.size(); ++k)
                            if (b[k] == omegaU) return k;
                        throw std::logic_error("wedge lookup U");
                    }();
                    size_t sv = kv.s_bases[i - sW].index_map().at(alphaV);
                    size_t wv = [&] {
                        const auto& b = kv.w_bases[i - sW];
                        for (size_t k = 0; k < b.size(); ++k)
                            if (b[k] == omegaV) return k;
                        throw std::logic_error("wedge lookup V");
                    }();
                    size_t uidx = su * ku.w_bases[sW].size() + wu;
                    size_t vidx = sv * kv.w_bases[i - sW].size() + wv;
                    // block (a), position inside tensor block: s = sW (U homological degree)
                    size_t boff = 0;
                    {
                        // offset of block s = sW within tens[a] degree i
                        for (uint32_t s2 = 0; s2 < sW; ++s2)
                            if (i >= s2 && (i - s2) < kv.chain.dims.size() && s2 < ku.chain.dims.size())
                                boff += ku.chain.dims[s2] * kv.chain.dims[i - s2];
                    }
                    size_t kvdim = kv.chain.dims[i - sW];
                    size_t row = aoff[i][a] + boff + uidx * kvdim + vidx;
                    m.set(row, s * wcount + w, 1);
                }
            phin[i] = std::move(m);
        }
        // verify chain-map property and bijectivity
        for (size_t i = 1; i < len; ++i) {
            FpMatrix lhs = phin[i - 1] * KUV.chain.d[i];
            FpMatrix rhs = total.d[i] * phin[i];
            if (!(lhs == rhs)) iso.commutes = false;
        }
        for (size_t i = 0; i < len; ++i) {
            if (phin[i].rows() != phin[i].cols() || phin[i].rank() != phin[i].rows()) iso.bijective = false;
        }
        iso.totals.push_back(std::move(total));
        iso.phi.push_back(std::move(phin));
    }
    return iso;
}

// Classical Koszul complex over W = F_p^m in weight n (full symmetric powers,
// no truncation) and its linear dual.  Both are exact for n >= 1.
struct ClassicalKoszul {
    ChainComplex primal;  // Lambda^i (x) S^{n-i} in degree i
    ChainComplex dual;    // reversed, transposed: the divided-power-side sequence
};

inline ClassicalKoszul classical_koszul_and_dual(uint32_t p, uint32_t m, uint32_t n) {
    std::vector<uint64_t> caps(m, 0);  // free: full symmetric algebra
    KoszulComplex K = build_koszul(p, caps, n);
    ClassicalKoszul ck;
    ck.primal = K.chain;
    ck.dual = K.chain.dual();
    return ck;
}

}  // namespace extlab
