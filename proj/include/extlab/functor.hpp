#pragma once

// Functors from a skeleton to F_p-vector spaces as evaluable expression
// trees.  Values and action matrices are cached per node; caches are
// internally synchronized so shared functor models can be evaluated
// concurrently.

#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <string>
#include <unordered_map>
#include <vector>

#include "extlab/fp.hpp"
#include "extlab/grpalg.hpp"
#include "extlab/skeleton.hpp"
#include "extlab/util.hpp"

namespace extlab {

using SkeletonPtr = std::shared_ptr<const Skeleton>;

class Functor;
using FunctorPtr = std::shared_ptr<const Functor>;

class Functor : public std::enable_shared_from_this<Functor> {
public:
    explicit Functor(SkeletonPtr sk) : sk_(std::move(sk)) {}
    virtual ~Functor() = default;

    const Skeleton& skel() const { return *sk_; }
    SkeletonPtr skel_ptr() const { return sk_; }
    uint32_t p() const { return sk_->p(); }

    size_t dim(const CatObject& a) const {
        if (!sk_->in_skeleton(a)) throw GuardError("evaluation outside the skeleton at " + obj_key(a));
        std::string k = obj_key(a);
        {
            std::lock_guard<std::mutex> lock(mu_);
            auto it = dims_.find(k);
            if (it != dims_.end()) return it->second;
        }
        size_t d = compute_dim(a);
        std::lock_guard<std::mutex> lock(mu_);
        dims_[k] = d;
        return d;
    }

    FpMatrix action(const Mor& f) const {
        std::string k = mor_key(f);
        {
            std::lock_guard<std::mutex> lock(mu_);
            auto it = acts_.find(k);
            if (it != acts_.end()) return it->second;
        }
        FpMatrix m = compute_action(f);
        if (m.rows() != dim(f.tgt) || m.cols() != dim(f.src))
            throw std::logic_error("functor action has wrong shape for " + name());
        std::lock_guard<std::mutex> lock(mu_);
        acts_[k] = m;
        return m;
    }

    bool is_zero_everywhere() const {
        for (const CatObject& a : sk_->objects())
            if (dim(a) != 0) return false;
        return true;
    }

    virtual std::string name() const = 0;

protected:
    virtual size_t compute_dim(const CatObject& a) const = 0;
    virtual FpMatrix compute_action(const Mor& f) const = 0;

    SkeletonPtr sk_;

private:
    mutable std::mutex mu_;
    mutable std::unordered_map<std::string, size_t> dims_;
    mutable std::unordered_map<std::string, FpMatrix> acts_;
};

// --- simple nodes -----------------------------------------------------------

class ConstantFunctor final : public Functor {
public:
    ConstantFunctor(SkeletonPtr sk, size_t d) : Functor(std::move(sk)), d_(d) {}
    std::string name() const override { return d_ == 1 ? "Fp" : "Fp^" + std::to_string(d_); }

protected:
    size_t compute_dim(const CatObject&) const override { return d_; }
    FpMatrix compute_action(const Mor&) const override { return FpMatrix::identity(p(), d_); }

private:
    size_t d_;
};

class ZeroFunctor final : public Functor {
public:
    explicit ZeroFunctor(SkeletonPtr sk) : Functor(std::move(sk)) {}
    std::string name() const override { return "0"; }

protected:
    size_t compute_dim(const CatObject&) const override { return 0; }
    FpMatrix compute_action(const Mor&) const override { return FpMatrix(p(), 0, 0); }
};

// F_p[Hom(a0, -)], the Yoneda projective.
class HomLinearization final : public Functor {
public:
    HomLinearization(SkeletonPtr sk, CatObject a0) : Functor(std::move(sk)), a0_(std::move(a0)) {}
    std::string name() const override { return "Fp[Hom(" + sk_->object_name(a0_) + ",-)]"; }
    const CatObject& base() const { return a0_; }

    // composition as an index map: basis [g] of Hom(a0, src f) to [f o g]
    std::vector<uint64_t> comp_index_map(const Mor& f) const {
        uint64_t n = sk_->hom_count(a0_, f.src);
        std::vector<uint64_t> out(n);
        for (uint64_t i = 0; i < n; ++i) out[i] = sk_->index_of(sk_->compose(f, sk_->morphism_at(a0_, f.src, i)));
        return out;
    }

protected:
    size_t compute_dim(const CatObject& b) const override { return static_cast<size_t>(sk_->hom_count(a0_, b)); }
    FpMatrix compute_action(const Mor& f) const override {
        uint64_t nsrc = sk_->hom_count(a0_, f.src);
        uint64_t ntgt = sk_->hom_count(a0_, f.tgt);
        if (nsrc * ntgt > (1ull << 26))
            throw GuardError("representable action matrix too large to materialize; use the resolution engine");
        FpMatrix m(p(), ntgt, nsrc);
        for (uint64_t i = 0; i < nsrc; ++i)
            m.set(sk_->index_of(sk_->compose(f, sk_->morphism_at(a0_, f.src, i))), i, 1);
        return m;
    }

private:
    CatObject a0_;
};

// Augmentation kernel of F_p[Hom(a0, -)], basis [g] - [0] for g != 0.
class ReducedLinearization final : public Functor {
public:
    ReducedLinearization(SkeletonPtr sk, CatObject a0) : Functor(std::move(sk)), a0_(std::move(a0)) {}
    std::string name() const override { return "Fp~[Hom(" + sk_->object_name(a0_) + ",-)]"; }

protected:
    size_t compute_dim(const CatObject& b) const override { return static_cast<size_t>(sk_->hom_count(a0_, b)) - 1; }
    FpMatrix compute_action(const Mor& f) const override {
        uint64_t nsrc = sk_->hom_count(a0_, f.src);
        FpMatrix m(p(), dim(f.tgt), nsrc - 1);
        for (uint64_t i = 1; i < nsrc; ++i) {
            uint64_t k = sk_->index_of(sk_->compose(f, sk_->morphism_at(a0_, f.src, i)));
            if (k != 0) m.set(k - 1, i - 1, 1);
        }
        return m;
    }

private:
    CatObject a0_;
};

inline std::vector<uint64_t> c_coords(const Skeleton& sk, const Mor& f) {
    std::vector<uint32_t> sa = sk.atoms(f.src), sb = sk.atoms(f.tgt);
    std::vector<uint64_t> out(sa.size() * sb.size());
    for (size_t i = 0; i < sb.size(); ++i)
        for (size_t j = 0; j < sa.size(); ++j) {
            uint64_t mult = sb[i] > sa[j] ? ipow(sk.p(), sb[i] - sa[j]) : 1;
            out[i * sa.size() + j] = static_cast<uint64_t>(f.m[i * sa.size() + j]) / mult;
        }
    return out;
}

// Hom(a0, -) (x) F_p: one basis vector per atom pair.
class AdditiveTensor final : public Functor {
public:
    AdditiveTensor(SkeletonPtr sk, CatObject a0) : Functor(std::move(sk)), a0_(std::move(a0)) {}
    std::string name() const override { return "Hom(" + sk_->object_name(a0_) + ",-)@Fp"; }

protected:
    size_t compute_dim(const CatObject& b) const override {
        return sk_->atoms(a0_).size() * sk_->atoms(b).size();
    }
    FpMatrix compute_action(const Mor& f) const override {
        size_t na = sk_->atoms(a0_).size();
        size_t nsrc = na * sk_->atoms(f.src).size();
        FpMatrix m(p(), dim(f.tgt), nsrc);
        for (size_t e = 0; e < nsrc; ++e) {
            Mor unit = unit_mor(f.src, e);
            std::vector<uint64_t> cc = c_coords(*sk_, sk_->compose(f, unit));
            for (size_t e2 = 0; e2 < cc.size(); ++e2)
                if (uint32_t v = static_cast<uint32_t>(cc[e2] % p())) m.set(e2, e, v);
        }
        return m;
    }

private:
    Mor unit_mor(const CatObject& b, size_t entry) const {
        std::vector<uint32_t> sa = sk_->atoms(a0_), sb = sk_->atoms(b);
        Mor f = sk_->zero_mor(a0_, b);
        size_t i = entry / sa.size(), j = entry % sa.size();
        f.m[entry] = sb[i] > sa[j] ? static_cast<int64_t>(ipow(p(), sb[i] - sa[j])) : 1;
        return f;
    }

    CatObject a0_;
};

// S^d_{(p)} o Hom(a0, -): truncated symmetric power of the hom group.
class GradedHom final : public Functor {
public:
    GradedHom(SkeletonPtr sk, CatObject a0, uint32_t d) : Functor(std::move(sk)), a0_(std::move(a0)), d_(d) {}
    std::string name() const override {
        return "S^" + std::to_string(d_) + ".Hom(" + sk_->object_name(a0_) + ",-)";
    }

protected:
    size_t compute_dim(const CatObject& b) const override {
        return monomial_dim(p(), sk_->hom_caps(a0_, b), d_);
    }
    FpMatrix compute_action(const Mor& f) const override {
        std::vector<uint64_t> caps_src = sk_->hom_caps(a0_, f.src);
        std::vector<uint64_t> caps_tgt = sk_->hom_caps(a0_, f.tgt);
        MonomialBasis bs = monomial_basis(p(), caps_src, d_);
        MonomialBasis bt = monomial_basis(p(), caps_tgt, d_);
        auto tgt_index = bt.index_map();
        // image of each source variable as a linear form over target variables
        size_t nv_src = caps_src.size(), nv_tgt = caps_tgt.size();
        std::vector<std::vector<uint32_t>> lin(nv_src, std::vector<uint32_t>(nv_tgt, 0));
        std::vector<uint32_t> sa = sk_->atoms(a0_), sb = sk_->atoms(f.src);
        for (size_t e = 0; e < nv_src; ++e) {
            Mor unit = sk_->zero_mor(a0_, f.src);
            size_t i = e / sa.size(), j = e % sa.size();
            unit.m[e] = sb[i] > sa[j] ? static_cast<int64_t>(ipow(p(), sb[i] - sa[j])) : 1;
            std::vector<uint64_t> cc = c_coords(*sk_, sk_->compose(f, unit));
            for (size_t e2 = 0; e2 < nv_tgt; ++e2) lin[e][e2] = static_cast<uint32_t>(cc[e2] % p());
        }
        FpMatrix m(p(), bt.dim(), bs.dim());
        for (size_t c = 0; c < bs.dim(); ++c) {
            // multiply out prod_e L_e^{beta_e} in the truncated algebra
            std::map<std::vector<uint32_t>, uint32_t> poly;
            poly[std::vector<uint32_t>(nv_tgt, 0)] = 1;
            const std::vector<uint32_t>& beta = bs.exps[c];
            for (size_t e = 0; e < nv_src; ++e)
                for (uint32_t rep = 0; rep < beta[e]; ++rep) {
                    std::map<std::vector<uint32_t>, uint32_t> next;
                    for (const auto& [mono, coef] : poly)
                        for (size_t e2 = 0; e2 < nv_tgt; ++e2) {
                            if (!lin[e][e2]) continue;
                            std::vector<uint32_t> m2 = mono;
                            m2[e2] += 1;
                            if (caps_tgt[e2] != 0 && m2[e2] >= caps_tgt[e2]) continue;
                            uint32_t& slot = next[m2];
                            slot = (slot + coef * lin[e][e2]) % p();
                        }
                    poly = std::move(next);
                }
            for (const auto& [mono, coef] : poly) {
                if (!coef) continue;
                m.set(tgt_index.at(mono), c, coef);
            }
        }
        return m;
    }

private:
    CatObject a0_;
    uint32_t d_;
};

// Lambda^d(Hom(a0, -)) (x) F_p: wedge of the hom group, basis = d-subsets of
// atom-pair entries, action by d x d minors of the c-coordinate matrix mod p.
class WedgeHom final : public Functor {
public:
    WedgeHom(SkeletonPtr sk, CatObject a0, uint32_t d) : Functor(std::move(sk)), a0_(std::move(a0)), d_(d) {}
    std::string name() const override {
        return "L^" + std::to_string(d_) + ".Hom(" + sk_->object_name(a0_) + ",-)";
    }

protected:
    size_t compute_dim(const CatObject& b) const override {
        size_t nv = sk_->hom_caps(a0_, b).size();
        return wedge_count(nv, d_);
    }
    FpMatrix compute_action(const Mor& f) const override {
        size_t nv_src = sk_->hom_caps(a0_, f.src).size();
        size_t nv_tgt = sk_->hom_caps(a0_, f.tgt).size();
        std::vector<uint32_t> sa = sk_->atoms(a0_), sb = sk_->atoms(f.src);
        // c-coordinate matrix of postcomposition, integer entries
        std::vector<std::vector<int64_t>> cmat(nv_tgt, std::vector<int64_t>(nv_src, 0));
        for (size_t e = 0; e < nv_src; ++e) {
            Mor unit = sk_->zero_mor(a0_, f.src);
            size_t i = e / sa.size(), j = e % sa.size();
            unit.m[e] = sb[i] > sa[j] ? static_cast<int64_t>(ipow(p(), sb[i] - sa[j])) : 1;
            std::vector<uint64_t> cc = c_coords(*sk_, sk_->compose(f, unit));
            for (size_t e2 = 0; e2 < nv_tgt; ++e2) cmat[e2][e] = static_cast<int64_t>(cc[e2]);
        }
        auto subs_src = subsets(nv_src, d_);
        auto subs_tgt = subsets(nv_tgt, d_);
        FpMatrix m(p(), subs_tgt.size(), subs_src.size());
        for (size_t c = 0; c < subs_src.size(); ++c)
            for (size_t r = 0; r < subs_tgt.size(); ++r) {
                int64_t det = minor_det(cmat, subs_tgt[r], subs_src[c]);
                uint32_t v = static_cast<uint32_t>(((det % p()) + p()) % p());
                if (v) m.set(r, c, v);
            }
        return m;
    }

private:
    static size_t wedge_count(size_t n, uint32_t d) {
        if (d > n) return 0;
        size_t r = 1;
        for (uint32_t i = 0; i < d; ++i) r = r * (n - i) / (i + 1);
        return r;
    }
    static std::vector<std::vector<size_t>> subsets(size_t n, uint32_t d) {
        std::vector<std::vector<size_t>> out;
        if (d > n) return out;
        std::vector<size_t> cur(d);
        for (uint32_t k = 0; k < d; ++k) cur[k] = k;
        while (true) {
            out.push_back(cur);
            if (d == 0) break;
            int k = (int)d - 1;
            while (k >= 0 && cur[k] == n - d + k) --k;
            if (k < 0) break;
            ++cur[k];
            for (uint32_t l = k + 1; l < d; ++l) cur[l] = cur[l - 1] + 1;
        }
        return out;
    }
    int64_t minor_det(const std::vector<std::vector<int64_t>>& m, const std::vector<size_t>& rows,
                      const std::vector<size_t>& cols) const {
        size_t k = rows.size();
        if (k == 0) return 1;
        // Laplace expansion; k is tiny (the polynomial degree)
        if (k == 1) return m[rows[0]][cols[0]];
        int64_t det = 0;
        for (size_t i = 0; i < k; ++i) {
            std::vector<size_t> r2;
            for (size_t t = 0; t < k; ++t)
                if (t != i) r2.push_back(rows[t]);
            std::vector<size_t> c2(cols.begin() + 1, cols.end());
            int64_t sub = minor_det(m, r2, c2);
            int64_t term = ((m[rows[i]][cols[0]] % p()) * (sub % p())) % p();
            det += (i % 2 == 0) ? term : -term;
        }
        return det;
    }

    CatObject a0_;
    uint32_t d_;
};

// Ext^1_Z(-, Z/p) o Hom(-, a0), realized through the finite-level duality
// Ext^1_Z(W, Z/p) = Hom_Z(Z/p, W)^dual: the value at b is the dual of the
// p-torsion subgroup of Hom(b, a0), which the transpose anti-equivalence
// identifies with the p-torsion of Hom(a0, b).  One basis vector per atom
// pair; the action re-expresses torsion generators after composition.
class TorsionExtHom final : public Functor {
public:
    TorsionExtHom(SkeletonPtr sk, CatObject a0) : Functor(std::move(sk)), a0_(std::move(a0)) {}
    std::string name() const override { return "Ext1Z(-,Z/p).Hom(-," + sk_->object_name(a0_) + ")"; }

protected:
    size_t compute_dim(const CatObject& b) const override {
        return sk_->atoms(a0_).size() * sk_->atoms(b).size();
    }
    FpMatrix compute_action(const Mor& f) const override {
        uint32_t p = this->p();
        // postcomposition by transpose(f): torsion of Hom(a0, tgt f) into
        // torsion of Hom(a0, src f); the functor action is its transpose
        Mor g = sk_->transpose(f);  // f.tgt -> f.src
        std::vector<uint32_t> sa = sk_->atoms(a0_);
        std::vector<uint32_t> sc = sk_->atoms(f.tgt), sb = sk_->atoms(f.src);
        size_t nc = sa.size() * sc.size(), nb = sa.size() * sb.size();
        FpMatrix tmat(p, nb, nc);  // torsion-coordinates of w |-> g o w
        for (size_t ic = 0; ic < sc.size(); ++ic)
            for (size_t j = 0; j < sa.size(); ++j) {
                // the p-torsion generator of entry (ic, j) has y-value p^{rho_c - 1}
                int64_t y_tau = static_cast<int64_t>(ipow(p, sc[ic] - 1));
                for (size_t ib = 0; ib < sb.size(); ++ib) {
                    int64_t mod_b = static_cast<int64_t>(ipow(p, sb[ib]));
                    int64_t y = (g.m[ib * sc.size() + ic] % mod_b) * (y_tau % mod_b) % mod_b;
                    if (!y) continue;
                    // torsion elements are divisible by the target generator value
                    int64_t coeff = (y / static_cast<int64_t>(ipow(p, sb[ib] - 1))) % p;
                    if (coeff) tmat.set(ib * sa.size() + j, ic * sa.size() + j, static_cast<uint32_t>(coeff));
                }
            }
        return tmat.transposed();
    }

private:
    CatObject a0_;
};

// --- combinators ------------------------------------------------------------

class DualFunctor final : public Functor {
public:
    DualFunctor(SkeletonPtr sk, FunctorPtr f) : Functor(std::move(sk)), f_(std::move(f)) {}
    std::string name() const override { return "dual(" + f_->name() + ")"; }

protected:
    size_t compute_dim(const CatObject& a) const override { return f_->dim(a); }
    FpMatrix compute_action(const Mor& g) const override {
        return f_->action(sk_->transpose(g)).transposed();
    }

private:
    FunctorPtr f_;
};

class TensorFunctor final : public Functor {
public:
    TensorFunctor(SkeletonPtr sk, FunctorPtr f, FunctorPtr g) : Functor(std::move(sk)), f_(std::move(f)), g_(std::move(g)) {}
    std::string name() const override { return "(" + f_->name() + ")*(" + g_->name() + ")"; }

protected:
    size_t compute_dim(const CatObject& a) const override { return f_->dim(a) * g_->dim(a); }
    FpMatrix compute_action(const Mor& h) const override { return f_->action(h).kron(g_->action(h)); }

private:
    FunctorPtr f_, g_;
};

class DirectSumFunctor final : public Functor {
public:
    DirectSumFunctor(SkeletonPtr sk, FunctorPtr f, FunctorPtr g) : Functor(std::move(sk)), f_(std::move(f)), g_(std::move(g)) {}
    std::string name() const override { return "(" + f_->name() + ")+(" + g_->name() + ")"; }

protected:
    size_t compute_dim(const CatObject& a) const override { return f_->dim(a) + g_->dim(a); }
    FpMatrix compute_action(const Mor& h) const override {
        FpMatrix a = f_->action(h), b = g_->action(h);
        FpMatrix m(p(), a.rows() + b.rows(), a.cols() + b.cols());
        for (size_t r = 0; r < a.rows(); ++r)
            for (size_t c = 0; c < a.cols(); ++c)
                if (uint32_t v = a.at(r, c)) m.set(r, c, v);
        for (size_t r = 0; r < b.rows(); ++r)
            for (size_t c = 0; c < b.cols(); ++c)
                if (uint32_t v = b.at(r, c)) m.set(a.rows() + r, a.cols() + c, v);
        return m;
    }

private:
    FunctorPtr f_, g_;
};

// Quotient coordinates for a subspace given by column basis: proj o sect = id.
struct QuotientData {
    FpMatrix proj;  // q x n
    FpMatrix sect;  // n x q
};

inline QuotientData quotient_data(const FpMatrix& subbasis, uint32_t p, size_t n) {
    FpMatrix::Echelon e = subbasis.transposed().echelon();
    std::vector<size_t> pivots = e.pivot_cols;
    std::vector<bool> is_pivot(n, false);
    for (size_t c : pivots) is_pivot[c] = true;
    std::vector<size_t> rest;
    for (size_t c = 0; c < n; ++c)
        if (!is_pivot[c]) rest.push_back(c);
    size_t q = rest.size();
    QuotientData qd{FpMatrix(p, q, n), FpMatrix(p, n, q)};
    // reduction: x' = x - sum_i x[P_i] r_i, then select non-pivot coordinates
    for (size_t j = 0; j < q; ++j) {
        qd.proj.set(j, rest[j], 1);
        qd.sect.set(rest[j], j, 1);
    }
    // proj(x)_j = x[rest_j] - sum_i r_i[rest_j] * x[P_i]
    for (size_t i = 0; i < pivots.size(); ++i)
        for (size_t j = 0; j < q; ++j) {
            uint32_t v = e.rref.at(i, rest[j]);
            if (v) qd.proj.set(j, pivots[i], (p - v) % p);
        }
    return qd;
}

// Subfunctor with a per-object column basis; the basis family must be
// action-invariant, which the coordinate solve enforces at evaluation time.
class SubFunctor final : public Functor {
public:
    SubFunctor(SkeletonPtr sk, FunctorPtr base, std::function<FpMatrix(const CatObject&)> basis, std::string label)
        : Functor(std::move(sk)), base_(std::move(base)), basis_(std::move(basis)), label_(std::move(label)) {}
    std::string name() const override { return label_ + "(" + base_->name() + ")"; }

    FpMatrix basis_at(const CatObject& a) const {
        std::string k = obj_key(a);
        std::lock_guard<std::mutex> lock(bmu_);
        auto it = bases_.find(k);
        if (it != bases_.end()) return it->second;
        FpMatrix b = basis_(a);
        bases_[k] = b;
        return b;
    }

    FunctorPtr base() const { return base_; }

protected:
    size_t compute_dim(const CatObject& a) const override { return basis_at(a).cols(); }
    FpMatrix compute_action(const Mor& f) const override {
        FpMatrix img = base_->action(f) * basis_at(f.src);
        auto sol = basis_at(f.tgt).solve(img);
        if (!sol) throw std::logic_error("subfunctor basis not action-invariant in " + name());
        return *sol;
    }

private:
    FunctorPtr base_;
    std::function<FpMatrix(const CatObject&)> basis_;
    std::string label_;
    mutable std::mutex bmu_;
    mutable std::unordered_map<std::string, FpMatrix> bases_;
};

// Quotient of base by an action-invariant family of subspaces.
class QuotientFunctor final : public Functor {
public:
    QuotientFunctor(SkeletonPtr sk, FunctorPtr base, std::function<FpMatrix(const CatObject&)> sub, std::string label)
        : Functor(std::move(sk)), base_(std::move(base)), sub_(std::move(sub)), label_(std::move(label)) {}
    std::string name() const override { return label_ + "(" + base_->name() + ")"; }

    const QuotientData& data_at(const CatObject& a) const {
        std::string k = obj_key(a);
        std::lock_guard<std::mutex> lock(qmu_);
        auto it = data_.find(k);
        if (it != data_.end()) return it->second;
        FpMatrix sb = sub_(a);
        data_[k] = quotient_data(sb, p(), base_->dim(a));
        subs_[k] = sb;
        return data_.at(k);
    }

    FpMatrix sub_basis_at(const CatObject& a) const {
        data_at(a);
        std::lock_guard<std::mutex> lock(qmu_);
        return subs_.at(obj_key(a));
    }

    FunctorPtr base() const { return base_; }

protected:
    size_t compute_dim(const CatObject& a) const override { return data_at(a).proj.rows(); }
    FpMatrix compute_action(const Mor& f) const override {
        const QuotientData& s = data_at(f.src);
        const QuotientData& t = data_at(f.tgt);
        FpMatrix full = base_->action(f);
        // well-definedness: the subspace family must be mapped into itself
        FpMatrix img_sub = t.proj * (full * sub_basis_at(f.src));
        if (!img_sub.is_zero()) throw std::logic_error("quotient subspace not action-invariant in " + name());
        return t.proj * (full * s.sect);
    }

private:
    FunctorPtr base_;
    std::function<FpMatrix(const CatObject&)> sub_;
    std::string label_;
    mutable std::mutex qmu_;
    mutable std::unordered_map<std::string, QuotientData> data_;
    mutable std::unordered_map<std::string, FpMatrix> subs_;
};

// --- natural transformations ------------------------------------------------

struct NatTransform {
    FunctorPtr source, target;
    std::function<FpMatrix(const CatObject&)> comp;
    std::string label;

    FpMatrix at(const CatObject& a) const {
        FpMatrix m = comp(a);
        if (m.rows() != target->dim(a) || m.cols() != source->dim(a))
            throw std::logic_error("natural transformation component shape mismatch: " + label);
        return m;
    }

    // check G(f) eta_a == eta_b F(f) on a morphism family
    bool natural_on(const std::vector<Mor>& mors) const {
        for (const Mor& f : mors) {
            FpMatrix lhs = target->action(f) * at(f.src);
            FpMatrix rhs = at(f.tgt) * source->action(f);
            if (!(lhs == rhs)) return false;
        }
        return true;
    }
};

inline FunctorPtr kernel_of(const NatTransform& eta, const std::string& label = "ker") {
    NatTransform copy = eta;
    return std::make_shared<SubFunctor>(eta.source->skel_ptr(), eta.source,
                                        [copy](const CatObject& a) { return copy.at(a).kernel_basis(); }, label);
}

inline FunctorPtr cokernel_of(const NatTransform& eta, const std::string& label = "coker") {
    NatTransform copy = eta;
    return std::make_shared<QuotientFunctor>(eta.target->skel_ptr(), eta.target,
                                             [copy](const CatObject& a) { return copy.at(a).column_space_basis(); },
                                             label);
}

// --- convenience constructors -----------------------------------------------

inline FunctorPtr constant_functor(SkeletonPtr sk, size_t d = 1) { return std::make_shared<ConstantFunctor>(sk, d); }
inline FunctorPtr zero_functor(SkeletonPtr sk) { return std::make_shared<ZeroFunctor>(sk); }
inline FunctorPtr hom_linearization(SkeletonPtr sk, CatObject a) {
    return std::make_shared<HomLinearization>(sk, std::move(a));
}
inline FunctorPtr reduced_linearization(SkeletonPtr sk, CatObject a) {
    return std::make_shared<ReducedLinearization>(sk, std::move(a));
}
inline FunctorPtr additive_tensor(SkeletonPtr sk, CatObject a) {
    return std::make_shared<AdditiveTensor>(sk, std::move(a));
}
inline FunctorPtr graded_hom(SkeletonPtr sk, CatObject a, uint32_t d) {
    return std::make_shared<GradedHom>(sk, std::move(a), d);
}
inline FunctorPtr wedge_hom(SkeletonPtr sk, CatObject a, uint32_t d) {
    return std::make_shared<WedgeHom>(sk, std::move(a), d);
}
inline FunctorPtr torsion_ext_hom(SkeletonPtr sk, CatObject a) {
    return std::make_shared<TorsionExtHom>(sk, std::move(a));
}
inline FunctorPtr dual_of(FunctorPtr f) { return std::make_shared<DualFunctor>(f->skel_ptr(), std::move(f)); }
inline FunctorPtr tensor_product(FunctorPtr f, FunctorPtr g) {
    return std::make_shared<TensorFunctor>(f->skel_ptr(), std::move(f), std::move(g));
}
inline FunctorPtr direct_sum(FunctorPtr f, FunctorPtr g) {
    return std::make_shared<DirectSumFunctor>(f->skel_ptr(), std::move(f), std::move(g));
}

// F_p[Hom(a0,-)] / I^{d+1}: the polynomial truncation of the Yoneda
// projective, realized through the augmentation filtration of the hom group
// (exact at every object, no tuple guard involved).
inline FunctorPtr qd_linearization(SkeletonPtr sk, CatObject a0, uint32_t d) {
    FunctorPtr base = hom_linearization(sk, a0);
    SkeletonPtr skc = sk;
    CatObject a0c = a0;
    auto sub = [skc, a0c, d](const CatObject& b) {
        std::vector<uint64_t> caps = skc->hom_caps(a0c, b);
        std::vector<uint32_t> exps;
        for (uint64_t c : caps) {
            uint32_t e = 0;
            while (c > 1) { c /= skc->p(); ++e; }
            exps.push_back(e);
        }
        GroupAlgebra ga(skc->p(), exps);
        return ga.augmentation_power(d + 1).basis;
    };
    return std::make_shared<QuotientFunctor>(sk, base, sub, "q" + std::to_string(d));
}

// --- tensor powers and symmetric / divided powers ----------------------------

inline FunctorPtr tensor_power(FunctorPtr f, uint32_t k) {
    if (k == 0) return constant_functor(f->skel_ptr(), 1);
    FunctorPtr t = f;
    for (uint32_t i = 1; i < k; ++i) t = tensor_product(t, f);
    return t;
}

// permutation matrix of sigma acting on the basis of F(a)^{(x)k}: output slot
// t carries input factor sigma^{-1}(t)
inline FpMatrix perm_matrix_on_power(uint32_t p, size_t d, const std::vector<uint32_t>& sigma_inv) {
    size_t k = sigma_inv.size();
    size_t n = 1;
    for (size_t i = 0; i < k; ++i) n *= d;
    FpMatrix m(p, n, n);
    std::vector<size_t> idx(k, 0);
    for (size_t col = 0; col < n; ++col) {
        // decode col as (i_0, ..., i_{k-1}), first factor major
        size_t rem = col;
        for (size_t t = k; t-- > 0;) {
            idx[t] = rem % d;
            rem /= d;
        }
        size_t row = 0;
        for (size_t t = 0; t < k; ++t) row = row * d + idx[sigma_inv[t]];
        m.set(row, col, 1);
    }
    return m;
}

inline std::vector<std::vector<uint32_t>> all_permutations(uint32_t k) {
    std::vector<uint32_t> base(k);
    for (uint32_t i = 0; i < k; ++i) base[i] = i;
    std::vector<std::vector<uint32_t>> out;
    do out.push_back(base);
    while (std::next_permutation(base.begin(), base.end()));
    return out;
}

// Full symmetric power S^k(F) = F^{(x)k} / span(x - sigma x).
inline FunctorPtr sym_power(FunctorPtr f, uint32_t k) {
    FunctorPtr t = tensor_power(f, k);
    SkeletonPtr sk = f->skel_ptr();
    FunctorPtr fc = f;
    auto sub = [fc, k](const CatObject& a) {
        uint32_t p = fc->p();
        size_t d = fc->dim(a);
        size_t n = 1;
        for (uint32_t i = 0; i < k; ++i) n *= d;
        FpSpan span(p, n);
        for (uint32_t s = 0; s + 1 < k; ++s) {
            std::vector<uint32_t> sig(k);
            for (uint32_t i = 0; i < k; ++i) sig[i] = i;
            std::swap(sig[s], sig[s + 1]);
            FpMatrix pm = perm_matrix_on_power(p, d, sig);
            FpMatrix diff = FpMatrix::identity(p, n) - pm;
            for (size_t c = 0; c < n; ++c) span.insert(diff.column(c));
        }
        return span.basis_matrix();
    };
    return std::make_shared<QuotientFunctor>(sk, t, sub, "sym" + std::to_string(k));
}

// Divided power Gamma^k(F) = (F^{(x)k})^{Sigma_k} (invariants).
inline FunctorPtr gamma_power(FunctorPtr f, uint32_t k) {
    FunctorPtr t = tensor_power(f, k);
    SkeletonPtr sk = f->skel_ptr();
    FunctorPtr fc = f;
    auto basis = [fc, k](const CatObject& a) {
        uint32_t p = fc->p();
        size_t d = fc->dim(a);
        size_t n = 1;
        for (uint32_t i = 0; i < k; ++i) n *= d;
        FpMatrix stacked(p, 0, n);
        for (uint32_t s = 0; s + 1 < k; ++s) {
            std::vector<uint32_t> sig(k);
            for (uint32_t i = 0; i < k; ++i) sig[i] = i;
            std::swap(sig[s], sig[s + 1]);
            FpMatrix diff = FpMatrix::identity(p, n) - perm_matrix_on_power(p, d, sig);
            stacked = FpMatrix::vcat(stacked, diff);
        }
        return stacked.kernel_basis();
    };
    return std::make_shared<SubFunctor>(sk, t, basis, "gamma" + std::to_string(k));
}

// --- the Frobenius / norm / Verschiebung four-term sequence ------------------

struct FourTermSequence {
    FunctorPtr left, s_pow, g_pow, right;  // I -> S^p -> Gamma^p -> I
    NatTransform frobenius, norm, verschiebung;
};

// Over the skeleton generated by Z/p: the p-power map I -> S^p, the norm
// S^p -> Gamma^p and the Verschiebung Gamma^p -> I.  Requires K >= p so that
// the degree-p functors are faithfully modeled.
inline FourTermSequence frobenius_norm_verschiebung(SkeletonPtr sk) {
    uint32_t p = sk->p();
    if (sk->num_generators() != 1 || !(sk->spec().generators[0] == AbGroup::cyclic(p, 1)))
        throw ConfigError("the classical sequence needs the skeleton generated by Z/p");
    if (sk->K() < p) throw GuardError("K >= p required to model degree-p functors faithfully");
    CatObject v1 = sk->generator_object(0);
    FunctorPtr I = additive_tensor(sk, v1);
    FunctorPtr T = tensor_power(I, p);
    FunctorPtr S = sym_power(I, p);
    FunctorPtr G = gamma_power(I, p);
    auto Sq = std::static_pointer_cast<const QuotientFunctor>(S);
    auto Gs = std::static_pointer_cast<const SubFunctor>(G);

    NatTransform frob{I, S,
                      [Sq, I, p](const CatObject& a) {
                          size_t d = I->dim(a);
                          size_t n = 1;
                          for (uint32_t i = 0; i < p; ++i) n *= d;
                          FpMatrix diag(I->p(), n, d);
                          for (size_t i = 0; i < d; ++i) {
                              size_t idx = 0;
                              for (uint32_t t = 0; t < p; ++t) idx = idx * d + i;
                              diag.set(idx, i, 1);
                          }
                          return Sq->data_at(a).proj * diag;
                      },
                      "frobenius"};

    NatTransform norm{S, G,
                      [Sq, Gs, I, p](const CatObject& a) {
                          uint32_t pp = I->p();
                          size_t d = I->dim(a);
                          size_t n = 1;
                          for (uint32_t i = 0; i < p; ++i) n *= d;
                          FpMatrix N(pp, n, n);
                          for (const auto& sig : all_permutations(p)) {
                              // need sigma^{-1} for the matrix convention
                              std::vector<uint32_t> inv(p);
                              for (uint32_t i = 0; i < p; ++i) inv[sig[i]] = i;
                              N = N + perm_matrix_on_power(pp, d, inv);
                          }
                          FpMatrix img = N * Sq->data_at(a).sect;
                          auto sol = Gs->basis_at(a).solve(img);
                          if (!sol) throw std::logic_error("norm image not invariant");
                          return *sol;
                      },
                      "norm"};

    NatTransform versch{G, I,
                        [Gs, I, p](const CatObject& a) {
                            uint32_t pp = I->p();
                            size_t d = I->dim(a);
                            size_t n = 1;
                            for (uint32_t i = 0; i < p; ++i) n *= d;
                            FpMatrix extract(pp, d, n);
                            for (size_t i = 0; i < d; ++i) {
                                size_t idx = 0;
                                for (uint32_t t = 0; t < p; ++t) idx = idx * d + i;
                                extract.set(i, idx, 1);
                            }
                            return extract * Gs->basis_at(a);
                        },
                        "verschiebung"};

    return FourTermSequence{I, S, G, I, std::move(frob), std::move(norm), std::move(versch)};
}

struct ExactnessReport {
    bool exact = true;
    std::vector<std::string> failures;
};

// exactness of 0 -> A -> B -> C -> D -> 0 at every skeleton object
inline ExactnessReport check_four_term_exactness(const FourTermSequence& seq) {
    ExactnessReport rep;
    const Skeleton& sk = seq.left->skel();
    for (const CatObject& a : sk.objects()) {
        FpMatrix f = seq.frobenius.at(a), n = seq.norm.at(a), v = seq.verschiebung.at(a);
        size_t dimI = seq.left->dim(a), dimS = seq.s_pow->dim(a), dimG = seq.g_pow->dim(a);
        auto fail = [&](const std::string& what) {
            rep.exact = false;
            rep.failures.push_back(what + " at " + sk.object_name(a));
        };
        if (f.rank() != dimI) fail("frobenius not injective");
        if (!(n * f).is_zero()) fail("norm o frobenius != 0");
        if (f.rank() != dimS - n.rank()) fail("ker(norm) != im(frobenius)");
        if (!(v * n).is_zero()) fail("verschiebung o norm != 0");
        if (n.rank() != dimG - v.rank()) fail("ker(versch) != im(norm)");
        if (v.rank() != dimI) fail("verschiebung not surjective");
    }
    return rep;
}

}  // namespace extlab
