#pragma once

// Finite skeletal truncation of a small additive category: objects are formal
// direct sums of chosen generator groups with bounded multiplicities,
// morphisms are block matrices of abelian-group homomorphisms.  An optional
// mod-p^t reduction realizes the quotient category with the same objects and
// hom sets divided by p^t; concretely this replaces every generator by its
// mod-p^t quotient, which yields the same hom groups and compositions.
//
// Morphism entries are stored as "y-values": the image of the canonical
// generator of the source atom Z/p^a in the target atom Z/p^b, i.e. an
// integer divisible by p^{max(b-a,0)} and reduced mod p^b.  Composition is
// then plain integer matrix multiplication with per-row reduction.

#include <atomic>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "extlab/abelian.hpp"
#include "extlab/fp.hpp"
#include "extlab/util.hpp"

namespace extlab {

struct SkeletonSpec {
    uint32_t p = 2;
    std::vector<AbGroup> generators;
    uint32_t max_mult = 1;                 // K
    std::optional<uint32_t> mod_reduction; // t: realize A/p^t
};

using CatObject = std::vector<uint32_t>;  // multiplicity per generator, entries in [0, K]

inline std::string obj_key(const CatObject& a) {
    std::string s;
    for (uint32_t m : a) s += std::to_string(m) + ",";
    return s;
}

struct Mor {
    CatObject src, tgt;
    std::vector<int64_t> m;  // row-major, rows = atoms(tgt), cols = atoms(src)

    bool operator==(const Mor& o) const { return src == o.src && tgt == o.tgt && m == o.m; }
    bool operator<(const Mor& o) const {
        if (src != o.src) return src < o.src;
        if (tgt != o.tgt) return tgt < o.tgt;
        return m < o.m;
    }
};

inline std::string mor_key(const Mor& f) {
    std::string s = obj_key(f.src) + "|" + obj_key(f.tgt) + "|";
    for (int64_t v : f.m) s += std::to_string(v) + ",";
    return s;
}

class Skeleton {
public:
    explicit Skeleton(const SkeletonSpec& spec) : spec_(spec) {
        check_prime_modulus(spec.p);
        if (spec.generators.empty()) throw ConfigError("skeleton needs at least one generator");
        if (spec.max_mult < 1) throw ConfigError("max multiplicity K must be >= 1");
        if (spec.mod_reduction && *spec.mod_reduction < 1) throw ConfigError("mod reduction t must be >= 1");
        for (const AbGroup& g : spec.generators) {
            if (g.p != spec.p) throw ConfigError("generator prime mismatch");
            if (g.is_zero()) throw ConfigError("zero generator");
            if (g.free_rank > 0 && !spec.mod_reduction)
                throw ConfigError("free generators give infinite hom sets; set a mod reduction");
            std::vector<uint32_t> atoms;
            uint32_t t = spec.mod_reduction.value_or(0);
            for (uint32_t i = 0; i < g.free_rank; ++i) atoms.push_back(t);
            for (uint32_t r : g.torsion) atoms.push_back(t ? std::min(r, t) : r);
            gen_atoms_.push_back(std::move(atoms));
        }
        build_objects();
    }

    const SkeletonSpec& spec() const { return spec_; }
    uint32_t p() const { return spec_.p; }
    uint32_t K() const { return spec_.max_mult; }
    size_t num_generators() const { return spec_.generators.size(); }

    // All objects, ordered by (total multiplicity, lexicographic).
    const std::vector<CatObject>& objects() const { return objects_; }

    CatObject zero_object() const { return CatObject(num_generators(), 0); }
    CatObject generator_object(size_t g) const {
        CatObject a(num_generators(), 0);
        a[g] = 1;
        return a;
    }

    bool in_skeleton(const CatObject& a) const {
        if (a.size() != num_generators()) return false;
        for (uint32_t m : a)
            if (m > K()) return false;
        return true;
    }

    uint32_t total_mult(const CatObject& a) const {
        uint32_t t = 0;
        for (uint32_t m : a) t += m;
        return t;
    }

    // Atom exponents of an object: per generator, per copy, the generator's
    // cyclic atoms in order.
    std::vector<uint32_t> atoms(const CatObject& a) const {
        std::vector<uint32_t> out;
        for (size_t g = 0; g < a.size(); ++g)
            for (uint32_t c = 0; c < a[g]; ++c) out.insert(out.end(), gen_atoms_[g].begin(), gen_atoms_[g].end());
        return out;
    }

    // Hom(a, b) as an abelian group: one cyclic summand Z/p^{min} per atom
    // pair, enumerated row-major (target atom major, source atom minor).
    std::vector<uint64_t> hom_caps(const CatObject& a, const CatObject& b) const {
        std::vector<uint32_t> sa = atoms(a), sb = atoms(b);
        std::vector<uint64_t> caps;
        caps.reserve(sa.size() * sb.size());
        for (uint32_t eb : sb)
            for (uint32_t ea : sa) caps.push_back(ipow(p(), std::min(ea, eb)));
        return caps;
    }

    AbGroup hom_group_of(const CatObject& a, const CatObject& b) const {
        std::vector<uint32_t> exps;
        std::vector<uint32_t> sa = atoms(a), sb = atoms(b);
        for (uint32_t eb : sb)
            for (uint32_t ea : sa) exps.push_back(std::min(ea, eb));
        std::sort(exps.begin(), exps.end());
        return AbGroup(p(), 0, std::move(exps));
    }

    uint64_t hom_count(const CatObject& a, const CatObject& b) const {
        uint64_t n = 1;
        for (uint64_t c : hom_caps(a, b)) {
            if (n > (1ull << 62) / c) throw GuardError("hom set too large to enumerate");
            n *= c;
        }
        return n;
    }

    // Morphism from its index in the element enumeration of Hom(a, b): mixed
    // radix, first entry least significant.  Entry (i, j) holds y = c *
    // p^{max(rho_i - rho_j, 0)} where c < p^{min(rho_i, rho_j)}.
    Mor morphism_at(const CatObject& a, const CatObject& b, uint64_t idx) const {
        std::vector<uint32_t> sa = atoms(a), sb = atoms(b);
        Mor f{a, b, std::vector<int64_t>(sa.size() * sb.size(), 0)};
        for (size_t i = 0; i < sb.size(); ++i)
            for (size_t j = 0; j < sa.size(); ++j) {
                uint64_t cap = ipow(p(), std::min(sa[j], sb[i]));
                uint64_t c = idx % cap;
                idx /= cap;
                uint64_t mult = sb[i] > sa[j] ? ipow(p(), sb[i] - sa[j]) : 1;
                f.m[i * sa.size() + j] = static_cast<int64_t>(c * mult);
            }
        return f;
    }

    uint64_t index_of(const Mor& f) const {
        std::vector<uint32_t> sa = atoms(f.src), sb = atoms(f.tgt);
        uint64_t idx = 0, place = 1;
        for (size_t i = 0; i < sb.size(); ++i)
            for (size_t j = 0; j < sa.size(); ++j) {
                uint64_t cap = ipow(p(), std::min(sa[j], sb[i]));
                uint64_t mult = sb[i] > sa[j] ? ipow(p(), sb[i] - sa[j]) : 1;
                uint64_t c = static_cast<uint64_t>(f.m[i * sa.size() + j]) / mult;
                idx += c * place;
                place *= cap;
            }
        return idx;
    }

    Mor identity(const CatObject& a) const {
        std::vector<uint32_t> sa = atoms(a);
        Mor f{a, a, std::vector<int64_t>(sa.size() * sa.size(), 0)};
        for (size_t i = 0; i < sa.size(); ++i) f.m[i * sa.size() + i] = 1;
        return f;
    }

    Mor zero_mor(const CatObject& a, const CatObject& b) const {
        return Mor{a, b, std::vector<int64_t>(atoms(a).size() * atoms(b).size(), 0)};
    }

    void validate(const Mor& f) const {
        std::vector<uint32_t> sa = atoms(f.src), sb = atoms(f.tgt);
        if (f.m.size() != sa.size() * sb.size()) throw std::invalid_argument("morphism matrix size mismatch");
        for (size_t i = 0; i < sb.size(); ++i)
            for (size_t j = 0; j < sa.size(); ++j) {
                int64_t v = f.m[i * sa.size() + j];
                int64_t mod = static_cast<int64_t>(ipow(p(), sb[i]));
                if (v < 0 || v >= mod) throw std::invalid_argument("morphism entry out of range");
                if (sb[i] > sa[j] && v % static_cast<int64_t>(ipow(p(), sb[i] - sa[j])) != 0)
                    throw std::invalid_argument("morphism entry violates divisibility");
            }
    }

    // g o f for f: a -> b, g: b -> c.
    Mor compose(const Mor& g, const Mor& f) const {
        if (g.src != f.tgt) throw std::invalid_argument("composition mismatch");
        std::vector<uint32_t> sa = atoms(f.src), sb = atoms(f.tgt), sc = atoms(g.tgt);
        Mor h{f.src, g.tgt, std::vector<int64_t>(sa.size() * sc.size(), 0)};
        for (size_t i = 0; i < sc.size(); ++i) {
            int64_t mod = static_cast<int64_t>(ipow(p(), sc[i]));
            for (size_t k = 0; k < sb.size(); ++k) {
                int64_t gv = g.m[i * sb.size() + k];
                if (!gv) continue;
                for (size_t j = 0; j < sa.size(); ++j) {
                    int64_t fv = f.m[k * sa.size() + j];
                    if (!fv) continue;
                    int64_t& out = h.m[i * sa.size() + j];
                    out = (out + (gv % mod) * (fv % mod)) % mod;
                }
            }
        }
        return h;
    }

    Mor add(const Mor& f, const Mor& g) const {
        if (f.src != g.src || f.tgt != g.tgt) throw std::invalid_argument("morphism addition mismatch");
        std::vector<uint32_t> sa = atoms(f.src), sb = atoms(f.tgt);
        Mor h = f;
        for (size_t i = 0; i < sb.size(); ++i) {
            int64_t mod = static_cast<int64_t>(ipow(p(), sb[i]));
            for (size_t j = 0; j < sa.size(); ++j) {
                int64_t& v = h.m[i * sa.size() + j];
                v = (v + g.m[i * sa.size() + j]) % mod;
            }
        }
        return h;
    }

    // Pontryagin-style transpose: an anti-equivalence fixing objects.  The
    // c-coordinate of each entry is preserved while the canonical p-power
    // factor flips sides.
    Mor transpose(const Mor& f) const {
        std::vector<uint32_t> sa = atoms(f.src), sb = atoms(f.tgt);
        Mor t{f.tgt, f.src, std::vector<int64_t>(sa.size() * sb.size(), 0)};
        for (size_t i = 0; i < sb.size(); ++i)
            for (size_t j = 0; j < sa.size(); ++j) {
                int64_t v = f.m[i * sa.size() + j];
                uint64_t down = sb[i] > sa[j] ? ipow(p(), sb[i] - sa[j]) : 1;
                uint64_t up = sa[j] > sb[i] ? ipow(p(), sa[j] - sb[i]) : 1;
                t.m[j * sb.size() + i] = static_cast<int64_t>((static_cast<uint64_t>(v) / down) * up);
            }
        return t;
    }

    // --- direct sums -------------------------------------------------------
    CatObject obj_sum(const std::vector<CatObject>& parts) const {
        CatObject s(num_generators(), 0);
        for (const CatObject& a : parts)
            for (size_t g = 0; g < a.size(); ++g) s[g] += a[g];
        if (!in_skeleton(s)) throw GuardError("direct sum leaves the skeleton (K = " + std::to_string(K()) + ")");
        return s;
    }

    CatObject obj_power(const CatObject& a, uint32_t n) const {
        return obj_sum(std::vector<CatObject>(n, a));
    }

    // For each part, the indices its atoms occupy inside the sum.  Copies of
    // a generator are grouped by part order.
    std::vector<std::vector<size_t>> sum_layout(const std::vector<CatObject>& parts) const {
        CatObject s(num_generators(), 0);
        for (const CatObject& a : parts)
            for (size_t g = 0; g < a.size(); ++g) s[g] += a[g];
        // start index (in the sum's atom list) of generator g's copy c
        std::vector<size_t> gen_block_start(num_generators() + 1, 0);
        {
            size_t off = 0;
            for (size_t g = 0; g < num_generators(); ++g) {
                gen_block_start[g] = off;
                off += s[g] * gen_atoms_[g].size();
            }
            gen_block_start[num_generators()] = off;
        }
        std::vector<uint32_t> copies_used(num_generators(), 0);
        std::vector<std::vector<size_t>> layout;
        for (const CatObject& a : parts) {
            std::vector<size_t> slots;
            for (size_t g = 0; g < a.size(); ++g)
                for (uint32_t c = 0; c < a[g]; ++c) {
                    size_t copy = copies_used[g] + c;
                    for (size_t t = 0; t < gen_atoms_[g].size(); ++t)
                        slots.push_back(gen_block_start[g] + copy * gen_atoms_[g].size() + t);
                }
            for (size_t g = 0; g < a.size(); ++g) copies_used[g] += a[g];
            layout.push_back(std::move(slots));
        }
        return layout;
    }

    Mor inclusion(const std::vector<CatObject>& parts, size_t i) const {
        CatObject s = obj_sum(parts);
        auto layout = sum_layout(parts);
        std::vector<uint32_t> spart = atoms(parts[i]);
        Mor f = zero_mor(parts[i], s);
        size_t cols = spart.size();
        for (size_t j = 0; j < cols; ++j) f.m[layout[i][j] * cols + j] = 1;
        return f;
    }

    Mor projection(const std::vector<CatObject>& parts, size_t i) const {
        CatObject s = obj_sum(parts);
        auto layout = sum_layout(parts);
        std::vector<uint32_t> ssum = atoms(s);
        std::vector<uint32_t> spart = atoms(parts[i]);
        Mor f = zero_mor(s, parts[i]);
        for (size_t j = 0; j < spart.size(); ++j) f.m[j * ssum.size() + layout[i][j]] = 1;
        return f;
    }

    // Identity on all parts except part i, which is sent to zero.
    Mor collapse(const std::vector<CatObject>& parts, size_t i) const {
        CatObject s = obj_sum(parts);
        Mor f = identity(s);
        auto layout = sum_layout(parts);
        size_t n = atoms(s).size();
        for (size_t slot : layout[i]) f.m[slot * n + slot] = 0;
        return f;
    }

    Mor diagonal(const CatObject& a, uint32_t n) const {
        std::vector<CatObject> parts(n, a);
        CatObject s = obj_sum(parts);
        auto layout = sum_layout(parts);
        std::vector<uint32_t> sa = atoms(a);
        Mor f = zero_mor(a, s);
        for (uint32_t c = 0; c < n; ++c)
            for (size_t j = 0; j < sa.size(); ++j) f.m[layout[c][j] * sa.size() + j] = 1;
        return f;
    }

    Mor codiagonal(const CatObject& a, uint32_t n) const {
        std::vector<CatObject> parts(n, a);
        CatObject s = obj_sum(parts);
        auto layout = sum_layout(parts);
        std::vector<uint32_t> sa = atoms(a);
        size_t cols = atoms(s).size();
        Mor f = zero_mor(s, a);
        for (uint32_t c = 0; c < n; ++c)
            for (size_t j = 0; j < sa.size(); ++j) f.m[j * cols + layout[c][j]] = 1;
        return f;
    }

    // f(+)g : a(+)a' -> b(+)b' block morphism.
    Mor block_sum(const Mor& f, const Mor& g) const {
        std::vector<CatObject> sp{f.src, g.src}, tp{f.tgt, g.tgt};
        CatObject s = obj_sum(sp), t = obj_sum(tp);
        auto ls = sum_layout(sp), lt = sum_layout(tp);
        std::vector<uint32_t> ssum = atoms(s);
        Mor h = zero_mor(s, t);
        size_t cols = ssum.size();
        auto put = [&](const Mor& part, const std::vector<size_t>& rows, const std::vector<size_t>& colsl) {
            size_t pc = atoms(part.src).size();
            for (size_t i = 0; i < rows.size(); ++i)
                for (size_t j = 0; j < pc; ++j) h.m[rows[i] * cols + colsl[j]] = part.m[i * pc + j];
        };
        put(f, lt[0], ls[0]);
        put(g, lt[1], ls[1]);
        return h;
    }

    // f^{(+)n} : a^n -> b^n.
    Mor block_power(const Mor& f, uint32_t n) const {
        if (n == 0) return zero_mor(zero_object(), zero_object());
        Mor h = f;
        for (uint32_t i = 1; i < n; ++i) h = block_sum(h, f);
        return h;
    }

    // --- generating morphisms ---------------------------------------------
    // A set that generates every morphism of the skeleton under composition
    // alone.  Rigorous when all atoms share one exponent (single cyclic
    // generator, or several of equal reduced exponent): invertibles are
    // products of transvections and diagonal units, and Smith-type reduction
    // over Z/p^rho routes everything else through smaller objects, which stay
    // inside the skeleton.  Mixed atom exponents fall back to the exhaustive
    // morphism list (guarded); compositional generation can genuinely fail
    // inside a truncation there.
    std::vector<Mor> generating_morphisms(uint64_t exhaustive_cap = 1u << 22) const {
        std::vector<uint32_t> all_exps;
        for (const auto& ga : gen_atoms_) all_exps.insert(all_exps.end(), ga.begin(), ga.end());
        bool uniform = std::all_of(all_exps.begin(), all_exps.end(), [&](uint32_t e) { return e == all_exps[0]; });
        std::vector<Mor> out;
        if (!uniform) {
            uint64_t total = 0;
            for (const CatObject& a : objects_)
                for (const CatObject& b : objects_) {
                    total += hom_count(a, b);
                    if (total > exhaustive_cap)
                        throw GuardError("mixed-exponent skeleton: exhaustive morphism set too large");
                }
            for (const CatObject& a : objects_)
                for (const CatObject& b : objects_) {
                    uint64_t n = hom_count(a, b);
                    for (uint64_t i = 0; i < n; ++i) out.push_back(morphism_at(a, b, i));
                }
            return out;
        }
        uint32_t rho = all_exps[0];
        for (const CatObject& a : objects_) {
            size_t n = atoms(a).size();
            if (n == 0) continue;
            // transvections E_{ij}(1)
            for (size_t i = 0; i < n; ++i)
                for (size_t j = 0; j < n; ++j) {
                    if (i == j) continue;
                    Mor f = identity(a);
                    f.m[i * n + j] = 1;
                    out.push_back(f);
                }
            // diagonal unit generators at slot 0 and the p-scaling
            for (uint32_t u : unit_generators(rho)) {
                Mor f = identity(a);
                f.m[0] = u;
                out.push_back(f);
            }
            if (rho > 1) {
                Mor f = identity(a);
                f.m[0] = static_cast<int64_t>(p());
                out.push_back(f);
            }
        }
        // last-copy inclusions and projections
        for (const CatObject& a : objects_) {
            for (size_t g = 0; g < num_generators(); ++g) {
                if (a[g] >= K()) continue;
                CatObject b = a;
                b[g] += 1;
                // a -> b: identify a with the first copies
                auto layout = embed_layout(a, b);
                std::vector<uint32_t> sa = atoms(a), sb = atoms(b);
                Mor inc = zero_mor(a, b);
                for (size_t j = 0; j < sa.size(); ++j) inc.m[layout[j] * sa.size() + j] = 1;
                out.push_back(inc);
                Mor prj = zero_mor(b, a);
                for (size_t j = 0; j < sa.size(); ++j) prj.m[j * sb.size() + layout[j]] = 1;
                out.push_back(prj);
            }
        }
        return out;
    }

    uint32_t num_objects() const { return static_cast<uint32_t>(objects_.size()); }

    std::string object_name(const CatObject& a) const {
        if (total_mult(a) == 0) return "0";
        std::string s;
        for (size_t g = 0; g < a.size(); ++g) {
            if (!a[g]) continue;
            if (!s.empty()) s += "+";
            s += spec_.generators[g].to_string();
            if (a[g] > 1) s += "^" + std::to_string(a[g]);
        }
        return s;
    }

private:
    void build_objects() {
        size_t g = num_generators();
        CatObject cur(g, 0);
        std::vector<CatObject> all;
        while (true) {
            all.push_back(cur);
            size_t i = 0;
            while (i < g && cur[i] == K()) cur[i++] = 0;
            if (i == g) break;
            ++cur[i];
        }
        std::sort(all.begin(), all.end(), [this](const CatObject& a, const CatObject& b) {
            uint32_t ta = total_mult(a), tb = total_mult(b);
            if (ta != tb) return ta < tb;
            return a < b;
        });
        objects_ = std::move(all);
    }

    // atom slots of a inside b when b = a + one extra copy of one generator
    std::vector<size_t> embed_layout(const CatObject& a, const CatObject& b) const {
        std::vector<size_t> slots;
        size_t off_b = 0;
        for (size_t g = 0; g < num_generators(); ++g) {
            size_t atom_sz = gen_atoms_[g].size();
            for (uint32_t c = 0; c < a[g]; ++c)
                for (size_t t = 0; t < atom_sz; ++t) slots.push_back(off_b + c * atom_sz + t);
            off_b += b[g] * atom_sz;
        }
        return slots;
    }

    std::vector<uint32_t> unit_generators(uint32_t rho) const {
        uint64_t mod = ipow(p(), rho);
        std::vector<uint32_t> gens;
        if (p() == 2) {
            if (rho >= 2) gens.push_back(static_cast<uint32_t>(mod - 1));
            if (rho >= 3) gens.push_back(5);
        } else {
            // smallest primitive root mod p^rho (p odd: a primitive root mod p
            // that stays primitive mod p^2 works for all rho)
            for (uint32_t g = 2; g < mod; ++g) {
                uint64_t x = 1;
                uint64_t order = 0;
                uint64_t target = mod / p() * (p() - 1);
                do {
                    x = (x * g) % mod;
                    ++order;
                } while (x != 1 && order <= target);
                if (x == 1 && order == target) {
                    gens.push_back(g);
                    break;
                }
            }
        }
        return gens;
    }

    SkeletonSpec spec_;
    std::vector<std::vector<uint32_t>> gen_atoms_;  // reduced cyclic exponents per generator
    std::vector<CatObject> objects_;
};

inline SkeletonSpec reduce_mod(const SkeletonSpec& spec, uint32_t t) {
    if (t < 1) throw ConfigError("mod reduction t must be >= 1");
    SkeletonSpec out = spec;
    out.mod_reduction = spec.mod_reduction ? std::min(*spec.mod_reduction, t) : t;
    return out;
}

// Entry-wise reduction of a morphism of A onto A/p^t (the canonical functor:
// identity on objects, full on morphisms).
inline Mor reduce_morphism(const Skeleton& from, const Skeleton& to, const Mor& f) {
    std::vector<uint32_t> sa = to.atoms(f.src), sb = to.atoms(f.tgt);
    Mor g{f.src, f.tgt, f.m};
    for (size_t i = 0; i < sb.size(); ++i) {
        int64_t mod = static_cast<int64_t>(ipow(to.p(), sb[i]));
        for (size_t j = 0; j < sa.size(); ++j) g.m[i * sa.size() + j] %= mod;
    }
    (void)from;
    return g;
}

}  // namespace extlab
