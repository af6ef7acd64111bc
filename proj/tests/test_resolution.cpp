#include <catch2/catch_amalgamated.hpp>

#include "extlab/natural.hpp"
#include "extlab/resolution.hpp"

using namespace extlab;

static std::shared_ptr<const Skeleton> make_sk(uint32_t p, const char* gen, uint32_t K) {
    SkeletonSpec spec{p, {AbGroup::parse(p, gen)}, K, std::nullopt};
    return std::make_shared<Skeleton>(spec);
}

TEST_CASE("resolutions are exact complexes of projectives") {
    auto sk = make_sk(2, "Z/2", 2);
    CatObject v1 = sk->generator_object(0);
    for (const FunctorPtr& F : {additive_tensor(sk, v1), constant_functor(sk),
                                tensor_product(additive_tensor(sk, v1), additive_tensor(sk, v1))}) {
        Resolution R(F, ResMode::Full, 0, 3);
        for (const CatObject& b : sk->objects()) {
            // surjectivity of the augmentation
            CHECK(R.augmentation_at(b).rank() == F->dim(b));
            for (size_t i = 0; i + 1 <= 2; ++i) CHECK(R.exact_at(i, b));
            // d o d = 0
            CHECK((R.map_at(1, b) * R.map_at(2, b)).is_zero());
        }
    }
}

TEST_CASE("Hom(P_a, G) = G(a) and higher Ext of projectives vanish") {
    auto sk = make_sk(2, "Z/2", 2);
    CatObject v1 = sk->generator_object(0);
    CatObject v2 = sk->obj_sum({v1, v1});
    std::vector<FunctorPtr> Gs = {constant_functor(sk), additive_tensor(sk, v1),
                                  tensor_product(additive_tensor(sk, v1), additive_tensor(sk, v1))};
    for (const CatObject& a : {v1, v2}) {
        FunctorPtr P = hom_linearization(sk, a);
        for (const FunctorPtr& G : Gs) {
            ExtTable t = ext(P, G, ResMode::Full, 0, 2);
            CHECK(t.dims[0] == G->dim(a));
            CHECK(t.dims[1] == 0);
            CHECK(t.dims[2] == 0);
        }
    }
}

TEST_CASE("Ext^0 equals the naturality-system dimension (independent oracle)") {
    auto sk = make_sk(2, "Z/2", 2);
    CatObject v1 = sk->generator_object(0);
    FunctorPtr I = additive_tensor(sk, v1);
    FunctorPtr II = tensor_product(I, I);
    FunctorPtr C = constant_functor(sk);
    std::vector<Mor> mors = all_morphisms(*sk);
    for (const FunctorPtr& F : {I, II, C, reduced_linearization(sk, v1)})
        for (const FunctorPtr& G : {I, II, C}) {
            ExtTable t = ext(F, G, ResMode::Full, 0, 1);
            CHECK(t.dims[0] == nat_space(F, G, mors).dim());
        }
}

TEST_CASE("representables resolve by themselves in length zero") {
    auto sk = make_sk(2, "Z/2", 2);
    CatObject v2 = sk->obj_sum({sk->generator_object(0), sk->generator_object(0)});
    Resolution R(hom_linearization(sk, v2), ResMode::Full, 0, 2);
    REQUIRE(R.term(0).size() == 1);
    CHECK(R.term(0)[0].at == v2);
    CHECK(R.term(1).empty());
    for (const CatObject& b : sk->objects()) CHECK(R.augmentation_at(b).rank() == sk->hom_count(v2, b));
}

TEST_CASE("derived p_1 of the linearization: dims are reported and consistent") {
    auto sk = make_sk(2, "Z/2", 3);
    CatObject v1 = sk->generator_object(0);
    DerivedPdReport rep = derived_pd(hom_linearization(sk, v1), 1, 1);
    for (size_t oi = 0; oi < rep.objects.size(); ++oi) {
        CHECK(rep.dims[oi][0] == rep.p_trunc_dims[oi]);  // R^0 p_1 = p_1
    }
}

TEST_CASE("mixed-generator skeletons use the exhaustive morphism fallback") {
    SkeletonSpec spec{2, {AbGroup::parse(2, "Z/2"), AbGroup::parse(2, "Z/4")}, 1, std::nullopt};
    auto sk = std::make_shared<Skeleton>(spec);
    // generating set = all morphisms here; truncations still work
    CatObject a{1, 0};
    FunctorPtr P = hom_linearization(sk, a);
    PolyTruncation q0 = q_trunc(P, 1);
    for (const CatObject& b : sk->objects()) CHECK(q0.functor->dim(b) <= P->dim(b));
    ExtTable t = ext(additive_tensor(sk, a), constant_functor(sk), ResMode::Full, 0, 1);
    CHECK(t.dims[0] == 0);  // no maps from a reduced functor to constants... at degree 0
}

TEST_CASE("constant functor resolves trivially over the zero object") {
    auto sk = make_sk(2, "Z/2", 2);
    FunctorPtr C = constant_functor(sk);
    Resolution R(C, ResMode::Full, 0, 2);
    // P_0 = F_p[Hom(0,-)] is the constant functor: length-0 resolution
    CHECK(R.term(0).size() == 1);
    CHECK(sk->total_mult(R.term(0)[0].at) == 0);
    CHECK(R.term(1).empty());
}

TEST_CASE("poly-mode resolution of an additive functor") {
    auto sk = make_sk(2, "Z/2", 3);
    CatObject v1 = sk->generator_object(0);
    FunctorPtr I = additive_tensor(sk, v1);
    Resolution R(I, ResMode::Poly, 1, 3);
    for (const CatObject& b : sk->objects()) {
        CHECK(R.augmentation_at(b).rank() == I->dim(b));
        CHECK(R.exact_at(0, b));
        CHECK(R.exact_at(1, b));
    }
    // all terms are degree <= 1 functors: their building blocks are q_1(P_a)
    ExtTable t = ext_table(R, I, 2);
    CHECK(t.dims[0] == 1);  // Hom(I, I) = F_p (scalars)
}

TEST_CASE("poly mode rejects functors beyond the degree bound") {
    auto sk = make_sk(2, "Z/2", 3);
    CatObject v1 = sk->generator_object(0);
    CHECK_THROWS_AS(Resolution(tensor_product(additive_tensor(sk, v1), additive_tensor(sk, v1)), ResMode::Poly, 1, 2),
                    GuardError);
}

TEST_CASE("Ext^2_poly(1)(I, I) vanishes while the full class survives") {
    auto sk = make_sk(2, "Z/2", 3);
    ExclReport rep = excl_class_check(sk);
    CHECK(rep.sequence_exact);
    CHECK(rep.cocycle_valid);
    CHECK(rep.class_nonzero);
    CHECK(rep.split_class_zero);
    CHECK(rep.ext_poly1_dims[2] == 0);
    CHECK(rep.comparison_poly_p_mono);
    CHECK(rep.preimage_exists);
    CHECK(rep.preimage_nonzero);
}

TEST_CASE("comparison: iso in degrees <= 1, mono in degree 2") {
    auto sk = make_sk(2, "Z/2", 3);
    CatObject v1 = sk->generator_object(0);
    FunctorPtr I = additive_tensor(sk, v1);
    FunctorPtr C = constant_functor(sk);
    for (const FunctorPtr& F : {I, C})
        for (const FunctorPtr& G : {I, C}) {
            ComparisonReport rep = comparison(F, G, 2, 2);
            CHECK(rep.lift_independent);
            CHECK(rep.iso[0]);
            CHECK(rep.iso[1]);
            CHECK(rep.mono[2]);
        }
}

TEST_CASE("derived p_d: R^0 = p_d and R^1 p_d vanishes on degree <= d functors") {
    auto sk = make_sk(2, "Z/2", 3);
    CatObject v1 = sk->generator_object(0);
    FunctorPtr I = additive_tensor(sk, v1);
    DerivedPdReport rep = derived_pd(I, 1, 1);
    for (size_t oi = 0; oi < rep.objects.size(); ++oi) {
        CHECK(rep.dims[oi][0] == rep.p_trunc_dims[oi]);
        CHECK(rep.dims[oi][0] == I->dim(rep.objects[oi]));  // p_1(I) = I
        CHECK(rep.dims[oi][1] == 0);
    }
}

TEST_CASE("Ext duality: Ext(F, G) = Ext(dual G, dual F)") {
    auto sk = make_sk(2, "Z/2", 2);
    CatObject v1 = sk->generator_object(0);
    FunctorPtr I = additive_tensor(sk, v1);
    FunctorPtr II = tensor_product(I, I);
    for (const auto& [F, G] : {std::pair<FunctorPtr, FunctorPtr>{I, II}, {II, I}, {I, I}}) {
        ExtTable lhs = ext(F, G, ResMode::Full, 0, 1);
        ExtTable rhs = ext(dual_of(G), dual_of(F), ResMode::Full, 0, 1);
        CHECK(lhs.dims == rhs.dims);
    }
}

TEST_CASE("exploratory degree-2 identification agrees on small skeletons") {
    for (const char* gen : {"Z/2", "Z/4"}) {
        SkeletonSpec spec{2, {AbGroup::parse(2, gen)}, 2, std::nullopt};
        auto sk = std::make_shared<Skeleton>(spec);
        // the torsion-ext composite is a genuine functor
        FunctorPtr E = torsion_ext_hom(sk, sk->generator_object(0));
        auto mors = all_morphisms(*sk);
        for (size_t t = 0; t < mors.size(); t += 7)
            for (size_t u = 0; u < mors.size(); u += 5) {
                const Mor& f = mors[t];
                const Mor& g = mors[u];
                if (g.src != f.tgt) continue;
                CHECK(E->action(sk->compose(g, f)) == E->action(g) * E->action(f));
            }
        ExploratoryExt2 e = exploratory_ext2_check(sk, sk->generator_object(0), sk->generator_object(0));
        CHECK(e.agree);  // informational identity, solid on these instances
    }
}

TEST_CASE("degenerate spectral-sequence corner: Ext^1 through p_d for low-degree inputs") {
    // when R^1 p_d(G) vanishes (G of degree <= d), Ext^1 agrees across the
    // inclusion; this is the only corner where the collapse is formal
    auto sk = make_sk(2, "Z/2", 3);
    CatObject v1 = sk->generator_object(0);
    FunctorPtr I = additive_tensor(sk, v1);
    DerivedPdReport dp = derived_pd(I, 1, 1);
    for (const auto& dims : dp.dims) CHECK(dims[1] == 0);
    ComparisonReport rep = comparison(I, I, 1, 1);
    CHECK(rep.iso[1]);
    CHECK(rep.dims_poly[1] == rep.dims_full[1]);
}

TEST_CASE("reduced tensor products are orthogonal to additive functors (Pirashvili lemma, desk instance)") {
    auto sk = make_sk(2, "Z/2", 3);
    CatObject v1 = sk->generator_object(0);
    FunctorPtr I = additive_tensor(sk, v1);
    FunctorPtr BC = tensor_product(I, I);
    ExtTable fwd = ext(I, BC, ResMode::Full, 0, 1);
    CHECK(fwd.dims[0] == 0);
    CHECK(fwd.dims[1] == 0);
    ExtTable bwd = ext(dual_of(BC), dual_of(I), ResMode::Full, 0, 1);
    CHECK(bwd.dims[0] == 0);
    CHECK(bwd.dims[1] == 0);
}
