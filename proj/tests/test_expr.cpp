#include <catch2/catch_amalgamated.hpp>

#include "extlab/expr.hpp"

using namespace extlab;

static std::shared_ptr<const Skeleton> make_sk(uint32_t p, const char* gen, uint32_t K) {
    SkeletonSpec spec{p, {AbGroup::parse(p, gen)}, K, std::nullopt};
    return std::make_shared<Skeleton>(spec);
}

TEST_CASE("expression parsing evaluates to the expected dimensions") {
    auto sk = make_sk(2, "Z/2", 3);
    CatObject v2 = sk->obj_sum({sk->generator_object(0), sk->generator_object(0)});
    CHECK(parse_functor(sk, "Fp")->dim(v2) == 1);
    CHECK(parse_functor(sk, "Hom(V1,-)")->dim(v2) == 4);
    CHECK(parse_functor(sk, "RHom(V1,-)")->dim(v2) == 3);
    CHECK(parse_functor(sk, "Ab(V1,-)")->dim(v2) == 2);
    CHECK(parse_functor(sk, "S^2 . Hom(V1,-)")->dim(v2) == 1);
    CHECK(parse_functor(sk, "L^2.Hom(V1,-)")->dim(v2) == 1);
    CHECK(parse_functor(sk, "q_1.Hom(V1,-)")->dim(v2) == 3);
    CHECK(parse_functor(sk, "Ab(V1,-) * Ab(V1,-)")->dim(v2) == 4);
    CHECK(parse_functor(sk, "Fp + Ab(V1,-)")->dim(v2) == 3);
    CHECK(parse_functor(sk, "dual(Ab(V1,-))")->dim(v2) == 2);
    CHECK(parse_functor(sk, "Sym^2(Ab(V1,-))")->dim(v2) == 3);
    CHECK(parse_functor(sk, "Gam^2(Ab(V1,-))")->dim(v2) == 3);
    CHECK(parse_functor(sk, "(Fp + Fp) * Ab(V1,-)")->dim(v2) == 4);
}

TEST_CASE("multi-generator object syntax") {
    SkeletonSpec spec{2, {AbGroup::parse(2, "Z/2"), AbGroup::parse(2, "Z/4")}, 1, std::nullopt};
    auto sk = std::make_shared<Skeleton>(spec);
    FunctorPtr f = parse_functor(sk, "Hom(V(1,1),-)");
    CatObject a{1, 1};
    CHECK(f->dim(a) == sk->hom_count(a, a));
    CHECK_THROWS_AS(parse_functor(sk, "Hom(V1,-)"), ConfigError);
}

TEST_CASE("parse errors") {
    auto sk = make_sk(2, "Z/2", 2);
    CHECK_THROWS_AS(parse_functor(sk, "Foo"), ConfigError);
    CHECK_THROWS_AS(parse_functor(sk, "Hom(V1,-) garbage"), ConfigError);
    CHECK_THROWS_AS(parse_functor(sk, "Hom(V9,-)"), ConfigError);  // outside the skeleton
    CHECK_THROWS_AS(parse_functor(sk, "S^.Hom(V1,-)"), ConfigError);
}
