#include <catch2/catch_amalgamated.hpp>

#include "extlab/grpalg.hpp"

using namespace extlab;

TEST_CASE("augmentation powers for small groups") {
    AbGroup z2 = AbGroup::cyclic(2, 1);
    GroupAlgebra a(z2);
    CHECK(a.augmentation_power(0).dim() == 2);  // I^0 = whole algebra
    CHECK(a.augmentation_power(1).dim() == 1);

    AbGroup z4 = AbGroup::cyclic(2, 2);
    GroupAlgebra b(z4);
    CHECK(b.augmentation_power(0).dim() == 4);
    CHECK(b.augmentation_power(4).dim() == 0);  // I^4 = 0 since S^d(Z/4) dies from d = 4
}

TEST_CASE("filtration is decreasing and multiplicative") {
    AbGroup v = AbGroup::parse(2, "Z/2 + Z/4");
    GroupAlgebra a(v);
    auto levels = a.filtration(6);
    for (size_t d = 1; d < levels.size(); ++d) {
        CHECK(levels[d].dim() <= levels[d - 1].dim());
        // I^d is contained in I^{d-1}
        CHECK(FpMatrix::hcat(levels[d - 1].basis, levels[d].basis).rank() == levels[d - 1].dim());
    }
}

TEST_CASE("graded dims match the monomial model (cyclic law)") {
    for (uint32_t p : {2u, 3u}) {
        for (uint32_t r = 1; r <= 3; ++r) {
            AbGroup v = AbGroup::cyclic(p, r);
            uint64_t pr = ipow(p, r);
            if (pr > 32) continue;  // Z/27 covered by the acceptance sweep
            for (uint32_t d = 0; d <= pr + 2; ++d) {
                size_t expect = d < pr ? 1 : 0;
                CHECK(s_graded_dim(v, d) == expect);
            }
        }
    }
}

TEST_CASE("graded dim for Z/2 + Z/4 at degree 3") {
    CHECK(s_graded_dim(AbGroup::parse(2, "Z/2 + Z/4"), 3) == 2);  // monomials (1,2) and (0,3)
}

TEST_CASE("monomial counts: s^0 = 1 and free parts unbounded") {
    CHECK(s_monomial_dim(AbGroup::parse(2, "Z/2 + Z/8"), 0) == 1);
    CHECK(monomial_dim(2, {0, 0}, 3) == 4);  // full symmetric algebra on 2 variables
}

TEST_CASE("convolution law dim S^n(U+V) = sum dim S^i(U) dim S^{n-i}(V)") {
    std::vector<AbGroup> gs = {AbGroup::cyclic(2, 1), AbGroup::cyclic(2, 2), AbGroup::parse(2, "Z/2 + Z/4")};
    for (const auto& u : gs)
        for (const auto& v : gs) {
            AbGroup sum = u.direct_sum(v);
            for (uint32_t n = 0; n <= 6; ++n) {
                size_t lhs = s_monomial_dim(sum, n);
                size_t rhs = 0;
                for (uint32_t i = 0; i <= n; ++i) rhs += s_monomial_dim(u, i) * s_monomial_dim(v, n - i);
                CHECK(lhs == rhs);
            }
        }
}

TEST_CASE("pol spaces: constants, exhaustion, duality") {
    AbGroup z2 = AbGroup::cyclic(2, 1);
    CHECK(pol_space(z2, 0).dim() == 1);
    CHECK(pol_space(z2, 1).dim() == 2);  // all functions on Z/2

    AbGroup z4 = AbGroup::cyclic(2, 2);
    CHECK(pol_space(z4, 2).dim() == 3);

    for (const char* s : {"Z/4", "Z/2 + Z/4", "Z/9"}) {
        uint32_t p = s[2] == '9' ? 3 : 2;
        AbGroup v = AbGroup::parse(p, s);
        GroupAlgebra a(v);
        uint64_t size = v.size();
        uint32_t top = 0;
        for (uint32_t r : v.torsion) top += static_cast<uint32_t>(ipow(p, r)) - 1;
        // duality: dim Pol_d + dim I^{d+1} = |V|
        for (uint32_t d = 0; d <= top + 1; ++d)
            CHECK(pol_space(v, d).dim() + a.augmentation_power(d + 1).dim() == size);
        // monotone exhaustion at the top of the filtration
        CHECK(pol_space(v, top).dim() == size);
    }
}

TEST_CASE("pol spaces by finite differences agree with the annihilator dual") {
    for (const char* s : {"Z/4", "Z/2 + Z/2", "Z/9", "Z/2 + Z/4"}) {
        uint32_t p = s[2] == '9' ? 3 : 2;
        AbGroup v = AbGroup::parse(p, s);
        for (uint32_t d = 0; d <= 4; ++d) {
            PolSpace a = pol_space(v, d);
            PolSpace b = pol_space_by_differences(v, d);
            CHECK(a.dim() == b.dim());
            CHECK(same_column_space(a.basis, b.basis));
        }
    }
}

TEST_CASE("pol towers are nested") {
    AbGroup v = AbGroup::parse(2, "Z/2 + Z/4");
    for (uint32_t d = 0; d < 6; ++d) {
        FpMatrix lo = pol_space(v, d).basis;
        FpMatrix hi = pol_space(v, d + 1).basis;
        CHECK(FpMatrix::hcat(hi, lo).rank() == hi.cols());
    }
}

TEST_CASE("pol stationarity") {
    AbGroup z4 = AbGroup::cyclic(2, 2);
    CHECK(pol_stationarity_check(z4, 1, 1));       // p^1 = 2 > 1
    CHECK(pol_stationarity_check(z4, 0, 0));       // constants
    CHECK_FALSE(pol_stationarity_check(z4, 2, 1)); // dim Pol_2(Z/4) = 3 > dim Pol_2(Z/2) = 2
}

TEST_CASE("element table arithmetic") {
    ElementTable t(2, {1, 2});
    CHECK(t.size() == 8);
    CHECK(t.add(t.generator(0), t.generator(0)) == 0);
    uint64_t g1 = t.generator(1);
    uint64_t x = t.add(g1, t.add(g1, g1));
    CHECK(t.coords(x)[1] == 3);
    CHECK(t.label(x) == "(0,3)");
}
