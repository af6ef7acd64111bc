#pragma once

// Textual functor expressions for configs and the CLI.  Grammar (whitespace
// is ignored; the EBNF is documented in the README):
//
//   expr    = term { "+" term } ;                     direct sum
//   term    = factor { "*" factor } ;                 tensor product
//   factor  = atom | "dual(" expr ")"
//           | "Sym^" int "(" expr ")"                 full symmetric power
//           | "Gam^" int "(" expr ")"                 divided power (invariants)
//           | "(" expr ")" ;
//   atom    = "Fp" [ "^" int ]                        constant functor
//           | "Hom(" object ",-)"                     F_p[Hom(a,-)]
//           | "RHom(" object ",-)"                    reduced linearization
//           | "Ab(" object ",-)"                      Hom(a,-) (x) F_p
//           | "S^" int ".Hom(" object ",-)"           truncated symmetric piece
//           | "L^" int ".Hom(" object ",-)"           exterior piece
//           | "q_" int ".Hom(" object ",-)" ;         polynomial truncation of F_p[Hom(a,-)]
//   object  = "0" | "V" int | "V(" int { "," int } ")" ;

#include <cctype>
#include <string>

#include "extlab/functor.hpp"

namespace extlab {

class ExprParser {
public:
    ExprParser(SkeletonPtr sk, const std::string& text) : sk_(std::move(sk)) {
        for (char c : text)
            if (!std::isspace(static_cast<unsigned char>(c))) s_ += c;
    }

    FunctorPtr parse() {
        FunctorPtr f = expr();
        if (pos_ != s_.size()) fail("trailing input");
        return f;
    }

private:
    [[noreturn]] void fail(const std::string& what) const {
        throw ConfigError("functor expression error at offset " + std::to_string(pos_) + ": " + what + " in \"" +
                          s_ + "\"");
    }

    bool eat(const std::string& tok) {
        if (s_.compare(pos_, tok.size(), tok) == 0) {
            pos_ += tok.size();
            return true;
        }
        return false;
    }

    uint32_t integer() {
        size_t start = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (start == pos_) fail("expected integer");
        return static_cast<uint32_t>(std::stoul(s_.substr(start, pos_ - start)));
    }

    CatObject object() {
        if (eat("0")) return sk_->zero_object();
        if (!eat("V")) fail("expected object (0, Vk or V(m1,...))");
        CatObject a(sk_->num_generators(), 0);
        if (eat("(")) {
            size_t g = 0;
            while (true) {
                if (g >= a.size()) fail("too many multiplicities for the skeleton");
                a[g++] = integer();
                if (eat(")")) break;
                if (!eat(",")) fail("expected , or ) in object");
            }
        } else {
            if (sk_->num_generators() != 1) fail("Vk needs a single-generator skeleton; use V(m1,...)");
            a[0] = integer();
        }
        if (!sk_->in_skeleton(a)) fail("object outside the skeleton");
        return a;
    }

    CatObject hom_source() {
        if (!eat("(")) fail("expected (");
        CatObject a = object();
        if (!eat(",-)")) fail("expected ,-)");
        return a;
    }

    FunctorPtr atom() {
        if (eat("Fp")) {
            size_t d = 1;
            if (eat("^")) d = integer();
            return constant_functor(sk_, d);
        }
        if (eat("RHom")) return reduced_linearization(sk_, hom_source());
        if (eat("Hom")) return hom_linearization(sk_, hom_source());
        if (eat("Ab")) return additive_tensor(sk_, hom_source());
        if (eat("S^")) {
            uint32_t d = integer();
            if (!eat(".Hom")) fail("expected .Hom after S^d");
            return graded_hom(sk_, hom_source(), d);
        }
        if (eat("L^")) {
            uint32_t d = integer();
            if (!eat(".Hom")) fail("expected .Hom after L^d");
            return wedge_hom(sk_, hom_source(), d);
        }
        if (eat("q_")) {
            uint32_t d = integer();
            if (!eat(".Hom")) fail("expected .Hom after q_d");
            return qd_linearization(sk_, hom_source(), d);
        }
        fail("expected a functor atom");
    }

    FunctorPtr factor() {
        if (eat("dual(")) {
            FunctorPtr f = expr();
            if (!eat(")")) fail("expected )");
            return dual_of(f);
        }
        if (eat("Sym^")) {
            uint32_t k = integer();
            if (!eat("(")) fail("expected (");
            FunctorPtr f = expr();
            if (!eat(")")) fail("expected )");
            return sym_power(f, k);
        }
        if (eat("Gam^")) {
            uint32_t k = integer();
            if (!eat("(")) fail("expected (");
            FunctorPtr f = expr();
            if (!eat(")")) fail("expected )");
            return gamma_power(f, k);
        }
        if (eat("(")) {
            FunctorPtr f = expr();
            if (!eat(")")) fail("expected )");
            return f;
        }
        return atom();
    }

    FunctorPtr term() {
        FunctorPtr f = factor();
        while (eat("*")) f = tensor_product(f, factor());
        return f;
    }

    FunctorPtr expr() {
        FunctorPtr f = term();
        while (eat("+")) f = direct_sum(f, term());
        return f;
    }

    SkeletonPtr sk_;
    std::string s_;
    size_t pos_ = 0;
};

inline FunctorPtr parse_functor(SkeletonPtr sk, const std::string& text) {
    return ExprParser(std::move(sk), text).parse();
}

}  // namespace extlab
