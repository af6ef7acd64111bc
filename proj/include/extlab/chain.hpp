#pragma once

// Finite chain complexes of F_p-vector spaces.  C_0, ..., C_n with
// differentials d_i : C_i -> C_{i-1} satisfying d o d = 0.

#include <stdexcept>
#include <string>
#include <vector>

#include "extlab/fp.hpp"

namespace extlab {

struct ChainComplex {
    uint32_t p = 2;
    std::vector<size_t> dims;       // dims[i] = dim C_i
    std::vector<FpMatrix> d;        // d[i] : C_i -> C_{i-1}, valid for 1 <= i < dims.size(); d[0] ignored
    std::vector<FpSpace> spaces;    // optional labelled bases, empty or dims.size() entries

    size_t length() const { return dims.size(); }

    void validate() const {
        if (d.size() != dims.size())
            throw std::invalid_argument("chain complex: need one differential slot per term");
        for (size_t i = 1; i < dims.size(); ++i) {
            if (d[i].rows() != dims[i - 1] || d[i].cols() != dims[i])
                throw std::invalid_argument("chain complex: differential " + std::to_string(i) + " has wrong shape");
            if (d[i].p() != p) throw std::invalid_argument("chain complex: modulus mismatch");
        }
        for (size_t i = 2; i < dims.size(); ++i) {
            if (!(d[i - 1] * d[i]).is_zero())
                throw std::invalid_argument("chain complex: d o d != 0 at degree " + std::to_string(i));
        }
    }

    // dim H_i = dim ker(d_i) - rank(d_{i+1}).  Rejects non-complexes.
    std::vector<size_t> homology_dims() const {
        validate();
        size_t n = dims.size();
        std::vector<size_t> h(n, 0);
        std::vector<size_t> rk(n + 1, 0);
        for (size_t i = 1; i < n; ++i) rk[i] = d[i].rank();
        for (size_t i = 0; i < n; ++i) {
            size_t ker = dims[i] - rk[i];  // rank of d_0 (out of C_0) is 0
            size_t im = (i + 1 < n) ? rk[i + 1] : 0;
            h[i] = ker - im;
        }
        return h;
    }

    long long euler_characteristic() const {
        long long e = 0;
        for (size_t i = 0; i < dims.size(); ++i) e += (i % 2 ? -1LL : 1LL) * (long long)dims[i];
        return e;
    }

    // Linear-dual complex: D_i = (C_{n-1-i})^*, differentials transposed.
    // Homology dimensions come out reversed.
    ChainComplex dual() const {
        size_t n = dims.size();
        ChainComplex dc;
        dc.p = p;
        dc.dims.resize(n);
        dc.d.resize(n);
        for (size_t i = 0; i < n; ++i) dc.dims[i] = dims[n - 1 - i];
        for (size_t i = 1; i < n; ++i) dc.d[i] = d[n - i].transposed();
        return dc;
    }
};

}  // namespace extlab
