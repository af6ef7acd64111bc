#pragma once

// Exact dense linear algebra over the prime field F_p.
//
// Rows are bit-packed (64 entries per word) when p == 2 and byte-packed for
// odd p <= 251.  Elimination is plain Gaussian elimination with first-nonzero
// pivoting, so every result is reproducible bit for bit.  All values are
// immutable once built by the higher-level modules; elimination works on
// copies or on explicitly local scratch objects.

#include <algorithm>
#include <cstdint>
#include <cstring>
#include <initializer_list>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace extlab {

inline bool is_prime(uint32_t n) {
    if (n < 2) return false;
    for (uint32_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

inline void check_prime_modulus(uint32_t p) {
    if (!is_prime(p) || p > 251)
        throw std::invalid_argument("modulus must be a prime <= 251, got " + std::to_string(p));
}

inline uint32_t fp_inv(uint32_t a, uint32_t p) {
    // p is prime, 0 < a < p
    uint32_t r = 1, b = a, e = p - 2;
    while (e) {
        if (e & 1) r = (r * b) % p;
        b = (b * b) % p;
        e >>= 1;
    }
    return r;
}

class FpMatrix {
public:
    FpMatrix() : p_(2), rows_(0), cols_(0), wpr_(0) {}

    FpMatrix(uint32_t p, size_t rows, size_t cols) : p_(p), rows_(rows), cols_(cols) {
        check_prime_modulus(p);
        if (p_ == 2) {
            wpr_ = (cols_ + 63) / 64;
            bits_.assign(rows_ * wpr_, 0);
        } else {
            wpr_ = 0;
            bytes_.assign(rows_ * cols_, 0);
        }
    }

    static FpMatrix identity(uint32_t p, size_t n) {
        FpMatrix m(p, n, n);
        for (size_t i = 0; i < n; ++i) m.set(i, i, 1);
        return m;
    }

    static FpMatrix from_rows(uint32_t p, std::initializer_list<std::initializer_list<long long>> data) {
        size_t r = data.size();
        size_t c = r ? data.begin()->size() : 0;
        FpMatrix m(p, r, c);
        size_t i = 0;
        for (const auto& row : data) {
            if (row.size() != c) throw std::invalid_argument("ragged matrix literal");
            size_t j = 0;
            for (long long v : row) m.set(i, j++, ((v % (long long)p) + p) % p);
            ++i;
        }
        return m;
    }

    uint32_t p() const { return p_; }
    size_t rows() const { return rows_; }
    size_t cols() const { return cols_; }

    uint32_t at(size_t r, size_t c) const {
        if (p_ == 2) return (bits_[r * wpr_ + c / 64] >> (c % 64)) & 1u;
        return bytes_[r * cols_ + c];
    }

    void set(size_t r, size_t c, uint32_t v) {
        v %= p_;
        if (p_ == 2) {
            uint64_t& w = bits_[r * wpr_ + c / 64];
            uint64_t mask = uint64_t(1) << (c % 64);
            w = v ? (w | mask) : (w & ~mask);
        } else {
            bytes_[r * cols_ + c] = static_cast<uint8_t>(v);
        }
    }

    void add_at(size_t r, size_t c, uint32_t v) { set(r, c, (at(r, c) + v % p_) % p_); }

    bool is_zero() const {
        if (p_ == 2) {
            for (uint64_t w : bits_)
                if (w) return false;
            return true;
        }
        for (uint8_t b : bytes_)
            if (b) return false;
        return true;
    }

    bool operator==(const FpMatrix& o) const {
        if (p_ != o.p_ || rows_ != o.rows_ || cols_ != o.cols_) return false;
        return p_ == 2 ? bits_ == o.bits_ : bytes_ == o.bytes_;
    }
    bool operator!=(const FpMatrix& o) const { return !(*this == o); }

    FpMatrix transposed() const {
        FpMatrix t(p_, cols_, rows_);
        for (size_t r = 0; r < rows_; ++r)
            for (size_t c = 0; c < cols_; ++c) {
                uint32_t v = at(r, c);
                if (v) t.set(c, r, v);
            }
        return t;
    }

    FpMatrix operator+(const FpMatrix& o) const {
        require_same_shape(o);
        FpMatrix s(p_, rows_, cols_);
        if (p_ == 2) {
            for (size_t i = 0; i < bits_.size(); ++i) s.bits_[i] = bits_[i] ^ o.bits_[i];
        } else {
            for (size_t i = 0; i < bytes_.size(); ++i)
                s.bytes_[i] = static_cast<uint8_t>((bytes_[i] + o.bytes_[i]) % p_);
        }
        return s;
    }

    FpMatrix operator-(const FpMatrix& o) const {
        require_same_shape(o);
        FpMatrix s(p_, rows_, cols_);
        if (p_ == 2) {
            for (size_t i = 0; i < bits_.size(); ++i) s.bits_[i] = bits_[i] ^ o.bits_[i];
        } else {
            for (size_t i = 0; i < bytes_.size(); ++i)
                s.bytes_[i] = static_cast<uint8_t>((bytes_[i] + p_ - o.bytes_[i]) % p_);
        }
        return s;
    }

    FpMatrix scaled(uint32_t k) const {
        k %= p_;
        FpMatrix s(p_, rows_, cols_);
        if (p_ == 2) {
            if (k) s.bits_ = bits_;
        } else {
            for (size_t i = 0; i < bytes_.size(); ++i)
                s.bytes_[i] = static_cast<uint8_t>((bytes_[i] * k) % p_);
        }
        return s;
    }

    FpMatrix operator*(const FpMatrix& o) const {
        if (p_ != o.p_ || cols_ != o.rows_) throw std::invalid_argument("matrix product shape mismatch");
        FpMatrix prod(p_, rows_, o.cols_);
        if (p_ == 2) {
            for (size_t r = 0; r < rows_; ++r) {
                uint64_t* out = prod.bits_.data() + r * prod.wpr_;
                for (size_t k = 0; k < cols_; ++k) {
                    if (at(r, k)) {
                        const uint64_t* src = o.bits_.data() + k * o.wpr_;
                        for (size_t w = 0; w < o.wpr_; ++w) out[w] ^= src[w];
                    }
                }
            }
        } else {
            for (size_t r = 0; r < rows_; ++r)
                for (size_t k = 0; k < cols_; ++k) {
                    uint32_t v = at(r, k);
                    if (!v) continue;
                    const uint8_t* src = o.bytes_.data() + k * o.cols_;
                    uint8_t* out = prod.bytes_.data() + r * o.cols_;
                    for (size_t c = 0; c < o.cols_; ++c)
                        out[c] = static_cast<uint8_t>((out[c] + v * src[c]) % p_);
                }
        }
        return prod;
    }

    // Kronecker product, row-major convention: index (r1,r2) |-> r1*o.rows+r2.
    FpMatrix kron(const FpMatrix& o) const {
        FpMatrix k(p_, rows_ * o.rows_, cols_ * o.cols_);
        for (size_t r1 = 0; r1 < rows_; ++r1)
            for (size_t c1 = 0; c1 < cols_; ++c1) {
                uint32_t v1 = at(r1, c1);
                if (!v1) continue;
                for (size_t r2 = 0; r2 < o.rows_; ++r2)
                    for (size_t c2 = 0; c2 < o.cols_; ++c2) {
                        uint32_t v2 = o.at(r2, c2);
                        if (v2) k.set(r1 * o.rows_ + r2, c1 * o.cols_ + c2, v1 * v2);
                    }
            }
        return k;
    }

    FpMatrix column(size_t c) const {
        FpMatrix v(p_, rows_, 1);
        for (size_t r = 0; r < rows_; ++r) {
            uint32_t x = at(r, c);
            if (x) v.set(r, 0, x);
        }
        return v;
    }

    FpMatrix columns(const std::vector<size_t>& idx) const {
        FpMatrix m(p_, rows_, idx.size());
        for (size_t j = 0; j < idx.size(); ++j)
            for (size_t r = 0; r < rows_; ++r) {
                uint32_t x = at(r, idx[j]);
                if (x) m.set(r, j, x);
            }
        return m;
    }

    static FpMatrix hcat(const FpMatrix& a, const FpMatrix& b) {
        if (a.p_ != b.p_ || a.rows_ != b.rows_) throw std::invalid_argument("hcat shape mismatch");
        FpMatrix m(a.p_, a.rows_, a.cols_ + b.cols_);
        for (size_t r = 0; r < a.rows_; ++r) {
            for (size_t c = 0; c < a.cols_; ++c)
                if (uint32_t v = a.at(r, c)) m.set(r, c, v);
            for (size_t c = 0; c < b.cols_; ++c)
                if (uint32_t v = b.at(r, c)) m.set(r, a.cols_ + c, v);
        }
        return m;
    }

    static FpMatrix vcat(const FpMatrix& a, const FpMatrix& b) {
        if (a.p_ != b.p_ || a.cols_ != b.cols_) throw std::invalid_argument("vcat shape mismatch");
        FpMatrix m(a.p_, a.rows_ + b.rows_, a.cols_);
        for (size_t r = 0; r < a.rows_; ++r)
            for (size_t c = 0; c < a.cols_; ++c)
                if (uint32_t v = a.at(r, c)) m.set(r, c, v);
        for (size_t r = 0; r < b.rows_; ++r)
            for (size_t c = 0; c < b.cols_; ++c)
                if (uint32_t v = b.at(r, c)) m.set(a.rows_ + r, c, v);
        return m;
    }

    // row r of *this += k * row r2 of src
    void row_axpy(size_t r, const FpMatrix& src, size_t r2, uint32_t k) {
        k %= p_;
        if (!k) return;
        if (p_ == 2) {
            uint64_t* dst = bits_.data() + r * wpr_;
            const uint64_t* s = src.bits_.data() + r2 * src.wpr_;
            for (size_t w = 0; w < wpr_; ++w) dst[w] ^= s[w];
        } else {
            uint8_t* dst = bytes_.data() + r * cols_;
            const uint8_t* s = src.bytes_.data() + r2 * cols_;
            for (size_t c = 0; c < cols_; ++c) dst[c] = static_cast<uint8_t>((dst[c] + k * s[c]) % p_);
        }
    }

    void scale_row(size_t r, uint32_t k) {
        k %= p_;
        if (p_ == 2) {
            if (k == 0) std::fill_n(bits_.begin() + r * wpr_, wpr_, 0);
        } else {
            uint8_t* dst = bytes_.data() + r * cols_;
            for (size_t c = 0; c < cols_; ++c) dst[c] = static_cast<uint8_t>((dst[c] * k) % p_);
        }
    }

    void swap_rows(size_t r1, size_t r2) {
        if (r1 == r2) return;
        if (p_ == 2) {
            for (size_t w = 0; w < wpr_; ++w) std::swap(bits_[r1 * wpr_ + w], bits_[r2 * wpr_ + w]);
        } else {
            for (size_t c = 0; c < cols_; ++c) std::swap(bytes_[r1 * cols_ + c], bytes_[r2 * cols_ + c]);
        }
    }

    size_t first_nonzero_in_row(size_t r) const {
        if (p_ == 2) {
            const uint64_t* row = bits_.data() + r * wpr_;
            for (size_t w = 0; w < wpr_; ++w)
                if (row[w]) return w * 64 + static_cast<size_t>(__builtin_ctzll(row[w]));
            return cols_;
        }
        const uint8_t* row = bytes_.data() + r * cols_;
        for (size_t c = 0; c < cols_; ++c)
            if (row[c]) return c;
        return cols_;
    }

    struct Echelon;

    // Deterministic reduced row echelon form (first-nonzero pivoting).
    Echelon echelon() const;

    size_t rank() const;

    // Columns form a basis of { x : Ax = 0 }.  Count = cols - rank.
    FpMatrix kernel_basis() const;

    // A basis of the column space, as columns (echelonized, deterministic).
    FpMatrix column_space_basis() const;

    // One solution x of Ax = b for each column b of rhs, or nullopt if any is
    // unsolvable.  Free variables are set to zero (deterministic).
    std::optional<FpMatrix> solve(const FpMatrix& rhs) const;

    std::string to_string() const {
        std::string s;
        for (size_t r = 0; r < rows_; ++r) {
            s += r ? "\n[" : "[";
            for (size_t c = 0; c < cols_; ++c) {
                if (c) s += ' ';
                s += std::to_string(at(r, c));
            }
            s += ']';
        }
        return s;
    }

private:
    void require_same_shape(const FpMatrix& o) const {
        if (p_ != o.p_ || rows_ != o.rows_ || cols_ != o.cols_)
            throw std::invalid_argument("matrix shape/modulus mismatch");
    }

    uint32_t p_;
    size_t rows_, cols_;
    size_t wpr_;                  // words per row when p == 2
    std::vector<uint64_t> bits_;  // p == 2
    std::vector<uint8_t> bytes_;  // p > 2, row-major
};

struct FpMatrix::Echelon {
    size_t rank = 0;
    std::vector<size_t> pivot_cols;  // one per pivot row, increasing
    FpMatrix rref;                   // reduced row echelon form
};

inline FpMatrix::Echelon FpMatrix::echelon() const {
    Echelon e;
    e.rref = *this;
    FpMatrix& m = e.rref;
    size_t pr = 0;
    for (size_t c = 0; c < cols_ && pr < rows_; ++c) {
        size_t piv = rows_;
        for (size_t r = pr; r < rows_; ++r)
            if (m.at(r, c)) { piv = r; break; }
        if (piv == rows_) continue;
        m.swap_rows(pr, piv);
        uint32_t inv = p_ == 2 ? 1 : fp_inv(m.at(pr, c), p_);
        if (inv != 1) m.scale_row(pr, inv);
        for (size_t r = 0; r < rows_; ++r) {
            if (r == pr) continue;
            uint32_t v = m.at(r, c);
            if (v) m.row_axpy(r, m, pr, p_ - v);
        }
        e.pivot_cols.push_back(c);
        ++pr;
    }
    e.rank = pr;
    return e;
}

inline size_t FpMatrix::rank() const { return echelon().rank; }

inline FpMatrix FpMatrix::kernel_basis() const {
    Echelon e = echelon();
    std::vector<size_t> free_cols;
    {
        size_t k = 0;
        for (size_t c = 0; c < cols_; ++c) {
            if (k < e.pivot_cols.size() && e.pivot_cols[k] == c) ++k;
            else free_cols.push_back(c);
        }
    }
    FpMatrix ker(p_, cols_, free_cols.size());
    for (size_t j = 0; j < free_cols.size(); ++j) {
        size_t fc = free_cols[j];
        ker.set(fc, j, 1);
        for (size_t i = 0; i < e.pivot_cols.size(); ++i) {
            uint32_t v = e.rref.at(i, fc);
            if (v) ker.set(e.pivot_cols[i], j, (p_ - v) % p_);
        }
    }
    return ker;
}

inline FpMatrix FpMatrix::column_space_basis() const {
    Echelon e = transposed().echelon();
    FpMatrix b(p_, rows_, e.rank);
    for (size_t i = 0; i < e.rank; ++i)
        for (size_t c = 0; c < rows_; ++c)
            if (uint32_t v = e.rref.at(i, c)) b.set(c, i, v);
    return b;
}

inline std::optional<FpMatrix> FpMatrix::solve(const FpMatrix& rhs) const {
    if (rhs.rows() != rows_ || rhs.p() != p_) throw std::invalid_argument("solve shape mismatch");
    Echelon e = FpMatrix::hcat(*this, rhs).echelon();
    FpMatrix x(p_, cols_, rhs.cols());
    for (size_t i = 0; i < e.pivot_cols.size(); ++i) {
        if (e.pivot_cols[i] >= cols_) return std::nullopt;  // pivot in rhs block: inconsistent
        for (size_t j = 0; j < rhs.cols(); ++j) {
            uint32_t v = e.rref.at(i, cols_ + j);
            if (v) x.set(e.pivot_cols[i], j, v);
        }
    }
    return x;
}

// Incremental row space with reduced echelon rows.  Used for span saturation;
// insertion order never changes the resulting space.
class FpSpan {
public:
    FpSpan(uint32_t p, size_t ambient) : p_(p), n_(ambient) { check_prime_modulus(p); }

    uint32_t p() const { return p_; }
    size_t ambient_dim() const { return n_; }
    size_t dim() const { return pivots_.size(); }

    // Inserts the row vector v (given as a 1-column matrix, i.e. a vector in
    // F_p^n); returns true if the span grew.
    bool insert(const FpMatrix& v) {
        std::vector<uint32_t> w = to_dense(v);
        reduce(w);
        size_t piv = first_nonzero(w);
        if (piv == n_) return false;
        normalize(w, piv);
        back_reduce(w, piv);
        size_t pos = std::lower_bound(pivots_.begin(), pivots_.end(), piv) - pivots_.begin();
        pivots_.insert(pivots_.begin() + pos, piv);
        rows_.insert(rows_.begin() + pos, std::move(w));
        return true;
    }

    bool contains(const FpMatrix& v) const {
        std::vector<uint32_t> w = to_dense(v);
        reduce(w);
        return first_nonzero(w) == n_;
    }

    // Basis as columns of an n x dim matrix.
    FpMatrix basis_matrix() const {
        FpMatrix b(p_, n_, rows_.size());
        for (size_t j = 0; j < rows_.size(); ++j)
            for (size_t i = 0; i < n_; ++i)
                if (rows_[j][i]) b.set(i, j, rows_[j][i]);
        return b;
    }

private:
    std::vector<uint32_t> to_dense(const FpMatrix& v) const {
        if (v.rows() != n_ || v.cols() != 1 || v.p() != p_)
            throw std::invalid_argument("span insert: expected column vector of ambient dimension");
        std::vector<uint32_t> w(n_);
        for (size_t i = 0; i < n_; ++i) w[i] = v.at(i, 0);
        return w;
    }
    size_t first_nonzero(const std::vector<uint32_t>& w) const {
        for (size_t i = 0; i < n_; ++i)
            if (w[i]) return i;
        return n_;
    }
    void reduce(std::vector<uint32_t>& w) const {
        for (size_t k = 0; k < pivots_.size(); ++k) {
            uint32_t v = w[pivots_[k]];
            if (!v) continue;
            uint32_t c = p_ - v;
            const std::vector<uint32_t>& row = rows_[k];
            for (size_t i = pivots_[k]; i < n_; ++i) w[i] = (w[i] + c * row[i]) % p_;
        }
    }
    void normalize(std::vector<uint32_t>& w, size_t piv) const {
        uint32_t inv = p_ == 2 ? 1 : fp_inv(w[piv], p_);
        if (inv != 1)
            for (size_t i = piv; i < n_; ++i) w[i] = (w[i] * inv) % p_;
    }
    void back_reduce(const std::vector<uint32_t>& w, size_t piv) {
        for (size_t k = 0; k < rows_.size(); ++k) {
            uint32_t v = rows_[k][piv];
            if (!v) continue;
            uint32_t c = p_ - v;
            for (size_t i = piv; i < n_; ++i) rows_[k][i] = (rows_[k][i] + c * w[i]) % p_;
        }
    }

    uint32_t p_;
    size_t n_;
    std::vector<size_t> pivots_;
    std::vector<std::vector<uint32_t>> rows_;
};

// Sparse triplets.  Transport format for large, very sparse maps (e.g. the
// composition action of representable functors); densifies on demand for
// elimination once the fill passes the threshold or when requested.
struct FpTriplet {
    size_t row, col;
    uint32_t val;
};

class FpSparse {
public:
    FpSparse(uint32_t p, size_t rows, size_t cols) : p_(p), rows_(rows), cols_(cols) { check_prime_modulus(p); }

    void add(size_t r, size_t c, uint32_t v) {
        v %= p_;
        if (v) trips_.push_back({r, c, v});
    }

    uint32_t p() const { return p_; }
    size_t rows() const { return rows_; }
    size_t cols() const { return cols_; }
    size_t nnz() const { return trips_.size(); }
    double density() const { return rows_ && cols_ ? double(trips_.size()) / (double(rows_) * double(cols_)) : 0.0; }

    FpMatrix to_dense() const {
        FpMatrix m(p_, rows_, cols_);
        for (const auto& t : trips_) m.add_at(t.row, t.col, t.val);
        return m;
    }

    // y = this * x for a dense matrix x.
    FpMatrix apply(const FpMatrix& x) const {
        if (x.rows() != cols_ || x.p() != p_) throw std::invalid_argument("sparse apply shape mismatch");
        FpMatrix y(p_, rows_, x.cols());
        for (const auto& t : trips_)
            for (size_t j = 0; j < x.cols(); ++j) {
                uint32_t v = x.at(t.col, j);
                if (v) y.add_at(t.row, j, t.val * v);
            }
        return y;
    }

    size_t rank(double densify_threshold = 0.0) const {
        (void)densify_threshold;  // elimination always densifies; the format exists for transport/apply
        return to_dense().rank();
    }

private:
    uint32_t p_;
    size_t rows_, cols_;
    std::vector<FpTriplet> trips_;
};

// A based F_p-vector space: a dimension plus optional printable basis labels
// (monomials, wedges, group elements, morphism names).
struct FpSpace {
    uint32_t p = 2;
    size_t dim = 0;
    std::vector<std::string> labels;  // empty or exactly dim entries, pairwise distinct

    FpSpace() = default;
    FpSpace(uint32_t p_, size_t dim_) : p(p_), dim(dim_) {}
    FpSpace(uint32_t p_, size_t dim_, std::vector<std::string> lab) : p(p_), dim(dim_), labels(std::move(lab)) {
        validate_labels();
    }

    void validate_labels() const {
        if (labels.empty()) return;
        if (labels.size() != dim) throw std::invalid_argument("label count != dim");
        std::vector<std::string> s = labels;
        std::sort(s.begin(), s.end());
        if (std::adjacent_find(s.begin(), s.end()) != s.end())
            throw std::invalid_argument("basis labels not pairwise distinct");
    }
};

}  // namespace extlab
