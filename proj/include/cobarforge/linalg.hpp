#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "coeff.hpp"

namespace cbf {

// Dense GF(2) matrix, rows bit-packed into 64-bit words.
class F2Matrix {
public:
    F2Matrix() = default;
    F2Matrix(int rows, int cols)
        : r_(rows), c_(cols), w_((cols + 63) / 64), d_(size_t(rows) * w_, 0)
    {
    }

    int rows() const { return r_; }
    int cols() const { return c_; }

    bool get(int i, int j) const { return (d_[size_t(i) * w_ + j / 64] >> (j % 64)) & 1; }
    void set(int i, int j, bool v)
    {
        uint64_t& w = d_[size_t(i) * w_ + j / 64];
        uint64_t b = uint64_t(1) << (j % 64);
        w = v ? (w | b) : (w & ~b);
    }
    void flip(int i, int j) { d_[size_t(i) * w_ + j / 64] ^= uint64_t(1) << (j % 64); }

    void xor_rows(int dst, int src)
    {
        uint64_t* a = &d_[size_t(dst) * w_];
        const uint64_t* b = &d_[size_t(src) * w_];
        for (size_t k = 0; k < w_; ++k) a[k] ^= b[k];
    }

    F2Matrix transposed() const
    {
        F2Matrix t(c_, r_);
        for (int i = 0; i < r_; ++i)
            for (size_t k = 0; k < w_; ++k) {
                uint64_t w = d_[size_t(i) * w_ + k];
                while (w) {
                    int b = __builtin_ctzll(w);
                    w &= w - 1;
                    t.set(int(k) * 64 + b, i, true);
                }
            }
        return t;
    }

    // Row-echelon rank (destructive on a copy).
    int rank() const
    {
        F2Matrix m = *this;
        int rank = 0;
        for (int col = 0; col < c_ && rank < r_; ++col) {
            int piv = -1;
            for (int i = rank; i < r_; ++i)
                if (m.get(i, col)) { piv = i; break; }
            if (piv < 0) continue;
            m.swap_rows(rank, piv);
            for (int i = 0; i < r_; ++i)
                if (i != rank && m.get(i, col)) m.xor_rows(i, rank);
            ++rank;
        }
        return rank;
    }

    // Basis of the right kernel {x : Mx = 0}, as columns (each a bit vector
    // of length cols). Deterministic: free columns in increasing order.
    std::vector<std::vector<uint64_t>> kernel_basis() const
    {
        F2Matrix m = *this;
        std::vector<int> pivot_of_col(c_, -1);
        int rank = 0;
        for (int col = 0; col < c_ && rank < r_; ++col) {
            int piv = -1;
            for (int i = rank; i < r_; ++i)
                if (m.get(i, col)) { piv = i; break; }
            if (piv < 0) continue;
            m.swap_rows(rank, piv);
            for (int i = 0; i < r_; ++i)
                if (i != rank && m.get(i, col)) m.xor_rows(i, rank);
            pivot_of_col[col] = rank;
            ++rank;
        }
        std::vector<std::vector<uint64_t>> basis;
        size_t words = (c_ + 63) / 64;
        for (int col = 0; col < c_; ++col) {
            if (pivot_of_col[col] >= 0) continue;
            std::vector<uint64_t> v(words, 0);
            v[col / 64] |= uint64_t(1) << (col % 64);
            for (int pc = 0; pc < c_; ++pc)
                if (pivot_of_col[pc] >= 0 && m.get(pivot_of_col[pc], col))
                    v[pc / 64] ^= uint64_t(1) << (pc % 64);
            basis.push_back(std::move(v));
        }
        return basis;
    }

    void swap_rows(int i, int j)
    {
        if (i == j) return;
        for (size_t k = 0; k < w_; ++k)
            std::swap(d_[size_t(i) * w_ + k], d_[size_t(j) * w_ + k]);
    }

private:
    int r_ = 0, c_ = 0;
    size_t w_ = 0;
    std::vector<uint64_t> d_;
};

// Incremental GF(2) rank accumulator: feed sparse vectors (as sorted index
// lists over an arbitrary index space), get the rank of their span. Used to
// rank differentials whose target space is too large to materialize.
class F2SpanRank {
public:
    // Returns true if the vector increased the rank.
    bool add(std::vector<int> v)
    {
        normalize(v);
        for (auto& row : rows_) {
            if (v.empty()) break;
            if (row.front() == v.front()) v = sym_diff(v, row);
        }
        if (v.empty()) return false;
        rows_.push_back(std::move(v));
        for (size_t i = rows_.size(); i-- > 1;) {
            if (rows_[i - 1].front() > rows_[i].front())
                std::swap(rows_[i - 1], rows_[i]);
            else
                break;
        }
        return true;
    }
    int rank() const { return int(rows_.size()); }

private:
    static void normalize(std::vector<int>& v)
    {
        std::sort(v.begin(), v.end());
        std::vector<int> out;
        for (size_t i = 0; i < v.size();) {
            size_t j = i;
            while (j < v.size() && v[j] == v[i]) ++j;
            if ((j - i) % 2) out.push_back(v[i]);
            i = j;
        }
        v = std::move(out);
    }
    static std::vector<int> sym_diff(const std::vector<int>& a, const std::vector<int>& b)
    {
        std::vector<int> out;
        size_t i = 0, j = 0;
        while (i < a.size() || j < b.size()) {
            if (j == b.size() || (i < a.size() && a[i] < b[j])) out.push_back(a[i++]);
            else if (i == a.size() || b[j] < a[i]) out.push_back(b[j++]);
            else { ++i; ++j; }
        }
        return out;
    }
    std::vector<std::vector<int>> rows_;  // echelon rows, sorted by leading index
};

// Smith normal form over Z/2^N. Elementary divisors are powers of two,
// reported by exponent; exponent N means "zero mod 2^N", i.e. free at this
// precision.
struct SnfResult {
    std::vector<int> exponents;           // diagonal 2-valuations, ascending
    std::vector<std::vector<uint64_t>> R; // column transform: A * R has the kernel structure
    std::vector<std::vector<uint64_t>> L; // row transform: L * A * R = S
};

inline SnfResult snf_mod2n(std::vector<std::vector<uint64_t>> a, int n)
{
    uint64_t mask = pow2_mask(n);
    int rows = int(a.size());
    int cols = rows ? int(a[0].size()) : 0;
    auto val2 = [&](uint64_t x) {
        x &= mask;
        if (!x) return n;
        int k = 0;
        while (!(x & 1)) { x >>= 1; ++k; }
        return k;
    };
    auto inv_odd = [&](uint64_t u) {
        uint64_t x = 1;
        for (int b = 1; b < n; b *= 2) x = (x * (2 - u * x)) & mask;
        return x & mask;
    };
    SnfResult res;
    res.R.assign(cols, std::vector<uint64_t>(cols, 0));
    res.L.assign(rows, std::vector<uint64_t>(rows, 0));
    for (int i = 0; i < cols; ++i) res.R[i][i] = 1;
    for (int i = 0; i < rows; ++i) res.L[i][i] = 1;

    int k = 0;
    while (k < rows && k < cols) {
        // pivot: minimal 2-adic valuation in the remaining block
        int bi = -1, bj = -1, bv = n;
        for (int i = k; i < rows; ++i)
            for (int j = k; j < cols; ++j) {
                int v = val2(a[i][j]);
                if (v < bv) { bv = v; bi = i; bj = j; }
            }
        if (bi < 0) break;  // rest is zero
        if (bi != k) { std::swap(a[bi], a[k]); std::swap(res.L[bi], res.L[k]); }
        if (bj != k)
            for (int i = 0; i < rows; ++i) std::swap(a[i][bj], a[i][k]);
        if (bj != k)
            for (int i = 0; i < cols; ++i) std::swap(res.R[i][bj], res.R[i][k]);
        // normalize pivot to 2^bv
        uint64_t u = (a[k][k] & mask) >> bv;
        uint64_t ui = inv_odd(u);
        for (int j = k; j < cols; ++j) a[k][j] = (a[k][j] * ui) & mask;
        for (int j = 0; j < rows; ++j) res.L[k][j] = (res.L[k][j] * ui) & mask;
        uint64_t piv = a[k][k] & mask;  // = 2^bv
        // clear column k
        for (int i = k + 1; i < rows; ++i) {
            if (!(a[i][k] & mask)) continue;
            uint64_t q = ((a[i][k] & mask) >> bv) & mask;
            for (int j = k; j < cols; ++j) a[i][j] = (a[i][j] - q * a[k][j]) & mask;
            for (int j = 0; j < rows; ++j)
                res.L[i][j] = (res.L[i][j] - q * res.L[k][j]) & mask;
        }
        // clear row k
        for (int j = k + 1; j < cols; ++j) {
            if (!(a[k][j] & mask)) continue;
            uint64_t q = ((a[k][j] & mask) >> bv) & mask;
            for (int i = 0; i < cols; ++i)
                res.R[i][j] = (res.R[i][j] - q * res.R[i][k]) & mask;
            a[k][j] = 0;
        }
        (void)piv;
        ++k;
        res.exponents.push_back(bv);
    }
    // pad with N (zero divisors) for remaining diagonal slots up to min(r,c)
    while (int(res.exponents.size()) < std::min(rows, cols)) res.exponents.push_back(n);
    std::sort(res.exponents.begin(), res.exponents.end());
    return res;
}

// Elementary divisors as moduli 2^e (ascending), from an integer matrix
// reduced mod 2^N. 2^N signals a free/zero divisor at this precision.
inline std::vector<uint64_t> elementary_divisors_mod2n(
    const std::vector<std::vector<uint64_t>>& a, int n)
{
    auto r = snf_mod2n(a, n);
    std::vector<uint64_t> out;
    for (int e : r.exponents) out.push_back(uint64_t(1) << e);
    return out;
}

}  // namespace cbf
