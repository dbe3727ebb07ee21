#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace cbf {

// Coefficient modes. F2 values live in {0,1}; Z2N values are integers mod 2^N
// carrying their working precision N. Mixing the two modes is an error, not a
// silent truncation.
enum class Mode : uint8_t { F2, Z2N };

inline uint64_t pow2_mask(int n)
{
    return n >= 64 ? ~uint64_t(0) : (uint64_t(1) << n) - 1;
}

// An integer mod 2^N together with N. Arithmetic between operands of
// different precision truncates to the minimum precision first.
struct Coeff {
    uint64_t v = 0;
    uint8_t n = 1;       // precision (bits); 1 in F2 mode
    Mode mode = Mode::Z2N;

    Coeff() = default;
    Coeff(int64_t value, int prec, Mode m = Mode::Z2N)
        : n(static_cast<uint8_t>(prec)), mode(m)
    {
        if (prec < 1 || prec > 60)
            throw std::invalid_argument("Coeff: precision out of range");
        if (m == Mode::F2 && prec != 1)
            throw std::invalid_argument("Coeff: F2 mode has precision 1");
        v = static_cast<uint64_t>(value) & pow2_mask(prec);
    }

    static Coeff f2(int64_t value) { return Coeff(value & 1, 1, Mode::F2); }

    bool is_zero() const { return v == 0; }
    bool is_odd() const { return (v & 1) != 0; }

    friend void check_modes(const Coeff& a, const Coeff& b)
    {
        if (a.mode != b.mode)
            throw std::invalid_argument("Coeff: mixing F2 and Z/2^N modes");
    }

    Coeff truncated(int prec) const
    {
        if (prec >= n) return *this;
        Coeff r = *this;
        r.n = static_cast<uint8_t>(prec);
        r.v &= pow2_mask(prec);
        return r;
    }

    friend Coeff operator+(const Coeff& a, const Coeff& b)
    {
        check_modes(a, b);
        int n = std::min(a.n, b.n);
        return Coeff((a.v + b.v) & pow2_mask(n), n, a.mode);
    }
    friend Coeff operator-(const Coeff& a, const Coeff& b)
    {
        check_modes(a, b);
        int n = std::min(a.n, b.n);
        return Coeff((a.v - b.v) & pow2_mask(n), n, a.mode);
    }
    friend Coeff operator*(const Coeff& a, const Coeff& b)
    {
        check_modes(a, b);
        int n = std::min(a.n, b.n);
        return Coeff((a.v * b.v) & pow2_mask(n), n, a.mode);
    }
    Coeff operator-() const { return Coeff((~v + 1) & pow2_mask(n), n, mode); }

    friend bool operator==(const Coeff& a, const Coeff& b)
    {
        check_modes(a, b);
        int n = std::min(a.n, b.n);
        return ((a.v ^ b.v) & pow2_mask(n)) == 0;
    }
    friend bool operator!=(const Coeff& a, const Coeff& b) { return !(a == b); }

    // 2-adic valuation, capped at the precision.
    int val2() const
    {
        if (v == 0) return n;
        int k = 0;
        uint64_t x = v;
        while (!(x & 1)) { x >>= 1; ++k; }
        return k;
    }

    bool divisible_by_2k(int k) const { return val2() >= std::min<int>(k, n); }

    // Exact division by 2^k; the result carries precision n-k.
    Coeff div_pow2(int k) const
    {
        if (mode == Mode::F2)
            throw std::invalid_argument("Coeff: no 2-division in F2 mode");
        if (k >= n) throw std::invalid_argument("Coeff: division exceeds precision");
        if (!divisible_by_2k(k)) throw std::invalid_argument("Coeff: not 2^k-divisible");
        return Coeff(v >> k, n - k, mode);
    }

    Coeff mod2() const { return Coeff::f2(v & 1); }
    Coeff lifted(int prec) const { return Coeff(static_cast<int64_t>(v), prec, Mode::Z2N); }
};

// Inverse of an odd unit mod 2^N via Newton iteration x <- x(2 - ux).
inline Coeff invert_unit(const Coeff& u)
{
    if (!u.is_odd())
        throw std::invalid_argument("invert_unit: even input has no inverse mod 2^N");
    if (u.mode == Mode::F2) return u;
    uint64_t mask = pow2_mask(u.n);
    uint64_t x = 1;  // inverse mod 2
    for (int bits = 1; bits < u.n; bits *= 2)
        x = (x * (2 - u.v * x)) & mask;
    return Coeff(x & mask, u.n, u.mode);
}

}  // namespace cbf
