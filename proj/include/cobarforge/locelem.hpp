#pragma once

#include "basepoly.hpp"

namespace cbf {

// Element of A = Z2[a1, a3, Delta^{-1}] at finite 2-adic precision, stored as
// num / (a3^dA3 * v2^dV2) with v2 = a1^3 - 27 a3. Since
// Delta = a3^3 * v2, inverting Delta is the same as inverting a3 and v2.
class LocElem {
public:
    LocElem() : num_(Mode::Z2N, 1) {}
    explicit LocElem(BasePoly num, int dA3 = 0, int dV2 = 0)
        : num_(std::move(num)), dA3_(dA3), dV2_(dV2)
    {
        if (dA3 < 0 || dV2 < 0)
            throw std::invalid_argument("LocElem: negative denominator exponent");
        if (num_.is_zero()) dA3_ = dV2_ = 0;
    }

    static LocElem zero(Mode m, int prec) { return LocElem(BasePoly::zero(m, prec)); }
    static LocElem constant(int64_t c, Mode m, int prec)
    {
        return LocElem(BasePoly::constant(c, m, prec));
    }
    static LocElem monomial(int i, int j, int64_t c, Mode m, int prec)
    {
        return LocElem(BasePoly::monomial(i, j, c, m, prec));
    }
    static LocElem a1(Mode m, int prec) { return monomial(1, 0, 1, m, prec); }
    static LocElem a3(Mode m, int prec) { return monomial(0, 1, 1, m, prec); }
    static LocElem v2(Mode m, int prec)
    {
        BasePoly p = BasePoly::monomial(3, 0, 1, m, prec);
        p.add_term({0, 1}, Coeff(-27, m == Mode::F2 ? 1 : prec, m));
        return LocElem(p);
    }
    static LocElem delta(Mode m, int prec)
    {
        return LocElem(a3(m, prec).num() * a3(m, prec).num() * a3(m, prec).num() *
                       v2(m, prec).num());
    }
    static LocElem delta_inv(Mode m, int prec)
    {
        return LocElem(BasePoly::constant(1, m, prec), 3, 1);
    }

    const BasePoly& num() const { return num_; }
    int dA3() const { return dA3_; }
    int dV2() const { return dV2_; }
    Mode mode() const { return num_.mode(); }
    int precision() const { return num_.precision(); }
    bool is_zero() const { return num_.is_zero(); }

    // num lives in degree deg + 6 dA3 + 6 dV2 for an element of degree deg.
    std::optional<int> degree() const
    {
        auto d = num_.degree();
        if (!d) return std::nullopt;
        return *d - 6 * dA3_ - 6 * dV2_;
    }
    bool is_homogeneous() const { return num_.is_homogeneous(); }

    friend LocElem operator+(const LocElem& a, const LocElem& b)
    {
        int dA = std::max(a.dA3_, b.dA3_), dV = std::max(a.dV2_, b.dV2_);
        BasePoly na = scale_up(a, dA, dV), nb = scale_up(b, dA, dV);
        return LocElem(na + nb, dA, dV);
    }
    friend LocElem operator-(const LocElem& a, const LocElem& b) { return a + (-b); }
    LocElem operator-() const { return LocElem(-num_, dA3_, dV2_); }
    friend LocElem operator*(const LocElem& a, const LocElem& b)
    {
        return LocElem(a.num_ * b.num_, a.dA3_ + b.dA3_, a.dV2_ + b.dV2_);
    }
    LocElem scaled(int64_t c) const { return LocElem(num_.scaled(c), dA3_, dV2_); }
    LocElem scaled(const Coeff& c) const { return LocElem(num_.scaled(c), dA3_, dV2_); }

    // Equality by cross-multiplication, so unreduced fractions compare equal.
    friend bool operator==(const LocElem& a, const LocElem& b)
    {
        int dA = std::max(a.dA3_, b.dA3_), dV = std::max(a.dV2_, b.dV2_);
        return scale_up(a, dA, dV) == scale_up(b, dA, dV);
    }
    friend bool operator!=(const LocElem& a, const LocElem& b) { return !(a == b); }

    // Cancel a3 and v2 factors shared by numerator and denominator.
    LocElem reduced() const
    {
        LocElem r = *this;
        while (r.dA3_ > 0 && r.num_.divisible_a3()) {
            r.num_ = r.num_.div_a3();
            --r.dA3_;
        }
        while (r.dV2_ > 0) {
            auto q = r.num_.div_v2();
            if (!q) break;
            r.num_ = *q;
            --r.dV2_;
        }
        if (r.num_.is_zero()) r.dA3_ = r.dV2_ = 0;
        return r;
    }

    bool divisible_by_2k(int k) const { return num_.divisible_by_2k(k); }
    LocElem div_pow2(int k) const { return LocElem(num_.div_pow2(k), dA3_, dV2_); }
    LocElem truncated(int prec) const { return LocElem(num_.truncated(prec), dA3_, dV2_); }
    LocElem mod2() const { return LocElem(num_.mod2(), dA3_, dV2_); }
    LocElem lifted(int prec) const { return LocElem(num_.lifted(prec), dA3_, dV2_); }

    // True when the reduced numerator is, mod 2, a unit times a monomial in
    // the inverted elements, i.e. the element is invertible at this precision.
    bool is_unit() const
    {
        LocElem r = reduced();
        if (r.is_zero()) return false;
        BasePoly f = r.num_.mod2();
        if (f.is_zero()) return false;
        while (f.divisible_a3()) f = f.div_a3();
        for (;;) {
            auto q = f.div_v2();
            if (!q) break;
            f = *q;
        }
        auto& t = f.terms();
        return t.size() == 1 && t.begin()->first == Mono{0, 0};
    }

    // Inverse via mod-2 unit recognition plus Newton iteration y <- y(2-xy).
    LocElem inverse() const
    {
        if (mode() == Mode::F2) {
            LocElem inv = mod2_inverse_impl(*this);
            return inv;
        }
        LocElem x = reduced();
        LocElem y = mod2_inverse_impl(x).lifted(precision());
        for (int bits = 1; bits < precision(); bits *= 2) {
            LocElem two = LocElem::constant(2, mode(), precision());
            y = (y * (two - x * y)).reduced();
        }
        return y;
    }

    std::string str() const
    {
        std::string s = num_.str();
        if (dA3_ == 0 && dV2_ == 0) return s;
        std::string den;
        if (dA3_) den += "a3^" + std::to_string(dA3_);
        if (dV2_) den += (den.empty() ? "" : "*") + std::string("v2^") + std::to_string(dV2_);
        return "(" + s + ")/(" + den + ")";
    }

private:
    static BasePoly scale_up(const LocElem& a, int dA, int dV)
    {
        BasePoly p = a.num_;
        Mode m = a.mode();
        int prec = a.precision();
        for (int k = a.dA3_; k < dA; ++k) p = p * BasePoly::monomial(0, 1, 1, m, prec);
        for (int k = a.dV2_; k < dV; ++k) p = p * v2(m, prec).num();
        return p;
    }

    static LocElem mod2_inverse_impl(const LocElem& e)
    {
        LocElem r = e.reduced();
        if (r.is_zero())
            throw std::invalid_argument("LocElem: zero is not invertible");
        BasePoly f = r.num_.mod2();
        if (f.is_zero())
            throw std::invalid_argument("LocElem: not invertible mod 2");
        int ea = 0, ev = 0;
        while (f.divisible_a3()) { f = f.div_a3(); ++ea; }
        for (;;) {
            auto q = f.div_v2();
            if (!q) break;
            f = *q;
            ++ev;
        }
        auto& t = f.terms();
        if (!(t.size() == 1 && t.begin()->first == Mono{0, 0}))
            throw std::invalid_argument("LocElem: not invertible mod 2");
        // 1/(a3^ea v2^ev mono * rest) with denominators flipping sides
        BasePoly numinv = BasePoly::constant(1, Mode::F2, 1);
        for (int k = 0; k < r.dA3_; ++k)
            numinv = numinv * BasePoly::monomial(0, 1, 1, Mode::F2, 1);
        for (int k = 0; k < r.dV2_; ++k) numinv = numinv * v2(Mode::F2, 1).num();
        return LocElem(numinv, ea, ev);
    }

    BasePoly num_;
    int dA3_ = 0;
    int dV2_ = 0;
};

}  // namespace cbf
