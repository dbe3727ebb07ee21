#pragma once

#include <array>

#include "gamma.hpp"

namespace cbf {

// Sparse polynomials in the projective coordinates (x, y, zp) and in the
// affine chart coordinates (z, w), with A-coefficients.
template <int K>
class APoly {
public:
    using Exp = std::array<int, K>;
    explicit APoly(Mode m = Mode::Z2N, int prec = 1) : mode_(m), prec_(prec) {}

    Mode mode() const { return mode_; }
    int precision() const { return prec_; }
    const std::map<Exp, LocElem>& terms() const { return t_; }
    bool is_zero() const { return t_.empty(); }

    void add(const Exp& e, const LocElem& c)
    {
        if (c.is_zero()) return;
        auto it = t_.find(e);
        if (it == t_.end())
            t_.emplace(e, c);
        else {
            it->second = it->second + c;
            if (it->second.is_zero()) t_.erase(it);
        }
    }
    static APoly term(const Exp& e, const LocElem& c)
    {
        APoly p(c.mode(), c.precision());
        p.add(e, c);
        return p;
    }

    friend APoly operator+(const APoly& a, const APoly& b)
    {
        APoly r = a;
        for (auto& [e, c] : b.t_) r.add(e, c);
        return r;
    }
    friend APoly operator-(const APoly& a, const APoly& b)
    {
        APoly r = a;
        for (auto& [e, c] : b.t_) r.add(e, -c);
        return r;
    }
    APoly operator-() const
    {
        APoly r(mode_, prec_);
        for (auto& [e, c] : t_) r.t_.emplace(e, -c);
        return r;
    }
    friend APoly operator*(const APoly& a, const APoly& b)
    {
        APoly r(a.mode_, std::min(a.prec_, b.prec_));
        for (auto& [ea, ca] : a.t_)
            for (auto& [eb, cb] : b.t_) {
                Exp e;
                for (int i = 0; i < K; ++i) e[i] = ea[i] + eb[i];
                r.add(e, ca * cb);
            }
        return r;
    }
    APoly scaled(const LocElem& c) const
    {
        APoly r(mode_, prec_);
        for (auto& [e, cc] : t_) r.add(e, cc * c);
        return r;
    }
    friend bool operator==(const APoly& a, const APoly& b) { return (a - b).is_zero(); }

    std::string str(const std::array<std::string, K>& vars) const
    {
        std::string out;
        for (auto& [e, c] : t_) {
            if (!out.empty()) out += " + ";
            out += "(" + c.str() + ")";
            for (int i = 0; i < K; ++i)
                if (e[i]) {
                    out += "*" + vars[i];
                    if (e[i] > 1) out += "^" + std::to_string(e[i]);
                }
        }
        return out.empty() ? "0" : out;
    }

private:
    Mode mode_;
    int prec_;
    std::map<Exp, LocElem> t_;
};

using PolyXYZ = APoly<3>;  // x, y, zp
using PolyZW = APoly<2>;   // z, w
using PolyZ = APoly<1>;    // z

struct ChartRelation {
    std::string name;
    PolyZW rel;
};

// Projective Weierstrass equation y^2 zp + a1 x y zp + a3 y zp^2 - x^3 = 0.
inline PolyXYZ curve_equation(Mode m, int prec)
{
    PolyXYZ p(m, prec);
    LocElem one = LocElem::constant(1, m, prec);
    p.add({0, 2, 1}, one);
    p.add({1, 1, 1}, LocElem::a1(m, prec));
    p.add({0, 1, 2}, LocElem::a3(m, prec));
    p.add({3, 0, 0}, -one);
    return p;
}

// The inversion acts by [x : y : zp] -> [x : -y - a1 x - a3 zp : zp]. The
// 2-torsion equalizer ideal is generated by the 2x2 minors of the coordinate
// matrix, i.e. x*(2y + a1 x + a3 zp) and zp*(2y + a1 x + a3 zp).
inline std::array<PolyXYZ, 2> equalizer_equations(Mode m, int prec)
{
    PolyXYZ common(m, prec);
    common.add({0, 1, 0}, LocElem::constant(2, m, prec));
    common.add({1, 0, 0}, LocElem::a1(m, prec));
    common.add({0, 0, 1}, LocElem::a3(m, prec));
    PolyXYZ x = PolyXYZ::term({1, 0, 0}, LocElem::constant(1, m, prec));
    PolyXYZ zp = PolyXYZ::term({0, 0, 1}, LocElem::constant(1, m, prec));
    return {x * common, zp * common};
}

// Substitute x = -z, y = 1, zp = -w (the affine chart z = -x/y, w = -zp/y).
inline PolyZW to_chart(const PolyXYZ& p)
{
    PolyZW r(p.mode(), p.precision());
    for (auto& [e, c] : p.terms()) {
        int sign = ((e[0] + e[2]) % 2) ? -1 : 1;
        r.add({e[0], e[2]}, sign > 0 ? c : -c);
    }
    return r;
}

// Chart relations, sign-normalized so the paper's generators appear verbatim:
//   z^3 - w + a1 z w + a3 w^2,  2z - a1 z^2 - a3 z w,  2w - a1 z w - a3 w^2.
inline std::vector<ChartRelation> to_affine_chart(Mode m, int prec)
{
    auto eq = equalizer_equations(m, prec);
    PolyZW r1 = to_chart(curve_equation(m, prec));
    PolyZW r2 = -to_chart(eq[0]);
    PolyZW r3 = -to_chart(eq[1]);
    return {{"curve", r1}, {"eq_x", r2}, {"eq_zp", r3}};
}

inline PolyZ subst_w(const PolyZW& p, int sign_pow)
{
    // w -> -z^3
    PolyZ r(p.mode(), p.precision());
    (void)sign_pow;
    for (auto& [e, c] : p.terms()) {
        int sign = (e[1] % 2) ? -1 : 1;
        r.add({e[0] + 3 * e[1]}, sign > 0 ? c : -c);
    }
    return r;
}

// Polynomial division in z when the divisor's leading coefficient is a unit.
inline std::optional<PolyZ> div_z(const PolyZ& num, const PolyZ& den)
{
    if (den.is_zero()) return std::nullopt;
    int dl = den.terms().rbegin()->first[0];
    LocElem lead = den.terms().rbegin()->second;
    if (!lead.is_unit()) return std::nullopt;
    LocElem linv = lead.inverse();
    PolyZ rem = num, quot(num.mode(), num.precision());
    while (!rem.is_zero()) {
        int nl = rem.terms().rbegin()->first[0];
        if (nl < dl) return std::nullopt;
        LocElem qc = rem.terms().rbegin()->second * linv;
        quot.add({nl - dl}, qc);
        PolyZ sub(num.mode(), num.precision());
        for (auto& [e, c] : den.terms()) sub.add({e[0] + nl - dl}, c * qc);
        rem = rem - sub;
    }
    return quot;
}

struct TorsionPresentation {
    PolyZ relation;                      // 2z - a1 z^2 + a3 z^4
    std::vector<PolyZ> residual_checks;  // other generators after w-elimination,
                                         // each a PolyZ multiple of `relation`
};

// Eliminate w = -z^3 (forced by the curve relation z^3 + w = 0 in the
// quotient) and return the single defining relation of the torsion module
// M = A[z] / (2z - a1 z^2 + a3 z^4), |z| = -2.
inline TorsionPresentation eliminate_w(Mode m, int prec)
{
    auto rels = to_affine_chart(m, prec);
    PolyZ q = subst_w(rels[1].rel, 0);  // 2z - a1 z^2 + a3 z^4
    TorsionPresentation out{q, {}};
    for (auto& cr : rels) {
        if (&cr == &rels[1]) continue;
        PolyZ s = subst_w(cr.rel, 0);
        auto quot = div_z(s, q);
        if (!quot)
            throw std::runtime_error("eliminate_w: residual relation not a multiple");
        out.residual_checks.push_back(*quot);
    }
    return out;
}

// Polynomial in z with Gamma coefficients, for the coaction fraction.
struct GPolyZ {
    std::map<int, GammaElem> t;
    void add(int e, const GammaElem& g)
    {
        if (g.is_zero()) return;
        auto it = t.find(e);
        if (it == t.end())
            t.emplace(e, g);
        else {
            it->second = it->second + g;
            if (it->second.is_zero()) t.erase(it);
        }
    }
    friend bool operator==(const GPolyZ& a, const GPolyZ& b)
    {
        if (a.t.size() != b.t.size()) return false;
        for (auto& [e, g] : a.t) {
            auto it = b.t.find(e);
            if (it == b.t.end() || !(it->second == g)) return false;
        }
        return true;
    }
};

// Universal coordinate change x -> x + r zp, y -> y + s x + t zp applied to
// the chart coordinate z = -x/y over w = -z^3: the coaction on z is the
// fraction (z - r z^3) / (1 - s z + t z^3).
inline std::pair<GPolyZ, GPolyZ> derive_coaction_fraction(Mode m, int prec)
{
    GammaElem one = GammaElem::scalar(LocElem::constant(1, m, prec));
    GammaElem s = GammaElem::word(word_index(1, 0), m, prec);
    GammaElem t = GammaElem::word(word_index(0, 1), m, prec);
    GammaElem r = r_elem(m, prec);
    // x = -z*y, zp = z^3*y (w = -zp/y = -z^3), y = y: numerator
    // -(x + r zp) / y = z - r z^3; denominator (y + s x + t zp)/y = 1 - s z + t z^3.
    GPolyZ num, den;
    num.add(1, one);
    num.add(3, -r);
    den.add(0, one);
    den.add(1, -s);
    den.add(3, t);
    return {num, den};
}

}  // namespace cbf
