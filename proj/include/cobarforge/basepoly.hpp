#pragma once

#include <map>
#include <optional>
#include <sstream>
#include <vector>

#include "coeff.hpp"

namespace cbf {

// Monomial a1^i a3^j. |a1| = 2, |a3| = 6. Ordered graded-lex: by internal
// degree, then by a3-exponent, so printing and pivot choices are deterministic.
struct Mono {
    int i = 0, j = 0;
    int degree() const { return 2 * i + 6 * j; }
    friend bool operator<(const Mono& a, const Mono& b)
    {
        if (a.degree() != b.degree()) return a.degree() < b.degree();
        if (a.j != b.j) return a.j < b.j;
        return a.i < b.i;
    }
    friend bool operator==(const Mono& a, const Mono& b)
    {
        return a.i == b.i && a.j == b.j;
    }
};

// Polynomial in a1, a3 with truncated 2-adic (or F2) coefficients. All
// coefficients of one polynomial share a mode; precision may vary per
// coefficient only transiently (operations re-truncate).
class BasePoly {
public:
    using Terms = std::map<Mono, Coeff>;

    BasePoly() = default;
    explicit BasePoly(Mode m, int prec) : mode_(m), prec_(prec) {}

    static BasePoly zero(Mode m, int prec) { return BasePoly(m, prec); }
    static BasePoly constant(int64_t c, Mode m, int prec)
    {
        BasePoly p(m, prec);
        p.add_term({0, 0}, Coeff(c, m == Mode::F2 ? 1 : prec, m));
        return p;
    }
    static BasePoly monomial(int i, int j, int64_t c, Mode m, int prec)
    {
        BasePoly p(m, prec);
        p.add_term({i, j}, Coeff(c, m == Mode::F2 ? 1 : prec, m));
        return p;
    }

    Mode mode() const { return mode_; }
    int precision() const { return prec_; }
    const Terms& terms() const { return t_; }
    bool is_zero() const { return t_.empty(); }

    void add_term(Mono m, const Coeff& c)
    {
        if (c.mode != mode_)
            throw std::invalid_argument("BasePoly: coefficient mode mismatch");
        Coeff cc = c.truncated(prec_);
        auto it = t_.find(m);
        if (it == t_.end()) {
            if (!cc.is_zero()) t_.emplace(m, cc);
        } else {
            it->second = it->second + cc;
            if (it->second.is_zero()) t_.erase(it);
        }
    }

    friend BasePoly operator+(const BasePoly& a, const BasePoly& b)
    {
        check(a, b);
        BasePoly r = a;
        r.prec_ = std::min(a.prec_, b.prec_);
        for (auto& [m, c] : b.t_) r.add_term(m, c);
        r.retruncate();
        return r;
    }
    friend BasePoly operator-(const BasePoly& a, const BasePoly& b)
    {
        return a + (-b);
    }
    BasePoly operator-() const
    {
        BasePoly r(mode_, prec_);
        for (auto& [m, c] : t_) r.t_.emplace(m, -c);
        return r;
    }
    friend BasePoly operator*(const BasePoly& a, const BasePoly& b)
    {
        check(a, b);
        BasePoly r(a.mode_, std::min(a.prec_, b.prec_));
        for (auto& [ma, ca] : a.t_)
            for (auto& [mb, cb] : b.t_)
                r.add_term({ma.i + mb.i, ma.j + mb.j}, ca * cb);
        return r;
    }
    BasePoly scaled(const Coeff& c) const
    {
        BasePoly r(mode_, std::min<int>(prec_, c.n));
        for (auto& [m, cc] : t_) r.add_term(m, cc * c);
        return r;
    }
    BasePoly scaled(int64_t c) const
    {
        return scaled(Coeff(c, mode_ == Mode::F2 ? 1 : prec_, mode_));
    }

    friend bool operator==(const BasePoly& a, const BasePoly& b)
    {
        return (a - b).is_zero();
    }
    friend bool operator!=(const BasePoly& a, const BasePoly& b) { return !(a == b); }

    bool is_homogeneous() const
    {
        if (t_.empty()) return true;
        int d = t_.begin()->first.degree();
        for (auto& [m, c] : t_)
            if (m.degree() != d) return false;
        return true;
    }
    // Degree of a homogeneous polynomial; nullopt for 0.
    std::optional<int> degree() const
    {
        if (t_.empty()) return std::nullopt;
        return t_.begin()->first.degree();
    }

    bool divisible_a3() const
    {
        for (auto& [m, c] : t_)
            if (m.j == 0) return false;
        return true;
    }
    BasePoly div_a3() const
    {
        BasePoly r(mode_, prec_);
        for (auto& [m, c] : t_) {
            if (m.j == 0) throw std::invalid_argument("div_a3: not divisible");
            r.t_.emplace(Mono{m.i, m.j - 1}, c);
        }
        return r;
    }

    // Division by v2 = a1^3 - 27 a3, exact or nullopt. The a3-leading
    // coefficient -27 is a unit, so this is ordinary poly division in a3.
    std::optional<BasePoly> div_v2() const
    {
        Coeff inv27 = invert_unit(Coeff(-27, mode_ == Mode::F2 ? 1 : prec_, mode_));
        BasePoly rem = *this;
        BasePoly quot(mode_, prec_);
        while (!rem.is_zero()) {
            // highest a3-exponent term
            auto best = rem.t_.begin();
            for (auto it = rem.t_.begin(); it != rem.t_.end(); ++it)
                if (it->first.j > best->first.j) best = it;
            if (best->first.j == 0) return std::nullopt;
            Mono qm{best->first.i, best->first.j - 1};
            Coeff qc = best->second * inv27;
            quot.add_term(qm, qc);
            // rem -= qc * a1^qi a3^qj * (a1^3 - 27 a3)
            rem.add_term({qm.i + 3, qm.j}, -qc);
            rem.add_term({qm.i, qm.j + 1}, qc * Coeff(27, rem.prec_, mode_));
        }
        return quot;
    }

    bool divisible_by_2k(int k) const
    {
        for (auto& [m, c] : t_)
            if (!c.divisible_by_2k(k)) return false;
        return true;
    }
    BasePoly div_pow2(int k) const
    {
        BasePoly r(mode_, prec_ - k);
        for (auto& [m, c] : t_) {
            Coeff d = c.div_pow2(k);
            if (!d.is_zero()) r.t_.emplace(m, d);
        }
        return r;
    }

    BasePoly truncated(int prec) const
    {
        if (prec >= prec_) return *this;
        BasePoly r(mode_, prec);
        for (auto& [m, c] : t_) {
            Coeff d = c.truncated(prec);
            if (!d.is_zero()) r.t_.emplace(m, d);
        }
        return r;
    }
    BasePoly mod2() const
    {
        BasePoly r(Mode::F2, 1);
        for (auto& [m, c] : t_) {
            Coeff d = c.mod2();
            if (!d.is_zero()) r.t_.emplace(m, d);
        }
        return r;
    }
    BasePoly lifted(int prec) const
    {
        BasePoly r(Mode::Z2N, prec);
        for (auto& [m, c] : t_) r.t_.emplace(m, c.lifted(prec));
        return r;
    }

    std::string str() const
    {
        if (t_.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        for (auto& [m, c] : t_) {
            uint64_t half = uint64_t(1) << (c.n - 1);
            bool neg = c.n > 1 && c.v > half;
            uint64_t mag = neg ? ((~c.v + 1) & pow2_mask(c.n)) : c.v;
            if (first) {
                if (neg) os << "-";
            } else {
                os << (neg ? " - " : " + ");
            }
            first = false;
            bool unitco = (mag == 1) && (m.i || m.j);
            if (!unitco) os << mag;
            bool needstar = !unitco;
            if (m.i) {
                if (needstar) os << "*";
                os << "a1";
                if (m.i > 1) os << "^" << m.i;
                needstar = true;
            }
            if (m.j) {
                if (needstar) os << "*";
                os << "a3";
                if (m.j > 1) os << "^" << m.j;
            }
        }
        return os.str();
    }

private:
    static void check(const BasePoly& a, const BasePoly& b)
    {
        if (a.mode_ != b.mode_)
            throw std::invalid_argument("BasePoly: mixing F2 and Z/2^N modes");
    }
    void retruncate()
    {
        for (auto it = t_.begin(); it != t_.end();) {
            it->second = it->second.truncated(prec_);
            it = it->second.is_zero() ? t_.erase(it) : std::next(it);
        }
    }

    Mode mode_ = Mode::Z2N;
    int prec_ = 1;
    Terms t_;
};

}  // namespace cbf
