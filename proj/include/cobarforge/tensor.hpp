#pragma once

#include <cstdint>
#include <functional>

#include "gamma.hpp"

namespace cbf {

class TensorElem;

// Description of a comodule with a chosen finite A-basis. The coaction sends
// basis element i to a normalized element of Gamma tensor M (arity 1).
struct ComodDesc {
    std::string name;
    std::vector<int> degrees;  // internal degree of each basis element
    std::function<TensorElem(int, Mode, int)> coaction;  // psi(e_i)
    int size() const { return int(degrees.size()); }
};

struct ChainKey {
    std::vector<uint8_t> w;  // Gamma words, leftmost slot first
    uint8_t m = 0;           // comodule basis index
    friend bool operator<(const ChainKey& a, const ChainKey& b)
    {
        if (a.w != b.w) return a.w < b.w;
        return a.m < b.m;
    }
    friend bool operator==(const ChainKey& a, const ChainKey& b)
    {
        return a.w == b.w && a.m == b.m;
    }
};

// Normalized element of Gamma^{tensor k} tensor M: an A-linear combination of
// keys (word tuple, basis index) with the coefficient attached plainly on the
// left. Coefficients entering at an inner slot are moved left through eta_R
// (gamma tensor a*gamma' = gamma*eta_R(a) tensor gamma').
class TensorElem {
public:
    TensorElem() = default;
    TensorElem(int arity, const ComodDesc* comod, Mode m, int prec)
        : arity_(arity), comod_(comod), mode_(m), prec_(prec)
    {
    }

    int arity() const { return arity_; }
    const ComodDesc* comod() const { return comod_; }
    Mode mode() const { return mode_; }
    int precision() const { return prec_; }
    const std::map<ChainKey, LocElem>& terms() const { return t_; }
    bool is_zero() const { return t_.empty(); }

    void add_plain(const ChainKey& k, const LocElem& c)
    {
        if (c.is_zero()) return;
        if (int(k.w.size()) != arity_)
            throw std::invalid_argument("TensorElem: arity mismatch");
        auto it = t_.find(k);
        if (it == t_.end())
            t_.emplace(k, c);
        else {
            it->second = it->second + c;
            if (it->second.is_zero()) t_.erase(it);
        }
    }

    // Add c * (w_1 @ ... @ w_k @ e_m) with c attached at `slot`:
    // slot 0 = plain/external, slot i in 1..k = left of word i,
    // slot k+1 = on the comodule element.
    void add_at_slot(std::vector<uint8_t> w, uint8_t m, const LocElem& c, int slot)
    {
        if (c.is_zero()) return;
        if (slot <= 0 || (slot == 1 && arity_ >= 1)) {
            // coefficient on slot 1 (or external) is plain left multiplication
            add_plain({std::move(w), m}, c);
            return;
        }
        if (arity_ == 0) {
            add_plain({std::move(w), m}, c);
            return;
        }
        int cross = std::min(slot, arity_ + 1) - 2;  // word index picking up eta_R(c)
        GammaElem g = word_times(w[cross], eta_R(c));
        for (int v = 0; v < kGammaRank; ++v) {
            if (g.c[v].is_zero()) continue;
            std::vector<uint8_t> w2 = w;
            w2[cross] = uint8_t(v);
            add_at_slot(std::move(w2), m, g.c[v], cross + 1);
        }
    }

    friend TensorElem operator+(const TensorElem& a, const TensorElem& b)
    {
        check(a, b);
        TensorElem r = a;
        r.prec_ = std::min(a.prec_, b.prec_);
        for (auto& [k, c] : b.t_) r.add_plain(k, c);
        return r;
    }
    friend TensorElem operator-(const TensorElem& a, const TensorElem& b)
    {
        check(a, b);
        TensorElem r = a;
        r.prec_ = std::min(a.prec_, b.prec_);
        for (auto& [k, c] : b.t_) r.add_plain(k, -c);
        return r;
    }
    TensorElem operator-() const
    {
        TensorElem r(arity_, comod_, mode_, prec_);
        for (auto& [k, c] : t_) r.t_.emplace(k, -c);
        return r;
    }
    TensorElem scaled(const LocElem& a) const
    {
        TensorElem r(arity_, comod_, mode_, prec_);
        for (auto& [k, c] : t_) r.add_plain(k, c * a);
        return r;
    }
    friend bool operator==(const TensorElem& a, const TensorElem& b)
    {
        return (a - b).is_zero();
    }
    friend bool operator!=(const TensorElem& a, const TensorElem& b)
    {
        return !(a == b);
    }

    TensorElem mod2() const
    {
        TensorElem r(arity_, comod_, Mode::F2, 1);
        for (auto& [k, c] : t_) r.add_plain(k, c.mod2());
        return r;
    }
    TensorElem lifted(int prec) const
    {
        TensorElem r(arity_, comod_, Mode::Z2N, prec);
        for (auto& [k, c] : t_) r.add_plain(k, c.lifted(prec));
        return r;
    }
    TensorElem reduced() const
    {
        TensorElem r(arity_, comod_, mode_, prec_);
        for (auto& [k, c] : t_) r.t_.emplace(k, c.reduced());
        return r;
    }
    bool divisible_by_2k(int k) const
    {
        for (auto& [key, c] : t_)
            if (!c.divisible_by_2k(k)) return false;
        return true;
    }
    TensorElem div_pow2(int k) const
    {
        TensorElem r(arity_, comod_, mode_, prec_ - k);
        for (auto& [key, c] : t_) {
            LocElem d = c.div_pow2(k);
            if (!d.is_zero()) r.t_.emplace(key, d);
        }
        return r;
    }
    TensorElem truncated(int prec) const
    {
        TensorElem r(arity_, comod_, mode_, std::min(prec, prec_));
        for (auto& [key, c] : t_) {
            LocElem d = c.truncated(prec);
            if (!d.is_zero()) r.t_.emplace(key, d);
        }
        return r;
    }

    // Internal degree: coefficient degree + word degrees + comodule degree.
    // Throws on inhomogeneous input; nullopt for zero.
    std::optional<int> degree() const
    {
        std::optional<int> deg;
        for (auto& [k, c] : t_) {
            if (!c.is_homogeneous())
                throw std::invalid_argument("TensorElem: inhomogeneous coefficient");
            int d = *c.degree() + comod_->degrees[k.m];
            for (uint8_t w : k.w) d += word_degree(w);
            if (!deg) deg = d;
            else if (*deg != d)
                throw std::invalid_argument("TensorElem: inhomogeneous chain");
        }
        return deg;
    }

    std::string str(const std::vector<std::string>& mnames = {}) const
    {
        std::string out;
        for (auto& [k, c] : t_) {
            if (!out.empty()) out += " + ";
            out += "(" + c.str() + ")[";
            for (size_t i = 0; i < k.w.size(); ++i) {
                if (i) out += "|";
                out += word_str(k.w[i]);
            }
            out += "]";
            out += k.m < mnames.size() ? mnames[k.m] : ("e" + std::to_string(k.m));
        }
        return out.empty() ? "0" : out;
    }

private:
    static void check(const TensorElem& a, const TensorElem& b)
    {
        if (a.arity_ != b.arity_ || a.comod_ != b.comod_)
            throw std::invalid_argument("TensorElem: shape mismatch");
        if (a.mode_ != b.mode_)
            throw std::invalid_argument("TensorElem: mixing F2 and Z/2^N modes");
    }

    int arity_ = 0;
    const ComodDesc* comod_ = nullptr;
    Mode mode_ = Mode::Z2N;
    int prec_ = 1;
    std::map<ChainKey, LocElem> t_;
};

// Exposed form of the tensor relation: rewrite a coefficient sitting at
// `slot` into the normalized left-plain representation.
inline TensorElem shift_coeff_left(int arity, const ComodDesc* comod,
                                   std::vector<uint8_t> w, uint8_t m,
                                   const LocElem& c, int slot)
{
    TensorElem r(arity, comod, c.mode(), c.precision());
    r.add_at_slot(std::move(w), m, c, slot);
    return r;
}

// The unit comodule A: one basis element of degree 0, coaction e -> 1 @ e.
inline const ComodDesc& unit_comodule()
{
    static ComodDesc d{
        "unit",
        {0},
        [](int, Mode m, int prec) {
            TensorElem r(1, &unit_comodule(), m, prec);
            r.add_plain({{0}, 0}, LocElem::constant(1, m, prec));
            return r;
        }};
    return d;
}

// Multiplication of arity-1 elements when the comodule is an algebra with
// structure constants given by `mul_basis(i, j)` returning an arity-1 elem.
inline TensorElem gm_mul(const TensorElem& a, const TensorElem& b,
                         const std::function<TensorElem(int, int)>& mul_basis)
{
    if (a.arity() != 1 || b.arity() != 1)
        throw std::invalid_argument("gm_mul: arity-1 inputs required");
    TensorElem r(1, a.comod(), a.mode(), std::min(a.precision(), b.precision()));
    for (auto& [ka, ca] : a.terms())
        for (auto& [kb, cb] : b.terms()) {
            const GammaElem& words =
                word_mul_cached(ka.w[0], kb.w[0], r.mode(), r.precision());
            TensorElem mm = mul_basis(ka.m, kb.m);
            for (auto& [km, cm] : mm.terms())
                for (int w = 0; w < kGammaRank; ++w) {
                    if (words.c[w].is_zero()) continue;
                    const GammaElem& wprod =
                        word_mul_cached(w, km.w[0], r.mode(), r.precision());
                    for (int v = 0; v < kGammaRank; ++v) {
                        if (wprod.c[v].is_zero()) continue;
                        r.add_plain({{uint8_t(v)}, km.m},
                                    ca * cb * cm * words.c[w] * wprod.c[v]);
                    }
                }
        }
    return r;
}

}  // namespace cbf
