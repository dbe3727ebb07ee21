#pragma once

#include <array>
#include <functional>
#include <mutex>

#include "locelem.hpp"

namespace cbf {

// Word basis of Gamma = A[s,t]/I as a free A-module:
// index p + 4q  <->  s^p t^q,  p in 0..3, q in 0..1.
constexpr int kGammaRank = 8;
inline int word_index(int p, int q) { return p + 4 * q; }
inline int word_s(int w) { return w % 4; }
inline int word_t(int w) { return w / 4; }
inline int word_degree(int w) { return 2 * word_s(w) + 6 * word_t(w); }
inline std::string word_str(int w)
{
    int p = word_s(w), q = word_t(w);
    if (!p && !q) return "1";
    std::string r;
    if (p) { r += "s"; if (p > 1) r += "^" + std::to_string(p); }
    if (q) { if (p) r += "*"; r += "t"; }
    return r;
}

// Element of Gamma in normal form: A-linear combination of the eight words.
struct GammaElem {
    std::array<LocElem, kGammaRank> c;

    explicit GammaElem(Mode m = Mode::Z2N, int prec = 1)
    {
        for (auto& x : c) x = LocElem::zero(m, prec);
    }
    static GammaElem word(int w, Mode m, int prec)
    {
        GammaElem g(m, prec);
        g.c[w] = LocElem::constant(1, m, prec);
        return g;
    }
    static GammaElem scalar(const LocElem& a)
    {
        GammaElem g(a.mode(), a.precision());
        g.c[0] = a;
        return g;
    }

    Mode mode() const { return c[0].mode(); }
    int precision() const { return c[0].precision(); }
    bool is_zero() const
    {
        for (auto& x : c)
            if (!x.is_zero()) return false;
        return true;
    }

    friend GammaElem operator+(const GammaElem& a, const GammaElem& b)
    {
        GammaElem r(a.mode(), std::min(a.precision(), b.precision()));
        for (int w = 0; w < kGammaRank; ++w) r.c[w] = a.c[w] + b.c[w];
        return r;
    }
    friend GammaElem operator-(const GammaElem& a, const GammaElem& b)
    {
        GammaElem r(a.mode(), std::min(a.precision(), b.precision()));
        for (int w = 0; w < kGammaRank; ++w) r.c[w] = a.c[w] - b.c[w];
        return r;
    }
    GammaElem operator-() const
    {
        GammaElem r(mode(), precision());
        for (int w = 0; w < kGammaRank; ++w) r.c[w] = -c[w];
        return r;
    }
    GammaElem scaled(const LocElem& a) const
    {
        GammaElem r(mode(), precision());
        for (int w = 0; w < kGammaRank; ++w) r.c[w] = c[w] * a;
        return r;
    }
    friend bool operator==(const GammaElem& a, const GammaElem& b)
    {
        for (int w = 0; w < kGammaRank; ++w)
            if (a.c[w] != b.c[w]) return false;
        return true;
    }
    friend bool operator!=(const GammaElem& a, const GammaElem& b) { return !(a == b); }

    GammaElem reduced() const
    {
        GammaElem r(mode(), precision());
        for (int w = 0; w < kGammaRank; ++w) r.c[w] = c[w].reduced();
        return r;
    }
    GammaElem truncated(int prec) const
    {
        GammaElem r(mode(), std::min(precision(), prec));
        for (int w = 0; w < kGammaRank; ++w) r.c[w] = c[w].truncated(prec);
        return r;
    }
    GammaElem mod2() const
    {
        GammaElem r(Mode::F2, 1);
        for (int w = 0; w < kGammaRank; ++w) r.c[w] = c[w].mod2();
        return r;
    }
    GammaElem lifted(int prec) const
    {
        GammaElem r(Mode::Z2N, prec);
        for (int w = 0; w < kGammaRank; ++w) r.c[w] = c[w].lifted(prec);
        return r;
    }
    bool divisible_by_2k(int k) const
    {
        for (auto& x : c)
            if (!x.divisible_by_2k(k)) return false;
        return true;
    }
    GammaElem div_pow2(int k) const
    {
        GammaElem r(mode(), precision() - k);
        for (int w = 0; w < kGammaRank; ++w) r.c[w] = c[w].div_pow2(k);
        return r;
    }

    std::string str() const
    {
        std::string out;
        for (int w = 0; w < kGammaRank; ++w) {
            if (c[w].is_zero()) continue;
            if (!out.empty()) out += " + ";
            out += "(" + c[w].str() + ")*[" + word_str(w) + "]";
        }
        return out.empty() ? "0" : out;
    }
};

// Which defining relation to try first when reducing monomials; the normal
// form is independent of this choice (checked by tests).
enum class RuleOrder { T2First, S4First };

// Unreduced polynomial in s, t with A-coefficients, supporting reduction to
// the word basis. Exponent key: (p, q).
class GammaPoly {
public:
    using Key = std::pair<int, int>;
    explicit GammaPoly(Mode m, int prec) : mode_(m), prec_(prec) {}

    void add(Key k, const LocElem& c)
    {
        if (c.is_zero()) return;
        auto it = t_.find(k);
        if (it == t_.end())
            t_.emplace(k, c);
        else {
            it->second = it->second + c;
            if (it->second.is_zero()) t_.erase(it);
        }
    }
    void add_gamma(const GammaElem& g)
    {
        for (int w = 0; w < kGammaRank; ++w) add({word_s(w), word_t(w)}, g.c[w]);
    }

    // Rewrite until every monomial has p <= 3, q <= 1. The defining relations
    //   s^4 = 6st - a1 s^3 + 3a1 t + 3a3 s
    //   27 t^2 = s^6 + 3a1 s^5 - 9a1 s^2 t + 3a1^2 s^4 - 9a1^2 s t + a1^3 s^3 - 27 a3 t
    // generate rewriting loops whose coefficient is divisible by 2, so at
    // finite 2-adic precision the process terminates.
    GammaElem normal_form(RuleOrder order = RuleOrder::T2First) const
    {
        GammaPoly p = *this;
        LocElem a1 = LocElem::a1(mode_, prec_);
        LocElem a3 = LocElem::a3(mode_, prec_);
        LocElem inv27 = LocElem::constant(27, mode_, prec_).inverse();
        int guard = 0;
        for (;;) {
            if (++guard > 100000)
                throw std::runtime_error("GammaPoly: normal form did not terminate");
            auto it = p.t_.end();
            bool use_t2 = false;
            for (auto jt = p.t_.begin(); jt != p.t_.end(); ++jt) {
                auto [ps, qt] = jt->first;
                bool t2 = qt >= 2, s4 = ps >= 4;
                if (!t2 && !s4) continue;
                bool pick_t2 = (order == RuleOrder::T2First) ? t2 : (t2 && !s4);
                it = jt;
                use_t2 = pick_t2;
                break;
            }
            if (it == p.t_.end()) break;
            auto [ps, qt] = it->first;
            LocElem c = it->second;
            p.t_.erase(it);
            if (use_t2) {
                // t^2 = 27^{-1}(s^6 + 3a1 s^5 - 9a1 s^2 t + 3a1^2 s^4
                //               - 9a1^2 s t + a1^3 s^3 - 27 a3 t)
                LocElem k = c * inv27;
                p.add({ps + 6, qt - 2}, k);
                p.add({ps + 5, qt - 2}, k * a1.scaled(3));
                p.add({ps + 2, qt - 1}, k * a1.scaled(-9));
                p.add({ps + 4, qt - 2}, k * a1 * a1.scaled(3));
                p.add({ps + 1, qt - 1}, k * a1 * a1.scaled(-9));
                p.add({ps + 3, qt - 2}, k * a1 * a1 * a1);
                p.add({ps, qt - 1}, c * (-a3));
            } else {
                // s^4 = 6st - a1 s^3 + 3a1 t + 3a3 s
                p.add({ps - 3, qt + 1}, c.scaled(6));
                p.add({ps - 1, qt}, c * (-a1));
                p.add({ps - 4, qt + 1}, c * a1.scaled(3));
                p.add({ps - 3, qt}, c * a3.scaled(3));
            }
        }
        GammaElem g(mode_, prec_);
        for (auto& [k, c] : p.t_) g.c[word_index(k.first, k.second)] = g.c[word_index(k.first, k.second)] + c;
        return g;
    }

private:
    Mode mode_;
    int prec_;
    std::map<Key, LocElem> t_;
};

inline GammaElem gamma_mul(const GammaElem& a, const GammaElem& b,
                           RuleOrder order = RuleOrder::T2First)
{
    Mode m = a.mode();
    int prec = std::min(a.precision(), b.precision());
    GammaPoly p(m, prec);
    for (int w1 = 0; w1 < kGammaRank; ++w1) {
        if (a.c[w1].is_zero()) continue;
        for (int w2 = 0; w2 < kGammaRank; ++w2) {
            if (b.c[w2].is_zero()) continue;
            p.add({word_s(w1) + word_s(w2), word_t(w1) + word_t(w2)},
                  a.c[w1] * b.c[w2]);
        }
    }
    return p.normal_form(order);
}

// Product of two basis words, cached per (mode, precision): the inner loop of
// every tensor-level multiplication.
inline const GammaElem& word_mul_cached(int w1, int w2, Mode m, int prec)
{
    static std::map<std::tuple<int, int, int, int>, GammaElem> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_tuple(w1, w2, int(m), prec);
    auto it = cache.find(key);
    if (it == cache.end())
        it = cache
                 .emplace(key, gamma_mul(GammaElem::word(w1, m, prec),
                                         GammaElem::word(w2, m, prec)))
                 .first;
    return it->second;
}

// Product using cached word products: Gamma is commutative, so a general
// product is a double sum of word products with plainly multiplied
// coefficients, avoiding a fresh normal-form pass.
inline GammaElem gamma_mul_fast(const GammaElem& a, const GammaElem& b)
{
    Mode m = a.mode();
    int prec = std::min(a.precision(), b.precision());
    GammaElem r(m, prec);
    for (int u = 0; u < kGammaRank; ++u) {
        if (a.c[u].is_zero()) continue;
        for (int v = 0; v < kGammaRank; ++v) {
            if (b.c[v].is_zero()) continue;
            const GammaElem& uv = word_mul_cached(u, v, m, prec);
            LocElem c = a.c[u] * b.c[v];
            for (int w = 0; w < kGammaRank; ++w)
                if (!uv.c[w].is_zero()) r.c[w] = r.c[w] + uv.c[w] * c;
        }
    }
    return r;
}

// word(w) * g through the word-product cache.
inline GammaElem word_times(int w, const GammaElem& g)
{
    Mode m = g.mode();
    int prec = g.precision();
    GammaElem r(m, prec);
    for (int u = 0; u < kGammaRank; ++u) {
        if (g.c[u].is_zero()) continue;
        const GammaElem& wu = word_mul_cached(w, u, m, prec);
        for (int v = 0; v < kGammaRank; ++v)
            if (!wu.c[v].is_zero()) r.c[v] = r.c[v] + wu.c[v] * g.c[u];
    }
    return r;
}

inline GammaElem gamma_pow(const GammaElem& g, int n)
{
    GammaElem r = GammaElem::scalar(LocElem::constant(1, g.mode(), g.precision()));
    for (int k = 0; k < n; ++k) r = gamma_mul(r, g);
    return r;
}

// r = 3^{-1}(s^2 + a1 s), degree 4.
inline GammaElem r_elem(Mode m, int prec)
{
    LocElem inv3 = LocElem::constant(3, m, prec).inverse();
    GammaElem g(m, prec);
    g.c[word_index(2, 0)] = inv3;
    g.c[word_index(1, 0)] = inv3 * LocElem::a1(m, prec);
    return g;
}

// Right unit. eta_R(a1) = a1 + 2s, eta_R(a3) = a3 + a1 r + 2t; denominators
// clear through eta_R(Delta) = Delta via a3^{-i} v2^{-j} = (a3^2 v2)^i (a3^3)^j Delta^{-(i+j)}.
inline GammaElem eta_R_a1(Mode m, int prec)
{
    GammaElem g(m, prec);
    g.c[0] = LocElem::a1(m, prec);
    g.c[word_index(1, 0)] = LocElem::constant(2, m, prec);
    return g;
}
inline GammaElem eta_R_a3(Mode m, int prec)
{
    GammaElem g = r_elem(m, prec).scaled(LocElem::a1(m, prec));
    g.c[0] = g.c[0] + LocElem::a3(m, prec);
    g.c[word_index(0, 1)] = g.c[word_index(0, 1)] + LocElem::constant(2, m, prec);
    return g;
}

namespace detail {

// eta_R(a1^i a3^j), memoized; built incrementally from smaller exponents.
inline const GammaElem& eta_R_mono_impl(
    int i, int j, Mode m, int prec,
    std::map<std::tuple<int, int, int, int>, GammaElem>& cache)
{
    auto key = std::make_tuple(i, j, int(m), prec);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    GammaElem v(m, prec);
    if (i == 0 && j == 0)
        v = GammaElem::scalar(LocElem::constant(1, m, prec));
    else if (i > 0)
        v = gamma_mul_fast(eta_R_mono_impl(i - 1, j, m, prec, cache), eta_R_a1(m, prec));
    else
        v = gamma_mul_fast(eta_R_mono_impl(0, j - 1, m, prec, cache), eta_R_a3(m, prec));
    return cache.emplace(key, std::move(v)).first->second;
}

// eta_R(a3)^{2i+3j} eta_R(v2)^i, the numerator of the image of a3^{-i} v2^{-j}.
inline const GammaElem& eta_R_den_impl(
    int i, int j, Mode m, int prec,
    std::map<std::tuple<int, int, int, int>, GammaElem>& cache)
{
    auto key = std::make_tuple(i, j, int(m), prec);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    GammaElem v(m, prec);
    GammaElem ra3 = eta_R_a3(m, prec);
    if (i == 0 && j == 0) {
        v = GammaElem::scalar(LocElem::constant(1, m, prec));
    } else if (j > 0) {
        v = gamma_mul_fast(eta_R_den_impl(i, j - 1, m, prec, cache),
                           gamma_mul_fast(gamma_mul_fast(ra3, ra3), ra3));
    } else {
        GammaElem ra1 = eta_R_a1(m, prec);
        GammaElem rv2 = gamma_mul_fast(gamma_mul_fast(ra1, ra1), ra1) -
                        ra3.scaled(LocElem::constant(27, m, prec));
        v = gamma_mul_fast(eta_R_den_impl(i - 1, 0, m, prec, cache),
                           gamma_mul_fast(gamma_mul_fast(ra3, ra3), rv2));
    }
    return cache.emplace(key, std::move(v)).first->second;
}

}  // namespace detail

inline GammaElem eta_R(const LocElem& x)
{
    Mode m = x.mode();
    int prec = x.precision();
    static std::map<std::tuple<int, int, int, int>, GammaElem> mono_cache;
    static std::map<std::tuple<int, int, int, int>, GammaElem> den_cache;
    static std::map<std::tuple<std::string, int, int>, GammaElem> value_cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto vkey = std::make_tuple(x.str(), int(m), prec);
    if (auto it = value_cache.find(vkey); it != value_cache.end()) return it->second;
    GammaElem out(m, prec);
    for (auto& [mono, c] : x.num().terms()) {
        const GammaElem& term = detail::eta_R_mono_impl(mono.i, mono.j, m, prec, mono_cache);
        LocElem cc = LocElem(BasePoly::constant(1, m, prec)).scaled(c);
        for (int w = 0; w < kGammaRank; ++w)
            if (!term.c[w].is_zero()) out.c[w] = out.c[w] + term.c[w] * cc;
    }
    if (x.dA3() || x.dV2()) {
        // 1/(a3^i v2^j) = eta_R(a3)^{2i+3j} eta_R(v2)^i / Delta^{i+j}
        int i = x.dA3(), j = x.dV2();
        const GammaElem& den = detail::eta_R_den_impl(i, j, m, prec, den_cache);
        LocElem dinv(BasePoly::constant(1, m, prec), 3 * (i + j), i + j);
        out = gamma_mul_fast(out, den).scaled(dinv);
    }
    return value_cache.emplace(std::move(vkey), std::move(out)).first->second;
}

// Counit: s and t map to 0, so on the word basis this is the coefficient of
// the empty word.
inline LocElem counit(const GammaElem& g) { return g.c[0]; }

// eta_R(Delta) == Delta, used as a self-test of the relations.
inline bool verify_delta_invariance(Mode m, int prec)
{
    GammaElem lhs = eta_R(LocElem::delta(m, prec));
    GammaElem rhs = GammaElem::scalar(LocElem::delta(m, prec));
    return lhs == rhs;
}

// Elements of Gamma tensor Gamma (over A, right structure glued to left
// structure), normalized onto the word-pair basis with plain left coefficients.
class Gamma2 {
public:
    using Key = std::pair<int, int>;  // (word1, word2)
    explicit Gamma2(Mode m = Mode::Z2N, int prec = 1) : mode_(m), prec_(prec) {}

    Mode mode() const { return mode_; }
    int precision() const { return prec_; }
    const std::map<Key, LocElem>& terms() const { return t_; }

    void add(Key k, const LocElem& c)
    {
        if (c.is_zero()) return;
        auto it = t_.find(k);
        if (it == t_.end())
            t_.emplace(k, c);
        else {
            it->second = it->second + c;
            if (it->second.is_zero()) t_.erase(it);
        }
    }

    // Insert a term c * (g1 tensor w2) where the coefficient of g1's words is
    // already plain-left.
    void add_left(const GammaElem& g1, int w2, const LocElem& c)
    {
        for (int w1 = 0; w1 < kGammaRank; ++w1)
            if (!g1.c[w1].is_zero()) add({w1, w2}, c * g1.c[w1]);
    }

    // Insert c * (w1 tensor a * w2): the slot-2 coefficient a crosses to slot
    // 1 through eta_R.
    void add_crossing(int w1, const LocElem& a, int w2, const LocElem& c)
    {
        add_left(word_times(w1, eta_R(a)), w2, c);
    }

    friend Gamma2 operator+(const Gamma2& a, const Gamma2& b)
    {
        Gamma2 r = a;
        for (auto& [k, c] : b.t_) r.add(k, c);
        return r;
    }
    friend Gamma2 operator-(const Gamma2& a, const Gamma2& b)
    {
        Gamma2 r = a;
        for (auto& [k, c] : b.t_) r.add(k, -c);
        return r;
    }
    bool is_zero() const { return t_.empty(); }
    friend bool operator==(const Gamma2& a, const Gamma2& b) { return (a - b).is_zero(); }

    friend Gamma2 gamma2_mul(const Gamma2& a, const Gamma2& b)
    {
        Gamma2 r(a.mode_, std::min(a.prec_, b.prec_));
        for (auto& [ka, ca] : a.t_)
            for (auto& [kb, cb] : b.t_) {
                GammaElem right = gamma_mul(GammaElem::word(ka.second, r.mode_, r.prec_),
                                            GammaElem::word(kb.second, r.mode_, r.prec_));
                GammaElem left = gamma_mul(GammaElem::word(ka.first, r.mode_, r.prec_),
                                           GammaElem::word(kb.first, r.mode_, r.prec_));
                for (int w2 = 0; w2 < kGammaRank; ++w2) {
                    if (right.c[w2].is_zero()) continue;
                    GammaElem lg = gamma_mul(left, eta_R(right.c[w2]));
                    r.add_left(lg, w2, ca * cb);
                }
            }
        return r;
    }

    std::string str() const
    {
        std::string out;
        for (auto& [k, c] : t_) {
            if (!out.empty()) out += " + ";
            out += "(" + c.str() + ")*[" + word_str(k.first) + "|" + word_str(k.second) + "]";
        }
        return out.empty() ? "0" : out;
    }

private:
    Mode mode_;
    int prec_;
    std::map<Key, LocElem> t_;
};

// Coproduct on the word basis: Delta(s) = s@1 + 1@s,
// Delta(t) = t@1 + 1@t + s@r; extended multiplicatively.
inline Gamma2 coproduct_word(int w, Mode m, int prec)
{
    Gamma2 ds(m, prec);
    ds.add({word_index(1, 0), 0}, LocElem::constant(1, m, prec));
    ds.add({0, word_index(1, 0)}, LocElem::constant(1, m, prec));
    Gamma2 dt(m, prec);
    dt.add({word_index(0, 1), 0}, LocElem::constant(1, m, prec));
    dt.add({0, word_index(0, 1)}, LocElem::constant(1, m, prec));
    {
        GammaElem r = r_elem(m, prec);
        // s tensor r: r sits in slot 2 with plain coefficients; move them left.
        Gamma2 sr(m, prec);
        for (int w2 = 0; w2 < kGammaRank; ++w2)
            if (!r.c[w2].is_zero())
                sr.add_crossing(word_index(1, 0), r.c[w2], w2,
                                LocElem::constant(1, m, prec));
        dt = dt + sr;
    }
    Gamma2 out(m, prec);
    out.add({0, 0}, LocElem::constant(1, m, prec));
    for (int k = 0; k < word_s(w); ++k) out = gamma2_mul(out, ds);
    for (int k = 0; k < word_t(w); ++k) out = gamma2_mul(out, dt);
    return out;
}

inline const Gamma2& coproduct_word_cached(int w, Mode m, int prec)
{
    static std::map<std::tuple<int, int, int>, Gamma2> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_tuple(w, int(m), prec);
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, coproduct_word(w, m, prec)).first;
    return it->second;
}

inline Gamma2 coproduct(const GammaElem& g)
{
    Mode m = g.mode();
    int prec = g.precision();
    Gamma2 out(m, prec);
    for (int w = 0; w < kGammaRank; ++w) {
        if (g.c[w].is_zero()) continue;
        Gamma2 dw = coproduct_word(w, m, prec);
        for (auto& [k, c] : dw.terms()) out.add(k, c * g.c[w]);
    }
    return out;
}

}  // namespace cbf
