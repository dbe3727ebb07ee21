#pragma once

#include <cassert>

#include "tensor.hpp"
#include "torsion.hpp"

namespace cbf {

// ---- the torsion comodule M = A[z]/(2z - a1 z^2 + a3 z^4), basis 1,z,z^2,z^3

// Normalized representation of 1 @ z^k in Gamma tensor M: high powers reduce
// through z^4 = a3^{-1}(a1 z^2 - 2z), coefficients crossing via eta_R.
inline TensorElem torsm_power(int k, Mode m, int prec);

inline const ComodDesc& torsm_comodule();

namespace detail {
inline TensorElem torsm_reduce(int k, Mode m, int prec)
{
    TensorElem r(1, &torsm_comodule(), m, prec);
    if (k <= 3) {
        r.add_plain({{0}, uint8_t(k)}, LocElem::constant(1, m, prec));
        return r;
    }
    LocElem a3inv(BasePoly::constant(1, m, prec), 1, 0);
    TensorElem lo = torsm_power(k - 2, m, prec);
    TensorElem lo2 = torsm_power(k - 3, m, prec);
    // z^k = a3^{-1} a1 z^{k-2} - 2 a3^{-1} z^{k-3}, coefficients crossing eta_R
    for (auto& [key, c] : lo.terms()) {
        GammaElem g = gamma_mul(GammaElem::word(key.w[0], m, prec),
                                eta_R(a3inv * LocElem::a1(m, prec)));
        for (int v = 0; v < kGammaRank; ++v)
            if (!g.c[v].is_zero()) r.add_plain({{uint8_t(v)}, key.m}, c * g.c[v]);
    }
    for (auto& [key, c] : lo2.terms()) {
        GammaElem g = gamma_mul(GammaElem::word(key.w[0], m, prec), eta_R(a3inv));
        for (int v = 0; v < kGammaRank; ++v)
            if (!g.c[v].is_zero())
                r.add_plain({{uint8_t(v)}, key.m}, c * g.c[v].scaled(-2));
    }
    return r;
}
}  // namespace detail

inline TensorElem torsm_power(int k, Mode m, int prec)
{
    static std::map<std::tuple<int, int, int>, TensorElem> cache;
    auto key = std::make_tuple(k, int(m), prec);
    auto it = cache.find(key);
    if (it == cache.end())
        it = cache.emplace(key, detail::torsm_reduce(k, m, prec)).first;
    return it->second;
}

inline TensorElem torsm_mul_basis(int i, int j, Mode m, int prec)
{
    return torsm_power(i + j, m, prec);
}

inline TensorElem torsm_mul(const TensorElem& a, const TensorElem& b)
{
    Mode m = a.mode();
    int prec = std::min(a.precision(), b.precision());
    return gm_mul(a, b, [&](int i, int j) { return torsm_mul_basis(i, j, m, prec); });
}

// Multiply the Gamma slot of an arity-1 element on the left by g.
inline TensorElem gm_scale_gamma(const TensorElem& x, const GammaElem& g)
{
    TensorElem r(1, x.comod(), x.mode(), std::min(x.precision(), g.precision()));
    for (auto& [key, c] : x.terms()) {
        GammaElem p = gamma_mul(g, GammaElem::word(key.w[0], x.mode(), x.precision()));
        for (int v = 0; v < kGammaRank; ++v)
            if (!p.c[v].is_zero()) r.add_plain({{uint8_t(v)}, key.m}, c * p.c[v]);
    }
    return r;
}

inline TensorElem gm_unit(const ComodDesc* comod, int basis, Mode m, int prec)
{
    TensorElem r(1, comod, m, prec);
    r.add_plain({{0}, uint8_t(basis)}, LocElem::constant(1, m, prec));
    return r;
}

// ---- multiplication matrix and Hensel inversion in Gamma tensor M

// 4x4 matrix over Gamma: column j holds u * (1 @ z^j) on the z-basis.
struct MulMatrix {
    std::array<std::array<GammaElem, 4>, 4> a;
};

inline MulMatrix mul_matrix(const TensorElem& u)
{
    Mode m = u.mode();
    int prec = u.precision();
    MulMatrix M;
    for (auto& row : M.a)
        for (auto& e : row) e = GammaElem(m, prec);
    for (int j = 0; j < 4; ++j) {
        TensorElem col = torsm_mul(u, gm_unit(&torsm_comodule(), j, m, prec));
        for (auto& [key, c] : col.terms())
            M.a[key.m][j].c[key.w[0]] = M.a[key.m][j].c[key.w[0]] + c;
    }
    return M;
}

namespace detail {
// Division-free determinant over a commutative ring, by permutation expansion
// (n <= 4) or subset dynamic programming (n <= 8).
template <typename Ring, typename Mul, typename Add, typename Neg>
Ring det_subset_dp(const std::vector<std::vector<Ring>>& a, const Ring& zero,
                   const Ring& one, Mul mul, Add add, Neg neg)
{
    int n = int(a.size());
    std::vector<Ring> dp(size_t(1) << n, zero);
    dp[0] = one;
    for (int mask = 1; mask < (1 << n); ++mask) {
        int row = __builtin_popcount(mask) - 1;
        Ring acc = zero;
        int parity = 0;
        for (int j = 0; j < n; ++j) {
            if (!(mask & (1 << j))) continue;
            Ring term = mul(a[row][j], dp[mask ^ (1 << j)]);
            acc = add(acc, parity % 2 ? neg(term) : term);
            ++parity;
        }
        dp[mask] = acc;
    }
    return dp[(1 << n) - 1];
}

inline GammaElem det_gamma(const std::vector<std::vector<GammaElem>>& a, Mode m, int prec)
{
    GammaElem zero(m, prec);
    GammaElem one = GammaElem::scalar(LocElem::constant(1, m, prec));
    return det_subset_dp<GammaElem>(
        a, zero, one, [](const GammaElem& x, const GammaElem& y) { return gamma_mul(x, y); },
        [](const GammaElem& x, const GammaElem& y) { return x + y; },
        [](const GammaElem& x) { return -x; });
}

inline LocElem det_loc(const std::vector<std::vector<LocElem>>& a, Mode m, int prec)
{
    LocElem zero = LocElem::zero(m, prec);
    LocElem one = LocElem::constant(1, m, prec);
    return det_subset_dp<LocElem>(
        a, zero, one,
        [](const LocElem& x, const LocElem& y) { return (x * y).reduced(); },
        [](const LocElem& x, const LocElem& y) { return x + y; },
        [](const LocElem& x) { return -x; });
}

template <typename Ring>
std::vector<std::vector<Ring>> minor_of(const std::vector<std::vector<Ring>>& a,
                                        int row, int col)
{
    std::vector<std::vector<Ring>> out;
    for (int i = 0; i < int(a.size()); ++i) {
        if (i == row) continue;
        std::vector<Ring> r;
        for (int j = 0; j < int(a.size()); ++j)
            if (j != col) r.push_back(a[i][j]);
        out.push_back(std::move(r));
    }
    return out;
}
}  // namespace detail

// Inverse of u in Gamma tensor M at the precision of u. Strategy per the
// layered-norm construction: adjugate over Gamma reduces to inverting the
// Gamma-determinant, whose A-norm (8x8 word matrix determinant) reduces to
// inverting a unit of A; all mod 2 first, then Newton steps V <- V(2 - uV)
// double the precision. Throws if u is not invertible mod 2.
inline TensorElem hensel_invert(const TensorElem& u)
{
    if (u.comod() != &torsm_comodule())
        throw std::invalid_argument("hensel_invert: torsion-module elements only");
    Mode mode = u.mode();
    int prec = u.precision();
    TensorElem u2 = mode == Mode::F2 ? u : u.mod2();

    MulMatrix M = mul_matrix(u2);
    std::vector<std::vector<GammaElem>> a(4, std::vector<GammaElem>(4, GammaElem(Mode::F2, 1)));
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) a[i][j] = M.a[i][j];
    GammaElem detG = detail::det_gamma(a, Mode::F2, 1);

    // adj(M) e_0: v_j = (-1)^j det(minor(0, j)); then u * sum v_j@z^j = detG@1.
    TensorElem V(1, &torsm_comodule(), Mode::F2, 1);
    for (int j = 0; j < 4; ++j) {
        GammaElem cof = detail::det_gamma(detail::minor_of(a, 0, j), Mode::F2, 1);
        if (j % 2) cof = -cof;
        for (int v = 0; v < kGammaRank; ++v)
            if (!cof.c[v].is_zero()) V.add_plain({{uint8_t(v)}, uint8_t(j)}, cof.c[v]);
    }

    // Norm of detG down to A via the 8x8 word-multiplication matrix.
    std::vector<std::vector<LocElem>> n8(
        kGammaRank, std::vector<LocElem>(kGammaRank, LocElem::zero(Mode::F2, 1)));
    for (int w = 0; w < kGammaRank; ++w) {
        GammaElem col = gamma_mul(detG, GammaElem::word(w, Mode::F2, 1));
        for (int v = 0; v < kGammaRank; ++v) n8[v][w] = col.c[v];
    }
    LocElem mu = detail::det_loc(n8, Mode::F2, 1).reduced();
    if (!mu.is_unit())
        throw std::invalid_argument("hensel_invert: element is not invertible mod 2");
    GammaElem w2(Mode::F2, 1);
    for (int w = 0; w < kGammaRank; ++w) {
        LocElem cof = detail::det_loc(detail::minor_of(n8, 0, w), Mode::F2, 1);
        if (w % 2) cof = -cof;
        w2.c[w] = cof;
    }
    LocElem muinv = mu.inverse();

    // u^{-1} mod 2 = V * w2 * mu^{-1}
    TensorElem V0 = gm_scale_gamma(V, w2).scaled(muinv).reduced();
    if (mode == Mode::F2) return V0;

    TensorElem y = V0.lifted(prec);
    TensorElem one = gm_unit(&torsm_comodule(), 0, mode, prec);
    for (int bits = 1; bits < prec; bits *= 2) {
        TensorElem two = one.scaled(LocElem::constant(2, mode, prec));
        y = torsm_mul(y, two - torsm_mul(u, y)).reduced();
    }
    if (torsm_mul(u, y) != one)
        throw std::runtime_error("hensel_invert: verification failed");
    return y;
}

// ---- coaction

namespace detail {
// psi(z) = (z - r z^3) * (1 - s z + t z^3)^{-1}, cached per mode/precision.
inline TensorElem psi_z_impl(Mode m, int prec)
{
    GammaElem s = GammaElem::word(word_index(1, 0), m, prec);
    GammaElem t = GammaElem::word(word_index(0, 1), m, prec);
    GammaElem r = r_elem(m, prec);
    TensorElem den(1, &torsm_comodule(), m, prec);
    den.add_plain({{0}, 0}, LocElem::constant(1, m, prec));
    for (int v = 0; v < kGammaRank; ++v) {
        if (!s.c[v].is_zero()) den.add_plain({{uint8_t(v)}, 1}, -s.c[v]);
        if (!t.c[v].is_zero()) den.add_plain({{uint8_t(v)}, 3}, t.c[v]);
    }
    TensorElem num(1, &torsm_comodule(), m, prec);
    num.add_plain({{0}, 1}, LocElem::constant(1, m, prec));
    for (int v = 0; v < kGammaRank; ++v)
        if (!r.c[v].is_zero()) num.add_plain({{uint8_t(v)}, 3}, -r.c[v]);
    return torsm_mul(num, hensel_invert(den)).reduced();
}

inline const TensorElem& psi_z_cached(Mode m, int prec)
{
    static std::map<std::pair<int, int>, TensorElem> cache;
    auto key = std::make_pair(int(m), prec);
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, psi_z_impl(m, prec)).first;
    return it->second;
}

inline const TensorElem& psi_zk_cached(int k, Mode m, int prec)
{
    static std::map<std::tuple<int, int, int>, TensorElem> cache;
    auto key = std::make_tuple(k, int(m), prec);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    TensorElem v = k == 0 ? gm_unit(&torsm_comodule(), 0, m, prec)
                          : torsm_mul(psi_zk_cached(k - 1, m, prec),
                                      psi_z_cached(m, prec))
                                .reduced();
    return cache.emplace(key, std::move(v)).first->second;
}
}  // namespace detail

inline const ComodDesc& torsm_comodule()
{
    static ComodDesc d{
        "torsion",
        {0, -2, -4, -6},
        [](int i, Mode m, int prec) { return detail::psi_zk_cached(i, m, prec); }};
    return d;
}

// ---- comodule elements over a chosen basis

struct ComoduleElem {
    const ComodDesc* comod = nullptr;
    Mode mode = Mode::Z2N;
    int prec = 1;
    std::vector<LocElem> c;

    ComoduleElem() = default;
    ComoduleElem(const ComodDesc* d, Mode m, int p)
        : comod(d), mode(m), prec(p), c(d->size(), LocElem::zero(m, p))
    {
    }
    bool is_zero() const
    {
        for (auto& x : c)
            if (!x.is_zero()) return false;
        return true;
    }
    friend ComoduleElem operator+(const ComoduleElem& a, const ComoduleElem& b)
    {
        ComoduleElem r = a;
        for (size_t i = 0; i < r.c.size(); ++i) r.c[i] = r.c[i] + b.c[i];
        return r;
    }
    friend ComoduleElem operator-(const ComoduleElem& a, const ComoduleElem& b)
    {
        ComoduleElem r = a;
        for (size_t i = 0; i < r.c.size(); ++i) r.c[i] = r.c[i] - b.c[i];
        return r;
    }
    ComoduleElem scaled(const LocElem& x) const
    {
        ComoduleElem r = *this;
        for (auto& v : r.c) v = v * x;
        return r;
    }
    friend bool operator==(const ComoduleElem& a, const ComoduleElem& b)
    {
        return (a - b).is_zero();
    }

    // 1 @ m: the coefficients sit inside the comodule slot and cross the new
    // Gamma slot through eta_R (the tensor relation over A).
    TensorElem unit_tensor() const
    {
        TensorElem r(1, comod, mode, prec);
        for (int i = 0; i < comod->size(); ++i)
            if (!c[i].is_zero()) r.add_at_slot({0}, uint8_t(i), c[i], 2);
        return r;
    }

    // Coaction, extended A-linearly (plain coefficients) over the basis. The
    // twisted rule psi(a*m) = eta_R(a)*psi(m) fails the trace-invariance and
    // quartic identities; see the decisions ledger.
    TensorElem coaction() const;

    // Degree-zero differential of the cobar complex, signed so that in the
    // Unit comodule d(a) = eta_R(a) - a, reproducing d(a1) = [2s].
    TensorElem d0() const { return unit_tensor() - coaction(); }

    // The element as an arity-0 cobar chain.
    TensorElem unit_chain() const
    {
        TensorElem r(0, comod, mode, prec);
        for (int i = 0; i < comod->size(); ++i)
            if (!c[i].is_zero()) r.add_plain({{}, uint8_t(i)}, c[i]);
        return r;
    }
};

inline TensorElem ComoduleElem::coaction() const
{
    TensorElem r(1, comod, mode, prec);
    for (int i = 0; i < comod->size(); ++i) {
        if (c[i].is_zero()) continue;
        r = r + comod->coaction(i, mode, prec).scaled(c[i]);
    }
    return r;
}

inline ComoduleElem torsm_elem(Mode m, int prec)
{
    return ComoduleElem(&torsm_comodule(), m, prec);
}

// tr(1) = 2 - a1 z + a3 z^3.
inline ComoduleElem trace_element(Mode m, int prec)
{
    ComoduleElem e = torsm_elem(m, prec);
    e.c[0] = LocElem::constant(2, m, prec);
    e.c[1] = -LocElem::a1(m, prec);
    e.c[3] = LocElem::a3(m, prec);
    return e;
}

// z_{-8} = v2^{-1} (a1 (z^2 - a3^{-1} a1^2 z) + 2 z).
inline ComoduleElem z_minus8(Mode m, int prec)
{
    LocElem v2inv(BasePoly::constant(1, m, prec), 0, 1);
    LocElem a3inv(BasePoly::constant(1, m, prec), 1, 0);
    LocElem a1 = LocElem::a1(m, prec);
    ComoduleElem e = torsm_elem(m, prec);
    e.c[2] = v2inv * a1;
    e.c[1] = v2inv * (LocElem::constant(2, m, prec) - a1 * a1 * a1 * a3inv);
    return e;
}

// ---- the reduced quotient MBar = M / (A.1 + A.tr), free on z, z^2,
//      with z^3 mapping to a3^{-1} a1 z.

inline const ComodDesc& mbar_comodule();

inline ComoduleElem mbar_elem(Mode m, int prec)
{
    return ComoduleElem(&mbar_comodule(), m, prec);
}

// Quotient map on elements: 1 -> 0, z^3 -> a3^{-1} a1 z.
inline ComoduleElem quotient_to_mbar(const ComoduleElem& x)
{
    if (x.comod != &torsm_comodule())
        throw std::invalid_argument("quotient_to_mbar: torsion-module input required");
    LocElem a3inv(BasePoly::constant(1, x.mode, x.prec), 1, 0);
    ComoduleElem r = mbar_elem(x.mode, x.prec);
    r.c[0] = x.c[1] + x.c[3] * a3inv * LocElem::a1(x.mode, x.prec);  // z
    r.c[1] = x.c[2];                                                // z^2
    return r;
}

// Quotient on Gamma tensor M, indices: mbar basis 0 = z, 1 = z^2.
inline TensorElem quotient_tensor_to_mbar(const TensorElem& x)
{
    if (x.comod() != &torsm_comodule())
        throw std::invalid_argument("quotient_tensor_to_mbar: torsion-module input");
    Mode m = x.mode();
    int prec = x.precision();
    LocElem a3inv(BasePoly::constant(1, m, prec), 1, 0);
    TensorElem r(1, &mbar_comodule(), m, prec);
    for (auto& [key, c] : x.terms()) {
        if (key.m == 0) continue;  // 1 -> 0
        if (key.m == 1)
            r.add_plain({key.w, 0}, c);
        else if (key.m == 2)
            r.add_plain({key.w, 1}, c);
        else {
            // g @ z^3 = g eta_R(a3^{-1} a1) @ z in the quotient
            GammaElem g = word_times(key.w[0], eta_R(a3inv * LocElem::a1(m, prec)));
            for (int v = 0; v < kGammaRank; ++v)
                if (!g.c[v].is_zero()) r.add_plain({{uint8_t(v)}, 0}, c * g.c[v]);
        }
    }
    return r;
}

namespace detail {
inline const TensorElem& mbar_psi_cached(int i, Mode m, int prec)
{
    static std::map<std::tuple<int, int, int>, TensorElem> cache;
    auto key = std::make_tuple(i, int(m), prec);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    TensorElem v = quotient_tensor_to_mbar(psi_zk_cached(i + 1, m, prec));
    return cache.emplace(key, std::move(v)).first->second;
}
}  // namespace detail

inline const ComodDesc& mbar_comodule()
{
    static ComodDesc d{
        "mbar",
        {-2, -4},
        [](int i, Mode m, int prec) { return detail::mbar_psi_cached(i, m, prec); }};
    return d;
}

// ---- the b-basis b1 = a3 z^2, b5 = a3^2 z of MBar (degrees 2 and 10),
//      in which the mod-2 coaction has polynomial coefficients.

inline const ComodDesc& mbar_b_comodule();

inline ComoduleElem mbar_b_elem(Mode m, int prec)
{
    return ComoduleElem(&mbar_b_comodule(), m, prec);
}

// Change of basis MBar {z, z^2} -> {b1, b5}.
inline ComoduleElem b_basis_change(const ComoduleElem& x)
{
    if (x.comod != &mbar_comodule())
        throw std::invalid_argument("b_basis_change: z-basis MBar input required");
    LocElem a3inv(BasePoly::constant(1, x.mode, x.prec), 1, 0);
    ComoduleElem r = mbar_b_elem(x.mode, x.prec);
    r.c[0] = x.c[1] * a3inv;           // z^2 = a3^{-1} b1
    r.c[1] = x.c[0] * a3inv * a3inv;   // z   = a3^{-2} b5
    return r;
}

inline TensorElem b_basis_change_tensor(const TensorElem& x)
{
    if (x.comod() != &mbar_comodule())
        throw std::invalid_argument("b_basis_change_tensor: z-basis MBar input");
    Mode m = x.mode();
    int prec = x.precision();
    LocElem a3inv(BasePoly::constant(1, m, prec), 1, 0);
    TensorElem r(1, &mbar_b_comodule(), m, prec);
    for (auto& [key, c] : x.terms()) {
        LocElem factor = key.m == 0 ? a3inv * a3inv : a3inv;
        uint8_t target = key.m == 0 ? 1 : 0;
        GammaElem g = word_times(key.w[0], eta_R(factor));
        for (int v = 0; v < kGammaRank; ++v)
            if (!g.c[v].is_zero()) r.add_plain({{uint8_t(v)}, target}, c * g.c[v]);
    }
    return r;
}

namespace detail {
inline const TensorElem& mbar_b_psi_cached(int i, Mode m, int prec)
{
    static std::map<std::tuple<int, int, int>, TensorElem> cache;
    auto key = std::make_tuple(i, int(m), prec);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    // psi(b1) = a3 psi(z^2), psi(b5) = a3^2 psi(z) (plain A-linear extension),
    // converted to the b-basis.
    LocElem a3 = LocElem::a3(m, prec);
    TensorElem raw = i == 0 ? mbar_psi_cached(1, m, prec).scaled(a3)
                            : mbar_psi_cached(0, m, prec).scaled(a3 * a3);
    TensorElem v = b_basis_change_tensor(raw);
    return cache.emplace(key, std::move(v)).first->second;
}
}  // namespace detail

inline const ComodDesc& mbar_b_comodule()
{
    static ComodDesc d{
        "mbar_b",
        {2, 10},
        [](int i, Mode m, int prec) { return detail::mbar_b_psi_cached(i, m, prec); }};
    return d;
}

// b1, b5 as elements.
inline ComoduleElem b1_elem(Mode m, int prec)
{
    ComoduleElem e = mbar_b_elem(m, prec);
    e.c[0] = LocElem::constant(1, m, prec);
    return e;
}
inline ComoduleElem b5_elem(Mode m, int prec)
{
    ComoduleElem e = mbar_b_elem(m, prec);
    e.c[1] = LocElem::constant(1, m, prec);
    return e;
}

// ---- square root of the discriminant on MBar

// sqrtDelta lifts to a3^2 (1 + a1 z) in M; multiplication there followed by
// the quotient gives the operator on MBar.
inline ComoduleElem sqrt_delta_lift(Mode m, int prec)
{
    ComoduleElem e = torsm_elem(m, prec);
    e.c[0] = LocElem::a3(m, prec) * LocElem::a3(m, prec);
    e.c[1] = e.c[0] * LocElem::a1(m, prec);
    return e;
}

inline ComoduleElem mbar_lift(const ComoduleElem& x)
{
    if (x.comod != &mbar_comodule())
        throw std::invalid_argument("mbar_lift: z-basis MBar input required");
    ComoduleElem r = torsm_elem(x.mode, x.prec);
    r.c[1] = x.c[0];
    r.c[2] = x.c[1];
    return r;
}

// Multiplication in M on the z-basis elements.
inline ComoduleElem torsm_mul_elems(const ComoduleElem& a, const ComoduleElem& b)
{
    if (a.comod != &torsm_comodule() || b.comod != &torsm_comodule())
        throw std::invalid_argument("torsm_mul_elems: torsion-module inputs");
    Mode m = a.mode;
    int prec = std::min(a.prec, b.prec);
    ComoduleElem r = torsm_elem(m, prec);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            if (a.c[i].is_zero() || b.c[j].is_zero()) continue;
            // reduce z^{i+j} with plain A-coefficients (no Gamma content)
            int k = i + j;
            std::vector<std::pair<int, LocElem>> stack{{k, a.c[i] * b.c[j]}};
            LocElem a3inv(BasePoly::constant(1, m, prec), 1, 0);
            while (!stack.empty()) {
                auto [e, coef] = stack.back();
                stack.pop_back();
                if (e <= 3) {
                    r.c[e] = r.c[e] + coef;
                } else {
                    stack.push_back({e - 2, coef * a3inv * LocElem::a1(m, prec)});
                    stack.push_back({e - 3, coef * a3inv.scaled(-2)});
                }
            }
        }
    return r;
}

inline ComoduleElem sqrt_delta_op(const ComoduleElem& x)
{
    return quotient_to_mbar(torsm_mul_elems(sqrt_delta_lift(x.mode, x.prec), mbar_lift(x)));
}

}  // namespace cbf
