#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <tuple>
#include <vector>

#include "cobar.hpp"
#include "linalg.hpp"

namespace cbf {

// Ext of the Hopf algebroid computed from the reduced (normalized) cobar
// complex. A cochain of filtration s lives in Gammabar^{@s} @ M where
// Gammabar is spanned by the seven non-unit words; the differential is the
// cobar differential followed by projection away from terms containing the
// unit word. Everything here is connective: coefficient monomials a1^i a3^j
// with i, j >= 0, no inverted Delta.

inline constexpr int kExtBasisCap = 200000;

// One basis monomial of a bidegree piece: a word tuple, a comodule basis
// index, and a coefficient monomial.
struct ExtMono {
    std::vector<uint8_t> w;
    uint8_t m = 0;
    Mono coeff;
    friend bool operator<(const ExtMono& a, const ExtMono& b)
    {
        if (a.w != b.w) return a.w < b.w;
        if (a.m != b.m) return a.m < b.m;
        return a.coeff < b.coeff;
    }
    friend bool operator==(const ExtMono& a, const ExtMono& b)
    {
        return a.w == b.w && a.m == b.m && a.coeff == b.coeff;
    }
};

struct BidegreeBasis {
    int s = 0, t = 0;
    const ComodDesc* comod = nullptr;
    std::vector<ExtMono> elems;
    int size() const { return int(elems.size()); }
};

namespace detail {

inline void append_coeff_monos(std::vector<ExtMono>& out, const std::vector<uint8_t>& w,
                               const ComodDesc& comod, int rem, int cap)
{
    for (int m = 0; m < comod.size(); ++m) {
        int r = rem - comod.degrees[m];
        if (r < 0 || r % 2) continue;
        for (int j = 0; 6 * j <= r; ++j) {
            int i = (r - 6 * j) / 2;
            out.push_back({w, uint8_t(m), Mono{i, j}});
            if (int(out.size()) > cap)
                throw std::length_error("ext basis exceeds the size cap");
        }
    }
}

inline void enum_word_tuples(std::vector<ExtMono>& out, std::vector<uint8_t>& w, int slots,
                             int rem, int min_word, const ComodDesc& comod, int cap)
{
    if (slots == 0) {
        append_coeff_monos(out, w, comod, rem, cap);
        return;
    }
    for (int v = min_word; v < kGammaRank; ++v) {
        if (word_degree(v) > rem) continue;
        w.push_back(uint8_t(v));
        enum_word_tuples(out, w, slots - 1, rem - word_degree(v), min_word, comod, cap);
        w.pop_back();
    }
}

}  // namespace detail

// Enumerate the bidegree basis. `normalized` excludes the unit word; the
// unnormalized variant is the independent oracle. The comodule may have
// basis elements of negative degree; coefficient exponents never are.
inline BidegreeBasis ext_cochain_basis(int s, int t, const ComodDesc& comod,
                                       bool normalized = true, int cap = kExtBasisCap)
{
    if (s < 0) throw std::invalid_argument("ext_cochain_basis: negative filtration");
    BidegreeBasis b;
    b.s = s;
    b.t = t;
    b.comod = &comod;
    std::vector<uint8_t> w;
    detail::enum_word_tuples(b.elems, w, s, t, normalized ? 1 : 0, comod, cap);
    std::sort(b.elems.begin(), b.elems.end());
    return b;
}

inline TensorElem ext_mono_chain(const ExtMono& e, const ComodDesc& comod, Mode m, int prec)
{
    TensorElem r(int(e.w.size()), &comod, m, prec);
    r.add_plain({e.w, e.m}, LocElem::monomial(e.coeff.i, e.coeff.j, 1, m, prec));
    return r;
}

// Projection onto the reduced complex: drop every term containing the unit
// word. Composed with the cobar differential this is the normalized d.
inline TensorElem project_reduced(const TensorElem& x)
{
    TensorElem r(x.arity(), x.comod(), x.mode(), x.precision());
    for (auto& [k, c] : x.terms()) {
        bool unit = false;
        for (uint8_t w : k.w)
            if (w == 0) { unit = true; break; }
        if (!unit) r.add_plain(k, c);
    }
    return r;
}

inline TensorElem normalized_d(const TensorElem& x) { return project_reduced(cobar_d(x)); }

// ---- coordinates

namespace detail {

// Coordinate label for one monomial of a chain: key, coefficient monomial,
// and the (reduced) denominator exponents, which are zero in the connective
// range but appear in images over the localized comodules.
struct CoordKey {
    ChainKey key;
    Mono mono;
    int dA3 = 0, dV2 = 0;
    friend bool operator<(const CoordKey& a, const CoordKey& b)
    {
        if (!(a.key == b.key)) return a.key < b.key;
        if (!(a.mono == b.mono)) return a.mono < b.mono;
        return std::tie(a.dA3, a.dV2) < std::tie(b.dA3, b.dV2);
    }
};

class CoordIndex {
public:
    int intern(const CoordKey& k)
    {
        auto it = idx_.find(k);
        if (it == idx_.end()) it = idx_.emplace(k, int(idx_.size())).first;
        return it->second;
    }
    std::optional<int> find(const CoordKey& k) const
    {
        auto it = idx_.find(k);
        if (it == idx_.end()) return std::nullopt;
        return it->second;
    }
    int size() const { return int(idx_.size()); }

private:
    std::map<CoordKey, int> idx_;
};

// Sparse decomposition into (coordinate, value) pairs; values are the raw
// residue words of the coefficients.
inline std::vector<std::pair<CoordKey, uint64_t>> decompose(const TensorElem& x)
{
    std::vector<std::pair<CoordKey, uint64_t>> out;
    for (auto& [k, c] : x.terms()) {
        LocElem r = c.reduced();
        for (auto& [mono, co] : r.num().terms())
            out.push_back({CoordKey{k, mono, r.dA3(), r.dV2()}, co.v});
    }
    return out;
}

// GF(2) echelon with tagged rows: image rows carry tag -1, complement rows
// carry their class index, so reducing a vector records its coordinates over
// the complement basis.
class TaggedEchelon {
public:
    // Reduce v in place against the rows; appends used non-negative tags.
    void reduce(std::vector<uint64_t>& v, std::vector<int>* used = nullptr) const
    {
        for (auto& row : rows_) {
            if (bit(v, row.pivot)) {
                for (size_t k = 0; k < v.size() && k < row.bits.size(); ++k)
                    v[k] ^= row.bits[k];
                if (used && row.tag >= 0) used->push_back(row.tag);
            }
        }
    }
    // Returns true (and keeps the row) if independent of the current span.
    bool add(std::vector<uint64_t> v, int tag)
    {
        reduce(v);
        int p = lowest_bit(v);
        if (p < 0) return false;
        rows_.push_back({std::move(v), p, tag});
        std::sort(rows_.begin(), rows_.end(),
                  [](const Row& a, const Row& b) { return a.pivot < b.pivot; });
        return true;
    }
    int rank() const { return int(rows_.size()); }

    static bool bit(const std::vector<uint64_t>& v, int i)
    {
        size_t w = size_t(i) / 64;
        return w < v.size() && ((v[w] >> (i % 64)) & 1);
    }
    static int lowest_bit(const std::vector<uint64_t>& v)
    {
        for (size_t k = 0; k < v.size(); ++k)
            if (v[k]) return int(k * 64) + __builtin_ctzll(v[k]);
        return -1;
    }

private:
    struct Row {
        std::vector<uint64_t> bits;
        int pivot = -1;
        int tag = -1;
    };
    std::vector<Row> rows_;
};

}  // namespace detail

// ---- the mod-2 Ext engine, one computed bidegree at a time

struct ExtClass {
    int s = 0, t = 0;
    const ComodDesc* comod = nullptr;
    // Coordinates over the echelon-complement basis of the bidegree.
    std::vector<int> coords;
    TensorElem rep;  // mod-2 cocycle representative
    std::string label;
    bool is_zero() const { return coords.empty(); }
};

namespace detail {

struct ExtGroupF2 {
    BidegreeBasis basis;                    // of C^{s,t}
    CoordIndex space;                       // coordinates of C^{s,t} (basis first)
    TaggedEchelon ech;                      // image rows (tag -1) then complement rows
    std::vector<std::vector<uint64_t>> reps;  // complement reps over basis positions
    int rank_d_out = 0;                     // rank of d_{s,t}
    int rank_d_in = 0;                      // rank of d_{s-1,t}
};

inline std::vector<uint64_t> pack_sparse(const std::vector<int>& idx, int width)
{
    std::vector<uint64_t> v((width + 63) / 64, 0);
    for (int i : idx) v[size_t(i) / 64] ^= uint64_t(1) << (i % 64);
    return v;
}

inline const ExtGroupF2& ext_group_f2(int s, int t, const ComodDesc& comod)
{
    static std::map<std::tuple<const ComodDesc*, int, int>, ExtGroupF2> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_tuple(&comod, s, t);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;

    ExtGroupF2 g;
    g.basis = ext_cochain_basis(s, t, comod);
    int n = g.basis.size();
    for (auto& e : g.basis.elems)
        g.space.intern(CoordKey{{e.w, e.m}, e.coeff, 0, 0});

    // Kernel of d_{s,t} via an explicit matrix over the image coordinates.
    CoordIndex target;
    std::vector<std::vector<int>> cols(n);
    for (int c = 0; c < n; ++c) {
        TensorElem d = normalized_d(ext_mono_chain(g.basis.elems[c], comod, Mode::F2, 1));
        for (auto& [ck, v] : decompose(d))
            if (v & 1) cols[c].push_back(target.intern(ck));
    }
    F2Matrix mat(target.size(), n);
    for (int c = 0; c < n; ++c)
        for (int r : cols[c]) mat.flip(r, c);
    g.rank_d_out = mat.rank();
    auto kernel = mat.kernel_basis();

    // Image of d_{s-1,t}, expressed over the coordinates of C^{s,t}.
    std::vector<std::vector<int>> images;
    if (s > 0) {
        BidegreeBasis below = ext_cochain_basis(s - 1, t, comod);
        for (auto& e : below.elems) {
            TensorElem d = normalized_d(ext_mono_chain(e, comod, Mode::F2, 1));
            std::vector<int> vec;
            for (auto& [ck, v] : decompose(d))
                if (v & 1) vec.push_back(g.space.intern(ck));
            if (!vec.empty()) images.push_back(std::move(vec));
        }
    }
    int width = g.space.size();
    for (auto& im : images)
        g.ech.add(pack_sparse(im, width), -1);
    g.rank_d_in = g.ech.rank();

    // Complement: kernel vectors (over the first n coordinates) that extend
    // the image echelon, in basis order.
    for (auto& kv : kernel) {
        std::vector<uint64_t> v((width + 63) / 64, 0);
        for (size_t k = 0; k < kv.size() && k < v.size(); ++k) v[k] = kv[k];
        if (g.ech.add(v, int(g.reps.size()))) {
            kv.resize((size_t(n) + 63) / 64, 0);
            g.reps.push_back(kv);
        }
    }
    int dim = int(g.reps.size());
    if (dim != n - g.rank_d_out - g.rank_d_in)
        throw std::logic_error("ext: rank-nullity violation");
    return cache.emplace(key, std::move(g)).first->second;
}

inline TensorElem chain_from_bits(const std::vector<uint64_t>& bits, const BidegreeBasis& b,
                                  const ComodDesc& comod)
{
    TensorElem r(b.s, &comod, Mode::F2, 1);
    for (int i = 0; i < b.size(); ++i)
        if (TaggedEchelon::bit(bits, i))
            r = r + ext_mono_chain(b.elems[i], comod, Mode::F2, 1);
    return r;
}

}  // namespace detail

inline int ext_dim(int s, int t, const ComodDesc& comod)
{
    return int(detail::ext_group_f2(s, t, comod).reps.size());
}

inline std::vector<ExtClass> ext_basis(int s, int t, const ComodDesc& comod)
{
    const auto& g = detail::ext_group_f2(s, t, comod);
    std::vector<ExtClass> out;
    for (int i = 0; i < int(g.reps.size()); ++i) {
        ExtClass c;
        c.s = s;
        c.t = t;
        c.comod = &comod;
        c.coords = {i};
        c.rep = detail::chain_from_bits(g.reps[i], g.basis, comod);
        out.push_back(std::move(c));
    }
    return out;
}

// Express a mod-2 cocycle as a class: coordinates over the complement basis
// of its bidegree. Throws if the chain is not a cocycle in the computed span.
inline ExtClass ext_class_of(const TensorElem& x, int s, int t, const ComodDesc& comod)
{
    if (x.arity() != s) throw std::invalid_argument("ext_class_of: arity != filtration");
    const auto& g = detail::ext_group_f2(s, t, comod);
    std::vector<int> idx;
    for (auto& [ck, v] : detail::decompose(x.mod2())) {
        if (!(v & 1)) continue;
        auto i = g.space.find(ck);
        if (!i) throw std::invalid_argument("ext_class_of: chain outside the computed span");
        idx.push_back(*i);
    }
    std::vector<uint64_t> vec = detail::pack_sparse(idx, g.space.size());
    std::vector<int> used;
    g.ech.reduce(vec, &used);
    if (detail::TaggedEchelon::lowest_bit(vec) >= 0)
        throw std::invalid_argument("ext_class_of: chain is not a cocycle at this bidegree");
    std::sort(used.begin(), used.end());
    // a tag used twice cancels
    std::vector<int> coords;
    for (size_t i = 0; i < used.size();) {
        size_t j = i;
        while (j < used.size() && used[j] == used[i]) ++j;
        if ((j - i) % 2) coords.push_back(used[i]);
        i = j;
    }
    ExtClass c;
    c.s = s;
    c.t = t;
    c.comod = &comod;
    c.coords = std::move(coords);
    c.rep = x.mod2();
    return c;
}

inline bool ext_classes_equal(const ExtClass& a, const ExtClass& b)
{
    return a.s == b.s && a.t == b.t && a.comod == b.comod && a.coords == b.coords;
}

// Product by concatenation of representatives. The left factor must live
// over the base comodule (factors over the base commute with everything, so
// a base-comodule right factor is swapped into place).
inline ExtClass ext_product(const ExtClass& u, const ExtClass& v)
{
    const ExtClass* a = &u;
    const ExtClass* b = &v;
    if (a->comod != &unit_comodule() && b->comod == &unit_comodule()) std::swap(a, b);
    if (a->comod != &unit_comodule())
        throw std::invalid_argument("ext_product: one factor must be over the base comodule");
    TensorElem prod(a->s + b->s, b->comod, Mode::F2, 1);
    for (auto& [k1, c1] : a->rep.terms())
        for (auto& [k2, c2] : b->rep.terms()) {
            std::vector<uint8_t> w = k1.w;
            w.insert(w.end(), k2.w.begin(), k2.w.end());
            TensorElem tmp(a->s + b->s, b->comod, Mode::F2, 1);
            tmp.add_at_slot(std::move(w), k2.m, c2, a->s + 1);
            for (auto& [k, c] : tmp.terms()) prod.add_plain(k, c * c1);
        }
    return ext_class_of(project_reduced(prod), a->s + b->s, a->t + b->t, *b->comod);
}

// ---- unnormalized oracle (full cobar complex, unit word allowed)

inline int unnormalized_ext_dim(int s, int t, const ComodDesc& comod)
{
    BidegreeBasis b = ext_cochain_basis(s, t, comod, false);
    int n = b.size();
    detail::CoordIndex target;
    std::vector<std::vector<int>> cols(n);
    for (int c = 0; c < n; ++c) {
        TensorElem d = cobar_d(ext_mono_chain(b.elems[c], comod, Mode::F2, 1));
        for (auto& [ck, v] : detail::decompose(d))
            if (v & 1) cols[c].push_back(target.intern(ck));
    }
    F2SpanRank out;
    for (int c = 0; c < n; ++c) out.add(cols[c]);
    int rank_in = 0;
    if (s > 0) {
        BidegreeBasis below = ext_cochain_basis(s - 1, t, comod, false);
        detail::CoordIndex mid;
        F2SpanRank in;
        for (auto& e : below.elems) {
            TensorElem d = cobar_d(ext_mono_chain(e, comod, Mode::F2, 1));
            std::vector<int> vec;
            for (auto& [ck, v] : detail::decompose(d))
                if (v & 1) vec.push_back(mid.intern(ck));
            in.add(vec);
        }
        rank_in = in.rank();
    }
    return n - out.rank() - rank_in;
}

// ext_dim recomputed with the basis order reversed; must agree with ext_dim.
inline int ext_dim_reversed(int s, int t, const ComodDesc& comod)
{
    BidegreeBasis b = ext_cochain_basis(s, t, comod);
    std::reverse(b.elems.begin(), b.elems.end());
    int n = b.size();
    detail::CoordIndex target;
    F2SpanRank out;
    for (auto& e : b.elems) {
        TensorElem d = normalized_d(ext_mono_chain(e, comod, Mode::F2, 1));
        std::vector<int> vec;
        for (auto& [ck, v] : detail::decompose(d))
            if (v & 1) vec.push_back(target.intern(ck));
        out.add(vec);
    }
    int rank_in = 0;
    if (s > 0) {
        BidegreeBasis below = ext_cochain_basis(s - 1, t, comod);
        std::reverse(below.elems.begin(), below.elems.end());
        detail::CoordIndex mid;
        F2SpanRank in;
        for (auto& e : below.elems) {
            TensorElem d = normalized_d(ext_mono_chain(e, comod, Mode::F2, 1));
            std::vector<int> vec;
            for (auto& [ck, v] : detail::decompose(d))
                if (v & 1) vec.push_back(mid.intern(ck));
            in.add(vec);
        }
        rank_in = in.rank();
    }
    return n - out.rank() - rank_in;
}

// ---- integral Ext via Smith normal form over Z/2^N

struct IntegralExt {
    // log2 of the cyclic 2-power orders, ascending.
    std::vector<int> torsion_exponents;
    // Summands indistinguishable from free at this precision.
    int free_rank = 0;
    int precision = 0;
    friend bool operator==(const IntegralExt& a, const IntegralExt& b)
    {
        return a.torsion_exponents == b.torsion_exponents && a.free_rank == b.free_rank;
    }
};

inline IntegralExt integral_ext(int s, int t, const ComodDesc& comod, int N)
{
    if (N < 4) throw std::invalid_argument("integral_ext: precision must be at least 4");
    IntegralExt out;
    out.precision = N;
    BidegreeBasis b = ext_cochain_basis(s, t, comod);
    int n = b.size();
    uint64_t mask = pow2_mask(N);

    // rank of d_{s,t}: number of elementary divisors below 2^N
    detail::CoordIndex target;
    std::vector<std::vector<std::pair<int, uint64_t>>> cols(n);
    for (int c = 0; c < n; ++c) {
        TensorElem d = normalized_d(ext_mono_chain(b.elems[c], comod, Mode::Z2N, N));
        for (auto& [ck, v] : detail::decompose(d))
            if (v & mask) cols[c].push_back({target.intern(ck), v & mask});
    }
    std::vector<std::vector<uint64_t>> mat(target.size(), std::vector<uint64_t>(n, 0));
    for (int c = 0; c < n; ++c)
        for (auto& [r, v] : cols[c]) mat[r][c] = v;
    int rank_out = 0;
    for (int e : snf_mod2n(mat, N).exponents)
        if (e < N) ++rank_out;

    // d_{s-1,t} into C^{s,t}: torsion of the quotient comes from its
    // elementary divisors. Its image must stay in the connective span;
    // comodules whose integral coaction leaves it are rejected above s = 0.
    int rank_in = 0;
    if (s > 0) {
        detail::CoordIndex space;
        for (auto& e : b.elems) space.intern(detail::CoordKey{{e.w, e.m}, e.coeff, 0, 0});
        BidegreeBasis below = ext_cochain_basis(s - 1, t, comod);
        std::vector<std::vector<std::pair<int, uint64_t>>> icols(below.size());
        for (int c = 0; c < below.size(); ++c) {
            TensorElem d = normalized_d(ext_mono_chain(below.elems[c], comod, Mode::Z2N, N));
            for (auto& [ck, v] : detail::decompose(d)) {
                if (!(v & mask)) continue;
                auto i = space.find(ck);
                if (!i)
                    throw std::domain_error(
                        "integral_ext: differential leaves the connective span; "
                        "only filtration 0 is supported for this comodule");
                icols[c].push_back({*i, v & mask});
            }
        }
        std::vector<std::vector<uint64_t>> imat(space.size(),
                                                std::vector<uint64_t>(below.size(), 0));
        for (int c = 0; c < below.size(); ++c)
            for (auto& [r, v] : icols[c]) imat[r][c] = v;
        for (int e : snf_mod2n(imat, N).exponents) {
            if (e >= N) continue;
            ++rank_in;
            if (e > 0) out.torsion_exponents.push_back(e);
        }
        std::sort(out.torsion_exponents.begin(), out.torsion_exponents.end());
    }
    out.free_rank = n - rank_out - rank_in;
    return out;
}

// ---- 2-Bockstein d1

// d1 of a mod-2 class: half the coboundary of an integral lift, reduced mod
// 2. The lift must reduce to the class representative and have coboundary
// divisible by 2. Lift-choice indeterminacy is a coboundary, hence zero in
// the target group.
inline ExtClass bockstein_d1(const ExtClass& c, const TensorElem& lift)
{
    if (lift.mode() != Mode::Z2N || lift.precision() < 2)
        throw std::invalid_argument("bockstein_d1: integral lift of precision >= 2 required");
    if (project_reduced(lift).mod2() != c.rep)
        throw std::invalid_argument("bockstein_d1: lift does not reduce to the representative");
    TensorElem d = normalized_d(lift);
    if (!d.divisible_by_2k(1))
        throw std::invalid_argument("bockstein_d1: coboundary not divisible by 2");
    return ext_class_of(d.div_pow2(1).mod2(), c.s + 1, c.t, *c.comod);
}

// ---- named classes of the base-comodule Ext ring

inline ExtClass ext_scalar_class(const LocElem& a, int t)
{
    TensorElem x(0, &unit_comodule(), Mode::F2, 1);
    x.add_plain({{}, 0}, a.mod2());
    return ext_class_of(x, 0, t, unit_comodule());
}

namespace detail {
inline ExtClass wedge_class(const GammaElem& g, int s_unused, int t)
{
    (void)s_unused;
    TensorElem x(1, &unit_comodule(), Mode::F2, 1);
    for (int w = 1; w < kGammaRank; ++w)
        if (!g.c[w].is_zero()) x.add_plain({{uint8_t(w)}, 0}, g.c[w].mod2());
    return ext_class_of(x, 1, t, unit_comodule());
}
}  // namespace detail

inline ExtClass ext_h1() { return detail::wedge_class(GammaElem::word(1, Mode::F2, 1), 1, 2); }
inline ExtClass ext_h2() { return detail::wedge_class(r_elem(Mode::F2, 1), 1, 4); }
inline ExtClass ext_x()
{
    GammaElem r = r_elem(Mode::F2, 1);
    return detail::wedge_class(gamma_mul(r, r), 1, 8);
}
inline ExtClass ext_delta() { return ext_scalar_class(LocElem::delta(Mode::F2, 1), 24); }

// g: the class at (s, t) = (4, 24) carried to Delta h1^4 by a1^4.
inline ExtClass ext_g()
{
    ExtClass h1 = ext_h1();
    ExtClass target = ext_product(ext_delta(), ext_product(h1, ext_product(h1, ext_product(h1, h1))));
    ExtClass a14 = ext_scalar_class(LocElem::monomial(4, 0, 1, Mode::F2, 1), 8);
    std::vector<ExtClass> basis = ext_basis(4, 24, unit_comodule());
    if (basis.size() > 16) throw std::runtime_error("ext_g: bidegree unexpectedly large");
    for (unsigned bits = 1; bits < (1u << basis.size()); ++bits) {
        TensorElem rep(4, &unit_comodule(), Mode::F2, 1);
        for (size_t i = 0; i < basis.size(); ++i)
            if (bits & (1u << i)) rep = rep + basis[i].rep;
        ExtClass c = ext_class_of(rep, 4, 24, unit_comodule());
        if (ext_classes_equal(ext_product(a14, c), target)) {
            c.label = "g";
            return c;
        }
    }
    throw std::runtime_error("ext_g: no class at (4,24) with a1^4 g = Delta h1^4");
}

}  // namespace cbf
