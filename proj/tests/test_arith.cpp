#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "cobarforge/basepoly.hpp"
#include "cobarforge/linalg.hpp"
#include "cobarforge/locelem.hpp"

using namespace cbf;

namespace {

constexpr Mode Z = Mode::Z2N;

LocElem random_locelem(std::mt19937& rng, int prec, int max_terms = 12)
{
    std::uniform_int_distribution<int> nt(0, max_terms);
    std::uniform_int_distribution<int> exp(0, 4);
    std::uniform_int_distribution<int> den(0, 2);
    std::uniform_int_distribution<int64_t> cv(-128, 128);
    BasePoly p(Z, prec);
    int n = nt(rng);
    for (int k = 0; k < n; ++k)
        p.add_term({exp(rng), exp(rng)}, Coeff(cv(rng), prec, Z));
    return LocElem(p, den(rng), den(rng));
}

}  // namespace

TEST_CASE("truncated coefficient arithmetic")
{
    Coeff a(13, 8), b(7, 8);
    CHECK((a * b).v == ((13 * 7) & 255));
    CHECK((a + b).v == 20);
    CHECK((a - b).v == 6);
    CHECK((-Coeff(1, 4)).v == 15);
    SECTION("mixed precision truncates to the minimum")
    {
        Coeff c(200, 8), d(1, 4);
        Coeff s = c + d;
        CHECK(s.n == 4);
        CHECK(s.v == ((200 + 1) & 15));
    }
    SECTION("mode mixing is rejected")
    {
        CHECK_THROWS(Coeff::f2(1) + Coeff(1, 8));
    }
}

TEST_CASE("invert_unit on odd integers")
{
    // 3^{-1} = 11 mod 16, 27^{-1} = 19 mod 256
    CHECK(invert_unit(Coeff(3, 4)).v == 11);
    CHECK(invert_unit(Coeff(27, 8)).v == 19);
    CHECK_THROWS(invert_unit(Coeff(6, 8)));
    for (uint64_t u = 1; u < 256; u += 2) {
        Coeff c(int64_t(u), 8);
        CHECK((c * invert_unit(c)).v == 1);
    }
}

TEST_CASE("base polynomial ring laws", "[property]")
{
    std::mt19937 rng(12345);
    for (int trial = 0; trial < 60; ++trial) {
        LocElem x = random_locelem(rng, 8), y = random_locelem(rng, 8),
                z = random_locelem(rng, 8);
        CHECK(x + y == y + x);
        CHECK(x * y == y * x);
        CHECK((x + y) + z == x + (y + z));
        CHECK((x * y) * z == x * (y * z));
        CHECK(x * (y + z) == x * y + x * z);
    }
}

TEST_CASE("truncation is a ring map", "[property]")
{
    std::mt19937 rng(777);
    for (int trial = 0; trial < 40; ++trial) {
        LocElem x = random_locelem(rng, 10), y = random_locelem(rng, 10);
        CHECK((x * y).truncated(5) == x.truncated(5) * y.truncated(5));
        CHECK((x + y).truncated(5) == x.truncated(5) + y.truncated(5));
    }
}

TEST_CASE("fraction reduction")
{
    constexpr int N = 8;
    SECTION("Delta^{-1} * a3^3 * v2 reduces to 1")
    {
        LocElem x = LocElem::delta_inv(Z, N) * LocElem::a3(Z, N) * LocElem::a3(Z, N) *
                    LocElem::a3(Z, N) * LocElem::v2(Z, N);
        LocElem r = x.reduced();
        CHECK(r.dA3() == 0);
        CHECK(r.dV2() == 0);
        CHECK(r == LocElem::constant(1, Z, N));
    }
    SECTION("reduce_fraction is idempotent and preserves value", "[property]")
    {
        std::mt19937 rng(4242);
        for (int trial = 0; trial < 60; ++trial) {
            LocElem x = random_locelem(rng, 8);
            LocElem r = x.reduced();
            CHECK(r == x);
            LocElem r2 = r.reduced();
            CHECK(r2.dA3() == r.dA3());
            CHECK(r2.dV2() == r.dV2());
        }
    }
    SECTION("unreduced fractions compare equal by cross-multiplication")
    {
        LocElem a3 = LocElem::a3(Z, N);
        LocElem x(a3.num() * a3.num(), 1, 0);  // a3^2 / a3
        CHECK(x == a3);
    }
}

TEST_CASE("unit recognition and Hensel inversion")
{
    constexpr int N = 8;
    SECTION("Delta is a unit, a1 is not")
    {
        CHECK(LocElem::delta(Z, N).is_unit());
        CHECK(LocElem::v2(Z, N).is_unit());
        CHECK_FALSE(LocElem::a1(Z, N).is_unit());
        CHECK_FALSE(LocElem::constant(2, Z, N).is_unit());
        CHECK_THROWS(LocElem::a1(Z, N).inverse());
    }
    SECTION("inverse of Delta")
    {
        LocElem d = LocElem::delta(Z, N);
        CHECK(d * d.inverse() == LocElem::constant(1, Z, N));
    }
    SECTION("random units invert", "[property]")
    {
        std::mt19937 rng(99);
        for (int trial = 0; trial < 25; ++trial) {
            // unit = (odd + 2*junk) * a3^i v2^j / (a3^k v2^l)
            LocElem u = LocElem::constant(1, Z, N) +
                        random_locelem(rng, N).scaled(2);
            std::uniform_int_distribution<int> e(0, 2);
            for (int k = e(rng); k-- > 0;) u = u * LocElem::a3(Z, N);
            u = u * LocElem(BasePoly::constant(1, Z, N), e(rng), e(rng));
            if (!u.is_unit()) continue;
            CHECK(u * u.inverse() == LocElem::constant(1, Z, N));
        }
    }
    SECTION("27 inverts to 19 mod 256")
    {
        LocElem x = LocElem::constant(27, Z, N).inverse();
        CHECK(x == LocElem::constant(19, Z, N));
    }
}

TEST_CASE("2-divisibility")
{
    LocElem x = LocElem::a1(Z, 8).scaled(4);
    CHECK(x.divisible_by_2k(2));
    LocElem h = x.div_pow2(2);
    CHECK(h.precision() == 6);
    CHECK(h == LocElem::a1(Z, 6));
}

TEST_CASE("F2 matrix rank agrees with transposed rank", "[property]")
{
    std::mt19937 rng(31337);
    for (int trial = 0; trial < 200; ++trial) {
        std::uniform_int_distribution<int> dim(1, 64);
        int r = dim(rng), c = dim(rng);
        F2Matrix m(r, c);
        std::uniform_int_distribution<int> bit(0, 3);
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < c; ++j)
                if (bit(rng) == 0) m.set(i, j, true);
        CHECK(m.rank() == m.transposed().rank());
    }
}

TEST_CASE("F2 kernel basis")
{
    std::mt19937 rng(555);
    for (int trial = 0; trial < 50; ++trial) {
        std::uniform_int_distribution<int> dim(1, 40);
        int r = dim(rng), c = dim(rng);
        F2Matrix m(r, c);
        std::uniform_int_distribution<int> bit(0, 2);
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < c; ++j)
                if (bit(rng) == 0) m.set(i, j, true);
        auto ker = m.kernel_basis();
        CHECK(int(ker.size()) == c - m.rank());
        for (auto& v : ker) {
            // Mv = 0
            for (int i = 0; i < r; ++i) {
                int parity = 0;
                for (int j = 0; j < c; ++j)
                    if (m.get(i, j) && ((v[j / 64] >> (j % 64)) & 1)) parity ^= 1;
                REQUIRE(parity == 0);
            }
        }
    }
}

TEST_CASE("incremental span rank matches dense rank", "[property]")
{
    std::mt19937 rng(808);
    for (int trial = 0; trial < 50; ++trial) {
        std::uniform_int_distribution<int> dim(1, 30);
        int r = dim(rng), c = dim(rng);
        F2Matrix m(c, r);  // rows of span = columns here
        F2SpanRank span;
        std::uniform_int_distribution<int> bit(0, 2);
        for (int i = 0; i < c; ++i) {
            std::vector<int> v;
            for (int j = 0; j < r; ++j)
                if (bit(rng) == 0) {
                    m.set(i, j, true);
                    v.push_back(j);
                }
            span.add(v);
        }
        CHECK(span.rank() == m.rank());
    }
}

TEST_CASE("Smith normal form over Z/2^N")
{
    SECTION("diag(2,4) has divisors 2, 4")
    {
        std::vector<std::vector<uint64_t>> a = {{2, 0}, {0, 4}};
        auto d = elementary_divisors_mod2n(a, 8);
        REQUIRE(d.size() == 2);
        CHECK(d[0] == 2);
        CHECK(d[1] == 4);
    }
    SECTION("unimodular transforms do not change divisors", "[property]")
    {
        std::mt19937 rng(2024);
        constexpr int N = 8;
        for (int trial = 0; trial < 40; ++trial) {
            std::uniform_int_distribution<int> dim(1, 8);
            int r = dim(rng), c = dim(rng);
            std::uniform_int_distribution<int64_t> ent(0, 255);
            std::vector<std::vector<uint64_t>> a(r, std::vector<uint64_t>(c));
            for (auto& row : a)
                for (auto& x : row) x = uint64_t(ent(rng));
            auto d1 = elementary_divisors_mod2n(a, N);
            // random unimodular row/col operations
            std::uniform_int_distribution<int> pick(0, 255);
            auto b = a;
            for (int k = 0; k < 20; ++k) {
                uint64_t q = uint64_t(pick(rng));
                if (r > 1) {
                    int i = int(rng() % r), j = int(rng() % r);
                    if (i != j)
                        for (int col = 0; col < c; ++col)
                            b[i][col] = (b[i][col] + q * b[j][col]) & 255;
                }
                if (c > 1) {
                    int i = int(rng() % c), j = int(rng() % c);
                    if (i != j)
                        for (int row = 0; row < r; ++row)
                            b[row][i] = (b[row][i] + q * b[row][j]) & 255;
                }
            }
            auto d2 = elementary_divisors_mod2n(b, N);
            CHECK(d1 == d2);
        }
    }
}
