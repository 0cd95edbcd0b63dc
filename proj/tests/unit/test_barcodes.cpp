#include "doctest.h"

#include "legsheaf/barcodes.hpp"

#include <algorithm>
#include <cctype>
#include <random>
#include <sstream>

using namespace lgs;

namespace {

Bar bar(Q a, Q b, int deg = 0, int mult = 1) { return Bar{ExtQ::of(a), ExtQ::of(b), deg, mult}; }
Barcode single(Q a, Q b, int deg = 0) { return Barcode({bar(a, b, deg)}); }

Barcode random_barcode(std::mt19937& rng, int max_bars, int range, int degrees)
{
    std::vector<Bar> bars;
    int n = static_cast<int>(rng() % (max_bars + 1));
    for (int i = 0; i < n; ++i) {
        int a = static_cast<int>(rng() % range), len = 1 + static_cast<int>(rng() % 4);
        bars.push_back(bar(Q(a), Q(a + len), static_cast<int>(rng() % degrees)));
    }
    return Barcode(bars);
}

// Brute force over integer (eps, eps') pairs, probing just above each grid point.
// For integer endpoints every vertex of the feasible region is integral.
Q grid_distance(const Barcode& m, const Barcode& n, int limit)
{
    Q best(-1);
    for (int s = 0; s <= 2 * limit; ++s) {
        for (int e = 0; e <= s; ++e)
            if (interleaved(m, n, Q(e) + Q(1, 97), Q(s - e) + Q(1, 97)))
                return Q(s);
    }
    return best;
}

}  // namespace

TEST_SUITE("barcodes") {

TEST_CASE("dimension function")
{
    Barcode b = single(Q(0), Q(1));
    CHECK(dimension_function(b, 0, Q(1)) == 1);
    CHECK(dimension_function(b, 0, Q(0)) == 0);
    Barcode pt({bar(Q(-1), Q(0), 1), bar(Q(0), Q(1), 0)});
    CHECK(dimension_function(pt, 1, Q(-1, 2)) == 1);
    CHECK(dimension_function(pt, 0, Q(-1, 2)) == 0);
    CHECK(dimension_function(Barcode(), 0, Q(3)) == 0);
}

TEST_CASE("canonical order and merging")
{
    Barcode b({bar(Q(0), Q(1), 1), bar(Q(-1), Q(2), 0), bar(Q(0), Q(1), 1, 2)});
    REQUIRE(b.bars().size() == 2);
    CHECK(b.bars()[0].degree == 0);
    CHECK(b.bars()[1].mult == 3);
    CHECK_THROWS_AS(Barcode({bar(Q(1), Q(1))}), BarcodeError);
}

TEST_CASE("shift")
{
    CHECK(shift(single(Q(0), Q(1)), Q(0)) == single(Q(0), Q(1)));
    CHECK(shift(single(Q(0), Q(1)), Q(1)) == single(Q(-1), Q(0)));
}

TEST_CASE("reconstruction examples")
{
    RankInvariant zero = rank_invariant_of(Barcode(), {Q(0), Q(1)});
    CHECK(barcode_from_rank_invariant(zero).empty());

    RankInvariant ri;
    ri.critical = {Q(0), Q(1)};
    ri.samples = gap_samples(ri.critical);
    ri.ranks[{1, 1}] = {{0, 1}};
    CHECK(barcode_from_rank_invariant(ri) == single(Q(0), Q(1)));

    // Point example: degree 1 on (-1, 0), degree 0 on (0, 1), nothing across 0.
    RankInvariant pt;
    pt.critical = {Q(-1), Q(0), Q(1)};
    pt.samples = gap_samples(pt.critical);
    pt.ranks[{1, 1}] = {{1, 1}};
    pt.ranks[{2, 2}] = {{0, 1}};
    CHECK(barcode_from_rank_invariant(pt) == Barcode({bar(Q(-1), Q(0), 1), bar(Q(0), Q(1), 0)}));
}

TEST_CASE("inconsistent rank invariants are reported")
{
    RankInvariant ri;
    ri.critical = {Q(0)};
    ri.samples = gap_samples(ri.critical);
    ri.ranks[{0, 0}] = {{0, 1}};
    ri.ranks[{0, 1}] = {{0, 1}};  // exceeds dim at sample 1
    try {
        barcode_from_rank_invariant(ri);
        FAIL("expected error");
    } catch (const BarcodeError& e) {
        CHECK(std::string(e.what()).find("degree 0") != std::string::npos);
        CHECK(std::string(e.what()).find("(0, 1)") != std::string::npos);
    }
}

TEST_CASE("rank invariant round trip on random barcodes")
{
    std::mt19937 rng(3);
    for (int t = 0; t < 200; ++t) {
        std::vector<Bar> bars;
        std::vector<Q> crit;
        int n = static_cast<int>(rng() % 5);
        for (int i = 0; i < n; ++i) {
            int a = static_cast<int>(rng() % 6) - 3, b = a + 1 + static_cast<int>(rng() % 4);
            ExtQ s = rng() % 7 == 0 ? ExtQ::neg_inf() : ExtQ::of(Q(a));
            ExtQ e = rng() % 7 == 0 ? ExtQ::pos_inf() : ExtQ::of(Q(b));
            bars.push_back(Bar{s, e, static_cast<int>(rng() % 3), 1 + static_cast<int>(rng() % 2)});
            if (s.finite())
                crit.push_back(s.val);
            if (e.finite())
                crit.push_back(e.val);
        }
        Barcode bc(bars);
        CHECK(barcode_from_rank_invariant(rank_invariant_of(bc, crit)) == bc);
    }
}

TEST_CASE("interleaving check examples")
{
    Barcode b = single(Q(0), Q(2));
    CHECK(interleaved(b, b, Q(0), Q(0)));
    CHECK(interleaved(single(Q(1), Q(3)), single(Q(0), Q(2)), Q(1, 10), Q(11, 10)));
    CHECK_FALSE(interleaved(single(Q(1), Q(3)), single(Q(0), Q(2)), Q(1, 10), Q(1, 2)));
    CHECK(interleaving_check(b, b, Q(0), Q(0)).method == "exhaustive");
}

TEST_CASE("distance examples")
{
    Barcode b({bar(Q(0), Q(2)), bar(Q(1), Q(5), 1)});
    CHECK(interleaving_distance(b, b).value == ExtQ::of(Q(0)));
    CHECK(interleaving_distance(single(Q(1), Q(3)), single(Q(0), Q(2))).value == ExtQ::of(Q(1)));
    CHECK(interleaving_distance(single(Q(1), Q(2)), single(Q(0), Q(3))).value == ExtQ::of(Q(2)));
    // A bar against nothing: killed once eps + eps' reaches its length.
    CHECK(interleaving_distance(single(Q(0), Q(3)), Barcode()).value == ExtQ::of(Q(3)));
    Barcode inf({Bar{ExtQ::of(Q(0)), ExtQ::pos_inf(), 0, 1}});
    CHECK(interleaving_distance(inf, Barcode()).value == ExtQ::pos_inf());
}

TEST_CASE("single-bar closed formulas")
{
    std::mt19937 rng(5);
    std::uniform_int_distribution<int> num(-40, 40);
    for (int t = 0; t < 100; ++t) {
        // staircase a1 < a0 < b1 < b0
        std::vector<Q> v;
        while (v.size() < 4) {
            Q q(num(rng), 1 + static_cast<int>(rng() % 6));
            q.canonicalize();
            if (std::find(v.begin(), v.end(), q) == v.end())
                v.push_back(q);
        }
        std::sort(v.begin(), v.end());
        Q a1 = v[0], a0 = v[1], b1 = v[2], b0 = v[3];
        auto d = interleaving_distance(single(a0, b0), single(a1, b1)).value;
        CHECK(d == ExtQ::of(std::max(a0 - a1, b0 - b1)));
        // nested a1 < a0 < b0 < b1
        Q na1 = v[0], na0 = v[1], nb0 = v[2], nb1 = v[3];
        auto dn = interleaving_distance(single(na0, nb0), single(na1, nb1)).value;
        CHECK(dn == ExtQ::of((na0 - na1) + (nb1 - nb0)));
    }
}

TEST_CASE("distance agrees with integer grid brute force")
{
    std::mt19937 rng(17);
    for (int t = 0; t < 25; ++t) {
        Barcode m = random_barcode(rng, 2, 5, 1), n = random_barcode(rng, 2, 5, 1);
        Q g = grid_distance(m, n, 10);
        CHECK(interleaving_distance(m, n).value == ExtQ::of(g));
    }
}

TEST_CASE("triangle inequality, monotonicity and shift bound")
{
    std::mt19937 rng(23);
    for (int t = 0; t < 30; ++t) {
        Barcode a = random_barcode(rng, 3, 6, 2), b = random_barcode(rng, 3, 6, 2), c = random_barcode(rng, 3, 6, 2);
        Q dab = interleaving_distance(a, b).value.val, dbc = interleaving_distance(b, c).value.val;
        Q dac = interleaving_distance(a, c).value.val;
        CHECK(dac <= dab + dbc);
        Q e(static_cast<int>(rng() % 5), 2), e2(static_cast<int>(rng() % 5), 2);
        if (interleaved(a, b, e, e2)) {
            CHECK(interleaved(a, b, e + Q(1, 3), e2));
            CHECK(interleaved(a, b, e, e2 + Q(1, 2)));
        }
        Q c0(static_cast<int>(rng() % 7), 3);
        CHECK(interleaving_distance(a, shift(a, c0)).value <= ExtQ::of(c0));
        CHECK(interleaved(a, shift(a, c0), Q(0), c0));
    }
}

TEST_CASE("matching agrees with exhaustive search on small problems")
{
    std::mt19937 rng(29);
    int checked = 0;
    for (int t = 0; t < 400; ++t) {
        Barcode x = random_barcode(rng, 4, 6, 1), y = random_barcode(rng, 4, 6, 1);
        Q a(static_cast<int>(rng() % 7), 2), b(static_cast<int>(rng() % 7), 2);
        bool ex = factorization_exists(x.bars(), y.bars(), a, b, FactorMethod::Exhaustive);
        bool mt = factorization_exists(x.bars(), y.bars(), a, b, FactorMethod::Matching);
        CHECK(ex == mt);
        ++checked;
    }
    CHECK(checked == 400);
}

TEST_CASE("tsv round trip and svg")
{
    Barcode b({bar(Q(-1), Q(0), 1), bar(Q(0), Q(1), 0), Bar{ExtQ::neg_inf(), ExtQ::of(Q(1, 3)), 2, 2}});
    std::string tsv = barcode_tsv(b);
    CHECK(tsv == "0\t0/1\t1/1\t1\n1\t-1/1\t0/1\t1\n2\t-inf\t1/3\t2\n");
    std::istringstream in(tsv);
    CHECK(read_barcode_tsv(in) == b);
    std::istringstream ints("1\t-1\t0\t1\n");
    CHECK(read_barcode_tsv(ints) == Barcode({bar(Q(-1), Q(0), 1)}));
    std::istringstream bad("1\t2\t0\t1\n");
    CHECK_THROWS_AS(read_barcode_tsv(bad), BarcodeError);
    std::istringstream bad2("1\tx\t0\t1\n");
    CHECK_THROWS_AS(read_barcode_tsv(bad2), BarcodeError);
    std::string svg = barcode_svg(b);
    CHECK(svg.find("<svg") == 0);
    for (std::size_t i = 1; i + 1 < svg.size(); ++i)
        CHECK_FALSE((svg[i] == '.' && std::isdigit(static_cast<unsigned char>(svg[i - 1])) &&
                     std::isdigit(static_cast<unsigned char>(svg[i + 1]))));
}

}
