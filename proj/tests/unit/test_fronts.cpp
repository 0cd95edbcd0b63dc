#include "doctest.h"

#include "legsheaf/fronts.hpp"

#include <string>

using namespace lgs;

namespace {

std::string corpus(const std::string& name) { return std::string(LEGSHEAF_CORPUS_DIR) + "/" + name; }

Sheet sheet(std::vector<std::pair<Q, Q>> pts)
{
    Sheet s;
    for (auto& [x, t] : pts)
        s.pts.push_back(Point2{x, t});
    return s;
}

// Diamond of half-width w and half-height h centred at (cx, ct).
PLFront diamond(Q cx, Q ct, Q w, Q h)
{
    PLFront f;
    f.sheets.push_back(sheet({{cx - w, ct}, {cx, ct + h}, {cx + w, ct}}));
    f.sheets.push_back(sheet({{cx - w, ct}, {cx, ct - h}, {cx + w, ct}}));
    f.cusps.push_back(Cusp{cx - w, 0, 1, CuspKind::Left});
    f.cusps.push_back(Cusp{cx + w, 0, 1, CuspKind::Right});
    f.potentials = {-1, 0};
    return f;
}

}  // namespace

TEST_SUITE("fronts") {

TEST_CASE("point example")
{
    Front f = read_front_file(corpus("point-pair.json"));
    CHECK(validate(f).ok());
    CHECK(f.dim() == 0);
    CHECK(f.strands() == 2);
    auto chords = enumerate_chords(f);
    REQUIRE(chords.size() == 1);
    CHECK(chords[0].length == Q(1));
    CHECK(chords[0].degree == 0);
    CHECK(betti(f) == std::vector<int>{2});
}

TEST_CASE("diamond unknot chords and thresholds")
{
    Front f = read_front_file(corpus("unknot.json"));
    REQUIRE(validate(f).ok());
    auto chords = enumerate_chords(f);
    REQUIRE(chords.size() == 1);
    // The only slope match is at the apex x = 0, where top - bottom = 1 - (-1).
    CHECK(chords[0].x == Q(0));
    CHECK(chords[0].length == Q(2));
    CHECK(chords[0].degree == 0);
    CHECK(betti(f) == std::vector<int>{1, 1});
    auto cl = min_chord_lengths(1, chords);
    CHECK(cl.at(0) == ExtQ::of(Q(2)));
    CHECK(cl.at(1) == ExtQ::of(Q(2)));
}

TEST_CASE("chords of a built diamond scale with height")
{
    for (int h = 1; h <= 4; ++h) {
        Front f = Front::of(diamond(Q(0), Q(0), Q(1), Q(h)));
        REQUIRE(validate(f).ok());
        auto chords = enumerate_chords(f);
        REQUIRE(chords.size() == 1);
        CHECK(chords[0].length == Q(2 * h));
    }
}

TEST_CASE("corpus fronts")
{
    Front t = read_front_file(corpus("trefoil.json"));
    CHECK(validate(t).ok());
    auto tc = enumerate_chords(t);
    CHECK(tc.size() == 5);
    int count = 0;
    components(t, &count);
    CHECK(count == 1);
    CHECK(betti(t) == std::vector<int>{1, 1});

    Front s = read_front_file(corpus("link-split.json"));
    components(s, &count);
    CHECK(count == 2);
    CHECK(betti(s) == std::vector<int>{2, 2});
    CHECK(enumerate_chords(s).size() == 2);

    Front z = read_front_file(corpus("zigzag.json"));
    CHECK(validate(z).ok());
}

TEST_CASE("chord lengths are invariant under translation")
{
    Front f = read_front_file(corpus("trefoil.json"));
    Front g = translate(f, Q(7, 3));
    auto a = enumerate_chords(f), b = enumerate_chords(g);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].length == b[i].length);
        CHECK(a[i].degree == b[i].degree);
    }
}

TEST_CASE("json round trip")
{
    for (const char* name : {"point-pair.json", "unknot.json", "trefoil.json", "link-overlap.json"}) {
        Front f = read_front_file(corpus(name));
        Front g = read_front_json(write_front_json(f));
        CHECK(write_front_json(g) == write_front_json(f));
    }
}

TEST_CASE("validation negative controls")
{
    PLFront d = diamond(Q(0), Q(0), Q(1), Q(1));

    PLFront bad_pot = d;
    bad_pot.potentials = {0, 0};
    CHECK(validate(Front::of(bad_pot)).has("potential rule"));

    PLFront bad_cusp = d;
    bad_cusp.cusps[0].x = Q(-2);
    CHECK(validate(Front::of(bad_cusp)).has("bad cusp"));

    PLFront missing = d;
    missing.cusps.pop_back();
    CHECK(validate(Front::of(missing)).has("unpaired sheet end"));

    // Two diamonds sharing a segment direction through the same line.
    PLFront par = diamond(Q(0), Q(0), Q(1), Q(1));
    PLFront other = diamond(Q(1, 2), Q(1, 2), Q(1), Q(1));
    for (auto s : other.sheets)
        par.sheets.push_back(s);
    for (auto c : other.cusps)
        par.cusps.push_back(Cusp{c.x, c.a + 2, c.b + 2, c.kind});
    par.potentials = {-1, 0, -1, 0};
    CHECK(validate(Front::of(par)).has("parallel segments"));

    // Three sheets through one point.
    PLFront tri;
    tri.sheets.push_back(sheet({{Q(-2), Q(0)}, {Q(0), Q(2)}, {Q(2), Q(0)}}));
    tri.sheets.push_back(sheet({{Q(-2), Q(0)}, {Q(0), Q(-2)}, {Q(2), Q(0)}}));
    tri.cusps.push_back(Cusp{Q(-2), 0, 1, CuspKind::Left});
    tri.cusps.push_back(Cusp{Q(2), 0, 1, CuspKind::Right});
    tri.potentials = {-1, 0};
    PLFront x = tri;
    x.sheets.push_back(sheet({{Q(-3), Q(-3)}, {Q(3), Q(3)}}));
    x.sheets.push_back(sheet({{Q(-3), Q(3)}, {Q(3), Q(-3)}}));
    CHECK_FALSE(validate(Front::of(x)).ok());

    PointFront p{{Q(0), Q(1)}, {0}};
    CHECK(validate(Front::of(p)).has("potential count"));

    CHECK_THROWS_AS(read_front_json("{\"kind\": \"pl\", \"sheets\": ["), FrontError);
    CHECK_THROWS_AS(read_front_file(corpus("no-such-file.json")), FrontError);
}

TEST_CASE("mixed chords of point fronts")
{
    Front f = read_front_file(corpus("point-pair.json"));
    Front g = translate(f, Q(1, 4));
    auto m = mixed_chords(f, g);
    // Ordered pairs: |0 - 1/4|, |0 - 5/4|, |1 - 1/4|, |1 - 5/4|.
    REQUIRE(m.size() == 4);
    std::vector<Q> lengths;
    for (const auto& c : m)
        lengths.push_back(c.length);
    std::sort(lengths.begin(), lengths.end());
    CHECK(lengths == std::vector<Q>{Q(1, 4), Q(1, 4), Q(3, 4), Q(5, 4)});
    CHECK_THROWS_AS(mixed_chords(f, f), FrontError);
}

TEST_CASE("pure vertical shift is not transverse")
{
    Front f = read_front_file(corpus("unknot.json"));
    CHECK_THROWS_AS(mixed_chords(f, translate(f, Q(1, 4))), FrontError);
}

TEST_CASE("tilted perturbation of the unknot")
{
    Front f = read_front_file(corpus("unknot.json"));
    PLFront p;
    p.sheets.push_back(sheet({{Q(-1), Q(1, 16)}, {Q(-15, 16), Q(1, 4)}, {Q(0), Q(17, 16)}, {Q(15, 16), Q(-3, 16)},
                              {Q(1), Q(-1, 16)}}));
    p.sheets.push_back(sheet({{Q(-1), Q(1, 16)}, {Q(-15, 16), Q(3, 16)}, {Q(0), Q(-7, 8)}, {Q(15, 16), Q(-1, 4)},
                              {Q(1), Q(-1, 16)}}));
    p.cusps = {Cusp{Q(-1), 0, 1, CuspKind::Left}, Cusp{Q(1), 0, 1, CuspKind::Right}};
    p.potentials = {-1, 0};
    Front g = Front::of(p);
    REQUIRE(validate(g).ok());
    // Each of the four sheet pairs has one minimum and one maximum of its difference.
    CHECK(mixed_chords(f, g).size() == 8);
}

TEST_CASE("crossings")
{
    Front f = read_front_file(corpus("link-overlap.json"));
    CHECK(crossings(f.pl).size() >= 2);
    Front u = read_front_file(corpus("unknot.json"));
    CHECK(crossings(u.pl).empty());
}

}
