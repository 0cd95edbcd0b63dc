#include "doctest.h"

#include "legsheaf/reports.hpp"

#include <string>

using namespace lgs;

namespace {

std::string corpus(const std::string& name) { return std::string(LEGSHEAF_CORPUS_DIR) + "/" + name; }

const Field F2 = Field::prime(2);

struct Loaded {
    Front front;
    CellSheaf sheaf;
};

Loaded load(const char* front, const char* sheaf)
{
    Front f = read_front_file(corpus(front));
    return {f, read_sheaf_file(corpus(sheaf), f, F2)};
}

Sheet sheet(std::vector<std::pair<Q, Q>> pts)
{
    Sheet s;
    for (auto& [x, t] : pts)
        s.pts.push_back(Point2{x, t});
    return s;
}

// Moves the unknot by at most 1/4 while keeping cusps at the same x with both branches steeper than 1.
Front tilted_unknot()
{
    PLFront p;
    p.sheets.push_back(sheet({{Q(-1), Q(1, 16)}, {Q(-15, 16), Q(1, 4)}, {Q(0), Q(17, 16)}, {Q(15, 16), Q(-3, 16)},
                              {Q(1), Q(-1, 16)}}));
    p.sheets.push_back(sheet({{Q(-1), Q(1, 16)}, {Q(-15, 16), Q(3, 16)}, {Q(0), Q(-7, 8)}, {Q(15, 16), Q(-1, 4)},
                              {Q(1), Q(-1, 16)}}));
    p.cusps = {Cusp{Q(-1), 0, 1, CuspKind::Left}, Cusp{Q(1), 0, 1, CuspKind::Right}};
    p.potentials = {-1, 0};
    return Front::of(p);
}

const Inequality* find(const TheoremReport& r, const std::string& label)
{
    for (const auto& q : r.inequalities)
        if (q.label == label)
            return &q;
    return nullptr;
}

}  // namespace

TEST_SUITE("reports") {

TEST_CASE("betti bound on the unknot")
{
    Loaded l = load("unknot.json", "eye.json");
    TheoremReport r = betti_bound(l.front, l.sheaf);
    CHECK(r.verdict == Verdict::Pass);
    const Inequality* total = find(r, "|Q| >= (1/2) sum b_i");
    REQUIRE(total);
    CHECK(total->lhs == Q(1));
    CHECK(total->rhs == Q(1));
    CHECK(r.recompute() == r.verdict);
}

TEST_CASE("betti bound on the point example and trefoil")
{
    Loaded p = load("point-pair.json", "halfopen.json");
    TheoremReport r = betti_bound(p.front, p.sheaf);
    CHECK(r.verdict == Verdict::Pass);
    CHECK(find(r, "|Q| >= (1/2) sum b_i")->rhs == Q(1));

    Loaded t = load("trefoil.json", "trefoil-sheaf.json");
    TheoremReport rt = betti_bound(t.front, t.sheaf);
    CHECK(rt.verdict == Verdict::Pass);
    CHECK(find(rt, "|Q| >= (1/2) sum b_i")->lhs == Q(5));
}

TEST_CASE("morse inequalities")
{
    Loaded p = load("point-pair.json", "halfopen.json");
    TheoremReport r = morse_inequalities(p.front, p.sheaf);
    CHECK(r.verdict == Verdict::Pass);
    CHECK(r.values.at("hom_plus") == "{0:1}");

    Loaded u = load("unknot.json", "eye.json");
    TheoremReport ru = morse_inequalities(u.front, u.sheaf);
    CHECK(ru.verdict == Verdict::Pass);
    // Equality in degree 0.
    const Inequality* d0 = find(ru, "degree 0");
    REQUIRE(d0);
    CHECK(d0->lhs == d0->rhs);

    Loaded imp = load("unknot.json", "eye-impure.json");
    TheoremReport ri = morse_inequalities(imp.front, imp.sheaf);
    CHECK(ri.verdict == Verdict::Pass);
    CHECK(ri.values.at("mode") == "mixed");
    // One chord of degree 0 weighted by Hom(k + k[-1], k + k[-1]).
    CHECK(weighted_chord_counts(imp.front, imp.sheaf) == DegreeDims{{-1, 1}, {0, 2}, {1, 1}});
}

TEST_CASE("non-compact counterexample is inapplicable")
{
    Loaded h = load("point-one.json", "halfline.json");
    CHECK(betti_bound(h.front, h.sheaf).verdict == Verdict::Inapplicable);
    CHECK(morse_inequalities(h.front, h.sheaf).verdict == Verdict::Inapplicable);
    TheoremReport s = support_diagnostics(h.front, h.sheaf);
    CHECK(s.values.at("compact") == "false");
    CHECK(s.verdict == Verdict::Inapplicable);

    Loaded c = load("unknot.json", "constant.json");
    CHECK(betti_bound(c.front, c.sheaf).verdict == Verdict::Inapplicable);
}

TEST_CASE("impure sheaf is inapplicable for the betti bound")
{
    Loaded imp = load("unknot.json", "eye-impure.json");
    CHECK(betti_bound(imp.front, imp.sheaf).verdict == Verdict::Inapplicable);
}

TEST_CASE("zero sheaf has no microlocal rank")
{
    Front f = read_front_file(corpus("unknot.json"));
    CellSheaf z = zero_sheaf(arrange(f), F2);
    TheoremReport r = support_diagnostics(f, z);
    CHECK(r.values.at("compact") == "true");
    CHECK(r.verdict == Verdict::Inapplicable);
    CHECK(betti_bound(f, z).verdict == Verdict::Inapplicable);
}

TEST_CASE("displacement bound for the point example")
{
    Loaded p = load("point-pair.json", "halfopen.json");
    TheoremReport r = displacement_bound(p.front, p.sheaf, translate(p.front, Q(1, 4)), Q(1, 2));
    CHECK(r.verdict == Verdict::Pass);
    CHECK(r.values.at("k") == "0");
    // Four ordered pairs of points; the bound is b_0 = 2.
    const Inequality* q = find(r, "mixed chords >= sum of b_{j_i}, i <= k");
    REQUIRE(q);
    CHECK(q->lhs == Q(4));
    CHECK(q->rhs == Q(2));
}

TEST_CASE("displacement bound for the unknot")
{
    Loaded u = load("unknot.json", "eye.json");
    TheoremReport r = displacement_bound(u.front, u.sheaf, tilted_unknot(), Q(1, 2));
    CHECK(r.verdict == Verdict::Pass);
    CHECK(r.values.at("mixed chords") == "8");
    CHECK(r.values.at("surviving bars") == "2");
    // A pure vertical shift is not transverse.
    TheoremReport shift = displacement_bound(u.front, u.sheaf, translate(u.front, Q(1, 4)), Q(1, 2));
    CHECK(shift.verdict == Verdict::Inapplicable);
}

TEST_CASE("displacement bound vacuous and over budget")
{
    Loaded u = load("unknot.json", "eye.json");
    TheoremReport big = displacement_bound(u.front, u.sheaf, tilted_unknot(), Q(3));
    CHECK(big.verdict == Verdict::Inapplicable);
    bool noted = false;
    for (const auto& h : big.hypotheses)
        if (h.detail.find("vacuous") != std::string::npos)
            noted = true;
    CHECK(noted);
    // The perturbation moves heights by 1/4, more than eps / 2 = 1/8.
    CHECK(displacement_bound(u.front, u.sheaf, tilted_unknot(), Q(1, 4)).verdict == Verdict::Inapplicable);
}

TEST_CASE("verdicts are recomputable")
{
    TheoremReport r;
    r.hypotheses.push_back({"h", true, ""});
    r.inequalities.push_back({"a", Q(1), Q(2)});
    CHECK(r.recompute() == Verdict::Fail);
    r.inequalities[0].lhs = Q(2);
    CHECK(r.recompute() == Verdict::Pass);
    r.hypotheses.push_back({"g", false, ""});
    CHECK(r.recompute() == Verdict::Inapplicable);
}

TEST_CASE("betti and morse agree on the aggregate bound")
{
    for (auto [front, sheaf] : {std::pair{"unknot.json", "eye.json"}, std::pair{"link-split.json", "link-split-sheaf.json"},
                                std::pair{"trefoil.json", "trefoil-sheaf.json"}}) {
        Loaded l = load(front, sheaf);
        CHECK(betti_bound(l.front, l.sheaf).verdict == morse_inequalities(l.front, l.sheaf).verdict);
    }
}

TEST_CASE("output formats")
{
    Loaded u = load("unknot.json", "eye.json");
    std::vector<TheoremReport> rs{betti_bound(u.front, u.sheaf)};
    CHECK(report_json(rs).find("\"verdict\": \"pass\"") != std::string::npos);
    CHECK(report_table(rs).rfind("betti bound: pass", 0) == 0);
}

}
