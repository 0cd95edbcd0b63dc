// Acceptance checks AC1..AC9. One line per criterion; exit status 0 iff all pass.
#include "legsheaf/barcodes.hpp"
#include "legsheaf/cellsheaf.hpp"
#include "legsheaf/fronts.hpp"
#include "legsheaf/homengine.hpp"
#include "legsheaf/persistengine.hpp"
#include "legsheaf/reports.hpp"

#include <algorithm>
#include <chrono>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

using namespace lgs;

namespace {

const Field F2 = Field::prime(2);

std::string corpus(const std::string& name) { return std::string(LEGSHEAF_CORPUS_DIR) + "/" + name; }

struct Outcome {
    bool pass = true;
    std::ostringstream detail;
    void fail(const std::string& why)
    {
        if (pass)
            detail << why;
        pass = false;
    }
};

struct Case {
    std::string front, sheaf;
};

Front front_of(const std::string& name) { return read_front_file(corpus(name)); }
CellSheaf sheaf_of(const Case& c, const Front& f, Field fld = F2) { return read_sheaf_file(corpus(c.sheaf), f, fld); }

// Compactly supported corpus pairs.
const std::vector<Case> compact_cases = {
    {"point-pair.json", "halfopen.json"},        {"unknot.json", "eye.json"},
    {"unknot.json", "eye2.json"},                {"unknot.json", "eye-impure.json"},
    {"trefoil.json", "trefoil-sheaf.json"},      {"link-stacked.json", "link-stacked-sheaf.json"},
    {"link-split.json", "link-split-sheaf.json"}, {"link-overlap.json", "link-overlap-sheaf.json"},
};

double seconds_since(std::chrono::steady_clock::time_point t0)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Bar bar(Q a, Q b, int deg = 0) { return Bar{ExtQ::of(a), ExtQ::of(b), deg, 1}; }

Q random_q(std::mt19937& rng, int lo, int hi, int den)
{
    std::uniform_int_distribution<int> num(lo * den, hi * den);
    Q q(num(rng), den);
    q.canonicalize();
    return q;
}

// AC1
void point_example(Outcome& o)
{
    auto t0 = std::chrono::steady_clock::now();
    Front f = front_of("point-pair.json");
    CellSheaf s = sheaf_of({"", "halfopen.json"}, f);
    DegreeDims plus = trim(cohomology(hom_plus(s, s)));
    DegreeDims minus = trim(cohomology(hom_minus(s, s)));
    std::string tsv = barcode_tsv(barcode(PersistenceProblem::self(s, f)));
    double dt = seconds_since(t0);
    // k_{(-1,0]}[-1] + k_{(0,1]}: one bar (-1, 0] in degree 1 and one bar (0, 1] in degree 0.
    if (plus != DegreeDims{{0, 1}})
        o.fail("Hom+ = " + format_dims(plus));
    if (minus != DegreeDims{{1, 1}})
        o.fail("Hom- = " + format_dims(minus));
    if (tsv != "0\t0/1\t1/1\t1\n1\t-1/1\t0/1\t1\n")
        o.fail("barcode " + tsv);
    if (dt >= 1.0)
        o.fail("took " + std::to_string(dt) + " s");
    o.detail << (o.pass ? "Hom+ {0:1}, Hom- {1:1}, bars (0,1] deg 0 + (-1,0] deg 1" : "") << " in " << dt << " s";
}

// AC2
void single_bar_distances(Outcome& o)
{
    auto t0 = std::chrono::steady_clock::now();
    std::mt19937 rng(2024);
    int checked = 0;
    for (int cls = 0; cls < 2; ++cls)
        for (int t = 0; t < 100; ++t) {
            std::set<Q> v;
            while (v.size() < 4)
                v.insert(random_q(rng, -20, 20, 1 + static_cast<int>(rng() % 7)));
            std::vector<Q> s(v.begin(), v.end());
            Q a0, b0, a1, b1, want;
            if (cls == 0) {  // staircase a1 < a0 < b1 < b0
                a1 = s[0], a0 = s[1], b1 = s[2], b0 = s[3];
                want = std::max(a0 - a1, b0 - b1);
            } else {  // nested a1 < a0 < b0 < b1
                a1 = s[0], a0 = s[1], b0 = s[2], b1 = s[3];
                want = (a0 - a1) + (b1 - b0);
            }
            ExtQ got = interleaving_distance(Barcode({bar(a0, b0)}), Barcode({bar(a1, b1)})).value;
            ++checked;
            if (got != ExtQ::of(want)) {
                o.fail((cls == 0 ? "staircase " : "nested ") + format_ext(got) + " != " + format_rational(want));
                return;
            }
        }
    double dt = seconds_since(t0);
    if (dt >= 5.0)
        o.fail("took " + std::to_string(dt) + " s");
    o.detail << checked << " pairs exact in " << dt << " s";
}

// AC3
void duality(Outcome& o)
{
    auto t0 = std::chrono::steady_clock::now();
    int pairs = 0;
    std::vector<std::pair<Case, Case>> todo;
    for (const Case& c : compact_cases)
        todo.push_back({c, c});
    // Distinct sheaves on the unknot.
    std::vector<Case> unknot = {compact_cases[1], compact_cases[2], compact_cases[3]};
    for (const Case& a : unknot)
        for (const Case& b : unknot)
            if (a.sheaf != b.sheaf)
                todo.push_back({a, b});
    for (auto& [a, b] : todo) {
        Front f = front_of(a.front);
        DualityCheck d = duality_check(sheaf_of(a, f), sheaf_of(b, f), f.dim());
        ++pairs;
        if (!d.ok)
            o.fail(a.sheaf + " vs " + b.sheaf + ": Hom+ " + format_dims(d.plus) + " Hom- " + format_dims(d.minus));
    }
    double dt = seconds_since(t0);
    if (dt >= 30.0)
        o.fail("took " + std::to_string(dt) + " s");
    o.detail << pairs << " pairs in " << dt << " s";
}

// AC4
void sato_cone(Outcome& o)
{
    // Hand-computed r^2 b_*(Λ), and H^*(S^1) ⊗ End(k + k[-1]) for the impure case.
    std::vector<std::pair<Case, DegreeDims>> expect = {
        {compact_cases[0], {{0, 2}}},
        {compact_cases[1], {{0, 1}, {1, 1}}},
        {compact_cases[2], {{0, 4}, {1, 4}}},
        {compact_cases[3], {{-1, 1}, {0, 3}, {1, 3}, {2, 1}}},
        {compact_cases[4], {{0, 1}, {1, 1}}},
        {compact_cases[5], {{0, 2}, {1, 2}}},
        {compact_cases[6], {{0, 2}, {1, 2}}},
        {compact_cases[7], {{0, 2}, {1, 2}}},
    };
    for (auto& [c, want] : expect) {
        Front f = front_of(c.front);
        CellSheaf s = sheaf_of(c, f);
        HomReport r = hom_report(s, f, s, f);
        if (r.sato_cone_dims != want)
            o.fail(c.sheaf + ": cone " + format_dims(r.sato_cone_dims) + ", expected " + format_dims(want));
        else if (!r.triangle_ok)
            o.fail(c.sheaf + ": triangle bookkeeping");
    }
    o.detail << expect.size() << " cases";
}

// AC5
void chord_bounds(Outcome& o)
{
    int n = 0;
    for (const Case& c : compact_cases) {
        Front f = front_of(c.front);
        CellSheaf s = sheaf_of(c, f);
        MicrolocalRank mr = microlocal_rank(s, f);
        TheoremReport m = morse_inequalities(f, s);
        if (m.verdict != Verdict::Pass)
            o.fail(c.sheaf + ": morse " + verdict_name(m.verdict));
        TheoremReport b = betti_bound(f, s);
        Verdict want = mr.pure ? Verdict::Pass : Verdict::Inapplicable;
        if (b.verdict != want)
            o.fail(c.sheaf + ": betti " + verdict_name(b.verdict));
        n += 2;
    }
    for (const Case& c : {Case{"point-one.json", "halfline.json"}, Case{"unknot.json", "constant.json"}}) {
        Front f = front_of(c.front);
        CellSheaf s = sheaf_of(c, f);
        if (betti_bound(f, s).verdict != Verdict::Inapplicable || morse_inequalities(f, s).verdict != Verdict::Inapplicable)
            o.fail(c.sheaf + " not reported inapplicable");
        n += 2;
    }
    o.detail << n << " verdicts; non-compact cases inapplicable";
}

// AC6
void endpoints(Outcome& o)
{
    int bars = 0;
    for (const Case& c : compact_cases) {
        Front f = front_of(c.front);
        CellSheaf s = sheaf_of(c, f);
        PersistenceProblem p = PersistenceProblem::self(s, f);
        Barcode bc = barcode(p);
        std::set<Q> lengths;
        for (const Chord& ch : enumerate_chords(f)) {
            lengths.insert(ch.length);
            lengths.insert(-ch.length);
        }
        for (const Bar& b : bc.bars())
            for (const ExtQ& e : {b.start, b.end})
                if (e.finite() && e.val != 0 && !lengths.count(e.val))
                    o.fail(c.sheaf + ": endpoint " + format_ext(e) + " is not a signed chord length");
        EndpointReport er = verify_endpoints(p, bc);
        if (!er.ok)
            o.fail(c.sheaf + ": " + (er.diagnostics.empty() ? "degree mismatch" : er.diagnostics.back()));
        bars += bc.total_multiplicity();
    }
    o.detail << bars << " bars over " << compact_cases.size() << " self-problems";
}

// Random vertical perturbation with |h| <= eps.
Front perturbed(const Front& f, const Q& eps, std::mt19937& rng)
{
    auto within = [&] {
        Q h = random_q(rng, -1, 1, 24) * eps;
        return h;
    };
    if (f.is_point()) {
        Front g = f;
        for (Q& p : g.point.points)
            p += within();
        return g;
    }
    Q lo = f.pl.sheets[0].x0(), hi = f.pl.sheets[0].x1();
    for (const Sheet& s : f.pl.sheets) {
        lo = std::min(lo, s.x0());
        hi = std::max(hi, s.x1());
    }
    std::set<Q> xs;
    while (xs.size() < 4) {
        Q t = random_q(rng, 0, 1, 37);
        xs.insert(lo + (hi - lo) * t);
    }
    std::vector<Point2> h;
    for (const Q& x : xs)
        h.push_back(Point2{x, within()});
    return perturb(f, h);
}

// AC7
void stability(Outcome& o)
{
    std::mt19937 rng(77);
    std::vector<Case> pool = {compact_cases[0], compact_cases[1], compact_cases[6], compact_cases[5]};
    std::vector<Q> budgets = {Q(1, 8), Q(1, 5), Q(1, 4), Q(1, 3)};
    std::vector<PersistenceProblem> base;
    for (const Case& c : pool) {
        Front f = front_of(c.front);
        CellSheaf s = sheaf_of(c, f);
        base.push_back(PersistenceProblem::pair(s, f, s, f));
    }
    int done = 0, retries = 0;
    ExtQ worst = ExtQ::of(Q(0));
    while (done < 20) {
        std::size_t k = done % pool.size();
        Q eps = budgets[rng() % budgets.size()];
        const PersistenceProblem& p = base[k];
        Front g = perturbed(p.front_g, eps, rng);
        try {
            if (!validate(g).ok())
                throw FrontError("invalid");
            CellSheaf t = sheaf_of(pool[k], g);
            require_ss(t, g, true);
            PersistenceProblem q = PersistenceProblem::pair(p.f, p.front_f, t, g);
            StabilityReport r = stability_check(p, q, eps);
            if (!r.ok)
                o.fail(pool[k].sheaf + ": distance " + format_ext(r.distance) + " > " + format_rational(r.budget));
            ExtQ rel = r.distance.finite() ? ExtQ::of(r.distance.val / eps) : r.distance;
            worst = std::max(worst, rel);
            ++done;
        } catch (const std::exception&) {
            // Non-generic draw (validity, region placement or overlay); draw again.
            if (++retries > 200) {
                o.fail("too many non-generic perturbations");
                return;
            }
        }
    }
    o.detail << done << " perturbations, max distance/eps " << format_ext(worst) << " <= 2, " << retries
             << " redraws";
}

// AC8
void families(Outcome& o)
{
    Point2 p{Q(0), Q(1)};
    auto sky = [](const std::string& front, const std::string& sheaf, const Point2& at) {
        Front f = front_of(front);
        return barcode(PersistenceProblem::skyscraper_at(at, sheaf_of({"", sheaf}, f), f));
    };
    // Birth: before the cusp passes x = 0 nothing; after, (1 - a, 1 + a] with a the strand height at x = 0.
    Barcode before = sky("birth-before.json", "birth-sheaf.json", p);
    Front after_front = front_of("birth-after.json");
    Q a = after_front.pl.sheets[0].at(Q(0));
    if (a < 0)
        a = -a;
    Barcode after = sky("birth-after.json", "birth-sheaf.json", p);
    if (!before.empty())
        o.fail("bars before the birth");
    if (after != Barcode({bar(Q(1) - a, Q(1) + a)}))
        o.fail("birth bar " + barcode_tsv(after));

    // Swap: one bar per component at x = 0, (-top, -bottom]; the order of the starting points flips
    // when the crossing moves across x = 0.
    Point2 z{Q(0), Q(0)};
    std::vector<std::vector<Q>> starts;
    for (const char* front : {"link-overlap-swapped.json", "link-overlap.json"}) {
        Front f = front_of(front);
        std::vector<int> comp = components(f);
        std::map<int, std::pair<Q, Q>> span;  // component -> (bottom, top) at x = 0
        for (std::size_t s = 0; s < f.pl.sheets.size(); ++s) {
            if (!f.pl.sheets[s].covers(Q(0)))
                continue;
            Q t = f.pl.sheets[s].at(Q(0));
            auto it = span.find(comp[s]);
            if (it == span.end())
                span[comp[s]] = {t, t};
            else
                it->second = {std::min(it->second.first, t), std::max(it->second.second, t)};
        }
        std::vector<Bar> want;
        std::vector<Q> st;
        for (auto& [c, bt] : span) {
            want.push_back(bar(-bt.second, -bt.first));
            st.push_back(-bt.second);
        }
        starts.push_back(st);
        Barcode got = sky(front, "link-overlap-sheaf.json", z);
        if (got != Barcode(want))
            o.fail(std::string(front) + ": " + barcode_tsv(got));
    }
    if (starts.size() == 2 && starts[0].size() == 2 && starts[1].size() == 2) {
        bool flip = (starts[0][0] < starts[0][1]) != (starts[1][0] < starts[1][1]);
        if (!flip)
            o.fail("starting points did not swap");
    } else {
        o.fail("expected two components over x = 0");
    }
    o.detail << "birth bar (" << format_rational(Q(1) - a) << ", " << format_rational(Q(1) + a)
             << "], swap of starting points across the crossing";
}

// AC9
void oracles(Outcome& o)
{
    // Interval sheaves on the line: closed and open ends exchange under the dual.
    Front pf = front_of("point-pair.json");
    auto cx = arrange(pf);
    auto k = std::make_shared<const CochainComplex>(CochainComplex::graded(F2, {{0, 1}}));
    int pa = cx->locate(Point2{Q(0), Q(0)}), pb = cx->locate(Point2{Q(0), Q(1)});
    int mid = cx->locate(Point2{Q(0), Q(1, 2)});
    auto interval = [&](bool closed_a, bool closed_b) {
        CellSheaf s = zero_sheaf(cx, F2);
        s.set_stalk(mid, k);
        for (auto [pt, on] : {std::pair{pa, closed_a}, std::pair{pb, closed_b}})
            if (on) {
                s.set_stalk(pt, k);
                s.set_gen(pt, mid, ChainMap::identity(k));
            }
        return s;
    };
    std::optional<int> shift;
    for (int mask = 0; mask < 4; ++mask) {
        bool ca = mask & 1, cb = mask & 2;
        CellSheaf d = dual(interval(ca, cb));
        auto h = [&](int c) { return trim(cohomology(d.stalk(c))); };
        DegreeDims m = h(mid);
        if (m.size() != 1 || m.begin()->second != 1) {
            o.fail("dual interior stalk " + format_dims(m));
            continue;
        }
        if (!shift)
            shift = m.begin()->first;
        if (m.begin()->first != *shift)
            o.fail("dual shift depends on the interval type");
        // A closed end of the input is open in the dual and vice versa.
        if (h(pa).empty() != ca || h(pb).empty() != cb)
            o.fail("dual ends for mask " + std::to_string(mask));
    }

    // Rank invariant round trip on random barcodes.
    std::mt19937 rng(9);
    for (int t = 0; t < 50; ++t) {
        std::vector<Bar> bars;
        std::set<Q> crit;
        int nb = 1 + static_cast<int>(rng() % 4);
        for (int i = 0; i < nb; ++i) {
            Q a = random_q(rng, -5, 5, 2), b = a + random_q(rng, 1, 4, 3);
            bars.push_back(Bar{ExtQ::of(a), ExtQ::of(b), static_cast<int>(rng() % 3), 1});
            crit.insert(a);
            crit.insert(b);
        }
        Barcode bc(bars);
        Barcode back = barcode_from_rank_invariant(rank_invariant_of(bc, std::vector<Q>(crit.begin(), crit.end())));
        if (back != bc) {
            o.fail("rank invariant round trip");
            break;
        }
    }
    for (const Case& c : {compact_cases[0], compact_cases[1], compact_cases[6]}) {
        Front f = front_of(c.front);
        PersistenceProblem p = PersistenceProblem::self(sheaf_of(c, f), f);
        if (barcode_from_rank_invariant(rank_invariant(p)) != barcode(p))
            o.fail(c.sheaf + ": reconstruction");
    }

    // Subdivision invariance: refine by marker vertices and compare every cohomology dimension.
    for (const Case& c : {compact_cases[1], compact_cases[3], compact_cases[6]}) {
        Front f = front_of(c.front);
        CellSheaf s = sheaf_of(c, f);
        auto fine = arrange({Layer{f, Q(0)}}, {Point2{Q(1, 3), Q(1, 7)}, Point2{Q(-2, 5), Q(-1, 9)}});
        CellSheaf r = pullback(s, fine);
        if (cohomology(global_sections(r)) != cohomology(global_sections(s)) ||
            cohomology(rhom(r, r)) != cohomology(rhom(s, s)))
            o.fail(c.sheaf + ": subdivision changed cohomology");
        for (int cell = 0; cell < fine->size(); ++cell)
            if (trim(cohomology(r.stalk(cell))) !=
                trim(cohomology(s.stalk(s.complex().locate(fine->cell(cell).sample)))))
                o.fail(c.sheaf + ": subdivision changed a stalk");
    }

    // Slices are constant between critical values.
    int gaps = 0;
    for (const Case& c : {compact_cases[0], compact_cases[1], compact_cases[6]}) {
        Front f = front_of(c.front);
        PersistenceProblem p = PersistenceProblem::self(sheaf_of(c, f), f);
        std::vector<Q> crit = critical_values(p);
        for (std::size_t i = 0; i + 1 < crit.size(); ++i) {
            Q w = crit[i + 1] - crit[i];
            DegreeDims first = slice_dims(p, crit[i] + w / 3);
            for (Q frac : {Q(1, 2), Q(5, 7)})
                if (slice_dims(p, crit[i] + w * frac) != first)
                    o.fail(c.sheaf + ": slice changes inside a gap");
            ++gaps;
        }
    }
    o.detail << "interval duals, rank round trips, subdivision, " << gaps << " gaps constant";
}

}  // namespace

int main()
{
    std::vector<std::pair<std::string, std::function<void(Outcome&)>>> criteria = {
        {"AC1 point example", point_example},   {"AC2 interleaving distances", single_bar_distances},
        {"AC3 duality", duality},               {"AC4 cone", sato_cone},
        {"AC5 chord bounds", chord_bounds},     {"AC6 bar endpoints", endpoints},
        {"AC7 stability", stability},           {"AC8 families", families},
        {"AC9 oracle suites", oracles},
    };
    bool all = true;
    for (auto& [name, run] : criteria) {
        Outcome o;
        try {
            run(o);
        } catch (const std::exception& e) {
            o.fail(std::string("exception: ") + e.what());
        }
        all = all && o.pass;
        std::cout << name << ": " << (o.pass ? "PASS" : "FAIL") << " (" << o.detail.str() << ")" << std::endl;
    }
    return all ? 0 : 1;
}
