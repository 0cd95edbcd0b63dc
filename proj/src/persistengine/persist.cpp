#include "legsheaf/persistengine.hpp"

#include <algorithm>
#include <set>

namespace lgs {

namespace {

struct Overlay {
    std::vector<Layer> layers;
    std::vector<Point2> markers;
};

Overlay overlay_of(const PersistenceProblem& p, const std::vector<Q>& us)
{
    Overlay o;
    o.layers = shifted_layers(p.f.complex(), Q(0));
    std::set<Point2> mk(p.f.complex().markers.begin(), p.f.complex().markers.end());
    for (const Q& u : us) {
        for (const Layer& l : shifted_layers(p.g.complex(), u))
            o.layers.push_back(l);
        for (const Point2& m : shifted_markers(p.g.complex(), u))
            mk.insert(m);
    }
    o.markers.assign(mk.begin(), mk.end());
    return o;
}

ComplexPtr arrange_at(const PersistenceProblem& p, const std::vector<Q>& us)
{
    Overlay o = overlay_of(p, us);
    return arrange(o.layers, o.markers);
}

bool generic_at(const PersistenceProblem& p, const std::vector<Q>& us)
{
    try {
        arrange_at(p, us);
        return true;
    } catch (const SheafError&) {
        return false;
    }
}

struct Slice {
    Q u;
    ComplexPtr cx;
    CellSheaf f, g;
    NerveComplex nerve;
    DegreeDims dims;
    std::map<int, Matrix> basis;  // cocycle representatives per degree
};

Slice make_slice(const PersistenceProblem& p, const Q& u)
{
    Slice s;
    s.u = u;
    s.cx = arrange_at(p, {u});
    s.f = pullback(p.f, s.cx);
    s.g = pullback_translated(p.g, u, s.cx);
    s.nerve = rhom_nerve(s.f, s.g);
    for (auto [d, n] : cohomology(s.nerve.complex))
        if (n > 0) {
            s.dims[d] = n;
            s.basis[d] = cohomology_basis(s.nerve.complex, d);
        }
    return s;
}

// Nerve cochains on y pulled back along a refinement x -> y (degenerate chains go to 0).
Matrix pull_nerve(const NerveComplex& ny, const NerveComplex& nx, const std::vector<int>& carrier, int deg)
{
    int rows = nx.complex.dim(deg), cols = ny.complex.dim(deg);
    TripletBuilder tb(rows, cols);
    auto it = nx.blocks.find(deg);
    if (it == nx.blocks.end() || cols == 0)
        return tb.build();
    std::map<std::pair<std::vector<int>, int>, int> ypos;
    for (const auto& blk : ny.blocks.at(deg))
        ypos[{ny.chains[blk.chain], blk.m}] = blk.offset;
    for (const auto& blk : it->second) {
        std::vector<int> ch;
        bool degenerate = false;
        for (int c : nx.chains[blk.chain]) {
            int r = carrier[c];
            if (!ch.empty() && ch.back() == r) {
                degenerate = true;
                break;
            }
            ch.push_back(r);
        }
        if (degenerate)
            continue;
        auto yp = ypos.find({ch, blk.m});
        if (yp == ypos.end())
            continue;
        for (int k = 0; k < blk.size; ++k)
            tb.add(blk.offset + k, yp->second + k, Q(1));
    }
    return tb.build();
}

std::vector<int> carrier_of(const CellComplex& x, const CellComplex& y)
{
    std::vector<int> out(x.size());
    for (int c = 0; c < x.size(); ++c)
        out[c] = y.locate(x.cell(c).sample);
    return out;
}

// Matrices of H(slice a) -> H(slice b) in the chosen cohomology bases, per degree.
std::map<int, Matrix> transport(const PersistenceProblem& p, const Slice& a, const Slice& b)
{
    std::map<int, Matrix> out;
    bool any = false;
    for (auto [d, n] : a.dims)
        if (b.dims.count(d))
            any = true;
    if (!any) {
        for (auto [d, n] : a.dims)
            out[d] = Matrix(b.dims.count(d) ? b.dims.at(d) : 0, n);
        return out;
    }
    const Field fld = p.field();
    ComplexPtr x = arrange_at(p, {a.u, b.u});
    CellSheaf fx = pullback(p.f, x);
    CellSheaf ga = pullback_translated(p.g, a.u, x);
    CellSheaf gb = pullback_translated(p.g, b.u, x);
    auto tau = propagation_map(p.g, a.u, b.u, ga, gb);
    NerveComplex na = rhom_nerve(fx, ga), nb = rhom_nerve(fx, gb);
    ChainMap m = rhom_postcompose(na, nb, fx, ga, gb, tau);
    auto ca = carrier_of(*x, *a.cx), cb = carrier_of(*x, *b.cx);
    for (auto [d, n] : a.dims) {
        auto bd = b.dims.find(d);
        if (bd == b.dims.end()) {
            out[d] = Matrix(0, n);
            continue;
        }
        Matrix pa = pull_nerve(a.nerve, na, ca, d);
        Matrix pb = pull_nerve(b.nerve, nb, cb, d);
        Matrix y = (m.at(d) * (pa * a.basis.at(d))).reduced(fld);
        Matrix zb = (pb * b.basis.at(d)).reduced(fld);
        Matrix big = zb;
        if (const Matrix* dm = nb.complex.d_ptr(d - 1); dm && nb.complex.dim(d - 1) > 0)
            big = Matrix::hstack({&zb, dm}, zb.rows());
        auto sol = solve(fld, big, y);
        if (!sol)
            throw SheafError("structure map does not land in the pulled-back cocycles at degree " + std::to_string(d));
        TripletBuilder tb(bd->second, n);
        for (int j = 0; j < n; ++j)
            for (const auto& [r, v] : sol->col(j))
                if (r < bd->second)
                    tb.add(r, j, v);
        out[d] = tb.build().reduced(fld);
    }
    return out;
}

DegreeDims shifted_dims(const DegreeDims& d, int s)
{
    DegreeDims out;
    for (auto [k, n] : d)
        out[k - s] = n;
    return out;
}

bool same_front(const Front& a, const Front& b) { return write_front_json(a) == write_front_json(b); }

}  // namespace

PersistenceProblem PersistenceProblem::pair(CellSheaf f, Front ff, CellSheaf g, Front fg)
{
    require_same_field(f.field(), g.field());
    if (!f.compact_support() || !g.compact_support())
        throw SheafError("persistence needs compactly supported sheaves");
    PersistenceProblem p;
    p.f = std::move(f);
    p.g = std::move(g);
    p.front_f = std::move(ff);
    p.front_g = std::move(fg);
    return p;
}

PersistenceProblem PersistenceProblem::self(const CellSheaf& s, const Front& f) { return pair(s, f, s, f); }

PersistenceProblem PersistenceProblem::skyscraper_at(const Point2& pt, CellSheaf g, Front fg)
{
    if (fg.is_point())
        throw SheafError("skyscraper problems need a plane front");
    PersistenceProblem p;
    ComplexPtr cx = arrange({}, {pt});
    p.f = lgs::skyscraper(cx, g.field(), pt);
    p.g = std::move(g);
    p.front_g = std::move(fg);
    p.front_f = p.front_g;
    p.skyscraper = true;
    p.point = pt;
    return p;
}

std::vector<Q> critical_values(const PersistenceProblem& p)
{
    if (!p.skyscraper)
        return chord_critical_values(p.front_f, p.front_g);
    std::set<Q> out;
    for (const Sheet& s : p.front_g.pl.sheets)
        if (s.covers(p.point.x))
            out.insert(p.point.t - s.at(p.point.x));
    return {out.begin(), out.end()};
}

CochainComplex slice(const PersistenceProblem& p, const Q& u)
{
    auto crit = critical_values(p);
    if (std::binary_search(crit.begin(), crit.end(), u))
        throw SheafError("slice at the critical value u = " + format_rational(u));
    Slice s = make_slice(p, u);
    return shift(s.nerve.complex, p.degree_shift());
}

DegreeDims slice_dims(const PersistenceProblem& p, const Q& u) { return trim(cohomology(slice(p, u))); }

std::vector<Q> choose_samples(const PersistenceProblem& p, const std::vector<Q>& critical)
{
    std::vector<Q> out;
    int m = static_cast<int>(critical.size());
    for (int k = 0; k <= m; ++k) {
        std::vector<Q> cands;
        if (m == 0) {
            for (int j = 0; j < 32; ++j)
                cands.push_back(Q(j, j + 1));
        } else if (k == 0) {
            for (int j = 1; j <= 32; ++j)
                cands.push_back(critical.front() - Q(1) - Q(j - 1, j));
        } else if (k == m) {
            for (int j = 1; j <= 32; ++j)
                cands.push_back(critical.back() + Q(1) + Q(j - 1, j));
        } else {
            const Q& lo = critical[k - 1];
            const Q& hi = critical[k];
            cands.push_back((lo + hi) / 2);
            for (int j = 1; j <= 32; ++j) {
                Q w(j, 2 * j + 1);
                cands.push_back(lo + (hi - lo) * w);
                cands.push_back(hi - (hi - lo) * w);
            }
        }
        bool found = false;
        for (const Q& c : cands) {
            if (!generic_at(p, {c}))
                continue;
            if (!out.empty() && !generic_at(p, {out.back(), c}))
                continue;
            out.push_back(c);
            found = true;
            break;
        }
        if (!found)
            throw SheafError("no generic sample in gap " + std::to_string(k));
    }
    return out;
}

RankInvariant rank_invariant(const PersistenceProblem& p)
{
    RankInvariant ri;
    ri.critical = critical_values(p);
    ri.samples = choose_samples(p, ri.critical);
    const Field fld = p.field();
    const int shift_by = p.degree_shift();
    std::vector<Slice> slices;
    slices.reserve(ri.samples.size());
    for (const Q& u : ri.samples)
        slices.push_back(make_slice(p, u));
    std::vector<std::map<int, Matrix>> steps;
    for (std::size_t i = 0; i + 1 < slices.size(); ++i)
        steps.push_back(transport(p, slices[i], slices[i + 1]));
    int n = ri.size();
    for (int i = 0; i < n; ++i) {
        ri.ranks[{i, i}] = shifted_dims(slices[i].dims, shift_by);
        std::map<int, Matrix> prod;
        for (auto [d, k] : slices[i].dims)
            prod[d] = Matrix::identity(k);
        for (int j = i + 1; j < n && !prod.empty(); ++j) {
            std::map<int, Matrix> next;
            DegreeDims r;
            for (auto& [d, mat] : prod) {
                auto st = steps[j - 1].find(d);
                if (st == steps[j - 1].end())
                    continue;
                Matrix q = (st->second * mat).reduced(fld);
                int rk = rank(fld, q);
                if (rk == 0)
                    continue;
                r[d - shift_by] = rk;
                next[d] = std::move(q);
            }
            ri.ranks[{i, j}] = r;
            prod = std::move(next);
        }
    }
    return ri;
}

Barcode barcode(const PersistenceProblem& p) { return barcode_from_rank_invariant(rank_invariant(p)); }

EndpointReport verify_endpoints(const PersistenceProblem& p, const Barcode& bc)
{
    EndpointReport rep;
    std::vector<Q> crit = critical_values(p);
    bool chords_known = !p.skyscraper && same_front(p.front_f, p.front_g);
    std::vector<Chord> chords;
    std::set<Q> lengths;
    if (chords_known) {
        chords = enumerate_chords(p.front_f);
        for (const Chord& c : chords) {
            lengths.insert(c.length);
            lengths.insert(-c.length);
        }
    }
    for (const Bar& b : bc.bars())
        for (int side = 0; side < 2; ++side) {
            const ExtQ& e = side == 0 ? b.start : b.end;
            if (!e.finite() || e.val == 0)
                continue;
            EndpointCheck ck;
            ck.value = e;
            ck.degree = b.degree;
            ck.mult = b.mult;
            ck.start = side == 0;
            if (chords_known) {
                ck.matched = lengths.count(e.val) > 0;
                ck.note = ck.matched ? "signed chord length" : "no chord of this length";
            } else {
                ck.matched = std::binary_search(crit.begin(), crit.end(), e.val);
                ck.note = ck.matched ? "critical value" : "not a critical value";
            }
            rep.ok = rep.ok && ck.matched;
            rep.endpoints.push_back(ck);
        }
    if (!chords_known)
        return rep;

    // Degree and multiplicity bookkeeping.
    int n = p.front_f.dim();
    MicrolocalRank mf = microlocal_rank(p.f, p.front_f), mg = microlocal_rank(p.g, p.front_g);
    std::vector<int> comp = components(p.front_f);
    auto observed = [&](const Q& u) {
        DegreeDims o;
        for (const Bar& b : bc.bars()) {
            if (b.end.finite() && b.end.val == u)
                o[b.degree] += b.mult;
            if (b.start.finite() && b.start.val == u)
                o[b.degree + 1] += b.mult;
        }
        return trim(o);
    };
    auto check = [&](const Q& u, const DegreeDims& want) {
        DegreeDims got = observed(u);
        if (got != trim(want)) {
            rep.ok = false;
            rep.diagnostics.push_back("at u = " + format_rational(u) + ": bars " + format_dims(got) + ", predicted " +
                                      format_dims(trim(want)));
        } else {
            rep.diagnostics.push_back("at u = " + format_rational(u) + ": " + format_dims(got) + " as predicted");
        }
    };
    for (const Q& len : lengths) {
        if (len < 0)
            continue;
        DegreeDims up, down;
        for (const Chord& c : chords) {
            if (c.length != len)
                continue;
            const DegreeDims& ft = mf.per_component.at(comp[c.top]);
            const DegreeDims& fb = mf.per_component.at(comp[c.bottom]);
            const DegreeDims& gt = mg.per_component.at(comp[c.top]);
            const DegreeDims& gb = mg.per_component.at(comp[c.bottom]);
            for (auto [k, m] : hom_dims(ft, gb))
                up[c.degree + k] += m;
            for (auto [k, m] : hom_dims(fb, gt))
                down[n - c.degree + 2 + k] += m;
        }
        check(len, up);
        check(-len, down);
    }
    // At u = 0 the local change is the cone of Hom- -> Hom+, shifted by one.
    DegreeDims zero_want;
    for (auto [d, m] : expected_cone_dims(component_betti(p.front_f), mf.per_component, mg.per_component))
        zero_want[d + 1] = m;
    check(Q(0), zero_want);
    return rep;
}

Q vertical_distance(const Front& a, const Front& b)
{
    Q best(0);
    if (a.is_point() != b.is_point())
        throw FrontError("fronts of different kinds");
    if (a.is_point()) {
        if (a.point.points.size() != b.point.points.size() || a.point.potentials != b.point.potentials)
            throw FrontError("point fronts differ in size or potentials");
        for (std::size_t i = 0; i < a.point.points.size(); ++i)
            best = std::max(best, Q(abs(a.point.points[i] - b.point.points[i])));
        return best;
    }
    const PLFront& x = a.pl;
    const PLFront& y = b.pl;
    if (x.sheets.size() != y.sheets.size() || x.potentials != y.potentials || x.cusps.size() != y.cusps.size())
        throw FrontError("fronts differ combinatorially");
    for (std::size_t i = 0; i < x.cusps.size(); ++i)
        if (x.cusps[i].x != y.cusps[i].x || x.cusps[i].a != y.cusps[i].a || x.cusps[i].b != y.cusps[i].b)
            throw FrontError("cusp " + std::to_string(i) + " moved horizontally");
    for (std::size_t s = 0; s < x.sheets.size(); ++s) {
        const Sheet& p = x.sheets[s];
        const Sheet& q = y.sheets[s];
        if (p.x0() != q.x0() || p.x1() != q.x1())
            throw FrontError("sheet " + std::to_string(s) + " changed its domain");
        std::set<Q> xs;
        for (const Point2& v : p.pts)
            xs.insert(v.x);
        for (const Point2& v : q.pts)
            xs.insert(v.x);
        for (const Q& v : xs)
            best = std::max(best, Q(abs(p.at(v) - q.at(v))));
    }
    return best;
}

StabilityReport stability_check(const PersistenceProblem& p, const PersistenceProblem& q, const Q& eps)
{
    StabilityReport r;
    r.eps = eps;
    r.budget = 2 * eps;
    r.height_change = vertical_distance(p.front_g, q.front_g);
    if (!same_front(p.front_f, q.front_f))
        r.height_change += vertical_distance(p.front_f, q.front_f);
    if (r.height_change > eps)
        throw FrontError("perturbation moves heights by " + format_rational(r.height_change) + " > eps = " +
                         format_rational(eps));
    DistanceResult d = interleaving_distance(barcode(p), barcode(q));
    r.distance = d.value;
    r.method = d.method;
    r.ok = d.value.finite() && d.value.val <= r.budget;
    return r;
}

}  // namespace lgs
