#include "legsheaf/cellsheaf.hpp"

#include <algorithm>
#include <set>

namespace lgs {

namespace {

using CPtr = std::shared_ptr<const CochainComplex>;

CPtr make(CochainComplex c) { return std::make_shared<const CochainComplex>(std::move(c)); }

ChainMap reduce_map(const Field& f, const ChainMap& m)
{
    if (f.rational())
        return m;
    std::map<int, Matrix> comps;
    for (const auto& [d, a] : m.components())
        comps[d] = a.reduced(f);
    return ChainMap(m.source_ptr(), m.target_ptr(), std::move(comps), false);
}

// Layout of A ⊗ B in degree n: blocks (i, n - i) in increasing i.
struct TensorLayout {
    std::map<int, std::map<int, int>> offset;  // n -> i -> offset
    std::map<int, int> dim;
};

TensorLayout tensor_layout(const CochainComplex& a, const CochainComplex& b)
{
    TensorLayout t;
    if (a.empty() || b.empty())
        return t;
    for (int i = a.lo(); i <= a.hi(); ++i)
        for (int j = b.lo(); j <= b.hi(); ++j) {
            int n = i + j;
            int& d = t.dim[n];
            t.offset[n][i] = d;
            d += a.dim(i) * b.dim(j);
        }
    return t;
}

CochainComplex tensor_complex(const CochainComplex& a, const CochainComplex& b)
{
    Field f = a.field();
    TensorLayout t = tensor_layout(a, b);
    if (t.dim.empty())
        return CochainComplex::zero(f);
    int lo = t.dim.begin()->first, hi = t.dim.rbegin()->first;
    std::vector<int> dims;
    std::vector<Matrix> diffs;
    for (int n = lo; n <= hi; ++n) {
        dims.push_back(t.dim[n]);
        int tn = t.dim.count(n + 1) ? t.dim[n + 1] : 0;
        TripletBuilder tb(tn, t.dim[n]);
        for (auto [i, off] : t.offset[n]) {
            int j = n - i;
            if (a.dim(i) * b.dim(j) == 0)
                continue;
            if (t.offset.count(n + 1) && t.offset[n + 1].count(i + 1) && a.dim(i + 1) > 0)
                tb.add_block(t.offset[n + 1][i + 1], off, kron(a.d(i), Matrix::identity(b.dim(j))));
            if (t.offset.count(n + 1) && t.offset[n + 1].count(i) && b.dim(j + 1) > 0)
                tb.add_block(t.offset[n + 1][i], off, kron(Matrix::identity(a.dim(i)), b.d(j)),
                             Q(i % 2 ? -1 : 1));
        }
        diffs.push_back(tb.build().reduced(f));
    }
    return CochainComplex(f, lo, dims, diffs, true);
}

ChainMap tensor_map(const ChainMap& f, const ChainMap& g, CPtr src, CPtr tgt)
{
    TensorLayout ts = tensor_layout(f.source(), g.source());
    TensorLayout tt = tensor_layout(f.target(), g.target());
    std::map<int, Matrix> comps;
    for (auto& [n, offs] : ts.offset) {
        if (!tt.dim.count(n))
            continue;
        TripletBuilder tb(tt.dim[n], ts.dim[n]);
        bool any = false;
        for (auto [i, off] : offs) {
            if (!tt.offset[n].count(i))
                continue;
            Matrix fi = f.at(i), gj = g.at(n - i);
            if (fi.zero() || gj.zero())
                continue;
            tb.add_block(tt.offset[n][i], off, kron(fi, gj));
            any = true;
        }
        if (any)
            comps[n] = tb.build().reduced(src->field());
    }
    return ChainMap(src, tgt, std::move(comps), false);
}

ChainMap shift_map(const ChainMap& f, int n, CPtr src, CPtr tgt)
{
    std::map<int, Matrix> comps;
    for (const auto& [d, m] : f.components())
        comps[d - n] = m;
    return ChainMap(src, tgt, std::move(comps), false);
}

CochainComplex sum_complex(const CochainComplex& a, const CochainComplex& b)
{
    if (a.empty())
        return b;
    if (b.empty())
        return a;
    int lo = std::min(a.lo(), b.lo()), hi = std::max(a.hi(), b.hi());
    std::vector<int> dims;
    std::vector<Matrix> diffs;
    for (int n = lo; n <= hi; ++n) {
        dims.push_back(a.dim(n) + b.dim(n));
        TripletBuilder tb(a.dim(n + 1) + b.dim(n + 1), a.dim(n) + b.dim(n));
        tb.add_block(0, 0, a.d(n));
        tb.add_block(a.dim(n + 1), a.dim(n), b.d(n));
        diffs.push_back(tb.build());
    }
    return CochainComplex(a.field(), lo, dims, diffs, false);
}

ChainMap sum_map(const ChainMap& f, const ChainMap& g, CPtr src, CPtr tgt)
{
    std::map<int, Matrix> comps;
    std::set<int> degs;
    for (auto& [d, m] : f.components())
        degs.insert(d);
    for (auto& [d, m] : g.components())
        degs.insert(d);
    for (int d : degs) {
        TripletBuilder tb(tgt->dim(d), src->dim(d));
        tb.add_block(0, 0, f.at(d));
        tb.add_block(f.target().dim(d), f.source().dim(d), g.at(d));
        comps[d] = tb.build();
    }
    return ChainMap(src, tgt, std::move(comps), false);
}

ChainMap invert(const Field& field, const ChainMap& f)
{
    std::map<int, Matrix> comps;
    const CochainComplex& s = f.source();
    const CochainComplex& t = f.target();
    if (s.dims() != t.dims() && !(s.is_zero_space() && t.is_zero_space()))
        throw SheafError("region map is not an isomorphism of complexes");
    if (!s.empty())
        for (int d = s.lo(); d <= s.hi(); ++d)
            if (s.dim(d) > 0)
                comps[d] = inverse(field, f.at(d));
    return ChainMap(f.target_ptr(), f.source_ptr(), std::move(comps), false);
}

// Pullback along a carrier map of cells.
CellSheaf pull(const CellSheaf& s, ComplexPtr refined, const std::vector<int>& carrier)
{
    CellSheaf out(refined, s.field());
    const CellComplex& cx = *refined;
    for (int c = 0; c < cx.size(); ++c)
        out.set_stalk(c, s.stalk_ptr(carrier[c]));
    for (int c = 0; c < cx.size(); ++c) {
        if (out.stalk(c).is_zero_space())
            continue;
        for (int f : cx.faces(c)) {
            if (out.stalk(f).is_zero_space())
                continue;
            int a = carrier[f], b = carrier[c];
            if (a == b)
                out.set_gen(f, c, ChainMap::identity(s.stalk_ptr(a)));
            else if (s.complex().is_face(a, b))
                out.set_gen(f, c, s.gen(a, b));
            else
                throw SheafError("complex is not a refinement: " + cx.describe(f) + " < " + cx.describe(c) +
                                 " maps to " + s.complex().describe(a) + ", " + s.complex().describe(b));
        }
    }
    return out;
}

}  // namespace

CellSheaf pullback(const CellSheaf& s, ComplexPtr refined)
{
    return pullback_translated(s, Q(0), std::move(refined));
}

CellSheaf pullback_translated(const CellSheaf& s, const Q& u, ComplexPtr refined)
{
    std::vector<int> carrier(refined->size());
    for (int c = 0; c < refined->size(); ++c) {
        Point2 p = refined->cell(c).sample;
        p.t -= u;
        carrier[c] = s.complex().locate(p);
    }
    return pull(s, refined, carrier);
}

CellSheaf translate(const CellSheaf& s, const Q& c)
{
    const CellComplex& cx = s.complex();
    std::vector<Layer> layers = cx.layers;
    for (Layer& l : layers)
        l.shift += c;
    std::vector<Point2> markers = cx.markers;
    for (Point2& m : markers)
        m.t += c;
    ComplexPtr nc = arrange(layers, markers);
    if (nc->size() != cx.size())
        throw SheafError("translated complex has a different cell structure");
    CellSheaf out(nc, s.field());
    for (int i = 0; i < cx.size(); ++i) {
        Point2 p = cx.cell(i).sample;
        Point2 r = nc->cell(i).sample;
        if (nc->cell(i).kind != cx.cell(i).kind || r.x != p.x)
            throw SheafError("translated complex has a different cell structure");
        out.set_stalk(i, s.stalk_ptr(i));
    }
    for (int c = 0; c < cx.size(); ++c)
        for (int f : cx.faces(c))
            if (const ChainMap* m = s.gen_ptr(f, c))
                out.set_gen(f, c, *m);
    return out;
}

CellSheaf zero_sheaf(ComplexPtr cx, Field f) { return CellSheaf(std::move(cx), f); }

CellSheaf constant_sheaf(ComplexPtr cx, Field f)
{
    CellSheaf out(cx, f);
    CPtr k = make(CochainComplex::graded(f, {{0, 1}}));
    for (int c = 0; c < cx->size(); ++c)
        out.set_stalk(c, k);
    for (int c = 0; c < cx->size(); ++c)
        for (int a : cx->faces(c))
            out.set_gen(a, c, ChainMap::identity(k));
    return out;
}

CellSheaf skyscraper(ComplexPtr cx, Field f, const Point2& p)
{
    CellSheaf out(cx, f);
    int c = cx->locate(p);
    if (cx->cell(c).dim != 0)
        throw SheafError("skyscraper point is not a vertex of the complex");
    out.set_stalk(c, make(CochainComplex::graded(f, {{0, 1}})));
    return out;
}

CellSheaf shifted(const CellSheaf& s, int n)
{
    CellSheaf out(s.complex_ptr(), s.field());
    const CellComplex& cx = s.complex();
    std::map<const CochainComplex*, CPtr> memo;
    for (int c = 0; c < cx.size(); ++c) {
        auto& m = memo[s.stalk_ptr(c).get()];
        if (!m)
            m = make(shift(s.stalk(c), n));
        out.set_stalk(c, m);
    }
    for (int c = 0; c < cx.size(); ++c)
        for (int f : cx.faces(c))
            if (const ChainMap* g = s.gen_ptr(f, c))
                out.set_gen(f, c, shift_map(*g, n, out.stalk_ptr(f), out.stalk_ptr(c)));
    return out;
}

CellSheaf direct_sum(const CellSheaf& a, const CellSheaf& b)
{
    if (!a.complex().same_geometry(b.complex()))
        throw SheafError("direct sum needs a common complex");
    require_same_field(a.field(), b.field());
    const CellComplex& cx = a.complex();
    CellSheaf out(a.complex_ptr(), a.field());
    for (int c = 0; c < cx.size(); ++c)
        out.set_stalk(c, make(sum_complex(a.stalk(c), b.stalk(c))));
    for (int c = 0; c < cx.size(); ++c)
        for (int f : cx.faces(c)) {
            if (out.stalk(f).is_zero_space() || out.stalk(c).is_zero_space())
                continue;
            out.set_gen(f, c, sum_map(a.gen(f, c), b.gen(f, c), out.stalk_ptr(f), out.stalk_ptr(c)));
        }
    return out;
}

CellSheaf tensor(const CellSheaf& a, const CellSheaf& b)
{
    if (!a.complex().same_geometry(b.complex()))
        throw SheafError("tensor product needs a common complex; refine both operands first");
    require_same_field(a.field(), b.field());
    const CellComplex& cx = a.complex();
    CellSheaf out(a.complex_ptr(), a.field());
    for (int c = 0; c < cx.size(); ++c)
        out.set_stalk(c, make(tensor_complex(a.stalk(c), b.stalk(c))));
    for (int c = 0; c < cx.size(); ++c)
        for (int f : cx.faces(c)) {
            if (out.stalk(f).is_zero_space() || out.stalk(c).is_zero_space())
                continue;
            out.set_gen(f, c, tensor_map(a.gen(f, c), b.gen(f, c), out.stalk_ptr(f), out.stalk_ptr(c)));
        }
    return out;
}

namespace {

// Γ_c over the open star of c as a total complex; block order by (cell id, degree).
struct StarComplex {
    CochainComplex total;
    std::vector<int> cells;
    // (total degree, cell) -> offset
    std::map<std::pair<int, int>, int> offset;
};

StarComplex star_complex(const CellSheaf& s, int c)
{
    const CellComplex& cx = s.complex();
    StarComplex st;
    st.cells.push_back(c);
    for (int t : cx.cofaces(c))
        st.cells.push_back(t);
    std::sort(st.cells.begin(), st.cells.end());
    std::map<int, int> dim;
    int lo = 0, hi = -1;
    bool any = false;
    for (int sg : st.cells) {
        const CochainComplex& f = s.stalk(sg);
        if (f.empty())
            continue;
        int p = cx.cell(sg).dim;
        for (int q = f.lo(); q <= f.hi(); ++q) {
            int m = p + q;
            st.offset[{m, sg}] = dim[m];
            dim[m] += f.dim(q);
            if (!any || m < lo)
                lo = m;
            if (!any || m > hi)
                hi = m;
            any = true;
        }
    }
    Field fld = s.field();
    if (!any) {
        st.total = CochainComplex::zero(fld);
        return st;
    }
    std::vector<int> dims;
    std::vector<Matrix> diffs;
    for (int m = lo; m <= hi; ++m) {
        dims.push_back(dim[m]);
        TripletBuilder tb(dim.count(m + 1) ? dim[m + 1] : 0, dim[m]);
        for (int sg : st.cells) {
            auto it = st.offset.find({m, sg});
            if (it == st.offset.end())
                continue;
            int p = cx.cell(sg).dim;
            int q = m - p;
            const CochainComplex& f = s.stalk(sg);
            if (f.dim(q) == 0)
                continue;
            auto jt = st.offset.find({m + 1, sg});
            if (jt != st.offset.end() && f.dim(q + 1) > 0)
                tb.add_block(jt->second, it->second, f.d(q), Q(p % 2 ? -1 : 1));
            for (int t : cx.cofaces(sg)) {
                if (cx.cell(t).dim != p + 1)
                    continue;
                int inc = cx.incidence(sg, t);
                auto kt = st.offset.find({m + 1, t});
                if (inc == 0 || kt == st.offset.end())
                    continue;
                Matrix g = s.gen(sg, t).at(q);
                if (!g.zero())
                    tb.add_block(kt->second, it->second, g, Q(inc));
            }
        }
        diffs.push_back(tb.build().reduced(fld));
    }
    st.total = CochainComplex(fld, lo, dims, diffs, true);
    return st;
}

// Linear dual: (C^∨)^m = (C^{-m})^*, differential transposed.
CochainComplex dual_complex(const CochainComplex& c)
{
    if (c.empty())
        return c;
    std::vector<int> dims;
    std::vector<Matrix> diffs;
    for (int m = -c.hi(); m <= -c.lo(); ++m) {
        dims.push_back(c.dim(-m));
        diffs.push_back(c.d(-m - 1).transpose());
    }
    return CochainComplex(c.field(), -c.hi(), dims, diffs, true);
}

}  // namespace

CochainComplex star_sections_c(const CellSheaf& s, int c) { return star_complex(s, c).total; }

CellSheaf dual(const CellSheaf& s)
{
    const CellComplex& cx = s.complex();
    int n = cx.ambient;
    std::vector<StarComplex> stars(cx.size());
    CellSheaf out(s.complex_ptr(), s.field());
    for (int c = 0; c < cx.size(); ++c) {
        stars[c] = star_complex(s, c);
        out.set_stalk(c, make(shift(dual_complex(stars[c].total), -n)));
    }
    // D'F(a) -> D'F(b): restriction of the dual of Γ_c(star a) to the summands of star b.
    for (int b = 0; b < cx.size(); ++b) {
        if (out.stalk(b).is_zero_space())
            continue;
        for (int a : cx.faces(b)) {
            if (out.stalk(a).is_zero_space())
                continue;
            const StarComplex& sa = stars[a];
            const StarComplex& sb = stars[b];
            std::map<int, Matrix> comps;
            // Degree k of D'F corresponds to degree -(k - n) = n - k of Γ_c.
            const CochainComplex& tb = out.stalk(b);
            for (int k = tb.lo(); k <= tb.hi(); ++k) {
                int m = n - k;
                int rows = sb.total.dim(m), cols = sa.total.dim(m);
                if (rows == 0 || cols == 0)
                    continue;
                TripletBuilder trip(rows, cols);
                for (const auto& [key, off] : sb.offset) {
                    if (key.first != m)
                        continue;
                    int cell = key.second;
                    int q = m - cx.cell(cell).dim;
                    int len = s.stalk(cell).dim(q);
                    int offa = sa.offset.at({m, cell});
                    for (int i = 0; i < len; ++i)
                        trip.add(off + i, offa + i, Q(1));
                }
                comps[k] = trip.build();
            }
            out.set_gen(a, b, ChainMap(out.stalk_ptr(a), out.stalk_ptr(b), std::move(comps), false));
        }
    }
    return out;
}

std::vector<ChainMap> propagation_map(const CellSheaf& s, const Q& a, const Q& b, const CellSheaf& ta,
                                      const CellSheaf& tb)
{
    if (!(a < b))
        throw SheafError("propagation needs a positive distance");
    const CellComplex& y = s.complex();
    const CellComplex& x = ta.complex();
    Field fld = s.field();
    std::vector<ChainMap> out;
    out.reserve(x.size());
    std::map<std::pair<int, int>, ChainMap> inv_cache;
    auto inv = [&](int lo, int hi) -> const ChainMap& {
        auto it = inv_cache.find({lo, hi});
        if (it == inv_cache.end())
            it = inv_cache.emplace(std::make_pair(lo, hi), invert(fld, s.gen(lo, hi))).first;
        return it->second;
    };
    for (int c = 0; c < x.size(); ++c) {
        if (ta.stalk(c).is_zero_space() || tb.stalk(c).is_zero_space()) {
            out.push_back(ChainMap::zero(ta.stalk_ptr(c), tb.stalk_ptr(c)));
            continue;
        }
        Point2 p = x.cell(c).sample;
        Q t1 = p.t - a, t2 = p.t - b;
        // Heights where the vertical segment changes cell.
        std::set<Q> hs{t1, t2};
        if (y.ambient == 1) {
            for (const Q& h : y.lines)
                if (t2 < h && h < t1)
                    hs.insert(h);
        } else {
            auto k = std::lower_bound(y.lines.begin(), y.lines.end(), p.x) - y.lines.begin();
            if (k < static_cast<long>(y.lines.size()) && y.lines[k] == p.x) {
                for (auto& [h, id] : y.line_data[k].vertices)
                    if (t2 < h && h < t1)
                        hs.insert(h);
            } else {
                for (auto& [ref, id] : y.slab_data[k].edges) {
                    Q h = strand_at(y.layers[ref.layer], ref.strand, p.x);
                    if (t2 < h && h < t1)
                        hs.insert(h);
                }
            }
        }
        std::vector<Q> pts(hs.rbegin(), hs.rend());
        std::vector<int> walk;
        auto push = [&](const Q& t) {
            Point2 r{p.x, t};
            int id = y.locate(r);
            if (walk.empty() || walk.back() != id)
                walk.push_back(id);
        };
        for (std::size_t i = 0; i < pts.size(); ++i) {
            push(pts[i]);
            if (i + 1 < pts.size())
                push((pts[i] + pts[i + 1]) / 2);
        }
        ChainMap m = ChainMap::identity(s.stalk_ptr(walk.front()));
        for (std::size_t i = 0; i + 1 < walk.size(); ++i) {
            int from = walk[i], to = walk[i + 1];
            if (y.is_face(to, from))
                m = compose(inv(to, from), m);
            else if (y.is_face(from, to))
                m = compose(s.gen(from, to), m);
            else
                throw SheafError("propagation walk leaves the face poset at " + y.describe(from));
            m = reduce_map(fld, m);
        }
        out.push_back(ChainMap(ta.stalk_ptr(c), tb.stalk_ptr(c), m.components(), false));
    }
    return out;
}

Front component_front(const Front& f, int component, std::vector<int>* strand_map)
{
    int count = 0;
    std::vector<int> comp = components(f, &count);
    if (component < 0 || component >= count)
        throw SheafError("front has no component " + std::to_string(component));
    std::vector<int> keep, index(comp.size(), -1);
    for (std::size_t i = 0; i < comp.size(); ++i)
        if (comp[i] == component) {
            index[i] = static_cast<int>(keep.size());
            keep.push_back(static_cast<int>(i));
        }
    if (strand_map)
        *strand_map = keep;
    if (f.is_point()) {
        PointFront p;
        for (int i : keep) {
            p.points.push_back(f.point.points[i]);
            p.potentials.push_back(f.point.potentials[i]);
        }
        return Front::of(std::move(p), f.name);
    }
    PLFront p;
    for (int i : keep) {
        p.sheets.push_back(f.pl.sheets[i]);
        p.potentials.push_back(f.pl.potentials[i]);
    }
    for (const Cusp& c : f.pl.cusps)
        if (index[c.a] >= 0) {
            Cusp d = c;
            d.a = index[c.a];
            d.b = index[c.b];
            p.cusps.push_back(d);
        }
    return Front::of(std::move(p), f.name);
}

}  // namespace lgs
