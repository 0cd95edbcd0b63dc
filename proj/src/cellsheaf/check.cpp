#include "legsheaf/cellsheaf.hpp"

#include <algorithm>
#include <numeric>

namespace lgs {

namespace {

using CPtr = std::shared_ptr<const CochainComplex>;

bool acyclic(const CochainComplex& c)
{
    for (auto [d, n] : cohomology(c))
        if (n != 0)
            return false;
    return true;
}

bool quasi_iso(const ChainMap& f) { return acyclic(cone(f)); }

bool same_map(const Field& fld, const ChainMap& a, const ChainMap& b)
{
    const CochainComplex& s = a.source();
    if (s.empty())
        return true;
    for (int d = s.lo(); d <= s.hi(); ++d)
        if (!equal(fld, a.at(d), b.at(d)))
            return false;
    return true;
}

bool strict_iso(const Field& fld, const ChainMap& f)
{
    const CochainComplex& s = f.source();
    const CochainComplex& t = f.target();
    if (s.is_zero_space() && t.is_zero_space())
        return true;
    if (s.dims() != t.dims())
        return false;
    for (int d = s.lo(); d <= s.hi(); ++d)
        if (s.dim(d) > 0 && rank(fld, f.at(d)) != s.dim(d))
            return false;
    return true;
}

ChainMap invert(const Field& fld, const ChainMap& f)
{
    std::map<int, Matrix> comps;
    const CochainComplex& s = f.source();
    if (!s.empty())
        for (int d = s.lo(); d <= s.hi(); ++d)
            if (s.dim(d) > 0)
                comps[d] = inverse(fld, f.at(d));
    return ChainMap(f.target_ptr(), f.source_ptr(), std::move(comps), false);
}

bool has_layer0(const Cell& c)
{
    for (const StrandRef& r : c.strands)
        if (r.layer == 0)
            return true;
    return false;
}

bool on_front(const Cell& c)
{
    if (c.kind == CellKind::FEdge || c.kind == CellKind::Vertex || c.kind == CellKind::Point)
        return has_layer0(c);
    return false;
}

std::vector<int> layer0_strands(const Cell& c)
{
    std::vector<int> out;
    for (const StrandRef& r : c.strands)
        if (r.layer == 0)
            out.push_back(r.strand);
    return out;
}

void require_front(const CellSheaf& s, const Front& f)
{
    const CellComplex& cx = s.complex();
    if (cx.layers.empty() || cx.layers[0].shift != 0 || write_front_json(cx.layers[0].front) != write_front_json(f))
        throw SheafError("sheaf does not live on an arrangement of this front");
}

int line_index(const CellComplex& cx, const Q& x)
{
    return static_cast<int>(std::lower_bound(cx.lines.begin(), cx.lines.end(), x) - cx.lines.begin());
}

std::pair<int, int> vcells_around(const CellComplex& cx, int v)
{
    const auto& ld = cx.line_data[line_index(cx, cx.cell(v).sample.x)];
    for (std::size_t i = 0; i < ld.vertices.size(); ++i)
        if (ld.vertices[i].second == v)
            return {ld.vcells[i], ld.vcells[i + 1]};
    throw SheafError("internal: vertex not on its line");
}

// Layer-0 edges meeting v in a slab, bottom to top, with the 2-cells directly above and below each.
struct SideEdge {
    int edge, above, below;
};
std::vector<SideEdge> side_edges(const CellComplex& cx, int v, int slab)
{
    std::vector<SideEdge> out;
    const auto& sd = cx.slab_data[slab];
    for (std::size_t i = 0; i < sd.edges.size(); ++i) {
        int e = sd.edges[i].second;
        if (sd.edges[i].first.layer == 0 && cx.is_face(v, e))
            out.push_back({e, sd.faces[i + 1], sd.faces[i]});
    }
    return out;
}

}  // namespace

bool functorial(const CellSheaf& s, std::string* where)
{
    const CellComplex& cx = s.complex();
    const Field& fld = s.field();
    for (int c = 0; c < cx.size(); ++c) {
        if (s.stalk(c).is_zero_space())
            continue;
        for (int b : cx.faces(c)) {
            if (const ChainMap* g = s.gen_ptr(b, c); g && !g->commutes()) {
                if (where)
                    *where = cx.describe(b) + " -> " + cx.describe(c) + " is not a chain map";
                return false;
            }
            for (int a : cx.faces(b)) {
                if (s.stalk(a).is_zero_space())
                    continue;
                ChainMap lhs = compose(s.gen(b, c), s.gen(a, b));
                if (!same_map(fld, lhs, s.gen(a, c))) {
                    if (where)
                        *where = cx.describe(a) + " < " + cx.describe(b) + " < " + cx.describe(c);
                    return false;
                }
            }
        }
    }
    return true;
}

bool crossing_square_acyclic(const ChainMap& nw, const ChainMap& ne, const ChainMap& ws, const ChainMap& es)
{
    // cone(N -> W) -> cone(E -> S), (n, w) |-> (ne n, ws w).
    auto c1 = std::make_shared<const CochainComplex>(cone(nw));
    auto c2 = std::make_shared<const CochainComplex>(cone(es));
    std::map<int, Matrix> comps;
    int lo = std::min(c1->empty() ? 0 : c1->lo(), c2->empty() ? 0 : c2->lo());
    int hi = std::max(c1->empty() ? -1 : c1->hi(), c2->empty() ? -1 : c2->hi());
    for (int i = lo; i <= hi; ++i) {
        TripletBuilder tb(c2->dim(i), c1->dim(i));
        tb.add_block(0, 0, ne.at(i + 1));
        tb.add_block(es.source().dim(i + 1), nw.source().dim(i + 1), ws.at(i));
        comps[i] = tb.build();
    }
    ChainMap m(c1, c2, std::move(comps), true);
    return acyclic(cone(m));
}

SheafReport check_ss(const CellSheaf& s, const Front& f)
{
    require_front(s, f);
    SheafReport rep;
    const CellComplex& cx = s.complex();
    const Field& fld = s.field();
    std::string where;
    if (!functorial(s, &where)) {
        rep.violations.push_back({"functoriality", {}, where});
        return rep;
    }
    std::vector<int> unb;
    for (int c = 0; c < cx.size(); ++c)
        if (!cx.cell(c).bounded && !acyclic(s.stalk(c)))
            unb.push_back(c);
    if (!unb.empty()) {
        rep.compact = false;
        rep.violations.push_back({"compact support", unb, "unbounded cells with nonzero stalk"});
    }
    for (int c = 0; c < cx.size(); ++c) {
        const Cell& cl = cx.cell(c);
        if (on_front(cl))
            continue;
        for (auto [a, sgn] : cl.boundary)
            if (!on_front(cx.cell(a)) && !quasi_iso(s.gen(a, c)))
                rep.violations.push_back({"region map", {a, c}, "not a quasi-isomorphism off the front"});
    }
    for (int c = 0; c < cx.size(); ++c) {
        const Cell& cl = cx.cell(c);
        if (!on_front(cl))
            continue;
        if (cl.kind == CellKind::FEdge || cl.kind == CellKind::Point) {
            for (int t : cx.cofaces(c)) {
                if (cx.cell(t).dim != cl.dim + 1)
                    continue;
                int inc = cx.incidence(c, t);
                bool above = cx.ambient == 2 ? inc == 1 : inc == -1;
                if (above && !quasi_iso(s.gen(c, t)))
                    rep.violations.push_back({"front edge", {c, t}, "stalk differs from the region above"});
            }
            continue;
        }
        auto [down, up] = vcells_around(cx, c);
        if (!quasi_iso(s.gen(c, up)))
            rep.violations.push_back({"vertex", {c, up}, "stalk differs from the cell above"});
        std::vector<int> st = layer0_strands(cl);
        if (st.size() < 2)
            continue;
        const Q& x = cl.sample.x;
        bool cusp = true;
        for (int k : st) {
            const Sheet& sh = f.pl.sheets[k];
            if (sh.x0() != x && sh.x1() != x)
                cusp = false;
        }
        if (cusp) {
            if (!quasi_iso(s.gen(c, down)))
                rep.violations.push_back({"cusp", {c, down}, "map around the cusp is not an isomorphism"});
            continue;
        }
        int k = line_index(cx, x);
        auto left = side_edges(cx, c, k), right = side_edges(cx, c, k + 1);
        if (left.size() != 2 || right.size() != 2) {
            rep.violations.push_back({"crossing", {c}, "unexpected local structure"});
            continue;
        }
        // N = F(v); W, E the middle regions; S = F(cell below v).
        int lm = left[0].above, rm = right[0].above, lb = left[0].below, rb = right[0].below;
        std::vector<std::pair<int, int>> need = {{left[0].edge, lm}, {down, lb}, {right[0].edge, rm}, {down, rb}};
        bool strict = true;
        for (auto [a, b] : need)
            if (!strict_iso(fld, s.gen(a, b)))
                strict = false;
        if (!strict) {
            rep.violations.push_back({"crossing", {c}, "region maps near the crossing are not invertible"});
            continue;
        }
        ChainMap nw = s.gen(c, lm), ne = s.gen(c, rm);
        ChainMap ws = compose(invert(fld, s.gen(down, lb)),
                              compose(s.gen(left[0].edge, lb), invert(fld, s.gen(left[0].edge, lm))));
        ChainMap es = compose(invert(fld, s.gen(down, rb)),
                              compose(s.gen(right[0].edge, rb), invert(fld, s.gen(right[0].edge, rm))));
        if (!crossing_square_acyclic(nw, ne, ws, es))
            rep.violations.push_back({"crossing", {c}, "Tot(N -> W + E -> S) is not acyclic"});
    }
    return rep;
}

void require_ss(const CellSheaf& s, const Front& f, bool need_compact)
{
    SheafReport r = check_ss(s, f);
    if (need_compact ? !r.ok() : !r.local_ok())
        throw SheafError("sheaf violates its local conditions: " + r.summary());
}

CochainComplex microstalk(const CellSheaf& s, const Front& f, const Point2& p)
{
    require_front(s, f);
    const CellComplex& cx = s.complex();
    int c = cx.locate(p);
    const Cell* cl = &cx.cell(c);
    if (cl->kind == CellKind::Vertex) {
        std::vector<int> st = layer0_strands(*cl);
        if (st.size() != 1 || cl->strands.size() != 1)
            throw SheafError("microstalk point is a cusp, crossing or overlay vertex");
        for (int e : cx.cofaces(c))
            if (cx.cell(e).kind == CellKind::FEdge) {
                c = e;
                break;
            }
        cl = &cx.cell(c);
    }
    if (!on_front(*cl))
        throw SheafError("microstalk point is not on the front");
    int below = -1;
    for (int t : cx.cofaces(c)) {
        if (cx.cell(t).dim != cl->dim + 1)
            continue;
        int inc = cx.incidence(c, t);
        if (cx.ambient == 2 ? inc == -1 : inc == 1)
            below = t;
    }
    int strand = layer0_strands(*cl).front();
    int d = f.potential(strand);
    return shift(cone(s.gen(c, below)), -1 - d);
}

MicrolocalRank microlocal_rank(const CellSheaf& s, const Front& f)
{
    require_front(s, f);
    const CellComplex& cx = s.complex();
    int ncomp = 0;
    std::vector<int> comp = components(f, &ncomp);
    std::vector<std::optional<DegreeDims>> seen(ncomp);
    for (int c = 0; c < cx.size(); ++c) {
        const Cell& cl = cx.cell(c);
        if (!(cl.kind == CellKind::FEdge || cl.kind == CellKind::Point) || !on_front(cl))
            continue;
        int strand = layer0_strands(cl).front();
        DegreeDims h = trim(cohomology(microstalk(s, f, cl.sample)));
        auto& slot = seen[comp[strand]];
        if (!slot)
            slot = h;
        else if (*slot != h)
            throw SheafError("microlocal rank jumps on component " + std::to_string(comp[strand]) + " at " +
                             cx.describe(c));
    }
    MicrolocalRank r;
    int total0 = -1;
    for (int i = 0; i < ncomp; ++i) {
        DegreeDims d = seen[i] ? *seen[i] : DegreeDims{};
        r.per_component.push_back(d);
        int tot = 0, nz = 0;
        for (auto [deg, n] : d) {
            tot += n;
            nz += n > 0;
        }
        if (nz > 1)
            r.pure = false;
        if (i == 0) {
            total0 = tot;
            r.dims = d;
        } else if (tot != total0) {
            total0 = -1;
        }
    }
    r.rank = total0;
    return r;
}

}  // namespace lgs
