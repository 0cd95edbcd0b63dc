#include "legsheaf/cellsheaf.hpp"

#include <algorithm>
#include <numeric>

namespace lgs {

namespace {

using CPtr = std::shared_ptr<const CochainComplex>;

struct DSU {
    std::vector<int> p;
    explicit DSU(int n) : p(n) { std::iota(p.begin(), p.end(), 0); }
    int find(int x) { return p[x] == x ? x : p[x] = find(p[x]); }
    void unite(int a, int b) { p[find(a)] = find(b); }
};

std::string pt(const Point2& p) { return "(" + format_rational(p.x) + ", " + format_rational(p.t) + ")"; }

bool on_front(const Cell& c)
{
    return c.kind == CellKind::FEdge ||
           ((c.kind == CellKind::Vertex || c.kind == CellKind::Point) && !c.strands.empty());
}

bool same_map(const Field& f, const ChainMap& a, const ChainMap& b)
{
    const CochainComplex& s = a.source();
    if (s.empty())
        return true;
    for (int d = s.lo(); d <= s.hi(); ++d)
        if (!equal(f, a.at(d), b.at(d)))
            return false;
    return true;
}

class Legible {
public:
    Legible(const Front& f, Field field) : front_(f), field_(field), cx_(arrange(f)), X_(*cx_), sheaf_(cx_, field) {}

    CellSheaf build(const std::vector<LegibleRegion>& regions, const std::vector<LegibleArc>& arcs)
    {
        label_regions();
        label_arcs();
        zero_ = std::make_shared<const CochainComplex>(CochainComplex::zero(field_));
        rstalk_.assign(X_.size(), zero_);
        std::vector<bool> given(X_.size(), false);
        for (const LegibleRegion& r : regions) {
            int c = X_.locate(r.at);
            if (on_front(X_.cell(c)))
                throw SheafError("region sample " + pt(r.at) + " lies on the front");
            int id = region_[c];
            if (given[id])
                throw SheafError("region sample " + pt(r.at) + " names a region already given");
            given[id] = true;
            if (r.stalk.field() != field_)
                throw SheafError("region stalk field mismatch");
            rstalk_[id] = std::make_shared<const CochainComplex>(r.stalk);
        }
        arc_maps(arcs);
        assign_stalks();
        assign_gens();
        std::string where;
        if (!functorial(sheaf_, &where))
            throw SheafError("constructed sheaf is not functorial at " + where);
        return sheaf_;
    }

private:
    const Front& front_;
    Field field_;
    ComplexPtr cx_;
    const CellComplex& X_;
    CellSheaf sheaf_;
    CPtr zero_;
    std::vector<int> region_, arc_;
    std::vector<CPtr> rstalk_;
    std::map<int, int> arc_above_, arc_below_;
    std::map<int, ChainMap> arc_map_;
    std::vector<int> anchor_;

    void label_regions()
    {
        DSU d(X_.size());
        for (int c = 0; c < X_.size(); ++c) {
            if (on_front(X_.cell(c)))
                continue;
            for (auto [a, s] : X_.cell(c).boundary)
                if (!on_front(X_.cell(a)))
                    d.unite(a, c);
        }
        region_.assign(X_.size(), -1);
        for (int c = 0; c < X_.size(); ++c)
            if (!on_front(X_.cell(c)))
                region_[c] = d.find(c);
    }

    void label_arcs()
    {
        DSU d(X_.size());
        for (int v = 0; v < X_.size(); ++v) {
            const Cell& c = X_.cell(v);
            if (c.kind != CellKind::Vertex || c.strands.size() != 1)
                continue;
            int first = -1;
            for (int e : X_.cofaces(v))
                if (X_.cell(e).kind == CellKind::FEdge) {
                    if (first < 0)
                        first = e;
                    else
                        d.unite(e, first);
                }
        }
        arc_.assign(X_.size(), -1);
        for (int c = 0; c < X_.size(); ++c) {
            const Cell& cl = X_.cell(c);
            if (cl.kind == CellKind::FEdge)
                arc_[c] = d.find(c);
            else if (cl.kind == CellKind::Point && !cl.strands.empty())
                arc_[c] = c;
        }
        for (int c = 0; c < X_.size(); ++c) {
            if (arc_[c] < 0)
                continue;
            for (int t : X_.cofaces(c)) {
                if (X_.cell(t).dim != X_.cell(c).dim + 1)
                    continue;
                int inc = X_.incidence(c, t);
                bool above = X_.ambient == 2 ? inc == 1 : inc == -1;
                (above ? arc_above_ : arc_below_)[arc_[c]] = region_[t];
            }
        }
    }

    int arc_cell(const LegibleArc& a)
    {
        if (a.strand < 0 || a.strand >= front_.strands())
            throw SheafError("arc names strand " + std::to_string(a.strand) + " which does not exist");
        if (X_.ambient == 1) {
            for (int c : X_.point_cells)
                for (const StrandRef& r : X_.cell(c).strands)
                    if (r.strand == a.strand)
                        return c;
            throw SheafError("internal: point strand missing");
        }
        const Sheet& s = front_.pl.sheets[a.strand];
        if (!(s.x0() < a.x && a.x < s.x1()))
            throw SheafError("arc of sheet " + std::to_string(a.strand) + " at x = " + format_rational(a.x) +
                             " is outside the sheet");
        int c = X_.locate(Point2{a.x, s.at(a.x)});
        const Cell& cl = X_.cell(c);
        if (cl.kind == CellKind::Vertex) {
            if (cl.strands.size() != 1)
                throw SheafError("arc of sheet " + std::to_string(a.strand) + " at x = " + format_rational(a.x) +
                                 " sits on a crossing");
            for (int e : X_.cofaces(c))
                if (X_.cell(e).kind == CellKind::FEdge)
                    return e;
        }
        return c;
    }

    void arc_maps(const std::vector<LegibleArc>& arcs)
    {
        for (const LegibleArc& a : arcs) {
            int id = arc_[arc_cell(a)];
            if (arc_map_.count(id))
                throw SheafError("arc of sheet " + std::to_string(a.strand) + " at x = " + format_rational(a.x) +
                                 " given twice");
            CPtr src = rstalk_[arc_above_.at(id)], tgt = rstalk_[arc_below_.at(id)];
            try {
                arc_map_.emplace(id, ChainMap(src, tgt, a.map, true));
            } catch (const ComplexError& e) {
                throw SheafError("arc of sheet " + std::to_string(a.strand) + " at x = " + format_rational(a.x) +
                                 ": " + e.what());
            }
        }
        for (auto [id, up] : arc_above_) {
            if (arc_map_.count(id))
                continue;
            CPtr src = rstalk_[up], tgt = rstalk_[arc_below_.at(id)];
            if (!src->is_zero_space() && !tgt->is_zero_space()) {
                const Cell& c = X_.cell(id);
                int strand = c.strands.empty() ? -1 : c.strands[0].strand;
                throw SheafError("missing arc map for strand " + std::to_string(strand) + " near " + pt(c.sample));
            }
            arc_map_.emplace(id, ChainMap::zero(src, tgt));
        }
    }

    int vcell_above(int v) const
    {
        int k = static_cast<int>(std::lower_bound(X_.lines.begin(), X_.lines.end(), X_.cell(v).sample.x) -
                                 X_.lines.begin());
        const auto& ld = X_.line_data[k];
        for (std::size_t i = 0; i < ld.vertices.size(); ++i)
            if (ld.vertices[i].second == v)
                return ld.vcells[i + 1];
        throw SheafError("internal: vertex not on its line");
    }

    void assign_stalks()
    {
        anchor_.assign(X_.size(), -1);
        for (int c = 0; c < X_.size(); ++c) {
            const Cell& cl = X_.cell(c);
            if (!on_front(cl))
                anchor_[c] = region_[c];
            else if (arc_[c] >= 0)
                anchor_[c] = arc_above_.at(arc_[c]);
            else
                anchor_[c] = region_[vcell_above(c)];
            sheaf_.set_stalk(c, rstalk_[anchor_[c]]);
        }
    }

    // Strands meeting vertex v from the given side, top to bottom, as arc ids with slab edge indices.
    std::vector<std::pair<int, int>> side_arcs(int v, bool left, int* slab_out) const
    {
        const Point2& p = X_.cell(v).sample;
        int k = static_cast<int>(std::lower_bound(X_.lines.begin(), X_.lines.end(), p.x) - X_.lines.begin());
        int slab = left ? k : k + 1;
        *slab_out = slab;
        std::vector<std::pair<int, int>> out;
        const auto& sd = X_.slab_data[slab];
        for (int i = static_cast<int>(sd.edges.size()) - 1; i >= 0; --i) {
            int e = sd.edges[i].second;
            if (X_.is_face(v, e))
                out.push_back({arc_[e], i});
        }
        return out;
    }

    ChainMap composite(const std::vector<std::pair<int, int>>& arcs, int from_index, CPtr start) const
    {
        ChainMap m = ChainMap::identity(start);
        for (auto [arc, idx] : arcs)
            if (idx >= from_index)
                m = compose(arc_map_.at(arc), m);
        return m;
    }

    ChainMap vertex_gen(int v, int c)
    {
        const Cell& vc = X_.cell(v);
        const Cell& cc = X_.cell(c);
        CPtr top = sheaf_.stalk_ptr(v);
        if (cc.sample.x == vc.sample.x) {
            if (cc.sample.t > vc.sample.t)
                return ChainMap::identity(top);
            int sl, sr;
            auto l = side_arcs(v, true, &sl), r = side_arcs(v, false, &sr);
            ChainMap ml = composite(l, 0, top), mr = composite(r, 0, top);
            if (!same_map(field_, ml, mr))
                throw SheafError("maps around the vertex " + pt(vc.sample) + " disagree");
            return ml;
        }
        if (cc.kind == CellKind::HalfPlane)
            return ChainMap::identity(top);
        bool left = cc.sample.x < vc.sample.x;
        int slab;
        auto arcs = side_arcs(v, left, &slab);
        const auto& sd = X_.slab_data[slab];
        int from = 0;
        if (cc.kind == CellKind::FEdge) {
            for (std::size_t i = 0; i < sd.edges.size(); ++i)
                if (sd.edges[i].second == c)
                    from = static_cast<int>(i) + 1;
        } else {
            for (std::size_t i = 0; i < sd.faces.size(); ++i)
                if (sd.faces[i] == c)
                    from = static_cast<int>(i);
        }
        return composite(arcs, from, top);
    }

    void assign_gens()
    {
        for (int c = 0; c < X_.size(); ++c) {
            if (sheaf_.stalk(c).is_zero_space())
                continue;
            for (int a : X_.faces(c)) {
                if (sheaf_.stalk(a).is_zero_space())
                    continue;
                const Cell& ac = X_.cell(a);
                ChainMap m;
                if (!on_front(ac)) {
                    m = ChainMap::identity(sheaf_.stalk_ptr(a));
                } else if (arc_[a] >= 0) {
                    int inc = X_.incidence(a, c);
                    bool above = X_.ambient == 2 ? inc == 1 : inc == -1;
                    m = above ? ChainMap::identity(sheaf_.stalk_ptr(a)) : arc_map_.at(arc_[a]);
                } else {
                    m = vertex_gen(a, c);
                }
                sheaf_.set_gen(a, c, m);
            }
        }
        // Vertices whose star is entirely zero still need the agreement check.
        for (int v = 0; v < X_.size(); ++v)
            if (X_.ambient == 2 && X_.cell(v).kind == CellKind::Vertex && !sheaf_.stalk(v).is_zero_space()) {
                for (int c : X_.cofaces(v))
                    if (X_.cell(c).kind == CellKind::VEdge && X_.cell(c).sample.t < X_.cell(v).sample.t)
                        vertex_gen(v, c);
            }
    }
};

}  // namespace

CellSheaf build_legible(const Front& f, const std::vector<LegibleRegion>& regions,
                        const std::vector<LegibleArc>& arcs, Field field)
{
    require_valid(f);
    return Legible(f, field).build(regions, arcs);
}

CellSheaf build_sum(const Front& f, const std::vector<Summand>& summands, Field field)
{
    require_valid(f);
    ComplexPtr cx = arrange(f);
    CellSheaf total = zero_sheaf(cx, field);
    for (const Summand& s : summands) {
        Front sub = component_front(f, s.component);
        CellSheaf part = build_legible(sub, s.regions, s.arcs, field);
        CellSheaf moved = pullback(part, cx);
        if (s.shift != 0)
            moved = shifted(moved, s.shift);
        total = direct_sum(total, moved);
    }
    return total;
}

}  // namespace lgs
