#include "legsheaf/cellsheaf.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <tuple>

namespace lgs {

namespace {

std::string q(const Q& v) { return format_rational(v); }

struct Key {
    int dim;
    ExtQ x, t;
    bool operator<(const Key& o) const
    {
        if (dim != o.dim)
            return dim < o.dim;
        if (x != o.x)
            return x < o.x;
        return t < o.t;
    }
};

struct Builder {
    std::vector<Cell> cells;
    std::vector<Key> keys;

    int add(Cell c, Key k)
    {
        cells.push_back(std::move(c));
        keys.push_back(k);
        return static_cast<int>(cells.size()) - 1;
    }
};

// Sort cells by key and rewrite every stored id.
void renumber(Builder& b, CellComplex& cx)
{
    int n = static_cast<int>(b.cells.size());
    std::vector<int> order(n);
    for (int i = 0; i < n; ++i)
        order[i] = i;
    std::sort(order.begin(), order.end(), [&](int i, int j) { return b.keys[i] < b.keys[j]; });
    std::vector<int> pos(n);
    for (int i = 0; i < n; ++i)
        pos[order[i]] = i;
    cx.cells.resize(n);
    for (int i = 0; i < n; ++i) {
        Cell c = b.cells[order[i]];
        for (auto& [f, s] : c.boundary)
            f = pos[f];
        std::sort(c.boundary.begin(), c.boundary.end());
        cx.cells[i] = std::move(c);
    }
    for (auto& ld : cx.line_data) {
        for (auto& v : ld.vertices)
            v.second = pos[v.second];
        for (int& v : ld.vcells)
            v = pos[v];
    }
    for (auto& sd : cx.slab_data) {
        for (auto& e : sd.edges)
            e.second = pos[e.second];
        for (int& f : sd.faces)
            f = pos[f];
    }
    for (int& c : cx.point_cells)
        c = pos[c];
    for (int& c : cx.interval_cells)
        c = pos[c];
}

void check_generic(CellComplex& cx)
{
    int n = static_cast<int>(cx.layers.size());
    cx.duplicate.assign(n, false);
    std::vector<std::string> repr(n);
    for (int i = 0; i < n; ++i) {
        cx.placed.push_back(translate(cx.layers[i].front, cx.layers[i].shift));
        repr[i] = write_front_json(cx.placed[i]);
        for (int j = 0; j < i; ++j)
            if (!cx.duplicate[j] && repr[j] == repr[i])
                cx.duplicate[i] = true;
    }
    for (int i = 0; i < n; ++i) {
        if (cx.placed[i].is_point() != cx.placed[0].is_point())
            throw SheafError("cannot overlay point and PL fronts");
        for (int j = 0; j < i; ++j) {
            if (cx.duplicate[i] || cx.duplicate[j])
                continue;
            ValidationReport r = overlay_report(cx.placed[j], cx.placed[i]);
            if (!r.ok())
                throw SheafError("non-generic overlay of layers " + std::to_string(j) + " and " + std::to_string(i) +
                                 " at u = " + q(cx.layers[i].shift - cx.layers[j].shift) + ": " +
                                 r.violations.front().where);
        }
    }
    for (const Point2& m : cx.markers)
        for (int i = 0; i < n; ++i) {
            const Front& f = cx.placed[i];
            if (f.is_point()) {
                for (const Q& p : f.point.points)
                    if (p == m.t)
                        throw SheafError("marker " + q(m.t) + " lies on layer " + std::to_string(i));
                continue;
            }
            for (std::size_t s = 0; s < f.pl.sheets.size(); ++s)
                if (f.pl.sheets[s].covers(m.x) && f.pl.sheets[s].at(m.x) == m.t)
                    throw SheafError("marker (" + q(m.x) + ", " + q(m.t) + ") lies on layer " + std::to_string(i) +
                                     " at u = " + q(cx.layers[i].shift));
        }
}

void build_1d(CellComplex& cx)
{
    cx.ambient = 1;
    std::map<Q, std::vector<StrandRef>> pts;
    std::set<Q> marks;
    for (std::size_t l = 0; l < cx.placed.size(); ++l) {
        if (cx.duplicate[l])
            continue;
        const auto& p = cx.placed[l].point.points;
        for (std::size_t i = 0; i < p.size(); ++i)
            pts[p[i]].push_back(StrandRef{static_cast<int>(l), static_cast<int>(i)});
    }
    for (const Point2& m : cx.markers) {
        pts[m.t];
        marks.insert(m.t);
    }
    Builder b;
    std::vector<int> pc, ic;
    std::vector<Q> xs;
    for (auto& [t, refs] : pts) {
        Cell c;
        c.dim = 0;
        c.kind = CellKind::Point;
        c.sample = Point2{Q(0), t};
        c.strands = refs;
        c.marker = marks.count(t) > 0;
        pc.push_back(b.add(c, Key{0, ExtQ::of(t), ExtQ::of(Q(0))}));
        xs.push_back(t);
    }
    int m = static_cast<int>(xs.size());
    for (int i = 0; i <= m; ++i) {
        Cell c;
        c.dim = 1;
        c.kind = CellKind::Interval;
        c.bounded = i > 0 && i < m;
        Key k{1, ExtQ::of(Q(0)), ExtQ::of(Q(0))};
        if (m == 0) {
            c.sample = Point2{Q(0), Q(0)};
        } else if (i == 0) {
            c.sample = Point2{Q(0), xs[0] - 1};
            k.x = ExtQ::neg_inf();
        } else if (i == m) {
            c.sample = Point2{Q(0), xs[m - 1] + 1};
            k.x = ExtQ::pos_inf();
        } else {
            c.sample = Point2{Q(0), (xs[i - 1] + xs[i]) / 2};
            k.x = ExtQ::of(c.sample.t);
        }
        if (i > 0)
            c.boundary.push_back({pc[i - 1], -1});
        if (i < m)
            c.boundary.push_back({pc[i], 1});
        ic.push_back(b.add(c, k));
    }
    cx.lines = xs;
    cx.point_cells = pc;
    cx.interval_cells = ic;
    renumber(b, cx);
}

struct Strand {
    StrandRef ref;
    const Sheet* sheet;
};

bool active_on(const Sheet& s, const Q& lo, const Q& hi) { return s.x0() <= lo && hi <= s.x1(); }

void build_2d(CellComplex& cx)
{
    cx.ambient = 2;
    std::vector<Strand> strands;
    for (std::size_t l = 0; l < cx.placed.size(); ++l) {
        if (cx.duplicate[l])
            continue;
        const auto& sh = cx.placed[l].pl.sheets;
        for (std::size_t i = 0; i < sh.size(); ++i)
            strands.push_back({StrandRef{static_cast<int>(l), static_cast<int>(i)}, &sh[i]});
    }
    std::set<Q> base;
    for (const Strand& s : strands)
        for (const Point2& p : s.sheet->pts)
            base.insert(p.x);
    for (const Point2& m : cx.markers)
        base.insert(m.x);
    std::set<Q> events = base;
    std::vector<Q> bl(base.begin(), base.end());
    for (std::size_t k = 0; k + 1 < bl.size(); ++k) {
        const Q &lo = bl[k], &hi = bl[k + 1];
        std::vector<const Strand*> act;
        for (const Strand& s : strands)
            if (active_on(*s.sheet, lo, hi))
                act.push_back(&s);
        for (std::size_t i = 0; i < act.size(); ++i)
            for (std::size_t j = i + 1; j < act.size(); ++j) {
                Q dl = act[i]->sheet->at(lo) - act[j]->sheet->at(lo);
                Q dh = act[i]->sheet->at(hi) - act[j]->sheet->at(hi);
                if (dl == 0 && dh == 0)
                    throw SheafError("strands of layers " + std::to_string(act[i]->ref.layer) + " and " +
                                     std::to_string(act[j]->ref.layer) + " coincide on [" + q(lo) + ", " + q(hi) +
                                     "]");
                if (sgn(dl) * sgn(dh) < 0)
                    events.insert(lo + (hi - lo) * dl / (dl - dh));
            }
    }
    cx.lines.assign(events.begin(), events.end());
    int nl = static_cast<int>(cx.lines.size());
    Builder b;
    cx.line_data.assign(nl, {});
    for (int k = 0; k < nl; ++k) {
        const Q& x = cx.lines[k];
        std::map<Q, Cell> verts;
        for (const Strand& s : strands)
            if (s.sheet->covers(x)) {
                Cell& c = verts[s.sheet->at(x)];
                c.strands.push_back(s.ref);
            }
        for (const Point2& m : cx.markers)
            if (m.x == x)
                verts[m.t].marker = true;
        auto& ld = cx.line_data[k];
        std::vector<Q> ts;
        for (auto& [t, c] : verts) {
            c.dim = 0;
            c.kind = CellKind::Vertex;
            c.sample = Point2{x, t};
            std::sort(c.strands.begin(), c.strands.end());
            ld.vertices.push_back({t, b.add(c, Key{0, ExtQ::of(x), ExtQ::of(t)})});
            ts.push_back(t);
        }
        int m = static_cast<int>(ts.size());
        for (int i = 0; i <= m; ++i) {
            Cell c;
            c.dim = 1;
            c.kind = CellKind::VEdge;
            c.bounded = i > 0 && i < m;
            Key key{1, ExtQ::of(x), ExtQ::of(Q(0))};
            if (m == 0) {
                c.sample = Point2{x, Q(0)};
            } else if (i == 0) {
                c.sample = Point2{x, ts[0] - 1};
                key.t = ExtQ::neg_inf();
            } else if (i == m) {
                c.sample = Point2{x, ts[m - 1] + 1};
                key.t = ExtQ::pos_inf();
            } else {
                c.sample = Point2{x, (ts[i - 1] + ts[i]) / 2};
                key.t = ExtQ::of(c.sample.t);
            }
            if (i > 0)
                c.boundary.push_back({ld.vertices[i - 1].second, -1});
            if (i < m)
                c.boundary.push_back({ld.vertices[i].second, 1});
            ld.vcells.push_back(b.add(c, key));
        }
    }
    auto vertex_at = [&](int k, const Q& t) {
        for (auto& [vt, id] : cx.line_data[k].vertices)
            if (vt == t)
                return id;
        throw SheafError("internal: missing vertex");
    };
    // Vertical cells of line k lying in [lo, hi] (ext bounds).
    auto vcells_in = [&](int k, const ExtQ& lo, const ExtQ& hi) {
        std::vector<int> out;
        const auto& ld = cx.line_data[k];
        int m = static_cast<int>(ld.vertices.size());
        for (int i = 0; i <= m; ++i) {
            ExtQ a = i == 0 ? ExtQ::neg_inf() : ExtQ::of(ld.vertices[i - 1].first);
            ExtQ z = i == m ? ExtQ::pos_inf() : ExtQ::of(ld.vertices[i].first);
            if (lo <= a && z <= hi)
                out.push_back(ld.vcells[i]);
        }
        return out;
    };
    cx.slab_data.assign(nl + 1, {});
    if (nl == 0) {
        Cell c;
        c.dim = 2;
        c.kind = CellKind::HalfPlane;
        c.bounded = false;
        c.sample = Point2{Q(0), Q(0)};
        cx.slab_data[0].faces.push_back(b.add(c, Key{2, ExtQ::neg_inf(), ExtQ::of(Q(0))}));
        renumber(b, cx);
        return;
    }
    for (int side = 0; side < 2; ++side) {
        Cell c;
        c.dim = 2;
        c.kind = CellKind::HalfPlane;
        c.bounded = false;
        int k = side == 0 ? 0 : nl - 1;
        c.sample = Point2{side == 0 ? Q(cx.lines[0] - 1) : Q(cx.lines[nl - 1] + 1), Q(0)};
        for (int v : cx.line_data[k].vcells)
            c.boundary.push_back({v, side == 0 ? 1 : -1});
        int id = b.add(c, Key{2, side == 0 ? ExtQ::neg_inf() : ExtQ::pos_inf(), ExtQ::of(Q(0))});
        cx.slab_data[side == 0 ? 0 : nl].faces.push_back(id);
    }
    for (int k = 1; k < nl; ++k) {
        const Q &xl = cx.lines[k - 1], &xr = cx.lines[k];
        Q xm = (xl + xr) / 2;
        std::vector<std::pair<Q, const Strand*>> act;
        for (const Strand& s : strands)
            if (active_on(*s.sheet, xl, xr))
                act.push_back({s.sheet->at(xm), &s});
        std::sort(act.begin(), act.end(), [](const auto& a, const auto& z) { return a.first < z.first; });
        auto& sd = cx.slab_data[k];
        for (auto& [tm, s] : act) {
            Cell c;
            c.dim = 1;
            c.kind = CellKind::FEdge;
            c.sample = Point2{xm, tm};
            c.strands = {s->ref};
            c.boundary = {{vertex_at(k - 1, s->sheet->at(xl)), -1}, {vertex_at(k, s->sheet->at(xr)), 1}};
            sd.edges.push_back({s->ref, b.add(c, Key{1, ExtQ::of(xm), ExtQ::of(tm)})});
        }
        int m = static_cast<int>(act.size());
        for (int i = 0; i <= m; ++i) {
            Cell c;
            c.dim = 2;
            c.kind = CellKind::Face;
            c.bounded = i > 0 && i < m;
            Key key{2, ExtQ::of(xm), ExtQ::of(Q(0))};
            ExtQ lol = ExtQ::neg_inf(), lor = ExtQ::neg_inf(), hil = ExtQ::pos_inf(), hir = ExtQ::pos_inf();
            if (i > 0) {
                const Sheet& s = *act[i - 1].second->sheet;
                lol = ExtQ::of(s.at(xl));
                lor = ExtQ::of(s.at(xr));
                c.boundary.push_back({sd.edges[i - 1].second, 1});
            }
            if (i < m) {
                const Sheet& s = *act[i].second->sheet;
                hil = ExtQ::of(s.at(xl));
                hir = ExtQ::of(s.at(xr));
                c.boundary.push_back({sd.edges[i].second, -1});
            }
            if (m == 0) {
                c.sample = Point2{xm, Q(0)};
            } else if (i == 0) {
                c.sample = Point2{xm, act[0].first - 1};
                key.t = ExtQ::neg_inf();
            } else if (i == m) {
                c.sample = Point2{xm, act[m - 1].first + 1};
                key.t = ExtQ::pos_inf();
            } else {
                c.sample = Point2{xm, (act[i - 1].first + act[i].first) / 2};
                key.t = ExtQ::of(c.sample.t);
            }
            for (int v : vcells_in(k, lor, hir))
                c.boundary.push_back({v, 1});
            for (int v : vcells_in(k - 1, lol, hil))
                c.boundary.push_back({v, -1});
            sd.faces.push_back(b.add(c, key));
        }
    }
    renumber(b, cx);
}

}  // namespace

Q strand_at(const Layer& l, int strand, const Q& x)
{
    if (l.front.is_point())
        return l.front.point.points.at(strand) + l.shift;
    return l.front.pl.sheets.at(strand).at(x) + l.shift;
}

void CellComplex::finalize()
{
    int n = size();
    faces_.assign(n, {});
    cofaces_.assign(n, {});
    std::vector<int> order(n);
    for (int i = 0; i < n; ++i)
        order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return cells[a].dim < cells[b].dim; });
    for (int c : order) {
        std::set<int> acc;
        for (auto [f, s] : cells[c].boundary) {
            acc.insert(f);
            acc.insert(faces_[f].begin(), faces_[f].end());
        }
        faces_[c].assign(acc.begin(), acc.end());
    }
    for (int c = 0; c < n; ++c)
        for (int f : faces_[c])
            cofaces_[f].push_back(c);
}

bool CellComplex::is_face(int a, int b) const
{
    const auto& f = faces_.at(b);
    return std::binary_search(f.begin(), f.end(), a);
}

int CellComplex::incidence(int face, int cell) const
{
    for (auto [f, s] : cells.at(cell).boundary)
        if (f == face)
            return s;
    return 0;
}

int CellComplex::locate(const Point2& p) const
{
    if (ambient == 1) {
        int m = static_cast<int>(lines.size());
        int below = 0;
        for (int i = 0; i < m; ++i) {
            if (lines[i] == p.t)
                return point_cells[i];
            if (lines[i] < p.t)
                ++below;
        }
        return interval_cells[below];
    }
    int nl = static_cast<int>(lines.size());
    if (nl == 0)
        return slab_data[0].faces[0];
    int k = static_cast<int>(std::lower_bound(lines.begin(), lines.end(), p.x) - lines.begin());
    if (k < nl && lines[k] == p.x) {
        const auto& ld = line_data[k];
        int below = 0;
        for (auto& [t, id] : ld.vertices) {
            if (t == p.t)
                return id;
            if (t < p.t)
                ++below;
        }
        return ld.vcells[below];
    }
    const auto& sd = slab_data[k];
    if (k == 0 || k == nl)
        return sd.faces[0];
    int below = 0;
    for (auto& [ref, id] : sd.edges) {
        Q t = strand_at(layers[ref.layer], ref.strand, p.x);
        if (t == p.t)
            return id;
        if (t < p.t)
            ++below;
    }
    return sd.faces[below];
}

std::string CellComplex::describe(int c) const
{
    const Cell& cl = cell(c);
    std::ostringstream os;
    os << "cell " << c << " (";
    switch (cl.kind) {
    case CellKind::Vertex: os << "vertex"; break;
    case CellKind::VEdge: os << "vertical edge"; break;
    case CellKind::FEdge: os << "front edge"; break;
    case CellKind::Face: os << "2-cell"; break;
    case CellKind::HalfPlane: os << "half-plane"; break;
    case CellKind::Point: os << "point"; break;
    case CellKind::Interval: os << "interval"; break;
    }
    if (ambient == 1)
        os << " at " << q(cl.sample.t) << ")";
    else
        os << " at (" << q(cl.sample.x) << ", " << q(cl.sample.t) << "))";
    return os.str();
}

bool CellComplex::same_geometry(const CellComplex& o) const
{
    if (this == &o)
        return true;
    if (ambient != o.ambient || lines != o.lines || size() != o.size())
        return false;
    for (int i = 0; i < size(); ++i)
        if (!(cells[i].sample == o.cells[i].sample) || cells[i].kind != o.cells[i].kind)
            return false;
    return true;
}

ComplexPtr arrange(const std::vector<Layer>& layers, const std::vector<Point2>& markers)
{
    auto cx = std::make_shared<CellComplex>();
    cx->layers = layers;
    std::set<Point2> ms(markers.begin(), markers.end());
    cx->markers.assign(ms.begin(), ms.end());
    if (layers.empty() && markers.empty())
        throw SheafError("arrangement needs at least one front or marker");
    check_generic(*cx);
    bool point = !layers.empty() && layers[0].front.is_point();
    if (point)
        build_1d(*cx);
    else
        build_2d(*cx);
    cx->finalize();
    return cx;
}

ComplexPtr arrange(const Front& f) { return arrange({Layer{f, Q(0)}}); }

}  // namespace lgs
