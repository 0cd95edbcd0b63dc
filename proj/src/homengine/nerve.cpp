#include "legsheaf/homengine.hpp"

#include <algorithm>
#include <set>

namespace lgs {

namespace {

// Hom^m(A, B) = prod_i Hom(A^i, B^{i+m}); block i stored column-major.
struct HomSpace {
    int lo = 0;
    std::vector<int> offset;  // per A-degree lo + j
    int size = 0;

    HomSpace(const CochainComplex& a, const CochainComplex& b, int m)
    {
        if (a.empty())
            return;
        lo = a.lo();
        for (int i = a.lo(); i <= a.hi(); ++i) {
            offset.push_back(size);
            size += a.dim(i) * b.dim(i + m);
        }
    }
    int at(int i) const { return offset[i - lo]; }
};

std::pair<int, int> hom_range(const CochainComplex& a, const CochainComplex& b)
{
    return {b.lo() - a.hi(), b.hi() - a.lo()};
}

bool zero(const CochainComplex& c) { return c.is_zero_space(); }

void chains_from(const CellSheaf& f, const CellSheaf& g, std::vector<int>& cur,
                 std::vector<std::vector<int>>& out)
{
    if (!zero(g.stalk(cur.back())))
        out.push_back(cur);
    for (int t : f.complex().cofaces(cur.back())) {
        cur.push_back(t);
        chains_from(f, g, cur, out);
        cur.pop_back();
    }
}

}  // namespace

NerveComplex rhom_nerve(const CellSheaf& f, const CellSheaf& g)
{
    if (!f.complex().same_geometry(g.complex()))
        throw SheafError("rhom needs sheaves on a common complex");
    require_same_field(f.field(), g.field());
    const Field fld = f.field();
    const CellComplex& cx = f.complex();
    NerveComplex nc;
    for (int c = 0; c < cx.size(); ++c) {
        if (zero(f.stalk(c)))
            continue;
        std::vector<int> cur{c};
        chains_from(f, g, cur, nc.chains);
    }
    std::map<std::vector<int>, int> index;
    for (int i = 0; i < static_cast<int>(nc.chains.size()); ++i)
        index.emplace(nc.chains[i], i);

    // Block placement.
    std::map<int, int> dims;
    std::vector<std::map<int, std::pair<int, int>>> where(nc.chains.size());  // m -> (degree, offset)
    for (int ci = 0; ci < static_cast<int>(nc.chains.size()); ++ci) {
        const auto& ch = nc.chains[ci];
        int k = static_cast<int>(ch.size()) - 1;
        const CochainComplex& a = f.stalk(ch.front());
        const CochainComplex& b = g.stalk(ch.back());
        auto [mlo, mhi] = hom_range(a, b);
        for (int m = mlo; m <= mhi; ++m) {
            HomSpace hs(a, b, m);
            if (hs.size == 0)
                continue;
            int deg = k + m;
            int off = dims[deg];
            dims[deg] += hs.size;
            nc.blocks[deg].push_back({ci, m, off, hs.size});
            where[ci][m] = {deg, off};
        }
    }
    if (dims.empty()) {
        nc.complex = CochainComplex::zero(fld);
        return nc;
    }
    int lo = dims.begin()->first, hi = dims.rbegin()->first;
    std::vector<int> dimv;
    for (int d = lo; d <= hi; ++d)
        dimv.push_back(dims.count(d) ? dims[d] : 0);
    std::vector<TripletBuilder> tb;
    for (int d = lo; d < hi; ++d)
        tb.emplace_back(dimv[d + 1 - lo], dimv[d - lo]);

    auto target = [&](int ci, int m) -> const std::pair<int, int>* {
        auto it = where[ci].find(m);
        return it == where[ci].end() ? nullptr : &it->second;
    };

    for (int ci = 0; ci < static_cast<int>(nc.chains.size()); ++ci) {
        const auto ch = nc.chains[ci];
        int k = static_cast<int>(ch.size()) - 1;
        const CochainComplex& a = f.stalk(ch.front());
        const CochainComplex& b = g.stalk(ch.back());
        for (auto [m, pos] : where[ci]) {
            auto [deg, off] = pos;
            if (deg >= hi)
                continue;
            TripletBuilder& t = tb[deg - lo];
            HomSpace src(a, b, m);
            // (-1)^k d_Hom within the chain.
            if (const auto* to = target(ci, m + 1)) {
                HomSpace dst(a, b, m + 1);
                Q sk = (k % 2 == 0) ? Q(1) : Q(-1);
                Q sm = (m % 2 == 0) ? Q(-1) : Q(1);  // -(-1)^m
                for (int i = a.lo(); i <= a.hi(); ++i) {
                    int ai = a.dim(i);
                    if (ai == 0)
                        continue;
                    if (const Matrix* db = b.d_ptr(i + m); db && b.dim(i + m) > 0 && b.dim(i + m + 1) > 0)
                        t.add_block(to->second + dst.at(i), off + src.at(i), kron(Matrix::identity(ai), *db), sk);
                    if (i + 1 <= a.hi() && a.dim(i + 1) > 0 && b.dim(i + 1 + m) > 0) {
                        if (const Matrix* da = a.d_ptr(i))
                            t.add_block(to->second + dst.at(i), off + src.at(i + 1),
                                        kron(da->transpose(), Matrix::identity(b.dim(i + 1 + m))), sk * sm);
                    }
                }
            }
            // Coface d_0: prepend a face of s0.
            for (int tau : cx.faces(ch.front())) {
                if (zero(f.stalk(tau)))
                    continue;
                std::vector<int> nch{tau};
                nch.insert(nch.end(), ch.begin(), ch.end());
                auto it = index.find(nch);
                if (it == index.end())
                    continue;
                const auto* to = target(it->second, m);
                if (!to)
                    continue;
                const CochainComplex& a2 = f.stalk(tau);
                HomSpace dst(a2, b, m);
                ChainMap fm = f.gen(tau, ch.front());
                for (int i = std::max(a.lo(), a2.lo()); i <= std::min(a.hi(), a2.hi()); ++i) {
                    int bi = b.dim(i + m);
                    if (bi == 0 || a.dim(i) == 0 || a2.dim(i) == 0)
                        continue;
                    t.add_block(to->second + dst.at(i), off + src.at(i),
                                kron(fm.at(i).transpose(), Matrix::identity(bi)));
                }
            }
            // Middle insertions.
            for (int j = 1; j <= k; ++j) {
                Q sg = (j % 2 == 0) ? Q(1) : Q(-1);
                for (int tau : cx.faces(ch[j])) {
                    if (!cx.is_face(ch[j - 1], tau))
                        continue;
                    std::vector<int> nch(ch.begin(), ch.begin() + j);
                    nch.push_back(tau);
                    nch.insert(nch.end(), ch.begin() + j, ch.end());
                    auto it = index.find(nch);
                    if (it == index.end())
                        continue;
                    const auto* to = target(it->second, m);
                    if (!to)
                        continue;
                    for (int x = 0; x < src.size; ++x)
                        t.add(to->second + x, off + x, sg);
                }
            }
            // Last coface: append a coface of sk.
            Q sl = ((k + 1) % 2 == 0) ? Q(1) : Q(-1);
            for (int tau : cx.cofaces(ch.back())) {
                if (zero(g.stalk(tau)))
                    continue;
                std::vector<int> nch = ch;
                nch.push_back(tau);
                auto it = index.find(nch);
                if (it == index.end())
                    continue;
                const auto* to = target(it->second, m);
                if (!to)
                    continue;
                const CochainComplex& b2 = g.stalk(tau);
                HomSpace dst(a, b2, m);
                ChainMap gm = g.gen(ch.back(), tau);
                for (int i = a.lo(); i <= a.hi(); ++i) {
                    int ai = a.dim(i);
                    if (ai == 0 || b.dim(i + m) == 0 || b2.dim(i + m) == 0)
                        continue;
                    t.add_block(to->second + dst.at(i), off + src.at(i),
                                kron(Matrix::identity(ai), gm.at(i + m)), sl);
                }
            }
        }
    }
    std::vector<Matrix> diffs;
    for (auto& t : tb)
        diffs.push_back(t.build().reduced(fld));
    nc.complex = CochainComplex(fld, lo, std::move(dimv), std::move(diffs));
    return nc;
}

CochainComplex rhom(const CellSheaf& f, const CellSheaf& g) { return rhom_nerve(f, g).complex; }

CochainComplex global_sections(const CellSheaf& s)
{
    return rhom(constant_sheaf(s.complex_ptr(), s.field()), s);
}

ChainMap rhom_postcompose(const NerveComplex& na, const NerveComplex& nb, const CellSheaf& f, const CellSheaf& g1,
                          const CellSheaf& g2, const std::vector<ChainMap>& cellwise)
{
    const Field fld = f.field();
    std::map<std::vector<int>, int> index;
    for (int i = 0; i < static_cast<int>(nb.chains.size()); ++i)
        index.emplace(nb.chains[i], i);
    std::map<std::pair<int, int>, std::pair<int, int>> bpos;  // (chain, m) -> (deg, offset) in nb
    for (const auto& [deg, bl] : nb.blocks)
        for (const auto& blk : bl)
            bpos[{blk.chain, blk.m}] = {deg, blk.offset};
    const CochainComplex& ca = na.complex;
    const CochainComplex& cb = nb.complex;
    std::map<int, TripletBuilder> tb;
    for (const auto& [deg, bl] : na.blocks) {
        for (const auto& blk : bl) {
            const auto& ch = na.chains[blk.chain];
            auto it = index.find(ch);
            if (it == index.end())
                continue;
            auto pit = bpos.find({it->second, blk.m});
            if (pit == bpos.end())
                continue;
            const CochainComplex& a = f.stalk(ch.front());
            const CochainComplex& b1 = g1.stalk(ch.back());
            const CochainComplex& b2 = g2.stalk(ch.back());
            HomSpace src(a, b1, blk.m), dst(a, b2, blk.m);
            const ChainMap& tau = cellwise.at(ch.back());
            auto tit = tb.find(deg);
            if (tit == tb.end())
                tit = tb.emplace(deg, TripletBuilder(cb.dim(deg), ca.dim(deg))).first;
            for (int i = a.lo(); i <= a.hi(); ++i) {
                if (a.dim(i) == 0 || b1.dim(i + blk.m) == 0 || b2.dim(i + blk.m) == 0)
                    continue;
                tit->second.add_block(pit->second.second + dst.at(i), blk.offset + src.at(i),
                                      kron(Matrix::identity(a.dim(i)), tau.at(i + blk.m)));
            }
        }
    }
    std::map<int, Matrix> comps;
    for (auto& [deg, t] : tb)
        comps[deg] = t.build().reduced(fld);
    auto sa = std::make_shared<const CochainComplex>(ca);
    auto sb = std::make_shared<const CochainComplex>(cb);
    return ChainMap(sa, sb, std::move(comps));
}

std::vector<Layer> shifted_layers(const CellComplex& cx, const Q& u)
{
    std::vector<Layer> out = cx.layers;
    for (Layer& l : out)
        l.shift += u;
    return out;
}

std::vector<Point2> shifted_markers(const CellComplex& cx, const Q& u)
{
    std::vector<Point2> out = cx.markers;
    for (Point2& p : out)
        p.t += u;
    return out;
}

OverlayPair overlay_pair(const CellSheaf& f, const CellSheaf& g, const Q& u)
{
    if (u == 0 && f.complex().same_geometry(g.complex()))
        return {f, g};
    std::vector<Layer> layers = shifted_layers(f.complex(), Q(0));
    for (Layer& l : shifted_layers(g.complex(), u))
        layers.push_back(l);
    std::set<Point2> mk;
    for (const Point2& p : shifted_markers(f.complex(), Q(0)))
        mk.insert(p);
    for (const Point2& p : shifted_markers(g.complex(), u))
        mk.insert(p);
    ComplexPtr x = arrange(layers, std::vector<Point2>(mk.begin(), mk.end()));
    return {pullback(f, x), pullback_translated(g, u, x)};
}

}  // namespace lgs
