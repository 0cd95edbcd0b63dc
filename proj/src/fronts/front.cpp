#include "legsheaf/fronts.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>

namespace lgs {

namespace {

std::string q(const Q& v) { return format_rational(v); }

std::string at_point(const Q& x, const Q& t) { return "(" + q(x) + ", " + q(t) + ")"; }

int sign(const Q& v) { return sgn(v); }

}  // namespace

Q Sheet::at(const Q& x) const
{
    if (!covers(x))
        throw FrontError("x = " + q(x) + " outside sheet domain");
    for (std::size_t k = 0; k + 1 < pts.size(); ++k)
        if (x <= pts[k + 1].x) {
            const Point2& a = pts[k];
            const Point2& b = pts[k + 1];
            return a.t + (b.t - a.t) * (x - a.x) / (b.x - a.x);
        }
    return pts.back().t;
}

Q Sheet::slope_left(const Q& x) const
{
    for (std::size_t k = 0; k + 1 < pts.size(); ++k)
        if (pts[k].x < x && x <= pts[k + 1].x)
            return (pts[k + 1].t - pts[k].t) / (pts[k + 1].x - pts[k].x);
    throw FrontError("no segment left of x = " + q(x));
}

Q Sheet::slope_right(const Q& x) const
{
    for (std::size_t k = 0; k + 1 < pts.size(); ++k)
        if (pts[k].x <= x && x < pts[k + 1].x)
            return (pts[k + 1].t - pts[k].t) / (pts[k + 1].x - pts[k].x);
    throw FrontError("no segment right of x = " + q(x));
}

bool Sheet::has_breakpoint(const Q& x) const
{
    for (const Point2& p : pts)
        if (p.x == x)
            return true;
    return false;
}

Front Front::of(PointFront p, std::string name)
{
    Front f;
    f.kind = Kind::Point;
    f.point = std::move(p);
    f.name = std::move(name);
    return f;
}

Front Front::of(PLFront p, std::string name)
{
    Front f;
    f.kind = Kind::PL;
    f.pl = std::move(p);
    f.name = std::move(name);
    return f;
}

int Front::strands() const
{
    return is_point() ? static_cast<int>(point.points.size()) : static_cast<int>(pl.sheets.size());
}

int Front::potential(int strand) const
{
    const auto& p = is_point() ? point.potentials : pl.potentials;
    if (strand < 0 || strand >= static_cast<int>(p.size()))
        throw FrontError("no potential for strand " + std::to_string(strand));
    return p[strand];
}

bool ValidationReport::has(const std::string& kind) const
{
    for (const Violation& v : violations)
        if (v.kind == kind)
            return true;
    return false;
}

std::string ValidationReport::summary() const
{
    std::ostringstream os;
    for (const Violation& v : violations)
        os << v.kind << ": " << v.where << "\n";
    return os.str();
}

Point2 cusp_point(const PLFront& f, const Cusp& c)
{
    return Point2{c.x, f.sheets[c.a].at(c.x)};
}

namespace {

Q cusp_branch_slope(const PLFront& f, const Cusp& c, int s)
{
    return c.kind == CuspKind::Left ? f.sheets[s].slope_right(c.x) : f.sheets[s].slope_left(c.x);
}

}  // namespace

int cusp_upper(const PLFront& f, const Cusp& c)
{
    Q sa = cusp_branch_slope(f, c, c.a), sb = cusp_branch_slope(f, c, c.b);
    if (c.kind == CuspKind::Left)
        return sa > sb ? c.a : c.b;
    return sa < sb ? c.a : c.b;
}

int cusp_lower(const PLFront& f, const Cusp& c)
{
    return cusp_upper(f, c) == c.a ? c.b : c.a;
}

std::pair<Q, Q> cusp_slopes(const PLFront& f, const Cusp& c)
{
    Q sa = cusp_branch_slope(f, c, c.a), sb = cusp_branch_slope(f, c, c.b);
    return sa < sb ? std::make_pair(sa, sb) : std::make_pair(sb, sa);
}

std::vector<Crossing> crossings(const PLFront& f)
{
    std::vector<Crossing> out;
    for (std::size_t i = 0; i < f.sheets.size(); ++i)
        for (std::size_t j = i + 1; j < f.sheets.size(); ++j) {
            const Sheet& a = f.sheets[i];
            const Sheet& b = f.sheets[j];
            Q lo = std::max(a.x0(), b.x0()), hi = std::min(a.x1(), b.x1());
            if (!(lo < hi))
                continue;
            std::set<Q> xs{lo, hi};
            for (const Sheet* s : {&a, &b})
                for (const Point2& p : s->pts)
                    if (lo < p.x && p.x < hi)
                        xs.insert(p.x);
            std::vector<Q> x(xs.begin(), xs.end());
            for (std::size_t k = 0; k + 1 < x.size(); ++k) {
                Q d0 = a.at(x[k]) - b.at(x[k]), d1 = a.at(x[k + 1]) - b.at(x[k + 1]);
                if (sign(d0) * sign(d1) < 0) {
                    Q xc = x[k] + d0 * (x[k + 1] - x[k]) / (d0 - d1);
                    out.push_back(Crossing{xc, a.at(xc), static_cast<int>(i), static_cast<int>(j)});
                }
            }
        }
    std::sort(out.begin(), out.end(), [](const Crossing& l, const Crossing& r) {
        return l.x != r.x ? l.x < r.x : l.t < r.t;
    });
    return out;
}

namespace {

void validate_point(const PointFront& p, std::vector<Violation>& out)
{
    if (p.points.empty())
        out.push_back({"empty front", "point front needs at least one point"});
    for (std::size_t i = 0; i + 1 < p.points.size(); ++i)
        if (!(p.points[i] < p.points[i + 1]))
            out.push_back({"not strictly increasing", "points " + std::to_string(i) + " and " + std::to_string(i + 1)});
    if (p.potentials.size() != p.points.size())
        out.push_back({"potential count", std::to_string(p.potentials.size()) + " potentials for " +
                                              std::to_string(p.points.size()) + " points"});
}

bool cusp_pairs(const PLFront& f, int i, int j, const Q& x)
{
    for (const Cusp& c : f.cusps)
        if (c.x == x && ((c.a == i && c.b == j) || (c.a == j && c.b == i)))
            return true;
    return false;
}

void validate_pl(const PLFront& f, std::vector<Violation>& out)
{
    int n = static_cast<int>(f.sheets.size());
    if (n == 0) {
        out.push_back({"empty front", "no sheets"});
        return;
    }
    bool shapes_ok = true;
    for (int s = 0; s < n; ++s) {
        const Sheet& sh = f.sheets[s];
        if (sh.pts.size() < 2) {
            out.push_back({"degenerate sheet", "sheet " + std::to_string(s) + " has fewer than 2 breakpoints"});
            shapes_ok = false;
            continue;
        }
        for (std::size_t k = 0; k + 1 < sh.pts.size(); ++k)
            if (!(sh.pts[k].x < sh.pts[k + 1].x)) {
                out.push_back({"not strictly increasing", "sheet " + std::to_string(s) + " breakpoint " + std::to_string(k + 1)});
                shapes_ok = false;
            }
    }
    if (!shapes_ok)
        return;

    // Cusp structure.
    std::vector<int> left_used(n, 0), right_used(n, 0);
    bool cusps_ok = true;
    for (std::size_t ci = 0; ci < f.cusps.size(); ++ci) {
        const Cusp& c = f.cusps[ci];
        std::string where = "cusp " + std::to_string(ci) + " at x = " + q(c.x);
        if (c.a < 0 || c.a >= n || c.b < 0 || c.b >= n || c.a == c.b) {
            out.push_back({"bad cusp", where + ": invalid sheet ids"});
            cusps_ok = false;
            continue;
        }
        bool left = c.kind == CuspKind::Left;
        const Sheet& A = f.sheets[c.a];
        const Sheet& B = f.sheets[c.b];
        const Point2& ea = left ? A.pts.front() : A.pts.back();
        const Point2& eb = left ? B.pts.front() : B.pts.back();
        if (ea.x != c.x || eb.x != c.x || ea.t != eb.t) {
            out.push_back({"bad cusp", where + ": sheets " + std::to_string(c.a) + ", " + std::to_string(c.b) +
                                           " do not share an endpoint there"});
            cusps_ok = false;
            continue;
        }
        (left ? left_used : right_used)[c.a]++;
        (left ? left_used : right_used)[c.b]++;
        if (cusp_branch_slope(f, c, c.a) == cusp_branch_slope(f, c, c.b)) {
            out.push_back({"parallel segments", where + ": cusp branches have equal slope"});
            cusps_ok = false;
        }
    }
    for (int s = 0; s < n; ++s) {
        if (left_used[s] != 1)
            out.push_back({"unpaired sheet end", "left end of sheet " + std::to_string(s) + " is in " +
                                                     std::to_string(left_used[s]) + " left cusps"});
        if (right_used[s] != 1)
            out.push_back({"unpaired sheet end", "right end of sheet " + std::to_string(s) + " is in " +
                                                     std::to_string(right_used[s]) + " right cusps"});
    }
    for (std::size_t i = 0; i < f.cusps.size(); ++i)
        for (std::size_t j = i + 1; j < f.cusps.size(); ++j)
            if (f.cusps[i].x == f.cusps[j].x)
                out.push_back({"non-generic coincidence", "two cusps at x = " + q(f.cusps[i].x)});

    // Pairwise sheet geometry.
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const Sheet& a = f.sheets[i];
            const Sheet& b = f.sheets[j];
            Q lo = std::max(a.x0(), b.x0()), hi = std::min(a.x1(), b.x1());
            if (lo > hi)
                continue;
            std::string pair = "sheets " + std::to_string(i) + ", " + std::to_string(j);
            if (lo == hi) {
                if (a.at(lo) == b.at(lo) && !cusp_pairs(f, i, j, lo))
                    out.push_back({"touching", pair + " meet at sheet ends " + at_point(lo, a.at(lo))});
                continue;
            }
            std::set<Q> xs{lo, hi};
            for (const Sheet* s : {&a, &b})
                for (const Point2& p : s->pts)
                    if (lo < p.x && p.x < hi)
                        xs.insert(p.x);
            std::vector<Q> x(xs.begin(), xs.end());
            for (std::size_t k = 0; k + 1 < x.size(); ++k)
                if (a.slope_right(x[k]) == b.slope_right(x[k]))
                    out.push_back({"parallel segments", pair + " on [" + q(x[k]) + ", " + q(x[k + 1]) + "]"});
            for (std::size_t k = 0; k < x.size(); ++k) {
                Q d = a.at(x[k]) - b.at(x[k]);
                if (d != 0)
                    continue;
                bool end = k == 0 || k + 1 == x.size();
                if (!end)
                    out.push_back({"non-generic coincidence", pair + " meet at breakpoint " + at_point(x[k], a.at(x[k]))});
                else if (!cusp_pairs(f, i, j, x[k]))
                    out.push_back({"touching", pair + " meet at sheet end " + at_point(x[k], a.at(x[k]))});
            }
        }

    // Crossings must avoid all event x values and each other.
    std::set<Q> event_x;
    for (const Sheet& s : f.sheets)
        for (const Point2& p : s.pts)
            event_x.insert(p.x);
    auto cr = crossings(f);
    for (const Crossing& c : cr)
        if (event_x.count(c.x))
            out.push_back({"non-generic coincidence", "crossing of sheets " + std::to_string(c.i) + ", " +
                                                          std::to_string(c.j) + " at breakpoint x = " + q(c.x)});
    for (std::size_t k = 0; k + 1 < cr.size(); ++k)
        if (cr[k].x == cr[k + 1].x) {
            if (cr[k].t == cr[k + 1].t)
                out.push_back({"triple point", at_point(cr[k].x, cr[k].t)});
            else
                out.push_back({"non-generic coincidence", "two crossings at x = " + q(cr[k].x)});
        }

    if (cusps_ok) {
        for (const Cusp& c : f.cusps) {
            auto [s0, s1] = cusp_slopes(f, c);
            for (int k = 0; k < n; ++k) {
                if (k == c.a || k == c.b)
                    continue;
                const Sheet& sh = f.sheets[k];
                if (!(sh.x0() < c.x && c.x < sh.x1()))
                    continue;
                if (sh.has_breakpoint(c.x)) {
                    out.push_back({"non-generic coincidence", "sheet " + std::to_string(k) + " has a breakpoint at cusp x = " + q(c.x)});
                    continue;
                }
                Q s = sh.slope_right(c.x);
                if (s0 < s && s < s1)
                    out.push_back({"ambiguous chord", "sheet " + std::to_string(k) + " passes cusp x = " + q(c.x) +
                                                          " with slope between the cusp branches"});
            }
        }
        // Maslov potentials.
        if (f.potentials.size() != f.sheets.size()) {
            out.push_back({"potential count", std::to_string(f.potentials.size()) + " potentials for " +
                                                  std::to_string(f.sheets.size()) + " sheets"});
        } else {
            for (const Cusp& c : f.cusps) {
                int up = cusp_upper(f, c), lo = cusp_lower(f, c);
                if (f.potentials[lo] != f.potentials[up] + 1)
                    out.push_back({"potential rule", "cusp at x = " + q(c.x) + ": lower sheet " + std::to_string(lo) +
                                                         " has potential " + std::to_string(f.potentials[lo]) +
                                                         ", upper sheet " + std::to_string(up) + " has " +
                                                         std::to_string(f.potentials[up])});
            }
        }
    }
}

}  // namespace

ValidationReport validate(const Front& f)
{
    ValidationReport r;
    if (f.is_point())
        validate_point(f.point, r.violations);
    else
        validate_pl(f.pl, r.violations);
    return r;
}

void require_valid(const Front& f)
{
    auto r = validate(f);
    if (!r.ok())
        throw FrontError("invalid front" + (f.name.empty() ? std::string() : " '" + f.name + "'") + ":\n" + r.summary());
}

std::vector<int> components(const Front& f, int* count)
{
    int n = f.strands();
    std::vector<int> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
        while (parent[x] != x)
            x = parent[x] = parent[parent[x]];
        return x;
    };
    if (!f.is_point())
        for (const Cusp& c : f.pl.cusps)
            if (c.a >= 0 && c.a < n && c.b >= 0 && c.b < n)
                parent[find(c.a)] = find(c.b);
    std::map<int, int> ids;
    std::vector<int> out(n);
    for (int s = 0; s < n; ++s) {
        int r = find(s);
        auto it = ids.find(r);
        if (it == ids.end())
            it = ids.emplace(r, static_cast<int>(ids.size())).first;
        out[s] = it->second;
    }
    if (count)
        *count = static_cast<int>(ids.size());
    return out;
}

std::vector<int> betti(const Front& f)
{
    int c = 0;
    components(f, &c);
    if (f.is_point())
        return {c};
    return {c, c};
}

Front translate(const Front& f, const Q& c)
{
    Front g = f;
    if (g.is_point()) {
        for (Q& p : g.point.points)
            p += c;
    } else {
        for (Sheet& s : g.pl.sheets)
            for (Point2& p : s.pts)
                p.t += c;
    }
    return g;
}

Front negate(const Front& f)
{
    Front g = f;
    if (g.is_point()) {
        std::reverse(g.point.points.begin(), g.point.points.end());
        std::reverse(g.point.potentials.begin(), g.point.potentials.end());
        for (Q& p : g.point.points)
            p = -p;
        for (int& d : g.point.potentials)
            d = -d;
    } else {
        for (Sheet& s : g.pl.sheets)
            for (Point2& p : s.pts)
                p.t = -p.t;
        for (int& d : g.pl.potentials)
            d = -d;
    }
    return g;
}

Q eval_pl(const std::vector<Point2>& h, const Q& x)
{
    if (h.empty())
        return Q(0);
    if (x <= h.front().x)
        return h.front().t;
    if (x >= h.back().x)
        return h.back().t;
    Sheet s{h};
    return s.at(x);
}

Front perturb(const Front& f, const std::vector<Point2>& h)
{
    for (std::size_t k = 0; k + 1 < h.size(); ++k)
        if (!(h[k].x < h[k + 1].x))
            throw FrontError("perturbation breakpoints must have increasing x");
    Front g = f;
    if (g.is_point()) {
        for (Q& p : g.point.points)
            p += eval_pl(h, Q(0));
        return g;
    }
    for (Sheet& s : g.pl.sheets) {
        std::set<Q> xs;
        for (const Point2& p : s.pts)
            xs.insert(p.x);
        for (const Point2& p : h)
            if (s.x0() < p.x && p.x < s.x1())
                xs.insert(p.x);
        Sheet out;
        for (const Q& x : xs)
            out.pts.push_back(Point2{x, s.at(x) + eval_pl(h, x)});
        // Drop breakpoints that became collinear.
        Sheet pruned;
        for (std::size_t k = 0; k < out.pts.size(); ++k) {
            if (k > 0 && k + 1 < out.pts.size()) {
                const Point2& a = pruned.pts.back();
                const Point2& b = out.pts[k];
                const Point2& c = out.pts[k + 1];
                if ((b.t - a.t) * (c.x - b.x) == (c.t - b.t) * (b.x - a.x))
                    continue;
            }
            pruned.pts.push_back(out.pts[k]);
        }
        s = pruned;
    }
    return g;
}

}  // namespace lgs
