#include "legsheaf/fronts.hpp"

#include <algorithm>
#include <set>

namespace lgs {

namespace {

std::vector<Q> merged_x(const Sheet& a, const Sheet& b, const Q& lo, const Q& hi)
{
    std::set<Q> xs{lo, hi};
    for (const Sheet* s : {&a, &b})
        for (const Point2& p : s->pts)
            if (lo < p.x && p.x < hi)
                xs.insert(p.x);
    return {xs.begin(), xs.end()};
}

// Interior breakpoints of the common domain where the slope difference a - b changes sign.
// Returns (x, sign of the difference on the left).
std::vector<std::pair<Q, int>> sign_changes(const Sheet& a, const Sheet& b)
{
    std::vector<std::pair<Q, int>> out;
    Q lo = std::max(a.x0(), b.x0()), hi = std::min(a.x1(), b.x1());
    if (!(lo < hi))
        return out;
    auto x = merged_x(a, b, lo, hi);
    for (std::size_t k = 1; k + 1 < x.size(); ++k) {
        int l = sgn(a.slope_left(x[k]) - b.slope_left(x[k]));
        int r = sgn(a.slope_right(x[k]) - b.slope_right(x[k]));
        if (l * r < 0)
            out.emplace_back(x[k], l);
    }
    return out;
}

Chord make_chord(const Q& x, int s_lo, const Q& t_lo, int s_hi, const Q& t_hi, int ind)
{
    Chord c;
    c.x = x;
    c.bottom = s_lo;
    c.top = s_hi;
    c.t_bottom = t_lo;
    c.t_top = t_hi;
    c.length = t_hi - t_lo;
    c.ind = ind;
    return c;
}

// Slope range of sheet s at x (closed), allowing x at a domain end.
std::pair<Q, Q> slope_range(const Sheet& s, const Q& x)
{
    if (x == s.x0())
        return {s.slope_right(x), s.slope_right(x)};
    if (x == s.x1())
        return {s.slope_left(x), s.slope_left(x)};
    Q l = s.slope_left(x), r = s.slope_right(x);
    return l < r ? std::make_pair(l, r) : std::make_pair(r, l);
}

}  // namespace

std::vector<Chord> enumerate_chords(const Front& f)
{
    require_valid(f);
    std::vector<Chord> out;
    if (f.is_point()) {
        const auto& p = f.point.points;
        for (std::size_t i = 0; i < p.size(); ++i)
            for (std::size_t j = i + 1; j < p.size(); ++j)
                out.push_back(make_chord(Q(0), static_cast<int>(i), p[i], static_cast<int>(j), p[j], 0));
    } else {
        const auto& sh = f.pl.sheets;
        for (std::size_t i = 0; i < sh.size(); ++i)
            for (std::size_t j = i + 1; j < sh.size(); ++j)
                for (auto [x, left_sign] : sign_changes(sh[i], sh[j])) {
                    Q ti = sh[i].at(x), tj = sh[j].at(x);
                    bool i_low = ti < tj;
                    int lo = i_low ? static_cast<int>(i) : static_cast<int>(j);
                    int hi = i_low ? static_cast<int>(j) : static_cast<int>(i);
                    // Gap top - bottom has a local maximum when its slope goes from + to -.
                    int gap_left = i_low ? -left_sign : left_sign;
                    out.push_back(make_chord(x, lo, i_low ? ti : tj, hi, i_low ? tj : ti, gap_left > 0 ? 1 : 0));
                }
    }
    for (Chord& c : out)
        c.degree = chord_degree(f, c);
    std::sort(out.begin(), out.end(), [](const Chord& a, const Chord& b) {
        if (a.x != b.x)
            return a.x < b.x;
        return a.t_bottom < b.t_bottom;
    });
    return out;
}

int chord_degree(const Front& f, const Chord& c)
{
    int n = f.dim();
    int ind = f.is_point() ? 0 : c.ind;
    return n - (f.potential(c.bottom) - f.potential(c.top) + ind - 1);
}

std::map<int, ExtQ> min_chord_lengths(int n, const std::vector<Chord>& chords)
{
    std::map<int, ExtQ> out;
    for (int i = 0; i <= n; ++i)
        out[i] = ExtQ::pos_inf();
    for (const Chord& c : chords) {
        out.emplace(c.degree, ExtQ::pos_inf());
        out.emplace(n - c.degree, ExtQ::pos_inf());
    }
    for (auto& [i, v] : out)
        for (const Chord& c : chords)
            if ((c.degree == i || c.degree == n - i) && ExtQ::of(c.length) < v)
                v = ExtQ::of(c.length);
    return out;
}

std::map<int, int> chord_counts(const std::vector<Chord>& chords)
{
    std::map<int, int> out;
    for (const Chord& c : chords)
        out[c.degree]++;
    return out;
}

std::vector<MixedChord> mixed_chords(const Front& a, const Front& b)
{
    if (a.is_point() != b.is_point())
        throw FrontError("mixed chords need fronts of the same kind");
    std::vector<MixedChord> out;
    if (a.is_point()) {
        for (std::size_t i = 0; i < a.point.points.size(); ++i)
            for (std::size_t j = 0; j < b.point.points.size(); ++j) {
                Q d = a.point.points[i] - b.point.points[j];
                if (d == 0)
                    throw FrontError("non-transverse pair: shared point " + format_rational(a.point.points[i]));
                out.push_back(MixedChord{Q(0), abs(d), static_cast<int>(i), static_cast<int>(j), d > 0});
            }
        return out;
    }
    auto report = overlay_report(a, b);
    for (const Violation& v : report.violations)
        if (v.kind == "parallel segments" || v.kind == "non-generic coincidence")
            throw FrontError("non-transverse pair: " + v.kind + ", " + v.where);
    const auto& sa = a.pl.sheets;
    const auto& sb = b.pl.sheets;
    for (std::size_t i = 0; i < sa.size(); ++i)
        for (std::size_t j = 0; j < sb.size(); ++j) {
            Q lo = std::max(sa[i].x0(), sb[j].x0()), hi = std::min(sa[i].x1(), sb[j].x1());
            if (!(lo < hi))
                continue;
            auto x = merged_x(sa[i], sb[j], lo, hi);
            for (std::size_t k = 0; k + 1 < x.size(); ++k)
                if (sa[i].slope_right(x[k]) == sb[j].slope_right(x[k]))
                    throw FrontError("non-transverse pair: parallel segments on [" + format_rational(x[k]) + ", " +
                                     format_rational(x[k + 1]) + "]");
            for (auto [xc, ls] : sign_changes(sa[i], sb[j])) {
                (void)ls;
                Q d = sa[i].at(xc) - sb[j].at(xc);
                if (d == 0)
                    throw FrontError("non-transverse pair: fronts meet at a slope match x = " + format_rational(xc));
                out.push_back(MixedChord{xc, abs(d), static_cast<int>(i), static_cast<int>(j), d > 0});
            }
        }
    // Cusps whose slope range contains the other front's slope are degenerate for counting.
    for (int side = 0; side < 2; ++side) {
        const Front& c = side == 0 ? a : b;
        const Front& o = side == 0 ? b : a;
        for (const Cusp& cu : c.pl.cusps) {
            auto [s0, s1] = cusp_slopes(c.pl, cu);
            for (const Sheet& s : o.pl.sheets) {
                if (!s.covers(cu.x))
                    continue;
                auto [r0, r1] = slope_range(s, cu.x);
                if (r0 <= s1 && s0 <= r1)
                    throw FrontError("non-transverse pair: a sheet matches a cusp slope at x = " + format_rational(cu.x));
            }
        }
    }
    return out;
}

namespace {

struct Vertex {
    Q x, t;
};

std::vector<Vertex> vertices(const Front& f)
{
    std::vector<Vertex> v;
    for (const Sheet& s : f.pl.sheets)
        for (const Point2& p : s.pts)
            v.push_back({p.x, p.t});
    for (const Crossing& c : crossings(f.pl))
        v.push_back({c.x, c.t});
    return v;
}

std::vector<Q> sorted_unique(std::set<Q> s) { return {s.begin(), s.end()}; }

}  // namespace

std::vector<Q> overlay_events(const Front& a, const Front& b)
{
    std::set<Q> out;
    if (a.is_point() || b.is_point()) {
        if (!(a.is_point() && b.is_point()))
            throw FrontError("cannot overlay a point front with a PL front");
        for (const Q& p : a.point.points)
            for (const Q& r : b.point.points)
                out.insert(p - r);
        return sorted_unique(out);
    }
    for (const Vertex& v : vertices(a))
        for (const Sheet& g : b.pl.sheets)
            if (g.covers(v.x))
                out.insert(v.t - g.at(v.x));
    for (const Vertex& w : vertices(b))
        for (const Sheet& f : a.pl.sheets)
            if (f.covers(w.x))
                out.insert(f.at(w.x) - w.t);
    return sorted_unique(out);
}

std::vector<Q> chord_critical_values(const Front& a, const Front& b)
{
    std::set<Q> out;
    if (a.is_point() || b.is_point()) {
        if (!(a.is_point() && b.is_point()))
            throw FrontError("cannot compare a point front with a PL front");
        for (const Q& p : a.point.points)
            for (const Q& r : b.point.points)
                out.insert(p - r);
        return sorted_unique(out);
    }
    for (const Sheet& f : a.pl.sheets)
        for (const Sheet& g : b.pl.sheets) {
            Q lo = std::max(f.x0(), g.x0()), hi = std::min(f.x1(), g.x1());
            if (!(lo < hi))
                continue;
            auto x = merged_x(f, g, lo, hi);
            for (std::size_t k = 0; k + 1 < x.size(); ++k)
                if (f.slope_right(x[k]) == g.slope_right(x[k]))
                    out.insert(f.at(x[k]) - g.at(x[k]));
            for (auto [xc, ls] : sign_changes(f, g)) {
                (void)ls;
                out.insert(f.at(xc) - g.at(xc));
            }
        }
    // Cusps against sheets of the other front with overlapping slope ranges.
    for (int side = 0; side < 2; ++side) {
        const Front& c = side == 0 ? b : a;
        const Front& o = side == 0 ? a : b;
        for (const Cusp& cu : c.pl.cusps) {
            auto [s0, s1] = cusp_slopes(c.pl, cu);
            Q tc = cusp_point(c.pl, cu).t;
            for (const Sheet& s : o.pl.sheets) {
                if (!s.covers(cu.x))
                    continue;
                auto [r0, r1] = slope_range(s, cu.x);
                if (r0 <= s1 && s0 <= r1)
                    out.insert(side == 0 ? s.at(cu.x) - tc : tc - s.at(cu.x));
            }
        }
    }
    return sorted_unique(out);
}

ValidationReport overlay_report(const Front& a, const Front& b)
{
    ValidationReport r;
    if (a.is_point() || b.is_point()) {
        if (!(a.is_point() && b.is_point())) {
            r.violations.push_back({"kind mismatch", "point and PL fronts cannot be overlaid"});
            return r;
        }
        for (const Q& p : a.point.points)
            for (const Q& q : b.point.points)
                if (p == q)
                    r.violations.push_back({"non-generic coincidence", "shared point " + format_rational(p)});
        return r;
    }
    for (int side = 0; side < 2; ++side) {
        const Front& v = side == 0 ? a : b;
        const Front& o = side == 0 ? b : a;
        for (const Vertex& w : vertices(v))
            for (std::size_t k = 0; k < o.pl.sheets.size(); ++k) {
                const Sheet& s = o.pl.sheets[k];
                if (s.covers(w.x) && s.at(w.x) == w.t)
                    r.violations.push_back({"non-generic coincidence", std::string(side == 0 ? "first" : "second") +
                                                                          " front vertex (" + format_rational(w.x) + ", " +
                                                                          format_rational(w.t) + ") lies on sheet " +
                                                                          std::to_string(k) + " of the other"});
            }
    }
    return r;
}

}  // namespace lgs
