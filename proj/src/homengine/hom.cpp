#include "legsheaf/homengine.hpp"

#include "json.hpp"

#include <algorithm>
#include <set>

namespace lgs {

namespace {

void require_compact(const CellSheaf& s, const char* what)
{
    if (!s.compact_support())
        throw SheafError(std::string(what) + " needs compactly supported sheaves");
}

int dim_at(const DegreeDims& d, int i)
{
    auto it = d.find(i);
    return it == d.end() ? 0 : it->second;
}

std::set<int> degrees_of(const DegreeDims& a, const DegreeDims& b)
{
    std::set<int> out;
    for (auto [d, n] : a)
        out.insert(d);
    for (auto [d, n] : b)
        out.insert(d);
    return out;
}

nlohmann::json dims_json(const DegreeDims& d)
{
    nlohmann::json j = nlohmann::json::object();
    for (auto [deg, n] : trim(d))
        j[std::to_string(deg)] = n;
    return j;
}

}  // namespace

CochainComplex hom_plus(const CellSheaf& f, const CellSheaf& g)
{
    require_compact(f, "Hom+");
    require_compact(g, "Hom+");
    auto p = overlay_pair(f, g, Q(0));
    return rhom(p.f, p.g);
}

CochainComplex hom_minus(const CellSheaf& f, const CellSheaf& g)
{
    require_compact(f, "Hom-");
    require_compact(g, "Hom-");
    auto p = overlay_pair(f, g, Q(0));
    return global_sections(tensor(dual(p.f), p.g));
}

Q small_offset(const CellSheaf& f, const CellSheaf& g, const std::vector<Q>& critical)
{
    Q cmin(1);
    bool any = false;
    for (const Q& c : critical)
        if (c != 0) {
            Q a = abs(c);
            if (!any || a < cmin)
                cmin = a;
            any = true;
        }
    std::vector<Layer> base = shifted_layers(f.complex(), Q(0));
    for (int j = 1; j <= 64; ++j) {
        Q delta = cmin * Q(j, 2 * j + 1);
        std::vector<Layer> layers = base;
        for (const Layer& l : shifted_layers(g.complex(), -delta))
            layers.push_back(l);
        for (const Layer& l : shifted_layers(g.complex(), delta))
            layers.push_back(l);
        std::set<Point2> mk;
        for (const Point2& p : f.complex().markers)
            mk.insert(p);
        for (const Point2& p : shifted_markers(g.complex(), -delta))
            mk.insert(p);
        for (const Point2& p : shifted_markers(g.complex(), delta))
            mk.insert(p);
        try {
            arrange(layers, std::vector<Point2>(mk.begin(), mk.end()));
            return delta;
        } catch (const SheafError&) {
        }
    }
    throw SheafError("no generic offset below the smallest critical value");
}

SatoCone sabloff_cone(const CellSheaf& f, const CellSheaf& g, const std::vector<Q>& critical)
{
    require_compact(f, "the Sato cone");
    require_compact(g, "the Sato cone");
    SatoCone out;
    out.delta = small_offset(f, g, critical);
    const Q& d = out.delta;
    std::vector<Layer> layers = shifted_layers(f.complex(), Q(0));
    for (const Layer& l : shifted_layers(g.complex(), -d))
        layers.push_back(l);
    for (const Layer& l : shifted_layers(g.complex(), d))
        layers.push_back(l);
    std::set<Point2> mk(f.complex().markers.begin(), f.complex().markers.end());
    for (const Point2& p : shifted_markers(g.complex(), -d))
        mk.insert(p);
    for (const Point2& p : shifted_markers(g.complex(), d))
        mk.insert(p);
    ComplexPtr x = arrange(layers, std::vector<Point2>(mk.begin(), mk.end()));
    CellSheaf fx = pullback(f, x);
    CellSheaf ga = pullback_translated(g, -d, x);
    CellSheaf gb = pullback_translated(g, d, x);
    auto tau = propagation_map(g, -d, d, ga, gb);
    NerveComplex na = rhom_nerve(fx, ga), nb = rhom_nerve(fx, gb);
    ChainMap m = rhom_postcompose(na, nb, fx, ga, gb, tau);
    out.minus = trim(cohomology(na.complex));
    out.plus = trim(cohomology(nb.complex));
    out.map_ranks = trim(map_cohomology(m));
    out.complex = cone(m);
    out.cone = trim(cohomology(out.complex));
    return out;
}

DualityCheck duality_check(const CellSheaf& f, const CellSheaf& g, int n)
{
    DualityCheck r;
    r.n = n;
    r.plus = trim(cohomology(hom_plus(f, g)));
    r.minus = trim(cohomology(hom_minus(g, f)));
    std::set<int> degs;
    for (auto [d, k] : r.plus)
        degs.insert(d);
    for (auto [d, k] : r.minus)
        degs.insert(n + 1 - d);
    for (int i : degs) {
        int a = dim_at(r.plus, i), b = dim_at(r.minus, n + 1 - i);
        if (a != b) {
            r.ok = false;
            r.diagnostics.push_back("degree " + std::to_string(i) + ": dim H^" + std::to_string(i) + " Hom+ = " +
                                    std::to_string(a) + " but dim H^" + std::to_string(n + 1 - i) +
                                    " Hom- = " + std::to_string(b));
        }
    }
    return r;
}

DegreeDims hom_dims(const DegreeDims& a, const DegreeDims& b)
{
    DegreeDims out;
    for (auto [i, x] : a)
        for (auto [j, y] : b)
            if (x && y)
                out[j - i] += x * y;
    return trim(out);
}

DegreeDims convolve(const DegreeDims& a, const DegreeDims& b)
{
    DegreeDims out;
    for (auto [i, x] : a)
        for (auto [j, y] : b)
            if (x && y)
                out[i + j] += x * y;
    return trim(out);
}

DegreeDims expected_cone_dims(const std::vector<DegreeDims>& betti, const std::vector<DegreeDims>& mf,
                              const std::vector<DegreeDims>& mg)
{
    DegreeDims out;
    for (std::size_t c = 0; c < betti.size(); ++c)
        for (auto [d, n] : convolve(betti[c], hom_dims(mf.at(c), mg.at(c))))
            out[d] += n;
    return trim(out);
}

std::vector<DegreeDims> component_betti(const Front& f)
{
    int count = 0;
    components(f, &count);
    DegreeDims one = f.is_point() ? DegreeDims{{0, 1}} : DegreeDims{{0, 1}, {1, 1}};
    return std::vector<DegreeDims>(count, one);
}

HomReport hom_report(const CellSheaf& f, const Front& ff, const CellSheaf& g, const Front& fg)
{
    HomReport r;
    r.n = ff.dim();
    r.field = f.field();
    bool same = &f == &g;
    CochainComplex hp = hom_plus(f, g);
    CochainComplex hm = hom_minus(f, g);
    r.hom_plus = trim(cohomology(hp));
    r.hom_minus = trim(cohomology(hm));
    DegreeDims hm_gf = same ? r.hom_minus : trim(cohomology(hom_minus(g, f)));

    // Duality.
    r.duality_ok = true;
    std::set<int> degs;
    for (auto [d, k] : r.hom_plus)
        degs.insert(d);
    for (auto [d, k] : hm_gf)
        degs.insert(r.n + 1 - d);
    for (int i : degs)
        if (dim_at(r.hom_plus, i) != dim_at(hm_gf, r.n + 1 - i)) {
            r.duality_ok = false;
            r.diagnostics.push_back("duality fails in degree " + std::to_string(i));
        }

    // Cone and triangle.
    std::vector<Q> crit = chord_critical_values(ff, fg);
    SatoCone sc = sabloff_cone(f, g, crit);
    r.delta = sc.delta;
    r.sato_cone_dims = sc.cone;
    r.hom_minus_slice = sc.minus;
    r.minus_ok = sc.minus == r.hom_minus && sc.plus == r.hom_plus;
    if (!r.minus_ok)
        r.diagnostics.push_back("slices at -delta/+delta (" + format_dims(sc.minus) + " / " + format_dims(sc.plus) +
                                ") differ from Hom-/Hom+ (" + format_dims(r.hom_minus) + " / " +
                                format_dims(r.hom_plus) + ")");
    r.triangle_ok = true;
    std::set<int> all = degrees_of(sc.cone, sc.plus);
    for (int i : degrees_of(sc.minus, sc.map_ranks))
        all.insert(i);
    for (int i : all) {
        for (int k : {i, i - 1}) {
            int want = dim_at(sc.plus, k) - dim_at(sc.map_ranks, k) + dim_at(sc.minus, k + 1) -
                       dim_at(sc.map_ranks, k + 1);
            if (dim_at(sc.cone, k) != want) {
                r.triangle_ok = false;
                r.diagnostics.push_back("long exact sequence fails in degree " + std::to_string(k));
            }
        }
    }
    bool same_front = write_front_json(ff) == write_front_json(fg);
    if (same_front) {
        MicrolocalRank mf = microlocal_rank(f, ff), mg = microlocal_rank(g, fg);
        r.expected_cone_dims = expected_cone_dims(component_betti(ff), mf.per_component, mg.per_component);
        r.cone_ok = r.sato_cone_dims == r.expected_cone_dims;
        if (!r.cone_ok)
            r.diagnostics.push_back("cone dims " + format_dims(r.sato_cone_dims) + " expected " +
                                    format_dims(r.expected_cone_dims));
        int chi = euler_characteristic(r.hom_plus) - euler_characteristic(r.hom_minus);
        if (chi != euler_characteristic(r.expected_cone_dims)) {
            r.triangle_ok = false;
            r.diagnostics.push_back("Euler characteristic of Hom+ minus Hom- is " + std::to_string(chi));
        }
    } else {
        r.cone_ok = true;
        r.diagnostics.push_back("fronts differ; cone not compared with the Legendrian cohomology");
    }
    return r;
}

std::string hom_report_json(const HomReport& r)
{
    nlohmann::json j;
    j["n"] = r.n;
    j["field"] = r.field.name();
    j["hom_plus"] = dims_json(r.hom_plus);
    j["hom_minus"] = dims_json(r.hom_minus);
    j["hom_minus_slice"] = dims_json(r.hom_minus_slice);
    j["sato_cone"] = dims_json(r.sato_cone_dims);
    j["expected_cone"] = dims_json(r.expected_cone_dims);
    j["delta"] = format_rational(r.delta);
    j["duality_ok"] = r.duality_ok;
    j["triangle_ok"] = r.triangle_ok;
    j["cone_ok"] = r.cone_ok;
    j["minus_ok"] = r.minus_ok;
    j["diagnostics"] = r.diagnostics;
    return j.dump(2);
}

}  // namespace lgs
