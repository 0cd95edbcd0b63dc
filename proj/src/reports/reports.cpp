#include "legsheaf/reports.hpp"

#include "legsheaf/homengine.hpp"
#include "legsheaf/persistengine.hpp"

#include "json.hpp"

#include <algorithm>
#include <sstream>

namespace lgs {

namespace {

struct Common {
    std::vector<Hypothesis> hyps;
    MicrolocalRank mr;
    bool usable = false;  // sheaf checks ran
};

Common common_hypotheses(const Front& f, const CellSheaf& s, bool need_pure)
{
    Common c;
    ValidationReport v = validate(f);
    c.hyps.push_back({"front valid", v.ok(), v.ok() ? "" : v.summary()});
    if (!v.ok())
        return c;
    SheafReport sr = check_ss(s, f);
    c.hyps.push_back({"local conditions", sr.local_ok(), sr.local_ok() ? "" : sr.summary()});
    bool compact = s.compact_support();
    c.hyps.push_back({"compact support", compact, compact ? "" : "an unbounded cell has a non-acyclic stalk"});
    try {
        c.mr = microlocal_rank(s, f);
        c.usable = true;
    } catch (const std::exception& e) {
        c.hyps.push_back({"microlocal rank", false, e.what()});
        return c;
    }
    c.hyps.push_back({"nonzero microlocal rank", c.mr.rank >= 1, "rank " + std::to_string(c.mr.rank)});
    if (need_pure)
        c.hyps.push_back({"pure", c.mr.pure, "microstalk " + format_dims(c.mr.dims)});
    return c;
}

void finish(TheoremReport& r)
{
    r.verdict = r.recompute();
}

std::string ext(const ExtQ& q) { return format_ext(q); }

Q ratio(long a, long b)
{
    Q q(a, b);
    q.canonicalize();
    return q;
}

}  // namespace

std::string verdict_name(Verdict v)
{
    switch (v) {
    case Verdict::Pass:
        return "pass";
    case Verdict::Fail:
        return "fail";
    default:
        return "inapplicable";
    }
}

bool TheoremReport::hypotheses_ok() const
{
    return std::all_of(hypotheses.begin(), hypotheses.end(), [](const Hypothesis& h) { return h.ok; });
}

Verdict TheoremReport::recompute() const
{
    if (!hypotheses_ok())
        return Verdict::Inapplicable;
    for (const auto& q : inequalities)
        if (!q.holds())
            return Verdict::Fail;
    return Verdict::Pass;
}

DegreeDims weighted_chord_counts(const Front& f, const CellSheaf& s)
{
    MicrolocalRank mr = microlocal_rank(s, f);
    std::vector<int> comp = components(f);
    DegreeDims w;
    for (const Chord& c : enumerate_chords(f))
        for (auto [k, m] : hom_dims(mr.per_component.at(comp[c.top]), mr.per_component.at(comp[c.bottom])))
            w[c.degree + k] += m;
    return trim(w);
}

TheoremReport betti_bound(const Front& f, const CellSheaf& s)
{
    TheoremReport r;
    r.theorem = "betti bound";
    Common c = common_hypotheses(f, s, true);
    r.hypotheses = c.hyps;
    r.diagnostics.push_back("field " + s.field().name());
    if (!r.hypotheses_ok()) {
        finish(r);
        return r;
    }
    int n = f.dim();
    auto chords = enumerate_chords(f);
    auto counts = chord_counts(chords);
    std::vector<int> b = betti(f);
    auto q = [&](int i) {
        auto it = counts.find(i);
        return it == counts.end() ? 0 : it->second;
    };
    int total = 0;
    for (int i = 0; i <= n; ++i) {
        int bi = i < static_cast<int>(b.size()) ? b[i] : 0;
        total += bi;
        r.inequalities.push_back({"|Q_" + std::to_string(i) + "| + |Q_" + std::to_string(n - i) + "| >= b_" +
                                      std::to_string(i),
                                  Q(q(i) + q(n - i)), Q(bi)});
    }
    r.inequalities.push_back({"|Q| >= (1/2) sum b_i", Q(static_cast<long>(chords.size())), ratio(total, 2)});
    r.values["chords"] = std::to_string(chords.size());
    finish(r);
    return r;
}

TheoremReport morse_inequalities(const Front& f, const CellSheaf& s)
{
    TheoremReport r;
    r.theorem = "morse inequalities";
    Common c = common_hypotheses(f, s, false);
    r.hypotheses = c.hyps;
    r.diagnostics.push_back("field " + s.field().name());
    if (!r.hypotheses_ok()) {
        finish(r);
        return r;
    }
    DegreeDims w = weighted_chord_counts(f, s);
    DegreeDims h = trim(cohomology(hom_plus(s, s)));
    r.values["weights"] = format_dims(w);
    r.values["hom_plus"] = format_dims(h);
    r.values["mode"] = c.mr.pure ? "pure" : "mixed";
    if (w.empty() && h.empty()) {
        finish(r);
        return r;
    }
    int lo = INT32_MAX, hi = INT32_MIN;
    for (const auto* d : {&w, &h})
        for (auto [k, m] : *d) {
            lo = std::min(lo, k);
            hi = std::max(hi, k);
        }
    auto at = [](const DegreeDims& d, int k) {
        auto it = d.find(k);
        return it == d.end() ? 0 : it->second;
    };
    for (int k = lo; k <= hi; ++k) {
        long lw = 0, lh = 0;
        for (int j = lo; j <= k; ++j) {
            int sg = ((k - j) % 2 == 0) ? 1 : -1;
            lw += sg * at(w, j);
            lh += sg * at(h, j);
        }
        r.inequalities.push_back({"alternating sum up to degree " + std::to_string(k), Q(lw), Q(lh)});
    }
    for (int k = lo; k <= hi; ++k)
        r.inequalities.push_back({"degree " + std::to_string(k), Q(at(w, k)), Q(at(h, k))});
    finish(r);
    return r;
}

TheoremReport displacement_bound(const Front& f, const CellSheaf& s, const Front& perturbed, const Q& eps)
{
    TheoremReport r;
    r.theorem = "displacement bound";
    Common c = common_hypotheses(f, s, true);
    r.hypotheses = c.hyps;
    r.diagnostics.push_back("field " + s.field().name());
    r.values["eps"] = format_rational(eps);
    ValidationReport pv = validate(perturbed);
    r.hypotheses.push_back({"perturbed front valid", pv.ok(), pv.ok() ? "" : pv.summary()});
    try {
        Q h = vertical_distance(f, perturbed);
        r.hypotheses.push_back({"height change at most eps/2", h <= eps / 2, "height change " + format_rational(h)});
    } catch (const FrontError& e) {
        r.hypotheses.push_back({"height change at most eps/2", false, e.what()});
    }
    std::vector<MixedChord> mixed;
    try {
        mixed = mixed_chords(f, perturbed);
        r.hypotheses.push_back({"transverse pair", true, ""});
    } catch (const FrontError& e) {
        r.hypotheses.push_back({"transverse pair", false, e.what()});
    }
    int n = f.dim();
    auto chords = enumerate_chords(f);
    auto cl = min_chord_lengths(n, chords);
    std::vector<int> order;
    for (int i = 0; i <= n; ++i)
        order.push_back(i);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return cl.at(b) < cl.at(a); });
    int k = -1;
    for (int i = 0; i <= n; ++i)
        if (ExtQ::of(eps) < cl.at(order[i]))
            k = i;
    std::ostringstream os;
    for (int i = 0; i <= n; ++i)
        os << (i ? " >= " : "") << "c_" << order[i] << " = " << ext(cl.at(order[i]));
    r.values["chord thresholds"] = os.str();
    r.hypotheses.push_back({"eps below some threshold", k >= 0,
                            k >= 0 ? "k = " + std::to_string(k) : "vacuous: eps is not below any threshold"});
    if (!r.hypotheses_ok()) {
        finish(r);
        return r;
    }
    std::vector<int> b = betti(f);
    int bound = 0;
    for (int i = 0; i <= k; ++i)
        bound += order[i] < static_cast<int>(b.size()) ? b[order[i]] : 0;
    r.values["k"] = std::to_string(k);
    r.values["mixed chords"] = std::to_string(mixed.size());
    r.inequalities.push_back({"mixed chords >= sum of b_{j_i}, i <= k", Q(static_cast<long>(mixed.size())), Q(bound)});

    // Bars at u = 0 longer than eps survive the perturbation.
    Barcode bc = barcode(PersistenceProblem::self(s, f));
    int surviving = 0;
    for (const Bar& bar : bc.bars()) {
        bool at0 = (bar.start.finite() && bar.start.val == 0) || (bar.end.finite() && bar.end.val == 0);
        if (!at0 || !bar.start.finite() || !bar.end.finite())
            continue;
        if (bar.end.val - bar.start.val > eps)
            surviving += bar.mult;
    }
    int r2 = c.mr.rank * c.mr.rank;
    r.values["surviving bars"] = std::to_string(surviving);
    r.inequalities.push_back({"mixed chords >= surviving bars / r^2", Q(static_cast<long>(mixed.size())),
                              ratio(surviving, r2)});
    finish(r);
    return r;
}

TheoremReport support_diagnostics(const Front& f, const CellSheaf& s)
{
    TheoremReport r;
    r.theorem = "support";
    bool compact = s.compact_support();
    bool vanish = true;
    const CellComplex& cx = s.complex();
    for (int i = 0; i < cx.size(); ++i)
        if (!cx.cell(i).bounded && !s.stalk(i).is_zero_space())
            vanish = false;
    r.hypotheses.push_back({"compact support", compact, ""});
    r.hypotheses.push_back({"unbounded stalks vanish", vanish, ""});
    try {
        MicrolocalRank mr = microlocal_rank(s, f);
        r.hypotheses.push_back({"nonzero microlocal rank", mr.rank >= 1, "rank " + std::to_string(mr.rank)});
    } catch (const std::exception& e) {
        r.hypotheses.push_back({"nonzero microlocal rank", false, e.what()});
    }
    r.values["compact"] = compact ? "true" : "false";
    r.values["applicable"] = r.hypotheses_ok() ? "true" : "false";
    if (!compact)
        r.diagnostics.push_back("non-compact support: the chord bounds do not apply");
    finish(r);
    return r;
}

std::string report_json(const std::vector<TheoremReport>& reports)
{
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : reports) {
        nlohmann::json j;
        j["theorem"] = r.theorem;
        j["verdict"] = verdict_name(r.verdict);
        j["hypotheses"] = nlohmann::json::array();
        for (const auto& h : r.hypotheses)
            j["hypotheses"].push_back({{"name", h.name}, {"ok", h.ok}, {"detail", h.detail}});
        j["inequalities"] = nlohmann::json::array();
        for (const auto& q : r.inequalities)
            j["inequalities"].push_back({{"label", q.label},
                                         {"lhs", format_rational(q.lhs)},
                                         {"rhs", format_rational(q.rhs)},
                                         {"holds", q.holds()}});
        j["values"] = r.values;
        j["diagnostics"] = r.diagnostics;
        arr.push_back(j);
    }
    return arr.dump(2);
}

std::string report_table(const std::vector<TheoremReport>& reports)
{
    std::ostringstream os;
    for (const auto& r : reports) {
        os << r.theorem << ": " << verdict_name(r.verdict) << "\n";
        for (const auto& h : r.hypotheses)
            os << "  [" << (h.ok ? "ok" : "no") << "] " << h.name << (h.detail.empty() ? "" : " (" + h.detail + ")")
               << "\n";
        for (const auto& q : r.inequalities)
            os << "  " << (q.holds() ? "holds" : "FAILS") << "  " << q.label << ": " << format_rational(q.lhs)
               << " >= " << format_rational(q.rhs) << "\n";
        for (const auto& [k, v] : r.values)
            os << "  " << k << ": " << v << "\n";
        for (const auto& d : r.diagnostics)
            os << "  " << d << "\n";
    }
    return os.str();
}

}  // namespace lgs
