#include "legsheaf/barcodes.hpp"

#include <algorithm>
#include <set>
#include <tuple>

namespace lgs {

bool operator==(const Bar& a, const Bar& b)
{
    return a.start == b.start && a.end == b.end && a.degree == b.degree && a.mult == b.mult;
}

namespace {

bool bar_key_less(const Bar& a, const Bar& b)
{
    if (a.degree != b.degree)
        return a.degree < b.degree;
    if (a.start != b.start)
        return a.start < b.start;
    return a.end < b.end;
}

bool same_interval(const Bar& a, const Bar& b)
{
    return a.degree == b.degree && a.start == b.start && a.end == b.end;
}

}  // namespace

Barcode::Barcode(std::vector<Bar> bars)
{
    for (const Bar& b : bars) {
        if (b.mult < 0)
            throw BarcodeError("negative multiplicity");
        if (b.mult == 0)
            continue;
        if (!(b.start < b.end))
            throw BarcodeError("bar (" + format_ext(b.start) + ", " + format_ext(b.end) + "] has start >= end");
        if (b.start.inf > 0 || b.end.inf < 0)
            throw BarcodeError("bar endpoints out of range");
        bars_.push_back(b);
    }
    std::sort(bars_.begin(), bars_.end(), bar_key_less);
    std::vector<Bar> merged;
    for (const Bar& b : bars_) {
        if (!merged.empty() && same_interval(merged.back(), b))
            merged.back().mult += b.mult;
        else
            merged.push_back(b);
    }
    bars_ = std::move(merged);
}

int Barcode::total_multiplicity() const
{
    int s = 0;
    for (const Bar& b : bars_)
        s += b.mult;
    return s;
}

std::vector<int> Barcode::degrees() const
{
    std::set<int> d;
    for (const Bar& b : bars_)
        d.insert(b.degree);
    return {d.begin(), d.end()};
}

int dimension_function(const Barcode& b, int degree, const Q& u)
{
    ExtQ x = ExtQ::of(u);
    int s = 0;
    for (const Bar& bar : b.bars())
        if (bar.degree == degree && bar.start < x && x <= bar.end)
            s += bar.mult;
    return s;
}

DegreeDims dimension_function(const Barcode& b, const Q& u)
{
    DegreeDims out;
    for (int d : b.degrees())
        if (int n = dimension_function(b, d, u))
            out[d] = n;
    return out;
}

Barcode shift(const Barcode& b, const Q& c)
{
    std::vector<Bar> bars = b.bars();
    for (Bar& bar : bars) {
        if (bar.start.finite())
            bar.start.val -= c;
        if (bar.end.finite())
            bar.end.val -= c;
    }
    return Barcode(std::move(bars));
}

int RankInvariant::rank(int i, int j, int degree) const
{
    if (i > j)
        std::swap(i, j);
    if (i < 0 || j >= size())
        return 0;
    auto it = ranks.find({i, j});
    if (it == ranks.end())
        return 0;
    auto d = it->second.find(degree);
    return d == it->second.end() ? 0 : d->second;
}

DegreeDims RankInvariant::stalk_dims(int i) const
{
    auto it = ranks.find({i, i});
    return it == ranks.end() ? DegreeDims{} : trim(it->second);
}

std::vector<Q> gap_samples(const std::vector<Q>& critical)
{
    std::vector<Q> c = critical;
    std::sort(c.begin(), c.end());
    c.erase(std::unique(c.begin(), c.end()), c.end());
    if (c.empty())
        return {Q(0)};
    std::vector<Q> s;
    s.push_back(c.front() - 1);
    for (std::size_t i = 0; i + 1 < c.size(); ++i)
        s.push_back((c[i] + c[i + 1]) / 2);
    s.push_back(c.back() + 1);
    return s;
}

RankInvariant rank_invariant_of(const Barcode& b, const std::vector<Q>& critical)
{
    RankInvariant ri;
    ri.critical = critical;
    std::sort(ri.critical.begin(), ri.critical.end());
    ri.critical.erase(std::unique(ri.critical.begin(), ri.critical.end()), ri.critical.end());
    ri.samples = gap_samples(ri.critical);
    int m = ri.size();
    for (int i = 0; i < m; ++i)
        for (int j = i; j < m; ++j) {
            DegreeDims r;
            ExtQ lo = ExtQ::of(ri.samples[i]), hi = ExtQ::of(ri.samples[j]);
            for (const Bar& bar : b.bars())
                if (bar.start < lo && hi <= bar.end)
                    r[bar.degree] += bar.mult;
            if (!r.empty())
                ri.ranks[{i, j}] = r;
        }
    return ri;
}

Barcode barcode_from_rank_invariant(const RankInvariant& ri)
{
    int m = ri.size();
    if (static_cast<int>(ri.critical.size()) + 1 != m && !(ri.critical.empty() && m == 1))
        throw BarcodeError("samples do not interleave critical values");
    for (std::size_t k = 0; k < ri.critical.size(); ++k)
        if (!(ri.samples[k] < ri.critical[k] && ri.critical[k] < ri.samples[k + 1]))
            throw BarcodeError("samples do not interleave critical values");
    std::set<int> degrees;
    for (const auto& [key, dims] : ri.ranks) {
        if (key.first > key.second || key.first < 0 || key.second >= m)
            throw BarcodeError("rank entry outside the sample range");
        for (auto [d, n] : dims)
            if (n)
                degrees.insert(d);
    }
    // The structure map between samples i and j factors through every sample in between.
    for (int d : degrees)
        for (int i = 0; i < m; ++i)
            for (int j = i + 1; j < m; ++j) {
                int r = ri.rank(i, j, d);
                if (r > ri.rank(i, j - 1, d) || r > ri.rank(i + 1, j, d))
                    throw BarcodeError("inconsistent rank invariant: degree " + std::to_string(d) + ", samples (" +
                                       std::to_string(i) + ", " + std::to_string(j) + ") rank exceeds a factor");
            }
    auto edge = [&](int k) { return k < 0 || k >= m - 1 ? ExtQ{k < 0 ? -1 : 1, Q(0)} : ExtQ::of(ri.critical[k]); };
    std::vector<Bar> bars;
    for (int d : degrees)
        for (int i = 0; i < m; ++i)
            for (int j = i; j < m; ++j) {
                int mult = ri.rank(i, j, d) - ri.rank(i - 1, j, d) - ri.rank(i, j + 1, d) + ri.rank(i - 1, j + 1, d);
                if (mult < 0)
                    throw BarcodeError("inconsistent rank invariant: degree " + std::to_string(d) + ", samples (" +
                                       std::to_string(i) + ", " + std::to_string(j) +
                                       ") gives negative multiplicity " + std::to_string(mult));
                if (mult > 0)
                    bars.push_back(Bar{edge(i - 1), edge(j), d, mult});
            }
    Barcode out(std::move(bars));
    RankInvariant back = rank_invariant_of(out, ri.critical);
    for (int d : degrees)
        for (int i = 0; i < m; ++i)
            for (int j = i; j < m; ++j)
                if (back.rank(i, j, d) != ri.rank(i, j, d))
                    throw BarcodeError("inconsistent rank invariant: degree " + std::to_string(d) + ", samples (" +
                                       std::to_string(i) + ", " + std::to_string(j) + ") not reproduced");
    return out;
}

}  // namespace lgs
