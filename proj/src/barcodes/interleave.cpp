#include "legsheaf/barcodes.hpp"

#include <algorithm>
#include <cstdint>
#include <set>

namespace lgs {

namespace {

// value + e * eta for an infinitesimal eta > 0, or +-inf.
struct Lin {
    int inf = 0;
    Q v, e;
};

bool operator<(const Lin& a, const Lin& b)
{
    if (a.inf != b.inf)
        return a.inf < b.inf;
    if (a.inf != 0)
        return false;
    if (a.v != b.v)
        return a.v < b.v;
    return a.e < b.e;
}
bool operator<=(const Lin& a, const Lin& b) { return !(b < a); }

Lin from_ext(const ExtQ& x) { return Lin{x.inf, x.val, Q(0)}; }

Lin minus(const Lin& a, const Lin& s)
{
    if (a.inf)
        return a;
    return Lin{0, a.v - s.v, a.e - s.e};
}

struct Iv {
    Lin a, b;
};

Iv translate(const Iv& x, const Lin& s) { return Iv{minus(x.a, s), minus(x.b, s)}; }

// Nonzero degree-0 map k_{(a,b]} -> k_{(c,d]} exists iff c <= a < d <= b.
bool hom(const Iv& from, const Iv& to)
{
    return to.a <= from.a && from.a < to.b && to.b <= from.b;
}

Lin add(const Lin& a, const Lin& b) { return Lin{0, a.v + b.v, a.e + b.e}; }

struct Problem {
    std::vector<Iv> x, y;  // x: surviving bars only
    std::vector<std::vector<char>> phi_ok;  // [j][k]
    std::vector<std::vector<char>> psi_ok;  // [i][j]
    std::vector<std::vector<char>> need;    // [i][k]
};

Problem setup(const std::vector<Iv>& xs, const std::vector<Iv>& ys, const Lin& a, const Lin& b)
{
    Problem p;
    Lin ab = add(a, b);
    for (const Iv& x : xs)
        if (x.a < minus(x.b, ab))
            p.x.push_back(x);
    std::vector<Iv> ty, tx;
    for (const Iv& y : ys)
        ty.push_back(translate(y, a));
    for (const Iv& x : p.x)
        tx.push_back(translate(x, ab));
    std::size_t nx = p.x.size(), ny = ys.size();
    p.phi_ok.assign(ny, std::vector<char>(nx, 0));
    p.psi_ok.assign(nx, std::vector<char>(ny, 0));
    p.need.assign(nx, std::vector<char>(nx, 0));
    for (std::size_t j = 0; j < ny; ++j)
        for (std::size_t k = 0; k < nx; ++k)
            p.phi_ok[j][k] = hom(p.x[k], ty[j]);
    for (std::size_t i = 0; i < nx; ++i)
        for (std::size_t j = 0; j < ny; ++j)
            p.psi_ok[i][j] = hom(ty[j], tx[i]);
    for (std::size_t i = 0; i < nx; ++i)
        for (std::size_t k = 0; k < nx; ++k)
            p.need[i][k] = hom(p.x[k], tx[i]);
    // Y bars that cannot carry any composite are irrelevant.
    std::vector<std::size_t> keep;
    for (std::size_t j = 0; j < ny; ++j) {
        bool in = false, out = false;
        for (std::size_t k = 0; k < nx; ++k)
            in = in || p.phi_ok[j][k];
        for (std::size_t i = 0; i < nx; ++i)
            out = out || p.psi_ok[i][j];
        if (in && out)
            keep.push_back(j);
    }
    Problem q;
    q.x = p.x;
    q.need = p.need;
    for (std::size_t j : keep) {
        q.y.push_back(ys[j]);
        q.phi_ok.push_back(p.phi_ok[j]);
    }
    q.psi_ok.assign(nx, {});
    for (std::size_t i = 0; i < nx; ++i)
        for (std::size_t j : keep)
            q.psi_ok[i].push_back(p.psi_ok[i][j]);
    return q;
}

bool matching(const Problem& p)
{
    std::size_t nx = p.x.size(), ny = p.y.size();
    std::vector<int> owner(ny, -1);
    for (std::size_t i = 0; i < nx; ++i) {
        std::vector<char> seen(ny, 0);
        auto augment = [&](auto&& self, std::size_t u) -> bool {
            for (std::size_t j = 0; j < ny; ++j) {
                if (!(p.phi_ok[j][u] && p.psi_ok[u][j]) || seen[j])
                    continue;
                seen[j] = 1;
                if (owner[j] < 0 || self(self, static_cast<std::size_t>(owner[j]))) {
                    owner[j] = static_cast<int>(u);
                    return true;
                }
            }
            return false;
        };
        if (!augment(augment, i))
            return false;
    }
    return true;
}

// Solve v * A = t over F_2; A has rows indexed by unknowns (<= 64), columns by equations.
bool solvable_f2(const std::vector<std::uint64_t>& eq_rows, const std::vector<char>& rhs)
{
    // eq_rows[e]: bitmask of unknowns appearing in equation e.
    std::vector<std::uint64_t> rows = eq_rows;
    std::vector<char> r = rhs;
    std::size_t n = rows.size(), rank = 0;
    for (int bit = 0; bit < 64 && rank < n; ++bit) {
        std::uint64_t m = std::uint64_t(1) << bit;
        std::size_t piv = n;
        for (std::size_t e = rank; e < n; ++e)
            if (rows[e] & m) {
                piv = e;
                break;
            }
        if (piv == n)
            continue;
        std::swap(rows[piv], rows[rank]);
        std::swap(r[piv], r[rank]);
        for (std::size_t e = 0; e < n; ++e)
            if (e != rank && (rows[e] & m)) {
                rows[e] ^= rows[rank];
                r[e] ^= r[rank];
            }
        ++rank;
    }
    for (std::size_t e = rank; e < n; ++e)
        if (r[e])
            return false;
    return true;
}

bool exhaustive(const Problem& p)
{
    std::size_t nx = p.x.size(), ny = p.y.size();
    std::vector<std::pair<std::size_t, std::size_t>> slots;
    for (std::size_t j = 0; j < ny; ++j)
        for (std::size_t k = 0; k < nx; ++k)
            if (p.phi_ok[j][k])
                slots.emplace_back(j, k);
    std::uint64_t total = std::uint64_t(1) << slots.size();
    std::vector<std::vector<char>> phi(ny, std::vector<char>(nx, 0));
    for (std::uint64_t mask = 0; mask < total; ++mask) {
        for (std::size_t s = 0; s < slots.size(); ++s)
            phi[slots[s].first][slots[s].second] = (mask >> s) & 1;
        bool ok = true;
        for (std::size_t i = 0; i < nx && ok; ++i) {
            // Unknowns: psi[i][j] for allowed j. Equations: k with need[i][k].
            std::vector<std::uint64_t> rows;
            std::vector<char> rhs;
            for (std::size_t k = 0; k < nx; ++k) {
                if (!p.need[i][k])
                    continue;
                std::uint64_t row = 0;
                for (std::size_t j = 0; j < ny; ++j)
                    if (p.psi_ok[i][j] && phi[j][k])
                        row |= std::uint64_t(1) << j;
                rows.push_back(row);
                rhs.push_back(i == k ? 1 : 0);
            }
            ok = solvable_f2(rows, rhs);
        }
        if (ok)
            return true;
    }
    return false;
}

constexpr std::size_t kMaxExhaustiveBars = 6;
constexpr std::size_t kMaxExhaustiveSlots = 16;

bool use_exhaustive(const Problem& p)
{
    if (p.x.size() > kMaxExhaustiveBars || p.y.size() > kMaxExhaustiveBars)
        return false;
    std::size_t slots = 0;
    for (const auto& row : p.phi_ok)
        for (char c : row)
            slots += c ? 1 : 0;
    return slots <= kMaxExhaustiveSlots;
}

std::vector<Iv> expand(const std::vector<Bar>& bars)
{
    std::vector<Iv> out;
    for (const Bar& b : bars)
        for (int k = 0; k < b.mult; ++k)
            out.push_back(Iv{from_ext(b.start), from_ext(b.end)});
    return out;
}

std::vector<Bar> in_degree(const Barcode& b, int d)
{
    std::vector<Bar> out;
    for (const Bar& bar : b.bars())
        if (bar.degree == d)
            out.push_back(bar);
    return out;
}

// Returns feasibility; sets used_matching when the heuristic-free matching test decided.
bool factor(const std::vector<Iv>& xs, const std::vector<Iv>& ys, const Lin& a, const Lin& b, bool& used_matching)
{
    Problem p = setup(xs, ys, a, b);
    if (p.x.empty())
        return true;
    for (std::size_t i = 0; i < p.x.size(); ++i) {
        bool any = false;
        for (std::size_t j = 0; j < p.y.size(); ++j)
            any = any || (p.phi_ok[j][i] && p.psi_ok[i][j]);
        if (!any)
            return false;
    }
    if (use_exhaustive(p))
        return exhaustive(p);
    used_matching = true;
    return matching(p);
}

bool check_lin(const Barcode& m, const Barcode& n, const Lin& e1, const Lin& e2, bool& used_matching)
{
    std::set<int> degrees;
    for (int d : m.degrees())
        degrees.insert(d);
    for (int d : n.degrees())
        degrees.insert(d);
    for (int d : degrees) {
        auto xm = expand(in_degree(m, d)), xn = expand(in_degree(n, d));
        if (!factor(xm, xn, e1, e2, used_matching))
            return false;
        if (!factor(xn, xm, e2, e1, used_matching))
            return false;
    }
    return true;
}

}  // namespace

bool factorization_exists(const std::vector<Bar>& x, const std::vector<Bar>& y, const Q& a, const Q& b,
                          FactorMethod method)
{
    Problem p = setup(expand(x), expand(y), Lin{0, a, Q(0)}, Lin{0, b, Q(0)});
    return method == FactorMethod::Exhaustive ? exhaustive(p) : matching(p);
}

InterleaveResult interleaving_check(const Barcode& m, const Barcode& n, const Q& eps, const Q& eps2)
{
    if (eps < 0 || eps2 < 0)
        throw BarcodeError("interleaving parameters must be nonnegative");
    bool used_matching = false;
    bool ok = check_lin(m, n, Lin{0, eps, Q(0)}, Lin{0, eps2, Q(0)}, used_matching);
    return InterleaveResult{ok, used_matching ? "matching" : "exhaustive"};
}

bool interleaved(const Barcode& m, const Barcode& n, const Q& eps, const Q& eps2)
{
    return interleaving_check(m, n, eps, eps2).ok;
}

DistanceResult interleaving_distance(const Barcode& m, const Barcode& n)
{
    std::set<Q> ends;
    for (const Barcode* b : {&m, &n})
        for (const Bar& bar : b->bars()) {
            if (bar.start.finite())
                ends.insert(bar.start.val);
            if (bar.end.finite())
                ends.insert(bar.end.val);
        }
    std::vector<Q> e(ends.begin(), ends.end());
    std::set<Q> dset{Q(0)};
    for (std::size_t i = 0; i < e.size(); ++i)
        for (std::size_t j = i + 1; j < e.size(); ++j)
            dset.insert(e[j] - e[i]);
    std::vector<Q> d(dset.begin(), dset.end());
    std::set<Q> sset;
    for (std::size_t i = 0; i < d.size(); ++i)
        for (std::size_t j = i; j < d.size(); ++j)
            sset.insert(d[i] + d[j]);
    std::vector<Q> sums(sset.begin(), sset.end());

    bool used_matching = false;
    // The closure of the feasible region is an up-set whose boundary lies on lines
    // eps = d, eps' = d, eps + eps' = d; feasibility in the closure is tested at (eps, eps') + (eta, eta).
    auto feasible_sum = [&](const Q& s) {
        std::set<Q> cand;
        for (const Q& x : d) {
            if (x <= s)
                cand.insert(x);
            if (s - x >= 0)
                cand.insert(s - x);
        }
        for (const Q& eps : cand)
            if (check_lin(m, n, Lin{0, eps, Q(1)}, Lin{0, s - eps, Q(1)}, used_matching))
                return true;
        return false;
    };
    std::size_t lo = 0, hi = sums.size();
    while (lo < hi) {
        std::size_t mid = (lo + hi) / 2;
        if (feasible_sum(sums[mid]))
            hi = mid;
        else
            lo = mid + 1;
    }
    DistanceResult r;
    r.method = used_matching ? "matching" : "exhaustive";
    r.value = lo == sums.size() ? ExtQ::pos_inf() : ExtQ::of(sums[lo]);
    return r;
}

}  // namespace lgs
