#include "legsheaf/exactalg.hpp"

#include <algorithm>
#include <optional>

namespace lgs {

namespace {

struct FpOps {
    using T = std::uint64_t;
    std::uint64_t p;

    T from(const Q& q, const Field& f) const { return f.reduce(q).get_num().get_ui(); }
    Q to(T v) const { return Q(static_cast<unsigned long>(v)); }
    bool is_zero(T v) const { return v == 0; }
    T mul(T a, T b) const { return (a * b) % p; }
    T sub(T a, T b) const { return a >= b ? a - b : a + p - b; }
    T inv(T a) const
    {
        T r = 1, b = a % p, e = p - 2;
        while (e) {
            if (e & 1)
                r = (r * b) % p;
            b = (b * b) % p;
            e >>= 1;
        }
        return r;
    }
};

struct QOps {
    using T = Q;
    T from(const Q& q, const Field&) const { return q; }
    Q to(const T& v) const { return v; }
    bool is_zero(const T& v) const { return sgn(v) == 0; }
    T mul(const T& a, const T& b) const { return a * b; }
    T sub(const T& a, const T& b) const { return a - b; }
    T inv(const T& a) const { return 1 / a; }
};

template <class K>
using SVec = std::vector<std::pair<int, typename K::T>>;

// out = a - c * b
template <class K>
void axpy(const K& k, SVec<K>& a, const typename K::T& c, const SVec<K>& b, SVec<K>& scratch)
{
    scratch.clear();
    scratch.reserve(a.size() + b.size());
    std::size_t i = 0, j = 0;
    while (i < a.size() || j < b.size()) {
        if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
            scratch.push_back(std::move(a[i++]));
        } else if (i == a.size() || b[j].first < a[i].first) {
            scratch.emplace_back(b[j].first, k.sub(typename K::T(0), k.mul(c, b[j].second)));
            ++j;
        } else {
            auto v = k.sub(a[i].second, k.mul(c, b[j].second));
            if (!k.is_zero(v))
                scratch.emplace_back(a[i].first, std::move(v));
            ++i;
            ++j;
        }
    }
    a.swap(scratch);
}

template <class K>
struct Reducer {
    const K& k;
    std::vector<int> pivot_of_row;
    std::vector<SVec<K>> pivots;
    std::vector<SVec<K>> tags;
    bool track;
    SVec<K> scratch;

    Reducer(const K& kk, int rows, bool track_tags) : k(kk), pivot_of_row(static_cast<std::size_t>(rows), -1), track(track_tags) {}

    // Returns true if vec became a new pivot; otherwise tag holds a kernel relation.
    bool insert(SVec<K> vec, SVec<K> tag, SVec<K>* relation)
    {
        while (!vec.empty()) {
            int r = vec.front().first;
            int pi = pivot_of_row[r];
            if (pi < 0) {
                auto lead_inv = k.inv(vec.front().second);
                for (auto& e : vec)
                    e.second = k.mul(e.second, lead_inv);
                if (track)
                    for (auto& e : tag)
                        e.second = k.mul(e.second, lead_inv);
                pivot_of_row[r] = static_cast<int>(pivots.size());
                pivots.push_back(std::move(vec));
                if (track)
                    tags.push_back(std::move(tag));
                return true;
            }
            auto c = vec.front().second;
            axpy<K>(k, vec, c, pivots[pi], scratch);
            if (track)
                axpy<K>(k, tag, c, tags[pi], scratch);
        }
        if (relation)
            *relation = std::move(tag);
        return false;
    }

    // Writes vec as a combination of the inserted columns; false if vec is outside their span.
    bool express(SVec<K> vec, SVec<K>& coeffs)
    {
        coeffs.clear();
        while (!vec.empty()) {
            int pi = pivot_of_row[vec.front().first];
            if (pi < 0)
                return false;
            auto c = vec.front().second;
            axpy<K>(k, vec, c, pivots[pi], scratch);
            axpy<K>(k, coeffs, k.sub(typename K::T(0), c), tags[pi], scratch);
        }
        return true;
    }
};

template <class K>
SVec<K> column_of(const K& k, const Field& f, const Matrix& m, int j)
{
    SVec<K> v;
    for (const auto& [i, q] : m.col(j)) {
        auto x = k.from(q, f);
        if (!k.is_zero(x))
            v.emplace_back(i, std::move(x));
    }
    return v;
}

template <class K>
int rank_impl(const K& k, const Field& f, const Matrix& m)
{
    // Reduce along the smaller side.
    const Matrix* mm = &m;
    Matrix t;
    if (m.cols() > m.rows()) {
        t = m.transpose();
        mm = &t;
    }
    Reducer<K> red(k, mm->rows(), false);
    int r = 0;
    for (int j = 0; j < mm->cols(); ++j)
        if (red.insert(column_of(k, f, *mm, j), {}, nullptr))
            ++r;
    return r;
}

template <class K>
Matrix kernel_impl(const K& k, const Field& f, const Matrix& m)
{
    Reducer<K> red(k, m.rows(), true);
    std::vector<SVec<K>> rels;
    for (int j = 0; j < m.cols(); ++j) {
        SVec<K> tag;
        tag.emplace_back(j, typename K::T(1));
        SVec<K> rel;
        if (!red.insert(column_of(k, f, m, j), std::move(tag), &rel))
            rels.push_back(std::move(rel));
    }
    Matrix out(m.cols(), static_cast<int>(rels.size()));
    for (std::size_t c = 0; c < rels.size(); ++c) {
        auto& col = out.col_mut(static_cast<int>(c));
        std::sort(rels[c].begin(), rels[c].end(), [](const auto& a, const auto& b) { return a.first < b.first; });
        for (auto& [i, v] : rels[c])
            col.emplace_back(i, k.to(v));
    }
    return out;
}

template <class K>
Matrix inverse_impl(const K& k, const Field& f, const Matrix& m)
{
    int n = m.rows();
    std::vector<std::vector<typename K::T>> a(static_cast<std::size_t>(n), std::vector<typename K::T>(static_cast<std::size_t>(2 * n)));
    for (int j = 0; j < n; ++j)
        for (const auto& [i, q] : m.col(j))
            a[i][j] = k.from(q, f);
    for (int i = 0; i < n; ++i)
        a[i][n + i] = typename K::T(1);
    for (int c = 0; c < n; ++c) {
        int piv = -1;
        for (int r = c; r < n; ++r)
            if (!k.is_zero(a[r][c])) {
                piv = r;
                break;
            }
        if (piv < 0)
            throw FieldError("matrix is singular");
        std::swap(a[piv], a[c]);
        auto iv = k.inv(a[c][c]);
        for (auto& e : a[c])
            e = k.mul(e, iv);
        for (int r = 0; r < n; ++r) {
            if (r == c || k.is_zero(a[r][c]))
                continue;
            auto factor = a[r][c];
            for (int j = 0; j < 2 * n; ++j)
                a[r][j] = k.sub(a[r][j], k.mul(factor, a[c][j]));
        }
    }
    Matrix out(n, n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i)
            if (!k.is_zero(a[i][n + j]))
                out.col_mut(j).emplace_back(i, k.to(a[i][n + j]));
    return out;
}

template <class K>
std::optional<Matrix> solve_impl(const K& k, const Field& f, const Matrix& a, const Matrix& b)
{
    Reducer<K> red(k, a.rows(), true);
    for (int j = 0; j < a.cols(); ++j) {
        SVec<K> tag;
        tag.emplace_back(j, typename K::T(1));
        red.insert(column_of(k, f, a, j), std::move(tag), nullptr);
    }
    Matrix out(a.cols(), b.cols());
    SVec<K> coeffs;
    for (int j = 0; j < b.cols(); ++j) {
        if (!red.express(column_of(k, f, b, j), coeffs))
            return std::nullopt;
        std::sort(coeffs.begin(), coeffs.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
        for (auto& [i, v] : coeffs)
            out.col_mut(j).emplace_back(i, k.to(v));
    }
    return out;
}

template <class K>
Matrix extend_basis_impl(const K& k, const Field& f, const Matrix& span, const Matrix& cand)
{
    Reducer<K> red(k, span.rows(), false);
    for (int j = 0; j < span.cols(); ++j)
        red.insert(column_of(k, f, span, j), {}, nullptr);
    std::vector<int> keep;
    for (int j = 0; j < cand.cols(); ++j)
        if (red.insert(column_of(k, f, cand, j), {}, nullptr))
            keep.push_back(j);
    Matrix out(cand.rows(), static_cast<int>(keep.size()));
    for (std::size_t c = 0; c < keep.size(); ++c)
        out.col_mut(static_cast<int>(c)) = cand.col(keep[c]);
    return out;
}

}  // namespace

std::optional<Matrix> solve(const Field& f, const Matrix& a, const Matrix& b)
{
    if (a.rows() != b.rows())
        throw FieldError("solve: row count mismatch");
    if (f.rational())
        return solve_impl(QOps{}, f, a, b);
    return solve_impl(FpOps{f.p}, f, a, b);
}

Matrix extend_basis(const Field& f, const Matrix& span, const Matrix& cand)
{
    if (span.rows() != cand.rows())
        throw FieldError("extend_basis: row count mismatch");
    if (f.rational())
        return extend_basis_impl(QOps{}, f, span, cand);
    return extend_basis_impl(FpOps{f.p}, f, span, cand);
}

int rank(const Field& f, const Matrix& m)
{
    if (m.rows() == 0 || m.cols() == 0)
        return 0;
    if (f.rational())
        return rank_impl(QOps{}, f, m);
    return rank_impl(FpOps{f.p}, f, m);
}

Matrix kernel(const Field& f, const Matrix& m)
{
    if (f.rational())
        return kernel_impl(QOps{}, f, m);
    return kernel_impl(FpOps{f.p}, f, m);
}

bool is_zero(const Field& f, const Matrix& m)
{
    for (int j = 0; j < m.cols(); ++j)
        for (const auto& e : m.col(j))
            if (sgn(f.reduce(e.second)) != 0)
                return false;
    return true;
}

bool equal(const Field& f, const Matrix& a, const Matrix& b)
{
    if (a.rows() != b.rows() || a.cols() != b.cols())
        return false;
    return is_zero(f, a - b);
}

Matrix inverse(const Field& f, const Matrix& m)
{
    if (m.rows() != m.cols())
        throw FieldError("inverse of non-square matrix");
    if (f.rational())
        return inverse_impl(QOps{}, f, m);
    return inverse_impl(FpOps{f.p}, f, m);
}

}  // namespace lgs
