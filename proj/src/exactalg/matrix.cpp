#include "legsheaf/exactalg.hpp"

#include <algorithm>
#include <tuple>

namespace lgs {

Matrix::Matrix(int rows, int cols) : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(cols))
{
    if (rows < 0 || cols < 0)
        throw std::invalid_argument("negative matrix dimension");
}

Matrix Matrix::identity(int n)
{
    Matrix m(n, n);
    for (int i = 0; i < n; ++i)
        m.data_[i].emplace_back(i, Q(1));
    return m;
}

Matrix Matrix::from_dense(const std::vector<std::vector<Q>>& rows, int ncols)
{
    int r = static_cast<int>(rows.size());
    int c = ncols >= 0 ? ncols : (r ? static_cast<int>(rows[0].size()) : 0);
    Matrix m(r, c);
    for (int i = 0; i < r; ++i) {
        if (static_cast<int>(rows[i].size()) != c)
            throw std::invalid_argument("ragged dense matrix");
        for (int j = 0; j < c; ++j)
            if (sgn(rows[i][j]) != 0)
                m.data_[j].emplace_back(i, rows[i][j]);
    }
    return m;
}

Q Matrix::at(int r, int c) const
{
    const Column& col = data_.at(c);
    auto it = std::lower_bound(col.begin(), col.end(), r,
                               [](const std::pair<int, Q>& e, int v) { return e.first < v; });
    if (it != col.end() && it->first == r)
        return it->second;
    return Q(0);
}

std::size_t Matrix::nnz() const
{
    std::size_t n = 0;
    for (const auto& c : data_)
        n += c.size();
    return n;
}

bool Matrix::zero() const
{
    for (const auto& c : data_)
        if (!c.empty())
            return false;
    return true;
}

Matrix Matrix::transpose() const
{
    Matrix t(cols_, rows_);
    for (int j = 0; j < cols_; ++j)
        for (const auto& [i, v] : data_[j])
            t.data_[i].emplace_back(j, v);
    return t;
}

Matrix Matrix::operator*(const Matrix& o) const
{
    if (cols_ != o.rows_)
        throw std::invalid_argument("matrix product dimension mismatch: " + std::to_string(rows_) + "x" +
                                    std::to_string(cols_) + " * " + std::to_string(o.rows_) + "x" +
                                    std::to_string(o.cols_));
    Matrix r(rows_, o.cols_);
    std::vector<Q> acc(static_cast<std::size_t>(rows_));
    std::vector<char> hit(static_cast<std::size_t>(rows_), 0);
    std::vector<int> touched;
    for (int j = 0; j < o.cols_; ++j) {
        touched.clear();
        for (const auto& [k, v] : o.data_[j]) {
            for (const auto& [i, w] : data_[k]) {
                if (!hit[i]) {
                    hit[i] = 1;
                    acc[i] = 0;
                    touched.push_back(i);
                }
                acc[i] += w * v;
            }
        }
        std::sort(touched.begin(), touched.end());
        for (int i : touched) {
            if (sgn(acc[i]) != 0)
                r.data_[j].emplace_back(i, acc[i]);
            hit[i] = 0;
        }
    }
    return r;
}

namespace {

Matrix::Column merge(const Matrix::Column& a, const Matrix::Column& b, int sign)
{
    Matrix::Column out;
    out.reserve(a.size() + b.size());
    std::size_t i = 0, j = 0;
    while (i < a.size() || j < b.size()) {
        if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
            out.push_back(a[i++]);
        } else if (i == a.size() || b[j].first < a[i].first) {
            out.emplace_back(b[j].first, sign > 0 ? b[j].second : Q(-b[j].second));
            ++j;
        } else {
            Q v = sign > 0 ? Q(a[i].second + b[j].second) : Q(a[i].second - b[j].second);
            if (sgn(v) != 0)
                out.emplace_back(a[i].first, v);
            ++i;
            ++j;
        }
    }
    return out;
}

}  // namespace

Matrix Matrix::operator+(const Matrix& o) const
{
    if (rows_ != o.rows_ || cols_ != o.cols_)
        throw std::invalid_argument("matrix sum dimension mismatch");
    Matrix r(rows_, cols_);
    for (int j = 0; j < cols_; ++j)
        r.data_[j] = merge(data_[j], o.data_[j], 1);
    return r;
}

Matrix Matrix::operator-(const Matrix& o) const
{
    if (rows_ != o.rows_ || cols_ != o.cols_)
        throw std::invalid_argument("matrix difference dimension mismatch");
    Matrix r(rows_, cols_);
    for (int j = 0; j < cols_; ++j)
        r.data_[j] = merge(data_[j], o.data_[j], -1);
    return r;
}

Matrix Matrix::scaled(const Q& s) const
{
    if (sgn(s) == 0)
        return Matrix(rows_, cols_);
    Matrix r = *this;
    for (auto& c : r.data_)
        for (auto& e : c)
            e.second *= s;
    return r;
}

Matrix Matrix::reduced(const Field& f) const
{
    if (f.rational())
        return *this;
    Matrix r(rows_, cols_);
    for (int j = 0; j < cols_; ++j)
        for (const auto& [i, v] : data_[j]) {
            Q w = f.reduce(v);
            if (sgn(w) != 0)
                r.data_[j].emplace_back(i, w);
        }
    return r;
}

std::vector<std::vector<Q>> Matrix::dense() const
{
    std::vector<std::vector<Q>> out(static_cast<std::size_t>(rows_), std::vector<Q>(static_cast<std::size_t>(cols_)));
    for (int j = 0; j < cols_; ++j)
        for (const auto& [i, v] : data_[j])
            out[i][j] = v;
    return out;
}

Matrix Matrix::hstack(const std::vector<const Matrix*>& parts, int rows)
{
    int cols = 0;
    for (auto* p : parts) {
        if (p->rows_ != rows)
            throw std::invalid_argument("hstack row mismatch");
        cols += p->cols_;
    }
    Matrix r(rows, cols);
    int off = 0;
    for (auto* p : parts) {
        for (int j = 0; j < p->cols_; ++j)
            r.data_[off + j] = p->data_[j];
        off += p->cols_;
    }
    return r;
}

Matrix Matrix::vstack(const std::vector<const Matrix*>& parts, int cols)
{
    int rows = 0;
    for (auto* p : parts) {
        if (p->cols_ != cols)
            throw std::invalid_argument("vstack column mismatch");
        rows += p->rows_;
    }
    Matrix r(rows, cols);
    int off = 0;
    for (auto* p : parts) {
        for (int j = 0; j < cols; ++j)
            for (const auto& [i, v] : p->data_[j])
                r.data_[j].emplace_back(i + off, v);
        off += p->rows_;
    }
    return r;
}

void TripletBuilder::add(int r, int c, const Q& v)
{
    if (r < 0 || r >= rows_ || c < 0 || c >= cols_)
        throw std::out_of_range("triplet outside matrix");
    if (sgn(v) != 0)
        entries_.emplace_back(c, r, v);
}

void TripletBuilder::add_block(int r0, int c0, const Matrix& m, const Q& scale)
{
    for (int j = 0; j < m.cols(); ++j)
        for (const auto& [i, v] : m.col(j))
            add(r0 + i, c0 + j, v * scale);
}

Matrix TripletBuilder::build() const
{
    auto sorted = entries_;
    std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) {
        return std::tie(std::get<0>(a), std::get<1>(a)) < std::tie(std::get<0>(b), std::get<1>(b));
    });
    Matrix m(rows_, cols_);
    for (std::size_t k = 0; k < sorted.size();) {
        auto [c, r, v] = sorted[k];
        Q sum = v;
        std::size_t l = k + 1;
        while (l < sorted.size() && std::get<0>(sorted[l]) == c && std::get<1>(sorted[l]) == r)
            sum += std::get<2>(sorted[l++]);
        if (sgn(sum) != 0)
            m.col_mut(c).emplace_back(r, sum);
        k = l;
    }
    return m;
}

}  // namespace lgs

namespace lgs {

Matrix kron(const Matrix& a, const Matrix& b)
{
    Matrix r(a.rows() * b.rows(), a.cols() * b.cols());
    for (int ja = 0; ja < a.cols(); ++ja)
        for (int jb = 0; jb < b.cols(); ++jb) {
            auto& col = r.col_mut(ja * b.cols() + jb);
            for (const auto& [ia, va] : a.col(ja))
                for (const auto& [ib, vb] : b.col(jb))
                    col.emplace_back(ia * b.rows() + ib, va * vb);
        }
    return r;
}

}  // namespace lgs
