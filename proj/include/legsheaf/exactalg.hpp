#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace lgs {

using Q = mpq_class;

Q parse_rational(const std::string& s);
std::string format_rational(const Q& q);

// Rational extended by -inf/+inf.
struct ExtQ {
    int inf = 0;  // -1, 0, +1
    Q val;

    static ExtQ neg_inf() { return ExtQ{-1, Q(0)}; }
    static ExtQ pos_inf() { return ExtQ{1, Q(0)}; }
    static ExtQ of(const Q& q) { return ExtQ{0, q}; }
    bool finite() const { return inf == 0; }
};
bool operator<(const ExtQ& a, const ExtQ& b);
bool operator==(const ExtQ& a, const ExtQ& b);
inline bool operator!=(const ExtQ& a, const ExtQ& b) { return !(a == b); }
inline bool operator<=(const ExtQ& a, const ExtQ& b) { return !(b < a); }
inline bool operator>(const ExtQ& a, const ExtQ& b) { return b < a; }
inline bool operator>=(const ExtQ& a, const ExtQ& b) { return !(a < b); }
ExtQ parse_ext(const std::string& s);
std::string format_ext(const ExtQ& q);

class FieldError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Coefficient field: rationals (p = 0) or F_p.
struct Field {
    std::uint64_t p = 0;

    static Field rationals() { return Field{0}; }
    static Field prime(std::uint64_t p);
    static Field parse(const std::string& s);

    bool rational() const { return p == 0; }
    std::uint64_t characteristic() const { return p; }
    std::string name() const;
    // Canonical representative: q itself over Q, a residue in [0, p) over F_p.
    Q reduce(const Q& q) const;
    bool operator==(const Field& o) const { return p == o.p; }
    bool operator!=(const Field& o) const { return p != o.p; }
};

bool is_prime(std::uint64_t n);
void require_same_field(const Field& a, const Field& b);

// Sparse column-major matrix with rational storage.
class Matrix {
public:
    using Column = std::vector<std::pair<int, Q>>;

    Matrix() = default;
    Matrix(int rows, int cols);

    static Matrix identity(int n);
    static Matrix from_dense(const std::vector<std::vector<Q>>& rows, int ncols = -1);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    const Column& col(int j) const { return data_[j]; }
    Column& col_mut(int j) { return data_[j]; }
    Q at(int r, int c) const;
    std::size_t nnz() const;
    bool zero() const;

    Matrix transpose() const;
    Matrix operator*(const Matrix& o) const;
    Matrix operator+(const Matrix& o) const;
    Matrix operator-(const Matrix& o) const;
    Matrix scaled(const Q& s) const;
    Matrix reduced(const Field& f) const;
    std::vector<std::vector<Q>> dense() const;

    static Matrix hstack(const std::vector<const Matrix*>& parts, int rows);
    static Matrix vstack(const std::vector<const Matrix*>& parts, int cols);

private:
    int rows_ = 0, cols_ = 0;
    std::vector<Column> data_;
};

// Accumulates (row, col, value) entries; duplicates are summed.
class TripletBuilder {
public:
    TripletBuilder(int rows, int cols) : rows_(rows), cols_(cols) {}
    void add(int r, int c, const Q& v);
    void add_block(int r0, int c0, const Matrix& m, const Q& scale = Q(1));
    Matrix build() const;

private:
    int rows_, cols_;
    std::vector<std::tuple<int, int, Q>> entries_;
};

int rank(const Field& f, const Matrix& m);
// Columns form a basis of the kernel.
Matrix kernel(const Field& f, const Matrix& m);
bool equal(const Field& f, const Matrix& a, const Matrix& b);
bool is_zero(const Field& f, const Matrix& m);
// Throws FieldError if m is not square and invertible.
Matrix inverse(const Field& f, const Matrix& m);
// Some X with a * X = b, or nothing when b is outside the column span of a.
std::optional<Matrix> solve(const Field& f, const Matrix& a, const Matrix& b);
// Columns of cand that are independent modulo span (greedy, in order).
Matrix extend_basis(const Field& f, const Matrix& span, const Matrix& cand);
// Kronecker product.
Matrix kron(const Matrix& a, const Matrix& b);

class ComplexError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

using DegreeDims = std::map<int, int>;

// Bounded cochain complex; d(i): C^i -> C^{i+1}.
class CochainComplex {
public:
    CochainComplex() = default;
    CochainComplex(Field f, int lo, std::vector<int> dims, std::vector<Matrix> diffs, bool verify = true);

    static CochainComplex zero(Field f) { return CochainComplex(f, 0, {}, {}); }
    // Zero differentials, graded dimensions as given.
    static CochainComplex graded(Field f, const DegreeDims& dims);

    const Field& field() const { return field_; }
    int lo() const { return lo_; }
    int hi() const { return lo_ + static_cast<int>(dims_.size()) - 1; }
    bool empty() const { return dims_.empty(); }
    int dim(int deg) const;
    int total_dim() const;
    Matrix d(int deg) const;
    const Matrix* d_ptr(int deg) const;
    DegreeDims dims() const;
    bool is_zero_space() const { return total_dim() == 0; }
    void verify() const;

private:
    Field field_;
    int lo_ = 0;
    std::vector<int> dims_;
    std::vector<Matrix> diffs_;  // diffs_[k]: degree lo+k -> lo+k+1
};

class ChainMap {
public:
    ChainMap() = default;
    ChainMap(std::shared_ptr<const CochainComplex> src, std::shared_ptr<const CochainComplex> tgt,
             std::map<int, Matrix> comps, bool verify = true);

    static ChainMap identity(std::shared_ptr<const CochainComplex> c);
    static ChainMap zero(std::shared_ptr<const CochainComplex> src, std::shared_ptr<const CochainComplex> tgt);

    const CochainComplex& source() const { return *src_; }
    const CochainComplex& target() const { return *tgt_; }
    std::shared_ptr<const CochainComplex> source_ptr() const { return src_; }
    std::shared_ptr<const CochainComplex> target_ptr() const { return tgt_; }
    Matrix at(int deg) const;
    const std::map<int, Matrix>& components() const { return comps_; }
    bool commutes() const;
    void verify() const;

private:
    std::shared_ptr<const CochainComplex> src_, tgt_;
    std::map<int, Matrix> comps_;
};

ChainMap compose(const ChainMap& g, const ChainMap& f);  // g after f

DegreeDims cohomology(const CochainComplex& c);
// cone(f)^i = src^{i+1} + tgt^i,  d = [[-d_src, 0], [f, d_tgt]].
CochainComplex cone(const ChainMap& f);
DegreeDims map_cohomology(const ChainMap& f);
// Cocycles whose classes form a basis of H^deg.
Matrix cohomology_basis(const CochainComplex& c, int deg);
CochainComplex shift(const CochainComplex& c, int n);  // C[n]^i = C^{i+n}, d negated for odd n
int euler_characteristic(const DegreeDims& dims);
DegreeDims trim(const DegreeDims& dims);
std::string format_dims(const DegreeDims& dims);

// Double complex on a grid: term(p, q) with dh: (p,q)->(p+1,q), dv: (p,q)->(p,q+1).
// The squares must commute; totalization uses d = dh + (-1)^p dv.
struct DoubleComplex {
    Field field;
    int p0 = 0, q0 = 0;
    std::vector<std::vector<int>> dims;  // dims[p-p0][q-q0]
    std::map<std::pair<int, int>, Matrix> dh, dv;
};
CochainComplex totalize(const DoubleComplex& dc);

}  // namespace lgs
