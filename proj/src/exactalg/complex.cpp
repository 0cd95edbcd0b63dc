#include "legsheaf/exactalg.hpp"

#include <sstream>

namespace lgs {

CochainComplex::CochainComplex(Field f, int lo, std::vector<int> dims, std::vector<Matrix> diffs, bool check)
    : field_(f), lo_(lo), dims_(std::move(dims)), diffs_(std::move(diffs))
{
    if (!diffs_.empty() && (diffs_.size() + 1 < dims_.size() || diffs_.size() > dims_.size()))
        throw ComplexError("differential count does not match term count");
    diffs_.resize(dims_.size());
    for (std::size_t k = 0; k < dims_.size(); ++k) {
        int next = k + 1 < dims_.size() ? dims_[k + 1] : 0;
        Matrix& m = diffs_[k];
        if (m.rows() == 0 && m.cols() == 0)
            m = Matrix(next, dims_[k]);
        if (m.rows() != next || m.cols() != dims_[k])
            throw ComplexError("differential in degree " + std::to_string(lo_ + static_cast<int>(k)) +
                               " has shape " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()) +
                               ", expected " + std::to_string(next) + "x" + std::to_string(dims_[k]));
    }
    if (check)
        verify();
}

CochainComplex CochainComplex::graded(Field f, const DegreeDims& dims)
{
    auto t = trim(dims);
    if (t.empty())
        return zero(f);
    int lo = t.begin()->first, hi = t.rbegin()->first;
    std::vector<int> d(static_cast<std::size_t>(hi - lo + 1), 0);
    for (auto [deg, n] : t)
        d[deg - lo] = n;
    return CochainComplex(f, lo, std::move(d), {}, false);
}

int CochainComplex::dim(int deg) const
{
    if (deg < lo_ || deg > hi())
        return 0;
    return dims_[deg - lo_];
}

int CochainComplex::total_dim() const
{
    int s = 0;
    for (int d : dims_)
        s += d;
    return s;
}

const Matrix* CochainComplex::d_ptr(int deg) const
{
    if (deg < lo_ || deg > hi())
        return nullptr;
    return &diffs_[deg - lo_];
}

Matrix CochainComplex::d(int deg) const
{
    if (auto* p = d_ptr(deg))
        return *p;
    return Matrix(dim(deg + 1), dim(deg));
}

DegreeDims CochainComplex::dims() const
{
    DegreeDims out;
    for (std::size_t k = 0; k < dims_.size(); ++k)
        if (dims_[k])
            out[lo_ + static_cast<int>(k)] = dims_[k];
    return out;
}

void CochainComplex::verify() const
{
    for (int deg = lo_; deg < hi(); ++deg) {
        const Matrix& a = diffs_[deg - lo_];
        const Matrix& b = diffs_[deg + 1 - lo_];
        if (a.zero() || b.zero())
            continue;
        if (!is_zero(field_, b * a))
            throw ComplexError("d o d != 0 at degree " + std::to_string(deg));
    }
}

ChainMap::ChainMap(std::shared_ptr<const CochainComplex> src, std::shared_ptr<const CochainComplex> tgt,
                   std::map<int, Matrix> comps, bool check)
    : src_(std::move(src)), tgt_(std::move(tgt)), comps_(std::move(comps))
{
    require_same_field(src_->field(), tgt_->field());
    for (auto it = comps_.begin(); it != comps_.end();) {
        int deg = it->first;
        if (it->second.rows() != tgt_->dim(deg) || it->second.cols() != src_->dim(deg))
            throw ComplexError("chain map component in degree " + std::to_string(deg) + " has wrong shape");
        if (it->second.zero())
            it = comps_.erase(it);
        else
            ++it;
    }
    if (check)
        verify();
}

ChainMap ChainMap::identity(std::shared_ptr<const CochainComplex> c)
{
    std::map<int, Matrix> comps;
    for (auto [deg, n] : c->dims())
        comps[deg] = Matrix::identity(n);
    return ChainMap(c, c, std::move(comps), false);
}

ChainMap ChainMap::zero(std::shared_ptr<const CochainComplex> src, std::shared_ptr<const CochainComplex> tgt)
{
    return ChainMap(std::move(src), std::move(tgt), {}, false);
}

Matrix ChainMap::at(int deg) const
{
    auto it = comps_.find(deg);
    if (it != comps_.end())
        return it->second;
    return Matrix(tgt_->dim(deg), src_->dim(deg));
}

bool ChainMap::commutes() const
{
    int lo = std::min(src_->lo(), tgt_->lo()) - 1;
    int hi = std::max(src_->hi(), tgt_->hi()) + 1;
    const Field& f = src_->field();
    for (int deg = lo; deg <= hi; ++deg) {
        if (src_->dim(deg) == 0 || tgt_->dim(deg + 1) == 0)
            continue;
        Matrix lhs = tgt_->d(deg) * at(deg);
        Matrix rhs = at(deg + 1) * src_->d(deg);
        if (!equal(f, lhs, rhs))
            return false;
    }
    return true;
}

void ChainMap::verify() const
{
    if (!commutes())
        throw ComplexError("map does not commute with differentials");
}

ChainMap compose(const ChainMap& g, const ChainMap& f)
{
    if (f.target().dims() != g.source().dims())
        throw ComplexError("composition of incompatible chain maps");
    std::map<int, Matrix> comps;
    for (const auto& [deg, m] : f.components())
        comps[deg] = g.at(deg) * m;
    return ChainMap(f.source_ptr(), g.target_ptr(), std::move(comps), false);
}

DegreeDims cohomology(const CochainComplex& c)
{
    DegreeDims out;
    if (c.empty())
        return out;
    const Field& f = c.field();
    std::vector<int> ranks;
    for (int deg = c.lo(); deg <= c.hi(); ++deg)
        ranks.push_back(rank(f, *c.d_ptr(deg)));
    for (int deg = c.lo(); deg <= c.hi(); ++deg) {
        int k = deg - c.lo();
        int h = c.dim(deg) - ranks[k] - (k > 0 ? ranks[k - 1] : 0);
        if (h)
            out[deg] = h;
    }
    return out;
}

CochainComplex cone(const ChainMap& fm)
{
    const CochainComplex& s = fm.source();
    const CochainComplex& t = fm.target();
    const Field& fld = s.field();
    if (s.empty() && t.empty())
        return CochainComplex::zero(fld);
    int lo = std::min(s.empty() ? t.lo() : s.lo() - 1, t.empty() ? s.lo() - 1 : t.lo());
    int hi = std::max(s.empty() ? t.hi() : s.hi() - 1, t.empty() ? s.hi() - 1 : t.hi());
    std::vector<int> dims;
    for (int i = lo; i <= hi; ++i)
        dims.push_back(s.dim(i + 1) + t.dim(i));
    std::vector<Matrix> diffs;
    for (int i = lo; i <= hi; ++i) {
        int rs = s.dim(i + 1), rt = t.dim(i);
        int cs = s.dim(i + 2), ct = t.dim(i + 1);
        TripletBuilder b(cs + ct, rs + rt);
        b.add_block(0, 0, s.d(i + 1), Q(-1));
        b.add_block(cs, 0, fm.at(i + 1));
        b.add_block(cs, rs, t.d(i));
        diffs.push_back(b.build());
    }
    return CochainComplex(fld, lo, std::move(dims), std::move(diffs), false);
}

DegreeDims map_cohomology(const ChainMap& fm)
{
    const CochainComplex& s = fm.source();
    const CochainComplex& t = fm.target();
    const Field& fld = s.field();
    DegreeDims out;
    if (s.empty() || t.empty())
        return out;
    for (int deg = s.lo(); deg <= s.hi(); ++deg) {
        if (s.dim(deg) == 0 || t.dim(deg) == 0)
            continue;
        Matrix z = kernel(fld, s.d(deg));
        if (z.cols() == 0)
            continue;
        Matrix img = fm.at(deg) * z;
        Matrix b = t.d(deg - 1);
        int rb = rank(fld, b);
        Matrix both = Matrix::hstack({&img, &b}, t.dim(deg));
        int r = rank(fld, both) - rb;
        if (r)
            out[deg] = r;
    }
    return out;
}

Matrix cohomology_basis(const CochainComplex& c, int deg)
{
    int n = c.dim(deg);
    if (n == 0)
        return Matrix(0, 0);
    Matrix z = kernel(c.field(), c.d(deg));
    return extend_basis(c.field(), c.d(deg - 1), z);
}

CochainComplex shift(const CochainComplex& c, int n)
{
    if (c.empty())
        return c;
    std::vector<int> dims;
    std::vector<Matrix> diffs;
    for (int deg = c.lo(); deg <= c.hi(); ++deg) {
        dims.push_back(c.dim(deg));
        diffs.push_back(n % 2 ? c.d(deg).scaled(Q(-1)) : c.d(deg));
    }
    return CochainComplex(c.field(), c.lo() - n, std::move(dims), std::move(diffs), false);
}

int euler_characteristic(const DegreeDims& dims)
{
    int x = 0;
    for (auto [deg, n] : dims)
        x += (deg % 2 == 0) ? n : -n;
    return x;
}

DegreeDims trim(const DegreeDims& dims)
{
    DegreeDims out;
    for (auto [d, n] : dims)
        if (n)
            out[d] = n;
    return out;
}

std::string format_dims(const DegreeDims& dims)
{
    std::ostringstream os;
    os << "{";
    bool first = true;
    for (auto [d, n] : trim(dims)) {
        if (!first)
            os << ", ";
        os << d << ":" << n;
        first = false;
    }
    os << "}";
    return os.str();
}

CochainComplex totalize(const DoubleComplex& dc)
{
    int np = static_cast<int>(dc.dims.size());
    if (np == 0)
        return CochainComplex::zero(dc.field);
    int nq = static_cast<int>(dc.dims[0].size());
    for (const auto& row : dc.dims)
        if (static_cast<int>(row.size()) != nq)
            throw ComplexError("malformed double complex grid");
    auto term = [&](int p, int q) -> int {
        if (p < dc.p0 || p >= dc.p0 + np || q < dc.q0 || q >= dc.q0 + nq)
            return 0;
        return dc.dims[p - dc.p0][q - dc.q0];
    };
    auto get = [&](const std::map<std::pair<int, int>, Matrix>& m, int p, int q, int rows, int cols) -> Matrix {
        auto it = m.find({p, q});
        if (it == m.end())
            return Matrix(rows, cols);
        if (it->second.rows() != rows || it->second.cols() != cols)
            throw ComplexError("malformed double complex map at (" + std::to_string(p) + "," + std::to_string(q) + ")");
        return it->second;
    };
    for (const auto& [key, m] : dc.dh)
        get(dc.dh, key.first, key.second, term(key.first + 1, key.second), term(key.first, key.second));
    for (const auto& [key, m] : dc.dv)
        get(dc.dv, key.first, key.second, term(key.first, key.second + 1), term(key.first, key.second));
    // Squares must commute before the sign twist.
    for (int p = dc.p0; p < dc.p0 + np; ++p)
        for (int q = dc.q0; q < dc.q0 + nq; ++q) {
            Matrix a = get(dc.dv, p + 1, q, term(p + 1, q + 1), term(p + 1, q)) * get(dc.dh, p, q, term(p + 1, q), term(p, q));
            Matrix b = get(dc.dh, p, q + 1, term(p + 1, q + 1), term(p, q + 1)) * get(dc.dv, p, q, term(p, q + 1), term(p, q));
            if (!equal(dc.field, a, b))
                throw ComplexError("double complex square at (" + std::to_string(p) + "," + std::to_string(q) + ") does not commute");
        }
    int lo = dc.p0 + dc.q0, hi = dc.p0 + np - 1 + dc.q0 + nq - 1;
    std::vector<int> dims;
    std::vector<std::map<int, int>> offset;  // per total degree: p -> offset
    for (int n = lo; n <= hi; ++n) {
        int off = 0;
        std::map<int, int> o;
        for (int p = dc.p0; p < dc.p0 + np; ++p) {
            o[p] = off;
            off += term(p, n - p);
        }
        dims.push_back(off);
        offset.push_back(o);
    }
    std::vector<Matrix> diffs;
    for (int n = lo; n <= hi; ++n) {
        int rows = n + 1 <= hi ? dims[n + 1 - lo] : 0;
        TripletBuilder b(rows, dims[n - lo]);
        for (int p = dc.p0; p < dc.p0 + np; ++p) {
            int q = n - p;
            if (term(p, q) == 0)
                continue;
            int col = offset[n - lo][p];
            if (term(p + 1, q))
                b.add_block(offset[n + 1 - lo][p + 1], col, get(dc.dh, p, q, term(p + 1, q), term(p, q)));
            if (term(p, q + 1))
                b.add_block(offset[n + 1 - lo][p], col, get(dc.dv, p, q, term(p, q + 1), term(p, q)), Q(p % 2 ? -1 : 1));
        }
        diffs.push_back(b.build());
    }
    return CochainComplex(dc.field, lo, std::move(dims), std::move(diffs), true);
}

}  // namespace lgs
