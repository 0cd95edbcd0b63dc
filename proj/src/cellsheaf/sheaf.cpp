#include "legsheaf/cellsheaf.hpp"

#include <sstream>

namespace lgs {

CellSheaf::CellSheaf(ComplexPtr cx, Field f) : cx_(std::move(cx)), field_(f)
{
    auto z = std::make_shared<const CochainComplex>(CochainComplex::zero(f));
    stalks_.assign(cx_->size(), z);
}

void CellSheaf::set_stalk(int c, std::shared_ptr<const CochainComplex> s)
{
    if (s->field() != field_)
        throw SheafError("stalk field mismatch");
    stalks_.at(c) = std::move(s);
}

ChainMap CellSheaf::gen(int a, int b) const
{
    if (a == b)
        return ChainMap::identity(stalks_.at(a));
    auto it = gens_.find({a, b});
    if (it != gens_.end())
        return it->second;
    if (!cx_->is_face(a, b))
        throw SheafError("no generization from " + cx_->describe(a) + " to " + cx_->describe(b));
    return ChainMap::zero(stalks_.at(a), stalks_.at(b));
}

const ChainMap* CellSheaf::gen_ptr(int a, int b) const
{
    auto it = gens_.find({a, b});
    return it == gens_.end() ? nullptr : &it->second;
}

void CellSheaf::set_gen(int a, int b, ChainMap m)
{
    if (!cx_->is_face(a, b))
        throw SheafError("generization requires a face relation: " + cx_->describe(a) + " -> " + cx_->describe(b));
    if (stalks_.at(a)->is_zero_space() || stalks_.at(b)->is_zero_space()) {
        gens_.erase({a, b});
        return;
    }
    gens_[{a, b}] = std::move(m);
}

bool CellSheaf::is_zero() const
{
    for (const auto& s : stalks_)
        if (!s->is_zero_space())
            return false;
    return true;
}

bool CellSheaf::compact_support() const
{
    for (int c = 0; c < cx_->size(); ++c)
        if (!cx_->cell(c).bounded) {
            for (auto [d, n] : cohomology(*stalks_[c]))
                if (n != 0)
                    return false;
        }
    return true;
}

bool SheafReport::local_ok() const
{
    for (const auto& v : violations)
        if (v.kind != "compact support")
            return false;
    return true;
}

bool SheafReport::has(const std::string& kind) const
{
    for (const auto& v : violations)
        if (v.kind == kind)
            return true;
    return false;
}

std::string SheafReport::summary() const
{
    std::ostringstream os;
    for (const auto& v : violations) {
        os << v.kind << ":";
        for (int c : v.cells)
            os << " " << c;
        if (!v.detail.empty())
            os << " (" << v.detail << ")";
        os << "\n";
    }
    return os.str();
}

}  // namespace lgs
