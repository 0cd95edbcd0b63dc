#include "legsheaf/cellsheaf.hpp"

#include "json.hpp"

#include <fstream>
#include <sstream>

namespace lgs {

using json = nlohmann::json;

namespace {

Q num(const json& j, const std::string& where)
{
    if (j.is_string())
        return parse_rational(j.get<std::string>());
    if (j.is_number_integer())
        return Q(j.get<long>());
    throw SheafError(where + ": expected a rational string \"p/q\"");
}

int deg_key(const std::string& k, const std::string& where)
{
    try {
        std::size_t pos = 0;
        int d = std::stoi(k, &pos);
        if (pos != k.size())
            throw std::invalid_argument(k);
        return d;
    } catch (const std::exception&) {
        throw SheafError(where + ": degree key \"" + k + "\" is not an integer");
    }
}

Matrix matrix(const json& j, int rows, int cols, const std::string& where)
{
    if (!j.is_array())
        throw SheafError(where + ": matrix must be an array of rows");
    if (static_cast<int>(j.size()) != rows)
        throw SheafError(where + ": expected " + std::to_string(rows) + " rows, got " + std::to_string(j.size()));
    std::vector<std::vector<Q>> d;
    for (std::size_t r = 0; r < j.size(); ++r) {
        if (!j[r].is_array() || static_cast<int>(j[r].size()) != cols)
            throw SheafError(where + ": row " + std::to_string(r) + " must have " + std::to_string(cols) + " entries");
        std::vector<Q> row;
        for (std::size_t c = 0; c < j[r].size(); ++c)
            row.push_back(num(j[r][c], where));
        d.push_back(std::move(row));
    }
    return Matrix::from_dense(d, cols);
}

CochainComplex stalk(const json& j, Field f, const std::string& where)
{
    if (!j.is_object())
        throw SheafError(where + ": stalk must be an object");
    DegreeDims dims;
    const json& dj = j.contains("dims") ? j["dims"] : j;
    for (auto it = dj.begin(); it != dj.end(); ++it) {
        if (!it.value().is_number_integer() || it.value().get<int>() < 0)
            throw SheafError(where + ": dimension must be a nonnegative integer");
        if (it.value().get<int>() > 0)
            dims[deg_key(it.key(), where)] = it.value().get<int>();
    }
    if (dims.empty())
        return CochainComplex::zero(f);
    int lo = dims.begin()->first, hi = dims.rbegin()->first;
    std::vector<int> dv;
    std::vector<Matrix> diffs;
    for (int d = lo; d <= hi; ++d) {
        int a = dims.count(d) ? dims[d] : 0, b = dims.count(d + 1) ? dims[d + 1] : 0;
        dv.push_back(a);
        std::string key = std::to_string(d);
        if (j.contains("dims") && j.contains("d") && j["d"].contains(key))
            diffs.push_back(matrix(j["d"][key], b, a, where + ".d[" + key + "]"));
        else
            diffs.push_back(Matrix(b, a));
    }
    try {
        return CochainComplex(f, lo, dv, diffs, true);
    } catch (const ComplexError& e) {
        throw SheafError(where + ": " + e.what());
    }
}

std::map<int, Matrix> map_json(const json& j, const CochainComplex& src, const CochainComplex& tgt,
                               const std::string& where)
{
    std::map<int, Matrix> out;
    if (!j.is_object())
        throw SheafError(where + ": map must be an object keyed by degree");
    for (auto it = j.begin(); it != j.end(); ++it) {
        int d = deg_key(it.key(), where);
        out[d] = matrix(it.value(), tgt.dim(d), src.dim(d), where + "[" + it.key() + "]");
    }
    return out;
}

Point2 region_point(const json& at, const Front& f, const std::string& where)
{
    if (f.is_point()) {
        if (at.is_array())
            throw SheafError(where + ": regions of a point front are given by a single coordinate");
        return Point2{Q(0), num(at, where)};
    }
    if (!at.is_array() || at.size() != 2)
        throw SheafError(where + ": expected [x, t]");
    return Point2{num(at[0], where), num(at[1], where)};
}

void legible_parts(const json& j, const Front& f, Field field, std::vector<LegibleRegion>& regions,
                   std::vector<LegibleArc>& arcs, const std::string& where)
{
    if (j.contains("regions"))
        for (std::size_t i = 0; i < j["regions"].size(); ++i) {
            std::string w = where + "regions[" + std::to_string(i) + "]";
            const json& r = j["regions"][i];
            if (!r.contains("at") || !r.contains("stalk"))
                throw SheafError(w + ": needs \"at\" and \"stalk\"");
            regions.push_back({region_point(r["at"], f, w), stalk(r["stalk"], field, w + ".stalk")});
        }
    // Arc maps are parsed once the region stalks are known; keep raw json per arc here.
    if (j.contains("arcs"))
        for (std::size_t i = 0; i < j["arcs"].size(); ++i) {
            std::string w = where + "arcs[" + std::to_string(i) + "]";
            const json& a = j["arcs"][i];
            LegibleArc arc;
            if (a.contains("point")) {
                arc.strand = a["point"].get<int>();
            } else {
                if (!a.contains("sheet") || !a.contains("x"))
                    throw SheafError(w + ": needs \"sheet\" and \"x\" (or \"point\")");
                arc.strand = a["sheet"].get<int>();
                arc.x = num(a["x"], w);
            }
            if (!a.contains("map"))
                throw SheafError(w + ": needs \"map\"");
            // Shapes are checked against the region stalks below.
            for (auto it = a["map"].begin(); it != a["map"].end(); ++it) {
                const json& m = it.value();
                int rows = static_cast<int>(m.size());
                int cols = rows > 0 ? static_cast<int>(m[0].size()) : 0;
                arc.map[deg_key(it.key(), w)] = matrix(m, rows, cols, w + ".map[" + it.key() + "]");
            }
            arcs.push_back(std::move(arc));
        }
}

CellSheaf from_cells(const json& j, const Front& f, Field field)
{
    ComplexPtr cx = arrange(f);
    CellSheaf s(cx, field);
    if (j.contains("stalks"))
        for (auto it = j["stalks"].begin(); it != j["stalks"].end(); ++it) {
            int c = deg_key(it.key(), "stalks");
            if (c < 0 || c >= cx->size())
                throw SheafError("stalks: no cell " + it.key());
            s.set_stalk(c, std::make_shared<const CochainComplex>(stalk(it.value(), field, "stalks[" + it.key() + "]")));
        }
    if (j.contains("gens"))
        for (std::size_t i = 0; i < j["gens"].size(); ++i) {
            const json& g = j["gens"][i];
            std::string w = "gens[" + std::to_string(i) + "]";
            int a = g.at("from").get<int>(), b = g.at("to").get<int>();
            if (a < 0 || b < 0 || a >= cx->size() || b >= cx->size() || !cx->is_face(a, b))
                throw SheafError(w + ": cells are not a face pair");
            try {
                s.set_gen(a, b, ChainMap(s.stalk_ptr(a), s.stalk_ptr(b), map_json(g.at("map"), s.stalk(a), s.stalk(b), w), true));
            } catch (const ComplexError& e) {
                throw SheafError(w + ": " + e.what());
            }
        }
    // Longer face pairs by composing through an intermediate cell.
    for (int codim = 2; codim <= cx->ambient; ++codim)
        for (int c = 0; c < cx->size(); ++c)
            for (int a : cx->faces(c)) {
                if (cx->cell(c).dim - cx->cell(a).dim != codim || s.gen_ptr(a, c))
                    continue;
                for (auto [b, sg] : cx->cell(c).boundary)
                    if (cx->is_face(a, b)) {
                        s.set_gen(a, c, compose(s.gen(b, c), s.gen(a, b)));
                        break;
                    }
            }
    return s;
}

json matrix_json(const Matrix& m)
{
    json rows = json::array();
    auto d = m.dense();
    for (const auto& r : d) {
        json row = json::array();
        for (const Q& v : r)
            row.push_back(format_rational(v));
        rows.push_back(row);
    }
    return rows;
}

json stalk_json(const CochainComplex& c)
{
    json j;
    j["dims"] = json::object();
    j["d"] = json::object();
    if (c.empty())
        return j;
    for (int d = c.lo(); d <= c.hi(); ++d) {
        if (c.dim(d) > 0)
            j["dims"][std::to_string(d)] = c.dim(d);
        if (!c.d(d).zero())
            j["d"][std::to_string(d)] = matrix_json(c.d(d));
    }
    return j;
}

std::string kind_name(CellKind k)
{
    switch (k) {
    case CellKind::Vertex: return "vertex";
    case CellKind::VEdge: return "vertical-edge";
    case CellKind::FEdge: return "front-edge";
    case CellKind::Face: return "face";
    case CellKind::HalfPlane: return "half-plane";
    case CellKind::Point: return "point";
    case CellKind::Interval: return "interval";
    }
    return "?";
}

}  // namespace

CellSheaf read_sheaf_json(const std::string& text, const Front& f, Field field)
{
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw SheafError(std::string("malformed JSON: ") + e.what());
    }
    try {
        std::string fmt = j.value("format", std::string("legible"));
        if (fmt == "legible") {
            std::vector<LegibleRegion> regions;
            std::vector<LegibleArc> arcs;
            legible_parts(j, f, field, regions, arcs, "");
            return build_legible(f, regions, arcs, field);
        }
        if (fmt == "sum") {
            std::vector<Summand> parts;
            const json& ss = j.at("summands");
            for (std::size_t i = 0; i < ss.size(); ++i) {
                Summand s;
                s.component = ss[i].value("component", 0);
                s.shift = ss[i].value("shift", 0);
                Front sub = component_front(f, s.component);
                legible_parts(ss[i].at("sheaf"), sub, field, s.regions, s.arcs,
                              "summands[" + std::to_string(i) + "].");
                parts.push_back(std::move(s));
            }
            return build_sum(f, parts, field);
        }
        if (fmt == "cells")
            return from_cells(j, f, field);
        throw SheafError("unknown sheaf format \"" + fmt + "\"");
    } catch (const json::exception& e) {
        throw SheafError(std::string("malformed sheaf: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw SheafError(std::string("malformed sheaf: ") + e.what());
    } catch (const ComplexError& e) {
        throw SheafError(std::string("malformed sheaf: ") + e.what());
    }
}

CellSheaf read_sheaf_file(const std::string& path, const Front& f, Field field)
{
    std::ifstream in(path);
    if (!in)
        throw SheafError("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    try {
        return read_sheaf_json(ss.str(), f, field);
    } catch (const SheafError& e) {
        throw SheafError(path + ": " + e.what());
    }
}

std::string write_sheaf_json(const CellSheaf& s)
{
    const CellComplex& cx = s.complex();
    json j;
    j["format"] = "cells";
    j["cells"] = cx.size();
    j["stalks"] = json::object();
    j["gens"] = json::array();
    for (int c = 0; c < cx.size(); ++c)
        if (!s.stalk(c).is_zero_space())
            j["stalks"][std::to_string(c)] = stalk_json(s.stalk(c));
    for (int c = 0; c < cx.size(); ++c)
        for (auto [a, sg] : cx.cell(c).boundary) {
            const ChainMap* m = s.gen_ptr(a, c);
            if (!m || m->components().empty())
                continue;
            json mj = json::object();
            for (const auto& [d, mat] : m->components())
                mj[std::to_string(d)] = matrix_json(mat);
            j["gens"].push_back({{"from", a}, {"to", c}, {"map", mj}});
        }
    return j.dump(2) + "\n";
}

std::string write_complex_json(const CellComplex& cx)
{
    json j;
    j["ambient"] = cx.ambient;
    j["cells"] = json::array();
    for (int c = 0; c < cx.size(); ++c) {
        const Cell& cl = cx.cell(c);
        json b = json::array();
        for (auto [f, sg] : cl.boundary)
            b.push_back({f, sg});
        json cj = {{"id", c},
                   {"dim", cl.dim},
                   {"kind", kind_name(cl.kind)},
                   {"bounded", cl.bounded},
                   {"boundary", b}};
        if (cx.ambient == 1)
            cj["sample"] = format_rational(cl.sample.t);
        else
            cj["sample"] = {format_rational(cl.sample.x), format_rational(cl.sample.t)};
        j["cells"].push_back(cj);
    }
    return j.dump(2) + "\n";
}

}  // namespace lgs
