#include "legsheaf/fronts.hpp"

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
    throw FrontError(where + ": expected a rational string \"p/q\"");
}

const json& field(const json& j, const char* key, const std::string& where)
{
    if (!j.is_object() || !j.contains(key))
        throw FrontError(where + ": missing \"" + key + "\"");
    return j.at(key);
}

std::vector<int> potentials(const json& j, const std::string& where)
{
    std::vector<int> out;
    if (!j.is_array())
        throw FrontError(where + ": \"potentials\" must be an array");
    for (const json& v : j) {
        if (!v.is_number_integer())
            throw FrontError(where + ": potentials must be integers");
        out.push_back(v.get<int>());
    }
    return out;
}

}  // namespace

Front read_front_json(const std::string& text)
{
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw FrontError(std::string("malformed JSON: ") + e.what());
    }
    try {
        std::string kind = field(j, "kind", "front").get<std::string>();
        std::string name = j.value("name", std::string());
        if (kind == "point") {
            PointFront p;
            const json& pts = field(j, "points", "front");
            if (!pts.is_array())
                throw FrontError("front: \"points\" must be an array");
            for (std::size_t i = 0; i < pts.size(); ++i)
                p.points.push_back(num(pts[i], "points[" + std::to_string(i) + "]"));
            if (j.contains("potentials"))
                p.potentials = potentials(j["potentials"], "front");
            else
                p.potentials.assign(p.points.size(), 0);
            return Front::of(std::move(p), name);
        }
        if (kind == "pl") {
            PLFront p;
            const json& sheets = field(j, "sheets", "front");
            if (!sheets.is_array())
                throw FrontError("front: \"sheets\" must be an array");
            for (std::size_t s = 0; s < sheets.size(); ++s) {
                std::string where = "sheets[" + std::to_string(s) + "]";
                const json& bps = field(sheets[s], "breakpoints", where);
                Sheet sh;
                for (std::size_t k = 0; k < bps.size(); ++k) {
                    std::string w = where + ".breakpoints[" + std::to_string(k) + "]";
                    if (!bps[k].is_array() || bps[k].size() != 2)
                        throw FrontError(w + ": expected [x, t]");
                    sh.pts.push_back(Point2{num(bps[k][0], w), num(bps[k][1], w)});
                }
                p.sheets.push_back(std::move(sh));
            }
            const json& cusps = field(j, "cusps", "front");
            for (std::size_t c = 0; c < cusps.size(); ++c) {
                std::string where = "cusps[" + std::to_string(c) + "]";
                Cusp cu;
                cu.x = num(field(cusps[c], "x", where), where + ".x");
                const json& ss = field(cusps[c], "sheets", where);
                if (!ss.is_array() || ss.size() != 2)
                    throw FrontError(where + ": \"sheets\" must be a pair of indices");
                cu.a = ss[0].get<int>();
                cu.b = ss[1].get<int>();
                std::string k = field(cusps[c], "kind", where).get<std::string>();
                if (k == "left")
                    cu.kind = CuspKind::Left;
                else if (k == "right")
                    cu.kind = CuspKind::Right;
                else
                    throw FrontError(where + ": kind must be \"left\" or \"right\"");
                p.cusps.push_back(cu);
            }
            p.potentials = potentials(field(j, "potentials", "front"), "front");
            return Front::of(std::move(p), name);
        }
        throw FrontError("front: unknown kind \"" + kind + "\"");
    } catch (const json::exception& e) {
        throw FrontError(std::string("malformed front: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw FrontError(std::string("malformed front: ") + e.what());
    }
}

Front read_front_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw FrontError("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    try {
        return read_front_json(ss.str());
    } catch (const FrontError& e) {
        throw FrontError(path + ": " + e.what());
    }
}

std::string write_front_json(const Front& f)
{
    json j;
    if (!f.name.empty())
        j["name"] = f.name;
    if (f.is_point()) {
        j["kind"] = "point";
        j["points"] = json::array();
        for (const Q& p : f.point.points)
            j["points"].push_back(format_rational(p));
        j["potentials"] = f.point.potentials;
    } else {
        j["kind"] = "pl";
        j["sheets"] = json::array();
        for (const Sheet& s : f.pl.sheets) {
            json bp = json::array();
            for (const Point2& p : s.pts)
                bp.push_back({format_rational(p.x), format_rational(p.t)});
            j["sheets"].push_back({{"breakpoints", bp}});
        }
        j["cusps"] = json::array();
        for (const Cusp& c : f.pl.cusps)
            j["cusps"].push_back({{"x", format_rational(c.x)},
                                  {"sheets", {c.a, c.b}},
                                  {"kind", c.kind == CuspKind::Left ? "left" : "right"}});
        j["potentials"] = f.pl.potentials;
    }
    return j.dump(2) + "\n";
}

}  // namespace lgs
