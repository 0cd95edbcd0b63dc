#include "legsheaf/barcodes.hpp"
#include "legsheaf/cellsheaf.hpp"
#include "legsheaf/fronts.hpp"
#include "legsheaf/homengine.hpp"
#include "legsheaf/persistengine.hpp"
#include "legsheaf/reports.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#ifndef LEGSHEAF_DEFAULT_CORPUS
#define LEGSHEAF_DEFAULT_CORPUS "corpus"
#endif

using namespace lgs;
namespace fs = std::filesystem;

namespace {

struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string corpus_dir()
{
    const char* env = std::getenv("LEGSHEAF_CORPUS");
    return env && *env ? env : LEGSHEAF_DEFAULT_CORPUS;
}

// Paths that do not exist are looked up in the corpus directory.
std::string resolve(const std::string& path)
{
    if (fs::exists(path))
        return path;
    fs::path alt = fs::path(corpus_dir()) / path;
    if (fs::exists(alt))
        return alt.string();
    throw InputError("missing file: " + path);
}

Point2 parse_point(const std::string& s)
{
    auto comma = s.find(',');
    if (comma == std::string::npos)
        throw CLI::ValidationError("--skyscraper", "expected x,t");
    return Point2{parse_rational(s.substr(0, comma)), parse_rational(s.substr(comma + 1))};
}

nlohmann::json dims_json(const DegreeDims& d)
{
    nlohmann::json j = nlohmann::json::object();
    for (auto [k, n] : trim(d))
        j[std::to_string(k)] = n;
    return j;
}

int cmd_validate(const std::string& path, const std::string& format)
{
    Front f = read_front_file(resolve(path));
    ValidationReport r = validate(f);
    if (format == "json") {
        nlohmann::json j;
        j["ok"] = r.ok();
        j["violations"] = nlohmann::json::array();
        for (const auto& v : r.violations)
            j["violations"].push_back({{"kind", v.kind}, {"where", v.where}});
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << (r.ok() ? "ok\n" : r.summary());
    }
    return r.ok() ? 0 : 1;
}

int cmd_chords(const std::string& path, const std::string& format)
{
    Front f = read_front_file(resolve(path));
    require_valid(f);
    auto chords = enumerate_chords(f);
    if (format == "json") {
        nlohmann::json j = nlohmann::json::array();
        for (const Chord& c : chords)
            j.push_back({{"x", format_rational(c.x)},
                         {"bottom", c.bottom},
                         {"top", c.top},
                         {"t_bottom", format_rational(c.t_bottom)},
                         {"t_top", format_rational(c.t_top)},
                         {"length", format_rational(c.length)},
                         {"degree", c.degree}});
        std::cout << j.dump(2) << "\n";
        return 0;
    }
    std::cout << "x\tbottom\ttop\tlength\tdegree\n";
    for (const Chord& c : chords)
        std::cout << format_rational(c.x) << "\t" << c.bottom << "\t" << c.top << "\t" << format_rational(c.length)
                  << "\t" << c.degree << "\n";
    return 0;
}

int cmd_sheaf_check(const std::string& fp, const std::string& sp, Field fld, const std::string& format)
{
    Front f = read_front_file(resolve(fp));
    require_valid(f);
    CellSheaf s = read_sheaf_file(resolve(sp), f, fld);
    SheafReport r = check_ss(s, f);
    MicrolocalRank mr;
    bool have_rank = r.local_ok();
    if (have_rank)
        mr = microlocal_rank(s, f);
    if (format == "json") {
        nlohmann::json j;
        j["ok"] = r.ok();
        j["compact"] = r.compact;
        j["violations"] = nlohmann::json::array();
        for (const auto& v : r.violations)
            j["violations"].push_back({{"kind", v.kind}, {"cells", v.cells}, {"detail", v.detail}});
        if (have_rank) {
            j["rank"] = mr.rank;
            j["pure"] = mr.pure;
            j["microstalk"] = dims_json(mr.dims);
        }
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << (r.ok() ? "ok\n" : r.summary());
        std::cout << "compact support: " << (r.compact ? "yes" : "no") << "\n";
        if (have_rank)
            std::cout << "microlocal rank: " << mr.rank << (mr.pure ? " (pure)" : " (impure)")
                      << ", microstalk " << format_dims(mr.dims) << "\n";
    }
    return r.ok() ? 0 : 1;
}

int cmd_hom(const std::string& fp, const std::string& sf, const std::string& sg, Field fld, const std::string& format)
{
    Front f = read_front_file(resolve(fp));
    require_valid(f);
    CellSheaf a = read_sheaf_file(resolve(sf), f, fld);
    require_ss(a, f, true);
    HomReport r;
    if (sg.empty()) {
        r = hom_report(a, f, a, f);
    } else {
        CellSheaf b = read_sheaf_file(resolve(sg), f, fld);
        require_ss(b, f, true);
        r = hom_report(a, f, b, f);
    }
    if (format == "json") {
        std::cout << hom_report_json(r) << "\n";
    } else {
        std::cout << "Hom+ " << format_dims(r.hom_plus) << "\n";
        std::cout << "Hom- " << format_dims(r.hom_minus) << "\n";
        std::cout << "cone " << format_dims(r.sato_cone_dims) << " expected " << format_dims(r.expected_cone_dims)
                  << "\n";
        std::cout << "duality " << (r.duality_ok ? "pass" : "fail") << "\n";
        std::cout << "triangle " << (r.triangle_ok ? "pass" : "fail") << "\n";
        std::cout << "cone check " << (r.cone_ok ? "pass" : "fail") << "\n";
        std::cout << "Hom- slice check " << (r.minus_ok ? "pass" : "fail") << "\n";
        for (const auto& d : r.diagnostics)
            std::cout << "  " << d << "\n";
    }
    return r.ok() ? 0 : 1;
}

int cmd_barcode(const std::vector<std::string>& files, const std::string& sky, Field fld, const std::string& format)
{
    if (files.size() != 2 && files.size() != 4)
        throw CLI::ValidationError("barcode", "expected <front> <sheaf> [<front2> <sheaf2>]");
    Front f = read_front_file(resolve(files[0]));
    require_valid(f);
    CellSheaf a = read_sheaf_file(resolve(files[1]), f, fld);
    require_ss(a, f, sky.empty());
    PersistenceProblem p;
    if (!sky.empty()) {
        if (files.size() != 2)
            throw CLI::ValidationError("barcode", "--skyscraper takes a single front and sheaf");
        p = PersistenceProblem::skyscraper_at(parse_point(sky), a, f);
    } else if (files.size() == 4) {
        Front g = read_front_file(resolve(files[2]));
        require_valid(g);
        CellSheaf b = read_sheaf_file(resolve(files[3]), g, fld);
        require_ss(b, g, true);
        p = PersistenceProblem::pair(a, f, b, g);
    } else {
        p = PersistenceProblem::self(a, f);
    }
    Barcode bc = barcode(p);
    if (format == "svg") {
        std::cout << barcode_svg(bc);
    } else if (format == "json") {
        nlohmann::json j;
        j["bars"] = nlohmann::json::array();
        for (const Bar& b : bc.bars())
            j["bars"].push_back(
                {{"degree", b.degree}, {"start", format_ext(b.start)}, {"end", format_ext(b.end)}, {"mult", b.mult}});
        nlohmann::json crit = nlohmann::json::array();
        for (const Q& c : critical_values(p))
            crit.push_back(format_rational(c));
        j["critical"] = crit;
        EndpointReport er = verify_endpoints(p, bc);
        j["endpoints_ok"] = er.ok;
        j["endpoint_diagnostics"] = er.diagnostics;
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << barcode_tsv(bc);
    }
    return 0;
}

int cmd_distance(const std::string& a, const std::string& b, const std::string& format)
{
    Barcode x = read_barcode_tsv_file(resolve(a));
    Barcode y = read_barcode_tsv_file(resolve(b));
    DistanceResult d = interleaving_distance(x, y);
    if (format == "json") {
        nlohmann::json j{{"distance", format_ext(d.value)}, {"method", d.method}};
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << format_ext(d.value) << "\n";
        std::cout << "method: " << d.method << "\n";
    }
    return 0;
}

int cmd_report(const std::string& fp, const std::string& sp, const std::string& perturb, const std::string& eps,
               Field fld, const std::string& format)
{
    Front f = read_front_file(resolve(fp));
    require_valid(f);
    CellSheaf s = read_sheaf_file(resolve(sp), f, fld);
    std::vector<TheoremReport> reps;
    reps.push_back(support_diagnostics(f, s));
    reps.push_back(betti_bound(f, s));
    reps.push_back(morse_inequalities(f, s));
    if (!perturb.empty()) {
        if (eps.empty())
            throw CLI::ValidationError("--eps", "required with --perturb");
        Front g = read_front_file(resolve(perturb));
        reps.push_back(displacement_bound(f, s, g, parse_rational(eps)));
    }
    std::cout << (format == "json" ? report_json(reps) + "\n" : report_table(reps));
    for (const auto& r : reps)
        if (r.verdict == Verdict::Fail)
            return 1;
    return 0;
}

int cmd_corpus(const std::string& format)
{
    std::string dir = corpus_dir();
    std::ifstream in(fs::path(dir) / "index.json");
    if (!in)
        throw InputError("cannot open " + (fs::path(dir) / "index.json").string());
    nlohmann::json j = nlohmann::json::parse(in);
    if (format == "json") {
        std::cout << j.dump(2) << "\n";
        return 0;
    }
    for (const auto& e : j.at("examples")) {
        std::cout << e.at("name").get<std::string>() << "\t" << e.at("front").get<std::string>() << "\t"
                  << (e.at("sheaf").is_null() ? "-" : e.at("sheaf").get<std::string>());
        if (e.contains("skyscraper"))
            std::cout << "\tskyscraper " << e["skyscraper"][0].get<std::string>() << ","
                      << e["skyscraper"][1].get<std::string>();
        std::cout << "\t" << e.value("note", "") << "\n";
    }
    return 0;
}

int cmd_cells(const std::string& fp, const std::string& sp, Field fld)
{
    Front f = read_front_file(resolve(fp));
    require_valid(f);
    if (sp.empty()) {
        std::cout << write_complex_json(*arrange(f)) << "\n";
        return 0;
    }
    CellSheaf s = read_sheaf_file(resolve(sp), f, fld);
    std::cout << write_sheaf_json(s) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Sheaf barcodes for Legendrian fronts"};
    app.require_subcommand(1);
    app.fallthrough();
    std::string field_s = "2", format = "table";
    app.add_option("--field", field_s, "coefficient field: 2 (default), a prime p, or Q");
    app.add_option("--format", format, "output format")
        ->check(CLI::IsMember({"table", "json", "tsv", "svg"}));

    std::string front, sheaf, sheaf2, a, b, perturb, eps, sky;
    std::vector<std::string> files;

    auto* validate_cmd = app.add_subcommand("validate", "check a front");
    validate_cmd->add_option("front", front)->required();
    auto* chords_cmd = app.add_subcommand("chords", "list Reeb chords with lengths and degrees");
    chords_cmd->add_option("front", front)->required();
    auto* check_cmd = app.add_subcommand("sheaf-check", "check the local conditions of a sheaf");
    check_cmd->add_option("front", front)->required();
    check_cmd->add_option("sheaf", sheaf)->required();
    auto* hom_cmd = app.add_subcommand("hom", "Hom+/Hom- dimensions, duality and triangle checks");
    hom_cmd->add_option("front", front)->required();
    hom_cmd->add_option("sheafF", sheaf)->required();
    hom_cmd->add_option("sheafG", sheaf2);
    auto* bar_cmd = app.add_subcommand("barcode", "barcode of Hom(F, T_u G)");
    bar_cmd->add_option("files", files, "<front> <sheafF> [<front2> <sheafG>]")->required();
    bar_cmd->add_option("--skyscraper", sky, "use k at the point x,t as F");
    auto* dist_cmd = app.add_subcommand("distance", "interleaving distance of two barcode TSV files");
    dist_cmd->add_option("a", a)->required();
    dist_cmd->add_option("b", b)->required();
    auto* rep_cmd = app.add_subcommand("report", "chord bound verdicts");
    rep_cmd->add_option("front", front)->required();
    rep_cmd->add_option("sheaf", sheaf)->required();
    rep_cmd->add_option("--perturb", perturb, "perturbed front for the displacement bound");
    rep_cmd->add_option("--eps", eps, "oscillation budget p/q");
    app.add_subcommand("corpus", "list bundled examples");
    auto* cells_cmd = app.add_subcommand("cells", "dump the cell complex, or a sheaf in cells format");
    cells_cmd->add_option("front", front)->required();
    cells_cmd->add_option("sheaf", sheaf);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    Field fld;
    try {
        fld = Field::parse(field_s);
    } catch (const FieldError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    try {
        auto* sub = app.get_subcommands().front();
        std::string name = sub->get_name();
        if (name == "validate")
            return cmd_validate(front, format);
        if (name == "chords")
            return cmd_chords(front, format);
        if (name == "sheaf-check")
            return cmd_sheaf_check(front, sheaf, fld, format);
        if (name == "hom")
            return cmd_hom(front, sheaf, sheaf2, fld, format);
        if (name == "barcode")
            return cmd_barcode(files, sky, fld, format);
        if (name == "distance")
            return cmd_distance(a, b, format);
        if (name == "report")
            return cmd_report(front, sheaf, perturb, eps, fld, format);
        if (name == "corpus")
            return cmd_corpus(format);
        if (name == "cells")
            return cmd_cells(front, sheaf, fld);
    } catch (const CLI::ValidationError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
