#include "doctest.h"

#include "json.hpp"

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>
#include <sys/wait.h>

namespace {

struct Run {
    int code = -1;
    std::string out;
};

Run run(const std::string& args)
{
    std::string cmd = std::string(LEGSHEAF_CLI_PATH) + " " + args + " 2>/dev/null";
    Run r;
    FILE* p = popen(cmd.c_str(), "r");
    REQUIRE(p);
    std::array<char, 4096> buf{};
    std::size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), p)) > 0)
        r.out.append(buf.data(), n);
    int status = pclose(p);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string corpus(const std::string& name) { return std::string(LEGSHEAF_CORPUS_DIR) + "/" + name; }

std::string temp_file(const std::string& name, const std::string& text)
{
    std::string path = "/tmp/legsheaf_cli_test_" + name;
    std::ofstream(path) << text;
    return path;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("point example barcode")
{
    Run r = run("barcode " + corpus("point-pair.json") + " " + corpus("halfopen.json"));
    CHECK(r.code == 0);
    CHECK(r.out == "0\t0/1\t1/1\t1\n1\t-1/1\t0/1\t1\n");
}

TEST_CASE("corpus-relative paths and determinism")
{
    Run a = run("barcode unknot.json eye.json");
    Run b = run("barcode unknot.json eye.json");
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(a.out == "0\t0/1\t2/1\t1\n2\t-2/1\t0/1\t1\n");
}

TEST_CASE("distance round trip")
{
    Run bc = run("barcode point-pair.json halfopen.json");
    std::string a = temp_file("a.tsv", bc.out);
    Run d = run("distance " + a + " " + a);
    CHECK(d.code == 0);
    CHECK(d.out.rfind("0/1\n", 0) == 0);
    std::string b = temp_file("b.tsv", "0\t0/1\t3/1\t1\n");
    std::string c = temp_file("c.tsv", "0\t1/1\t3/1\t1\n");
    CHECK(run("distance " + b + " " + c).out.rfind("1/1\n", 0) == 0);
}

TEST_CASE("report on the unknot passes")
{
    Run r = run("report unknot.json eye.json");
    CHECK(r.code == 0);
    CHECK(r.out.find("betti bound: pass") != std::string::npos);
    CHECK(r.out.find("morse inequalities: pass") != std::string::npos);
    Run h = run("report point-one.json halfline.json --format json");
    CHECK(h.code == 0);
    auto j = nlohmann::json::parse(h.out);
    CHECK(j[1]["verdict"] == "inapplicable");
}

TEST_CASE("hom json")
{
    Run r = run("hom point-pair.json halfopen.json --format json");
    CHECK(r.code == 0);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j["hom_plus"]["0"] == 1);
    CHECK(j["hom_minus"]["1"] == 1);
    CHECK(j["duality_ok"] == true);
}

TEST_CASE("skyscraper barcode")
{
    Run r = run("barcode birth-after.json birth-sheaf.json --skyscraper 0,1");
    CHECK(r.code == 0);
    CHECK(r.out == "0\t2/5\t8/5\t1\n");
}

TEST_CASE("svg output has no floating point numbers")
{
    Run r = run("barcode unknot.json eye.json --format svg");
    CHECK(r.code == 0);
    CHECK(r.out.find("<svg") != std::string::npos);
    bool decimal = false;
    for (std::size_t i = 1; i + 1 < r.out.size(); ++i)
        if (r.out[i] == '.' && std::isdigit(static_cast<unsigned char>(r.out[i - 1])) &&
            std::isdigit(static_cast<unsigned char>(r.out[i + 1])))
            decimal = true;
    CHECK_FALSE(decimal);
}

TEST_CASE("exit codes")
{
    CHECK(run("validate unknot.json").code == 0);
    CHECK(run("validate no-such-front.json").code == 1);
    CHECK(run("validate " + temp_file("bad.json", "{\"kind\": \"pl\", ")).code == 1);
    CHECK(run("--field 4 validate unknot.json").code == 2);
    CHECK(run("frobnicate").code == 2);
    CHECK(run("").code == 2);
    CHECK(run("barcode unknot.json").code == 2);
    CHECK(run("sheaf-check unknot.json eye.json").code == 0);
    CHECK(run("sheaf-check unknot.json constant.json").code == 1);
    CHECK(run("--field Q chords trefoil.json").code == 0);
}

TEST_CASE("corpus listing and override")
{
    Run r = run("corpus");
    CHECK(r.code == 0);
    for (const char* name : {"point-pair", "unknot", "trefoil", "link-overlap", "zigzag"})
        CHECK(r.out.find(name) != std::string::npos);
    setenv("LEGSHEAF_CORPUS", "/nonexistent", 1);
    Run missing = run("corpus");
    unsetenv("LEGSHEAF_CORPUS");
    CHECK(missing.code == 1);
}

}
