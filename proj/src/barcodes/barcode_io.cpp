#include "legsheaf/barcodes.hpp"

#include <fstream>
#include <sstream>

namespace lgs {

namespace {

std::vector<std::string> split_tabs(const std::string& line)
{
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == '\t') {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

}  // namespace

Barcode read_barcode_tsv(std::istream& in)
{
    std::vector<Bar> bars;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#')
            continue;
        auto f = split_tabs(line);
        if (f.size() != 4)
            throw BarcodeError("line " + std::to_string(lineno) + ": expected 4 tab-separated fields");
        try {
            Bar b;
            std::size_t pos = 0;
            b.degree = std::stoi(f[0], &pos);
            if (pos != f[0].size())
                throw std::invalid_argument("degree");
            b.start = parse_ext(f[1]);
            b.end = parse_ext(f[2]);
            b.mult = std::stoi(f[3], &pos);
            if (pos != f[3].size() || b.mult <= 0)
                throw std::invalid_argument("multiplicity");
            bars.push_back(b);
        } catch (const BarcodeError&) {
            throw;
        } catch (const std::exception& e) {
            throw BarcodeError("line " + std::to_string(lineno) + ": malformed field (" + e.what() + ")");
        }
    }
    try {
        return Barcode(std::move(bars));
    } catch (const BarcodeError& e) {
        throw BarcodeError(std::string("invalid barcode: ") + e.what());
    }
}

Barcode read_barcode_tsv_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw BarcodeError("cannot open " + path);
    try {
        return read_barcode_tsv(in);
    } catch (const BarcodeError& e) {
        throw BarcodeError(path + ": " + e.what());
    }
}

void write_barcode_tsv(std::ostream& out, const Barcode& b)
{
    for (const Bar& bar : b.bars())
        out << bar.degree << '\t' << format_ext(bar.start) << '\t' << format_ext(bar.end) << '\t' << bar.mult << '\n';
}

std::string barcode_tsv(const Barcode& b)
{
    std::ostringstream os;
    write_barcode_tsv(os, b);
    return os.str();
}

std::string barcode_svg(const Barcode& b)
{
    // Horizontal coordinates are rounded to integers on a fixed 0..kWidth grid.
    constexpr int kWidth = 600, kMargin = 40, kRow = 14, kGap = 24;
    Q lo(0), hi(1);
    bool seen = false;
    for (const Bar& bar : b.bars())
        for (const ExtQ* e : {&bar.start, &bar.end})
            if (e->finite()) {
                if (!seen || e->val < lo)
                    lo = e->val;
                if (!seen || e->val > hi)
                    hi = e->val;
                seen = true;
            }
    if (seen && lo == hi) {
        lo -= 1;
        hi += 1;
    }
    Q span = hi - lo;
    auto xcoord = [&](const ExtQ& e) -> long {
        if (e.inf < 0)
            return 0;
        if (e.inf > 0)
            return kWidth + 2 * kMargin;
        Q v = (e.val - lo) / span * kWidth;
        mpz_class f;
        mpz_fdiv_q(f.get_mpz_t(), v.get_num_mpz_t(), v.get_den_mpz_t());
        return kMargin + f.get_si();
    };
    std::ostringstream body;
    int y = kGap;
    int last_degree = 0;
    bool first = true;
    for (const Bar& bar : b.bars()) {
        if (first || bar.degree != last_degree) {
            if (!first)
                y += kGap;
            body << "  <text x=\"2\" y=\"" << y + 4 << "\" font-size=\"10\">deg " << bar.degree << "</text>\n";
            y += kRow;
            last_degree = bar.degree;
            first = false;
        }
        for (int k = 0; k < bar.mult; ++k) {
            body << "  <line x1=\"" << xcoord(bar.start) << "\" y1=\"" << y << "\" x2=\"" << xcoord(bar.end)
                 << "\" y2=\"" << y << "\" stroke=\"black\" stroke-width=\"3\"/>\n";
            y += kRow;
        }
    }
    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth + 2 * kMargin << "\" height=\"" << y + kGap
       << "\">\n";
    os << "  <desc>range " << format_rational(lo) << " .. " << format_rational(hi) << "</desc>\n";
    os << body.str();
    os << "</svg>\n";
    return os.str();
}

}  // namespace lgs
