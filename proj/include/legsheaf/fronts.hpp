#pragma once

#include "legsheaf/exactalg.hpp"

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace lgs {

class FrontError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Point2 {
    Q x, t;
    bool operator==(const Point2& o) const { return x == o.x && t == o.t; }
    bool operator<(const Point2& o) const { return x != o.x ? x < o.x : t < o.t; }
};

// Graph of a piecewise-linear function on [x0, x1].
struct Sheet {
    std::vector<Point2> pts;

    const Q& x0() const { return pts.front().x; }
    const Q& x1() const { return pts.back().x; }
    bool covers(const Q& x) const { return x0() <= x && x <= x1(); }
    Q at(const Q& x) const;
    // Slope of the segment just left/right of x (x must be strictly inside the domain on that side).
    Q slope_left(const Q& x) const;
    Q slope_right(const Q& x) const;
    bool has_breakpoint(const Q& x) const;
};

enum class CuspKind { Left, Right };

// Sheets a and b are born (left) or die (right) at x.
struct Cusp {
    Q x;
    int a = 0, b = 0;
    CuspKind kind = CuspKind::Left;
};

struct PointFront {
    std::vector<Q> points;
    std::vector<int> potentials;
};

struct PLFront {
    std::vector<Sheet> sheets;
    std::vector<Cusp> cusps;
    std::vector<int> potentials;  // one per sheet
};

struct Front {
    enum class Kind { Point, PL };
    Kind kind = Kind::Point;
    PointFront point;
    PLFront pl;
    std::string name;

    static Front of(PointFront p, std::string name = "");
    static Front of(PLFront p, std::string name = "");
    bool is_point() const { return kind == Kind::Point; }
    int dim() const { return is_point() ? 0 : 1; }  // n = dim of the Legendrian
    int strands() const;                             // points or sheets
    int potential(int strand) const;
};

struct Violation {
    std::string kind;
    std::string where;
};

struct ValidationReport {
    std::vector<Violation> violations;
    bool ok() const { return violations.empty(); }
    bool has(const std::string& kind) const;
    std::string summary() const;
};

ValidationReport validate(const Front& f);
void require_valid(const Front& f);

// Sheet with the larger t just beside the cusp.
int cusp_upper(const PLFront& f, const Cusp& c);
int cusp_lower(const PLFront& f, const Cusp& c);
Point2 cusp_point(const PLFront& f, const Cusp& c);
// Open slope interval spanned by the cusp's two branches.
std::pair<Q, Q> cusp_slopes(const PLFront& f, const Cusp& c);

// Component index per strand, and the number of components.
std::vector<int> components(const Front& f, int* count = nullptr);
std::vector<int> betti(const Front& f);

struct Chord {
    Q x;
    Q t_bottom, t_top, length;
    int bottom = 0, top = 0;  // strand ids
    int ind = 0;              // Morse index of top - bottom at the chord
    int degree = 0;
};

std::vector<Chord> enumerate_chords(const Front& f);
int chord_degree(const Front& f, const Chord& c);
// Minimum length over chords of degree i or n-i; +inf where none, for i in [0, n] and every chord degree.
std::map<int, ExtQ> min_chord_lengths(int n, const std::vector<Chord>& chords);
std::map<int, int> chord_counts(const std::vector<Chord>& chords);

// Transformations.
Front translate(const Front& f, const Q& c);
Front negate(const Front& f);
// Adds the piecewise-linear function h (breakpoints sorted by x, constant extension outside) to every strand.
Front perturb(const Front& f, const std::vector<Point2>& h);
Q eval_pl(const std::vector<Point2>& h, const Q& x);

// Chords between two fronts: pairs (strand of a, strand of b) whose slopes match where b lies below a.
// Used for displacement counts; requires the union to be transverse.
struct MixedChord {
    Q x, length;
    int a_strand = 0, b_strand = 0;
    bool a_on_top = true;
};
std::vector<MixedChord> mixed_chords(const Front& a, const Front& b);

// All u at which a vertex (breakpoint, cusp point or self-crossing) of one front meets the other
// after translating the second by u, together with parallel-overlap offsets.
std::vector<Q> overlay_events(const Front& a, const Front& b);
// u at which Reeb-chord-type tangencies between a and b translated by u occur.
std::vector<Q> chord_critical_values(const Front& a, const Front& b);
// Violations of strict overlay genericity of a and b (b already translated).
ValidationReport overlay_report(const Front& a, const Front& b);

// Self-crossings of a PL front (x, t, sheet i, sheet j).
struct Crossing {
    Q x, t;
    int i = 0, j = 0;
};
std::vector<Crossing> crossings(const PLFront& f);

Front read_front_json(const std::string& text);
Front read_front_file(const std::string& path);
std::string write_front_json(const Front& f);

}  // namespace lgs
