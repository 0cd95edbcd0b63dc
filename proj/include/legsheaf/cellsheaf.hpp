#pragma once

#include "legsheaf/exactalg.hpp"
#include "legsheaf/fronts.hpp"

#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace lgs {

class SheafError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A front placed in the plane after a vertical translation.
struct Layer {
    Front front;
    Q shift;
};

enum class CellKind {
    Vertex,     // 0-cell
    VEdge,      // segment or ray of an event line
    FEdge,      // piece of a strand between two event lines
    Face,       // 2-cell between two strands of a slab
    HalfPlane,  // everything left or right of the outermost event lines
    Point,      // 1-d complex: a point of ℝ
    Interval    // 1-d complex: open interval or ray
};

struct StrandRef {
    int layer = 0, strand = 0;
    bool operator==(const StrandRef& o) const { return layer == o.layer && strand == o.strand; }
    bool operator<(const StrandRef& o) const { return layer != o.layer ? layer < o.layer : strand < o.strand; }
};

struct Cell {
    int dim = 0;
    CellKind kind = CellKind::Vertex;
    Point2 sample;  // for 1-d complexes the coordinate is sample.t
    bool bounded = true;
    // Strands through a vertex or point, or the strand carrying a front edge.
    std::vector<StrandRef> strands;
    bool marker = false;
    // Codimension-one faces with incidence numbers.
    std::vector<std::pair<int, int>> boundary;
};

class CellComplex {
public:
    int ambient = 2;
    std::vector<Layer> layers;
    std::vector<Front> placed;     // layers with the shift applied
    std::vector<bool> duplicate;   // layer repeats an earlier one and contributes no strands
    std::vector<Point2> markers;
    std::vector<Cell> cells;
    std::vector<Q> lines;  // event lines (2-d) or points (1-d), increasing

    int size() const { return static_cast<int>(cells.size()); }
    const Cell& cell(int c) const { return cells.at(c); }
    // All proper faces / cofaces, sorted.
    const std::vector<int>& faces(int c) const { return faces_.at(c); }
    const std::vector<int>& cofaces(int c) const { return cofaces_.at(c); }
    bool is_face(int a, int b) const;  // a is a proper face of b
    int incidence(int face, int cell) const;
    int locate(const Point2& p) const;
    std::string describe(int c) const;
    bool same_geometry(const CellComplex& o) const;

    // Vertical cells on event line k, bottom to top (rays included), and vertex ids with their heights.
    struct LineData {
        std::vector<std::pair<Q, int>> vertices;
        std::vector<int> vcells;
    };
    // Strands over slab k (between lines k-1 and k), bottom to top, and the 2-cells between them.
    struct SlabData {
        std::vector<std::pair<StrandRef, int>> edges;
        std::vector<int> faces;
    };
    std::vector<LineData> line_data;
    std::vector<SlabData> slab_data;  // size lines+1; slab 0 and slab last are half-planes
    // 1-d complexes: cell ids of points and of intervals (intervals.size() == points + 1).
    std::vector<int> point_cells, interval_cells;

    void finalize();  // computes face closures and sorts ids

private:
    std::vector<std::vector<int>> faces_, cofaces_;
};

using ComplexPtr = std::shared_ptr<const CellComplex>;

// Overlay arrangement of translated fronts plus marker points (vertices).
// Throws SheafError naming the offending pair and shift when the overlay is not generic.
ComplexPtr arrange(const std::vector<Layer>& layers, const std::vector<Point2>& markers = {});
ComplexPtr arrange(const Front& f);

// Value of a strand of a layer at x (shift included).
Q strand_at(const Layer& l, int strand, const Q& x);

class CellSheaf {
public:
    CellSheaf() = default;
    CellSheaf(ComplexPtr cx, Field f);

    const CellComplex& complex() const { return *cx_; }
    ComplexPtr complex_ptr() const { return cx_; }
    const Field& field() const { return field_; }

    const CochainComplex& stalk(int c) const { return *stalks_.at(c); }
    std::shared_ptr<const CochainComplex> stalk_ptr(int c) const { return stalks_.at(c); }
    void set_stalk(int c, std::shared_ptr<const CochainComplex> s);
    // Generization map F(a) -> F(b) for a a face of b (identity for a == b).
    ChainMap gen(int a, int b) const;
    const ChainMap* gen_ptr(int a, int b) const;
    void set_gen(int a, int b, ChainMap m);
    bool is_zero() const;
    bool compact_support() const;  // unbounded cells acyclic

private:
    ComplexPtr cx_;
    Field field_;
    std::vector<std::shared_ptr<const CochainComplex>> stalks_;
    std::map<std::pair<int, int>, ChainMap> gens_;
};

// The cellular description of the local conditions of a sheaf with singular support on the front.
struct SheafViolation {
    std::string kind;
    std::vector<int> cells;
    std::string detail;
};
struct SheafReport {
    std::vector<SheafViolation> violations;
    bool compact = true;
    bool ok() const { return violations.empty(); }
    bool local_ok() const;  // ignoring compact support
    bool has(const std::string& kind) const;
    std::string summary() const;
};

// s must live on arrange(f) (or a refinement whose first layer is f).
SheafReport check_ss(const CellSheaf& s, const Front& f);
void require_ss(const CellSheaf& s, const Front& f, bool need_compact);
bool functorial(const CellSheaf& s, std::string* where = nullptr);
// Tot(N -> W + E -> S) for a commuting square is acyclic.
bool crossing_square_acyclic(const ChainMap& nw, const ChainMap& ne, const ChainMap& ws, const ChainMap& es);

// Microstalk at a point on a smooth arc: Tot(F_+ -> F_-), shifted so the degree rises by d(p).
CochainComplex microstalk(const CellSheaf& s, const Front& f, const Point2& p);
struct MicrolocalRank {
    int rank = 0;
    bool pure = true;
    DegreeDims dims;                       // normalized microstalk cohomology (first arc)
    std::vector<DegreeDims> per_component; // one per component of the front
};
MicrolocalRank microlocal_rank(const CellSheaf& s, const Front& f);

// Sheaf operations.
CellSheaf pullback(const CellSheaf& s, ComplexPtr refined);
// F'(σ) = s at (sample of σ) - (0, u): the sheaf T_u s on a complex refining the translated front.
CellSheaf pullback_translated(const CellSheaf& s, const Q& u, ComplexPtr refined);
CellSheaf translate(const CellSheaf& s, const Q& c);
CellSheaf dual(const CellSheaf& s);
CellSheaf tensor(const CellSheaf& a, const CellSheaf& b);
CellSheaf direct_sum(const CellSheaf& a, const CellSheaf& b);
CellSheaf shifted(const CellSheaf& s, int n);
CellSheaf zero_sheaf(ComplexPtr cx, Field f);
CellSheaf constant_sheaf(ComplexPtr cx, Field f);
// k at one vertex of the complex (a marker), 0 elsewhere.
CellSheaf skyscraper(ComplexPtr cx, Field f, const Point2& p);
// Compactly supported cellular cochains over the open star of a cell.
CochainComplex star_sections_c(const CellSheaf& s, int c);

// Cellwise map T_a s -> T_b s (b > a) on a complex refining both translates: downward propagation by b - a.
// Components are indexed by cell; throws if a region map needed for the walk is not invertible.
std::vector<ChainMap> propagation_map(const CellSheaf& s, const Q& a, const Q& b, const CellSheaf& ta,
                                      const CellSheaf& tb);

// Builders.
struct LegibleRegion {
    Point2 at;
    CochainComplex stalk;
};
struct LegibleArc {
    int strand = 0;
    Q x;
    std::map<int, Matrix> map;
};
// Regions not listed carry 0. Arc maps go from the region above the arc to the region below.
CellSheaf build_legible(const Front& f, const std::vector<LegibleRegion>& regions,
                        const std::vector<LegibleArc>& arcs, Field field);
// Direct sum of sheaves given on the components of f, each shifted.
struct Summand {
    int component = 0;
    int shift = 0;
    std::vector<LegibleRegion> regions;
    std::vector<LegibleArc> arcs;
};
CellSheaf build_sum(const Front& f, const std::vector<Summand>& summands, Field field);
// Front made of the strands of one component (cusps and potentials carried along).
Front component_front(const Front& f, int component, std::vector<int>* strand_map = nullptr);

CellSheaf read_sheaf_json(const std::string& text, const Front& f, Field field);
CellSheaf read_sheaf_file(const std::string& path, const Front& f, Field field);
std::string write_sheaf_json(const CellSheaf& s);  // cells format
std::string write_complex_json(const CellComplex& cx);

}  // namespace lgs
