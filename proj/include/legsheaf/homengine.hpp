#pragma once

#include "legsheaf/cellsheaf.hpp"
#include "legsheaf/exactalg.hpp"

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace lgs {

// Two-sided nerve complex over chains s0 < ... < sk of the face poset.
// Only chains with F(s0) != 0 and G(sk) != 0 are kept; the others carry zero.
struct NerveComplex {
    struct Block {
        int chain = 0;   // index into chains
        int m = 0;       // Hom degree
        int offset = 0;  // position inside the total degree k + m
        int size = 0;
    };
    std::vector<std::vector<int>> chains;
    std::map<int, std::vector<Block>> blocks;  // by total degree
    CochainComplex complex;
};

NerveComplex rhom_nerve(const CellSheaf& f, const CellSheaf& g);
CochainComplex rhom(const CellSheaf& f, const CellSheaf& g);
CochainComplex global_sections(const CellSheaf& s);

// Chain map RHom(F, G1) -> RHom(F, G2) by postcomposition with a cellwise map G1 -> G2.
// Both nerves must be built from sheaves on the same complex with the same F.
ChainMap rhom_postcompose(const NerveComplex& a, const NerveComplex& b, const CellSheaf& f, const CellSheaf& g1,
                          const CellSheaf& g2, const std::vector<ChainMap>& cellwise);

// F and T_u G pulled back to the overlay of their complexes.
struct OverlayPair {
    CellSheaf f, g;
};
OverlayPair overlay_pair(const CellSheaf& f, const CellSheaf& g, const Q& u);
// Layers and markers of cx translated by u.
std::vector<Layer> shifted_layers(const CellComplex& cx, const Q& u);
std::vector<Point2> shifted_markers(const CellComplex& cx, const Q& u);

// Hom(F, G) for compactly supported sheaves (theorem identities); both on a common complex.
CochainComplex hom_plus(const CellSheaf& f, const CellSheaf& g);
CochainComplex hom_minus(const CellSheaf& f, const CellSheaf& g);

// Small positive offset below every positive critical value of the pair for which the
// overlays at +-delta and the triple overlay are generic.
Q small_offset(const CellSheaf& f, const CellSheaf& g, const std::vector<Q>& critical);

struct SatoCone {
    Q delta;
    DegreeDims minus, plus, cone;   // cohomology dims
    DegreeDims map_ranks;           // ranks of H(minus) -> H(plus)
    CochainComplex complex;
};
// Cone of the translation map RHom(F, T_{-delta} G) -> RHom(F, T_{delta} G).
SatoCone sabloff_cone(const CellSheaf& f, const CellSheaf& g, const std::vector<Q>& critical);

struct DualityCheck {
    bool ok = true;
    int n = 0;
    DegreeDims plus, minus;
    std::vector<std::string> diagnostics;
};
DualityCheck duality_check(const CellSheaf& f, const CellSheaf& g, int n);

// dims of H^*(Λ; Hom(M_F, M_G)) from per-component Betti numbers and microstalks.
DegreeDims expected_cone_dims(const std::vector<DegreeDims>& component_betti, const std::vector<DegreeDims>& mf,
                              const std::vector<DegreeDims>& mg);
DegreeDims hom_dims(const DegreeDims& a, const DegreeDims& b);  // dims of Hom^*(A, B) for graded spaces
DegreeDims convolve(const DegreeDims& a, const DegreeDims& b);

struct HomReport {
    int n = 0;
    Field field;
    DegreeDims hom_plus, hom_minus, hom_minus_slice, sato_cone_dims, expected_cone_dims;
    Q delta;
    bool duality_ok = false, triangle_ok = false, cone_ok = false, minus_ok = false;
    std::vector<std::string> diagnostics;
    bool ok() const { return duality_ok && triangle_ok && cone_ok && minus_ok; }
};
// Full battery for sheaves f on front ff and g on front fg (same front for the cone comparison).
HomReport hom_report(const CellSheaf& f, const Front& ff, const CellSheaf& g, const Front& fg);
std::string hom_report_json(const HomReport& r);

// Betti numbers of the underlying Legendrian, one entry per front component.
std::vector<DegreeDims> component_betti(const Front& f);

}  // namespace lgs
