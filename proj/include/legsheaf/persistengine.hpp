#pragma once

#include "legsheaf/barcodes.hpp"
#include "legsheaf/cellsheaf.hpp"
#include "legsheaf/homengine.hpp"

#include <string>
#include <vector>

namespace lgs {

// Hom(F, T_u G) as u varies. With a skyscraper, F = k_p and the slice is shifted by 2 so that
// it equals the stalk of T_u G at p.
struct PersistenceProblem {
    CellSheaf f, g;
    Front front_f, front_g;
    bool skyscraper = false;
    Point2 point;

    const Field& field() const { return g.field(); }
    int degree_shift() const { return skyscraper ? 2 : 0; }

    static PersistenceProblem pair(CellSheaf f, Front ff, CellSheaf g, Front fg);
    static PersistenceProblem self(const CellSheaf& s, const Front& f);
    static PersistenceProblem skyscraper_at(const Point2& p, CellSheaf g, Front fg);
};

std::vector<Q> critical_values(const PersistenceProblem& p);
// Throws SheafError when u is critical.
CochainComplex slice(const PersistenceProblem& p, const Q& u);
DegreeDims slice_dims(const PersistenceProblem& p, const Q& u);

// Samples strictly inside each gap (and beyond the extremes) at which every needed overlay is generic.
std::vector<Q> choose_samples(const PersistenceProblem& p, const std::vector<Q>& critical);
RankInvariant rank_invariant(const PersistenceProblem& p);
Barcode barcode(const PersistenceProblem& p);

struct EndpointCheck {
    ExtQ value;
    int degree = 0;      // bar degree
    int mult = 0;
    bool start = false;  // left endpoint
    bool matched = false;
    std::string note;
};
struct EndpointReport {
    std::vector<EndpointCheck> endpoints;
    // Degree bookkeeping at each nonzero critical value: predicted vs observed counts.
    std::vector<std::string> diagnostics;
    bool ok = true;
};
EndpointReport verify_endpoints(const PersistenceProblem& p, const Barcode& bc);

struct StabilityReport {
    Q eps, budget, height_change;
    ExtQ distance;
    std::string method;
    bool ok = false;
};
// Largest pointwise height change between two fronts with the same combinatorics.
// Throws FrontError when they are not vertical perturbations of each other.
Q vertical_distance(const Front& a, const Front& b);
StabilityReport stability_check(const PersistenceProblem& p, const PersistenceProblem& q, const Q& eps);

}  // namespace lgs
