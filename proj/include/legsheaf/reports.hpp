#pragma once

#include "legsheaf/barcodes.hpp"
#include "legsheaf/cellsheaf.hpp"
#include "legsheaf/fronts.hpp"

#include <optional>
#include <string>
#include <vector>

namespace lgs {

enum class Verdict { Pass, Fail, Inapplicable };
std::string verdict_name(Verdict v);

struct Hypothesis {
    std::string name;
    bool ok = false;
    std::string detail;
};

// lhs >= rhs
struct Inequality {
    std::string label;
    Q lhs, rhs;
    bool holds() const { return lhs >= rhs; }
};

struct TheoremReport {
    std::string theorem;
    std::vector<Hypothesis> hypotheses;
    std::vector<Inequality> inequalities;
    Verdict verdict = Verdict::Inapplicable;
    std::vector<std::string> diagnostics;
    std::map<std::string, std::string> values;  // extra computed quantities

    bool hypotheses_ok() const;
    // Verdict implied by the stored hypotheses and sides.
    Verdict recompute() const;
};

TheoremReport betti_bound(const Front& f, const CellSheaf& s);
TheoremReport morse_inequalities(const Front& f, const CellSheaf& s);
// perturbed must be a vertical perturbation of f moving heights by at most eps / 2.
TheoremReport displacement_bound(const Front& f, const CellSheaf& s, const Front& perturbed, const Q& eps);
TheoremReport support_diagnostics(const Front& f, const CellSheaf& s);

// Chord counts weighted by microstalk Hom dimensions: w_j = sum over chords of dim Hom^{j - deg}(M_top, M_bottom).
DegreeDims weighted_chord_counts(const Front& f, const CellSheaf& s);

std::string report_json(const std::vector<TheoremReport>& reports);
std::string report_table(const std::vector<TheoremReport>& reports);

}  // namespace lgs
