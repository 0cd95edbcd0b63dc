#pragma once

#include "legsheaf/exactalg.hpp"

#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace lgs {

// The interval module k_{(start, end]} placed in cohomological degree `degree`.
struct Bar {
    ExtQ start, end;
    int degree = 0;
    int mult = 1;
};

bool operator==(const Bar& a, const Bar& b);

class BarcodeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class Barcode {
public:
    Barcode() = default;
    explicit Barcode(std::vector<Bar> bars);

    // Bars in (degree, start, end) order with equal bars merged.
    const std::vector<Bar>& bars() const { return bars_; }
    bool empty() const { return bars_.empty(); }
    int total_multiplicity() const;
    std::vector<int> degrees() const;
    bool operator==(const Barcode& o) const { return bars_ == o.bars_; }
    bool operator!=(const Barcode& o) const { return !(*this == o); }

private:
    std::vector<Bar> bars_;
};

int dimension_function(const Barcode& b, int degree, const Q& u);
DegreeDims dimension_function(const Barcode& b, const Q& u);

// Endpoints move by -c.
Barcode shift(const Barcode& b, const Q& c);

// Samples s_0 < c_1 < s_1 < ... < c_m < s_m interleave the critical values.
// rank(i, j) for i <= j is the rank of the structure map between samples i and j;
// rank(i, i) is the stalk dimension.
struct RankInvariant {
    std::vector<Q> critical;
    std::vector<Q> samples;
    std::map<std::pair<int, int>, DegreeDims> ranks;

    int size() const { return static_cast<int>(samples.size()); }
    int rank(int i, int j, int degree) const;
    DegreeDims stalk_dims(int i) const;
};

// Midpoints of gaps plus sentinels one unit beyond the extremes.
std::vector<Q> gap_samples(const std::vector<Q>& critical);

RankInvariant rank_invariant_of(const Barcode& b, const std::vector<Q>& critical);
// Throws BarcodeError naming the degree and sample pair when no interval module realizes ri.
Barcode barcode_from_rank_invariant(const RankInvariant& ri);

struct InterleaveResult {
    bool ok = false;
    std::string method;  // "exhaustive" or "matching"
};

// (eps, eps')-interleaving: t^M factors as M -> T_eps N -> T_{eps+eps'} M and
// t^N factors as N -> T_{eps'} M -> T_{eps+eps'} N.
InterleaveResult interleaving_check(const Barcode& m, const Barcode& n, const Q& eps, const Q& eps2);
bool interleaved(const Barcode& m, const Barcode& n, const Q& eps, const Q& eps2);

// Per-degree factorization test by forced method, for cross-checking.
enum class FactorMethod { Exhaustive, Matching };
bool factorization_exists(const std::vector<Bar>& x, const std::vector<Bar>& y, const Q& a, const Q& b,
                          FactorMethod method);

struct DistanceResult {
    ExtQ value;  // +inf when no finite interleaving exists
    std::string method;
};
DistanceResult interleaving_distance(const Barcode& m, const Barcode& n);

Barcode read_barcode_tsv(std::istream& in);
Barcode read_barcode_tsv_file(const std::string& path);
void write_barcode_tsv(std::ostream& out, const Barcode& b);
std::string barcode_tsv(const Barcode& b);
std::string barcode_svg(const Barcode& b);

}  // namespace lgs
