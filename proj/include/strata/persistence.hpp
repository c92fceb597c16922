#pragma once

// Z/2 persistence over a FilteredPairComplex via the rank-function method:
// pick one regular (evaluation) value inside every gap between consecutive
// critical values, compute explicit cycle bases there, and read multiplicities
// off the ranks of the composite inclusion-induced maps.

#include <iosfwd>
#include <string>
#include <vector>

#include "strata/filtered_pair.hpp"

namespace strata {

struct DiagramPoint {
    int dim = 0;
    double birth = 0;
    double death = 0;     // kInf when capped
    int multiplicity = 1;
    bool capped() const { return death == kInf; }
};

struct PersistenceDiagram {
    double cap = 0;
    std::vector<DiagramPoint> points;

    size_t total_multiplicity() const;
};

enum class ModuleKind { KernelOfPsi, CokernelOfPsi, DomainPair, RangePair };

struct RankFunction {
    int dim = 0;
    ModuleKind kind = ModuleKind::DomainPair;
    std::vector<double> critical_values;
    std::vector<double> eval_values;          // same length; eval[i] in (c_i, c_{i+1})
    std::vector<std::vector<int>> rank;       // rank[i][j] for j >= i; ragged rows
    int at(int i, int j) const;               // rank of level-i -> level-j map; 0 for i < 0
};

RankFunction module_ranks(const FilteredPairComplex& cx, ModuleKind which, int dim);

PersistenceDiagram diagram_from_ranks(const RankFunction& rf, double cap);

struct KerCokDiagrams {
    PersistenceDiagram kernel;    // points of all dims, tagged
    PersistenceDiagram cokernel;
};

KerCokDiagrams kernel_cokernel_diagrams(const FilteredPairComplex& cx, int max_dim);

// Entries with birth <= a and death >= b (capped deaths always qualify on the
// death side). Comparisons are closed with slack `tol`.
std::vector<DiagramPoint> window_query(const PersistenceDiagram& d, double a, double b,
                                       double tol = 0);

// Bottleneck distance between diagrams, per homological dimension (points of
// distinct dimension are never matched; the result is the max over dims).
// Capped deaths are placed at the `cap` coordinate of their diagram.
double bottleneck_distance(const PersistenceDiagram& a, const PersistenceDiagram& b);

// CSV round-trip: header line `# cap=<value>`, rows `dim,birth,death,multiplicity`
// with capped deaths serialized as the token `inf`.
void write_diagram_csv(std::ostream& os, const PersistenceDiagram& d);
PersistenceDiagram read_diagram_csv(std::istream& is);

// SVG rendering with the (a, b) window rectangle for visual audit.
void write_diagram_svg(std::ostream& os, const PersistenceDiagram& d, double win_a, double win_b);

}  // namespace strata
