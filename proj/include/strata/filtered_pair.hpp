#pragma once

// The shared cell-complex representation both pipelines produce: a face-closed
// complex whose cells carry four birth values encoding the sublevel
// filtrations of the nested pairs (L, L0) and (K, K0). The persistence engine
// consumes this; the simplicial (nerve) pipeline and the cubical oracle both
// emit it.
//
// Membership at parameter alpha:
//   domain pair:  cell in L      iff birth_l  <= alpha;   in L0 iff birth_l0 <= alpha
//   range  pair:  cell in K      iff birth_k  <= alpha;   in K0 iff birth_k0 <= alpha
// The chain map psi is the partial identity: a cell of L\L0 maps to itself
// when it lies in K\K0, to zero otherwise.

#include <cstdint>
#include <string>
#include <vector>

#include "strata/common.hpp"

namespace strata {

struct PairCell {
    int dim = 0;
    std::vector<int32_t> faces;  // ids of codimension-1 faces
    double birth_l = kInf;
    double birth_l0 = kInf;
    double birth_k = kInf;
    double birth_k0 = kInf;
};

struct FilteredPairComplex {
    std::vector<PairCell> cells;
    std::vector<std::string> cell_names;  // optional, parallel to cells (debug dumps)
    double alpha_cap = 0;
    double tol = 0;                       // dedup / comparison tolerance
    std::vector<double> critical_values;  // sorted, distinct, finite, <= cap
    std::vector<double> births_above_cap; // finite births beyond the cap (sorted)

    int top_dim() const;

    // Checks structural invariants and fills critical_values. Throws
    // NumericError on violations:
    //  - face closure of each of the four filtrations (face birth <= coface's)
    //  - nesting: birth_l0 >= birth_l, birth_k0 >= birth_k, birth_k >= birth_l
    //  - containment: birth_k0 <= max(birth_l0, birth_k)
    // Violations within `snap_tol` are repaired by value propagation;
    // anything larger is an error.
    void finalize(double dedup_tol, double snap_tol);
};

// Snapshot sets at a fixed alpha: four vectors of cell ids, each face-closed.
struct Snapshot {
    double alpha = 0;
    std::vector<int32_t> L, L0, K, K0;
};

Snapshot snapshot(const FilteredPairComplex& cx, double alpha);

// psi at a fixed alpha: for every cell of L\L0, kept (maps to itself in K\K0)
// or killed (maps to zero). Verifies the Containment-Lemma consequence that
// cells of L0 map into K0 and that psi commutes with the quotient boundary.
struct PsiMap {
    double alpha = 0;
    std::vector<int32_t> domain;   // cells of L\L0
    std::vector<uint8_t> kept;     // parallel to domain
};

PsiMap psi_map(const FilteredPairComplex& cx, double alpha);

// Used by psi_map's verification and by tests: checks boundary-squared = 0 on
// the quotient complex at alpha and psi's chain-map property. Throws
// NumericError with a description on failure.
void check_chain_conditions(const FilteredPairComplex& cx, double alpha);

}  // namespace strata
