#pragma once

// Dense bit-packed linear algebra over the two-element field.
//
// Columns are bit vectors (64 entries per word). The central object is the
// incremental reducer: feed columns one at a time, each is reduced against the
// pivots collected so far; independent columns become new pivots. This gives
// rank, kernel extraction (via an augmented combination block) and relative
// rank computations rank([A | B]) - rank(B) without re-reducing B.

#include <cstdint>
#include <utility>
#include <vector>

#include "strata/common.hpp"

namespace strata {

using BitVec = std::vector<uint64_t>;

inline BitVec bitvec(size_t nbits) { return BitVec((nbits + 63) / 64, 0); }

inline void bit_set(BitVec& v, size_t i) { v[i >> 6] |= uint64_t(1) << (i & 63); }
inline bool bit_get(const BitVec& v, size_t i) { return (v[i >> 6] >> (i & 63)) & 1; }

inline void bit_xor(BitVec& a, const BitVec& b) {
    for (size_t w = 0; w < a.size(); ++w) a[w] ^= b[w];
}

inline bool bit_zero(const BitVec& v) {
    for (uint64_t w : v)
        if (w) return false;
    return true;
}

// Index of the highest set bit, or -1 for the zero vector.
inline long bit_top(const BitVec& v) {
    for (size_t w = v.size(); w-- > 0;)
        if (v[w]) return long(w) * 64 + 63 - __builtin_clzll(v[w]);
    return -1;
}

inline size_t bit_count(const BitVec& v) {
    size_t c = 0;
    for (uint64_t w : v) c += size_t(__builtin_popcountll(w));
    return c;
}

// Incremental Gaussian elimination over Z/2 with O(1) pivot lookup per row.
class Z2Reducer {
  public:
    explicit Z2Reducer(size_t rows) : rows_(rows), at_row_(rows, -1) {}

    // Reduces `col` in place against current pivots. Returns true (and keeps a
    // copy as a new pivot) iff the column is independent of what came before.
    bool add(BitVec& col) {
        reduce(col);
        long t = bit_top(col);
        if (t < 0) return false;
        at_row_[size_t(t)] = int32_t(pivots_.size());
        pivots_.push_back(col);
        return true;
    }

    bool add_copy(BitVec col) { return add(col); }

    // Reduce without inserting (query independence / residue).
    void reduce(BitVec& col) const {
        long t = bit_top(col);
        while (t >= 0 && at_row_[size_t(t)] >= 0) {
            bit_xor(col, pivots_[size_t(at_row_[size_t(t)])]);
            t = bit_top(col);
        }
    }

    bool independent(BitVec col) const {
        reduce(col);
        return !bit_zero(col);
    }

    size_t rank() const { return pivots_.size(); }
    size_t rows() const { return rows_; }

  private:
    size_t rows_;
    std::vector<int32_t> at_row_;  // row -> index into pivots_, or -1
    std::vector<BitVec> pivots_;
};

inline size_t z2_rank(const std::vector<BitVec>& cols, size_t rows) {
    Z2Reducer red(rows);
    for (const auto& c : cols) red.add_copy(c);
    return red.rank();
}

// Kernel basis of the matrix with the given columns: the returned bit vectors
// are indexed over column positions; each one is a combination of input
// columns summing to zero.
inline std::vector<BitVec> z2_kernel(const std::vector<BitVec>& cols, size_t rows) {
    std::vector<int32_t> at_row(rows, -1);
    std::vector<BitVec> piv, piv_comb;
    std::vector<BitVec> kernel;
    for (size_t j = 0; j < cols.size(); ++j) {
        BitVec v = cols[j];
        BitVec comb = bitvec(cols.size());
        bit_set(comb, j);
        long t = bit_top(v);
        while (t >= 0 && at_row[size_t(t)] >= 0) {
            size_t k = size_t(at_row[size_t(t)]);
            bit_xor(v, piv[k]);
            bit_xor(comb, piv_comb[k]);
            t = bit_top(v);
        }
        if (t < 0) {
            kernel.push_back(std::move(comb));
        } else {
            at_row[size_t(t)] = int32_t(piv.size());
            piv.push_back(std::move(v));
            piv_comb.push_back(std::move(comb));
        }
    }
    return kernel;
}

}  // namespace strata
