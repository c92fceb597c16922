#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "strata/z2.hpp"

using namespace strata;

namespace {

// naive O(n^3) elimination on a bool matrix, used as the rank oracle
size_t naive_rank(std::vector<std::vector<int>> m) {
    if (m.empty()) return 0;
    size_t rows = m.size(), cols = m[0].size(), rank = 0;
    for (size_t c = 0; c < cols; ++c) {
        size_t piv = rows;
        for (size_t r = rank; r < rows; ++r)
            if (m[r][c]) {
                piv = r;
                break;
            }
        if (piv == rows) continue;
        std::swap(m[rank], m[piv]);
        for (size_t r = 0; r < rows; ++r)
            if (r != rank && m[r][c])
                for (size_t k = 0; k < cols; ++k) m[r][k] ^= m[rank][k];
        ++rank;
    }
    return rank;
}

std::vector<BitVec> to_cols(const std::vector<std::vector<int>>& m) {
    size_t rows = m.size(), cols = rows ? m[0].size() : 0;
    std::vector<BitVec> out(cols, bitvec(rows));
    for (size_t r = 0; r < rows; ++r)
        for (size_t c = 0; c < cols; ++c)
            if (m[r][c]) bit_set(out[c], r);
    return out;
}

}  // namespace

TEST_CASE("rank of small fixed matrices") {
    CHECK(z2_rank(to_cols({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}), 3) == 3);
    CHECK(z2_rank(to_cols({{0, 0}, {0, 0}}), 2) == 0);
    CHECK(z2_rank(to_cols({{1, 1}, {1, 1}}), 2) == 1);
}

TEST_CASE("rank matches naive elimination on random matrices") {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<int> dim(1, 20), bit(0, 1);
    for (int trial = 0; trial < 200; ++trial) {
        size_t rows = size_t(dim(rng)), cols = size_t(dim(rng));
        std::vector<std::vector<int>> m(rows, std::vector<int>(cols));
        for (auto& r : m)
            for (auto& x : r) x = bit(rng);
        CHECK(z2_rank(to_cols(m), rows) == naive_rank(m));
    }
}

TEST_CASE("kernel vectors annihilate the matrix and have the right count") {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<int> dim(1, 16), bit(0, 1);
    for (int trial = 0; trial < 200; ++trial) {
        size_t rows = size_t(dim(rng)), cols = size_t(dim(rng));
        std::vector<std::vector<int>> m(rows, std::vector<int>(cols));
        for (auto& r : m)
            for (auto& x : r) x = bit(rng);
        auto colv = to_cols(m);
        auto kern = z2_kernel(colv, rows);
        CHECK(kern.size() == cols - naive_rank(m));
        for (const auto& comb : kern) {
            BitVec sum = bitvec(rows);
            for (size_t c = 0; c < cols; ++c)
                if (bit_get(comb, c)) bit_xor(sum, colv[c]);
            CHECK(bit_zero(sum));
            CHECK(!bit_zero(comb));
        }
        // kernel vectors are linearly independent
        CHECK(z2_rank(kern, cols) == kern.size());
    }
}

TEST_CASE("incremental reducer tracks rank of a growing column set") {
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<int> bit(0, 1);
    size_t rows = 24;
    Z2Reducer red(rows);
    std::vector<BitVec> seen;
    for (int step = 0; step < 60; ++step) {
        BitVec col = bitvec(rows);
        for (size_t r = 0; r < rows; ++r)
            if (bit(rng)) bit_set(col, r);
        seen.push_back(col);
        red.add_copy(col);
        CHECK(red.rank() == z2_rank(seen, rows));
    }
}
