#include "strata/inference.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <numeric>
#include <sstream>
#include <thread>

#include "strata/complexes.hpp"
#include "strata/persistence.hpp"

namespace strata {

namespace {

// one direction: does the (p, q) kernel/cokernel pair report equivalence?
bool direction_clear(const PointCloud& U, Vec2 p, Vec2 q, double r, double eps) {
    PairContext ctx{p, q, r, eps};
    FilteredPairComplex cx = build_filtered_pair(U, ctx, 2 * eps * (1 + 1e-6));
    int max_dim = U.dim - 1;
    KerCokDiagrams d = kernel_cokernel_diagrams(cx, max_dim);
    double tol = 1e-12 * r;
    return window_query(d.kernel, eps, 2 * eps, tol).empty() &&
           window_query(d.cokernel, eps, 2 * eps, tol).empty();
}

int pair_weight_strict(const PointCloud& U, size_t p, size_t q, double r, double eps) {
    if (p >= U.size() || q >= U.size()) throw UsageError("pair_weight: index out of range");
    if (!(eps > 0) || !(r > 0)) throw UsageError("pair_weight: r and eps must be positive");
    if (p == q) return 1;
    Vec2 pp = U.p2(p), qq = U.p2(q);
    if (dist(pp, qq) > 2 * r) return 0;
    return direction_clear(U, pp, qq, r, eps) && direction_clear(U, qq, pp, r, eps) ? 1 : 0;
}

}  // namespace

int pair_weight(const PointCloud& U, size_t p, size_t q, double r, double eps) {
    try {
        return pair_weight_strict(U, p, q, r, eps);
    } catch (const UsageError&) {
        throw;  // misuse is not a per-pair numeric failure
    } catch (const std::exception& e) {
        std::cerr << "warning: pair (" << p << "," << q << ") degraded to 0: " << e.what()
                  << "\n";
        return 0;
    }
}

StrataClustering strata_clusters(const PointCloud& U, double r, double eps,
                                 const std::vector<std::pair<size_t, size_t>>* pairs, int jobs) {
    if (U.size() == 0) throw UsageError("strata_clusters: empty cloud");
    if (!(eps > 0) || !(r > 0)) throw UsageError("strata_clusters: r and eps must be positive");
    size_t n = U.size();
    StrataClustering out;
    out.W.assign(n, std::vector<uint8_t>(n, 0));
    for (size_t i = 0; i < n; ++i) out.W[i][i] = 1;

    std::vector<std::pair<size_t, size_t>> work;
    if (pairs) {
        for (auto [i, j] : *pairs) {
            if (i >= n || j >= n) throw UsageError("strata_clusters: pair index out of range");
            if (i != j) work.emplace_back(std::min(i, j), std::max(i, j));
        }
    } else {
        for (size_t i = 0; i < n; ++i)
            for (size_t j = i + 1; j < n; ++j) work.emplace_back(i, j);
    }

    // each worker owns a strided slice of the pair list; entries are disjoint
    // so W writes race-free, and warnings are buffered to keep cerr serialized
    size_t nthreads = std::max(1, jobs);
    nthreads = std::min(nthreads, std::max<size_t>(work.size(), 1));
    std::vector<std::string> warn(nthreads);
    std::vector<size_t> degraded(nthreads, 0);
    auto worker = [&](size_t t) {
        std::ostringstream log;
        for (size_t k = t; k < work.size(); k += nthreads) {
            auto [i, j] = work[k];
            uint8_t w = 0;
            try {
                w = uint8_t(pair_weight_strict(U, i, j, r, eps));
            } catch (const UsageError&) {
                throw;
            } catch (const std::exception& e) {
                log << "warning: pair (" << i << "," << j << ") degraded to 0: " << e.what()
                    << "\n";
                ++degraded[t];
            }
            out.W[i][j] = out.W[j][i] = w;
        }
        warn[t] = log.str();
    };
    if (nthreads == 1) {
        worker(0);
    } else {
        std::vector<std::thread> ts;
        for (size_t t = 0; t < nthreads; ++t) ts.emplace_back(worker, t);
        for (auto& th : ts) th.join();
    }
    for (size_t t = 0; t < nthreads; ++t) {
        std::cerr << warn[t];
        out.degraded_pairs += degraded[t];
    }

    // union-find over W = 1 edges
    std::vector<size_t> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (size_t i = 0; i < n; ++i)
        for (size_t j = i + 1; j < n; ++j)
            if (out.W[i][j]) parent[find(i)] = find(j);
    out.labels.assign(n, -1);
    int32_t next = 0;
    for (size_t i = 0; i < n; ++i) {
        size_t root = find(i);
        if (out.labels[root] < 0) out.labels[root] = next++;
        out.labels[i] = out.labels[root];
    }
    return out;
}

SpectralResult spectral_partition(const std::vector<std::vector<double>>& W) {
    size_t n = W.size();
    if (n == 0) throw UsageError("spectral_partition: empty matrix");
    for (const auto& row : W)
        if (row.size() != n) throw UsageError("spectral_partition: matrix not square");
    // L = D - W; self-loops cancel out of the Laplacian
    std::vector<std::vector<double>> a(n, std::vector<double>(n, 0));
    for (size_t i = 0; i < n; ++i) {
        double deg = 0;
        for (size_t j = 0; j < n; ++j) {
            if (std::abs(W[i][j] - W[j][i]) > 1e-12)
                throw UsageError("spectral_partition: matrix not symmetric");
            if (j != i) {
                deg += W[i][j];
                a[i][j] = -W[i][j];
            }
        }
        a[i][i] = deg;
    }

    // cyclic Jacobi rotations; V accumulates the eigenvectors
    std::vector<std::vector<double>> v(n, std::vector<double>(n, 0));
    for (size_t i = 0; i < n; ++i) v[i][i] = 1;
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0;
        for (size_t i = 0; i < n; ++i)
            for (size_t j = i + 1; j < n; ++j) off += a[i][j] * a[i][j];
        if (off < 1e-24 * double(n * n)) break;
        for (size_t p = 0; p < n; ++p)
            for (size_t q = p + 1; q < n; ++q) {
                if (std::abs(a[p][q]) < 1e-300) continue;
                double theta = (a[q][q] - a[p][p]) / (2 * a[p][q]);
                double t = (theta >= 0 ? 1.0 : -1.0) /
                           (std::abs(theta) + std::sqrt(theta * theta + 1));
                double c = 1 / std::sqrt(t * t + 1), s = t * c;
                for (size_t k = 0; k < n; ++k) {
                    double akp = a[k][p], akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for (size_t k = 0; k < n; ++k) {
                    double apk = a[p][k], aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
                for (size_t k = 0; k < n; ++k) {
                    double vkp = v[k][p], vkq = v[k][q];
                    v[k][p] = c * vkp - s * vkq;
                    v[k][q] = s * vkp + c * vkq;
                }
            }
    }
    std::vector<size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](size_t x, size_t y) { return a[x][x] < a[y][y]; });

    SpectralResult res;
    if (n == 1) {
        res.lambda1 = 0;
        res.fiedler = {1.0};
        res.split = {1};
        return res;
    }
    size_t idx = order[1];
    res.lambda1 = a[idx][idx];
    res.fiedler.resize(n);
    res.split.resize(n);
    if (res.lambda1 < 1e-9) {
        // disconnected graph: the zero eigenspace is spanned by component
        // indicators and Jacobi returns an arbitrary basis of it; report a
        // concrete separating vector instead (component of node 0 vs rest)
        std::vector<int> comp(n, 0);
        std::vector<size_t> stack = {0};
        comp[0] = 1;
        while (!stack.empty()) {
            size_t x = stack.back();
            stack.pop_back();
            for (size_t j = 0; j < n; ++j)
                if (j != x && W[x][j] > 0 && !comp[j]) {
                    comp[j] = 1;
                    stack.push_back(j);
                }
        }
        for (size_t i = 0; i < n; ++i) {
            res.fiedler[i] = comp[i] ? 1.0 : -1.0;
            res.split[i] = comp[i];
        }
        return res;
    }
    for (size_t i = 0; i < n; ++i) {
        res.fiedler[i] = v[i][idx];
        res.split[i] = v[i][idx] >= 0 ? 1 : 0;
    }
    return res;
}

void write_clustering_csv(const std::string& path, const StrataClustering& c) {
    std::ofstream f(path);
    if (!f) throw DataError("cannot write " + path);
    f << "point_index,label\n";
    for (size_t i = 0; i < c.labels.size(); ++i) f << i << ',' << c.labels[i] << "\n";
}

void write_w_csv(const std::string& path, const StrataClustering& c) {
    std::ofstream f(path);
    if (!f) throw DataError("cannot write " + path);
    f << "i,j,w\n";
    for (size_t i = 0; i < c.W.size(); ++i)
        for (size_t j = 0; j < c.W.size(); ++j)
            if (c.W[i][j]) f << i << ',' << j << ",1\n";
}

}  // namespace strata
