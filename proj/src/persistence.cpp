#include "strata/persistence.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <istream>
#include <ostream>
#include <sstream>

#include "strata/z2.hpp"

namespace strata {

size_t PersistenceDiagram::total_multiplicity() const {
    size_t n = 0;
    for (const auto& p : points) n += size_t(p.multiplicity);
    return n;
}

int RankFunction::at(int i, int j) const {
    if (i < 0) return 0;
    return rank[size_t(i)][size_t(j - i)];
}

namespace {

struct LevelMasks {
    double a = 0;
    BitVec mid_l, mid_k;  // active d-cells (in pair, not in sub) per side
    BitVec lo_l, lo_k;    // active (d-1)-cells
};

// Everything module_ranks needs about one dimension of the complex.
struct DimSlice {
    const FilteredPairComplex* cx = nullptr;
    int d = 0;
    std::vector<int32_t> lo, mid, hi;         // global ids by dimension d-1, d, d+1
    std::vector<int32_t> mid_pos, lo_pos;     // global id -> local index (-1 elsewhere)
    std::vector<LevelMasks> lv;

    static bool active_l(const PairCell& c, double a) {
        return c.birth_l <= a && !(c.birth_l0 <= a);
    }
    static bool active_k(const PairCell& c, double a) {
        return c.birth_k <= a && !(c.birth_k0 <= a);
    }

    BitVec boundary_mid(int32_t mid_local, const BitVec& lo_mask) const {
        BitVec col = bitvec(std::max<size_t>(lo.size(), 1));
        for (int32_t f : cx->cells[size_t(mid[size_t(mid_local)])].faces) {
            int32_t fl = lo_pos[size_t(f)];
            if (fl >= 0 && bit_get(lo_mask, size_t(fl))) bit_set(col, size_t(fl));
        }
        return col;
    }

    BitVec boundary_hi(int32_t hi_global, const BitVec& mid_mask) const {
        BitVec col = bitvec(std::max<size_t>(mid.size(), 1));
        for (int32_t f : cx->cells[size_t(hi_global)].faces) {
            int32_t fl = mid_pos[size_t(f)];
            if (fl >= 0 && bit_get(mid_mask, size_t(fl))) bit_set(col, size_t(fl));
        }
        return col;
    }

    // cycle basis of the quotient pair at one level (side selects L or K)
    std::vector<BitVec> cycles(const LevelMasks& m, bool side_k) const {
        const BitVec& mid_mask = side_k ? m.mid_k : m.mid_l;
        const BitVec& lo_mask = side_k ? m.lo_k : m.lo_l;
        std::vector<int32_t> act;  // local mid indices active at this level
        for (int32_t i = 0; i < int32_t(mid.size()); ++i)
            if (bit_get(mid_mask, size_t(i))) act.push_back(i);
        std::vector<BitVec> cols;
        cols.reserve(act.size());
        for (int32_t i : act) cols.push_back(boundary_mid(i, lo_mask));
        std::vector<BitVec> combos = z2_kernel(cols, std::max<size_t>(lo.size(), 1));
        std::vector<BitVec> out;
        out.reserve(combos.size());
        for (const BitVec& cb : combos) {
            BitVec z = bitvec(std::max<size_t>(mid.size(), 1));
            for (size_t k = 0; k < act.size(); ++k)
                if (bit_get(cb, k)) bit_set(z, size_t(act[size_t(k)]));
            out.push_back(std::move(z));
        }
        return out;
    }

    // reducer preloaded with the boundary subspace at one level
    Z2Reducer boundaries(const LevelMasks& m, bool side_k) const {
        const BitVec& mid_mask = side_k ? m.mid_k : m.mid_l;
        Z2Reducer red(std::max<size_t>(mid.size(), 1));
        for (int32_t h : hi) {
            const PairCell& c = cx->cells[size_t(h)];
            bool act = side_k ? active_k(c, m.a) : active_l(c, m.a);
            if (!act) continue;
            red.add_copy(boundary_hi(h, mid_mask));
        }
        return red;
    }
};

DimSlice make_slice(const FilteredPairComplex& cx, int d) {
    DimSlice s;
    s.cx = &cx;
    s.d = d;
    s.mid_pos.assign(cx.cells.size(), -1);
    s.lo_pos.assign(cx.cells.size(), -1);
    for (int32_t i = 0; i < int32_t(cx.cells.size()); ++i) {
        int cd = cx.cells[size_t(i)].dim;
        if (cd == d) {
            s.mid_pos[size_t(i)] = int32_t(s.mid.size());
            s.mid.push_back(i);
        } else if (cd == d - 1) {
            s.lo_pos[size_t(i)] = int32_t(s.lo.size());
            s.lo.push_back(i);
        } else if (cd == d + 1) {
            s.hi.push_back(i);
        }
    }
    return s;
}

std::vector<double> eval_points(const FilteredPairComplex& cx) {
    const auto& c = cx.critical_values;
    std::vector<double> ev;
    for (size_t i = 0; i + 1 < c.size(); ++i) ev.push_back(0.5 * (c[i] + c[i + 1]));
    if (!c.empty()) {
        double next = cx.births_above_cap.empty() ? c.back() + 1.0 : cx.births_above_cap.front();
        ev.push_back(0.5 * (c.back() + next));
    }
    return ev;
}

void fill_masks(const FilteredPairComplex& cx, DimSlice& s, const std::vector<double>& ev) {
    for (double a : ev) {
        LevelMasks m;
        m.a = a;
        m.mid_l = bitvec(std::max<size_t>(s.mid.size(), 1));
        m.mid_k = bitvec(std::max<size_t>(s.mid.size(), 1));
        m.lo_l = bitvec(std::max<size_t>(s.lo.size(), 1));
        m.lo_k = bitvec(std::max<size_t>(s.lo.size(), 1));
        for (size_t i = 0; i < s.mid.size(); ++i) {
            const PairCell& c = cx.cells[size_t(s.mid[i])];
            if (DimSlice::active_l(c, a)) bit_set(m.mid_l, i);
            if (DimSlice::active_k(c, a)) bit_set(m.mid_k, i);
        }
        for (size_t i = 0; i < s.lo.size(); ++i) {
            const PairCell& c = cx.cells[size_t(s.lo[i])];
            if (DimSlice::active_l(c, a)) bit_set(m.lo_l, i);
            if (DimSlice::active_k(c, a)) bit_set(m.lo_k, i);
        }
        s.lv.push_back(std::move(m));
    }
}

void mask_chain(BitVec& chain, const BitVec& mask) {
    for (size_t w = 0; w < chain.size(); ++w) chain[w] &= mask[w];
}

}  // namespace

RankFunction module_ranks(const FilteredPairComplex& cx, ModuleKind which, int dim) {
    RankFunction rf;
    rf.dim = dim;
    rf.kind = which;
    rf.critical_values = cx.critical_values;
    rf.eval_values = eval_points(cx);
    const size_t m = rf.eval_values.size();
    if (m == 0) return rf;

    DimSlice s = make_slice(cx, dim);
    fill_masks(cx, s, rf.eval_values);

    const bool side_k = (which == ModuleKind::RangePair || which == ModuleKind::CokernelOfPsi);

    // per-level boundary reducers for the target pair (used as the modulus at
    // level j); for the cokernel the modulus also includes the psi image
    std::vector<Z2Reducer> modulus;
    modulus.reserve(m);
    for (size_t j = 0; j < m; ++j) {
        Z2Reducer red = s.boundaries(s.lv[j], side_k);
        if (which == ModuleKind::CokernelOfPsi) {
            for (BitVec z : s.cycles(s.lv[j], false)) {  // cycles of (L, L0)
                mask_chain(z, s.lv[j].mid_k);            // psi = restriction to K\K0
                red.add(z);
            }
        }
        modulus.push_back(std::move(red));
    }

    // representative chains at every level, spanning the module's fiber there
    std::vector<std::vector<BitVec>> reps(m);
    for (size_t i = 0; i < m; ++i) {
        std::vector<BitVec> candidates;
        switch (which) {
            case ModuleKind::DomainPair:
                candidates = s.cycles(s.lv[i], false);
                break;
            case ModuleKind::RangePair:
            case ModuleKind::CokernelOfPsi:
                candidates = s.cycles(s.lv[i], true);
                break;
            case ModuleKind::KernelOfPsi: {
                // cycles of (L, L0) whose psi image bounds in (K, K0)
                std::vector<BitVec> zl = s.cycles(s.lv[i], false);
                Z2Reducer bk = s.boundaries(s.lv[i], true);
                std::vector<BitVec> residues;
                residues.reserve(zl.size());
                for (const BitVec& z : zl) {
                    BitVec img = z;
                    mask_chain(img, s.lv[i].mid_k);
                    bk.reduce(img);
                    residues.push_back(std::move(img));
                }
                for (const BitVec& cb : z2_kernel(residues, std::max<size_t>(s.mid.size(), 1))) {
                    BitVec w = bitvec(std::max<size_t>(s.mid.size(), 1));
                    for (size_t k = 0; k < zl.size(); ++k)
                        if (bit_get(cb, k)) bit_xor(w, zl[k]);
                    candidates.push_back(std::move(w));
                }
                break;
            }
        }
        Z2Reducer indep = modulus[i];  // copy; keep only classes independent mod it
        for (BitVec& c : candidates)
            if (indep.add(c)) reps[i].push_back(c);
    }

    // ranks of the composite maps: push level-i representatives to level j by
    // dropping cells newly absorbed into the subcomplex, count what stays
    // independent modulo the level-j modulus
    rf.rank.assign(m, {});
    for (size_t i = 0; i < m; ++i) {
        for (size_t j = i; j < m; ++j) {
            Z2Reducer red = modulus[j];
            int r = 0;
            for (const BitVec& w : reps[i]) {
                BitVec v = w;
                mask_chain(v, side_k ? s.lv[j].mid_k : s.lv[j].mid_l);
                if (red.add(v)) ++r;
            }
            rf.rank[i].push_back(r);
        }
    }
    return rf;
}

PersistenceDiagram diagram_from_ranks(const RankFunction& rf, double cap) {
    PersistenceDiagram d;
    d.cap = cap;
    const int m = int(rf.critical_values.size());
    for (int i = 0; i < m; ++i) {
        for (int j = i + 1; j < m; ++j) {
            int beta = (rf.at(i, j - 1) - rf.at(i, j)) - (rf.at(i - 1, j - 1) - rf.at(i - 1, j));
            if (beta < 0)
                throw NumericError("diagram_from_ranks: negative multiplicity (rank inconsistency)");
            if (beta > 0)
                d.points.push_back({rf.dim, rf.critical_values[size_t(i)],
                                    rf.critical_values[size_t(j)], beta});
        }
        int alive = rf.at(i, m - 1) - rf.at(i - 1, m - 1);
        if (alive < 0) throw NumericError("diagram_from_ranks: negative capped multiplicity");
        if (alive > 0) d.points.push_back({rf.dim, rf.critical_values[size_t(i)], kInf, alive});
    }
    return d;
}

KerCokDiagrams kernel_cokernel_diagrams(const FilteredPairComplex& cx, int max_dim) {
    KerCokDiagrams out;
    out.kernel.cap = cx.alpha_cap;
    out.cokernel.cap = cx.alpha_cap;
    for (int d = 0; d <= max_dim; ++d) {
        PersistenceDiagram k =
            diagram_from_ranks(module_ranks(cx, ModuleKind::KernelOfPsi, d), cx.alpha_cap);
        PersistenceDiagram c =
            diagram_from_ranks(module_ranks(cx, ModuleKind::CokernelOfPsi, d), cx.alpha_cap);
        out.kernel.points.insert(out.kernel.points.end(), k.points.begin(), k.points.end());
        out.cokernel.points.insert(out.cokernel.points.end(), c.points.begin(), c.points.end());
    }
    return out;
}

std::vector<DiagramPoint> window_query(const PersistenceDiagram& d, double a, double b,
                                       double tol) {
    if (!(0 < a && a < b)) throw UsageError("window_query: need 0 < a < b");
    std::vector<DiagramPoint> out;
    for (const auto& p : d.points)
        if (p.birth <= a + tol && (p.capped() || p.death >= b - tol)) out.push_back(p);
    return out;
}

namespace {

struct FlatPoint {
    double b, dth;
};

// Kuhn's augmenting-path matching on the diagonal-augmented bipartite graph.
struct BottleneckGraph {
    std::vector<FlatPoint> A, B;
    double delta = 0;

    // left vertices: A points then |B| diagonal slots; right: B then |A| slots
    size_t nl() const { return A.size() + B.size(); }
    size_t nr() const { return B.size() + A.size(); }

    bool edge(size_t l, size_t r) const {
        bool ldiag = l >= A.size(), rdiag = r >= B.size();
        if (ldiag && rdiag) return true;
        if (ldiag) {
            const FlatPoint& p = B[r];
            return 0.5 * (p.dth - p.b) <= delta;
        }
        if (rdiag) {
            const FlatPoint& p = A[l];
            return 0.5 * (p.dth - p.b) <= delta;
        }
        const FlatPoint& p = A[l];
        const FlatPoint& q = B[r];
        return std::max(std::abs(p.b - q.b), std::abs(p.dth - q.dth)) <= delta;
    }

    bool feasible() {
        std::vector<int> match_r(nr(), -1);
        std::vector<char> used;
        size_t matched = 0;
        std::function<bool(size_t)> try_l = [&](size_t l) -> bool {
            for (size_t r = 0; r < nr(); ++r) {
                if (used[r] || !edge(l, r)) continue;
                used[r] = 1;
                if (match_r[r] < 0 || try_l(size_t(match_r[r]))) {
                    match_r[r] = int(l);
                    return true;
                }
            }
            return false;
        };
        for (size_t l = 0; l < nl(); ++l) {
            used.assign(nr(), 0);
            if (try_l(l)) ++matched;
        }
        return matched == nl();
    }
};

double bottleneck_one_dim(std::vector<FlatPoint> a, std::vector<FlatPoint> b) {
    std::vector<double> cand{0.0};
    for (const auto& p : a) cand.push_back(0.5 * (p.dth - p.b));
    for (const auto& p : b) cand.push_back(0.5 * (p.dth - p.b));
    for (const auto& p : a)
        for (const auto& q : b)
            cand.push_back(std::max(std::abs(p.b - q.b), std::abs(p.dth - q.dth)));
    std::sort(cand.begin(), cand.end());
    cand.erase(std::unique(cand.begin(), cand.end()), cand.end());

    BottleneckGraph g;
    g.A = std::move(a);
    g.B = std::move(b);
    size_t lo = 0, hi = cand.size() - 1;
    g.delta = cand[hi];
    if (!g.feasible())
        throw NumericError("bottleneck: infeasible at max candidate (internal error)");
    while (lo < hi) {
        size_t mid = (lo + hi) / 2;
        g.delta = cand[mid];
        if (g.feasible())
            hi = mid;
        else
            lo = mid + 1;
    }
    return cand[lo];
}

}  // namespace

double bottleneck_distance(const PersistenceDiagram& a, const PersistenceDiagram& b) {
    std::vector<int> dims;
    for (const auto& p : a.points) dims.push_back(p.dim);
    for (const auto& p : b.points) dims.push_back(p.dim);
    std::sort(dims.begin(), dims.end());
    dims.erase(std::unique(dims.begin(), dims.end()), dims.end());
    double best = 0;
    for (int d : dims) {
        auto flat = [&](const PersistenceDiagram& dg) {
            std::vector<FlatPoint> out;
            for (const auto& p : dg.points)
                if (p.dim == d)
                    for (int k = 0; k < p.multiplicity; ++k)
                        out.push_back({p.birth, p.capped() ? dg.cap : p.death});
            return out;
        };
        best = std::max(best, bottleneck_one_dim(flat(a), flat(b)));
    }
    return best;
}

void write_diagram_csv(std::ostream& os, const PersistenceDiagram& d) {
    os.precision(17);
    os << "# cap=" << d.cap << "\n";
    os << "dim,birth,death,multiplicity\n";
    for (const auto& p : d.points) {
        os << p.dim << "," << p.birth << ",";
        if (p.capped())
            os << "inf";
        else
            os << p.death;
        os << "," << p.multiplicity << "\n";
    }
}

PersistenceDiagram read_diagram_csv(std::istream& is) {
    PersistenceDiagram d;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        if (line.rfind("# cap=", 0) == 0) {
            d.cap = std::stod(line.substr(6));
            continue;
        }
        if (line.rfind("dim,", 0) == 0) continue;
        std::istringstream ss(line);
        std::string tok;
        DiagramPoint p;
        std::getline(ss, tok, ',');
        p.dim = std::stoi(tok);
        std::getline(ss, tok, ',');
        p.birth = std::stod(tok);
        std::getline(ss, tok, ',');
        p.death = (tok == "inf") ? kInf : std::stod(tok);
        std::getline(ss, tok, ',');
        p.multiplicity = std::stoi(tok);
        d.points.push_back(p);
    }
    return d;
}

void write_diagram_svg(std::ostream& os, const PersistenceDiagram& d, double win_a, double win_b) {
    double top = d.cap;
    for (const auto& p : d.points) top = std::max(top, p.capped() ? d.cap : p.death);
    top = std::max(top, win_b) * 1.05 + 1e-12;
    const double px = 400.0;
    auto X = [&](double v) { return 40 + v / top * px; };
    auto Y = [&](double v) { return 40 + px - v / top * px; };
    os << "<svg xmlns='http://www.w3.org/2000/svg' width='480' height='480'>\n";
    // window: births <= a, deaths >= b
    os << "<rect x='" << X(0) << "' y='" << Y(top) << "' width='" << X(win_a) - X(0)
       << "' height='" << Y(win_b) - Y(top) << "' fill='#cce5ff' stroke='none'/>\n";
    os << "<line x1='" << X(0) << "' y1='" << Y(0) << "' x2='" << X(top) << "' y2='" << Y(top)
       << "' stroke='gray'/>\n";
    os << "<line x1='" << X(0) << "' y1='" << Y(0) << "' x2='" << X(top) << "' y2='" << Y(0)
       << "' stroke='black'/>\n";
    os << "<line x1='" << X(0) << "' y1='" << Y(0) << "' x2='" << X(0) << "' y2='" << Y(top)
       << "' stroke='black'/>\n";
    for (const auto& p : d.points) {
        double dy = p.capped() ? d.cap : p.death;
        const char* color = p.capped() ? "red" : "black";
        os << "<circle cx='" << X(p.birth) << "' cy='" << Y(dy) << "' r='4' fill='" << color
           << "'><title>dim " << p.dim << " (" << p.birth << "," << (p.capped() ? top : p.death)
           << ") x" << p.multiplicity << "</title></circle>\n";
    }
    os << "</svg>\n";
}

}  // namespace strata
