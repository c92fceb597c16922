#include "strata/filtered_pair.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

namespace strata {

int FilteredPairComplex::top_dim() const {
    int d = 0;
    for (const auto& c : cells) d = std::max(d, c.dim);
    return d;
}

namespace {

// Lower face births to min over cofaces, one dimension at a time from the top.
// Returns the largest adjustment made.
double propagate_min(std::vector<PairCell>& cells) {
    std::vector<int32_t> order(cells.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](int32_t a, int32_t b) { return cells[a].dim > cells[b].dim; });
    double worst = 0;
    auto pull = [&](double& face_v, double coface_v) {
        if (coface_v < face_v) {
            if (face_v != kInf) worst = std::max(worst, face_v - coface_v);
            face_v = coface_v;
        }
    };
    for (int32_t id : order) {
        const PairCell& c = cells[size_t(id)];
        for (int32_t f : c.faces) {
            PairCell& fc = cells[size_t(f)];
            pull(fc.birth_l, c.birth_l);
            pull(fc.birth_l0, c.birth_l0);
            pull(fc.birth_k, c.birth_k);
            pull(fc.birth_k0, c.birth_k0);
        }
    }
    return worst;
}

}  // namespace

void FilteredPairComplex::finalize(double dedup_tol, double snap_tol) {
    tol = dedup_tol;
    // structural sanity: faces exist, have the right dimension, and the
    // unfiltered boundary squares to zero over Z/2
    for (const auto& c : cells) {
        std::map<int32_t, int> second;
        for (int32_t f : c.faces) {
            if (f < 0 || size_t(f) >= cells.size())
                throw NumericError("filtered pair: face id out of range");
            if (cells[size_t(f)].dim != c.dim - 1)
                throw NumericError("filtered pair: face has wrong dimension");
            for (int32_t g : cells[size_t(f)].faces) second[g]++;
        }
        for (auto& [g, cnt] : second)
            if (cnt % 2 != 0) throw NumericError("filtered pair: boundary^2 != 0");
    }

    double adj = propagate_min(cells);
    if (adj > snap_tol) throw NumericError("filtered pair: face-closure violation " + std::to_string(adj));

    // nesting: L0 inside L, K0 inside K, K inside L
    double nest = 0;
    for (auto& c : cells) {
        auto raise = [&](double& hi, double lo) {
            if (hi < lo) {
                nest = std::max(nest, lo - hi);
                hi = lo;
            }
        };
        raise(c.birth_l0, c.birth_l);
        raise(c.birth_k, c.birth_l);
        raise(c.birth_k0, c.birth_k);
    }
    if (nest > snap_tol) throw NumericError("filtered pair: nesting violation " + std::to_string(nest));
    if (nest > 0) {
        adj = propagate_min(cells);
        if (adj > snap_tol) throw NumericError("filtered pair: closure violation after nesting snap");
    }

    // Three containment-type conditions make psi a strict morphism of
    // persistence modules (all squares commute at the chain level); each is a
    // theorem for the geometric pipelines, proven by tracking the segment
    // between witness points across the boundary of B_r(q):
    //  (1) containment: in L0 and in K  =>  in K0
    //  (2) K-entry:     in L strictly before K  =>  enters K through K0
    //  (3) kill-closure: sigma in L \ K with a face tau in K  =>  tau in K0
    double contain = 0;
    auto lower_k0 = [&](PairCell& c, double bound) {
        if (c.birth_k0 > bound) {
            if (bound != kInf)
                contain = std::max(contain,
                                   c.birth_k0 == kInf ? snap_tol * 2 : c.birth_k0 - bound);
            c.birth_k0 = bound;
        }
    };
    for (auto& c : cells) {
        lower_k0(c, std::max(c.birth_l0, c.birth_k));
        if (c.birth_k - c.birth_l > dedup_tol && c.birth_k != kInf) lower_k0(c, c.birth_k);
    }
    for (auto& c : cells) {
        for (int32_t f : c.faces) {
            PairCell& fc = cells[size_t(f)];
            double lo = std::max(c.birth_l, fc.birth_k);
            if (c.birth_k - lo > dedup_tol) lower_k0(fc, lo);
        }
    }
    if (contain > snap_tol)
        throw NumericError("filtered pair: containment violation " + std::to_string(contain));
    propagate_min(cells);  // the lowered K0 births re-close the filtration

    // critical values: every distinct finite birth at or below the cap
    std::vector<double> vals, above;
    for (const auto& c : cells)
        for (double v : {c.birth_l, c.birth_l0, c.birth_k, c.birth_k0})
            if (std::isfinite(v)) (v <= alpha_cap + dedup_tol ? vals : above).push_back(v);
    auto dedup = [&](std::vector<double>& v) {
        std::sort(v.begin(), v.end());
        std::vector<double> out;
        for (double x : v)
            if (out.empty() || x - out.back() > dedup_tol) out.push_back(x);
        v = out;
    };
    dedup(vals);
    dedup(above);
    critical_values = vals;
    births_above_cap = above;
}

Snapshot snapshot(const FilteredPairComplex& cx, double alpha) {
    if (alpha < 0 || alpha > cx.alpha_cap + cx.tol)
        throw UsageError("snapshot: alpha out of [0, alpha_cap]");
    Snapshot s;
    s.alpha = alpha;
    for (int32_t i = 0; i < int32_t(cx.cells.size()); ++i) {
        const auto& c = cx.cells[size_t(i)];
        if (c.birth_l <= alpha) s.L.push_back(i);
        if (c.birth_l0 <= alpha) s.L0.push_back(i);
        if (c.birth_k <= alpha) s.K.push_back(i);
        if (c.birth_k0 <= alpha) s.K0.push_back(i);
    }
    return s;
}

void check_chain_conditions(const FilteredPairComplex& cx, double alpha) {
    auto in_l = [&](int32_t i) {
        const auto& c = cx.cells[size_t(i)];
        return c.birth_l <= alpha && !(c.birth_l0 <= alpha);
    };
    auto in_k = [&](int32_t i) {
        const auto& c = cx.cells[size_t(i)];
        return c.birth_k <= alpha && !(c.birth_k0 <= alpha);
    };

    // containment: a cell of L0 that lies in K must lie in K0
    for (size_t i = 0; i < cx.cells.size(); ++i) {
        const auto& c = cx.cells[i];
        if (c.birth_l0 <= alpha && c.birth_k <= alpha && !(c.birth_k0 <= alpha))
            throw NumericError("psi: containment violated at alpha=" + std::to_string(alpha));
    }

    // quotient boundary squares to zero, for both pairs
    auto check_dd = [&](auto active, const char* name) {
        for (int32_t i = 0; i < int32_t(cx.cells.size()); ++i) {
            if (!active(i)) continue;
            std::map<int32_t, int> second;
            for (int32_t f : cx.cells[size_t(i)].faces) {
                if (!active(f)) continue;
                for (int32_t g : cx.cells[size_t(f)].faces)
                    if (active(g)) second[g]++;
            }
            for (auto& [g, cnt] : second)
                if (cnt % 2 != 0)
                    throw NumericError(std::string("quotient boundary^2 != 0 in ") + name);
        }
    };
    check_dd(in_l, "(L,L0)");
    check_dd(in_k, "(K,K0)");

    // psi commutes with the quotient boundaries
    for (int32_t i = 0; i < int32_t(cx.cells.size()); ++i) {
        if (!in_l(i)) continue;
        std::set<int32_t> lhs, rhs;
        if (in_k(i))
            for (int32_t f : cx.cells[size_t(i)].faces)
                if (in_k(f)) lhs.insert(f);
        for (int32_t f : cx.cells[size_t(i)].faces)
            if (in_l(f) && in_k(f)) rhs.insert(f);
        if (lhs != rhs)
            throw NumericError("psi does not commute with boundary at alpha=" + std::to_string(alpha));
    }
}

PsiMap psi_map(const FilteredPairComplex& cx, double alpha) {
    check_chain_conditions(cx, alpha);
    PsiMap m;
    m.alpha = alpha;
    for (int32_t i = 0; i < int32_t(cx.cells.size()); ++i) {
        const auto& c = cx.cells[size_t(i)];
        if (c.birth_l <= alpha && !(c.birth_l0 <= alpha)) {
            m.domain.push_back(i);
            m.kept.push_back(c.birth_k <= alpha && !(c.birth_k0 <= alpha) ? 1 : 0);
        }
    }
    return m;
}

}  // namespace strata
