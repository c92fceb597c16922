#include "strata/complexes.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>

namespace strata {

namespace {

std::string vertex_name(const SplitVertex& v) {
    std::string s = std::to_string(v.site);
    if (v.side == Side::Moon) s += 'p';
    if (v.side == Side::Lune) s += 'q';
    return s;
}

std::string simplex_name(const SplitSimplex& s) {
    std::string out;
    for (const auto& v : s) {
        if (!out.empty()) out += '|';
        out += vertex_name(v);
    }
    return out;
}

}  // namespace

PairComplexBuild build_filtered_pair_full(const PointCloud& U, const PairContext& ctx,
                                          double alpha_cap) {
    if (U.dim != 2) throw UsageError("build_filtered_pair: 2D point clouds only");
    if (ctx.disjoint()) throw UsageError("build_filtered_pair: disjoint pair (|p-q| > 2r)");
    if (!(alpha_cap > 0)) throw UsageError("build_filtered_pair: alpha_cap must be positive");
    double amax = ctx.alpha_max();
    double tol = ctx.tol();

    SiteClassification cls = classify_sites(U, ctx, amax);
    std::set<int32_t> known(cls.t_p.begin(), cls.t_p.end());
    known.insert(cls.t_q.begin(), cls.t_q.end());
    known.insert(cls.t_pq.begin(), cls.t_pq.end());

    PairComplexBuild out;
    out.cx.alpha_cap = alpha_cap;
    if (known.empty()) {
        out.cx.finalize(tol, 1e-6 * ctx.r);
        return out;
    }

    // Delaunay over the sites relevant inside B_r(p); their cells agree with
    // the full diagram there, so restricted adjacencies are read off exactly.
    std::vector<int32_t> rel = relevant_sites(U, ctx);
    PointCloud sub;
    sub.dim = 2;
    for (int32_t i : rel) sub.points.push_back(U.points[size_t(i)]);
    Triangulation tri = delaunay(sub);

    // candidate simplices whose (unsplit) cells meet U_{alpha_max} cap B_r(p)
    std::vector<std::vector<int32_t>> restricted;
    auto keep = [&](std::vector<int32_t> s) {
        for (int32_t& v : s) v = rel[size_t(v)];  // back to cloud indices
        for (int32_t v : s)
            if (!known.count(v)) return;
        SplitSimplex whole;
        for (int32_t v : s) whole.push_back({v, Side::Whole});
        ConvexRegion R = cell_region(whole, U, ctx, RegionCap::None);
        if (min_distance(R, U.p2(size_t(s[0])), tol) <= amax + tol) restricted.push_back(s);
    };
    for (size_t i = 0; i < rel.size(); ++i) keep({int32_t(i)});
    for (auto e : tri.edges) keep({e[0], e[1]});
    for (auto t : tri.triangles) keep({t[0], t[1], t[2]});

    std::vector<SplitSimplex> nerve = perturbed_nerve(restricted, cls);

    // births; drop simplices with empty cells (they never enter L). Finite
    // births past the cap are kept: faces of a finite cell are always finite,
    // so this keeps the complex face-closed without boundary-tolerance games.
    std::map<SplitSimplex, int32_t> id_of;
    for (const auto& s : nerve) {
        BirthValues b = birth_values(s, U, ctx);
        if (!std::isfinite(b.l)) continue;
        PairCell c;
        c.dim = int(s.size()) - 1;
        c.birth_l = b.l;
        c.birth_l0 = b.l0;
        c.birth_k = b.k;
        c.birth_k0 = b.k0;
        id_of.emplace(s, int32_t(out.cx.cells.size()));
        out.cx.cells.push_back(std::move(c));
        out.simplices.push_back(s);
        out.cx.cell_names.push_back(simplex_name(s));
    }
    for (size_t i = 0; i < out.simplices.size(); ++i) {
        const SplitSimplex& s = out.simplices[i];
        if (s.size() < 2) continue;
        for (size_t skip = 0; skip < s.size(); ++skip) {
            SplitSimplex f;
            for (size_t a = 0; a < s.size(); ++a)
                if (a != skip) f.push_back(s[a]);
            auto it = id_of.find(f);
            if (it == id_of.end())
                throw NumericError("build_filtered_pair: missing face " + simplex_name(f));
            out.cx.cells[i].faces.push_back(it->second);
        }
    }

    out.cx.finalize(tol, 1e-6 * ctx.r);
    return out;
}

void write_filtration_csv(const std::string& path, const FilteredPairComplex& cx) {
    std::ofstream f(path);
    if (!f) throw DataError("cannot write " + path);
    f.precision(17);
    f << "# alpha_cap=" << cx.alpha_cap << "\n";
    f << "simplex,birth_l,birth_l0,birth_k,birth_k0\n";
    auto val = [](double v) {
        return std::isfinite(v) ? std::to_string(v) : std::string("inf");
    };
    for (size_t i = 0; i < cx.cells.size(); ++i) {
        const PairCell& c = cx.cells[i];
        f << (i < cx.cell_names.size() ? cx.cell_names[i] : std::to_string(i)) << ',' << val(c.birth_l)
          << ',' << val(c.birth_l0) << ',' << val(c.birth_k) << ',' << val(c.birth_k0) << "\n";
    }
}

void write_complex_off(const std::string& path, const PointCloud& U, const PairComplexBuild& built,
                       double alpha) {
    std::ofstream f(path);
    if (!f) throw DataError("cannot write " + path);
    f.precision(17);
    Snapshot snap = snapshot(built.cx, alpha);
    std::set<SplitVertex> verts;
    for (int32_t id : snap.L)
        for (const auto& v : built.simplices[size_t(id)]) verts.insert(v);
    f << "# split complex snapshot at alpha=" << alpha << "\n";
    f << verts.size() << " " << snap.L.size() << "\n";
    for (const auto& v : verts) {
        Vec2 u = U.p2(size_t(v.site));
        f << "v " << vertex_name(v) << " " << u.x << " " << u.y << "\n";
    }
    for (int32_t id : snap.L) {
        f << "s";
        for (const auto& v : built.simplices[size_t(id)]) f << " " << vertex_name(v);
        f << "\n";
    }
}

}  // namespace strata
