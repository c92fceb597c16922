// Command-line surface: generate synthetic datasets, run the pair decision,
// cluster a cloud into strata, and evaluate sampling bounds.
//
// Exit codes: 0 success, 1 usage, 2 data error, 3 numerical failure.
// Every flag can also be set through the environment with prefix STRATA_
// (e.g. STRATA_OUT for --out).

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include "strata/complexes.hpp"
#include "strata/cubical_oracle.hpp"
#include "strata/inference.hpp"
#include "strata/sampling_bounds.hpp"

using namespace strata;

namespace {

struct SourceOpts {
    std::string input;
    std::string shape;
    double spacing = 0.25;
    double extent = 1.0;
};

void add_source_flags(CLI::App* cmd, SourceOpts& s) {
    auto* in = cmd->add_option("--input", s.input,
                               "point file (CSV or whitespace, one point per row)")
                   ->envname("STRATA_INPUT");
    auto* sh = cmd->add_option("--shape", s.shape,
                               "synthetic dataset: cross, segment, plane-line, two-planes")
                   ->envname("STRATA_SHAPE");
    cmd->add_option("--spacing", s.spacing, "grid spacing of the synthetic dataset");
    cmd->add_option("--extent", s.extent, "half-extent of the synthetic dataset");
    in->excludes(sh);
    sh->excludes(in);
}

SpaceSpec make_spec(const SourceOpts& s) {
    if (s.shape == "cross") return SpaceSpec::cross2d(s.extent, s.spacing);
    if (s.shape == "segment") return SpaceSpec::segment1d(s.extent, s.spacing);
    if (s.shape == "plane-line") return SpaceSpec::plane_line3d(s.extent, s.spacing);
    if (s.shape == "two-planes") return SpaceSpec::two_planes3d(s.extent, s.spacing);
    throw UsageError("unknown shape: " + s.shape);
}

// loads the configured source; fills `spec` when the source is synthetic
PointCloud load_source(const SourceOpts& s, std::optional<SpaceSpec>& spec) {
    if (!s.input.empty()) return load_points(s.input);
    if (s.shape.empty()) throw UsageError("exactly one of --input or --shape is required");
    spec = make_spec(s);
    return generate_synthetic(*spec);
}

// epsilon falls back to the measured covering radius of a synthetic sample
double resolve_eps(double eps, const PointCloud& cloud, const std::optional<SpaceSpec>& spec) {
    if (eps > 0) return eps;
    if (!spec) throw UsageError("--epsilon is required for point-file input");
    return covering_radius(*spec, cloud, spec->grid_spacing / 10);
}

std::filesystem::path ensure_out(const std::string& out) {
    std::filesystem::path dir = out.empty() ? "." : out;
    std::filesystem::create_directories(dir);
    return dir;
}

void emit_diagram(const std::filesystem::path& dir, const std::string& stem,
                  const PersistenceDiagram& d, double eps) {
    std::ofstream csv(dir / (stem + ".csv"));
    if (!csv) throw DataError("cannot write " + (dir / (stem + ".csv")).string());
    write_diagram_csv(csv, d);
    std::ofstream svg(dir / (stem + ".svg"));
    if (!svg) throw DataError("cannot write " + (dir / (stem + ".svg")).string());
    write_diagram_svg(svg, d, eps, 2 * eps);
}

int cmd_generate(const SourceOpts& src, const std::string& out) {
    if (src.shape.empty()) throw UsageError("generate: --shape is required");
    SpaceSpec spec = make_spec(src);
    PointCloud cloud = generate_synthetic(spec);
    std::filesystem::path path = ensure_out(out) / "points.csv";
    save_points(path.string(), cloud);
    std::cout << "wrote " << cloud.size() << " points (dim " << cloud.dim << ") to "
              << path.string() << "\n";
    return 0;
}

struct PairOpts {
    SourceOpts src;
    size_t p = 0, q = 0;
    double r = 0, eps = 0, alpha_cap = 0, grid_h = 0;
    std::string mode;  // nerve2d | cubical, default by dimension
    std::string out;
};

int cmd_pair(const PairOpts& o) {
    std::optional<SpaceSpec> spec;
    PointCloud cloud = load_source(o.src, spec);
    if (o.p >= cloud.size() || o.q >= cloud.size())
        throw UsageError("pair: point index out of range");
    if (!(o.r > 0)) throw UsageError("pair: --radius must be positive");
    double eps = resolve_eps(o.eps, cloud, spec);
    double cap = o.alpha_cap > 0 ? o.alpha_cap : 2 * eps * (1 + 1e-6);
    std::string mode = o.mode.empty() ? (cloud.dim == 3 ? "cubical" : "nerve2d") : o.mode;
    if (mode != "nerve2d" && mode != "cubical") throw UsageError("pair: unknown --mode " + mode);
    if (cloud.dim == 3 && mode != "cubical")
        throw UsageError("pair: 3D input requires --mode cubical");

    std::filesystem::path dir = ensure_out(o.out);
    const int max_dim = cloud.dim - 1;
    const double tol = 1e-12 * o.r;
    bool equivalent = true;
    Vec3 pts[2] = {cloud.points[o.p], cloud.points[o.q]};
    if ((pts[0] - pts[1]).norm() > 2 * o.r) equivalent = false;
    // p == q is the identity map: trivially equivalent, nothing to draw
    for (int dirn = 0; dirn < 2 && o.p != o.q; ++dirn) {
        Vec3 a = pts[dirn], b = pts[1 - dirn];
        KerCokDiagrams d;
        if (mode == "nerve2d") {
            PairContext ctx{{a.x, a.y}, {b.x, b.y}, o.r, eps};
            if (ctx.disjoint()) break;  // verdict already false; nothing to draw
            FilteredPairComplex cx = build_filtered_pair(cloud, ctx, cap);
            d = kernel_cokernel_diagrams(cx, max_dim);
        } else {
            PairContext3 ctx{a, b, o.r, eps};
            double h = o.grid_h > 0 ? o.grid_h : (cloud.dim == 3 ? o.r / 32 : o.r / 64);
            if ((a - b).norm() > 2 * o.r) break;
            CubicalGrid g = rasterize(cloud, pair_bbox(ctx, h), h);
            size_t count = std::max<size_t>(9, size_t(std::ceil(cap / (h / 2))) + 1);
            FilteredPairComplex cx = cubical_pair_complex(g, ctx, uniform_levels(cap, count));
            d = kernel_cokernel_diagrams(cx, max_dim);
        }
        std::string stem = dirn == 0 ? "pq" : "qp";
        emit_diagram(dir, stem + "_ker", d.kernel, eps);
        emit_diagram(dir, stem + "_cok", d.cokernel, eps);
        if (!window_query(d.kernel, eps, 2 * eps, tol).empty() ||
            !window_query(d.cokernel, eps, 2 * eps, tol).empty())
            equivalent = false;
    }
    std::cout << "equivalent: " << (equivalent ? "true" : "false") << "\n";
    return 0;
}

struct InferOpts {
    SourceOpts src;
    double r = 0, eps = 0;
    bool spectral = false;
    std::string pairs = "all";
    int jobs = 1;
    std::string out;
};

// "all", or an explicit comma-separated edge list "i:j,k:l"
std::optional<std::vector<std::pair<size_t, size_t>>> parse_pairs(const std::string& s) {
    if (s == "all") return std::nullopt;
    std::vector<std::pair<size_t, size_t>> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        size_t colon = tok.find(':');
        if (colon == std::string::npos) throw UsageError("--pairs: expected i:j, got " + tok);
        try {
            out.emplace_back(std::stoull(tok.substr(0, colon)), std::stoull(tok.substr(colon + 1)));
        } catch (const std::exception&) {
            throw UsageError("--pairs: bad index in " + tok);
        }
    }
    if (out.empty()) throw UsageError("--pairs: empty list");
    return out;
}

int cmd_infer(const InferOpts& o) {
    std::optional<SpaceSpec> spec;
    PointCloud cloud = load_source(o.src, spec);
    if (!(o.r > 0)) throw UsageError("infer: --radius must be positive");
    if (cloud.dim != 2) throw UsageError("infer: clustering runs on 2D clouds only");
    double eps = resolve_eps(o.eps, cloud, spec);

    auto pairs = parse_pairs(o.pairs);
    StrataClustering cl = strata_clusters(cloud, o.r, eps, pairs ? &*pairs : nullptr,
                                          std::max(1, o.jobs));
    std::filesystem::path dir = ensure_out(o.out);
    write_clustering_csv((dir / "labels.csv").string(), cl);
    write_w_csv((dir / "w.csv").string(), cl);

    int32_t nclusters = 0;
    for (int32_t l : cl.labels) nclusters = std::max(nclusters, l + 1);
    std::vector<size_t> sizes(size_t(nclusters), 0);
    for (int32_t l : cl.labels) ++sizes[size_t(l)];

    std::ofstream sum(dir / "summary.txt");
    sum.precision(12);
    sum << "points=" << cloud.size() << "\nclusters=" << nclusters << "\nsizes=";
    for (size_t i = 0; i < sizes.size(); ++i) sum << (i ? "," : "") << sizes[i];
    sum << "\ndegraded_pairs=" << cl.degraded_pairs << "\n";
    if (o.spectral) {
        std::vector<std::vector<double>> w(cloud.size(), std::vector<double>(cloud.size()));
        for (size_t i = 0; i < cloud.size(); ++i)
            for (size_t j = 0; j < cloud.size(); ++j) w[i][j] = cl.W[i][j];
        SpectralResult sr = spectral_partition(w);
        sum << "lambda1=" << sr.lambda1 << "\nsplit=";
        for (size_t i = 0; i < sr.split.size(); ++i) sum << (i ? "," : "") << sr.split[i];
        sum << "\n";
    }
    std::cout << "clusters: " << nclusters << " (labels in " << (dir / "labels.csv").string()
              << ")\n";
    return 0;
}

struct BoundOpts {
    SourceOpts src;
    double rho = 0, xi = 0;
    std::string out;
};

int cmd_bound(const BoundOpts& o) {
    if (o.src.shape.empty()) throw UsageError("bound: --shape is required");
    SpaceSpec spec = make_spec(o.src);
    SamplingBoundReport rep;
    rep.rho = o.rho;
    rep.xi = o.xi;
    rep.v = volume_fraction(spec, o.rho);
    rep.n_min = min_sample_size(rep.v, o.xi);
    write_bound_report(std::cout, rep);
    if (!o.out.empty()) {
        std::ofstream f(ensure_out(o.out) / "bound.txt");
        write_bound_report(f, rep);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"local-structure equivalence of point-cloud pairs and strata clustering"};
    app.require_subcommand(1);

    uint64_t seed = 0;
    app.add_option("--seed", seed, "random seed for sampled inputs")->envname("STRATA_SEED");

    SourceOpts gen_src;
    std::string gen_out;
    auto* gen = app.add_subcommand("generate", "write a synthetic dataset as CSV");
    gen->add_option("--shape", gen_src.shape,
                    "cross, segment, plane-line, two-planes")
        ->required()
        ->envname("STRATA_SHAPE");
    gen->add_option("--spacing", gen_src.spacing, "grid spacing");
    gen->add_option("--extent", gen_src.extent, "half-extent");
    gen->add_option("--out", gen_out, "output directory")->envname("STRATA_OUT");

    PairOpts po;
    auto* pair = app.add_subcommand("pair", "decide local equivalence of two points");
    add_source_flags(pair, po.src);
    pair->add_option("-p,--p", po.p, "first point index")->required();
    pair->add_option("-q,--q", po.q, "second point index")->required();
    pair->add_option("-r,--radius", po.r, "ball radius")->required()->envname("STRATA_RADIUS");
    pair->add_option("--epsilon", po.eps, "sample density (default: covering radius)")
        ->envname("STRATA_EPSILON");
    pair->add_option("--alpha-cap", po.alpha_cap, "filtration cap (default 2*epsilon)")
        ->envname("STRATA_ALPHA_CAP");
    pair->add_option("--mode", po.mode, "nerve2d or cubical")->envname("STRATA_MODE");
    pair->add_option("--grid-h", po.grid_h, "cubical cell size (default r/64 2D, r/32 3D)");
    pair->add_option("--out", po.out, "output directory")->envname("STRATA_OUT");

    InferOpts io;
    auto* infer = app.add_subcommand("infer", "cluster the cloud into strata");
    add_source_flags(infer, io.src);
    infer->add_option("-r,--radius", io.r, "ball radius")->required()->envname("STRATA_RADIUS");
    infer->add_option("--epsilon", io.eps, "sample density (default: covering radius)")
        ->envname("STRATA_EPSILON");
    infer->add_flag("--spectral", io.spectral, "add lambda_1 and the Fiedler split");
    infer->add_option("--pairs", io.pairs, "'all' or explicit edge list i:j,k:l")
        ->envname("STRATA_PAIRS");
    infer->add_option("--jobs", io.jobs, "worker threads for the pair map")
        ->envname("STRATA_JOBS");
    infer->add_option("--out", io.out, "output directory")->envname("STRATA_OUT");

    BoundOpts bo;
    auto* bound = app.add_subcommand("bound", "minimum sample size for a synthetic space");
    bound->add_option("--shape", bo.src.shape, "cross, segment, plane-line, two-planes")
        ->required()
        ->envname("STRATA_SHAPE");
    bound->add_option("--spacing", bo.src.spacing, "grid spacing");
    bound->add_option("--extent", bo.src.extent, "half-extent");
    bound->add_option("--rho", bo.rho, "feature size of the pair under study")->required();
    bound->add_option("--xi", bo.xi, "failure probability bound")->required();
    bound->add_option("--out", bo.out, "output directory")->envname("STRATA_OUT");

    try {
        app.parse(argc, argv);
        (void)seed;
        if (gen->parsed()) return cmd_generate(gen_src, gen_out);
        if (pair->parsed()) return cmd_pair(po);
        if (infer->parsed()) return cmd_infer(io);
        if (bound->parsed()) return cmd_bound(bo);
        return 1;
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 1;
    } catch (const DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 3;
    }
}
