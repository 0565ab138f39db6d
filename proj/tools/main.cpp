// slimrank command-line front end: train a model, cross-validate, inspect
// artifacts, sweep hyperparameter grids. Exit codes: 0 success, 1 input
// error, 2 numerical failure.

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>
#include <vector>

#include "artifacts.hpp"
#include "slimrank/data.hpp"
#include "slimrank/errors.hpp"
#include "slimrank/eval.hpp"
#include "slimrank/prox.hpp"
#include "slimrank/solver.hpp"

namespace fs = std::filesystem;
using namespace slimrank;
using cli::KvFile;

namespace {

struct Options {
    std::string data;
    std::string out;
    bool binarize = false;
    double alpha = 200.0;
    double beta = 0.2;
    double delta = 0.1;
    double mu0 = 700.0;
    double gamma = 1.1;
    double mu_max = 1e10;
    double tol = 1e-4;
    int max_outer = 300;
    double dc_tol = 1e-8;
    int max_inner = 100;
    std::uint64_t seed = 0;
    std::string diag_mode = "each-iter";
    std::string final_w = "projected";
    std::string model = "ours";
    int k = 10;
    std::vector<int> n_list = {5, 10, 15, 20, 25};
    int folds = 5;
    int jobs = 1;
    bool quiet = false;
    bool write_folds = false;
    std::string from_manifest;

    std::vector<double> grid_alpha, grid_beta, grid_delta, grid_mu0;
};

SolverConfig make_config(const Options& o) {
    SolverConfig cfg;
    cfg.alpha = o.alpha;
    cfg.beta = o.beta;
    cfg.delta = o.delta;
    cfg.mu0 = o.mu0;
    cfg.gamma = o.gamma;
    cfg.mu_max = o.mu_max;
    cfg.feas_tolerance = o.tol;
    cfg.max_outer = o.max_outer;
    cfg.dc_tolerance = o.dc_tol;
    cfg.max_inner = o.max_inner;
    cfg.seed = o.seed;
    if (o.diag_mode == "each-iter")
        cfg.diag_mode = DiagMode::ProjectEachIter;
    else if (o.diag_mode == "at-end")
        cfg.diag_mode = DiagMode::ProjectAtEnd;
    else
        throw std::invalid_argument("--diag-mode must be each-iter or at-end");
    if (o.final_w == "projected")
        cfg.final_w = FinalW::ProjectedW;
    else if (o.final_w == "z3")
        cfg.final_w = FinalW::Z3;
    else
        throw std::invalid_argument("--final-w must be projected or z3");
    cfg.validate();
    return cfg;
}

fs::path resolve_out(const Options& o, const std::string& command) {
    if (!o.out.empty()) return o.out;
    if (const char* root = std::getenv("SLIMRANK_OUT_ROOT"))
        return fs::path(root) / (command + "-" + cli::iso8601_utc_now());
    throw std::invalid_argument("--out is required (or set SLIMRANK_OUT_ROOT)");
}

void apply_manifest(Options& o) {
    const KvFile kv = KvFile::read(o.from_manifest);
    auto d = [&](const char* key, double& field) {
        if (const std::string* v = kv.find(key)) field = std::stod(*v);
    };
    auto i = [&](const char* key, int& field) {
        if (const std::string* v = kv.find(key)) field = std::stoi(*v);
    };
    auto s = [&](const char* key, std::string& field) {
        if (const std::string* v = kv.find(key)) field = *v;
    };
    s("dataset", o.data);
    if (const std::string* v = kv.find("binarize")) o.binarize = (*v == "1");
    d("alpha", o.alpha);
    d("beta", o.beta);
    d("delta", o.delta);
    d("mu0", o.mu0);
    d("gamma", o.gamma);
    d("mu_max", o.mu_max);
    d("tol", o.tol);
    i("max_outer", o.max_outer);
    d("dc_tol", o.dc_tol);
    i("max_inner", o.max_inner);
    if (const std::string* v = kv.find("seed")) o.seed = std::stoull(*v);
    s("diag_mode", o.diag_mode);
    s("final_w", o.final_w);
    s("model", o.model);
    i("k", o.k);
    i("folds", o.folds);
    if (const std::string* v = kv.find("n_list")) {
        o.n_list.clear();
        std::stringstream ss(*v);
        std::string tok;
        while (std::getline(ss, tok, ','))
            if (!tok.empty()) o.n_list.push_back(std::stoi(tok));
    }
}

KvFile base_manifest(const Options& o, const std::string& command, int argc,
                     char** argv) {
    KvFile kv;
    kv.set("command", command);
    std::string joined;
    for (int a = 0; a < argc; ++a) {
        if (a) joined += ' ';
        joined += argv[a];
    }
    kv.set("command_line", joined);
    kv.set("dataset", o.data);
    kv.set("dataset_sha256", cli::sha256_file(o.data));
    kv.set("binarize", std::string(o.binarize ? "1" : "0"));
    kv.set("alpha", o.alpha);
    kv.set("beta", o.beta);
    kv.set("delta", o.delta);
    kv.set("mu0", o.mu0);
    kv.set("gamma", o.gamma);
    kv.set("mu_max", o.mu_max);
    kv.set("tol", o.tol);
    kv.set("max_outer", static_cast<long long>(o.max_outer));
    kv.set("dc_tol", o.dc_tol);
    kv.set("max_inner", static_cast<long long>(o.max_inner));
    kv.set("seed", static_cast<long long>(o.seed));
    kv.set("diag_mode", o.diag_mode);
    kv.set("final_w", o.final_w);
    kv.set("model", o.model);
    kv.set("k", static_cast<long long>(o.k));
    kv.set("folds", static_cast<long long>(o.folds));
    std::string ns;
    for (std::size_t idx = 0; idx < o.n_list.size(); ++idx) {
        if (idx) ns += ',';
        ns += std::to_string(o.n_list[idx]);
    }
    kv.set("n_list", ns);
    kv.set("timestamp_start", cli::iso8601_utc_now());
    return kv;
}

void write_id_map(const fs::path& path, const std::vector<std::string>& ids) {
    std::ofstream out(path);
    for (std::size_t i = 0; i < ids.size(); ++i)
        out << i << '\t' << ids[i] << '\n';
}

template <typename Fn>
void parallel_for(int count, int jobs, Fn&& fn) {
    const int workers = std::clamp(jobs, 1, std::max(count, 1));
    if (workers == 1) {
        for (int i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    auto body = [&] {
        for (int i = next++; i < count; i = next++) {
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    for (int t = 0; t < workers; ++t) pool.emplace_back(body);
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

CoefficientMatrix fit_model(const Options& o, const UserItemMatrix& train,
                            const SolverConfig& cfg, int fold) {
    if (o.model == "itemknn") return item_knn(train, o.k);
    ProgressCallback progress;
    if (!o.quiet)
        progress = [fold](int it, double mu, double gap, double obj) {
            if (it % 10 == 0 || it == 1)
                std::fprintf(stderr,
                             "[fold %d] iter %4d  mu %.3e  gap %.3e  obj %.6e\n",
                             fold, it, mu, gap, obj);
        };
    SolveReport rep = solve(train, cfg, progress);
    if (!o.quiet)
        std::fprintf(stderr, "[fold %d] %s after %d iterations (gap %.3e)\n",
                     fold, rep.converged ? "converged" : "hit max_outer",
                     rep.outer_iterations, rep.final_feasibility_gap);
    return rep.final_w;
}

// ---------------------------------------------------------------- train --

int run_train(Options& o, int argc, char** argv) {
    const SolverConfig cfg = make_config(o);
    const fs::path out = resolve_out(o, "train");
    LoadedDataset ds = load_triplets(o.data, {o.binarize});
    fs::create_directories(out);
    KvFile manifest = base_manifest(o, "train", argc, argv);

    struct TraceRow {
        int it;
        double mu, gap, obj;
    };
    std::vector<TraceRow> rows;
    SolveReport rep =
        solve(ds.matrix, cfg, [&](int it, double mu, double gap, double obj) {
            rows.push_back({it, mu, gap, obj});
            if (!o.quiet && (it % 10 == 0 || it == 1))
                std::fprintf(stderr, "iter %4d  mu %.3e  gap %.3e  obj %.6e\n",
                             it, mu, gap, obj);
        });

    {
        std::ofstream trace(out / "trace.tsv");
        trace << "iteration\tmu\tfeasibility_gap\tobjective\tmin_w\n";
        char buf[256];
        for (std::size_t i = 0; i < rows.size(); ++i) {
            std::snprintf(buf, sizeof buf, "%d\t%.17g\t%.17g\t%.17g\t%.17g\n",
                          rows[i].it, rows[i].mu, rows[i].gap, rows[i].obj,
                          rep.min_w_trace[i]);
            trace << buf;
        }
    }

    cli::write_w_binary(out / "w.bin", rep.final_w.values());
    cli::write_w_triplets(out / "w.tsv", rep.final_w.values());
    write_id_map(out / "users.map", ds.user_ids);
    write_id_map(out / "items.map", ds.item_ids);

    KvFile report;
    report.set("converged", std::string(rep.converged ? "1" : "0"));
    report.set("outer_iterations", static_cast<long long>(rep.outer_iterations));
    report.set("final_feasibility_gap", rep.final_feasibility_gap);
    report.set("objective_final",
               rep.objective_trace.empty() ? 0.0 : rep.objective_trace.back());
    report.set("min_w_final",
               rep.min_w_trace.empty() ? 0.0 : rep.min_w_trace.back());
    report.set("wall_time_seconds", rep.wall_time_seconds);
    report.set("seed", static_cast<long long>(rep.seed));
    report.write(out / "report.txt");

    manifest.set("artifact.w_binary", (out / "w.bin").string());
    manifest.set("artifact.w_triplets", (out / "w.tsv").string());
    manifest.set("artifact.report", (out / "report.txt").string());
    manifest.set("artifact.trace", (out / "trace.tsv").string());
    manifest.set("timestamp_end", cli::iso8601_utc_now());
    manifest.write(out / "manifest.txt");

    std::printf("wrote %s (converged=%d, iterations=%d, gap=%.3e)\n",
                out.string().c_str(), rep.converged ? 1 : 0,
                rep.outer_iterations, rep.final_feasibility_gap);
    return 0;
}

// ------------------------------------------------------------------- cv --

struct CvResult {
    std::vector<EvaluationReport> by_n;   // aggregated, with per-fold detail
};

CvResult run_cv_protocol(const Options& o, const SolverConfig& cfg,
                         const UserItemMatrix& x, const fs::path* fold_dir) {
    auto folds = split_folds(x, o.folds, o.seed);
    if (fold_dir)
        for (const FoldSplit& f : folds)
            write_fold(*fold_dir / ("fold" + std::to_string(f.fold_index)), f);

    std::vector<int> ns = o.n_list;
    std::sort(ns.begin(), ns.end());
    ns.erase(std::unique(ns.begin(), ns.end()), ns.end());
    if (ns.empty() || ns.front() < 1)
        throw std::invalid_argument("cv: list lengths must be >= 1");
    const int n_max = ns.back();

    std::vector<std::vector<EvaluationReport>> per_fold(folds.size());
    parallel_for(static_cast<int>(folds.size()), o.jobs, [&](int f) {
        const FoldSplit& fold = folds[f];
        CoefficientMatrix w = fit_model(o, fold.train, cfg, f);
        Mat scores = score_users(fold.train, w);
        auto lists = top_n(fold.train, scores, n_max);
        std::vector<EvaluationReport> reports;
        for (int n : ns) {
            // a list at smaller n is a prefix of the n_max list
            std::vector<RankedList> cut;
            cut.reserve(lists.size());
            for (const RankedList& l : lists) {
                RankedList c{l.user, l.items};
                if (static_cast<int>(c.items.size()) > n) c.items.resize(n);
                cut.push_back(std::move(c));
            }
            reports.push_back(evaluate(cut, fold.test, n));
        }
        per_fold[f] = std::move(reports);
    });

    CvResult res;
    for (std::size_t ni = 0; ni < ns.size(); ++ni) {
        std::vector<EvaluationReport> across;
        for (std::size_t f = 0; f < folds.size(); ++f)
            across.push_back(per_fold[f][ni]);
        res.by_n.push_back(aggregate_folds(across));
    }
    return res;
}

void write_cv_table(const fs::path& path, const Options& o,
                    const CvResult& res) {
    std::ofstream out(path);
    out << "fold";
    for (const auto& rep : res.by_n) out << "\thr@" << rep.n;
    for (const auto& rep : res.by_n) out << "\tarhr@" << rep.n;
    out << '\n';
    char buf[64];
    auto cell = [&](double v) {
        std::snprintf(buf, sizeof buf, "%.6f", v);
        out << '\t' << buf;
    };
    for (int f = 0; f < o.folds; ++f) {
        out << f;
        for (const auto& rep : res.by_n) cell(rep.per_fold[f].hr);
        for (const auto& rep : res.by_n) cell(rep.per_fold[f].arhr);
        out << '\n';
    }
    out << "mean";
    for (const auto& rep : res.by_n) cell(rep.hr);
    for (const auto& rep : res.by_n) cell(rep.arhr);
    out << '\n';
}

int run_cv(Options& o, int argc, char** argv) {
    const SolverConfig cfg = make_config(o);
    if (o.model != "ours" && o.model != "itemknn")
        throw std::invalid_argument("--model must be ours or itemknn");
    const fs::path out = resolve_out(o, "cv");
    LoadedDataset ds = load_triplets(o.data, {o.binarize});
    fs::create_directories(out);
    KvFile manifest = base_manifest(o, "cv", argc, argv);
    const fs::path fold_dir = out / "folds";
    CvResult res =
        run_cv_protocol(o, cfg, ds.matrix, o.write_folds ? &fold_dir : nullptr);

    write_cv_table(out / "results.tsv", o, res);
    std::ofstream summary(out / "summary.txt");
    for (const auto& rep : res.by_n) summary << rep.to_kv() << '\n';

    manifest.set("artifact.results", (out / "results.tsv").string());
    manifest.set("artifact.summary", (out / "summary.txt").string());
    manifest.set("timestamp_end", cli::iso8601_utc_now());
    manifest.write(out / "manifest.txt");

    for (const auto& rep : res.by_n)
        std::printf("n=%-3d hr=%.4f arhr=%.4f (hits %ld / %ld users)\n", rep.n,
                    rep.hr, rep.arhr, rep.hits, rep.users_evaluated);
    return 0;
}

// -------------------------------------------------------------- inspect --

int run_inspect(const std::string& run_dir, const std::string& data_override,
                double delta_override) {
    const fs::path dir = run_dir;
    if (!fs::exists(dir / "w.bin") || !fs::exists(dir / "manifest.txt"))
        throw Error("inspect: " + dir.string() +
                    " does not contain w.bin and manifest.txt");
    const KvFile manifest = KvFile::read(dir / "manifest.txt");

    Mat w = cli::read_w_binary(dir / "w.bin");
    if (w.diagonal().cwiseAbs().maxCoeff() != 0.0)
        throw Error("inspect: artifact has a nonzero diagonal (corrupt model)");

    const double delta = delta_override > 0.0
                             ? delta_override
                             : std::stod(manifest.get_or("delta", "0.1"));
    const std::string data_path =
        !data_override.empty() ? data_override : manifest.get_or("dataset", "");
    if (data_path.empty())
        throw Error("inspect: no dataset path recorded (pass --data)");
    LoadOptions lo;
    lo.binarize = manifest.get_or("binarize", "0") == "1";
    LoadedDataset ds = load_triplets(data_path, lo);
    if (ds.matrix.n_items() != w.rows())
        throw Error("inspect: artifact size does not match the dataset");

    const Mat scores = score_users(ds.matrix, CoefficientMatrix{w});

    long nnz = 0;
    double sum_nnz = 0.0;
    for (Eigen::Index j = 0; j < scores.cols(); ++j)
        for (Eigen::Index i = 0; i < scores.rows(); ++i)
            if (scores(i, j) != 0.0) {
                ++nnz;
                sum_nnz += scores(i, j);
            }
    double sum_support = 0.0;
    for (const Entry& e : ds.matrix.entries())
        sum_support += scores(e.user, e.item);

    const double cells =
        static_cast<double>(scores.rows()) * static_cast<double>(scores.cols());
    Vec sv = singular_values(w);

    KvFile out;
    out.set("x_density", ds.matrix.density());
    out.set("xhat_density", nnz / cells);
    out.set("xhat_mean_nonzero", nnz > 0 ? sum_nnz / nnz : 0.0);
    out.set("xhat_mean_on_support",
            ds.matrix.n_entries() > 0
                ? sum_support / static_cast<double>(ds.matrix.n_entries())
                : 0.0);
    out.set("w_nonzeros", static_cast<long long>((w.array() != 0.0).count()));
    out.set("w_density", static_cast<double>((w.array() != 0.0).count()) /
                             (static_cast<double>(w.rows()) *
                              static_cast<double>(w.cols())));
    out.set("delta", delta);
    out.set("rank_surrogate", rank_surrogate(sv, delta));
    for (int i = 0; i < std::min<int>(10, static_cast<int>(sv.size())); ++i)
        out.set("sigma_" + std::to_string(i), sv(i));

    std::cout << out.to_string();
    return 0;
}

// ---------------------------------------------------------------- sweep --

int run_sweep(Options& o, int argc, char** argv) {
    int axes = 0;
    axes += !o.grid_alpha.empty();
    axes += !o.grid_beta.empty();
    axes += !o.grid_delta.empty();
    axes += !o.grid_mu0.empty();
    if (axes < 1 || axes > 2)
        throw std::invalid_argument(
            "sweep: specify a grid for one or two of alpha/beta/delta/mu0");

    auto axis = [](const std::vector<double>& grid, double fallback) {
        return grid.empty() ? std::vector<double>{fallback} : grid;
    };
    const auto alphas = axis(o.grid_alpha, o.alpha);
    const auto betas = axis(o.grid_beta, o.beta);
    const auto deltas = axis(o.grid_delta, o.delta);
    const auto mu0s = axis(o.grid_mu0, o.mu0);

    const fs::path out = resolve_out(o, "sweep");
    LoadedDataset ds = load_triplets(o.data, {o.binarize});
    fs::create_directories(out);
    KvFile manifest = base_manifest(o, "sweep", argc, argv);

    std::ofstream table(out / "sweep.tsv");
    table << "alpha\tbeta\tdelta\tmu0\tn\thr\tarhr";
    const bool delta_swept = !o.grid_delta.empty();
    if (delta_swept) table << "\tsurrogate_err_analytic\tsurrogate_err_measured";
    table << '\n';

    char buf[64];
    auto cell = [&](double v, const char* fmt) {
        std::snprintf(buf, sizeof buf, fmt, v);
        table << buf;
    };
    for (double a : alphas)
        for (double b : betas)
            for (double d : deltas)
                for (double m : mu0s) {
                    Options point = o;
                    point.alpha = a;
                    point.beta = b;
                    point.delta = d;
                    point.mu0 = m;
                    const SolverConfig cfg = make_config(point);
                    if (!o.quiet)
                        std::fprintf(
                            stderr,
                            "sweep point alpha=%g beta=%g delta=%g mu0=%g\n", a,
                            b, d, m);
                    CvResult res = run_cv_protocol(point, cfg, ds.matrix, nullptr);
                    for (const auto& rep : res.by_n) {
                        cell(a, "%.17g");
                        table << '\t';
                        cell(b, "%.17g");
                        table << '\t';
                        cell(d, "%.17g");
                        table << '\t';
                        cell(m, "%.17g");
                        table << '\t' << rep.n << '\t';
                        cell(rep.hr, "%.6f");
                        table << '\t';
                        cell(rep.arhr, "%.6f");
                        if (delta_swept) {
                            table << '\t';
                            cell(d / 2.0, "%.9g");
                            table << '\t';
                            cell(surrogate_step_error(d), "%.9g");
                        }
                        table << '\n';
                    }
                }
    table.close();

    manifest.set("artifact.sweep", (out / "sweep.tsv").string());
    manifest.set("timestamp_end", cli::iso8601_utc_now());
    manifest.write(out / "manifest.txt");
    std::printf("wrote %s\n", (out / "sweep.tsv").string().c_str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"slimrank: sparse low-rank item-similarity models for Top-N "
                 "recommendation"};
    app.require_subcommand(1);

    Options o;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--data", o.data, "triplet dataset path")->required();
        cmd->add_option("--out", o.out, "output directory");
        cmd->add_flag("--binarize", o.binarize, "force all values to 1.0");
        cmd->add_option("--seed", o.seed, "RNG seed");
        cmd->add_option("--jobs", o.jobs, "max concurrent fold solves");
        cmd->add_flag("--quiet", o.quiet, "suppress progress output");
    };
    auto add_solver = [&](CLI::App* cmd) {
        cmd->add_option("--alpha", o.alpha, "l1 weight");
        cmd->add_option("--beta", o.beta, "rank-surrogate weight");
        cmd->add_option("--delta", o.delta, "surrogate accuracy control");
        cmd->add_option("--mu0", o.mu0, "initial penalty");
        cmd->add_option("--gamma", o.gamma, "penalty growth rate (> 1)");
        cmd->add_option("--mu-max", o.mu_max, "penalty cap");
        cmd->add_option("--tol", o.tol, "feasibility tolerance");
        cmd->add_option("--max-outer", o.max_outer, "outer iteration cap");
        cmd->add_option("--dc-tol", o.dc_tol, "spectral prox tolerance");
        cmd->add_option("--max-inner", o.max_inner,
                        "spectral prox iteration cap");
        cmd->add_option("--diag-mode", o.diag_mode,
                        "zero-diagonal handling: each-iter | at-end");
        cmd->add_option("--final-w", o.final_w, "reported model: projected | z3");
    };

    CLI::App* train = app.add_subcommand("train", "fit one model on a dataset");
    add_common(train);
    add_solver(train);
    train->add_option("--from-manifest", o.from_manifest,
                      "re-run the configuration recorded in a manifest");

    CLI::App* cv =
        app.add_subcommand("cv", "leave-one-out cross-validation with HR/ARHR");
    add_common(cv);
    add_solver(cv);
    cv->add_option("--model", o.model, "ours | itemknn");
    cv->add_option("--k", o.k, "neighbors for itemknn");
    cv->add_option("--n", o.n_list, "list lengths to evaluate")
        ->delimiter(',');
    cv->add_option("--folds", o.folds, "number of folds");
    cv->add_flag("--write-folds", o.write_folds, "serialize fold splits");
    cv->add_option("--from-manifest", o.from_manifest,
                   "re-run the configuration recorded in a manifest");

    CLI::App* inspect = app.add_subcommand(
        "inspect", "reconstruction and spectrum statistics of a trained model");
    std::string run_dir, data_override;
    double delta_override = 0.0;
    inspect->add_option("--run", run_dir, "training output directory")
        ->required();
    inspect->add_option("--data", data_override, "dataset override");
    inspect->add_option("--delta", delta_override, "delta override");

    CLI::App* sweep = app.add_subcommand(
        "sweep", "grid sweep over one or two hyperparameters");
    add_common(sweep);
    add_solver(sweep);
    sweep->add_option("--model", o.model, "ours | itemknn");
    sweep->add_option("--k", o.k, "neighbors for itemknn");
    sweep->add_option("--n", o.n_list, "list lengths to evaluate")
        ->delimiter(',');
    sweep->add_option("--folds", o.folds, "number of folds");
    sweep->add_option("--grid-alpha", o.grid_alpha, "alpha grid")
        ->delimiter(',');
    sweep->add_option("--grid-beta", o.grid_beta, "beta grid")
        ->delimiter(',');
    sweep->add_option("--grid-delta", o.grid_delta, "delta grid")
        ->delimiter(',');
    sweep->add_option("--grid-mu0", o.grid_mu0, "mu0 grid")
        ->delimiter(',');

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (!o.from_manifest.empty()) apply_manifest(o);
        if (train->parsed()) return run_train(o, argc, argv);
        if (cv->parsed()) return run_cv(o, argc, argv);
        if (inspect->parsed())
            return run_inspect(run_dir, data_override, delta_override);
        if (sweep->parsed()) return run_sweep(o, argc, argv);
        return 1;
    } catch (const NotPositiveDefinite& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return 2;
    } catch (const ConvergenceFailure& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return 2;
    } catch (const MaxInnerIterationsExceeded& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return 2;
    } catch (const NonFinite& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
