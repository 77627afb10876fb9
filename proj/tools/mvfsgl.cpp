// Command-line front end: joint multi-view feature selection and graph
// learning over CSV matrix files, plus the evaluation protocol utilities.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "mvfsgl/csv.hpp"
#include "mvfsgl/dataset.hpp"
#include "mvfsgl/export.hpp"
#include "mvfsgl/metrics.hpp"
#include "mvfsgl/model.hpp"
#include "mvfsgl/spectral.hpp"

namespace {

struct RunConfig {
    std::string command;
    std::vector<std::string> views;
    std::string labels;
    double eta = 1.0;
    double beta = 1.0;
    double gamma = 1.0;
    double alpha = 1000.0;
    int c = 2;
    int k = 5;
    double epsilon = 1e-5;
    int max_iters = 100;
    int d = 0;  // 0: use the cluster count
    std::string affinity = "row";
    std::vector<double> percent = {5, 10, 15, 20, 25, 30, 35, 40};
    std::uint64_t seed = 0;
    std::string out = "out";
    bool transpose = false;
    bool header = false;
};

void to_json(nlohmann::json& j, const RunConfig& cfg) {
    j = nlohmann::json{{"command", cfg.command}, {"views", cfg.views},     {"labels", cfg.labels},
                       {"eta", cfg.eta},         {"beta", cfg.beta},       {"gamma", cfg.gamma},
                       {"alpha", cfg.alpha},     {"c", cfg.c},             {"k", cfg.k},
                       {"epsilon", cfg.epsilon}, {"max_iters", cfg.max_iters}, {"d", cfg.d},
                       {"affinity", cfg.affinity}, {"percent", cfg.percent}, {"seed", cfg.seed},
                       {"out", cfg.out},         {"transpose", cfg.transpose}, {"header", cfg.header}};
}

void from_json(const nlohmann::json& j, RunConfig& cfg) {
    const auto get = [&](const char* key, auto& field) {
        if (j.contains(key)) j.at(key).get_to(field);
    };
    get("views", cfg.views);
    get("labels", cfg.labels);
    get("eta", cfg.eta);
    get("beta", cfg.beta);
    get("gamma", cfg.gamma);
    get("alpha", cfg.alpha);
    get("c", cfg.c);
    get("k", cfg.k);
    get("epsilon", cfg.epsilon);
    get("max_iters", cfg.max_iters);
    get("d", cfg.d);
    get("affinity", cfg.affinity);
    get("percent", cfg.percent);
    get("seed", cfg.seed);
    get("out", cfg.out);
    get("transpose", cfg.transpose);
    get("header", cfg.header);
}

mvfsgl::Hyperparams<double> hyperparams_of(const RunConfig& cfg) {
    mvfsgl::Hyperparams<double> hp;
    hp.eta = cfg.eta;
    hp.beta = cfg.beta;
    hp.gamma = cfg.gamma;
    hp.alpha = cfg.alpha;
    hp.clusters = cfg.c;
    hp.neighbors = cfg.k;
    hp.tolerance = cfg.epsilon;
    hp.max_iters = cfg.max_iters;
    hp.projected_dim = cfg.d;
    return hp;
}

mvfsgl::AffinityMode affinity_of(const RunConfig& cfg) {
    if (cfg.affinity == "row") return mvfsgl::AffinityMode::row_scaled;
    if (cfg.affinity == "sym") return mvfsgl::AffinityMode::symmetric;
    throw CLI::ValidationError("--affinity must be 'row' or 'sym'");
}

void add_run_options(CLI::App* cmd, RunConfig& cfg, bool& dump) {
    cmd->add_option("--views", cfg.views, "View matrix CSV files (features x samples)");
    cmd->add_option("--labels", cfg.labels, "Ground-truth label file, one integer per line");
    cmd->add_option("--eta", cfg.eta, "Row-sparsity weight");
    cmd->add_option("--beta", cfg.beta, "Graph-learning weight");
    cmd->add_option("--gamma", cfg.gamma, "Locality-preservation weight");
    cmd->add_option("--alpha", cfg.alpha, "Indicator-coupling penalty");
    cmd->add_option("--c", cfg.c, "Number of clusters");
    cmd->add_option("--k", cfg.k, "Nearest neighbors for the affinity graphs");
    cmd->add_option("--epsilon", cfg.epsilon, "Relative convergence tolerance");
    cmd->add_option("--max-iters", cfg.max_iters, "Iteration cap");
    cmd->add_option("--d", cfg.d, "Projected dimension per view (0: use --c)");
    cmd->add_option("--affinity", cfg.affinity, "Affinity scaling: row | sym");
    cmd->add_option("--percent", cfg.percent, "Feature-selection percentages in (0,100]");
    cmd->add_option("--seed", cfg.seed, "Random seed");
    cmd->add_option("--out", cfg.out, "Output directory");
    cmd->add_flag("--transpose", cfg.transpose, "Input files are samples x features");
    cmd->add_flag("--header", cfg.header, "Skip the first line of each input file");
    cmd->add_flag("--dump-config", dump, "Print the effective configuration as JSON and exit");
    cmd->add_option("--config", "JSON file with configuration defaults (flags override)")
        ->check(CLI::ExistingFile);
}

std::string dump_config(const RunConfig& cfg) {
    nlohmann::json j = cfg;
    return j.dump(2) + "\n";
}

mvfsgl::MultiViewDataset<double> load_normalized(const RunConfig& cfg) {
    if (cfg.views.empty()) throw std::runtime_error("no view files given (use --views)");
    auto ds = mvfsgl::load_dataset<double>(cfg.views, cfg.labels, cfg.header, cfg.transpose);
    return mvfsgl::minmax_normalize(ds);
}

std::string percent_tag(double percent) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", percent);
    std::string tag(buf);
    for (auto& ch : tag)
        if (ch == '.') ch = '_';
    return tag;
}

std::string format_metric(double value) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6f", value);
    return buf;
}

int cmd_fit(const RunConfig& cfg) {
    const auto ds = load_normalized(cfg);
    const auto result = mvfsgl::fit(ds, hyperparams_of(cfg), affinity_of(cfg), cfg.seed);
    mvfsgl::write_fit_outputs(result.state, result.trace, cfg.out);
    std::cout << "iterations=" << result.trace.iterations.size()
              << " converged=" << (result.trace.converged ? "yes" : "no")
              << " objective=" << result.trace.iterations.back().objective << "\n";
    return result.trace.converged ? 0 : 2;
}

int cmd_select(const RunConfig& cfg) {
    const auto ds = load_normalized(cfg);
    for (const double p : cfg.percent)
        if (!(p > 0.0) || p > 100.0) throw std::runtime_error("--percent values must lie in (0,100]");

    const auto result = mvfsgl::fit(ds, hyperparams_of(cfg), affinity_of(cfg), cfg.seed);
    const auto rankings = mvfsgl::feature_scores(result.state);

    std::filesystem::create_directories(cfg.out);
    std::ofstream metrics;
    if (ds.has_labels()) {
        metrics.open((std::filesystem::path(cfg.out) / "fs_metrics.csv").string());
        if (!metrics) throw std::runtime_error("cannot write fs_metrics.csv");
    }

    constexpr int kRuns = 20;
    for (const double p : cfg.percent) {
        const auto reduced = mvfsgl::select_features(ds, rankings, p);
        for (int v = 0; v < reduced.view_count(); ++v)
            mvfsgl::save_matrix_csv((std::filesystem::path(cfg.out) /
                                     ("selected_p" + percent_tag(p) + "_view" + std::to_string(v + 1) + ".csv"))
                                        .string(),
                                    reduced.views[static_cast<size_t>(v)]);
        if (!ds.has_labels()) continue;

        const auto stacked = mvfsgl::concatenate_views(reduced);
        std::vector<double> run_nmi, run_acc, run_pur;
        for (int run = 1; run <= kRuns; ++run) {
            const auto assignment = mvfsgl::kmeans(stacked, cfg.c, 1, cfg.seed + static_cast<std::uint64_t>(run));
            run_nmi.push_back(mvfsgl::nmi(assignment.labels, ds.labels));
            run_acc.push_back(mvfsgl::acc(assignment.labels, ds.labels));
            run_pur.push_back(mvfsgl::purity(assignment.labels, ds.labels));
            metrics << percent_tag(p) << ',' << run << ',' << format_metric(run_nmi.back()) << ','
                    << format_metric(run_acc.back()) << ',' << format_metric(run_pur.back()) << '\n';
        }
        const auto mean = [](const std::vector<double>& xs) {
            double s = 0;
            for (double x : xs) s += x;
            return s / static_cast<double>(xs.size());
        };
        const auto stddev = [&](const std::vector<double>& xs) {
            const double m = mean(xs);
            double s = 0;
            for (double x : xs) s += (x - m) * (x - m);
            return std::sqrt(s / static_cast<double>(xs.size() - 1));
        };
        metrics << percent_tag(p) << ",mean," << format_metric(mean(run_nmi)) << ','
                << format_metric(mean(run_acc)) << ',' << format_metric(mean(run_pur)) << '\n';
        metrics << percent_tag(p) << ",std," << format_metric(stddev(run_nmi)) << ','
                << format_metric(stddev(run_acc)) << ',' << format_metric(stddev(run_pur)) << '\n';
        std::cout << "percent=" << p << " mean_nmi=" << format_metric(mean(run_nmi)) << "\n";
    }
    return 0;
}

int cmd_cluster(const RunConfig& cfg) {
    const auto ds = load_normalized(cfg);
    const auto result = mvfsgl::fit(ds, hyperparams_of(cfg), affinity_of(cfg), cfg.seed);
    const auto labels = mvfsgl::spectral_cluster(result.state.graph, cfg.c, cfg.seed);

    std::filesystem::create_directories(cfg.out);
    mvfsgl::save_labels_csv((std::filesystem::path(cfg.out) / "labels.csv").string(), labels);
    if (ds.has_labels()) {
        const double score_nmi = mvfsgl::nmi(labels, ds.labels);
        const double score_acc = mvfsgl::acc(labels, ds.labels);
        const double score_pur = mvfsgl::purity(labels, ds.labels);
        std::ofstream metrics((std::filesystem::path(cfg.out) / "cluster_metrics.csv").string());
        if (!metrics) throw std::runtime_error("cannot write cluster_metrics.csv");
        metrics << "spectral," << format_metric(score_nmi) << ',' << format_metric(score_acc) << ','
                << format_metric(score_pur) << '\n';
        std::cout << "nmi=" << format_metric(score_nmi) << " acc=" << format_metric(score_acc)
                  << " pur=" << format_metric(score_pur) << "\n";
    }
    return 0;
}

int cmd_eval(const std::string& pred_path, const std::string& truth_path) {
    const auto pred = mvfsgl::load_labels_csv(pred_path);
    const auto truth = mvfsgl::load_labels_csv(truth_path);
    if (pred.size() != truth.size())
        throw std::runtime_error("label files differ in length: " + std::to_string(pred.size()) + " vs " +
                                 std::to_string(truth.size()));
    std::cout << format_metric(mvfsgl::nmi(pred, truth)) << ',' << format_metric(mvfsgl::acc(pred, truth))
              << ',' << format_metric(mvfsgl::purity(pred, truth)) << "\n";
    return 0;
}

// Applies --config (if any) as defaults before the regular parse, so that
// explicitly passed flags win and --dump-config round-trips exactly.
void preload_config(int argc, char** argv, RunConfig& cfg) {
    for (int i = 1; i + 1 < argc; ++i) {
        if (std::string(argv[i]) == "--config") {
            std::ifstream in(argv[i + 1]);
            if (!in) throw std::runtime_error(std::string("cannot open config file: ") + argv[i + 1]);
            nlohmann::json j;
            in >> j;
            cfg = j.get<RunConfig>();
        }
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Joint multi-view unsupervised feature selection and graph learning"};
    app.require_subcommand(1);

    RunConfig cfg;
    try {
        preload_config(argc, argv, cfg);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    bool dump = false;

    auto* fit_cmd = app.add_subcommand("fit", "Learn the model and write S/H/delta/W/trace CSVs");
    auto* select_cmd = app.add_subcommand("select", "Rank features, write reduced views and k-means metrics");
    auto* cluster_cmd = app.add_subcommand("cluster", "Fit, then spectral-cluster the learned graph");
    add_run_options(fit_cmd, cfg, dump);
    add_run_options(select_cmd, cfg, dump);
    add_run_options(cluster_cmd, cfg, dump);

    std::string pred_path, truth_path;
    auto* eval_cmd = app.add_subcommand("eval", "Print NMI, ACC, PUR for two label files");
    eval_cmd->add_option("pred", pred_path, "Predicted labels")->required();
    eval_cmd->add_option("truth", truth_path, "Ground-truth labels")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (eval_cmd->parsed()) return cmd_eval(pred_path, truth_path);
        cfg.command = app.get_subcommands().front()->get_name();
        if (dump) {
            std::cout << dump_config(cfg);
            return 0;
        }
        if (fit_cmd->parsed()) return cmd_fit(cfg);
        if (select_cmd->parsed()) return cmd_select(cfg);
        if (cluster_cmd->parsed()) return cmd_cluster(cfg);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
