// rfcover: coverage-boundary detection with randomized shallow networks.
//
//   rfcover bench    --config <file> --methods ddrf,rks,orf,kernel --m 4,8,12,16 --trials 30 --out <dir>
//   rfcover generate --config <file> --out <csv> [--test-out <csv>]
//   rfcover train    --method ddrf --m 16 [--config <file>] [--model-out <file>]

#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "rfcover/rfcover.hpp"

namespace {

using namespace rfcover;

std::vector<std::size_t> parse_m_list(const std::string& csv) {
    std::vector<std::size_t> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        const long long v = std::stoll(item);
        if (v < 1) throw std::invalid_argument("--m values must be positive");
        out.push_back(static_cast<std::size_t>(v));
    }
    if (out.empty()) throw std::invalid_argument("--m list is empty");
    return out;
}

void write_file(const std::filesystem::path& path, const std::function<void(std::ostream&)>& body) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write " + path.string());
    body(f);
    if (!f) throw std::runtime_error("write failed for " + path.string());
}

struct CommonOptions {
    std::string config_path;
    std::optional<std::uint64_t> seed;
};

BenchConfig resolve_config(const CommonOptions& common) {
    BenchConfig cfg;
    if (!common.config_path.empty()) cfg = load_config(common.config_path);
    if (common.seed) cfg.scenario.rng_seed = cfg.seed_base = *common.seed;
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Cell-coverage boundary detection with data-driven random features"};
    app.require_subcommand(1);

    CommonOptions bench_common;
    std::string bench_methods, bench_m, bench_out;
    std::optional<std::size_t> bench_trials, bench_pool, bench_threads;
    bool bench_timing = false, bench_no_trials = false;
    auto* bench = app.add_subcommand("bench", "Run the DDRF/RKS/ORF/kernel comparison");
    bench->add_option("--config", bench_common.config_path, "key = value config file")->check(CLI::ExistingFile);
    bench->add_option("--methods", bench_methods, "Comma separated subset of ddrf,rks,orf,kernel");
    bench->add_option("--m", bench_m, "Comma separated feature counts");
    bench->add_option("--trials", bench_trials, "Number of trials");
    bench->add_option("--pool-multiplier", bench_pool, "DDRF pool size as a multiple of M");
    bench->add_option("--threads", bench_threads, "Worker threads for trials (ignored with --timing)");
    bench->add_option("--out", bench_out, "Output directory for summary.csv and trials.csv");
    bench->add_option("--seed", bench_common.seed, "Base seed; trial t uses seed + t");
    bench->add_flag("--timing", bench_timing, "Run trials sequentially for clean wall-clock timings");
    bench->add_flag("--no-trials-csv", bench_no_trials, "Skip the per-trial CSV");

    CommonOptions gen_common;
    std::string gen_out, gen_test_out;
    auto* generate = app.add_subcommand("generate", "Generate a synthetic sensor field");
    generate->add_option("--config", gen_common.config_path, "key = value config file")->check(CLI::ExistingFile);
    generate->add_option("--out", gen_out, "CSV for the training split (x1,x2,y)")->required();
    generate->add_option("--test-out", gen_test_out, "CSV for the test split");
    generate->add_option("--seed", gen_common.seed, "Scenario seed");

    CommonOptions train_common;
    std::string train_method_name = "ddrf", model_out, features_out, scores_dir;
    std::size_t train_m = 16;
    std::optional<std::size_t> train_pool;
    auto* train = app.add_subcommand("train", "Single training run; prints test accuracy");
    train->add_option("--config", train_common.config_path, "key = value config file")->check(CLI::ExistingFile);
    train->add_option("--method", train_method_name, "ddrf, rks, orf or kernel");
    train->add_option("--m", train_m, "Number of random features")->check(CLI::PositiveNumber);
    train->add_option("--pool-multiplier", train_pool, "DDRF pool size as a multiple of M");
    train->add_option("--seed", train_common.seed, "Scenario seed");
    train->add_option("--model-out", model_out, "Write the trained model (random-feature methods)");
    train->add_option("--features-out", features_out, "Write the BS1 detector's features as nu1,nu2,b CSV");
    train->add_option("--scores-dir", scores_dir, "DDRF: write per-class pool_index,weight,selected CSVs here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (*bench) {
            BenchConfig cfg = resolve_config(bench_common);
            if (!bench_methods.empty()) cfg.methods = parse_method_list(bench_methods);
            if (!bench_m.empty()) cfg.m_values = parse_m_list(bench_m);
            if (bench_trials) cfg.n_trials = *bench_trials;
            if (bench_pool) cfg.pool_multiplier = *bench_pool;
            if (bench_threads) cfg.threads = *bench_threads;
            if (bench_timing) cfg.timing = true;
            if (!bench_out.empty()) cfg.output_path = bench_out;

            const BenchReport report = run_benchmark(cfg, [](const TrialRecord& r) {
                std::clog << "trial " << r.trial << ' ' << method_name(r.method) << " M=" << r.M << " acc=" << r.accuracy
                          << " t=" << r.train_seconds << "s\n";
            });
            if (cfg.output_path.empty()) print_table(std::cout, report);
            else emit_report(report, cfg.output_path, std::cout, !bench_no_trials);
            return 0;
        }

        if (*generate) {
            const BenchConfig cfg = resolve_config(gen_common);
            const auto [tr, te] = generate_scenario(cfg.scenario);
            write_file(gen_out, [&tr](std::ostream& o) { write_dataset_csv(o, tr); });
            if (!gen_test_out.empty()) write_file(gen_test_out, [&te](std::ostream& o) { write_dataset_csv(o, te); });
            std::cout << "train: " << tr.size() << " points, test: " << te.size() << " points\n";
            return 0;
        }

        if (*train) {
            BenchConfig cfg = resolve_config(train_common);
            if (train_pool) cfg.pool_multiplier = *train_pool;
            const Method method = parse_method(train_method_name);
            const auto [tr, te] = generate_scenario(cfg.scenario);
            const double sigma = sigma_heuristic(tr, cfg.knn_k);
            const MethodRun run = train_method(method, tr, train_m, cfg.pool_multiplier, sigma,
                                               method_seed(cfg.scenario.rng_seed, method, train_m), cfg.train);
            const double acc = evaluate(run.model, te);
            std::cout << std::fixed << std::setprecision(4) << "method " << method_name(method) << " M " << train_m
                      << " sigma " << sigma << " accuracy " << acc << " train_s " << std::setprecision(5)
                      << run.train_seconds << '\n';

            if (const auto* mc = std::get_if<MultiClassModel>(&run.model)) {
                if (!model_out.empty()) write_file(model_out, [mc](std::ostream& o) { write_model(o, *mc); });
                if (!features_out.empty())
                    write_file(features_out, [mc](std::ostream& o) { write_features_csv(o, mc->feature_sets[0]); });
            } else if (!model_out.empty() || !features_out.empty()) {
                std::cerr << "note: --model-out/--features-out apply to random-feature methods only\n";
            }
            if (!scores_dir.empty()) {
                if (run.selections.empty()) throw std::invalid_argument("--scores-dir requires --method ddrf");
                std::filesystem::create_directories(scores_dir);
                for (std::size_t c = 0; c < 3; ++c) {
                    const auto path = std::filesystem::path(scores_dir) /
                                      ("ddrf_scores_" + std::string(class_name(kClassOrder[c])) + ".csv");
                    const auto& sel = run.selections[c];
                    write_file(path, [&sel](std::ostream& o) { write_scores_csv(o, sel.scored, sel.selection); });
                }
            }
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
