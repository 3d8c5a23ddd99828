#include "rfcover/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

namespace rfcover {

Method parse_method(std::string_view name) {
    std::string lower(name);
    std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
    if (lower == "ddrf") return Method::DDRF;
    if (lower == "rks") return Method::RKS;
    if (lower == "orf") return Method::ORF;
    if (lower == "kernel") return Method::KERNEL;
    throw std::invalid_argument("unknown method '" + std::string(name) + "'");
}

std::string_view method_name(Method m) noexcept {
    switch (m) {
    case Method::DDRF: return "DDRF";
    case Method::RKS: return "RKS";
    case Method::ORF: return "ORF";
    case Method::KERNEL: return "KERNEL";
    }
    return "?";
}

namespace {

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

double parse_double(const std::string& s, const std::string& key) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        throw std::invalid_argument("config: '" + key + "' expects a number, got '" + s + "'");
    }
    if (used != s.size()) throw std::invalid_argument("config: '" + key + "' expects a number, got '" + s + "'");
    return v;
}

std::uint64_t parse_unsigned(const std::string& s, const std::string& key) {
    if (s.empty() || s.front() == '-') throw std::invalid_argument("config: '" + key + "' expects a nonnegative integer");
    std::size_t used = 0;
    std::uint64_t v = 0;
    try {
        v = std::stoull(s, &used);
    } catch (const std::exception&) {
        throw std::invalid_argument("config: '" + key + "' expects an integer, got '" + s + "'");
    }
    if (used != s.size()) throw std::invalid_argument("config: '" + key + "' expects an integer, got '" + s + "'");
    return v;
}

bool parse_bool(const std::string& s, const std::string& key) {
    if (s == "true" || s == "1" || s == "yes") return true;
    if (s == "false" || s == "0" || s == "no") return false;
    throw std::invalid_argument("config: '" + key + "' expects true/false");
}

Eigen::Vector2d parse_point(const std::string& s, const std::string& key) {
    const auto parts = split(s, ',');
    if (parts.size() != 2) throw std::invalid_argument("config: '" + key + "' expects 'x, y'");
    return {parse_double(parts[0], key), parse_double(parts[1], key)};
}

std::vector<Harmonic> parse_harmonics(const std::string& s, const std::string& key) {
    std::vector<Harmonic> out;
    if (s.empty() || s == "none") return out;
    for (const auto& triple : split(s, ';')) {
        if (triple.empty()) continue;
        std::istringstream in(triple);
        Harmonic h;
        std::string extra;
        if (!(in >> h.amplitude >> h.frequency >> h.phase) || (in >> extra))
            throw std::invalid_argument("config: '" + key + "' expects 'amplitude frequency phase' triples");
        out.push_back(h);
    }
    return out;
}

double elapsed_seconds(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

std::vector<Method> parse_method_list(std::string_view csv) {
    std::vector<Method> out;
    for (const auto& name : split(csv, ',')) {
        if (name.empty()) continue;
        const Method m = parse_method(name);
        if (std::find(out.begin(), out.end(), m) == out.end()) out.push_back(m);
    }
    if (out.empty()) throw std::invalid_argument("method list is empty");
    return out;
}

void BenchConfig::validate() const {
    scenario.validate();
    if (n_trials < 1) throw std::invalid_argument("bench: n_trials must be at least 1");
    if (m_values.empty()) throw std::invalid_argument("bench: m_values must not be empty");
    for (auto M : m_values)
        if (M < 1) throw std::invalid_argument("bench: every M must be positive");
    if (pool_multiplier < 2) throw std::invalid_argument("bench: pool_multiplier must be at least 2");
    if (methods.empty()) throw std::invalid_argument("bench: no methods selected");
    if (knn_k < 1) throw std::invalid_argument("bench: knn_k must be at least 1");
    if (scenario.n_train <= knn_k) throw std::invalid_argument("bench: n_train must exceed knn_k");
    if (scenario.n_test < 1) throw std::invalid_argument("bench: n_test must be at least 1 to measure accuracy");
    if (!(train.reg_lambda >= 0.0)) throw std::invalid_argument("bench: reg_lambda must be nonnegative");
    if (train.max_iterations < 0) throw std::invalid_argument("bench: max_iterations must be nonnegative");
}

const ReportRow* BenchReport::find(Method method, std::size_t M) const {
    for (const auto& r : rows) {
        if (r.method == method && (method == Method::KERNEL || r.M == M)) return &r;
    }
    return nullptr;
}

std::uint64_t method_seed(std::uint64_t trial_seed, Method method, std::size_t M) noexcept {
    return mix_seed(mix_seed(trial_seed, 16 + static_cast<std::uint64_t>(method)), M);
}

MethodRun train_method(Method method, const Dataset& train, std::size_t M, std::size_t pool_multiplier, double sigma,
                       std::uint64_t seed, const TrainOptions& options) {
    const Eigen::MatrixXd X = train.locations();
    const std::vector<Label> labels = train.labels();
    const auto dim = static_cast<std::size_t>(X.cols());

    const auto start = std::chrono::steady_clock::now();
    MethodRun run;
    switch (method) {
    case Method::RKS:
    case Method::ORF: {
        const FeatureSet fs = method == Method::RKS ? sample_features(KernelKind::Gaussian, sigma, M, seed, dim)
                                                    : sample_orf_features(sigma, M, seed, dim);
        const FeatureMatrix Z = transform(X, fs);
        const std::array<TaskFeatures, 3> tasks{TaskFeatures{fs, Z}, TaskFeatures{fs, Z}, TaskFeatures{fs, Z}};
        run.model = train_one_vs_all(tasks, labels, options);
        break;
    }
    case Method::DDRF: {
        if (pool_multiplier < 2) throw std::invalid_argument("train_method: pool_multiplier must be at least 2");
        FeatureSet pool = sample_features(KernelKind::Gaussian, sigma, pool_multiplier * M, seed, dim);
        const FeatureMatrix pool_Z = transform(X, pool);
        std::array<TaskFeatures, 3> tasks;
        for (std::size_t c = 0; c < 3; ++c) {
            const BinaryTargets y = one_vs_rest_targets(labels, kClassOrder[c]);
            DdrfResult sel = select_from_pool(pool, pool_Z, X, y, M);
            tasks[c] = TaskFeatures{sel.selection.selected, sel.Z};
            run.selections.push_back(std::move(sel));
        }
        run.model = train_one_vs_all(tasks, labels, options);
        run.pool = std::move(pool);
        break;
    }
    case Method::KERNEL:
        run.model = train_kernel_one_vs_all(X, labels, KernelKind::Gaussian, sigma, options);
        break;
    }
    run.train_seconds = elapsed_seconds(start);
    return run;
}

double evaluate(const TrainedModel& model, const Dataset& data) {
    return std::visit([&data](const auto& m) { return accuracy(m, data); }, model);
}

namespace {

struct TrialOutput {
    double sigma = 0.0;
    std::vector<TrialRecord> records;
};

TrialOutput run_trial(const BenchConfig& config, std::size_t t) {
    TrialOutput out;
    const std::uint64_t trial_seed = config.seed_base + t;
    ScenarioConfig sc = config.scenario;
    sc.rng_seed = trial_seed;
    const auto [train, test] = generate_scenario(sc);
    out.sigma = sigma_heuristic(train, config.knn_k);

    for (Method method : config.methods) {
        if (method == Method::KERNEL) {
            const MethodRun run =
                train_method(method, train, 0, config.pool_multiplier, out.sigma, trial_seed, config.train);
            out.records.push_back({t, trial_seed, method, 0, evaluate(run.model, test), run.train_seconds, out.sigma});
            continue;
        }
        for (std::size_t M : config.m_values) {
            const MethodRun run = train_method(method, train, M, config.pool_multiplier, out.sigma,
                                               method_seed(trial_seed, method, M), config.train);
            out.records.push_back({t, trial_seed, method, M, evaluate(run.model, test), run.train_seconds, out.sigma});
        }
    }
    return out;
}

}  // namespace

BenchReport run_benchmark(const BenchConfig& config, const std::function<void(const TrialRecord&)>& on_trial) {
    config.validate();

    std::vector<TrialOutput> outputs(config.n_trials);
    const std::size_t workers =
        config.timing ? 1 : std::clamp<std::size_t>(config.threads, 1, std::max<std::size_t>(config.n_trials, 1));

    auto guarded = [&](std::size_t t) {
        try {
            return run_trial(config, t);
        } catch (const std::exception& e) {
            throw std::runtime_error("trial " + std::to_string(t) + " (seed " +
                                     std::to_string(config.seed_base + t) + ") failed: " + e.what());
        }
    };

    if (workers == 1) {
        for (std::size_t t = 0; t < config.n_trials; ++t) {
            outputs[t] = guarded(t);
            if (on_trial)
                for (const auto& r : outputs[t].records) on_trial(r);
        }
    } else {
        std::atomic<std::size_t> next{0};
        std::mutex error_mutex;
        std::exception_ptr error;
        {
            std::vector<std::jthread> pool;
            for (std::size_t w = 0; w < workers; ++w) {
                pool.emplace_back([&] {
                    for (std::size_t t = next++; t < config.n_trials; t = next++) {
                        try {
                            outputs[t] = guarded(t);
                        } catch (...) {
                            std::lock_guard lock(error_mutex);
                            if (!error) error = std::current_exception();
                        }
                    }
                });
            }
        }
        if (error) std::rethrow_exception(error);
        if (on_trial)
            for (const auto& o : outputs)
                for (const auto& r : o.records) on_trial(r);
    }

    BenchReport report;
    for (auto& o : outputs) {
        report.sigmas.push_back(o.sigma);
        report.trials.insert(report.trials.end(), o.records.begin(), o.records.end());
    }
    report.rows = aggregate(report.trials);
    if (config.n_trials == 1) std::clog << "note: single trial, standard errors reported as 0\n";
    return report;
}

std::vector<ReportRow> aggregate(const std::vector<TrialRecord>& trials) {
    std::vector<std::pair<Method, std::size_t>> order;
    std::map<std::pair<Method, std::size_t>, std::vector<const TrialRecord*>> groups;
    for (const auto& r : trials) {
        const auto key = std::make_pair(r.method, r.M);
        if (!groups.contains(key)) order.push_back(key);
        groups[key].push_back(&r);
    }
    std::vector<ReportRow> rows;
    for (const auto& key : order) {
        const auto& g = groups[key];
        const double n = static_cast<double>(g.size());
        double acc = 0.0, secs = 0.0;
        for (const auto* r : g) {
            acc += r->accuracy;
            secs += r->train_seconds;
        }
        ReportRow row;
        row.method = key.first;
        row.M = key.second;
        row.mean_accuracy = acc / n;
        row.mean_train_seconds = secs / n;
        if (g.size() > 1) {
            double ss = 0.0;
            for (const auto* r : g) ss += (r->accuracy - row.mean_accuracy) * (r->accuracy - row.mean_accuracy);
            row.standard_error = std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
        }
        rows.push_back(row);
    }
    return rows;
}

void write_summary_csv(std::ostream& out, const BenchReport& report) {
    out << "method,M,mean_acc,stderr,mean_train_s\n";
    out << std::setprecision(17);
    for (const auto& r : report.rows) {
        out << method_name(r.method) << ',' << r.M << ',' << r.mean_accuracy << ',' << r.standard_error << ','
            << r.mean_train_seconds << '\n';
    }
}

std::vector<ReportRow> read_summary_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || trim(line) != "method,M,mean_acc,stderr,mean_train_s")
        throw std::runtime_error("summary csv: unexpected header");
    std::vector<ReportRow> rows;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        const auto cells = split(line, ',');
        if (cells.size() != 5) throw std::runtime_error("summary csv: expected 5 columns");
        ReportRow r;
        r.method = parse_method(cells[0]);
        r.M = parse_unsigned(cells[1], "M");
        r.mean_accuracy = parse_double(cells[2], "mean_acc");
        r.standard_error = parse_double(cells[3], "stderr");
        r.mean_train_seconds = parse_double(cells[4], "mean_train_s");
        rows.push_back(r);
    }
    return rows;
}

void write_trials_csv(std::ostream& out, const BenchReport& report) {
    out << "trial,seed,method,M,accuracy,train_s,sigma\n";
    out << std::setprecision(17);
    for (const auto& r : report.trials) {
        out << r.trial << ',' << r.seed << ',' << method_name(r.method) << ',' << r.M << ',' << r.accuracy << ','
            << r.train_seconds << ',' << r.sigma << '\n';
    }
}

void print_table(std::ostream& out, const BenchReport& report) {
    const auto flags = out.flags();
    const auto prec = out.precision();
    out << std::left << std::setw(8) << "method" << std::right << std::setw(5) << "M" << std::setw(12) << "accuracy"
        << std::setw(12) << "stderr" << std::setw(14) << "train [s]" << '\n';
    out << std::string(51, '-') << '\n';
    for (const auto& r : report.rows) {
        out << std::left << std::setw(8) << method_name(r.method) << std::right << std::setw(5)
            << (r.method == Method::KERNEL ? std::string("-") : std::to_string(r.M)) << std::fixed
            << std::setprecision(4) << std::setw(12) << r.mean_accuracy << std::setw(12) << r.standard_error
            << std::setprecision(5) << std::setw(14) << r.mean_train_seconds << '\n';
    }
    if (!report.sigmas.empty()) {
        double mean = 0.0;
        for (double s : report.sigmas) mean += s;
        mean /= static_cast<double>(report.sigmas.size());
        out << std::fixed << std::setprecision(4) << "sigma (mean over " << report.sigmas.size()
            << " trials): " << mean << '\n';
    }
    out.flags(flags);
    out.precision(prec);
}

void emit_report(const BenchReport& report, const std::filesystem::path& dir, std::ostream& table_out,
                 bool per_trial) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw std::runtime_error("cannot create output directory " + dir.string() + ": " + ec.message());
    {
        std::ofstream f(dir / "summary.csv");
        if (!f) throw std::runtime_error("cannot write " + (dir / "summary.csv").string());
        write_summary_csv(f, report);
    }
    if (per_trial) {
        std::ofstream f(dir / "trials.csv");
        if (!f) throw std::runtime_error("cannot write " + (dir / "trials.csv").string());
        write_trials_csv(f, report);
    }
    print_table(table_out, report);
}

BenchConfig parse_config(std::istream& in, BenchConfig cfg) {
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string body = trim(line.substr(0, line.find('#')));
        if (body.empty()) continue;
        const auto eq = body.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(lineno) + ": expected 'key = value'");
        const std::string key = trim(body.substr(0, eq));
        const std::string value = trim(body.substr(eq + 1));
        auto& sc = cfg.scenario;

        if (key == "field_side") sc.field_side = parse_double(value, key);
        else if (key == "n_train") sc.n_train = parse_unsigned(value, key);
        else if (key == "n_test") sc.n_test = parse_unsigned(value, key);
        else if (key == "label_noise_rate") sc.label_noise_rate = parse_double(value, key);
        else if (key == "noise_decay_length") sc.noise_decay_length = parse_double(value, key);
        else if (key == "seed") sc.rng_seed = cfg.seed_base = parse_unsigned(value, key);
        else if (key == "bs1_center") sc.stations[0].center = parse_point(value, key);
        else if (key == "bs2_center") sc.stations[1].center = parse_point(value, key);
        else if (key == "bs1_radius") sc.stations[0].base_radius = parse_double(value, key);
        else if (key == "bs2_radius") sc.stations[1].base_radius = parse_double(value, key);
        else if (key == "bs1_harmonics") sc.stations[0].harmonics = parse_harmonics(value, key);
        else if (key == "bs2_harmonics") sc.stations[1].harmonics = parse_harmonics(value, key);
        else if (key == "m_values") {
            cfg.m_values.clear();
            for (const auto& v : split(value, ',')) cfg.m_values.push_back(parse_unsigned(v, key));
        } else if (key == "n_trials") cfg.n_trials = parse_unsigned(value, key);
        else if (key == "pool_multiplier") cfg.pool_multiplier = parse_unsigned(value, key);
        else if (key == "methods") cfg.methods = parse_method_list(value);
        else if (key == "knn_k") cfg.knn_k = parse_unsigned(value, key);
        else if (key == "reg_lambda") cfg.train.reg_lambda = parse_double(value, key);
        else if (key == "max_iterations") cfg.train.max_iterations = static_cast<int>(parse_unsigned(value, key));
        else if (key == "grad_tol") cfg.train.grad_tol = parse_double(value, key);
        else if (key == "threads") cfg.threads = parse_unsigned(value, key);
        else if (key == "timing") cfg.timing = parse_bool(value, key);
        else if (key == "output_path") cfg.output_path = value;
        else throw std::invalid_argument("config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
    return cfg;
}

BenchConfig load_config(const std::filesystem::path& path, BenchConfig base) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file " + path.string());
    return parse_config(in, std::move(base));
}

}  // namespace rfcover
