#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "rfcover/classifier.hpp"
#include "rfcover/ddrf.hpp"
#include "rfcover/kernel_baseline.hpp"
#include "rfcover/scenario.hpp"

namespace rfcover {

enum class Method { DDRF, RKS, ORF, KERNEL };

Method parse_method(std::string_view name);
std::string_view method_name(Method m) noexcept;
std::vector<Method> parse_method_list(std::string_view csv);

struct BenchConfig {
    ScenarioConfig scenario = ScenarioConfig::defaults();
    std::vector<std::size_t> m_values{4, 8, 12, 16, 20};
    std::size_t n_trials = 30;
    std::size_t pool_multiplier = 10;
    std::vector<Method> methods{Method::DDRF, Method::RKS, Method::ORF, Method::KERNEL};
    std::size_t knn_k = 50;
    std::uint64_t seed_base = 2020;
    TrainOptions train;
    /// Worker threads for trials. Forced to 1 when `timing` is set.
    std::size_t threads = 1;
    bool timing = false;
    std::filesystem::path output_path;

    void validate() const;
};

/// One (trial, method, M) measurement. KERNEL rows carry M = 0.
struct TrialRecord {
    std::size_t trial = 0;
    std::uint64_t seed = 0;
    Method method = Method::RKS;
    std::size_t M = 0;
    double accuracy = 0.0;
    double train_seconds = 0.0;
    double sigma = 0.0;
};

struct ReportRow {
    Method method = Method::RKS;
    std::size_t M = 0;
    double mean_accuracy = 0.0;
    /// Sample standard deviation / sqrt(trials); 0 for a single trial.
    double standard_error = 0.0;
    double mean_train_seconds = 0.0;
};

struct BenchReport {
    std::vector<ReportRow> rows;
    std::vector<TrialRecord> trials;
    /// sigma used in each trial, by trial index.
    std::vector<double> sigmas;

    const ReportRow* find(Method method, std::size_t M) const;
};

using TrainedModel = std::variant<MultiClassModel, KernelMultiClassModel>;

struct MethodRun {
    TrainedModel model;
    double train_seconds = 0.0;
    /// DDRF only: shared pool and per-task selections in kClassOrder.
    std::optional<FeatureSet> pool;
    std::vector<DdrfResult> selections;
};

/// Trains a 3-class predictor with one method. The timed span covers feature
/// sampling, DDRF selection (or Gram construction) and all three
/// optimizations.
MethodRun train_method(Method method, const Dataset& train, std::size_t M, std::size_t pool_multiplier, double sigma,
                       std::uint64_t seed, const TrainOptions& options = {});

double evaluate(const TrainedModel& model, const Dataset& data);

/// Feature-sampling seed for (trial seed, method, M).
std::uint64_t method_seed(std::uint64_t trial_seed, Method method, std::size_t M) noexcept;

/// Runs every trial, method and M. `on_trial` fires after each record (in
/// trial order when running on one thread).
BenchReport run_benchmark(const BenchConfig& config, const std::function<void(const TrialRecord&)>& on_trial = {});

/// Groups trial records by (method, M) in first-seen order.
std::vector<ReportRow> aggregate(const std::vector<TrialRecord>& trials);

/// `method,M,mean_acc,stderr,mean_train_s`
void write_summary_csv(std::ostream& out, const BenchReport& report);
std::vector<ReportRow> read_summary_csv(std::istream& in);
/// `trial,seed,method,M,accuracy,train_s,sigma`
void write_trials_csv(std::ostream& out, const BenchReport& report);
void print_table(std::ostream& out, const BenchReport& report);

/// Writes summary.csv (and trials.csv when `per_trial`) into `dir` and prints
/// the aligned table to `table_out`.
void emit_report(const BenchReport& report, const std::filesystem::path& dir, std::ostream& table_out,
                 bool per_trial = true);

/// `key = value` config file. Lines starting with '#' are comments. Keys:
///   field_side, n_train, n_test, label_noise_rate, noise_decay_length, seed,
///   bs1_center, bs1_radius, bs1_harmonics (same for bs2),
///   m_values, n_trials, pool_multiplier, methods, knn_k,
///   reg_lambda, max_iterations, grad_tol, threads, timing, output_path
/// Centers are `x, y`; harmonics are `amp freq phase; amp freq phase; ...`;
/// lists are comma separated. Unknown keys are errors.
BenchConfig parse_config(std::istream& in, BenchConfig base = {});
BenchConfig load_config(const std::filesystem::path& path, BenchConfig base = {});

}  // namespace rfcover
