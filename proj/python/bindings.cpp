#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "rfcover/rfcover.hpp"

namespace py = pybind11;
using namespace rfcover;

namespace {

std::vector<int> label_ints(const std::vector<Label>& labels) {
    std::vector<int> out(labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i) out[i] = to_int(labels[i]);
    return out;
}

Dataset make_dataset(const Eigen::MatrixXd& X, const std::vector<int>& y) {
    if (X.cols() != 2 || static_cast<std::size_t>(X.rows()) != y.size())
        throw std::invalid_argument("dataset: expected an n x 2 array and n labels");
    Dataset d;
    for (Eigen::Index i = 0; i < X.rows(); ++i)
        d.points.push_back({X.row(i).transpose(), label_from_int(y[static_cast<std::size_t>(i)])});
    return d;
}

py::dict row_dict(const ReportRow& r) {
    py::dict d;
    d["method"] = std::string(method_name(r.method));
    d["M"] = r.M;
    d["mean_acc"] = r.mean_accuracy;
    d["stderr"] = r.standard_error;
    d["mean_train_s"] = r.mean_train_seconds;
    return d;
}

py::dict trial_dict(const TrialRecord& t) {
    py::dict d;
    d["trial"] = t.trial;
    d["seed"] = t.seed;
    d["method"] = std::string(method_name(t.method));
    d["M"] = t.M;
    d["accuracy"] = t.accuracy;
    d["train_s"] = t.train_seconds;
    d["sigma"] = t.sigma;
    return d;
}

}  // namespace

PYBIND11_MODULE(_rfcover, m) {
    m.doc() = "Random Fourier feature coverage classifiers";

    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const std::invalid_argument& e) {
            PyErr_SetString(PyExc_ValueError, e.what());
        }
    });

    py::enum_<Label>(m, "Label")
        .value("BS2", Label::BS2)
        .value("NONE", Label::None)
        .value("BS1", Label::BS1);

    py::enum_<KernelKind>(m, "KernelKind")
        .value("GAUSSIAN", KernelKind::Gaussian)
        .value("LINEAR", KernelKind::Linear)
        .value("LAPLACIAN", KernelKind::Laplacian)
        .value("CAUCHY", KernelKind::Cauchy);

    py::enum_<Method>(m, "Method")
        .value("DDRF", Method::DDRF)
        .value("RKS", Method::RKS)
        .value("ORF", Method::ORF)
        .value("KERNEL", Method::KERNEL);

    py::class_<Harmonic>(m, "Harmonic")
        .def(py::init<double, double, double>(), py::arg("amplitude"), py::arg("frequency"), py::arg("phase"))
        .def_readwrite("amplitude", &Harmonic::amplitude)
        .def_readwrite("frequency", &Harmonic::frequency)
        .def_readwrite("phase", &Harmonic::phase);

    py::class_<BaseStation>(m, "BaseStation")
        .def(py::init<>())
        .def_readwrite("center", &BaseStation::center)
        .def_readwrite("base_radius", &BaseStation::base_radius)
        .def_readwrite("harmonics", &BaseStation::harmonics)
        .def("radius_at", &BaseStation::radius_at);

    py::class_<ScenarioConfig>(m, "ScenarioConfig")
        .def(py::init(&ScenarioConfig::defaults))
        .def_readwrite("field_side", &ScenarioConfig::field_side)
        .def_readwrite("n_train", &ScenarioConfig::n_train)
        .def_readwrite("n_test", &ScenarioConfig::n_test)
        .def_readwrite("label_noise_rate", &ScenarioConfig::label_noise_rate)
        .def_readwrite("noise_decay_length", &ScenarioConfig::noise_decay_length)
        .def_readwrite("rng_seed", &ScenarioConfig::rng_seed)
        .def_property(
            "stations", [](const ScenarioConfig& c) { return std::vector<BaseStation>(c.stations.begin(), c.stations.end()); },
            [](ScenarioConfig& c, const std::vector<BaseStation>& s) {
                if (s.size() != 2) throw std::invalid_argument("stations: expected two base stations");
                c.stations = {s[0], s[1]};
            })
        .def("validate", &ScenarioConfig::validate);

    py::class_<Dataset>(m, "Dataset")
        .def(py::init(&make_dataset), py::arg("locations"), py::arg("labels"))
        .def("__len__", &Dataset::size)
        .def_property_readonly("locations", &Dataset::locations)
        .def_property_readonly("labels", [](const Dataset& d) { return label_ints(d.labels()); });

    m.def("generate_scenario", &generate_scenario, py::arg("config") = ScenarioConfig::defaults(),
          "Returns (train, test).");
    m.def("ground_truth_label", [](const ScenarioConfig& c, const Eigen::Vector2d& x) { return to_int(ground_truth_label(c, x)); });
    m.def("sigma_heuristic", &sigma_heuristic, py::arg("data"), py::arg("k") = 50);

    py::class_<FeatureSet>(m, "FeatureSet")
        .def_readonly("frequencies", &FeatureSet::frequencies)
        .def_readonly("phases", &FeatureSet::phases)
        .def_readonly("kernel", &FeatureSet::kernel)
        .def_readonly("sigma", &FeatureSet::sigma)
        .def("__len__", &FeatureSet::size)
        .def_property_readonly("output_columns", &FeatureSet::output_columns)
        .def("select", &FeatureSet::select);

    m.def("sample_features", &sample_features, py::arg("kernel"), py::arg("sigma"), py::arg("M"), py::arg("seed"),
          py::arg("dimension") = 2);
    m.def("sample_orf_features", &sample_orf_features, py::arg("sigma"), py::arg("M"), py::arg("seed"),
          py::arg("dimension") = 2);
    m.def("transform", [](const Eigen::MatrixXd& X, const FeatureSet& fs) { return transform(X, fs).Z; },
          py::arg("X"), py::arg("features"));
    m.def("approximate_kernel", &approximate_kernel, py::arg("x"), py::arg("x2"), py::arg("features"));
    m.def("kernel_value", &kernel_value, py::arg("kernel"), py::arg("sigma"), py::arg("x"), py::arg("x2"));

    m.def(
        "score_pool",
        [](const FeatureSet& pool, const Eigen::MatrixXd& Z, const Eigen::VectorXd& y) {
            FeatureMatrix fm;
            fm.Z = Z;
            const ScoredPool sp = score_pool(pool, fm, y);
            return py::make_tuple(sp.weights, sp.degenerate);
        },
        py::arg("pool"), py::arg("Z"), py::arg("y"), "Returns (weights, degenerate).");
    m.def(
        "select_top",
        [](const Eigen::VectorXd& weights, std::size_t M) {
            ScoredPool sp;
            sp.pool.frequencies = Eigen::MatrixXd::Zero(weights.size(), 1);
            sp.pool.phases = Eigen::VectorXd::Zero(weights.size());
            sp.weights = weights;
            return select_top(sp, M).indices;
        },
        py::arg("weights"), py::arg("M"), "Indices of the M largest weights, ties by lower index.");
    m.def(
        "ddrf_pipeline",
        [](const Eigen::MatrixXd& X, const Eigen::VectorXd& y, std::size_t M, std::size_t M0, double sigma,
           std::uint64_t seed) {
            const DdrfResult r = ddrf_pipeline(X, y, M, M0, sigma, seed);
            py::dict d;
            d["indices"] = r.selection.indices;
            d["features"] = r.selection.selected;
            d["weights"] = r.scored.weights;
            d["Z"] = r.Z.Z;
            return d;
        },
        py::arg("X"), py::arg("y"), py::arg("M"), py::arg("M0"), py::arg("sigma"), py::arg("seed"));

    py::class_<TrainOptions>(m, "TrainOptions")
        .def(py::init<>())
        .def_readwrite("reg_lambda", &TrainOptions::reg_lambda)
        .def_readwrite("max_iterations", &TrainOptions::max_iterations)
        .def_readwrite("grad_tol", &TrainOptions::grad_tol);

    py::class_<BinaryModel>(m, "BinaryModel")
        .def_readonly("theta", &BinaryModel::theta)
        .def_readonly("bias", &BinaryModel::bias)
        .def_readonly("iterations", &BinaryModel::iterations)
        .def_readonly("converged", &BinaryModel::converged)
        .def_readonly("objective_trace", &BinaryModel::objective_trace)
        .def("decision", &BinaryModel::decision);

    m.def("train_binary", &train_binary, py::arg("Z"), py::arg("y"), py::arg("options") = TrainOptions{});

    py::class_<MethodRun>(m, "TrainedModel")
        .def_readonly("train_seconds", &MethodRun::train_seconds)
        .def("predict",
             [](const MethodRun& r, const Eigen::MatrixXd& X) {
                 return std::visit([&X](const auto& model) { return label_ints(model.predict(X)); }, r.model);
             })
        .def("accuracy", [](const MethodRun& r, const Dataset& d) { return evaluate(r.model, d); });

    m.def("train_method", &train_method, py::arg("method"), py::arg("train"), py::arg("M"),
          py::arg("pool_multiplier") = 10, py::arg("sigma"), py::arg("seed"), py::arg("options") = TrainOptions{},
          py::call_guard<py::gil_scoped_release>());
    m.def("evaluate", [](const MethodRun& r, const Dataset& d) { return evaluate(r.model, d); });

    m.def("gram_matrix", py::overload_cast<const Eigen::MatrixXd&, KernelKind, double>(&gram_matrix), py::arg("X"),
          py::arg("kernel"), py::arg("sigma"));

    py::class_<BenchConfig>(m, "BenchConfig")
        .def(py::init<>())
        .def_readwrite("scenario", &BenchConfig::scenario)
        .def_readwrite("m_values", &BenchConfig::m_values)
        .def_readwrite("n_trials", &BenchConfig::n_trials)
        .def_readwrite("pool_multiplier", &BenchConfig::pool_multiplier)
        .def_readwrite("methods", &BenchConfig::methods)
        .def_readwrite("knn_k", &BenchConfig::knn_k)
        .def_readwrite("seed_base", &BenchConfig::seed_base)
        .def_readwrite("train", &BenchConfig::train)
        .def_readwrite("threads", &BenchConfig::threads)
        .def_readwrite("timing", &BenchConfig::timing)
        .def("validate", &BenchConfig::validate);

    m.def("load_config", [](const std::filesystem::path& p) { return load_config(p); }, py::arg("path"));
    m.def(
        "run_benchmark",
        [](const BenchConfig& cfg) {
            BenchReport r;
            {
                py::gil_scoped_release release;
                r = run_benchmark(cfg);
            }
            py::list rows, trials;
            for (const auto& row : r.rows) rows.append(row_dict(row));
            for (const auto& t : r.trials) trials.append(trial_dict(t));
            py::dict d;
            d["rows"] = rows;
            d["trials"] = trials;
            d["sigmas"] = r.sigmas;
            return d;
        },
        py::arg("config"), "Returns {'rows': [...], 'trials': [...], 'sigmas': [...]}.");
}
