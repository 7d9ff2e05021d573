#include <sstream>

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "mealclust/dbscan.hpp"
#include "mealclust/errors.hpp"
#include "mealclust/gmm.hpp"
#include "mealclust/kmeans.hpp"
#include "mealclust/pipeline.hpp"
#include "mealclust/synth.hpp"
#include "mealclust/validation.hpp"

namespace py = pybind11;
using namespace mealclust;

namespace {

template <typename Writer>
std::string to_text(Writer&& w) {
    std::ostringstream out;
    w(out);
    return out.str();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Meal-taking activity clustering core";

    py::register_exception<SchemaError>(m, "SchemaError", PyExc_ValueError);
    py::register_exception<UndefinedDbiError>(m, "UndefinedDbiError", PyExc_ArithmeticError);
    py::register_exception<SweepError>(m, "SweepError", PyExc_RuntimeError);
    py::register_exception<FitError>(m, "FitError", PyExc_RuntimeError);
    py::register_exception<ProfileError>(m, "ProfileError", PyExc_ValueError);

    // events
    py::class_<SensorEvent>(m, "SensorEvent")
        .def_property_readonly("timestamp", [](const SensorEvent& e) { return format_timestamp(e.timestamp); })
        .def_readonly("household_id", &SensorEvent::household_id)
        .def_readonly("sensor_id", &SensorEvent::sensor_id)
        .def_property_readonly("sensor_kind", [](const SensorEvent& e) { return to_string(e.sensor_kind); })
        .def_readonly("location", &SensorEvent::location)
        .def_readonly("value", &SensorEvent::value);

    m.def("parse_events", [](const std::string& text) {
        std::istringstream in(text);
        auto r = parse_events(in);
        std::vector<std::pair<std::size_t, std::string>> rejections;
        for (auto& rej : r.rejections) rejections.emplace_back(rej.line, rej.reason);
        return py::make_tuple(r.events, rejections);
    }, py::arg("text"), "Parse sensor-log CSV text; returns (events, [(line, reason)]).");
    m.def("events_to_csv", [](const std::vector<SensorEvent>& ev) {
        return to_text([&](std::ostream& o) { write_events_csv(o, ev); });
    });
    m.def("filter_meal_locations", &filter_meal_locations, py::arg("events"),
          py::arg("locations") = default_meal_locations());

    // episodes
    py::class_<ActivityEpisode>(m, "ActivityEpisode")
        .def_readonly("household_id", &ActivityEpisode::household_id)
        .def_property_readonly("start", [](const ActivityEpisode& e) { return format_timestamp(e.start); })
        .def_property_readonly("end", [](const ActivityEpisode& e) { return format_timestamp(e.end); })
        .def_readonly("duration_min", &ActivityEpisode::duration_min)
        .def_readonly("start_hour", &ActivityEpisode::start_hour)
        .def_readonly("event_count", &ActivityEpisode::event_count);
    m.def("segment_episodes",
          [](const std::vector<SensorEvent>& events, double gap, double min_duration, int min_events) {
              return segment_episodes(events, {gap, min_duration, min_events});
          },
          py::arg("events"), py::arg("gap_threshold_min") = 10.0,
          py::arg("min_duration_min") = 1.0, py::arg("min_events") = 2);

    // features
    py::class_<FeatureMatrix>(m, "FeatureMatrix")
        .def(py::init([](Eigen::MatrixXd data, std::vector<std::string> names) {
                 return make_feature_matrix(std::move(data), std::move(names));
             }),
             py::arg("data"), py::arg("feature_names") = std::vector<std::string>{})
        .def_readonly("data", &FeatureMatrix::data)
        .def_readonly("feature_names", &FeatureMatrix::feature_names)
        .def_property_readonly("scaling", [](const FeatureMatrix& f) { return to_string(f.scaling); })
        .def_readonly("means", &FeatureMatrix::means)
        .def_readonly("stddevs", &FeatureMatrix::stddevs)
        .def("unscaled", &FeatureMatrix::unscaled)
        .def_property_readonly("shape", [](const FeatureMatrix& f) {
            return py::make_tuple(f.rows(), f.dims());
        });
    m.def("build_features", [](const std::vector<ActivityEpisode>& eps, const std::string& mode) {
        return build_features(eps, parse_feature_mode(mode));
    }, py::arg("episodes"), py::arg("mode") = "duration+hour");
    m.def("scale_features", [](const FeatureMatrix& f, const std::string& method) {
        return scale_features(f, parse_scaling(method));
    }, py::arg("matrix"), py::arg("method") = "zscore");

    // kmeans
    m.def("euclidean_distance", [](const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
        return euclidean_distance(a, b);
    });
    py::class_<KMeansModel>(m, "KMeansModel")
        .def_readonly("k", &KMeansModel::k)
        .def_readonly("centroids", &KMeansModel::centroids)
        .def_readonly("labels", &KMeansModel::labels)
        .def_readonly("inertia", &KMeansModel::inertia)
        .def_readonly("iterations_run", &KMeansModel::iterations_run)
        .def_readonly("seed", &KMeansModel::seed)
        .def_readonly("inertia_trace", &KMeansModel::inertia_trace);
    m.def("assign", &assign, py::arg("matrix"), py::arg("centroids"));
    m.def("kmeans_fit",
          [](const FeatureMatrix& f, int k, std::uint64_t seed, int max_iter, double tol) {
              return kmeans_fit(f, k, seed, {max_iter, tol});
          },
          py::arg("matrix"), py::arg("k"), py::arg("seed") = 0, py::arg("max_iter") = 300,
          py::arg("tol") = 1e-6);

    // gmm
    py::class_<GmmParams>(m, "GmmParams")
        .def(py::init([](Eigen::VectorXd w, Eigen::MatrixXd mu, std::vector<Eigen::MatrixXd> cov) {
                 return GmmParams{std::move(w), std::move(mu), std::move(cov)};
             }),
             py::arg("weights"), py::arg("means"), py::arg("covariances"))
        .def_readonly("weights", &GmmParams::weights)
        .def_readonly("means", &GmmParams::means)
        .def_readonly("covariances", &GmmParams::covariances);
    py::class_<GmmModel>(m, "GmmModel")
        .def_readonly("params", &GmmModel::params)
        .def_readonly("labels", &GmmModel::labels)
        .def_readonly("log_likelihood", &GmmModel::log_likelihood)
        .def_readonly("iterations_run", &GmmModel::iterations_run)
        .def_readonly("seed", &GmmModel::seed)
        .def_readonly("log_likelihood_trace", &GmmModel::log_likelihood_trace);
    m.def("gmm_density", [](const Eigen::VectorXd& x, const GmmParams& p) { return gmm_density(x, p); });
    m.def("responsibilities",
          [](const Eigen::VectorXd& x, const GmmParams& p) { return responsibilities(x, p); });
    m.def("gmm_fit",
          [](const FeatureMatrix& f, int g, std::uint64_t seed, int max_iter, double tol) {
              GmmOptions opt;
              opt.max_iter = max_iter;
              opt.tol = tol;
              return gmm_fit(f, g, seed, opt);
          },
          py::arg("matrix"), py::arg("g"), py::arg("seed") = 0, py::arg("max_iter") = 200,
          py::arg("tol") = 1e-6);
    py::class_<CategoryRow>(m, "CategoryRow")
        .def_readonly("category", &CategoryRow::category)
        .def_readonly("mean_duration_min", &CategoryRow::mean_duration_min)
        .def_readonly("weight", &CategoryRow::weight)
        .def_readonly("count", &CategoryRow::count);
    m.def("category_summary", &category_summary, py::arg("model"), py::arg("matrix"));

    // dbscan
    py::class_<DbscanResult>(m, "DbscanResult")
        .def_readonly("eps", &DbscanResult::eps)
        .def_readonly("min_pts", &DbscanResult::min_pts)
        .def_readonly("labels", &DbscanResult::labels)
        .def_readonly("core", &DbscanResult::core)
        .def_readonly("n_clusters", &DbscanResult::n_clusters)
        .def_property_readonly("n_noise", &DbscanResult::n_noise);
    m.def("eps_neighborhood", &eps_neighborhood, py::arg("p"), py::arg("matrix"), py::arg("eps"));
    m.def("dbscan_fit", &dbscan_fit, py::arg("matrix"), py::arg("eps"), py::arg("min_pts") = 5);

    // validation
    m.def("davies_bouldin", &davies_bouldin, py::arg("matrix"), py::arg("labels"),
          py::arg("exclude_noise") = false);
    py::class_<SweepEntry>(m, "SweepEntry")
        .def_readonly("param", &SweepEntry::param)
        .def_readonly("dbi", &SweepEntry::dbi)
        .def_readonly("n_clusters", &SweepEntry::n_clusters)
        .def_readonly("n_noise", &SweepEntry::n_noise);
    py::class_<SweepReport>(m, "SweepReport")
        .def_readonly("household_id", &SweepReport::household_id)
        .def_property_readonly("algorithm", [](const SweepReport& r) { return to_string(r.algorithm); })
        .def_readonly("entries", &SweepReport::entries)
        .def_property_readonly("best", &SweepReport::best_entry)
        .def_readonly("seed", &SweepReport::seed)
        .def("to_json", [](const SweepReport& r) {
            return to_text([&](std::ostream& o) { write_sweep_json(o, r); });
        });
    m.def("sweep_kmeans", [](const FeatureMatrix& f, int first, int last, std::uint64_t seed) {
        return sweep_kmeans(f, {first, last}, seed);
    }, py::arg("matrix"), py::arg("k_min") = 2, py::arg("k_max") = 10, py::arg("seed") = 0);
    m.def("sweep_gmm", [](const FeatureMatrix& f, int first, int last, std::uint64_t seed) {
        return sweep_gmm(f, {first, last}, seed);
    }, py::arg("matrix"), py::arg("g_min") = 2, py::arg("g_max") = 10, py::arg("seed") = 0);
    m.def("sweep_dbscan", &sweep_dbscan, py::arg("matrix"), py::arg("eps_values") = default_eps_values(),
          py::arg("min_pts") = 5);

    // synthetic data
    py::class_<HouseholdProfile>(m, "HouseholdProfile")
        .def_readwrite("household_id", &HouseholdProfile::household_id)
        .def_readwrite("days", &HouseholdProfile::days)
        .def_readwrite("noise_events_per_day", &HouseholdProfile::noise_events_per_day)
        .def_readwrite("seed", &HouseholdProfile::seed)
        .def("to_text", [](const HouseholdProfile& p) {
            return to_text([&](std::ostream& o) { write_profile(o, p); });
        });
    m.def("default_profile", &default_profile, py::arg("days") = 365, py::arg("seed") = 1);
    m.def("parse_profile", [](const std::string& text) {
        std::istringstream in(text);
        return parse_profile(in);
    });
    m.def("generate_trace", [](const HouseholdProfile& p) {
        auto t = generate_trace(p);
        std::vector<py::tuple> planted;
        for (const auto& e : t.planted) {
            planted.push_back(py::make_tuple(e.day, e.category, format_timestamp(e.start), e.duration_min));
        }
        return py::make_tuple(t.events, planted);
    }, py::arg("profile"), "Returns (events, [(day, category, start, duration_min)]).");

    // pipeline
    m.def("run_pipeline",
          [](const std::string& input, const std::string& synth_profile, const std::string& out,
             const std::string& features, const std::string& scale, std::pair<int, int> k_range,
             std::pair<int, int> g_range, std::vector<double> eps, int min_pts, std::uint64_t seed) {
              RunConfig c;
              c.input_path = input;
              c.synth_profile_path = synth_profile;
              c.output_dir = out;
              c.feature_mode = parse_feature_mode(features);
              c.scaling = parse_scaling(scale);
              c.k_range = {k_range.first, k_range.second};
              c.g_range = {g_range.first, g_range.second};
              if (!eps.empty()) c.eps_values = std::move(eps);
              c.min_pts = min_pts;
              c.seed = seed;
              auto outcome = run_pipeline(c);
              return py::make_tuple(outcome.exit_code, outcome.messages);
          },
          py::arg("input") = "", py::arg("synth_profile") = "", py::arg("out") = "",
          py::arg("features") = "duration+hour", py::arg("scale") = "none",
          py::arg("k_range") = std::pair{2, 10}, py::arg("g_range") = std::pair{2, 10},
          py::arg("eps") = std::vector<double>{}, py::arg("min_pts") = 5, py::arg("seed") = 0,
          "Run the full flow; returns (exit_code, messages).");
}
