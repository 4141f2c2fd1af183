#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "tailsim/dist.hpp"
#include "tailsim/sched.hpp"
#include "tailsim/simcore.hpp"
#include "tailsim/tailest.hpp"

namespace py = pybind11;
using namespace tailsim;

namespace {

dist::ServiceLawB make_law(double x_m, double alpha, double mu) {
    return {dist::ParetoParams(x_m, alpha), dist::ServerRate(mu)};
}

simcore::SimConfig make_config(std::size_t n, std::size_t k,
                               const std::vector<double> &mu,
                               const std::vector<std::pair<double, std::pair<double, double>>>
                                   &file_classes,  // (lambda, (x_m, alpha))
                               std::uint64_t horizon, std::uint64_t seed,
                               double warmup_fraction, bool allow_unstable) {
    simcore::SimConfig cfg;
    cfg.workload.n = n;
    cfg.workload.k = k;
    for (const auto &[lambda, pareto] : file_classes)
        cfg.workload.file_classes.push_back(
            {lambda, dist::ParetoParams(pareto.first, pareto.second)});
    for (double m : mu) cfg.servers.emplace_back(m);
    cfg.policy = sched::SchedulingPolicy::uniform(cfg.workload.r(), n, k);
    cfg.horizon = horizon;
    cfg.seed = seed;
    cfg.warmup_fraction = warmup_fraction;
    cfg.allow_unstable = allow_unstable;
    return cfg;
}

py::dict result_to_dict(const simcore::SimResult &result, std::size_t n_servers) {
    py::dict out;
    std::vector<double> latencies, arrivals;
    for (const auto &req : result.requests) {
        if (req.warmup) continue;
        latencies.push_back(req.latency);
        arrivals.push_back(req.arrival);
    }
    out["latencies"] = latencies;
    out["arrivals"] = arrivals;
    std::vector<std::vector<double>> waits;
    for (std::size_t j = 0; j < n_servers; ++j)
        waits.push_back(simcore::waiting_times_per_server(result, j));
    out["waiting_times"] = waits;
    out["end_time"] = result.end_time;
    return out;
}

}  // namespace

PYBIND11_MODULE(_tailsim, m) {
    m.doc() = "Erasure-coded storage tail-latency simulator and analyzer";

    m.def("sample_pareto",
          [](double x_m, double alpha, double u) {
              return dist::sample_pareto(dist::ParetoParams(x_m, alpha), u);
          },
          py::arg("x_m"), py::arg("alpha"), py::arg("u"));
    m.def("pareto_mean",
          [](double x_m, double alpha) {
              return dist::pareto_mean(dist::ParetoParams(x_m, alpha));
          },
          py::arg("x_m"), py::arg("alpha"));
    m.def("lower_incomplete_gamma", &dist::lower_incomplete_gamma, py::arg("a"), py::arg("x"));
    m.def("service_ccdf",
          [](double x_m, double alpha, double mu, double y) {
              return dist::service_ccdf(make_law(x_m, alpha, mu), y);
          },
          py::arg("x_m"), py::arg("alpha"), py::arg("mu"), py::arg("y"));
    m.def("waiting_tail_asymptote",
          [](double lambda_total, double rho, double x_m, double alpha, double mu, double x) {
              return dist::waiting_tail_asymptote(
                  dist::WaitingTailParams(lambda_total, rho, make_law(x_m, alpha, mu)), x);
          },
          py::arg("lambda_total"), py::arg("rho"), py::arg("x_m"), py::arg("alpha"),
          py::arg("mu"), py::arg("x"));
    m.def("pk_mean_waiting",
          [](double lambda_total, double x_m, double alpha, double mu) {
              return dist::pk_mean_waiting(lambda_total, make_law(x_m, alpha, mu));
          },
          py::arg("lambda_total"), py::arg("x_m"), py::arg("alpha"), py::arg("mu"));

    m.def("run_simulation",
          [](std::size_t n, std::size_t k, const std::vector<double> &mu,
             const std::vector<std::pair<double, std::pair<double, double>>> &file_classes,
             std::uint64_t horizon, std::uint64_t seed, double warmup_fraction,
             bool allow_unstable) {
              auto cfg = make_config(n, k, mu, file_classes, horizon, seed, warmup_fraction,
                                     allow_unstable);
              py::gil_scoped_release release;
              auto result = simcore::run_simulation(cfg);
              py::gil_scoped_acquire acquire;
              return result_to_dict(result, n);
          },
          py::arg("n"), py::arg("k"), py::arg("mu"), py::arg("file_classes"),
          py::arg("horizon"), py::arg("seed"), py::arg("warmup_fraction") = 0.1,
          py::arg("allow_unstable") = false);
    m.def("run_genie",
          [](std::size_t n, std::size_t k, const std::vector<double> &mu,
             const std::vector<std::pair<double, std::pair<double, double>>> &file_classes,
             std::uint64_t horizon, std::uint64_t seed, double warmup_fraction,
             bool allow_unstable) {
              auto cfg = make_config(n, k, mu, file_classes, horizon, seed, warmup_fraction,
                                     allow_unstable);
              py::gil_scoped_release release;
              auto result = simcore::run_genie(cfg);
              py::gil_scoped_acquire acquire;
              return result_to_dict(result, 1);
          },
          py::arg("n"), py::arg("k"), py::arg("mu"), py::arg("file_classes"),
          py::arg("horizon"), py::arg("seed"), py::arg("warmup_fraction") = 0.1,
          py::arg("allow_unstable") = false);

    m.def("empirical_ccdf",
          [](const std::vector<double> &samples, const std::vector<double> &grid) {
              auto curve = tailest::empirical_ccdf(samples, grid);
              return py::make_tuple(curve.x, curve.p);
          },
          py::arg("samples"), py::arg("grid"));
    m.def("hill_estimator",
          [](const std::vector<double> &samples, double order_fraction, std::uint64_t seed,
             std::size_t resamples) {
              auto est = tailest::hill_estimator(samples, order_fraction, seed, resamples);
              py::dict out;
              out["index_hat"] = est.index_hat;
              out["ci_low"] = est.ci_low;
              out["ci_high"] = est.ci_high;
              out["order_fraction"] = est.order_fraction;
              out["sample_count"] = est.sample_count;
              return out;
          },
          py::arg("samples"), py::arg("order_fraction") = 0.05, py::arg("seed") = 0,
          py::arg("resamples") = 200);
    m.def("verify_tail_index",
          [](const std::vector<double> &samples, double predicted, double tolerance,
             std::uint64_t seed, double order_fraction) {
              auto report =
                  tailest::verify_tail_index(samples, predicted, tolerance, seed, order_fraction);
              py::dict out;
              out["pass"] = report.pass;
              out["predicted"] = report.predicted;
              out["hill_index"] = report.hill.index_hat;
              out["regression_index"] = report.regression.index_hat;
              out["hill_ci"] = py::make_tuple(report.hill.ci_low, report.hill.ci_high);
              return out;
          },
          py::arg("samples"), py::arg("predicted"), py::arg("tolerance"), py::arg("seed") = 0,
          py::arg("order_fraction") = 0.05);
}
