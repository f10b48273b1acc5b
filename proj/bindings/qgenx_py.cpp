// Copyright 2026 The QGenX Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qgenx/bench.hpp"
#include "qgenx/cdf.hpp"
#include "qgenx/golden.hpp"
#include "qgenx/quantizer.hpp"

namespace py = pybind11;
using namespace qgenx;

namespace {

NormOrder norm_from_string(const std::string& q) {
  if (q == "1") return NormOrder::l1;
  if (q == "2") return NormOrder::l2;
  if (q == "inf") return NormOrder::linf;
  throw std::invalid_argument("norm must be one of '1', '2', 'inf'");
}

}  // namespace

PYBIND11_MODULE(_qgenx, m) {
  m.doc() = "Unbiased adaptive quantization, entropy coding and the "
            "generalized extra-gradient solver for monotone VIs.";

  py::class_<LevelSchedule>(m, "LevelSchedule")
      .def(py::init([](const Eigen::VectorXd& levels, const std::string& q,
                       int version) {
             LevelSchedule sched{levels, norm_from_string(q), version};
             sched.validate();
             return sched;
           }),
           py::arg("levels"), py::arg("q") = "2", py::arg("version") = 0)
      .def_static(
          "uniform",
          [](int s, const std::string& q, int version) {
            return LevelSchedule::uniform(s, norm_from_string(q), version);
          },
          py::arg("s"), py::arg("q") = "2", py::arg("version") = 0)
      .def_readonly("levels", &LevelSchedule::levels)
      .def_readonly("version", &LevelSchedule::version)
      .def_property_readonly("s", &LevelSchedule::num_inner_levels);

  py::class_<QuantizedVector>(m, "QuantizedVector")
      .def_readonly("norm", &QuantizedVector::norm)
      .def_readonly("signs", &QuantizedVector::signs)
      .def_readonly("indices", &QuantizedVector::indices)
      .def_readonly("schedule_version", &QuantizedVector::schedule_version);

  m.def(
      "quantize",
      [](const Vec& v, const LevelSchedule& sched, uint64_t seed) {
        RngStream rng(seed);
        return quantize(v, sched, rng);
      },
      py::arg("v"), py::arg("schedule"), py::arg("seed") = 0);
  m.def("reconstruct", &reconstruct, py::arg("qv"), py::arg("schedule"));
  m.def("expected_variance", &expected_variance, py::arg("v"),
        py::arg("schedule"));

  py::class_<VarianceBoundReport>(m, "VarianceBoundReport")
      .def_readonly("eps_q", &VarianceBoundReport::eps_q)
      .def_readonly("max_level_ratio", &VarianceBoundReport::max_level_ratio)
      .def_readonly("dim_threshold", &VarianceBoundReport::dim_threshold)
      .def_readonly("small_dim_regime", &VarianceBoundReport::small_dim_regime)
      .def_readonly("p_star", &VarianceBoundReport::p_star)
      .def_readonly("k_p", &VarianceBoundReport::k_p);
  m.def("variance_bound", &variance_bound, py::arg("schedule"), py::arg("dim"));

  m.def("elias_omega_encode",
        py::overload_cast<uint64_t>(&elias_omega_encode), py::arg("n"));
  m.def("elias_omega_decode",
        py::overload_cast<const std::string&>(&elias_omega_decode),
        py::arg("bits"));

  py::class_<Codebook>(m, "Codebook")
      .def_static("huffman", &Codebook::huffman, py::arg("weights"))
      .def_static("elias", &Codebook::elias_codebook, py::arg("symbol_count"))
      .def("codewords", &Codebook::codewords)
      .def("expected_length", &Codebook::expected_length, py::arg("weights"))
      .def("is_prefix_free", &Codebook::is_prefix_free)
      .def("table_hash", &Codebook::table_hash);

  m.def(
      "encode",
      [](const QuantizedVector& qv, const Codebook& book) {
        const EncodedMessage msg = encode(qv, book);
        return py::make_tuple(py::bytes(reinterpret_cast<const char*>(
                                            msg.bytes.data()),
                                        msg.bytes.size()),
                              msg.payload_bits);
      },
      py::arg("qv"), py::arg("codebook"),
      "Returns (bytes, bit_length_before_padding).");
  m.def(
      "decode",
      [](const py::bytes& data, int dim, const Codebook& book, int version) {
        const std::string buf = data;
        return decode({reinterpret_cast<const uint8_t*>(buf.data()), buf.size()},
                      dim, book, version);
      },
      py::arg("data"), py::arg("dim"), py::arg("codebook"),
      py::arg("schedule_version") = 0);

  py::class_<CodeLengthStats>(m, "CodeLengthStats")
      .def_readonly("entropy_bits", &CodeLengthStats::entropy_bits)
      .def_readonly("bound_bits", &CodeLengthStats::bound_bits)
      .def_readonly("empirical_mean_bits", &CodeLengthStats::empirical_mean_bits);
  m.def(
      "code_length_stats",
      [](const Eigen::VectorXd& weights, int dim) {
        return code_length_stats(weights, dim);
      },
      py::arg("weights"), py::arg("dim"));

  py::class_<CoordinateCDF>(m, "CoordinateCDF")
      .def_static("uniform", &CoordinateCDF::uniform, py::arg("bins") = 1024)
      .def("value", &CoordinateCDF::value)
      .def_property_readonly("mixture_weights", &CoordinateCDF::mixture_weights);
  m.def(
      "estimate_cdf",
      [](const std::vector<Vec>& samples, const std::string& q, int bins,
         const std::string& model) {
        return estimate_cdf(samples, norm_from_string(q), bins,
                            model == "log-normal" ? CdfModel::log_normal
                                                  : CdfModel::empirical);
      },
      py::arg("samples"), py::arg("q") = "2", py::arg("bins") = 1024,
      py::arg("model") = "empirical");
  m.def(
      "optimize_levels",
      [](const CoordinateCDF& cdf, int s, const std::string& method,
         const std::string& q, int version) {
        return optimize_levels(cdf, s,
                               method == "gradient" ? LevelOptMethod::gradient
                                                    : LevelOptMethod::coordinate,
                               norm_from_string(q), version);
      },
      py::arg("cdf"), py::arg("s"), py::arg("method") = "coordinate",
      py::arg("q") = "2", py::arg("version") = 0);
  m.def("level_weights", &level_weights, py::arg("cdf"), py::arg("schedule"));
  m.def("quantization_objective", &quantization_objective, py::arg("cdf"),
        py::arg("schedule"));

  m.def("adaptive_stepsize", &adaptive_stepsize, py::arg("step_accumulator"),
        py::arg("workers"));

  py::class_<RateFit>(m, "RateFit")
      .def_readonly("slope", &RateFit::slope)
      .def_readonly("intercept", &RateFit::intercept)
      .def_readonly("r_squared", &RateFit::r_squared)
      .def_readonly("clamped", &RateFit::clamped);
  m.def("fit_rate", &fit_rate, py::arg("checkpoints"), py::arg("gaps"));

  m.def(
      "run_experiment",
      [](const std::string& config_path) {
        const ExperimentConfig config = load_experiment_config(config_path);
        const ExperimentSummary summary = run_experiment(config);
        py::dict out;
        out["checkpoints"] = summary.checkpoints;
        out["median_gaps"] = summary.median_gaps;
        out["slope"] = summary.rate.slope;
        out["r_squared"] = summary.rate.r_squared;
        out["eps_q_bar"] = summary.eps_q_bar;
        out["median_final_gap"] = summary.median_final_gap;
        out["variance_bound_violations"] = summary.variance_bound_violations;
        out["code_sandwich_violations"] = summary.code_sandwich_violations;
        out["total_bits_median"] = summary.total_bits_median;
        return out;
      },
      py::arg("config_path"),
      "Run a TOML experiment config; writes the CSV and summary and returns "
      "the summary as a dict.");
}
