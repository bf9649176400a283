// Copyright 2026 The vpe Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Python bindings. Structured values cross the boundary as JSON text and are
// decoded by the pure-Python wrapper, which keeps this layer thin.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "vpe/error.hpp"
#include "vpe/eval_dsl.hpp"
#include "vpe/fixture_backend.hpp"
#include "vpe/layout_codec.hpp"
#include "vpe/program_runner.hpp"
#include "vpe/report.hpp"
#include "vpe/skill_bench.hpp"
#include "vpe/stats.hpp"

namespace py = pybind11;

namespace {

std::string diagnostics_json(const std::vector<vpe::dsl::Diagnostic>& diags) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& d : diags) {
    out.push_back({{"severity", vpe::dsl::severity_name(d.severity)},
                   {"code", d.code},
                   {"message", d.message},
                   {"statement", d.statement}});
  }
  return out.dump();
}

std::string evaluate_json(const vpe::FixtureBackend& backend, const std::string& image,
                          const std::string& program, const std::string& prompt, double box_threshold,
                          double scale_tau) {
  vpe::EvalConfig config;
  config.box_threshold = box_threshold;
  config.scale_tau = scale_tau;
  vpe::check_config(config);
  const auto parsed = vpe::dsl::parse_program(program);
  vpe::EvalReport report;
  {
    py::gil_scoped_release release;
    report = vpe::run_program(backend, image, parsed, prompt, config);
  }
  return vpe::to_json(report).dump();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Native core of the vpe package.";

  // Exception types live as long as the interpreter; the handles are leaked on purpose.
  static py::handle error_type = PyErr_NewException("vpe._core.VpeError", PyExc_RuntimeError, nullptr);
  static py::handle parse_error_type = PyErr_NewException("vpe._core.ParseError", error_type.ptr(), nullptr);
  m.attr("VpeError") = error_type;
  m.attr("ParseError") = parse_error_type;
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const vpe::ParseError& e) {
      py::object exc = py::reinterpret_borrow<py::object>(parse_error_type)(e.what());
      exc.attr("code") = std::string(vpe::to_string(e.code()));
      exc.attr("line") = e.line();
      exc.attr("column") = e.column();
      exc.attr("detail") = e.detail();
      PyErr_SetObject(parse_error_type.ptr(), exc.ptr());
    } catch (const vpe::Error& e) {
      py::object exc = py::reinterpret_borrow<py::object>(error_type)(e.what());
      exc.attr("code") = std::string(vpe::to_string(e.code()));
      PyErr_SetObject(error_type.ptr(), exc.ptr());
    }
  });

  m.def("format_program",
        [](const std::string& source) { return vpe::dsl::print_program(vpe::dsl::parse_program(source)); },
        py::arg("source"));
  m.def("validate_program_json",
        [](const std::string& source) {
          return diagnostics_json(vpe::dsl::validate_semantics(vpe::dsl::parse_program(source)));
        },
        py::arg("source"));

  m.def("quantize", py::overload_cast<double>(&vpe::layout::quantize), py::arg("value"));
  m.def("dequantize", py::overload_cast<int>(&vpe::layout::dequantize), py::arg("bin"));

  py::class_<vpe::FixtureBackend>(m, "FixtureBackend")
      .def_static(
          "from_json",
          [](const std::string& document, bool strict) {
            return vpe::FixtureBackend::from_json(
                document, strict ? vpe::FixtureMode::kStrict : vpe::FixtureMode::kLenient);
          },
          py::arg("document"), py::arg("strict") = false)
      .def_static(
          "load",
          [](const std::string& path, bool strict) {
            return vpe::FixtureBackend::load(path, strict ? vpe::FixtureMode::kStrict
                                                          : vpe::FixtureMode::kLenient);
          },
          py::arg("path"), py::arg("strict") = false)
      .def("evaluate_json", &evaluate_json, py::arg("image"), py::arg("program"), py::arg("prompt") = "",
           py::arg("box_threshold") = vpe::kDefaultBoxThreshold, py::arg("scale_tau") = 1.25);

  m.def(
      "generate_corpus_jsonl",
      [](std::uint64_t seed, const std::optional<std::string>& skill) {
        std::optional<vpe::bench::Skill> only;
        if (skill) {
          only = vpe::bench::skill_from_name(*skill);
          if (!only) throw vpe::Error(vpe::ErrorCode::kInvalidArgument, "unknown skill '" + *skill + "'");
        }
        return vpe::bench::to_jsonl(vpe::bench::generate_corpus(vpe::bench::Vocab::bundled(), seed), only);
      },
      py::arg("seed") = 0, py::arg("skill") = std::nullopt);

  m.def(
      "spearman_rho",
      [](const std::vector<double>& x, const std::vector<double>& y) { return vpe::stats::spearman_rho(x, y); },
      py::arg("x"), py::arg("y"));
  m.def(
      "cohen_kappa",
      [](const std::vector<std::string>& a, const std::vector<std::string>& b) {
        return vpe::stats::cohen_kappa(a, b);
      },
      py::arg("a"), py::arg("b"));
  m.def(
      "krippendorff_alpha",
      [](const vpe::stats::AnnotationMatrix& ratings, const std::string& level) {
        if (level != "nominal" && level != "interval") {
          throw vpe::Error(vpe::ErrorCode::kInvalidArgument, "level must be 'nominal' or 'interval'");
        }
        return vpe::stats::krippendorff_alpha(
            ratings, level == "nominal" ? vpe::stats::Level::kNominal : vpe::stats::Level::kInterval);
      },
      py::arg("ratings"), py::arg("level") = "nominal");
  m.def("row_average", &vpe::report::row_average, py::arg("per_skill"));
}
