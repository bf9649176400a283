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

// vpe: benchmark generation, program tooling, layout codec, evaluation runs,
// agreement statistics and reporting behind one scriptable binary.
//
// Exit codes: 0 success, 1 evaluation finished with errored statements,
// 2 usage or configuration error, 3 perception backend unreachable.

#include <CLI11.hpp>

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <iterator>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "vpe/error.hpp"
#include "vpe/eval_dsl.hpp"
#include "vpe/fixture_backend.hpp"
#include "vpe/layout_codec.hpp"
#include "vpe/program_gen.hpp"
#include "vpe/program_runner.hpp"
#include "vpe/remote_backend.hpp"
#include "vpe/report.hpp"
#include "vpe/skill_bench.hpp"
#include "vpe/stats.hpp"
#include "vpe/text.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitErrored = 1;
constexpr int kExitUsage = 2;
constexpr int kExitBackend = 3;

void diag(std::string_view level, std::string_view code, const std::string& message) {
  std::cerr << "level=" << level << " code=" << code << " msg=" << json(message).dump() << '\n';
}

void diag(const vpe::dsl::Diagnostic& d) {
  std::cerr << "level=" << vpe::dsl::severity_name(d.severity) << " code=" << d.code
            << " statement=" << d.statement << " line=" << d.span.line
            << " column=" << d.span.column << " msg=" << json(d.message).dump() << '\n';
}

std::string read_input(const std::string& path) {
  if (path.empty() || path == "-") {
    return {std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>()};
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw vpe::Error(vpe::ErrorCode::kIo, "cannot read " + path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_output(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw vpe::Error(vpe::ErrorCode::kIo, "cannot write " + path);
  out << content;
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    out.push_back(line);
  }
  return out;
}

json parse_json(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw vpe::Error(vpe::ErrorCode::kParseError, what + ": " + e.what());
  }
}

// ---------------------------------------------------------------- bench

struct BenchOptions {
  std::string skill = "all";
  std::uint64_t seed = 0;
  std::string out;
};

int bench_generate(const BenchOptions& o) {
  std::optional<vpe::bench::Skill> only;
  if (o.skill != "all") {
    only = vpe::bench::skill_from_name(o.skill);
    if (!only) throw vpe::Error(vpe::ErrorCode::kInvalidArgument, "unknown skill '" + o.skill + "'");
  }
  const auto corpus = vpe::bench::generate_corpus(vpe::bench::Vocab::bundled(), o.seed);
  write_output(o.out, vpe::bench::to_jsonl(corpus, only));
  return kExitOk;
}

// ---------------------------------------------------------------- eval

struct EvalOptions {
  std::string fixture;
  std::string backend_url;
  bool strict = false;
  std::string corpus;
  std::string images;
  double box_threshold = vpe::kDefaultBoxThreshold;
  double tau = 1.25;
  std::string error_policy = "count-as-zero";
  int parallel = 1;
  std::string model;
  std::string out;
};

std::unique_ptr<vpe::PerceptionBackend> make_backend(const EvalOptions& o) {
  std::string url = o.backend_url;
  if (!o.fixture.empty() && !url.empty()) {
    throw vpe::Error(vpe::ErrorCode::kInvalidArgument, "--fixture and --backend-url are exclusive");
  }
  if (!o.fixture.empty()) {
    const auto mode = o.strict ? vpe::FixtureMode::kStrict : vpe::FixtureMode::kLenient;
    return std::make_unique<vpe::FixtureBackend>(vpe::FixtureBackend::load(o.fixture, mode));
  }
  if (url.empty()) {
    if (const char* env = std::getenv("VPE_BACKEND_URL")) url = env;
  }
  if (url.empty()) {
    throw vpe::Error(vpe::ErrorCode::kInvalidArgument,
                     "no backend: pass --fixture, --backend-url or set VPE_BACKEND_URL");
  }
  vpe::RemoteConfig config;
  config.base_url = url;
  auto backend = std::make_unique<vpe::RemoteBackend>(config);
  // Preflight so an unreachable service is reported once instead of per statement.
  for (int attempt = 0;; ++attempt) {
    try {
      backend->health();
      break;
    } catch (const vpe::Error& e) {
      if (e.code() != vpe::ErrorCode::kBackendUnavailable || attempt >= config.max_retries) throw;
      std::this_thread::sleep_for(config.retry_backoff * (1 << attempt));
    }
  }
  return backend;
}

int eval_run(const EvalOptions& o) {
  vpe::EvalConfig config;
  config.box_threshold = o.box_threshold;
  config.scale_tau = o.tau;
  const auto policy = vpe::error_policy_from_name(o.error_policy);
  if (!policy) {
    throw vpe::Error(vpe::ErrorCode::kInvalidArgument, "unknown error policy '" + o.error_policy + "'");
  }
  config.error_policy = *policy;
  vpe::check_config(config);
  if (o.parallel < 1) throw vpe::Error(vpe::ErrorCode::kInvalidArgument, "--parallel must be >= 1");

  std::map<std::string, std::string> image_map;
  if (!o.images.empty()) {
    const json m = parse_json(read_input(o.images), o.images);
    if (!m.is_object()) throw vpe::Error(vpe::ErrorCode::kSchemaViolation, o.images + ": expected an object");
    for (const auto& [k, v] : m.items()) {
      if (!v.is_string()) {
        throw vpe::Error(vpe::ErrorCode::kSchemaViolation, o.images + ": value for '" + k + "' is not a string");
      }
      image_map[k] = v.get<std::string>();
    }
  }

  std::vector<vpe::BatchItem> items;
  std::size_t lineno = 0;
  for (const auto& line : lines_of(read_input(o.corpus))) {
    ++lineno;
    if (vpe::text::trim(line).empty()) continue;
    const std::string where = o.corpus + ":" + std::to_string(lineno);
    const json j = parse_json(line, where);
    vpe::BatchItem item;
    try {
      item.id = j.at("id").get<std::string>();
      item.prompt = j.value("prompt", "");
      item.skill = j.value("skill", "");
      item.model = j.value("model", o.model);
      if (const auto it = image_map.find(item.id); it != image_map.end()) {
        item.image = it->second;
      } else if (j.contains("image")) {
        item.image = j.at("image").get<std::string>();
      } else {
        throw vpe::Error(vpe::ErrorCode::kUnknownKey, where + ": no image for prompt '" + item.id + "'");
      }
      item.program = vpe::dsl::parse_program(j.at("program").get<std::string>());
    } catch (const json::exception& e) {
      throw vpe::Error(vpe::ErrorCode::kSchemaViolation, where + ": " + e.what());
    } catch (const vpe::ParseError& e) {
      throw vpe::Error(vpe::ErrorCode::kParseError, where + ": program " + e.what());
    }
    items.push_back(std::move(item));
  }

  const auto backend = make_backend(o);
  const auto batch = vpe::run_batch(*backend, items, o.parallel, config);
  std::string out;
  for (const auto& r : batch.reports) {
    out += vpe::to_json(r).dump() + "\n";
    for (const auto& res : r.results) {
      if (res.errored) diag("warning", "errored-statement", r.id + ": " + res.explanation);
    }
  }
  out += vpe::to_json(batch.summary).dump() + "\n";
  write_output(o.out, out);
  return batch.summary.errored_reports > 0 ? kExitErrored : kExitOk;
}

// ---------------------------------------------------------------- program

json span_json(const vpe::dsl::Span& s) {
  return {{"offset", s.offset}, {"length", s.length}, {"line", s.line}, {"column", s.column}};
}

json ast_json(const vpe::dsl::EvalProgram& program) {
  json calls = json::array();
  for (const auto& c : program.calls) {
    json args = json::array();
    for (const auto& a : c.args) {
      args.push_back(a.kind == vpe::dsl::Arg::Kind::kImg
                         ? json{{"kind", "img"}}
                         : json{{"kind", "string"}, {"value", a.value}});
    }
    calls.push_back({{"module", std::string(vpe::dsl::module_name(c.module))},
                     {"args", std::move(args)},
                     {"span", span_json(c.span)}});
  }
  return {{"calls", std::move(calls)}};
}

struct ProgramOptions {
  std::string input;
  bool ast_json = false;
};

int program_parse(const ProgramOptions& o) {
  const auto program = vpe::dsl::parse_program(read_input(o.input));
  if (o.ast_json) {
    std::cout << ast_json(program).dump(2) << '\n';
  } else {
    std::cout << "ok: " << program.calls.size()
              << (program.calls.size() == 1 ? " statement" : " statements") << '\n';
  }
  return kExitOk;
}

int program_fmt(const ProgramOptions& o) {
  std::cout << vpe::dsl::print_program(vpe::dsl::parse_program(read_input(o.input))) << '\n';
  return kExitOk;
}

int program_validate(const ProgramOptions& o) {
  const auto program = vpe::dsl::parse_program(read_input(o.input));
  const auto diagnostics = vpe::dsl::validate_semantics(program);
  for (const auto& d : diagnostics) diag(d);
  if (o.ast_json) std::cout << ast_json(program).dump(2) << '\n';
  return vpe::dsl::has_errors(diagnostics) ? kExitErrored : kExitOk;
}

struct GenOptions {
  std::string prompt;
  std::string prompts_file;
  std::string offline;
  std::string exemplars;
  std::string endpoint;
  std::string model = "gpt-35-turbo";
  double temperature = 0.0;
  bool reprompt = false;
  bool coverage = false;
  std::string out;
};

int program_gen(const GenOptions& o) {
  vpe::gen::GenConfig config;
  config.offline_fixture = o.offline;
  config.endpoint = o.endpoint;
  if (config.endpoint.empty() && config.offline_fixture.empty()) {
    if (const char* env = std::getenv("VPE_LLM_URL")) config.endpoint = env;
  }
  config.model = o.model;
  config.temperature = o.temperature;
  config.reprompt_on_all_invalid = o.reprompt;
  config.check();
  const auto exemplars =
      o.exemplars.empty() ? vpe::gen::ExemplarSet::bundled() : vpe::gen::ExemplarSet::load(o.exemplars);
  auto source = vpe::gen::make_source(config);

  std::vector<std::pair<std::string, std::string>> prompts;  // (id, prompt)
  if (!o.prompt.empty()) prompts.emplace_back("", o.prompt);
  if (!o.prompts_file.empty()) {
    std::size_t lineno = 0;
    for (const auto& line : lines_of(read_input(o.prompts_file))) {
      ++lineno;
      if (vpe::text::trim(line).empty()) continue;
      const json j = parse_json(line, o.prompts_file + ":" + std::to_string(lineno));
      prompts.emplace_back(j.value("id", std::to_string(lineno)), j.at("prompt").get<std::string>());
    }
  }
  if (prompts.empty()) throw vpe::Error(vpe::ErrorCode::kInvalidArgument, "no prompt given");

  std::string out;
  bool failed = false;
  for (const auto& [id, prompt] : prompts) {
    try {
      const auto result = vpe::gen::generate_program(prompt, exemplars, *source, o.reprompt);
      for (const auto& d : result.diagnostics) diag(d);
      const std::string text = vpe::dsl::print_program(result.program);
      if (!o.prompts_file.empty()) {
        json line = {{"id", id}, {"prompt", prompt}, {"program", text}};
        if (o.coverage) line["coverage"] = vpe::gen::coverage_stats(prompt, result.program).fraction;
        out += line.dump() + "\n";
      } else {
        out += text + "\n";
        if (o.coverage) {
          const auto cov = vpe::gen::coverage_stats(prompt, result.program);
          diag("info", "coverage",
               std::to_string(cov.covered.size()) + "/" + std::to_string(cov.content_words.size()) +
                   " content words covered");
        }
      }
    } catch (const vpe::Error& e) {
      if (e.code() != vpe::ErrorCode::kGenerationFailed) throw;
      diag("error", vpe::to_string(e.code()), (id.empty() ? "" : id + ": ") + e.what());
      failed = true;
    }
  }
  write_output(o.out, out);
  return failed ? kExitErrored : kExitOk;
}

// ---------------------------------------------------------------- layout

struct LayoutOptions {
  std::string input;
  bool json_out = false;
  int max_count = vpe::layout::kDefaultMaxCount;
  bool lenient_counts = false;
};

json layout_json(const vpe::layout::LayoutSpec& spec) {
  json objects = json::array();
  for (const auto& o : spec.objects) objects.push_back({{"description", o.description}, {"count", o.count}});
  json placements = json::array();
  for (const auto& p : spec.placements) {
    const vpe::BBox n = vpe::layout::dequantize(p.box);
    placements.push_back({{"description", p.description},
                          {"bins", {p.box.x1, p.box.y1, p.box.x2, p.box.y2}},
                          {"box", {n.x1, n.y1, n.x2, n.y2}}});
  }
  return {{"objects", std::move(objects)}, {"placements", std::move(placements)}};
}

std::string layout_text(const vpe::layout::LayoutSpec& spec) {
  return vpe::layout::print_object_counts(spec.objects) + "\n" +
         vpe::layout::print_placements(spec.placements) + "\n";
}

// Input: a JSON LayoutSpec whose placements carry normalized "box" or
// integer "bins".
int layout_encode(const LayoutOptions& o) {
  const json j = parse_json(read_input(o.input), o.input.empty() ? "stdin" : o.input);
  std::vector<vpe::layout::ObjectCount> objects;
  std::vector<vpe::layout::Placement> placements;
  try {
    for (const auto& e : j.at("objects")) {
      objects.push_back({e.at("description").get<std::string>(), e.at("count").get<int>()});
    }
    for (const auto& e : j.at("placements")) {
      vpe::layout::Placement p;
      p.description = e.at("description").get<std::string>();
      if (e.contains("bins")) {
        const auto b = e.at("bins").get<std::vector<int>>();
        if (b.size() != 4) throw vpe::Error(vpe::ErrorCode::kSchemaViolation, "bins must have 4 entries");
        p.box = {b[0], b[1], b[2], b[3]};
      } else {
        const auto b = e.at("box").get<std::vector<double>>();
        if (b.size() != 4) throw vpe::Error(vpe::ErrorCode::kSchemaViolation, "box must have 4 entries");
        const vpe::BBox box{b[0], b[1], b[2], b[3]};
        vpe::check_box(box, "placement '" + p.description + "'");
        p.box = vpe::layout::quantize(box);
      }
      placements.push_back(std::move(p));
    }
  } catch (const json::exception& e) {
    throw vpe::Error(vpe::ErrorCode::kSchemaViolation, std::string("layout: ") + e.what());
  }
  // Round-trip through the text parsers so encode enforces the same rules.
  vpe::layout::CodecOptions codec;
  codec.max_count = o.max_count;
  codec.strict_counts = !o.lenient_counts;
  const auto counts = vpe::layout::parse_object_counts(vpe::layout::print_object_counts(objects), codec);
  const auto places = vpe::layout::parse_placements(vpe::layout::print_placements(placements));
  for (const auto& w : counts.warnings) diag("warning", "layout", w);
  for (const auto& w : places.warnings) diag("warning", "layout", w);
  const auto spec = vpe::layout::validate_layout(counts.value, places.value);
  std::cout << (o.json_out ? layout_json(spec).dump(2) + "\n" : layout_text(spec));
  return kExitOk;
}

// Input: object-count line, then placement line.
int layout_decode(const LayoutOptions& o) {
  std::vector<std::string> lines;
  for (const auto& l : lines_of(read_input(o.input))) {
    if (!vpe::text::trim(l).empty()) lines.push_back(l);
  }
  if (lines.size() != 2) {
    throw vpe::Error(vpe::ErrorCode::kParseError,
                     "expected 2 non-empty lines (object counts, placements), got " +
                         std::to_string(lines.size()));
  }
  vpe::layout::CodecOptions codec;
  codec.max_count = o.max_count;
  codec.strict_counts = !o.lenient_counts;
  const auto counts = vpe::layout::parse_object_counts(lines[0], codec);
  const auto places = vpe::layout::parse_placements(lines[1]);
  for (const auto& w : counts.warnings) diag("warning", "layout", w);
  for (const auto& w : places.warnings) diag("warning", "layout", w);
  const auto spec = vpe::layout::validate_layout(counts.value, places.value);
  std::cout << (o.json_out ? layout_json(spec).dump(2) + "\n" : layout_text(spec));
  return kExitOk;
}

// ---------------------------------------------------------------- correlate

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false;
  bool any = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"' && i + 1 < text.size() && text[i + 1] == '"') {
        field.push_back('"');
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        field.push_back(c);
      }
      continue;
    }
    any = true;
    if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      row.push_back(std::move(field));
      field.clear();
    } else if (c == '\n' || c == '\r') {
      if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
      row.push_back(std::move(field));
      field.clear();
      rows.push_back(std::move(row));
      row.clear();
      any = false;
    } else {
      field.push_back(c);
    }
  }
  if (quoted) throw vpe::Error(vpe::ErrorCode::kParseError, "csv: unterminated quoted field");
  if (any || !field.empty() || !row.empty()) {
    row.push_back(std::move(field));
    rows.push_back(std::move(row));
  }
  return rows;
}

struct CorrelateOptions {
  std::string metric;
  std::string csv;
  std::vector<std::string> columns;
  std::string level = "nominal";
};

double to_number(const std::string& s, const std::string& column) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw vpe::Error(vpe::ErrorCode::kParseError, "column '" + column + "': not a number: '" + s + "'");
  }
}

int correlate(const CorrelateOptions& o) {
  const auto rows = parse_csv(read_input(o.csv));
  if (rows.empty()) throw vpe::Error(vpe::ErrorCode::kParseError, "csv: missing header row");
  const auto& header = rows.front();
  std::vector<std::size_t> idx;
  for (const auto& name : o.columns) {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw vpe::Error(vpe::ErrorCode::kUnknownKey, "csv: no column '" + name + "'");
    idx.push_back(static_cast<std::size_t>(it - header.begin()));
  }
  const auto cell = [&](const std::vector<std::string>& row, std::size_t c) {
    return c < row.size() ? std::string(vpe::text::trim(row[c])) : std::string();
  };

  json result = {{"metric", o.metric}};
  if (o.metric == "spearman" || o.metric == "kappa") {
    if (idx.size() != 2) {
      throw vpe::Error(vpe::ErrorCode::kInvalidArgument, o.metric + " needs exactly two columns");
    }
    std::vector<std::string> a;
    std::vector<std::string> b;
    std::size_t skipped = 0;
    for (std::size_t r = 1; r < rows.size(); ++r) {
      const auto x = cell(rows[r], idx[0]);
      const auto y = cell(rows[r], idx[1]);
      if (x.empty() || y.empty()) {
        ++skipped;
        continue;
      }
      a.push_back(x);
      b.push_back(y);
    }
    if (skipped > 0) diag("info", "skipped-rows", std::to_string(skipped) + " rows with missing cells");
    result["n"] = a.size();
    if (o.metric == "kappa") {
      result["value"] = vpe::stats::cohen_kappa(a, b);
    } else {
      std::vector<double> x;
      std::vector<double> y;
      for (const auto& s : a) x.push_back(to_number(s, o.columns[0]));
      for (const auto& s : b) y.push_back(to_number(s, o.columns[1]));
      const auto rho = vpe::stats::spearman_rho(x, y);
      if (rho) {
        result["value"] = *rho;
      } else {
        result["value"] = nullptr;
        diag("warning", "undefined", "spearman: a column is constant");
      }
    }
  } else if (o.metric == "alpha") {
    if (idx.size() < 2) throw vpe::Error(vpe::ErrorCode::kInvalidArgument, "alpha needs two or more columns");
    vpe::stats::Level level;
    if (o.level == "nominal") level = vpe::stats::Level::kNominal;
    else if (o.level == "interval") level = vpe::stats::Level::kInterval;
    else throw vpe::Error(vpe::ErrorCode::kInvalidArgument, "unknown level '" + o.level + "'");
    // Nominal labels need not be numeric; map them to codes in label order.
    std::map<std::string, double> codes;
    if (level == vpe::stats::Level::kNominal) {
      for (std::size_t r = 1; r < rows.size(); ++r) {
        for (const auto c : idx) {
          if (const auto v = cell(rows[r], c); !v.empty()) codes.emplace(v, 0.0);
        }
      }
      double next = 0.0;
      for (auto& [label, code] : codes) code = next++;
    }
    vpe::stats::AnnotationMatrix m(idx.size());
    for (std::size_t k = 0; k < idx.size(); ++k) {
      for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto v = cell(rows[r], idx[k]);
        if (v.empty()) m[k].push_back(std::nullopt);
        else if (level == vpe::stats::Level::kNominal) m[k].push_back(codes.at(v));
        else m[k].push_back(to_number(v, o.columns[k]));
      }
    }
    result["n"] = rows.size() - 1;
    result["level"] = o.level;
    result["value"] = vpe::stats::krippendorff_alpha(m, level);
  } else {
    throw vpe::Error(vpe::ErrorCode::kInvalidArgument, "unknown metric '" + o.metric + "'");
  }
  std::cout << result.dump() << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------- report

std::vector<vpe::EvalReport> load_reports(const std::string& path) {
  std::vector<vpe::EvalReport> out;
  std::size_t lineno = 0;
  for (const auto& line : lines_of(read_input(path))) {
    ++lineno;
    if (vpe::text::trim(line).empty()) continue;
    const json j = parse_json(line, (path.empty() ? "stdin" : path) + ":" + std::to_string(lineno));
    if (j.contains("summary")) continue;
    out.push_back(vpe::report_from_json(j));
  }
  return out;
}

struct ReportOptions {
  std::string input;
  std::string format = "text";
  std::string overlay_dir;
  int width = 512;
  int height = 512;
  std::string group_by = "skill";
  std::string out;
};

std::string overlay_name(const vpe::EvalReport& r, std::size_t index) {
  std::string base = r.id.empty() ? "report-" + std::to_string(index) : r.id;
  for (char& c : base) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.')) c = '_';
  }
  return base + ".svg";
}

int report_render(const ReportOptions& o) {
  const auto reports = load_reports(o.input);
  std::string out;
  if (o.format == "text") {
    for (std::size_t i = 0; i < reports.size(); ++i) {
      if (i > 0) out += "\n";
      const auto& r = reports[i];
      if (!r.id.empty()) out += "# " + r.id + "\n";
      out += "prompt: " + r.prompt + "\n";
      out += vpe::report::render_text_report(r);
    }
  } else if (o.format == "csv") {
    out = "id,skill,model,image,score,statements,errored\n";
    for (const auto& r : reports) {
      std::size_t errored = 0;
      for (const auto& res : r.results) errored += res.errored ? 1 : 0;
      const auto field = [](const std::string& s) {
        if (s.find_first_of(",\"\n") == std::string::npos) return s;
        std::string q = "\"";
        for (const char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
        return q + "\"";
      };
      out += field(r.id) + "," + field(r.skill) + "," + field(r.model) + "," + field(r.image) + "," +
             vpe::report::format_number(r.score, 6) + "," + std::to_string(r.results.size()) + "," +
             std::to_string(errored) + "\n";
    }
  } else if (o.format == "jsonl") {
    for (const auto& r : reports) out += vpe::to_json(r).dump() + "\n";
  } else {
    throw vpe::Error(vpe::ErrorCode::kInvalidArgument, "unknown format '" + o.format + "'");
  }
  if (!o.overlay_dir.empty()) {
    fs::create_directories(o.overlay_dir);
    for (std::size_t i = 0; i < reports.size(); ++i) {
      write_output((fs::path(o.overlay_dir) / overlay_name(reports[i], i)).string(),
                   vpe::report::render_overlay(reports[i], o.width, o.height));
    }
  }
  write_output(o.out, out);
  return kExitOk;
}

int report_summarize(const ReportOptions& o) {
  vpe::report::GroupBy group_by;
  if (o.group_by == "skill") group_by = vpe::report::GroupBy::kSkill;
  else if (o.group_by == "model") group_by = vpe::report::GroupBy::kModel;
  else throw vpe::Error(vpe::ErrorCode::kInvalidArgument, "unknown group key '" + o.group_by + "'");
  const auto table = vpe::report::summarize(load_reports(o.input), group_by);
  if (o.format == "text") write_output(o.out, vpe::report::render_table_text(table));
  else if (o.format == "csv") write_output(o.out, vpe::report::render_table_csv(table));
  else throw vpe::Error(vpe::ErrorCode::kInvalidArgument, "unknown format '" + o.format + "'");
  return kExitOk;
}

int exit_code_for(const vpe::Error& e) {
  return e.code() == vpe::ErrorCode::kBackendUnavailable ? kExitBackend : kExitUsage;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"vpe: visual programming evaluation toolkit"};
  app.require_subcommand(1);
  std::function<int()> action;

  // bench
  auto* bench = app.add_subcommand("bench", "Skill benchmark corpus");
  bench->require_subcommand(1);
  BenchOptions bench_opts;
  auto* gen_cmd = bench->add_subcommand("generate", "Generate the skill prompt corpus as JSON-Lines");
  gen_cmd->add_option("--skill", bench_opts.skill, "object|count|spatial|scale|text|all")
      ->capture_default_str();
  gen_cmd->add_option("--seed", bench_opts.seed, "Sampling seed")->capture_default_str();
  gen_cmd->add_option("--out", bench_opts.out, "Output file (default stdout)");
  gen_cmd->callback([&] { action = [&] { return bench_generate(bench_opts); }; });

  // eval
  auto* eval = app.add_subcommand("eval", "Evaluate images against programs");
  eval->require_subcommand(1);
  EvalOptions eval_opts;
  auto* run = eval->add_subcommand("run", "Run a corpus through a perception backend");
  auto* fixture_opt = run->add_option("--fixture", eval_opts.fixture, "Fixture backend JSON")
                          ->check(CLI::ExistingFile);
  run->add_option("--backend-url", eval_opts.backend_url, "Perception service base URL")
      ->excludes(fixture_opt);
  run->add_flag("--strict", eval_opts.strict, "Fixture misses are errors instead of empty results");
  run->add_option("--corpus", eval_opts.corpus, "JSON-Lines corpus")->required();
  run->add_option("--images", eval_opts.images, "JSON map from prompt id to image reference");
  run->add_option("--box-threshold", eval_opts.box_threshold)->capture_default_str();
  run->add_option("--tau", eval_opts.tau, "Scale tolerance")->capture_default_str();
  run->add_option("--error-policy", eval_opts.error_policy, "count-as-zero|exclude")
      ->capture_default_str();
  run->add_option("--parallel", eval_opts.parallel, "Worker threads")->capture_default_str();
  run->add_option("--model", eval_opts.model, "Model tag for reports lacking one");
  run->add_option("--out", eval_opts.out, "Output file (default stdout)");
  run->callback([&] { action = [&] { return eval_run(eval_opts); }; });

  // program
  auto* program = app.add_subcommand("program", "Evaluation program tooling");
  program->require_subcommand(1);
  ProgramOptions prog_opts;
  auto* parse = program->add_subcommand("parse", "Parse a program");
  auto* fmt = program->add_subcommand("fmt", "Print a program in canonical form");
  auto* validate = program->add_subcommand("validate", "Parse and check a program");
  for (auto* sub : {parse, fmt, validate}) {
    sub->add_option("input", prog_opts.input, "Program file (default stdin)");
  }
  parse->add_flag("--ast-json", prog_opts.ast_json, "Dump the AST with spans as JSON");
  validate->add_flag("--ast-json", prog_opts.ast_json, "Dump the AST with spans as JSON");
  parse->callback([&] { action = [&] { return program_parse(prog_opts); }; });
  fmt->callback([&] { action = [&] { return program_fmt(prog_opts); }; });
  validate->callback([&] { action = [&] { return program_validate(prog_opts); }; });
  GenOptions gen_opts;
  auto* pgen = program->add_subcommand("gen", "Generate a program from a prompt");
  pgen->add_option("prompt", gen_opts.prompt, "Prompt text");
  pgen->add_option("--prompts", gen_opts.prompts_file, "JSON-Lines file of {id, prompt}");
  pgen->add_option("--offline", gen_opts.offline, "Completion fixture (no network)");
  pgen->add_option("--exemplars", gen_opts.exemplars, "Exemplar set JSON");
  pgen->add_option("--endpoint", gen_opts.endpoint, "Chat-completion base URL (default $VPE_LLM_URL)");
  pgen->add_option("--model", gen_opts.model)->capture_default_str();
  pgen->add_option("--temperature", gen_opts.temperature)->capture_default_str();
  pgen->add_flag("--reprompt", gen_opts.reprompt, "Retry once when every statement is invalid");
  pgen->add_flag("--coverage", gen_opts.coverage, "Report prompt word coverage");
  pgen->add_option("--out", gen_opts.out, "Output file (default stdout)");
  pgen->callback([&] { action = [&] { return program_gen(gen_opts); }; });

  // layout
  auto* layout = app.add_subcommand("layout", "Layout text codec");
  layout->require_subcommand(1);
  LayoutOptions layout_opts;
  auto* encode = layout->add_subcommand("encode", "JSON layout to text lines");
  auto* decode = layout->add_subcommand("decode", "Text lines to a validated layout");
  for (auto* sub : {encode, decode}) {
    sub->add_option("input", layout_opts.input, "Input file (default stdin)");
    sub->add_flag("--json", layout_opts.json_out, "Emit the layout as JSON with normalized boxes");
    sub->add_option("--max-count", layout_opts.max_count)->capture_default_str();
    sub->add_flag("--lenient-counts", layout_opts.lenient_counts, "Warn instead of failing on large counts");
  }
  encode->callback([&] { action = [&] { return layout_encode(layout_opts); }; });
  decode->callback([&] { action = [&] { return layout_decode(layout_opts); }; });

  // correlate
  CorrelateOptions corr_opts;
  auto* corr = app.add_subcommand("correlate", "Agreement statistics over CSV columns");
  corr->add_option("--metric", corr_opts.metric, "spearman|kappa|alpha")
      ->required()
      ->check(CLI::IsMember({"spearman", "kappa", "alpha"}));
  corr->add_option("--csv", corr_opts.csv, "CSV file with a header row")->required();
  corr->add_option("--columns", corr_opts.columns, "Column names")->required()->delimiter(',');
  corr->add_option("--level", corr_opts.level, "nominal|interval (alpha only)")
      ->check(CLI::IsMember({"nominal", "interval"}))
      ->capture_default_str();
  corr->callback([&] { action = [&] { return correlate(corr_opts); }; });

  // report
  auto* report = app.add_subcommand("report", "Render and summarize evaluation reports");
  report->require_subcommand(1);
  ReportOptions report_opts;
  auto* render = report->add_subcommand("render", "Render reports as text, CSV or JSON-Lines");
  render->add_option("input", report_opts.input, "Report JSON-Lines (default stdin)");
  render->add_option("--format", report_opts.format, "text|csv|jsonl")
      ->check(CLI::IsMember({"text", "csv", "jsonl"}))
      ->capture_default_str();
  render->add_option("--overlay-dir", report_opts.overlay_dir, "Write one SVG overlay per report");
  render->add_option("--width", report_opts.width, "Overlay width in pixels")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  render->add_option("--height", report_opts.height, "Overlay height in pixels")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  render->add_option("--out", report_opts.out, "Output file (default stdout)");
  render->callback([&] { action = [&] { return report_render(report_opts); }; });
  auto* summarize = report->add_subcommand("summarize", "Per-skill score table");
  summarize->add_option("input", report_opts.input, "Report JSON-Lines (default stdin)");
  summarize->add_option("--group-by", report_opts.group_by, "skill|model")->capture_default_str();
  summarize->add_option("--format", report_opts.format, "text|csv")->capture_default_str();
  summarize->add_option("--out", report_opts.out, "Output file (default stdout)");
  summarize->callback([&] { action = [&] { return report_summarize(report_opts); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    return action ? action() : kExitUsage;
  } catch (const vpe::ParseError& e) {
    std::cerr << "level=error code=parse-error line=" << e.line() << " column=" << e.column()
              << " msg=" << json(e.detail()).dump() << '\n';
    return kExitUsage;
  } catch (const vpe::Error& e) {
    diag("error", vpe::to_string(e.code()), e.what());
    return exit_code_for(e);
  } catch (const std::exception& e) {
    diag("error", "internal", e.what());
    return kExitUsage;
  }
}
