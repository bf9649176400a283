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

#include "vpe/eval_modules.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "vpe/error.hpp"
#include "vpe/text.hpp"

namespace vpe {
namespace {

using dsl::Arg;
using dsl::Module;
using dsl::ModuleCall;

std::string fixed3(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3f", v);
  return buf;
}

ModuleCall make_call(Module module, std::vector<std::string> strings) {
  ModuleCall call;
  call.module = module;
  call.args.push_back(Arg::img());
  for (auto& s : strings) call.args.push_back(Arg::str(std::move(s)));
  return call;
}

ModuleResult errored(ModuleCall call, const std::string& message) {
  ModuleResult r;
  r.call = std::move(call);
  r.errored = true;
  r.explanation = "error: " + message;
  return r;
}

// Runs `body`, converting any failure into an errored result.
template <typename Body>
ModuleResult guarded(ModuleCall call, Body&& body) {
  try {
    ModuleResult r = body();
    r.call = std::move(call);
    return r;
  } catch (const std::exception& e) {
    return errored(std::move(call), e.what());
  }
}

std::string boxes_phrase(std::size_t n) {
  return std::to_string(n) + (n == 1 ? " box" : " boxes");
}

struct Pair {
  std::optional<Detection> subject;
  std::optional<Detection> reference;
};

// Highest-confidence detection per query; identical queries take the top two
// with the subject ranked first.
Pair select_pair(const PerceptionBackend& backend, const std::string& image,
                 const std::string& subject, const std::string& reference, double threshold) {
  Pair p;
  const auto subj = backend.obj_det(image, subject, threshold);
  if (text::fold_label(subject) == text::fold_label(reference)) {
    if (!subj.empty()) p.subject = subj[0];
    if (subj.size() >= 2) p.reference = subj[1];
    return p;
  }
  const auto ref = backend.obj_det(image, reference, threshold);
  if (!subj.empty()) p.subject = subj[0];
  if (!ref.empty()) p.reference = ref[0];
  return p;
}

void annotate_pair(ModuleResult& r, const Pair& p, const std::string& subject,
                   const std::string& reference) {
  if (p.subject) r.annotations.push_back({p.subject->box, subject, Role::kSubject});
  if (p.reference) r.annotations.push_back({p.reference->box, reference, Role::kReference});
}

// Returns true (and fills the result) when either object is missing.
bool missing_object(ModuleResult& r, const Pair& p, const std::string& subject,
                    const std::string& reference) {
  if (p.subject && p.reference) return false;
  const std::string& who = !p.subject ? subject : reference;
  r.score = 0;
  r.explanation = "object not found: " + who;
  annotate_pair(r, p, subject, reference);
  return true;
}

// Open relations are asked as a yes/no question once both objects are found.
void vqa_fallback(ModuleResult& r, const PerceptionBackend& backend, const std::string& image,
                  const std::string& subject, const std::string& reference,
                  const std::string& relation) {
  VqaQuery q;
  q.question = "Is the " + subject + " " + relation + " the " + reference + "?";
  q.choices = {"yes", "no"};
  const VqaAnswer a = backend.vqa(image, q);
  if (!a.projected) {
    r.errored = true;
    r.score = 0;
    r.explanation = "error: vqa answer '" + a.raw + "' matches no choice for '" + q.question + "'";
    return;
  }
  r.score = a.answer == "yes" ? 1 : 0;
  r.explanation = "vqa: '" + q.question + "' answered '" + a.answer + "'";
}

}  // namespace

std::string_view error_policy_name(ErrorPolicy p) {
  return p == ErrorPolicy::kCountAsZero ? "count-as-zero" : "exclude";
}

std::optional<ErrorPolicy> error_policy_from_name(std::string_view name) {
  if (name == "count-as-zero") return ErrorPolicy::kCountAsZero;
  if (name == "exclude") return ErrorPolicy::kExclude;
  return std::nullopt;
}

void check_config(const EvalConfig& config) {
  if (!(config.box_threshold >= 0.0 && config.box_threshold <= 1.0)) {
    throw Error(ErrorCode::kOutOfRange, "box_threshold must lie in [0,1]");
  }
  if (!(config.scale_tau >= 1.0 && std::isfinite(config.scale_tau))) {
    throw Error(ErrorCode::kOutOfRange, "scale tau must be finite and >= 1");
  }
}

std::string_view role_name(Role r) {
  switch (r) {
    case Role::kSubject: return "subject";
    case Role::kReference: return "reference";
    case Role::kDetected: return "detected";
    case Role::kOcr: return "ocr";
  }
  return "";
}

ScaleRelation classify_scale(double ratio, double tau) {
  if (ratio > tau) return ScaleRelation::kBigger;
  if (ratio < 1.0 / tau) return ScaleRelation::kSmaller;
  return ScaleRelation::kSame;
}

std::optional<bool> compare_spatial(SpatialRelation rel, const Detection& s,
                                    const Detection& r) {
  double a = 0.0;
  double b = 0.0;
  switch (rel) {
    case SpatialRelation::kLeft:
    case SpatialRelation::kRight:
      a = s.box.center_x();
      b = r.box.center_x();
      break;
    case SpatialRelation::kAbove:
    case SpatialRelation::kBelow:
      a = s.box.center_y();
      b = r.box.center_y();
      break;
    case SpatialRelation::kFront:
    case SpatialRelation::kBehind:
      a = s.closeness;
      b = r.closeness;
      break;
  }
  if (a == b) return std::nullopt;
  switch (rel) {
    case SpatialRelation::kLeft:
    case SpatialRelation::kAbove:
    case SpatialRelation::kBehind:
      return a < b;
    case SpatialRelation::kRight:
    case SpatialRelation::kBelow:
    case SpatialRelation::kFront:
      return a > b;
  }
  return std::nullopt;
}

std::vector<OcrToken> reading_order(std::vector<OcrToken> tokens) {
  if (tokens.size() < 2) return tokens;
  std::vector<double> heights;
  heights.reserve(tokens.size());
  for (const auto& t : tokens) heights.push_back(t.box.height());
  std::sort(heights.begin(), heights.end());
  const std::size_t mid = heights.size() / 2;
  const double median =
      heights.size() % 2 == 1 ? heights[mid] : (heights[mid - 1] + heights[mid]) / 2.0;
  const double tolerance = median / 2.0;

  std::stable_sort(tokens.begin(), tokens.end(), [](const OcrToken& a, const OcrToken& b) {
    return a.box.center_y() < b.box.center_y();
  });
  std::vector<std::size_t> band(tokens.size(), 0);
  double anchor = tokens.front().box.center_y();
  for (std::size_t i = 1; i < tokens.size(); ++i) {
    const double yc = tokens[i].box.center_y();
    band[i] = band[i - 1];
    if (yc - anchor > tolerance) {
      ++band[i];
      anchor = yc;
    }
  }
  std::vector<std::size_t> idx(tokens.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    if (band[a] != band[b]) return band[a] < band[b];
    return tokens[a].box.x1 < tokens[b].box.x1;
  });
  std::vector<OcrToken> out;
  out.reserve(tokens.size());
  for (const std::size_t i : idx) out.push_back(std::move(tokens[i]));
  return out;
}

ModuleResult object_eval(const PerceptionBackend& backend, const std::string& image,
                         const std::string& object, const EvalConfig& config) {
  return guarded(make_call(Module::kObjectEval, {object}), [&] {
    ModuleResult r;
    const auto dets = backend.obj_det(image, object, config.box_threshold);
    for (const auto& d : dets) r.annotations.push_back({d.box, object, Role::kDetected});
    r.score = dets.empty() ? 0 : 1;
    r.explanation = dets.empty() ? "did not find " + object
                                 : "found " + object + " (" + boxes_phrase(dets.size()) + ")";
    return r;
  });
}

ModuleResult count_eval(const PerceptionBackend& backend, const std::string& image,
                        const std::string& object, const CountExpr& expr,
                        const EvalConfig& config) {
  return guarded(make_call(Module::kCountEval, {object, expr.str()}), [&] {
    ModuleResult r;
    const auto dets = backend.obj_det(image, object, config.box_threshold);
    for (const auto& d : dets) r.annotations.push_back({d.box, object, Role::kDetected});
    const int n = static_cast<int>(dets.size());
    r.score = expr.matches(n) ? 1 : 0;
    r.explanation = "counted " + std::to_string(n) + " " + object + "; expected " + expr.str();
    return r;
  });
}

ModuleResult spatial_eval(const PerceptionBackend& backend, const std::string& image,
                          const std::string& subject, const std::string& reference,
                          const std::string& relation, const EvalConfig& config) {
  return guarded(make_call(Module::kSpatialEval, {subject, reference, relation}), [&] {
    ModuleResult r;
    const Pair p = select_pair(backend, image, subject, reference, config.box_threshold);
    if (missing_object(r, p, subject, reference)) return r;
    annotate_pair(r, p, subject, reference);
    const auto rel = parse_spatial_relation(relation);
    if (!rel) {
      vqa_fallback(r, backend, image, subject, reference, relation);
      return r;
    }
    const auto outcome = compare_spatial(*rel, *p.subject, *p.reference);
    r.score = outcome.value_or(false) ? 1 : 0;

    std::string detail;
    switch (*rel) {
      case SpatialRelation::kLeft:
      case SpatialRelation::kRight:
        detail = "center x " + fixed3(p.subject->box.center_x()) + " vs " +
                 fixed3(p.reference->box.center_x());
        break;
      case SpatialRelation::kAbove:
      case SpatialRelation::kBelow:
        detail = "center y " + fixed3(p.subject->box.center_y()) + " vs " +
                 fixed3(p.reference->box.center_y());
        break;
      case SpatialRelation::kFront:
      case SpatialRelation::kBehind:
        detail = "closeness " + fixed3(p.subject->closeness) + " vs " +
                 fixed3(p.reference->closeness);
        break;
    }
    if (!outcome) detail += ", tie";
    r.explanation = subject + (r.score == 1 ? " is " : " is not ") +
                    std::string(relation_phrase(*rel)) + " " + reference + " (" + detail + ")";
    return r;
  });
}

ModuleResult scale_eval(const PerceptionBackend& backend, const std::string& image,
                        const std::string& subject, const std::string& reference,
                        const std::string& relation, const EvalConfig& config) {
  return guarded(make_call(Module::kScaleEval, {subject, reference, relation}), [&] {
    ModuleResult r;
    const Pair p = select_pair(backend, image, subject, reference, config.box_threshold);
    if (missing_object(r, p, subject, reference)) return r;
    annotate_pair(r, p, subject, reference);
    const auto rel = parse_scale_relation(relation);
    if (!rel) {
      vqa_fallback(r, backend, image, subject, reference, relation);
      return r;
    }
    const double subject_area = p.subject->box.area();
    const double reference_area = p.reference->box.area();
    if (reference_area <= 0.0 || subject_area <= 0.0) {
      r.score = 0;
      r.explanation = (reference_area <= 0.0 ? reference : subject) + " has zero area";
      return r;
    }
    const double ratio = subject_area / reference_area;
    r.score = classify_scale(ratio, config.scale_tau) == *rel ? 1 : 0;
    r.explanation = subject + (r.score == 1 ? " is " : " is not ") +
                    std::string(relation_phrase(*rel)) + " " + reference + " (area ratio " +
                    fixed3(ratio) + ")";
    return r;
  });
}

ModuleResult text_eval(const PerceptionBackend& backend, const std::string& image,
                       const std::string& target, const EvalConfig&) {
  return guarded(make_call(Module::kTextEval, {target}), [&] {
    ModuleResult r;
    const auto tokens = reading_order(backend.ocr(image));
    const std::string needle = text::normalize(target);

    std::string joined;
    std::vector<std::pair<std::size_t, std::size_t>> ranges;  // [begin, end) per token
    ranges.reserve(tokens.size());
    for (const auto& t : tokens) {
      const std::string n = text::normalize(t.text);
      if (n.empty()) {
        ranges.emplace_back(std::string::npos, std::string::npos);
        continue;
      }
      if (!joined.empty()) joined.push_back(' ');
      ranges.emplace_back(joined.size(), joined.size() + n.size());
      joined += n;
    }

    const std::size_t at = needle.empty() ? std::string::npos : joined.find(needle);
    if (at == std::string::npos) {
      r.score = 0;
      r.explanation = "did not find text '" + target + "' (read: '" + joined + "')";
      return r;
    }
    const std::size_t end = at + needle.size();
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      const auto [b, e] = ranges[i];
      if (b != std::string::npos && b < end && e > at) {
        r.annotations.push_back({tokens[i].box, tokens[i].text, Role::kOcr});
      }
    }
    r.score = 1;
    r.explanation = "found text '" + target + "'";
    return r;
  });
}

ModuleResult vqa_eval(const PerceptionBackend& backend, const std::string& image,
                      const std::string& question, const std::string& choices,
                      const std::string& expected, const EvalConfig&) {
  return guarded(make_call(Module::kVqa, {question, choices, expected}), [&] {
    ModuleResult r;
    VqaQuery q{question, split_choices(choices)};
    check_query(q);
    const std::string want = text::normalize(expected);
    if (std::none_of(q.choices.begin(), q.choices.end(),
                     [&](const std::string& c) { return text::normalize(c) == want; })) {
      throw Error(ErrorCode::kInvalidArgument,
                  "expected answer '" + expected + "' is not among the choices");
    }
    const VqaAnswer a = backend.vqa(image, q);
    if (!a.projected) {
      r.errored = true;
      r.score = 0;
      r.explanation = "error: vqa answer '" + a.raw + "' matches no choice for '" + question + "'";
      return r;
    }
    r.score = text::normalize(a.answer) == want ? 1 : 0;
    r.explanation = "Q: " + question + " A: " + a.answer + " (expected " + expected + ")";
    return r;
  });
}

ModuleResult execute_call(const PerceptionBackend& backend, const std::string& image,
                          const ModuleCall& call, const EvalConfig& config) {
  ModuleResult r;
  switch (call.module) {
    case Module::kObjectEval:
      r = object_eval(backend, image, call.arg(1), config);
      break;
    case Module::kCountEval: {
      const auto expr = parse_count_expr(call.arg(2));
      if (!expr) {
        r = errored(call, "count expression '" + call.arg(2) + "' is not (op)? INT");
      } else {
        r = count_eval(backend, image, call.arg(1), *expr, config);
      }
      break;
    }
    case Module::kSpatialEval:
      r = spatial_eval(backend, image, call.arg(1), call.arg(2), call.arg(3), config);
      break;
    case Module::kScaleEval:
      r = scale_eval(backend, image, call.arg(1), call.arg(2), call.arg(3), config);
      break;
    case Module::kTextEval:
      r = text_eval(backend, image, call.arg(1), config);
      break;
    case Module::kVqa:
      r = vqa_eval(backend, image, call.arg(1), call.arg(2), call.arg(3), config);
      break;
  }
  r.call = call;
  return r;
}

}  // namespace vpe
