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

#include "vpe/fixture_backend.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "vpe/error.hpp"
#include "vpe/text.hpp"

namespace vpe {
namespace {

using nlohmann::json;

[[noreturn]] void violation(const std::string& path, const std::string& what) {
  throw Error(ErrorCode::kSchemaViolation, path + ": " + what);
}

const json& require_object(const json& j, const std::string& path) {
  if (!j.is_object()) violation(path, "expected an object");
  return j;
}

double require_number(const json& parent, const char* key, const std::string& path) {
  if (!parent.contains(key)) violation(path + "." + key, "missing field");
  const json& v = parent.at(key);
  if (!v.is_number()) violation(path + "." + key, "expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) violation(path + "." + key, "expected a finite number");
  return d;
}

BBox parse_box(const json& parent, const std::string& path) {
  const std::string where = path + ".box";
  if (!parent.contains("box")) violation(where, "missing field");
  const json& arr = parent.at("box");
  if (!arr.is_array() || arr.size() != 4) violation(where, "expected [x1,y1,x2,y2]");
  for (const auto& v : arr) {
    if (!v.is_number()) violation(where, "coordinates must be numbers");
  }
  BBox b{arr[0].get<double>(), arr[1].get<double>(), arr[2].get<double>(),
         arr[3].get<double>()};
  if (!is_valid(b)) {
    std::string reason = "coordinates must lie in [0,1]";
    if (b.x2 < b.x1) reason = "x2 < x1";
    else if (b.y2 < b.y1) reason = "y2 < y1";
    violation(where, reason);
  }
  return b;
}

double unit_interval(double v, const std::string& path) {
  if (v < 0.0 || v > 1.0) violation(path, "must lie in [0,1]");
  return v;
}

FixtureBackend::Scene parse_scene(const json& j, const std::string& path) {
  require_object(j, path);
  FixtureBackend::Scene scene;
  if (j.contains("objdet")) {
    const std::string opath = path + ".objdet";
    for (const auto& [query, list] : require_object(j.at("objdet"), opath).items()) {
      const std::string qpath = opath + "[\"" + query + "\"]";
      if (!list.is_array()) violation(qpath, "expected an array of detections");
      auto& dets = scene.objdet[query];
      for (std::size_t i = 0; i < list.size(); ++i) {
        const std::string dpath = qpath + "[" + std::to_string(i) + "]";
        const json& d = require_object(list[i], dpath);
        Detection det;
        det.label = query;
        det.box = parse_box(d, dpath);
        det.confidence =
            unit_interval(require_number(d, "confidence", dpath), dpath + ".confidence");
        if (d.contains("closeness")) {
          det.closeness = require_number(d, "closeness", dpath);
          if (det.closeness < 0.0) violation(dpath + ".closeness", "must be >= 0");
        }
        dets.push_back(std::move(det));
      }
    }
  }
  if (j.contains("ocr")) {
    const std::string opath = path + ".ocr";
    const json& list = j.at("ocr");
    if (!list.is_array()) violation(opath, "expected an array of tokens");
    for (std::size_t i = 0; i < list.size(); ++i) {
      const std::string tpath = opath + "[" + std::to_string(i) + "]";
      const json& t = require_object(list[i], tpath);
      if (!t.contains("text") || !t.at("text").is_string()) {
        violation(tpath + ".text", "expected a string");
      }
      OcrToken tok;
      tok.text = t.at("text").get<std::string>();
      if (text::trim(tok.text).empty()) violation(tpath + ".text", "must be non-empty");
      tok.box = parse_box(t, tpath);
      if (t.contains("confidence")) {
        tok.confidence = unit_interval(require_number(t, "confidence", tpath),
                                       tpath + ".confidence");
      }
      scene.ocr.push_back(std::move(tok));
    }
  }
  if (j.contains("vqa")) {
    const std::string vpath = path + ".vqa";
    for (const auto& [question, ans] : require_object(j.at("vqa"), vpath).items()) {
      if (!ans.is_string()) violation(vpath + "[\"" + question + "\"]", "expected a string");
      scene.vqa.emplace(question, ans.get<std::string>());
    }
  }
  return scene;
}

std::pair<std::size_t, std::size_t> line_column(std::string_view doc, std::size_t offset) {
  std::size_t line = 1;
  std::size_t col = 1;
  offset = std::min(offset, doc.size());
  for (std::size_t i = 0; i < offset; ++i) {
    if (doc[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

}  // namespace

FixtureBackend::FixtureBackend(std::map<std::string, Scene> scenes, FixtureMode mode)
    : scenes_(std::move(scenes)), mode_(mode) {
  for (auto& [image, scene] : scenes_) {
    for (auto& [query, dets] : scene.objdet) {
      for (const auto& d : dets) check_box(d.box, "fixture " + image + "/" + query);
    }
    for (const auto& t : scene.ocr) check_box(t.box, "fixture " + image + " ocr");
  }
}

FixtureBackend FixtureBackend::from_json(std::string_view document, FixtureMode mode) {
  json root;
  try {
    root = json::parse(document);
  } catch (const json::parse_error& e) {
    // nlohmann reports the byte index one past the offending character.
    const std::size_t offset = e.byte == 0 ? 0 : e.byte - 1;
    const auto [line, col] = line_column(document, offset);
    throw ParseError("invalid fixture JSON: " + std::string(e.what()), line, col);
  }
  require_object(root, "$");
  if (!root.contains("images")) violation("$.images", "missing field");
  std::map<std::string, Scene> scenes;
  for (const auto& [image, scene] : require_object(root.at("images"), "$.images").items()) {
    scenes.emplace(image, parse_scene(scene, "$.images[\"" + image + "\"]"));
  }
  return FixtureBackend(std::move(scenes), mode);
}

FixtureBackend FixtureBackend::load(const std::filesystem::path& path, FixtureMode mode) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open fixture " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_json(buf.str(), mode);
}

const FixtureBackend::Scene* FixtureBackend::find_scene(const std::string& image) const {
  const auto it = scenes_.find(image);
  if (it != scenes_.end()) return &it->second;
  if (mode_ == FixtureMode::kStrict) {
    throw Error(ErrorCode::kImageNotFound, "image not in fixture: " + image);
  }
  return nullptr;
}

std::vector<Detection> FixtureBackend::detect(const std::string& image,
                                              const std::string& query, double) const {
  const Scene* scene = find_scene(image);
  if (scene == nullptr) return {};
  auto it = scene->objdet.find(query);
  if (it == scene->objdet.end()) {
    const std::string folded = text::fold_label(query);
    it = std::find_if(scene->objdet.begin(), scene->objdet.end(),
                      [&](const auto& kv) { return text::fold_label(kv.first) == folded; });
  }
  if (it == scene->objdet.end()) {
    if (mode_ == FixtureMode::kStrict) {
      throw Error(ErrorCode::kUnknownKey, "no objdet entry for '" + query + "' in " + image);
    }
    return {};
  }
  return it->second;
}

std::vector<OcrToken> FixtureBackend::read_text(const std::string& image) const {
  const Scene* scene = find_scene(image);
  return scene == nullptr ? std::vector<OcrToken>{} : scene->ocr;
}

std::string FixtureBackend::answer(const std::string& image, const VqaQuery& query) const {
  const Scene* scene = find_scene(image);
  if (scene != nullptr) {
    auto it = scene->vqa.find(query.question);
    if (it == scene->vqa.end()) {
      const std::string norm = text::normalize(query.question);
      it = std::find_if(scene->vqa.begin(), scene->vqa.end(),
                        [&](const auto& kv) { return text::normalize(kv.first) == norm; });
    }
    if (it != scene->vqa.end()) return it->second;
  }
  if (mode_ == FixtureMode::kStrict) {
    throw Error(ErrorCode::kUnknownKey,
                "no vqa entry for '" + query.question + "' in " + image);
  }
  return {};
}

}  // namespace vpe
