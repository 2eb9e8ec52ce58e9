/* Copyright 2026 The PLD Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include <cstdio>
#include <set>
#include <string>

#include "json.hpp"
#include "pld/error.h"
#include "pld/video.h"

namespace pld {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// YouTube-style annotations use 1 (highlight), 0 (borderline) and -1
// (non-highlight). Borderline counts as non-highlight.
int NormalizeLabel(const json& value, const std::string& id) {
  if (!value.is_number_integer()) {
    throw Error(ErrorCode::kData,
                "video '" + id + "': labels must be integers in {-1, 0, 1}");
  }
  const int label = value.get<int>();
  if (label < -1 || label > 1) {
    throw Error(ErrorCode::kData, "video '" + id + "': label " +
                                      std::to_string(label) +
                                      " not in {-1, 0, 1}");
  }
  return label == 1 ? 1 : 0;
}

std::vector<Tensor> LoadTensorList(const json& paths, const fs::path& base,
                                   const std::string& id, const char* what) {
  if (!paths.is_array()) {
    throw Error(ErrorCode::kData,
                "video '" + id + "': '" + what + "' must be a list of paths");
  }
  std::vector<Tensor> out;
  out.reserve(paths.size());
  for (const json& p : paths) {
    const fs::path path = base / p.get<std::string>();
    try {
      out.push_back(ReadPldt(path));
    } catch (const Error& e) {
      throw Error(ErrorCode::kData, "video '" + id + "': " + what +
                                        " file: " + e.what());
    }
  }
  return out;
}

VideoRecord ParseVideo(const json& entry, const fs::path& base) {
  VideoRecord video;
  if (!entry.contains("id") || !entry["id"].is_string()) {
    throw Error(ErrorCode::kData, "manifest video entry without string 'id'");
  }
  video.id = entry["id"].get<std::string>();
  try {
    video.domain = entry.value("domain", std::string("default"));
    video.frames = LoadTensorList(entry.at("frames"), base, video.id, "frames");
    for (const json& s : entry.at("segments")) {
      if (!s.is_array() || s.size() != 2) {
        throw Error(ErrorCode::kData,
                    "video '" + video.id + "': segments must be [start, end]");
      }
      video.segments.push_back({s[0].get<int>(), s[1].get<int>()});
    }
    for (const json& l : entry.at("labels")) {
      video.labels.push_back(NormalizeLabel(l, video.id));
    }
    if (entry.contains("saliency") && !entry["saliency"].is_null()) {
      video.saliency =
          LoadTensorList(entry["saliency"], base, video.id, "saliency");
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kData,
                "video '" + video.id + "': malformed entry: " + e.what());
  }
  ValidateVideo(video);
  return video;
}

}  // namespace

Dataset LoadDataset(const fs::path& manifest_path) {
  json doc;
  try {
    doc = json::parse(ReadFileBytes(manifest_path));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kFormat,
                manifest_path.string() + ": invalid JSON: " + e.what());
  }
  if (!doc.is_object() || !doc.contains("videos") ||
      !doc["videos"].is_array()) {
    throw Error(ErrorCode::kFormat,
                manifest_path.string() + ": expected {\"videos\": [...]}");
  }
  const fs::path base = manifest_path.parent_path();
  Dataset dataset;
  std::set<std::string> ids;
  for (const json& entry : doc["videos"]) {
    dataset.videos.push_back(ParseVideo(entry, base));
    if (!ids.insert(dataset.videos.back().id).second) {
      throw Error(ErrorCode::kData,
                  "video '" + dataset.videos.back().id + "': duplicate id");
    }
  }
  return dataset;
}

fs::path WriteDataset(const Dataset& dataset, const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::kIo, "cannot create " + dir.string());
  json videos = json::array();
  for (const VideoRecord& video : dataset.videos) {
    ValidateVideo(video);
    fs::create_directories(dir / video.id, ec);
    if (ec) throw Error(ErrorCode::kIo, "cannot create " + (dir / video.id).string());
    json frames = json::array();
    json saliency = json::array();
    char name[32];
    for (int i = 0; i < video.frame_count(); ++i) {
      std::snprintf(name, sizeof(name), "frame_%05d.pldt", i);
      const std::string rel = video.id + "/" + name;
      WritePldt(dir / rel, video.frames[i]);
      frames.push_back(rel);
      if (video.has_saliency()) {
        std::snprintf(name, sizeof(name), "sal_%05d.pldt", i);
        const std::string srel = video.id + "/" + name;
        WritePldt(dir / srel, video.saliency[i]);
        saliency.push_back(srel);
      }
    }
    json segments = json::array();
    for (const Segment& s : video.segments) segments.push_back({s.start, s.end});
    json entry = {{"id", video.id},
                  {"domain", video.domain},
                  {"frames", frames},
                  {"segments", segments},
                  {"labels", video.labels}};
    if (video.has_saliency()) entry["saliency"] = saliency;
    videos.push_back(std::move(entry));
  }
  const fs::path manifest = dir / "dataset.json";
  WriteFileBytes(manifest, json{{"videos", videos}}.dump(2) + "\n");
  return manifest;
}

}  // namespace pld
