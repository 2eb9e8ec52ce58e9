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

#include "json.hpp"
#include "pld/error.h"
#include "pld/model.h"

namespace pld {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {
constexpr const char* kManifest = "checkpoint.json";
constexpr const char* kFormat = "pld-checkpoint";
}  // namespace

void SaveCheckpoint(const PldNet& net, const CheckpointMeta& meta,
                    const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::kIo, "cannot create " + dir.string());
  json params = json::array();
  for (const Parameter& p : net.parameters()) {
    const std::string file = p.name + ".pldt";
    WritePldt(dir / file, p.value);
    params.push_back({{"name", p.name}, {"file", file}, {"shape", p.value.shape()}});
  }
  const json doc = {{"format", kFormat},
                    {"version", 1},
                    {"config", json::parse(ConfigToJson(net.config()))},
                    {"seed", meta.seed},
                    {"epoch", meta.epoch},
                    {"temporal_mode", TemporalModeName(meta.temporal_mode)},
                    {"label_mode", LabelModeName(meta.label_mode)},
                    {"parameters", params}};
  WriteFileBytes(dir / kManifest, doc.dump(2) + "\n");
}

Checkpoint LoadCheckpoint(const fs::path& dir) {
  json doc;
  try {
    doc = json::parse(ReadFileBytes(dir / kManifest));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kFormat,
                (dir / kManifest).string() + ": invalid JSON: " + e.what());
  }
  try {
    if (doc.at("format") != kFormat || doc.at("version") != 1) {
      throw Error(ErrorCode::kFormat, (dir / kManifest).string() +
                                          ": not a version 1 checkpoint");
    }
    const PldNetConfig config = ConfigFromJson(doc.at("config").dump());
    std::vector<Parameter> params;
    for (const json& p : doc.at("parameters")) {
      params.emplace_back(p.at("name").get<std::string>(),
                          ReadPldt(dir / p.at("file").get<std::string>()));
    }
    CheckpointMeta meta;
    meta.seed = doc.at("seed").get<std::uint64_t>();
    meta.epoch = doc.at("epoch").get<int>();
    meta.temporal_mode =
        ParseTemporalMode(doc.at("temporal_mode").get<std::string>());
    meta.label_mode = ParseLabelMode(doc.at("label_mode").get<std::string>());
    return {PldNet::FromParameters(config, std::move(params)), meta};
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kFormat,
                (dir / kManifest).string() + ": " + e.what());
  }
}

}  // namespace pld
