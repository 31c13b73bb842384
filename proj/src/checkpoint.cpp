// Copyright 2026 The MRGNN Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "mrgnn/checkpoint.hpp"

#include "json.hpp"
#include "mrgnn/error.hpp"
#include "mrgnn/io.hpp"

namespace mrgnn {

namespace {

using json = nlohmann::ordered_json;

constexpr const char* kFormat = "mrgnn-checkpoint";
constexpr int kVersion = 1;

json matrix_to_json(const DenseMatrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

DenseMatrix matrix_from_json(const json& rows, const std::string& name) {
  if (!rows.is_array()) throw DataError("checkpoint parameter '" + name + "' is not an array");
  const auto r = static_cast<Eigen::Index>(rows.size());
  const auto c = r == 0 ? Eigen::Index{0} : static_cast<Eigen::Index>(rows.front().size());
  DenseMatrix m(r, c);
  for (Eigen::Index i = 0; i < r; ++i) {
    const json& row = rows[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != c) {
      throw DataError("checkpoint parameter '" + name + "' is ragged");
    }
    for (Eigen::Index j = 0; j < c; ++j) m(i, j) = row[static_cast<std::size_t>(j)].get<double>();
  }
  return m;
}

}  // namespace

std::string serialize_checkpoint(const MrgnnParams& params, const CheckpointInfo& info) {
  const ModelConfig& c = params.config();
  json doc;
  doc["format"] = kFormat;
  doc["version"] = kVersion;
  doc["config"] = {{"embed_dim", c.embed_dim},
                   {"steps", c.steps},
                   {"neighbor_cap", c.neighbor_cap},
                   {"aggregator", to_string(c.aggregator)},
                   {"init_seed", c.init_seed},
                   {"fuse_layers", c.fuse_layers},
                   {"literal_score_sign", c.literal_score_sign}};
  doc["num_layers"] = params.num_layers();
  doc["feature_width"] = params.feature_width();
  doc["info"] = {{"dataset", info.dataset},     {"split_kind", info.split_kind},
                 {"split_seed", info.split_seed}, {"test_frac", info.test_frac},
                 {"val_frac", info.val_frac},   {"train_frac", info.train_frac},
                 {"best_epoch", info.best_epoch}};
  json ps = json::array();
  const ParamStore& store = params.store();
  for (std::size_t i = 0; i < store.size(); ++i) {
    ps.push_back({{"name", store.name(i)}, {"value", matrix_to_json(store.value(i))}});
  }
  doc["params"] = std::move(ps);
  return doc.dump(1) + "\n";
}

Checkpoint parse_checkpoint(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
    if (doc.value("format", "") != kFormat) throw DataError("not an MRGNN checkpoint");
    if (doc.at("version").get<int>() != kVersion) throw DataError("unsupported checkpoint version");
    const json& jc = doc.at("config");
    ModelConfig c;
    c.embed_dim = jc.at("embed_dim").get<std::size_t>();
    c.steps = jc.at("steps").get<std::size_t>();
    c.neighbor_cap = jc.at("neighbor_cap").get<std::size_t>();
    c.aggregator = parse_aggregator(jc.at("aggregator").get<std::string>());
    c.init_seed = jc.at("init_seed").get<std::uint64_t>();
    c.fuse_layers = jc.at("fuse_layers").get<bool>();
    c.literal_score_sign = jc.at("literal_score_sign").get<bool>();

    const json& ji = doc.at("info");
    CheckpointInfo info;
    info.dataset = ji.at("dataset").get<std::string>();
    info.split_kind = ji.at("split_kind").get<std::string>();
    info.split_seed = ji.at("split_seed").get<std::uint64_t>();
    info.test_frac = ji.at("test_frac").get<double>();
    info.val_frac = ji.at("val_frac").get<double>();
    info.train_frac = ji.at("train_frac").get<double>();
    info.best_epoch = ji.at("best_epoch").get<std::size_t>();

    ParamStore store;
    for (const json& p : doc.at("params")) {
      const auto name = p.at("name").get<std::string>();
      store.add(name, matrix_from_json(p.at("value"), name));
    }
    return {MrgnnParams::from_store(c, doc.at("num_layers").get<std::size_t>(),
                                    doc.at("feature_width").get<std::size_t>(), std::move(store)),
            info};
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed checkpoint: ") + e.what());
  }
}

void save_checkpoint(const std::filesystem::path& path, const MrgnnParams& params,
                     const CheckpointInfo& info) {
  write_file_atomic(path, serialize_checkpoint(params, info));
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) throw DataError("checkpoint not found: " + path.string());
  try {
    return parse_checkpoint(read_file(path));
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

}  // namespace mrgnn
