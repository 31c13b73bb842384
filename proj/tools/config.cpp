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

#include "config.hpp"

#include <charconv>
#include <set>

#include "mrgnn/error.hpp"
#include "mrgnn/io.hpp"

namespace mrgnn::cli {

namespace {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

// Reads fields of one JSON object and rejects keys nobody asked for.
class ObjectReader {
 public:
  ObjectReader(const json& obj, std::string where) : obj_(obj), where_(std::move(where)) {
    if (!obj_.is_object()) throw ConfigError(where_ + " must be a JSON object");
  }

  bool has(const std::string& key) {
    seen_.insert(key);
    return obj_.contains(key) && !obj_.at(key).is_null();
  }

  template <typename T>
  T get(const std::string& key, T fallback) {
    if (!has(key)) return fallback;
    return convert<T>(key);
  }

  template <typename T>
  T require(const std::string& key) {
    if (!has(key)) throw ConfigError(where_ + "." + key + " is required");
    return convert<T>(key);
  }

  const json& raw(const std::string& key) {
    seen_.insert(key);
    return obj_.at(key);
  }

  void finish() const {
    for (const auto& [key, value] : obj_.items()) {
      if (!seen_.contains(key)) throw ConfigError("unknown key " + where_ + "." + key);
    }
  }

 private:
  template <typename T>
  T convert(const std::string& key) {
    const json& v = obj_.at(key);
    try {
      if constexpr (std::is_same_v<T, std::size_t> || std::is_same_v<T, std::uint64_t>) {
        if (!v.is_number_unsigned()) throw ConfigError(where_ + "." + key + " must be a non-negative integer");
      }
      return v.get<T>();
    } catch (const json::exception& e) {
      throw ConfigError(where_ + "." + key + ": " + e.what());
    }
  }

  const json& obj_;
  std::string where_;
  std::set<std::string> seen_;
};

fs::path resolve(const fs::path& base, const std::string& p) {
  const fs::path path(p);
  return path.is_absolute() ? path : base / path;
}

DatasetSpec parse_dataset(const json& j, const fs::path& base) {
  DatasetSpec d;
  if (j.is_string()) {
    d.descriptor = resolve(base, j.get<std::string>());
    return d;
  }
  ObjectReader r(j, "dataset");
  if (r.has("path")) {
    d.descriptor = resolve(base, r.require<std::string>("path"));
  } else {
    d.generator = r.require<std::string>("generator");
    if (d.generator != "ckm_surrogate" && d.generator != "sbm") {
      throw ConfigError("dataset.generator must be \"ckm_surrogate\" or \"sbm\", got \"" + d.generator + "\"");
    }
    d.generator_seed = r.get<std::uint64_t>("seed", 0);
    if (d.generator == "sbm") {
      SbmConfig& s = d.sbm;
      s.num_nodes = r.get<std::size_t>("num_nodes", s.num_nodes);
      s.num_blocks = r.get<std::size_t>("num_blocks", s.num_blocks);
      s.num_layers = r.get<std::size_t>("num_layers", s.num_layers);
      s.p_in = r.get<double>("p_in", s.p_in);
      s.p_out = r.get<double>("p_out", s.p_out);
      s.keep = r.get<double>("keep", s.keep);
      s.block_perturb = r.get<double>("block_perturb", s.block_perturb);
      s.seed = d.generator_seed;
    }
  }
  r.finish();
  return d;
}

ModelConfig parse_model(const json& j) {
  ModelConfig m;
  ObjectReader r(j, "model");
  m.embed_dim = r.get<std::size_t>("embed_dim", m.embed_dim);
  m.steps = r.get<std::size_t>("steps", m.steps);
  m.neighbor_cap = r.get<std::size_t>("neighbor_cap", m.neighbor_cap);
  if (r.has("aggregator")) m.aggregator = parse_aggregator(r.require<std::string>("aggregator"));
  m.fuse_layers = r.get<bool>("fuse_layers", m.fuse_layers);
  m.literal_score_sign = r.get<bool>("literal_score_sign", m.literal_score_sign);
  r.finish();
  return m;
}

TrainConfig parse_train(const json& j) {
  TrainConfig t;
  ObjectReader r(j, "train");
  t.learning_rate = r.get<double>("learning_rate", t.learning_rate);
  t.max_epochs = r.require<std::size_t>("max_epochs");
  t.patience = r.get<std::size_t>("patience", t.patience);
  t.early_stopping = r.get<bool>("early_stopping", t.early_stopping);
  if (r.has("batch_size")) {
    const json& b = r.raw("batch_size");
    if (b.is_string() && b.get<std::string>() == "full") {
      t.batch_size = 0;
    } else if (b.is_number_unsigned() && b.get<std::size_t>() > 0) {
      t.batch_size = b.get<std::size_t>();
    } else {
      throw ConfigError("train.batch_size must be \"full\" or a positive integer");
    }
  }
  r.finish();
  return t;
}

std::vector<std::uint64_t> parse_seeds(const json& j) {
  if (j.is_string()) return parse_seed_list(j.get<std::string>());
  if (!j.is_array()) throw ConfigError("seeds must be a list of integers or a string such as \"0-9\"");
  std::vector<std::uint64_t> out;
  for (const json& s : j) {
    if (!s.is_number_unsigned()) throw ConfigError("seeds must be non-negative integers");
    out.push_back(s.get<std::uint64_t>());
  }
  return out;
}

json model_json(const ModelConfig& m) {
  return {{"embed_dim", m.embed_dim},
          {"steps", m.steps},
          {"neighbor_cap", m.neighbor_cap},
          {"aggregator", to_string(m.aggregator)},
          {"fuse_layers", m.fuse_layers},
          {"literal_score_sign", m.literal_score_sign}};
}

}  // namespace

std::string DatasetSpec::label() const {
  if (generator.empty()) return descriptor.string();
  return generator + ":" + std::to_string(generator_seed);
}

std::vector<std::uint64_t> parse_seed_list(const std::string& text) {
  std::vector<std::uint64_t> out;
  auto number = [&](std::string_view s) {
    std::uint64_t v = 0;
    auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || end != s.data() + s.size() || s.empty()) {
      throw ConfigError("bad seed list \"" + text + "\"");
    }
    return v;
  };
  std::string_view rest(text);
  while (!rest.empty()) {
    const auto comma = rest.find(',');
    const std::string_view item = rest.substr(0, comma);
    const auto dash = item.find('-');
    if (dash == std::string_view::npos) {
      out.push_back(number(item));
    } else {
      const std::uint64_t lo = number(item.substr(0, dash)), hi = number(item.substr(dash + 1));
      if (hi < lo) throw ConfigError("bad seed range \"" + std::string(item) + "\"");
      for (std::uint64_t s = lo; s <= hi; ++s) out.push_back(s);
    }
    rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
  }
  if (out.empty()) throw ConfigError("seed list is empty");
  return out;
}

ExperimentConfig parse_config(const std::string& text, const fs::path& base_dir) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  ExperimentConfig c;
  ObjectReader r(doc, "config");
  c.dataset = parse_dataset(r.has("dataset") ? r.raw("dataset") : throw ConfigError("config.dataset is required"),
                            base_dir);
  if (r.has("model")) c.model = parse_model(r.raw("model"));
  if (r.has("train")) {
    c.train = parse_train(r.raw("train"));
  } else {
    throw ConfigError("config.train is required (at least train.max_epochs)");
  }
  if (r.has("split")) {
    ObjectReader s(r.raw("split"), "split");
    c.split.test_frac = s.get<double>("test_frac", c.split.test_frac);
    c.split.val_frac = s.get<double>("val_frac", c.split.val_frac);
    c.split.partition_seed = s.get<std::uint64_t>("partition_seed", c.split.partition_seed);
    s.finish();
  }
  if (r.has("seeds")) c.seeds = parse_seeds(r.raw("seeds"));
  if (r.has("out")) c.out = resolve(base_dir, r.require<std::string>("out"));
  if (r.has("checkpoint")) c.checkpoint = resolve(base_dir, r.require<std::string>("checkpoint"));
  if (r.has("sweep")) {
    ObjectReader s(r.raw("sweep"), "sweep");
    c.sweep.kind = s.get<std::string>("kind", "");
    c.sweep.fractions = s.get<std::vector<double>>("fractions", {});
    c.sweep.dims = s.get<std::vector<std::size_t>>("dims", {});
    c.sweep.variants = s.get<std::vector<std::string>>("variants", {});
    s.finish();
  }
  if (r.has("simulate")) {
    ObjectReader s(r.raw("simulate"), "simulate");
    c.simulate.train_frac = s.get<double>("train_frac", c.simulate.train_frac);
    c.simulate.threshold = s.get<double>("threshold", c.simulate.threshold);
    if (s.has("source")) c.simulate.source = s.require<std::size_t>("source");
    c.simulate.union_layers = s.get<bool>("union_layers", c.simulate.union_layers);
    s.finish();
  }
  r.finish();
  try {
    c.model.validate();
    c.train.validate();
  } catch (const DataError& e) {
    throw ConfigError(e.what());
  }
  return c;
}

ExperimentConfig load_config(const fs::path& path) {
  if (!fs::exists(path)) throw ConfigError("config file not found: " + path.string());
  return parse_config(read_file(path), path.parent_path());
}

nlohmann::ordered_json ExperimentConfig::resolved() const {
  json j;
  if (dataset.generator.empty()) {
    j["dataset"] = {{"path", dataset.descriptor.string()}};
  } else {
    j["dataset"] = {{"generator", dataset.generator}, {"seed", dataset.generator_seed}};
    if (dataset.generator == "sbm") {
      const SbmConfig& s = dataset.sbm;
      j["dataset"].update({{"num_nodes", s.num_nodes}, {"num_blocks", s.num_blocks},
                           {"num_layers", s.num_layers}, {"p_in", s.p_in}, {"p_out", s.p_out},
                           {"keep", s.keep}, {"block_perturb", s.block_perturb}});
    }
  }
  j["model"] = model_json(model);
  j["train"] = {{"learning_rate", train.learning_rate},
                {"max_epochs", train.max_epochs},
                {"patience", train.patience},
                {"early_stopping", train.early_stopping}};
  if (train.batch_size && *train.batch_size > 0) {
    j["train"]["batch_size"] = *train.batch_size;
  } else if (train.batch_size) {
    j["train"]["batch_size"] = "full";
  } else {
    j["train"]["batch_size"] = nullptr;
  }
  j["split"] = {{"test_frac", split.test_frac}, {"val_frac", split.val_frac},
                {"partition_seed", split.partition_seed}};
  j["seeds"] = seeds;
  j["out"] = out.string();
  if (checkpoint) j["checkpoint"] = checkpoint->string();
  if (!sweep.kind.empty() || !sweep.fractions.empty() || !sweep.dims.empty()) {
    j["sweep"] = {{"kind", sweep.kind}, {"fractions", sweep.fractions}, {"dims", sweep.dims},
                  {"variants", sweep.variants}};
  }
  j["simulate"] = {{"train_frac", simulate.train_frac},
                   {"threshold", simulate.threshold},
                   {"source", simulate.source ? json(*simulate.source) : json(nullptr)},
                   {"union_layers", simulate.union_layers}};
  return j;
}

MultiplexGraph load_dataset(const DatasetSpec& spec) {
  if (spec.generator == "ckm_surrogate") return ckm_surrogate(spec.generator_seed);
  if (spec.generator == "sbm") return correlated_sbm(spec.sbm).graph;
  if (!fs::exists(spec.descriptor)) throw ConfigError("dataset descriptor not found: " + spec.descriptor.string());
  return load_multiplex(spec.descriptor);
}

ModelConfig variant_config(const ModelConfig& base, const std::string& name) {
  ModelConfig m = base;
  std::string agg = name;
  constexpr std::string_view kAblation = "-nofuse";
  if (agg.size() > kAblation.size() && agg.ends_with(kAblation)) {
    agg.resize(agg.size() - kAblation.size());
    m.fuse_layers = false;
  }
  try {
    m.aggregator = parse_aggregator(agg);
  } catch (const DataError&) {
    throw ConfigError("unknown variant \"" + name + "\" (expected logit, semantic, or <name>-nofuse)");
  }
  return m;
}

}  // namespace mrgnn::cli
