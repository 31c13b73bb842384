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

// Python bindings. Graphs, splits and models are exposed as opaque objects;
// edge lists cross the boundary as (E, 2) int64 arrays and matrices as
// float64 arrays. Long-running calls release the GIL.

#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "mrgnn/checkpoint.hpp"
#include "mrgnn/community.hpp"
#include "mrgnn/epidemic.hpp"
#include "mrgnn/error.hpp"
#include "mrgnn/evaluation.hpp"
#include "mrgnn/metrics.hpp"
#include "mrgnn/synthetic.hpp"
#include "mrgnn/training.hpp"

namespace py = pybind11;
using namespace mrgnn;

namespace {

py::array_t<std::int64_t> edges_to_array(const EdgeList& edges) {
  py::array_t<std::int64_t> out({static_cast<py::ssize_t>(edges.size()), py::ssize_t{2}});
  auto a = out.mutable_unchecked<2>();
  for (std::size_t i = 0; i < edges.size(); ++i) {
    a(i, 0) = static_cast<std::int64_t>(edges[i].u);
    a(i, 1) = static_cast<std::int64_t>(edges[i].v);
  }
  return out;
}

std::vector<std::pair<Node, Node>> array_to_pairs(const py::array_t<std::int64_t, py::array::c_style | py::array::forcecast>& arr) {
  if (arr.ndim() != 2 || arr.shape(1) != 2) throw DataError("edge array must have shape (E, 2)");
  auto a = arr.unchecked<2>();
  std::vector<std::pair<Node, Node>> out;
  out.reserve(static_cast<std::size_t>(arr.shape(0)));
  for (py::ssize_t i = 0; i < arr.shape(0); ++i) {
    if (a(i, 0) < 0 || a(i, 1) < 0) throw DataError("negative node index in edge array");
    out.emplace_back(static_cast<Node>(a(i, 0)), static_cast<Node>(a(i, 1)));
  }
  return out;
}

std::vector<double> loss_curve(const TrainReport& r) {
  std::vector<double> out;
  out.reserve(r.epochs.size());
  for (const EpochRecord& e : r.epochs) out.push_back(e.loss);
  return out;
}

std::vector<std::optional<double>> val_curve(const TrainReport& r) {
  std::vector<std::optional<double>> out;
  out.reserve(r.epochs.size());
  for (const EpochRecord& e : r.epochs) out.push_back(e.val_auc_macro);
  return out;
}

py::array_t<double> attention_array(const AttentionTensor& t) {
  const std::size_t n = t.num_nodes(), l = t.num_layers();
  py::array_t<double> out({static_cast<py::ssize_t>(n), static_cast<py::ssize_t>(l), static_cast<py::ssize_t>(l)});
  auto a = out.mutable_unchecked<3>();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t p = 0; p < l; ++p) {
      for (std::size_t q = 0; q < l; ++q) a(i, p, q) = t(i, p, q);
    }
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_mrgnn, m) {
  m.doc() = "Multiplex relational graph neural network for link prediction";

  py::register_exception<DataError>(m, "DataError", PyExc_ValueError);
  py::register_exception<NumericError>(m, "NumericError", PyExc_ArithmeticError);

  py::class_<LayerGraph>(m, "LayerGraph")
      .def(py::init([](std::size_t layer_id, std::size_t num_nodes,
                       const py::array_t<std::int64_t, py::array::c_style | py::array::forcecast>& edges) {
             const auto pairs = array_to_pairs(edges);
             return LayerGraph::from_pairs(layer_id, num_nodes, pairs);
           }),
           py::arg("layer_id"), py::arg("num_nodes"), py::arg("edges"),
           "Builds a layer from an (E, 2) pair array; self-loops and duplicates are dropped.")
      .def_property_readonly("id", &LayerGraph::id)
      .def_property_readonly("num_nodes", &LayerGraph::num_nodes)
      .def_property_readonly("num_edges", &LayerGraph::num_edges)
      .def_property_readonly("edges", [](const LayerGraph& g) { return edges_to_array(g.edges()); })
      .def("neighbors", [](const LayerGraph& g, Node n) {
        if (n >= g.num_nodes()) throw py::index_error("node out of range");
        const auto s = g.neighbors(n);
        return std::vector<Node>(s.begin(), s.end());
      })
      .def("degree", [](const LayerGraph& g, Node n) {
        if (n >= g.num_nodes()) throw py::index_error("node out of range");
        return g.degree(n);
      })
      .def("has_edge", &LayerGraph::has_edge);

  py::class_<MultiplexGraph>(m, "MultiplexGraph")
      .def(py::init([](std::size_t num_nodes, std::vector<LayerGraph> layers, std::optional<DenseMatrix> attributes) {
             return MultiplexGraph(num_nodes, std::move(layers), attributes.value_or(DenseMatrix{}));
           }),
           py::arg("num_nodes"), py::arg("layers"), py::arg("attributes") = py::none())
      .def_property_readonly("num_nodes", &MultiplexGraph::num_nodes)
      .def_property_readonly("num_layers", &MultiplexGraph::num_layers)
      .def_property_readonly("layers", &MultiplexGraph::layers)
      .def_property_readonly("attributes", &MultiplexGraph::attributes)
      .def_property("layer_names", &MultiplexGraph::layer_names, &MultiplexGraph::set_layer_names)
      .def("layer", &MultiplexGraph::layer, py::arg("r"));

  m.def("load_multiplex", [](const std::filesystem::path& p) { return load_multiplex(p); }, py::arg("descriptor"));
  m.def("save_multiplex", &save_multiplex, py::arg("graph"), py::arg("dir"), py::arg("name") = "dataset");
  m.def("ckm_surrogate", &ckm_surrogate, py::arg("seed") = 0);
  m.def(
      "correlated_sbm",
      [](std::size_t num_nodes, std::size_t num_blocks, std::size_t num_layers, double p_in, double p_out, double keep,
         double block_perturb, std::uint64_t seed) {
        SbmConfig c{num_nodes, num_blocks, num_layers, p_in, p_out, keep, block_perturb, seed};
        SbmGraph g = correlated_sbm(c);
        return py::make_tuple(std::move(g.graph), std::move(g.blocks));
      },
      py::arg("num_nodes") = SbmConfig{}.num_nodes, py::arg("num_blocks") = SbmConfig{}.num_blocks,
      py::arg("num_layers") = SbmConfig{}.num_layers, py::arg("p_in") = SbmConfig{}.p_in,
      py::arg("p_out") = SbmConfig{}.p_out, py::arg("keep") = SbmConfig{}.keep,
      py::arg("block_perturb") = SbmConfig{}.block_perturb, py::arg("seed") = 0,
      "Returns (graph, blocks).");

  py::class_<LayerSplit>(m, "LayerSplit")
      .def_property_readonly("train_pos", [](const LayerSplit& s) { return edges_to_array(s.train_pos); })
      .def_property_readonly("train_neg", [](const LayerSplit& s) { return edges_to_array(s.train_neg); })
      .def_property_readonly("val_pos", [](const LayerSplit& s) { return edges_to_array(s.val_pos); })
      .def_property_readonly("val_neg", [](const LayerSplit& s) { return edges_to_array(s.val_neg); })
      .def_property_readonly("test_pos", [](const LayerSplit& s) { return edges_to_array(s.test_pos); })
      .def_property_readonly("test_neg", [](const LayerSplit& s) { return edges_to_array(s.test_neg); });

  py::class_<DataSplit>(m, "DataSplit")
      .def_readonly("layers", &DataSplit::layers)
      .def_readonly("seed", &DataSplit::seed)
      .def_readonly("kind", &DataSplit::kind)
      .def_readonly("test_frac", &DataSplit::test_frac)
      .def_readonly("val_frac", &DataSplit::val_frac)
      .def_readonly("train_frac", &DataSplit::train_frac);

  m.def("split_edges", &split_edges, py::arg("graph"), py::arg("test_frac") = 0.1, py::arg("val_frac") = 0.1,
        py::arg("seed") = 0);
  m.def("split_by_train_fraction", &split_by_train_fraction, py::arg("graph"), py::arg("train_frac"),
        py::arg("seed") = 0);

  py::class_<CommunityPartition>(m, "CommunityPartition")
      .def_readonly("layer_id", &CommunityPartition::layer_id)
      .def_readonly("assignment", &CommunityPartition::assignment)
      .def_readonly("modularity", &CommunityPartition::modularity)
      .def_property_readonly("num_communities", &CommunityPartition::num_communities);
  m.def("partition_layers", &partition_layers, py::arg("graph"), py::arg("seed") = 0);

  py::class_<ModelConfig>(m, "ModelConfig")
      .def(py::init<>())
      .def_readwrite("embed_dim", &ModelConfig::embed_dim)
      .def_readwrite("steps", &ModelConfig::steps)
      .def_readwrite("neighbor_cap", &ModelConfig::neighbor_cap)
      .def_property(
          "aggregator", [](const ModelConfig& c) { return to_string(c.aggregator); },
          [](ModelConfig& c, const std::string& s) { c.aggregator = parse_aggregator(s); })
      .def_readwrite("init_seed", &ModelConfig::init_seed)
      .def_readwrite("fuse_layers", &ModelConfig::fuse_layers)
      .def_readwrite("literal_score_sign", &ModelConfig::literal_score_sign)
      .def("validate", &ModelConfig::validate);

  py::class_<TrainConfig>(m, "TrainConfig")
      .def(py::init<>())
      .def_readwrite("learning_rate", &TrainConfig::learning_rate)
      .def_readwrite("max_epochs", &TrainConfig::max_epochs)
      .def_readwrite("batch_size", &TrainConfig::batch_size)
      .def_readwrite("patience", &TrainConfig::patience)
      .def_readwrite("seed", &TrainConfig::seed)
      .def_readwrite("early_stopping", &TrainConfig::early_stopping)
      .def("validate", &TrainConfig::validate);

  py::class_<MrgnnParams>(m, "MrgnnParams")
      .def_property_readonly("config", &MrgnnParams::config)
      .def_property_readonly("num_layers", &MrgnnParams::num_layers)
      .def_property_readonly("feature_width", &MrgnnParams::feature_width)
      .def(
          "parameters",
          [](const MrgnnParams& p) {
            py::dict out;
            const ParamStore& s = p.store();
            for (std::size_t i = 0; i < s.size(); ++i) out[py::str(s.name(i))] = DenseMatrix(s.value(i));
            return out;
          },
          "Copies of every named parameter matrix.");

  py::class_<TrainReport>(m, "TrainReport")
      .def_readonly("initial_loss", &TrainReport::initial_loss)
      .def_readonly("final_loss", &TrainReport::final_loss)
      .def_readonly("best_epoch", &TrainReport::best_epoch)
      .def_readonly("epochs_run", &TrainReport::epochs_run)
      .def_readonly("stopped_early", &TrainReport::stopped_early)
      .def_readonly("wall_seconds", &TrainReport::wall_seconds)
      .def_property_readonly("losses", &loss_curve)
      .def_property_readonly("val_auc", &val_curve);

  py::class_<TrainResult>(m, "TrainResult")
      .def_readonly("params", &TrainResult::params)
      .def_readonly("report", &TrainResult::report);

  m.def(
      "train",
      [](const MultiplexGraph& g, const DataSplit& s, const ModelConfig& mc, const TrainConfig& tc) {
        py::gil_scoped_release release;
        return train(g, s, mc, tc);
      },
      py::arg("graph"), py::arg("split"), py::arg("model") = ModelConfig{}, py::arg("train") = TrainConfig{});

  m.def(
      "embed",
      [](MrgnnParams params, const MultiplexGraph& g, const DataSplit& s) {
        EmbeddingSet e;
        {
          py::gil_scoped_release release;
          e = embed(params, make_model_input(g, s));
        }
        py::dict out;
        out["intra"] = e.intra;
        out["fused"] = e.fused;
        out["attention"] = attention_array(e.attention);
        return out;
      },
      py::arg("params"), py::arg("graph"), py::arg("split"),
      "Forward pass over the split's training graphs: dict with intra, fused (per-layer N x d) and attention (N x R x R).");

  m.def(
      "score_pairs",
      [](MrgnnParams params, const MultiplexGraph& g, const DataSplit& s, std::size_t layer,
         const py::array_t<std::int64_t, py::array::c_style | py::array::forcecast>& pairs) {
        const auto list = array_to_pairs(pairs);
        if (layer >= g.num_layers()) throw DataError("layer out of range");
        const PairScorer scorer = model_scorer(params, make_model_input(g, s));
        std::vector<double> out;
        out.reserve(list.size());
        for (auto [i, j] : list) {
          if (i >= g.num_nodes() || j >= g.num_nodes()) throw DataError("node out of range");
          out.push_back(scorer(layer, std::min(i, j), std::max(i, j)));
        }
        return out;
      },
      py::arg("params"), py::arg("graph"), py::arg("split"), py::arg("layer"), py::arg("pairs"));

  py::class_<LayerMetrics>(m, "LayerMetrics")
      .def_readonly("layer", &LayerMetrics::layer)
      .def_readonly("auc", &LayerMetrics::auc)
      .def_readonly("micro_f1", &LayerMetrics::micro_f1)
      .def_readonly("weak_auc", &LayerMetrics::weak_auc)
      .def_readonly("weak_micro_f1", &LayerMetrics::weak_micro_f1);

  py::class_<EvaluationReport>(m, "EvaluationReport")
      .def_readonly("layers", &EvaluationReport::layers)
      .def_readonly("macro_auc", &EvaluationReport::macro_auc)
      .def_readonly("macro_micro_f1", &EvaluationReport::macro_micro_f1)
      .def_readonly("macro_weak_auc", &EvaluationReport::macro_weak_auc)
      .def_readonly("macro_weak_micro_f1", &EvaluationReport::macro_weak_micro_f1)
      .def("to_csv", [](const EvaluationReport& r) { return r.to_csv().str(); });

  m.def(
      "evaluate",
      [](MrgnnParams params, const MultiplexGraph& g, const DataSplit& s,
         const std::vector<CommunityPartition>& partitions) {
        py::gil_scoped_release release;
        return evaluate(params, g, s, partitions);
      },
      py::arg("params"), py::arg("graph"), py::arg("split"), py::arg("partitions"));

  m.def(
      "auc", [](const std::vector<double>& s, const std::vector<int>& y) { return auc(s, y); }, py::arg("scores"),
      py::arg("labels"));
  m.def(
      "micro_f1",
      [](const std::vector<double>& s, const std::vector<int>& y, double t) { return micro_f1(s, y, t); },
      py::arg("scores"), py::arg("labels"), py::arg("threshold") = 0.5);

  m.def("choose_source", &choose_source, py::arg("layer"), py::arg("seed") = 0);
  m.def(
      "si_spread",
      [](const LayerGraph& layer, std::optional<Node> source, std::uint64_t seed) {
        return si_spread(layer, source, seed).infected;
      },
      py::arg("layer"), py::arg("source") = py::none(), py::arg("seed") = 0,
      "Infected sets after each synchronous step; the last entry is the fixed point.");

  m.def(
      "save_checkpoint", [](const std::filesystem::path& p, const MrgnnParams& params) { save_checkpoint(p, params, {}); },
      py::arg("path"), py::arg("params"));
  m.def(
      "load_checkpoint", [](const std::filesystem::path& p) { return load_checkpoint(p).params; }, py::arg("path"));
}
