# Copyright 2026 The MRGNN Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Multiplex relational graph neural network for link prediction.

The heavy lifting lives in the compiled ``_mrgnn`` extension; this package
re-exports it.
"""

from ._mrgnn import (
    CommunityPartition,
    DataError,
    DataSplit,
    EvaluationReport,
    LayerGraph,
    LayerMetrics,
    LayerSplit,
    ModelConfig,
    MrgnnParams,
    MultiplexGraph,
    NumericError,
    TrainConfig,
    TrainReport,
    TrainResult,
    auc,
    choose_source,
    ckm_surrogate,
    correlated_sbm,
    embed,
    evaluate,
    load_checkpoint,
    load_multiplex,
    micro_f1,
    partition_layers,
    save_checkpoint,
    save_multiplex,
    score_pairs,
    si_spread,
    split_by_train_fraction,
    split_edges,
    train,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
