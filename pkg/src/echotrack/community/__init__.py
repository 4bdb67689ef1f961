"""Labeled community detection (EVA) and partition quality measures."""
from .eva import EvaConfig, eva_dendrogram, eva_objective, eva_partition
from .kernels import BACKENDS, DEFAULT_BACKEND
from .metrics import Partition, modularity, partition_purity, purity

__all__ = [
    "BACKENDS", "DEFAULT_BACKEND", "EvaConfig", "Partition", "eva_dendrogram", "eva_objective",
    "eva_partition", "modularity", "partition_purity", "purity",
]
