"""Echo chamber detection and lifecycle tracking on opinion-labeled dynamic interaction networks."""
__version__ = "0.1.0"

from .community import EvaConfig, Partition, eva_partition, modularity, partition_purity, purity
from .echo import CommunityAssessment, EcThresholds, classify, conductance, scatter_data
from .graph import AttributedSnapshotGraph, DynamicNetwork, InteractionEvent, build_snapshots, degree_stats
from .leaning import LeaningThresholds, compute_leaning, discretize, label_network
from .lifecycle import (
    ActivityFilterConfig, LifecycleChain, build_chains, filter_one_time_users, jaccard,
    match_communities, stabilize_membership,
)
from .valence import ValenceLexicon, group_valence, load_lexicon, valence_score
