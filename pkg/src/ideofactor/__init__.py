"""Joint factorization toolkit: shared leaning/popularity latent spaces for
social-network users and content sources, with scoring, evaluation and
tolerance-box recommendation on top.
"""

__version__ = "0.1.0"

from .datamodel import (AffinityMatrix, EngagementMatrix, InteractionMatrix,
                        LaplacianMatrix, affinity_cols, affinity_rows,
                        build_engagement_matrix, build_interaction_matrix,
                        col_normalize, laplacian, row_normalize)
from .solver import FactorSet, FitReport, SolverConfig, fit, init_factors, objective
from .baselines import BaselineResult, fit_dmcc, fit_ifd_ngr, fit_nmf_symm, fit_onmtf
from .scoring import (OrientReport, ScoredEntity, flip_axes, hard_clusters,
                      ideology_score, orient, popularity_score, score_all)
from .metrics import (LabeledPartition, ScoreSeries, adjusted_rand_index,
                      avg_content_truth, mutual_information_scores, pearson,
                      purity, threshold_labels)
from .synthetic import SyntheticInstance, SyntheticSpec, generate
from .recommender import (Recommendation, ToleranceBox, recommend,
                          user_popularity_position)
