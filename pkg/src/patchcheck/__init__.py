"""Two-stage assessment of program-repair patches.

Stage one compares dynamically inferred invariants of the buggy,
ground-truth, and patched programs against correct/error specifications;
stage two scores the patch from embedding-distance features with a logistic
predictor and a threshold rule.
"""

from .corpus import (
    InvariantCorpus,
    Partition,
    Variant,
    filter_by_methods,
    parse_corpus,
    parse_invariant_file,
    serialize_corpus,
)
from .embeddings import EmbeddingVector, hashing_embed, load_embeddings, write_embeddings
from .equivalence import SolverHook, emit_equivalence_query, equivalent, normalize
from .harness import (
    ConfusionMatrix,
    MetricsReport,
    PatchRecord,
    compute_auc,
    compute_metrics,
    dedup_against_eval,
    load_manifest,
    split_train_valid,
    tune_threshold,
)
from .invariants import Invariant, InvariantAtom, ProgramPoint
from .labels import Correctness
from .pipeline import (
    Assessment,
    BatchReport,
    EmbedderMode,
    Granularity,
    PipelineConfig,
    assess_patch,
    run_batch,
)
from .semantic import (
    SemanticVerdict,
    Specification,
    build_correct_spec,
    build_error_spec,
    classify_semantic,
)
from .syntactic import (
    DistanceFeatures,
    PredictorModel,
    TrainingConfig,
    classify_threshold,
    distance_pair,
    feature_vector,
    load_model,
    lr_predict,
    lr_train,
    save_model,
)
from .test_selection import CoverageMap, load_coverage, select_related_tests

__version__ = "0.1.0"
