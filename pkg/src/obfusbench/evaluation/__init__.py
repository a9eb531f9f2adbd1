"""Records, exact-match scoring and agreement statistics."""

from .metrics import (
    DegenerateMarginals, EmptyInput, LengthMismatch, ZeroBaseAccuracy, cohen_kappa,
    degradation, em_accuracy, exact_match, normalize, relative_drop,
)
from .records import (
    TASKS, VARIANTS, AnswerMismatch, Record, SchemaViolation, check_answer_invariance,
    read_records, write_records,
)
from .scoring import (
    ClientFailure, HTTPClient, MissingPrediction, MockClient, ScoreReport,
    collect_predictions, default_workers, read_predictions, score_predictions,
)
