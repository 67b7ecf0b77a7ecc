"""Style-transfer evaluation metrics and reports."""

from .bleu import self_bleu
from .report import (
    TSV_COLUMNS,
    DirectionReport,
    EvalInstance,
    direction_report,
    evaluate_directions,
    format_json,
    format_tsv,
    read_instances,
)
from .style import (
    EmbeddingSimilarity,
    LexiconStyleScorer,
    SimilarityFn,
    StyleScorer,
    embedding_sim,
    fit_lexicon_scorer,
    lexicon_style_scorer,
    mask_for_style_probe,
    read_lexicon_file,
    style_accuracy,
    style_retention,
    weighted_style_accuracy,
)

__all__ = [
    "TSV_COLUMNS",
    "DirectionReport",
    "EmbeddingSimilarity",
    "EvalInstance",
    "LexiconStyleScorer",
    "SimilarityFn",
    "StyleScorer",
    "direction_report",
    "embedding_sim",
    "evaluate_directions",
    "fit_lexicon_scorer",
    "format_json",
    "format_tsv",
    "lexicon_style_scorer",
    "mask_for_style_probe",
    "read_instances",
    "read_lexicon_file",
    "self_bleu",
    "style_accuracy",
    "style_retention",
    "weighted_style_accuracy",
]
