"""Embedding-based graph prediction: place thresholding and memory-bank object association."""

from msgkit.association.bank import MemoryBank
from msgkit.association.models import (
    BANK_UPDATE_MODES,
    AssocConfig,
    BankEntry,
    EmbeddingSet,
    PredictionResult,
    clip_cosine,
    normalize_rows,
)
from msgkit.association.objects import AssociationResult, associate_frame, associate_objects
from msgkit.association.places import place_similarity, predict_pp
from msgkit.association.predict import build_pred_graph

__all__ = [
    "BANK_UPDATE_MODES",
    "AssocConfig",
    "AssociationResult",
    "BankEntry",
    "EmbeddingSet",
    "MemoryBank",
    "PredictionResult",
    "associate_frame",
    "associate_objects",
    "build_pred_graph",
    "clip_cosine",
    "normalize_rows",
    "place_similarity",
    "predict_pp",
]
