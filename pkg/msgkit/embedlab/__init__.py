"""Training-signal numerics: losses, coding rate, gradient checks and the linear probe."""

from msgkit.embedlab.coding_rate import coding_rate, coding_rate_gradient
from msgkit.embedlab.gradcheck import grad_check, numeric_gradient
from msgkit.embedlab.losses import (
    batch_pair_losses,
    cosine_with_grads,
    object_loss,
    object_loss_embeddings,
    place_loss,
)
from msgkit.embedlab.models import (
    EpochStats,
    LossResult,
    PairBatch,
    ProbeConfig,
    ProbeResult,
    Projector,
    TrainingScene,
)
from msgkit.embedlab.probe import ProbeTrainer, fit_probe, sample_batch, train_probe

__all__ = [
    "EpochStats",
    "LossResult",
    "PairBatch",
    "ProbeConfig",
    "ProbeResult",
    "ProbeTrainer",
    "Projector",
    "TrainingScene",
    "batch_pair_losses",
    "coding_rate",
    "coding_rate_gradient",
    "cosine_with_grads",
    "fit_probe",
    "grad_check",
    "numeric_gradient",
    "object_loss",
    "object_loss_embeddings",
    "place_loss",
    "sample_batch",
    "train_probe",
]
