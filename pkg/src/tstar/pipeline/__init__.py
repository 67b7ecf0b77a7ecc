"""The iterative encoder/decoder pipeline, its backends and evaluation protocols."""

from .core import (
    DEFAULT_WMD_CEILING,
    PipelineConfig,
    PipelineResult,
    PipelineState,
    bootstrap_synthetic,
    build_decoder_trainset,
    dump_log,
    encoder_trainset,
    regenerate_synthetic,
    run_iteration,
    run_pipeline,
)
from .corpora import (
    DecoderTrainSet,
    GoldAmrCorpus,
    ItemFailure,
    MonoStyleCorpus,
    SyntheticBatch,
    SyntheticPair,
    read_gold_jsonl,
    read_mono_jsonl,
)
from .evaluation import ProbeResult, ReconstructionReport, reconstruction_eval, style_agnosticity_probe, style_transfer
from .interfaces import Backends, DecoderBackend, EncoderBackend, StylerBackend
from .remote import RemoteDecoder, RemoteEncoder, RemoteSession, RemoteStyler, RemoteStyleScorer, remote_backend_client
from .toy import ToyDecoder, ToyEncoder, ToyStyler, default_verb_table, readout, toy_backends

__all__ = [
    "DEFAULT_WMD_CEILING",
    "Backends",
    "DecoderBackend",
    "DecoderTrainSet",
    "EncoderBackend",
    "GoldAmrCorpus",
    "ItemFailure",
    "MonoStyleCorpus",
    "PipelineConfig",
    "PipelineResult",
    "PipelineState",
    "ProbeResult",
    "ReconstructionReport",
    "RemoteStyleScorer",
    "StylerBackend",
    "SyntheticBatch",
    "SyntheticPair",
    "ToyDecoder",
    "ToyEncoder",
    "ToyStyler",
    "bootstrap_synthetic",
    "build_decoder_trainset",
    "default_verb_table",
    "dump_log",
    "encoder_trainset",
    "read_gold_jsonl",
    "read_mono_jsonl",
    "readout",
    "reconstruction_eval",
    "regenerate_synthetic",
    "RemoteDecoder",
    "RemoteEncoder",
    "RemoteSession",
    "RemoteStyler",
    "remote_backend_client",
    "run_iteration",
    "run_pipeline",
    "style_agnosticity_probe",
    "style_transfer",
    "toy_backends",
]
