"""Backend seams for the encoder, the per-style decoders and the bootstrap styler."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Protocol, Sequence

from ..amr import AmrGraph


class EncoderBackend(Protocol):
    def to_amr(self, sentence: str) -> AmrGraph: ...

    def fine_tune(self, pairs: Sequence[tuple[str, AmrGraph]]) -> None: ...


class DecoderBackend(Protocol):
    style: str

    def to_text(self, graph: AmrGraph) -> str: ...

    def fine_tune(self, pairs: Sequence[tuple[str, AmrGraph]]) -> None: ...


class StylerBackend(Protocol):
    def stylize(self, sentence: str, style: str) -> str: ...


@dataclass
class Backends:
    encoder: EncoderBackend
    decoders: Mapping[str, DecoderBackend]
    styler: StylerBackend | None = None
    extra: dict = field(default_factory=dict)

    def state_dict(self) -> dict:
        """Serializable backend state, for backends that expose one."""
        out = {}
        if hasattr(self.encoder, "state_dict"):
            out["encoder"] = self.encoder.state_dict()
        decs = {s: d.state_dict() for s, d in sorted(self.decoders.items()) if hasattr(d, "state_dict")}
        if decs:
            out["decoders"] = decs
        return out

    def load_state_dict(self, state: dict) -> None:
        if "encoder" in state and hasattr(self.encoder, "load_state_dict"):
            self.encoder.load_state_dict(state["encoder"])
        for s, st in state.get("decoders", {}).items():
            dec = self.decoders.get(s)
            if dec is not None and hasattr(dec, "load_state_dict"):
                dec.load_state_dict(st)
