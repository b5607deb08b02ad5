"""Order-dependent scoring models, presets and the flat config format.

Probabilities given as ``int``, :class:`~fractions.Fraction`,
:class:`~decimal.Decimal` or strings (``"3/4"``, ``"0.79"``) are kept as exact
rationals; plain floats stay floats and switch computations to float mode.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, replace
from decimal import Decimal
from fractions import Fraction
from pathlib import Path
from typing import Sequence, Union

from .errors import DomainError

Probability = Union[Fraction, float]

__all__ = [
    "Probability",
    "to_probability",
    "ScoringModel",
    "PRESETS",
    "load_model",
    "parse_config",
    "format_probability",
]

UNIFORM = "uniform"
PER_ROUND = "per_round"


def to_probability(x) -> Probability:
    if isinstance(x, bool):
        raise DomainError("probability cannot be a bool")
    if isinstance(x, float):
        value: Probability = x
    elif isinstance(x, (int, Fraction, Decimal)):
        value = Fraction(x)
    elif isinstance(x, str):
        try:
            value = Fraction(x.strip())
        except (ValueError, ZeroDivisionError):
            raise DomainError(f"not a probability: {x!r}") from None
    else:
        raise DomainError(f"not a probability: {x!r}")
    if not 0 <= value <= 1:
        raise DomainError(f"probability out of [0, 1]: {x!r}")
    return value


def _pair(pair) -> tuple[Probability, Probability]:
    p, q = pair
    return to_probability(p), to_probability(q)


@dataclass(frozen=True)
class ScoringModel:
    """Success probabilities of the first and second kicker of a round.

    ``uniform`` models use the same ``(p, q)`` in every regular round;
    ``per_round`` models carry one pair per regular round. Sudden death
    always uses the fixed pair ``sudden_death``.
    """

    mode: str
    pairs: tuple[tuple[Probability, Probability], ...]
    sudden_death: tuple[Probability, Probability]

    def __post_init__(self):
        if self.mode not in (UNIFORM, PER_ROUND):
            raise DomainError(f"unknown model mode {self.mode!r}")
        if not self.pairs or (self.mode == UNIFORM and len(self.pairs) != 1):
            raise DomainError("uniform models hold exactly one (p, q) pair")
        object.__setattr__(self, "pairs", tuple(_pair(x) for x in self.pairs))
        object.__setattr__(self, "sudden_death", _pair(self.sudden_death))
        if self.mode == UNIFORM and self.q > self.p:
            raise DomainError("uniform model requires q <= p")
        p_sd, q_sd = self.sudden_death
        if q_sd > p_sd:
            raise DomainError("sudden death requires q_sd <= p_sd")

    @classmethod
    def uniform(cls, p, q, sudden_death=None) -> ScoringModel:
        sd = (p, q) if sudden_death is None else sudden_death
        return cls(UNIFORM, ((p, q),), sd)

    @classmethod
    def per_round(cls, pairs: Sequence, sudden_death) -> ScoringModel:
        return cls(PER_ROUND, tuple(pairs), sudden_death)

    @property
    def p(self) -> Probability:
        return self.pairs[0][0]

    @property
    def q(self) -> Probability:
        return self.pairs[0][1]

    @property
    def is_uniform(self) -> bool:
        return self.mode == UNIFORM

    @property
    def is_exact(self) -> bool:
        values = [v for pair in self.pairs for v in pair] + list(self.sudden_death)
        return all(isinstance(v, Fraction) for v in values)

    def rates(self, rounds: int) -> tuple[list[Probability], list[Probability]]:
        """Per-round first/second kicker success rates for ``rounds`` rounds."""
        if self.mode == UNIFORM:
            return [self.p] * rounds, [self.q] * rounds
        if len(self.pairs) != rounds:
            raise DomainError(
                f"per-round model has {len(self.pairs)} rounds, {rounds} requested"
            )
        return [p for p, _ in self.pairs], [q for _, q in self.pairs]

    def with_sudden_death(self, p_sd, q_sd) -> ScoringModel:
        return replace(self, sudden_death=(p_sd, q_sd))

    def as_float(self) -> ScoringModel:
        return ScoringModel(
            self.mode,
            tuple((float(p), float(q)) for p, q in self.pairs),
            tuple(float(x) for x in self.sudden_death),
        )

    # -- config text -----------------------------------------------------------

    def to_config(self) -> str:
        lines = [f"mode = {self.mode}"]
        if self.mode == UNIFORM:
            lines += [f"p = {_fmt(self.p)}", f"q = {_fmt(self.q)}"]
        else:
            body = ", ".join(f"{_fmt(p)}:{_fmt(q)}" for p, q in self.pairs)
            lines.append(f"per_round = {body}")
        p_sd, q_sd = self.sudden_death
        lines.append(f"sudden_death = {_fmt(p_sd)}:{_fmt(q_sd)}")
        return "\n".join(lines) + "\n"

    def digest(self) -> str:
        return hashlib.sha256(self.to_config().encode()).hexdigest()[:16]


def _fmt(x: Probability) -> str:
    return repr(x) if isinstance(x, float) else str(x)


def _parse_pair(text: str):
    parts = text.split(":")
    if len(parts) != 2:
        raise DomainError(f"expected p:q pair, got {text!r}")
    return parts[0].strip(), parts[1].strip()


def parse_config(text: str) -> ScoringModel:
    """Parse the flat ``key = value`` model format (``#`` starts a comment).

    Keys: ``mode``, ``p``, ``q``, ``per_round`` (comma-separated ``p:q``
    pairs) and ``sudden_death`` (one ``p:q`` pair, defaults to ``p:q`` in
    uniform mode).
    """
    values: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise DomainError(f"line {lineno}: expected key = value")
        key, value = (s.strip() for s in line.split("=", 1))
        if key not in ("mode", "p", "q", "per_round", "sudden_death"):
            raise DomainError(f"line {lineno}: unknown key {key!r}")
        values[key] = value
    mode = values.get("mode", UNIFORM if "p" in values else PER_ROUND)
    sd = _parse_pair(values["sudden_death"]) if "sudden_death" in values else None
    if mode == UNIFORM:
        if "p" not in values or "q" not in values:
            raise DomainError("uniform model needs p and q")
        return ScoringModel.uniform(values["p"], values["q"], sd)
    if mode == PER_ROUND:
        if "per_round" not in values or sd is None:
            raise DomainError("per-round model needs per_round and sudden_death")
        pairs = [_parse_pair(x) for x in values["per_round"].split(",") if x.strip()]
        return ScoringModel.per_round(pairs, sd)
    raise DomainError(f"unknown model mode {mode!r}")


# Success rates per round from Apesteguia & Palacios-Huerta (2010, p. 2558);
# sudden death defaults to (3/4, 2/3).
PRESETS = {
    "brams": ScoringModel.uniform("3/4", "2/3"),
    "apesteguia2010": ScoringModel.per_round(
        [("0.79", "0.72"), ("0.82", "0.77"), ("0.77", "0.64"),
         ("0.74", "0.68"), ("0.74", "0.67")],
        ("3/4", "2/3"),
    ),
}


def load_model(name_or_path: str | Path) -> ScoringModel:
    """Resolve a preset name or read a config file."""
    if str(name_or_path) in PRESETS:
        return PRESETS[str(name_or_path)]
    return parse_config(Path(name_or_path).read_text())


def format_probability(x: Probability, digits: int = 12) -> str:
    """Decimal rendering with ``digits`` significant digits."""
    return f"{float(x):.{digits}g}"
