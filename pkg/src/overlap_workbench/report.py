"""Verdicts and law reports shared by every checking routine."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Mapping


@dataclass(frozen=True)
class Verdict:
    """Outcome of checking one named law.

    ``witness`` maps role names (``"p"``, ``"q"``, ``"U"`` ...) to element
    indices or tuples of indices; ``labels`` holds the same roles rendered
    with element names. A failing verdict always carries a witness.
    """

    law: str
    passed: bool
    witness: Mapping[str, object] | None = None
    labels: Mapping[str, str] | None = None

    def __post_init__(self):
        if not self.passed and self.witness is None:
            object.__setattr__(self, "witness", {})
        if self.passed and self.witness is not None:
            raise ValueError(f"passing verdict {self.law!r} must not carry a witness")

    @classmethod
    def ok(cls, law: str) -> "Verdict":
        return cls(law, True)

    @classmethod
    def fail(cls, law: str, **roles) -> "Verdict":
        """Failing verdict; each role is ``(lattice, index_or_indices)`` or a raw value."""
        witness, labels = {}, {}
        for role, value in roles.items():
            if isinstance(value, tuple) and len(value) == 2 and hasattr(value[0], "label"):
                lat, idx = value
                witness[role] = idx if isinstance(idx, int) else tuple(idx)
                labels[role] = lat.label(idx)
            else:
                witness[role] = value
                labels[role] = str(value)
        return cls(law, False, witness, labels)

    def __bool__(self) -> bool:
        return self.passed

    def describe(self) -> str:
        mark = "PASS" if self.passed else "FAIL"
        if self.passed:
            return f"{mark}  {self.law}"
        shown = ", ".join(f"{k}={v}" for k, v in (self.labels or {}).items())
        return f"{mark}  {self.law}  [{shown}]"

    def as_dict(self) -> dict:
        return {
            "law": self.law,
            "passed": self.passed,
            "witness": None if self.witness is None else dict(self.labels or {}),
        }


@dataclass(frozen=True)
class AxiomReport:
    """An ordered collection of verdicts, indexable by law name."""

    title: str
    verdicts: tuple[Verdict, ...]
    notes: tuple[str, ...] = field(default=())

    @property
    def ok(self) -> bool:
        return all(v.passed for v in self.verdicts)

    def __bool__(self) -> bool:
        return self.ok

    def __getitem__(self, law: str) -> Verdict:
        for v in self.verdicts:
            if v.law == law:
                return v
        raise KeyError(law)

    def __contains__(self, law: str) -> bool:
        return any(v.law == law for v in self.verdicts)

    def __iter__(self) -> Iterator[Verdict]:
        return iter(self.verdicts)

    @property
    def failures(self) -> list[Verdict]:
        return [v for v in self.verdicts if not v.passed]

    def describe(self) -> str:
        lines = [self.title]
        lines += ["  " + v.describe() for v in self.verdicts]
        lines += ["  note: " + n for n in self.notes]
        return "\n".join(lines)
