# hermclust/schemas/params.py
from __future__ import annotations

from typing import List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, PositiveInt, ValidationError, model_validator

from hermclust.core.errors import BadParams


class DsbmParams(BaseModel):
    """Generative parameters: community sizes, intra/inter densities and direction noise."""

    model_config = ConfigDict(frozen=True)

    sizes: List[PositiveInt] = Field(min_length=1)
    p: float = Field(ge=0.0, le=1.0, description="intra-community edge probability")
    q: float = Field(ge=0.0, le=1.0, description="inter-community edge probability")
    eta: float = Field(ge=0.0, le=0.5, description="probability a cross edge points against its orientation")

    @classmethod
    def checked(cls, **kwargs) -> "DsbmParams":
        """Construct, converting validation failures into BadParams."""
        try:
            return cls(**kwargs)
        except ValidationError as exc:
            raise BadParams(_first_error(exc)) from exc

    @property
    def k(self) -> int:
        return len(self.sizes)

    @property
    def n(self) -> int:
        return int(sum(self.sizes))

    def planted(self) -> np.ndarray:
        """Community id per vertex, community 0 first."""
        return np.repeat(np.arange(self.k), self.sizes)


class MetaGraph(BaseModel):
    """Community-level orientation graph; (a, b) means cross edges point a->b w.p. 1-eta."""

    model_config = ConfigDict(frozen=True)

    k: PositiveInt
    oriented_pairs: List[Tuple[int, int]] = Field(default_factory=list)

    @model_validator(mode="after")
    def _check_pairs(self) -> "MetaGraph":
        seen: set[frozenset[int]] = set()
        for a, b in self.oriented_pairs:
            if a == b:
                raise ValueError(f"meta-edge ({a},{b}) is a self-loop")
            if not (0 <= a < self.k and 0 <= b < self.k):
                raise ValueError(f"meta-edge ({a},{b}) outside 0..{self.k - 1}")
            key = frozenset((a, b))
            if key in seen:
                raise ValueError(f"community pair {{{a},{b}}} oriented more than once")
            seen.add(key)
        return self

    @classmethod
    def checked(cls, **kwargs) -> "MetaGraph":
        try:
            return cls(**kwargs)
        except ValidationError as exc:
            raise BadParams(_first_error(exc)) from exc

    def orientation(self, eta: float) -> np.ndarray:
        """F[a, b] = probability that a cross edge between a and b points a->b."""
        f = np.full((self.k, self.k), 0.5)
        for a, b in self.oriented_pairs:
            f[a, b] = 1.0 - eta
            f[b, a] = eta
        return f


def _first_error(exc: ValidationError) -> str:
    err = exc.errors()[0]
    loc = ".".join(str(x) for x in err.get("loc", ())) or "params"
    return f"{loc}: {err.get('msg', 'invalid value')}"


def _cycle(k: int) -> List[Tuple[int, int]]:
    return [(i, (i + 1) % k) for i in range(k)]


META_PRESETS = {
    "path3": MetaGraph(k=3, oriented_pairs=[(0, 1), (1, 2)]),
    "diamond4": MetaGraph(k=4, oriented_pairs=[(0, 1), (0, 2), (1, 3), (2, 3)]),
    "star4": MetaGraph(k=4, oriented_pairs=[(0, 1), (0, 2), (0, 3)]),
    "cycle3": MetaGraph(k=3, oriented_pairs=_cycle(3)),
    "cycle5": MetaGraph(k=5, oriented_pairs=_cycle(5)),
    "hierarchy5": MetaGraph(k=5, oriented_pairs=[(i, j) for i in range(5) for j in range(i + 1, 5)]),
}


def meta_preset(name: str) -> Optional[MetaGraph]:
    return META_PRESETS.get(name)
