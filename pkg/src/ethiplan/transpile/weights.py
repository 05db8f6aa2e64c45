"""Significance-rank to penalty-weight mapping.

weight(r) = scale * base^(r-1). With the defaults (scale 10, base 100)
fewer than 100 firings at rank r can never outweigh one firing at rank
r+1, and a rank-1 penalty dominates unit base costs.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import ValidationError

MIN_RANK = 1
MAX_RANK = 5


@dataclass(frozen=True)
class WeightScheme:
    scale: int = 10
    base: int = 100

    def __post_init__(self):
        if self.scale < 1:
            raise ValidationError("weight scale must be a positive integer")
        if self.base < 2:
            raise ValidationError("weight base must be at least 2")
        if self.weight(MAX_RANK) >= 2**63:
            raise ValidationError("weights must fit in 64-bit signed integers")

    def weight(self, rank: int) -> int:
        if not MIN_RANK <= rank <= MAX_RANK:
            raise ValidationError(
                f"significance rank {rank} outside [{MIN_RANK},{MAX_RANK}]"
            )
        return self.scale * self.base ** (rank - 1)


DEFAULT_SCHEME = WeightScheme()


def weight(scheme: WeightScheme, rank: int) -> int:
    return scheme.weight(rank)
