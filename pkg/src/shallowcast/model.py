"""Core data model: exact rates, network descriptions, rate matrices and overlay trees.

All bandwidths and stream rates are non-negative rationals held as
``fractions.Fraction``, so every comparison and every feasibility boundary is
exact; no floating point appears anywhere in the model. An unbounded downlink
is represented by ``None``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Union

Rate = Fraction
# Downlink capacities (and the optimal scale factor) may be unbounded.
OptionalRate = Optional[Fraction]

RateLike = Union[Fraction, int, str]

_RATE_FORMS = re.compile(r"^(?:\d+|\d+/\d+|\d+\.\d+)$")


class ModelError(ValueError):
    """Invalid rate text or malformed network description."""


def parse_rate(text: str) -> Fraction:
    """Parse an exact non-negative rate from integer, "a/b" or finite-decimal text.

    Decimals convert exactly ("0.25" -> 1/4). Negative values, zero
    denominators and anything outside the three accepted forms raise
    :class:`ModelError`.
    """
    s = text.strip()
    if not _RATE_FORMS.match(s):
        raise ModelError(f"malformed rate {text!r}: expected integer, a/b fraction or finite decimal >= 0")
    if "/" in s:
        num_text, den_text = s.split("/")
        den = int(den_text)
        if den == 0:
            raise ModelError(f"malformed rate {text!r}: zero denominator")
        return Fraction(int(num_text), den)
    return Fraction(s)


def format_rate(value: OptionalRate) -> str:
    """Render a rate canonically: "a" for integers, "a/b" otherwise, "unbounded" for None."""
    if value is None:
        return "unbounded"
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def as_rate(value: RateLike) -> Fraction:
    """Coerce an int/str/Fraction into a canonical non-negative Fraction."""
    if isinstance(value, bool):
        raise ModelError(f"invalid rate {value!r}")
    if isinstance(value, Fraction):
        rate = value
    elif isinstance(value, int):
        rate = Fraction(value)
    elif isinstance(value, str):
        rate = parse_rate(value)
    else:
        raise ModelError(f"invalid rate {value!r}: expected int, str or Fraction")
    if rate < 0:
        raise ModelError(f"invalid rate {value!r}: must be non-negative")
    return rate


def _rate_vector(values: Iterable[RateLike]) -> tuple[Fraction, ...]:
    return tuple(as_rate(v) for v in values)


@dataclass(frozen=True)
class NetworkSpec:
    """The n sites with their uplink/downlink capacities and client stream rates.

    Site identity is the dense index into the three vectors; this index order
    is also the iteration order of the rate-assignment algorithm, so two specs
    with permuted sites are distinct inputs. A ``None`` downlink entry means
    the site's receive capacity is unbounded.
    """

    uplink: tuple[Fraction, ...]
    downlink: tuple[OptionalRate, ...]
    rates: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "uplink", _rate_vector(self.uplink))
        object.__setattr__(
            self,
            "downlink",
            tuple(None if d is None else as_rate(d) for d in self.downlink),
        )
        object.__setattr__(self, "rates", _rate_vector(self.rates))
        n = len(self.uplink)
        if n == 0:
            raise ModelError("network needs at least one site")
        if len(self.downlink) != n or len(self.rates) != n:
            raise ModelError(
                f"vector length mismatch: {n} uplinks, "
                f"{len(self.downlink)} downlinks, {len(self.rates)} rates"
            )

    @property
    def n(self) -> int:
        return len(self.uplink)

    @property
    def total_rate(self) -> Fraction:
        return sum(self.rates, Fraction(0))

    def peer_rate_sum(self, site: int) -> Fraction:
        """Total rate a site must receive: every stream except its own."""
        return self.total_rate - self.rates[site]

    def scaled(self, factor: Fraction) -> "NetworkSpec":
        """Same network with every client stream rate multiplied by ``factor``."""
        if factor < 0:
            raise ModelError("scale factor must be non-negative")
        return NetworkSpec(
            uplink=self.uplink,
            downlink=self.downlink,
            rates=tuple(r * factor for r in self.rates),
        )


def validate_spec(spec: NetworkSpec) -> NetworkSpec:
    """Return ``spec`` with all invariants re-checked (construction already enforces them)."""
    return NetworkSpec(uplink=spec.uplink, downlink=spec.downlink, rates=spec.rates)


@dataclass(frozen=True)
class SubstreamMatrix:
    """n x n matrix of sub-stream rates; entry (i, j) is the slice of stream i relayed via j.

    Diagonal entries are broadcast directly by their source.
    """

    rows: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self) -> None:
        rows = tuple(_rate_vector(row) for row in self.rows)
        object.__setattr__(self, "rows", rows)
        n = len(rows)
        if n == 0:
            raise ModelError("matrix needs at least one row")
        for row in rows:
            if len(row) != n:
                raise ModelError(f"matrix is not square: {n} rows, row of length {len(row)}")

    @property
    def n(self) -> int:
        return len(self.rows)

    def entry(self, i: int, j: int) -> Fraction:
        return self.rows[i][j]

    def row_sum(self, i: int) -> Fraction:
        return sum(self.rows[i], Fraction(0))


@dataclass(frozen=True)
class OverlayTree:
    """One broadcast tree carrying one sub-stream at a fixed rate.

    Without a relay the source fans out directly to ``leaves`` (height 1);
    with a relay the source sends one copy to the relay, which fans out to
    ``leaves`` (height 2). Trees taller than that are never built.
    """

    source: int
    relay: Optional[int]
    leaves: tuple[int, ...]
    rate: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "leaves", tuple(self.leaves))
        object.__setattr__(self, "rate", as_rate(self.rate))
        if self.source in self.leaves:
            raise ModelError("tree source cannot be a leaf")
        if self.relay is not None:
            if self.relay == self.source:
                raise ModelError("tree relay cannot be the source")
            if self.relay in self.leaves:
                raise ModelError("tree relay cannot be a leaf")
        if len(set(self.leaves)) != len(self.leaves):
            raise ModelError("duplicate leaf")

    @property
    def height(self) -> int:
        if self.relay is not None:
            return 2
        return 1 if self.leaves else 0

    @property
    def recipients(self) -> tuple[int, ...]:
        """Every site that receives this sub-stream (relay first, then leaves)."""
        if self.relay is None:
            return self.leaves
        return (self.relay, *self.leaves)

    def children_of(self, site: int) -> int:
        """Number of copies ``site`` transmits per unit of this tree's stream."""
        if site == self.source:
            return 1 if self.relay is not None else len(self.leaves)
        if site == self.relay:
            return len(self.leaves)
        return 0
