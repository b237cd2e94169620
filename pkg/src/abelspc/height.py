"""Extended natural numbers ``0, 1, 2, ..., inf`` for chromatic types and heights.

``inf`` is a genuine symbolic value: it absorbs addition, sits above every
finite value, and ``inf > inf`` is false.

>>> INF + 3 == INF
True
>>> Height(2) < INF, INF > INF
(True, False)
>>> Height(5).monus(7), INF.monus(7)
(Height(0), Height(inf))
"""

from __future__ import annotations

import math
from functools import total_ordering

from .errors import InvalidInputError


@total_ordering
class Height:
    __slots__ = ("_value",)

    def __init__(self, value=None):
        # None means infinity
        if value is not None:
            if isinstance(value, bool) or not isinstance(value, int):
                raise InvalidInputError(f"height must be a natural number or infinity, got {value!r}")
            if value < 0:
                raise InvalidInputError(f"height must be >= 0, got {value}")
        self._value = value

    @classmethod
    def coerce(cls, x) -> "Height":
        if isinstance(x, Height):
            return x
        if x is None or (isinstance(x, float) and math.isinf(x) and x > 0):
            return INF
        if isinstance(x, str):
            s = x.strip().lower()
            if s in ("inf", "infinity", "∞"):
                return INF
            try:
                return cls(int(s))
            except ValueError:
                raise InvalidInputError(f"cannot parse height {x!r}")
        if isinstance(x, float) and x.is_integer():
            return cls(int(x))
        return cls(x)

    @property
    def value(self):
        """The finite value, or ``None`` for infinity."""
        return self._value

    @property
    def is_finite(self) -> bool:
        return self._value is not None

    def __eq__(self, other):
        try:
            other = Height.coerce(other)
        except (InvalidInputError, TypeError):
            return NotImplemented
        return self._value == other._value

    def __lt__(self, other):
        other = Height.coerce(other)
        if self._value is None:
            return False
        if other._value is None:
            return True
        return self._value < other._value

    def __hash__(self):
        return hash(("Height", self._value))

    def __add__(self, other):
        other = Height.coerce(other)
        if self._value is None or other._value is None:
            return INF
        return Height(self._value + other._value)

    __radd__ = __add__

    def monus(self, k) -> "Height":
        """Truncated subtraction of a finite amount: ``max(self - k, 0)``; ``inf`` stays ``inf``."""
        k = Height.coerce(k)
        if not k.is_finite:
            raise InvalidInputError("cannot subtract infinity")
        if self._value is None:
            return INF
        return Height(max(self._value - k._value, 0))

    def sort_key(self):
        return (1, 0) if self._value is None else (0, self._value)

    def to_json(self):
        return "inf" if self._value is None else self._value

    def __str__(self):
        return "inf" if self._value is None else str(self._value)

    def __repr__(self):
        return f"Height({self})"


INF = Height(None)


def height_range(cap: int, start: int = 1) -> list[Height]:
    """``start, ..., cap`` followed by ``inf``: the truncation used for enumeration."""
    if isinstance(cap, Height):
        if not cap.is_finite:
            raise InvalidInputError("cap must be finite")
        cap = cap.value
    if not isinstance(cap, int) or cap < start:
        raise InvalidInputError(f"cap must be an integer >= {start}, got {cap!r}")
    return [Height(n) for n in range(start, cap + 1)] + [INF]
