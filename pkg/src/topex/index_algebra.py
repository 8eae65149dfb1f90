"""Sign strings over {+, -}: enumeration, parent/children maps, sign
partitions and the chart numbering of the expanding diagram.

A sign string ``s_0 s_1 ... s_n`` has step ``n``. Strings are ordered
lexicographically with ``+`` before ``-``, which is also plain ASCII order.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import NamedTuple

from .errors import DomainError, SizeLimitError, step_cap

PLUS = "+"
MINUS = "-"
_ALIASES = {"+": PLUS, "-": MINUS, "−": MINUS, "p": PLUS, "m": MINUS}


@dataclass(frozen=True, order=True)
class SignString:
    """An element of the index set of all sign words of length ``step + 1``."""

    signs: str

    def __post_init__(self):
        if not isinstance(self.signs, str) or not self.signs:
            raise DomainError("a sign string needs at least one sign")
        try:
            norm = "".join(_ALIASES[c] for c in self.signs)
        except KeyError as exc:
            raise DomainError(f"invalid sign {exc.args[0]!r} in {self.signs!r}") from None
        object.__setattr__(self, "signs", norm)

    @classmethod
    def parse(cls, text) -> "SignString":
        if isinstance(text, SignString):
            return text
        return cls(str(text).strip())

    @property
    def step(self) -> int:
        return len(self.signs) - 1

    def sign(self, i: int) -> int:
        """The i-th sign as +1 or -1."""
        return 1 if self.signs[i] == PLUS else -1

    def as_ints(self) -> tuple[int, ...]:
        return tuple(1 if c == PLUS else -1 for c in self.signs)

    def __len__(self):
        return len(self.signs)

    def __iter__(self):
        return iter(self.signs)

    def __str__(self):
        return self.signs


def _check_step(n, cap):
    limit = step_cap(cap)
    if n > limit:
        raise SizeLimitError(f"step {n} exceeds the enumeration cap {limit} (2^{n + 1} strings)")


def enumerate_lambda(n: int, cap: int | None = None) -> list[SignString]:
    """All ``2**(n+1)`` sign strings of step ``n`` in lexicographic order."""
    if n < 0:
        raise DomainError(f"step must be non-negative, got {n}")
    _check_step(n, cap)
    return [SignString("".join(p)) for p in itertools.product(PLUS + MINUS, repeat=n + 1)]


def parent(j: SignString) -> SignString:
    """Drop the last sign. Step-0 strings have no parent."""
    j = SignString.parse(j)
    if j.step < 1:
        raise DomainError(f"{j} has step 0 and no parent")
    return SignString(j.signs[:-1])


def children(j: SignString, cap: int | None = None) -> tuple[SignString, SignString]:
    """The two one-step extensions ``j+`` and ``j-``."""
    j = SignString.parse(j)
    _check_step(j.step + 1, cap)
    return SignString(j.signs + PLUS), SignString(j.signs + MINUS)


def sign_partition(j: SignString) -> tuple[frozenset[int], frozenset[int]]:
    """Index sets of the plus and minus positions of ``j``."""
    j = SignString.parse(j)
    plus = frozenset(i for i, c in enumerate(j.signs) if c == PLUS)
    minus = frozenset(i for i, c in enumerate(j.signs) if c == MINUS)
    return plus, minus


class ChartRef(NamedTuple):
    k: int
    primed: bool

    def __str__(self):
        return f"psi'_{self.k}" if self.primed else f"psi_{self.k}"


class MapToken(NamedTuple):
    """One factor of a chart composition: a local homeomorphism or a translation."""

    kind: str  # "phi" or "T"
    k: int

    def __str__(self):
        return f"φ_{self.k}" if self.kind == "phi" else f"T_{self.k}"

    def ascii(self) -> str:
        return f"phi_{self.k}" if self.kind == "phi" else f"T_{self.k}"


def chart_index(j: SignString) -> ChartRef:
    """Chart number ``k`` and primed flag of the multi-chart component for ``j``.

    ``k = 2**n + offset`` where ``offset`` reads ``s_0 ... s_{n-1}`` as binary
    digits (``+`` is 0, ``s_0`` most significant); the last sign selects the
    translated (primed) variant.
    """
    j = SignString.parse(j)
    n = j.step
    offset = 0
    for c in j.signs[:-1]:
        offset = 2 * offset + (c == MINUS)
    return ChartRef((1 << n) + offset, j.signs[-1] == MINUS)


def sign_string_for_chart(ref: ChartRef) -> SignString:
    """Inverse of :func:`chart_index`."""
    k, primed = ref
    if k < 1:
        raise DomainError(f"chart number must be positive, got {k}")
    n = k.bit_length() - 1
    offset = k - (1 << n)
    head = "".join(MINUS if (offset >> (n - 1 - i)) & 1 else PLUS for i in range(n))
    return SignString(head + (MINUS if primed else PLUS))


def chart_composition(j: SignString) -> list[MapToken]:
    """Symbolic factors of the chart map for ``j``, outermost first.

    ``composition(s_0..s_n) = [T_k if s_n is -] + [phi_k] + composition(s_0..s_{n-1})``
    with ``k = chart_index(j).k``.
    """
    j = SignString.parse(j)
    tokens: list[MapToken] = []
    for end in range(len(j), 0, -1):
        k, primed = chart_index(SignString(j.signs[:end]))
        if primed:
            tokens.append(MapToken("T", k))
        tokens.append(MapToken("phi", k))
    return tokens


def format_composition(tokens, ascii: bool = False) -> str:
    sep = "." if ascii else "∘"
    return sep.join(t.ascii() if ascii else str(t) for t in tokens)
