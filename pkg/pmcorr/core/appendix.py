"""The printed closed forms of the sixteen population-propagator elements p_ij(t).

Each element is stored as data rather than code so that a validation run can
evaluate it, compare it with S diag(ξ) S⁻¹ and mechanically search for the single
sign change that repairs a deviating element.

Symbols: a = X₁⁺, a_ = X₁⁻, y = Y₂⁺, y_ = Y₂⁻, X = X₁, Y = Y₂, S = X₁ + Y₂,
g = γ₀. Composite symbols such as "X-g" or "S-2g" stand for the printed
differences. The slot printed as Y₁⁻ in p₂₁ is read as Y₂⁻.
"""

from dataclasses import dataclass, replace
from typing import Dict, Iterator, Optional, Tuple, Union

import numpy as np

from .dissipator import RateSet

JOINERS = ("-", "+", "*")

PRETTY = {
    "a": "X1+",
    "a_": "X1-",
    "y": "Y2+",
    "y_": "Y2-",
    "X": "X1",
    "Y": "Y2",
    "S": "(X1+Y2)",
    "g": "γ0",
    "1": "1",
}


@dataclass(frozen=True)
class Exp:
    """e^{-t·rate} · factor."""

    rate: str
    factor: str

    def value(self, values: Dict[str, float], t: float) -> float:
        return float(np.exp(-t * values[self.rate]) * values[self.factor])

    def render(self) -> str:
        return f"e^(-t·{PRETTY[self.rate]})·{PRETTY[self.factor]}"


@dataclass(frozen=True)
class Pair:
    """Two exponentials combined by a joiner ('-', '+' or the juxtaposition '*')."""

    lead: Exp
    trail: Exp
    joiner: str = "-"

    def value(self, values: Dict[str, float], t: float) -> float:
        first, second = self.lead.value(values, t), self.trail.value(values, t)
        if self.joiner == "-":
            return first - second
        if self.joiner == "+":
            return first + second
        return first * second

    def render(self) -> str:
        joiner = " " if self.joiner == "*" else f" {self.joiner} "
        return f"({self.lead.render()}{joiner}{self.trail.render()})"


@dataclass(frozen=True)
class Term:
    """sign · Π factors · body / Π divisors; a missing body counts as 1."""

    sign: int
    factors: Tuple[str, ...] = ()
    body: Optional[Union[Exp, Pair]] = None
    divisors: Tuple[str, ...] = ()

    def value(self, values: Dict[str, float], t: float) -> float:
        result = float(self.sign)
        for name in self.factors:
            result *= values[name]
        if self.body is not None:
            result *= self.body.value(values, t)
        for name in self.divisors:
            result /= values[name]
        return result


@dataclass(frozen=True)
class Element:
    """Π prefactor / (X₁Y₂) · Σ terms."""

    prefactor: Tuple[str, ...]
    terms: Tuple[Term, ...]

    def value(self, values: Dict[str, float], t: float) -> float:
        scale = 1.0 / (values["X"] * values["Y"])
        for name in self.prefactor:
            scale *= values[name]
        return scale * sum(term.value(values, t) for term in self.terms)


def _pair(
    lead_rate: str, lead_factor: str, trail_rate: str, trail_factor: str, joiner: str = "-"
) -> Pair:
    return Pair(Exp(lead_rate, lead_factor), Exp(trail_rate, trail_factor), joiner)


# e^{-γ₀t}·R - e^{-tR}·γ₀ and its mirror e^{-tR}·γ₀ - e^{-γ₀t}·R.
def _fwd(rate: str) -> Pair:
    return _pair("g", rate, rate, "g")


def _rev(rate: str, joiner: str = "-") -> Pair:
    return _pair(rate, "g", "g", rate, joiner)


_BRACKET_12 = (
    Term(1, ("X", "Y", "S-2g"), Exp("g", "1"), ("X-g", "S-g", "g-Y")),
    Term(1, (), Exp("X", "g"), ("X-g",)),
    Term(1, (), Exp("Y", "g"), ("Y-g",)),
    Term(-1, (), Exp("S", "g"), ("S-g",)),
    Term(1),
)

_BRACKET_13 = (
    Term(-1, ("y",), _rev("X"), ("g-X",)),
    Term(1, ("y_",), _rev("Y"), ("g-Y",)),
    Term(1, ("y_",), _fwd("S"), ("g-S",)),
    Term(1, ("y",)),
)

_BRACKET_14 = (
    Term(-1, ("a",), _rev("Y"), ("g-Y",)),
    Term(1, ("a_",), _rev("X"), ("g-X",)),
    Term(1, ("a_",), _fwd("S"), ("g-S",)),
    Term(1, ("a",)),
)

_BRACKET_23 = (
    Term(1, ("a",), _rev("X"), ("g-X",)),
    Term(-1, ("a_",), _rev("Y"), ("g-Y",)),
    Term(1, ("a",), _fwd("S"), ("g-S",)),
    Term(1, ("a_",)),
)

# printed with the two exponentials juxtaposed in the second term
_BRACKET_24 = (
    Term(-1, ("y_",), _rev("X"), ("g-X",)),
    Term(1, ("y",), _rev("Y", joiner="*"), ("g-Y",)),
    Term(1, ("y",), _fwd("S"), ("g-S",)),
    Term(1, ("y_",)),
)


def _diagonal(fx: Tuple[str, str], fy: Tuple[str, str], fs: Tuple[str, str], const):
    return Element(
        (),
        (
            Term(1, fx, _fwd("X"), ("X-g",)),
            Term(1, fy, _fwd("Y"), ("Y-g",)),
            Term(1, fs, _fwd("S"), ("S-g",)),
            Term(1, const),
        ),
    )


PRINTED_TABLE: Dict[Tuple[int, int], Element] = {
    (1, 1): _diagonal(("a_", "y"), ("a", "y_"), ("a_", "y_"), ("a", "y")),
    (1, 2): Element(("a", "y"), _BRACKET_12),
    (1, 3): Element(("a",), _BRACKET_13),
    (1, 4): Element(("y",), _BRACKET_14),
    (2, 1): Element(("a_", "y_"), _BRACKET_12),
    (2, 2): _diagonal(("a", "y_"), ("a_", "y"), ("a", "y"), ("a_", "y_")),
    (2, 3): Element(("y_",), _BRACKET_23),
    (2, 4): Element(("a_",), _BRACKET_24),
    (3, 1): Element(("a_",), _BRACKET_13),
    (3, 2): Element(("y",), _BRACKET_23),
    (3, 3): _diagonal(("a", "y"), ("a_", "y_"), ("a", "y_"), ("a_", "y")),
    (3, 4): Element(("a_", "y"), _BRACKET_12),
    (4, 1): Element(("y_",), _BRACKET_14),
    (4, 2): Element(("a",), _BRACKET_24),
    (4, 3): Element(("a", "y_"), _BRACKET_12),
    (4, 4): _diagonal(("a_", "y_"), ("a", "y"), ("a_", "y"), ("a", "y_")),
}


def symbol_values(r: RateSet, gamma0: float) -> Dict[str, float]:
    """Numeric value of every symbol the printed table uses."""

    total = r.X1 + r.Y2
    g = gamma0
    return {
        "a": r.X1p,
        "a_": r.X1m,
        "y": r.Y2p,
        "y_": r.Y2m,
        "X": r.X1,
        "Y": r.Y2,
        "S": total,
        "g": g,
        "1": 1.0,
        "X-g": r.X1 - g,
        "g-X": g - r.X1,
        "Y-g": r.Y2 - g,
        "g-Y": g - r.Y2,
        "S-g": total - g,
        "g-S": g - total,
        "S-2g": total - 2.0 * g,
    }


def evaluate_element(element: Element, r: RateSet, gamma0: float, t: float) -> float:
    return element.value(symbol_values(r, gamma0), t)


def evaluate_table(
    r: RateSet,
    gamma0: float,
    t: float,
    table: Optional[Dict[Tuple[int, int], Element]] = None,
) -> np.ndarray:
    """All sixteen printed elements at time t as a 4x4 matrix."""

    values = symbol_values(r, gamma0)
    table = PRINTED_TABLE if table is None else table
    result = np.empty((4, 4))
    for (i, j), element in table.items():
        result[i - 1, j - 1] = element.value(values, t)
    return result


def single_sign_repairs(element: Element) -> Iterator[Tuple[str, Element]]:
    """Every variant of `element` differing by one joiner or one term sign.

    Yields:
        Tuple[str, Element]: a readable description of the change and the variant.
    """

    for index, term in enumerate(element.terms):
        if isinstance(term.body, Pair):
            for joiner in JOINERS:
                if joiner == term.body.joiner:
                    continue
                body = replace(term.body, joiner=joiner)
                head, tail = element.terms[:index], element.terms[index + 1 :]
                terms = head + (replace(term, body=body),) + tail
                description = (
                    f"term {index + 1}: use '{joiner}' instead of "
                    + f"'{term.body.joiner}' in {term.body.render()}"
                )
                yield description, replace(element, terms=terms)

    for index, term in enumerate(element.terms):
        head, tail = element.terms[:index], element.terms[index + 1 :]
        terms = head + (replace(term, sign=-term.sign),) + tail
        yield f"term {index + 1}: flip its overall sign", replace(element, terms=terms)
