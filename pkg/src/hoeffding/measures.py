"""Mixing measures of exchangeable binary sequences, in exact arithmetic.

An infinite exchangeable sequence of {0,1}-valued observations is a mixture
of i.i.d. Bernoulli sequences; the mixing law on [0,1] determines everything.
:class:`DeFinettiMeasure` carries that law in one of three representations:

``BETA``
    Beta(alpha, beta) with positive rational parameters; moments come from
    the rational product ``mu_n = prod_{i<n} (alpha+i)/(alpha+beta+i)``.
``DISCRETE``
    A finite mixture of point masses at rational locations in [0,1];
    a single atom gives an i.i.d. sequence.
``MOMENTS``
    A truncated moment sequence ``mu_0..mu_M`` validated for complete
    monotonicity; every operation fails loudly past order ``M``.

All derived quantities reduce to signed forward differences of the moment
sequence, so the three kinds share one code path:

    P_n(j zeros) = sum_{i=0}^{j} (-1)^i C(j,i) mu_{n-j+i}

which is the probability that a fixed length-n configuration contains
exactly j zeros. BETA and DISCRETE keep per-kind closed forms as internal
cross-checks. Values are immutable and every operation is a pure function,
so instances are safe to share across threads.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Optional

from .errors import (
    DeterministicMeasureError,
    IndexRangeError,
    InvalidMomentSequenceError,
    OrderExceededError,
    ParseError,
)
from .rationals import binom, format_rational, parse_rational


class MeasureKind(Enum):
    BETA = "beta"
    DISCRETE = "discrete"
    MOMENTS = "moments"


@dataclass(frozen=True)
class DeFinettiMeasure:
    """The mixing law of an exchangeable binary sequence.

    Build instances through :meth:`beta`, :meth:`discrete`, :meth:`dirac`,
    :meth:`from_moments` or :meth:`truncated_uniform` rather than the raw
    constructor; the factories validate their inputs.
    """

    kind: MeasureKind
    beta_alpha: Optional[Fraction] = None
    beta_beta: Optional[Fraction] = None
    atoms: Optional[tuple[tuple[Fraction, Fraction], ...]] = None
    moment_values: Optional[tuple[Fraction, ...]] = None
    _moments: dict = field(default_factory=dict, compare=False, repr=False)
    _configs: dict = field(default_factory=dict, compare=False, repr=False)

    # -- factories -------------------------------------------------------

    @classmethod
    def beta(cls, alpha, beta) -> "DeFinettiMeasure":
        alpha, beta = Fraction(alpha), Fraction(beta)
        if alpha <= 0 or beta <= 0:
            raise ParseError("beta parameters must be positive")
        return cls(kind=MeasureKind.BETA, beta_alpha=alpha, beta_beta=beta)

    @classmethod
    def discrete(cls, atoms) -> "DeFinettiMeasure":
        """Finite mixture; atoms is a sequence of (location, weight) pairs."""
        parsed = tuple((Fraction(loc), Fraction(w)) for loc, w in atoms)
        if not parsed:
            raise ParseError("a discrete measure needs at least one atom")
        for loc, w in parsed:
            if not 0 <= loc <= 1:
                raise ParseError(f"atom location {format_rational(loc)} outside [0, 1]")
            if w <= 0:
                raise ParseError("atom weights must be positive")
        if sum(w for _, w in parsed) != 1:
            raise ParseError("atom weights must sum to 1")
        return cls(kind=MeasureKind.DISCRETE, atoms=parsed)

    @classmethod
    def dirac(cls, location) -> "DeFinettiMeasure":
        """Point mass at ``location``: the i.i.d. Bernoulli(location) sequence."""
        return cls.discrete([(Fraction(location), Fraction(1))])

    @classmethod
    def from_moments(cls, values) -> "DeFinettiMeasure":
        """Truncated moment sequence mu_0..mu_M, checked for complete monotonicity."""
        vals = tuple(Fraction(v) for v in values)
        if not vals:
            raise ParseError("a moment sequence needs at least mu_0")
        if vals[0] != 1:
            raise InvalidMomentSequenceError(0, 0)
        measure = cls(kind=MeasureKind.MOMENTS, moment_values=vals)
        order = len(vals) - 1
        for n in range(order + 1):
            for j in range(n + 1):
                if measure.config_probability(n, j) < 0:
                    raise InvalidMomentSequenceError(n, j)
        return measure

    @classmethod
    def truncated_uniform(cls, epsilon, order: int) -> "DeFinettiMeasure":
        """Uniform law on (0, epsilon) as its exact moments mu_n = eps^n/(n+1).

        The canonical example of a mixture that is neither i.i.d. nor Polya;
        represented as a MOMENTS measure truncated at the given order.
        """
        epsilon = Fraction(epsilon)
        if not 0 < epsilon <= 1:
            raise ParseError("epsilon must lie in (0, 1]")
        if order < 0:
            raise ParseError("order must be non-negative")
        return cls.from_moments([epsilon**n / (n + 1) for n in range(order + 1)])

    # -- structural helpers ----------------------------------------------

    @property
    def max_order(self) -> Optional[int]:
        """Largest usable moment order; None means unbounded."""
        if self.kind is MeasureKind.MOMENTS:
            return len(self.moment_values) - 1
        return None

    def _require_order(self, n: int) -> None:
        cap = self.max_order
        if cap is not None and n > cap:
            raise OrderExceededError(n, cap)

    def describe(self) -> str:
        """Stable one-line identification, used in report digests."""
        if self.kind is MeasureKind.BETA:
            return f"beta({format_rational(self.beta_alpha)},{format_rational(self.beta_beta)})"
        if self.kind is MeasureKind.DISCRETE:
            inner = ",".join(
                f"({format_rational(l)},{format_rational(w)})" for l, w in self.atoms
            )
            return f"discrete[{inner}]"
        vals = ",".join(format_rational(v) for v in self.moment_values)
        return f"moments[{vals}]"

    # -- moments and configuration probabilities -------------------------

    def moment(self, n: int) -> Fraction:
        """The n-th moment of the mixing law, exactly."""
        if n < 0:
            raise IndexRangeError("moment order must be non-negative")
        self._require_order(n)
        cached = self._moments.get(n)
        if cached is not None:
            return cached
        if self.kind is MeasureKind.BETA:
            value = Fraction(1)
            a, b = self.beta_alpha, self.beta_beta
            for i in range(n):
                value *= (a + i) / (a + b + i)
        elif self.kind is MeasureKind.DISCRETE:
            value = sum((w * loc**n for loc, w in self.atoms), Fraction(0))
        else:
            value = self.moment_values[n]
        self._moments[n] = value
        return value

    def config_probability(self, n: int, zeros: int) -> Fraction:
        """P(a fixed length-n configuration with the given zero count).

        Computed as the signed forward difference of the moment sequence,
        identically for all three kinds.
        """
        if n < 0 or not 0 <= zeros <= n:
            raise IndexRangeError(f"need 0 <= zeros <= n, got n={n} zeros={zeros}")
        key = (n, zeros)
        cached = self._configs.get(key)
        if cached is not None:
            return cached
        self._require_order(n)
        value = sum(
            ((-1) ** i * binom(zeros, i) * self.moment(n - zeros + i) for i in range(zeros + 1)),
            Fraction(0),
        )
        self._configs[key] = value
        return value

    def config_probability_direct(self, n: int, zeros: int) -> Fraction:
        """Per-kind closed form of the same probability (cross-check path).

        BETA integrates the configuration against the Beta density as a
        rational product; DISCRETE sums ``w * loc^(n-zeros) * (1-loc)^zeros``.
        MOMENTS has no closed form and falls back to the difference path.
        """
        if n < 0 or not 0 <= zeros <= n:
            raise IndexRangeError(f"need 0 <= zeros <= n, got n={n} zeros={zeros}")
        if self.kind is MeasureKind.BETA:
            a, b = self.beta_alpha, self.beta_beta
            value = Fraction(1)
            for i in range(n - zeros):
                value *= a + i
            for i in range(zeros):
                value *= b + i
            for i in range(n):
                value /= a + b + i
            return value
        if self.kind is MeasureKind.DISCRETE:
            return sum(
                (w * loc ** (n - zeros) * (1 - loc) ** zeros for loc, w in self.atoms),
                Fraction(0),
            )
        return self.config_probability(n, zeros)

    # -- conditional and predictive probabilities ------------------------

    def conditional_zero_count(self, n: int, v: int, a: int, b: int) -> Fraction:
        """P(b zeros among the first n+v | a zeros among the first n).

        Equals ``C(v, b-a) * P_{n+v}(b zeros) / P_n(a zeros)``.
        """
        if v < 1:
            raise IndexRangeError("v must be at least 1")
        if not 0 <= a <= n:
            raise IndexRangeError(f"need 0 <= a <= n, got n={n} a={a}")
        if not a <= b <= a + v:
            raise IndexRangeError(f"need a <= b <= a+v, got a={a} b={b} v={v}")
        denominator = self.config_probability(n, a)
        if denominator == 0:
            raise DeterministicMeasureError(
                f"conditioning event has probability zero (n={n}, zeros={a})"
            )
        return binom(v, b - a) * self.config_probability(n + v, b) / denominator

    def predictive_probability(self, n: int, p: int) -> Fraction:
        """P(the next observation is 1 | p zeros among the first n)."""
        if not 0 <= p <= n:
            raise IndexRangeError(f"need 0 <= p <= n, got n={n} p={p}")
        return self.conditional_zero_count(n, 1, p, p)

    def is_nondeterministic(self, n_max: int) -> bool:
        """True iff every configuration probability up to order n_max is positive.

        Equivalent to the mixing law's support not being contained in {0, 1},
        once n_max >= 2.
        """
        if n_max < 0:
            raise IndexRangeError("n_max must be non-negative")
        self._require_order(n_max)
        return all(
            self.config_probability(n, j) > 0
            for n in range(n_max + 1)
            for j in range(n + 1)
        )

    def require_nondeterministic(self, n_max: int) -> None:
        if not self.is_nondeterministic(n_max):
            raise DeterministicMeasureError(
                f"measure is deterministic at order {n_max}: {self.describe()}"
            )


def parse_measure_spec(document: str) -> DeFinettiMeasure:
    """Parse a JSON measure document.

    Accepted forms::

        {"type": "beta", "alpha": "3/2", "beta": "2"}
        {"type": "discrete", "atoms": [["1/3", "1/2"], ["2/3", "1/2"]]}
        {"type": "moments", "values": ["1", "1/4", "1/12", "1/32"]}
        {"type": "truncated_uniform", "epsilon": "1/2", "order": 12}

    Rationals are ``"p/q"`` or ``"p"`` text. Moment sequences are validated
    for complete monotonicity and rejected otherwise.
    """
    try:
        payload = json.loads(document)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from exc
    if not isinstance(payload, dict):
        raise ParseError("measure document must be a JSON object")
    kind = payload.get("type")
    if kind == "beta":
        _require_keys(payload, {"type", "alpha", "beta"})
        return DeFinettiMeasure.beta(
            parse_rational(payload["alpha"]), parse_rational(payload["beta"])
        )
    if kind == "discrete":
        _require_keys(payload, {"type", "atoms"})
        raw = payload["atoms"]
        if not isinstance(raw, list):
            raise ParseError("atoms must be a list of [location, weight] pairs")
        atoms = []
        for entry in raw:
            if not isinstance(entry, (list, tuple)) or len(entry) != 2:
                raise ParseError("each atom must be a [location, weight] pair")
            atoms.append((parse_rational(entry[0]), parse_rational(entry[1])))
        return DeFinettiMeasure.discrete(atoms)
    if kind == "moments":
        _require_keys(payload, {"type", "values"})
        raw = payload["values"]
        if not isinstance(raw, list) or not raw:
            raise ParseError("values must be a non-empty list of rationals")
        return DeFinettiMeasure.from_moments([parse_rational(v) for v in raw])
    if kind == "truncated_uniform":
        _require_keys(payload, {"type", "epsilon", "order"})
        order = payload["order"]
        if not isinstance(order, int) or isinstance(order, bool):
            raise ParseError("order must be an integer")
        return DeFinettiMeasure.truncated_uniform(parse_rational(payload["epsilon"]), order)
    raise ParseError(f"unknown measure type: {kind!r}")


def _require_keys(payload: dict, expected: set) -> None:
    extra = set(payload) - expected
    missing = expected - set(payload)
    if missing:
        raise ParseError(f"missing keys: {sorted(missing)}")
    if extra:
        raise ParseError(f"unexpected keys: {sorted(extra)}")
