"""Proving algorithms with prescribed behavior.

A proving algorithm is a frozen challenge -> response table; its success
fraction is exactly measurable because the table is total over the
challenge space.  Corruption specs describe how a table deviates from
honest behavior: a count of randomly misanswered challenges, responses
moved toward the nearest other response codeword (the worst case for the
extractor), zeroed storage blocks, or a pre-freeze redistribution of
storage among colluding provers.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

from .field import derived_rng
from .por import PorScheme, ResponseCode, build_response_code, measure_success

MODES = ("honest", "random", "targeted", "delete", "redistribute")


@dataclass(frozen=True)
class CorruptionSpec:
    """How a prover's table deviates from honest responses.

    random/targeted corrupt exactly k challenge entries; delete zeroes the
    listed storage blocks and recomputes responses; redistribute keeps only
    the retained challenge positions, answering the rest with pinned fill
    values or random wrong ones.
    """

    mode: str = "honest"
    k: int = 0
    blocks: tuple[int, ...] = ()
    retain: tuple[int, ...] | None = None
    fill: dict = field(default_factory=dict)
    seed: str | int = 0

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"unknown corruption mode {self.mode!r}")
        if self.k < 0:
            raise ValueError("corruption count k must be >= 0")


class ProvingAlgorithm:
    """Frozen deterministic challenge -> response table."""

    def __init__(self, scheme: PorScheme, verification_key):
        self._scheme = scheme
        self._key = verification_key
        self._table: dict = {}
        self._frozen = False
        self._succ: Fraction | None = None

    def set_response(self, challenge, response) -> None:
        if self._frozen:
            raise ValueError("proving algorithm is frozen")
        self._table[challenge] = response

    def freeze(self) -> None:
        self._frozen = True

    @property
    def frozen(self) -> bool:
        return self._frozen

    def respond(self, challenge):
        return self._table[challenge]

    @property
    def measured_succ(self) -> Fraction:
        """Exact accept fraction under the key the table was built against."""
        if self._succ is None:
            self._succ = measure_success(self._scheme, self, self._key)
        return self._succ

    def table_to_json(self) -> list:
        scheme = self._scheme
        return [
            {
                "challenge": scheme.challenge_to_json(c),
                "response": scheme.response_to_json(r),
            }
            for c, r in ((c, self._table[c]) for c in scheme.challenges())
        ]


def _honest_table(scheme: PorScheme, storage) -> dict:
    return {c: scheme.respond(storage, c) for c in scheme.challenges()}


def _nearest_other_vector(rc: ResponseCode, honest_vector):
    """Closest distinct response vector, ties to lexicographically smallest
    encoded message."""
    best = None
    for encoded, vector in zip(rc.encoded, rc.vectors):
        if vector == honest_vector:
            continue
        d = sum(1 for a, b in zip(vector, honest_vector) if a != b)
        if best is None or d < best[0] or (d == best[0] and encoded < best[1]):
            best = (d, encoded, vector)
    if best is None:
        raise ValueError("no distinct codeword to target")
    return best[2]


def make_prover(
    storage,
    spec: CorruptionSpec,
    scheme: PorScheme,
    verification_key,
    response_code: ResponseCode | None = None,
) -> ProvingAlgorithm:
    """Build and freeze a proving algorithm from stored data and a spec."""
    challenges = scheme.challenges()
    gamma = len(challenges)
    if spec.mode in ("random", "targeted") and spec.k > gamma:
        raise ValueError(f"corruption count {spec.k} exceeds gamma {gamma}")
    rng = derived_rng(spec.seed, "adversary", spec.mode)
    prover = ProvingAlgorithm(scheme, verification_key)

    if spec.mode == "honest":
        table = _honest_table(scheme, storage)

    elif spec.mode == "random":
        table = _honest_table(scheme, storage)
        for c in sorted_sample(rng, challenges, spec.k):
            table[c] = scheme.corrupt_response(table[c], c, rng)

    elif spec.mode == "targeted":
        table = _honest_table(scheme, storage)
        rc = response_code if response_code is not None else build_response_code(scheme)
        honest_vector = tuple(table[c] for c in challenges)
        target = _nearest_other_vector(rc, honest_vector)
        moved = 0
        for c, honest_r, target_r in zip(challenges, honest_vector, target):
            if moved >= spec.k:
                break
            if honest_r != target_r:
                table[c] = target_r
                moved += 1

    elif spec.mode == "delete":
        table = _honest_table(scheme, _zero_blocks(storage, spec.blocks))

    elif spec.mode == "redistribute":
        retained = set(spec.retain if spec.retain is not None else challenges)
        table = {}
        honest = _honest_table(scheme, storage)
        for c in challenges:
            if c in retained:
                table[c] = honest[c]
            elif c in spec.fill:
                table[c] = spec.fill[c]
            else:
                table[c] = scheme.corrupt_response(honest[c], c, rng)

    else:  # pragma: no cover - guarded by CorruptionSpec
        raise ValueError(spec.mode)

    for c in challenges:
        prover.set_response(c, table[c])
    prover.freeze()
    return prover


def sorted_sample(rng: random.Random, population, k: int) -> list:
    """Deterministic k-subset sample, returned in population order."""
    chosen = set(rng.sample(range(len(population)), k))
    return [c for i, c in enumerate(population) if i in chosen]


def _zero_blocks(storage, blocks):
    """Storage with the listed 1-based blocks zeroed; tags are untouched."""
    blocks = set(blocks)
    if isinstance(storage, tuple) and len(storage) == 2 and isinstance(storage[0], tuple):
        data, tags = storage
        zeroed = tuple(0 if j + 1 in blocks else v for j, v in enumerate(data))
        return (zeroed, tags)
    return tuple(0 if j + 1 in blocks else v for j, v in enumerate(storage))


def collude_redistribute(plan: dict, rho: int, gamma: int, seed=0) -> dict[int, CorruptionSpec]:
    """Per-prover corruption specs realizing a collective storage plan.

    The plan maps prover indices to {"retain": positions, "fill":
    {position: response}}; provers absent from the plan stay honest.
    Redistribution reallocates what each colluder keeps before proving
    algorithms are frozen; freshness is enforced by the system builder,
    which refuses to build tables twice.
    """
    specs: dict[int, CorruptionSpec] = {}
    for index, entry in plan.items():
        index = int(index)
        if not 1 <= index <= rho:
            raise ValueError(f"plan index {index} outside 1..{rho}")
        retain = tuple(sorted(int(p) for p in entry.get("retain", ())))
        for p in retain:
            if not 1 <= p <= gamma:
                raise ValueError(f"retained position {p} outside 1..{gamma}")
        fill = {int(p): v for p, v in entry.get("fill", {}).items()}
        for p in fill:
            if p in retain:
                raise ValueError(f"fill position {p} is also retained")
            if not 1 <= p <= gamma:
                raise ValueError(f"fill position {p} outside 1..{gamma}")
        specs[index] = CorruptionSpec(
            mode="redistribute",
            retain=retain,
            fill=fill,
            seed=f"{seed}:redistribute:{index}",
        )
    return specs
