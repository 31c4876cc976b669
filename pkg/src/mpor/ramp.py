"""Ramp-scheme share distribution over prime fields.

A (tau1, tau2, rho) ramp scheme splits a secret block of s field elements
into rho shares so that any tau2 shares reconstruct the block exactly while
tau1 or fewer shares carry no information at all.  Coalitions of
intermediate size may learn partial linear relations, which
``leakage_probe`` measures exactly by enumerating the coin space.

Two instances are provided:

* the polynomial instance, where the secret occupies the low-order
  coefficients of a random polynomial of degree < tau2 and share i is the
  evaluation at point i (the replication scheme is the tau1=0, tau2=1
  special case), and
* a generic instance built from any linear code given by a standard-form
  generator matrix, where a uniform codeword is drawn whose leading s
  symbols equal the secret and the remaining symbols become the shares.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass

from .field import FieldElement, FieldModulus, Polynomial, poly_interpolate

COIN_ENUMERATION_LIMIT = 10**7


@dataclass(frozen=True)
class RampParams:
    """Threshold parameters of a ramp scheme.

    For the polynomial instance the secret length is s = tau2 - tau1 and the
    shares live at the nonzero evaluation points 1..rho, which requires
    q > rho.  Those two constraints are checked by
    ``require_polynomial_instance`` so that code-based instances with other
    parameter relationships can still carry a RampParams.
    """

    tau1: int
    tau2: int
    rho: int
    s: int
    modulus: FieldModulus

    def __post_init__(self):
        if self.tau1 < 0:
            raise ValueError("tau1 must be >= 0")
        if not self.tau1 < self.tau2:
            raise ValueError("tau1 < tau2 required")
        if not self.tau2 <= self.rho:
            raise ValueError("tau2 <= rho required")
        if self.s < 1:
            raise ValueError("secret length s must be >= 1")

    def require_polynomial_instance(self) -> None:
        if self.s != self.tau2 - self.tau1:
            raise ValueError("polynomial instance requires s = tau2 - tau1")
        if self.modulus.q <= self.rho:
            raise ValueError(
                f"q > rho required for {self.rho} distinct nonzero share points"
            )

    @classmethod
    def reed_solomon(cls, tau1: int, tau2: int, rho: int, modulus: FieldModulus) -> RampParams:
        params = cls(tau1, tau2, rho, tau2 - tau1, modulus)
        params.require_polynomial_instance()
        return params

    @classmethod
    def replication(cls, rho: int, modulus: FieldModulus) -> RampParams:
        """The (0, 1, rho) scheme: every share equals the secret."""
        return cls.reed_solomon(0, 1, rho, modulus)


@dataclass(frozen=True)
class Share:
    """Share index 1..rho with one value per message block."""

    index: int
    value: tuple[FieldElement, ...]


@dataclass(frozen=True)
class ShareVector:
    params: RampParams
    shares: tuple[Share, ...]

    def __post_init__(self):
        indices = [sh.index for sh in self.shares]
        if len(set(indices)) != len(indices):
            raise ValueError("duplicate share indices")
        for i in indices:
            if not 1 <= i <= self.params.rho:
                raise ValueError(f"share index {i} outside 1..{self.params.rho}")

    def subset(self, indices) -> ShareVector:
        wanted = set(indices)
        picked = tuple(sh for sh in self.shares if sh.index in wanted)
        if len(picked) != len(wanted):
            raise ValueError("requested indices missing from share vector")
        return ShareVector(self.params, picked)

    def to_json(self) -> dict:
        return {
            "params": {
                "tau1": self.params.tau1,
                "tau2": self.params.tau2,
                "rho": self.params.rho,
                "s": self.params.s,
                "q": self.params.modulus.q,
            },
            "shares": [
                {"index": sh.index, "value": [v.to_json() for v in sh.value]}
                for sh in self.shares
            ],
        }

    @staticmethod
    def from_json(data: dict) -> ShareVector:
        p = data["params"]
        modulus = FieldModulus(p["q"])
        params = RampParams(p["tau1"], p["tau2"], p["rho"], p["s"], modulus)
        shares = tuple(
            Share(item["index"], tuple(modulus.element(int(v)) for v in item["value"]))
            for item in data["shares"]
        )
        return ShareVector(params, shares)


def _normalize_coins(modulus: FieldModulus, coins, expected: int, rng) -> tuple[FieldElement, ...]:
    if coins is not None:
        coins = tuple(
            c if isinstance(c, FieldElement) else modulus.element(int(c)) for c in coins
        )
        if len(coins) != expected:
            raise ValueError(f"expected {expected} coins, got {len(coins)}")
        return coins
    if expected == 0:
        return ()
    if rng is None:
        raise ValueError("rng required when coins are not supplied")
    return tuple(modulus.random_element(rng) for _ in range(expected))


def share_gen(
    params: RampParams,
    secret,
    rng: random.Random | None = None,
    coins=None,
) -> ShareVector:
    """Shares of a single secret block of s field elements.

    The secret fills coefficients a_0..a_{s-1} and tau1 fresh uniform
    coefficients fill a_s..a_{tau2-1}; share i is the polynomial evaluated
    at point i.  Explicit coins override the rng for pinned test vectors.
    """
    params.require_polynomial_instance()
    secret = tuple(secret)
    if len(secret) != params.s:
        raise ValueError(f"secret must have length {params.s}, got {len(secret)}")
    modulus = params.modulus
    for v in secret:
        if v.modulus != modulus:
            raise ValueError("secret element modulus does not match params")
    coins = _normalize_coins(modulus, coins, params.tau1, rng)
    f = Polynomial.from_elements(secret + coins)
    shares = tuple(
        Share(i, (f(modulus.element(i)),)) for i in range(1, params.rho + 1)
    )
    return ShareVector(params, shares)


def share_gen_blocks(
    params: RampParams,
    message,
    rng: random.Random | None = None,
    coins_per_block=None,
) -> ShareVector:
    """Blockwise sharing of a message of block_count * s field elements.

    Each block is shared independently with fresh coins; share i carries one
    value per block.
    """
    message = tuple(message)
    if not message or len(message) % params.s != 0:
        raise ValueError(
            f"message length {len(message)} is not a positive multiple of s={params.s}"
        )
    block_count = len(message) // params.s
    if coins_per_block is not None and len(coins_per_block) != block_count:
        raise ValueError("coins_per_block must supply coins for every block")
    per_block = []
    for b in range(block_count):
        block = message[b * params.s : (b + 1) * params.s]
        coins = coins_per_block[b] if coins_per_block is not None else None
        per_block.append(share_gen(params, block, rng=rng, coins=coins))
    shares = tuple(
        Share(i, tuple(sv.shares[i - 1].value[0] for sv in per_block))
        for i in range(1, params.rho + 1)
    )
    return ShareVector(params, shares)


def reconstruct(params: RampParams, subset: ShareVector) -> tuple[FieldElement, ...]:
    """Exact secret from any tau2 or more shares.

    With more than tau2 shares the tau2 lowest indices are used; honest
    shares give the same answer for every admissible subset.  Multi-block
    share vectors are reconstructed blockwise and the blocks concatenated.
    """
    params.require_polynomial_instance()
    if len(subset.shares) < params.tau2:
        raise ValueError(
            f"insufficient shares: need {params.tau2}, got {len(subset.shares)}"
        )
    modulus = params.modulus
    picked = sorted(subset.shares, key=lambda sh: sh.index)[: params.tau2]
    block_count = len(picked[0].value)
    secret: list[FieldElement] = []
    for b in range(block_count):
        points = [(modulus.element(sh.index), sh.value[b]) for sh in picked]
        f = poly_interpolate(points)
        secret.extend(f.coefficient(i, modulus) for i in range(params.s))
    return tuple(secret)


@dataclass(frozen=True)
class DistributionComparison:
    """Exact coalition-view distributions under two secrets."""

    coalition: tuple[int, ...]
    identical: bool
    distribution_a: dict
    distribution_b: dict


def leakage_probe(
    params: RampParams,
    coalition,
    secret_pair,
    code: LinearCodeSpec | None = None,
) -> DistributionComparison:
    """Exact joint distribution of a coalition's shares under two secrets.

    Enumerates every choice of random coefficients, so the comparison is a
    statement about the scheme itself, not a sampled estimate.  Coalitions
    of size <= tau1 must always compare identical.
    """
    coalition = tuple(sorted(set(coalition)))
    for i in coalition:
        if not 1 <= i <= params.rho:
            raise ValueError(f"coalition index {i} outside 1..{params.rho}")
    q = params.modulus.q
    coin_count = params.tau1 if code is None else code.k - params.s
    if q**coin_count > COIN_ENUMERATION_LIMIT:
        raise ValueError("coin space too large to enumerate")
    secret_a, secret_b = secret_pair

    def distribution(secret) -> dict:
        histogram: dict[tuple[int, ...], int] = {}
        for raw in itertools.product(range(q), repeat=coin_count):
            coins = [params.modulus.element(v) for v in raw]
            if code is None:
                sv = share_gen(params, secret, coins=coins)
            else:
                sv = share_gen_code(code, params, secret, coins=coins)
            view = tuple(sv.shares[i - 1].value[0].value for i in coalition)
            histogram[view] = histogram.get(view, 0) + 1
        return histogram

    dist_a = distribution(secret_a)
    dist_b = distribution(secret_b)
    return DistributionComparison(coalition, dist_a == dist_b, dist_a, dist_b)


@dataclass(frozen=True)
class LinearCodeSpec:
    """[N, k] linear code given by a standard-form generator matrix [I | A].

    Standard form guarantees the first k codeword symbols equal the message
    symbols, which both the generic ramp construction and the indexed PoR
    scheme rely on.
    """

    generator: tuple[tuple[FieldElement, ...], ...]

    def __post_init__(self):
        if not self.generator:
            raise ValueError("generator matrix must be nonempty")
        widths = {len(row) for row in self.generator}
        if len(widths) != 1:
            raise ValueError("generator rows must have equal length")
        k, n = self.k, self.n
        if n < k:
            raise ValueError("generator must have at least k columns")
        for i in range(k):
            for j in range(k):
                expected = 1 if i == j else 0
                if self.generator[i][j].value != expected:
                    raise ValueError("generator is not in standard form [I | A]")

    @property
    def k(self) -> int:
        return len(self.generator)

    @property
    def n(self) -> int:
        return len(self.generator[0])

    @property
    def modulus(self) -> FieldModulus:
        return self.generator[0][0].modulus

    def encode_values(self, message) -> tuple[int, ...]:
        """Codeword for a length-k message, both as plain int values."""
        message = tuple(message)
        if len(message) != self.k:
            raise ValueError(f"message must have length {self.k}")
        q = self.modulus.q
        rows = [[e.value for e in row] for row in self.generator]
        return tuple(
            sum(message[a] * rows[a][p] for a in range(self.k)) % q
            for p in range(self.n)
        )

    def codeword_space(self) -> list[tuple[int, ...]]:
        """All q**k codewords in lexicographic message order (guarded size)."""
        q = self.modulus.q
        if q**self.k * self.n > COIN_ENUMERATION_LIMIT:
            raise ValueError("code too large to enumerate")
        return [
            self.encode_values(msg) for msg in itertools.product(range(q), repeat=self.k)
        ]

    def min_distance(self) -> int:
        """Exact minimum distance via minimum nonzero codeword weight."""
        q = self.modulus.q
        if q**self.k * self.n > COIN_ENUMERATION_LIMIT:
            raise ValueError("code too large to enumerate")
        best = self.n
        for msg in itertools.product(range(q), repeat=self.k):
            if all(v == 0 for v in msg):
                continue
            weight = sum(1 for v in self.encode_values(msg) if v != 0)
            best = min(best, weight)
        return best

    def to_json(self) -> dict:
        return {
            "q": self.modulus.q,
            "generator": [[e.to_json() for e in row] for row in self.generator],
        }

    @staticmethod
    def from_json(data: dict) -> LinearCodeSpec:
        modulus = FieldModulus(data["q"])
        return LinearCodeSpec(
            tuple(
                tuple(modulus.element(int(v)) for v in row) for row in data["generator"]
            )
        )


def multiplication_code(modulus: FieldModulus) -> LinearCodeSpec:
    """[q-1, 1] code sending m to (m*1, m*2, ..., m*(q-1)).

    Any two distinct codewords differ everywhere, so the distance is q-1.
    """
    row = tuple(modulus.element(c) for c in range(1, modulus.q))
    return LinearCodeSpec((row,))


def coefficient_rs_code(modulus: FieldModulus, k: int, eval_points: int) -> LinearCodeSpec:
    """[k + eval_points, k] code: message coefficients followed by the
    evaluations of the degree < k polynomial at points 1..eval_points."""
    if not 1 <= eval_points <= modulus.q - 1:
        raise ValueError("need 1 <= eval_points <= q - 1 distinct nonzero points")
    rows = []
    for a in range(k):
        identity = [modulus.element(1 if i == a else 0) for i in range(k)]
        evals = [modulus.element(pow(x, a, modulus.q)) for x in range(1, eval_points + 1)]
        rows.append(tuple(identity + evals))
    return LinearCodeSpec(tuple(rows))


def symbol_repetition_code(modulus: FieldModulus, k: int, copies: int) -> LinearCodeSpec:
    """[k * copies, k] code repeating each message symbol `copies` times."""
    if copies < 1:
        raise ValueError("copies must be >= 1")
    rows = []
    for a in range(k):
        row = [modulus.element(1 if i % k == a else 0) for i in range(k * copies)]
        rows.append(tuple(row))
    return LinearCodeSpec(tuple(rows))


def share_gen_code(
    code: LinearCodeSpec,
    params: RampParams,
    secret,
    rng: random.Random | None = None,
    coins=None,
) -> ShareVector:
    """Generic ramp sharing from a standard-form linear code.

    Draws a uniform codeword whose first s symbols equal the secret and
    hands out the remaining rho = N - s symbols as shares.  The caller owns
    the (tau1, tau2) labels; only their sizing against the code is checked,
    since the threshold claims depend on code distances that are verified
    separately where needed.
    """
    secret = tuple(secret)
    s = params.s
    if not 1 <= s <= code.k:
        raise ValueError("secret length must satisfy 1 <= s <= k")
    if len(secret) != s:
        raise ValueError(f"secret must have length {s}")
    if params.rho != code.n - s:
        raise ValueError("params.rho must equal code length minus s")
    if code.modulus != params.modulus:
        raise ValueError("code modulus does not match params")
    modulus = code.modulus
    coins = _normalize_coins(modulus, coins, code.k - s, rng)
    info = tuple(v.value for v in secret + coins)
    codeword = code.encode_values(info)
    shares = tuple(
        Share(i, (modulus.element(codeword[s + i - 1]),))
        for i in range(1, params.rho + 1)
    )
    return ShareVector(params, shares)


def reconstruct_code(
    code: LinearCodeSpec, params: RampParams, subset: ShareVector
) -> tuple[FieldElement, ...]:
    """Secret from shares of the generic code instance via linear solving."""
    if len(subset.shares) < params.tau2:
        raise ValueError(
            f"insufficient shares: need {params.tau2}, got {len(subset.shares)}"
        )
    s = params.s
    q = code.modulus.q
    rows = [[e.value for e in row] for row in code.generator]
    system = []
    for sh in subset.shares:
        position = s + sh.index - 1
        system.append(([rows[a][position] for a in range(code.k)], sh.value[0].value))
    solution = _solve_unique(system, code.k, q)
    if solution is None:
        raise ValueError("shares do not determine a unique codeword")
    return tuple(code.modulus.element(v) for v in solution[:s])


def _solve_unique(equations, unknowns: int, q: int):
    """Unique solution of a linear system over F_q, or None."""
    rows = [list(coeffs) + [rhs] for coeffs, rhs in equations]
    rank = 0
    for col in range(unknowns):
        pivot = next((r for r in range(rank, len(rows)) if rows[r][col] % q), None)
        if pivot is None:
            return None
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        inv = pow(rows[rank][col], q - 2, q)
        rows[rank] = [(v * inv) % q for v in rows[rank]]
        for r in range(len(rows)):
            if r != rank and rows[r][col] % q:
                factor = rows[r][col]
                rows[r] = [(a - factor * b) % q for a, b in zip(rows[r], rows[rank])]
        rank += 1
    for r in range(rank, len(rows)):
        if rows[r][unknowns] % q:
            return None
    return [rows[i][unknowns] for i in range(unknowns)]
