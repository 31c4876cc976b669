"""Single-server proof-of-retrievability schemes and their extractor.

A scheme fixes an enumerable challenge space, an injective encoding of
messages, a deterministic response function, and a verification rule.  The
response vectors of all encoded messages form the response code; its
minimum Hamming distance d and the challenge count gamma give the
extraction threshold 1 - d/(2*gamma): any prover table whose success
fraction meets the threshold decodes to the stored message exactly under
nearest-codeword search.

Two schemes are implemented:

* ``IndexedCodePoR``: challenges are codeword positions of a linear code
  and the response is the symbol at that position, so the response code is
  the code itself.
* ``ShachamWatersPoR``: the keyed scheme with linear authentication tags
  S[j] = b_j + a*M[j] and aggregated responses (mu, sigma) over challenge
  vectors of fixed Hamming weight.
"""

from __future__ import annotations

import itertools
import random
from abc import ABC, abstractmethod
from dataclasses import dataclass
from fractions import Fraction
from math import comb

from .field import FieldModulus
from .ramp import LinearCodeSpec

RESPONSE_TABLE_LIMIT = 10**7


class PorScheme(ABC):
    """Challenge space, response function, and verification rule."""

    modulus: FieldModulus

    @property
    @abstractmethod
    def gamma(self) -> int:
        """Number of challenges."""

    @abstractmethod
    def challenges(self) -> list:
        """All challenges in a fixed deterministic order."""

    @abstractmethod
    def encode(self, message: tuple[int, ...]) -> tuple[int, ...]:
        """Injective map from messages to encoded messages."""

    @abstractmethod
    def decode(self, encoded: tuple[int, ...]) -> tuple[int, ...]:
        """Inverse of encode on its image."""

    @abstractmethod
    def message_space(self) -> list[tuple[int, ...]]:
        """All messages, lexicographically ordered (guarded size)."""

    @abstractmethod
    def storage_for(self, encoded: tuple[int, ...]):
        """Exact data an honest prover holds for this encoded message."""

    @abstractmethod
    def respond(self, storage, challenge):
        """Deterministic honest response from stored data."""

    @abstractmethod
    def verification_key(self, encoded: tuple[int, ...]):
        """Key or fingerprint the verifier uses against this encoded message."""

    @abstractmethod
    def verify(self, key, challenge, response) -> bool:
        """Accept or reject a response."""

    @abstractmethod
    def corrupt_response(self, correct, challenge, rng: random.Random):
        """Uniform response from the always-rejected complement of correct."""

    def response_vector(self, encoded: tuple[int, ...]) -> tuple:
        storage = self.storage_for(encoded)
        return tuple(self.respond(storage, c) for c in self.challenges())

    # JSON forms for challenges and responses, used in transcripts.

    def challenge_to_json(self, challenge):
        raise NotImplementedError

    def challenge_from_json(self, data):
        raise NotImplementedError

    def response_to_json(self, response):
        raise NotImplementedError

    def response_from_json(self, data):
        raise NotImplementedError


class IndexedCodePoR(PorScheme):
    """Positions of a linear codeword as challenges, symbols as responses.

    The response code equals the code itself, so the distance of the code
    is the extraction distance and gamma is the code length.
    """

    def __init__(self, code: LinearCodeSpec):
        self.code = code
        self.modulus = code.modulus

    @property
    def gamma(self) -> int:
        return self.code.n

    def challenges(self) -> list[int]:
        return list(range(1, self.code.n + 1))

    def encode(self, message):
        return self.code.encode_values(message)

    def decode(self, encoded):
        return tuple(encoded[: self.code.k])

    def message_space(self):
        q = self.modulus.q
        if q**self.code.k * self.code.n > RESPONSE_TABLE_LIMIT:
            raise ValueError("message space too large to enumerate")
        return [msg for msg in itertools.product(range(q), repeat=self.code.k)]

    def storage_for(self, encoded):
        return tuple(encoded)

    def respond(self, storage, challenge: int) -> int:
        if not 1 <= challenge <= self.code.n:
            raise ValueError(f"challenge {challenge} outside 1..{self.code.n}")
        return storage[challenge - 1]

    def verification_key(self, encoded):
        return tuple(encoded)

    def verify(self, key, challenge: int, response: int) -> bool:
        return response == key[challenge - 1]

    def corrupt_response(self, correct: int, challenge: int, rng: random.Random) -> int:
        return (correct + 1 + rng.randrange(self.modulus.q - 1)) % self.modulus.q

    def challenge_to_json(self, challenge):
        return str(challenge)

    def challenge_from_json(self, data):
        return int(data)

    def response_to_json(self, response):
        return str(response)

    def response_from_json(self, data):
        return int(data)


def sw_keygen(modulus: FieldModulus, n: int, rng: random.Random) -> tuple[int, ...]:
    """Fresh key (a, b_1..b_n) of n+1 uniform field elements."""
    return tuple(rng.randrange(modulus.q) for _ in range(n + 1))


def sw_tag(key: tuple[int, ...], blocks: tuple[int, ...], q: int) -> tuple[int, ...]:
    """Tags S[j] = b_j + a * M[j] for every block."""
    a, b = key[0], key[1:]
    if len(blocks) != len(b):
        raise ValueError("block count does not match key length")
    return tuple((b[j] + a * blocks[j]) % q for j in range(len(blocks)))


def sw_respond(storage, challenge: tuple[int, ...], q: int, ell: int) -> tuple[int, int]:
    """Aggregated response (mu, sigma) to a weight-ell challenge vector."""
    blocks, tags = storage
    if len(challenge) != len(blocks):
        raise ValueError("challenge length does not match block count")
    if sum(1 for c in challenge if c) != ell:
        raise ValueError(f"challenge must have Hamming weight exactly {ell}")
    mu = sum(c * m for c, m in zip(challenge, blocks)) % q
    sigma = sum(c * s for c, s in zip(challenge, tags)) % q
    return mu, sigma


def sw_verify(key: tuple[int, ...], challenge: tuple[int, ...], response, q: int) -> bool:
    """Accept iff sigma = sum_j c_j b_j + a * mu."""
    a, b = key[0], key[1:]
    mu, sigma = response
    expected = (sum(c * bj for c, bj in zip(challenge, b)) + a * mu) % q
    return sigma % q == expected


def key_to_json(key: tuple[int, ...]) -> list[str]:
    """Flat list of n+1 decimal strings, a first."""
    return [str(v) for v in key]


def key_from_json(items, modulus: FieldModulus) -> tuple[int, ...]:
    key = tuple(int(v) for v in items)
    for v in key:
        if not 0 <= v < modulus.q:
            raise ValueError(f"key element {v} not canonical for q={modulus.q}")
    return key


def consistent_keys(modulus: FieldModulus, storage) -> list[tuple[int, ...]]:
    """All q keys consistent with a stored (blocks, tags) pair.

    Each choice of a pins b_j = S[j] - a*M[j]; averaging success over this
    class is the succ_avg notion for keyed schemes.
    """
    blocks, tags = storage
    q = modulus.q
    keys = []
    for a in range(q):
        b = tuple((tags[j] - a * blocks[j]) % q for j in range(len(blocks)))
        keys.append((a,) + b)
    return keys


class ShachamWatersPoR(PorScheme):
    """Keyed scheme with linear tags and aggregated weight-ell challenges.

    The challenge space is every vector in F_q^n of Hamming weight exactly
    ell, so gamma = C(n, ell) * (q-1)**ell.  A scheme instance is bound to
    one key; the encoded message space defaults to all of F_q^n but can be
    restricted to the codewords of an outer code.
    """

    def __init__(
        self,
        modulus: FieldModulus,
        n: int,
        ell: int,
        key: tuple[int, ...],
        message_space=None,
    ):
        if not 1 <= ell <= n:
            raise ValueError("challenge weight ell must satisfy 1 <= ell <= n")
        if len(key) != n + 1:
            raise ValueError("key must hold n+1 field elements")
        self.modulus = modulus
        self.n = n
        self.ell = ell
        self.key = tuple(v % modulus.q for v in key)
        self._message_space = (
            None if message_space is None else [tuple(m) for m in message_space]
        )

    @property
    def gamma(self) -> int:
        return comb(self.n, self.ell) * (self.modulus.q - 1) ** self.ell

    def challenges(self) -> list[tuple[int, ...]]:
        if self.gamma > RESPONSE_TABLE_LIMIT:
            raise ValueError("challenge space too large to enumerate")
        q = self.modulus.q
        out = []
        for support in itertools.combinations(range(self.n), self.ell):
            for values in itertools.product(range(1, q), repeat=self.ell):
                c = [0] * self.n
                for pos, v in zip(support, values):
                    c[pos] = v
                out.append(tuple(c))
        return out

    def encode(self, message):
        message = tuple(message)
        if len(message) != self.n:
            raise ValueError(f"message must have {self.n} blocks")
        return message

    def decode(self, encoded):
        return tuple(encoded)

    def message_space(self):
        if self._message_space is not None:
            return list(self._message_space)
        q = self.modulus.q
        if q**self.n * self.gamma > RESPONSE_TABLE_LIMIT:
            raise ValueError("message space too large to enumerate")
        return [msg for msg in itertools.product(range(q), repeat=self.n)]

    def storage_for(self, encoded):
        encoded = tuple(encoded)
        return (encoded, sw_tag(self.key, encoded, self.modulus.q))

    def respond(self, storage, challenge):
        return sw_respond(storage, challenge, self.modulus.q, self.ell)

    def verification_key(self, encoded):
        return self.key

    def verify(self, key, challenge, response) -> bool:
        return sw_verify(key, challenge, response, self.modulus.q)

    def corrupt_response(self, correct, challenge, rng: random.Random):
        # Keeping mu and moving sigma is rejected by every key in the
        # consistency class, so corruption counts translate into exact
        # success fractions.
        mu, sigma = correct
        q = self.modulus.q
        return (mu, (sigma + 1 + rng.randrange(q - 1)) % q)

    def challenge_to_json(self, challenge):
        return [str(v) for v in challenge]

    def challenge_from_json(self, data):
        return tuple(int(v) for v in data)

    def response_to_json(self, response):
        return [str(v) for v in response]

    def response_from_json(self, data):
        mu, sigma = (int(v) for v in data)
        return (mu, sigma)


@dataclass(frozen=True)
class ResponseCode:
    """Materialized response vectors of every encoded message."""

    messages: tuple[tuple[int, ...], ...]
    encoded: tuple[tuple[int, ...], ...]
    vectors: tuple[tuple, ...]
    distance: int
    gamma: int

    def vector_for(self, encoded: tuple[int, ...]):
        return self.vectors[self.encoded.index(tuple(encoded))]


def build_response_code(scheme: PorScheme) -> ResponseCode:
    """Full response table and its exact minimum distance.

    Pairwise comparison over all encoded messages; degenerate one-message
    spaces have no distance and are rejected.
    """
    messages = [tuple(m) for m in scheme.message_space()]
    if len(messages) < 2:
        raise ValueError("response code needs at least two encoded messages")
    gamma = scheme.gamma
    if len(messages) * gamma > RESPONSE_TABLE_LIMIT:
        raise ValueError("response table too large to materialize")
    encoded = [scheme.encode(m) for m in messages]
    vectors = [scheme.response_vector(e) for e in encoded]
    distance = gamma
    for i in range(len(vectors)):
        vi = vectors[i]
        for j in range(i + 1, len(vectors)):
            vj = vectors[j]
            d = sum(1 for a, b in zip(vi, vj) if a != b)
            if d < distance:
                distance = d
    return ResponseCode(
        tuple(messages), tuple(encoded), tuple(vectors), distance, gamma
    )


def extraction_threshold(code: ResponseCode) -> Fraction:
    """Success fraction above which nearest-codeword extraction is exact."""
    return 1 - Fraction(code.distance, 2 * code.gamma)


def extract_nearest(
    scheme: PorScheme,
    prover,
    response_code: ResponseCode | None = None,
) -> tuple[int, ...]:
    """Nearest-codeword extraction from a proving algorithm.

    Queries the prover on every challenge, finds the encoded message whose
    response vector is closest in Hamming distance, and decodes it.  Exact
    whenever the prover's success fraction is at least the extraction
    threshold; ties below the threshold resolve to the lexicographically
    smallest encoded message.
    """
    rc = response_code if response_code is not None else build_response_code(scheme)
    observed = tuple(prover.respond(c) for c in scheme.challenges())
    best = None
    for message, encoded, vector in zip(rc.messages, rc.encoded, rc.vectors):
        d = sum(1 for a, b in zip(observed, vector) if a != b)
        if best is None or d < best[0] or (d == best[0] and encoded < best[1]):
            best = (d, encoded, message)
    return scheme.decode(best[1])


def measure_success(scheme: PorScheme, prover, key) -> Fraction:
    """Exact fraction of challenges accepted under one key."""
    challenges = scheme.challenges()
    accepted = sum(
        1 for c in challenges if scheme.verify(key, c, prover.respond(c))
    )
    return Fraction(accepted, len(challenges))


def measure_success_avg(scheme: PorScheme, prover, keys) -> Fraction:
    """Average per-key success over a supplied key set."""
    keys = list(keys)
    if not keys:
        raise ValueError("key set must be nonempty")
    total = sum(measure_success(scheme, prover, k) for k in keys)
    return total / len(keys)


def sw_gamma(n: int, ell: int, q: int) -> int:
    """Number of weight-ell challenge vectors in F_q^n."""
    return comb(n, ell) * (q - 1) ** ell


def _validate_dstar_args(n: int, ell: int, d: int, q: int) -> None:
    if n < 1:
        raise ValueError("n must be >= 1")
    if not 1 <= ell <= n:
        raise ValueError("ell must satisfy 1 <= ell <= n")
    if not 0 <= d <= n:
        raise ValueError("d must satisfy 0 <= d <= n")
    if q < 2:
        raise ValueError("q must be >= 2")


def sw_dstar(n: int, ell: int, d: int, q: int) -> Fraction:
    """Estimated response-code distance for a distance-d message space.

    Exact rational evaluation of

        C(n,l)(q-1)^l - C(n-d,l)(q-1)^l - sum_{w>=1} C(d,w) C(n-d,l-w) (q-1)^l / q

    with out-of-range binomials treated as zero.  The formula is an
    estimate of the true distance, not an identity; compare against a
    brute-force response-code distance where that matters.
    """
    _validate_dstar_args(n, ell, d, q)
    pow_term = (q - 1) ** ell
    total = Fraction(comb(n, ell) * pow_term)
    total -= Fraction(comb(n - d, ell) * pow_term)
    for w in range(1, min(d, ell) + 1):
        total -= Fraction(comb(d, w) * comb(n - d, ell - w) * pow_term, q)
    return total


def sw_threshold(n: int, ell: int, d: int, q: int) -> Fraction:
    """Average-key success threshold 1 - dstar*(q-1)/(2*gamma*q)."""
    _validate_dstar_args(n, ell, d, q)
    gamma = sw_gamma(n, ell, q)
    return 1 - sw_dstar(n, ell, d, q) * (q - 1) / (2 * gamma * q)
