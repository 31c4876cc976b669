"""Multi-prover proof-of-retrievability systems.

Four constructions over a shared skeleton: a message is split blockwise by
a ramp scheme, each prover stores the base-scheme encoding of its share
vector, and the verifier audits provers independently.

* ``ramp``: general (tau1, tau2, rho) sharing over an unkeyed indexed-code
  base scheme.  tau2 extracted provers reconstruct; tau1 colluders learn
  nothing.
* ``rep``: the (0, 1, rho) replication instance.  Every prover stores the
  same payload, which enables the average-case extractor over the
  concatenated response vectors.  The base may be an indexed code or the
  keyed tag scheme with a single shared key.
* ``basic``: ramp sharing with tags under rho independent keys; the
  verifier retains rho*(n+1) field elements.
* ``sw``: like ``basic`` but keys are derived from n+1 random polynomials
  of degree < tau1, shrinking verifier storage to tau1*(n+1) elements while
  keeping any tau1 keys jointly uniform.

Provers fix their proving algorithms once, before any audit; the system
refuses to build tables twice, which models the rule that provers do not
interact after committing to their behavior.
"""

from __future__ import annotations

import itertools
import random
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import TYPE_CHECKING

from .field import (
    CountingRng,
    FieldModulus,
    SequenceRng,
    derived_rng,
)
from .ramp import (
    COIN_ENUMERATION_LIMIT,
    DistributionComparison,
    LinearCodeSpec,
    RampParams,
    Share,
    ShareVector,
    reconstruct,
    share_gen_blocks,
)
from .por import (
    IndexedCodePoR,
    PorScheme,
    ResponseCode,
    ShachamWatersPoR,
    build_response_code,
    extraction_threshold,
    extract_nearest,
    measure_success,
    sw_keygen,
    sw_tag,
)

if TYPE_CHECKING:  # pragma: no cover
    from .adversary import CorruptionSpec, ProvingAlgorithm

KINDS = ("ramp", "rep", "basic", "sw")


@dataclass(frozen=True)
class IndexedBase:
    code: LinearCodeSpec


@dataclass(frozen=True)
class SwBase:
    ell: int


@dataclass(frozen=True)
class MporConfig:
    kind: str
    modulus: FieldModulus
    ramp: RampParams
    base: IndexedBase | SwBase

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown system kind {self.kind!r}")
        self.ramp.require_polynomial_instance()
        if self.ramp.modulus != self.modulus:
            raise ValueError("ramp modulus does not match system modulus")
        if self.kind == "rep" and (self.ramp.tau1, self.ramp.tau2) != (0, 1):
            raise ValueError("replication system requires the (0, 1, rho) ramp")
        if self.kind == "ramp" and not isinstance(self.base, IndexedBase):
            raise ValueError("ramp system requires an indexed-code base")
        if self.kind in ("basic", "sw") and not isinstance(self.base, SwBase):
            raise ValueError(f"{self.kind} system requires the keyed tag base")
        if self.kind == "sw" and self.ramp.tau1 < 1:
            raise ValueError("polynomial key derivation requires tau1 >= 1")
        if isinstance(self.base, IndexedBase) and self.base.code.modulus != self.modulus:
            raise ValueError("code modulus does not match system modulus")


@dataclass(frozen=True)
class ProverState:
    """Index plus exactly what the prover stores."""

    index: int
    storage: tuple

    def payload_elements(self) -> tuple[int, ...]:
        if self.storage and isinstance(self.storage[0], tuple):
            blocks, tags = self.storage
            return tuple(blocks) + tuple(tags)
        return tuple(self.storage)


@dataclass(frozen=True)
class VerifierState:
    """Everything the verifier retains after setup."""

    kind: str
    fingerprints: tuple[tuple[int, ...], ...] | None = None
    keys: tuple[tuple[int, ...], ...] | None = None
    shared_key: tuple[int, ...] | None = None
    key_polys: tuple[tuple[int, ...], ...] | None = None

    def element_count(self) -> int:
        if self.key_polys is not None:
            return sum(len(row) for row in self.key_polys)
        if self.keys is not None:
            return sum(len(k) for k in self.keys)
        if self.shared_key is not None:
            return len(self.shared_key)
        return sum(len(f) for f in self.fingerprints)


def polynomial_key(key_polys, index: int, q: int) -> tuple[int, ...]:
    """Key (a, b_1..b_n) derived from coefficient rows (f_1..f_n, g) at a
    prover index.

    Indices must stay below q so that distinct provers evaluate the
    polynomials at distinct points.
    """
    if not 1 <= index < q:
        raise ValueError(f"prover index {index} must lie in 1..q-1")
    evaluated = [
        sum(c * pow(index, e, q) for e, c in enumerate(row)) % q for row in key_polys
    ]
    return (evaluated[-1],) + tuple(evaluated[:-1])


@dataclass
class MporSystem:
    config: MporConfig
    n_blocks: int
    verifier: VerifierState
    prover_states: tuple[ProverState, ...]
    provers_frozen: bool = False
    _indexed_scheme: IndexedCodePoR | None = field(default=None, repr=False)

    @property
    def rho(self) -> int:
        return self.config.ramp.rho

    def derive_key(self, index: int) -> tuple[int, ...]:
        """Verification key for one prover of a keyed system."""
        if not 1 <= index <= self.rho:
            raise ValueError(f"prover index {index} outside 1..{self.rho}")
        v = self.verifier
        if v.keys is not None:
            return v.keys[index - 1]
        if v.shared_key is not None:
            return v.shared_key
        if v.key_polys is not None:
            return polynomial_key(v.key_polys, index, self.config.modulus.q)
        raise ValueError("unkeyed system has no keys to derive")

    def scheme_for(self, index: int) -> PorScheme:
        if not 1 <= index <= self.rho:
            raise ValueError(f"prover index {index} outside 1..{self.rho}")
        base = self.config.base
        if isinstance(base, IndexedBase):
            if self._indexed_scheme is None:
                self._indexed_scheme = IndexedCodePoR(base.code)
            return self._indexed_scheme
        return ShachamWatersPoR(
            self.config.modulus, self.n_blocks, base.ell, self.derive_key(index)
        )

    def verification_key(self, index: int):
        if isinstance(self.config.base, IndexedBase):
            return self.verifier.fingerprints[index - 1]
        return self.derive_key(index)

    def state_for(self, index: int) -> ProverState:
        if not 1 <= index <= self.rho:
            raise ValueError(f"prover index {index} outside 1..{self.rho}")
        return self.prover_states[index - 1]


def _as_elements(modulus: FieldModulus, values):
    return tuple(modulus.element(int(v)) for v in values)


def mpor_setup(
    config: MporConfig,
    message,
    rng: random.Random | None = None,
    ramp_coins=None,
) -> MporSystem:
    """Share, encode, tag, and hand out per-prover storage.

    The message holds n_blocks * s field values.  Coins are consumed in a
    fixed order (ramp coins blockwise, then key material), so a seeded rng
    reproduces the whole system byte for byte.  ``ramp_coins`` pins the
    sharing coins per block without touching key generation.
    """
    modulus = config.modulus
    params = config.ramp
    message = tuple(int(v) for v in message)
    share_vector = share_gen_blocks(
        params, _as_elements(modulus, message), rng=rng, coins_per_block=ramp_coins
    )
    n_blocks = len(message) // params.s
    share_values = [
        tuple(v.value for v in share_vector.shares[i - 1].value)
        for i in range(1, params.rho + 1)
    ]

    base = config.base
    if isinstance(base, IndexedBase):
        code = base.code
        if code.k != n_blocks:
            raise ValueError(
                f"code dimension {code.k} does not match {n_blocks} message blocks"
            )
        encoded = [code.encode_values(sv) for sv in share_values]
        verifier = VerifierState(kind=config.kind, fingerprints=tuple(encoded))
        states = tuple(
            ProverState(i, tuple(encoded[i - 1])) for i in range(1, params.rho + 1)
        )
        return MporSystem(config, n_blocks, verifier, states)

    if rng is None:
        raise ValueError("rng required for key generation")
    q = modulus.q
    if config.kind == "basic":
        keys = tuple(sw_keygen(modulus, n_blocks, rng) for _ in range(params.rho))
        verifier = VerifierState(kind=config.kind, keys=keys)
    elif config.kind == "sw":
        key_polys = tuple(
            tuple(rng.randrange(q) for _ in range(params.tau1))
            for _ in range(n_blocks + 1)
        )
        verifier = VerifierState(kind=config.kind, key_polys=key_polys)
    else:  # replication with a single shared key
        verifier = VerifierState(
            kind=config.kind, shared_key=sw_keygen(modulus, n_blocks, rng)
        )

    system = MporSystem(config, n_blocks, verifier, ())
    states = []
    for i in range(1, params.rho + 1):
        blocks = tuple(share_values[i - 1])
        tags = sw_tag(system.derive_key(i), blocks, q)
        states.append(ProverState(i, (blocks, tags)))
    system.prover_states = tuple(states)
    return system


@dataclass(frozen=True)
class AuditRecord:
    prover: int
    challenge: object
    response: object
    accepted: bool


class AuditTranscript:
    """Append-only record of challenge/response/accept triples."""

    def __init__(self):
        self.records: list[AuditRecord] = []

    def append(self, record: AuditRecord) -> None:
        self.records.append(record)

    def __len__(self) -> int:
        return len(self.records)

    def to_json(self, system: MporSystem) -> list[dict]:
        out = []
        for r in self.records:
            scheme = system.scheme_for(r.prover)
            out.append(
                {
                    "prover": r.prover,
                    "challenge": scheme.challenge_to_json(r.challenge),
                    "response": scheme.response_to_json(r.response),
                    "accepted": r.accepted,
                }
            )
        return out

    @staticmethod
    def from_json(data: list[dict], system: MporSystem) -> AuditTranscript:
        t = AuditTranscript()
        for item in data:
            scheme = system.scheme_for(item["prover"])
            t.append(
                AuditRecord(
                    item["prover"],
                    scheme.challenge_from_json(item["challenge"]),
                    scheme.response_from_json(item["response"]),
                    item["accepted"],
                )
            )
        return t


def mpor_audit(
    system: MporSystem,
    prover_index: int,
    proving_algorithm,
    challenge,
    transcript: AuditTranscript | None = None,
) -> bool:
    """One challenge-response round against one prover."""
    scheme = system.scheme_for(prover_index)
    key = system.verification_key(prover_index)
    response = proving_algorithm.respond(challenge)
    accepted = scheme.verify(key, challenge, response)
    if transcript is not None:
        transcript.append(AuditRecord(prover_index, challenge, response, accepted))
    return accepted


def run_audits(
    system: MporSystem,
    provers: dict[int, "ProvingAlgorithm"],
    challenges_per_prover: int,
    seed,
) -> AuditTranscript:
    """Audit every listed prover on uniformly sampled challenges.

    Each prover gets its own derived challenge stream, so transcripts are
    reproducible and independent of dict ordering.
    """
    if challenges_per_prover < 1:
        raise ValueError("empty transcript: challenges_per_prover must be >= 1")
    transcript = AuditTranscript()
    for index in sorted(provers):
        scheme = system.scheme_for(index)
        space = scheme.challenges()
        rng = derived_rng(seed, "audit", index)
        for _ in range(challenges_per_prover):
            challenge = space[rng.randrange(len(space))]
            mpor_audit(system, index, provers[index], challenge, transcript)
    return transcript


def build_provers(
    system: MporSystem,
    specs: dict[int, "CorruptionSpec"],
    plan: dict | None = None,
) -> dict[int, "ProvingAlgorithm"]:
    """Freeze proving algorithms for every prover, once.

    An optional redistribution plan (applied before freezing) overrides the
    per-prover specs for the colluding indices.  Building twice is refused:
    after freezing, provers no longer coordinate or change behavior.
    """
    from .adversary import CorruptionSpec, collude_redistribute, make_prover

    if system.provers_frozen:
        raise ValueError("proving algorithms already frozen")
    merged: dict[int, CorruptionSpec] = {
        i: specs.get(i, CorruptionSpec()) for i in range(1, system.rho + 1)
    }
    if plan:
        gamma = system.scheme_for(1).gamma
        merged.update(collude_redistribute(plan, system.rho, gamma))
    provers = {}
    shared_rc = None
    for i in range(1, system.rho + 1):
        scheme = system.scheme_for(i)
        spec = merged[i]
        rc = None
        if spec.mode == "targeted":
            if isinstance(system.config.base, IndexedBase):
                if shared_rc is None:
                    shared_rc = build_response_code(scheme)
                rc = shared_rc
            else:
                rc = build_response_code(scheme)
        provers[i] = make_prover(
            system.state_for(i).storage,
            spec,
            scheme,
            system.verification_key(i),
            response_code=rc,
        )
    system.provers_frozen = True
    return provers


@dataclass(frozen=True)
class ExtractionReport:
    """Outcome of one extraction attempt.

    ``guaranteed`` records whether the extraction theorem's hypothesis held
    (every measured success fraction at or above the threshold).  At the
    exact boundary of an even-distance response code a nearest-codeword tie
    is possible and may resolve away from the stored message; strictly
    above the threshold the recovery is always exact.
    """

    mode: str
    subset: tuple[int, ...]
    recovered: tuple[int, ...] | None
    per_prover_succ: dict[int, Fraction]
    threshold: Fraction
    guaranteed: bool

    def to_json(self) -> dict:
        return {
            "mode": self.mode,
            "subset": list(self.subset),
            "recovered": None
            if self.recovered is None
            else [str(v) for v in self.recovered],
            "per_prover_succ": {
                str(i): str(s) for i, s in sorted(self.per_prover_succ.items())
            },
            "threshold": str(self.threshold),
            "guaranteed": self.guaranteed,
        }


def extract_worst_case(
    system: MporSystem, provers: dict[int, "ProvingAlgorithm"]
) -> ExtractionReport:
    """Per-prover nearest-codeword extraction on a tau2-subset, then
    ramp reconstruction of the message.

    Exact whenever every supplied prover meets the base extraction
    threshold; the report flags whether that hypothesis held.
    """
    params = system.config.ramp
    subset = tuple(sorted(provers))
    if len(subset) != params.tau2:
        raise ValueError(
            f"worst-case extraction needs exactly tau2={params.tau2} provers, "
            f"got {len(subset)}"
        )
    modulus = system.config.modulus
    shared_rc: ResponseCode | None = None
    shares = []
    succ: dict[int, Fraction] = {}
    threshold: Fraction | None = None
    for i in subset:
        scheme = system.scheme_for(i)
        if isinstance(system.config.base, IndexedBase):
            if shared_rc is None:
                shared_rc = build_response_code(scheme)
            rc = shared_rc
        else:
            rc = build_response_code(scheme)
        threshold = extraction_threshold(rc)
        extracted = extract_nearest(scheme, provers[i], response_code=rc)
        shares.append(Share(i, _as_elements(modulus, extracted)))
        succ[i] = measure_success(scheme, provers[i], system.verification_key(i))
    share_vector = ShareVector(params, tuple(shares))
    recovered = tuple(v.value for v in reconstruct(params, share_vector))
    return ExtractionReport(
        mode="worst_case",
        subset=subset,
        recovered=recovered,
        per_prover_succ=succ,
        threshold=threshold,
        guaranteed=all(s >= threshold for s in succ.values()),
    )


def extract_average(
    system: MporSystem, provers: dict[int, "ProvingAlgorithm"]
) -> ExtractionReport:
    """Nearest replicated codeword over the concatenated response vectors.

    Only replication systems qualify: all rho provers hold the same
    payload, the concatenated response code has rho times the distance, and
    extraction is exact whenever the mean success fraction meets the same
    threshold that a single prover would need.
    """
    if system.config.kind != "rep":
        raise ValueError("average-case extraction requires a replication system")
    subset = tuple(sorted(provers))
    if subset != tuple(range(1, system.rho + 1)):
        raise ValueError("average-case extraction needs all rho provers")
    schemes = {i: system.scheme_for(i) for i in subset}
    rc = build_response_code(schemes[subset[0]])
    observed = {
        i: tuple(provers[i].respond(c) for c in schemes[i].challenges()) for i in subset
    }
    best = None
    for message, encoded, vector in zip(rc.messages, rc.encoded, rc.vectors):
        d = sum(
            sum(1 for a, b in zip(observed[i], vector) if a != b) for i in subset
        )
        if best is None or d < best[0] or (d == best[0] and encoded < best[1]):
            best = (d, encoded, message)
    recovered = schemes[subset[0]].decode(best[1])
    succ = {
        i: measure_success(schemes[i], provers[i], system.verification_key(i))
        for i in subset
    }
    threshold = extraction_threshold(rc)
    average = sum(succ.values()) / len(subset)
    return ExtractionReport(
        mode="average_case",
        subset=subset,
        recovered=tuple(recovered),
        per_prover_succ=succ,
        threshold=threshold,
        guaranteed=average >= threshold,
    )


def derive_keys(system: MporSystem, indices) -> list[tuple[int, ...]]:
    """Verification keys for a set of prover indices of a keyed system."""
    return [system.derive_key(i) for i in indices]


def storage_accounting(system: MporSystem) -> dict[str, int]:
    """Exact field-element counts held by the verifier and by each prover."""
    n = system.n_blocks
    params = system.config.ramp
    if isinstance(system.config.base, SwBase):
        per_prover = 2 * n
        if system.config.kind == "sw":
            verifier = params.tau1 * (n + 1)
        elif system.config.kind == "basic":
            verifier = params.rho * (n + 1)
        else:
            verifier = n + 1
    else:
        code_len = system.config.base.code.n
        per_prover = code_len
        verifier = params.rho * code_len
    assert verifier == system.verifier.element_count()
    return {"verifier_elems": verifier, "per_prover_elems": per_prover}


def coalition_view_distribution(
    config: MporConfig, message, coalition
) -> Counter:
    """Exact distribution of what a coalition sees, over all setup coins.

    Enumerates the full coin space of mpor_setup (ramp coins and key
    material), so the returned counts are exact.  Views are the coalition's
    stored payloads, flattened to plain values.
    """
    coalition = tuple(sorted(set(coalition)))
    counter = CountingRng()
    mpor_setup(config, message, rng=counter)
    q = config.modulus.q
    if q**counter.draws > COIN_ENUMERATION_LIMIT:
        raise ValueError("setup coin space too large to enumerate")
    histogram: Counter = Counter()
    for coins in itertools.product(range(q), repeat=counter.draws):
        system = mpor_setup(config, message, rng=SequenceRng(coins))
        view = tuple(
            (i, system.state_for(i).payload_elements()) for i in coalition
        )
        histogram[view] += 1
    return histogram


def privacy_probe(
    config: MporConfig, message_pair, coalition
) -> DistributionComparison:
    """Whether a coalition's exact view distribution depends on the message."""
    dist_a = coalition_view_distribution(config, message_pair[0], coalition)
    dist_b = coalition_view_distribution(config, message_pair[1], coalition)
    return DistributionComparison(
        tuple(sorted(set(coalition))), dist_a == dist_b, dict(dist_a), dict(dist_b)
    )
