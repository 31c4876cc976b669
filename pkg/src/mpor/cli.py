"""Command-line front end for scenario-driven simulations.

Subcommands: setup, audit, extract, stats, simulate.  A scenario JSON file
pins every parameter including the seed, so rerunning any command produces
byte-identical artifacts.  All numbers the CLI prints are plain library
calls; the CLI itself does no arithmetic.

Exit codes: 0 success, 1 runtime failure, 2 validation or usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path

from .adversary import CorruptionSpec
from .field import FieldModulus, derived_rng
from .por import sw_dstar, sw_gamma, sw_threshold
from .ramp import (
    LinearCodeSpec,
    RampParams,
    coefficient_rs_code,
    multiplication_code,
    symbol_repetition_code,
)
from .stats import (
    audit_hypothesis_test,
    lambda_upper,
    poisson_vs_exact_report,
    transcript_to_counts,
)
from .systems import (
    IndexedBase,
    MporConfig,
    MporSystem,
    SwBase,
    build_provers,
    extract_average,
    extract_worst_case,
    mpor_setup,
    run_audits,
    storage_accounting,
)


@dataclass
class Scenario:
    """Parsed scenario file: one fully pinned simulation."""

    kind: str
    modulus: FieldModulus
    message: tuple[int, ...]
    ramp: RampParams
    base: IndexedBase | SwBase
    adversaries: dict[int, CorruptionSpec]
    redistribute: dict | None
    audits_per_prover: int
    eta: float
    alpha: float
    seed: int | str
    ramp_coins: list | None

    def config(self) -> MporConfig:
        return MporConfig(self.kind, self.modulus, self.ramp, self.base)


def _parse_base(data: dict, modulus: FieldModulus) -> IndexedBase | SwBase:
    base_type = data.get("type")
    if base_type == "sw":
        return SwBase(ell=int(data["ell"]))
    if base_type != "indexed":
        raise ValueError(f"unknown base type {base_type!r}")
    code = data.get("code")
    if isinstance(code, dict) and "generator" in code:
        return IndexedBase(LinearCodeSpec.from_json({"q": modulus.q, **code}))
    if code == "multiplication":
        return IndexedBase(multiplication_code(modulus))
    if isinstance(code, dict) and code.get("kind") == "rs_coefficient":
        return IndexedBase(
            coefficient_rs_code(modulus, int(code["k"]), int(code["eval_points"]))
        )
    if isinstance(code, dict) and code.get("kind") == "symbol_repetition":
        return IndexedBase(
            symbol_repetition_code(modulus, int(code["k"]), int(code["copies"]))
        )
    raise ValueError(f"unknown code spec {code!r}")


def _parse_adversary(data: dict, seed, index: int) -> CorruptionSpec:
    mode = data.get("mode", "honest")
    spec_seed = data.get("seed", f"{seed}:adv:{index}")
    if mode == "honest":
        return CorruptionSpec(seed=spec_seed)
    if mode == "random":
        return CorruptionSpec(mode="random", k=int(data["k"]), seed=spec_seed)
    if mode == "targeted":
        return CorruptionSpec(mode="targeted", k=int(data["k"]), seed=spec_seed)
    if mode == "delete":
        blocks = tuple(int(v) for v in data["blocks"])
        return CorruptionSpec(mode="delete", blocks=blocks, seed=spec_seed)
    raise ValueError(f"unknown adversary mode {mode!r}")


def load_scenario(path: Path) -> Scenario:
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    if "seed" not in data:
        raise ValueError("scenario must pin a seed")
    modulus = FieldModulus(int(data["q"]))
    kind = data["kind"]
    rho = int(data["ramp"]["rho"] if "ramp" in data else data["rho"])
    if kind == "rep":
        params = RampParams.replication(rho, modulus)
    else:
        params = RampParams.reed_solomon(
            int(data["ramp"]["tau1"]), int(data["ramp"]["tau2"]), rho, modulus
        )
    seed = data["seed"]
    adversaries = {
        int(i): _parse_adversary(spec, seed, int(i))
        for i, spec in data.get("adversaries", {}).items()
    }
    redistribute = None
    if "redistribute" in data:
        redistribute = {
            int(i): {
                "retain": [int(p) for p in entry.get("retain", [])],
                "fill": {int(p): int(v) for p, v in entry.get("fill", {}).items()},
            }
            for i, entry in data["redistribute"].items()
        }
    return Scenario(
        kind=kind,
        modulus=modulus,
        message=tuple(int(v) for v in data["message"]),
        ramp=params,
        base=_parse_base(data["base"], modulus),
        adversaries=adversaries,
        redistribute=redistribute,
        audits_per_prover=int(data.get("audits_per_prover", 1)),
        eta=float(data.get("eta", 0.9)),
        alpha=float(data.get("alpha", 0.05)),
        seed=seed,
        ramp_coins=data.get("ramp_coins"),
    )


def build_system(scenario: Scenario) -> MporSystem:
    rng = derived_rng(scenario.seed, "setup")
    return mpor_setup(
        scenario.config(), scenario.message, rng=rng, ramp_coins=scenario.ramp_coins
    )


def _write_json(path: Path, payload) -> None:
    path.write_text(
        json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )


def _verifier_json(system: MporSystem, scenario: Scenario) -> dict:
    v = system.verifier
    out = {
        "kind": scenario.kind,
        "q": scenario.modulus.q,
        "ramp": {
            "tau1": scenario.ramp.tau1,
            "tau2": scenario.ramp.tau2,
            "rho": scenario.ramp.rho,
            "s": scenario.ramp.s,
        },
        "n_blocks": system.n_blocks,
        "element_count": v.element_count(),
    }
    if v.fingerprints is not None:
        out["fingerprints"] = [[str(x) for x in f] for f in v.fingerprints]
    if v.keys is not None:
        out["keys"] = [[str(x) for x in k] for k in v.keys]
    if v.shared_key is not None:
        out["key"] = [str(x) for x in v.shared_key]
    if v.key_polys is not None:
        out["key_polys"] = [[str(x) for x in row] for row in v.key_polys]
    return out


def _prover_json(system: MporSystem, index: int) -> dict:
    state = system.state_for(index)
    if isinstance(state.storage[0], tuple):
        blocks, tags = state.storage
        return {
            "index": index,
            "blocks": [str(x) for x in blocks],
            "tags": [str(x) for x in tags],
        }
    return {"index": index, "storage": [str(x) for x in state.storage]}


def cmd_setup(args) -> int:
    scenario = load_scenario(args.scenario)
    system = build_system(scenario)
    workdir = Path(args.workdir)
    workdir.mkdir(parents=True, exist_ok=True)
    _write_json(workdir / "verifier.json", _verifier_json(system, scenario))
    for i in range(1, system.rho + 1):
        _write_json(workdir / f"prover_{i}.json", _prover_json(system, i))
    accounting = storage_accounting(system)
    print(
        f"setup: {system.rho} provers, {system.n_blocks} blocks, "
        f"verifier holds {accounting['verifier_elems']} field elements, "
        f"each prover {accounting['per_prover_elems']}"
    )
    return 0


def _provers_for(scenario: Scenario, system: MporSystem):
    return build_provers(system, scenario.adversaries, plan=scenario.redistribute)


def cmd_audit(args) -> int:
    scenario = load_scenario(args.scenario)
    rounds = args.rounds if args.rounds is not None else scenario.audits_per_prover
    if rounds < 1:
        raise ValueError("empty transcript: rounds must be >= 1")
    system = build_system(scenario)
    provers = _provers_for(scenario, system)
    transcript = run_audits(system, provers, rounds, scenario.seed)
    b, c, rho = transcript_to_counts(transcript)
    outcome = audit_hypothesis_test(b, c, rho, scenario.eta, scenario.alpha)
    workdir = Path(args.workdir)
    workdir.mkdir(parents=True, exist_ok=True)
    _write_json(workdir / "transcript.json", transcript.to_json(system))
    _write_json(workdir / "outcome.json", outcome.to_json())
    print(
        f"audit: b={b} failures over {rho} provers x {c} challenges, "
        f"lambda_U={outcome.lambda_u:.4f}, decision={outcome.decision}"
    )
    return 0


def cmd_extract(args) -> int:
    scenario = load_scenario(args.scenario)
    system = build_system(scenario)
    provers = _provers_for(scenario, system)
    if args.mode == "worst":
        if not args.subset:
            raise ValueError("worst-case extraction requires --subset")
        subset = [int(v) for v in args.subset.split(",")]
        if len(set(subset)) != scenario.ramp.tau2:
            raise ValueError(
                f"subset must name exactly tau2={scenario.ramp.tau2} distinct provers"
            )
        report = extract_worst_case(system, {i: provers[i] for i in subset})
    else:
        report = extract_average(system, provers)
    workdir = Path(args.workdir)
    workdir.mkdir(parents=True, exist_ok=True)
    _write_json(workdir / "extraction.json", report.to_json())
    recovered = (
        "none" if report.recovered is None else ",".join(map(str, report.recovered))
    )
    print(
        f"extract: mode={report.mode} recovered=({recovered}) "
        f"guaranteed={report.guaranteed}"
    )
    return 0


def cmd_simulate(args) -> int:
    scenario = load_scenario(args.scenario)
    system = build_system(scenario)
    provers = _provers_for(scenario, system)
    workdir = Path(args.workdir)
    workdir.mkdir(parents=True, exist_ok=True)
    _write_json(workdir / "verifier.json", _verifier_json(system, scenario))
    for i in range(1, system.rho + 1):
        _write_json(workdir / f"prover_{i}.json", _prover_json(system, i))
    transcript = run_audits(system, provers, scenario.audits_per_prover, scenario.seed)
    b, c, rho = transcript_to_counts(transcript)
    outcome = audit_hypothesis_test(b, c, rho, scenario.eta, scenario.alpha)
    _write_json(workdir / "transcript.json", transcript.to_json(system))
    _write_json(workdir / "outcome.json", outcome.to_json())
    if scenario.kind == "rep":
        report = extract_average(system, provers)
    else:
        subset = list(range(1, scenario.ramp.tau2 + 1))
        report = extract_worst_case(system, {i: provers[i] for i in subset})
    _write_json(workdir / "extraction.json", report.to_json())
    recovered = ",".join(map(str, report.recovered))
    matches = tuple(report.recovered) == tuple(scenario.message)
    _write_json(
        workdir / "summary.json",
        {
            "decision": outcome.decision,
            "failures": b,
            "recovered": [str(v) for v in report.recovered],
            "recovered_matches_message": matches,
            "extraction_guaranteed": report.guaranteed,
        },
    )
    print(
        f"simulate: decision={outcome.decision} recovered=({recovered}) "
        f"matches_message={matches}"
    )
    return 0


def _parse_floats(text: str) -> tuple[float, ...]:
    return tuple(float(v) for v in text.split(","))


def _parse_ints(text: str) -> tuple[int, ...]:
    return tuple(int(v) for v in text.split(","))


def cmd_stats_table1(args) -> int:
    rows_spec = []
    if args.preset:
        with open(args.preset, encoding="utf-8") as fh:
            for entry in json.load(fh):
                rows_spec.append(
                    (
                        tuple(float(v) for v in entry["f"]),
                        int(entry["t"]),
                        [int(v) for v in entry["b"]],
                    )
                )
    else:
        if args.f is None or args.t is None or args.b is None:
            raise ValueError("table1 needs --f, --t and --b (or --preset)")
        rows_spec.append((_parse_floats(args.f), args.t, list(_parse_ints(args.b))))
    print("f_vector,t,b,exact,poisson,gap")
    for f, t, b_list in rows_spec:
        f_text = "|".join(f"{v:g}" for v in f)
        for row in poisson_vs_exact_report(f, t, b_list):
            print(
                f"{f_text},{t},{row.b},{row.exact:.10g},{row.poisson:.10g},"
                f"{row.gap:.10g}"
            )
    return 0


def cmd_stats_ci(args) -> int:
    lam = lambda_upper(args.b, args.alpha)
    print("b,alpha,lambda_u")
    print(f"{args.b},{args.alpha:g},{lam:.10g}")
    return 0


def cmd_stats_dstar(args) -> int:
    value = sw_dstar(args.n, args.l, args.d, args.q)
    threshold = sw_threshold(args.n, args.l, args.d, args.q)
    payload = {
        "n": args.n,
        "ell": args.l,
        "d": args.d,
        "q": args.q,
        "gamma": sw_gamma(args.n, args.l, args.q),
        "dstar": str(value),
        "dstar_decimal": float(value),
        "threshold": str(threshold),
        "threshold_decimal": float(threshold),
    }
    print(json.dumps(payload, indent=2, sort_keys=True))
    return 0


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mpor",
        description="Multi-prover proof-of-retrievability simulator",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_scenario_command(name: str, help_text: str):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--scenario", type=Path, required=True, help="scenario JSON file")
        p.add_argument("--workdir", type=Path, default=Path("."), help="output directory")
        return p

    add_scenario_command("setup", "write verifier and prover storage files")

    audit = add_scenario_command("audit", "run audits and the hypothesis test")
    audit.add_argument(
        "--rounds", type=int, default=None, help="challenges per prover"
    )

    extract = add_scenario_command("extract", "run an extractor")
    extract.add_argument("--mode", choices=("worst", "average"), required=True)
    extract.add_argument(
        "--subset", default=None, help="comma-separated prover indices (worst mode)"
    )

    add_scenario_command("simulate", "setup + audit + extract pipeline")

    stats = sub.add_parser("stats", help="statistics tables and bounds")
    stats_sub = stats.add_subparsers(dest="stats_command", required=True)

    table1 = stats_sub.add_parser(
        "table1", help="exact Poisson-binomial CDF vs Poisson approximation"
    )
    table1.add_argument("--f", help="comma-separated per-prover failure rates")
    table1.add_argument("--t", type=int, help="challenges per prover")
    table1.add_argument("--b", help="comma-separated failure counts")
    table1.add_argument("--preset", type=Path, help="JSON preset with rows to emit")

    ci = stats_sub.add_parser("ci", help="upper confidence bound lambda_U")
    ci.add_argument("--b", type=int, required=True, help="observed failures")
    ci.add_argument("--alpha", type=float, default=0.05)

    dstar = stats_sub.add_parser("dstar", help="estimated response-code distance")
    dstar.add_argument("--n", type=int, required=True)
    dstar.add_argument("--l", type=int, required=True)
    dstar.add_argument("--d", type=int, required=True)
    dstar.add_argument("--q", type=int, required=True)

    return parser


def main(argv=None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    handlers = {
        "setup": cmd_setup,
        "audit": cmd_audit,
        "extract": cmd_extract,
        "simulate": cmd_simulate,
    }
    try:
        if args.command == "stats":
            stats_handlers = {
                "table1": cmd_stats_table1,
                "ci": cmd_stats_ci,
                "dstar": cmd_stats_dstar,
            }
            return stats_handlers[args.stats_command](args)
        return handlers[args.command](args)
    except (ValueError, KeyError, FileNotFoundError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001 - surface anything else as runtime failure
        print(f"runtime failure: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
