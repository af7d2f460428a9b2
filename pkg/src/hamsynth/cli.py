"""Command-line client for the synthesis service.

Every subcommand builds one HTTP request.  By default the service app runs
in-process (no network); ``--server URL`` targets a remote instance instead.
Exit codes: 0 success, 1 usage or invalid input, 2 expression parse error,
3 verification failure.
"""

from __future__ import annotations

import argparse
import asyncio
import json
import sys
from pathlib import Path

import httpx

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_PARSE = 2
EXIT_VERIFY = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_USAGE)


def _post(path: str, payload: dict, server: str | None):
    if server:
        with httpx.Client(base_url=server, timeout=300.0) as client:
            response = client.post(path, json=payload)
            return response.status_code, response.json()

    async def go():
        from .service import app

        transport = httpx.ASGITransport(app=app)
        async with httpx.AsyncClient(
            transport=transport, base_url="http://hamsynth.internal", timeout=None
        ) as client:
            response = await client.post(path, json=payload)
            return response.status_code, response.json()

    return asyncio.run(go())


def _read(path: str) -> str:
    return Path(path).read_text()


def _format_gate(gate: dict) -> str:
    parts = [gate["kind"], "targets=[" + ",".join(str(q) for q in gate["targets"]) + "]"]
    key = gate.get("key") or {}
    if key:
        inner = ",".join(f"{q}:{key[q]}" for q in sorted(key, key=int))
        parts.append("key={" + inner + "}")
    if gate.get("theta") is not None:
        parts.append(f"theta={gate['theta']:.17g}")
    return " ".join(parts)


def _print_circuit(circuit: dict) -> None:
    for gate in circuit["gates"]:
        print(_format_gate(gate))


def _print_counts(report: dict) -> None:
    print(f"two_qubit {report['two_qubit']}")
    print(f"depth {report['depth']}")
    print(f"rotations {report['rotations']}")
    for kind in sorted(report["counts"]):
        print(f"gate {kind} {report['counts'][kind]}")


def _emit_json(body: dict) -> None:
    print(json.dumps(body, sort_keys=True, separators=(",", ": "), indent=1))


def _source_payload(args) -> dict:
    payload = {}
    if getattr(args, "expr", None) is not None:
        payload["expr"] = args.expr
    if getattr(args, "hubo", None) is not None:
        payload["hubo"] = _read(args.hubo)
    if getattr(args, "fermion", None) is not None:
        payload["fermion"] = _read(args.fermion)
    if getattr(args, "fd", None) is not None:
        payload["fd"] = _read(args.fd)
    if getattr(args, "num_qubits", None) is not None:
        payload["num_qubits"] = args.num_qubits
    return payload


def _add_source_flags(sub) -> None:
    sub.add_argument("-e", "--expr", help="operator expression text")
    sub.add_argument("--hubo", metavar="FILE", help="subset-weight problem file")
    sub.add_argument("--fermion", metavar="FILE", help="fermionic term file")
    sub.add_argument("--fd", metavar="FILE", help="finite-difference grid file")
    sub.add_argument("--num-qubits", type=int, help="widen the register")


def _add_synth_flags(sub, theta_default=1.0) -> None:
    sub.add_argument("--theta", type=float, default=theta_default, help="evolution angle")
    sub.add_argument("--strategy", choices=["direct", "usual"], default="direct")
    sub.add_argument("--parity", choices=["chain", "tree"], default="chain")
    sub.add_argument("--complex-mode", choices=["exact", "split"], default="exact")


def build_parser() -> _Parser:
    parser = _Parser(prog="hamsynth", description=__doc__)
    parser.add_argument("--server", help="remote service URL (default: in-process)")
    parser.add_argument("--out", choices=["text", "json"], default="text")
    subs = parser.add_subparsers(dest="command", required=True)

    synth = subs.add_parser("synth", help="synthesize an evolution circuit")
    _add_source_flags(synth)
    _add_synth_flags(synth)

    pauli = subs.add_parser("pauli", help="expand into Pauli strings")
    _add_source_flags(pauli)

    lcu = subs.add_parser("lcu", help="block-encode a single term")
    _add_source_flags(lcu)
    lcu.add_argument("--no-verify", action="store_true", help="skip reconstruction check")

    trotter = subs.add_parser("trotter", help="product-formula circuit")
    _add_source_flags(trotter)
    trotter.add_argument("--theta", type=float, default=1.0, help="total evolution time")
    trotter.add_argument("--steps", type=int, default=1)
    trotter.add_argument("--order", type=int, choices=[1, 2], default=1)
    trotter.add_argument("--strategy", choices=["direct", "usual"], default="direct")
    trotter.add_argument("--parity", choices=["chain", "tree"], default="chain")

    cnt = subs.add_parser("count", help="gate counts and strategy totals")
    _add_source_flags(cnt)
    _add_synth_flags(cnt)
    cnt.add_argument("--compare", action="store_true", help="model-level strategy totals")

    verify = subs.add_parser("verify", help="check a circuit against the exact evolution")
    _add_source_flags(verify)
    _add_synth_flags(verify)
    verify.add_argument("--steps", type=int, default=1)
    verify.add_argument("--order", type=int, choices=[1, 2], default=1)
    verify.add_argument("--tol", type=float, default=1e-10)

    hubo = subs.add_parser("hubo", help="phase-separation circuit for a problem file")
    hubo.add_argument("file", help="subset-weight problem file")
    hubo.add_argument("--theta", type=float, default=1.0)
    hubo.add_argument("--strategy", choices=["direct", "usual"], default="direct")

    fermion = subs.add_parser("fermion", help="circuit for a fermionic term file")
    fermion.add_argument("file", help="fermionic term file")
    fermion.add_argument("--theta", type=float, default=1.0)
    fermion.add_argument("--parity", choices=["chain", "tree"], default="chain")

    fd = subs.add_parser("fd", help="assemble a finite-difference operator")
    fd.add_argument("file", help="grid file")
    fd.add_argument("--theta", type=float, default=None, help="also emit a circuit")
    fd.add_argument("--steps", type=int, default=1)
    fd.add_argument("--order", type=int, choices=[1, 2], default=1)
    fd.add_argument("--parity", choices=["chain", "tree"], default="chain")

    return parser


def _handle_error(status: int, body: dict) -> int:
    detail = body.get("detail", {})
    if isinstance(detail, dict) and detail.get("kind") == "parse":
        where = ""
        if detail.get("line") is not None:
            where = f" at {detail['line']}:{detail['column']}"
        print(f"parse error{where}: {detail.get('message')}", file=sys.stderr)
        return EXIT_PARSE
    message = detail.get("message") if isinstance(detail, dict) else detail
    print(f"error: {message}", file=sys.stderr)
    return EXIT_USAGE


def _run_command(args) -> int:
    if args.command == "synth":
        payload = _source_payload(args) | {
            "theta": args.theta,
            "strategy": args.strategy,
            "parity": args.parity,
            "complex_mode": args.complex_mode,
        }
        status, body = _post("/synth", payload, args.server)
        if status != 200:
            return _handle_error(status, body)
        if args.out == "json":
            _emit_json(body)
        else:
            _print_circuit(body["circuit"])
        return EXIT_OK

    if args.command == "pauli":
        status, body = _post("/pauli", _source_payload(args), args.server)
        if status != 200:
            return _handle_error(status, body)
        if args.out == "json":
            _emit_json(body)
        else:
            for s in body["strings"]:
                letters = " ".join(
                    f"{s['letters'][q]}{q}" for q in sorted(s["letters"], key=int)
                ) or "I"
                print(f"{s['coefficient']:.17g} {letters}")
        return EXIT_OK

    if args.command == "lcu":
        payload = _source_payload(args) | {"verify": not args.no_verify}
        status, body = _post("/lcu", payload, args.server)
        if status != 200:
            return _handle_error(status, body)
        if args.out == "json":
            _emit_json(body)
        else:
            for pair in body["pairs"]:
                print(f"# coefficient {pair['coefficient']:.17g}")
                _print_circuit(pair["circuit"])
            if body.get("reconstruction_error") is not None:
                print(f"# reconstruction_error {body['reconstruction_error']:.3e}")
        return EXIT_OK

    if args.command == "trotter":
        payload = _source_payload(args) | {
            "t": args.theta,
            "steps": args.steps,
            "order": args.order,
            "strategy": args.strategy,
            "parity": args.parity,
        }
        status, body = _post("/trotter", payload, args.server)
        if status != 200:
            return _handle_error(status, body)
        if args.out == "json":
            _emit_json(body)
        else:
            _print_circuit(body["circuit"])
        return EXIT_OK

    if args.command == "count":
        payload = _source_payload(args) | {
            "theta": args.theta,
            "strategy": args.strategy,
            "parity": args.parity,
            "complex_mode": args.complex_mode,
            "compare": args.compare,
        }
        status, body = _post("/count", payload, args.server)
        if status != 200:
            return _handle_error(status, body)
        if args.out == "json":
            _emit_json(body)
        else:
            _print_counts(body)
            if body.get("totals"):
                t = body["totals"]
                print(f"direct_total {t['direct']}")
                print(f"usual_total {t['usual']}")
                print(f"crossover_order {t['crossover_order']}")
        return EXIT_OK

    if args.command == "verify":
        payload = _source_payload(args) | {
            "theta": args.theta,
            "strategy": args.strategy,
            "parity": args.parity,
            "complex_mode": args.complex_mode,
            "steps": args.steps,
            "order": args.order,
            "tolerance": args.tol,
        }
        status, body = _post("/verify", payload, args.server)
        if status != 200:
            return _handle_error(status, body)
        v = body["verification"]
        passed = v["pass"]
        outcome = "PASS" if passed else "FAIL"
        if args.out == "json":
            _emit_json(body)
        else:
            print(
                f"phase_distance: {v['distance']:.3e} "
                f"(tolerance {v['tolerance']:.1e}): {outcome}"
            )
        return EXIT_OK if passed else EXIT_VERIFY

    if args.command == "hubo":
        payload = {"problem": _read(args.file), "t": args.theta, "strategy": args.strategy}
        status, body = _post("/hubo", payload, args.server)
        if status != 200:
            return _handle_error(status, body)
        if args.out == "json":
            _emit_json(body)
        else:
            _print_circuit(body["circuit"])
        return EXIT_OK

    if args.command == "fermion":
        payload = {"terms": _read(args.file), "theta": args.theta, "parity": args.parity}
        status, body = _post("/fermion", payload, args.server)
        if status != 200:
            return _handle_error(status, body)
        if args.out == "json":
            _emit_json(body)
        else:
            print(f"# expr: {body['expr']}")
            _print_circuit(body["circuit"])
        return EXIT_OK

    if args.command == "fd":
        payload = {
            "grid": _read(args.file),
            "theta": args.theta,
            "steps": args.steps,
            "order": args.order,
            "parity": args.parity,
        }
        status, body = _post("/fd", payload, args.server)
        if status != 200:
            return _handle_error(status, body)
        if args.out == "json":
            _emit_json(body)
        else:
            print(f"num_qubits {body['num_qubits']}")
            print(f"terms {body['num_terms']}")
            if body.get("oracle_distance") is not None:
                print(f"oracle_distance {body['oracle_distance']:.3e}")
            if body.get("circuit"):
                _print_circuit(body["circuit"])
        return EXIT_OK

    raise AssertionError(f"unhandled command {args.command}")


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _run_command(args)
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except httpx.HTTPError as exc:
        print(f"error: request failed: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
