"""Command-line client for the service handlers.

By default every command runs in-process; --url posts the same request to
a running server instead.  Output is byte-deterministic: floats render via
the shortest-roundtrip '%.17g', dictionaries keep declared field order and
no timestamps or environment data are emitted.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from pydantic import ValidationError

from .errors import (
    ConvergenceError,
    DomainError,
    GimbalLockError,
    InstabilityError,
    OracleAccuracyError,
    PairLimitError,
)
from .model import system_from_dict
from .schemas import (
    DecoupleRequest,
    DecoupleResponse,
    ExpectedValues,
    PurityRequest,
    PurityResponse,
    SpectrumRequest,
    SpectrumResponse,
    SweepRequest,
    SweepResponse,
    SystemIn,
    VerifyRequest,
    VerifyResponse,
    WavefunctionRequest,
    WavefunctionResponse,
)
from . import service

__all__ = ["main"]

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_PARSE = 2
EXIT_INSTABILITY = 3
EXIT_ORACLE = 4
EXIT_VERIFY = 5

_CODE_EXITS = {
    "domain": EXIT_PARSE,
    "pair-limit": EXIT_PARSE,
    "gimbal-lock": EXIT_PARSE,
    "instability": EXIT_INSTABILITY,
    "oracle-accuracy": EXIT_ORACLE,
    "convergence": EXIT_ORACLE,
    "internal": EXIT_ERROR,
}


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        # normalize -0.0 so equal values render identically
        return format(value + 0.0, ".17g")
    if isinstance(value, int):
        return str(value)
    if value is None:
        return "null"
    return json.dumps(value)


def _render_json(value, indent: int = 0) -> str:
    pad = "  " * indent
    if isinstance(value, dict):
        if not value:
            return "{}"
        lines = []
        for key, item in value.items():
            lines.append(f'{pad}  {json.dumps(key)}: {_render_json(item, indent + 1)}')
        return "{\n" + ",\n".join(lines) + "\n" + pad + "}"
    if isinstance(value, list):
        if not value:
            return "[]"
        rendered = [_render_json(item, indent + 1) for item in value]
        if all(not isinstance(item, (dict, list)) for item in value):
            return "[" + ", ".join(rendered) + "]"
        lines = [f"{pad}  {r}" for r in rendered]
        return "[\n" + ",\n".join(lines) + "\n" + pad + "]"
    return _fmt(value)


def _render_csv(columns: list[str], rows: list[list]) -> str:
    lines = [",".join(columns)]
    for row in rows:
        lines.append(",".join(_fmt(v) if not isinstance(v, str) else v for v in row))
    return "\n".join(lines) + "\n"


def _load_system(path: str) -> tuple[SystemIn, dict | None]:
    """Read the canonical input file; returns (system, expected-or-None)."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise DomainError(f"cannot read input file {path!r}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise DomainError(f"invalid JSON in {path!r}: {exc}") from exc
    expected = None
    if isinstance(data, dict) and "expected" in data:
        data = dict(data)
        expected = data.pop("expected")
        if not isinstance(expected, dict):
            raise DomainError('"expected" must be a mapping with L, w, purity')
    sys_obj = system_from_dict(data)
    return SystemIn.from_system(sys_obj), expected


def _post(url: str, endpoint: str, payload: dict):
    import httpx

    response = httpx.post(url.rstrip("/") + endpoint, json=payload, timeout=600.0)
    if response.status_code != 200:
        try:
            detail = response.json().get("detail")
        except Exception:
            detail = None
        if isinstance(detail, dict) and "code" in detail:
            print(f"error: {detail.get('message', detail['code'])}", file=sys.stderr)
            raise SystemExit(_CODE_EXITS.get(detail["code"], EXIT_ERROR))
        print(f"error: server returned {response.status_code}", file=sys.stderr)
        raise SystemExit(EXIT_PARSE if response.status_code == 422 else EXIT_ERROR)
    return response.json()


def _dispatch(args, endpoint: str, handler, request, response_cls):
    if args.url:
        data = _post(args.url, endpoint, request.model_dump())
        return response_cls.model_validate(data)
    return handler(request)


def _emit(text: str, output: str | None) -> None:
    if output:
        with open(output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _cmd_decouple(args) -> int:
    system, _ = _load_system(args.input)
    resp: DecoupleResponse = _dispatch(
        args, "/decouple", service.handle_decouple, DecoupleRequest(system=system),
        DecoupleResponse,
    )
    _emit(_render_json(resp.model_dump()) + "\n", args.output)
    return EXIT_OK


def _cmd_spectrum(args) -> int:
    system, _ = _load_system(args.input)
    resp: SpectrumResponse = _dispatch(
        args, "/spectrum", service.handle_spectrum,
        SpectrumRequest(system=system, n_max=args.n_max), SpectrumResponse,
    )
    rows = [[lv.n1, lv.n2, lv.n3, lv.energy] for lv in resp.levels]
    _emit(_render_csv(["n1", "n2", "n3", "E"], rows), args.output)
    return EXIT_OK


def _cmd_wavefunction(args) -> int:
    system, _ = _load_system(args.input)
    resp: WavefunctionResponse = _dispatch(
        args, "/wavefunction", service.handle_wavefunction,
        WavefunctionRequest(
            system=system, n=list(args.quantum), points=args.points, extent=args.extent
        ),
        WavefunctionResponse,
    )
    _emit(_render_csv(resp.columns, resp.rows), args.output)
    return EXIT_OK


def _cmd_purity(args) -> int:
    system, _ = _load_system(args.input)
    resp: PurityResponse = _dispatch(
        args, "/purity", service.handle_purity,
        PurityRequest(system=system, kept=args.kept, oracle=args.oracle),
        PurityResponse,
    )
    payload = resp.model_dump()
    if not args.oracle:
        payload.pop("oracle_purity")
        payload.pop("discrepancy")
    _emit(_render_json(payload) + "\n", args.output)
    return EXIT_OK


def _cmd_sweep(args) -> int:
    system, _ = _load_system(args.input)
    resp: SweepResponse = _dispatch(
        args, "/sweep", service.handle_sweep,
        SweepRequest(
            system=system,
            parameter=args.param,
            start=args.start,
            stop=args.stop,
            steps=args.steps,
            parameter2=args.param2,
            start2=args.start2,
            stop2=args.stop2,
            steps2=args.steps2,
            kept=args.kept,
            threads=args.threads,
        ),
        SweepResponse,
    )
    _emit(_render_csv(resp.columns, resp.rows), args.output)
    return EXIT_OK


def _cmd_verify(args) -> int:
    system = None
    expected_model = None
    if args.input:
        system, expected = _load_system(args.input)
        if expected is not None:
            try:
                expected_model = ExpectedValues.model_validate(expected)
            except ValidationError as exc:
                raise DomainError(f'invalid "expected" block: {exc}') from exc
    resp: VerifyResponse = _dispatch(
        args, "/verify", service.handle_verify,
        VerifyRequest(system=system, expected=expected_model), VerifyResponse,
    )
    lines = []
    for check in resp.checks:
        verdict = "PASS" if check.passed else "FAIL"
        lines.append(
            f"check {check.name}: observed {_fmt(check.observed)} "
            f"(threshold {_fmt(check.threshold)}): {verdict}"
        )
    failed = [c for c in resp.checks if not c.passed]
    if resp.passed:
        lines.append(f"RESULT: PASS ({len(resp.checks)} checks)")
    else:
        names = ", ".join(c.name for c in failed)
        lines.append(f"RESULT: FAIL ({len(failed)} of {len(resp.checks)} checks: {names})")
    _emit("\n".join(lines) + "\n", args.output)
    return EXIT_OK if resp.passed else EXIT_VERIFY


def _quantum_triple(text: str) -> tuple[int, int, int]:
    parts = text.split(",")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError("expected three comma-separated integers")
    try:
        return tuple(int(p) for p in parts)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="triosc",
        description="Coupled three-oscillator decoupling, spectra and entanglement.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser, input_required: bool = True) -> None:
        p.add_argument(
            "--input",
            required=input_required,
            help="path to the system JSON file",
        )
        p.add_argument("--output", help="write the result here instead of stdout")
        p.add_argument("--url", help="POST to a running server instead of in-process")

    p = sub.add_parser("decouple", help="normal modes, angles and log parameters")
    common(p)
    p.set_defaults(func=_cmd_decouple)

    p = sub.add_parser("spectrum", help="energy levels up to a total excitation")
    common(p)
    p.add_argument("--n-max", type=int, default=1, help="max total excitation number")
    p.set_defaults(func=_cmd_spectrum)

    p = sub.add_parser("wavefunction", help="sample a stationary state on a grid")
    common(p)
    p.add_argument(
        "--quantum",
        type=_quantum_triple,
        default=(0, 0, 0),
        help="mode excitation numbers as n1,n2,n3",
    )
    p.add_argument("--points", type=int, default=9, help="grid points per axis")
    p.add_argument(
        "--extent", type=float, default=3.0,
        help="half-width in characteristic lengths",
    )
    p.set_defaults(func=_cmd_wavefunction)

    p = sub.add_parser("purity", help="reduced ground-state purity of one oscillator")
    common(p)
    p.add_argument("--kept", type=int, default=1, choices=(1, 2, 3))
    p.add_argument(
        "--oracle", action="store_true",
        help="also integrate tr(rho^2) numerically and report the discrepancy",
    )
    p.set_defaults(func=_cmd_purity)

    p = sub.add_parser("sweep", help="purity along one or two parameter ranges")
    common(p)
    p.add_argument("--param", required=True, help="e.g. couplings.d12 or masses.m1")
    p.add_argument("--start", type=float, required=True)
    p.add_argument("--stop", type=float, required=True)
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--param2", help="optional second parameter (outer x inner grid)")
    p.add_argument("--start2", type=float)
    p.add_argument("--stop2", type=float)
    p.add_argument("--steps2", type=int)
    p.add_argument("--kept", type=int, default=1, choices=(1, 2, 3))
    p.add_argument(
        "--threads",
        type=int,
        default=max(1, os.cpu_count() or 1),
        help="worker threads (default: available parallelism)",
    )
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("verify", help="run consistency checks (optionally on an input)")
    common(p, input_required=False)
    p.set_defaults(func=_cmd_verify)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InstabilityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INSTABILITY
    except (OracleAccuracyError, ConvergenceError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ORACLE
    except (DomainError, PairLimitError, GimbalLockError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
