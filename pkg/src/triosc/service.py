"""Request handlers and the FastAPI application.

Handlers are plain functions from request models to response models, so
the CLI can call them in-process and the HTTP layer stays a thin wrapper
that only translates domain exceptions into structured error payloads.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import replace

import numpy as np
from fastapi import FastAPI, HTTPException

from . import fixtures
from .decouple import decouple, log_params, reconstruction_residual
from .entangle import purity_closed_form, purity_from_lw, reduced_density_params
from .errors import (
    ConvergenceError,
    DomainError,
    GimbalLockError,
    InstabilityError,
    OracleAccuracyError,
    PairLimitError,
)
from .model import OscillatorSystem, coupling_matrix, is_stable, normalize
from .oracle import (
    DEFAULT_GRID,
    QuadratureGrid,
    characteristic_lengths,
    eigen3_charpoly,
    quad_normalization,
    quad_purity,
)
from .schemas import (
    AnglesOut,
    DecoupleRequest,
    DecoupleResponse,
    PurityRequest,
    PurityResponse,
    SpectrumLevel,
    SpectrumRequest,
    SpectrumResponse,
    SweepRequest,
    SweepResponse,
    VerifyCheck,
    VerifyRequest,
    VerifyResponse,
    WavefunctionRequest,
    WavefunctionResponse,
)
from .spectrum import (
    MAX_QUANTUM_NUMBER,
    QuantumNumbers,
    energy,
    ground_gaussian,
    wavefunction,
)
from .su3 import EulerAngles, rotation, rotation_via_exponentials
from .limits import verify_pair_limit

__all__ = [
    "handle_decouple",
    "handle_spectrum",
    "handle_wavefunction",
    "handle_purity",
    "handle_sweep",
    "handle_verify",
    "error_code",
    "create_app",
    "app",
]

# sweep parameter paths accepted by handle_sweep
_SWEEP_FIELDS = {
    "masses.m1": "m1",
    "masses.m2": "m2",
    "masses.m3": "m3",
    "frequencies.w1": "w1",
    "frequencies.w2": "w2",
    "frequencies.w3": "w3",
    "couplings.d12": "d12",
    "couplings.d13": "d13",
    "couplings.d23": "d23",
    "hbar": "hbar",
}

_MAX_SWEEP_POINTS = 100_000
_MAX_WAVEFUNCTION_POINTS = 65


def handle_decouple(req: DecoupleRequest) -> DecoupleResponse:
    sys = req.system.to_system()
    ns = normalize(sys)
    cm = coupling_matrix(ns)
    modes = decouple(cm)
    lp = log_params(modes)
    return DecoupleResponse(
        sigma=[modes.sigma1, modes.sigma2, modes.sigma3],
        angles=AnglesOut(
            theta=modes.angles.theta,
            phi=modes.angles.phi,
            varphi=modes.angles.varphi,
        ),
        varpi=lp.varpi,
        log_diffs=[lp.d1, lp.d2, lp.d3],
        residual=reconstruction_residual(modes, cm),
        degenerate=modes.degenerate,
    )


def handle_spectrum(req: SpectrumRequest) -> SpectrumResponse:
    if not 0 <= req.n_max <= MAX_QUANTUM_NUMBER:
        raise DomainError(
            f"n_max must be in 0..{MAX_QUANTUM_NUMBER}, got {req.n_max!r}"
        )
    sys = req.system.to_system()
    ns = normalize(sys)
    modes = decouple(coupling_matrix(ns))
    levels = []
    for n1 in range(req.n_max + 1):
        for n2 in range(req.n_max + 1 - n1):
            for n3 in range(req.n_max + 1 - n1 - n2):
                qn = QuantumNumbers(n1, n2, n3)
                levels.append(
                    SpectrumLevel(
                        n1=n1, n2=n2, n3=n3, energy=energy(modes, qn, ns.hbar)
                    )
                )
    levels.sort(key=lambda lv: (lv.energy, lv.n1, lv.n2, lv.n3))
    return SpectrumResponse(levels=levels)


def handle_wavefunction(req: WavefunctionRequest) -> WavefunctionResponse:
    if not 2 <= req.points <= _MAX_WAVEFUNCTION_POINTS:
        raise DomainError(
            f"points must be in 2..{_MAX_WAVEFUNCTION_POINTS}, got {req.points!r}"
        )
    if not req.extent > 0.0:
        raise DomainError(f"extent must be positive, got {req.extent!r}")
    qn = QuantumNumbers(*req.n)
    sys = req.system.to_system()
    ns = normalize(sys)
    modes = decouple(coupling_matrix(ns))
    lengths = characteristic_lengths(modes, ns)
    axes = [
        np.linspace(-req.extent * lengths[i], req.extent * lengths[i], req.points)
        for i in range(3)
    ]
    x1, x2, x3 = np.meshgrid(axes[0], axes[1], axes[2], indexing="ij", copy=False)
    psi = np.asarray(wavefunction(qn, modes, ns, x1, x2, x3)).ravel()
    rows = [
        [float(a), float(b), float(c), float(v)]
        for a, b, c, v in zip(x1.ravel(), x2.ravel(), x3.ravel(), psi)
    ]
    return WavefunctionResponse(columns=["x1", "x2", "x3", "psi"], rows=rows)


def handle_purity(req: PurityRequest) -> PurityResponse:
    sys = req.system.to_system()
    ns = normalize(sys)
    modes = decouple(coupling_matrix(ns))
    g = ground_gaussian(modes, ns)
    rd = reduced_density_params(g, kept_index=req.kept)
    result = purity_from_lw(rd)
    oracle_purity = None
    discrepancy = None
    if req.oracle:
        oracle_purity = quad_purity(g, kept_index=req.kept, grid=DEFAULT_GRID)
        discrepancy = abs(result.purity - oracle_purity)
    return PurityResponse(
        kept=req.kept,
        L=rd.big_l,
        w=rd.w,
        purity=result.purity,
        entropy=result.entropy,
        oracle_purity=oracle_purity,
        discrepancy=discrepancy,
    )


def _sweep_values(start: float, stop: float, steps: int) -> list[float]:
    if steps < 2:
        raise DomainError(f"steps must be >= 2, got {steps!r}")
    if not start <= stop:
        raise DomainError(f"start must be <= stop, got start={start!r} stop={stop!r}")
    return [start + (stop - start) * i / (steps - 1) for i in range(steps)]


def _sweep_point(
    sys: OscillatorSystem, kept: int, assignments: tuple[tuple[str, float], ...]
) -> list[float | str]:
    point = replace(sys, **dict(assignments))
    row: list[float | str] = [value for _, value in assignments]
    if not is_stable(coupling_matrix(normalize(point))):
        row.extend(["unstable", ""])
        return row
    ns = normalize(point)
    modes = decouple(coupling_matrix(ns))
    rd = reduced_density_params(ground_gaussian(modes, ns), kept_index=kept)
    result = purity_from_lw(rd)
    row.extend([result.purity, result.entropy])
    return row


def handle_sweep(req: SweepRequest) -> SweepResponse:
    if req.parameter not in _SWEEP_FIELDS:
        raise DomainError(
            f"unknown sweep parameter {req.parameter!r}; "
            f"expected one of {sorted(_SWEEP_FIELDS)}"
        )
    if not 1 <= req.threads <= 256:
        raise DomainError(f"threads must be in 1..256, got {req.threads!r}")
    sys = req.system.to_system()
    field1 = _SWEEP_FIELDS[req.parameter]
    values1 = _sweep_values(req.start, req.stop, req.steps)
    columns = [req.parameter]
    tasks: list[tuple[tuple[str, float], ...]] = []
    if req.parameter2 is not None:
        if req.parameter2 not in _SWEEP_FIELDS:
            raise DomainError(
                f"unknown sweep parameter {req.parameter2!r}; "
                f"expected one of {sorted(_SWEEP_FIELDS)}"
            )
        if req.start2 is None or req.stop2 is None or req.steps2 is None:
            raise DomainError("parameter2 requires start2, stop2 and steps2")
        if req.parameter2 == req.parameter:
            raise DomainError("parameter2 must differ from parameter")
        field2 = _SWEEP_FIELDS[req.parameter2]
        values2 = _sweep_values(req.start2, req.stop2, req.steps2)
        columns.append(req.parameter2)
        # row-major: the first parameter is the slow axis
        tasks = [
            ((field1, v1), (field2, v2)) for v1 in values1 for v2 in values2
        ]
    else:
        tasks = [((field1, v1),) for v1 in values1]
    if len(tasks) > _MAX_SWEEP_POINTS:
        raise DomainError(
            f"sweep would evaluate {len(tasks)} points, cap is {_MAX_SWEEP_POINTS}"
        )
    columns.extend(["purity", "entropy"])

    if req.threads == 1:
        rows = [_sweep_point(sys, req.kept, task) for task in tasks]
    else:
        # map() preserves submission order, so the output is independent
        # of scheduling and thread count
        with ThreadPoolExecutor(max_workers=req.threads) as pool:
            rows = list(
                pool.map(lambda task: _sweep_point(sys, req.kept, task), tasks)
            )
    return SweepResponse(columns=columns, rows=rows)


def _random_stable_systems(count: int, seed: int) -> list[OscillatorSystem]:
    rng = np.random.default_rng(seed)
    out: list[OscillatorSystem] = []
    while len(out) < count:
        sys = OscillatorSystem(
            m1=float(rng.uniform(0.5, 2.5)),
            m2=float(rng.uniform(0.5, 2.5)),
            m3=float(rng.uniform(0.5, 2.5)),
            w1=float(rng.uniform(0.8, 2.0)),
            w2=float(rng.uniform(0.8, 2.0)),
            w3=float(rng.uniform(0.8, 2.0)),
            d12=float(rng.normal(0.0, 0.3)),
            d13=float(rng.normal(0.0, 0.3)),
            d23=float(rng.normal(0.0, 0.3)),
        )
        if is_stable(coupling_matrix(normalize(sys))):
            out.append(sys)
    return out


def _system_checks(sys: OscillatorSystem) -> list[VerifyCheck]:
    """Consistency checks of the full pipeline on one given system."""
    checks: list[VerifyCheck] = []
    ns = normalize(sys)
    cm = coupling_matrix(ns)
    modes = decouple(cm)  # raises InstabilityError for unstable input
    lp = log_params(modes)
    g = ground_gaussian(modes, ns)

    checks.append(
        _check("decouple-reconstruction", reconstruction_residual(modes, cm), 1e-10)
    )
    jac = np.sort(np.array(modes.sigma) ** 2)[::-1]
    ref = eigen3_charpoly(cm.r)
    scale = max(1.0, float(np.abs(ref).max()))
    checks.append(
        _check("eigenvalue-cross-check", float(np.abs(jac - ref).max()) / scale, 1e-10)
    )
    worst_consistency = 0.0
    worst_oracle = 0.0
    for kept in (1, 2, 3):
        p_lw = purity_from_lw(reduced_density_params(g, kept_index=kept)).purity
        p_cf = purity_closed_form(lp, modes.angles, kept_index=kept).purity
        worst_consistency = max(worst_consistency, abs(p_lw - p_cf))
        worst_oracle = max(worst_oracle, abs(p_lw - quad_purity(g, kept_index=kept)))
    checks.append(_check("purity-consistency", worst_consistency, 1e-10))
    checks.append(_check("purity-oracle", worst_oracle, 1e-6))
    qn = QuantumNumbers(0, 0, 0)
    norm = quad_normalization(
        lambda a, b, c: wavefunction(qn, modes, ns, a, b, c),
        characteristic_lengths(modes, ns),
    )
    checks.append(_check("ground-normalization", abs(norm - 1.0), 1e-6))
    return checks


def _check(name: str, observed: float, threshold: float) -> VerifyCheck:
    return VerifyCheck(
        name=name,
        threshold=threshold,
        observed=observed,
        passed=bool(observed <= threshold),
    )


def _suite_checks() -> list[VerifyCheck]:
    """The built-in self-test battery run by verify without an input."""
    checks: list[VerifyCheck] = []
    rng = np.random.default_rng(20260819)

    from .su3 import commutator_residual, conjugation_residuals

    worst = max(
        commutator_residual(j, k) for j in range(1, 9) for k in range(1, 9)
    )
    checks.append(_check("su3-commutators", worst, 1e-12))

    worst = 0.0
    for _ in range(20):
        th, ph, vp = rng.uniform(-math.pi / 2 + 0.05, math.pi / 2 - 0.05, 3)
        diag = tuple(rng.normal(0.0, 2.0, 3))
        worst = max(worst, max(conjugation_residuals(th, ph, vp, diag).values()))
    checks.append(_check("su3-conjugations", worst, 1e-12))

    worst_exp = 0.0
    worst_orth = 0.0
    for _ in range(25):
        ang = EulerAngles(*(float(v) for v in rng.uniform(-1.5, 1.5, 3)))
        closed = rotation(ang)
        via = rotation_via_exponentials(ang)
        worst_exp = max(worst_exp, float(np.abs(closed.m - via.m).max()))
        worst_orth = max(
            worst_orth,
            closed.orthogonality_residual(),
            abs(closed.det() - 1.0),
        )
    checks.append(_check("rotation-exponential-agreement", worst_exp, 1e-12))
    checks.append(_check("rotation-orthogonality", worst_orth, 1e-12))

    systems = _random_stable_systems(100, seed=20260820)
    worst_recon = 0.0
    worst_eig = 0.0
    worst_pur = 0.0
    for sys in systems:
        ns = normalize(sys)
        cm = coupling_matrix(ns)
        modes = decouple(cm)
        worst_recon = max(worst_recon, reconstruction_residual(modes, cm))
        jac = np.sort(np.array(modes.sigma) ** 2)[::-1]
        ref = eigen3_charpoly(cm.r)
        worst_eig = max(
            worst_eig, float(np.abs(jac - ref).max()) / max(1.0, float(np.abs(ref).max()))
        )
        lp = log_params(modes)
        g = ground_gaussian(modes, ns)
        p_lw = purity_from_lw(reduced_density_params(g, kept_index=1)).purity
        p_cf = purity_closed_form(lp, modes.angles, kept_index=1).purity
        worst_pur = max(worst_pur, abs(p_lw - p_cf))
    checks.append(_check("decouple-reconstruction", worst_recon, 1e-10))
    checks.append(_check("eigenvalue-cross-check", worst_eig, 1e-10))
    checks.append(_check("purity-consistency", worst_pur, 1e-10))

    worst = 0.0
    worst = max(
        worst,
        verify_pair_limit(
            OscillatorSystem(m1=1, m2=1, m3=1, w1=1, w2=1, w3=1, d12=1.0), "12"
        ),
        verify_pair_limit(
            OscillatorSystem(m1=2, m2=1, m3=0.5, w1=1.1, w2=1, w3=0.9, d13=0.33), "13"
        ),
        verify_pair_limit(
            OscillatorSystem(m1=1, m2=1.5, m3=0.7, w1=1, w2=1.2, w3=0.8, d23=0.25), "23"
        ),
    )
    checks.append(_check("pair-limit", worst, 1e-10))

    mixed = fixtures.mixed_system()
    ns = normalize(mixed)
    modes = decouple(coupling_matrix(ns))
    g = ground_gaussian(modes, ns)
    worst = 0.0
    for kept in (1, 2, 3):
        p = purity_from_lw(reduced_density_params(g, kept_index=kept)).purity
        worst = max(worst, abs(p - fixtures.MIXED_PURITY_QUAD[kept]))
    checks.append(_check("purity-regression", worst, 1e-8))
    checks.append(
        _check(
            "energy-regression",
            abs(
                energy(modes, QuantumNumbers(0, 0, 0), ns.hbar)
                - fixtures.MIXED_GROUND_ENERGY
            ),
            1e-12,
        )
    )
    p_live = quad_purity(g, kept_index=1)
    p_closed = purity_from_lw(reduced_density_params(g, kept_index=1)).purity
    checks.append(_check("purity-oracle", abs(p_live - p_closed), 1e-6))
    qn = QuantumNumbers(0, 0, 0)
    norm = quad_normalization(
        lambda a, b, c: wavefunction(qn, modes, ns, a, b, c),
        characteristic_lengths(modes, ns),
    )
    checks.append(_check("ground-normalization", abs(norm - 1.0), 1e-6))
    return checks


def handle_verify(req: VerifyRequest) -> VerifyResponse:
    if req.system is None:
        checks = _suite_checks()
        if req.expected is not None:
            raise DomainError("expected values require a system to verify against")
    else:
        sys = req.system.to_system()
        checks = _system_checks(sys)
        if req.expected is not None:
            ns = normalize(sys)
            modes = decouple(coupling_matrix(ns))
            rd = reduced_density_params(
                ground_gaussian(modes, ns), kept_index=1
            )
            result = purity_from_lw(rd)
            pairs = (
                ("expected-L", req.expected.L, rd.big_l),
                ("expected-w", req.expected.w, rd.w),
                ("expected-purity", req.expected.purity, result.purity),
            )
            for name, expected, computed in pairs:
                if expected is None:
                    continue
                diff = abs(computed - expected) / max(1.0, abs(expected))
                checks.append(_check(name, diff, 1e-10))
    return VerifyResponse(passed=all(c.passed for c in checks), checks=checks)


def error_code(exc: Exception) -> str:
    """Stable machine-readable tag for a domain exception."""
    if isinstance(exc, InstabilityError):
        return "instability"
    if isinstance(exc, OracleAccuracyError):
        return "oracle-accuracy"
    if isinstance(exc, GimbalLockError):
        return "gimbal-lock"
    if isinstance(exc, PairLimitError):
        return "pair-limit"
    if isinstance(exc, ConvergenceError):
        return "convergence"
    if isinstance(exc, DomainError):
        return "domain"
    return "internal"


_DOMAIN_EXCEPTIONS = (
    DomainError,
    InstabilityError,
    OracleAccuracyError,
    GimbalLockError,
    PairLimitError,
    ConvergenceError,
)


def create_app() -> FastAPI:
    app = FastAPI(
        title="triosc",
        description="Coupled three-oscillator decoupling, spectra and entanglement.",
        version="0.1.0",
    )

    def guarded(handler, request):
        try:
            return handler(request)
        except _DOMAIN_EXCEPTIONS as exc:
            raise HTTPException(
                status_code=400,
                detail={"code": error_code(exc), "message": str(exc)},
            ) from exc

    @app.post("/decouple", response_model=DecoupleResponse)
    def decouple_endpoint(req: DecoupleRequest) -> DecoupleResponse:
        return guarded(handle_decouple, req)

    @app.post("/spectrum", response_model=SpectrumResponse)
    def spectrum_endpoint(req: SpectrumRequest) -> SpectrumResponse:
        return guarded(handle_spectrum, req)

    @app.post("/wavefunction", response_model=WavefunctionResponse)
    def wavefunction_endpoint(req: WavefunctionRequest) -> WavefunctionResponse:
        return guarded(handle_wavefunction, req)

    @app.post("/purity", response_model=PurityResponse)
    def purity_endpoint(req: PurityRequest) -> PurityResponse:
        return guarded(handle_purity, req)

    @app.post("/sweep", response_model=SweepResponse)
    def sweep_endpoint(req: SweepRequest) -> SweepResponse:
        return guarded(handle_sweep, req)

    @app.post("/verify", response_model=VerifyResponse)
    def verify_endpoint(req: VerifyRequest) -> VerifyResponse:
        return guarded(handle_verify, req)

    return app


app = create_app()
