"""End-to-end guessing: recurrence, evaluation at 1/m, algdep, interpolation, verification.

Also houses sequence parsing, batch runs and report serialization so the
command line stays a thin shell.
"""

from __future__ import annotations

import json
import logging
import re
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from fractions import Fraction
from typing import Iterable, Optional

from .exceptions import DegreeMismatch, GFGuessError, InputError, MalformedLine, NoBranchMatches
from .exceptions import NonContiguousIndex, UnstableInterpolation
from .lattice import algdep
from .numerics import Fixed
from .recurrence import PRecurrence, TermSequence, fit_recurrence
from .reconstruct import BivariatePoly, RadicalClosedForm, Verification, assemble_bivariate, search_direct
from .reconstruct import solve_closed_form, verify_candidate
from .series import eval_at_inverse_int

logger = logging.getLogger(__name__)

MODES = ("auto", "recurrence-only", "direct-only", "lattice-only")
FOUND = ("conjecture-found", "recurrence-found")
NEGATIVE = ("no-recurrence", "no-relation")


@dataclass(frozen=True)
class PipelineConfig:
    m0: int = 100
    points: Optional[int] = None  # defaults to deg_z_bound + 4
    deg_y: int = 2
    deg_y_cap: int = 6
    deg_z_bound: int = 12
    precision: int = 200
    max_order: int = 6
    max_degree: int = 6
    guard: int = 3
    slack: int = 2
    mode: str = "auto"
    workers: int = 1
    max_points: Optional[int] = None  # defaults to twice the initial point count

    def __post_init__(self):
        if self.m0 < 2:
            raise InputError("m0 must be at least 2")
        if self.points is not None and self.points < 2:
            raise InputError("points must be at least 2")
        if self.precision < 50:
            raise InputError("precision must be at least 50 digits")
        if self.mode not in MODES:
            raise InputError(f"mode must be one of {', '.join(MODES)}")
        for name in ("deg_y", "deg_y_cap", "deg_z_bound", "max_order", "guard", "workers"):
            if getattr(self, name) < 1:
                raise InputError(f"{name} must be positive")
        if self.max_degree < 0 or self.slack < 0:
            raise InputError("max_degree and slack must be non-negative")

    @property
    def n_points(self) -> int:
        return self.points if self.points is not None else self.deg_z_bound + 4

    @property
    def point_cap(self) -> int:
        return self.max_points if self.max_points is not None else 2 * self.n_points


@dataclass
class Report:
    terms: tuple[Fraction, ...]
    config: PipelineConfig
    label: Optional[str] = None
    status: str = "pending"
    stage: Optional[str] = None
    message: Optional[str] = None
    route: Optional[str] = None
    recurrence: Optional[PRecurrence] = None
    evaluations: list[tuple[int, Fixed]] = field(default_factory=list)
    polys: list[tuple[int, tuple[int, ...]]] = field(default_factory=list)
    equation: Optional[BivariatePoly] = None
    closed_form: Optional[RadicalClosedForm] = None
    verification: Optional[Verification] = None
    timings: dict[str, float] = field(default_factory=dict)

    @property
    def found(self) -> bool:
        return self.status in FOUND

    def fail(self, stage: str, exc_or_status, message: Optional[str] = None) -> "Report":
        if isinstance(exc_or_status, GFGuessError):
            self.status = exc_or_status.status
            self.message = str(exc_or_status)
        else:
            self.status = exc_or_status
            self.message = message
        self.stage = stage
        return self

    def to_dict(self, timings: bool = True) -> dict:
        rec = None
        if self.recurrence is not None:
            r = self.recurrence
            rec = {
                "order": r.order,
                "degree": r.degree,
                "coeffs": [_int_strings(p.coeffs) for p in r.coeffs],
                "inhom": _int_strings(r.inhom.coeffs) if r.inhom is not None else None,
                "initials": [str(t) for t in r.initials],
                "text": str(r),
            }
        eq = None
        if self.equation is not None:
            eq = {"yCoeffs": [[str(c) for c in row] for row in self.equation.int_rows()], "text": str(self.equation)}
        ver = None
        if self.verification is not None:
            v = self.verification
            ver = {
                "passed": v.passed,
                "valuation": v.valuation,
                "termCount": v.term_count,
                "seriesReproduces": v.series_reproduces,
            }
        out = {
            "label": self.label,
            "terms": [str(t) for t in self.terms],
            "config": asdict(self.config),
            "status": self.status,
            "stage": self.stage,
            "message": self.message,
            "route": self.route,
            "recurrence": rec,
            "evaluations": [{"m": m, "value": str(x)} for m, x in self.evaluations],
            "algdep": [{"m": m, "coeffs": [str(c) for c in p]} for m, p in self.polys],
            "equation": eq,
            "closedForm": str(self.closed_form) if self.closed_form is not None else None,
            "verification": ver,
        }
        if timings:
            out["timings"] = {k: round(v, 6) for k, v in self.timings.items()}
        return out


def _int_strings(coeffs) -> list[str]:
    return [str(c) for c in coeffs]


class _Timer:
    def __init__(self, report: Report, key: str):
        self.report, self.key = report, key

    def __enter__(self):
        self.t0 = time.perf_counter()

    def __exit__(self, *exc):
        self.report.timings[self.key] = self.report.timings.get(self.key, 0.0) + time.perf_counter() - self.t0
        return False


# ---------------------------------------------------------------- stages


def _evaluate_point(rec: PRecurrence, m: int, p: int, deg: int):
    value = eval_at_inverse_int(rec, m, p)
    return m, value, algdep(value, deg)


def _evaluate_points(rec, ms, cfg: PipelineConfig, deg: int, pool):
    if pool is None:
        return [_evaluate_point(rec, m, cfg.precision, deg) for m in ms]
    n = len(ms)
    return list(pool.map(_evaluate_point, [rec] * n, ms, [cfg.precision] * n, [deg] * n))


def _lattice_route(report: Report, rec: PRecurrence, cfg: PipelineConfig, pool) -> Optional[BivariatePoly]:
    """Evaluate, run algdep per point and interpolate; ``None`` if no relation."""
    for J in range(cfg.deg_y, cfg.deg_y_cap + 1):
        ms = [cfg.m0 + i for i in range(cfg.n_points)]
        next_m = ms[-1] + 1
        with _Timer(report, "evaluation"):
            results = {m: (x, P) for m, x, P in _evaluate_points(rec, ms, cfg, J, pool)}
        if any(P is None for _, P in results.values()):
            logger.info("algdep found no relation of degree <= %d; escalating", J)
            continue
        while True:
            ms.sort()
            polys = [results[m][1] for m in ms]
            try:
                with _Timer(report, "assembly"):
                    P = assemble_bivariate(polys, ms, guard=cfg.guard)
                break
            except DegreeMismatch:
                # a lower degree at isolated points means a degenerate value there
                top = max(len(p) for p in polys)
                drop = [m for m, p in zip(ms, polys) if len(p) < top]
            except UnstableInterpolation as exc:
                drop = [ms[i] for i in exc.outliers]
                if len(ms) >= cfg.point_cap:
                    raise
            fresh = list(range(next_m, next_m + max(len(drop), 4 if not drop else 0)))
            if len(ms) - len(drop) + len(fresh) > cfg.point_cap:
                raise UnstableInterpolation(f"no stable interpolation within {cfg.point_cap} points")
            next_m += len(fresh)
            for m in drop:
                ms.remove(m)
            with _Timer(report, "evaluation"):
                for m, x, poly in _evaluate_points(rec, fresh, cfg, J, pool):
                    if poly is None:
                        raise UnstableInterpolation(f"algdep failed at replacement point m={m}")
                    results[m] = (x, poly)
                    ms.append(m)
        report.evaluations = [(m, results[m][0]) for m in ms]
        report.polys = [(m, results[m][1]) for m in ms]
        return P
    return None


def _conclude(report: Report, P: BivariatePoly, seq: TermSequence, cfg: PipelineConfig, route: str) -> bool:
    report.equation = P
    report.route = route
    with _Timer(report, "closed_form"):
        if P.y_degree <= 2:
            try:
                report.closed_form = solve_closed_form(P, seq[0], seq[1] if len(seq) > 1 else None)
            except NoBranchMatches as exc:
                logger.info("%s", exc)
    with _Timer(report, "verification"):
        v = verify_candidate(P, seq, cfg.slack)
    report.verification = v
    if v.passed and v.series_reproduces is not False:
        report.status, report.stage, report.message = "conjecture-found", None, None
        return True
    report.fail("verification", "verification-failed", f"valuation {v.valuation} of {v.term_count} terms")
    return False


def _direct_route(report: Report, seq: TermSequence, cfg: PipelineConfig) -> bool:
    with _Timer(report, "direct"):
        P = search_direct(seq, cfg.deg_y, cfg.deg_z_bound, cfg.guard)
    if P is None:
        return False
    return _conclude(report, P, seq, cfg, "direct")


def run_pipeline(config: PipelineConfig, seq: TermSequence | Iterable, pool=None) -> Report:
    """Guess an algebraic equation for the generating function of ``seq``.

    Stage failures are captured in the report's status; only programming
    errors propagate. ``pool`` is an optional executor for the per-point
    evaluations; ``config.workers > 1`` creates one on demand.
    """
    if not isinstance(seq, TermSequence):
        seq = TermSequence(seq)
    report = Report(terms=seq.terms, config=config, label=seq.label)
    if not len(seq):
        return report.fail("input", "input-error", "empty sequence")
    if pool is None and config.workers > 1 and config.mode in ("auto", "lattice-only"):
        with ProcessPoolExecutor(max_workers=config.workers) as own:
            return _run(report, seq, config, own)
    return _run(report, seq, config, pool)


def _run(report: Report, seq: TermSequence, cfg: PipelineConfig, pool) -> Report:
    if cfg.mode == "direct-only":
        if not _direct_route(report, seq, cfg) and report.status == "pending":
            report.fail("direct", "no-relation", "no equation within the degree bounds")
        return report

    try:
        with _Timer(report, "recurrence"):
            rec = fit_recurrence(seq, cfg.max_order, cfg.max_degree, cfg.guard)
    except GFGuessError as exc:
        rec = None
        report.fail("recurrence", exc)
    else:
        if rec is None:
            report.fail("recurrence", "no-recurrence", "no recurrence within the order/degree bounds")
    report.recurrence = rec

    if cfg.mode == "recurrence-only":
        if rec is not None:
            report.status = "recurrence-found"
        return report

    if rec is not None:
        try:
            P = _lattice_route(report, rec, cfg, pool)
        except GFGuessError as exc:
            report.fail("lattice", exc)
        else:
            if P is None:
                report.fail("lattice", "no-relation", f"algdep found nothing up to degree {cfg.deg_y_cap}")
            elif _conclude(report, P, seq, cfg, "lattice"):
                return report

    if cfg.mode == "auto":
        # leaves the report untouched when the direct route finds nothing
        _direct_route(report, seq, cfg)
    return report


# ---------------------------------------------------------------- parsing

_TERM = re.compile(r"^[+-]?\d+(/\d+)?$")
_LABEL = re.compile(r"^\s*([A-Za-z_][\w.-]*)\s*:(.*)$")


def _term(token: str, lineno: int, line: str) -> Fraction:
    if not _TERM.match(token):
        raise MalformedLine(lineno, line, f"not an integer or fraction: {token!r}")
    return Fraction(token)


def parse_sequence(text: bytes | str, fmt: str = "list", label: Optional[str] = None) -> TermSequence:
    """Parse a comma/whitespace list or a b-file (``n a(n)`` lines).

    b-file indices must be contiguous and ascending; the offset is dropped.
    """
    if isinstance(text, bytes):
        try:
            text = text.decode("ascii")
        except UnicodeDecodeError as exc:
            raise InputError(f"input is not ASCII: {exc}") from None
    terms: list[Fraction] = []
    if fmt == "list":
        for lineno, line in enumerate(text.splitlines(), 1):
            body = line.split("#", 1)[0].strip().strip("[]")
            for tok in re.split(r"[,\s]+", body):
                if tok:
                    terms.append(_term(tok, lineno, line))
    elif fmt == "bfile":
        expected = None
        for lineno, line in enumerate(text.splitlines(), 1):
            body = line.split("#", 1)[0].strip()
            if not body:
                continue
            parts = body.split()
            if len(parts) != 2 or not re.match(r"^[+-]?\d+$", parts[0]):
                raise MalformedLine(lineno, line, "expected 'n a(n)'")
            n = int(parts[0])
            if expected is not None and n != expected:
                raise NonContiguousIndex(lineno, expected, n)
            expected = n + 1
            terms.append(_term(parts[1], lineno, line))
    else:
        raise InputError(f"unknown format {fmt!r}")
    if not terms:
        raise InputError("no terms found")
    return TermSequence(terms, label)


def split_records(text: bytes | str, fmt: str = "list") -> list[tuple[Optional[str], str]]:
    """Batch input: one list per line (optional ``label:`` prefix) or blank-line separated b-files."""
    if isinstance(text, bytes):
        text = text.decode("ascii", errors="replace")
    records = []
    if fmt == "list":
        for line in text.splitlines():
            if not line.split("#", 1)[0].strip():
                continue
            m = _LABEL.match(line)
            records.append((m.group(1), m.group(2)) if m else (None, line))
    else:
        for block in re.split(r"\n\s*\n", text):
            if block.strip():
                records.append((None, block))
    return records


def _batch_one(config: PipelineConfig, label: Optional[str], body: str, fmt: str) -> Report:
    try:
        seq = parse_sequence(body, fmt, label)
    except InputError as exc:
        return Report(terms=(), config=config, label=label).fail("input", exc)
    return run_pipeline(config, seq)


def run_batch(config: PipelineConfig, text: bytes | str, fmt: str = "list") -> list[Report]:
    """One report per record, in input order; a bad record never affects the others."""
    records = split_records(text, fmt)
    if config.workers > 1 and len(records) > 1:
        inner = replace(config, workers=1)
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            futures = [pool.submit(_batch_one, inner, lab, body, fmt) for lab, body in records]
            return [f.result() for f in futures]
    return [_batch_one(config, lab, body, fmt) for lab, body in records]


# ---------------------------------------------------------------- output


def emit_report(report: Report, fmt: str = "text", timings: bool = True) -> bytes:
    if fmt == "json":
        return (json.dumps(report.to_dict(timings), indent=2, sort_keys=True) + "\n").encode()
    if fmt != "text":
        raise InputError(f"unknown output format {fmt!r}")
    lines = []
    if report.label:
        lines.append(f"label: {report.label}")
    lines.append(f"terms: {', '.join(str(t) for t in report.terms)}")
    lines.append(f"status: {report.status}")
    if report.stage:
        lines.append(f"failed at: {report.stage}")
    if report.message:
        lines.append(f"reason: {report.message}")
    if report.recurrence is not None:
        lines.append(f"recurrence: {report.recurrence}")
    for m, poly in report.polys:
        lines.append(f"algdep m={m}: {list(poly)}")
    if report.equation is not None:
        lines.append(f"equation ({report.route}): {report.equation}")
    if report.closed_form is not None:
        lines.append(f"closed form: y = {report.closed_form}")
    if report.verification is not None:
        v = report.verification
        verdict = "pass" if v.passed else "fail"
        lines.append(f"verification: {verdict}, valuation {v.valuation} of {v.term_count} terms")
    if timings and report.timings:
        lines.append("timings: " + ", ".join(f"{k}={v:.3f}s" for k, v in sorted(report.timings.items())))
    return ("\n".join(lines) + "\n").encode()


def exit_code(reports: list[Report]) -> int:
    if any(r.status == "input-error" for r in reports):
        return 2
    return 0 if all(r.found for r in reports) else 1
