"""Report assembly for the command-line tool.

Each ``build_*`` function returns a plain dict that serialises to JSON
unchanged. Each ``render_*`` function turns that dict into the text report.
Text output shows 4 significant digits; JSON and CSV carry full precision.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path
from xml.sax.saxutils import escape

from . import __version__, oracle
from .bounds import (
    HypothesisError,
    TheoremId,
    all_bounds,
    bound_inputs,
    gershgorin_disks,
    gershgorin_interval,
    lambda_max_upper_best,
    lambda_min_bounds,
    t1_sum_upper,
    t4_product_upper,
    t6_sum_upper,
)
from .certify import Verdict, lyapunov_gradient_flow_check
from .tensor import spectral_invariants
from .tensorfile import TensorDocument

__all__ = [
    "ComparisonRow",
    "banner",
    "fmt",
    "build_spectrum",
    "build_bounds",
    "build_compare",
    "build_certify",
    "render_spectrum",
    "render_bounds",
    "render_compare",
    "render_certify",
    "certify_exit_code",
    "write_csv",
    "write_svg",
]

HIERARCHY_HEADER = ("label", "value", "kind")
DISTRIBUTION_HEADER = ("label", "value", "kind")
INTERVAL_HEADER = ("method", "lower", "upper")
ERROR_FLOOR = 1e-9
ZERO_DISPLAY = 1e-12


@dataclass(frozen=True)
class ComparisonRow:
    label: str
    value: float
    kind: str
    error_vs_actual: float | None = None


def banner() -> str:
    return f"tensorbounds {__version__}"


def fmt(x) -> str:
    if x is None:
        return "-"
    x = float(x)
    if x == 0:
        return "0"
    return f"{x:.4g}"


def _header(doc: TensorDocument, command: str) -> dict:
    return {
        "version": __version__,
        "command": command,
        "name": doc.name,
        "order": doc.order,
        "dimension": doc.dimension,
    }


def _determinant(t, spec) -> float:
    if t.dimension == 2:
        return oracle.determinant(t)
    return math.prod(v**k for v, k in spec.real_roots)


def build_spectrum(doc: TensorDocument) -> dict:
    """Raises ``oracle.UnsupportedDimensionError`` unless ``n = 2`` or ``m = 2``."""
    t = doc.to_tensor()
    spec = oracle.spectrum(t)
    inv = spectral_invariants(t)
    h = set(spec.h_eigenvalues or ())
    out = _header(doc, "spectrum")
    out.update(
        d=inv.d,
        trace=inv.trace,
        scaled_trace=inv.scaled_trace,
        determinant=_determinant(t, spec),
        real_roots=[
            {"value": v, "multiplicity": k, "h_eigenvalue": v in h} for v, k in spec.real_roots
        ],
        complex_count=spec.complex_count,
    )
    return out


def _inputs(doc: TensorDocument):
    t = doc.to_tensor()
    spec = None
    if t.dimension == 2 or t.order == 2:
        spec = oracle.spectrum(t)
    inp = bound_inputs(t, det=doc.determinant, spectrum=spec)
    source = "external" if doc.determinant is not None else "oracle"
    return t, spec, inp, source


def _gershgorin(t) -> dict:
    disks = gershgorin_disks(t)
    lo, hi = gershgorin_interval(disks)
    return {
        "lower": lo,
        "upper": hi,
        "disks": [{"index": g.index, "center": g.center, "radius": g.radius} for g in disks],
    }


def build_bounds(doc: TensorDocument, k: int = 1, l: int | None = None) -> dict:
    """Raises ``MissingDeterminantError`` when no determinant is available."""
    t, _, inp, source = _inputs(doc)
    out = _header(doc, "bounds")
    out.update(
        k=k,
        l=k if l is None else l,
        d=inp.d,
        scaled_trace=inp.S,
        determinant=inp.det,
        determinant_source=source,
        hypothesis=inp.status.value,
        bounds=[],
        lambda_max_best=None,
        lambda_min=None,
        unavailable=None,
        gershgorin=_gershgorin(t),
    )
    try:
        rows = all_bounds(inp, k, l)
        best, best_id = lambda_max_upper_best(inp)
        mins = lambda_min_bounds(inp)
    except HypothesisError as exc:
        out["unavailable"] = str(exc)
        return out
    out["bounds"] = [
        {"theorem": b.theorem_id.value, "params": list(b.params), "value": b.value, "kind": b.kind.value}
        for b in rows
    ]
    out["lambda_max_best"] = {"value": best, "theorem": best_id.value}
    out["lambda_min"] = {"lower_simple": mins.lower_simple, "lower_t1": mins.lower_t1, "upper_mean": mins.upper_mean}
    return out


def build_compare(doc: TensorDocument) -> dict:
    """Hierarchy, distribution and interval datasets for one tensor.

    Rows carry ``error_vs_actual = value - actual lam_max`` when the exact
    spectrum is available.
    """
    t, spec, inp, source = _inputs(doc)
    g = _gershgorin(t)
    h = sorted(spec.h_eigenvalues or (), reverse=True) if spec is not None else []
    actual = h[0] if h else None

    def row(label, value, kind):
        err = None if actual is None or value is None else value - actual
        if err is not None and abs(err) <= ERROR_FLOOR * max(1.0, abs(actual)):
            # Below the oracle's accuracy; printing it would leak float noise.
            err = 0.0
        return ComparisonRow(label, value, kind, err)

    hierarchy: list[ComparisonRow] = []
    if actual is not None:
        hierarchy.append(ComparisonRow("Actual", actual, "actual", 0.0))
    unavailable = None
    best = None
    mins = None
    try:
        hierarchy.append(row(TheoremId.T1_SUM_UPPER.value, t1_sum_upper(inp, 1).value, "bound"))
        if inp.d >= 3:
            hierarchy.append(row(TheoremId.T4_PROD_UPPER.value, t4_product_upper(inp, 1).value, "bound"))
        hierarchy.append(row(TheoremId.T6_SUM_UPPER.value, t6_sum_upper(inp, 1).value, "bound"))
        best = lambda_max_upper_best(inp)
        mins = lambda_min_bounds(inp)
    except HypothesisError as exc:
        unavailable = str(exc)
    if doc.reference_value is not None:
        hierarchy.append(row("Reference", doc.reference_value, "reference"))
    hierarchy.append(row("Gershgorin", g["upper"], "gershgorin"))

    distribution: list[ComparisonRow] = [
        ComparisonRow(f"lambda_{i}", v, "h_eigenvalue") for i, v in enumerate(h, start=1)
    ]
    if spec is not None:
        others = [v for v, _ in spec.real_roots if v not in set(h)]
        distribution += [ComparisonRow(f"real_root_{i}", v, "real_root") for i, v in enumerate(others, 1)]
    if best is not None:
        distribution.append(ComparisonRow(TheoremId.T6_SUM_UPPER.value, t6_sum_upper(inp, 1).value, "bound_line"))
        distribution.append(ComparisonRow("best_upper", best[0], "bound_line"))
    distribution.append(ComparisonRow("Gershgorin", g["upper"], "bound_line"))

    intervals: list[tuple[str, float, float]] = []
    if mins is not None:
        intervals.append(("proposed", mins.lower_t1, best[0]))
    intervals.append(("gershgorin", g["lower"], g["upper"]))
    if h:
        intervals.append(("actual", h[-1], h[0]))

    out = _header(doc, "compare")
    out.update(
        d=inp.d,
        scaled_trace=inp.S,
        determinant=inp.det,
        determinant_source=source,
        hypothesis=inp.status.value,
        unavailable=unavailable,
        best_upper=None if best is None else {"value": best[0], "theorem": best[1].value},
        hierarchy=[r.__dict__ for r in hierarchy],
        distribution=[{"label": r.label, "value": r.value, "kind": r.kind} for r in distribution],
        intervals=[{"method": m, "lower": lo, "upper": hi} for m, lo, hi in intervals],
    )
    return out


def build_certify(doc: TensorDocument, samples: int = 1000, seed: int = 42) -> dict:
    t = doc.to_tensor()
    rep = lyapunov_gradient_flow_check(t, samples=samples, seed=seed)
    cert = rep.pd_certificate
    lam_min = None
    try:
        _, _, inp, _ = _inputs(doc)
        mins = lambda_min_bounds(inp)
        lam_min = {"lower_simple": mins.lower_simple, "lower_t1": mins.lower_t1, "hypothesis": inp.status.value}
    except (HypothesisError, oracle.OracleError, ValueError):
        pass
    out = _header(doc, "certify")
    out.update(
        seed=seed,
        certificate={
            "verdict": cert.verdict.value,
            "method": cert.method.value,
            "witness": cert.witness,
            "reason": cert.reason,
        },
        lyapunov={
            "sample_count": rep.sample_count,
            "max_Vdot": rep.max_Vdot,
            "min_V": rep.min_V,
            "stable": rep.stable,
        },
        lambda_min_bounds=lam_min,
    )
    out["exit_code"] = certify_exit_code(out)
    return out


def certify_exit_code(report: dict) -> int:
    """0 for certified PD and stable, 5 for inconclusive, 1 otherwise."""
    verdict = report["certificate"]["verdict"]
    if verdict == Verdict.INCONCLUSIVE.value:
        return 5
    if verdict == Verdict.CERTIFIED_PD.value and report["lyapunov"]["stable"]:
        return 0
    return 1


def _title(r: dict) -> list[str]:
    name = r["name"] or "-"
    return [banner(), f"tensor {name}: order m={r['order']}, dimension n={r['dimension']}"]


def render_spectrum(r: dict) -> str:
    lines = _title(r)
    lines += [
        f"eigenvalue count d = {r['d']}",
        f"trace = {fmt(r['trace'])}",
        f"scaled trace S = {fmt(r['scaled_trace'])}",
        f"determinant = {fmt(r['determinant'])}",
        "real roots (value, multiplicity, H-eigenvalue):",
    ]
    scale = max([1.0] + [abs(root["value"]) for root in r["real_roots"]])
    for root in r["real_roots"]:
        tag = "yes" if root["h_eigenvalue"] else "no (complex eigenvectors only)"
        value = root["value"] if abs(root["value"]) > ZERO_DISPLAY * scale else 0.0
        lines.append(f"  {fmt(value):>10}  x{root['multiplicity']}  {tag}")
    lines.append(f"complex roots: {r['complex_count']}")
    return "\n".join(lines) + "\n"


def _table(rows: list[tuple[str, ...]]) -> list[str]:
    widths = [max(len(row[i]) for row in rows) for i in range(len(rows[0]))]
    return ["  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip() for row in rows]


def _invariant_lines(r: dict) -> list[str]:
    return [
        f"d = {r['d']}, S = {fmt(r['scaled_trace'])}, det = {fmt(r['determinant'])} ({r['determinant_source']})",
        f"positivity hypothesis: {r['hypothesis']}",
    ]


def render_bounds(r: dict) -> str:
    lines = _title(r) + _invariant_lines(r)
    lines.append(f"parameters: k = {r['k']}, l = {r['l']}")
    if r["unavailable"]:
        lines.append(f"trace/determinant bounds unavailable: {r['unavailable']}")
    else:
        rows = [("bound", "params", "value", "kind")]
        for b in r["bounds"]:
            params = ",".join(str(p) for p in b["params"]) or "-"
            rows.append((b["theorem"], params, fmt(b["value"]), b["kind"]))
        lines += _table(rows)
        best = r["lambda_max_best"]
        lines.append(f"best lambda_max upper bound: {fmt(best['value'])} ({best['theorem']})")
        lm = r["lambda_min"]
        lines.append(f"lambda_min lower bound (k=1 tail): {fmt(lm['lower_t1'])}")
        lines.append(f"lambda_min upper bound (mean S/d): {fmt(lm['upper_mean'])}")
        lines.append(f"det/S, lower bound on the product of the d-1 smallest: {fmt(lm['lower_simple'])}")
    if r["hypothesis"] == "violated":
        lines.append("warning: spectrum is not all real and positive; bounds above are not guaranteed")
    g = r["gershgorin"]
    lines.append(f"Gershgorin interval: [{fmt(g['lower'])}, {fmt(g['upper'])}]")
    for disk in g["disks"]:
        lines.append(f"  disk {disk['index']}: center {fmt(disk['center'])}, radius {fmt(disk['radius'])}")
    return "\n".join(lines) + "\n"


def render_compare(r: dict) -> str:
    lines = _title(r) + _invariant_lines(r)
    if r["unavailable"]:
        lines.append(f"trace/determinant bounds unavailable: {r['unavailable']}")
    lines.append("")
    lines.append("upper bounds on lambda_max:")
    rows = [("label", "value", "error_vs_actual")]
    for row in r["hierarchy"]:
        rows.append((row["label"], fmt(row["value"]), fmt(row["error_vs_actual"])))
    lines += ["  " + s for s in _table(rows)]
    lines.append("")
    lines.append("eigenvalues and bound lines:")
    rows = [("label", "value", "kind")] + [(d["label"], fmt(d["value"]), d["kind"]) for d in r["distribution"]]
    lines += ["  " + s for s in _table(rows)]
    lines.append("")
    lines.append("spectral intervals:")
    rows = [("method", "lower", "upper")] + [
        (iv["method"], fmt(iv["lower"]), fmt(iv["upper"])) for iv in r["intervals"]
    ]
    lines += ["  " + s for s in _table(rows)]
    if r["hypothesis"] == "violated":
        lines.append("warning: spectrum is not all real and positive; proposed bounds are not guaranteed")
    return "\n".join(lines) + "\n"


def _witness(w: dict) -> str:
    parts = []
    for key, value in w.items():
        if isinstance(value, list):
            value = "(" + ", ".join(fmt(v) for v in value) + ")"
        elif isinstance(value, float):
            value = fmt(value)
        parts.append(f"{key}={value}")
    return ", ".join(parts) or "-"


def render_certify(r: dict) -> str:
    c, ly = r["certificate"], r["lyapunov"]
    lines = _title(r)
    lines += [
        f"verdict: {c['verdict']}",
        f"method: {c['method']}",
        f"witness: {_witness(c['witness'])}",
        f"reason: {c['reason'] or '-'}",
        f"Lyapunov check (gradient flow, {ly['sample_count']} samples, seed {r['seed']}): "
        + ("stable" if ly["stable"] else "not stable"),
        f"  min V on unit sphere: {fmt(ly['min_V'])}",
        f"  max dV/dt on unit sphere: {fmt(ly['max_Vdot'])}",
    ]
    lm = r["lambda_min_bounds"]
    if lm is not None:
        caveat = " (not guaranteed)" if lm["hypothesis"] == "violated" else ""
        lines.append(f"positivity hypothesis: {lm['hypothesis']}")
        lines.append(f"lambda_min lower bound (k=1 tail): {fmt(lm['lower_t1'])}{caveat}")
        lines.append(f"det/S, lower bound on the product of the d-1 smallest: {fmt(lm['lower_simple'])}{caveat}")
    return "\n".join(lines) + "\n"


def _write_rows(path: Path, header, rows) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)


def write_csv(r: dict, directory) -> list[Path]:
    """Write ``hierarchy.csv``, ``distribution.csv`` and ``intervals.csv`` at full precision."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    paths = [directory / "hierarchy.csv", directory / "distribution.csv", directory / "intervals.csv"]
    _write_rows(paths[0], HIERARCHY_HEADER, [(x["label"], repr(x["value"]), x["kind"]) for x in r["hierarchy"]])
    _write_rows(paths[1], DISTRIBUTION_HEADER, [(x["label"], repr(x["value"]), x["kind"]) for x in r["distribution"]])
    _write_rows(paths[2], INTERVAL_HEADER, [(x["method"], repr(x["lower"]), repr(x["upper"])) for x in r["intervals"]])
    return paths


# SVG ------------------------------------------------------------------------

_W, _H = 640, 360
_LEFT, _RIGHT, _TOP, _BOTTOM = 70, 20, 30, 50
_COLORS = {
    "actual": "#1f77b4",
    "bound": "#2ca02c",
    "reference": "#9467bd",
    "gershgorin": "#d62728",
    "h_eigenvalue": "#1f77b4",
    "real_root": "#7f7f7f",
    "bound_line": "#2ca02c",
    "proposed": "#2ca02c",
    "actual_interval": "#1f77b4",
}


def _svg(title: str, body: list[str]) -> str:
    head = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" height="{_H}" viewBox="0 0 {_W} {_H}">',
        f'<rect width="{_W}" height="{_H}" fill="white"/>',
        f'<text x="{_W / 2:.2f}" y="18" text-anchor="middle" font-size="14">{escape(title)}</text>',
    ]
    return "\n".join(head + body + ["</svg>"]) + "\n"


def _scale(lo: float, hi: float):
    if not math.isfinite(lo) or not math.isfinite(hi):
        raise ValueError("non-finite value in plot data")
    if hi == lo:
        lo, hi = lo - 1.0, hi + 1.0
    pad = 0.05 * (hi - lo)
    lo, hi = lo - pad, hi + pad
    span = _H - _TOP - _BOTTOM

    def y(v):
        return _TOP + span * (hi - v) / (hi - lo)

    return lo, hi, y


def _axis(lo, hi, y) -> list[str]:
    out = [f'<line x1="{_LEFT}" y1="{_TOP}" x2="{_LEFT}" y2="{_H - _BOTTOM}" stroke="black"/>']
    for i in range(5):
        v = lo + (hi - lo) * i / 4
        out.append(
            f'<text x="{_LEFT - 6}" y="{y(v) + 4:.2f}" text-anchor="end" font-size="10">{escape(fmt(v))}</text>'
        )
    if lo < 0 < hi:
        out.append(f'<line x1="{_LEFT}" y1="{y(0):.2f}" x2="{_W - _RIGHT}" y2="{y(0):.2f}" stroke="#999"/>')
    return out


def _hierarchy_svg(r: dict) -> str:
    rows = r["hierarchy"]
    lo, hi, y = _scale(min(0.0, *(x["value"] for x in rows)), max(x["value"] for x in rows))
    body = _axis(lo, hi, y)
    slot = (_W - _LEFT - _RIGHT) / len(rows)
    for i, x in enumerate(rows):
        x0 = _LEFT + i * slot + 0.15 * slot
        top, base = y(max(x["value"], 0.0)), y(min(x["value"], 0.0))
        color = _COLORS.get(x["kind"], "#333")
        body.append(
            f'<rect x="{x0:.2f}" y="{top:.2f}" width="{0.7 * slot:.2f}" height="{base - top:.2f}" fill="{color}"/>'
        )
        cx = x0 + 0.35 * slot
        body.append(f'<text x="{cx:.2f}" y="{_H - _BOTTOM + 16}" text-anchor="middle" font-size="10">{escape(x["label"])}</text>')
        body.append(f'<text x="{cx:.2f}" y="{top - 4:.2f}" text-anchor="middle" font-size="10">{escape(fmt(x["value"]))}</text>')
    return _svg("Upper bounds on the largest eigenvalue", body)


def _distribution_svg(r: dict) -> str:
    rows = r["distribution"]
    values = [x["value"] for x in rows]
    lo, hi, y = _scale(min(values), max(values))
    body = _axis(lo, hi, y)
    points = [x for x in rows if x["kind"] != "bound_line"]
    slot = (_W - _LEFT - _RIGHT) / max(1, len(points))
    for x in rows:
        if x["kind"] == "bound_line":
            dash = ' stroke-dasharray="6,4"' if x["label"] == "Gershgorin" else ""
            color = _COLORS["gershgorin"] if x["label"] == "Gershgorin" else _COLORS["bound_line"]
            yy = y(x["value"])
            body.append(f'<line x1="{_LEFT}" y1="{yy:.2f}" x2="{_W - _RIGHT}" y2="{yy:.2f}" stroke="{color}"{dash}/>')
            body.append(f'<text x="{_W - _RIGHT}" y="{yy - 3:.2f}" text-anchor="end" font-size="10">{escape(x["label"])}</text>')
    for i, x in enumerate(points):
        cx = _LEFT + (i + 0.5) * slot
        body.append(f'<circle cx="{cx:.2f}" cy="{y(x["value"]):.2f}" r="5" fill="{_COLORS.get(x["kind"], "#333")}"/>')
        body.append(f'<text x="{cx:.2f}" y="{_H - _BOTTOM + 16}" text-anchor="middle" font-size="10">{escape(x["label"])}</text>')
    return _svg("Eigenvalues and bound lines", body)


def _intervals_svg(r: dict) -> str:
    rows = r["intervals"]
    lo = min(min(x["lower"], x["upper"]) for x in rows)
    hi = max(max(x["lower"], x["upper"]) for x in rows)
    lo, hi, y = _scale(lo, hi)
    body = _axis(lo, hi, y)
    slot = (_W - _LEFT - _RIGHT) / len(rows)
    for i, x in enumerate(rows):
        key = "actual_interval" if x["method"] == "actual" else x["method"]
        x0 = _LEFT + i * slot + 0.3 * slot
        top, bottom = y(max(x["lower"], x["upper"])), y(min(x["lower"], x["upper"]))
        body.append(
            f'<rect x="{x0:.2f}" y="{top:.2f}" width="{0.4 * slot:.2f}" height="{max(bottom - top, 1.0):.2f}" '
            f'fill="{_COLORS.get(key, "#333")}" fill-opacity="0.7"/>'
        )
        body.append(
            f'<text x="{x0 + 0.2 * slot:.2f}" y="{_H - _BOTTOM + 16}" text-anchor="middle" font-size="10">{escape(x["method"])}</text>'
        )
    return _svg("Spectral intervals", body)


def write_svg(r: dict, directory) -> list[Path]:
    """Render the three comparison datasets as static SVG charts."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    out = []
    for name, render in (
        ("hierarchy.svg", _hierarchy_svg),
        ("distribution.svg", _distribution_svg),
        ("intervals.svg", _intervals_svg),
    ):
        path = directory / name
        path.write_text(render(r), encoding="utf-8")
        out.append(path)
    return out
