"""CSV and JSON serialisation of moments, coefficients and experiment tables.

Every CSV file starts with ``#`` comment lines (the invocation that produced
it, then free-form notes) followed by a header row.  Floats are written with
17 significant digits, so reading a file back recovers the doubles exactly.
"""
from __future__ import annotations

import csv
import dataclasses
import io
import json
import math
from pathlib import Path

import numpy as np

from .errors import NotPositiveDefiniteError
from .measures import MomentSequence
from .opuc import VerblunskyCoefficients


def fmt(x):
    """17 significant digits; ``nan`` and ``inf`` spelled out."""
    if x is None:
        return "nan"
    return f"{float(x):.17g}"


def write_table(target, columns, rows, comments=()):
    """Write ``rows`` under ``columns`` to a path or text stream.

    ``comments`` become leading ``# `` lines.  Numeric cells are formatted
    with :func:`fmt`; strings are written as is.
    """
    own = isinstance(target, (str, Path))
    fh = open(target, "w", newline="") if own else target
    try:
        for line in comments:
            for part in str(line).splitlines() or [""]:
                fh.write(f"# {part}\n")
        out = csv.writer(fh, lineterminator="\n")
        out.writerow(columns)
        for row in rows:
            out.writerow([c if isinstance(c, str) else fmt(c) for c in row])
    finally:
        if own:
            fh.close()


def read_table(source):
    """Inverse of :func:`write_table`.

    Returns ``(comments, columns)`` where ``columns`` maps each header name to
    a float array.
    """
    text = Path(source).read_text() if isinstance(source, (str, Path)) else source.read()
    comments, body = [], []
    for line in text.splitlines():
        if line.startswith("#"):
            comments.append(line[2:] if line.startswith("# ") else line[1:])
        elif line.strip():
            body.append(line)
    rows = list(csv.reader(body))
    if not rows:
        raise ValueError("table has no header row")
    names, data = rows[0], rows[1:]
    cols = {name: np.array([float(r[i]) for r in data]) for i, name in enumerate(names)}
    return comments, cols


# --- typed tables ----------------------------------------------------------

MOMENT_COLUMNS = ("j", "re_c", "im_c", "err")
VERBLUNSKY_COLUMNS = ("k", "re_a", "im_a", "kappa")
DEVIATION_COLUMNS = ("n", "re_z1", "im_z1", "re_z2", "im_z2", "re_ratio", "im_ratio",
                     "re_universal", "im_universal", "deviation")
RATE_COLUMNS = ("n", "x_n", "D", "alphaCand", "CalphaCand")
FIGURE2_COLUMNS = ("n", "f1", "f2")
THEOREM1_COLUMNS = ("n", "lhs", "entropy_sup", "rhs_core", "empirical_ratio")
POISSON_COLUMNS = ("n", "sup", "n_sup")


def write_moments(target, m, comments=()):
    rows = ((j, c.real, c.imag, e) for j, (c, e) in enumerate(zip(m.c, m.err)))
    write_table(target, MOMENT_COLUMNS, rows, comments)


def read_moments(source):
    _, t = read_table(source)
    return MomentSequence(t["re_c"] + 1j * t["im_c"], t["err"])


def write_verblunsky(target, v, comments=()):
    """One row per ``k <= n``; the last row carries ``kappa_n`` only."""
    a = np.append(v.a, np.nan)
    rows = ((k, ak.real, ak.imag, kap) for k, (ak, kap) in enumerate(zip(a, v.kappa)))
    write_table(target, VERBLUNSKY_COLUMNS, rows, comments)


def read_verblunsky(source):
    _, t = read_table(source)
    a = t["re_a"] + 1j * t["im_a"]
    keep = ~np.isnan(a)
    bad = np.flatnonzero(np.abs(a[keep]) >= 1.0)
    if bad.size:
        raise NotPositiveDefiniteError(f"|a_{bad[0]}| >= 1 in imported table", int(bad[0]))
    return VerblunskyCoefficients(a[keep], t["kappa"])


def write_deviations(target, n, z1, z2, ratio, universal, comments=()):
    """Deviation grid; arguments are matching arrays (one row per pair)."""
    rows = (
        (n, a.real, a.imag, b.real, b.imag, r.real, r.imag, u.real, u.imag, abs(r - u))
        for a, b, r, u in zip(*(np.ravel(np.asarray(x, dtype=complex))
                                for x in (z1, z2, ratio, universal)))
    )
    write_table(target, DEVIATION_COLUMNS, rows, comments)


def write_entropy_profile(target, profile, comments=()):
    models = list(profile.fits)
    preds = [profile.predictions(m) for m in models]
    cols = ("rho", "gap", "K") + tuple(f"pred_{m}" for m in models)
    rows = (
        (r, g, k, *(p[i] for p in preds))
        for i, (r, g, k) in enumerate(zip(profile.rho, profile.gap, profile.values))
    )
    fit_notes = [f"fit {m}: beta={fmt(b)} C={fmt(c)} residual={fmt(res)}"
                 for m, (b, c, res) in profile.fits.items()]
    write_table(target, cols, rows, list(comments) + fit_notes)


def write_rate(target, records, comments=()):
    rows = ((r.n, r.x_n, r.D, r.alpha_cand, r.c_alpha_cand) for r in records)
    write_table(target, RATE_COLUMNS, rows, comments)


def read_rate(source):
    from .experiments import RateRecord

    _, t = read_table(source)
    return [RateRecord(int(n), x, d, a, c)
            for n, x, d, a, c in zip(*(t[k] for k in RATE_COLUMNS))]


def write_figure2(target, table, comments=()):
    f2 = table.f2 if table.f2 is not None else np.full(table.n.shape, np.nan)
    write_table(target, FIGURE2_COLUMNS, zip(table.n, table.f1, f2), comments)


def write_theorem1(target, reports, comments=()):
    rows = ((r.n, r.lhs, r.entropy_sup, r.rhs_core, r.empirical_ratio) for r in reports)
    write_table(target, THEOREM1_COLUMNS, rows, comments)


def write_poisson(target, check, comments=()):
    write_table(target, POISSON_COLUMNS, zip(check.n, check.sup, check.scaled), comments)


# --- JSON --------------------------------------------------------------------

def _plain(obj):
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {f.name: _plain(getattr(obj, f.name)) for f in dataclasses.fields(obj)
                if not f.name.startswith("_")}
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_plain(v) for v in obj.tolist()]
    if isinstance(obj, (complex, np.complexfloating)):
        return {"re": _plain(obj.real), "im": _plain(obj.imag)}
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return x if math.isfinite(x) else None
    return obj


def dumps(obj, comments=()):
    """JSON text for dataclasses, arrays and complex numbers.

    Non-finite floats become ``null``; ``comments`` go under ``"invocation"``.
    """
    payload = {"invocation": list(comments), "result": _plain(obj)}
    return json.dumps(payload, indent=2, allow_nan=False) + "\n"


def emit(target, text):
    """Write ``text`` to a path, or to a stream such as ``sys.stdout``."""
    if isinstance(target, (str, Path)):
        Path(target).write_text(text)
    else:
        target.write(text)


def table_text(writer, *args, **kwargs):
    buf = io.StringIO()
    writer(buf, *args, **kwargs)
    return buf.getvalue()
