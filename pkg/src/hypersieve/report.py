"""Report emission: every run writes a JSON record and a delimited CSV, and
renders a matplotlib figure next to them.  All outputs are byte-deterministic
for a fixed config, seed and parallelism width (figures are written without
embedded software metadata)."""

from __future__ import annotations

import csv
import io
import json
import os

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

from .density import DensityReport

CSV_COLUMNS = ("d", "size", "hits", "inconclusive", "empirical_num",
               "empirical_den", "predicted", "abs_dev")


def _write_bytes(path, data: bytes):
    os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
    with open(path, "wb") as fh:
        fh.write(data)


def _json_bytes(obj) -> bytes:
    return (json.dumps(obj, indent=2, sort_keys=True) + "\n").encode()


def _save_fig(fig, path):
    fig.savefig(path, metadata={"Software": None})
    plt.close(fig)


def write_density_report(report: DensityReport, outdir: str,
                         name: str = "report"):
    paths = {}
    doc = report.to_json_dict()
    paths["json"] = os.path.join(outdir, f"{name}.json")
    _write_bytes(paths["json"], _json_bytes(doc))

    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in report.rows:
        w.writerow([r.d, r.size, r.hits, r.inconclusive,
                    r.empirical.numerator, r.empirical.denominator,
                    "" if r.predicted is None else repr(r.predicted),
                    "" if r.abs_dev is None else repr(r.abs_dev)])
    paths["csv"] = os.path.join(outdir, f"{name}.csv")
    _write_bytes(paths["csv"], buf.getvalue().encode())

    fig, ax = plt.subplots(figsize=(6, 4))
    ds = [r.d for r in report.rows]
    ax.plot(ds, [float(r.empirical) for r in report.rows], "o-",
            label="empirical")
    if report.prediction is not None:
        ax.axhline(report.prediction.as_float(), color="tab:red", ls="--",
                   label="predicted")
    ax.set_xlabel("degree d")
    ax.set_ylabel("density")
    ax.set_title(report.experiment_kind)
    ax.set_xticks(ds)
    ax.legend()
    fig.tight_layout()
    paths["png"] = os.path.join(outdir, f"{name}.png")
    os.makedirs(outdir, exist_ok=True)
    _save_fig(fig, paths["png"])
    return paths


def summary_table(report: DensityReport) -> str:
    lines = [f"experiment: {report.experiment_kind}",
             f"stabilization degree of Z: {report.stabilization_degree}",
             f"mode: {'exhaustive' if report.exhaustive else 'subsample'}"]
    if report.prediction is not None:
        p = report.prediction
        val = (f"{p.value}" if p.is_exact()
               else f"{p.as_float():.9f} (+/- {p.error_bound:.2e})")
        lines.append(f"prediction [{p.formula}]: {val}")
    header = f"{'d':>3} {'size':>12} {'hits':>12} {'inconcl':>8} " \
             f"{'empirical':>22} {'abs_dev':>12}"
    lines.append(header)
    for r in report.rows:
        emp = f"{r.empirical.numerator}/{r.empirical.denominator}"
        dev = "" if r.abs_dev is None else f"{r.abs_dev:.6f}"
        hw = "" if r.half_width is None else f" +/-{r.half_width:.4f}"
        lines.append(f"{r.d:>3} {r.size:>12} {r.hits:>12} "
                     f"{r.inconclusive:>8} {emp:>22}{hw} {dev:>12}")
    return "\n".join(lines)


def write_zeta_report(census, rows, outdir: str, name: str = "zeta"):
    """rows: list of {"s": s, "B": B, "inv_zeta": v, "error_bound": e}."""
    doc = {"q": census.q, "a": census.a, "b": census.b, "values": rows}
    paths = {"json": os.path.join(outdir, f"{name}.json")}
    _write_bytes(paths["json"], _json_bytes(doc))

    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(("r", "a_r", "b_r"))
    for r, (ar, br) in enumerate(zip(census.a, census.b), start=1):
        w.writerow((r, ar, br))
    paths["csv"] = os.path.join(outdir, f"{name}.csv")
    _write_bytes(paths["csv"], buf.getvalue().encode())

    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9, 4))
    rs = list(range(1, census.depth + 1))
    ax1.bar(rs, census.b, color="tab:blue")
    ax1.set_yscale("log")
    ax1.set_xlabel("degree r")
    ax1.set_ylabel("closed points b_r")
    for row in rows:
        from .zeta import inverse_zeta_truncated
        vals = []
        for Bv in range(1, row["B"] + 1):
            vals.append(inverse_zeta_truncated(census, row["s"], Bv)[0])
        ax2.plot(range(1, row["B"] + 1), vals, "o-",
                 label=f"1/zeta(s={row['s']})")
    ax2.set_xlabel("truncation B")
    ax2.set_ylabel("truncated 1/zeta")
    ax2.legend()
    fig.tight_layout()
    paths["png"] = os.path.join(outdir, f"{name}.png")
    os.makedirs(outdir, exist_ok=True)
    _save_fig(fig, paths["png"])
    return paths


def write_lift_report(certificates, diagnostics, outdir: str,
                      name: str = "lifts"):
    doc = {"diagnostics": diagnostics,
           "certificates": [c.to_json_dict() for c in certificates]}
    paths = {"json": os.path.join(outdir, f"{name}.json")}
    _write_bytes(paths["json"], _json_bytes(doc))

    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(("index", "special_form", "generic_flags"))
    for i, c in enumerate(certificates):
        from .homog import format_poly
        flags = ";".join(f"{k}={v}" for k, v in sorted(c.generic_flags.items()))
        w.writerow((i, format_poly(c.special_form), flags))
    paths["csv"] = os.path.join(outdir, f"{name}.csv")
    _write_bytes(paths["csv"], buf.getvalue().encode())

    fig, ax = plt.subplots(figsize=(6, 4))
    keys = sorted(diagnostics)
    ax.bar(range(len(keys)), [diagnostics[k] for k in keys],
           color="tab:orange")
    ax.set_xticks(range(len(keys)))
    ax.set_xticklabels(keys, rotation=30, ha="right")
    ax.set_ylabel("count")
    ax.set_title("lift search stages")
    fig.tight_layout()
    paths["png"] = os.path.join(outdir, f"{name}.png")
    os.makedirs(outdir, exist_ok=True)
    _save_fig(fig, paths["png"])
    return paths
