"""BER-vs-SNR plots from sweep CSV files."""

from __future__ import annotations

import csv
from pathlib import Path

from .sim import CSV_HEADER

FRAGMENT_BITS = 4


class CsvFormatError(ValueError):
    pass


def read_sweep_csv(path) -> list[dict]:
    """Parse a sweep CSV, raising :class:`CsvFormatError` with the offending row number."""
    path = Path(path)
    with path.open(newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None:
            raise CsvFormatError(f"{path}: empty file")
        if header != CSV_HEADER:
            raise CsvFormatError(f"{path}: row 1: header {header} does not match {CSV_HEADER}")
        rows = []
        for lineno, raw in enumerate(reader, start=2):
            if len(raw) != len(CSV_HEADER):
                raise CsvFormatError(f"{path}: row {lineno}: expected {len(CSV_HEADER)} fields, got {len(raw)}")
            rec = dict(zip(CSV_HEADER, raw))
            try:
                row = {
                    "scheme": rec["scheme"],
                    "fading": rec["fading"],
                    "snr_db": float(rec["snr_db"]),
                    "trials": int(rec["trials"]),
                    "bit_errors": int(rec["bit_errors"]),
                    "ber": float(rec["ber"]),
                    "ber_ci_low": float(rec["ber_ci_low"]),
                    "ber_ci_high": float(rec["ber_ci_high"]),
                }
            except ValueError as exc:
                raise CsvFormatError(f"{path}: row {lineno}: {exc}") from None
            if row["trials"] < 1 or not 0.0 <= row["ber"] <= 1.0:
                raise CsvFormatError(f"{path}: row {lineno}: trials/ber out of range")
            rows.append(row)
    if not rows:
        raise CsvFormatError(f"{path}: no data rows")
    return rows


def group_curves(rows) -> dict[tuple[str, str], list[dict]]:
    curves: dict[tuple[str, str], list[dict]] = {}
    for r in rows:
        curves.setdefault((r["scheme"], r["fading"]), []).append(r)
    for pts in curves.values():
        pts.sort(key=lambda r: r["snr_db"])
    return curves


def plot_sweeps(csv_paths, out_path, title="Repair BER vs SNR", metadata=None) -> int:
    """Render one curve per (scheme, fading) to SVG; returns the curve count."""
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    rows = [r for p in csv_paths for r in read_sweep_csv(p)]
    curves = group_curves(rows)
    floor = min(1.0 / (r["trials"] * FRAGMENT_BITS) for r in rows)

    fig, ax = plt.subplots(figsize=(6.4, 4.8))
    markers = "osd^v<>"
    for n, ((scheme, fading), pts) in enumerate(sorted(curves.items())):
        x = [p["snr_db"] for p in pts]
        y = [max(p["ber"], floor) for p in pts]
        lo = [max(p["ber_ci_low"], floor) for p in pts]
        hi = [max(p["ber_ci_high"], floor) for p in pts]
        yerr = [[yy - l for yy, l in zip(y, lo)], [h - yy for yy, h in zip(y, hi)]]
        ax.errorbar(x, y, yerr=yerr, marker=markers[n % len(markers)],
                    linestyle="-" if fading == "slow" else "--", capsize=3,
                    label=f"{scheme} ({fading})")
    ax.set_yscale("log")
    ax.set_ylim(bottom=floor)
    ax.set_xlabel("SNR (dB)")
    ax.set_ylabel("BER")
    ax.set_title(title)
    ax.grid(True, which="both", linestyle="--", linewidth=0.5)
    ax.legend()
    fig.tight_layout()
    meta = {"Title": title}
    if metadata:
        meta["Description"] = metadata
    fig.savefig(out_path, format="svg", metadata=meta)
    plt.close(fig)
    return len(curves)
