"""Report documents, CSV output for sweeps and the sweep figure."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import asdict

from .enumerator import CriticalOrbit, RegimeReport
from .surface import C_EDGE, C_SING, SurfaceSpec
from .topology import ComponentEstimate, SweepRow, Transition
from .verifier import ProbeResult, VerificationReport

SCHEMA_VERSION = "1.0"

CSV_COLUMNS = [
    "c", "regime", "n_orbits", "n_min", "n_saddle", "n_max", "chi", "genus", "p4_values",
]


def orbit_dict(o: CriticalOrbit) -> dict:
    return {
        "key": o.key,
        "pattern": list(o.pattern),
        "t": o.t,
        "representative": [float(v) for v in o.representative],
        "multipliers": list(o.multipliers) if o.multipliers is not None else None,
        "p4_value": o.p4_value,
        "morse_index": o.morse_index,
        "multiplicity": o.multiplicity,
    }


def regime_dict(rep: RegimeReport) -> dict:
    n_min, n_sad, n_max = rep.counts
    return {
        "regime": rep.regime.value,
        "summary": rep.summary(),
        "n_points": rep.n_points,
        "counts": {"min": n_min, "saddle": n_sad, "max": n_max},
        "n_singular": rep.n_singular,
        "euler_characteristic": rep.euler_characteristic,
        "genus": rep.genus,
        "n_components": rep.n_components,
        "orbits": [orbit_dict(o) for o in rep.orbits],
    }


def verification_dict(v: VerificationReport) -> dict:
    return {
        "n_starts": v.n_starts,
        "n_converged": v.n_converged,
        "matched_orbits": dict(v.matched_orbits),
        "missed_orbits": list(v.missed_orbits),
        "unmatched": [
            {"point": [float(x) for x in s.point], "multipliers": [float(x) for x in s.multipliers]}
            for s in v.unmatched
        ],
        "max_residual": v.max_residual,
        "seed": v.seed,
        "ok": v.ok,
    }


def build_document(
    command: list[str],
    spec: SurfaceSpec,
    regime_report: RegimeReport,
    verification: VerificationReport | None = None,
    components: ComponentEstimate | None = None,
    probe: ProbeResult | None = None,
    extra: dict | None = None,
    notes: list[str] | None = None,
) -> dict:
    doc = {
        "schema_version": SCHEMA_VERSION,
        "command": list(command),
        "spec": asdict(spec),
        **regime_dict(regime_report),
    }
    if verification is not None:
        doc["verification"] = verification_dict(verification)
    if components is not None:
        doc["components"] = asdict(components)
    if probe is not None:
        doc["singular_probe"] = asdict(probe)
    if extra:
        doc.update(extra)
    doc["notes"] = list(regime_report.notes) + list(notes or [])
    return doc


def constants() -> dict:
    return {"1/sqrt(30)": f"{C_SING:.17g}", "3/sqrt(20)": f"{C_EDGE:.17g}"}


def dumps(doc: dict) -> str:
    # Python float repr is the shortest string that round-trips exactly.
    return json.dumps(doc, indent=2, allow_nan=False) + "\n"


def render_text(doc: dict) -> str:
    out = io.StringIO()
    w = out.write
    w(f"c = {doc['spec']['c']!r}   regime: {doc['regime']}\n")
    if "constants" in doc:
        for k, v in doc["constants"].items():
            w(f"{k} = {v}\n")
    w(doc["summary"] + "\n")
    if doc["orbits"]:
        w(f"{'pattern':<10}{'t':>12}{'p4':>12}{'index':>10}{'mult':>6}  values\n")
        for o in doc["orbits"]:
            t = "" if o["t"] is None else f"{o['t']:.6f}"
            vals = " ".join(f"{round(v, 6) + 0.0:.6f}" for v in o["representative"])
            w(
                f"{str(o['pattern']):<10}{t:>12}{o['p4_value']:>12.6f}"
                f"{str(o['morse_index']):>10}{o['multiplicity']:>6}  {vals}\n"
            )
    if "verification" in doc:
        v = doc["verification"]
        w(
            f"verification: {v['n_converged']}/{v['n_starts']} converged, "
            f"{len(v['unmatched'])} unmatched, max residual {v['max_residual']:.3e}\n"
        )
        for key, hits in v["matched_orbits"].items():
            w(f"  {hits:6d}  {key}\n")
    if "components" in doc:
        comp = doc["components"]
        w(f"components: {comp['n_components']} (samples={comp['n_samples']}, eps={comp['epsilon']})\n")
    if "cross_check" in doc:
        cc = doc["cross_check"]
        w(f"cross-check: {'pass' if cc['passed'] else 'FAIL'} - {cc['detail']}\n")
    if "singular_probe" in doc:
        p = doc["singular_probe"]
        w(f"singular probe: {p['verdict']} (margin {p['margin']:.3e})\n")
    for n in doc["notes"]:
        w(f"note: {n}\n")
    return out.getvalue()


def _fmt_c(c: float, digits: int) -> str:
    return f"{c:.{digits}f}"


def sweep_csv(rows: list[SweepRow], digits: int) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for r in rows:
        writer.writerow([
            _fmt_c(r.c, digits),
            r.regime.value,
            r.n_orbits,
            *r.counts,
            "" if r.chi is None else r.chi,
            "" if r.genus is None else r.genus,
            ";".join(f"{v:.12g}" for v in r.p4_values),
        ])
    return buf.getvalue()


def transitions_text(transitions: list[Transition]) -> str:
    return "".join(f"{t}\n" for t in transitions)


def plot_sweep(rows: list[SweepRow], path: str, c_lo: float, c_hi: float) -> None:
    """Critical values of p4 against c, coloured by Morse index."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    from .enumerator import enumerate_orbits

    colors = {0: "tab:blue", 1: "tab:green", 2: "tab:red", "singular": "k", "isolated": "k"}
    labels = {0: "minimum", 1: "saddle", 2: "maximum", "singular": "singular", "isolated": "isolated"}
    series: dict = {}
    for r in rows:
        for o in enumerate_orbits(SurfaceSpec(r.c)):
            series.setdefault(o.morse_index, ([], []))
            series[o.morse_index][0].append(r.c)
            series[o.morse_index][1].append(o.p4_value)

    fig, ax = plt.subplots(figsize=(7, 4.5))
    for idx, (xs, ys) in series.items():
        ax.scatter(xs, ys, s=4, color=colors[idx], label=labels[idx])
    for b in (-C_EDGE, -C_SING, C_SING, C_EDGE):
        if c_lo <= b <= c_hi:
            ax.axvline(b, color="0.6", lw=0.8, ls="--")
    ax.set_xlabel("c = p3")
    ax.set_ylabel("critical value of p4")
    ax.legend(loc="best", fontsize=8, markerscale=3)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
