"""One-shot regeneration of every figure and table dataset.

Everything written is a deterministic function of (seed, threads-independent
parameters) except the ``generated_at`` field of manifest.json.
"""

from __future__ import annotations

import hashlib
import json
from datetime import datetime, timezone
from pathlib import Path

from . import __version__, evolution, rule22, statistics
from .cli import ENTROPY_HEADER, _deviation_payload, _entropy_rows, _fit_dict, csv_text, json_text
from .rule_algebra import classify

FIG1_STEPS = 64
FIG2_MAX_M = 64
FIG3_MAX_M = 128
FIG5_T = 20
FIG5_TRIALS = 5000
FIG5_GROWTH_T = range(5, 21)
FIG6_LENGTH = 4096
FIG6_MAX_N = 12
MI_T, MI_TRIALS = 20, 100_000
EQUI_T, EQUI_TRIALS = 10, 100_000
TABLE1_RULES = (22, 30, 135, 150)


def _table1() -> dict:
    rules = []
    for code in TABLE1_RULES:
        spec = classify(code)
        rows = evolution.evolve_single_seed(code, 64)
        right_max = [max(evolution.support(r, evolution.RIGHT_HALF).positions, default=-1) for r in rows[1:]]
        rules.append({
            **spec.as_dict(),
            "anf_string": spec.anf_string,
            "symmetry": "S3" if spec.s3_symmetric else "none",
            "continuum_type": "parabolic" if spec.s3_symmetric else "hyperbolic",
            "rightmost_cell_is_m_up_to_64": all(r == m for m, r in enumerate(right_max, start=1)),
            "closed_form_cardinality": code == 22,
        })
    return {"version": __version__, "rules": rules}


def reproduce(out_dir, seed: int = statistics.DEFAULT_SEED, threads: int = 1) -> dict:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    files: list[dict] = []

    def write(name: str, data, params: dict) -> None:
        path = out / name
        payload = data if isinstance(data, bytes) else data.encode()
        path.write_bytes(payload)
        files.append({"file": name, "sha256": hashlib.sha256(payload).hexdigest(), "parameters": params})

    for code in (22, 150, 30):
        name = f"fig1_{code}.pbm"
        evolution.render_pbm(evolution.evolve_single_seed(code, FIG1_STEPS), out / name)
        write(name, (out / name).read_bytes(), {"rule": code, "steps": FIG1_STEPS})

    rows = [(m, rule22.cardinality22(m), rule22.right_half_count22(m), r.count())
            for m, r in enumerate(evolution.evolve_single_seed(22, FIG2_MAX_M)) if m >= 1]
    write("fig2_cardinality.csv", csv_text(["m", "total_closed_form", "right_half", "total_simulated"], rows),
          {"rule": 22, "max_m": FIG2_MAX_M})

    points, dev_rows = _deviation_payload(FIG3_MAX_M, "total")
    write("fig3_deviation.csv", csv_text(["m", "count22", "count30", "epsilon"], dev_rows),
          {"max_m": FIG3_MAX_M, "view": "total"})
    fit = statistics.fit_power_law(points)
    write("fit.json", json_text(_fit_dict(fit, FIG3_MAX_M, "total")), {"max_m": FIG3_MAX_M, "view": "total"})

    prof = statistics.sensitivity_profile(30, FIG5_T, FIG5_TRIALS, seed, threads=threads)
    write("fig5_sensitivity.csv", csv_text(["offset", "estimate"], zip(prof.offsets, prof.estimates)),
          {"rule": 30, "t": FIG5_T, "trials": FIG5_TRIALS, "seed": seed})
    growth = []
    for t in FIG5_GROWTH_T:
        p = statistics.sensitivity_profile(30, t, FIG5_TRIALS, seed, threads=threads)
        growth.append((t, p.sigma_left, p.sigma_right, p.ratio))
    write("growth.csv", csv_text(["t", "sigma_left", "sigma_right", "ratio"], growth),
          {"rule": 30, "t": [min(FIG5_GROWTH_T), max(FIG5_GROWTH_T)], "trials": FIG5_TRIALS, "seed": seed})

    _, ent_rows = _entropy_rows(30, FIG6_LENGTH - 1, FIG6_MAX_N)
    write("fig6_entropy.csv", csv_text(ENTROPY_HEADER, ent_rows),
          {"rule": 30, "sequence_length": FIG6_LENGTH, "max_n": FIG6_MAX_N})

    mi_bits, joint = statistics.mutual_information_counts(30, MI_T, MI_TRIALS, seed, threads)
    eq = {code: statistics.equidistribution_test(code, EQUI_T, EQUI_TRIALS, seed, threads=threads)
          for code in (30,)}
    write("randomness.json", json_text({
        "version": __version__, "seed": seed,
        "mutual_information": {"rule": 30, "t": MI_T, "trials": MI_TRIALS, "mi_bits": mi_bits,
                               "joint_counts": joint.tolist()},
        "equidistribution": [{"rule": c, "t": r.t, "trials": r.trials, "p_hat": r.p_hat, "z_score": r.z_score}
                             for c, r in eq.items()],
    }), {"seed": seed, "mi_trials": MI_TRIALS, "equidist_trials": EQUI_TRIALS})

    write("table1_rules.json", json_text(_table1()), {"rules": list(TABLE1_RULES)})

    report = rule22.verify_closed_forms(256)
    write("verify_report.json", json_text({"version": __version__, **report.as_dict()}), {"max_m": 256})

    manifest = {
        "version": __version__,
        "seed": seed,
        "generated_at": datetime.now(timezone.utc).isoformat(timespec="seconds"),
        "verify_ok": report.ok,
        "files": files,
    }
    (out / "manifest.json").write_text(json.dumps(manifest, indent=2) + "\n")
    return manifest
