"""One-stop report: delimited tables plus rendered figures.

Runs the full battery of exact checks for one (n, q), writes the
results as CSV files, and renders matplotlib figures next to them:
a bar chart of the absorption probabilities, the ray/cone picture of
the fan (n = 2 only), and the log-concavity margins. Everything lands
in the caller's output directory; the returned summary lists the files
and the overall verdict.
"""

from __future__ import annotations

import csv
import os
from fractions import Fraction

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from .algebra import compositions, prob_exact
from .fan import (cone_generators, check_ample, check_complete, check_fan,
                  iter_walls, maximal_cones, normalization_probe,
                  sr_presentation, wall_relation)
from .kahler import (LefschetzClass, check_hl, check_hr, check_log_concavity,
                     check_poincare, volume_polynomial)
from .qcartan import QContext, cartan_report


def _write_csv(path, header, rows):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)


def _probability_figure(path, etas, probs):
    fig, ax = plt.subplots(figsize=(max(6, len(etas) * 0.25), 4))
    xs = range(len(etas))
    ax.bar(xs, [float(p) for p in probs], color="#4878d0")
    ax.set_ylabel("absorption probability")
    ax.set_xlabel("starting multiplicities")
    if len(etas) <= 40:
        ax.set_xticks(list(xs))
        ax.set_xticklabels([",".join(str(e) for e in eta) for eta in etas],
                           rotation=90, fontsize=7)
    else:
        ax.set_xticks([])
    fig.tight_layout()
    fig.savefig(path, dpi=110)
    plt.close(fig)


def _fan_figure(path, ctx):
    fig, ax = plt.subplots(figsize=(5, 5))
    cones = maximal_cones(ctx.n)
    cmap = plt.get_cmap("tab10")
    radius = 4.0
    for ci, cone in enumerate(sorted(cones, key=lambda c: (sorted(c.J), sorted(c.K)))):
        gens = cone_generators(ctx, cone)
        g1 = [float(x) for x in gens.column(0)]
        g2 = [float(x) for x in gens.column(1)]
        def unit(v):
            norm = (v[0] ** 2 + v[1] ** 2) ** 0.5
            return (v[0] / norm * radius, v[1] / norm * radius)
        u1, u2 = unit(g1), unit(g2)
        mid = unit(((u1[0] + u2[0]) / 2, (u1[1] + u2[1]) / 2))
        poly = [(0.0, 0.0), u1, mid, u2]
        ax.fill([p[0] for p in poly], [p[1] for p in poly],
                color=cmap(ci % 10), alpha=0.25, lw=0)
    rays = {}
    for i in range(ctx.n):
        rays[f"e{i+1}"] = [1.0 if j == i else 0.0 for j in range(ctx.n)]
    from .qcartan import cartan_matrix
    a = cartan_matrix(ctx)
    for k in range(ctx.n):
        rays[f"-a{k+1}"] = [-float(a.data[j][k]) for j in range(ctx.n)]
    for name, v in rays.items():
        norm = (v[0] ** 2 + v[1] ** 2) ** 0.5
        tip = (v[0] / norm * radius, v[1] / norm * radius)
        ax.annotate("", xy=tip, xytext=(0, 0),
                    arrowprops=dict(arrowstyle="->", lw=1.5, color="black"))
        ax.annotate(name, xy=(tip[0] * 1.08, tip[1] * 1.08),
                    ha="center", va="center", fontsize=9)
    ax.set_xlim(-radius * 1.25, radius * 1.25)
    ax.set_ylim(-radius * 1.25, radius * 1.25)
    ax.set_aspect("equal")
    ax.set_title(f"maximal cones, n={ctx.n}, q={ctx.q}")
    fig.tight_layout()
    fig.savefig(path, dpi=110)
    plt.close(fig)


def _logconcavity_figure(path, ctx):
    margins = []
    labels = []
    from .kahler import _shifted_prob

    for eta in compositions(ctx.n, ctx.n):
        p = prob_exact(ctx, eta)
        for i in range(1, ctx.n + 1):
            if eta[i - 1] < 2:
                continue
            left = _shifted_prob(ctx, eta, i, -1)
            right = _shifted_prob(ctx, eta, i, +1)
            margins.append(float(p * p - left * right))
            labels.append(f"{','.join(str(e) for e in eta)}@{i}")
    fig, ax = plt.subplots(figsize=(max(6, len(margins) * 0.12), 4))
    ax.bar(range(len(margins)), margins,
           color=["#2e7d32" if m >= 0 else "#c62828" for m in margins])
    ax.axhline(0.0, color="black", lw=0.8)
    ax.set_ylabel("p(eta)^2 - p(left) p(right)")
    ax.set_xlabel("(eta, site) pairs")
    ax.set_xticks([])
    ax.set_title("log-concavity margins (all bars must stay nonnegative)")
    fig.tight_layout()
    fig.savefig(path, dpi=110)
    plt.close(fig)


def run_report(outdir, n, q, seed, samples=2000) -> dict:
    ctx = QContext(n, Fraction(q))
    os.makedirs(outdir, exist_ok=True)
    files = []
    checks = []

    rep = cartan_report(ctx)
    checks.append(("cartan_matrix", f"n={n} q={ctx.q}", rep.ok))

    fan_rep = check_fan(ctx)
    checks.append(("fan_valid", f"n={n} q={ctx.q}", fan_rep.ok))
    comp = check_complete(ctx, samples=samples, seed=seed)
    checks.append(("fan_complete", f"samples={samples} seed={seed}", comp.ok))

    wall_rows = []
    signs_ok = True
    for wall, missing in iter_walls(ctx):
        data = wall_relation(ctx, wall, missing)
        coeff_text = " ".join(f"{kind}{idx}={v}" for (kind, idx), v
                              in sorted(data.coefficients.items()))
        wall_rows.append(("".join(str(j) for j in sorted(wall.J)),
                          "".join(str(k) for k in sorted(wall.K)),
                          missing, coeff_text, data.sign_ok))
        signs_ok = signs_ok and data.sign_ok
    checks.append(("wall_signs", "all walls", signs_ok))

    ample = check_ample(ctx, [Fraction(1)] * n)
    checks.append(("ample_ones", "a=(1,...,1)", ample.ok))

    sr = sr_presentation(ctx)
    checks.append(("stanley_reisner", f"dims={sr.graded_dims}", sr.ok))

    ell = LefschetzClass(tuple(Fraction(1) for _ in range(n)))
    pd = check_poincare(ctx)
    hl = check_hl(ctx, ell)
    hr = check_hr(ctx, ell)
    checks.append(("poincare_duality", "all k", all(pd.values())))
    checks.append(("hard_lefschetz", "ell=(1,...,1)", all(hl.values())))
    checks.append(("hodge_riemann", "ell=(1,...,1)", all(hr.values())))

    violations = check_log_concavity(ctx)
    checks.append(("log_concavity", f"violations={len(violations)}", not violations))

    probe = normalization_probe(ctx)
    checks.append(("integral_ratio_constant", f"constant={probe.constant}",
                   probe.constant_ok))

    path = os.path.join(outdir, "checks.csv")
    _write_csv(path, ("check", "parameters", "ok"),
               [(name, detail, "pass" if ok else "FAIL")
                for name, detail, ok in checks])
    files.append("checks.csv")

    etas = sorted(compositions(n, n))
    probs = [prob_exact(ctx, eta) for eta in etas]
    path = os.path.join(outdir, "probabilities.csv")
    _write_csv(path, ("eta", "probability"),
               [(" ".join(str(e) for e in eta), str(p))
                for eta, p in zip(etas, probs)])
    files.append("probabilities.csv")

    vol = volume_polynomial(ctx)
    path = os.path.join(outdir, "volume.csv")
    _write_csv(path, ("eta", "coefficient"),
               [(" ".join(str(e) for e in eta), str(c))
                for eta, c in sorted(vol.items())])
    files.append("volume.csv")

    path = os.path.join(outdir, "walls.csv")
    _write_csv(path, ("J", "K", "missing", "coefficients", "sign_ok"),
               wall_rows)
    files.append("walls.csv")

    _probability_figure(os.path.join(outdir, "probabilities.png"), etas, probs)
    files.append("probabilities.png")
    if n == 2:
        _fan_figure(os.path.join(outdir, "fan.png"), ctx)
        files.append("fan.png")
    _logconcavity_figure(os.path.join(outdir, "logconcavity.png"), ctx)
    files.append("logconcavity.png")

    ok = all(flag for _, _, flag in checks)
    return {
        "files": sorted(files),
        "checks_total": len(checks),
        "checks_passed": sum(1 for _, _, flag in checks if flag),
        "ok": ok,
    }
