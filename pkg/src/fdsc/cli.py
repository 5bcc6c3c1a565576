"""Command-line front end: batch analyses with machine-readable outputs.

Every command writes <out>.csv plus <out>.manifest.json; the manifest holds
the fully-resolved configuration, seeds and library version, and re-running
with it reproduces the CSV byte-for-byte (the timestamp lives only in the
manifest).  All rates are normalized to the main-channel bandwidth
(W_m = 1, bits/s/Hz of the main channel).

Exit codes: 0 success, 1 computation error, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from datetime import datetime, timezone

from . import __version__, dmt, gdof
from .capacity import (
    PowerSplit,
    achievable_mi_exact,
    gap_constants,
    inner_bound_bc,
    nocsit_region,
    outer_bound,
)
from .channel import RNG_ALGORITHM, make_rng, sample_rayleigh, snrs_from_levels
from .gdof import required_w_gdof, sum_gdof_per_antenna_case_a, sum_gdof_per_antenna_case_b
from .model import AntennaConfig, LinkLevels, NetworkSpec, derived_dims, eval_pl
from .outage import OutageConfig, simulate_outage

USAGE_ERROR = 2
COMPUTE_ERROR = 1


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, bool):
        return str(x).lower()
    if isinstance(x, float):
        return f"{x:.12g}"
    return str(x)


def write_csv(path, header, rows):
    with open(path, "w") as f:
        f.write(",".join(header) + "\n")
        for row in rows:
            f.write(",".join(_fmt(v) for v in row) + "\n")


def write_manifest(path, command, config, outputs, extra=None):
    doc = {
        "command": command,
        "config": config,
        "outputs": outputs,
        "library": "fdsc",
        "version": __version__,
        "rng": RNG_ALGORITHM,
        "timestamp": datetime.now(timezone.utc).isoformat(),
    }
    if extra:
        doc.update(extra)
    with open(path, "w") as f:
        json.dump(doc, f, indent=2, sort_keys=True)
        f.write("\n")


def parse_antennas(text) -> AntennaConfig:
    parts = [p for p in str(text).replace(" ", "").split(",") if p]
    if len(parts) != 4:
        raise ValueError("--antennas expects M_dl,N_dl,M_ul,N_ul")
    m_dl, n_dl, m_ul, n_ul = (int(p) for p in parts)
    return AntennaConfig(m_dl=m_dl, n_dl=n_dl, m_ul=m_ul, n_ul=n_ul)


def _spec_from(cfg) -> NetworkSpec:
    ant = parse_antennas(cfg["antennas"])
    levels = LinkLevels(
        alpha_dl=cfg["alpha_dl"],
        alpha_ul=cfg["alpha_ul"],
        alpha_i=cfg["alpha_i"],
        alpha_s=cfg["alpha_s"],
    )
    return NetworkSpec(antennas=ant, levels=levels, w=cfg["w"])


def _merge_config(args, fields):
    """defaults < --config file < explicit flags; returns the resolved dict."""
    cfg = {name: default for name, _, default in fields}
    if getattr(args, "config", None):
        with open(args.config) as f:
            doc = json.load(f)
        if "config" in doc and isinstance(doc["config"], dict):
            doc = doc["config"]  # accept a manifest file directly
        for name, _, _ in fields:
            if name in doc:
                cfg[name] = doc[name]
    for name, _, _ in fields:
        val = getattr(args, name, None)
        if val is not None:
            cfg[name] = val
    missing = [n for n, _, d in fields if cfg[n] is None]
    if missing:
        raise UsageError(f"missing required option(s): {', '.join('--' + m.replace('_', '-') for m in missing)}")
    return cfg


class UsageError(Exception):
    pass


_COMMON_FIELDS = [
    ("antennas", str, None),
    ("alpha_dl", float, 1.0),
    ("alpha_ul", float, 1.0),
    ("alpha_i", float, 1.0),
    ("alpha_s", float, 1.0),
    ("w", float, 0.0),
]


def _add_common(p, with_out=True):
    p.add_argument("--antennas", help="M_dl,N_dl,M_ul,N_ul")
    p.add_argument("--alpha-dl", dest="alpha_dl", type=float)
    p.add_argument("--alpha-ul", dest="alpha_ul", type=float)
    p.add_argument("--alpha-i", dest="alpha_i", type=float)
    p.add_argument("--alpha-s", dest="alpha_s", type=float)
    p.add_argument("--w", type=float, help="side-channel bandwidth ratio W_s/W_m")
    p.add_argument("--config", help="JSON config (or a previous manifest); flags override")
    if with_out:
        p.add_argument("--out", required=True, help="output prefix (writes .csv and .manifest.json)")


# ---------------------------------------------------------------- dmt


def cmd_dmt(args) -> int:
    fields = _COMMON_FIELDS + [
        ("csit", bool, True),
        ("points", int, 201),
    ]
    cfg = _merge_config(args, fields)
    spec = _spec_from(cfg)
    a = spec.antennas
    d = derived_dims(a)
    lv = spec.levels
    rmax = min(d.m_dl_min * lv.alpha_dl, d.m_ul_min * lv.alpha_ul)
    n = int(cfg["points"])
    grid = [rmax * i / (n - 1) for i in range(n)]
    samples = dmt.dmt_curve_symmetric(spec, cfg["csit"], grid)

    closed = None
    regime = "lp-only"
    if (
        a.m_dl == a.n_ul
        and a.m_dl >= max(a.m_ul, a.n_dl)
        and lv.alpha_dl == lv.alpha_ul == lv.alpha_i == 1.0
    ):
        try:
            regime, dsum_curve = dmt.dsum_closed_form(
                a.m_dl, a.n_dl, a.m_ul, spec.w, lv.alpha_s, cfg["csit"]
            )
            closed = dmt.closed_form_general(
                a.m_dl, a.n_dl, a.m_ul, spec.w, lv.alpha_s, cfg["csit"]
            )
        except dmt.NoClosedFormError:
            regime = "lp-only"

    rows = []
    for r, d_lp in samples:
        d_cf = None
        if closed is not None:
            # beyond the curve's final breakpoint the tradeoff is zero
            d_cf = eval_pl(closed, r) if r <= closed.x_max else 0.0
        rows.append((r, d_lp, d_cf, regime))
    write_csv(args.out + ".csv", ["r", "d_lp", "d_closed_form", "regime"], rows)
    write_manifest(
        args.out + ".manifest.json",
        "dmt",
        cfg,
        [args.out + ".csv"],
        extra={"fitted_breakpoints": dmt.fit_breakpoints(samples)},
    )
    print(f"wrote {args.out}.csv ({n} points, regime {regime})")
    return 0


# ---------------------------------------------------------------- gdof


def cmd_gdof(args) -> int:
    fields = _COMMON_FIELDS + [("case", str, "")]
    cfg = _merge_config(args, fields)
    spec = _spec_from(cfg)
    a = spec.antennas
    reg_c = gdof.gdof_csit(spec)
    reg_n = gdof.gdof_nocsit(spec)
    case = cfg["case"].upper()
    per_antenna = None
    if case == "A":
        per_antenna = sum_gdof_per_antenna_case_a(
            a.m_dl, a.n_dl, spec.levels.alpha_i, spec.w, spec.levels.alpha_s
        )
    elif case == "B":
        per_antenna = sum_gdof_per_antenna_case_b(
            a, spec.levels.alpha_i, spec.w, spec.levels.alpha_s
        )
    header = [
        "csit_dof_dl_max", "csit_dof_ul_max", "csit_dof_sum_max", "csit_sum_gdof",
        "nocsit_dof_dl_max", "nocsit_dof_ul_max", "nocsit_dof_sum_max", "nocsit_sum_gdof",
        "case", "sum_gdof_per_antenna",
    ]
    row = (
        reg_c.dof_dl_max, reg_c.dof_ul_max, reg_c.dof_sum_max, reg_c.sum_gdof(),
        reg_n.dof_dl_max, reg_n.dof_ul_max, reg_n.dof_sum_max, reg_n.sum_gdof(),
        case or "none", per_antenna,
    )
    write_csv(args.out + ".csv", header, [row])
    write_manifest(args.out + ".manifest.json", "gdof", cfg, [args.out + ".csv"])
    print(f"wrote {args.out}.csv (sum GDoF csit={reg_c.sum_gdof():.6g}, nocsit={reg_n.sum_gdof():.6g})")
    return 0


# ---------------------------------------------------------------- capacity


def cmd_capacity(args) -> int:
    fields = _COMMON_FIELDS + [
        ("snr_db", str, "10,20,30"),
        ("samples", int, 100),
        ("seed", int, 0),
        ("lam", float, 0.5),
    ]
    cfg = _merge_config(args, fields)
    spec = _spec_from(cfg)
    split = PowerSplit(cfg["lam"])
    snr_list = [float(s) for s in str(cfg["snr_db"]).split(",") if s]
    print(f"seed: {cfg['seed']}")

    rows = []
    for snr_db in snr_list:
        rho = 10.0 ** (snr_db / 10.0)
        snr = snrs_from_levels(rho, spec.levels)
        rng = make_rng([cfg["seed"], int(round(snr_db * 1000))])
        acc = {k: 0.0 for k in (
            "outer_dl", "outer_ul", "outer_sum", "inner_dl", "inner_ul", "inner_sum",
            "exact_dl", "exact_ul", "exact_sum", "nocsit_dl", "nocsit_ul", "nocsit_sum")}
        for _ in range(cfg["samples"]):
            h = sample_rayleigh(spec.antennas, rng)
            outer = outer_bound(h, snr, spec.w, split)
            inner = inner_bound_bc(h, snr, spec.w, split)
            exact = achievable_mi_exact(h, snr, spec.w, split)
            nc = nocsit_region(h, snr, spec.w, split)
            for key, reg in (("outer", outer), ("inner", inner), ("exact", exact), ("nocsit", nc)):
                acc[f"{key}_dl"] += reg.c_dl
                acc[f"{key}_ul"] += reg.c_ul
                acc[f"{key}_sum"] += reg.c_sum
        ns = cfg["samples"]
        rows.append([snr_db] + [acc[k] / ns for k in acc])
    header = ["snr_db",
        "outer_dl", "outer_ul", "outer_sum", "inner_dl", "inner_ul", "inner_sum",
        "exact_dl", "exact_ul", "exact_sum", "nocsit_dl", "nocsit_ul", "nocsit_sum"]
    write_csv(args.out + ".csv", header, rows)
    c1, c2 = gap_constants(spec.antennas, spec.w)
    write_manifest(args.out + ".manifest.json", "capacity", cfg, [args.out + ".csv"],
                   extra={"gap_constants": {"c1": c1, "c2": c2}})
    print(f"wrote {args.out}.csv ({len(rows)} SNR points x {cfg['samples']} samples)")
    return 0


# ---------------------------------------------------------------- outage


def cmd_outage(args) -> int:
    fields = _COMMON_FIELDS + [
        ("r_dl", float, None),
        ("r_ul", float, None),
        ("rho_db", str, "10,15,20,25,30"),
        ("trials", int, 100000),
        ("seed", int, 0),
        ("lam", float, 0.5),
        ("csit", bool, True),
        ("threads", int, 1),
    ]
    cfg = _merge_config(args, fields)
    spec = _spec_from(cfg)
    print(f"seed: {cfg['seed']}")
    ocfg = OutageConfig(
        spec=spec,
        r_dl=cfg["r_dl"],
        r_ul=cfg["r_ul"],
        rho_grid_db=tuple(float(s) for s in str(cfg["rho_db"]).split(",") if s),
        trials_per_rho=cfg["trials"],
        lam=cfg["lam"],
        csit=cfg["csit"],
        seed=cfg["seed"],
        threads=cfg["threads"],
    )
    est = simulate_outage(ocfg)
    rows = [
        (db, p, lo, hi, k, est.trials)
        for db, p, lo, hi, k in zip(est.rho_db, est.p_out, est.ci_low, est.ci_high, est.counts)
    ]
    write_csv(args.out + ".csv", ["rho_db", "p_out", "ci_low", "ci_high", "outages", "trials"], rows)
    write_manifest(
        args.out + ".manifest.json", "outage", cfg, [args.out + ".csv"],
        extra={"slope": est.slope, "slope_residual": est.slope_residual,
               "slope_window_db": est.slope_window_db, "degenerate": est.degenerate},
    )
    slope_txt = "n/a" if est.slope is None else f"{est.slope:.4f}"
    print(f"wrote {args.out}.csv (fitted diversity slope {slope_txt})")
    return 0


# ---------------------------------------------------------------- bandwidth


def cmd_bandwidth(args) -> int:
    fields = _COMMON_FIELDS + [
        ("mode", str, None),
        ("csit", bool, True),
    ]
    cfg = _merge_config(args, fields)
    ant = parse_antennas(cfg["antennas"])
    mode = cfg["mode"]
    alpha_s = cfg["alpha_s"]
    rows = []
    if mode == "interference-free":
        for csit in (True, False):
            req = dmt.interference_free_bandwidth(ant.m_dl, ant.n_dl, ant.m_ul, alpha_s, csit)
            rows.append(("interference-free", "csit" if csit else "nocsit",
                         req.w, req.alpha_s_min, req.sufficient, "closed-form"))
    elif mode == "compensate":
        try:
            req = dmt.compensate_csit_bandwidth(ant.m_dl, ant.n_dl, ant.m_ul, alpha_s)
            rows.append(("compensate", "nocsit->csit", req.w, req.alpha_s_min,
                         req.sufficient, "closed-form"))
        except ValueError:
            w = dmt.compensate_csit_bandwidth_numeric(ant.m_dl, ant.n_dl, ant.m_ul, alpha_s)
            rows.append(("compensate", "nocsit->csit",
                         w if w is not None else float("nan"), alpha_s,
                         w is not None, "numeric-search"))
    elif mode == "gdof":
        for csit in (True, False):
            for case in ("A", "B"):
                try:
                    w = required_w_gdof(ant, cfg["alpha_i"], alpha_s, csit, case)
                except ValueError:
                    continue
                rows.append((f"gdof-case-{case}", "csit" if csit else "nocsit",
                             w, 0.0, True, "closed-form"))
        if not rows:
            raise UsageError("antenna configuration fits neither GDoF case A nor case B")
    else:
        raise UsageError("--mode must be one of: interference-free, compensate, gdof")
    write_csv(args.out + ".csv",
              ["mode", "direction", "w", "alpha_s_min", "sufficient", "method"], rows)
    write_manifest(args.out + ".manifest.json", "bandwidth", cfg, [args.out + ".csv"])
    for row in rows:
        print(f"{row[0]} [{row[1]}]: W = {_fmt(row[2])} (alpha_s floor {_fmt(row[3])}, {row[5]})")
    return 0


# ---------------------------------------------------------------- validate


def _validate_cases():
    cases = []
    for m in (1, 2):
        for w in (0.0, 1.0 / (2 * m + 1), 0.5):
            for csit in (True, False):
                cases.append((m, 1, 1, w, m / 2.0, csit))
    cases += [
        (2, 1, 2, 0.25, 1.0, True),
        (2, 1, 2, 1.5, 1.0, True),
        (3, 2, 2, 0.45, 1.0, True),
        (3, 2, 2, 1.0, 0.5, True),
        (2, 1, 2, 0.4, 1.0, False),
        (3, 2, 2, 1.0, 1.0, False),
        (3, 3, 2, 0.2, 1.0, False),
    ]
    return cases


def cmd_validate(args) -> int:
    npts = args.points or 60
    failures = 0
    print(f"{'config':>14} {'W':>6} {'a_S':>5} {'csit':>5} {'max |lp-closed|':>16}  result")
    for (m, n_dl, m_ul, w, a_s, csit) in _validate_cases():
        try:
            _, dsum_curve = dmt.dsum_closed_form(m, n_dl, m_ul, w, a_s, csit)
        except dmt.NoClosedFormError:
            print(f"({m},{n_dl},{m_ul},{m}) {w:>6.3g} {a_s:>5.3g} {str(csit):>5}  no stated regime   SKIP")
            continue
        spec = NetworkSpec(AntennaConfig(m, n_dl, m_ul, m), LinkLevels(alpha_s=a_s), w)
        fn = dmt.d_sum_csit if csit else dmt.d_sum_nocsit
        worst = 0.0
        for i in range(npts + 1):
            r_sum = dsum_curve.x_max * i / npts
            worst = max(worst, abs(eval_pl(dsum_curve, r_sum) - fn(spec, r_sum)))
        ok = worst <= 1e-6
        failures += 0 if ok else 1
        print(f"({m},{n_dl},{m_ul},{m}) {w:>6.3g} {a_s:>5.3g} {str(csit):>5} {worst:>16.3e}  {'PASS' if ok else 'FAIL'}")
    print(f"validate: {'all passed' if failures == 0 else f'{failures} case(s) FAILED'}")
    return 0 if failures == 0 else COMPUTE_ERROR


# ---------------------------------------------------------------- main


def build_parser():
    p = argparse.ArgumentParser(
        prog="fdsc",
        description="Side-channel assisted MIMO full-duplex analysis "
        "(rates in bits/s per main-channel Hz; W_m = 1)",
    )
    sub = p.add_subparsers(dest="command", required=True)

    pd = sub.add_parser("dmt", help="symmetric DMT curve (LP + closed form when stated)")
    _add_common(pd)
    pd.add_argument("--csit", dest="csit", action="store_true", default=None)
    pd.add_argument("--no-csit", dest="csit", action="store_false", default=None)
    pd.add_argument("--points", type=int)
    pd.set_defaults(func=cmd_dmt)

    pg = sub.add_parser("gdof", help="GDoF regions and per-antenna closed forms")
    _add_common(pg)
    pg.add_argument("--case", choices=["A", "B", "a", "b"])
    pg.set_defaults(func=cmd_gdof)

    pc = sub.add_parser("capacity", help="Monte Carlo averaged capacity bounds")
    _add_common(pc)
    pc.add_argument("--snr-db", dest="snr_db", help="comma list of SNRs in dB")
    pc.add_argument("--samples", type=int)
    pc.add_argument("--seed", type=int)
    pc.add_argument("--lam", type=float, help="side-channel power fraction")
    pc.set_defaults(func=cmd_capacity)

    po = sub.add_parser("outage", help="Monte Carlo outage probability and slope fit")
    _add_common(po)
    po.add_argument("--r-dl", dest="r_dl", type=float)
    po.add_argument("--r-ul", dest="r_ul", type=float)
    po.add_argument("--rho-db", dest="rho_db", help="comma list of nominal SNRs in dB")
    po.add_argument("--trials", type=int)
    po.add_argument("--seed", type=int)
    po.add_argument("--lam", type=float)
    po.add_argument("--csit", dest="csit", action="store_true", default=None)
    po.add_argument("--no-csit", dest="csit", action="store_false", default=None)
    po.add_argument("--threads", type=int)
    po.set_defaults(func=cmd_outage)

    pb = sub.add_parser("bandwidth", help="required side-channel bandwidth tables")
    _add_common(pb)
    pb.add_argument("--mode", choices=["interference-free", "compensate", "gdof"])
    pb.add_argument("--csit", dest="csit", action="store_true", default=None)
    pb.add_argument("--no-csit", dest="csit", action="store_false", default=None)
    pb.set_defaults(func=cmd_bandwidth)

    pv = sub.add_parser("validate", help="LP vs closed-form cross-check table")
    pv.add_argument("--points", type=int)
    pv.set_defaults(func=cmd_validate)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if exc.code is not None else USAGE_ERROR
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    except (ValueError, OSError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return COMPUTE_ERROR


if __name__ == "__main__":
    sys.exit(main())
