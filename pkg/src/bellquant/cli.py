"""Command-line interface: ``bellquant {analyze,scan,verify,optimize}``."""

import argparse
import csv
import io
import json
import logging
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from functools import partial
from pathlib import Path

import numpy as np

from . import states
from .entanglement import entanglement_report
from .errors import BellQuantError
from .optimizer import SeeSawConfig, see_saw
from .quditbounds import bounds_report
from .serialize import dumps, fmt_float, load_state_json, to_jsonable
from .states import schmidt
from .twoqubit import m_chsh, non_diagonalizability_witness, profile
from .verification import (
    INVARIANTS,
    check_state,
    new_report,
    seesaw_deviations,
    state_deviations,
)

log = logging.getLogger("bellquant")

SCAN_FIELDS = [
    "seed", "d1", "d2", "rank", "C", "N", "gamma", "detT", "mchsh", "beta",
    "bigK", "gp_value", "lb_thm4", "ub_pure", "ub_general", "ub_dim",
    "seesaw_ratio", "max_invariant_deviation",
]


class UsageError(Exception):
    pass


def parse_state(source):
    """Resolve a builtin name or a JSON file path to a :class:`PureState`."""
    try:
        if source == "bell":
            return states.bell_state()
        if source == "remark1":
            return states.remark1_state()
        if source.startswith("max-entangled:"):
            return states.max_entangled_state(int(source.split(":", 1)[1]))
        if source.startswith("product:"):
            d1, d2 = (int(x) for x in source.split(":", 1)[1].split(","))
            return states.product_state(d1, d2)
        if source.startswith("schmidt:"):
            lam = [float(x) for x in source.split(":", 1)[1].split(",")]
            return states.schmidt_diagonal_state(lam)
        path = Path(source)
        if path.is_file():
            return load_state_json(path.read_text())
    except (ValueError, BellQuantError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot parse state {source!r}: {exc}") from exc
    raise UsageError(f"unknown state source {source!r}")


def _fmt_vec(v):
    return "(" + ", ".join(f"{x:.12g}" for x in np.asarray(v).ravel()) + ")"


def _violations(devs):
    return {k: v for k, v in devs.items() if v > INVARIANTS[k][0]}


def analyze_state(psi, tol):
    sd = schmidt(psi, tol)
    out = {
        "d1": psi.d1,
        "d2": psi.d2,
        "schmidt": {"lambdas": sd.lambdas, "rank": sd.rank, "tol_used": sd.tol_used},
        "entanglement": entanglement_report(psi, tol),
        "bounds": bounds_report(psi, tol),
    }
    if psi.dims == (2, 2):
        p = profile(psi)
        out["profile"] = p
        out["mchsh"] = m_chsh(p)
        out["diagonalizability"] = non_diagonalizability_witness(p)
    devs, _ = state_deviations(psi, 0, tol)
    out["invariant_violations"] = _violations(devs)
    return out


def render_analysis(a):
    lines = [f"state dims: {a['d1']} x {a['d2']}"]
    sd = a["schmidt"]
    lines.append(f"Schmidt rank: {sd['rank']}  lambdas: {_fmt_vec(sd['lambdas'])}")
    e = a["entanglement"]
    lines.append(f"concurrence C = {e.concurrence:.12g}")
    lines.append(f"negativity  N = {e.negativity:.12g}")
    if e.gamma is not None:
        lines.append(f"Bloch norm gamma = {e.gamma:.12g}")
    if "profile" in a:
        p = a["profile"]
        lines.append(f"r1 = {_fmt_vec(p.r1)}")
        lines.append(f"r2 = {_fmt_vec(p.r2)}")
        for i, row in enumerate(p.T):
            lines.append(("T = " if i == 0 else "    ") + _fmt_vec(row))
        lines.append(f"det T = {p.detT:.12g}  singular values = {_fmt_vec(p.singulars)}")
        lines.append(f"M_chsh = {a['mchsh']:.12g}")
        w = a["diagonalizability"]
        for lam, alg, geo in w.eigenvalues:
            lines.append(f"eigenvalue {lam:.6g}: algebraic {alg}, geometric {geo}")
        lines.append("T diagonalizable" if w.diagonalizable else "T NON-DIAGONALIZABLE")
    b = a["bounds"]
    lines += [
        f"beta = {b.beta:.12g}  K = {b.bigK:.12g}",
        f"Gisin-Peres CHSH/2 = {b.gp_value:.12g}  (raw {b.gp_raw:.12g})",
        f"lower bounds: sqrt(1+K^2) = {b.lb_sqrt1K2:.12g}  concurrence bound = {b.lb_thm4:.12g}",
        f"upper bounds: Schmidt-rank = {b.ub_pure:.12g}  dimension = {b.ub_general:.12g}  2d-1 = {b.ub_dim}",
    ]
    if a["invariant_violations"]:
        lines.append("INVARIANT VIOLATIONS: " + ", ".join(sorted(a["invariant_violations"])))
    return "\n".join(lines)


def _emit(text, out):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_analyze(args):
    psi = parse_state(args.state)
    a = analyze_state(psi, args.tol)
    _emit((dumps(a) if args.json else render_analysis(a)) + "\n", args.out)
    if a["invariant_violations"]:
        print("invariant violation: " + ", ".join(sorted(a["invariant_violations"])), file=sys.stderr)
        return 3
    return 0


def scan_row(d1, d2, seed, with_seesaw, restarts, tol):
    psi = states.random_haar_state(d1, d2, seed)
    devs, b = state_deviations(psi, seed, tol)
    row = dict.fromkeys(SCAN_FIELDS)
    row.update(
        seed=seed, d1=d1, d2=d2, rank=b.rank, C=b.concurrence,
        N=entanglement_report(psi, tol).negativity, beta=b.beta, bigK=b.bigK,
        gp_value=b.gp_value, lb_thm4=b.lb_thm4, ub_pure=b.ub_pure,
        ub_general=b.ub_general, ub_dim=b.ub_dim,
    )
    if (d1, d2) == (2, 2):
        p = profile(psi)
        row.update(gamma=p.gamma, detT=p.detT, mchsh=m_chsh(p))
    if with_seesaw:
        res = see_saw(psi, SeeSawConfig(restarts=restarts, seed=seed))
        row["seesaw_ratio"] = res.ratio
        devs.update(seesaw_deviations(psi, res, b))
    row["max_invariant_deviation"] = max(devs.values())
    return row


def _pmap(fn, items, jobs):
    if jobs <= 1:
        return [fn(*it) for it in items]
    with ProcessPoolExecutor(max_workers=jobs) as ex:
        return list(ex.map(fn, *zip(*items)))


def cmd_scan(args):
    if args.n < 1:
        raise UsageError("-n must be >= 1")
    fn = partial(_scan_worker, args.d1, args.d2, args.seesaw, args.restarts, args.tol)
    rows = _pmap(fn, [(args.seed + i,) for i in range(args.n)], args.jobs)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SCAN_FIELDS)
    for row in rows:
        w.writerow([fmt_float(row[k]) for k in SCAN_FIELDS])
    text = buf.getvalue()
    if args.json:
        text = json.dumps(to_jsonable(rows), indent=2) + "\n"
    try:
        _emit(text, args.out)
    except OSError as exc:
        raise UsageError(f"cannot write {args.out}: {exc}") from exc
    return 0


def _scan_worker(d1, d2, with_seesaw, restarts, tol, seed):
    return scan_row(d1, d2, seed, with_seesaw, restarts, tol)


def _verify_worker(d1, d2, with_seesaw, restarts, tol, seed):
    return check_state(d1, d2, seed, with_seesaw, restarts, tol)


def parse_dims(text):
    dims = []
    try:
        for part in text.split(","):
            a, b = part.lower().split("x")
            dims.append((int(a), int(b)))
    except ValueError as exc:
        raise UsageError(f"bad --dims {text!r}; expected e.g. 2x2,3x4") from exc
    if any(a < 2 or b < 2 for a, b in dims):
        raise UsageError("dimensions must be >= 2")
    return dims


def parse_overrides(items):
    out = {}
    for item in items or ():
        name, _, val = item.partition("=")
        if name not in INVARIANTS:
            raise UsageError(f"unknown invariant {name!r}")
        try:
            out[name] = float(val)
        except ValueError as exc:
            raise UsageError(f"bad tolerance in {item!r}") from exc
    return out


def run_verify(dims, n, seed, seesaw_n=3, restarts=32, tol=1e-10, jobs=1, overrides=None):
    rep = new_report(dims, n, seed, overrides)
    t0 = time.perf_counter()
    for d1, d2 in dims:
        seeds = [seed + i for i in range(n)]
        items = [(d1, d2, i < seesaw_n, restarts, tol, s) for i, s in enumerate(seeds)]
        results = _pmap(_verify_worker, items, jobs)
        for s, devs in zip(seeds, results):
            rep.record(devs, s, (d1, d2))
    rep.wall_time = time.perf_counter() - t0
    return rep


def render_verify(rep):
    lines = [f"ensemble: dims={rep.dims} n_per_dim={rep.n_per_dim} seed={rep.seed}"]
    for r in rep.invariants.values():
        if r.n_checked == 0:
            continue
        status = "PASS" if r.passed else "FAIL"
        lines.append(
            f"{status} {r.module}.{r.name}: max_dev={r.max_deviation:.3e} "
            f"tol={r.tolerance:.0e} n={r.n_checked} worst_seed={r.worst_seed} dims={r.worst_dims}"
        )
    lines.append("ALL PASS" if rep.passed else f"{len(rep.failures)} invariant(s) FAILED")
    return "\n".join(lines)


def cmd_verify(args):
    if args.n < 1:
        raise UsageError("-n must be >= 1")
    rep = run_verify(
        parse_dims(args.dims), args.n, args.seed, args.seesaw_n, args.restarts,
        args.tol, args.jobs, parse_overrides(args.tol_override),
    )
    payload = to_jsonable(rep)
    # wall time goes to stderr so stdout/--out stay byte-identical across runs
    payload.pop("wall_time")
    payload["passed"] = rep.passed
    text = json.dumps(payload, indent=2) if args.json else render_verify(rep)
    _emit(text + "\n", args.out)
    print(f"wall time: {rep.wall_time:.2f} s", file=sys.stderr)
    for r in rep.failures:
        print(
            f"FAILED {r.name}: reproduce with seed {r.worst_seed} dims {r.worst_dims}",
            file=sys.stderr,
        )
    return 0 if rep.passed else 1


def optimize_state(psi, restarts, seed, max_iters, tol):
    res = see_saw(psi, SeeSawConfig(restarts=restarts, max_iters=max_iters, seed=seed))
    b = bounds_report(psi, tol)
    return res, b


def render_optimize(res, b):
    lines = [
        f"see-saw CHSH value = {res.value:.12g}  ratio = {res.ratio:.12g}",
        f"converged: {res.converged}  iterations: {res.iterations_used}  "
        f"restarts: {res.restarts_used}  best restart: {res.best_restart}",
    ]
    s = res.setting
    for name in ("A1", "A2", "B1", "B2"):
        m = getattr(s, name)
        lines.append(f"{name} eigenvalues: {_fmt_vec(np.linalg.eigvalsh(m))}")
        if m.shape == (2, 2):
            from .twoqubit import bloch_vector

            lines.append(f"{name} Bloch direction: {_fmt_vec(bloch_vector(m))}")
        else:
            for row in m:
                lines.append("    " + " ".join(f"{z.real:+.6f}{z.imag:+.6f}j" for z in row))
    lines += [
        "comparison (CHSH/2):",
        f"  see-saw      {res.ratio:.12g}",
        f"  sqrt(1+K^2)  {b.lb_sqrt1K2:.12g}",
        f"  Gisin-Peres  {b.gp_value:.12g}",
        f"  lower bound  {b.lb_thm4:.12g}",
        f"  upper bound  {b.ub_pure:.12g}",
    ]
    return "\n".join(lines)


def cmd_optimize(args):
    psi = parse_state(args.state)
    if psi.d1 < 2 or psi.d2 < 2:
        raise UsageError("optimize needs local dimensions >= 2")
    res, b = optimize_state(psi, args.restarts, args.seed, args.max_iters, args.tol)
    if args.json:
        payload = {"result": res, "comparison": {
            "ratio": res.ratio, "sqrt1K2": b.lb_sqrt1K2, "gp_value": b.gp_value,
            "lb_thm4": b.lb_thm4, "ub_pure": b.ub_pure}}
        text = dumps(payload)
    else:
        text = render_optimize(res, b)
    _emit(text + "\n", args.out)
    return 0


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="base RNG seed")
    common.add_argument("--tol", type=float, default=1e-10, help="relative Schmidt-rank tolerance")
    common.add_argument("--json", action="store_true", help="emit JSON instead of text/CSV")
    common.add_argument("--out", help="write output to this path instead of stdout")

    p = argparse.ArgumentParser(prog="bellquant", description=__doc__)
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", parents=[common], help="report on a single state")
    a.add_argument("state", help="JSON file or bell | remark1 | max-entangled:d | product:d1,d2 | schmidt:l1,l2,...")
    a.set_defaults(func=cmd_analyze)

    s = sub.add_parser("scan", parents=[common], help="Haar ensemble scan to CSV")
    s.add_argument("--d1", type=int, required=True)
    s.add_argument("--d2", type=int, required=True)
    s.add_argument("-n", type=int, required=True)
    s.add_argument("--seesaw", action="store_true", help="also run the see-saw optimizer")
    s.add_argument("--restarts", type=int, default=32)
    s.add_argument("--jobs", type=int, default=1)
    s.set_defaults(func=cmd_scan)

    v = sub.add_parser("verify", parents=[common], help="check all invariants on Haar ensembles")
    v.add_argument("--dims", default="2x2", help="comma list, e.g. 2x2,3x3")
    v.add_argument("-n", type=int, required=True, help="states per dimension pair")
    v.add_argument("--seesaw-n", type=int, default=3, help="states per pair also run through the optimizer")
    v.add_argument("--restarts", type=int, default=32)
    v.add_argument("--jobs", type=int, default=1)
    v.add_argument("--tol-override", action="append", metavar="NAME=TOL")
    v.set_defaults(func=cmd_verify)

    o = sub.add_parser("optimize", parents=[common], help="see-saw CHSH maximization")
    o.add_argument("state")
    o.add_argument("--restarts", type=int, default=32)
    o.add_argument("--max-iters", type=int, default=500)
    o.set_defaults(func=cmd_optimize)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s: %(message)s")
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"bellquant {args.command}: error: {exc}", file=sys.stderr)
        return 2
    except BellQuantError as exc:
        print(f"bellquant {args.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
