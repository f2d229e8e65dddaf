"""Command-line interface: ``entwb measure|family|roots|sample|figure``.

Exit codes: 0 success, 2 usage or parse error, 3 bad state, 4 the random
samples fell below the family envelope.
"""
import argparse
import json
import os
import sys

import numpy as np

from . import family as fam
from .errors import ConstraintViolation, EntanglementError
from .geometric import canonicalize
from .io import StateFileError, load_state, parse_angle, write_csv, write_json
from .measures import measure_report
from .parallel import ordered_map
from .sampler import ENVELOPE_TOL, verify_family_envelope

EXIT_OK, EXIT_USAGE, EXIT_STATE, EXIT_ENVELOPE = 0, 2, 3, 4

FAMILY_STEPS = 201
ROOT_STEPS = 2001
# 2001 points on [0, 2/3] put t = 1/3 on the grid; rows past 1/sqrt(3) are dropped.
ROOT_T_MAX = 2 / 3
SAMPLE_N = 10_000

FIGURE_GAMMA = {"fig1": np.pi / 6, "fig2": 2 * np.pi / 5, "figW": np.pi / 2}
FIGURE_COLUMNS = {
    "fig1": ["t", "g1", "g2"],
    "fig2": ["t", "g1", "g2"],
    "figW": ["t", "g1", "g2"],
    "fig3": ["gamma", "g", "t", "h"],
    "fig5": ["gamma", "tau", "Er"],
    "figner": ["gamma", "N", "ER_lower_bound"],
    "figrandom": ["gamma", "g", "family_g", "margin"],
}
FAMILY_COLUMNS = ["gamma", "g", "t", "h", "tau", "Er", "N", "geometric", "ER_lower"]


class UsageError(Exception):
    pass


# ---------------------------------------------------------------- data builders

def family_rows(gamma_min=0.0, gamma_max=np.pi / 2, steps=FAMILY_STEPS):
    if not (0 <= gamma_min <= gamma_max <= np.pi / 2 + 1e-15) or steps < 1:
        raise UsageError("need 0 <= gamma-min <= gamma-max <= pi/2 and steps >= 1")
    grid = np.linspace(gamma_min, gamma_max, steps)
    rows = []
    for p in ordered_map(fam.max_entangled_state, grid):
        m = p.measures
        rows.append([p.gamma, p.g, p.t_star, p.h, m.tau, m.residual_bipartite,
                     m.negativity[0], m.geometric, m.er_lower])
    return rows


def root_rows(gamma, t_steps=ROOT_STEPS, t_max=ROOT_T_MAX):
    if not 0 <= gamma <= np.pi / 2 + 1e-15:
        raise UsageError("gamma must lie in [0, pi/2]")
    if t_steps < 2 or t_max <= 0:
        raise UsageError("need t-steps >= 2 and t-max > 0")
    ts = np.linspace(0.0, t_max, t_steps)
    ts = ts[ts <= fam.T_MAX]
    g1, g2 = fam.root_curves(min(gamma, np.pi / 2), ts)
    return [[t, a, b] for t, a, b in zip(ts, g1, g2)]


# ---------------------------------------------------------------- commands

def cmd_measure(args):
    state = load_state(args.statefile, force_normalize=args.force_normalize)
    c = canonicalize(state)
    report = measure_report(state, g=c.g)
    out = {
        "measures": report.as_dict(),
        "canonical": {"g": c.g, "t1": c.t1, "t2": c.t2, "t3": c.t3, "h": c.h,
                      "gamma": c.gamma, "exceptional": c.exceptional},
    }
    write_json(args.out, out)
    return EXIT_OK


def cmd_family(args):
    write_csv(args.out, FAMILY_COLUMNS, family_rows(args.gamma_min, args.gamma_max, args.steps))
    return EXIT_OK


def cmd_roots(args):
    write_csv(args.out, ["t", "g1", "g2"], root_rows(args.gamma, args.t_steps, args.t_max))
    return EXIT_OK


def cmd_sample(args):
    if args.n < 1:
        raise UsageError("n must be >= 1")
    records, summary = verify_family_envelope(args.n, args.seed)
    write_csv(args.out, ["gamma", "g", "margin"], [[r.gamma, r.g, r.margin] for r in records])
    if args.summary is None:
        print(json.dumps(summary, sort_keys=True), file=sys.stderr)
    else:
        write_json(args.summary, summary)
    if summary["min_margin"] < -ENVELOPE_TOL:
        print(f"envelope violated: min margin {summary['min_margin']:.3e}", file=sys.stderr)
        return EXIT_ENVELOPE
    return EXIT_OK


def cmd_figure(args):
    fid = args.id
    cols = FIGURE_COLUMNS[fid]
    if fid in FIGURE_GAMMA:
        rows = root_rows(FIGURE_GAMMA[fid])
    elif fid == "figrandom":
        records, summary = verify_family_envelope(args.n, args.seed)
        rows = [[r.gamma, r.g, r.family_g, r.margin] for r in records]
    else:
        idx = {c: k for k, c in enumerate(FAMILY_COLUMNS)}
        idx["ER_lower_bound"] = idx["ER_lower"]
        rows = [[r[idx[c]] for c in cols] for r in family_rows()]
    write_csv(args.out, cols, rows)
    return EXIT_OK


# ---------------------------------------------------------------- parser

def _angle(text):
    try:
        return parse_angle(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an angle: {text!r}")


def build_parser():
    p = argparse.ArgumentParser(prog="entwb", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    m = sub.add_parser("measure", help="entanglement measures of a state file")
    m.add_argument("statefile")
    m.add_argument("--force-normalize", action="store_true",
                   help="renormalize states whose norm is off by more than 1e-6")
    m.add_argument("--out", default="-")
    m.set_defaults(func=cmd_measure)

    f = sub.add_parser("family", help="maximally entangled family on a gamma grid")
    f.add_argument("--gamma-min", type=_angle, default=0.0)
    f.add_argument("--gamma-max", type=_angle, default=np.pi / 2)
    f.add_argument("--steps", type=int, default=FAMILY_STEPS)
    f.add_argument("--out", default="-")
    f.set_defaults(func=cmd_family)

    r = sub.add_parser("roots", help="largest two degeneracy roots against t")
    r.add_argument("--gamma", type=_angle, required=True)
    r.add_argument("--t-steps", type=int, default=ROOT_STEPS)
    r.add_argument("--t-max", type=float, default=ROOT_T_MAX)
    r.add_argument("--out", default="-")
    r.set_defaults(func=cmd_roots)

    s = sub.add_parser("sample", help="Haar samples against the family envelope")
    s.add_argument("--n", type=int, default=SAMPLE_N, help="number of Haar states")
    s.add_argument("--seed", type=int, default=0, help="root seed; sample i uses stream (seed, i)")
    s.add_argument("--out", default="-", help="scatter CSV (gamma, g, margin)")
    s.add_argument("--summary", default=None, help="summary JSON path (default: stderr)")
    s.set_defaults(func=cmd_sample)

    g = sub.add_parser("figure", help="data behind one figure")
    g.add_argument("id", choices=sorted(FIGURE_COLUMNS))
    g.add_argument("--n", type=int, default=SAMPLE_N, help="samples for figrandom")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out", default="-")
    g.set_defaults(func=cmd_figure)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except BrokenPipeError:
        # reader closed early (e.g. piped into head)
        sys.stdout = open(os.devnull, "w")
        return EXIT_OK
    except (UsageError, StateFileError, OSError) as exc:
        print(f"entwb: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ConstraintViolation, EntanglementError, ValueError) as exc:
        print(f"entwb: bad state: {exc}", file=sys.stderr)
        return EXIT_STATE


if __name__ == "__main__":
    sys.exit(main())
