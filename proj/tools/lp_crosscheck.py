#!/usr/bin/env python3
"""Solve an exported LP file with scipy's HiGHS MILP backend and print the optimum.

Reads the CPLEX LP subset written by `gsopt export-lp`. Usage:

    lp_crosscheck.py model.lp [--time-limit 60] [--relax]
"""

import argparse
import re
import sys

import numpy as np
from scipy.optimize import Bounds, LinearConstraint, milp
from scipy.sparse import lil_matrix


def read_lp(path):
    minimize, constant = True, 0.0
    objective, rows, bounds, binaries = {}, [], {}, set()
    logical = []
    with open(path) as f:
        for line in f:
            line = line.rstrip("\n")
            m = re.match(r"\\ objective constant:\s*(\S+)", line)
            if m:
                constant = float(m.group(1))
                continue
            if line.startswith("   ") and logical:
                logical[-1] += " " + line
            else:
                logical.append(line)

    def terms(tokens):
        out, sign, k = {}, 1.0, 0
        while k < len(tokens):
            t = tokens[k]
            if t in ("+", "-"):
                sign = 1.0 if t == "+" else -1.0
                k += 1
                continue
            if t in ("<=", ">=", "="):
                return out, t, float(tokens[k + 1])
            out[tokens[k + 1]] = out.get(tokens[k + 1], 0.0) + sign * float(t)
            sign, k = 1.0, k + 2
        return out, None, None

    section = None
    for line in logical:
        tk = line.split()
        if not tk:
            continue
        if tk[0] in ("Minimize", "Maximize"):
            minimize, section = tk[0] == "Minimize", "obj"
        elif line == "Subject To":
            section = "st"
        elif tk[0] in ("Bounds", "Binary", "General", "End"):
            section = tk[0]
        elif section == "obj":
            objective = terms(tk[1:])[0]
        elif section == "st":
            rows.append(terms(tk[1:]))
        elif section == "Bounds":
            if len(tk) == 3:
                bounds[tk[0]] = (float(tk[2]), float(tk[2]))
            else:
                bounds[tk[2]] = (float(tk[0]), float(tk[4]))
        elif section in ("Binary", "General"):
            binaries.update(tk)
    return minimize, constant, objective, rows, bounds, binaries


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("lp")
    ap.add_argument("--time-limit", type=float, default=60.0)
    ap.add_argument("--relax", action="store_true", help="drop integrality")
    args = ap.parse_args()

    minimize, constant, objective, rows, bounds, binaries = read_lp(args.lp)
    names = sorted(set(objective) | set(bounds) | binaries | {v for r in rows for v in r[0]})
    index = {n: i for i, n in enumerate(names)}
    n = len(names)
    c = np.zeros(n)
    for v, a in objective.items():
        c[index[v]] = a if minimize else -a
    lo, hi = np.zeros(n), np.ones(n)
    for v, (l, h) in bounds.items():
        lo[index[v]], hi[index[v]] = l, h
    A = lil_matrix((len(rows), n))
    rlo, rhi = np.full(len(rows), -np.inf), np.full(len(rows), np.inf)
    for i, (t, sense, rhs) in enumerate(rows):
        for v, a in t.items():
            A[i, index[v]] = a
        if sense in ("<=", "="):
            rhi[i] = rhs
        if sense in (">=", "="):
            rlo[i] = rhs
    integrality = np.array([0 if args.relax or v not in binaries else 1 for v in names])
    res = milp(c, constraints=[LinearConstraint(A.tocsr(), rlo, rhi)] if rows else [],
               bounds=Bounds(lo, hi), integrality=integrality,
               options={"time_limit": args.time_limit, "mip_rel_gap": 1e-6})
    if res.x is None:
        print(f"status: {res.message}")
        return 1
    obj = (res.fun if minimize else -res.fun) + constant
    print(f"status: {res.message}")
    print(f"objective: {obj:.17g}")
    bound = getattr(res, "mip_dual_bound", None)
    if bound is not None and np.isfinite(bound):
        print(f"bound: {(bound if minimize else -bound) + constant:.17g}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
