"""Command-line interface: ``nilproj <command> ...``.

Results are printed to stdout as one JSON document (CSV for ``table``) with
numbers rounded to 12 significant digits. Exit codes: 0 success, 1 domain
error or failed certificate, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from dataclasses import asdict, dataclass, field

import numpy as np

from . import __version__
from .arveson import corner_profile
from .corank1 import candidate_values, lower_bound, nu_conjecture, nu_corank1, nu_rank1, optimal_projection
from .errors import DomainError, NilprojError
from .matrixio import matrix_to_doc, read_matrix, write_matrix, write_matrix_csv
from .pairing import closest_pair
from .search import DEFAULT_SEED, SearchConfig, conjecture_table, random_walk_minimize

SEED_ENV = "NILPROJ_SEED"

# certificate name -> largest acceptable defect
PAIR_TOLERANCES = {
    "idempotent": 1e-10,
    "unitary": 1e-9,
    "profile_spread": 1e-8,
    "norm_gap": 1e-8,
}


@dataclass
class RunManifest:
    command: str
    parameters: dict
    seed: int
    tool_version: str = __version__
    results: dict = field(default_factory=dict)


def round12(obj):
    """Round every float in a nested structure to 12 significant digits."""
    if isinstance(obj, float):
        return float(f"{obj:.12g}")
    if isinstance(obj, dict):
        return {k: round12(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [round12(v) for v in obj]
    return obj


def _emit(doc) -> None:
    sys.stdout.write(json.dumps(round12(doc), indent=2) + "\n")


def _save(M, path: str, as_csv: bool) -> None:
    (write_matrix_csv if as_csv else write_matrix)(M, path)


def _default_seed() -> int:
    raw = os.environ.get(SEED_ENV)
    if raw is None:
        return DEFAULT_SEED
    try:
        return int(raw)
    except ValueError:
        raise DomainError(f"{SEED_ENV}={raw!r} is not an integer") from None


def cmd_nu(args) -> int:
    r, n = args.rank, args.dim
    if not 1 <= r <= n:
        raise DomainError(f"need 1 <= rank <= dim, got rank={r}, dim={n}")
    if args.conjecture:
        value, formula = nu_conjecture(r, n), "sec(pi/(n/r+2))/2 (conjectured)"
    elif r == n:
        value, formula = 1.0, "1 (identity projection)"
    elif r == 1:
        value, formula = nu_rank1(n), "sec(pi/(n+2))/2"
    elif r == n - 1:
        value, formula = nu_corank1(n), "sec(pi/(n/(n-1)+2))/2"
    else:
        raise DomainError(f"no closed form for rank {r} in dimension {n}; pass --conjecture")
    _emit({"rank": r, "dim": n, "nu": value, "formula": formula})
    return 0


def cmd_construct(args) -> int:
    phases = None
    if args.phases:
        phases = read_matrix(args.phases).reshape(-1)
    Q = optimal_projection(args.dim, phases)
    doc = {"dim": args.dim, "nu": nu_corank1(args.dim)}
    if args.out:
        _save(Q, args.out, args.csv)
        doc["out"] = args.out
    else:
        doc["Q"] = matrix_to_doc(Q)
    _emit(doc)
    return 0


def cmd_pair(args) -> int:
    pair = closest_pair(args.dim)
    certs = pair.certificates()
    doc = {"dim": pair.n, "nu": pair.nu, "certificates": certs, "tolerances": PAIR_TOLERANCES}
    for name, M, path in (("Q", pair.Q, args.out_q), ("T", pair.T, args.out_t), ("U", pair.U, args.out_u)):
        if path:
            _save(M, path, args.csv)
        else:
            doc[name] = matrix_to_doc(M)
    failed = [k for k, tol in PAIR_TOLERANCES.items() if certs[k] > tol]
    doc["ok"] = not failed
    _emit(doc)
    if failed:
        print(f"certificate failure: {', '.join(failed)}", file=sys.stderr)
        return 1
    return 0


def cmd_profile(args) -> int:
    A = read_matrix(args.infile)
    prof = corner_profile(A)
    _emit({"dim": prof.n, "norms": prof.norms, "distance": prof.max_norm, "spread": prof.spread})
    return 0


def cmd_candidates(args) -> int:
    cs = candidate_values(args.dim)
    rows = [{"k": k, "t": t, "nu": t ** 0.5, "passes_bound": t >= cs.lower_bound_sq} for k, t in cs.entries]
    _emit({"dim": cs.n, "m": cs.m, "lower_bound_sq": cs.lower_bound_sq,
           "selected_k": cs.selected_k, "candidates": rows})
    return 0


def _search_results(params: dict, seed: int) -> dict:
    config = SearchConfig(seed=seed, **params)
    res = random_walk_minimize(config)
    return {
        "best_objective": res.best_objective,
        "lower_bound": lower_bound(config.r, config.n),
        "conjectured": nu_conjecture(config.r, config.n),
        "profile": res.profile.norms,
        "per_start_bests": res.per_start_bests,
        "evaluations": res.evaluations,
        "best_projection": matrix_to_doc(res.best_projection),
    }


def cmd_search(args) -> int:
    seed = args.seed if args.seed is not None else _default_seed()
    params = {"r": args.rank, "n": args.dim, "starts": args.starts, "steps_per_start": args.steps,
              "real_only": args.real_only, "persymmetric_bias": args.persymmetric}
    manifest = RunManifest("search", params, seed, results=_search_results(params, seed))
    doc = round12(asdict(manifest))
    if args.manifest_out:
        with open(args.manifest_out, "w") as fh:
            json.dump(doc, fh, indent=2)
            fh.write("\n")
    _emit(doc)
    return 0


def cmd_replay(args) -> int:
    with open(args.manifest) as fh:
        old = json.load(fh)
    if old.get("command") != "search":
        raise DomainError(f"cannot replay command {old.get('command')!r}")
    manifest = RunManifest("search", old["parameters"], old["seed"],
                           results=_search_results(old["parameters"], old["seed"]))
    _emit(asdict(manifest))
    return 0


def cmd_table(args) -> int:
    seed = args.seed if args.seed is not None else _default_seed()
    template = SearchConfig(r=1, n=1, seed=seed, starts=args.starts, steps_per_start=args.steps)
    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(["r", "n", "nu_estimate", "nu_formula", "abs_diff", "below_formula"])
    for row in conjecture_table(args.max_dim, template, workers=args.workers):
        w.writerow([row.r, row.n, *(f"{v:.12g}" for v in (row.nu_estimate, row.nu_formula, row.abs_diff)),
                    int(row.below_formula)])
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="nilproj", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("nu", help="distance from rank-r projections to the nilpotents")
    p.add_argument("--rank", type=int, required=True)
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--conjecture", action="store_true", help="use the conjectured general formula")
    p.set_defaults(func=cmd_nu)

    p = sub.add_parser("construct", help="optimal rank n-1 projection")
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--phases", help="matrix file holding n unit-modulus phases")
    p.add_argument("--out")
    p.add_argument("--csv", action="store_true", help="write CSV instead of JSON")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("pair", help="closest projection-nilpotent pair with certificates")
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--out-q")
    p.add_argument("--out-t")
    p.add_argument("--out-u")
    p.add_argument("--csv", action="store_true", help="write CSV instead of JSON")
    p.set_defaults(func=cmd_pair)

    p = sub.add_parser("profile", help="corner norms of a matrix file")
    p.add_argument("--in", dest="infile", required=True)
    p.set_defaults(func=cmd_profile)

    p = sub.add_parser("candidates", help="candidate distances for rank n-1")
    p.add_argument("--dim", type=int, required=True)
    p.set_defaults(func=cmd_candidates)

    p = sub.add_parser("search", help="random-walk estimate of the rank-r distance")
    p.add_argument("--rank", type=int, required=True)
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--seed", type=int)
    p.add_argument("--starts", type=int, default=8)
    p.add_argument("--steps", type=int, default=20000)
    p.add_argument("--real-only", action="store_true")
    p.add_argument("--persymmetric", action="store_true")
    p.add_argument("--manifest-out", help="also write the run manifest here")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("replay", help="re-run a saved search manifest")
    p.add_argument("manifest")
    p.set_defaults(func=cmd_replay)

    p = sub.add_parser("table", help="search estimates against the conjectured formula (CSV)")
    p.add_argument("--max-dim", type=int, required=True)
    p.add_argument("--seed", type=int)
    p.add_argument("--starts", type=int, default=8)
    p.add_argument("--steps", type=int, default=20000)
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_table)
    return parser


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (NilprojError, OSError) as exc:
        print(f"nilproj: error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
