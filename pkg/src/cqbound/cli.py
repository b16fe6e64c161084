"""Command-line front end.

    cqbound certify  --rho A.json --sigma B.json
    cqbound sweep    --dim-b 2 3 --eps-points 5 --trials 10 --seed 1
    cqbound saturate --dim-b 3 --eps 0.25 --out run/
    cqbound truncate --alphabet 64 --dim-b 2 --eps 0.1 --levels 4 8 16 32
    cqbound eof      --rho A.json --dim-a 2 --dim-b 2 [--sigma B.json]
    cqbound explore  --conjecture qc --dim-a 2 --dim-b 2 --eps 0.1 0.3 --trials 100

The primary report goes to stdout, diagnostics to stderr.  With ``--out DIR``
outputs are also written to ``DIR`` together with a ``manifest.json`` that
records the resolved configuration.  Exit status is 0 on success, 2 when a
bound is violated or a violation candidate is found, 1 on bad input.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .bounds import (
    certify_countable,
    certify_prop1,
    countable_proxy_state,
    epsilon_range,
    saturating_pair,
    sweep,
    sweep_csv,
)
from .eof import EofConfig, certify_eof_corollary, eof_estimate
from .errors import CQBoundError
from .explorer import SearchConfig, search
from .serialize import load_state, save_state
from .states import CQState, cq_pair_at_distance

EXIT_OK, EXIT_INPUT, EXIT_VIOLATION = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


class _Run:
    """Collects output files and writes the manifest for one command."""

    def __init__(self, args, config: dict):
        self.out = Path(args.out) if getattr(args, "out", None) else None
        self.command = args.command
        self.config = config
        self.seed = config.get("seed")
        self.files: list[str] = []
        self.t0 = time.perf_counter()
        if self.out:
            self.out.mkdir(parents=True, exist_ok=True)

    def write(self, name: str, text: str) -> None:
        if self.out is None:
            return
        (self.out / name).write_text(text)
        self.files.append(name)

    def save_state(self, name: str, state) -> None:
        if self.out is None:
            return
        save_state(state, self.out / name)
        self.files.append(name)

    def finish(self) -> None:
        if self.out is None:
            return
        manifest = {
            "command": self.command,
            "config": self.config,
            "seed": self.seed,
            "version": __version__,
            "duration_s": time.perf_counter() - self.t0,
            "outputs": self.files,
        }
        (self.out / "manifest.json").write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")


def _emit(text: str) -> None:
    sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _load_cq(path) -> CQState:
    state = load_state(path)
    if not isinstance(state, CQState):
        raise CQBoundError(f"{path}: expected a cq state document")
    return state


def _load_density(path) -> np.ndarray:
    state = load_state(path)
    return state.embed() if isinstance(state, CQState) else state


def cmd_certify(args) -> int:
    rho, sigma = _load_cq(args.rho), _load_cq(args.sigma)
    run = _Run(args, {"rho": str(args.rho), "sigma": str(args.sigma)})
    rep = certify_prop1(rho, sigma)
    text = rep.to_json(indent=2)
    _emit(text)
    run.write("report.json", text + "\n")
    run.finish()
    return EXIT_OK if rep.satisfied else EXIT_VIOLATION


def _eps_grid(args, d: int | None = None) -> list[float]:
    if args.eps is not None:
        return list(args.eps)
    n = args.eps_points
    high = epsilon_range(d)[1] if d else 1.0
    return [high * (i + 1) / (n + 1) for i in range(n)]


def cmd_sweep(args) -> int:
    if args.eps is None and args.eps_points is None:
        raise CQBoundError("give --eps values or --eps-points")
    run = _Run(args, {
        "dim_b": args.dim_b, "eps": args.eps, "eps_points": args.eps_points,
        "trials": args.trials, "alphabet": args.alphabet, "seed": args.seed,
    })
    rows = []
    for d in args.dim_b:
        rows += sweep([d], _eps_grid(args, d), args.trials, args.seed, args.alphabet)
    text = sweep_csv(rows)
    sys.stdout.write(text)
    run.write("sweep.csv", text)
    run.finish()
    print(f"{len(rows)} cells, {sum(r.trials for r in rows)} pairs", file=sys.stderr)
    return EXIT_OK if all(r.satisfied for r in rows) else EXIT_VIOLATION


def cmd_saturate(args) -> int:
    run = _Run(args, {"dim_b": args.dim_b, "eps": args.eps})
    rho, sigma = saturating_pair(args.dim_b, args.eps)
    rep = certify_prop1(rho, sigma)
    run.save_state("rho.json", rho)
    run.save_state("sigma.json", sigma)
    text = rep.to_json(indent=2)
    _emit(text)
    run.write("report.json", text + "\n")
    run.finish()
    return EXIT_OK if rep.satisfied else EXIT_VIOLATION


def cmd_truncate(args) -> int:
    config = {"levels": args.levels, "seed": args.seed}
    if args.rho:
        rho, sigma = _load_cq(args.rho), _load_cq(args.sigma)
        config.update(rho=str(args.rho), sigma=str(args.sigma))
    else:
        if args.eps is None:
            raise CQBoundError("give --rho/--sigma files or --eps for a generated pair")
        rho = countable_proxy_state(args.alphabet, args.dim_b, args.profile, args.seed)
        sigma = cq_pair_at_distance(rho, args.eps, np.random.default_rng([args.seed, 1]))
        config.update(alphabet=args.alphabet, dim_b=args.dim_b, profile=args.profile, eps=args.eps)
    run = _Run(args, config)
    levels = args.levels or [rho.alphabet_size]
    res = certify_countable(rho, sigma, levels)
    text = json.dumps([r.to_dict() for r in res], indent=2)
    _emit(text)
    run.write("truncate.json", text + "\n")
    run.finish()
    return EXIT_OK if all(r.report.satisfied for r in res) else EXIT_VIOLATION


def cmd_eof(args) -> int:
    cfg = EofConfig(starts=args.starts, seed=args.seed)
    config = {"rho": str(args.rho), "sigma": args.sigma and str(args.sigma),
              "dim_a": args.dim_a, "dim_b": args.dim_b, "starts": args.starts, "seed": args.seed}
    rho = _load_density(args.rho)
    run = _Run(args, config)
    if args.sigma:
        sigma = _load_density(args.sigma)
        rep = certify_eof_corollary(rho, sigma, args.dim_a, args.dim_b, cfg)
        text = json.dumps(rep.to_dict(), indent=2)
        ok = rep.report.satisfied
    else:
        res = eof_estimate(rho, args.dim_a, args.dim_b, cfg)
        text = json.dumps({"value": res.value, "converged": res.converged}, indent=2)
        run.write("witness.json", res.witness.to_json() + "\n")
        ok = True
    _emit(text)
    run.write("eof.json", text + "\n")
    run.finish()
    return EXIT_OK if ok else EXIT_VIOLATION


def cmd_explore(args) -> int:
    d1 = args.dim_a if args.dim_a is not None else args.alphabet
    if d1 is None:
        raise CQBoundError("give --dim-a (or --alphabet for qc)")
    cfg = SearchConfig(args.conjecture, (d1, args.dim_b), tuple(args.eps), args.trials, args.seed)
    run = _Run(args, {"conjecture": cfg.conjecture, "dims": list(cfg.dims),
                      "eps": list(cfg.epsilon_grid), "trials": cfg.trials_per_cell,
                      "seed": cfg.seed, "local_refine_steps": cfg.local_refine_steps})
    rec = search(cfg)
    text = rec.to_csv() if args.format == "csv" else rec.to_json()
    _emit(text)
    run.write(f"search.{args.format}", text if text.endswith("\n") else text + "\n")
    if run.out is not None:
        run.files += [p.name for p in rec.write_witnesses(run.out)]
    run.finish()
    for c in rec.violation_candidates:
        print(f"violation candidate at eps={c.epsilon}: margin {c.best_margin:.3e}", file=sys.stderr)
    return EXIT_VIOLATION if rec.violation_candidates else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="cqbound", description=__doc__.split("\n\n")[0])
    p.add_argument("--version", action="version", version=f"cqbound {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("certify", help="check the cq continuity bound for two state files")
    c.add_argument("--rho", required=True, type=Path)
    c.add_argument("--sigma", required=True, type=Path)
    c.add_argument("--out", type=Path)
    c.set_defaults(func=cmd_certify)

    s = sub.add_parser("sweep", help="worst-case margins over random pairs on a (d, eps) grid")
    s.add_argument("--dim-b", type=int, nargs="+", required=True)
    s.add_argument("--eps", type=float, nargs="*")
    s.add_argument("--eps-points", type=int, help="interior points of (0, 1-1/d] per d")
    s.add_argument("--trials", type=int, default=10)
    s.add_argument("--alphabet", type=int, default=5, help="largest alphabet size drawn")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--out", type=Path)
    s.set_defaults(func=cmd_sweep)

    t = sub.add_parser("saturate", help="write a pair of cq states attaining the bound")
    t.add_argument("--dim-b", type=int, required=True)
    t.add_argument("--eps", type=float, required=True)
    t.add_argument("--out", type=Path)
    t.set_defaults(func=cmd_saturate)

    r = sub.add_parser("truncate", help="certify the bound on truncations of a large alphabet")
    r.add_argument("--rho", type=Path)
    r.add_argument("--sigma", type=Path)
    r.add_argument("--alphabet", type=int, default=64)
    r.add_argument("--dim-b", type=int, default=2)
    r.add_argument("--eps", type=float)
    r.add_argument("--profile", choices=["geometric", "zeta"], default="geometric")
    r.add_argument("--levels", type=int, nargs="*")
    r.add_argument("--seed", type=int, default=0)
    r.add_argument("--out", type=Path)
    r.set_defaults(func=cmd_truncate)

    e = sub.add_parser("eof", help="estimate entanglement of formation, or check its continuity bound")
    e.add_argument("--rho", required=True, type=Path)
    e.add_argument("--sigma", type=Path)
    e.add_argument("--dim-a", type=int, required=True)
    e.add_argument("--dim-b", type=int, required=True)
    e.add_argument("--starts", type=int, default=32)
    e.add_argument("--seed", type=int, default=0)
    e.add_argument("--out", type=Path)
    e.set_defaults(func=cmd_eof)

    x = sub.add_parser("explore", help="search for violations of the open conjectures")
    x.add_argument("--conjecture", choices=["qc", "fq"], required=True)
    x.add_argument("--dim-a", type=int, help="d_X for qc, d_A for fq")
    x.add_argument("--alphabet", type=int, help="alias of --dim-a for qc")
    x.add_argument("--dim-b", type=int, required=True)
    x.add_argument("--eps", type=float, nargs="+", required=True)
    x.add_argument("--trials", type=int, default=100)
    x.add_argument("--seed", type=int, default=0)
    x.add_argument("--format", choices=["json", "csv"], default="json")
    x.add_argument("--out", type=Path)
    x.set_defaults(func=cmd_explore)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (CQBoundError, ValueError, OSError) as exc:
        print(f"cqbound {args.command}: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
