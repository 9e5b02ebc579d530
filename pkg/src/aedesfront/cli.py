"""Command line entry point: ``aedesfront <task> --config FILE --out DIR``.

Exit codes: 0 success, 2 configuration error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import replace

from .config import TASKS, RunConfig, load_config
from .dynamics import (ClassifierRules, comparison_suite, find_mu_star,
                       simulate_and_classify, transcript_is_monotone)
from .errors import (ConfigError, InconclusiveRegion, InvalidBracket, InvalidInitialData,
                     NumericalFailure, SubcriticalDomain)
from .frontfix import run
from .outputs import emit_outputs
from .steady import solve_global
from .threshold import R0F_trace, threshold_report

log = logging.getLogger("aedesfront")


def _rules(cfg: RunConfig) -> ClassifierRules:
    p = cfg.task.params
    return ClassifierRules(p.get("eps_R", 1e-3), p.get("eps_g", 1e-6), p.get("eps_d", 1e-6),
                           p.get("window_fraction", 0.1))


def run_task(cfg: RunConfig) -> dict:
    """Compute the results dictionary for ``cfg.task``; no files are touched."""
    name, p = cfg.task.name, cfg.task.params
    prof, ini, solver = cfg.profile, cfg.initial, cfg.solver
    if name == "simulate":
        traj = run(ini, prof, solver)
        return {"trajectory": traj, "trace": R0F_trace(traj, prof, 256)}
    if name == "threshold":
        interval = (p["p"], p["q"]) if "p" in p else (-ini.h0, ini.h0)
        rep = threshold_report(interval, prof, p.get("resolution", 512))
        return {"report": rep.to_dict()}
    if name == "steady":
        g = solve_global(prof, p.get("dx", 0.05), p.get("L_sequence"), p.get("window", 5.0))
        return {"stationary": g.solution, "table": g.table,
                "report": {"converged": g.converged, "window": g.window,
                           "L": g.solution.L, "residual": g.solution.residual}}
    if name == "classify":
        out, traj = simulate_and_classify(ini, prof, solver, _rules(cfg))
        return {"trajectory": traj, "trace": out.R0F_trace, "report": out.to_dict(),
                "summary": f"{out.label.value} at t={out.stop_time:g} (rule: {out.rule})"}
    if name == "mu-star":
        res = find_mu_star(ini, prof, solver, (p["mu_lo"], p["mu_hi"]), p.get("tol", 0.05),
                           _rules(cfg))
        lines = [f"mu* in [{res.mu_lo:.6g}, {res.mu_hi:.6g}]"]
        for r in res.runs:
            if "mu" in r:
                lines.append(f"  mu={r['mu']:.6g} horizon={r['horizon']:g} -> {r['label']}")
        lines.append(f"transcript monotone: {transcript_is_monotone(res.runs)}")
        return {"report": res.to_dict(), "summary": "\n".join(lines)}
    if name == "compare":
        verdicts = comparison_suite(ini, prof, solver, tuple(p.get("mus", (0.5, 1.0, 2.0))),
                                    p.get("workers", 1))
        lines = [f"{v.name}: front {v.front_violation:.3e} (cell {v.cell:.3e}), "
                 f"density {v.density_violation:.3e} -> {'pass' if v.passed else 'FAIL'}"
                 for v in verdicts]
        return {"table": [v.to_dict() for v in verdicts], "summary": "\n".join(lines)}
    raise ConfigError([f"[task] name: unknown task {name!r}"])


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(prog="aedesfront", description=__doc__.splitlines()[0])
    ap.add_argument("task", choices=TASKS)
    ap.add_argument("--config", required=True, help="run configuration (INI)")
    ap.add_argument("--out", help="output directory (overrides [output] dir)")
    ap.add_argument("--seed", type=int, default=None,
                    help="only for randomized test harnesses; solver tasks ignore it")
    ap.add_argument("-v", "--verbose", action="store_true")
    args = ap.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        cfg = load_config(args.config)
        if cfg.task.explicit and cfg.task.name != args.task:
            raise ConfigError([f"[task] name={cfg.task.name!r} conflicts with "
                               f"subcommand {args.task!r}"])
        cfg.task.name = args.task
        if args.out:
            cfg.output = replace(cfg.output, dir=args.out)
        results = run_task(cfg)
        files = emit_outputs(results, cfg.output, args.task, cfg.run_hash)
    except (ConfigError, InvalidInitialData) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return 1
    except (NumericalFailure, SubcriticalDomain, InvalidBracket, InconclusiveRegion) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3
    for f in files:
        print(f)
    if "summary" in results:
        print(results["summary"])
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
