"""Command-line interface.

Every command reads a configuration file::

    {"points": [[0, 0], [2, 0], [2, 2], [0, 2]], "region": [0, 1, 2, 3], "seed": 1}

``region`` (a counterclockwise label cycle), ``seed`` and ``budget`` are optional.
Reports are JSON written to standard output or ``-o``. Rationals appear as
"p/q" strings and integers as numbers. A subdivision row looks like::

    {"id": 1, "key": "0-1-2|0-2-3", "cells": [[0, 1, 2], [0, 2, 3]],
     "walls": [[0, 2]], "unused": [], "codim": 1}

Cells are counterclockwise label cycles starting at their smallest label;
walls are implied by the cells and listed only for convenience. Ids index the
enumeration order (wall count, then lexicographic key) and are stable for a
given file and region.

Exit codes: 0 ok, 1 property failure, 2 invalid configuration, 3 malformed
input or unknown id, 4 non-generic perturbation, 5 budget exceeded.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import __version__
from .formats import (
    ConfigFile,
    MalformedInput,
    complex_to_json,
    config_to_json,
    dumps,
    load_config,
    subdivision_row,
)
from .geometry import ConfigurationError, format_rational
from .operad import (
    ChainElement,
    chain_complex,
    composable_regions,
    homology_ranks,
    leibniz_defect,
    sign_table,
    total_homology_rank,
    verify_d_squared,
)
from .regularity import WrongRegion, is_regular, normal_fan, secondary_cone
from .rigidity import (
    NonGenericPerturbation,
    classify,
    dual_gwd,
    perturbation_sensitive,
    prep_feasible,
    rep_dim,
    stabilize_t,
)
from .subdivisions import (
    DEFAULT_BUDGET,
    BudgetExceeded,
    InvalidSubdivision,
    Region,
    enumerate_subdivisions,
)

OK, PROPERTY_FAILURE, INVALID_CONFIG, MALFORMED, NON_GENERIC, BUDGET = range(6)


class UnknownId(LookupError):
    pass


class _Fail(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


# -- shared plumbing ---------------------------------------------------------

def _load(args) -> tuple:
    """(ConfigFile, region, seed, budget) with command-line flags taking precedence."""
    cf: ConfigFile = load_config(args.path)
    region = cf.region
    if getattr(args, "region", None):
        try:
            labels = [int(s) for s in args.region.replace(" ", "").split(",") if s]
        except ValueError as exc:
            raise MalformedInput(f"--region: {exc}") from exc
        region = Region.from_labels(cf.config, labels)
    if region is None:
        region = Region.hull(cf.config)
    seed = args.seed if getattr(args, "seed", None) is not None else (cf.seed if cf.seed is not None else 1)
    budget = args.budget if args.budget is not None else (cf.budget if cf.budget is not None else DEFAULT_BUDGET)
    return cf, region, seed, budget


def _provenance(seed=None, scheme=None, budget=DEFAULT_BUDGET) -> dict:
    out = {"tool": "secondary-operad", "version": __version__, "budget": budget}
    if seed is not None:
        out["seed"] = seed
    if scheme is not None:
        out["k"] = scheme.k
        out["t"] = format_rational(scheme.t)
    return out


def _emit(report: dict, args) -> None:
    text = dumps(report)
    if getattr(args, "output", None):
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)


def _figures_dir(args):
    if not getattr(args, "figures", None):
        return None
    d = Path(args.figures)
    d.mkdir(parents=True, exist_ok=True)
    return d


def _by_id(subs, ident: int):
    if not 0 <= ident < len(subs):
        raise UnknownId(f"no subdivision with id {ident} (have 0..{len(subs) - 1})")
    return subs[ident]


def _rows(config, region, seed, budget, max_codim=None):
    """Stabilized scheme, subdivisions and classification rows."""
    scheme = stabilize_t(config, seed, region, budget)
    subs = enumerate_subdivisions(config, region, max_codim=max_codim, budget=budget)
    rows = []
    for i, D in enumerate(subs):
        c = classify(config, D, scheme)
        row = subdivision_row(D, i)
        row.update({
            "status": c.status.value,
            "rank": c.rank,
            "perturbed_rank": c.perturbed_rank,
            "rep_dim": c.rep_dim_mod_translations,
            "too_rigid": c.too_rigid,
            "sensitive": perturbation_sensitive(config, D),
        })
        rows.append(row)
    return scheme, subs, rows


# -- commands ----------------------------------------------------------------

def cmd_validate(args) -> int:
    cf, region, _, _ = _load(args)
    _emit({"valid": True, "n_points": len(cf.config), "configuration": config_to_json(cf.config, region)}, args)
    return OK


def cmd_enumerate(args) -> int:
    cf, region, _, budget = _load(args)
    subs = enumerate_subdivisions(cf.config, region, max_codim=args.max_codim, budget=budget)
    by_walls: dict = {}
    for D in subs:
        by_walls[len(D.walls)] = by_walls.get(len(D.walls), 0) + 1
    _emit({
        "provenance": _provenance(budget=budget),
        "configuration": config_to_json(cf.config, region),
        "counts_by_walls": [by_walls.get(k, 0) for k in range(max(by_walls) + 1)],
        "subdivisions": [subdivision_row(D, i) for i, D in enumerate(subs)],
    }, args)
    return OK


def cmd_classify(args) -> int:
    cf, region, seed, budget = _load(args)
    scheme, subs, rows = _rows(cf.config, region, seed, budget, args.max_codim)
    fig = _figures_dir(args)
    if fig is not None:
        from .plotting import render_overview
        render_overview(cf.config, subs, [r["status"] for r in rows], fig / "classification.svg")
    _emit({
        "provenance": _provenance(seed, scheme, budget),
        "configuration": config_to_json(cf.config, region),
        "subdivisions": rows,
    }, args)
    return OK


def _complex_report(config, region, seed, budget, flipped=()):
    scheme = stabilize_t(config, seed, region, budget)
    cx = chain_complex(config, region, scheme, flipped, budget)
    ids = {D: i for i, D in enumerate(enumerate_subdivisions(config, region, budget=budget))}
    return scheme, cx, ids


def cmd_differential(args) -> int:
    cf, region, seed, budget = _load(args)
    scheme, cx, ids = _complex_report(cf.config, region, seed, budget)
    dsq = verify_d_squared(cx)
    report = {
        "provenance": _provenance(seed, scheme, budget),
        "configuration": config_to_json(cf.config, region),
        "sizes": list(cx.sizes()),
        "complex": complex_to_json(cx, ids),
        "d_squared": dsq.to_json(),
    }
    if dsq.ok:
        report["homology_ranks"] = homology_ranks(cx)
        report["total_homology_rank"] = total_homology_rank(cx)
    fig = _figures_dir(args)
    if fig is not None:
        from .plotting import render_differential
        render_differential(cx, fig / "differential.svg")
    _emit(report, args)
    return OK


def _flipped(config, region, scheme, budget, indices) -> tuple:
    table = sign_table(config, region, scheme, budget)
    out = []
    for i in indices:
        if not 0 <= i < len(table):
            raise UnknownId(f"--flip-sign {i}: sign table has {len(table)} entries")
        cell, split, _ = table[i]
        out.append((cell.vertices, split.key))
    return tuple(out)


def _check_triple(config, region, subs) -> dict:
    if region != Region.hull(config):
        return {"ok": True, "skipped": "region is not the convex hull", "failures": []}
    failures = []
    for i, D in enumerate(subs):
        a = bool(is_regular(config, D))
        b = normal_fan(config, D) is not None
        c = prep_feasible(dual_gwd(config, D)) is not None
        if not a == b == c:
            failures.append({"id": i, "key": str(D), "is_regular": a, "normal_fan": b, "prep_feasible": c})
    return {"ok": not failures, "checked": len(subs), "failures": failures}


def _check_rank_law(config, subs) -> dict:
    failures = []
    checked = 0
    for i, D in enumerate(subs):
        gwd = dual_gwd(config, D)
        r, dim = rep_dim(gwd)
        e = len(gwd.edges)
        if r < e:
            continue
        checked += 1
        expected = 2 * gwd.n_vertices - e - 2
        if dim != expected:
            failures.append({"id": i, "key": str(D), "rep_dim": dim, "expected": expected})
    return {"ok": not failures, "checked": checked, "failures": failures}


def _check_leibniz(config, region, scheme, budget) -> dict:
    failures = []
    checked = 0
    for g, q1, q2 in composable_regions(config, region, budget):
        for a in enumerate_subdivisions(config, q1, budget=budget):
            for b in enumerate_subdivisions(config, q2, budget=budget):
                checked += 1
                defect = leibniz_defect(config, ChainElement.basis(a), g, ChainElement.basis(b), scheme)
                if defect:
                    failures.append({
                        "a": str(a), "edge": list(g), "b": str(b),
                        "defect": [[str(D), c] for D, c in defect.sorted_terms()],
                    })
    return {"ok": not failures, "checked": checked, "failures": failures}


def _check_seeds(config, region, seed, budget, subs) -> dict:
    seeds = (seed, seed + 1, seed + 2)
    statuses = []
    ks = []
    for s in seeds:
        sc = stabilize_t(config, s, region, budget)
        ks.append(sc.k)
        statuses.append([classify(config, D, sc).status.value for D in subs])
    sensitive = [i for i, D in enumerate(subs) if perturbation_sensitive(config, D)]
    failures = []
    for i, D in enumerate(subs):
        if i in sensitive:
            continue
        col = [st[i] for st in statuses]
        if len(set(col)) > 1:
            failures.append({"id": i, "key": str(D), "statuses": dict(zip(map(str, seeds), col))})
    return {"ok": not failures, "seeds": list(seeds), "k": ks, "sensitive_ids": sensitive, "failures": failures}


def cmd_verify(args) -> int:
    cf, region, seed, budget = _load(args)
    config = cf.config
    scheme = stabilize_t(config, seed, region, budget)
    flipped = _flipped(config, region, scheme, budget, args.flip_sign or ())
    cx = chain_complex(config, region, scheme, flipped, budget)
    subs = enumerate_subdivisions(config, region, budget=budget)
    dsq = verify_d_squared(cx)
    checks = {
        "d_squared": dsq.to_json(),
        "leibniz": _check_leibniz(config, region, scheme, budget),
        "regularity_equivalence": _check_triple(config, region, subs),
        "seed_cross_check": _check_seeds(config, region, seed, budget, subs),
        "rank_law": _check_rank_law(config, subs),
    }
    ok = all(c["ok"] for c in checks.values())
    report = {
        "provenance": _provenance(seed, scheme, budget),
        "configuration": config_to_json(config, region),
        "ok": ok,
        "sizes": list(cx.sizes()),
        "checks": checks,
    }
    if dsq.ok:
        report["total_homology_rank"] = total_homology_rank(cx)
    fig = _figures_dir(args)
    if fig is not None:
        from .plotting import render_differential
        render_differential(cx, fig / "differential.svg")
    _emit(report, args)
    if not ok:
        failed = [name for name, c in checks.items() if not c["ok"]]
        print(f"verification failed: {', '.join(failed)}", file=sys.stderr)
        return PROPERTY_FAILURE
    return OK


def cmd_secondary_cone(args) -> int:
    cf, region, _, budget = _load(args)
    subs = enumerate_subdivisions(cf.config, region, budget=budget)
    D = _by_id(subs, args.id)
    cone = secondary_cone(cf.config, D)
    reg = is_regular(cf.config, D)
    _emit({
        "provenance": _provenance(budget=budget),
        "subdivision": subdivision_row(D, args.id),
        "regular": reg.regular,
        "witness": None if reg.witness is None else [format_rational(x) for x in reg.witness],
        "cone": cone.to_json(),
    }, args)
    return OK


def cmd_render(args) -> int:
    from .plotting import render_fan, render_subdivision

    cf, region, _, budget = _load(args)
    subs = enumerate_subdivisions(cf.config, region, budget=budget)
    if args.subdivision is not None:
        D = _by_id(subs, args.subdivision)
        render_subdivision(cf.config, D, args.output, title=str(D))
    else:
        D = _by_id(subs, args.fan)
        fan = normal_fan(cf.config, D)
        if fan is None:
            raise _Fail(PROPERTY_FAILURE, f"subdivision {args.fan} ({D}) is not regular and has no normal fan")
        render_fan(fan, args.output, title=f"normal fan of {D}")
    return OK


# -- entry point -------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="secop", description=__doc__.split("\n\n")[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, func, help_):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("path", help="configuration JSON file")
        sp.add_argument("--region", help="comma-separated counterclockwise label cycle")
        sp.add_argument("--budget", type=int, default=None, help="enumeration node budget")
        sp.set_defaults(func=func)
        return sp

    add("validate", cmd_validate, "check a configuration file").add_argument("-o", "--output")

    sp = add("enumerate", cmd_enumerate, "list all subdivisions")
    sp.add_argument("--max-codim", type=int, default=None)
    sp.add_argument("-o", "--output")

    for name, func, help_ in (
        ("classify", cmd_classify, "classify every subdivision"),
        ("differential", cmd_differential, "build the chain complex"),
        ("verify", cmd_verify, "run every structural check"),
    ):
        sp = add(name, func, help_)
        sp.add_argument("--seed", type=int, default=None)
        sp.add_argument("-o", "--output")
        sp.add_argument("--figures", help="directory for SVG figures")
        if name == "classify":
            sp.add_argument("--max-codim", type=int, default=None)
        if name == "verify":
            sp.add_argument("--flip-sign", type=int, action="append", metavar="I",
                            help="invert entry I of the sign table (fault injection)")

    sp = add("secondary-cone", cmd_secondary_cone, "secondary cone of one subdivision")
    sp.add_argument("--id", type=int, required=True)
    sp.add_argument("-o", "--output")

    sp = add("render", cmd_render, "draw a subdivision or its normal fan as SVG")
    which = sp.add_mutually_exclusive_group(required=True)
    which.add_argument("--subdivision", type=int)
    which.add_argument("--fan", type=int)
    sp.add_argument("-o", "--output", required=True)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except _Fail as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except (MalformedInput, UnknownId) as exc:
        print(f"malformed input: {exc}", file=sys.stderr)
        return MALFORMED
    except (ConfigurationError, InvalidSubdivision, WrongRegion) as exc:
        print(f"invalid configuration: {exc}", file=sys.stderr)
        return INVALID_CONFIG
    except NonGenericPerturbation as exc:
        print(f"non-generic perturbation: {exc}; rerun with a different --seed", file=sys.stderr)
        return NON_GENERIC
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}; raise --budget", file=sys.stderr)
        return BUDGET


if __name__ == "__main__":
    sys.exit(main())
