"""JSON reading and writing: configuration files, subdivisions, complexes."""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from .geometry import Configuration, format_rational, validate_configuration
from .subdivisions import Region, Subdivision, codimension


class MalformedInput(ValueError):
    pass


@dataclass(frozen=True)
class ConfigFile:
    config: Configuration
    region: Optional[Region]
    seed: Optional[int]
    budget: Optional[int]


def _int(value, what: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise MalformedInput(f"{what} must be an integer, got {value!r}")
    return value


def parse_config(data) -> ConfigFile:
    """Validate the decoded JSON of a configuration file.

    Raises MalformedInput for shape problems and ConfigurationError (or
    InvalidSubdivision for a bad region) for geometric ones.
    """
    if not isinstance(data, dict) or "points" not in data:
        raise MalformedInput("expected an object with a 'points' list")
    raw = data["points"]
    if not isinstance(raw, list) or not raw:
        raise MalformedInput("'points' must be a nonempty list")
    pts = []
    for k, p in enumerate(raw):
        if not isinstance(p, list) or len(p) != 2:
            raise MalformedInput(f"point {k} must be a pair [x, y]")
        pts.append((_int(p[0], f"point {k} x"), _int(p[1], f"point {k} y")))
    config = validate_configuration(pts)
    region = None
    if data.get("region") is not None:
        labels = data["region"]
        if not isinstance(labels, list):
            raise MalformedInput("'region' must be a list of labels")
        region = Region.from_labels(config, [_int(i, "region label") for i in labels])
    seed = data.get("seed")
    budget = data.get("budget")
    return ConfigFile(
        config,
        region,
        None if seed is None else _int(seed, "seed"),
        None if budget is None else _int(budget, "budget"),
    )


def load_config(path) -> ConfigFile:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise MalformedInput(str(exc)) from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedInput(f"{path}: {exc}") from exc
    return parse_config(data)


def config_to_json(config: Configuration, region: Optional[Region] = None) -> dict:
    out = {"points": [[_num(p.x), _num(p.y)] for p in config.points]}
    if region is not None:
        out["region"] = list(region.boundary)
    return out


def _num(q):
    return q.numerator if q.denominator == 1 else format_rational(q)


def subdivision_row(D: Subdivision, ident: int) -> dict:
    return {
        "id": ident,
        "key": str(D),
        "cells": [list(c.vertices) for c in D.cells],
        "walls": [list(w) for w in D.walls],
        "unused": list(D.unused),
        "codim": codimension(D),
    }


def complex_to_json(cx, ids: dict) -> dict:
    return {
        "degrees": {str(k): [ids[D] for D in cx.bases[k]] for k in sorted(cx.bases)},
        "matrices": [
            {
                "source_degree": src,
                "target_degree": dst,
                "entries": sorted([r, c, v] for (r, c), v in entries.items()),
            }
            for (src, dst), entries in sorted(cx.blocks.items())
        ],
    }


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=False) + "\n"
