"""Experiment configuration: parsing, validation and resolution.

A config is a YAML (or JSON) mapping::

    ensemble:                 # kind plus that ensemble's parameters
      kind: ma2
      n: 64
      m: 64
      B: b.csv                # CSV path (relative to the config), "zero" or "identity"
      innovation_law: uniform
    function: sqrt_abs        # sqrt_abs | identity | abs | indicator(x) | exceed(x)
    center: {kind: median, pilot_reps: 2000}
    epsilons: [0.05, 0.1, 0.2]
    reps: 10000
    seed: 12345
    ci_level: 0.99
    bounds: auto              # or a list: [{tag: MA_LIP, C_B: compute}, ...]
    workers: 1
    fast_path: false
    outputs: {csv: tails.csv, json: tails.json}

Everything is validated before any sampling.  :func:`resolve` returns the
explicit form (absolute matrix paths, every bound constant filled in), which
is echoed into the JSON output and can be fed back in unchanged.
"""

from __future__ import annotations

import json
import logging
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import yaml

from . import ensembles
from .bounds import BoundKind, BoundTag
from .errors import ConfigError
from .functionals import builtin
from .linalg import operator_norm, read_matrix_csv
from .verify.pairing import applicable_bounds

log = logging.getLogger(__name__)

TOP_KEYS = {
    "ensemble",
    "function",
    "center",
    "epsilons",
    "reps",
    "seed",
    "ci_level",
    "bounds",
    "workers",
    "fast_path",
    "outputs",
}
ENSEMBLE_KEYS = {
    "walsh_bernoulli": {"k", "p"},
    "diagonal_bernoulli": {"n", "p"},
    "independent_rows": {"n", "m", "row_law"},
    "ma2": {"n", "m", "B", "innovation_law"},
    "ma2_factor": {"n", "m", "B", "U", "entry_law"},
    "sequential_graph": {"n", "q"},
}
MATRIX_KEYS = ("B", "U")
DEFAULT_OUTPUTS = {"csv": "tails.csv", "json": "tails.json"}
SEED_LIMIT = 1 << 64


@dataclass
class Experiment:
    """A validated, resolved experiment."""

    spec: object
    function: object
    center_kind: str
    pilot_reps: int
    epsilons: list
    reps: int
    seed: int
    ci_level: float
    bounds: list
    workers: int
    fast_path: bool
    outputs: dict
    resolved: dict


def load(path):
    """Parse a config file into a plain dict."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError("config", f"cannot read {path}: {exc}") from None
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigError("config", f"cannot parse {path}: {exc}") from None
    if not isinstance(data, dict):
        raise ConfigError("config", "top level must be a mapping")
    return data


def _int(value, key, minimum=None):
    if isinstance(value, bool) or not isinstance(value, (int, np.integer)):
        if isinstance(value, float) and value.is_integer():
            value = int(value)
        else:
            raise ConfigError(key, f"expected an integer, got {value!r}")
    value = int(value)
    if minimum is not None and value < minimum:
        raise ConfigError(key, f"must be at least {minimum}, got {value}")
    return value


def _float(value, key):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(key, f"expected a number, got {value!r}")
    value = float(value)
    if not math.isfinite(value):
        raise ConfigError(key, "must be finite")
    return value


def _matrix(value, key, n, base_dir):
    """Load a matrix reference; returns (array, echo value)."""
    if isinstance(value, str):
        if value == "zero":
            return np.zeros((n, n)), value
        if value == "identity":
            return np.eye(n), value
        path = Path(value)
        if not path.is_absolute():
            path = (base_dir / path).resolve()
        if not path.is_file():
            raise ConfigError(key, f"matrix file {path} does not exist")
        try:
            arr = read_matrix_csv(path)
        except (ValueError, OSError) as exc:
            raise ConfigError(key, f"cannot parse {path}: {exc}") from None
        echo = str(path)
    elif isinstance(value, list):
        try:
            arr = np.array(value, dtype=np.float64)
        except (TypeError, ValueError):
            raise ConfigError(key, "inline matrix must be a list of numeric rows") from None
        echo = arr.tolist()
    else:
        raise ConfigError(key, "expected a CSV path, 'zero', 'identity' or an inline matrix")
    if arr.shape != (n, n):
        raise ConfigError(key, f"must be {n}x{n}, got {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ConfigError(key, "has non-finite entries")
    return arr, echo


def _ensemble(raw, base_dir):
    if not isinstance(raw, dict):
        raise ConfigError("ensemble", "must be a mapping")
    kind = raw.get("kind")
    if kind not in ENSEMBLE_KEYS:
        raise ConfigError("ensemble.kind", f"must be one of {sorted(ENSEMBLE_KEYS)}, got {kind!r}")
    allowed = ENSEMBLE_KEYS[kind]
    extra = set(raw) - allowed - {"kind"}
    if extra:
        raise ConfigError(f"ensemble.{sorted(extra)[0]}", f"not a parameter of {kind}")
    params = {}
    echo = {"kind": kind}
    for key in sorted(allowed):
        if key not in raw:
            continue
        val = raw[key]
        where = f"ensemble.{key}"
        if key in ("k", "n", "m"):
            params[key] = _int(val, where, 0 if key == "k" else 1)
            echo[key] = params[key]
        elif key in ("p", "q"):
            params[key] = _float(val, where)
            if not 0.0 <= params[key] <= 1.0:
                raise ConfigError(where, "must lie in [0, 1]")
            echo[key] = params[key]
        elif key in MATRIX_KEYS:
            continue
        else:
            if val not in ensembles.BLOCK_LAWS:
                raise ConfigError(where, f"must be one of {sorted(ensembles.BLOCK_LAWS)}")
            params[key] = val
            echo[key] = val
    required = {
        "walsh_bernoulli": ("k",),
        "diagonal_bernoulli": ("n",),
        "independent_rows": ("n", "m"),
        "ma2": ("n", "m", "B"),
        "ma2_factor": ("n", "m", "B", "U"),
        "sequential_graph": ("n",),
    }[kind]
    for key in required:
        if key not in raw:
            raise ConfigError(f"ensemble.{key}", f"required for {kind}")
    for key in MATRIX_KEYS:
        if key in allowed and key in raw:
            params[key], echo[key] = _matrix(raw[key], f"ensemble.{key}", params["n"], base_dir)
    if kind == "walsh_bernoulli" and params["k"] > ensembles.MAX_WALSH_ORDER:
        raise ConfigError("ensemble.k", f"must be at most {ensembles.MAX_WALSH_ORDER}")
    try:
        spec = ensembles.from_params(kind, **params)
    except (ValueError, KeyError) as exc:
        raise ConfigError("ensemble", str(exc)) from None
    return spec, echo


def _bounds(raw, spec, f):
    auto = {str(b.tag): b for b in applicable_bounds(spec, f)}
    if raw is None or raw == "auto":
        for b in auto.values():
            for key in ("C_B", "C"):
                if key in b.params:
                    log.info("derived %s = %r for %s", key, b.params[key], b.tag)
        return list(auto.values())
    if not isinstance(raw, list):
        raise ConfigError("bounds", "must be 'auto' or a list of bound entries")
    out = []
    for idx, entry in enumerate(raw):
        where = f"bounds[{idx}]"
        if isinstance(entry, str):
            entry = {"tag": entry}
        if not isinstance(entry, dict) or "tag" not in entry:
            raise ConfigError(where, "each bound needs a 'tag'")
        try:
            tag = BoundTag(entry["tag"])
        except ValueError:
            raise ConfigError(f"{where}.tag", f"unknown bound {entry['tag']!r}") from None
        params = {"n": spec.n, "m": spec.m}
        if str(tag) in auto:
            params.update(auto[str(tag)].params)
        for key, val in entry.items():
            if key == "tag":
                continue
            if val == "compute":
                params[key] = _compute_constant(key, spec, where)
                log.info("derived %s = %r for %s", key, params[key], tag)
            else:
                params[key] = _float(val, f"{where}.{key}")
        kind_ = BoundKind(tag, {})
        missing = [k for k in kind_.required if k not in params]
        if missing:
            raise ConfigError(f"{where}.{missing[0]}", f"{tag} needs {missing[0]} and it cannot be derived")
        try:
            out.append(BoundKind(tag, {k: params[k] for k in kind_.required}))
        except ValueError as exc:
            raise ConfigError(where, str(exc)) from None
    return out


def _compute_constant(key, spec, where):
    if key == "C_B" and hasattr(spec, "B"):
        return 1.0 + operator_norm(spec.B)
    if key == "C" and hasattr(spec, "U"):
        return (1.0 + operator_norm(spec.B)) * operator_norm(spec.U)
    raise ConfigError(f"{where}.{key}", "only C_B and C can be computed (from B and U)")


def _bound_echo(b):
    params = {}
    for key in b.required:
        val = b.params[key]
        params[key] = int(val) if key in ("n", "m", "p", "r") else float(val)
    return {"tag": str(b.tag), **params}


def parse(data, base_dir=".", seed=None, workers=None):
    """Validate a config mapping and return a resolved :class:`Experiment`.

    ``seed`` and ``workers`` override the file's values.
    """
    base_dir = Path(base_dir).resolve()
    extra = set(data) - TOP_KEYS
    if extra:
        raise ConfigError(sorted(extra)[0], "unknown key")
    for key in ("ensemble", "function", "epsilons", "reps", "seed"):
        if key not in data and not (key == "seed" and seed is not None):
            raise ConfigError(key, "missing")
    spec, ens_echo = _ensemble(data["ensemble"], base_dir)
    try:
        f = builtin(data["function"])
    except (KeyError, ValueError) as exc:
        raise ConfigError("function", str(exc)) from None

    center = data.get("center", {"kind": "median"})
    if isinstance(center, str):
        center = {"kind": center}
    if not isinstance(center, dict):
        raise ConfigError("center", "must be a mapping or 'mean'/'median'")
    center_kind = center.get("kind", "median")
    if center_kind not in ("mean", "median"):
        raise ConfigError("center.kind", "must be 'mean' or 'median'")
    pilot_reps = _int(center.get("pilot_reps", 2000), "center.pilot_reps", 100)

    eps = data["epsilons"]
    if not isinstance(eps, list) or not eps:
        raise ConfigError("epsilons", "must be a non-empty list")
    eps = [_float(e, "epsilons") for e in eps]
    if any(e <= 0 for e in eps) or any(b <= a for a, b in zip(eps, eps[1:])):
        raise ConfigError("epsilons", "must be positive and strictly ascending")

    reps = _int(data["reps"], "reps", 1000)
    seed = _int(data["seed"] if seed is None else seed, "seed", 0)
    if seed >= SEED_LIMIT:
        raise ConfigError("seed", "must fit in 64 bits")
    ci_level = _float(data.get("ci_level", 0.99), "ci_level")
    if not 0.0 < ci_level < 1.0:
        raise ConfigError("ci_level", "must lie in (0, 1)")
    workers = _int(data.get("workers", 1) if workers is None else workers, "workers", 1)
    fast_path = data.get("fast_path", False)
    if not isinstance(fast_path, bool):
        raise ConfigError("fast_path", "must be true or false")
    if fast_path and spec.kind not in ("walsh_bernoulli", "diagonal_bernoulli"):
        raise ConfigError("fast_path", f"no closed-form spectrum for {spec.kind}")

    outputs = data.get("outputs", DEFAULT_OUTPUTS)
    if not isinstance(outputs, dict) or set(outputs) - {"csv", "json"}:
        raise ConfigError("outputs", "must map 'csv'/'json' to file names")
    outputs = {**DEFAULT_OUTPUTS, **{k: str(v) for k, v in outputs.items()}}

    bounds = _bounds(data.get("bounds", "auto"), spec, f)

    resolved = {
        "ensemble": ens_echo,
        "function": f.name,
        "center": {"kind": center_kind, "pilot_reps": pilot_reps},
        "epsilons": eps,
        "reps": reps,
        "seed": seed,
        "ci_level": ci_level,
        "bounds": [_bound_echo(b) for b in bounds],
        "workers": workers,
        "fast_path": fast_path,
        "outputs": outputs,
    }
    return Experiment(
        spec=spec,
        function=f,
        center_kind=center_kind,
        pilot_reps=pilot_reps,
        epsilons=eps,
        reps=reps,
        seed=seed,
        ci_level=ci_level,
        bounds=bounds,
        workers=workers,
        fast_path=fast_path,
        outputs=outputs,
        resolved=resolved,
    )


def load_experiment(path, seed=None, workers=None):
    path = Path(path)
    return parse(load(path), base_dir=path.parent, seed=seed, workers=workers)


def dump_resolved(resolved):
    return json.dumps(resolved, indent=2, sort_keys=True)
