"""Flat-section key/value run configuration.

A config document declares densities, class specs, and density pairs in
INI-style sections, plus one ``[options]`` section:

    [density.std_normal]
    kind = gaussian
    mean = 0
    std = 1

    [density.gn]
    kind = gen_normal
    n = 1
    alpha = 2
    v = 1

    [spec.base]
    alpha = 2
    v = 1
    m = 1
    n = 1

    [pair.shift]
    x = std_normal
    y = gn

    [options]
    tol = 1e-9
    seed = 0
    format = csv
    out = report.csv

Density kinds: ``uniform(lo, hi)``, ``gaussian(mean, std)``,
``gen_normal(n, alpha, v)``, ``counterexample_p``, ``counterexample_q``.
Syntax errors surface with their line numbers; semantic errors name the
offending section and field.
"""

from __future__ import annotations

import configparser
from dataclasses import dataclass, field

from .densities import (
    ClassSpec,
    Density,
    counterexample_p,
    counterexample_q,
    gaussian,
    generalized_normal,
    uniform,
)

__all__ = ["ConfigError", "RunConfig", "parse_config", "load_config"]

FORMATS = ("json", "csv", "text")


class ConfigError(ValueError):
    """Malformed or semantically invalid run configuration."""


@dataclass
class RunConfig:
    """Validated run configuration."""

    densities: dict[str, Density] = field(default_factory=dict)
    specs: dict[str, ClassSpec] = field(default_factory=dict)
    pairs: dict[str, tuple[str, str]] = field(default_factory=dict)
    tol: float | None = None
    seed: int = 0
    out_format: str = "text"
    out_path: str | None = None


def _get_float(section: str, items: dict, key: str) -> float:
    if key not in items:
        raise ConfigError(f"[{section}] is missing required field '{key}'")
    try:
        return float(items[key])
    except ValueError:
        raise ConfigError(
            f"[{section}] field '{key}' is not a number: {items[key]!r}"
        ) from None


def _get_int(section: str, items: dict, key: str) -> int:
    val = _get_float(section, items, key)
    if val != int(val):
        raise ConfigError(f"[{section}] field '{key}' must be an integer")
    return int(val)


def _require_positive(section: str, key: str, val: float):
    if not val > 0:
        raise ConfigError(f"[{section}] field '{key}' must be positive, got {val:g}")


def _build_density(section: str, items: dict) -> Density:
    kind = items.get("kind")
    if kind is None:
        raise ConfigError(f"[{section}] is missing required field 'kind'")
    known = {"uniform", "gaussian", "gen_normal", "counterexample_p", "counterexample_q"}
    if kind not in known:
        raise ConfigError(
            f"[{section}] unknown kind {kind!r}; expected one of {sorted(known)}"
        )
    if kind == "uniform":
        lo = _get_float(section, items, "lo")
        hi = _get_float(section, items, "hi")
        if not lo < hi:
            raise ConfigError(f"[{section}] needs lo < hi")
        return uniform(lo, hi)
    if kind == "gaussian":
        mean = _get_float(section, items, "mean")
        std = _get_float(section, items, "std")
        _require_positive(section, "std", std)
        return gaussian(mean, std)
    if kind == "gen_normal":
        n = _get_int(section, items, "n")
        if n < 1:
            raise ConfigError(f"[{section}] field 'n' must be at least 1")
        alpha = _get_float(section, items, "alpha")
        _require_positive(section, "alpha", alpha)
        v = _get_float(section, items, "v")
        _require_positive(section, "v", v)
        return generalized_normal(n, alpha, v)
    if kind == "counterexample_p":
        return counterexample_p()
    return counterexample_q()


def _build_spec(section: str, items: dict) -> ClassSpec:
    alpha = _get_float(section, items, "alpha")
    _require_positive(section, "alpha", alpha)
    v = _get_float(section, items, "v")
    _require_positive(section, "v", v)
    m = _get_float(section, items, "m")
    _require_positive(section, "m", m)
    n = _get_int(section, items, "n")
    if n < 1:
        raise ConfigError(f"[{section}] field 'n' must be at least 1")
    return ClassSpec(alpha, v, m, n)


def parse_config(text: str) -> RunConfig:
    """Parse and validate a configuration document."""
    parser = configparser.ConfigParser(interpolation=None, delimiters=("=",))
    try:
        parser.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(f"config syntax error: {exc}") from None

    cfg = RunConfig()
    for section in parser.sections():
        items = dict(parser.items(section))
        if section.startswith("density."):
            name = section[len("density."):]
            cfg.densities[name] = _build_density(section, items)
        elif section.startswith("spec."):
            name = section[len("spec."):]
            cfg.specs[name] = _build_spec(section, items)
        elif section.startswith("pair."):
            name = section[len("pair."):]
            for key in ("x", "y"):
                if key not in items:
                    raise ConfigError(f"[{section}] is missing required field '{key}'")
            cfg.pairs[name] = (items["x"], items["y"])
        elif section == "options":
            if "tol" in items:
                tol = _get_float(section, items, "tol")
                _require_positive(section, "tol", tol)
                cfg.tol = tol
            if "seed" in items:
                cfg.seed = _get_int(section, items, "seed")
            if "format" in items:
                if items["format"] not in FORMATS:
                    raise ConfigError(
                        f"[options] unknown format {items['format']!r}; "
                        f"expected one of {FORMATS}"
                    )
                cfg.out_format = items["format"]
            if "out" in items:
                cfg.out_path = items["out"]
        else:
            raise ConfigError(
                f"unknown section [{section}]; expected density.*, spec.*, "
                "pair.*, or options"
            )

    for pair_name, (x, y) in cfg.pairs.items():
        for ref in (x, y):
            if ref not in cfg.densities:
                raise ConfigError(
                    f"[pair.{pair_name}] references undeclared density {ref!r}"
                )
        dx, dy = cfg.densities[x], cfg.densities[y]
        if dx.dimension != dy.dimension:
            raise ConfigError(
                f"[pair.{pair_name}] densities have mismatched dimensions "
                f"{dx.dimension} and {dy.dimension}"
            )
    return cfg


def load_config(path: str) -> RunConfig:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_config(fh.read())
