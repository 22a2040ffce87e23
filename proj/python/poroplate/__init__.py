"""Python bindings for the poroplate solver."""

import io
import json
import os

import numpy as np

from . import _core
from ._core import PoroplateError, griso_decompose, korn_ratio, preset_names

__all__ = [
    "PoroplateError",
    "griso_decompose",
    "homogenize",
    "korn_ratio",
    "load_preset",
    "normalize_config",
    "preset_names",
    "simulate",
    "verify",
]


def _text(config):
    """Config given as a dict, JSON text or a path; returns (text, base_dir)."""
    if isinstance(config, dict):
        return json.dumps(config), "."
    if isinstance(config, os.PathLike) or (isinstance(config, str) and not config.lstrip().startswith("{")):
        path = os.fspath(config)
        with open(path, encoding="utf-8") as f:
            return f.read(), os.path.dirname(path) or "."
    return config, "."


def load_preset(name):
    return json.loads(_core.preset_config(name))


def normalize_config(config):
    return json.loads(_core.normalize_config(_text(config)[0]))


def homogenize(config):
    out = _core.homogenize(*_text(config))
    out["report"] = json.loads(out["report"])
    return out


def simulate(config):
    out = _core.simulate(*_text(config))
    out["ledger"] = np.genfromtxt(io.StringIO(out["ledger_csv"]), delimiter=",", names=True)
    return out


def verify(fast=True, inject="none"):
    return json.loads(_core.verify(fast, inject))
