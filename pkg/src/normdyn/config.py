"""Flat key-value config files and game (de)serialization.

The CLI accepts a plain ``key = value`` file for game parameters. A file
with keys ``a, b, c`` loads directly as a reduced game; one with
``a_c, b_c, a_f, b_f, c`` loads as raw parameters and is reduced on the
way in. Flags always override file values.
"""

from __future__ import annotations

from pathlib import Path
from typing import Union

from . import game as game_mod
from .errors import ConfigError
from .game import GameSpec, ReducedGame

REDUCED_KEYS = ("a", "b", "c")
SPEC_KEYS = ("a_c", "b_c", "a_f", "b_f", "c")


def parse_flat_config(text: str) -> dict[str, float]:
    """Parse ``key = value`` lines; '#' starts a comment."""
    out: dict[str, float] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if not key:
            raise ConfigError(f"line {lineno}: empty key")
        try:
            out[key] = float(value)
        except ValueError:
            raise ConfigError(f"line {lineno}: {value!r} is not a number") from None
    return out


def load_flat_config(path: Union[str, Path]) -> dict[str, float]:
    return parse_flat_config(Path(path).read_text())


def game_to_mapping(g: Union[ReducedGame, GameSpec]) -> dict[str, float]:
    if isinstance(g, ReducedGame):
        return {"a": g.a, "b": g.b, "c": g.c}
    return {"a_c": g.a_c, "b_c": g.b_c, "a_f": g.a_f, "b_f": g.b_f, "c": g.c}


def game_from_mapping(mapping: dict[str, float]) -> ReducedGame:
    """Build a reduced game from flat keys (raw specs are reduced)."""
    if all(k in mapping for k in REDUCED_KEYS):
        return ReducedGame(a=mapping["a"], b=mapping["b"], c=mapping["c"])
    if all(k in mapping for k in SPEC_KEYS):
        spec = GameSpec(
            a_c=mapping["a_c"],
            b_c=mapping["b_c"],
            a_f=mapping["a_f"],
            b_f=mapping["b_f"],
            c=mapping["c"],
        )
        return game_mod.reduce(spec)
    raise ConfigError(
        f"game config needs keys {REDUCED_KEYS} or {SPEC_KEYS}, got {sorted(mapping)}"
    )


def write_flat_config(path: Union[str, Path], mapping: dict[str, float]) -> None:
    lines = [f"{k} = {v!r}" for k, v in mapping.items()]
    Path(path).write_text("\n".join(lines) + "\n")
