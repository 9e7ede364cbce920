from __future__ import annotations

import json
from functools import lru_cache
from pathlib import Path

from starx.formulas import Sequent
from starx.syntax import parse, parse_sequent
from starx.terms import Term

DATA_DIR = Path(__file__).resolve().parent / "data"


class CatalogError(LookupError):
    pass


def available() -> list[str]:
    return sorted(path.stem for path in DATA_DIR.glob("*.sx"))


def load_source(name: str) -> str:
    path = DATA_DIR / f"{name}.sx"
    if not path.is_file():
        raise CatalogError(f"no bundled term named {name!r}; known: {', '.join(available())}")
    with path.open("r", encoding="utf-8") as file:
        return file.read()


def load_term(name: str) -> Term:
    return parse(load_source(name))


@lru_cache(maxsize=1)
def _sequents() -> dict[str, str]:
    with (DATA_DIR / "sequents.json").open("r", encoding="utf-8") as file:
        return json.load(file)


def load_sequent(name: str) -> Sequent:
    try:
        return parse_sequent(_sequents()[name])
    except KeyError as exc:
        raise CatalogError(f"no sequent recorded for {name!r}") from exc
