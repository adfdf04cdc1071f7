"""JSON network description files.

Rates travel as strings ("3", "4/3", "0.25") because JSON numbers are floats
and would destroy exactness. A missing "downlink" means unbounded. The array
order of "sites" defines the site indices and therefore the planner's
iteration order.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Union

from .model import ModelError, NetworkSpec, format_rate, parse_rate


class SpecFileError(ValueError):
    """Unreadable or malformed network description file."""


def parse_spec_document(doc: Any) -> tuple[NetworkSpec, tuple[str, ...]]:
    """Build a validated NetworkSpec plus the site-name vector from decoded JSON."""
    if not isinstance(doc, dict):
        raise SpecFileError("top level must be a JSON object")
    sites = doc.get("sites")
    if not isinstance(sites, list) or not sites:
        raise SpecFileError('"sites" must be a non-empty array')

    names: list[str] = []
    uplink = []
    downlink = []
    rates = []
    for idx, site in enumerate(sites):
        where = f"sites[{idx}]"
        if not isinstance(site, dict):
            raise SpecFileError(f"{where}: must be an object")
        name = site.get("name")
        if not isinstance(name, str) or not name:
            raise SpecFileError(f'{where}: missing or empty "name"')
        if name in names:
            raise SpecFileError(f"{where}: duplicate site name {name!r}")
        names.append(name)
        for key, target in (("uplink", uplink), ("rate", rates)):
            raw = site.get(key)
            if not isinstance(raw, str):
                raise SpecFileError(f'{where} ({name}): missing "{key}" rate string')
            try:
                target.append(parse_rate(raw))
            except ModelError as exc:
                raise SpecFileError(f"{where} ({name}): {exc}") from exc
        raw_down = site.get("downlink")
        if raw_down is None:
            downlink.append(None)
        elif isinstance(raw_down, str):
            try:
                downlink.append(parse_rate(raw_down))
            except ModelError as exc:
                raise SpecFileError(f"{where} ({name}): {exc}") from exc
        else:
            raise SpecFileError(f'{where} ({name}): "downlink" must be a rate string if present')

    unknown = set(doc) - {"sites"}
    if unknown:
        raise SpecFileError(f"unknown top-level keys: {sorted(unknown)}")

    try:
        spec = NetworkSpec(uplink=tuple(uplink), downlink=tuple(downlink), rates=tuple(rates))
    except ModelError as exc:
        raise SpecFileError(str(exc)) from exc
    return spec, tuple(names)


def load_spec_file(path: Union[str, Path]) -> tuple[NetworkSpec, tuple[str, ...]]:
    """Read and validate a network description; errors carry file/line context."""
    p = Path(path)
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as exc:
        raise SpecFileError(f"{p}: {exc.strerror or exc}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecFileError(f"{p}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    try:
        return parse_spec_document(doc)
    except SpecFileError as exc:
        raise SpecFileError(f"{p}: {exc}") from exc


def spec_document(spec: NetworkSpec, names: tuple[str, ...]) -> dict:
    """Inverse of parse_spec_document: canonical rate strings, omitted unbounded downlinks."""
    sites = []
    for i, name in enumerate(names):
        site: dict[str, str] = {
            "name": name,
            "uplink": format_rate(spec.uplink[i]),
            "rate": format_rate(spec.rates[i]),
        }
        if spec.downlink[i] is not None:
            site["downlink"] = format_rate(spec.downlink[i])
        sites.append(site)
    return {"sites": sites}


def dump_spec_file(spec: NetworkSpec, names: tuple[str, ...], path: Union[str, Path]) -> None:
    Path(path).write_text(json.dumps(spec_document(spec, names), indent=2) + "\n", encoding="utf-8")


def default_names(n: int) -> tuple[str, ...]:
    return tuple(f"v{i + 1}" for i in range(n))
