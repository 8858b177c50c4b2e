"""CSV output with a '#'-prefixed metadata header block, plus run manifests.

Every artifact carries its provenance: the metadata block records the kind
of curve, a plot label, and the resolved parameters that produced it.
Floats are written with repr (shortest round-trip form), so identical runs
produce byte-identical files.
"""

from __future__ import annotations

import hashlib
import json
from pathlib import Path

from .errors import ConfigError

__all__ = [
    "format_value",
    "write_csv",
    "read_csv",
    "write_manifest",
    "read_manifest",
    "sha256_file",
]

FORMAT_TAG = "stochpop-csv v1"


def format_value(v) -> str:
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, bool):
        return "true" if v else "false"
    if v is None:
        return ""
    return str(v)


def _flatten(meta: dict, prefix: str = "") -> list[tuple[str, str]]:
    items: list[tuple[str, str]] = []
    for key, value in meta.items():
        name = f"{prefix}{key}"
        if isinstance(value, dict):
            items.extend(_flatten(value, prefix=f"{name}."))
        elif isinstance(value, (list, tuple)):
            items.append((name, " ".join(format_value(v) for v in value)))
        else:
            items.append((name, format_value(value)))
    return items


def write_csv(path: Path | str, meta: dict, columns: list[str], rows) -> Path:
    """Write rows (iterable of tuples) with a metadata comment block."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = [f"# {FORMAT_TAG}"]
    for key, value in _flatten(meta):
        lines.append(f"# {key} = {value}")
    lines.append(",".join(columns))
    for row in rows:
        lines.append(",".join(format_value(v) for v in row))
    path.write_text("\n".join(lines) + "\n")
    return path


def read_csv(path: Path | str) -> tuple[dict, list[str], list[list[str]]]:
    """Read back (metadata, column names, string cell rows)."""
    path = Path(path)
    meta: dict[str, str] = {}
    columns: list[str] | None = None
    rows: list[list[str]] = []
    for line in path.read_text().splitlines():
        if not line.strip():
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            if "=" in body:
                key, _, value = body.partition("=")
                meta[key.strip()] = value.strip()
            continue
        if columns is None:
            columns = line.split(",")
        else:
            rows.append(line.split(","))
    if columns is None:
        raise ConfigError(f"{path} carries no data header")
    return meta, columns, rows


def sha256_file(path: Path | str) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def write_manifest(
    path: Path | str, subcommand: str, config: dict, outputs: list[Path]
) -> Path:
    """Record the resolved config and the hash of every artifact.

    Re-running the subcommand with this manifest as the config file must
    reproduce every artifact byte for byte.
    """
    path = Path(path)
    base = path.parent
    manifest = {
        "tool": "stochpop",
        "format": 1,
        "subcommand": subcommand,
        "config": config,
        "outputs": {
            str(Path(p).relative_to(base)): sha256_file(p) for p in outputs
        },
    }
    path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    return path


def read_manifest(path: Path | str) -> dict:
    data = json.loads(Path(path).read_text())
    if data.get("tool") != "stochpop":
        raise ConfigError(f"{path} is not a stochpop run manifest")
    return data
