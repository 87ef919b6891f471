"""
Run manifest: the reproducibility record written next to every output.

Plain ``key = value`` text: ``manifest.*`` describes the run, ``config.*``
is the full configuration snapshot and ``checksum.<path>`` holds the
sha-256 of every output file relative to the output directory.
"""

import hashlib
import logging
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Union

import psutil

from .. import __version__
from ..functional.errors import IoError, ParseError
from .config import ExperimentConfig, config_items

logger = logging.getLogger(__name__)

MANIFEST_NAME = "manifest.txt"


def utc_timestamp() -> str:
    return datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%S.%fZ")


def sha256_file(path: Path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as handle:
        for block in iter(lambda: handle.read(1 << 20), b""):
            digest.update(block)
    return digest.hexdigest()


@dataclass
class RunManifest:
    command: str
    seed: int
    config: Dict[str, str]
    version: str = __version__
    started_utc: str = field(default_factory=utc_timestamp)
    finished_utc: str = ""
    host_cpus: int = field(default_factory=lambda: psutil.cpu_count(logical=True) or 1)
    checksums: Dict[str, str] = field(default_factory=dict)

    @classmethod
    def start(cls, command: str, config: ExperimentConfig) -> 'RunManifest':
        return cls(command=command, seed=config.sim.seed, config=dict(config_items(config)))

    def record_outputs(self, output_dir: Path, paths: Iterable[Path]) -> None:
        for path in sorted(paths):
            relative = path.relative_to(output_dir).as_posix()
            self.checksums[relative] = sha256_file(path)

    def finish(self) -> 'RunManifest':
        self.finished_utc = utc_timestamp()
        return self

    def to_text(self) -> str:
        lines = [
            f"manifest.version = {self.version}",
            f"manifest.command = {self.command}",
            f"manifest.seed = {self.seed}",
            f"manifest.started_utc = {self.started_utc}",
            f"manifest.finished_utc = {self.finished_utc}",
            f"manifest.host_cpus = {self.host_cpus}",
        ]
        lines += [f"config.{key} = {value}" for key, value in self.config.items()]
        lines += [f"checksum.{path} = {digest}" for path, digest in self.checksums.items()]
        return "\n".join(lines) + "\n"

    def write(self, output_dir: Union[str, Path]) -> Path:
        path = Path(output_dir) / MANIFEST_NAME
        try:
            path.write_text(self.to_text(), encoding="utf-8")
        except OSError as e:
            raise IoError(f"cannot write {path}: {e}") from e
        logger.info(f"Manifest written to {path} ({len(self.checksums)} outputs)")
        return path

    @classmethod
    def from_text(cls, text: str) -> 'RunManifest':
        header: Dict[str, str] = {}
        config: Dict[str, str] = {}
        checksums: Dict[str, str] = {}
        for number, raw in enumerate(text.splitlines(), start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ParseError("expected 'key = value'", line=number)
            key, value = (part.strip() for part in line.split("=", 1))
            group, _, name = key.partition(".")
            target = {"manifest": header, "config": config, "checksum": checksums}.get(group)
            if target is None or not name:
                raise ParseError("unknown manifest key", line=number, key=key)
            target[name] = value
        try:
            return cls(
                command=header["command"],
                seed=int(header["seed"]),
                config=config,
                version=header.get("version", ""),
                started_utc=header.get("started_utc", ""),
                finished_utc=header.get("finished_utc", ""),
                host_cpus=int(header.get("host_cpus", "0")),
                checksums=checksums,
            )
        except KeyError as e:
            raise ParseError(f"manifest is missing manifest.{e.args[0]}") from None
        except ValueError as e:
            raise ParseError(f"malformed manifest header: {e}") from None

    @classmethod
    def read(cls, path: Union[str, Path]) -> 'RunManifest':
        path = Path(path)
        if path.is_dir():
            path = path / MANIFEST_NAME
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as e:
            raise IoError(f"cannot read manifest {path}: {e}") from e
        return cls.from_text(text)

    def verify(self, output_dir: Union[str, Path], only: Optional[Iterable[str]] = None) -> List[str]:
        """Relative paths whose current checksum differs from the recorded one."""
        output_dir = Path(output_dir)
        wanted = set(only) if only is not None else None
        mismatched = []
        for relative, digest in self.checksums.items():
            if wanted is not None and relative not in wanted:
                continue
            path = output_dir / relative
            if not path.is_file() or sha256_file(path) != digest:
                mismatched.append(relative)
        return mismatched
