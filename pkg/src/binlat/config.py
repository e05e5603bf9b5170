"""Run configuration: INI-style config files plus command-line overrides.

A config file has [lattice], [input], [time], and [output] sections, with
[phi], [bloch] and [quadrature] used by the dispersion and bloch commands.
Angles accept a trailing "pi" (e.g. q = 0.55pi); Poisson amplitudes accept
complex literals (alpha = 6.8+1.3j).
"""

from __future__ import annotations

import configparser
import math
from dataclasses import dataclass, field

from binlat.lattice import LatticeSpec
from binlat.quantum import (
    FockSingleSite,
    GaussianLike,
    InputState,
    Noon,
    PoissonLike,
    ProductTwoPhoton,
    SinglePhotonSuperposition,
)

import numpy as np


class ConfigError(ValueError):
    """Invalid or inconsistent run configuration (CLI exit code 2)."""


def parse_float(text: str) -> float:
    """Float with optional pi factor: "0.55pi", "-pi", "2*pi", plain numbers."""
    s = text.strip().lower().replace(" ", "")
    if s.endswith("pi"):
        coeff = s[:-2].rstrip("*")
        if coeff in ("", "+"):
            return math.pi
        if coeff == "-":
            return -math.pi
        return float(coeff) * math.pi
    return float(s)


def parse_complex(text: str) -> complex:
    """Complex literal, e.g. "0.5", "1j", "6.8+1.3j"."""
    return complex(text.strip().replace(" ", ""))


@dataclass(frozen=True)
class Grid:
    start: float
    stop: float
    samples: int

    def __post_init__(self):
        if self.samples < 1:
            raise ConfigError(f"samples must be >= 1, got {self.samples}")
        if self.stop < self.start:
            raise ConfigError(f"grid stop {self.stop} < start {self.start}")

    def values(self) -> np.ndarray:
        if self.samples == 1:
            return np.array([self.start])
        return np.linspace(self.start, self.stop, self.samples)


@dataclass(frozen=True)
class OutputSpec:
    format: str = "csv"
    path: str = "result.csv"
    precision: int = 9

    def __post_init__(self):
        if self.format not in ("csv", "json"):
            raise ConfigError(f"output format must be csv or json, got {self.format!r}")
        if self.precision < 1:
            raise ConfigError(f"precision must be >= 1, got {self.precision}")


@dataclass(frozen=True)
class BlochRange:
    m: int = 0
    j_min: int = -20
    j_max: int = 20

    def __post_init__(self):
        if self.j_max < self.j_min:
            raise ConfigError(f"bloch site range empty: j_min={self.j_min}, j_max={self.j_max}")


@dataclass
class RunConfig:
    lattice: LatticeSpec
    input: InputState | None = None
    time: Grid = field(default_factory=lambda: Grid(0.0, 10.0, 101))
    phi: Grid = field(default_factory=lambda: Grid(-math.pi, math.pi, 401))
    bloch: BlochRange = field(default_factory=BlochRange)
    nodes: int = 1024
    output: OutputSpec = field(default_factory=OutputSpec)
    force: bool = False
    eigenvectors: bool = False

    def echo(self) -> dict:
        """Config as plain data for the output-file metadata."""
        lat: dict = {"kind": self.lattice.kind}
        lat["n"] = self.lattice.sites if self.lattice.is_finite else "infinite"
        if self.lattice.kind == "bi":
            lat["beta"] = self.lattice.beta
        else:
            lat["g0"] = self.lattice.g0
            lat["delta"] = self.lattice.delta
        out: dict = {"lattice": lat}
        if self.input is not None:
            state = self.input
            desc: dict = {"type": type(state).__name__}
            if isinstance(state, FockSingleSite):
                desc.update(site=state.site, photons=state.photons)
            elif isinstance(state, GaussianLike):
                desc.update(w0=state.w0, q=state.q)
            elif isinstance(state, PoissonLike):
                desc.update(alpha_re=state.alpha.real, alpha_im=state.alpha.imag)
            elif isinstance(state, ProductTwoPhoton):
                desc.update(site_a=state.site_a, site_b=state.site_b)
            elif isinstance(state, Noon):
                desc.update(
                    site_a=state.site_a, site_b=state.site_b,
                    photons=state.photons, phase=state.phase,
                )
            elif isinstance(state, SinglePhotonSuperposition):
                desc.update(amplitudes_re=list(state.amplitudes.real),
                            amplitudes_im=list(state.amplitudes.imag))
            out["input"] = desc
        out["time"] = {"start": self.time.start, "stop": self.time.stop, "samples": self.time.samples}
        out["phi"] = {"start": self.phi.start, "stop": self.phi.stop, "samples": self.phi.samples}
        out["bloch"] = {"m": self.bloch.m, "j_min": self.bloch.j_min, "j_max": self.bloch.j_max}
        out["quadrature"] = {"nodes": self.nodes}
        out["output"] = {"format": self.output.format, "path": self.output.path,
                         "precision": self.output.precision}
        return out


def _read_sections(path: str) -> dict[str, dict[str, str]]:
    parser = configparser.ConfigParser()
    read = parser.read(path)
    if not read:
        raise ConfigError(f"config file not found: {path}")
    return {name: dict(parser[name]) for name in parser.sections()}


def _build_lattice(section: dict[str, str], overrides: dict) -> LatticeSpec:
    merged = dict(section)
    for key in ("kind", "n", "beta", "g0", "delta", "g1", "g2"):
        if overrides.get(key) is not None:
            merged[key] = str(overrides[key])
    kind = merged.get("kind")
    if kind not in ("bc", "bi"):
        raise ConfigError(f"lattice kind must be 'bc' or 'bi', got {kind!r}")
    sites = None
    n_raw = merged.get("n", "").strip().lower()
    if n_raw and n_raw != "infinite":
        try:
            sites = int(n_raw)
        except ValueError:
            raise ConfigError(f"lattice n must be an integer or 'infinite', got {n_raw!r}") from None
    try:
        if kind == "bi":
            return LatticeSpec.bi(parse_float(merged.get("beta", "0")), sites)
        has_g0 = "g0" in merged or "delta" in merged
        has_g12 = "g1" in merged or "g2" in merged
        if has_g0 == has_g12:
            raise ConfigError("BC lattice needs exactly one of {g0, delta} or {g1, g2}")
        if has_g0:
            if "g0" not in merged or "delta" not in merged:
                raise ConfigError("BC lattice needs both g0 and delta")
            return LatticeSpec.bc(parse_float(merged["g0"]), parse_float(merged["delta"]), sites)
        if "g1" not in merged or "g2" not in merged:
            raise ConfigError("BC lattice needs both g1 and g2")
        return LatticeSpec.bc_from_couplings(parse_float(merged["g1"]), parse_float(merged["g2"]), sites)
    except (ValueError, ConfigError) as exc:
        raise ConfigError(str(exc)) from None


def _build_input(section: dict[str, str]) -> InputState:
    itype = section.get("type", "").strip().lower()
    try:
        if itype == "fock":
            return FockSingleSite(site=int(section.get("site", "0")),
                                  photons=int(section.get("photons", "1")))
        if itype == "superposition":
            parts = [p for p in section.get("amplitudes", "").split(",") if p.strip()]
            if not parts:
                raise ConfigError("superposition input needs an 'amplitudes' list")
            amps = np.array([parse_complex(p) for p in parts])
            norm = np.linalg.norm(amps)
            if norm == 0:
                raise ConfigError("superposition amplitudes are all zero")
            return SinglePhotonSuperposition(amps / norm)
        if itype == "gaussian":
            return GaussianLike(w0=parse_float(section.get("w0", "1")),
                                q=parse_float(section.get("q", "0")))
        if itype == "poisson":
            return PoissonLike(alpha=parse_complex(section.get("alpha", "0")))
        if itype == "product":
            return ProductTwoPhoton(site_a=int(section["site_a"]), site_b=int(section["site_b"]))
        if itype == "noon":
            return Noon(site_a=int(section["site_a"]), site_b=int(section["site_b"]),
                        photons=int(section.get("photons", "2")),
                        phase=parse_float(section.get("phase", "0")))
    except (KeyError, ValueError) as exc:
        raise ConfigError(f"bad input section: {exc}") from None
    raise ConfigError(
        f"input type must be fock|superposition|gaussian|poisson|product|noon, got {itype!r}"
    )


def _build_grid(section: dict[str, str], overrides: dict, default: Grid,
                start_key: str = "t0", stop_key: str = "t1") -> Grid:
    start = section.get("start")
    stop = section.get("stop")
    samples = section.get("samples")
    if overrides.get(start_key) is not None:
        start = str(overrides[start_key])
    if overrides.get(stop_key) is not None:
        stop = str(overrides[stop_key])
    if overrides.get("samples") is not None:
        samples = str(overrides["samples"])
    try:
        return Grid(
            start=parse_float(start) if start is not None else default.start,
            stop=parse_float(stop) if stop is not None else default.stop,
            samples=int(samples) if samples is not None else default.samples,
        )
    except ValueError as exc:
        raise ConfigError(f"bad grid: {exc}") from None


def load_config(path: str | None, overrides: dict) -> RunConfig:
    """Resolve a RunConfig from an optional config file plus CLI overrides."""
    sections = _read_sections(path) if path else {}

    lattice = _build_lattice(sections.get("lattice", {}), overrides)
    input_state = None
    if "input" in sections:
        input_state = _build_input(sections["input"])

    time_grid = _build_grid(sections.get("time", {}), overrides, Grid(0.0, 10.0, 101))
    if time_grid.start < 0.0:
        raise ConfigError(f"time grid must start at >= 0, got {time_grid.start}")
    phi_grid = _build_grid(sections.get("phi", {}), {}, Grid(-math.pi, math.pi, 401))

    bsec = sections.get("bloch", {})
    try:
        bloch = BlochRange(m=int(bsec.get("m", "0")),
                           j_min=int(bsec.get("j_min", "-20")),
                           j_max=int(bsec.get("j_max", "20")))
    except ValueError as exc:
        raise ConfigError(f"bad bloch section: {exc}") from None

    nodes = int(overrides.get("nodes") or sections.get("quadrature", {}).get("nodes", 1024))

    osec = sections.get("output", {})
    output = OutputSpec(
        format=(overrides.get("format") or osec.get("format", "csv")).lower(),
        path=overrides.get("out") or osec.get("path", "result.csv"),
        precision=int(overrides.get("precision") or osec.get("precision", 9)),
    )
    return RunConfig(
        lattice=lattice,
        input=input_state,
        time=time_grid,
        phi=phi_grid,
        bloch=bloch,
        nodes=nodes,
        output=output,
        force=bool(overrides.get("force")),
        eigenvectors=bool(overrides.get("eigenvectors")),
    )
