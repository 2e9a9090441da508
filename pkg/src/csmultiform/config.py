"""Run configuration for the command-line driver.

A config file is a flat ``key = value`` document; ``#`` starts a comment.
Keys are the long flag names with dashes or underscores, e.g.::

    window = 5
    n-max = 1
    h-schedule = 0.025, 0.0125, 0.00625
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, fields


class ConfigError(ValueError):
    pass


def _floats(text) -> tuple:
    if isinstance(text, (list, tuple)):
        return tuple(float(x) for x in text)
    return tuple(float(x) for x in str(text).replace(";", ",").split(",") if x.strip())


def _ints(text) -> tuple:
    if isinstance(text, (list, tuple)):
        return tuple(int(x) for x in text)
    return tuple(int(x) for x in str(text).replace(";", ",").split(",") if x.strip())


@dataclass
class RunConfig:
    window: int = 5
    n_max: int = 1
    seed: int = 0
    trials: int = 20  # random cases per randomized symbolic check
    # numeric domain for closure and generating-action checks
    corner: float = 0.0
    edge: float = 0.1
    c: float = 3.0
    quad_order: int = 6
    quad_orders: tuple = (2, 3, 4, 6, 8)
    hbar: float = 0.1
    closure_tol: float = 1e-8
    offshell_min: float = 1e-3
    # Goursat convergence study (3 active coordinates) against -1/(c + sum xi)
    goursat_c: float = 1.0
    goursat_edge: float = 0.5
    h_schedule: tuple = (0.025, 0.0125, 0.00625)
    # path independence (4 active coordinates)
    pi_edge: float = 0.5
    pi_h_schedule: tuple = (0.05, 0.025, 0.0125)
    order_target: float = 4.0
    order_tol: float = 0.3
    residual_tol: float = 1e-12
    threads: int = 1
    out: str | None = None
    csv: str | None = None
    format: str = "json"

    _CASTS = {
        "window": int, "n_max": int, "seed": int, "trials": int, "quad_order": int, "threads": int,
        "corner": float, "edge": float, "c": float, "hbar": float, "closure_tol": float,
        "offshell_min": float, "goursat_c": float, "goursat_edge": float, "pi_edge": float,
        "order_target": float, "order_tol": float, "residual_tol": float,
        "h_schedule": _floats, "pi_h_schedule": _floats, "quad_orders": _ints,
        "out": str, "csv": str, "format": str,
    }

    @classmethod
    def keys(cls) -> list[str]:
        return [f.name for f in fields(cls)]

    @classmethod
    def from_mapping(cls, values: dict) -> "RunConfig":
        kw = {}
        for key, raw in values.items():
            name = key.strip().replace("-", "_")
            if name not in cls._CASTS:
                raise ConfigError(f"unknown config key {key!r}")
            try:
                kw[name] = cls._CASTS[name](raw) if raw is not None else None
            except ValueError as exc:
                raise ConfigError(f"bad value for {key}: {raw!r} ({exc})") from None
        return cls(**kw)

    def checked(self, command: str) -> "RunConfig":
        """Validate the invariants for ``command`` and return self."""
        if self.n_max < 1:
            raise ConfigError("n-max must be at least 1")
        if command == "verify" and self.window < 2 * self.n_max + 3:
            raise ConfigError(
                f"window N={self.window} too small for n-max={self.n_max}: need N >= {2 * self.n_max + 3}"
            )
        if command == "numeric" and self.n_max > 2:
            raise ConfigError("numeric runs support n-max <= 2")
        for name in ("h_schedule", "pi_h_schedule"):
            hs = getattr(self, name)
            if len(hs) < 2 or any(h <= 0 for h in hs):
                raise ConfigError(f"{name.replace('_', '-')} needs at least two positive steps, got {hs}")
            if any(b >= a for a, b in zip(hs, hs[1:])):
                raise ConfigError(f"{name.replace('_', '-')} must be strictly decreasing, got {hs}")
        if self.edge <= 0 or self.goursat_edge <= 0 or self.pi_edge <= 0:
            raise ConfigError("edges must be positive")
        if self.threads < 1:
            raise ConfigError("threads must be at least 1")
        if self.format not in ("json", "text"):
            raise ConfigError(f"format must be json or text, got {self.format!r}")
        if self.trials < 1:
            raise ConfigError("trials must be at least 1")
        return self

    def echo(self) -> dict:
        """Config as plain JSON values, excluding output plumbing."""
        d = asdict(self)
        for k in ("out", "csv", "format", "threads"):
            d.pop(k)
        return {k: list(v) if isinstance(v, tuple) else v for k, v in d.items()}


def read_config_file(path) -> dict:
    values = {}
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}: expected key = value")
            key, value = line.split("=", 1)
            values[key.strip()] = value.strip()
    return values
