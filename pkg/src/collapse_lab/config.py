"""``key = value`` run configuration files.

One assignment per line, UTF-8, ``#`` starts a comment.  Times other than
``tau_r`` are given in units of ``tau_r``.  Every problem in a file is
collected and reported together as :class:`~collapse_lab.errors.ConfigErrors`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

from .dynamics import CommonLogistic, IndependentLogistic, IntegratorSettings, PhaseModel
from .ensemble import SamplingSpec
from .errors import ConfigErrors, InvalidValue, MissingKey, TypeMismatch, UnknownKey
from .model import AmplitudeConvention, SamplingMode, TwoStateConfig


def _bool(text):
    low = text.lower()
    if low in ("true", "yes", "1", "on"):
        return True
    if low in ("false", "no", "0", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def _choice(*options):
    def parse(text):
        if text not in options:
            raise ValueError(f"expected one of {', '.join(options)}, got {text!r}")
        return text
    parse.__name__ = "one of " + "/".join(options)
    return parse


def _int(text):
    return int(text, 0)


# key -> (parser, default); a default of None means "no default"
SCHEMA = {
    "x0_1": (float, None),
    "x0_2": (float, None),
    "tau_r": (float, None),
    "sampling_mode": (_choice(*(m.value for m in SamplingMode)), SamplingMode.INDEPENDENT.value),
    "amplitude_convention": (
        _choice(*(c.value for c in AmplitudeConvention)),
        AmplitudeConvention.PROBABILITY.value,
    ),
    "n_trajectories": (_int, None),
    "master_seed": (_int, 0),
    "step_over_tau": (float, 1e-3),
    "t_end_over_tau": (float, 30.0),
    "clamp": (_bool, True),
    "delta": (float, 1e-3),
    "theta0_1": (float, 0.0),
    "theta0_2": (float, 0.0),
    "omega_1": (float, 0.0),
    "omega_2": (float, 0.0),
    "chaos": (_choice("none", "common", "independent"), "none"),
    "chaos_seed_1": (float, 0.3),
    "chaos_seed_2": (float, 0.7),
    "chaos_amplitude": (float, 1.0),
    "chaos_period_over_tau": (float, 0.1),
}

REQUIRED = {
    "collapse": ("x0_1", "x0_2", "tau_r"),
    "ensemble": ("x0_1", "x0_2", "tau_r", "n_trajectories", "master_seed"),
}


@dataclass(frozen=True)
class RunConfig:
    """Validated key/value settings, with typed views for each consumer."""

    values: dict
    source: str = "<memory>"

    def __getitem__(self, key):
        if key in self.values:
            return self.values[key]
        default = SCHEMA[key][1]
        if default is None:
            raise KeyError(key)
        return default

    def get(self, key, default=None):
        try:
            return self[key]
        except KeyError:
            return default

    def two_state(self) -> TwoStateConfig:
        return TwoStateConfig(
            x0=(self["x0_1"], self["x0_2"]),
            tau_r=self["tau_r"],
            sampling_mode=self["sampling_mode"],
            amplitude_convention=self["amplitude_convention"],
        )

    def sampling(self) -> SamplingSpec:
        return SamplingSpec(self["sampling_mode"], self["n_trajectories"], self["master_seed"])

    def integrator(self) -> IntegratorSettings:
        return IntegratorSettings.in_tau_units(
            self["tau_r"], self["step_over_tau"], self["t_end_over_tau"], self["clamp"]
        )

    def phase_model(self) -> PhaseModel:
        period = self["chaos_period_over_tau"] * self["tau_r"]
        amp = self["chaos_amplitude"]
        chaos = {
            "none": None,
            "common": lambda: CommonLogistic(self["chaos_seed_1"], amp, period),
            "independent": lambda: IndependentLogistic(
                (self["chaos_seed_1"], self["chaos_seed_2"]), amp, period
            ),
        }[self["chaos"]]
        return PhaseModel((self["omega_1"], self["omega_2"]), chaos() if chaos else None)

    def updated(self, required=(), **overrides) -> RunConfig:
        """Copy with ``overrides`` applied (``None`` values skipped), re-validated."""
        values = dict(self.values)
        values.update({k: v for k, v in overrides.items() if v is not None})
        unknown = [UnknownKey(k, "unknown key") for k in overrides if k not in SCHEMA]
        return _validated(values, unknown, required, self.source)

    @property
    def theta0(self) -> tuple[float, float]:
        return (self["theta0_1"], self["theta0_2"])


def parse_config_text(text: str, required=(), source: str = "<string>") -> RunConfig:
    errors = []
    values = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        where = f"{source}:{lineno}"
        if "=" not in line:
            errors.append(InvalidValue(where, f"expected 'key = value', got {raw.strip()!r}"))
            continue
        key, _, value = (part.strip() for part in line.partition("="))
        if key not in SCHEMA:
            errors.append(UnknownKey(key, f"unknown key ({where})"))
            continue
        if key in values:
            errors.append(InvalidValue(key, f"duplicate key ({where})"))
            continue
        parser = SCHEMA[key][0]
        try:
            parsed = parser(value)
        except ValueError:
            errors.append(
                TypeMismatch(key, f"cannot read {value!r} as {parser.__name__} ({where})")
            )
            continue
        if isinstance(parsed, float) and not math.isfinite(parsed):
            errors.append(InvalidValue(key, f"value must be finite ({where})"))
            continue
        values[key] = parsed

    return _validated(values, errors, required, source)


def _validated(values, errors, required, source) -> RunConfig:
    errors = list(errors)
    for key in required:
        if key not in values and SCHEMA[key][1] is None:
            errors.append(MissingKey(key, "required key is missing"))
    errors.extend(_semantic_errors(values))
    if errors:
        raise ConfigErrors(errors)
    return RunConfig(values, source)


def _semantic_errors(values):
    out = []
    x1, x2 = values.get("x0_1"), values.get("x0_2")
    for key, v in (("x0_1", x1), ("x0_2", x2)):
        if v is not None and not 0.0 <= v <= 1.0:
            out.append(InvalidValue(key, f"weight must lie in [0, 1], got {v}"))
    if x1 is not None and x2 is not None and abs(x1 + x2 - 1.0) > 1e-12:
        out.append(InvalidValue("x0_1 + x0_2", f"weights must sum to 1, got {x1 + x2!r}"))
    for key in ("tau_r", "step_over_tau", "chaos_period_over_tau"):
        if key in values and not values[key] > 0:
            out.append(InvalidValue(key, f"must be > 0, got {values[key]}"))
    if "t_end_over_tau" in values and values["t_end_over_tau"] < 0:
        out.append(InvalidValue("t_end_over_tau", "must be >= 0"))
    if "n_trajectories" in values and values["n_trajectories"] < 1:
        out.append(InvalidValue("n_trajectories", "must be >= 1"))
    if "master_seed" in values and not 0 <= values["master_seed"] < 2**64:
        out.append(InvalidValue("master_seed", "must be a 64-bit unsigned integer"))
    if "delta" in values and not 0.0 < values["delta"] < 0.5:
        out.append(InvalidValue("delta", "must lie in (0, 0.5)"))
    if "chaos_amplitude" in values and values["chaos_amplitude"] < 0:
        out.append(InvalidValue("chaos_amplitude", "must be >= 0"))
    return out


def parse_config(path, required=()) -> RunConfig:
    """Read and validate a configuration file.

    Raises:
        FileNotFoundError: the file does not exist.
        ConfigErrors: one or more problems; ``.errors`` lists them all.
    """
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    return parse_config_text(text, required, source=str(path))
