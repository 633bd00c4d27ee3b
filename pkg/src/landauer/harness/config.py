"""Scenario configuration: JSON schema by example, strict merging.

Each bundled scenario declares a complete default configuration; a user
config is merged over it key by key. Any key absent from the default at
that nesting level is rejected, so the defaults double as the schema and
unknown keys can never pass silently. Values must match the default's type
(ints may stand in for floats; "auto" coupling lists may be replaced by
explicit number lists).

Shared vocabulary:

* state specs (system.rho_i / system.rho_f):
  {"kind": "maximally_mixed"} | {"kind": "diag", "probs": [...]} |
  {"kind": "pure", "index": k} | {"kind": "haar_mixed", "floor": f}
* reservoir: {"model": "spin-chain", "n_qubits": n, "j": "auto"|[...],
  "h": "auto"|[...], "base": b, "detuning": d, "beta": beta}
  or {"model": "single-level", "splitting": e, "beta": beta}
* every scenario has "seed", "tolerances", "output"; entropy columns are
  emitted in nats unless the --bits flag is passed to the CLI.
"""

from __future__ import annotations

import copy
import hashlib
import json
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from .. import qmat
from ..errors import ConfigError
from . import reservoirs

SCENARIO_DOCS: dict[str, str] = {
    "example1": "flip erasure: swap with a reservoir prepared in the target state; sigma = S(rho_i|rho_f)",
    "example2-sweep": "staged erasure along a state path; heat converges to the entropy drop at first order in 1/N",
    "remark2-bounds": "random-process battery for the Landauer bound, its improved form, and the sigma floors",
    "remark3-epsilon": "near-perfect erasure of the maximally mixed state with heat within eps of log d",
    "instantaneous-quench": "switched coupling to a spin chain; heat computed three ways and cross-checked",
    "adiabatic-sweep": "slow erasure drive; entropy production decays as the horizon grows",
    "target-solver": "Newton solve for the system Hamiltonian whose coupled Gibbs marginal hits a target state",
    "thermo-integration": "free-energy identities: thermodynamic integration and the Kubo check",
    "property-fuzz": "seeded random sweep asserting balance, bounds, sandwich, and saturation invariants",
}

_SPIN_CHAIN = {
    "model": "spin-chain",
    "n_qubits": 6,
    "j": "auto",
    "h": "auto",
    "base": 1.0,
    "detuning": 0.35,
    "splitting": 1.0,  # used only when model is switched to single-level
    "beta": 1.0,
}

SCENARIO_DEFAULTS: dict[str, dict] = {
    "example1": {
        "scenario": "example1",
        "system": {
            "d_s": 2,
            "rho_i": {"kind": "maximally_mixed"},
            "rho_f": {"kind": "diag", "probs": [0.75, 0.25]},
        },
        "protocol": {"kind": "flip", "random_pairs": 50},
        "seed": 2026,
        "tolerances": {"sigma_match": 1e-10, "reservoir_return": 1e-10, "balance": 1e-8},
        "output": "out/example1",
    },
    "example2-sweep": {
        "scenario": "example2-sweep",
        "system": {
            "d_s": 2,
            "rho_i": {"kind": "maximally_mixed"},
            "rho_f": {"kind": "diag", "probs": [0.75, 0.25]},
        },
        "protocol": {
            "kind": "staged",
            "path": "linear",
            "stage_counts": [1, 2, 5, 10, 20, 50, 100, 200, 500, 1000],
        },
        "seed": 2026,
        "tolerances": {
            "final_gap": 2e-4,
            "decade_ratio_low": 8.0,
            "decade_ratio_high": 12.0,
            "balance": 1e-8,
        },
        "output": "out/example2-sweep",
    },
    "remark2-bounds": {
        "scenario": "remark2-bounds",
        "instances": {
            "count": 500,
            "dims_s": [2, 3, 4],
            "dims_r": [2, 4, 8],
            "beta_low": 0.5,
            "beta_high": 2.0,
        },
        "seed": 2026,
        "tolerances": {"slack": 1e-10, "balance": 1e-8},
        "output": "out/remark2-bounds",
    },
    "remark3-epsilon": {
        "scenario": "remark3-epsilon",
        "system": {"d_s": 2},
        "protocol": {"kind": "staged", "eps": 0.1},
        "seed": 2026,
        "tolerances": {"balance": 1e-8},
        "output": "out/remark3-epsilon",
    },
    "instantaneous-quench": {
        "scenario": "instantaneous-quench",
        "system": {"d_s": 2, "rho_i": {"kind": "maximally_mixed"}, "splitting": 1.0},
        "reservoir": {**_SPIN_CHAIN, "n_qubits": 4},
        "protocol": {
            "kind": "instantaneous",
            "lambda": 0.2,
            "t_max": 20.0,
            "samples": 80,
            "flux_dt": 0.005,
        },
        "seed": 2026,
        "tolerances": {
            "bookkeeping": 1e-9,
            "flux": 1e-6,
            "energy_drift": 1e-9,
            "spectrum_drift": 1e-9,
            "sigma_positive": 1e-6,
            "balance": 1e-8,
            "tail_drift": 0.5,
        },
        "output": "out/instantaneous-quench",
    },
    "adiabatic-sweep": {
        "scenario": "adiabatic-sweep",
        "system": {
            "d_s": 2,
            "rho_i": {"kind": "maximally_mixed"},
            "rho_f": {"kind": "diag", "probs": [0.75, 0.25]},
        },
        "reservoir": dict(_SPIN_CHAIN),
        "protocol": {
            "kind": "adiabatic",
            "lambda": 0.6,
            "t_list": [5.0, 10.0, 20.0, 40.0],
            "steps": 2000,
            "panels": 16,
        },
        "seed": 2026,
        "tolerances": {
            "first_law": 1e-6,
            "balance": 1e-8,
            "gibbs_prediction": 1e-6,
            "decay_factor": 0.5,
        },
        "output": "out/adiabatic-sweep",
    },
    "target-solver": {
        "scenario": "target-solver",
        "system": {"d_s": 2, "rho_f": {"kind": "diag", "probs": [0.7, 0.3]}},
        "reservoir": {**_SPIN_CHAIN, "n_qubits": 2},
        "protocol": {
            "kind": "instantaneous",
            "lambda": 0.1,
            "lambda_sweep_max": 2.0,
            "lambda_sweep_points": 20,
            "newton_tol": 1e-10,
            "max_iter": 30,
            "directions": 100,
        },
        "seed": 2026,
        "tolerances": {
            "residual": 1e-8,
            "max_newton_iters": 10.0,
            "jacobian_fd": 1e-6,
            "balance": 1e-8,
        },
        "output": "out/target-solver",
    },
    "thermo-integration": {
        "scenario": "thermo-integration",
        "system": {"d_s": 2},
        "reservoir": {**_SPIN_CHAIN, "n_qubits": 1},
        "protocol": {
            "kind": "adiabatic",
            "random_protocols": 20,
            "panels": 16,
            "kubo_grid": 9,
            "kubo_fd_step": 1e-4,
            "scale": 0.8,
        },
        "seed": 2026,
        "tolerances": {"integration": 1e-8, "kubo": 1e-6, "balance": 1e-8},
        "output": "out/thermo-integration",
    },
    "property-fuzz": {
        "scenario": "property-fuzz",
        "instances": {
            "count": 500,
            "dims_s": [2, 3, 4],
            "dims_r": [2, 4, 8],
            "beta_low": 0.5,
            "beta_high": 2.0,
        },
        "seed": 2026,
        "tolerances": {
            "slack": 1e-10,
            "balance": 1e-8,
            "saturation_spectrum": 1e-5,
        },
        "output": "out/property-fuzz",
    },
}


@dataclass(frozen=True)
class ScenarioConfig:
    """A fully merged, validated scenario configuration."""

    scenario: str
    raw: dict[str, Any] = field(repr=False)
    seed: int = 0
    output: str = "out"

    def section(self, name: str) -> dict:
        return self.raw.get(name, {})

    def tolerance(self, name: str) -> float:
        try:
            return float(self.raw["tolerances"][name])
        except KeyError as exc:
            raise ConfigError(f"scenario {self.scenario} has no tolerance {name!r}") from exc

    def rng(self) -> np.random.Generator:
        return np.random.default_rng(self.seed)

    def content_hash(self) -> str:
        """Stable hash of the merged config (provenance for reports)."""
        blob = json.dumps(self.raw, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()


def default_config(scenario: str) -> dict:
    if scenario not in SCENARIO_DEFAULTS:
        known = ", ".join(sorted(SCENARIO_DEFAULTS))
        raise ConfigError(f"unknown scenario {scenario!r}; known: {known}")
    return copy.deepcopy(SCENARIO_DEFAULTS[scenario])


def _merge(default: Any, user: Any, path: str) -> Any:
    """Merge user config over the default, rejecting unknown keys and type changes."""
    if isinstance(default, dict):
        if not isinstance(user, dict):
            raise ConfigError(f"{path}: expected an object, got {type(user).__name__}")
        merged = {}
        for key in user:
            if key not in default:
                raise ConfigError(f"{path}: unknown key {key!r}")
        for key, dval in default.items():
            merged[key] = _merge(dval, user[key], f"{path}.{key}") if key in user else copy.deepcopy(dval)
        return merged
    if isinstance(default, str) and default == "auto":
        # "auto" placeholders also accept explicit numeric lists
        if user == "auto":
            return "auto"
        if isinstance(user, list) and all(isinstance(x, (int, float)) for x in user):
            return [float(x) for x in user]
        raise ConfigError(f"{path}: expected \"auto\" or a list of numbers")
    if isinstance(default, bool) or isinstance(user, bool):
        if isinstance(default, bool) and isinstance(user, bool):
            return user
        raise ConfigError(f"{path}: expected {type(default).__name__}")
    if isinstance(default, float):
        if isinstance(user, (int, float)):
            return float(user)
        raise ConfigError(f"{path}: expected a number, got {type(user).__name__}")
    if isinstance(default, int):
        if isinstance(user, int):
            return user
        raise ConfigError(f"{path}: expected an integer, got {type(user).__name__}")
    if isinstance(default, str):
        if isinstance(user, str):
            return user
        raise ConfigError(f"{path}: expected a string, got {type(user).__name__}")
    if isinstance(default, list):
        if not isinstance(user, list):
            raise ConfigError(f"{path}: expected a list, got {type(user).__name__}")
        if default and user:
            want = float if isinstance(default[0], (int, float)) else type(default[0])
            out = []
            for idx, item in enumerate(user):
                if want is float:
                    if not isinstance(item, (int, float)):
                        raise ConfigError(f"{path}[{idx}]: expected a number")
                    out.append(float(item))
                elif isinstance(item, want):
                    out.append(copy.deepcopy(item))
                else:
                    raise ConfigError(f"{path}[{idx}]: expected {want.__name__}")
            return out
        return copy.deepcopy(user)
    raise ConfigError(f"{path}: unsupported config value {default!r}")


def parse_config(data: dict) -> ScenarioConfig:
    """Validate a raw config dict against its scenario's defaults."""
    if not isinstance(data, dict):
        raise ConfigError(f"config must be a JSON object, got {type(data).__name__}")
    name = data.get("scenario")
    if not isinstance(name, str):
        raise ConfigError("config needs a \"scenario\" name")
    merged = _merge(default_config(name), data, name)
    return ScenarioConfig(
        scenario=name,
        raw=merged,
        seed=int(merged.get("seed", 0)),
        output=str(merged.get("output", "out")),
    )


def load_config(path: str) -> ScenarioConfig:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
    return parse_config(data)


def build_state(spec: dict, d_s: int, rng: np.random.Generator) -> np.ndarray:
    """Materialize a state spec into a density matrix."""
    kind = spec.get("kind")
    if kind == "maximally_mixed":
        return np.eye(d_s) / d_s
    if kind == "diag":
        probs = np.asarray(spec["probs"], dtype=float)
        if len(probs) != d_s or probs.min() < 0 or abs(probs.sum() - 1.0) > 1e-9:
            raise ConfigError(f"diag probs must be {d_s} nonnegative numbers summing to 1")
        return np.diag(probs / probs.sum())
    if kind == "pure":
        index = int(spec.get("index", 0))
        if not 0 <= index < d_s:
            raise ConfigError(f"pure index {index} out of range for d_s={d_s}")
        rho = np.zeros((d_s, d_s))
        rho[index, index] = 1.0
        return rho
    if kind == "haar_mixed":
        floor = float(spec.get("floor", 0.05))
        return qmat.random_density(d_s, rng, floor=floor)
    raise ConfigError(f"unknown state kind {kind!r}")


def build_reservoir(section: dict) -> "reservoirs.ReservoirSpec":
    """Materialize the reservoir section of a config."""
    model = section.get("model")
    beta = float(section["beta"])
    if model == "spin-chain":
        n = int(section["n_qubits"])
        base = float(section.get("base", 1.0))
        detuning = float(section.get("detuning", 0.35))
        j = section.get("j", "auto")
        h = section.get("h", "auto")
        if j == "auto":
            j = reservoirs.detuned_couplings(max(n - 1, 0), base, detuning)
        if h == "auto":
            h = reservoirs.detuned_fields(n, base, detuning)
        return reservoirs.spin_chain_reservoir(n, j, h, beta)
    if model == "single-level":
        return reservoirs.single_spin_reservoir(float(section["splitting"]), beta)
    raise ConfigError(f"unknown reservoir model {model!r}")
