"""Command-line front end: ``paramp-flow <command> [options]``.

Curves are written as CSV (header first, 17 significant digits, LF line
endings) followed by ``#``-prefixed trailer lines carrying the resolved
config and library version.  Reports are JSON objects with keys
``config, results, version, timestamp``.

Exit codes: 0 success, 2 config error, 3 resource guard, 4 numerical failure.
"""

from __future__ import annotations

import argparse
import io
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone
from typing import Sequence

import numpy as np

from . import __version__
from .errors import ContractViolation, NumericalFailure, RegimeError, ResourceLimitError, TruncationError
from .flux import (
    continuum_number_flux,
    converged_output_entropy,
    delta_N,
    drive_power,
    entropy_flux_scan,
    naive_blockwise_entropy,
    number_flux,
    output_entropy,
    output_power,
)
from .fock import beamsplitter_transfer, entanglement_swap, swap_target_state
from .output import DEFAULT_K_MAX_CAP, ModeGrid
from .paramp import ParampParams, asymptotic_entropy, derive, paramp_entropy, squeezed_initial_covariance

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_RESOURCE = 3
EXIT_NUMERICAL = 4

THREADS_ENV = "PARAMP_FLOW_THREADS"


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class ScenarioConfig:
    """Everything needed to reproduce one run."""

    command: str
    gamma: float = 1.0
    f: float = 0.4
    delta_omega: float = 0.0
    omega_p: float = 1.0
    r_values: tuple[float, ...] = (0.0,)
    t_max: float = 10.0
    n_t: int = 201
    delta_t: tuple[float, ...] = (40.0,)
    k_max: tuple[int, ...] = (256,)
    method: str = "structured"
    k_max_cap: int = DEFAULT_K_MAX_CAP
    fock_c1: complex = 1.0
    fock_c2: complex = 1.0
    outputs: dict = field(default_factory=dict)

    @property
    def params(self) -> ParampParams:
        return ParampParams(self.gamma, self.f, self.delta_omega, self.omega_p)

    def to_dict(self) -> dict:
        out = asdict(self)
        for key in ("r_values", "delta_t", "k_max"):
            out[key] = list(out[key])
        for key in ("fock_c1", "fock_c2"):
            z = complex(out[key])
            out[key] = [z.real, z.imag]
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "ScenarioConfig":
        known = {f.name for f in cls.__dataclass_fields__.values()}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown config field(s): {', '.join(sorted(unknown))}")
        data = dict(data)
        for key in ("r_values", "delta_t", "k_max"):
            if key in data:
                data[key] = tuple(data[key])
        for key in ("fock_c1", "fock_c2"):
            if key in data and isinstance(data[key], (list, tuple)):
                data[key] = complex(*data[key])
        return cls(**data)

    def validate(self) -> None:
        """Raise :class:`ConfigError` naming the offending field and constraint."""
        try:
            derive(self.params)
        except (ContractViolation, RegimeError) as exc:
            raise ConfigError(f"params: {exc}") from exc
        if self.method not in ("structured", "dense"):
            raise ConfigError(f"method: must be 'structured' or 'dense', got {self.method!r}")
        if not (self.t_max > 0 and math.isfinite(self.t_max)):
            raise ConfigError(f"t_max: must be > 0, got {self.t_max}")
        if self.n_t < 2:
            raise ConfigError(f"n_t: must be >= 2, got {self.n_t}")
        if any(not (dt > 0) for dt in self.delta_t):
            raise ConfigError(f"delta_t: every window width must be > 0, got {list(self.delta_t)}")
        if any(int(k) != k or k < 0 for k in self.k_max):
            raise ConfigError(f"k_max: must be non-negative integers, got {list(self.k_max)}")
        if self.k_max_cap < 0:
            raise ConfigError(f"k_max_cap: must be >= 0, got {self.k_max_cap}")
        if not self.r_values:
            raise ConfigError("r_values: need at least one squeezing value")


PRESETS = {
    "fig1": dict(command="paramp-entropy", gamma=1.0, f=0.4, delta_omega=0.0,
                 r_values=(0.0, 1.0, 2.0, 3.0), t_max=10.0, n_t=1001),
    "fig2": dict(command="sweep", gamma=1.0, f=0.3, delta_omega=math.sqrt(0.3 ** 2 - 0.2 ** 2),
                 delta_t=(20.0, 40.0, 80.0), k_max=(1, 2, 4, 8, 16, 32, 64, 128, 256, 512, 1024)),
}


def _fmt(x) -> str:
    return f"{float(x):.17g}"


def _csv(header: Sequence[str], rows, config: ScenarioConfig) -> str:
    buf = io.StringIO()
    buf.write(",".join(header) + "\n")
    for row in rows:
        buf.write(",".join(_fmt(v) for v in row) + "\n")
    buf.write("# config: " + json.dumps(config.to_dict(), sort_keys=True) + "\n")
    buf.write(f"# version: {__version__}\n")
    return buf.getvalue()


def _json(results, config: ScenarioConfig) -> str:
    doc = {
        "config": config.to_dict(),
        "results": results,
        "version": __version__,
        "timestamp": datetime.now(timezone.utc).isoformat(),
    }
    return json.dumps(doc, indent=2, sort_keys=True, default=_json_default) + "\n"


def _json_default(obj):
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    if isinstance(obj, np.generic):
        return obj.item()
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _workers() -> int:
    n = os.cpu_count() or 1
    env = os.environ.get(THREADS_ENV)
    if env:
        try:
            n = min(n, max(1, int(env)))
        except ValueError:
            raise ConfigError(f"{THREADS_ENV}: must be an integer, got {env!r}") from None
    return n


def _sweep_point(args):
    config, dt, k = args
    d = derive(config.params)
    rep = output_entropy(d, ModeGrid(dt, k), method=config.method, k_max_cap=config.k_max_cap)
    return (dt, k, rep.delta_S_out, rep.entropy_flux_estimate, len(rep.nontrivial_gammas))


def _run_paramp_entropy(config: ScenarioConfig) -> str:
    d = derive(config.params)
    ts = np.linspace(0.0, config.t_max, config.n_t)
    curves = [paramp_entropy(ts, squeezed_initial_covariance(r, d), d) for r in config.r_values]
    header = ["t [1/gamma]"] + [f"S_par(r={r:g}) [nats]" for r in config.r_values]
    return _csv(header, zip(ts, *curves), config)


def _run_output_entropy(config: ScenarioConfig) -> str:
    d = derive(config.params)
    results = []
    for dt in config.delta_t:
        for k in config.k_max:
            rep = output_entropy(d, ModeGrid(dt, k), method=config.method, k_max_cap=config.k_max_cap)
            results.append(rep.to_dict())
    return _json(results, config)


def _run_fluxes(config: ScenarioConfig) -> str:
    d = derive(config.params)
    results = {
        "number_flux": number_flux(d),
        "continuum_number_flux": continuum_number_flux(d),
        "output_power": output_power(d),
        "drive_power": drive_power(d),
        "energy_per_quantum": output_power(d) / number_flux(d),
        "paramp_asymptotic_entropy": asymptotic_entropy(d),
        "windows": [],
    }
    for dt in config.delta_t:
        row = converged_output_entropy(d, dt, method=config.method, k_max_cap=config.k_max_cap)
        g = ModeGrid(dt, row.k_max)
        results["windows"].append({
            "delta_t": dt,
            "k_max": row.k_max,
            "converged": row.converged,
            "delta_S_out": row.value,
            "entropy_flux_estimate": row.flux,
            "delta_N_out": delta_N(d, g),
            "windowed_number_flux": delta_N(d, g) / dt,
            "naive_blockwise_entropy": naive_blockwise_entropy(d, g),
        })
    if len(config.delta_t) > 1:
        results["flux_exponent"] = entropy_flux_scan(d, config.delta_t, method=config.method).exponent
    return _json(results, config)


def _run_fock_demo(config: ScenarioConfig) -> str:
    swap = entanglement_swap()
    tr = beamsplitter_transfer(config.fock_c1, config.fock_c2)
    results = {
        "swap": {
            "projection_probability": swap.projection_probability,
            "complement_probability": swap.complement_probability,
            "post_state_fidelity": swap.post_state.fidelity(swap_target_state()),
            "b_pair_entanglement": swap.b_pair_entanglement,
        },
        "transfer": {
            "b_squared_coherence": tr.b_squared_coherence,
            "abs_b_squared_coherence": abs(tr.b_squared_coherence),
            "residual_entanglement": tr.residual_entanglement,
        },
    }
    return _json(results, config)


def _run_sweep(config: ScenarioConfig, workers: int | None = None) -> str:
    derive(config.params)
    points = [(config, dt, k) for dt in config.delta_t for k in config.k_max]
    workers = workers or _workers()
    if workers > 1 and len(points) > 1 and config.method == "dense":
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_sweep_point, points))
    else:
        rows = [_sweep_point(p) for p in points]
    header = ["delta_t [1/gamma]", "k_max", "delta_S_out [nats]", "delta_S_out/delta_t [nats*gamma]",
              "n_nontrivial"]
    return _csv(header, rows, config)


RUNNERS = {
    "paramp-entropy": _run_paramp_entropy,
    "output-entropy": _run_output_entropy,
    "fluxes": _run_fluxes,
    "fock-demo": _run_fock_demo,
    "sweep": _run_sweep,
}


def run_scenario(config: ScenarioConfig, workers: int | None = None) -> tuple[int, str]:
    """Validate and run ``config``; return ``(exit_code, text)``.

    On failure ``text`` is the error message.  Output is written to
    ``config.outputs["path"]`` when set.  ``workers`` only affects dense
    sweeps and never the numbers produced.
    """
    try:
        config.validate()
        if config.command == "sweep":
            text = _run_sweep(config, workers)
        else:
            text = RUNNERS[config.command](config)
    except ConfigError as exc:
        return EXIT_CONFIG, f"config error: {exc}"
    except (ContractViolation, RegimeError, TruncationError) as exc:
        return EXIT_CONFIG, f"config error: {exc}"
    except ResourceLimitError as exc:
        return EXIT_RESOURCE, f"resource limit: {exc}"
    except (NumericalFailure, np.linalg.LinAlgError) as exc:
        return EXIT_NUMERICAL, f"numerical failure: {exc}"
    path = config.outputs.get("path")
    if path:
        with open(path, "w", newline="\n") as fh:
            fh.write(text)
    return EXIT_OK, text


def _floats(s: str) -> tuple[float, ...]:
    try:
        return tuple(float(x) for x in s.split(",") if x)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {s!r}") from None


def _ints(s: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in s.split(",") if x)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {s!r}") from None


def _complex(s: str) -> complex:
    try:
        return complex(s.replace(" ", ""))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a complex number, got {s!r}") from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False, allow_abbrev=False)
    common.add_argument("--config", help="JSON config file; command-line flags override it")
    common.add_argument("--gamma", type=float, help="decay rate (default 1)")
    common.add_argument("--f", type=float, help="pump amplitude")
    det = common.add_mutually_exclusive_group()
    det.add_argument("--delta-omega", type=float, help="detuning")
    det.add_argument("--f-prime", type=float, help="set the detuning through f' = sqrt(f^2 - dw^2)")
    common.add_argument("--omega-p", type=float, help="pump frequency (power only)")
    common.add_argument("--method", choices=["structured", "dense"])
    common.add_argument("--k-max-cap", type=int, help=f"largest allowed k_max (default {DEFAULT_K_MAX_CAP})")
    common.add_argument("-o", "--output", help="write to this file instead of stdout")

    parser = argparse.ArgumentParser(prog="paramp-flow", description=__doc__.splitlines()[0], allow_abbrev=False)
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("paramp-entropy", parents=[common], help="S_par(t) curves (CSV)", allow_abbrev=False)
    p.add_argument("--r", type=_floats, dest="r_values", help="squeezing values, e.g. 0,1,2,3")
    p.add_argument("--t-max", type=float)
    p.add_argument("--n-t", type=int)

    for name, helptext in (("output-entropy", "window entropy reports (JSON)"),
                           ("fluxes", "entropy, number and power fluxes (JSON)"),
                           ("sweep", "window entropy vs k_max (CSV)")):
        p = sub.add_parser(name, parents=[common], help=helptext, allow_abbrev=False)
        p.add_argument("--delta-t", type=_floats, help="window widths, comma separated")
        if name != "fluxes":
            p.add_argument("--k-max", type=_ints, help="harmonic cutoffs, comma separated")
        if name == "sweep":
            p.add_argument("--workers", type=int, help=f"worker processes (default: CPUs, capped by ${THREADS_ENV})")

    p = sub.add_parser("fock-demo", parents=[common], help="Fock-space transfer and swap witnesses (JSON)",
                       allow_abbrev=False)
    p.add_argument("--c1", type=_complex, dest="fock_c1")
    p.add_argument("--c2", type=_complex, dest="fock_c2")

    p = sub.add_parser("preset", parents=[common], help="reproduce a figure's data", allow_abbrev=False)
    p.add_argument("name", choices=sorted(PRESETS))
    p.add_argument("--r", type=_floats, dest="r_values")
    p.add_argument("--t-max", type=float)
    p.add_argument("--n-t", type=int)
    p.add_argument("--delta-t", type=_floats)
    p.add_argument("--k-max", type=_ints)
    p.add_argument("--workers", type=int)
    return parser


def config_from_args(args: argparse.Namespace) -> ScenarioConfig:
    if args.command == "preset":
        base = dict(PRESETS[args.name])
    else:
        base = {"command": args.command}
    if args.config:
        try:
            with open(args.config) as fh:
                loaded = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"config: cannot read {args.config}: {exc}") from exc
        loaded.pop("command", None)
        base.update(loaded)
    for key in ("gamma", "f", "delta_omega", "omega_p", "method", "k_max_cap", "r_values", "t_max",
                "n_t", "delta_t", "k_max", "fock_c1", "fock_c2"):
        value = getattr(args, key, None)
        if value is not None:
            base[key] = value
    f_prime = getattr(args, "f_prime", None)
    if f_prime is not None:
        f = base.get("f", ScenarioConfig.f)
        if not 0 < f_prime <= f:
            raise ConfigError(f"f_prime: need 0 < f' <= f, got f'={f_prime}, f={f}")
        base["delta_omega"] = math.sqrt(f * f - f_prime * f_prime)
    if args.output:
        base["outputs"] = {"path": args.output}
    return ScenarioConfig.from_dict(base)


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = config_from_args(args)
    except (ConfigError, TypeError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    code, text = run_scenario(config, workers=getattr(args, "workers", None))
    if code != EXIT_OK:
        print(text, file=sys.stderr)
    elif not config.outputs.get("path"):
        try:
            sys.stdout.write(text)
            sys.stdout.flush()
        except BrokenPipeError:
            sys.stderr.close()
    return code


if __name__ == "__main__":
    sys.exit(main())
