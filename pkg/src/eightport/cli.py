"""Command-line front end.

Subcommands: compensate, phase-dist, sweep, sample, verify.  All numeric
output is printed with 12 significant digits; CSV files are UTF-8 with LF
line endings and a header row.  Exit codes: 0 success, 1 verification
failure, 2 configuration error, 3 numeric-domain error, 4 I/O error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass

import numpy as np

from . import fock
from .compensation import DetectorQuad, compensate, solve_squeezing, sweep
from .detector_sim import (bin_phases, chi_square_vs_distribution, event_phases,
                           histogram_min_variance, phase_space_density,
                           sample_events)
from .phase import min_variance, phase_distribution, phase_matrix
from .smearing import (DiagonalState, GaussianSmear, check_efficiency,
                       convolve_state, diagonal_part, geometric_state,
                       overall_efficiency)
from .verification import run_all

EXIT_OK = 0
EXIT_VERIFY_FAIL = 1
EXIT_CONFIG = 2
EXIT_NUMERIC = 3
EXIT_IO = 4


class ConfigError(ValueError):
    pass


def fmt(x: float) -> str:
    return f"{float(x):.12g}"


@dataclass
class RunConfig:
    eps13: float
    eps24: float
    quad: DetectorQuad | None
    signal: str
    generator: str
    cutoff: int
    bins: int
    events: int
    seed: int
    grid: int
    out: str | None
    fmt: str
    parametric: bool


def _load_config_file(path: str) -> dict:
    values = {}
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ConfigError(f"bad config line: {line!r}")
            key, val = line.split("=", 1)
            values[key.strip()] = val.strip()
    return values


def build_config(args: argparse.Namespace) -> RunConfig:
    file_vals = _load_config_file(args.config) if args.config else {}

    def pick(name, default=None):
        cli = getattr(args, name.replace("-", "_"), None)
        if cli is not None:
            return cli
        return file_vals.get(name, default)

    e13, e24 = pick("e13"), pick("e24")
    singles = [pick(f"e{i}") for i in (1, 2, 3, 4)]
    quad = None
    if any(v is not None for v in singles):
        if e13 is not None or e24 is not None:
            raise ConfigError("give either --e1..--e4 or --e13/--e24, not both")
        if any(v is None for v in singles):
            raise ConfigError("all four of --e1..--e4 are required together")
        quad = DetectorQuad(*(float(v) for v in singles))
        e13, e24 = quad.pair_efficiencies()
    elif e13 is not None and e24 is not None:
        e13, e24 = float(e13), float(e24)
    elif e13 is None and e24 is None:
        e13 = e24 = 1.0
    else:
        raise ConfigError("--e13 and --e24 must be given together")
    check_efficiency(e13, "e13")
    check_efficiency(e24, "e24")

    cutoff = int(pick("cutoff", 64))
    if cutoff < 16:
        raise ConfigError("cutoff must be >= 16")
    return RunConfig(
        eps13=e13, eps24=e24, quad=quad,
        signal=str(pick("signal", "coherent:1,0")),
        generator=str(pick("generator", "auto")),
        cutoff=cutoff,
        bins=int(pick("bins", 64)),
        events=int(pick("events", 100000)),
        seed=int(pick("seed", 0)),
        grid=int(pick("grid", 100)),
        out=pick("out"),
        fmt=str(pick("format", "csv")),
        parametric=bool(getattr(args, "parametric", False)),
    )


def parse_signal(spec: str, cutoff: int) -> tuple[np.ndarray, complex | None]:
    """Signal state matrix plus its coherent amplitude when applicable."""
    kind, _, rest = spec.partition(":")
    if kind == "coherent":
        try:
            re_s, im_s = rest.split(",")
            z = complex(float(re_s), float(im_s))
        except ValueError as exc:
            raise ConfigError(f"bad coherent signal spec {spec!r}") from exc
        if abs(z) ** 2 + 8 * np.sqrt(abs(z) ** 2 + 1) > cutoff:
            raise NumericDomainError(
                f"cutoff {cutoff} too small for coherent amplitude |z|={abs(z):.3g}")
        return fock.projector(fock.coherent_state(z, cutoff)), z
    if kind == "number":
        n = int(rest)
        if n >= cutoff // 2:
            raise NumericDomainError(f"number state {n} outside trust radius")
        return fock.projector(fock.number_state(n, cutoff)), None
    raise ConfigError(f"unknown signal kind {kind!r}")


class NumericDomainError(ValueError):
    pass


def parse_generator(spec: str, cfg: RunConfig) -> DiagonalState:
    """Diagonal generator of the measured observable (post-smearing)."""
    kind, _, rest = spec.partition(":")
    if kind == "vacuum":
        lam = np.zeros(cfg.cutoff)
        lam[0] = 1.0
        return DiagonalState(lambdas=lam)
    if kind == "geometric":
        return geometric_state(float(rest), cfg.cutoff)
    if kind in ("squeezed", "auto"):
        a = solve_squeezing(cfg.eps13, cfg.eps24) if kind == "auto" else float(rest)
        sv = fock.squeezed_vacuum(a, cfg.cutoff)
        smear = GaussianSmear.from_efficiencies(cfg.eps13, cfg.eps24)
        state = convolve_state(smear, sv.projector(), nodes=81)
        return diagonal_part(state)
    raise ConfigError(f"unknown generator kind {kind!r}")


def _open_out(cfg: RunConfig, suffix: str = ""):
    if cfg.out is None:
        return sys.stdout, False
    try:
        return open(cfg.out + suffix, "w", encoding="utf-8", newline="\n"), True
    except OSError as exc:
        raise IOFailure(str(exc)) from exc


class IOFailure(OSError):
    pass


def _write_json(cfg: RunConfig, payload: dict, suffix: str = "") -> None:
    fh, close = _open_out(cfg, suffix)
    try:
        fh.write(json.dumps(payload, indent=2) + "\n")
    finally:
        if close:
            fh.close()


def _jsonable(x):
    if isinstance(x, float):
        return float(fmt(x))
    return x


def cmd_compensate(cfg: RunConfig) -> int:
    rep = compensate(cfg.eps13, cfg.eps24, quad=cfg.quad)
    payload = {k: _jsonable(v) for k, v in rep.as_dict().items()}
    _write_json(cfg, payload)
    return EXIT_OK


def cmd_phase_dist(cfg: RunConfig) -> int:
    rho, _ = parse_signal(cfg.signal, cfg.cutoff)
    rep = compensate(cfg.eps13, cfg.eps24)
    generators = {
        "ideal": DiagonalState(lambdas=np.eye(1, cfg.cutoff, 0).ravel()),
        "squeeze": geometric_state(rep.eps_eff, cfg.cutoff),
        "beamsplitter": geometric_state(min(cfg.eps13, cfg.eps24), cfg.cutoff),
    }
    dists = {}
    summary = {}
    for label, gen in generators.items():
        dist = phase_distribution(rho, phase_matrix(gen, 32))
        dists[label] = dist
        v, phi = min_variance(dist)
        summary[f"var_min_{label}"] = _jsonable(v)
        summary[f"ref_angle_{label}"] = _jsonable(phi)
    fh, close = _open_out(cfg)
    try:
        fh.write("alpha,p_ideal,p_squeeze,p_beamsplitter\n")
        grid = dists["ideal"].grid
        for i in range(grid.size):
            fh.write(",".join(fmt(v) for v in (
                grid[i], dists["ideal"].density[i], dists["squeeze"].density[i],
                dists["beamsplitter"].density[i])) + "\n")
    finally:
        if close:
            fh.close()
    _write_json(cfg, summary, suffix=".summary.json" if cfg.out else "")
    return EXIT_OK


def cmd_sweep(cfg: RunConfig) -> int:
    res = sweep(n=cfg.grid, lo=0.01, hi=1.0)
    fh, close = _open_out(cfg)
    try:
        if cfg.parametric:
            fh.write("a,gamma\n")
            for e13, e24, a, eeff, g in res["rows"]:
                fh.write(f"{fmt(a)},{fmt(g)}\n")
        else:
            fh.write("e13,e24,a,eps_eff,gamma\n")
            for row in res["rows"]:
                fh.write(",".join(fmt(v) for v in row) + "\n")
    finally:
        if close:
            fh.close()
    _write_json(cfg, {
        "max_gamma": _jsonable(res["max_gamma"]),
        "argmax": [[_jsonable(a), _jsonable(b)] for a, b in res["argmax"]],
    }, suffix=".summary.json" if cfg.out else "")
    return EXIT_OK


def cmd_sample(cfg: RunConfig) -> int:
    rho, z = parse_signal(cfg.signal, cfg.cutoff)
    gen = parse_generator(cfg.generator, cfg)
    smear = GaussianSmear.from_efficiencies(cfg.eps13, cfg.eps24)
    if cfg.generator.startswith(("squeezed", "auto")):
        # generator already includes the smearing
        dens_sigma, dens_smear = np.diag(gen.lambdas.astype(complex)), GaussianSmear(0.0, 0.0)
    else:
        dens_sigma, dens_smear = np.diag(gen.lambdas.astype(complex)), smear
    dens = phase_space_density(rho if z is None else None, dens_sigma,
                               dens_smear, coherent_z=z)
    batch = sample_events(dens, cfg.events, seed=cfg.seed)
    hist = bin_phases(batch, cfg.bins)

    fh, close = _open_out(cfg)
    try:
        fh.write("q,p\n")
        for q, p in batch.events:
            fh.write(f"{fmt(q)},{fmt(p)}\n")
    finally:
        if close:
            fh.close()
    hfh, close = _open_out(cfg, ".hist.csv" if cfg.out else "")
    try:
        hfh.write("bin_lo,bin_hi,count\n")
        for i in range(hist.n_bins):
            hfh.write(f"{fmt(hist.edges[i])},{fmt(hist.edges[i + 1])},{hist.counts[i]}\n")
    finally:
        if close:
            hfh.close()

    # the measured phase observable is generated by the smeared generator
    smeared_gen = diagonal_part(convolve_state(dens_smear, dens_sigma, nodes=81)) \
        if not dens_smear.is_ideal else gen
    dist = phase_distribution(rho, phase_matrix(smeared_gen, 32))
    chi2, pval = chi_square_vs_distribution(hist, dist)
    v_emp, _ = histogram_min_variance(hist)
    v_ana, _ = min_variance(dist)
    _write_json(cfg, {
        "events": cfg.events, "seed": cfg.seed, "bins": cfg.bins,
        "chi2": _jsonable(chi2), "p_value": _jsonable(pval),
        "var_min_empirical": _jsonable(v_emp),
        "var_min_analytic": _jsonable(v_ana),
        "acceptance_rate": _jsonable(batch.acceptance_rate),
    }, suffix=".report.json" if cfg.out else "")
    return EXIT_OK


def cmd_verify(cfg: RunConfig) -> int:
    results = run_all()
    fh, close = _open_out(cfg)
    try:
        for r in results:
            fh.write(json.dumps({"check": r.name, "passed": r.passed,
                                 "details": r.details}, default=str) + "\n")
    finally:
        if close:
            fh.close()
    return EXIT_OK if all(r.passed for r in results) else EXIT_VERIFY_FAIL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="eightport",
        description="Eight-port homodyne phase measurement with unequal "
                    "detector efficiencies")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, fn in (("compensate", cmd_compensate),
                     ("phase-dist", cmd_phase_dist),
                     ("sweep", cmd_sweep),
                     ("sample", cmd_sample),
                     ("verify", cmd_verify)):
        p = sub.add_parser(name)
        p.set_defaults(func=fn)
        for i in (1, 2, 3, 4):
            p.add_argument(f"--e{i}", type=float)
        p.add_argument("--e13", type=float)
        p.add_argument("--e24", type=float)
        p.add_argument("--signal")
        p.add_argument("--generator")
        p.add_argument("--cutoff", type=int)
        p.add_argument("--bins", type=int)
        p.add_argument("--events", type=int)
        p.add_argument("--seed", type=int)
        p.add_argument("--grid", type=int)
        p.add_argument("--out")
        p.add_argument("--format", dest="format", choices=["csv", "json"])
        p.add_argument("--config")
        if name == "sweep":
            p.add_argument("--parametric", action="store_true")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = build_config(args)
        return args.func(cfg)
    except (ConfigError, ValueError) as exc:
        if isinstance(exc, NumericDomainError):
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_NUMERIC
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except IOFailure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
