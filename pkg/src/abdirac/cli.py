"""Command-line entry point: ``abdirac {spectrum,persistent,packet,sweep,verify}``.

Tables go to stdout (or ``--out``) as CSV with a ``#`` header, or as JSON
with ``--json``. Exit codes: 0 success, 1 failed verification, 2 usage
error, 3 domain error, 4 accuracy error.
"""
from __future__ import annotations

import argparse
import math
import shlex
import sys
import warnings
from datetime import datetime, timezone
from typing import Optional, Sequence

import numpy as np

from . import __version__, cylinder, ring, verify, wavepacket
from .errors import AccuracyError, DomainError, UsageError
from .halfint import HalfInteger, nearest_half_odd
from .params import CylinderConfig, read_config
from .table import ResultTable

EXIT_OK, EXIT_FAILED, EXIT_USAGE, EXIT_DOMAIN, EXIT_ACCURACY = 0, 1, 2, 3, 4
SHORT_FLAG = "short-cylinder formula applicable"
SWEEP_VARIABLES = ("mu", "beta", "lambda", "aspect", "alpha", "n")
SWEEP_TARGETS = ("ring-current", "cylinder-current", "ring-persistent", "cylinder-persistent")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _half(text: str) -> HalfInteger:
    try:
        return HalfInteger.of(text)
    except DomainError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--mu", type=float, help="M c R / hbar")
    p.add_argument("--beta", type=float, help="flux parameter e B R^2 / 2")
    p.add_argument("--aspect", type=float, help="pi R / L (finite cylinder)")
    p.add_argument("--alpha", type=float, help="Fermi radius in the (aspect n, lambda) plane")
    p.add_argument("--ne", type=int, help="number of electrons on a ring")
    p.add_argument("--lambda-max", type=_half, help="largest |lambda|, e.g. 9/2")
    p.add_argument("--config", help="JSON or key=value file with mass_me, radius_m, field_T, fermi_eV")
    p.add_argument("--nodes", type=int, help="quadrature nodes (packet k grid)")
    p.add_argument("--out", help="write the table here instead of stdout")
    p.add_argument("--json", action="store_true", help="emit JSON instead of CSV")
    p.add_argument("--stamp", action="store_true", help="add a UTC timestamp to the header")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    ap = _Parser(prog="abdirac", description="Dirac fermions on Aharonov-Bohm rings and cylinders.")
    ap.add_argument("--version", action="version", version=f"abdirac {__version__}")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sp = sub.add_parser("spectrum", parents=[common], help="energies and currents per state")
    sp.add_argument("--geometry", choices=("ring", "cylinder"), default="ring")
    sp.add_argument("--n-max", type=int, default=1, help="largest longitudinal number (cylinder)")

    pp = sub.add_parser("persistent", parents=[common], help="ground-state persistent current")
    pp.add_argument("--geometry", choices=("ring", "cylinder"), default="ring")
    pp.add_argument("--lambda-f", type=_half, help="Fermi label on a ring, e.g. 999/2")
    pp.add_argument("--fermi-ratio", type=float, help="lambda_F = nearest half-odd integer to ratio * mu")
    pp.add_argument("--compare-approx", action="store_true", help="add closed-form and gap columns")

    kp = sub.add_parser("packet", parents=[common], help="wave-packet observables on an infinite cylinder")
    kp.add_argument("--lambda", dest="lam", type=_half, required=True)
    src = kp.add_mutually_exclusive_group(required=True)
    src.add_argument("--packet", help="CSV with k,re_a_plus,im_a_plus,re_a_minus,im_a_minus")
    src.add_argument("--gaussian", nargs=2, type=float, metavar=("K0", "WIDTH"))
    kp.add_argument("--plus-weight", type=float, default=1.0)
    kp.add_argument("--symmetric", action="store_true", help="even Gaussian pair at +-K0")
    kp.add_argument("--t", default="0", help="comma list or start:stop:count; write --t=-1,0 for negatives")
    kp.add_argument("--z", default="0", help="comma list or start:stop:count; write --z=-1,0 for negatives")

    wp = sub.add_parser("sweep", parents=[common], help="tabulate a target over one variable")
    wp.add_argument("--target", choices=SWEEP_TARGETS, required=True)
    wp.add_argument("--variable", choices=SWEEP_VARIABLES, required=True)
    wp.add_argument("--start", type=float, required=True)
    wp.add_argument("--stop", type=float, required=True)
    wp.add_argument("--count", type=int, required=True)
    wp.add_argument("--scale", choices=("lin", "log"), default="lin")
    wp.add_argument("--lambda", dest="lam", type=_half)
    wp.add_argument("--n", type=int)
    wp.add_argument("--lambda-f", type=_half)
    wp.add_argument("--fermi-ratio", type=float)

    vp = sub.add_parser("verify", help="run invariant suites")
    vp.add_argument("--suite", choices=("all",) + verify.SUITES, default="all")
    vp.add_argument("--json", action="store_true")
    return ap


# ---------------------------------------------------------------- inputs


def _resolve(args) -> None:
    """Fill mu, beta and alpha from --config where no flag was given."""
    if getattr(args, "config", None):
        phys = read_config(args.config)
        if args.mu is None:
            args.mu = phys.mu()
        if args.beta is None:
            args.beta = phys.beta()
        if args.alpha is None and phys.fermi_energy is not None:
            args.alpha = phys.alpha()
    if getattr(args, "beta", None) is None:
        args.beta = 0.0


def _need(args, *names: str) -> None:
    missing = [f"--{n.replace('_', '-')}" for n in names if getattr(args, n, None) is None]
    if missing:
        raise UsageError(f"{args.command} needs {', '.join(missing)}")


def _ring_filling(args, mu: float) -> ring.FermiFillingRing:
    given = [n for n in ("ne", "lambda_f", "fermi_ratio") if getattr(args, n, None) is not None]
    if len(given) != 1:
        raise UsageError("give exactly one of --ne, --lambda-f, --fermi-ratio")
    try:
        if args.ne is not None:
            return ring.FermiFillingRing(args.ne)
        if args.lambda_f is not None:
            return ring.FermiFillingRing.from_lambda_f(args.lambda_f)
    except DomainError as exc:
        raise UsageError(f"--{given[0].replace('_', '-')}: {exc}") from None
    if not args.fermi_ratio > 0 or not mu > 0:
        raise UsageError("--fermi-ratio needs a positive ratio and mu > 0")
    return ring.FermiFillingRing.from_ratio(mu, args.fermi_ratio)


def _grid(text: str, flag: str) -> np.ndarray:
    try:
        if ":" in text:
            a, b, n = text.split(":")
            return np.linspace(float(a), float(b), int(n))
        return np.array([float(v) for v in text.split(",")])
    except ValueError:
        raise UsageError(f"{flag}: expected a comma list or start:stop:count, got {text!r}") from None


def _header(args, argv: Sequence[str], **extra) -> dict:
    meta = {"abdirac": __version__, "command": shlex.join(["abdirac", *argv])}
    if args.stamp:
        meta["timestamp"] = datetime.now(timezone.utc).isoformat(timespec="seconds")
    meta.update({k: str(v) for k, v in extra.items()})
    return meta


# ---------------------------------------------------------------- commands


def cmd_spectrum(args, argv) -> ResultTable:
    _need(args, "mu", "lambda_max")
    if args.geometry == "ring":
        table = ResultTable(["lambda", "E", "I"], ["1", "E*R", "I*2piR"], meta=_header(args, argv))
        for row in ring.ring_spectrum(args.mu, args.beta, args.lambda_max):
            table.append([float(row.lam), row.energy_scaled, row.current_scaled])
        return table
    _need(args, "aspect")
    if args.n_max < 1:
        raise UsageError(f"--n-max must be >= 1, got {args.n_max}")
    cfg = CylinderConfig(args.mu, args.beta, args.aspect)
    table = ResultTable(
        ["n", "lambda", "sigma", "E", "I"], ["1", "1", "1", "E*R", "I*2piR"], meta=_header(args, argv)
    )
    for row in cylinder.cylinder_spectrum(cfg, args.n_max, args.lambda_max):
        table.append([row.n, float(row.lam), float(row.sigma), row.energy_scaled, row.current_scaled])
    return table


def _ring_persistent_row(mu, beta, filling, compare):
    res = ring.persistent_ring_exact(mu, filling, beta)
    row = [mu, float(filling.lambda_f), filling.n_electrons, res.c, res.i_over_imax]
    if compare:
        approx = ring.persistent_ring_approx(mu, filling.lambda_f)
        row += [approx, approx - res.c, (approx - res.c) / res.c]
    return row


def _cylinder_persistent_row(cfg, alpha, compare):
    occ = cylinder.enumerate_occupied(cfg, alpha)
    res = cylinder.persistent_finite_exact(cfg, occ)
    row = [cfg.mu, cfg.aspect, alpha, occ.n_f, occ.n_electrons, res.c, res.i_over_imax]
    if compare:
        if occ.empty:
            row += [math.nan, math.nan, math.nan]
        else:
            approx = cylinder.persistent_finite_approx(cfg.mu, occ)
            row += [approx, approx - res.c, (approx - res.c) / res.c]
    return row


_GAP_COLUMNS = (["c_approx", "gap", "rel_gap"], ["I/Imax", "I/Imax", "1"])


def cmd_persistent(args, argv) -> ResultTable:
    _need(args, "mu")
    compare = args.compare_approx
    if args.geometry == "ring":
        filling = _ring_filling(args, args.mu)
        cols = ["mu", "lambda_F", "N_e", "c", "I_over_Imax"]
        units = ["1", "1", "1", "I/Imax", "I/Imax"]
        if compare:
            cols, units = cols + _GAP_COLUMNS[0], units + _GAP_COLUMNS[1]
        table = ResultTable(cols, units, meta=_header(args, argv, summation="fsum, ascending lambda"))
        table.append(_ring_persistent_row(args.mu, args.beta, filling, compare))
        return table
    _need(args, "aspect", "alpha")
    cfg = CylinderConfig(args.mu, args.beta, args.aspect)
    cols = ["mu", "aspect", "alpha", "n_F", "N_e", "c", "I_over_Imax"]
    units = ["1", "1", "1", "1", "1", "I/Imax", "I/Imax"]
    if compare:
        cols, units = cols + _GAP_COLUMNS[0], units + _GAP_COLUMNS[1]
    short = cylinder.short_cylinder_regime(args.aspect, args.alpha)
    extra = {"regime": SHORT_FLAG if short else "general"}
    if short:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", cylinder.RegimeWarning)
            extra["c_short"] = repr(cylinder.persistent_short_cylinder(args.mu, args.aspect, args.alpha))
    table = ResultTable(cols, units, meta=_header(args, argv, **extra))
    table.append(_cylinder_persistent_row(cfg, args.alpha, compare))
    return table


def cmd_packet(args, argv) -> ResultTable:
    _need(args, "mu")
    cfg = CylinderConfig(args.mu, args.beta)
    if args.packet:
        spec = wavepacket.normalize_packet(wavepacket.read_packet_csv(args.packet))
        quad = f"simpson on {len(spec.k_grid)} input nodes"
    else:
        nodes = args.nodes or 1025
        k0, width = args.gaussian
        spec = wavepacket.gaussian_packet(k0, width, nodes=nodes, plus_weight=args.plus_weight, symmetric=args.symmetric)
        quad = f"simpson on {nodes} nodes"
    obs = wavepacket.packet_observables(cfg, args.lam, spec)
    meta = _header(
        args,
        argv,
        quadrature=quad,
        energy=repr(obs.energy_scaled),
        circular_current=repr(obs.circular_current_scaled),
        polarization=repr(obs.polarization),
    )
    table = ResultTable(["t", "z", "I3"], ["R", "R", "1/R"], meta=meta)
    for t in _grid(args.t, "--t"):
        for z in _grid(args.z, "--z"):
            table.append([float(t), float(z), wavepacket.longitudinal_current(cfg, args.lam, spec, t, z)])
    return table


def _sweep_values(args) -> np.ndarray:
    if args.count < 2:
        raise UsageError(f"--count must be >= 2, got {args.count}")
    if not args.start < args.stop:
        raise UsageError("--start must be smaller than --stop")
    if args.scale == "log":
        if args.start <= 0:
            raise UsageError("--scale log needs --start > 0")
        return np.geomspace(args.start, args.stop, args.count)
    return np.linspace(args.start, args.stop, args.count)


def _with(args, variable: str, value: float):
    ns = argparse.Namespace(**vars(args))
    if variable == "lambda":
        ns.lam = nearest_half_odd(value) if value >= 0 else -nearest_half_odd(-value)
    elif variable == "n":
        ns.n = int(round(value))
    else:
        setattr(ns, variable, float(value))
    return ns


def _sweep_row(target: str, a) -> list:
    if target == "ring-current":
        _need(a, "mu", "lam")
        return [ring.ring_energy(a.mu, a.beta, a.lam), ring.partial_current_ring(a.mu, a.beta, a.lam)]
    if target == "cylinder-current":
        _need(a, "mu", "aspect", "n", "lam")
        cfg = CylinderConfig(a.mu, a.beta, a.aspect)
        return [cylinder.energy_finite(cfg, a.n, a.lam), cylinder.chi_finite(cfg, a.n, a.lam)]
    if target == "ring-persistent":
        _need(a, "mu")
        return _ring_persistent_row(a.mu, a.beta, _ring_filling(a, a.mu), True)[1:]
    _need(a, "mu", "aspect", "alpha")
    return _cylinder_persistent_row(CylinderConfig(a.mu, a.beta, a.aspect), a.alpha, True)[3:]


_SWEEP_COLUMNS = {
    "ring-current": (["E", "I"], ["E*R", "I*2piR"]),
    "cylinder-current": (["E", "I"], ["E*R", "I*2piR"]),
    "ring-persistent": (["lambda_F", "N_e", "c", "I_over_Imax"] + _GAP_COLUMNS[0], ["1", "1", "I/Imax", "I/Imax"] + _GAP_COLUMNS[1]),
    "cylinder-persistent": (["n_F", "N_e", "c", "I_over_Imax"] + _GAP_COLUMNS[0], ["1", "1", "I/Imax", "I/Imax"] + _GAP_COLUMNS[1]),
}


def cmd_sweep(args, argv) -> ResultTable:
    values = _sweep_values(args)
    cols, units = _SWEEP_COLUMNS[args.target]
    var = args.variable
    table = ResultTable([var] + cols, ["1"] + units, meta=_header(args, argv, scale=args.scale))
    for v in values:
        a = _with(args, var, v)
        shown = float(a.lam) if var == "lambda" else (a.n if var == "n" else float(v))
        table.append([shown] + _sweep_row(args.target, a))
    return table


def cmd_verify(args) -> int:
    checks = verify.run(args.suite)
    if args.json:
        print(verify.report_json(checks))
    else:
        for c in checks:
            print(c.line())
        failed = sum(not c.passed for c in checks)
        print(f"{len(checks) - failed}/{len(checks)} invariants hold")
    return EXIT_OK if all(c.passed for c in checks) else EXIT_FAILED


COMMANDS = {"spectrum": cmd_spectrum, "persistent": cmd_persistent, "packet": cmd_packet, "sweep": cmd_sweep}


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = build_parser().parse_args(argv)
        if args.command == "verify":
            return cmd_verify(args)
        _resolve(args)
        table = COMMANDS[args.command](args, argv)
    except UsageError as exc:
        print(f"abdirac: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DomainError as exc:
        print(f"abdirac: domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except AccuracyError as exc:
        print(f"abdirac: accuracy error: {exc}", file=sys.stderr)
        return EXIT_ACCURACY
    except OSError as exc:
        print(f"abdirac: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    text = table.to_json() + "\n" if args.json else table.to_csv()
    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
