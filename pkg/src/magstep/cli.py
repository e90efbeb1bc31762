"""Command line front end.

Every subcommand writes a small CSV (or JSON for edge-profile) whose first
line is a config header `# magstep <version> config: {...}` carrying the
command and the options that produced the file, in canonical JSON. The
header round-trips through parse_config_header, so a result file is its
own provenance record; reruns with the same options are byte-identical,
which is why wall-clock timing goes to stderr and never into the file.

Grids are written lo:hi:n (inclusive endpoints, n points) or as a single
value; a grid that starts with a minus sign has to be attached to its
flag with '=' (as in --tau=-4:4:41) or the option parser reads it as a
flag. Angle inputs for gamma and nu are clamped down to pi/2 when they
overshoot by at most 5e-4, since grid endpoints are typically entered as
1.5708; the library itself stays strict.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys
import time
from contextlib import contextmanager
from dataclasses import dataclass
from typing import Dict, Optional

import numpy as np

try:
    from importlib.metadata import version as _pkg_version
    _VERSION = _pkg_version("magstep")
except Exception:
    _VERSION = "0.1.0"

from . import agmon, criterion, edgeprofile, fiber1d, reduced2d
from .eigencore import Resolution
from .errors import MagstepError, ParameterRange
# the package root re-exports the function zeta, shadowing the submodule
# of the same name, so pull what we need from the submodule directly
from .zeta import zeta as zeta_fn, zeta_profile

PI = np.pi
_ANGLE_SLACK = 5e-4


@dataclass(frozen=True)
class RunConfig:
    """Command name plus the options that shaped one output file."""

    command: str
    options: Dict[str, object]

    def header(self) -> str:
        blob = json.dumps({"command": self.command, "options": self.options},
                          sort_keys=True, separators=(",", ":"))
        return f"# magstep {_VERSION} config: {blob}"


def parse_config_header(line: str) -> RunConfig:
    """Recover the RunConfig from the first line of an output file."""
    m = re.match(r"#\s*magstep\s+\S+\s+config:\s*(\{.*\})\s*$", line.strip())
    if m is None:
        raise ParameterRange(f"not a config header: {line!r}")
    data = json.loads(m.group(1))
    return RunConfig(command=data["command"], options=data["options"])


def parse_grid(spec: str) -> np.ndarray:
    """lo:hi:n inclusive linspace, or a bare value."""
    parts = spec.split(":")
    try:
        if len(parts) == 1:
            return np.array([float(parts[0])])
        if len(parts) == 3:
            lo, hi, n = float(parts[0]), float(parts[1]), int(parts[2])
            if n < 1:
                raise ParameterRange(f"grid '{spec}': need at least one point")
            if n > 1 and hi <= lo:
                raise ParameterRange(f"grid '{spec}': hi must exceed lo")
            return np.linspace(lo, hi, n)
    except ValueError as exc:
        raise ParameterRange(f"grid '{spec}' is not numeric") from exc
    raise ParameterRange(f"grid '{spec}' is not 'value' or 'lo:hi:n'")


def _clamp_half_pi(values: np.ndarray) -> np.ndarray:
    over = (values > PI / 2) & (values <= PI / 2 + _ANGLE_SLACK)
    return np.where(over, PI / 2, values)


@contextmanager
def _out(path: Optional[str]):
    if path in (None, "-"):
        yield sys.stdout
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as f:
            yield f


def _resolution(args) -> Resolution:
    return Resolution(spacing=args.spacing, tol=args.tol,
                      max_iter=args.max_iter, seed=args.seed)


def _res_opts(args) -> Dict[str, object]:
    return {"spacing": args.spacing, "tol": args.tol,
            "max_iter": args.max_iter, "seed": args.seed}


def _params(args) -> reduced2d.StepFieldParams:
    gamma = float(_clamp_half_pi(np.array([args.gamma]))[0])
    return reduced2d.StepFieldParams(alpha=args.alpha, gamma=gamma, a=args.a)


def _fmt(x: float) -> str:
    return f"{x:.12g}"


def _cmd_degennes(args) -> int:
    cfg = RunConfig("degennes", {**_res_opts(args),
                                 "extrapolate": bool(args.extrapolate)})
    val, xi = fiber1d.theta0(_resolution(args), extrapolate=args.extrapolate)
    with _out(args.output) as f:
        f.write(cfg.header() + "\n")
        f.write("theta0,xi0\n")
        f.write(f"{_fmt(val)},{_fmt(xi)}\n")
    return 0


def _cmd_mu(args) -> int:
    cfg = RunConfig("mu", {**_res_opts(args), "a": args.a, "xi": args.xi})
    xis = parse_grid(args.xi)
    vals = fiber1d.mu_curve(args.a, xis, _resolution(args))
    with _out(args.output) as f:
        f.write(cfg.header() + "\n")
        f.write("xi,mu\n")
        for x, v in zip(xis, vals):
            f.write(f"{_fmt(x)},{_fmt(v)}\n")
    return 0


def _cmd_beta(args) -> int:
    cfg = RunConfig("beta", {**_res_opts(args), "a": args.a})
    res = _resolution(args)
    with _out(args.output) as f:
        f.write(cfg.header() + "\n")
        f.write("a,beta,xi_star\n")
        for a in parse_grid(args.a):
            val, xi = fiber1d.beta(float(a), res)
            tail = _fmt(xi) if xi is not None else ""
            f.write(f"{_fmt(a)},{_fmt(val)},{tail}\n")
    return 0


def _cmd_zeta(args) -> int:
    cfg = RunConfig("zeta", {**_res_opts(args), "nu": args.nu})
    nus = _clamp_half_pi(parse_grid(args.nu))
    res = _resolution(args)
    if nus.size > 1:
        vals = zeta_profile(nus, res)
    else:
        vals = np.array([zeta_fn(float(nus[0]), res)])
    with _out(args.output) as f:
        f.write(cfg.header() + "\n")
        f.write("nu,zeta\n")
        for n, v in zip(nus, vals):
            f.write(f"{_fmt(n)},{_fmt(v)}\n")
    return 0


def _cmd_essential(args) -> int:
    cfg = RunConfig("essential", {**_res_opts(args), "alpha": args.alpha,
                                  "gamma": args.gamma, "a": args.a,
                                  "tau": args.tau})
    params = _params(args)
    res = _resolution(args)
    taus = parse_grid(args.tau)
    with _out(args.output) as f:
        f.write(cfg.header() + "\n")
        f.write("tau,sigma_ess\n")
        for t in taus:
            f.write(f"{_fmt(t)},{_fmt(reduced2d.sigma_ess(params, float(t), res))}\n")
    return 0


def _cmd_band(args) -> int:
    cfg = RunConfig("band", {**_res_opts(args), "alpha": args.alpha,
                             "gamma": args.gamma, "a": args.a,
                             "tau": args.tau})
    params = _params(args)
    res = _resolution(args)
    if args.tau is None:
        prof = reduced2d.band_profile(params, resolution=res)
    else:
        taus = parse_grid(args.tau)
        if taus.size < 3:
            raise ParameterRange("band needs a tau grid with at least 3 points")
        prof = reduced2d.band_profile(params, tau_range=(float(taus[0]), float(taus[-1])),
                                      n_samples=int(taus.size), resolution=res)
    with _out(args.output) as f:
        f.write(cfg.header() + "\n")
        f.write(f"# lambda={_fmt(prof.lam)} tau_star={_fmt(prof.tau_star)} "
                f"margin={_fmt(prof.margin)} verdict={prof.verdict.value} "
                f"threshold={_fmt(prof.threshold)}\n")
        f.write("tau,sigma,sigma_ess,margin\n")
        for s in prof.samples:
            f.write(f"{_fmt(s.tau)},{_fmt(s.sigma)},{_fmt(s.sigma_ess)},"
                    f"{_fmt(s.margin)}\n")
    return 0


def _cmd_lambda(args) -> int:
    cfg = RunConfig("lambda", {**_res_opts(args), "alpha": args.alpha,
                               "gamma": args.gamma, "a": args.a,
                               "tau": args.tau})
    params = _params(args)
    res = _resolution(args)
    if args.tau is None:
        prof = reduced2d.band_profile(params, resolution=res)
    else:
        taus = parse_grid(args.tau)
        prof = reduced2d.band_profile(params, tau_range=(float(taus[0]), float(taus[-1])),
                                      n_samples=int(taus.size), resolution=res)
    with _out(args.output) as f:
        f.write(cfg.header() + "\n")
        f.write("lambda,tau_star,margin,verdict,threshold,beta_a,zeta_nu0\n")
        f.write(f"{_fmt(prof.lam)},{_fmt(prof.tau_star)},{_fmt(prof.margin)},"
                f"{prof.verdict.value},{_fmt(prof.threshold)},"
                f"{_fmt(prof.beta_a)},{_fmt(prof.zeta_nu0)}\n")
    return 0


def _cmd_region(args) -> int:
    cfg = RunConfig("region", {**_res_opts(args), "variant": args.variant,
                               "alpha": args.alpha, "gamma": args.gamma,
                               "a": args.a})
    alphas = parse_grid(args.alpha)
    gammas = _clamp_half_pi(parse_grid(args.gamma))
    avals = parse_grid(args.a)
    cells = criterion.region_scan(alphas, gammas, avals,
                                  variant=criterion.Variant(args.variant),
                                  resolution=_resolution(args),
                                  threads=args.threads)
    with _out(args.output) as f:
        f.write(cfg.header() + "\n")
        criterion.write_region_csv(cells, f)
    return 0


def _cmd_trial_check(args) -> int:
    cfg = RunConfig("trial-check", {**_res_opts(args), "alpha": args.alpha,
                                    "gamma": args.gamma, "a": args.a,
                                    "omega": args.omega, "level": args.level,
                                    "n_theta": args.n_theta})
    params = _params(args)
    spec = criterion.optimal_coefficients(params, args.omega)
    j_closed = criterion.trial_energy(params, spec, args.level)
    j_quad = criterion.trial_energy_quadrature(params, spec, args.level,
                                               n_theta=args.n_theta)
    p_val = criterion.criterion_quadratic(criterion.coefficient_A(params),
                                          args.level, 1.0 / args.omega)
    gap = abs(j_quad - j_closed) / max(1.0, abs(j_closed))
    with _out(args.output) as f:
        f.write(cfg.header() + "\n")
        f.write("J_closed,J_quadrature,P_quadratic,quad_rel_gap\n")
        f.write(f"{_fmt(j_closed)},{_fmt(j_quad)},{_fmt(p_val)},{_fmt(gap)}\n")
    return 0


def _cmd_agmon(args) -> int:
    cfg = RunConfig("agmon", {**_res_opts(args), "alpha": args.alpha,
                              "gamma": args.gamma, "a": args.a,
                              "tau": args.tau, "eta": args.eta,
                              "eta_frac": args.eta_frac})
    params = _params(args)
    res = _resolution(args)
    r = reduced2d.sigma(params, args.tau, res, certified=True)
    gap = r.sigma_ess - r.sigma
    eta = args.eta if args.eta is not None else args.eta_frac * float(np.sqrt(gap))
    rep = agmon.decay_report(r.eigenpair, r.grid, r.op,
                             sigma=r.sigma, sigma_ess=r.sigma_ess, eta=eta)
    with _out(args.output) as f:
        f.write(cfg.header() + "\n")
        f.write(f"# sigma={_fmt(r.sigma)} sigma_ess={_fmt(r.sigma_ess)} "
                f"eta={_fmt(rep.eta)} eta_bound={_fmt(rep.eta_bound)} "
                f"eta_fit={_fmt(rep.eta_fit)} r_squared={_fmt(rep.r_squared)} "
                f"weighted_energy={_fmt(rep.weighted_energy)}\n")
        agmon.write_shell_csv(rep, f)
    return 0


def _cmd_edge_profile(args) -> int:
    cfg = RunConfig("edge-profile", {**_res_opts(args), "a": args.a,
                                     "ball_cut": args.ball_cut,
                                     "geometry": args.geometry})
    if (args.ball_cut is None) == (args.geometry is None):
        raise ParameterRange("give exactly one of --ball-cut and --geometry")
    if args.ball_cut is not None:
        geom = edgeprofile.ball_cut_geometry(args.ball_cut)
    else:
        with open(args.geometry, "r", encoding="utf-8") as g:
            if args.geometry.endswith(".json"):
                geom = edgeprofile.geometry_from_json(g)
            else:
                geom = edgeprofile.geometry_from_csv(g)
    rep = edgeprofile.profile(geom, args.a, _resolution(args))
    payload = {"config": {"command": cfg.command, "options": cfg.options},
               "report": json.loads(_report_json(rep))}
    with _out(args.output) as f:
        json.dump(payload, f, indent=2, sort_keys=True)
        f.write("\n")
    return 0


def _report_json(rep) -> str:
    import io

    buf = io.StringIO()
    edgeprofile.write_report_json(rep, buf)
    return buf.getvalue()


def _add_res_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--spacing", type=float, default=None,
                   help="mesh spacing override (module default if omitted)")
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--max-iter", type=int, default=5000, dest="max_iter")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", "--output", default=None,
                   help="output file (stdout if omitted)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="magstep",
        description="Spectral analysis of half-plane Schrodinger operators "
                    "with a piecewise-constant magnetic field")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("degennes", help="de Gennes constant and its minimizer")
    p.add_argument("--extrapolate", action="store_true")
    _add_res_args(p)
    p.set_defaults(func=_cmd_degennes)

    p = sub.add_parser("mu", help="fiber band function mu_a on a xi grid")
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--xi", required=True, help="grid lo:hi:n or a value")
    _add_res_args(p)
    p.set_defaults(func=_cmd_mu)

    p = sub.add_parser("beta", help="infimum beta_a of the fiber band")
    p.add_argument("--a", required=True, help="grid lo:hi:n or a value")
    _add_res_args(p)
    p.set_defaults(func=_cmd_beta)

    p = sub.add_parser("zeta", help="half-plane tilted-field energy zeta(nu)")
    p.add_argument("--nu", required=True, help="grid lo:hi:n or a value")
    _add_res_args(p)
    p.set_defaults(func=_cmd_zeta)

    p = sub.add_parser("essential", help="essential spectrum floor per tau")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--gamma", type=float, required=True)
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--tau", required=True, help="grid lo:hi:n or a value")
    _add_res_args(p)
    p.set_defaults(func=_cmd_essential)

    p = sub.add_parser("band", help="band sigma(tau) with essential floor")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--gamma", type=float, required=True)
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--tau", default=None, help="grid lo:hi:n (default range if omitted)")
    _add_res_args(p)
    p.set_defaults(func=_cmd_band)

    p = sub.add_parser("lambda", help="band minimum with verdict")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--gamma", type=float, required=True)
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--tau", default=None, help="grid lo:hi:n (default range if omitted)")
    _add_res_args(p)
    p.set_defaults(func=_cmd_lambda)

    p = sub.add_parser("region", help="criterion scan over a parameter box")
    p.add_argument("--variant", choices=[v.value for v in criterion.Variant],
                   default=criterion.Variant.THETA0_LOW.value)
    p.add_argument("--alpha", required=True, help="grid lo:hi:n or a value")
    p.add_argument("--gamma", required=True, help="grid lo:hi:n or a value")
    p.add_argument("--a", required=True, help="grid lo:hi:n or a value")
    p.add_argument("--threads", type=int,
                   default=int(os.environ.get("MAGSTEP_THREADS", "0")) or None)
    _add_res_args(p)
    p.set_defaults(func=_cmd_region)

    p = sub.add_parser("trial-check",
                       help="closed trial energy against quadrature and P(1/omega)")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--gamma", type=float, required=True)
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--omega", type=float, required=True)
    p.add_argument("--level", type=float, required=True,
                   help="reference level Lambda")
    p.add_argument("--n-theta", type=int, default=2001, dest="n_theta")
    _add_res_args(p)
    p.set_defaults(func=_cmd_trial_check)

    p = sub.add_parser("agmon", help="decay shells of a certified eigenstate")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--gamma", type=float, required=True)
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--tau", type=float, required=True)
    p.add_argument("--eta", type=float, default=None)
    p.add_argument("--eta-frac", type=float, default=0.5, dest="eta_frac",
                   help="eta as a fraction of sqrt(sigma_ess - sigma)")
    _add_res_args(p)
    p.set_defaults(func=_cmd_agmon)

    p = sub.add_parser("edge-profile", help="localization along an edge curve")
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--ball-cut", type=int, default=None, dest="ball_cut",
                   help="built-in ball-cut equator with this many samples")
    p.add_argument("--geometry", default=None,
                   help="edge curve file (.csv with s,alpha,gamma or .json)")
    _add_res_args(p)
    p.set_defaults(func=_cmd_edge_profile)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    t0 = time.monotonic()
    try:
        rc = args.func(args)
    except MagstepError as exc:
        print(f"magstep: {exc}", file=sys.stderr)
        return 1
    print(f"magstep {args.command}: {time.monotonic() - t0:.1f}s",
          file=sys.stderr)
    return rc


if __name__ == "__main__":
    raise SystemExit(main())
