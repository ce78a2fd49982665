"""Command-line interface.

Subcommands: derive, cov, psd, simulate, validate, figures-data.
Configuration precedence is flags > config file (flat ``key = value``
lines) > built-in defaults. Exit codes: 0 ok, 1 failed validation
check, 2 invalid input, 3 numerical failure.

FBM2D_THREADS caps the BLAS/OpenMP thread pools (set before numpy
spins them up; best effort otherwise).
"""

from __future__ import annotations

import argparse
import math
import os
import sys

if "FBM2D_THREADS" in os.environ:  # must precede the first numpy import
    for _v in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS"):
        os.environ.setdefault(_v, os.environ["FBM2D_THREADS"])

import numpy as np

from . import __version__
from . import covariance as cov
from . import estimate as est
from . import model_core as mc
from . import simulate as sim
from . import spectral as sp
from . import validation
from ._export import write_table
from .errors import CovarianceNotPSDError, DomainError, EmbeddingError

_DEFAULTS = {
    "h1": 0.5,
    "h2": 0.5,
    "rho": 0.0,
    "sigma1": 1.0,
    "sigma2": 1.0,
    "variant": "causal",
    "n": 4096,
    "num_traj": 1000,
    "delta": 1.0,
    "seed": 0,
    "freq_min": 0.01,
    "freq_max": math.pi,
    "freq_points": 64,
    "lag_max": 20,
    "format": "csv",
    "horizon": None,
    "out": None,
}


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="flat key = value config file")
    p.add_argument("--h1", type=float)
    p.add_argument("--h2", type=float)
    p.add_argument("--rho", type=float)
    p.add_argument("--sigma1", type=float)
    p.add_argument("--sigma2", type=float)
    p.add_argument("--variant", choices=["causal", "wb"])
    p.add_argument("--n", type=int)
    p.add_argument("--num-traj", type=int, dest="num_traj")
    p.add_argument("--delta", type=float)
    p.add_argument("--seed", type=int)
    p.add_argument("--freq-min", type=float, dest="freq_min")
    p.add_argument("--freq-max", type=float, dest="freq_max")
    p.add_argument("--freq-points", type=int, dest="freq_points")
    p.add_argument("--lag-max", type=int, dest="lag_max")
    p.add_argument("--out", help="output file (or directory for simulate/figures-data)")
    p.add_argument("--format", choices=["csv", "json"])


def _read_config(path: str) -> dict:
    cfg = {}
    with open(path) as fh:
        for raw in fh:
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise DomainError(f"bad config line: {raw.strip()!r}")
            key, val = (s.strip() for s in line.split("=", 1))
            cfg[key.replace("-", "_")] = val
    return cfg


def _effective(args: argparse.Namespace) -> dict:
    eff = dict(_DEFAULTS)
    if getattr(args, "config", None):
        raw = _read_config(args.config)
        for k, v in raw.items():
            if k not in eff:
                raise DomainError(f"unknown config key {k!r}")
            eff[k] = v if _DEFAULTS[k] is None else type(_DEFAULTS[k])(v)
    for k in eff:
        v = getattr(args, k, None)
        if v is not None:
            eff[k] = v
    return eff


def _params(eff: dict) -> mc.ModelParams:
    return mc.ModelParams(
        h1=eff["h1"],
        h2=eff["h2"],
        rho=eff["rho"],
        sigma1=eff["sigma1"],
        sigma2=eff["sigma2"],
        variant=mc.Variant.from_string(eff["variant"]),
    )


def _meta(eff: dict, command: str) -> dict:
    meta = {"fbm2d": __version__, "command": command}
    for k in ("h1", "h2", "rho", "sigma1", "sigma2", "variant", "seed", "delta"):
        meta[k] = eff[k]
    return meta


_JK = [(1, 1), (1, 2), (2, 1), (2, 2)]


def cmd_derive(eff: dict) -> int:
    rows = []
    for variant in mc.Variant:
        p = mc.ModelParams(
            h1=eff["h1"], h2=eff["h2"], rho=eff["rho"],
            sigma1=eff["sigma1"], sigma2=eff["sigma2"], variant=variant,
        )
        d = mc.derive(p)
        rows.append(
            [variant.value, d.a1, d.a2, d.rho12, d.eta12, int(d.log_weight)]
            + [x for jk in _JK for x in (d.cmat[jk[0] - 1, jk[1] - 1].real,
                                         d.cmat[jk[0] - 1, jk[1] - 1].imag)]
        )
    columns = ["variant", "a1", "a2", "rho12", "eta12", "log_weight"] + [
        f"c{j}{k}_{part}" for (j, k) in _JK for part in ("re", "im")
    ]
    print(f"derived constants for H1={eff['h1']}, H2={eff['h2']}, rho={eff['rho']}:")
    for r in rows:
        print(
            f"  {r[0]:>6s}: a1={r[1]:.10g} a2={r[2]:.10g} "
            f"rho12={r[3]:.10g} eta12={r[4]:.10g}"
        )
    if eff.get("out"):
        write_table(eff["out"], _meta(eff, "derive"), columns, rows, eff["format"])
    return 0


def cmd_cov(eff: dict) -> int:
    p = _params(eff)
    lags = np.arange(-eff["lag_max"], eff["lag_max"] + 1, dtype=float)
    rows = []
    for j, k in _JK:
        vals = cov.increment_cov(lags * eff["delta"], eff["delta"], j, k, p)
        rows += [[h, f"{j}{k}", v, 0.0] for h, v in zip(lags, vals)]
    out = eff.get("out") or "cov.csv"
    write_table(out, _meta(eff, "cov"), ["h", "jk", "re", "im"], rows, eff["format"])
    print(f"wrote increment covariance table to {out}")
    return 0


def cmd_psd(eff: dict, kind: str) -> int:
    p = _params(eff)
    d = mc.derive(p)
    freqs = np.logspace(
        math.log10(eff["freq_min"]), math.log10(eff["freq_max"]), eff["freq_points"]
    )
    rows = []
    if kind == "increment":
        for j, k in _JK:
            for f in freqs:
                v = sp.increment_psd(f, j, k, d)
                a = sp.increment_psd_asymptote(f, j, k, d)
                rows.append([f, f"{j}{k}", v.real, v.imag, a.real, a.imag])
        columns = ["f", "jk", "re", "im", "asymptote_re", "asymptote_im"]
    else:
        T = eff["horizon"] or eff["n"] * eff["delta"]
        grid = sp.FreqGrid(freqs=freqs, horizon_T=float(T))
        for j, k in _JK:
            for f, om in zip(freqs, grid.omega_tilde):
                v = sp.ensemble_psd(om, grid.horizon_T, j, k, p, d)
                a = sp.ensemble_psd_asymptote(om, grid.horizon_T, j, k, p, d)
                rows.append([f, om, f"{j}{k}", v.real, v.imag, a.real, a.imag])
        columns = ["f", "omega_tilde", "jk", "re", "im", "asymptote_re", "asymptote_im"]
    out = eff.get("out") or f"psd_{kind}.csv"
    write_table(out, {**_meta(eff, f"psd-{kind}"), "n_terms": 10000}, columns, rows,
                eff["format"])
    print(f"wrote {kind} spectrum table to {out}")
    return 0


def cmd_simulate(eff: dict, raw_paths: bool) -> int:
    p = _params(eff)
    outdir = eff.get("out") or "simulate-out"
    os.makedirs(outdir, exist_ok=True)
    emb = sim.build_embedding(p, eff["n"], eff["delta"])
    ens = sim.sample_paths(
        p, n=eff["n"], N=eff["num_traj"], delta=eff["delta"], seed=eff["seed"],
        embedding=emb,
    )
    meta = _meta(eff, "simulate")
    meta.update(
        n=eff["n"], num_traj=eff["num_traj"],
        embedding_m=emb.m, embedding_min_eigenvalue=f"{emb.min_eigenvalue:.6e}",
        embedding_clip_fraction=f"{emb.clip_fraction:.3e}",
    )
    # ensemble summary: mean/variance per component at a few times
    marks = sorted({1, eff["n"] // 4, eff["n"] // 2, eff["n"]})
    rows = []
    for i in marks:
        t = i * eff["delta"]
        for j in (1, 2):
            x = ens.component(j)[:, i]
            rows.append([t, j, float(x.mean()), float(x.var(ddof=1))])
    write_table(
        os.path.join(outdir, "summary.csv"), meta,
        ["t", "component", "mean", "variance"], rows, eff["format"],
    )
    # increment covariance estimates vs theory
    lag_max = min(eff["lag_max"], eff["n"] - 1)
    lags = np.arange(-lag_max, lag_max + 1)
    rows = []
    for j, k in _JK:
        theory = cov.increment_cov(lags * eff["delta"], eff["delta"], j, k, p)
        estv, se = est.sample_cross_cov(ens, j, k, lags)
        rows += [
            [int(h), f"{j}{k}", tv, ev, sv]
            for h, tv, ev, sv in zip(lags, theory, estv, se)
        ]
    write_table(
        os.path.join(outdir, "cov_estimate.csv"), meta,
        ["h", "jk", "theory", "estimate", "se"], rows, eff["format"],
    )
    # increment spectrum estimates vs theory on a log-thinned Fourier grid
    spec = est.ensemble_increment_periodogram(ens)
    d = mc.derive(p)
    idx = np.unique(
        np.round(np.logspace(0, math.log10(len(spec.freqs) - 1), 160)).astype(int)
    )
    rows = []
    for j, k in _JK:
        vals = spec.pair(j, k)[idx]
        ses = spec.pair_se(j, k)[idx]
        for f, v, s in zip(spec.freqs[idx], vals, ses):
            t = sp.increment_psd(f, j, k, d, n_terms=2000)
            rows.append([f, f"{j}{k}", t.real, t.imag, v.real, v.imag, s.real, s.imag])
    write_table(
        os.path.join(outdir, "psd_estimate.csv"), meta,
        ["f", "jk", "theory_re", "theory_im", "est_re", "est_im", "se_re", "se_im"],
        rows, eff["format"],
    )
    if raw_paths:
        rows = []
        for traj in range(ens.n_traj):
            for i in range(eff["n"] + 1):
                rows.append(
                    [traj, i * eff["delta"], ens.data[traj, i, 0], ens.data[traj, i, 1]]
                )
        write_table(
            os.path.join(outdir, "paths.csv"), meta,
            ["trajectory", "t", "z1", "z2"], rows, eff["format"],
        )
    print(
        f"simulated {ens.n_traj} trajectories (n={eff['n']}, m={emb.m}, "
        f"min eig {emb.min_eigenvalue:.3e}, clipped {emb.clip_fraction:.2e}); "
        f"tables in {outdir}"
    )
    return 0


def cmd_validate(eff: dict, checks: list[str] | None, quick: bool,
                 export_figures: str | None) -> int:
    scale = validation.ValidationScale.quick() if quick else validation.ValidationScale()
    scale.seed = eff["seed"] if eff["seed"] else scale.seed
    cache: dict = {}
    results = validation.run_checks(
        names=checks, scale=scale, cache=cache, report=lambda r: print(r.line(), flush=True)
    )
    n_fail = sum(not r.passed for r in results)
    print(f"{len(results) - n_fail}/{len(results)} checks passed")
    if export_figures:
        _write_figure_data(eff, export_figures, scale, cache)
    return 0 if n_fail == 0 else 1


def _write_figure_data(eff: dict, outdir: str, scale, cache: dict) -> None:
    """Data files behind the standard figure set (curves + MC markers)."""
    os.makedirs(outdir, exist_ok=True)
    fmt = "csv"
    # correlation transfer curves
    rows = []
    for h1, h2 in [(0.2, 0.2), (0.2, 0.45), (0.2, 0.7), (0.5, 0.7)]:
        for variant in mc.Variant:
            for rho in np.linspace(-1, 1, 81):
                p = mc.ModelParams(h1=h1, h2=h2, rho=float(rho), variant=variant)
                rows.append(
                    [h1, h2, variant.value, rho,
                     mc.cross_correlation(p), mc.asymmetry(p)]
                )
    write_table(
        os.path.join(outdir, "rho_curves.csv"),
        {"fbm2d": __version__, "command": "figures-data"},
        ["h1", "h2", "variant", "rho", "rho12", "eta12"], rows, fmt,
    )
    # cross-covariance panels and increment-spectrum panels
    lags = np.arange(-20, 21)
    for h1, h2 in validation.H_PAIRS:
        for variant in mc.Variant:
            rho = validation._rho_for_target_rho12(h1, h2, variant)
            p = mc.ModelParams(h1=h1, h2=h2, rho=rho, variant=variant)
            d = mc.derive(p)
            ens = validation._mc_ensemble(cache, p, scale.n_mc, scale.N_mc, scale.seed)
            meta = {
                "fbm2d": __version__, "command": "figures-data",
                "h1": h1, "h2": h2, "rho": rho, "variant": variant.value,
                "n": ens.n, "num_traj": ens.n_traj, "seed": scale.seed,
            }
            tag = f"{variant.value}_{h1}_{h2}"
            theory = cov.increment_cov(lags.astype(float), 1.0, 1, 2, p)
            estv, se = est.sample_cross_cov(ens, 1, 2, lags)
            write_table(
                os.path.join(outdir, f"cov_{tag}.csv"), meta,
                ["h", "analytic", "estimate", "se"],
                [[int(h), tv, ev, sv] for h, tv, ev, sv in zip(lags, theory, estv, se)],
                fmt,
            )
            spec = est.ensemble_increment_periodogram(ens)
            idx = np.unique(
                np.round(
                    np.logspace(0, math.log10(len(spec.freqs) - 1), 120)
                ).astype(int)
            )
            rows = []
            vals = spec.pair(1, 2)[idx]
            ses = spec.pair_se(1, 2)[idx]
            for f, v, s in zip(spec.freqs[idx], vals, ses):
                t = sp.increment_psd(f, 1, 2, d, n_terms=2000)
                a = sp.increment_psd_asymptote(f, 1, 2, d)
                rows.append(
                    [f, t.real, t.imag, a.real, a.imag,
                     v.real, v.imag, s.real, s.imag]
                )
            write_table(
                os.path.join(outdir, f"psd_increment_{tag}.csv"), meta,
                ["f", "analytic_re", "analytic_im", "asymptote_re", "asymptote_im",
                 "est_re", "est_im", "se_re", "se_im"],
                rows, fmt,
            )
            # process-spectrum panel with tail asymptote
            T = float(ens.n)
            omegas = np.logspace(math.log10(5.0), math.log10(200.0), 40)
            pspec = est.ensemble_process_periodogram(ens, omegas / T)
            rows = []
            for om, v, s in zip(omegas, pspec.pair(1, 2), pspec.pair_se(1, 2)):
                t = sp.ensemble_psd(om, T, 1, 2, p, d)
                a = sp.ensemble_psd_asymptote(om, T, 1, 2, p, d)
                rows.append(
                    [om / T, om, t.real, t.imag, a.real, a.imag,
                     v.real, v.imag, s.real, s.imag]
                )
            write_table(
                os.path.join(outdir, f"psd_process_{tag}.csv"),
                {**meta, "horizon_T": T},
                ["f", "omega_tilde", "analytic_re", "analytic_im",
                 "asymptote_re", "asymptote_im",
                 "est_re", "est_im", "se_re", "se_im"],
                rows, fmt,
            )


def cmd_figures_data(eff: dict, quick: bool) -> int:
    outdir = eff.get("out") or "figures-data"
    scale = validation.ValidationScale.quick() if quick else validation.ValidationScale()
    scale.n_mc = eff["n"] if eff["n"] != _DEFAULTS["n"] else scale.n_mc
    scale.N_mc = (
        eff["num_traj"] if eff["num_traj"] != _DEFAULTS["num_traj"] else scale.N_mc
    )
    scale.seed = eff["seed"] if eff["seed"] else scale.seed
    _write_figure_data(eff, outdir, scale, {})
    print(f"wrote figure data to {outdir}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="fbm2d",
        description="2D fractional Brownian motion: simulation and analysis",
    )
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)
    for name, hlp in [
        ("derive", "print/export derived model constants for both variants"),
        ("cov", "export exact increment covariance over a lag grid"),
        ("psd", "export analytic spectra and asymptotes over a frequency grid"),
        ("simulate", "sample an ensemble and export estimator tables"),
        ("validate", "run the acceptance validation suite"),
        ("figures-data", "export the CSV set consumed by the figure scripts"),
    ]:
        p = sub.add_parser(name, help=hlp)
        _add_common(p)
        if name == "psd":
            p.add_argument("--kind", choices=["increment", "process"],
                           default="increment")
            p.add_argument("--horizon", type=float, help="observation time T")
        if name == "simulate":
            p.add_argument("--raw-paths", action="store_true",
                           help="also export every trajectory")
        if name == "validate":
            p.add_argument("--quick", action="store_true",
                           help="reduced, non-normative Monte Carlo sizes")
            p.add_argument("--checks", help="comma-separated subset of checks")
            p.add_argument("--export-figures", dest="export_figures",
                           help="also write figure data to this directory")
        if name == "figures-data":
            p.add_argument("--quick", action="store_true")
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        eff = _effective(args)
        if args.command == "derive":
            return cmd_derive(eff)
        if args.command == "cov":
            return cmd_cov(eff)
        if args.command == "psd":
            return cmd_psd(eff, args.kind)
        if args.command == "simulate":
            return cmd_simulate(eff, args.raw_paths)
        if args.command == "validate":
            checks = args.checks.split(",") if args.checks else None
            return cmd_validate(eff, checks, args.quick, args.export_figures)
        if args.command == "figures-data":
            return cmd_figures_data(eff, args.quick)
        raise DomainError(f"unknown command {args.command}")
    except (DomainError, ValueError, KeyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (EmbeddingError, CovarianceNotPSDError, ArithmeticError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
