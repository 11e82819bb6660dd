"""Command-line front end for the frozen-argument spectral toolbox.

Exit codes: 0 success, 2 file/parse error, 3 precondition or configuration
error, 4 numerical/convergence failure, 5 tolerance failure in a check.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass, field

import click
import numpy as np

from .basis import riesz_report
from .core import (
    FrozenConfig,
    Potential,
    compute_alpha,
    rel_l2_error,
    snap_index,
)
from .errors import (
    ConfigError,
    FileFormatError,
    FrozenHillError,
    PoleInTailError,
    RootIsolationError,
)
from .forward import compute_spectrum, verify_asymptotics
from .inverse import (
    TwoSpectra,
    algorithm1,
    algorithm2,
    algorithm3,
    algorithm4,
    check_growth,
    isobispectral_family,
    isospectral_family,
)
from . import io as fio

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_PRECONDITION = 3
EXIT_NUMERIC = 4
EXIT_TOLERANCE = 5


@dataclass
class JobConfig:
    """Validated bundle of CLI parameters for one command invocation."""

    command: str
    config: FrozenConfig | None = None
    grid_n: int = 1024
    m_eigs: int = 40
    k_terms: int = 60
    n_trunc: int = 60
    tol: float = 1e-3
    in_path: str | None = None
    in2_path: str | None = None
    out_path: str | None = None
    op_paths: tuple = field(default_factory=tuple)

    def validate(self):
        for name, value in (
            ("grid", self.grid_n),
            ("m", self.m_eigs),
            ("kterms", self.k_terms),
            ("ntrunc", self.n_trunc),
        ):
            if value < 1:
                raise ConfigError(f"--{name} must be positive, got {value}")
        if self.config is not None:
            snap_index(self.config.a, self.grid_n)
        return self


def _fail(code: int, exc: Exception):
    click.echo(f"error: {exc}", err=True)
    sys.exit(code)


def _guarded(fn):
    """Run a command body, mapping library exceptions onto exit codes."""
    try:
        fn()
    except FileFormatError as exc:
        _fail(EXIT_PARSE, exc)
    except (FileNotFoundError, OSError) as exc:
        _fail(EXIT_PARSE, exc)
    except ConfigError as exc:
        _fail(EXIT_PRECONDITION, exc)
    except (RootIsolationError, PoleInTailError) as exc:
        _fail(EXIT_NUMERIC, exc)
    except FrozenHillError as exc:
        _fail(EXIT_NUMERIC, exc)


def _gamma_option(text: str | None) -> complex | None:
    if text is None:
        return None
    return fio.parse_complex(text, "gamma")


def _resolve_config(file_config: FrozenConfig, a: float | None, gamma: str | None):
    new_a = file_config.a if a is None else a
    new_gamma = file_config.gamma if gamma is None else _gamma_option(gamma)
    return FrozenConfig(a=new_a, gamma=new_gamma)


def _print_spectrum_summary(spec, limit: int = 8):
    res = verify_asymptotics(spec)
    click.echo(f"{'n':>4} {'Re lambda':>22} {'Im lambda':>22} {'|kappa_n|':>12}")
    for n in range(min(limit, len(spec))):
        lam = spec.values[n]
        click.echo(f"{n:>4} {lam.real:>22.12g} {lam.imag:>22.12g} {abs(res.kappa[n]):>12.3e}")
    if len(spec) > limit:
        click.echo(f"  ... {len(spec) - limit} more")
    click.echo(
        f"residual tail: first-quarter energy {res.first_quarter_energy:.3e}, "
        f"last-quarter {res.last_quarter_energy:.3e}, decaying: {res.tail_ok}"
    )


@click.group()
def main():
    """Spectra of Hill-type operators with frozen argument, forwards and backwards."""


@main.command()
@click.option("--in", "in_path", required=True, type=click.Path(), help="potential file")
@click.option("--a", type=float, default=None, help="frozen point override")
@click.option("--gamma", type=str, default=None, help="coupling override, re,im")
@click.option("--m", "m_eigs", type=int, default=40, show_default=True, help="eigenvalue count")
@click.option("--out", "out_path", type=click.Path(), default=None, help="spectrum file")
def forward(in_path, a, gamma, m_eigs, out_path):
    """Compute the first M eigenvalues of a sampled potential."""

    def body():
        q, file_cfg = fio.read_potential(in_path)
        cfg = _resolve_config(file_cfg, a, gamma)
        job = JobConfig(
            command="forward", config=cfg, grid_n=q.n, m_eigs=m_eigs
        ).validate()
        spec = compute_spectrum(q, cfg, job.m_eigs)
        _print_spectrum_summary(spec)
        if out_path:
            fio.write_spectrum(out_path, spec)
            click.echo(f"wrote {out_path}")

    _guarded(body)


@main.command()
@click.option("--in", "in_path", required=True, type=click.Path(), help="spectrum file")
@click.option("--a", type=float, default=0.0, show_default=True, help="frozen point")
@click.option("--kterms", type=int, default=60, show_default=True)
@click.option("--ntrunc", type=int, default=60, show_default=True)
@click.option("--grid", "grid_n", type=int, default=1024, show_default=True)
@click.option("--op", "op_path", type=click.Path(), default=None,
              help="operator file (required for gamma = +-1)")
@click.option("--out", "out_path", type=click.Path(), default=None, help="potential file")
def inverse1(in_path, a, kterms, ntrunc, grid_n, op_path, out_path):
    """Reconstruct the potential from one spectrum."""

    def body():
        spec = fio.read_spectrum(in_path, a=a)
        cfg = spec.config
        job = JobConfig(
            command="inverse1", config=cfg, grid_n=grid_n, k_terms=kterms, n_trunc=ntrunc
        ).validate()
        if cfg.gamma in (1, -1):
            if op_path is None:
                raise ConfigError(
                    "gamma = +-1 is the degenerate case: supply --op with the operator "
                    "coupling the two halves of the shifted potential"
                )
            k_op = fio.read_operator(op_path)
            q = algorithm2(spec, cfg, k_op, job.k_terms, job.n_trunc, job.grid_n)
        else:
            q = algorithm1(spec, cfg, job.k_terms, job.n_trunc, job.grid_n)
        click.echo(f"reconstructed potential on n={q.n} grid, L2 norm {q.l2_norm():.6g}")
        if out_path:
            fio.write_potential(out_path, q, cfg)
            click.echo(f"wrote {out_path}")

    _guarded(body)


@main.command()
@click.option("--in", "in_path", required=True, type=click.Path(), help="periodic spectrum")
@click.option("--in2", "in2_path", required=True, type=click.Path(), help="antiperiodic spectrum")
@click.option("--a", type=float, default=0.0, show_default=True, help="frozen point")
@click.option("--kterms", type=int, default=60, show_default=True)
@click.option("--ntrunc", type=int, default=60, show_default=True)
@click.option("--grid", "grid_n", type=int, default=1024, show_default=True)
@click.option("--op", "op_path", type=click.Path(), default=None,
              help="operator file (required for interior a)")
@click.option("--out", "out_path", type=click.Path(), default=None, help="potential file")
def inverse2(in_path, in2_path, a, kterms, ntrunc, grid_n, op_path, out_path):
    """Reconstruct the potential from the periodic/antiperiodic spectra pair."""

    def body():
        spec0 = fio.read_spectrum(in_path, a=a)
        spec1 = fio.read_spectrum(in2_path, a=a)
        job = JobConfig(
            command="inverse2",
            config=FrozenConfig(a=a, gamma=1.0),
            grid_n=grid_n,
            k_terms=kterms,
            n_trunc=ntrunc,
        ).validate()
        mirrored = a > 0.5
        eff_a = 1.0 - a if mirrored else a
        two = TwoSpectra(spec0=spec0, spec1=spec1, a=eff_a)
        if eff_a in (0.0, 1.0):
            q = algorithm3(two, job.k_terms, job.n_trunc, job.grid_n)
        else:
            if op_path is None:
                raise ConfigError(
                    "interior frozen point needs --op: the spectra pair determines the "
                    "potential only up to its profile on one side of a"
                )
            p_op = fio.read_operator(op_path)
            q = algorithm4(two, p_op, job.k_terms, job.n_trunc, job.grid_n)
        if mirrored:
            q = Potential(q.samples[::-1].copy())
        click.echo(f"reconstructed potential on n={q.n} grid, L2 norm {q.l2_norm():.6g}")
        if out_path:
            fio.write_potential(out_path, q, FrozenConfig(a=a, gamma=1.0))
            click.echo(f"wrote {out_path}")

    _guarded(body)


@main.command()
@click.option("--in", "in_path", required=True, type=click.Path(), help="potential file")
@click.option("--a", type=float, default=None, help="frozen point override")
@click.option("--gamma", type=str, default=None, help="coupling override, re,im")
@click.option("--m", "m_eigs", type=int, default=60, show_default=True)
@click.option("--kterms", type=int, default=60, show_default=True)
@click.option("--ntrunc", type=int, default=60, show_default=True)
@click.option("--tol", type=float, default=1e-3, show_default=True)
@click.option("--op", "op_path", type=click.Path(), default=None,
              help="operator file for the degenerate couplings")
@click.option("--out", "out_path", type=click.Path(), default=None,
              help="reconstructed potential file")
def roundtrip(in_path, a, gamma, m_eigs, kterms, ntrunc, tol, op_path, out_path):
    """Forward-solve a potential, reconstruct it, and report the relative L2 error."""

    def body():
        q, file_cfg = fio.read_potential(in_path)
        cfg = _resolve_config(file_cfg, a, gamma)
        job = JobConfig(
            command="roundtrip",
            config=cfg,
            grid_n=q.n,
            m_eigs=m_eigs,
            k_terms=kterms,
            n_trunc=ntrunc,
            tol=tol,
        ).validate()
        spec = compute_spectrum(q, cfg, job.m_eigs)
        if cfg.gamma in (1, -1):
            if op_path is None:
                raise ConfigError("gamma = +-1 roundtrip needs --op")
            k_op = fio.read_operator(op_path)
            q_rec = algorithm2(spec, cfg, k_op, job.k_terms, job.n_trunc, q.n)
        else:
            q_rec = algorithm1(spec, cfg, job.k_terms, job.n_trunc, q.n)
        err = rel_l2_error(q_rec, q)
        status = "PASS" if err <= tol else "FAIL"
        click.echo(f"relative L2 reconstruction error: {err:.6e}  [{status}, tol {tol:g}]")
        if out_path:
            fio.write_potential(out_path, q_rec, cfg)
            click.echo(f"wrote {out_path}")
        if err > tol:
            sys.exit(EXIT_TOLERANCE)

    _guarded(body)


@main.command()
@click.option("--in", "in_path", required=True, type=click.Path(), help="spectrum file")
@click.option("--a", type=float, default=0.0, show_default=True)
@click.option("--op", "op_paths", type=click.Path(), multiple=True, required=True,
              help="constant-operator profile file(s), one family member each")
@click.option("--kterms", type=int, default=60, show_default=True)
@click.option("--ntrunc", type=int, default=60, show_default=True)
@click.option("--grid", "grid_n", type=int, default=1024, show_default=True)
@click.option("--out", "out_path", type=click.Path(), default=None,
              help="output prefix; members go to PREFIX.<i>.pot")
def isospectral(in_path, a, op_paths, kterms, ntrunc, grid_n, out_path):
    """Generate iso-spectral potentials for a degenerate-coupling spectrum."""

    def body():
        spec = fio.read_spectrum(in_path, a=a)
        cfg = spec.config
        job = JobConfig(
            command="isospectral", config=cfg, grid_n=grid_n, k_terms=kterms, n_trunc=ntrunc
        ).validate()
        profiles = []
        for p in op_paths:
            op = fio.read_operator(p)
            if op.kind != "constant":
                raise ConfigError(f"{p}: family generation uses constant operators")
            profiles.append(op.profile)
        members = isospectral_family(spec, cfg, profiles, job.k_terms, job.n_trunc, job.grid_n)
        for i, member in enumerate(members):
            click.echo(f"member {i}: L2 norm {member.l2_norm():.6g}")
            if out_path:
                fio.write_potential(f"{out_path}.{i}.pot", member, cfg)
        if out_path:
            click.echo(f"wrote {len(members)} member file(s) under {out_path}.*.pot")

    _guarded(body)


@main.command()
@click.option("--in", "in_path", required=True, type=click.Path(), help="periodic spectrum")
@click.option("--in2", "in2_path", required=True, type=click.Path(), help="antiperiodic spectrum")
@click.option("--a", type=float, required=True)
@click.option("--op", "op_paths", type=click.Path(), multiple=True, required=True)
@click.option("--kterms", type=int, default=60, show_default=True)
@click.option("--ntrunc", type=int, default=60, show_default=True)
@click.option("--grid", "grid_n", type=int, default=1024, show_default=True)
@click.option("--out", "out_path", type=click.Path(), default=None)
def isobispectral(in_path, in2_path, a, op_paths, kterms, ntrunc, grid_n, out_path):
    """Generate iso-bispectral potentials sharing a periodic/antiperiodic pair."""

    def body():
        spec0 = fio.read_spectrum(in_path, a=a)
        spec1 = fio.read_spectrum(in2_path, a=a)
        job = JobConfig(
            command="isobispectral",
            config=FrozenConfig(a=a, gamma=1.0),
            grid_n=grid_n,
            k_terms=kterms,
            n_trunc=ntrunc,
        ).validate()
        two = TwoSpectra(spec0=spec0, spec1=spec1, a=a)
        profiles = []
        for p in op_paths:
            op = fio.read_operator(p)
            if op.kind != "constant":
                raise ConfigError(f"{p}: family generation uses constant operators")
            profiles.append(op.profile)
        members = isobispectral_family(two, profiles, job.k_terms, job.n_trunc, job.grid_n)
        for i, member in enumerate(members):
            click.echo(f"member {i}: L2 norm {member.l2_norm():.6g}")
            if out_path:
                fio.write_potential(f"{out_path}.{i}.pot", member, FrozenConfig(a=a, gamma=1.0))
        if out_path:
            click.echo(f"wrote {len(members)} member file(s) under {out_path}.*.pot")

    _guarded(body)


@main.command()
@click.option("--gamma", type=str, required=True, help="coupling, re,im; alpha is derived")
@click.option("--m", "n_max", type=int, default=64, show_default=True,
              help="largest Gram half-width; doubling sizes from 4 are tabulated")
@click.option("--out", "out_path", type=click.Path(), default=None, help="CSV report")
def basischeck(gamma, n_max, out_path):
    """Frame bounds of the two-sided sine system across growing truncations."""

    def body():
        g = _gamma_option(gamma)
        alpha = compute_alpha(g).alpha
        if n_max < 4:
            raise ConfigError("--m must be at least 4")
        sizes = []
        n = 4
        while n <= n_max:
            sizes.append(n)
            n *= 2
        report = riesz_report(alpha, sizes)
        click.echo(f"alpha = {alpha:.12g}")
        click.echo(f"{'N':>6} {'A1':>16} {'A2':>16} {'cond':>16}")
        for row in report.rows:
            click.echo(
                f"{row.n_half:>6} {row.lower:>16.9e} {row.upper:>16.9e} {row.condition:>16.6e}"
            )
        click.echo(
            f"lower bounds non-increasing: {report.lower_nonincreasing}; "
            f"upper bounds non-decreasing: {report.upper_nondecreasing}"
        )
        if out_path:
            lines = ["n,lower,upper,condition"]
            for row in report.rows:
                lines.append(
                    f"{row.n_half},{fio.fmt_float(row.lower)},"
                    f"{fio.fmt_float(row.upper)},{fio.fmt_float(row.condition)}"
                )
            with open(out_path, "w") as fh:
                fh.write("\n".join(lines) + "\n")
            click.echo(f"wrote {out_path}")

    _guarded(body)


@main.command()
@click.option("--in", "in_path", required=True, type=click.Path(), help="periodic spectrum")
@click.option("--in2", "in2_path", required=True, type=click.Path(), help="antiperiodic spectrum")
@click.option("--a", type=float, required=True)
@click.option("--ntrunc", type=int, default=60, show_default=True)
@click.option("--grid", "grid_n", type=int, default=512, show_default=True)
def growthcheck(in_path, in2_path, a, ntrunc, grid_n):
    """Test whether a spectra pair can share a potential (support of w0 + w1)."""

    def body():
        spec0 = fio.read_spectrum(in_path, a=a)
        spec1 = fio.read_spectrum(in2_path, a=a)
        job = JobConfig(
            command="growthcheck",
            config=FrozenConfig(a=a, gamma=1.0),
            grid_n=grid_n,
            n_trunc=ntrunc,
        ).validate()
        two = TwoSpectra(spec0=spec0, spec1=spec1, a=a)
        report = check_growth(two, job.n_trunc, job.grid_n)
        status = "PASS" if report.passed else "FAIL"
        click.echo(
            f"max |w0 + w1| on (1-a, 1): {report.max_violation:.6e} "
            f"(overall scale {report.scale:.6e})  [{status}]"
        )
        if not report.passed:
            sys.exit(EXIT_TOLERANCE)

    _guarded(body)


if __name__ == "__main__":
    main()
