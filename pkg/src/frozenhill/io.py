"""Flat-file serialisation of potentials, spectra and operators.

All numbers are written with 17 significant digits so a write/read cycle is
lossless for IEEE doubles; complex values in headers are `re,im` pairs and
data lines hold space-separated fields.  No timestamps or environment data
go into the files, so identical inputs produce byte-identical outputs.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .core import AlphaParam, FrozenConfig, Potential, Spectrum
from .errors import FileFormatError
from .inverse import OperatorSpec


def fmt_float(x: float) -> str:
    return f"{float(x):.17g}"


def fmt_complex(z: complex) -> str:
    z = complex(z)
    return f"{fmt_float(z.real)},{fmt_float(z.imag)}"


def parse_complex(text: str, where: str = "value") -> complex:
    parts = text.split(",")
    try:
        if len(parts) == 1:
            return complex(float(parts[0]), 0.0)
        if len(parts) == 2:
            return complex(float(parts[0]), float(parts[1]))
    except ValueError:
        pass
    raise FileFormatError(f"cannot parse complex {where} from {text!r}")


def _header_fields(line: str, kind: str, path) -> dict:
    if not line.startswith(f"# {kind}"):
        raise FileFormatError(f"{path}: expected '# {kind}' header, got {line!r}")
    fields = {}
    for token in line[2 + len(kind) :].split():
        if "=" not in token:
            raise FileFormatError(f"{path}: malformed header token {token!r}")
        key, value = token.split("=", 1)
        fields[key] = value
    return fields


def write_potential(path, q: Potential, config: FrozenConfig) -> None:
    lines = [f"# potential n={q.n} a={fmt_float(config.a)} gamma={fmt_complex(config.gamma)}"]
    xs = q.grid()
    for x, v in zip(xs, q.samples):
        lines.append(f"{fmt_float(x)} {fmt_float(v.real)} {fmt_float(v.imag)}")
    Path(path).write_text("\n".join(lines) + "\n")


def read_potential(path) -> tuple[Potential, FrozenConfig]:
    text = Path(path).read_text().splitlines()
    if not text:
        raise FileFormatError(f"{path}: empty potential file")
    fields = _header_fields(text[0], "potential", path)
    for key in ("n", "a", "gamma"):
        if key not in fields:
            raise FileFormatError(f"{path}: potential header misses field {key!r}")
    try:
        n = int(fields["n"])
        a = float(fields["a"])
    except ValueError as exc:
        raise FileFormatError(f"{path}: bad header number: {exc}") from exc
    gamma = parse_complex(fields["gamma"], "gamma")
    samples = np.empty(n + 1, dtype=complex)
    body = [ln for ln in text[1:] if ln.strip()]
    if len(body) != n + 1:
        raise FileFormatError(f"{path}: expected {n + 1} sample lines, found {len(body)}")
    for i, line in enumerate(body):
        parts = line.split()
        if len(parts) != 3:
            raise FileFormatError(f"{path}: line {i + 2}: expected 'x re im'")
        try:
            samples[i] = complex(float(parts[1]), float(parts[2]))
        except ValueError as exc:
            raise FileFormatError(f"{path}: line {i + 2}: {exc}") from exc
    try:
        return Potential(samples), FrozenConfig(a=a, gamma=gamma)
    except Exception as exc:
        raise FileFormatError(f"{path}: {exc}") from exc


def write_spectrum(path, spec: Spectrum) -> None:
    lines = [
        "# spectrum "
        f"gamma={fmt_complex(spec.config.gamma)} "
        f"alpha={fmt_complex(spec.alpha.alpha)} m={len(spec)}"
    ]
    for n, lam in enumerate(spec.values):
        lines.append(f"{n} {fmt_float(lam.real)} {fmt_float(lam.imag)}")
    Path(path).write_text("\n".join(lines) + "\n")


def read_spectrum(path, a: float = 0.0) -> Spectrum:
    """Load a spectrum file; the frozen point a is supplied by the caller."""
    text = Path(path).read_text().splitlines()
    if not text:
        raise FileFormatError(f"{path}: empty spectrum file")
    fields = _header_fields(text[0], "spectrum", path)
    for key in ("gamma", "alpha", "m"):
        if key not in fields:
            raise FileFormatError(f"{path}: spectrum header misses field {key!r}")
    gamma = parse_complex(fields["gamma"], "gamma")
    alpha = parse_complex(fields["alpha"], "alpha")
    try:
        m = int(fields["m"])
    except ValueError as exc:
        raise FileFormatError(f"{path}: bad m: {exc}") from exc
    body = [ln for ln in text[1:] if ln.strip()]
    if len(body) != m:
        raise FileFormatError(f"{path}: expected {m} eigenvalue lines, found {len(body)}")
    values = np.empty(m, dtype=complex)
    for i, line in enumerate(body):
        parts = line.split()
        if len(parts) != 3:
            raise FileFormatError(f"{path}: line {i + 2}: expected 'n re im'")
        try:
            idx = int(parts[0])
            values[i] = complex(float(parts[1]), float(parts[2]))
        except ValueError as exc:
            raise FileFormatError(f"{path}: line {i + 2}: {exc}") from exc
        if idx != i:
            raise FileFormatError(f"{path}: line {i + 2}: index {idx} out of order")
    try:
        config = FrozenConfig(a=a, gamma=gamma)
    except Exception as exc:
        raise FileFormatError(f"{path}: {exc}") from exc
    return Spectrum(values=values, config=config, alpha=AlphaParam(alpha))


def write_operator(path, op: OperatorSpec) -> None:
    lines = [f"kind={op.kind}", f"domain={fmt_float(op.domain_length)}"]
    if op.kind == "scalar":
        lines.append(f"c={fmt_complex(op.scalar_value)}")
    elif op.kind == "constant":
        lines.append(f"count={len(op.profile)}")
        for v in op.profile:
            lines.append(f"{fmt_float(v.real)} {fmt_float(v.imag)}")
    else:
        rows = op.matrix_values.shape[0]
        lines.append(f"rows={rows}")
        for row in op.matrix_values:
            lines.append(" ".join(fmt_complex(v) for v in row))
    Path(path).write_text("\n".join(lines) + "\n")


def read_operator(path) -> OperatorSpec:
    text = [ln for ln in Path(path).read_text().splitlines() if ln.strip()]
    if not text or not text[0].startswith("kind="):
        raise FileFormatError(f"{path}: operator file must start with 'kind='")
    kind = text[0][5:].strip()
    if kind not in ("constant", "scalar", "matrix"):
        raise FileFormatError(f"{path}: unknown operator kind {kind!r}")
    if len(text) < 2 or not text[1].startswith("domain="):
        raise FileFormatError(f"{path}: operator file misses 'domain=' line")
    try:
        domain = float(text[1][7:])
    except ValueError as exc:
        raise FileFormatError(f"{path}: bad domain: {exc}") from exc
    try:
        if kind == "scalar":
            if len(text) < 3 or not text[2].startswith("c="):
                raise FileFormatError(f"{path}: scalar operator misses 'c=' line")
            return OperatorSpec.scalar(parse_complex(text[2][2:], "c"), domain)
        if kind == "constant":
            if len(text) < 3 or not text[2].startswith("count="):
                raise FileFormatError(f"{path}: constant operator misses 'count=' line")
            count = int(text[2][6:])
            body = text[3:]
            if len(body) != count:
                raise FileFormatError(
                    f"{path}: expected {count} profile lines, found {len(body)}"
                )
            profile = np.empty(count, dtype=complex)
            for i, line in enumerate(body):
                parts = line.split()
                if len(parts) != 2:
                    raise FileFormatError(f"{path}: line {i + 4}: expected 're im'")
                profile[i] = complex(float(parts[0]), float(parts[1]))
            return OperatorSpec.constant(profile, domain)
        if len(text) < 3 or not text[2].startswith("rows="):
            raise FileFormatError(f"{path}: matrix operator misses 'rows=' line")
        rows = int(text[2][5:])
        body = text[3:]
        if len(body) != rows:
            raise FileFormatError(f"{path}: expected {rows} matrix rows, found {len(body)}")
        mat = np.empty((rows, rows), dtype=complex)
        for i, line in enumerate(body):
            entries = line.split()
            if len(entries) != rows:
                raise FileFormatError(f"{path}: row {i} has {len(entries)} entries, not {rows}")
            for j, tok in enumerate(entries):
                mat[i, j] = parse_complex(tok, f"matrix[{i},{j}]")
        return OperatorSpec.matrix(mat, domain)
    except FileFormatError:
        raise
    except ValueError as exc:
        raise FileFormatError(f"{path}: {exc}") from exc
