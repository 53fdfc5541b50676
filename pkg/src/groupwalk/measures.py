"""Sparse probability measures on groups and exact convolution powers.

A FiniteMeasure is a finitely supported measure together with the mass lost
to truncation (the "deficit"). Two arithmetic modes exist and never mix
inside a pipeline: "exact" (Fraction weights, identities hold on the nose)
and "float64". Truncation drops atoms below a weight threshold and adds the
exact lost mass to the deficit, so every downstream quantity can report an
error interval instead of silently drifting.

Measures are immutable values. Convolution runs single-threaded with a
fixed accumulation order, so float-mode results are bit-identical from run
to run (exact mode is order-independent anyway).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, Mapping, Tuple

from .errors import DomainError
from .groups import Group, group_from_id

MODE_EXACT = "exact"
MODE_FLOAT = "float64"
MEASURE_FORMAT_VERSION = 1

_MASS_TOL = 1e-12


@dataclass(frozen=True)
class FiniteMeasure:
    group: Group
    atoms: Mapping
    deficit: object  # Fraction in exact mode, float in float mode
    mode: str

    def mass(self):
        return sum(self.atoms.values())

    def support(self):
        return self.atoms.keys()

    def __len__(self) -> int:
        return len(self.atoms)


def _coerce_weight(w, mode: str):
    if mode == MODE_EXACT:
        if isinstance(w, float):
            raise DomainError("float weight in exact mode")
        return Fraction(w)
    return float(w)


def finite_measure(group: Group, atoms: Mapping, deficit=0,
                   mode: str = MODE_EXACT) -> FiniteMeasure:
    """Validated constructor: positive weights, mass + deficit = 1."""
    if mode not in (MODE_EXACT, MODE_FLOAT):
        raise DomainError(f"unknown arithmetic mode {mode!r}")
    clean = {}
    for g, w in atoms.items():
        group.check_element(g)
        w = _coerce_weight(w, mode)
        if w <= 0:
            raise DomainError(f"non-positive weight {w} at {g!r}")
        if g in clean:
            raise DomainError(f"duplicate atom {g!r}")
        clean[g] = w
    deficit = _coerce_weight(deficit, mode)
    total = sum(clean.values()) + deficit
    if mode == MODE_EXACT:
        if total != 1:
            raise DomainError(f"mass {total} != 1 in exact mode")
    elif abs(total - 1.0) > _MASS_TOL:
        raise DomainError(f"mass {total} deviates from 1 beyond {_MASS_TOL}")
    return FiniteMeasure(group=group, atoms=clean, deficit=deficit, mode=mode)


def dirac(group: Group, g=None, mode: str = MODE_EXACT) -> FiniteMeasure:
    if g is None:
        g = group.identity()
    one = Fraction(1) if mode == MODE_EXACT else 1.0
    return finite_measure(group, {group.canonical(g): one}, mode=mode)


def srw(group: Group, mode: str = MODE_EXACT) -> FiniteMeasure:
    """Uniform measure on the standard symmetric generating set."""
    gens = group.generators()
    n = len(gens)
    w = Fraction(1, n) if mode == MODE_EXACT else 1.0 / n
    return finite_measure(group, {s: w for s in gens}, mode=mode)


def _check_compatible(mu: FiniteMeasure, nu: FiniteMeasure) -> None:
    if mu.group != nu.group:
        raise DomainError(
            f"measures on different groups: {mu.group.id_string} vs "
            f"{nu.group.id_string}")
    if mu.mode != nu.mode:
        raise DomainError(f"mixed arithmetic modes: {mu.mode} vs {nu.mode}")


def convolve(mu: FiniteMeasure, nu: FiniteMeasure,
             threshold=0) -> FiniteMeasure:
    """(mu * nu)(s) = sum over g h = s of mu(g) nu(h), truncated.

    Atoms of the product with weight < threshold are dropped and their total
    mass added to the deficit. The deficit composes super-additively: the
    output deficit is 1 - (1-d_mu)(1-d_nu) plus the newly dropped mass.
    """
    _check_compatible(mu, nu)
    group = mu.group
    out: Dict = {}
    for g, wg in mu.atoms.items():
        for h, wh in nu.atoms.items():
            s = group.mul(g, h)
            prev = out.get(s)
            out[s] = wg * wh if prev is None else prev + wg * wh
    dropped = Fraction(0) if mu.mode == MODE_EXACT else 0.0
    if threshold:
        kept = {}
        for s, w in out.items():
            if w < threshold:
                dropped += w
            else:
                kept[s] = w
        out = kept
    base = mu.deficit + nu.deficit - mu.deficit * nu.deficit
    return FiniteMeasure(group=group, atoms=out, deficit=base + dropped,
                         mode=mu.mode)


def power(mu: FiniteMeasure, n: int, threshold=0) -> FiniteMeasure:
    """n-fold convolution power; n = 0 gives the point mass at e."""
    if n < 0:
        raise DomainError("convolution power needs n >= 0")
    acc = dirac(mu.group, mode=mu.mode)
    for _ in range(n):
        acc = convolve(acc, mu, threshold=threshold)
    return acc


def power_sequence(mu: FiniteMeasure, n_max: int,
                   threshold=0) -> Iterable[Tuple[int, FiniteMeasure]]:
    """Yield (n, mu^{*n}) for n = 1..n_max along the linear chain."""
    acc = dirac(mu.group, mode=mu.mode)
    for n in range(1, n_max + 1):
        acc = convolve(acc, mu, threshold=threshold)
        yield n, acc


def adjoint(mu: FiniteMeasure) -> FiniteMeasure:
    """Weights transported by inversion; an involution."""
    group = mu.group
    atoms = {group.inv(g): w for g, w in mu.atoms.items()}
    return FiniteMeasure(group=group, atoms=atoms, deficit=mu.deficit,
                         mode=mu.mode)


def is_symmetric(mu: FiniteMeasure) -> bool:
    return adjoint(mu).atoms == dict(mu.atoms)


def check_support_generates(mu: FiniteMeasure, targets, depth: int) -> bool:
    """True iff every target appears among products of <= depth support atoms.

    False is inconclusive ("not verified at depth"): the semigroup generated
    by the support may still reach the targets deeper in.
    """
    if depth < 1:
        raise DomainError("depth must be >= 1")
    group = mu.group
    want = {group.canonical(t) for t in targets}
    layer = set(mu.atoms.keys())
    reached = set(layer)
    want -= reached
    for _ in range(depth - 1):
        if not want:
            break
        layer = {group.mul(g, s) for g in layer for s in mu.atoms}
        reached |= layer
        want -= layer
    return not want


def total_variation(mu: FiniteMeasure, nu: FiniteMeasure) -> float:
    """TV distance between the retained parts (evaluated in float)."""
    if mu.group != nu.group:
        raise DomainError("TV distance needs measures on one group")
    keys = set(mu.atoms) | set(nu.atoms)
    acc = 0.0
    for g in keys:
        acc += abs(float(mu.atoms.get(g, 0)) - float(nu.atoms.get(g, 0)))
    return 0.5 * acc


def shannon_entropy(mu: FiniteMeasure) -> float:
    """Shannon entropy (natural log) of the retained atoms."""
    h = 0.0
    for w in mu.atoms.values():
        x = float(w)
        if x > 0.0:
            h -= x * math.log(x)
    return h


def _format_weight(w) -> str:
    if isinstance(w, Fraction):
        return f"{w.numerator}/{w.denominator}"
    return repr(w)


def _parse_weight(text: str, mode: str):
    if "/" in text:
        num, _, den = text.partition("/")
        w = Fraction(int(num), int(den))
        return w if mode == MODE_EXACT else float(w)
    return Fraction(text) if mode == MODE_EXACT else float(text)


def measure_to_text(mu: FiniteMeasure) -> str:
    """Line-delimited serialization: header, then one "element weight" line
    per atom (weights as p/q in exact mode)."""
    lines = [
        f"# groupwalk-measure v{MEASURE_FORMAT_VERSION}",
        f"group {mu.group.id_string}",
        f"mode {mu.mode}",
        f"deficit {_format_weight(mu.deficit)}",
    ]
    body = sorted(
        (mu.group.format_element(g), w) for g, w in mu.atoms.items()
    )
    lines.extend(f"{s} {_format_weight(w)}" for s, w in body)
    return "\n".join(lines) + "\n"


def measure_from_text(text: str) -> FiniteMeasure:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or not lines[0].startswith("# groupwalk-measure v"):
        raise DomainError("not a measure file")
    version = int(lines[0].rsplit("v", 1)[1])
    if version != MEASURE_FORMAT_VERSION:
        raise DomainError(f"unsupported measure format version {version}")
    header = {}
    idx = 1
    for line in lines[1:]:
        key, _, val = line.partition(" ")
        if key in ("group", "mode", "deficit"):
            header[key] = val
            idx += 1
        else:
            break
    group = group_from_id(header["group"])
    mode = header["mode"]
    atoms = {}
    for line in lines[idx:]:
        elem_s, _, w_s = line.rpartition(" ")
        atoms[group.parse_element(elem_s)] = _parse_weight(w_s, mode)
    return finite_measure(group, atoms,
                          deficit=_parse_weight(header["deficit"], mode),
                          mode=mode)


def parse_measure_spec(group: Group, spec: str,
                       mode: str = MODE_EXACT) -> FiniteMeasure:
    """Parse a CLI measure spec: "srw" or "elem=weight;elem=weight;..."."""
    spec = spec.strip()
    if spec == "srw":
        return srw(group, mode=mode)
    atoms = {}
    for part in spec.split(";"):
        part = part.strip()
        if not part:
            continue
        elem_s, sep, w_s = part.partition("=")
        if not sep:
            raise DomainError(f"bad measure atom {part!r} (want elem=weight)")
        g = group.parse_element(elem_s.strip())
        if g in atoms:
            raise DomainError(f"duplicate atom {elem_s!r} in measure spec")
        atoms[g] = _parse_weight(w_s.strip(), mode)
    if not atoms:
        raise DomainError("empty measure spec")
    return finite_measure(group, atoms, mode=mode)
