"""Ideal-transfer pipeline for the two diagonal blow-up families.

``ProductSquare(n_list)`` is X = X' x X' with X' = P^{n_1} x ... x P^{n_r};
``PowerP1(n)`` is Y = (P^1)^n.  Both are blown up along their (generalised)
diagonal.  Variable names follow the serialization used everywhere else:
``T_r_i_j`` and ``T_inf`` for the first family, ``S_i_j`` for the second.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Union

from .groebner import Ideal, RingMap, ringmap_kernel, saturate_variables, ideal_equal
from .polyring import GradedRing, Polynomial

T_INF = "T_inf"
MAX_PIPELINE_VARS = 24
MAX_KERNEL_CHECK_VARS = 12


class SpecError(ValueError):
    pass


@dataclass(frozen=True)
class ProductSquare:
    n_list: tuple

    def __post_init__(self):
        n_list = tuple(int(n) for n in self.n_list)
        object.__setattr__(self, "n_list", n_list)
        if not n_list:
            raise SpecError("n_list must be nonempty")
        if any(n < 1 for n in n_list):
            raise SpecError("every n_r must be >= 1")

    def __str__(self):
        return "ProductSquare(" + ",".join(map(str, self.n_list)) + ")"


@dataclass(frozen=True)
class PowerP1:
    n: int

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 2:
            raise SpecError("n must be >= 2")
        object.__setattr__(self, "n", int(self.n))

    def __str__(self):
        return f"PowerP1({self.n})"


BlowupSpec = Union[ProductSquare, PowerP1]


def _check(spec) -> None:
    if not isinstance(spec, (ProductSquare, PowerP1)):
        raise SpecError(f"not a blow-up spec: {spec!r}")


def t_name(r: int, i: int, j: int) -> str:
    return f"T_{r}_{i}_{j}"


def s_name(i: int, j: int) -> str:
    return f"S_{i}_{j}"


def extra_variable(spec: BlowupSpec) -> str:
    _check(spec)
    if isinstance(spec, PowerP1):
        return s_name(spec.n + 1, spec.n + 2)
    return T_INF


def _unit(k: int, i: int) -> list:
    v = [0] * k
    v[i] = 1
    return v


# --- variable layout -----------------------------------------------------------
# Each entry: (name, kind, K1-degree) with kind in {"original", "stretched", "extra"}.


def _layout(spec: BlowupSpec) -> list:
    _check(spec)
    out = []
    if isinstance(spec, PowerP1):
        n = spec.n
        for i, j in combinations(range(1, n + 3), 2):
            if i == n + 1:
                out.append((s_name(i, j), "extra", None))
            elif j > n:
                out.append((s_name(i, j), "original", _unit(n, i - 1)))
            else:
                out.append((s_name(i, j), "stretched",
                            [a + b for a, b in zip(_unit(n, i - 1), _unit(n, j - 1))]))
        return out
    rk = len(spec.n_list)
    out.append((T_INF, "extra", None))
    for r, nr in enumerate(spec.n_list, start=1):
        e = _unit(rk, r - 1)
        zero = [0] * rk
        for i, j in combinations(range(nr + 3), 2):
            if i > nr:
                continue
            if j == nr + 1:
                out.append((t_name(r, i, j), "original", e + zero))
            elif j == nr + 2:
                out.append((t_name(r, i, j), "original", zero + e))
            else:
                out.append((t_name(r, i, j), "stretched", e + e))
    return out


def k1_rank(spec: BlowupSpec) -> int:
    _check(spec)
    return spec.n if isinstance(spec, PowerP1) else 2 * len(spec.n_list)


def variable_count(spec: BlowupSpec) -> int:
    return len(_layout(spec))


def base_ring(spec: BlowupSpec) -> GradedRing:
    """Total coordinate ring of X resp. Y, graded by its class group."""
    entries = [(n, d) for n, kind, d in _layout(spec) if kind == "original"]
    return GradedRing.from_degrees([n for n, _ in entries], [d for _, d in entries])


def stretched_ring(spec: BlowupSpec) -> GradedRing:
    entries = [(n, d) for n, kind, d in _layout(spec) if kind != "extra"]
    return GradedRing.from_degrees([n for n, _ in entries], [d for _, d in entries])


def k2_grading(spec: BlowupSpec) -> GradedRing:
    """All variables graded by K1 x Z: originals (d, 0), stretched (d, -1), extra (0, 1)."""
    rank = k1_rank(spec)
    names, degs = [], []
    for name, kind, d in _layout(spec):
        names.append(name)
        if kind == "original":
            degs.append(list(d) + [0])
        elif kind == "stretched":
            degs.append(list(d) + [-1])
        else:
            degs.append([0] * rank + [1])
    return GradedRing.from_degrees(names, degs)


# --- minors --------------------------------------------------------------------


def minor_pairs(spec: BlowupSpec) -> list:
    """((row1 col i, row2 col j, row1 col j, row2 col i), stretched name) per minor.

    The minor is ``row1_i * row2_j - row1_j * row2_i``.
    """
    _check(spec)
    out = []
    if isinstance(spec, PowerP1):
        n = spec.n
        for i, j in combinations(range(1, n + 1), 2):
            out.append(((s_name(i, n + 1), s_name(j, n + 2), s_name(j, n + 1), s_name(i, n + 2)),
                        s_name(i, j)))
        return out
    for r, nr in enumerate(spec.n_list, start=1):
        k, l = nr + 1, nr + 2
        for i, j in combinations(range(nr + 1), 2):
            out.append(((t_name(r, i, k), t_name(r, j, l), t_name(r, j, k), t_name(r, i, l)),
                        t_name(r, i, j)))
    return out


def _minor(ring: GradedRing, names, rename=None) -> Polynomial:
    rename = rename or (lambda s: s)
    a, b, c, d = (ring.var(rename(x)) for x in names)
    return a * b - c * d


def diagonal_ideal(spec: BlowupSpec) -> Ideal:
    """Ideal of 2x2 minors cutting out the preimage of the diagonal."""
    ring = base_ring(spec)
    return Ideal(ring, [_minor(ring, names) for names, _ in minor_pairs(spec)])


def diagonal_parametrization(spec: BlowupSpec) -> RingMap:
    """Torus parametrization of the diagonal's preimage.

    Y: S_{i,n+1} -> a_i*u, S_{i,n+2} -> a_i*v.  X: the same per factor r with
    parameters a_r_i, u_r, v_r.
    """
    src = base_ring(spec)
    if isinstance(spec, PowerP1):
        n = spec.n
        params = [f"a_{i}" for i in range(1, n + 1)] + ["u", "v"]
        tgt = GradedRing(tuple(params))
        images = []
        for name in src.var_names:
            _, i, j = name.split("_")
            a = tgt.var(f"a_{i}")
            images.append(a * tgt.var("u" if int(j) == n + 1 else "v"))
        return RingMap(src, tgt, tuple(images))
    params = []
    for r, nr in enumerate(spec.n_list, start=1):
        params += [f"a_{r}_{i}" for i in range(nr + 1)] + [f"u_{r}", f"v_{r}"]
    tgt = GradedRing(tuple(params))
    images = []
    for name in src.var_names:
        _, r, i, j = name.split("_")
        nr = spec.n_list[int(r) - 1]
        a = tgt.var(f"a_{r}_{i}")
        images.append(a * tgt.var(f"u_{r}" if int(j) == nr + 1 else f"v_{r}"))
    return RingMap(src, tgt, tuple(images))


def check_diagonal_kernel(spec: BlowupSpec, budget=None) -> bool:
    phi = diagonal_parametrization(spec)
    if phi.source.nvars > MAX_KERNEL_CHECK_VARS:
        raise SpecError(f"kernel check limited to {MAX_KERNEL_CHECK_VARS} variables")
    kernel = ringmap_kernel(phi, invertible=phi.target.var_names, method="literal", budget=budget)
    return ideal_equal(kernel, diagonal_ideal(spec), budget)


# --- stretched embedding and transfer ------------------------------------------


def stretched_relations(spec: BlowupSpec) -> tuple:
    """(K1-graded stretched ring, graph ideal <new_var - minor>)."""
    ring = stretched_ring(spec)
    gens = [ring.var(new) - _minor(ring, names) for names, new in minor_pairs(spec)]
    return ring, Ideal(ring, gens)


def transferred_generators(spec: BlowupSpec) -> list:
    """Generators ``new_var * extra - minor`` of the transferred ideal."""
    ring = k2_grading(spec)
    extra = ring.var(extra_variable(spec))
    return [ring.var(new) * extra - _minor(ring, names) for names, new in minor_pairs(spec)]


def pipeline_parametrization(spec: BlowupSpec) -> RingMap:
    """Originals -> free parameters, stretched (i,j) -> minor/t, extra -> t."""
    ring = k2_grading(spec)
    kinds = {name: kind for name, kind, _ in _layout(spec)}
    originals = [n for n in ring.var_names if kinds[n] == "original"]
    params = GradedRing(tuple(f"x_{n}" for n in originals) + ("t",))
    t = params.var("t")
    minors = {new: names for names, new in minor_pairs(spec)}
    images, dens = [], []
    for name in ring.var_names:
        kind = kinds[name]
        if kind == "original":
            images.append(params.var(f"x_{name}"))
            dens.append(params.one())
        elif kind == "stretched":
            images.append(_minor(params, minors[name], lambda s: f"x_{s}"))
            dens.append(t)
        else:
            images.append(t)
            dens.append(params.one())
    return RingMap(ring, params, tuple(images), tuple(dens))


@dataclass
class PipelineState:
    spec: BlowupSpec
    base_ring: GradedRing
    I1: Ideal
    I2prime_gens: list
    I2: Ideal
    k2_ring: GradedRing
    parametrization: RingMap = field(repr=False)
    certificate: str = ""


def pipeline_I2(spec: BlowupSpec, budget=None, method: str = "literal") -> PipelineState:
    """Contract the transferred ideal back to the polynomial ring.

    Computed as the kernel of :func:`pipeline_parametrization` with every
    parameter inverted, which makes the result prime by construction.
    """
    nvars = variable_count(spec)
    if nvars > MAX_PIPELINE_VARS:
        raise SpecError(f"pipeline limited to {MAX_PIPELINE_VARS} variables, spec needs {nvars}")
    k1ring, I1 = stretched_relations(spec)
    phi = pipeline_parametrization(spec)
    kernel = ringmap_kernel(phi, invertible=phi.target.var_names, method=method, budget=budget)
    cert = ("prime by construction: kernel of " + ", ".join(
        f"{s} -> ({img})" + ("" if den.is_constant() else f"/({den})")
        for s, img, den in zip(phi.source.var_names, phi.images, phi.denominators))
        + "; all parameters inverted")
    return PipelineState(spec, base_ring(spec), I1, transferred_generators(spec), kernel,
                         phi.source, phi, cert)


def transfer(spec: BlowupSpec, budget=None) -> Ideal:
    """Saturation route: <transferred generators> : (product of all variables)^inf."""
    ring = k2_grading(spec)
    return saturate_variables(Ideal(ring, transferred_generators(spec)), range(ring.nvars), budget)
