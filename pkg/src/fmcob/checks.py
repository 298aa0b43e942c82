"""Identity suites shared by the CLI ``check`` command and the test suite."""

from __future__ import annotations

import random
from fractions import Fraction

from .beauville_model import BeauvilleAlgebra, _exp_element, fourier, is_perfect, validate
from .cobordism import (
    OmegaClass,
    beauville_decompose,
    check_pure_class,
    chow_kernel_transform,
    fourier_hat_via_psi,
    fourier_via_kernel,
    fourier_via_psi,
    format_omega,
    kernel_class,
    omega_pontryagin,
    omega_pullback,
    omega_pushforward,
    omega_sigma,
    psi,
    psi_inv,
    random_class,
    within_bounds,
)
from .coeff_ring import DEFAULT_ORDER, TPoly
from .formal_series import (
    TruncatedSeries,
    compose,
    exp_of_u,
    kernel_series,
    lambda_t,
    log_t,
)
from .motives import projector_suite
from .numerical_equiv import numerical_suite
from .report import Report


def series_suite(order: int = DEFAULT_ORDER) -> Report:
    rep = Report()
    lam, log = lambda_t(order), log_t(order)
    u = TruncatedSeries.variable(order, TPoly.const(1, order))
    rep.add(compose(log, lam) == u, "series-log-inverts-lambda", f"D={order}")
    rep.add(compose(lam, log) == u, "series-lambda-inverts-log", f"D={order}")
    G = kernel_series(order)
    collapse = compose(G, lam)
    target = exp_of_u(order, TPoly.const(1, order))
    bad = [str(k) for k in range(order + 1) if not collapse[k] == target[k]]
    rep.add(not bad, "series-kernel-collapse", f"D={order}", ", ".join(f"u^{k}" for k in bad))
    return rep


def _classes(B: BeauvilleAlgebra, order: int, rng: random.Random, samples: int) -> list[OmegaClass]:
    basis = [OmegaClass.basis_class(B, i, order) for i in range(B.dim)]
    return basis + [random_class(B, order, rng) for _ in range(samples)]


def fourier_suite(B: BeauvilleAlgebra, order: int = DEFAULT_ORDER, seed: int = 0,
                  samples: int = 100) -> Report:
    rep = Report()
    name = B.name
    g = B.g
    sg = (-1) ** g
    rng = random.Random(seed)
    classes = _classes(B, order, rng, samples)

    rep.add(all(psi_inv(psi(x), order) == x for x in classes), "psi-roundtrip", name)
    pairs = list(zip(classes[B.dim:], classes[B.dim + 1:]))[:20]
    rep.add(all(psi(x * y) == psi(x) * psi(y) for x, y in pairs), "psi-multiplicative", name)

    if B.has_kernel_data:
        bad = [format_omega(x) for x in classes if fourier_via_psi(x) != fourier_via_kernel(x)]
        rep.add(not bad, "fourier-route-agreement", name,
                f"{len(classes)} classes" if not bad else bad[0])
        K = B.kernel_data
        expc = _exp_element(K.c1).map_coefficients(lambda c: TPoly.const(c, order))
        rep.add(kernel_class(B, order) == expc, "kernel-series-collapse", name)
        bad = [B.names[i] for i, x in enumerate(B.basis()) if chow_kernel_transform(B, x) != fourier(B, x)]
        rep.add(not bad, "kernel-degenerates-at-t0", name, ", ".join(bad))
    else:
        rep.add(False, "fourier-route-agreement", name, "model without kernel data")

    bad = [format_omega(x) for x in classes
           if fourier_hat_via_psi(fourier_via_psi(x), B) != omega_sigma(x).scale(sg)]
    rep.add(not bad, "omega-fourier-inversion", name, bad[0] if bad else "")

    bad = []
    for x, y in pairs:
        Fx, Fy = fourier_via_psi(x), fourier_via_psi(y)
        if fourier_via_psi(omega_pontryagin(x, y)) != Fx * Fy:
            bad.append("star")
        if fourier_via_psi(x * y) != omega_pontryagin(Fx, Fy).scale(sg):
            bad.append("product")
    rep.add(not bad, "omega-fourier-exchange", name, ", ".join(sorted(set(bad))))

    bad = []
    for m in (2, 3, -2):
        for x in classes:
            Fx = fourier_via_psi(x)
            if fourier_via_psi(omega_pushforward(x, m)) != omega_pullback(Fx, m):
                bad.append(f"m={m} push")
            if fourier_via_psi(omega_pullback(x, m)) != omega_pushforward(Fx, m):
                bad.append(f"m={m} pull")
    rep.add(not bad, "omega-fourier-isogeny", name, ", ".join(sorted(set(bad))))

    bad = []
    for x in classes:
        for p, part in _by_codimension(x).items():
            for q, y in _by_codimension(fourier_via_psi(part)).items():
                for n in (2, 3, -2):
                    if omega_pullback(y, n) != y.scale(Fraction(n) ** (g - p + q)):
                        bad.append(f"p={p} q={q} n={n}")
    rep.add(not bad, "omega-fourier-eigenvalues", name, ", ".join(sorted(set(bad))[:3]))
    return rep


def _by_codimension(x: OmegaClass) -> dict[int, OmegaClass]:
    out: dict = {}
    for (p, _s), part in beauville_decompose(x).items():
        out[p] = out[p] + part if p in out else part
    return out


def decomposition_suite(B: BeauvilleAlgebra, order: int = DEFAULT_ORDER, seed: int = 0,
                        samples: int = 100) -> Report:
    rep = Report()
    name = B.name
    g = B.g
    rng = random.Random(seed + 1)
    classes = _classes(B, order, rng, samples)
    sums_ok = eigen_ok = bounds_ok = True
    pure = Report()
    witness = ""
    for x in classes:
        parts = beauville_decompose(x)
        total = sum(parts.values(), OmegaClass(B, {}, order))
        if total != x:
            sums_ok, witness = False, format_omega(x)
        for (p, s), part in parts.items():
            if not within_bounds(p, s, g):
                bounds_ok, witness = False, f"(p,s)=({p},{s})"
            for n in (2, 3, 5):
                if omega_pullback(part, n) != part.scale(Fraction(n) ** (2 * p - s)):
                    eigen_ok, witness = False, f"(p,s)=({p},{s}) n={n}"
            for m in (2, 3, -2):
                pure.extend(check_pure_class(part, m, (p, s)))
    rep.add(sums_ok, "decomposition-sums-to-input", name, "" if sums_ok else witness)
    rep.add(eigen_ok, "decomposition-eigenvectors", name, "" if eigen_ok else witness)
    rep.add(bounds_ok, "decomposition-bounds", name, "" if bounds_ok else witness)
    for ident in sorted({r.identity for r in pure}):
        rows = [r for r in pure if r.identity == ident]
        fails = [r for r in rows if not r.passed]
        rep.add(not fails, ident, name,
                f"{len(rows)} components" if not fails else fails[0].witness)
    return rep


def run_check(B: BeauvilleAlgebra, order: int = DEFAULT_ORDER, seed: int = 0,
              samples: int = 100) -> Report:
    """Every suite that applies to the model, in a fixed order."""
    rep = Report()
    rep.extend(series_suite(order))
    rep.extend(validate(B))
    rep.extend(fourier_suite(B, order, seed, samples))
    rep.extend(decomposition_suite(B, order, seed, samples))
    rep.extend(numerical_suite(B, order))
    if is_perfect(B):
        rep.extend(projector_suite(B, order, seed))
    else:
        rep.add(True, "projectors-skipped", B.name, "pairing is not perfect")
    return rep
