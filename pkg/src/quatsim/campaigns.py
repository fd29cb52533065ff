"""Seeded randomized verification campaigns.

Every campaign derives one fresh RNG per trial from a 64-bit hash of
(master seed, trial index, campaign label), so trials are independent,
reproducible one at a time, and a reported counterexample seed is enough to
replay a failure.  Suites return plain dicts ready for JSON reports; the
maximum observed residual is always reported, not just pass/fail.
"""

from __future__ import annotations

import math

import numpy as np

from . import cmat, embed, hmat, simulate
from .hmat import QMatrix, trial_seed
from .qqt import Channel, Povm, State
from .quat import Quaternion, sp1_to_su2

DEFAULT_EQUIV_TOL = 1e-10


def _suite(trials: int, tolerance: float) -> dict:
    return {
        "trials": trials,
        "tolerance": tolerance,
        "max_residual": 0.0,
        "worst_seed": 0,
        "pass": True,
        "violations": [],
    }


def _record(suite: dict, name: str, index: int, seed: int, residual: float) -> None:
    if residual > suite["max_residual"]:
        suite["max_residual"] = float(residual)
        suite["worst_seed"] = seed
    if residual > suite["tolerance"]:
        suite["pass"] = False
        suite["violations"].append({
            "campaign": name,
            "trial": index,
            "seed": seed,
            "deviation": float(residual),
        })


def _pick_dim(rng: np.random.Generator, dims: list[int]) -> int:
    return int(dims[int(rng.integers(len(dims)))])


def run_measurement_campaign(seed: int, dims: list[int], trials: int,
                             tol: float = DEFAULT_EQUIV_TOL,
                             sum_tol: float = 1e-9) -> dict:
    """Random (state, POVM) pairs: quaternionic vs lifted outcome probabilities."""
    suite = _suite(trials, tol)
    suite["max_sum_residual"] = 0.0
    for i in range(trials):
        s = trial_seed(seed, i, "measurement")
        rng = np.random.default_rng(s)
        d = _pick_dim(rng, dims)
        m = int(rng.integers(2, 9))
        state = State.random(rng, d)
        povm = Povm.random(rng, d, m)
        rep = simulate.measurement_equiv(state, povm)
        _record(suite, "measurement", i, s, rep.max_deviation)
        sum_residual = max(rep.p_sum_residual, rep.q_sum_residual)
        suite["max_sum_residual"] = max(suite["max_sum_residual"], float(sum_residual))
        if sum_residual > sum_tol:
            _record(suite, "measurement_sum", i, s, sum_residual)
    return suite


def run_channel_campaign(seed: int, dims: list[int], trials: int,
                         mode: str = "default",
                         tol: float = DEFAULT_EQUIV_TOL) -> dict:
    """Random (state, channel, POVM) triples, rectangular Kraus shapes included."""
    suite = _suite(trials, tol)
    suite["mode"] = mode
    suite["max_intermediate_residual"] = 0.0
    for i in range(trials):
        s = trial_seed(seed, i, f"channel-{mode}")
        rng = np.random.default_rng(s)
        d = _pick_dim(rng, dims)
        p = _pick_dim(rng, dims)
        m = int(rng.integers(2, 9))
        if mode == "default":
            n_min = math.ceil(d / p)
        else:
            n_min = math.ceil(p / d)
        n = n_min + int(rng.integers(0, 4))
        state = State.random(rng, d)
        channel = Channel.random(rng, d, p, n, mode=mode)
        povm = Povm.random(rng, p, m)
        rep = simulate.channel_equiv(state, channel, povm)
        _record(suite, "channel", i, s, rep.max_deviation)
        suite["max_intermediate_residual"] = max(
            suite["max_intermediate_residual"], float(rep.intermediate_residual))
        if rep.intermediate_residual > tol:
            _record(suite, "channel_intermediate", i, s, rep.intermediate_residual)
    return suite


def run_embedding_suite(seed: int, dims: list[int], trials: int,
                        tol: float = DEFAULT_EQUIV_TOL) -> dict:
    """Real-linearity, multiplicativity, and adjoint-compatibility of the lift."""
    suite = _suite(trials, tol)
    for i in range(trials):
        s = trial_seed(seed, i, "embedding")
        rng = np.random.default_rng(s)
        p = _pick_dim(rng, dims)
        d = _pick_dim(rng, dims)
        q = _pick_dim(rng, dims)
        a = hmat.random_matrix(rng, p, d)
        a2 = hmat.random_matrix(rng, p, d)
        b = hmat.random_matrix(rng, d, q)
        x, y = rng.uniform(-2.0, 2.0, size=2)

        lin = np.linalg.norm(
            embed.psi(a * float(x) + a2 * float(y))
            - x * embed.psi(a) - y * embed.psi(a2))
        lin /= max(1.0, abs(x) * a.frob() + abs(y) * a2.frob())
        mul = np.linalg.norm(embed.psi(a) @ embed.psi(b) - embed.psi(a @ b))
        mul /= max(1.0, a.frob() * b.frob())
        star = np.linalg.norm(embed.psi(a.adjoint()) - embed.psi(a).conj().T)
        star /= max(1.0, a.frob())
        _record(suite, "embedding", i, s, max(lin, mul, star))
    return suite


def run_inner_product_suite(seed: int, dims: list[int], trials: int,
                            tol: float = DEFAULT_EQUIV_TOL) -> dict:
    """tr(AB) = tr(psi(A) psi(B)) / 2 on self-adjoint pairs."""
    suite = _suite(trials, tol)
    for i in range(trials):
        s = trial_seed(seed, i, "inner-product")
        rng = np.random.default_rng(s)
        d = _pick_dim(rng, dims)
        a = hmat.random_self_adjoint(rng, d)
        b = hmat.random_self_adjoint(rng, d)
        lhs = hmat.hs_form(a, b)
        rhs = 0.5 * float(np.trace(embed.psi(a) @ embed.psi(b)).real)
        residual = abs(lhs - rhs) / max(1.0, a.frob() * b.frob())
        _record(suite, "inner_product", i, s, residual)
    return suite


def run_trace_suite(seed: int, dims: list[int], trials: int,
                    tol: float = DEFAULT_EQUIV_TOL) -> dict:
    """Cyclic property and basis independence of the Re-trace."""
    suite = _suite(trials, tol)
    for i in range(trials):
        s = trial_seed(seed, i, "trace")
        rng = np.random.default_rng(s)
        d = _pick_dim(rng, dims)
        a = hmat.random_matrix(rng, d, d)
        b = hmat.random_matrix(rng, d, d)
        c = hmat.random_matrix(rng, d, d)
        cyc = abs((a @ b @ c).trace() - (c @ a @ b).trace())
        cyc /= max(1.0, a.frob() * b.frob() * c.frob())

        u = hmat.random_unitary(rng, d)
        # the trace in the rotated basis {U e_r}, summed vector by vector
        rotated = 0.0
        for r in range(d):
            col = u.column(r)
            rotated += col.inner(a @ col).h0
        basis_residual = abs(rotated - a.trace()) / max(1.0, a.frob())
        _record(suite, "trace", i, s, max(cyc, basis_residual))
    return suite


def _cluster_sizes(w: np.ndarray, tol: float) -> list[int]:
    sizes = []
    run = 1
    for i in range(1, len(w)):
        if w[i] - w[i - 1] > tol:
            sizes.append(run)
            run = 1
        else:
            run += 1
    sizes.append(run)
    return sizes


def run_spectral_suite(seed: int, dims: list[int], trials: int,
                       tol: float = 1e-9) -> dict:
    """Spectral-theorem route: reconstruction, eigen-residuals, Kramers pairing."""
    suite = _suite(trials, tol)
    suite["kramers_even"] = True
    for i in range(trials):
        s = trial_seed(seed, i, "spectral")
        rng = np.random.default_rng(s)
        d = _pick_dim(rng, dims)
        a = hmat.random_self_adjoint(rng, d)
        scale = max(1.0, a.frob())
        dec = hmat.spectral_decompose(a)
        rec = (dec.reconstruct() - a).frob() / scale
        eig_res = max(
            (a @ xi - xi.right_mul(float(lam))).norm()
            for lam, xi in zip(dec.eigenvalues, dec.eigenvectors)) / scale
        w, _ = cmat.hermitian_eig(embed.psi(a))
        sizes = _cluster_sizes(w, 1e-8 * scale)
        if any(size % 2 for size in sizes):
            suite["kramers_even"] = False
            _record(suite, "spectral_kramers", i, s, float("inf"))
        _record(suite, "spectral", i, s, max(rec, eig_res))
    return suite


def run_sp1_su2_suite(seed: int, trials: int, tol: float = 1e-12) -> dict:
    """Group homomorphism into SU(2) on random unit-quaternion pairs."""
    suite = _suite(trials, tol)
    eye = np.eye(2)
    for i in range(trials):
        s = trial_seed(seed, i, "sp1-su2")
        rng = np.random.default_rng(s)
        qs = []
        for _ in range(2):
            q = Quaternion(*rng.standard_normal(4))
            qs.append(q * (1.0 / q.norm()))
        a, b = qs
        hom = float(np.max(np.abs(sp1_to_su2(a * b) - sp1_to_su2(a) @ sp1_to_su2(b))))
        member = 0.0
        for q in qs:
            u = sp1_to_su2(q)
            member = max(member,
                         float(np.max(np.abs(u @ u.conj().T - eye))),
                         abs(float(np.linalg.det(u).real) - 1.0),
                         abs(float(np.linalg.det(u).imag)))
        _record(suite, "sp1_su2", i, s, max(hom, member))
    return suite


def run_basis_suite(dims: list[int], tol: float = 1e-12, seed: int = 0) -> dict:
    """Cardinality, orthonormality, and completeness of the self-adjoint basis."""
    suite = _suite(len(dims), tol)
    suite["cardinality_ok"] = True
    for i, d in enumerate(dims):
        s = trial_seed(seed, i, "sa-basis")
        basis = hmat.sa_basis(d)
        if len(basis) != d * (2 * d - 1):
            suite["cardinality_ok"] = False
            _record(suite, "basis_cardinality", i, s, float("inf"))
            continue
        gram = np.array([[hmat.hs_form(x, y) for y in basis] for x in basis])
        gram_dev = float(np.max(np.abs(gram - np.eye(len(basis)))))
        _record(suite, "basis_gram", i, s, gram_dev)

        rng = np.random.default_rng(s)
        a = hmat.random_self_adjoint(rng, d)
        rec = QMatrix.zeros(d, d)
        for y in basis:
            rec = rec + y * hmat.hs_form(y, a)
        rec_dev = (rec - a).frob() / max(1.0, a.frob())
        if rec_dev > 1e-10:
            _record(suite, "basis_reconstruction", i, s, rec_dev)
    return suite


def run_verification(seed: int, dims: list[int], trials: int,
                     mode: str = "default",
                     tolerance: float = DEFAULT_EQUIV_TOL) -> dict:
    """Full verification run: both equivalence campaigns plus the invariant
    suites, merged into one deterministic JSON-ready report."""
    dims = [int(d) for d in dims]
    measurement = run_measurement_campaign(seed, dims, trials, tol=tolerance)
    channel = run_channel_campaign(seed, dims, trials, mode=mode, tol=tolerance)

    suite_trials = max(1, trials // 5)
    suites = {
        "embedding_laws": run_embedding_suite(seed, dims, suite_trials),
        "inner_product": run_inner_product_suite(seed, dims, suite_trials),
        "trace_structure": run_trace_suite(seed, dims, suite_trials),
        "spectral": run_spectral_suite(seed, dims, suite_trials),
        "sp1_su2": run_sp1_su2_suite(seed, suite_trials),
        "sa_basis": run_basis_suite([d for d in dims if d <= 8], seed=seed),
    }

    if measurement["max_residual"] >= channel["max_residual"]:
        worst_seed = measurement["worst_seed"]
    else:
        worst_seed = channel["worst_seed"]

    violations = list(measurement["violations"]) + list(channel["violations"])
    for s in suites.values():
        violations.extend(s["violations"])
    ok = (measurement["pass"] and channel["pass"]
          and all(s["pass"] for s in suites.values()))

    return {
        "schema": 1,
        "command": "verify",
        "seed": int(seed),
        "dims": dims,
        "trials": int(trials),
        "mode": mode,
        "tolerance": float(tolerance),
        "max_measurement_dev": measurement["max_residual"],
        "max_channel_dev": channel["max_residual"],
        "worst_seed": int(worst_seed),
        "campaigns": {"measurement": measurement, "channel": channel},
        "suites": suites,
        "violations": violations,
        "pass": ok,
    }
