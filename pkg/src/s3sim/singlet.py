"""Event-by-event singlet measurements on the 3-sphere.

Alice's and Bob's results are the limiting scalar points of two separate
detection quaternions, each a function of one setting and the shared hidden
variable only (factorizable by construction). The joint value of a run is
the limiting scalar of the product quaternion: -a.b when the source
conserves zero spin (s1 = s2), -1 otherwise. Outcomes are evaluated AT the
limit; the pre-limit quaternion is exposed at a caller-chosen angle for the
axis-limit diagnostics.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from .algebra import _require_unit
from .rng import fair_coin, substream, uniform_sphere

WINDING_RULES = ("zero", "random-parity", "angle-threshold")


@dataclass(frozen=True)
class HiddenVariable:
    """Per-run common cause: a fair coin lam and the spin axes s1, s2."""

    lam: int
    s1: np.ndarray
    s2: np.ndarray
    conservation: bool = True

    def __post_init__(self):
        if self.lam not in (-1, 1):
            raise ValueError("lam must be -1 or +1")
        object.__setattr__(self, "s1", _require_unit(self.s1, "s1", 3))
        object.__setattr__(self, "s2", _require_unit(self.s2, "s2", 3))
        if self.conservation and not np.array_equal(self.s1, self.s2):
            raise ValueError("conservation of zero spin requires s1 == s2 exactly")


@dataclass(frozen=True)
class RunRecord:
    a: np.ndarray
    b: np.ndarray
    hv: HiddenVariable
    A: int
    B: int
    joint_limit: float
    kappa_a: int = 0
    kappa_b: int = 0


@dataclass(frozen=True)
class CorrelationEstimate:
    e_hat: float
    stderr: float
    n: int
    e_analytic: float


@dataclass(frozen=True)
class SignProductDiagnostic:
    """Average of A*B under an explicit winding rule, with the empirical
    frequency of each outcome pair."""

    estimate: CorrelationEstimate
    counts: dict
    winding_rule: str


@dataclass(frozen=True)
class OutcomeEnsemble:
    """Vectorized view of n runs at fixed settings."""

    lam: np.ndarray
    A: np.ndarray
    B: np.ndarray
    joint: np.ndarray
    kappa_a: np.ndarray
    kappa_b: np.ndarray
    s1: np.ndarray
    s2: np.ndarray


def draw_hidden_variable(rng: np.random.Generator, conservation: bool = True) -> HiddenVariable:
    """One hidden variable: fair-coin lam, spin axis uniform on the sphere
    (both axes alias under conservation, independent otherwise)."""
    lam = int(fair_coin(rng))
    s1 = uniform_sphere(rng)
    s2 = s1 if conservation else uniform_sphere(rng)
    return HiddenVariable(lam=lam, s1=s1, s2=s2, conservation=conservation)


def measure_alice(a, hv: HiddenVariable, eta: float = 0.0, kappa: int = 0):
    """Alice's detection quaternion at detector-spin angle eta and her
    limiting scalar outcome.

    Returns (+lam * [cos(eta) + (I.r1) sin(eta)], A) with
    r1 = (a x s1)/|a x s1| and A = +lam * (-1)**kappa. At eta = 0 the
    quaternion is the scalar +/-1 itself.
    """
    a = _require_unit(a, "a", 3)
    if eta < 0:
        raise ValueError("detector-spin angle eta must be >= 0")
    if kappa < 0:
        raise ValueError("winding count kappa must be >= 0")
    if eta == 0.0:
        q = hv.lam * np.array([1.0, 0.0, 0.0, 0.0])
    else:
        r1 = np.cross(a, hv.s1)
        norm = np.linalg.norm(r1)
        if norm < 1e-12:
            raise ValueError("rotation axis undefined: a parallel to s1 with eta > 0")
        q = hv.lam * np.concatenate([[np.cos(eta)], np.sin(eta) * r1 / norm])
    return q, hv.lam * (-1) ** kappa


def measure_bob(b, hv: HiddenVariable, eta: float = 0.0, kappa: int = 0):
    """Bob's detection quaternion and limiting scalar outcome.

    Returns (-lam * [cos(eta) + (I.r2) sin(eta)], B) with
    r2 = (s2 x b)/|s2 x b| and B = -lam * (-1)**kappa.
    """
    b = _require_unit(b, "b", 3)
    if eta < 0:
        raise ValueError("detector-spin angle eta must be >= 0")
    if kappa < 0:
        raise ValueError("winding count kappa must be >= 0")
    if eta == 0.0:
        q = -hv.lam * np.array([1.0, 0.0, 0.0, 0.0])
    else:
        r2 = np.cross(hv.s2, b)
        norm = np.linalg.norm(r2)
        if norm < 1e-12:
            raise ValueError("rotation axis undefined: b parallel to s2 with eta > 0")
        q = -hv.lam * np.concatenate([[np.cos(eta)], np.sin(eta) * r2 / norm])
    return q, -hv.lam * (-1) ** kappa


def joint_limit_value(a, b, hv: HiddenVariable) -> float:
    """Limiting scalar of the product quaternion for one run.

    -a.b when the spin axes coincide (conserved source), -1 otherwise;
    the scalar part of -q(eta_ab, r0) once the composite axis has shrunk
    to zero during joint detection.
    """
    a = _require_unit(a, "a", 3)
    b = _require_unit(b, "b", 3)
    if hv.conservation:
        return float(-np.dot(a, b))
    return -1.0


def _planar_azimuth_deg(v) -> float:
    return float(np.degrees(np.arctan2(v[1], v[0])))


def _windings(rule: str, rng: np.random.Generator, a, b, s: np.ndarray):
    """Per-run winding counts for both wings. Each count depends only on
    that wing's setting and the hidden variable, so equal settings always
    get equal windings."""
    n = s.shape[0]
    if rule == "zero":
        k = np.zeros(n, dtype=int)
        return k, k
    if rule == "random-parity":
        k = rng.integers(0, 2, size=n)
        return k, k
    if rule == "angle-threshold":
        chi = rng.uniform(0.0, 2.0 * np.pi, size=n)
        eta_a = np.arccos(np.clip(s @ a, -1.0, 1.0))
        eta_b = np.arccos(np.clip(s @ b, -1.0, 1.0))
        ka = np.floor((chi + 2.0 * eta_a) / np.pi).astype(int) % 4
        kb = np.floor((chi + 2.0 * eta_b) / np.pi).astype(int) % 4
        return ka, kb
    raise ValueError(f"unknown winding rule {rule!r}; choose from {WINDING_RULES}")


def simulate_outcomes(a, b, n: int, seed: int, conservation: bool = True,
                      winding_rule: str = "zero") -> OutcomeEnsemble:
    """Draw n runs at fixed settings and evaluate all outcomes at the limit."""
    a = _require_unit(a, "a", 3)
    b = _require_unit(b, "b", 3)
    if n < 1:
        raise ValueError("ensemble size n must be >= 1")
    rng = substream(seed)
    lam = fair_coin(rng, n)
    s1 = uniform_sphere(rng, n)
    s2 = s1 if conservation else uniform_sphere(rng, n)
    ka, kb = _windings(winding_rule, rng, a, b, s1)
    return OutcomeEnsemble(
        lam=lam, A=lam * (-1) ** ka, B=-lam * (-1) ** kb,
        joint=np.full(n, -float(np.dot(a, b)) if conservation else -1.0),
        kappa_a=ka, kappa_b=kb, s1=s1, s2=s2)


def simulate_runs(a, b, n: int, seed: int, conservation: bool = True,
                  winding_rule: str = "zero") -> list[RunRecord]:
    """RunRecord stream for the same draws as simulate_outcomes."""
    ens = simulate_outcomes(a, b, n, seed, conservation, winding_rule)
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    out = []
    for i in range(n):
        hv = HiddenVariable(lam=int(ens.lam[i]), s1=ens.s1[i],
                            s2=ens.s1[i] if conservation else ens.s2[i],
                            conservation=conservation)
        out.append(RunRecord(a=a, b=b, hv=hv, A=int(ens.A[i]), B=int(ens.B[i]),
                             joint_limit=float(ens.joint[i]),
                             kappa_a=int(ens.kappa_a[i]), kappa_b=int(ens.kappa_b[i])))
    return out


def records_to_csv(records, fileobj) -> None:
    """Dump a RunRecord stream: a_theta, b_theta (planar azimuths, degrees),
    lambda, A, B, joint_limit."""
    w = csv.writer(fileobj)
    w.writerow(["a_theta", "b_theta", "lambda", "A", "B", "joint_limit"])
    for r in records:
        w.writerow([
            format(_planar_azimuth_deg(r.a), ".9g"), format(_planar_azimuth_deg(r.b), ".9g"),
            r.hv.lam, r.A, r.B, format(r.joint_limit, ".9g"),
        ])


def correlation(a, b, n: int, seed: int, conservation: bool = True) -> CorrelationEstimate:
    """Ensemble average of the per-run joint limit values.

    Under conservation every run contributes -a.b, so the estimate equals
    -cos(eta_ab) to machine precision and the sample spread is floating-point
    noise only; without conservation every run contributes -1.
    """
    values = simulate_outcomes(a, b, n, seed, conservation).joint
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    e_hat = float(values.mean())
    stderr = float(values.std(ddof=1) / np.sqrt(n)) if n > 1 else 0.0
    eta_ab = float(np.arccos(np.clip(np.dot(a, b), -1.0, 1.0)))
    return CorrelationEstimate(e_hat=e_hat, stderr=stderr, n=n, e_analytic=float(-np.cos(eta_ab)))


def sign_product_diagnostic(a, b, n: int, seed: int,
                            winding_rule: str = "zero") -> SignProductDiagnostic:
    """Average of A*B under a winding rule, with outcome-pair frequencies.

    Exploratory: no winding rule is 'the' model. The normative expectation
    comes from correlation(), i.e. the limit of the product quaternion; this
    diagnostic shows how per-wing sign fluctuations distribute the four
    outcome pairs while equal settings stay perfectly anti-correlated.
    """
    if winding_rule not in WINDING_RULES:
        raise ValueError(f"unknown winding rule {winding_rule!r}; choose from {WINDING_RULES}")
    ens = simulate_outcomes(a, b, n, seed, True, winding_rule)
    A, B = ens.A, ens.B
    prod = (A * B).astype(float)
    counts = {
        "++": int(np.sum((A == 1) & (B == 1))),
        "+-": int(np.sum((A == 1) & (B == -1))),
        "-+": int(np.sum((A == -1) & (B == 1))),
        "--": int(np.sum((A == -1) & (B == -1))),
    }
    eta_ab = float(np.arccos(np.clip(np.dot(np.asarray(a, float), np.asarray(b, float)), -1.0, 1.0)))
    est = CorrelationEstimate(
        e_hat=float(prod.mean()),
        stderr=float(prod.std(ddof=1) / np.sqrt(n)) if n > 1 else 0.0,
        n=n, e_analytic=float(-np.cos(eta_ab)))
    return SignProductDiagnostic(estimate=est, counts=counts, winding_rule=winding_rule)
