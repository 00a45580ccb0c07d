"""State-space bridge between the 3-sphere model and the 1970 unit-ball model.

A hidden state is a pair (e_o, s_o). The angle eta_z_so between s_o and the
reference axis z fixes a visibility threshold through the winding-indexed
mapping

    f(eta) = -1 + 2 / sqrt(1 + 3*eta/(kappa*pi)),   eta in [0, kappa*pi],

which equals cos(pi*r/2) for the unit-ball radial coordinate r. Sampling
eta_z_so UNIFORMLY on [0, kappa*pi] makes the mapping the inverse CDF of
the threshold: the induced threshold density is (8/3)(1+f)^-3 on [0, 1],
i.e. the radial density (pi/3) tan(pi r/4) sec^4(pi r/4). This is the
validated choice: with it, the correlation over the pre-selected ensemble
reproduces -cos(eta_ab) at every angle (see tests/test_pearle.py for the
Monte Carlo validation against independent oracles).

Three modes:

* ``s3``            pre-selected ensemble; a state is admitted only if
                    |n.e_o| >= f for the run's realized settings, so every
                    admitted state yields a definite outcome at both wings
                    and the detected fraction is one as a count identity.
* ``pearle-reject`` the original reading, kept as a contrast baseline
                    (non-normative): all states are emitted, each wing
                    discards events below its threshold, so g < 1.
* ``flat``          f == 0: no threshold, flat-space sign outcomes, the
                    saw-tooth correlation -1 + 2*eta/pi.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import _require_unit
from .curves import CorrelationCurve, CurvePoint
from .rng import fair_coin, substream, uniform_sphere
from .singlet import CorrelationEstimate

MODES = ("s3", "pearle-reject", "flat")

_DENOM_TOL = 1e-12


def _check_kappa(kappa: int) -> int:
    if not isinstance(kappa, (int, np.integer)) or kappa < 1:
        raise ValueError("winding index kappa must be a positive integer")
    return int(kappa)


def pearle_f(eta, kappa: int = 1):
    """Threshold f(eta) = -1 + 2/sqrt(1 + 3*eta/(kappa*pi)).

    Strictly decreasing from f(0) = 1 to f(kappa*pi) = 0.
    """
    kappa = _check_kappa(kappa)
    eta = np.asarray(eta, dtype=float)
    if np.any(eta < -1e-12) or np.any(eta > kappa * np.pi + 1e-12):
        raise ValueError("eta outside the mapping domain [0, kappa*pi]")
    return -1.0 + 2.0 / np.sqrt(1.0 + 3.0 * np.clip(eta, 0.0, kappa * np.pi) / (kappa * np.pi))


def pearle_f_complement(eta, kappa: int = 1):
    """Mirror branch f(kappa*pi - eta) = -1 + 2/sqrt(4 - 3*eta/(kappa*pi))."""
    kappa = _check_kappa(kappa)
    eta = np.asarray(eta, dtype=float)
    if np.any(eta < -1e-12) or np.any(eta > kappa * np.pi + 1e-12):
        raise ValueError("eta outside the mapping domain [0, kappa*pi]")
    return -1.0 + 2.0 / np.sqrt(4.0 - 3.0 * np.clip(eta, 0.0, kappa * np.pi) / (kappa * np.pi))


@dataclass(frozen=True)
class PearleMapping:
    """Winding-indexed threshold mapping with its unit-ball coordinates."""

    kappa: int = 1

    def __post_init__(self):
        _check_kappa(self.kappa)

    @property
    def domain(self) -> tuple[float, float]:
        return (0.0, self.kappa * np.pi)

    def f(self, eta):
        return pearle_f(eta, self.kappa)

    def f_complement(self, eta):
        return pearle_f_complement(eta, self.kappa)

    def radial_coordinate(self, eta):
        """Unit-ball radius r with cos(pi*r/2) = f(eta); rotation angle pi*r."""
        return (2.0 / np.pi) * np.arccos(np.clip(self.f(eta), -1.0, 1.0))

    @staticmethod
    def threshold_density(f):
        """Density of the threshold under uniform eta_z_so: (8/3)(1+f)^-3."""
        f = np.asarray(f, dtype=float)
        return (8.0 / 3.0) * (1.0 + f) ** -3


@dataclass(frozen=True)
class InitialState:
    """Admissible hidden state: measurement axis pair plus its threshold."""

    e_o: np.ndarray
    s_o: np.ndarray
    eta_z_so: float
    threshold: float


@dataclass(frozen=True)
class ProbabilityTable:
    """Empirical detection probabilities at one setting angle, as fractions
    of emitted pairs. Outcome 0 means the wing did not detect."""

    eta: float
    n: int
    p_pp: float
    p_mm: float
    p_pm: float
    p_mp: float
    p_single_plus_1: float
    p_single_minus_1: float
    p_single_plus_2: float
    p_single_minus_2: float
    p_00: float
    p_p0: float
    p_m0: float
    p_0p: float
    p_0m: float
    g: float

    def joint_sum(self) -> float:
        return self.p_pp + self.p_mm + self.p_pm + self.p_mp

    def zero_event_sum(self) -> float:
        return self.p_00 + self.p_p0 + self.p_m0 + self.p_0p + self.p_0m

    def to_dict(self) -> dict:
        return {
            "eta_deg": float(np.degrees(self.eta)), "n": self.n,
            "p_pp": self.p_pp, "p_mm": self.p_mm, "p_pm": self.p_pm, "p_mp": self.p_mp,
            "p_single_plus_1": self.p_single_plus_1, "p_single_minus_1": self.p_single_minus_1,
            "p_single_plus_2": self.p_single_plus_2, "p_single_minus_2": self.p_single_minus_2,
            "p_00": self.p_00, "p_p0": self.p_p0, "p_m0": self.p_m0,
            "p_0p": self.p_0p, "p_0m": self.p_0m, "g": self.g,
        }


@dataclass(frozen=True)
class PairRecord:
    state: InitialState
    A: int
    B: int


@dataclass(frozen=True)
class EnsembleRun:
    """Array view of one simulated setting pair: outcomes (0 = no detection),
    emitted/admitted counts, and the settings."""

    a: np.ndarray
    b: np.ndarray
    A: np.ndarray
    B: np.ndarray
    n_emitted: int
    n_admitted: int
    mode: str
    kappa: int

    @property
    def n_detected_pairs(self) -> int:
        return int(np.sum((self.A != 0) & (self.B != 0)))


def _sign(x) -> np.ndarray:
    # sign(0) := +1 (deterministic tie-break; measure-zero event)
    return np.where(np.asarray(x) >= 0.0, 1, -1)


def _draw_states(rng, n: int, kappa: int):
    """Candidate states: e_o uniform on S^2; eta_z_so uniform on [0, kappa*pi]
    (the validated density, see module docstring); s_o at that polar angle
    from z with uniform azimuth."""
    e_o = uniform_sphere(rng, n)
    eta = rng.uniform(0.0, kappa * np.pi, size=n)
    f = pearle_f(eta, kappa)
    polar = np.mod(eta, 2.0 * np.pi)
    polar = np.where(polar > np.pi, 2.0 * np.pi - polar, polar)
    az = rng.uniform(0.0, 2.0 * np.pi, size=n)
    s_o = np.stack([np.sin(polar) * np.cos(az), np.sin(polar) * np.sin(az),
                    np.cos(polar)], axis=-1)
    return e_o, eta, f, s_o


def admissible(e_o, f, *settings) -> np.ndarray:
    """Membership condition of the pre-selected ensemble: |n.e_o| >= f for
    every realized setting n. At f = 1 the admissibility cone collapses to
    e_o exactly (anti)parallel to each setting."""
    e_o = np.asarray(e_o, dtype=float)
    f = np.asarray(f, dtype=float)
    ok = np.ones(np.broadcast_shapes(e_o.shape[:-1], f.shape), dtype=bool)
    for n_vec in settings:
        n_vec = _require_unit(n_vec, "setting", 3)
        ok &= np.abs(e_o @ n_vec) >= f
    return ok


def ensemble_sample(n: int, seed: int, *, a, b, kappa: int = 1,
                    max_batches: int = 1000) -> list[InitialState]:
    """Pre-selected ensemble of n admissible states for settings (a, b).

    Admission is checked against the run's realized measurement context;
    every admitted state yields a definite +/-1 outcome at both wings, so
    downstream detection never discards (one-to-one correspondence between
    admitted and detected states).
    """
    if n < 1:
        raise ValueError("ensemble size n must be >= 1")
    a = _require_unit(a, "a", 3)
    b = _require_unit(b, "b", 3)
    kappa = _check_kappa(kappa)
    rng = substream(seed)
    out: list[InitialState] = []
    batch = max(1024, n)
    for _ in range(max_batches):
        e_o, eta, f, s_o = _draw_states(rng, batch, kappa)
        keep = np.flatnonzero(admissible(e_o, f, a, b))
        for i in keep:
            out.append(InitialState(e_o=e_o[i], s_o=s_o[i],
                                    eta_z_so=float(eta[i]), threshold=float(f[i])))
            if len(out) == n:
                return out
    raise RuntimeError(f"rejection sampling did not yield {n} admissible states "
                       f"within {max_batches} batches")


def run_pair(a, b, n: int, rng_or_seed, mode: str = "s3", kappa: int = 1,
             max_batches: int = 1000) -> EnsembleRun:
    """Simulate one setting pair and return outcome arrays.

    s3: n admitted states, all detected (A, B in {-1, +1}).
    pearle-reject: n emitted states, per-wing rejection (0 = undetected).
    flat: n states, no threshold.
    rng_or_seed: an integer seed (root substream) or a Generator.
    """
    a = _require_unit(a, "a", 3)
    b = _require_unit(b, "b", 3)
    if n < 1:
        raise ValueError("ensemble size n must be >= 1")
    if mode not in MODES:
        raise ValueError(f"unknown model mode {mode!r}; choose from {MODES}")
    kappa = _check_kappa(kappa)
    rng = rng_or_seed if isinstance(rng_or_seed, np.random.Generator) else substream(rng_or_seed)

    if mode == "flat":
        e_o = uniform_sphere(rng, n)
        lam = fair_coin(rng, n)
        A = lam * _sign(e_o @ a)
        B = -lam * _sign(e_o @ b)
        return EnsembleRun(a=a, b=b, A=A, B=B, n_emitted=n, n_admitted=n,
                           mode=mode, kappa=kappa)

    if mode == "pearle-reject":
        e_o, _, f, _ = _draw_states(rng, n, kappa)
        lam = fair_coin(rng, n)
        det1 = np.abs(e_o @ a) >= f
        det2 = np.abs(e_o @ b) >= f
        A = np.where(det1, lam * _sign(e_o @ a), 0)
        B = np.where(det2, -lam * _sign(e_o @ b), 0)
        return EnsembleRun(a=a, b=b, A=A, B=B, n_emitted=n,
                           n_admitted=int(np.sum(det1 & det2)), mode=mode, kappa=kappa)

    # s3: accumulate admitted states until n reached, all detected
    As: list[np.ndarray] = []
    Bs: list[np.ndarray] = []
    got = 0
    batch = max(1024, n)
    for _ in range(max_batches):
        e_o, _, f, _ = _draw_states(rng, batch, kappa)
        lam = fair_coin(rng, batch)
        keep = admissible(e_o, f, a, b)
        A = (lam * _sign(e_o @ a))[keep]
        B = (-lam * _sign(e_o @ b))[keep]
        take = min(n - got, A.size)
        As.append(A[:take])
        Bs.append(B[:take])
        got += take
        if got == n:
            return EnsembleRun(a=a, b=b, A=np.concatenate(As), B=np.concatenate(Bs),
                               n_emitted=n, n_admitted=n, mode=mode, kappa=kappa)
    raise RuntimeError(f"rejection sampling did not yield {n} admissible states "
                       f"within {max_batches} batches")


def pair_records(a, b, n: int, seed: int, kappa: int = 1) -> list[PairRecord]:
    """Admitted states with their outcomes, for the s3 ensemble."""
    states = ensemble_sample(n, seed, a=a, b=b, kappa=kappa)
    rng = substream(seed, 1)
    lam = fair_coin(rng, n)
    out = []
    for state, l in zip(states, lam):
        A = int(l * _sign(np.dot(state.e_o, a)))
        B = int(-l * _sign(np.dot(state.e_o, b)))
        out.append(PairRecord(state=state, A=A, B=B))
    return out


def probabilities_from_outcomes(eta: float, A, B) -> ProbabilityTable:
    """Empirical probability table from outcome arrays (0 = no detection)."""
    A = np.asarray(A)
    B = np.asarray(B)
    if A.size == 0 or A.shape != B.shape:
        raise ValueError("outcome arrays must be nonempty and congruent")
    n = A.size
    frac = lambda mask: float(np.sum(mask) / n)
    both = (A != 0) & (B != 0)
    return ProbabilityTable(
        eta=float(eta), n=int(n),
        p_pp=frac((A == 1) & (B == 1)), p_mm=frac((A == -1) & (B == -1)),
        p_pm=frac((A == 1) & (B == -1)), p_mp=frac((A == -1) & (B == 1)),
        p_single_plus_1=frac(A == 1), p_single_minus_1=frac(A == -1),
        p_single_plus_2=frac(B == 1), p_single_minus_2=frac(B == -1),
        p_00=frac((A == 0) & (B == 0)),
        p_p0=frac((A == 1) & (B == 0)), p_m0=frac((A == -1) & (B == 0)),
        p_0p=frac((A == 0) & (B == 1)), p_0m=frac((A == 0) & (B == -1)),
        g=frac(both),
    )


def probabilities(eta: float, records) -> ProbabilityTable:
    """Empirical probability table from a stream of records with A/B fields."""
    records = list(records)
    if not records:
        raise ValueError("empty record stream")
    A = np.array([r.A for r in records])
    B = np.array([r.B for r in records])
    return probabilities_from_outcomes(eta, A, B)


def detection_fraction(eta: float, table: ProbabilityTable) -> float:
    """Detected-pair fraction g(eta) via the ratio estimator
    P12(+-)/(cos^2(eta/2)/2), cross-checked against P12(++)/(sin^2(eta/2)/2);
    the well-conditioned branch is used near the endpoints."""
    denom_pm = 0.5 * np.cos(eta / 2.0) ** 2
    denom_pp = 0.5 * np.sin(eta / 2.0) ** 2
    if denom_pm >= _DENOM_TOL:
        return table.p_pm / denom_pm
    if denom_pp >= _DENOM_TOL:
        return table.p_pp / denom_pp
    raise ValueError("both ratio-estimator branches are ill-conditioned")


def detection_fraction_branches(eta: float, table: ProbabilityTable):
    """(g from +- branch, g from ++ branch); nan where ill-conditioned."""
    denom_pm = 0.5 * np.cos(eta / 2.0) ** 2
    denom_pp = 0.5 * np.sin(eta / 2.0) ** 2
    g_pm = table.p_pm / denom_pm if denom_pm >= _DENOM_TOL else float("nan")
    g_pp = table.p_pp / denom_pp if denom_pp >= _DENOM_TOL else float("nan")
    return g_pm, g_pp


def correlation_from_probabilities(table: ProbabilityTable) -> float:
    """E = (P++ + P-- - P+- - P-+) / (P++ + P-- + P+- + P-+)."""
    total = table.joint_sum()
    if total <= 0.0:
        raise ValueError("no coincident detections in table")
    return (table.p_pp + table.p_mm - table.p_pm - table.p_mp) / total


def estimate_pair(a, b, n: int, rng_or_seed, mode: str = "s3",
                  kappa: int = 1) -> CorrelationEstimate:
    """Monte Carlo correlation for one setting pair in the given mode.

    The estimate averages A*B over detected pairs; e_analytic is -cos for
    the sphere modes and the saw-tooth for flat.
    """
    run = run_pair(a, b, n, rng_or_seed, mode, kappa)
    both = (run.A != 0) & (run.B != 0)
    prod = (run.A[both] * run.B[both]).astype(float)
    if prod.size == 0:
        raise ValueError("no coincident detections; increase n")
    eta = float(np.arccos(np.clip(np.dot(run.a, run.b), -1.0, 1.0)))
    analytic = (-1.0 + 2.0 * eta / np.pi) if mode == "flat" else -np.cos(eta)
    return CorrelationEstimate(
        e_hat=float(prod.mean()),
        stderr=float(prod.std(ddof=1) / np.sqrt(prod.size)) if prod.size > 1 else 0.0,
        n=int(prod.size), e_analytic=float(analytic))


def _planar_setting(deg: float) -> np.ndarray:
    rad = np.radians(deg)
    return np.array([np.cos(rad), np.sin(rad), 0.0])


def correlation_curve(mode: str, grid_deg, n_per_angle: int, seed: int,
                      kappa: int = 1, meta: dict | None = None) -> CorrelationCurve:
    """Correlation sweep over planar settings separated by the grid angles.

    Point i uses the (seed, i) substream, so the curve is reproducible for
    any parallel execution of its points.
    """
    if mode not in MODES:
        raise ValueError(f"unknown model mode {mode!r}; choose from {MODES}")
    grid_deg = np.asarray(grid_deg, dtype=float)
    points = [curve_point(mode, float(deg), n_per_angle, seed, i, kappa)
              for i, deg in enumerate(grid_deg)]
    base = {"model": mode, "n_per_point": str(n_per_angle), "seed": str(seed),
            "kappa": str(kappa)}
    base.update(meta or {})
    return CorrelationCurve(points=tuple(points), meta=base)


def curve_point(mode: str, deg: float, n: int, seed: int, index: int,
                kappa: int = 1) -> CurvePoint:
    """One grid point of a correlation sweep, on the (seed, index) substream."""
    a = _planar_setting(0.0)
    b = _planar_setting(deg)
    run = run_pair(a, b, n, substream(seed, index), mode, kappa)
    both = (run.A != 0) & (run.B != 0)
    prod = (run.A[both] * run.B[both]).astype(float)
    eta = np.radians(deg)
    analytic = (-1.0 + 2.0 * eta / np.pi) if mode == "flat" else -np.cos(eta)
    if mode == "s3":
        g = run.n_detected_pairs / run.n_admitted
    elif mode == "flat":
        g = 1.0
    else:
        g = run.n_admitted / run.n_emitted
    return CurvePoint(
        eta_deg=float(deg),
        e_hat=float(prod.mean()) if prod.size else float("nan"),
        e_analytic=float(analytic),
        stderr=float(prod.std(ddof=1) / np.sqrt(prod.size)) if prod.size > 1 else 0.0,
        g=float(g), n=int(prod.size))


def flat_mode_curve(n_per_angle: int, grid_deg, seed: int) -> CorrelationCurve:
    """Saw-tooth baseline sweep: f == 0, sign outcomes in flat space."""
    return correlation_curve("flat", grid_deg, n_per_angle, seed)
