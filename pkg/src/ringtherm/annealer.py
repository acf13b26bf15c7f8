"""Machine profiles, the offset temperature model, and the synthetic backend.

A MachineProfile carries a device's end-of-anneal energy scale B(1) (kelvin),
its cryostat temperature (kelvin), and two tables over annealing time tau
(microseconds): the dimensionless slope alpha(tau) and offset tbar(tau) of
the scaling law

    t_eff = tbar(tau) + alpha(tau) * T_machine / J_phys,
    J_phys = B(1) * j_enc / 2.

Between table keys, alpha and tbar are interpolated piecewise-linearly in
ln tau; outside the table the query fails unless extrapolation is enabled,
in which case the end value is held (the curves saturate at long tau).

``simulate_job`` stands in for a hardware run: it draws shots from the
exact wall-count PMF at the modeled t_eff and can perturb them (independent
readout spin flips, or mixing in ground-state shots) to exercise non-Gibbs
deviations. ``plan_shots`` allocates shots between a minimum and maximum by
linear interpolation along a complexity score (normalized rank of
tau * j_enc) and splits each job into submissions that fit a 1-second
wall-time budget.

Bundled demo profiles (``list_profiles``) are illustrative: B(1) and the
cryostat temperature are realistic device constants, but the alpha/tbar
tables are qualitative placeholders, not calibrated measurements.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np
from scipy.stats import rankdata

from . import kernels
from .errors import (
    DomainError,
    ExtrapolationError,
    NegativeTemperatureError,
    ParityError,
    ParseError,
    PlanInfeasibleError,
)
from .ising import RingSpec, domain_wall_pmf
from .sampling import SampleSet, draw_counts

__all__ = [
    "MachineProfile",
    "AnnealJob",
    "Perturbation",
    "TimeModel",
    "Submission",
    "SubmissionPlan",
    "load_profile",
    "list_profiles",
    "physical_coupling",
    "model_teff",
    "physical_temperature",
    "simulate_job",
    "plan_shots",
    "ingest_samples",
    "write_samples",
]

SUBMISSION_BUDGET_US = 1_000_000.0  # 1 second per submission


@dataclass(frozen=True)
class MachineProfile:
    name: str
    b1_kelvin: float
    t_machine_kelvin: float
    alpha_table: dict = field(default_factory=dict)
    tbar_table: dict = field(default_factory=dict)
    notes: str = ""

    def __post_init__(self):
        if self.b1_kelvin <= 0 or self.t_machine_kelvin <= 0:
            raise DomainError("b1_kelvin and t_machine_kelvin must be positive")
        alpha = {float(k): float(v) for k, v in self.alpha_table.items()}
        tbar = {float(k): float(v) for k, v in self.tbar_table.items()}
        if set(alpha) != set(tbar):
            raise DomainError("alpha_table and tbar_table must share tau keys")
        if not alpha:
            raise DomainError("profile tables must not be empty")
        if any(v < 0 for v in alpha.values()) or any(v < 0 for v in tbar.values()):
            raise DomainError("table values must be >= 0")
        if any(k <= 0 for k in alpha):
            raise DomainError("tau keys must be positive microseconds")
        object.__setattr__(self, "alpha_table", alpha)
        object.__setattr__(self, "tbar_table", tbar)

    @property
    def tau_range(self) -> tuple:
        keys = sorted(self.alpha_table)
        return keys[0], keys[-1]


@dataclass(frozen=True)
class AnnealJob:
    ring: RingSpec
    j_enc: float
    tau_us: float
    shots: int = 0

    def __post_init__(self):
        if not 0.0 < self.j_enc <= 1.0:
            raise DomainError(f"j_enc must lie in (0, 1], got {self.j_enc}")
        if not self.tau_us > 0:
            raise DomainError(f"tau_us must be positive, got {self.tau_us}")
        if self.shots < 0:
            raise DomainError("shots must be >= 0")


@dataclass(frozen=True)
class Perturbation:
    """Optional non-Gibbs distortion applied to synthetic samples.

    ``readout_flip`` materializes each shot's spin configuration, flips
    every spin independently with probability p < 0.5, and recounts walls;
    ``ground_state_mix`` replaces each shot by the one-wall ground state
    with probability w (w = 1 freezes every shot).
    """

    kind: str = "none"
    probability: float = 0.0

    def __post_init__(self):
        if self.kind not in ("none", "readout_flip", "ground_state_mix"):
            raise DomainError(f"unknown perturbation kind {self.kind!r}")
        if self.kind == "readout_flip" and not 0.0 <= self.probability < 0.5:
            raise DomainError("readout_flip probability must lie in [0, 0.5)")
        if self.kind == "ground_state_mix" and not 0.0 <= self.probability <= 1.0:
            raise DomainError("ground_state_mix weight must lie in [0, 1]")
        if self.kind == "none" and self.probability != 0.0:
            raise DomainError("perturbation 'none' takes no parameter")

    @classmethod
    def parse(cls, text: str) -> "Perturbation":
        text = text.strip()
        if text in ("", "none"):
            return cls()
        if ":" not in text:
            raise DomainError(f"expected 'kind:parameter', got {text!r}")
        kind, _, param = text.partition(":")
        try:
            return cls(kind.strip(), float(param))
        except ValueError as exc:
            raise DomainError(f"bad perturbation parameter in {text!r}") from exc

    def __str__(self):
        if self.kind == "none":
            return "none"
        return f"{self.kind}:{self.probability:g}"


NO_PERTURBATION = Perturbation()


@dataclass(frozen=True)
class TimeModel:
    """Per-shot and per-submission overheads in microseconds."""

    readout_us: float = 150.0
    programming_us: float = 10_000.0
    thermalization_us: float = 10.0

    def __post_init__(self):
        if min(self.readout_us, self.programming_us, self.thermalization_us) <= 0:
            raise DomainError("time model fields must be positive")

    def per_shot_us(self, tau_us: float) -> float:
        return tau_us + self.readout_us + self.thermalization_us


@dataclass(frozen=True)
class Submission:
    job_index: int
    job: AnnealJob
    shots: int
    estimated_seconds: float


@dataclass(frozen=True)
class SubmissionPlan:
    submissions: tuple
    shot_targets: tuple

    def total_shots(self, job_index: int) -> int:
        return sum(s.shots for s in self.submissions if s.job_index == job_index)


# ---------------------------------------------------------------------------
# profiles
# ---------------------------------------------------------------------------

def _profile_from_dict(data: dict, origin: str) -> MachineProfile:
    try:
        return MachineProfile(
            name=data["name"],
            b1_kelvin=float(data["b1_kelvin"]),
            t_machine_kelvin=float(data["t_machine_kelvin"]),
            alpha_table=data["alpha_table"],
            tbar_table=data["tbar_table"],
            notes=data.get("notes", ""),
        )
    except KeyError as exc:
        raise ParseError(f"profile is missing field {exc}", path=origin) from exc


def list_profiles() -> list:
    """Names of the bundled demo profiles."""
    pkg = resources.files(__package__) / "profiles"
    return sorted(p.name[: -len(".json")] for p in pkg.iterdir() if p.name.endswith(".json"))


def load_profile(name_or_path) -> MachineProfile:
    """Load a profile by bundled name or from a JSON file path."""
    path = Path(name_or_path)
    if path.suffix == ".json" or path.exists():
        try:
            data = json.loads(path.read_text(encoding="utf-8"))
        except OSError as exc:
            raise ParseError(f"cannot read profile: {exc}", path=str(path)) from exc
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid profile JSON: {exc}", path=str(path)) from exc
        return _profile_from_dict(data, str(path))
    pkg = resources.files(__package__) / "profiles" / f"{name_or_path}.json"
    try:
        data = json.loads(pkg.read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise ParseError(
            f"unknown profile {name_or_path!r}; bundled: {', '.join(list_profiles())}"
        ) from None
    return _profile_from_dict(data, str(name_or_path))


# ---------------------------------------------------------------------------
# three-temperature model
# ---------------------------------------------------------------------------

def physical_coupling(profile: MachineProfile, j_enc: float) -> float:
    """End-of-anneal coupling in kelvin: B(1) * j_enc / 2."""
    if not 0.0 <= j_enc <= 1.0:
        raise DomainError(f"j_enc must lie in [0, 1], got {j_enc}")
    return profile.b1_kelvin * j_enc / 2.0

def _interp_log_tau(table: dict, tau_us: float, allow_extrapolation: bool) -> float:
    keys = sorted(table)
    if tau_us <= 0 or not math.isfinite(tau_us):
        raise DomainError(f"tau_us must be positive and finite, got {tau_us}")
    if tau_us < keys[0] or tau_us > keys[-1]:
        if not allow_extrapolation:
            raise ExtrapolationError(
                f"tau = {tau_us} us outside table range [{keys[0]}, {keys[-1]}] "
                "and extrapolation is disabled"
            )
        return table[keys[0]] if tau_us < keys[0] else table[keys[-1]]
    logk = np.log(keys)
    vals = np.array([table[k] for k in keys])
    return float(np.interp(math.log(tau_us), logk, vals))


def model_teff(
    profile: MachineProfile, j_enc: float, tau_us: float, allow_extrapolation: bool = False
) -> float:
    """Modeled effective temperature tbar(tau) + alpha(tau) T_machine / J_phys."""
    if not 0.0 < j_enc <= 1.0:
        raise DomainError(f"j_enc must lie in (0, 1], got {j_enc}")
    tbar = _interp_log_tau(profile.tbar_table, tau_us, allow_extrapolation)
    alpha = _interp_log_tau(profile.alpha_table, tau_us, allow_extrapolation)
    j_phys = physical_coupling(profile, j_enc)
    return tbar + alpha * profile.t_machine_kelvin / j_phys


def physical_temperature(j_phys: float, t_eff: float, tbar: float = 0.0) -> float:
    """Offset-corrected physical temperature J_phys * (t_eff - tbar), kelvin."""
    if j_phys < 0:
        raise DomainError("j_phys must be >= 0")
    if tbar < 0:
        raise DomainError("tbar must be >= 0")
    if t_eff < tbar:
        raise NegativeTemperatureError(
            f"t_eff = {t_eff} below offset tbar = {tbar}: negative physical temperature"
        )
    return j_phys * (t_eff - tbar)


# ---------------------------------------------------------------------------
# synthetic backend
# ---------------------------------------------------------------------------

def _apply_readout_flip(ring: RingSpec, counts, p: float, rng) -> np.ndarray:
    """Materialize, flip each spin with probability p, recount. Chunked."""
    n = ring.n_qb
    out = np.empty_like(counts)
    chunk = max(1, int(4_000_000 // n))
    for start in range(0, counts.size, chunk):
        kk = counts[start : start + chunk]
        sel_u = rng.random((kk.size, int(kk.max())))
        sign_bits = rng.integers(0, 2, size=kk.size, dtype=np.uint8)
        spins = kernels.realize_configs(n, kk, sel_u, sign_bits)
        flips = rng.random((kk.size, n)) < p
        spins = np.where(flips, -spins, spins).astype(np.int8)
        out[start : start + chunk] = kernels.count_walls_batch(spins)
    return out


def simulate_job(
    profile: MachineProfile,
    job: AnnealJob,
    perturbation: Perturbation = NO_PERTURBATION,
    seed: int = 0,
    allow_extrapolation: bool = False,
) -> SampleSet:
    """Synthetic annealer run: exact Gibbs shots at the modeled t_eff.

    The perturbation is applied after the Gibbs draw; spin flips preserve
    the odd-ring parity, so all recounted wall counts remain odd.
    """
    if job.shots < 1:
        raise DomainError("job.shots must be >= 1 to simulate")
    teff = model_teff(profile, job.j_enc, job.tau_us, allow_extrapolation)
    pmf = domain_wall_pmf(teff, job.ring)
    rng = np.random.default_rng(seed)
    counts = draw_counts(pmf, job.shots, rng)
    if perturbation.kind == "readout_flip" and perturbation.probability > 0:
        counts = _apply_readout_flip(job.ring, counts, perturbation.probability, rng)
    elif perturbation.kind == "ground_state_mix" and perturbation.probability > 0:
        counts = counts.copy()
        counts[rng.random(job.shots) < perturbation.probability] = 1
    meta = {
        "source": "synthetic",
        "machine": profile.name,
        "j_enc": job.j_enc,
        "tau_us": job.tau_us,
        "t_model": teff,
        "perturbation": str(perturbation),
        "seed": int(seed),
    }
    return SampleSet(job.ring, counts, meta)


# ---------------------------------------------------------------------------
# shot planning
# ---------------------------------------------------------------------------

def complexity_scores(jobs) -> np.ndarray:
    """Normalized rank of tau * j_enc in [0, 1]; ties share the average rank."""
    raw = np.array([job.tau_us * job.j_enc for job in jobs], dtype=np.float64)
    if raw.size == 1 or np.all(raw == raw[0]):
        return np.full(raw.size, 0.5)
    ranks = rankdata(raw, method="average")
    return (ranks - 1.0) / (raw.size - 1.0)


def plan_shots(jobs, min_shots: int, max_shots: int, time_model: TimeModel) -> SubmissionPlan:
    """Shot targets by complexity interpolation, split into <= 1 s submissions."""
    jobs = list(jobs)
    if not jobs:
        raise DomainError("job list must not be empty")
    if not 1 <= min_shots <= max_shots:
        raise DomainError("need 1 <= min_shots <= max_shots")
    scores = complexity_scores(jobs)
    targets = [int(round(min_shots + s * (max_shots - min_shots))) for s in scores]
    submissions = []
    for idx, (job, target) in enumerate(zip(jobs, targets)):
        per_shot = time_model.per_shot_us(job.tau_us)
        cap = int((SUBMISSION_BUDGET_US - time_model.programming_us) // per_shot)
        if cap < 1:
            raise PlanInfeasibleError(
                f"job {idx}: one shot takes {per_shot + time_model.programming_us:.0f} us, "
                f"over the {SUBMISSION_BUDGET_US:.0f} us submission budget"
            )
        remaining = target
        while remaining > 0:
            shots = min(cap, remaining)
            est = (shots * per_shot + time_model.programming_us) / 1e6
            submissions.append(Submission(idx, job, shots, est))
            remaining -= shots
    return SubmissionPlan(tuple(submissions), tuple(targets))


# ---------------------------------------------------------------------------
# sample file format
# ---------------------------------------------------------------------------

def write_samples(path, samples: SampleSet) -> None:
    """Write the documented sample format: a ring_size header, then records."""
    lines = [f"ring_size,{samples.ring.n_qb}"]
    lines.extend(f"count,{int(c)}" for c in samples.counts)
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def _parse_spins(text: str, n_qb: int, path, lineno) -> int:
    if len(text) != n_qb:
        raise ParseError(
            f"spin string has length {len(text)}, ring has {n_qb}", path=path, line=lineno
        )
    table = {"+": 1, "-": -1}
    try:
        spins = np.array([table[ch] for ch in text], dtype=np.int8)
    except KeyError as exc:
        raise ParseError(f"bad spin character {exc}", path=path, line=lineno) from None
    return int(kernels.count_walls_batch(spins[None, :])[0])


def ingest_samples(path) -> SampleSet:
    """Read a sample file; wall counts are recomputed from spin records.

    Raises ParseError with the offending line number on malformed input and
    ParityError naming the record when a count is even.
    """
    path = Path(path)
    try:
        raw = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read samples: {exc}", path=str(path)) from exc
    ring = None
    counts = []
    for lineno, line in enumerate(raw.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        tag, _, value = line.partition(",")
        tag = tag.strip()
        value = value.strip()
        if ring is None:
            if tag != "ring_size":
                raise ParseError("first record must be 'ring_size,<n>'", path=str(path), line=lineno)
            try:
                ring = RingSpec(int(value))
            except (ValueError, DomainError) as exc:
                raise ParseError(f"bad ring size: {exc}", path=str(path), line=lineno) from None
            continue
        if tag == "count":
            try:
                c = int(value)
            except ValueError:
                raise ParseError(f"bad count {value!r}", path=str(path), line=lineno) from None
            if c % 2 == 0:
                raise ParityError(
                    f"{path}:{lineno}: even wall count {c} is impossible on an odd ring"
                )
            if not 1 <= c <= ring.n_qb:
                raise ParseError(
                    f"count {c} outside [1, {ring.n_qb}]", path=str(path), line=lineno
                )
            counts.append(c)
        elif tag == "spins":
            counts.append(_parse_spins(value, ring.n_qb, str(path), lineno))
        else:
            raise ParseError(f"unknown record tag {tag!r}", path=str(path), line=lineno)
    if ring is None:
        raise ParseError("empty sample file", path=str(path))
    if not counts:
        raise ParseError("no sample records", path=str(path))
    meta = {"source": "ingested", "path": str(path)}
    manifest = path.with_name(path.name + ".manifest.json")
    if manifest.exists():
        try:
            meta["manifest"] = json.loads(manifest.read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError):
            pass
    return SampleSet(ring, np.array(counts, dtype=np.int64), meta)
