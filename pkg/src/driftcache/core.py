"""Shared domain types, their invariants, and the deterministic RNG contract.

All value objects are immutable after construction (frozen dataclasses with
read-only numpy arrays) and safe to share across workers.  Every stochastic
operation in the package takes an explicit ``numpy.random.Generator`` stream
derived from a single 64-bit seed, so identical seed + config reproduces
identical output bit for bit.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass, field, replace

import numpy as np

__all__ = [
    "RngSeed",
    "SystemParams",
    "PopularityProfile",
    "CachingPolicy",
    "RequestTrace",
    "stream",
    "child_seed",
    "text_key",
    "validate_params",
    "normalize_profile",
    "zipf_profile",
]

PROB_SUM_TOL = 1e-12


class ParamError(ValueError):
    """A domain object violates one of its invariants."""


# ---------------------------------------------------------------------------
# RNG plumbing


@dataclass(frozen=True)
class RngSeed:
    """64-bit master seed; every stream in a run derives from it."""

    seed: int

    def __post_init__(self):
        if not (0 <= self.seed < 2**64):
            raise ParamError("seed must be an unsigned 64-bit integer")


def child_seed(seed, *key):
    """Deterministic child SeedSequence for (seed, key path).

    Independent of call order: the same key path always yields the same
    stream, which is what makes parallel merges reproducible.
    """
    base = seed.seed if isinstance(seed, RngSeed) else int(seed)
    return np.random.SeedSequence(base, spawn_key=tuple(int(k) & 0xFFFFFFFF for k in key))


def stream(seed, *key):
    """Generator for the given seed and key path."""
    return np.random.Generator(np.random.PCG64(child_seed(seed, *key)))


def text_key(text):
    """Two stable 32-bit words from a string, for keying streams by content."""
    digest = hashlib.sha256(text.encode()).digest()
    return (
        int.from_bytes(digest[:4], "little"),
        int.from_bytes(digest[4:8], "little"),
    )


# ---------------------------------------------------------------------------
# System parameters


@dataclass(frozen=True)
class SystemParams:
    """Physical and model constants for one scenario.

    Densities are points per square meter, radii in meters, file size in
    bits, backhaul rate in bits/s, slot duration in seconds.  miss_density
    is the station density used inside the per-file miss weight; it defaults
    to sbs_density (the stations that actually hold caches), with the user
    density selectable for the alternative reading.
    """

    user_density: float
    sbs_density: float
    bs_density: float
    comm_radius: float
    bs_radius: float
    n_files: int
    cache_size: int
    file_size_bits: float
    backhaul_rate: float
    slot_duration: float
    miss_density: float | None = None

    def __post_init__(self):
        if self.miss_density is None:
            object.__setattr__(self, "miss_density", self.sbs_density)

    # Derived quantities used throughout.
    @property
    def loss_scale(self) -> float:
        """Backhaul time overhead of one full-file miss."""
        return self.file_size_bits / self.backhaul_rate

    @property
    def miss_exponent(self) -> float:
        """Density * pi * comm_radius^2 inside the miss weight."""
        return self.miss_density * math.pi * self.comm_radius**2

    @property
    def mean_sbs_neighbors(self) -> float:
        return self.sbs_density * math.pi * self.comm_radius**2

    @property
    def mean_users_in_coverage(self) -> float:
        return self.user_density * math.pi * self.bs_radius**2

    @property
    def mean_sbs_in_coverage(self) -> float:
        return self.sbs_density * math.pi * self.bs_radius**2

    @property
    def void_exponent(self) -> float:
        """user_density * pi * bs_radius^2, the empty-coverage exponent."""
        return self.user_density * math.pi * self.bs_radius**2

    def with_miss_density(self, density: float) -> "SystemParams":
        return replace(self, miss_density=density)


_POSITIVE_FIELDS = (
    "user_density",
    "sbs_density",
    "bs_density",
    "comm_radius",
    "bs_radius",
    "file_size_bits",
    "backhaul_rate",
    "slot_duration",
)


def validate_params(p: SystemParams) -> SystemParams:
    """Return p unchanged iff every invariant holds, else raise ParamError."""
    for name in _POSITIVE_FIELDS:
        value = getattr(p, name)
        if not (isinstance(value, (int, float)) and math.isfinite(value) and value > 0):
            raise ParamError(f"{name} must be positive")
    if p.miss_density is not None and not (math.isfinite(p.miss_density) and p.miss_density > 0):
        raise ParamError("miss_density must be positive")
    if not (isinstance(p.n_files, int) and p.n_files >= 1):
        raise ParamError("n_files must be >= 1")
    if not (isinstance(p.cache_size, int) and p.cache_size >= 1):
        raise ParamError("cache_size must be >= 1")
    return p


# ---------------------------------------------------------------------------
# Probability vectors


def _frozen_probs(raw, n_expected=None) -> np.ndarray:
    probs = np.asarray(raw, dtype=np.float64)
    if probs.ndim != 1 or probs.size == 0:
        raise ParamError("probability vector must be 1-D and non-empty")
    if n_expected is not None and probs.size != n_expected:
        raise ParamError(f"probability vector has length {probs.size}, expected {n_expected}")
    if np.any(probs < 0) or np.any(probs > 1):
        raise ParamError("probability entries must lie in [0, 1]")
    if abs(float(probs.sum()) - 1.0) > PROB_SUM_TOL:
        raise ParamError(f"probabilities sum to {probs.sum()!r}, not 1")
    probs = probs.copy()
    probs.flags.writeable = False
    return probs


@dataclass(frozen=True)
class PopularityProfile:
    """Probability of each file being requested during one slot."""

    probs: np.ndarray
    slot: int = 0

    def __post_init__(self):
        object.__setattr__(self, "probs", _frozen_probs(self.probs))

    @property
    def n_files(self) -> int:
        return self.probs.size

    def at_slot(self, slot: int) -> "PopularityProfile":
        return PopularityProfile(self.probs, slot=slot)


@dataclass(frozen=True)
class CachingPolicy:
    """Sampling distribution from which each station draws its cache entries."""

    probs: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "probs", _frozen_probs(self.probs))

    @property
    def n_files(self) -> int:
        return self.probs.size


def _renormalize(vec: np.ndarray) -> np.ndarray:
    """Scale to unit sum and nudge the largest entry until the sum is exactly 1.0."""
    out = vec / vec.sum()
    for _ in range(5):
        residual = 1.0 - out.sum()
        if residual == 0.0:
            break
        out[np.argmax(out)] += residual
    return out


def normalize_profile(raw, slot: int = 0) -> PopularityProfile:
    """Profile proportional to a nonnegative weight vector.

    Idempotent: normalizing an already-normalized vector returns it bit for
    bit.  An all-zero vector is an error; callers that can observe empty
    request sets must apply their own fallback first.
    """
    vec = np.asarray(raw, dtype=np.float64).copy()
    if vec.ndim != 1 or vec.size == 0:
        raise ParamError("weight vector must be 1-D and non-empty")
    if np.any(vec < 0) or not np.all(np.isfinite(vec)):
        raise ParamError("weights must be finite and nonnegative")
    if not np.any(vec > 0):
        raise ParamError("all-zero weight vector cannot be normalized")
    return PopularityProfile(_renormalize(vec), slot=slot)


def zipf_profile(n_files: int, theta: float, slot: int = 0) -> PopularityProfile:
    """Power-law profile with weight i**-theta for ranks i = 1..n."""
    ranks = np.arange(1, n_files + 1, dtype=np.float64)
    return normalize_profile(ranks**-theta, slot=slot)


# ---------------------------------------------------------------------------
# Request traces


@dataclass(frozen=True)
class RequestTrace:
    """Time-stamped request events grouped by slot.

    Stored as parallel arrays sorted by (slot, arrival time).  File indices
    are 1-based, matching the on-disk format; estimator code converts at its
    boundary.  slot_duration is carried so arrival instants can be checked
    against their slot windows.
    """

    slots: np.ndarray
    times: np.ndarray
    users: np.ndarray
    files: np.ndarray
    n_files: int
    slot_duration: float
    horizon: int
    _slot_starts: np.ndarray = field(repr=False, default=None)

    def __post_init__(self):
        slots = np.ascontiguousarray(self.slots, dtype=np.int64)
        times = np.ascontiguousarray(self.times, dtype=np.float64)
        users = np.ascontiguousarray(self.users, dtype=np.int64)
        files = np.ascontiguousarray(self.files, dtype=np.int64)
        n = slots.size
        if not (times.size == users.size == files.size == n):
            raise ParamError("trace arrays must have equal length")
        if n:
            if np.any(np.diff(slots) < 0):
                raise ParamError("slot indices must be nondecreasing")
            if slots[0] < 0 or slots[-1] >= self.horizon:
                raise ParamError("slot indices must lie in [0, horizon)")
            if np.any(files < 1) or np.any(files > self.n_files):
                raise ParamError("file indices must lie in 1..n_files")
            lo = slots * self.slot_duration
            if np.any(times < lo) or np.any(times >= lo + self.slot_duration):
                raise ParamError("arrival times must fall inside their slot window")
        for arr in (slots, times, users, files):
            arr.flags.writeable = False
        object.__setattr__(self, "slots", slots)
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "users", users)
        object.__setattr__(self, "files", files)
        starts = np.searchsorted(slots, np.arange(self.horizon + 1))
        starts.flags.writeable = False
        object.__setattr__(self, "_slot_starts", starts)

    def __len__(self) -> int:
        return self.slots.size

    def slot_slice(self, start: int, stop: int) -> slice:
        """Index range of requests with slot in [start, stop)."""
        start = max(0, min(start, self.horizon))
        stop = max(start, min(stop, self.horizon))
        return slice(int(self._slot_starts[start]), int(self._slot_starts[stop]))

    def files_in_slots(self, start: int, stop: int) -> np.ndarray:
        """1-based file indices of requests with slot in [start, stop)."""
        return self.files[self.slot_slice(start, stop)]

    def file_counts(self, start: int, stop: int) -> np.ndarray:
        """Per-file request counts (length n_files) over slots [start, stop)."""
        files = self.files_in_slots(start, stop)
        return np.bincount(files - 1, minlength=self.n_files).astype(np.int64)

    def slot_records(self):
        """Yield (slot, times, users, files) per populated slot, in order."""
        for s in range(self.horizon):
            sel = self.slot_slice(s, s + 1)
            if sel.stop > sel.start:
                yield s, self.times[sel], self.users[sel], self.files[sel]

    @classmethod
    def from_events(cls, slots, times, users, files, n_files, slot_duration, horizon):
        """Build a trace from unordered event arrays, sorting by (slot, time)."""
        slots = np.asarray(slots, dtype=np.int64)
        times = np.asarray(times, dtype=np.float64)
        users = np.asarray(users, dtype=np.int64)
        files = np.asarray(files, dtype=np.int64)
        order = np.lexsort((times, slots))
        return cls(slots[order], times[order], users[order], files[order],
                   n_files=n_files, slot_duration=slot_duration, horizon=horizon)
