"""Fixed-size sampling designs: SRSWOR and stratified SRSWOR.

Unit indices are 0-based throughout.  Inclusion probabilities have closed
forms for both shipped designs; an exhaustive enumeration oracle is provided
for small populations.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .errors import EnumerationCapError, ValidationError

DEFAULT_ENUMERATION_CAP = 1_000_000


@dataclass(frozen=True, eq=False)
class SamplingDesign:
    """A fixed-size design on a population of N units.

    kind "srswor": every n-subset of 0..N-1 equiprobable.
    kind "stratified": independent SRSWOR of size n_h within each stratum;
    strata is a tuple of disjoint index arrays partitioning 0..N-1.
    """

    kind: str
    N: int
    n: int
    strata: tuple | None = None
    n_h: tuple | None = None

    def __post_init__(self):
        if self.N < 1:
            raise ValidationError("population size must be >= 1")
        if not 1 <= self.n <= self.N:
            raise ValidationError(f"need 1 <= n <= N, got n={self.n}, N={self.N}")
        if self.kind == "srswor":
            if self.strata is not None or self.n_h is not None:
                raise ValidationError("srswor takes no strata")
        elif self.kind == "stratified":
            if self.strata is None or self.n_h is None:
                raise ValidationError("stratified design needs strata and n_h")
            strata = tuple(
                np.sort(np.asarray(s, dtype=int)) for s in self.strata
            )
            n_h = tuple(int(v) for v in self.n_h)
            if len(strata) != len(n_h) or not strata:
                raise ValidationError("strata and n_h must align and be nonempty")
            flat = np.concatenate(strata)
            if flat.size != self.N or not np.array_equal(
                np.sort(flat), np.arange(self.N)
            ):
                raise ValidationError("strata must partition 0..N-1")
            for s, m in zip(strata, n_h):
                if not 1 <= m <= s.size:
                    raise ValidationError(
                        f"need 1 <= n_h <= N_h, got n_h={m}, N_h={s.size}"
                    )
            if sum(n_h) != self.n:
                raise ValidationError("sum of n_h must equal n")
            object.__setattr__(self, "strata", strata)
            object.__setattr__(self, "n_h", n_h)
        else:
            raise ValidationError(f"unknown design kind {self.kind!r}")

    def stratum_of(self) -> np.ndarray:
        """Stratum id per unit (all zeros for srswor)."""
        labels = np.zeros(self.N, dtype=int)
        if self.kind == "stratified":
            for h, s in enumerate(self.strata):
                labels[s] = h
        return labels


@dataclass(frozen=True, eq=False)
class Sample:
    """A drawn sample: sorted distinct unit indices of size design.n."""

    indices: np.ndarray
    design: SamplingDesign

    def __post_init__(self):
        idx = np.asarray(self.indices, dtype=int)
        idx = np.sort(idx)
        if idx.size != self.design.n:
            raise ValidationError(
                f"sample size {idx.size} != design size {self.design.n}"
            )
        if idx.size != np.unique(idx).size:
            raise ValidationError("sample indices must be distinct")
        if idx.size and (idx[0] < 0 or idx[-1] >= self.design.N):
            raise ValidationError("sample indices out of 0..N-1")
        idx.setflags(write=False)
        object.__setattr__(self, "indices", idx)


def first_order_probs(design: SamplingDesign) -> np.ndarray:
    """Vector of pi_k for all N units."""
    if design.kind == "srswor":
        return np.full(design.N, design.n / design.N)
    pi = np.empty(design.N)
    for s, m in zip(design.strata, design.n_h):
        pi[s] = m / s.size
    return pi


def first_order_prob(design: SamplingDesign, k: int) -> float:
    if not 0 <= k < design.N:
        raise ValidationError(f"unit index {k} out of 0..{design.N - 1}")
    return float(first_order_probs(design)[k])


def second_order_matrix(design: SamplingDesign) -> np.ndarray:
    """Matrix of pi_kl for all pairs, with the convention pi_kk = pi_k.

    Within-stratum pairs with n_h = 1 have pi_kl = 0; such pairs can never
    be jointly sampled, so the joint probability is genuinely zero.
    """
    pi = first_order_probs(design)
    if design.kind == "srswor":
        n, N = design.n, design.N
        off = n * (n - 1) / (N * (N - 1)) if N > 1 else 1.0
        mat = np.full((N, N), off)
    else:
        mat = np.outer(pi, pi)
        for s, m in zip(design.strata, design.n_h):
            N_h = s.size
            within = m * (m - 1) / (N_h * (N_h - 1)) if N_h > 1 else 1.0
            mat[np.ix_(s, s)] = within
    np.fill_diagonal(mat, pi)
    return mat


def joint_probs_submatrix(design: SamplingDesign, idx: np.ndarray) -> np.ndarray:
    """pi_kl restricted to the units in idx, without building the N x N matrix."""
    idx = np.asarray(idx, dtype=int)
    pi = first_order_probs(design)[idx]
    if design.kind == "srswor":
        n, N = design.n, design.N
        off = n * (n - 1) / (N * (N - 1)) if N > 1 else 1.0
        mat = np.full((idx.size, idx.size), off)
    else:
        mat = np.outer(pi, pi)
        labels = design.stratum_of()[idx]
        for h, (s, m) in enumerate(zip(design.strata, design.n_h)):
            N_h = s.size
            within = m * (m - 1) / (N_h * (N_h - 1)) if N_h > 1 else 1.0
            members = np.flatnonzero(labels == h)
            mat[np.ix_(members, members)] = within
    np.fill_diagonal(mat, pi)
    return mat


def second_order_prob(design: SamplingDesign, k: int, l: int) -> float:
    for idx in (k, l):
        if not 0 <= idx < design.N:
            raise ValidationError(f"unit index {idx} out of 0..{design.N - 1}")
    return float(second_order_matrix(design)[k, l])


def draw(design: SamplingDesign, rng: np.random.Generator) -> Sample:
    """Draw one sample; every admissible sample equiprobable for SRSWOR and
    within each stratum.  Deterministic given the generator state."""
    if design.kind == "srswor":
        idx = rng.choice(design.N, size=design.n, replace=False)
    else:
        parts = [
            s[rng.choice(s.size, size=m, replace=False)]
            for s, m in zip(design.strata, design.n_h)
        ]
        idx = np.concatenate(parts)
    return Sample(indices=np.sort(idx), design=design)


def _count_samples(design: SamplingDesign) -> int:
    if design.kind == "srswor":
        return math.comb(design.N, design.n)
    total = 1
    for s, m in zip(design.strata, design.n_h):
        total *= math.comb(s.size, m)
    return total


def enumerate_samples(
    design: SamplingDesign, cap: int = DEFAULT_ENUMERATION_CAP
) -> list[tuple[Sample, float]]:
    """All possible samples with their exact design probabilities.

    Probabilities sum to 1; refuses when the count exceeds `cap`.
    """
    total = _count_samples(design)
    if total > cap:
        raise EnumerationCapError(required=total, cap=cap)
    prob = 1.0 / total
    out = []
    if design.kind == "srswor":
        for combo in itertools.combinations(range(design.N), design.n):
            out.append((Sample(np.array(combo), design), prob))
        return out
    per_stratum = [
        list(itertools.combinations(s.tolist(), m))
        for s, m in zip(design.strata, design.n_h)
    ]
    for parts in itertools.product(*per_stratum):
        idx = np.sort(np.concatenate([np.array(p, dtype=int) for p in parts]))
        out.append((Sample(idx, design), prob))
    return out


def replicate_rng(master_seed: int, *key: int) -> np.random.Generator:
    """Independent, reproducible sub-stream keyed by replicate coordinates.

    Adding or reordering workers never changes the stream assigned to a
    replicate: the stream depends only on (master_seed, key).
    """
    return np.random.default_rng(
        np.random.SeedSequence(entropy=master_seed, spawn_key=tuple(key))
    )
