"""Non-negative tensor trains used as unnormalized score functions.

A tensor train (TT) here is a chain of order-3 cores with non-negative
entries.  Core ``k`` has shape ``(r_{k-1}, d_k, r_k)`` where ``d_k`` is the
local alphabet size at site ``k`` and the boundary bond dimensions are 1.
Contracting the chain with one physical index fixed per site yields the
score of that index sequence; summing the physical indices instead yields
the partition function.  All quantities are plain float64 numpy arrays.

Instances are treated as immutable values: operations that change a model
return a new ``TensorTrain`` rather than mutating in place, so read-only
use (scoring, sampling environments, partition function) is safe to share
across threads.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .exceptions import DegenerateModelError

__all__ = ["TensorTrain", "EnvironmentCache"]


@dataclass
class EnvironmentCache:
    """Cached boundary contractions used for conditional sampling.

    ``right[k]`` is the contraction of cores ``k+1 .. L-1`` with all physical
    indices summed, a non-negative vector of length ``r_k``.  ``left[0]`` is
    the scalar-1 boundary vector; the remaining left entries are filled
    incrementally by consumers as a prefix is fixed.
    """

    left: list
    right: list


class TensorTrain:
    """Chain of non-negative order-3 cores representing an unnormalized score."""

    def __init__(self, cores, validate: bool = True):
        self.cores = [np.asarray(c, dtype=float) for c in cores]
        if validate:
            self._validate()

    def _validate(self):
        if not self.cores:
            raise ValueError("a tensor train needs at least one core")
        for k, core in enumerate(self.cores):
            if core.ndim != 3:
                raise ValueError(f"core {k} has rank {core.ndim}, expected 3")
            if np.any(core < 0) or not np.all(np.isfinite(core)):
                raise ValueError(f"core {k} has negative or non-finite entries")
        if self.cores[0].shape[0] != 1 or self.cores[-1].shape[2] != 1:
            raise ValueError("boundary bond dimensions must be 1")
        for k in range(len(self.cores) - 1):
            if self.cores[k].shape[2] != self.cores[k + 1].shape[0]:
                raise ValueError(
                    f"bond mismatch between cores {k} and {k + 1}: "
                    f"{self.cores[k].shape[2]} vs {self.cores[k + 1].shape[0]}"
                )

    @classmethod
    def uniform(cls, local_dims, bond_dim: int, fill: float = 1.0) -> "TensorTrain":
        """Constant-filled TT whose induced distribution is exactly uniform.

        Parameters
        ----------
        local_dims : sequence of int
            Alphabet size per site; may be non-uniform.
        bond_dim : int
            Internal bond dimension (boundary bonds are always 1).
        fill : float
            Positive constant placed in every core entry.
        """
        local_dims = [int(d) for d in local_dims]
        if not local_dims:
            raise ValueError("local_dims must be non-empty")
        if any(d < 1 for d in local_dims):
            raise ValueError("local dimensions must be positive")
        if bond_dim < 1:
            raise ValueError("bond_dim must be >= 1")
        if not fill > 0:
            raise ValueError("fill must be positive")
        n = len(local_dims)
        cores = []
        for k, d in enumerate(local_dims):
            rl = 1 if k == 0 else bond_dim
            rr = 1 if k == n - 1 else bond_dim
            cores.append(np.full((rl, d, rr), fill))
        return cls(cores, validate=False)

    def __len__(self) -> int:
        return len(self.cores)

    @property
    def n_sites(self) -> int:
        return len(self.cores)

    @property
    def local_dims(self) -> list:
        return [c.shape[1] for c in self.cores]

    @property
    def bond_dims(self) -> list:
        """Bond dimensions including both boundary 1s (length L+1)."""
        return [self.cores[0].shape[0]] + [c.shape[2] for c in self.cores]

    def copy(self) -> "TensorTrain":
        return TensorTrain([c.copy() for c in self.cores], validate=False)

    def _check_config(self, x):
        x = np.asarray(x, dtype=int)
        if x.ndim != 1 or x.size != len(self.cores):
            raise ValueError(f"configuration length {x.size} != {len(self.cores)} sites")
        dims = np.array(self.local_dims)
        if np.any(x < 0) or np.any(x >= dims):
            raise ValueError(f"configuration {x.tolist()} outside per-site alphabets")
        return x

    def score(self, x) -> float:
        """Score of one index sequence: left-to-right contraction of projected cores."""
        x = self._check_config(x)
        v = self.cores[0][:, x[0], :]
        for k in range(1, len(self.cores)):
            v = v @ self.cores[k][:, x[k], :]
        return float(v[0, 0])

    def score_batch(self, configs) -> np.ndarray:
        """Scores of a ``(n, L)`` batch of index sequences."""
        configs = np.asarray(configs, dtype=int)
        if configs.ndim != 2 or configs.shape[1] != len(self.cores):
            raise ValueError("configs must have shape (n, n_sites)")
        dims = np.array(self.local_dims)
        if np.any(configs < 0) or np.any(configs >= dims):
            raise ValueError("batch contains out-of-alphabet indices")
        v = self.cores[0][0, configs[:, 0], :]
        for k in range(1, len(self.cores)):
            slices = self.cores[k][:, configs[:, k], :]          # (r_l, n, r_r)
            v = np.einsum("na,anb->nb", v, slices)
        return v[:, 0]

    def partition_function(self) -> float:
        """Total score mass, contracted with physical indices summed (linear in L)."""
        v = self.cores[0].sum(axis=1)
        for core in self.cores[1:]:
            v = v @ core.sum(axis=1)
        z = float(v[0, 0])
        if not z > 0:
            raise DegenerateModelError(f"partition function is {z}; model carries no weight")
        return z

    def right_environments(self) -> EnvironmentCache:
        """Right boundary contractions for every site, plus the scalar-1 left seed."""
        n = len(self.cores)
        right = [None] * n
        right[n - 1] = np.ones(1)
        for k in range(n - 2, -1, -1):
            right[k] = self.cores[k + 1].sum(axis=1) @ right[k + 1]
        left = [None] * n
        left[0] = np.ones(1)
        return EnvironmentCache(left=left, right=right)

    def frobenius_renormalized(self) -> "TensorTrain":
        """Each core divided by its own Frobenius norm; induced conditionals unchanged."""
        cores = []
        for k, core in enumerate(self.cores):
            norm = np.linalg.norm(core)
            if norm == 0:
                raise DegenerateModelError(f"core {k} has zero Frobenius norm")
            cores.append(core / norm)
        return TensorTrain(cores, validate=False)

    def with_floor(self, delta: float) -> "TensorTrain":
        """Additive floor applied to every entry, repairing zeroed slices."""
        if delta <= 0:
            raise ValueError("floor delta must be positive")
        return TensorTrain([c + delta for c in self.cores], validate=False)

    # -- serialization (structured text; format documented in tteda.cli) --

    def to_dict(self) -> dict:
        return {
            "format": "tteda-tensor-train",
            "version": 1,
            "local_dims": self.local_dims,
            "cores": [
                {"shape": list(c.shape), "entries": c.ravel(order="C").tolist()}
                for c in self.cores
            ],
        }

    @classmethod
    def from_dict(cls, payload: dict) -> "TensorTrain":
        if payload.get("format") != "tteda-tensor-train":
            raise ValueError("not a tensor-train checkpoint payload")
        cores = [
            np.array(entry["entries"], dtype=float).reshape(entry["shape"], order="C")
            for entry in payload["cores"]
        ]
        return cls(cores)

    def save(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_dict(), fh)
            fh.write("\n")

    @classmethod
    def load(cls, path) -> "TensorTrain":
        with open(path, "r", encoding="utf-8") as fh:
            return cls.from_dict(json.load(fh))
