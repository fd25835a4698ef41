"""Fixed-dimension code embeddings: exchange-file IO and a hashing fallback.

Exchange format: JSON Lines, one object per code fragment,
`{"id": "<patchId>:<role>", "dim": k, "vector": [f1, ..., fk]}` with role in
{buggy, patched, groundtruth}. Unknown extra fields are ignored.
"""

from __future__ import annotations

import hashlib
import json
import math
import re
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import DimensionMismatch, ManifestError

ROLES = ("buggy", "patched", "groundtruth")

_TOKEN_RE = re.compile(r"[A-Za-z0-9]+")


@dataclass
class EmbeddingVector:
    id: str
    values: np.ndarray

    @property
    def dim(self) -> int:
        return int(self.values.shape[0])


def hashing_embed(code_text: str, k: int, id: str = "") -> EmbeddingVector:
    """Deterministic signed token-hash bag of features, L2-normalized.

    No tokens (empty text) gives the zero vector, which downstream cosine
    handling flags as ZeroNormVector.
    """
    if k <= 0:
        raise ValueError("embedding dimension must be positive")
    values = np.zeros(k, dtype=np.float64)
    for token in _TOKEN_RE.findall(code_text):
        digest = hashlib.sha256(token.encode("utf-8")).digest()
        bucket = int.from_bytes(digest[:8], "big") % k
        sign = 1.0 if digest[8] & 1 else -1.0
        values[bucket] += sign
    norm = math.sqrt(float(np.dot(values, values)))
    if norm > 0.0:
        values /= norm
    return EmbeddingVector(id, values)


def write_embeddings(path: str | Path, vectors: list[EmbeddingVector]) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        for vec in vectors:
            record = {"id": vec.id, "dim": vec.dim, "vector": [float(x) for x in vec.values]}
            handle.write(json.dumps(record) + "\n")


def load_embeddings(path: str | Path) -> dict[str, EmbeddingVector]:
    """Load an exchange file; enforces uniform dimension and finite entries."""
    vectors: dict[str, EmbeddingVector] = {}
    dim: int | None = None
    try:
        lines = Path(path).read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise ManifestError(f"cannot read embedding file {path}: {exc}") from exc
    for line_no, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        try:
            record = json.loads(line)
            vec_id = record["id"]
            declared = int(record["dim"])
            values = np.asarray(record["vector"], dtype=np.float64)
        except (ValueError, KeyError, TypeError) as exc:
            raise ManifestError(f"{path}:{line_no}: bad embedding record: {exc}") from exc
        if values.ndim != 1 or values.shape[0] != declared:
            raise DimensionMismatch(
                f"{path}:{line_no}: vector length {values.shape[0]} != dim {declared}"
            )
        if dim is None:
            dim = declared
        elif declared != dim:
            raise DimensionMismatch(
                f"{path}:{line_no}: dim {declared} differs from file dim {dim}"
            )
        if not np.all(np.isfinite(values)):
            raise ManifestError(f"{path}:{line_no}: non-finite embedding entries")
        vectors[vec_id] = EmbeddingVector(vec_id, values)
    return vectors
