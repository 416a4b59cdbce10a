"""
Positive linear maps between spaces of symmetric matrices.

Compressions ``X -> V.T X V``, pinchings (block-diagonal truncation), the block
sum ``diag-blocks -> X_11 + ... + X_mm`` and weighted traces ``X -> [tr(XW)]``.
"""

import logging

from dataclasses import dataclass, field

import numpy as np

from operator_means.loewner import is_psd
from operator_means.spectral import (
    DimensionError,
    NotPositiveDefiniteError,
    PosDefMatrix,
    SymMatrix,
)
from operator_means.utils import (
    SpecSyntaxError,
    gen_isometry,
    gen_psd,
    load_matrix,
    parse_number_list,
)


logger = logging.getLogger(__name__)

KINDS = ("compression", "pinching", "block_sum", "weighted_trace", "sandwich")


@dataclass(frozen=True, eq=False)
class PositiveLinearMapSpec:
    """Constructive description of a positive linear map.

    Use the classmethods to build one; they fill in `in_dim` and `out_dim`.

    Attributes
    ----------
    kind: str
        compression, pinching, block_sum, weighted_trace, or the experimental
        sandwich.
    in_dim, out_dim: int
    params: dict
        ``v`` (compression, sandwich), ``u`` (sandwich), ``blocks``
        (pinching), ``n_blocks``/``block_dim`` (block_sum), ``w``
        (weighted_trace).
    label: str
        Text used in reports.
    experimental: bool
        True for maps outside the default harness set (non-isometric
        compressions, sandwich).
    """

    kind: str
    in_dim: int
    out_dim: int
    params: dict = field(default_factory=dict)
    label: str = ""
    experimental: bool = False

    def __str__(self):
        return self.label or self.kind

    @classmethod
    def compression(cls, v, label=None):
        """``X -> V.T X V`` for an ``n x k`` matrix V of full column rank."""
        v = np.array(v, dtype=float, ndmin=2)
        n, k = v.shape
        if k > n or np.linalg.matrix_rank(v) < k:
            raise ValueError(f"compression needs a full column rank n x k matrix, got shape {v.shape}")
        v.flags.writeable = False
        gram = v.T @ v
        scaled_unital = np.allclose(gram, gram[0, 0] * np.eye(k), rtol=1e-10, atol=1e-12)
        return cls(
            "compression",
            n,
            k,
            {"v": v},
            label or f"compression:{n}x{k}",
            experimental=not scaled_unital,
        )

    @classmethod
    def pinching(cls, blocks):
        """Zero all off-diagonal blocks of the partition given by block sizes."""
        blocks = tuple(int(b) for b in blocks)
        if not blocks or min(blocks) < 1:
            raise ValueError(f"pinching needs positive block sizes, got {blocks}")
        n = sum(blocks)
        return cls("pinching", n, n, {"blocks": blocks}, "pinching:" + ",".join(map(str, blocks)))

    @classmethod
    def block_sum(cls, n_blocks, block_dim):
        """Sum of the diagonal ``block_dim x block_dim`` blocks."""
        n_blocks, block_dim = int(n_blocks), int(block_dim)
        if n_blocks < 1 or block_dim < 1:
            raise ValueError(f"block_sum needs positive sizes, got {n_blocks}x{block_dim}")
        return cls(
            "block_sum",
            n_blocks * block_dim,
            block_dim,
            {"n_blocks": n_blocks, "block_dim": block_dim},
            f"block_sum:{n_blocks}x{block_dim}",
        )

    @classmethod
    def weighted_trace(cls, w, label=None):
        """``X -> [tr(X W)]`` for a positive definite W (a 1x1 output)."""
        w = PosDefMatrix(w)
        return cls("weighted_trace", w.dim, 1, {"w": w}, label or f"weighted_trace:{w.dim}")

    @classmethod
    def sandwich(cls, v, u):
        """Experimental two-sided map ``X -> sym(V.T X U)``.

        Positive only when U is a non-negative multiple of V; it is kept to
        check that `check_positivity` catches maps that are not positive.
        """
        v = np.array(v, dtype=float, ndmin=2)
        u = np.array(u, dtype=float, ndmin=2)
        if v.shape != u.shape:
            raise DimensionError(f"sandwich factors differ in shape: {v.shape} vs {u.shape}")
        return cls("sandwich", v.shape[0], v.shape[1], {"v": v, "u": u}, "sandwich", experimental=True)

    @classmethod
    def parse(cls, text, dim=None, rng=None):
        """Build a map from its spec string.

        Parameters
        ----------
        text: str
            One of

            * ``pinching:1,1`` (block sizes) or ``pinching`` (singletons of
              `dim`)
            * ``block_sum:2x3`` or ``block_sum:2`` (block size ``dim / 2``)
            * ``compression:<file.json>``, ``compression:identity`` or
              ``compression:unital`` (random isometry onto ``ceil(dim/2)``
              columns, needs `rng`)
            * ``weighted_trace:<file.json>`` or ``weighted_trace:identity``
        dim: int, optional
            Input dimension for the dimension-free forms.
        rng: numpy Generator, optional
            For random compressions.

        Returns
        -------
        PositiveLinearMapSpec

        Raises
        ------
        SpecSyntaxError
            For unknown kinds and malformed fields.
        DimensionError
            When a dimension-free form cannot be fitted to `dim`.
        """
        if isinstance(text, PositiveLinearMapSpec):
            return text
        kind, _, arg = text.strip().partition(":")
        offset = len(kind) + 1
        if kind not in KINDS or kind == "sandwich":
            raise SpecSyntaxError(f"unknown map kind {kind!r}", text, 0)

        if kind == "pinching":
            if not arg:
                _need_dim(text, dim)
                return cls.pinching([1] * dim)
            return cls.pinching(parse_number_list_at(arg, text, offset))

        if kind == "block_sum":
            if "x" in arg:
                n_text, _, b_text = arg.partition("x")
                n_blocks = parse_number_list_at(n_text, text, offset)[0]
                block_dim = parse_number_list_at(b_text, text, offset + len(n_text) + 1)[0]
                return cls.block_sum(n_blocks, block_dim)
            n_blocks = parse_number_list_at(arg or "2", text, offset)[0]
            _need_dim(text, dim)
            if dim % n_blocks:
                raise DimensionError(f"{text}: dimension {dim} is not a multiple of {n_blocks}")
            return cls.block_sum(n_blocks, dim // n_blocks)

        if kind == "compression":
            if arg == "identity":
                _need_dim(text, dim)
                return cls.compression(np.eye(dim), label="compression:identity")
            if arg == "unital":
                _need_dim(text, dim)
                assert rng is not None, "a random compression needs a generator"
                k = (dim + 1) // 2
                return cls.compression(gen_isometry(dim, k, rng), label=f"compression:unital:{dim}x{k}")
            if not arg:
                raise SpecSyntaxError("compression needs a matrix file", text, offset)
            return cls.compression(load_matrix(arg), label=f"compression:{arg}")

        # weighted_trace
        if arg == "identity":
            _need_dim(text, dim)
            return cls.weighted_trace(np.eye(dim), label="weighted_trace:identity")
        if not arg:
            raise SpecSyntaxError("weighted_trace needs a matrix file", text, offset)
        return cls.weighted_trace(load_matrix(arg), label=f"weighted_trace:{arg}")

    @property
    def is_unital(self):
        """True iff ``Phi(I)`` is a multiple of the identity."""
        image = apply_map(self, np.eye(self.in_dim)).entries
        return bool(np.allclose(image, image[0, 0] * np.eye(self.out_dim), rtol=1e-10, atol=1e-12))


def parse_number_list_at(arg, text, offset):
    """Integers of a comma separated field, with positions relative to `text`."""
    try:
        return parse_number_list(arg, cast=int)
    except SpecSyntaxError as e:
        raise SpecSyntaxError(f"expected integers in {arg!r}", text, offset + e.position) from None


def _need_dim(text, dim):
    if dim is None:
        raise SpecSyntaxError("this form needs the input dimension", text, 0)


def apply_map(phi, x):
    """Apply a positive linear map.

    Parameters
    ----------
    phi: PositiveLinearMapSpec
    x: SymMatrix
        Of dimension ``phi.in_dim``.

    Returns
    -------
    SymMatrix
        Of dimension ``phi.out_dim``.

    Raises
    ------
    DimensionError
        If `x` does not have dimension ``phi.in_dim``.
    """
    arr = SymMatrix(x).entries
    if arr.shape[0] != phi.in_dim:
        raise DimensionError(f"{phi} maps dimension {phi.in_dim}, got {arr.shape[0]}")
    p = phi.params

    if phi.kind == "compression":
        out = p["v"].T @ arr @ p["v"]
    elif phi.kind == "pinching":
        out = np.zeros_like(arr)
        start = 0
        for size in p["blocks"]:
            out[start : start + size, start : start + size] = arr[start : start + size, start : start + size]
            start += size
    elif phi.kind == "block_sum":
        d = p["block_dim"]
        out = sum(arr[j * d : (j + 1) * d, j * d : (j + 1) * d] for j in range(p["n_blocks"]))
    elif phi.kind == "weighted_trace":
        out = np.array([[np.trace(arr @ p["w"].entries)]])
    elif phi.kind == "sandwich":
        half = p["v"].T @ arr @ p["u"]
        out = (half + half.T) / 2
    return SymMatrix(out)


def apply_map_posdef(phi, x):
    """Apply `phi` and require a positive definite image.

    Raises
    ------
    NotPositiveDefiniteError
        Naming the map, if the image collapses below the positive definite
        floor.
    """
    try:
        return PosDefMatrix(apply_map(phi, x))
    except NotPositiveDefiniteError as e:
        raise NotPositiveDefiniteError(f"image under {phi} is not positive definite: {e}") from e


def block_diag(blocks):
    """Block-diagonal matrix ``diag(X_1, ..., X_m)`` of equal-size blocks."""
    blocks = [SymMatrix(b).entries for b in blocks]
    d = blocks[0].shape[0]
    out = np.zeros((d * len(blocks), d * len(blocks)))
    for j, block in enumerate(blocks):
        if block.shape[0] != d:
            raise DimensionError("blocks must share one dimension")
        out[j * d : (j + 1) * d, j * d : (j + 1) * d] = block
    return out


def check_positivity(phi, trials, rng):
    """Random test of positivity.

    Parameters
    ----------
    phi: PositiveLinearMapSpec
    trials: int
        Number of random positive semidefinite inputs (random rank).
    rng: numpy Generator

    Returns
    -------
    bool
        True iff every sampled image passed `is_psd`.
    """
    assert trials >= 1, "need at least one trial"
    for trial in range(trials):
        p = gen_psd(phi.in_dim, rng)
        if not is_psd(apply_map(phi, p)):
            logger.info(f"{phi} is not positive: trial {trial} maps a PSD input outside the cone")
            return False
    return True


def check_linearity(phi, x, y, c):
    """``||Phi(X + cY) - Phi(X) - c Phi(Y)||_2``."""
    lhs = apply_map(phi, SymMatrix(x) + c * SymMatrix(y)).entries
    rhs = apply_map(phi, x).entries + c * apply_map(phi, y).entries
    return float(np.linalg.norm(lhs - rhs, ord=2))


def fitting_maps(dim, map_specs, rng):
    """Instantiate the map specs that fit input dimension `dim`.

    Specs that cannot be fitted (e.g. ``block_sum:2`` for odd `dim`, or a
    file-based map of another dimension) are skipped.

    Returns
    -------
    list of (str, PositiveLinearMapSpec)
        The spec text with its map, in the order of `map_specs`.
    """
    maps = []
    for text in map_specs:
        try:
            phi = PositiveLinearMapSpec.parse(text, dim=dim, rng=rng)
        except DimensionError as e:
            logger.debug(f"skipping map {text} for dim {dim}: {e}")
            continue
        if phi.in_dim != dim:
            logger.debug(f"skipping map {text} for dim {dim}: it maps dimension {phi.in_dim}")
            continue
        if phi.experimental:
            logger.warning(f"map {phi} is experimental (not scaled-unital)")
        maps.append((text, phi))
    return maps
