"""Module for argument-principle counting and eigenvalue search."""

from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import TYPE_CHECKING

import numpy as np

from halfline_spectra.eigensolver.shooting import (
    Eigenvalue,
    SolverMethod,
    default_truncation,
    neglected_tail,
    shoot_batch,
)
from halfline_spectra.exceptions import ContourError, ContourThroughZeroError
from halfline_spectra.resolvent.resolvent import BoundaryCondition

if TYPE_CHECKING:
    from collections.abc import Iterator

    from halfline_spectra.potential.potential import Potential

logger = logging.getLogger(__name__)

MARGIN = 1e-3
MIN_MODULUS = 1e-8
INITIAL_SAMPLES = 64
MAX_REFINEMENTS = 24
MAX_SAMPLES = 1 << 16
TOLERANCE = 1e-10
NEWTON_STEPS = 50
MAX_DEPTH = 40
TRUNCATION_DOUBLINGS = 4
TRUNCATION_TOLERANCE = 1e-9
SPLIT_RATIOS = (0.5, 0.47, 0.53, 0.41, 0.59)


@dataclass(frozen=True)
class Rectangle:
    """Axis-parallel box [re_min, re_max] x [im_min, im_max], counter-clockwise."""

    re_min: float
    re_max: float
    im_min: float
    im_max: float

    def __post_init__(self) -> None:
        """Validate corners."""
        if not (self.re_min < self.re_max and self.im_min < self.im_max):
            msg = f"Degenerate rectangle {self}."
            raise ValueError(msg)

    @property
    def center(self) -> complex:
        """Midpoint."""
        return complex((self.re_min + self.re_max) / 2, (self.im_min + self.im_max) / 2)

    @property
    def size(self) -> float:
        """Longer side."""
        return max(self.re_max - self.re_min, self.im_max - self.im_min)

    def distance_to_half_axis(self) -> float:
        """Distance from the closed box to [0, inf)."""
        if self.im_min > 0:
            gap_im = self.im_min
        elif self.im_max < 0:
            gap_im = -self.im_max
        else:
            gap_im = 0.0
        gap_re = max(-self.re_max, 0.0)
        return math.hypot(gap_re, gap_im)

    def point(self, t: np.ndarray) -> np.ndarray:
        """Boundary point at parameter t in [0, 1)."""
        corners = np.array(
            [
                complex(self.re_min, self.im_min),
                complex(self.re_max, self.im_min),
                complex(self.re_max, self.im_max),
                complex(self.re_min, self.im_max),
                complex(self.re_min, self.im_min),
            ]
        )
        s = 4 * np.asarray(t, dtype=float)
        side = np.minimum(s.astype(int), 3)
        frac = s - side
        return corners[side] + frac * (corners[side + 1] - corners[side])

    def contains(self, z: complex, slack: float = 0.0) -> bool:
        """Closed containment, widened by ``slack``."""
        return (
            self.re_min - slack <= z.real <= self.re_max + slack
            and self.im_min - slack <= z.imag <= self.im_max + slack
        )

    def split(self, ratio: float = 0.5) -> list[Rectangle]:
        """Four sub-boxes meeting at the point at ``ratio`` along each side."""
        re_mid = self.re_min + ratio * (self.re_max - self.re_min)
        im_mid = self.im_min + ratio * (self.im_max - self.im_min)
        return [
            Rectangle(self.re_min, re_mid, self.im_min, im_mid),
            Rectangle(re_mid, self.re_max, self.im_min, im_mid),
            Rectangle(self.re_min, re_mid, im_mid, self.im_max),
            Rectangle(re_mid, self.re_max, im_mid, self.im_max),
        ]

    def scaled(self, factor: float) -> Rectangle:
        """Same center, sides multiplied by ``factor``."""
        c = self.center
        hw = factor * (self.re_max - self.re_min) / 2
        hh = factor * (self.im_max - self.im_min) / 2
        return Rectangle(c.real - hw, c.real + hw, c.imag - hh, c.imag + hh)


@dataclass(frozen=True)
class Circle:
    """Circle of given center and radius, counter-clockwise."""

    center: complex
    radius: float

    def __post_init__(self) -> None:
        """Validate radius."""
        if not self.radius > 0:
            msg = f"Radius should be positive, got {self.radius}."
            raise ValueError(msg)

    def distance_to_half_axis(self) -> float:
        """Distance from the closed disk to [0, inf)."""
        c = complex(self.center)
        gap = abs(c.imag) if c.real >= 0 else abs(c)
        return max(gap - self.radius, 0.0)

    def point(self, t: np.ndarray) -> np.ndarray:
        """Boundary point at parameter t in [0, 1)."""
        return complex(self.center) + self.radius * np.exp(2j * np.pi * np.asarray(t))


Contour = Rectangle | Circle


@dataclass
class EigenSearch:
    """Eigenvalues found in a search box, sorted by modulus.

    ``truncated`` is set when more than ``max_count`` were found,
    ``discarded`` holds candidates dropped for lying near [0, inf) and
    ``tail_neglected`` is |q(L)| / max |q| when L cuts into the support.
    """

    eigenvalues: list[Eigenvalue] = field(default_factory=list)
    truncated: bool = False
    discarded: list[complex] = field(default_factory=list)
    tail_neglected: float = 0.0

    def __iter__(self) -> Iterator[Eigenvalue]:
        """Iterate over eigenvalues."""
        return iter(self.eigenvalues)

    def __len__(self) -> int:
        """Number of eigenvalues."""
        return len(self.eigenvalues)

    def __getitem__(self, index: int) -> Eigenvalue:
        """Eigenvalue by position."""
        return self.eigenvalues[index]


def _check_contour(contour: Contour, margin: float) -> None:
    if contour.distance_to_half_axis() < margin:
        msg = f"Contour {contour} comes closer than {margin} to [0, inf)."
        raise ContourError(msg)


def count_in_contour(
    q: Potential,
    contour: Contour,
    bc: BoundaryCondition | None = None,
    truncation_length: float | None = None,
    margin: float = MARGIN,
) -> int:
    """Count eigenvalues inside a contour by the argument principle.

    Parameters
    ----------
    q : Potential
        Potential.
    contour : Rectangle or Circle
        Closed contour avoiding [0, inf) by at least ``margin``.
    bc : BoundaryCondition, optional
        Dirichlet when omitted.
    truncation_length : float, optional
        Shooting truncation length.
    margin : float, default = 1e-3
        Required distance to the essential spectrum.

    Returns
    -------
    count : int
        Winding number of F around 0 along the contour.

    Raises
    ------
    ContourError
        If the contour comes too close to [0, inf).
    ContourThroughZeroError
        If |F| drops below 1e-8 on the contour or the phase cannot be resolved.
    """
    _check_contour(contour, margin)
    bc = bc or BoundaryCondition.dirichlet()
    length = default_truncation(q) if truncation_length is None else truncation_length

    def evaluate(t: np.ndarray) -> np.ndarray:
        values = shoot_batch(q, contour.point(t), length, bc)
        smallest = float(np.min(np.abs(values)))
        if not smallest > MIN_MODULUS:
            msg = f"|F| = {smallest:.3e} on the contour {contour}."
            raise ContourThroughZeroError(msg)
        return values

    t = np.arange(INITIAL_SAMPLES * 4) / (INITIAL_SAMPLES * 4)
    values = evaluate(t)
    for _ in range(MAX_REFINEMENTS):
        steps = np.angle(np.roll(values, -1) / values)
        coarse = np.abs(steps) >= math.pi / 2
        if not np.any(coarse):
            return round(float(np.sum(steps)) / (2 * math.pi))
        if t.size > MAX_SAMPLES:
            break
        t_next = np.append(t[1:], 1.0)
        new_t = ((t + t_next) / 2)[coarse]
        logger.debug("Refining %d contour segments of %s", new_t.size, contour)
        order = np.argsort(np.concatenate([t, new_t]), kind="stable")
        values = np.concatenate([values, evaluate(new_t)])[order]
        t = np.concatenate([t, new_t])[order]
    msg = f"Phase of F could not be resolved on {contour}."
    raise ContourThroughZeroError(msg)


def _strip_free_parts(box: Rectangle, margin: float) -> list[Rectangle]:
    """Sub-boxes covering ``box`` minus a strip of half-width ``margin`` along [0, inf)."""
    if box.distance_to_half_axis() >= margin:
        return [box]
    parts = []
    if box.im_max > margin:
        parts.append(Rectangle(box.re_min, box.re_max, max(box.im_min, margin), box.im_max))
    if box.im_min < -margin:
        parts.append(Rectangle(box.re_min, box.re_max, box.im_min, min(box.im_max, -margin)))
    low, high = max(box.im_min, -margin), min(box.im_max, margin)
    if box.re_min < -margin and low < high:
        parts.append(Rectangle(box.re_min, min(box.re_max, -margin), low, high))
    return parts


@dataclass
class _Search:
    q: Potential
    bc: BoundaryCondition
    length: float
    margin: float
    tolerance: float

    def count(self, box: Rectangle) -> int:
        return count_in_contour(self.q, box, self.bc, self.length, self.margin)

    def newton(
        self, start: complex, length: float, box: Rectangle | None = None
    ) -> tuple[complex, float, bool]:
        """Newton on F with a central-difference derivative.

        With ``box`` given, the iteration stops unconverged as soon as an
        iterate leaves it.
        """
        lam = complex(start)
        residual = math.inf
        slack = 0.0 if box is None else 1e-12 * (1 + box.size)
        for step in range(NEWTON_STEPS):
            h = 1e-7 * (1 + abs(lam))
            f0, fp, fm = shoot_batch(self.q, [lam, lam + h, lam - h], length, self.bc)
            residual = abs(f0)
            derivative = (fp - fm) / (2 * h)
            if residual <= self.tolerance or derivative == 0:
                return lam, residual, residual <= self.tolerance
            delta = f0 / derivative
            lam -= delta
            logger.debug("Newton step %d: lam=%s |F|=%.3e", step, lam, residual)
            if box is not None and not box.contains(lam, slack):
                logger.debug("Newton left %s at lam=%s", box, lam)
                return lam, residual, False
            if abs(delta) <= 1e-12 * (1 + abs(lam)):
                residual = abs(shoot_batch(self.q, [lam], length, self.bc)[0])
                return lam, residual, residual <= self.tolerance
        return lam, residual, False

    def refine(self, box: Rectangle) -> Eigenvalue | None:
        """Newton from the center of an isolating box, then truncation doubling."""
        slack = 1e-12 * (1 + box.size)
        lam, residual, converged = self.newton(box.center, self.length, box)
        if not box.contains(lam, slack):
            return None
        length = self.length
        for _ in range(TRUNCATION_DOUBLINGS):
            if self.q.support_hint <= length:
                break
            candidate, res, conv = self.newton(lam, 2 * length, box)
            if not box.contains(candidate, slack):
                logger.warning("Doubling L moved %s out of %s", lam, box)
                break
            moved = abs(candidate - lam)
            lam, residual, converged, length = candidate, res, conv, 2 * length
            if moved < TRUNCATION_TOLERANCE:
                break
        return Eigenvalue(lam, float(residual), SolverMethod.SHOOTING, length, self.bc, converged)

    def split(self, box: Rectangle, total: int) -> list[tuple[Rectangle, int]]:
        """Quadrisect, moving the split point when a side passes through a zero."""
        for ratio in SPLIT_RATIOS:
            try:
                children = box.split(ratio)
                counts = [self.count(child) for child in children]
            except ContourThroughZeroError as exc:
                logger.debug("Split of %s at %.2f failed: %s", box, ratio, exc)
                continue
            if sum(counts) == total:
                return [(c, n) for c, n in zip(children, counts, strict=True) if n > 0]
            logger.warning(
                "Counts %s of the children of %s do not add up to %d", counts, box, total
            )
        msg = f"No clean quadrisection of {box}."
        raise ContourThroughZeroError(msg)

    def process(
        self, item: tuple[Rectangle, int, int]
    ) -> tuple[list[Eigenvalue], list[tuple[Rectangle, int, int]]]:
        """One work-queue item: refine a simple box or split a crowded one."""
        box, total, depth = item
        if total == 1:
            found = self.refine(box)
            if found is not None:
                return [found], []
        if depth >= MAX_DEPTH or box.size < 1e-10:
            lam, residual, converged = self.newton(box.center, self.length, box)
            if not box.contains(lam, 1e-12 * (1 + box.size)):
                lam = box.center
                residual = abs(shoot_batch(self.q, [lam], self.length, self.bc)[0])
            logger.warning("Unresolved cluster of %d eigenvalues near %s", total, lam)
            found = Eigenvalue(
                lam, float(residual), SolverMethod.SHOOTING, self.length, self.bc, converged
            )
            return [found], []
        return [], [(child, n, depth + 1) for child, n in self.split(box, total)]


def _initial_count(search: _Search, box: Rectangle) -> tuple[Rectangle, int]:
    """Count in ``box``, nudging its size if the boundary meets a zero of F."""
    error: ContourThroughZeroError | None = None
    for factor in (1.0, 1.013, 0.987, 1.029):
        candidate = box if factor == 1.0 else box.scaled(factor)
        if factor != 1.0 and candidate.distance_to_half_axis() < search.margin:
            continue
        try:
            return candidate, search.count(candidate)
        except ContourThroughZeroError as exc:
            error = exc
            logger.debug("Search box %s passes through a zero: %s", candidate, exc)
    raise error or ContourThroughZeroError(str(box))


def find_eigenvalues(  # noqa: PLR0913
    q: Potential,
    search_box: Rectangle,
    bc: BoundaryCondition | None = None,
    max_count: int = 50,
    *,
    truncation_length: float | None = None,
    margin: float = MARGIN,
    tolerance: float = TOLERANCE,
    jobs: int = 1,
) -> EigenSearch:
    """Find the eigenvalues of -u'' + q u in a box of the spectral plane.

    Parameters
    ----------
    q : Potential
        Potential.
    search_box : Rectangle
        Box to search; the part within ``margin`` of [0, inf) is excluded.
    bc : BoundaryCondition, optional
        Dirichlet when omitted.
    max_count : int, default = 50
        Largest number of eigenvalues to report.
    truncation_length : float, optional
        Initial truncation length, doubled until eigenvalues settle.
    margin : float, default = 1e-3
        Candidates closer than this to [0, inf) are discarded.
    tolerance : float, default = 1e-10
        Residual |F| accepted by Newton's method.
    jobs : int, default = 1
        Threads used to process the quadrisection work queue.

    Returns
    -------
    result : EigenSearch
        Eigenvalues sorted by modulus, with truncation flag.

    Notes
    -----
    Each box is split into four until it isolates a single zero of the
    characteristic function, which Newton's method then refines from the
    box center. A Newton iterate leaving its box sends the box back to
    the queue for another split.
    """
    bc = bc or BoundaryCondition.dirichlet()
    length = default_truncation(q) if truncation_length is None else truncation_length
    search = _Search(q, bc, length, margin, tolerance)
    tail = neglected_tail(q, length)

    queue: list[tuple[Rectangle, int, int]] = []
    for part in _strip_free_parts(search_box, margin):
        box, total = _initial_count(search, part)
        logger.debug("%d zeros in %s", total, box)
        if total > 0:
            queue.append((box, total, 0))

    found: list[Eigenvalue] = []
    pool = ThreadPoolExecutor(max_workers=jobs) if jobs > 1 else None
    try:
        while queue:
            results = pool.map(search.process, queue) if pool else map(search.process, queue)
            queue = []
            for eigenvalues, children in results:
                found.extend(eigenvalues)
                queue.extend(children)
    finally:
        if pool is not None:
            pool.shutdown()

    result = EigenSearch(tail_neglected=tail)
    for eig in found:
        lam = eig.lam
        distance = abs(lam.imag) if lam.real >= 0 else abs(lam)
        if distance < margin:
            logger.warning("Discarding %s within %.1e of [0, inf)", lam, margin)
            result.discarded.append(lam)
            continue
        if not eig.converged:
            logger.warning("Eigenvalue %s has residual %.3e", lam, eig.residual)
        result.eigenvalues.append(eig)
    result.eigenvalues.sort(key=lambda e: (abs(e.lam), e.lam.real, e.lam.imag))
    if len(result.eigenvalues) > max_count:
        result.eigenvalues = result.eigenvalues[:max_count]
        result.truncated = True
    return result
