"""Two-player zero-sum matrix games, duality gap, and 2x2 equilibrium structure.

The x-player minimizes x^T A y over the probability simplex, the y-player
maximizes it.  Loss vectors are ell_x = A y and ell_y = -A^T x.  All types are
immutable values and all functions are pure.
"""

from dataclasses import dataclass

import numpy as np

_SUM_TOL = 1e-12
_GAP_TOL = 1e-10


class GameError(ValueError):
    """Invalid game data or violated operation precondition."""


def _as_probs(p):
    if isinstance(p, SimplexPoint):
        return p.probs
    return np.asarray(p, dtype=np.float64)


@dataclass(frozen=True)
class SimplexPoint:
    """A probability vector: nonnegative entries summing to one (tol 1e-12)."""

    probs: np.ndarray

    def __post_init__(self):
        p = np.asarray(self.probs, dtype=np.float64)
        if p.ndim != 1 or p.size < 1:
            raise GameError("simplex point must be a nonempty vector")
        if np.any(p < 0.0):
            raise GameError("simplex point has a negative entry")
        if abs(float(p.sum()) - 1.0) > _SUM_TOL:
            raise GameError(f"simplex point sums to {p.sum()!r}, not 1")
        p.flags.writeable = False
        object.__setattr__(self, "probs", p)

    def __len__(self):
        return self.probs.size

    def __getitem__(self, i):
        return float(self.probs[i])


def uniform(d):
    """Uniform distribution over d actions."""
    return SimplexPoint(np.full(d, 1.0 / d))


@dataclass(frozen=True)
class MatrixGame:
    """Loss matrix (d1 x d2) to the x-player, entries within declared_range."""

    entries: np.ndarray
    declared_range: tuple = (0.0, 1.0)

    def __post_init__(self):
        a = np.asarray(self.entries, dtype=np.float64)
        if a.ndim != 2:
            raise GameError("game entries must form a matrix")
        if a.shape[0] < 2 or a.shape[1] < 2:
            raise GameError("each player needs at least two actions")
        lo, hi = self.declared_range
        if not (np.isfinite(lo) and np.isfinite(hi) and lo < hi):
            raise GameError(f"invalid declared range {self.declared_range!r}")
        if np.any(a < lo - _SUM_TOL) or np.any(a > hi + _SUM_TOL):
            raise GameError(f"entries escape declared range [{lo}, {hi}]")
        # tolerate sub-1e-12 excursions from float arithmetic in constructors
        a = np.clip(a, lo, hi)
        a.flags.writeable = False
        object.__setattr__(self, "entries", a)
        object.__setattr__(self, "declared_range", (float(lo), float(hi)))

    @property
    def d1(self):
        return self.entries.shape[0]

    @property
    def d2(self):
        return self.entries.shape[1]


@dataclass(frozen=True)
class NashPoint2x2:
    """Equilibrium of a 2x2 game.

    When fully mixed, x_star = (1 - delta_x, delta_x) and
    y_star = (delta_y, 1 - delta_y); delta_x / delta_y are the corresponding
    coordinates (x_star[1] and y_star[0]) and are only meaningful as interior
    probabilities in that case.
    """

    x_star: SimplexPoint
    y_star: SimplexPoint
    delta_x: float
    delta_y: float
    fully_mixed: bool
    game_value: float


@dataclass(frozen=True)
class Decomposition:
    """Affine split of a 2x2 game: shift + scale * canonical_game(dx, dy).

    The booleans record the relabeling applied before reading the split off:
    player swap first (loss matrix becomes -A^T), then row swap, then column
    swap.  Identity relabeling is preferred when several are valid.
    """

    b1: float
    b2: float
    delta_x: float
    delta_y: float
    swap_players: bool
    swap_rows: bool
    swap_cols: bool


def hard_game(delta):
    """The 2x2 instance [[1/2+delta, 1/2], [0, 1]] for delta in (0, 1/2)."""
    if not (0.0 < delta < 0.5):
        raise GameError(f"delta must lie in (0, 1/2), got {delta!r}")
    return MatrixGame(np.array([[0.5 + delta, 0.5], [0.0, 1.0]]))


def canonical_game(delta_x, delta_y):
    """The generic 2x2 game whose fully mixed equilibrium is
    x* = (1-delta_x, delta_x), y* = (delta_y, 1-delta_y).

    Requires 0 < delta_x <= delta_y <= 1 - delta_x, which keeps all entries
    inside [0, 1].
    """
    if not (0.0 < delta_x <= delta_y <= 1.0 - delta_x):
        raise GameError(
            f"need 0 < delta_x <= delta_y <= 1 - delta_x, got ({delta_x!r}, {delta_y!r})"
        )
    top = [(1.0 - delta_y) / (1.0 - delta_x), (1.0 - delta_x - delta_y) / (1.0 - delta_x)]
    return MatrixGame(np.array([top, [0.0, 1.0]]))


def duality_gap(game, x, y):
    """max_j (A^T x)[j] - min_i (A y)[i]; zero exactly at equilibrium.

    Best responses to fixed opponents are pure, so the extremes over the
    simplices reduce to coordinate extremes.  Nonnegative up to ~1e-12.
    """
    a = game.entries
    xv = _as_probs(x)
    yv = _as_probs(y)
    if xv.size != game.d1 or yv.size != game.d2:
        raise GameError("strategy dimensions do not match the game")
    return float(np.max(a.T @ xv) - np.min(a @ yv))


def _support_value_x(a, x1):
    # worst-case (over pure columns) payoff seen by the x-player at (x1, 1-x1)
    c0 = a[0, 0] * x1 + a[1, 0] * (1.0 - x1)
    c1 = a[0, 1] * x1 + a[1, 1] * (1.0 - x1)
    return min(c0, c1)


def _support_value_y(a, y1):
    r0 = a[0, 0] * y1 + a[0, 1] * (1.0 - y1)
    r1 = a[1, 0] * y1 + a[1, 1] * (1.0 - y1)
    return max(r0, r1)


def nash_2x2(game):
    """Equilibrium of a 2x2 game via indifference / exhaustive line search.

    Interior solutions come from the two indifference equations; otherwise the
    maximin (resp. minimax) strategy is found among the pure actions and the
    pure-vs-mixed indifference point, first candidate winning ties.
    """
    if game.d1 != 2 or game.d2 != 2:
        raise GameError("nash_2x2 requires a 2x2 game")
    a = game.entries
    a11, a12 = a[0, 0], a[0, 1]
    a21, a22 = a[1, 0], a[1, 1]

    if a11 == a12 == a21 == a22:
        xs, ys = uniform(2), uniform(2)
        return NashPoint2x2(xs, ys, 0.5, 0.5, True, float(a11))

    den_x = (a11 - a12) + (a22 - a21)
    den_y = (a11 - a21) + (a22 - a12)
    if den_x != 0.0 and den_y != 0.0:
        x1 = (a22 - a21) / den_x
        y1 = (a22 - a12) / den_y
        if 0.0 < x1 < 1.0 and 0.0 < y1 < 1.0:
            xs = SimplexPoint(np.array([x1, 1.0 - x1]))
            ys = SimplexPoint(np.array([y1, 1.0 - y1]))
            value = a11 * x1 * y1 + a12 * x1 * (1 - y1) + a21 * (1 - x1) * y1 + a22 * (1 - x1) * (1 - y1)
            gap = duality_gap(game, xs, ys)
            if gap > _GAP_TOL:
                raise GameError(f"interior equilibrium check failed, gap={gap}")
            return NashPoint2x2(xs, ys, float(1.0 - x1), float(y1), True, float(value))

    cand_x = [1.0, 0.0]
    if den_x != 0.0 and 0.0 <= (a22 - a21) / den_x <= 1.0:
        cand_x.append((a22 - a21) / den_x)
    cand_y = [1.0, 0.0]
    if den_y != 0.0 and 0.0 <= (a22 - a12) / den_y <= 1.0:
        cand_y.append((a22 - a12) / den_y)

    best_x1, best_vx = cand_x[0], _support_value_x(a, cand_x[0])
    for x1 in cand_x[1:]:
        v = _support_value_x(a, x1)
        if v > best_vx:
            best_x1, best_vx = x1, v
    best_y1, best_vy = cand_y[0], _support_value_y(a, cand_y[0])
    for y1 in cand_y[1:]:
        v = _support_value_y(a, y1)
        if v < best_vy:
            best_y1, best_vy = y1, v

    xs = SimplexPoint(np.array([best_x1, 1.0 - best_x1]))
    ys = SimplexPoint(np.array([best_y1, 1.0 - best_y1]))
    gap = duality_gap(game, xs, ys)
    if gap > _GAP_TOL:
        raise GameError(f"boundary equilibrium search failed, gap={gap}")
    mixed = 0.0 < best_x1 < 1.0 and 0.0 < best_y1 < 1.0
    return NashPoint2x2(xs, ys, float(1.0 - best_x1), float(best_y1), mixed, float(best_vy))


def _apply_relabel(a, x_star, y_star, swap_players, swap_rows, swap_cols):
    if swap_players:
        a = -a.T
        x_star, y_star = y_star, x_star
    if swap_rows:
        a = a[::-1, :]
        x_star = x_star[::-1]
    if swap_cols:
        a = a[:, ::-1]
        y_star = y_star[::-1]
    return a, x_star, y_star


def decompose_2x2(game, tol=1e-10):
    """Write a fully-mixed 2x2 game as b1 * ones + b2 * canonical_game(dx, dy).

    Searches the eight row/column/player relabelings in a fixed order
    (identity first) and returns the first one under which the affine split
    reconstructs the relabeled matrix entrywise within `tol` with b2 >= 0.
    """
    ne = nash_2x2(game)
    if not ne.fully_mixed:
        raise GameError("decomposition requires a fully mixed equilibrium")
    a0 = np.asarray(game.entries, dtype=np.float64)
    xs0 = ne.x_star.probs
    ys0 = ne.y_star.probs

    for swap_players in (False, True):
        for swap_rows in (False, True):
            for swap_cols in (False, True):
                a, xs, ys = _apply_relabel(a0, xs0, ys0, swap_players, swap_rows, swap_cols)
                dx = float(xs[1])
                dy = float(ys[0])
                if not (0.0 < dx <= dy + 1e-12 and dy <= 1.0 - dx + 1e-12):
                    continue
                dy = min(dy, 1.0 - dx)
                dx = min(dx, dy)
                b1 = float(a[1, 0])
                b2 = float(a[1, 1] - a[1, 0])
                if b2 < -tol:
                    continue
                b2 = max(b2, 0.0)
                recon = b1 + b2 * canonical_game(dx, dy).entries
                if np.max(np.abs(recon - a)) <= tol:
                    return Decomposition(b1, b2, dx, dy, swap_players, swap_rows, swap_cols)
    raise GameError("no relabeling admits the affine decomposition")


def compose_2x2(b1, b2, delta_x, delta_y, declared_range=None):
    """Inverse of decompose_2x2 for the identity relabeling."""
    if b2 < 0:
        raise GameError("scale must be nonnegative")
    entries = b1 + b2 * canonical_game(delta_x, delta_y).entries
    if declared_range is None:
        lo = float(np.min(entries))
        hi = float(np.max(entries))
        declared_range = (min(lo, 0.0), max(hi, 1.0))
    return MatrixGame(entries, declared_range)
