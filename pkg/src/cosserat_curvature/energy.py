"""Isotropic Cosserat energy densities and a finite-difference shell energy.

The discrete shell lives on an ``n1 x n2`` node grid over the patch box.
Each node carries a midsurface position ``m`` and a unit quaternion (scipy
order ``x, y, z, w``) for the elastic microrotation.  Partials along the grid
use second-order central differences in the interior and second-order
one-sided stencils on the edges; the energy sums ``W a h1 h2`` over interior
nodes.  The gradient is derived by hand (adjoint of the difference operators)
and the rotation part is expressed in the left tangent space ``dQ = [xi]x Q``.
"""
from __future__ import annotations

import csv
import dataclasses
from dataclasses import dataclass, field

import numpy as np
from scipy.spatial.transform import Rotation

from .errors import InvalidParams, LineSearchStalled
from .surface import SurfacePatch, surf_frames
from .tensor import IDENTITY, axl, dev3, skew, skew_from_axial, sym


@dataclass(frozen=True)
class EnergyParams:
    mu: float
    kappa: float
    mu_c: float
    L_c: float
    a1: float = 1.0
    a2: float = 1.0
    a3: float = 1.0
    p: float = 2.0

    def __post_init__(self):
        for name in ("mu", "kappa", "mu_c", "L_c", "a1", "a2", "a3"):
            value = getattr(self, name)
            if not (np.isfinite(value) and value > 0):
                raise InvalidParams(f"{name} must be positive, got {value!r}")
        if not (np.isfinite(self.p) and self.p >= 2):
            raise InvalidParams(f"p must be >= 2, got {self.p!r}")

    @classmethod
    def from_json(cls, data: dict) -> "EnergyParams":
        return cls(**{k: float(v) for k, v in data.items()})

    def to_json(self) -> dict:
        return dataclasses.asdict(self)


def _frob2(X) -> np.ndarray:
    return np.einsum("...ij,...ij->...", X, X)


def _quadratic(X, c_dev, c_skew, c_tr):
    tr = np.trace(X, axis1=-2, axis2=-1)
    return c_dev * _frob2(dev3(sym(X))) + c_skew * _frob2(skew(X)) + c_tr * tr ** 2


def _quadratic_stress(X, c_dev, c_skew, c_tr):
    """Derivative of :func:`_quadratic` with respect to ``X``."""
    tr = np.trace(X, axis1=-2, axis2=-1)
    return 2.0 * (c_dev * dev3(sym(X)) + c_skew * skew(X) + c_tr * tr[..., None, None] * IDENTITY)


def energy_3d(E, D, params: EnergyParams):
    """``mu |dev sym E|^2 + mu_c |skew E|^2 + kappa/2 (tr E)^2
    + mu L_c^p (a1 |dev sym D|^2 + a2 |skew D|^2 + a3 (tr D)^2)^(p/2)``."""
    P = params
    strain = _quadratic(np.asarray(E, dtype=float), P.mu, P.mu_c, 0.5 * P.kappa)
    curv = _quadratic(np.asarray(D, dtype=float), P.a1, P.a2, P.a3)
    return strain + P.mu * P.L_c ** P.p * curv ** (0.5 * P.p)


def energy_shell(E, D, params: EnergyParams):
    """Shell density of the same isotropic form; quadratic, so ``p`` must be 2."""
    if params.p != 2:
        raise InvalidParams(f"the shell energy is quadratic and needs p = 2, got p = {params.p}")
    return energy_3d(E, D, params)


def shell_stresses(E, D, params: EnergyParams):
    """``dW/dE`` and ``dW/dD`` of :func:`energy_shell`."""
    P = params
    SE = _quadratic_stress(E, P.mu, P.mu_c, 0.5 * P.kappa)
    SD = P.mu * P.L_c ** 2 * _quadratic_stress(D, P.a1, P.a2, P.a3)
    return SE, SD


# ---------------------------------------------------------------------------
# discrete shell


def difference_matrix(n: int, h: float) -> np.ndarray:
    """Second-order first-derivative matrix: central inside, one-sided at the ends."""
    if n < 3:
        raise ValueError("need at least three nodes per direction")
    Dm = np.zeros((n, n))
    i = np.arange(1, n - 1)
    Dm[i, i - 1] = -0.5 / h
    Dm[i, i + 1] = 0.5 / h
    Dm[0, :3] = np.array([-3.0, 4.0, -1.0]) / (2 * h)
    Dm[-1, -3:] = np.array([1.0, -4.0, 3.0]) / (2 * h)
    return Dm


@dataclass
class ShellState:
    """Nodal unknowns; ``fixed_m`` and ``fixed_q`` mark Dirichlet nodes."""

    m: np.ndarray
    q: np.ndarray
    fixed_m: np.ndarray
    fixed_q: np.ndarray
    box: tuple

    @property
    def shape(self) -> tuple[int, int]:
        return self.m.shape[:2]

    def rotations(self) -> np.ndarray:
        n1, n2 = self.shape
        return Rotation.from_quat(self.q.reshape(-1, 4)).as_matrix().reshape(n1, n2, 3, 3)

    def copy(self) -> "ShellState":
        return ShellState(self.m.copy(), self.q.copy(), self.fixed_m.copy(), self.fixed_q.copy(),
                          self.box)

    def to_json(self) -> dict:
        return {"box": [list(map(float, b)) for b in self.box], "m": self.m.tolist(),
                "q": self.q.tolist(), "fixed_m": self.fixed_m.tolist(),
                "fixed_q": self.fixed_q.tolist()}


def grid_nodes(box, shape) -> np.ndarray:
    lo, hi = (np.asarray(b, dtype=float) for b in box)
    x1 = np.linspace(lo[0], hi[0], shape[0])
    x2 = np.linspace(lo[1], hi[1], shape[1])
    return np.stack(np.meshgrid(x1, x2, indexing="ij"), axis=-1)


def boundary_mask(shape, clamp: str = "all") -> np.ndarray:
    mask = np.zeros(shape, dtype=bool)
    mask[0, :] = True
    if clamp == "all":
        mask[-1, :] = mask[:, 0] = mask[:, -1] = True
    elif clamp != "left":
        raise ValueError(f"unknown clamp {clamp!r}")
    return mask


def reference_state(patch: SurfacePatch, shape=(16, 16), clamp: str = "all") -> ShellState:
    """``m = y0`` and ``Qe = 1`` at every node, the stress-free state."""
    nodes = grid_nodes(patch.box, shape)
    m = np.apply_along_axis(patch.y0, -1, nodes)
    q = np.zeros(tuple(shape) + (4,))
    q[..., 3] = 1.0
    mask = boundary_mask(shape, clamp)
    return ShellState(m, q, mask.copy(), mask.copy(), patch.box)


def perturbed_state(patch: SurfacePatch, shape=(16, 16), amplitude: float = 0.05, seed: int = 0,
                    clamp: str = "all") -> ShellState:
    """Reference state with a rotation by ``amplitude`` about a random axis at each free node."""
    state = reference_state(patch, shape, clamp)
    rng = np.random.default_rng(seed)
    axes = rng.standard_normal(tuple(shape) + (3,))
    axes /= np.linalg.norm(axes, axis=-1, keepdims=True)
    rot = Rotation.from_rotvec((amplitude * axes).reshape(-1, 3))
    q = (rot * Rotation.from_quat(state.q.reshape(-1, 4))).as_quat().reshape(state.q.shape)
    free = ~state.fixed_q
    state.q[free] = q[free]
    return state


@dataclass(frozen=True)
class ShellGrid:
    """Per-node reference geometry and difference operators for one grid."""

    D1: np.ndarray
    D2: np.ndarray
    con: np.ndarray  # (n1, n2, 2, 3) rows a^alpha
    first: np.ndarray  # (n1, n2, 3, 3)
    cross: np.ndarray  # (2, n1, n2, 3, 3) the matrices [a^alpha]x
    weight: np.ndarray  # (n1, n2) quadrature weight a h1 h2 on interior nodes, 0 elsewhere

    @classmethod
    def build(cls, patch: SurfacePatch, box, shape) -> "ShellGrid":
        n1, n2 = shape
        lo, hi = (np.asarray(b, dtype=float) for b in box)
        h1, h2 = (hi - lo) / (np.asarray(shape) - 1)
        nodes = grid_nodes(box, shape)
        con = np.empty((n1, n2, 2, 3))
        first = np.empty((n1, n2, 3, 3))
        area = np.empty((n1, n2))
        for i in range(n1):
            for j in range(n2):
                fr = surf_frames(patch, nodes[i, j])
                con[i, j] = fr.con[:2]
                first[i, j] = fr.first
                area[i, j] = fr.area
        weight = np.zeros((n1, n2))
        weight[1:-1, 1:-1] = area[1:-1, 1:-1] * h1 * h2
        cross = np.moveaxis(skew_from_axial(con), 2, 0)
        return cls(difference_matrix(n1, h1), difference_matrix(n2, h2), con, first, cross, weight)

    def partials(self, u) -> np.ndarray:
        """Grid partials of a nodal array, stacked as ``[alpha, i, j, ...]``."""
        return np.stack([np.einsum("ik,kj...->ij...", self.D1, u),
                         np.einsum("jk,ik...->ij...", self.D2, u)])

    def partials_adjoint(self, g) -> np.ndarray:
        return (np.einsum("ki,kj...->ij...", self.D1, g[0])
                + np.einsum("kj,ik...->ij...", self.D2, g[1]))


def discrete_measures(state: ShellState, grid: ShellGrid):
    """Nodal ``Ee``, ``De`` and the intermediates reused by the gradient."""
    Q = state.rotations()
    dm = grid.partials(state.m)
    dQ = grid.partials(Q)
    M = np.einsum("aijc,ijab->ijcb", dm, grid.con)
    E = np.einsum("ijkc,ijkb->ijcb", Q, M) - grid.first
    A = np.einsum("ijkc,aijkd->aijcd", Q, dQ)
    D = -np.einsum("aijcd,aijde->ijce", A, grid.cross)
    return E, D, Q, dQ, M


def _energy(state, grid, params) -> float:
    E, D = discrete_measures(state, grid)[:2]
    return float(np.sum(grid.weight * energy_shell(E, D, params)))


def total_energy(state: ShellState, patch: SurfacePatch, params: EnergyParams) -> float:
    return _energy(state, ShellGrid.build(patch, state.box, state.shape), params)


def _energy_and_gradient(state, grid, params):
    E, D, Q, dQ, M = discrete_measures(state, grid)
    w = grid.weight[..., None, None]
    energy = float(np.sum(grid.weight * energy_shell(E, D, params)))
    SE, SD = shell_stresses(E, D, params)
    GE, GD = w * SE, w * SD
    QGE = Q @ GE
    g_dm = np.einsum("ijcd,ijad->aijc", QGE, grid.con)
    g_m = grid.partials_adjoint(g_dm)
    g_Q = M @ np.swapaxes(GE, -1, -2)
    g_Q -= np.einsum("aijcd,aijde,ijfe->ijcf", dQ, grid.cross, GD)
    g_dQ = np.einsum("ijcd,ijde,aijef->aijcf", Q, GD, grid.cross)  # -Q GD X^T = Q GD X
    g_Q += grid.partials_adjoint(g_dQ)
    g_xi = 2.0 * axl(skew(g_Q @ np.swapaxes(Q, -1, -2)), tol=None)
    g_m[state.fixed_m] = 0.0
    g_xi[state.fixed_q] = 0.0
    return energy, g_m, g_xi


def energy_gradient(state: ShellState, patch: SurfacePatch, params: EnergyParams):
    """Energy and its gradient ``(d/dm, d/dxi)`` on the free degrees of freedom."""
    return _energy_and_gradient(state, ShellGrid.build(patch, state.box, state.shape), params)


def retract(state: ShellState, dm, dxi) -> ShellState:
    """``m + dm`` and ``q <- exp(dxi) q`` (renormalized) on free nodes."""
    out = state.copy()
    free_m, free_q = ~state.fixed_m, ~state.fixed_q
    out.m[free_m] += dm[free_m]
    rot = Rotation.from_rotvec(dxi[free_q]) * Rotation.from_quat(state.q[free_q])
    q = rot.as_quat()
    out.q[free_q] = q / np.linalg.norm(q, axis=-1, keepdims=True)
    return out


# ---------------------------------------------------------------------------
# minimizer


@dataclass(frozen=True)
class MinimizeOptions:
    max_iter: int = 5000
    grad_tol: float = 1e-8
    seed: int = 0
    armijo: float = 1e-4
    min_step: float = 1e-16
    initial_step: float = 1.0


@dataclass
class MinimizeReport:
    energies: list = field(default_factory=list)
    grad_norms: list = field(default_factory=list)
    steps: list = field(default_factory=list)
    state: ShellState | None = None
    converged: bool = False
    message: str = ""

    @property
    def iterations(self) -> int:
        return len(self.steps)

    def to_json(self, include_state: bool = False) -> dict:
        out = {
            "converged": self.converged,
            "message": self.message,
            "iterations": self.iterations,
            "initial_energy": self.energies[0] if self.energies else None,
            "final_energy": self.energies[-1] if self.energies else None,
            "final_grad_norm": self.grad_norms[-1] if self.grad_norms else None,
            "energies": list(self.energies),
            "grad_norms": list(self.grad_norms),
            "steps": list(self.steps),
        }
        if include_state and self.state is not None:
            out["state"] = self.state.to_json()
        return out

    def write_csv(self, path) -> None:
        """Convergence trace with columns ``iteration, energy, grad_norm, step``.

        Row ``k`` holds the energy and gradient norm after ``k`` steps and the
        step length that produced it (0 on the first row).
        """
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["iteration", "energy", "grad_norm", "step"])
            steps = [0.0] + list(self.steps)
            for k, (e, g) in enumerate(zip(self.energies, self.grad_norms)):
                writer.writerow([k, repr(float(e)), repr(float(g)), repr(float(steps[k]))])


def minimize(state0: ShellState, patch: SurfacePatch, params: EnergyParams,
             options: MinimizeOptions = MinimizeOptions()) -> MinimizeReport:
    """Riemannian gradient descent with Armijo backtracking.

    The trial step is the Barzilai-Borwein length from the last two
    gradients (the previous accepted step doubled when that is unavailable);
    backtracking halves it until the Armijo condition holds, so the energy
    never increases.
    """
    if not state0.fixed_m.any():
        raise ValueError("at least one node must have its position fixed")
    grid = ShellGrid.build(patch, state0.box, state0.shape)
    state = state0
    energy, g_m, g_xi = _energy_and_gradient(state, grid, params)
    g2 = float(np.sum(g_m ** 2) + np.sum(g_xi ** 2))
    report = MinimizeReport([energy], [np.sqrt(g2)], [], state)
    step = options.initial_step
    prev = None
    while True:
        if np.sqrt(g2) < options.grad_tol:
            report.converged = True
            report.message = "gradient tolerance reached"
            break
        if report.iterations >= options.max_iter:
            report.message = "iteration limit reached"
            break
        if prev is not None:
            s2, sy = prev
            if sy > 0:
                step = s2 / sy
        t = step
        while True:
            trial = retract(state, -t * g_m, -t * g_xi)
            e_trial = _energy(trial, grid, params)
            if e_trial <= energy - options.armijo * t * g2:
                break
            t *= 0.5
            if t < options.min_step:
                report.state = state
                report.message = "line search stalled"
                raise LineSearchStalled(
                    f"no decreasing step above {options.min_step:g} at iteration {report.iterations}",
                    report)
        e_new, gm_new, gxi_new = _energy_and_gradient(trial, grid, params)
        # step and gradient change in the flattened tangent coordinates
        s2 = t * t * g2
        sy = t * float(np.sum(g_m * (g_m - gm_new)) + np.sum(g_xi * (g_xi - gxi_new)))
        prev = (s2, sy)
        state, energy, g_m, g_xi = trial, e_new, gm_new, gxi_new
        g2 = float(np.sum(g_m ** 2) + np.sum(g_xi ** 2))
        step = 2.0 * t
        report.energies.append(energy)
        report.grad_norms.append(np.sqrt(g2))
        report.steps.append(t)
        report.state = state
    return report
