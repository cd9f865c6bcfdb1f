# -*- coding: utf-8 -*-
# Copyright 2026 The wg-fem Authors  (see the AUTHORS file)
# SPDX-License-Identifier: GPL-3.0+

"""Benchmark problems with known exact solutions.

Exact solutions and coefficients are sympy expressions; the source term,
the gradient and the Robin data are derived from them:

    f   = -div(A grad u) + beta . grad u + gamma u
    g^R = (A grad u) . n + alpha u
"""

import dataclasses
import enum
import json
import logging
import math
from dataclasses import dataclass

import numpy as np
import sympy as sp
from marshmallow import ValidationError

from . import mesh as meshes
from .assembly import BOUNDARY_TAGS, DirichletMode, ProblemSpec
from .element import Coefficients
from .exceptions import CaseError, ConfigError
from .expressions import (
    X,
    Y,
    Z,
    coordinates,
    lambdify_matrix,
    lambdify_scalar,
    lambdify_vector,
    parse_expression,
)
from .schemas import CaseFileSchema

logger = logging.getLogger(__name__)


class MeshFamily(enum.Enum):
    TRIANGULAR = "triangular"
    ANISOTROPIC = "anisotropic"
    RECTANGULAR = "rectangular"
    BOX = "box3d"
    KELLOGG = "kellogg"


@dataclass(frozen=True)
class ExactProblem:
    problem: ProblemSpec
    u: object
    grad_u: object


@dataclass(frozen=True)
class CaseSpec:
    case_id: str
    description: str
    dim: int
    solution: object
    diffusion: object
    mesh_family: MeshFamily
    sizes: tuple
    convection: tuple = None
    reaction: object = None
    source: object = None
    dirichlet_tags: tuple = BOUNDARY_TAGS
    robin_tags: tuple = ()
    robin_alpha: object = None
    dirichlet_mode: DirichletMode = DirichletMode.L2
    anisotropy: int = 1
    base_n: int = 10
    extra_levels: int = 2

    def with_levels(self, levels):
        if levels is None:
            return self
        if int(levels) != levels or levels < 1:
            raise CaseError(f"levels must be a positive integer, got {levels!r}")
        return dataclasses.replace(self, sizes=tuple(self.sizes[:levels]))

    def with_kellogg_mesh(self, base_n=None, extra_levels=None):
        return dataclasses.replace(
            self,
            base_n=self.base_n if base_n is None else base_n,
            extra_levels=self.extra_levels if extra_levels is None else extra_levels,
        )

    def meshes(self):
        """Yield (level, mesh) along the schedule"""
        family = self.mesh_family
        if family is MeshFamily.KELLOGG:
            current = meshes.locally_refined_kellogg(self.base_n, self.extra_levels)
            done = 0
            for level in self.sizes:
                while done < level:
                    current = meshes.refine_red(current)
                    done += 1
                yield level, current
            return
        for level, n in enumerate(self.sizes):
            if family is MeshFamily.TRIANGULAR:
                yield level, meshes.uniform_triangular(n)
            elif family is MeshFamily.ANISOTROPIC:
                yield level, meshes.anisotropic_triangular(self.anisotropy, n)
            elif family is MeshFamily.RECTANGULAR:
                yield level, meshes.uniform_rectangular(n)
            elif family is MeshFamily.BOX:
                yield level, meshes.uniform_box3d(n)
            else:
                raise CaseError(f"Unsupported mesh family: {family}")

    def reference_key(self, record):
        if self.mesh_family is MeshFamily.KELLOGG:
            return record.level
        return int(round(1.0 / record.h))

    def derived_source(self):
        if self.source is not None:
            return sp.sympify(self.source)
        coords = coordinates(self.dim)
        u = sp.sympify(self.solution)
        grad = sp.Matrix([sp.diff(u, c) for c in coords])
        flux = sp.Matrix(self.diffusion) * grad
        source = -sum(sp.diff(flux[i], c) for i, c in enumerate(coords))
        if self.convection is not None:
            source += sum(sp.sympify(b) * g for b, g in zip(self.convection, grad))
        if self.reaction is not None:
            source += sp.sympify(self.reaction) * u
        return source

    def build(self):
        """Numeric ProblemSpec together with the exact solution and its gradient"""
        dim = self.dim
        coords = coordinates(dim)
        u = sp.sympify(self.solution)
        grad = [sp.diff(u, c) for c in coords]
        diffusion = sp.Matrix(self.diffusion)

        u_fn = lambdify_scalar(u, dim)
        grad_fn = lambdify_vector(grad, dim)
        robin_alpha = robin_data = None
        if self.robin_tags:
            alpha = sp.sympify(self.robin_alpha if self.robin_alpha is not None else 0)
            alpha_fn = lambdify_scalar(alpha, dim)
            flux_fn = lambdify_vector(list(diffusion * sp.Matrix(grad)), dim)

            def robin_data(points, normals):
                return np.einsum("...d,...d->...", flux_fn(points), normals) + alpha_fn(points) * u_fn(points)

            robin_alpha = alpha_fn

        coefficients = Coefficients(
            diffusion=lambdify_matrix(diffusion, dim),
            convection=lambdify_vector(self.convection, dim) if self.convection is not None else None,
            reaction=lambdify_scalar(self.reaction, dim) if self.reaction is not None else None,
        )
        problem = ProblemSpec(
            coefficients=coefficients,
            source=lambdify_scalar(self.derived_source(), dim),
            dirichlet=u_fn,
            robin_alpha=robin_alpha,
            robin_data=robin_data,
            dirichlet_tags=tuple(self.dirichlet_tags),
            robin_tags=tuple(self.robin_tags),
            dirichlet_mode=self.dirichlet_mode,
        )
        return ExactProblem(problem=problem, u=u_fn, grad_u=grad_fn)


@dataclass(frozen=True)
class KelloggParameters:
    gamma: float = 0.1
    ratio: float = 161.4476387975881
    rho: float = math.pi / 4
    sigma: float = -14.92256510455152

    @property
    def k1(self):
        return self.ratio

    @property
    def k2(self):
        return 1.0

    def mu_branches(self, theta):
        g, rho, sigma = self.gamma, self.rho, self.sigma
        pi = sp.pi
        return (
            sp.cos((pi / 2 - sigma) * g) * sp.cos((theta - pi / 2 + rho) * g),
            sp.cos(rho * g) * sp.cos((theta - pi + sigma) * g),
            sp.cos(sigma * g) * sp.cos((theta - pi - rho) * g),
            sp.cos((pi / 2 - rho) * g) * sp.cos((theta - 3 * pi / 2 - sigma) * g),
        )

    def quadrant_coefficients(self):
        return (self.k1, self.k2, self.k1, self.k2)

    def relation_residuals(self):
        """Relative residuals of the three relations tying R, gamma, rho and sigma"""
        g, rho, sigma, ratio = self.gamma, self.rho, self.sigma, self.ratio
        cot = lambda t: 1.0 / math.tan(t)  # noqa: E731
        values = {
            "R": (-math.tan((math.pi / 2 - sigma) * g) * cot(rho * g), ratio),
            "1/R": (-math.tan(rho * g) * cot(sigma * g), 1.0 / ratio),
            "R'": (-math.tan(sigma * g) * cot((math.pi / 2 - rho) * g), ratio),
        }
        return {name: abs(lhs - rhs) / abs(rhs) for name, (lhs, rhs) in values.items()}

    def constraints_hold(self):
        g, rho, sigma, pi = self.gamma, self.rho, self.sigma, math.pi
        first = max(0.0, pi * g - pi) < 2 * g * rho < min(pi * g, pi)
        second = max(0.0, pi - pi * g) < -2 * g * sigma < min(pi, 2 * pi - pi * g)
        return 0 < g <= 1 and first and second


def _quadrant_conditions():
    return (
        sp.And(X >= 0, Y >= 0),
        sp.And(X < 0, Y >= 0),
        sp.And(X < 0, Y < 0),
        True,
    )


def _quadrant_theta(quadrant):
    theta = sp.atan2(Y, X)
    return theta if quadrant < 2 else theta + 2 * sp.pi


def kellogg_branches(params):
    """The exact solution restricted to each quadrant, as plain expressions"""
    r = sp.sqrt(X ** 2 + Y ** 2)
    theta = sp.Symbol("theta", real=True)
    branches = params.mu_branches(theta)
    return tuple(
        r ** params.gamma * branch.subs(theta, _quadrant_theta(q)) for q, branch in enumerate(branches)
    )


def kellogg_solution(params):
    branches = kellogg_branches(params)
    return sp.Piecewise(*zip(branches, _quadrant_conditions()))


def kellogg_diffusion(params):
    coefficient = sp.Piecewise((params.k1, X * Y > 0), (params.k2, True))
    return coefficient * sp.eye(2)


@dataclass(frozen=True)
class KelloggCheck:
    laplacian: float
    finite_difference: float
    continuity: float
    relations: dict
    constraints: bool

    def passed(self, laplacian_tol=1e-8, fd_tol=1e-4, continuity_tol=1e-8):
        return (
            self.laplacian <= laplacian_tol
            and self.finite_difference <= fd_tol
            and self.continuity <= continuity_tol
            and self.constraints
        )


def _quadrant_samples(rng, count, radii, margin):
    quadrant = rng.integers(0, 4, size=count)
    angle = quadrant * (math.pi / 2) + rng.uniform(margin, math.pi / 2 - margin, size=count)
    radius = rng.uniform(*radii, size=count)
    points = np.column_stack([radius * np.cos(angle), radius * np.sin(angle)])
    return quadrant, points


def kellogg_self_test(params=None, samples=64, seed=0, step=1e-4):
    """Check the transcription of the interface solution.

    The solution must be harmonic in each quadrant, -div(A grad u) by central
    differences must vanish away from the axes, and u and the normal flux
    A grad u . n must be continuous across the axes.
    """
    params = params or KelloggParameters()
    rng = np.random.default_rng(seed)
    coefficients = params.quadrant_coefficients()

    laplacian = 0.0
    branches = kellogg_branches(params)
    quadrant, points = _quadrant_samples(rng, samples, (0.1, 1.0), 0.05)
    for q, branch in enumerate(branches):
        operator = sp.diff(branch, X, 2) + sp.diff(branch, Y, 2)
        hit = quadrant == q
        if hit.any():
            values = lambdify_scalar(operator, 2)(points[hit])
            laplacian = max(laplacian, float(np.max(np.abs(coefficients[q] * values))))

    u_fn = lambdify_scalar(kellogg_solution(params), 2)
    quadrant, points = _quadrant_samples(rng, samples, (0.4, 0.9), 0.2)
    shifts = step * np.eye(2)
    stencil = sum(u_fn(points + s) + u_fn(points - s) for s in shifts) - 4.0 * u_fn(points)
    scale = np.array(coefficients)[quadrant]
    finite_difference = float(np.max(np.abs(scale * stencil / step ** 2)))

    theta = sp.Symbol("theta", real=True)
    mu = params.mu_branches(theta)
    continuity = 0.0
    # (angle, branch before, branch after, angle seen by the branch after)
    for angle, before, after, after_angle in (
        (sp.pi / 2, 0, 1, sp.pi / 2),
        (sp.pi, 1, 2, sp.pi),
        (3 * sp.pi / 2, 2, 3, 3 * sp.pi / 2),
        (2 * sp.pi, 3, 0, 0),
    ):
        value_a = float(mu[before].subs(theta, angle))
        value_b = float(mu[after].subs(theta, after_angle))
        flux_a = coefficients[before] * float(sp.diff(mu[before], theta).subs(theta, angle))
        flux_b = coefficients[after] * float(sp.diff(mu[after], theta).subs(theta, after_angle))
        continuity = max(
            continuity,
            abs(value_a - value_b) / max(1.0, abs(value_a)),
            abs(flux_a - flux_b) / max(1.0, abs(flux_a)),
        )

    check = KelloggCheck(
        laplacian=laplacian,
        finite_difference=finite_difference,
        continuity=continuity,
        relations=params.relation_residuals(),
        constraints=params.constraints_hold(),
    )
    for name, residual in check.relations.items():
        if residual > 1e-6:
            logger.warning(f"Interface parameters: relation {name} off by {residual:.3e}")
    logger.info(
        f"Interface self-test: laplacian {laplacian:.2e}, finite differences {finite_difference:.2e}, "
        f"continuity {continuity:.2e}"
    )
    return check


def _case1_solution():
    return sp.sin(2 * sp.pi * X + sp.pi / 2) * sp.sin(2 * sp.pi * Y + sp.pi / 2)


def _corner_solution(gamma):
    r = sp.sqrt(X ** 2 + Y ** 2)
    return X * (1 - X) * Y * (1 - Y) * r ** (-2 + sp.Rational(gamma))


def _anisotropic_case(case_id, k, sizes):
    return CaseSpec(
        case_id=case_id,
        description=f"Anisotropic diffusion diag(k^2, 1) with k={k} on an n x {k}n mesh",
        dim=2,
        solution=sp.sin(2 * sp.pi * X) * sp.sin(2 * k * sp.pi * Y),
        diffusion=sp.diag(k ** 2, 1),
        mesh_family=MeshFamily.ANISOTROPIC,
        sizes=sizes,
        anisotropy=k,
    )


def kellogg_case(params=None, base_n=10, extra_levels=2):
    params = params or KelloggParameters()
    return CaseSpec(
        case_id="4",
        description="Intersecting interfaces, coefficient ratio R in quadrants 1 and 3",
        dim=2,
        solution=kellogg_solution(params),
        diffusion=kellogg_diffusion(params),
        mesh_family=MeshFamily.KELLOGG,
        sizes=(0, 1, 2, 3, 4),
        source=sp.Integer(0),
        base_n=base_n,
        extra_levels=extra_levels,
    )


TRIANGLE_SIZES = (8, 16, 32, 64, 128)

CASES = {
    "1a": CaseSpec(
        case_id="1a",
        description="Laplace, Dirichlet data by midpoint interpolation",
        dim=2,
        solution=_case1_solution(),
        diffusion=sp.eye(2),
        mesh_family=MeshFamily.TRIANGULAR,
        sizes=TRIANGLE_SIZES,
        dirichlet_mode=DirichletMode.NODAL,
    ),
    "1b": CaseSpec(
        case_id="1b",
        description="Laplace, Dirichlet data by L2 projection",
        dim=2,
        solution=_case1_solution(),
        diffusion=sp.eye(2),
        mesh_family=MeshFamily.TRIANGULAR,
        sizes=TRIANGLE_SIZES,
    ),
    "1c": CaseSpec(
        case_id="1c",
        description="Laplace, Robin condition grad u . n + u = 0 on x = 1",
        dim=2,
        solution=sp.sin(sp.pi * Y) * sp.exp(-X),
        diffusion=sp.eye(2),
        mesh_family=MeshFamily.TRIANGULAR,
        sizes=TRIANGLE_SIZES,
        dirichlet_tags=("xmin", "ymin", "ymax"),
        robin_tags=("xmax",),
        robin_alpha=sp.Integer(1),
    ),
    "2": CaseSpec(
        case_id="2",
        description="Degenerate diffusion A = xy",
        dim=2,
        solution=X * (1 - X) * Y * (1 - Y),
        diffusion=X * Y * sp.eye(2),
        mesh_family=MeshFamily.TRIANGULAR,
        sizes=TRIANGLE_SIZES,
    ),
    "3a": CaseSpec(
        case_id="3a",
        description="Corner singularity r^(-2+gamma), gamma = 0.5",
        dim=2,
        solution=_corner_solution("1/2"),
        diffusion=sp.eye(2),
        mesh_family=MeshFamily.TRIANGULAR,
        sizes=TRIANGLE_SIZES,
    ),
    "3b": CaseSpec(
        case_id="3b",
        description="Corner singularity r^(-2+gamma), gamma = 0.25",
        dim=2,
        solution=_corner_solution("1/4"),
        diffusion=sp.eye(2),
        mesh_family=MeshFamily.TRIANGULAR,
        sizes=TRIANGLE_SIZES,
    ),
    "4": kellogg_case(),
    "5a": _anisotropic_case("5a", 3, TRIANGLE_SIZES),
    "5b": _anisotropic_case("5b", 9, (4, 8, 16, 32, 64)),
    "6": CaseSpec(
        case_id="6",
        description="3D Laplace on the unit cube, Q0/Q0/RT0 boxes",
        dim=3,
        solution=sp.sin(2 * sp.pi * X) * sp.sin(2 * sp.pi * Y) * sp.sin(2 * sp.pi * Z),
        diffusion=sp.eye(3),
        mesh_family=MeshFamily.BOX,
        sizes=(8, 12, 16, 20),
    ),
    "rect2d": CaseSpec(
        case_id="rect2d",
        description="2D Laplace on rectangles, Q0/Q0/RT0",
        dim=2,
        solution=sp.sin(2 * sp.pi * X) * sp.sin(2 * sp.pi * Y),
        diffusion=sp.eye(2),
        mesh_family=MeshFamily.RECTANGULAR,
        sizes=(8, 16, 32, 64),
    ),
}


def get_case(case_id):
    try:
        return CASES[str(case_id)]
    except KeyError:
        raise CaseError(f"Unknown case {case_id!r}, expected one of {sorted(CASES)}") from None


def list_cases():
    return [(case_id, case.description) for case_id, case in CASES.items()]


def case_from_dict(data):
    """Build a CaseSpec from a validated case file (see schemas.CaseFileSchema)"""
    dim = data["dim"]
    mesh = data["mesh"]

    def expr(text):
        return parse_expression(text, dim)

    diffusion = data["diffusion"]
    if isinstance(diffusion, str):
        diffusion_matrix = expr(diffusion) * sp.eye(dim)
    else:
        diffusion_matrix = sp.Matrix([[expr(entry) for entry in row] for row in diffusion])
        if diffusion_matrix.shape != (dim, dim):
            raise CaseError(f"diffusion must be a {dim}x{dim} matrix, got {diffusion_matrix.shape}")
        if diffusion_matrix != diffusion_matrix.T:
            raise CaseError("diffusion must be symmetric")

    family = MeshFamily(mesh["family"])
    if (family is MeshFamily.BOX) != (dim == 3):
        raise CaseError(f"Mesh family {family.value} does not fit dim {dim}")

    return CaseSpec(
        case_id=data["id"],
        description=data.get("description", ""),
        dim=dim,
        solution=expr(data["solution"]),
        diffusion=diffusion_matrix,
        mesh_family=family,
        sizes=tuple(mesh["sizes"]),
        convection=tuple(expr(b) for b in data["convection"]) if data.get("convection") else None,
        reaction=expr(data["reaction"]) if data.get("reaction") else None,
        source=expr(data["source"]) if data.get("source") else None,
        dirichlet_tags=tuple(data.get("dirichlet_tags", BOUNDARY_TAGS)),
        robin_tags=tuple(data.get("robin_tags", ())),
        robin_alpha=expr(data["robin_alpha"]) if data.get("robin_alpha") else None,
        dirichlet_mode=DirichletMode(data.get("dirichlet_mode", "l2")),
        anisotropy=mesh.get("k", 1),
        base_n=mesh.get("base_n", 10),
        extra_levels=mesh.get("extra_levels", 2),
    )


def load_case_file(path):
    try:
        with open(path) as stream:
            raw = json.load(stream)
    except (OSError, ValueError) as e:
        raise ConfigError(f"Cannot read case file {path}: {e}") from e
    try:
        data = CaseFileSchema().load(raw)
    except ValidationError as e:
        raise ConfigError(f"Invalid case file {path}", details=e.messages) from e
    logger.info(f"Loaded case {data['id']} from {path}")
    return case_from_dict(data)
