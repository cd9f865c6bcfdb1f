# Copyright 2026 The wg-fem Authors  (see the AUTHORS file)
# SPDX-License-Identifier: GPL-3.0-or-later

from marshmallow import Schema, ValidationError, fields, validate, validates_schema

from .assembly import BOUNDARY_TAGS
from .solvers.solver_base import METHODS

LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")
MESH_FAMILIES = ("triangular", "anisotropic", "rectangular", "box3d", "kellogg")


class BenchSchema(Schema):
    output_dir = fields.String(load_default="results")
    workers = fields.Integer(load_default=1, validate=validate.Range(min=1))
    quadrature_order = fields.Integer(load_default=5, validate=validate.Range(min=1, max=10))
    approach = fields.String(load_default="II", validate=validate.OneOf(["I", "II"]))
    dump_mesh = fields.Boolean(load_default=False)


class SolverSchema(Schema):
    method = fields.String(load_default="auto", validate=validate.OneOf(METHODS))
    tolerance = fields.Float(
        load_default=1e-12,
        validate=validate.Range(min=0.0, max=1.0, min_inclusive=False, max_inclusive=False),
    )
    max_iterations = fields.Integer(load_default=20000, validate=validate.Range(min=1))
    jacobi = fields.Boolean(load_default=True)
    dense_threshold = fields.Integer(load_default=3000, validate=validate.Range(min=0))
    max_restarts = fields.Integer(load_default=3, validate=validate.Range(min=0))


class KelloggSchema(Schema):
    base_n = fields.Integer(load_default=10, validate=validate.Range(min=2))
    extra_levels = fields.Integer(load_default=2, validate=validate.Range(min=0))
    sweep = fields.List(fields.Integer(validate=validate.Range(min=0)), load_default=lambda: [2, 3, 4, 5])

    @validates_schema
    def _even_base(self, data, **kwargs):
        if data.get("base_n", 10) % 2:
            raise ValidationError("base_n must be even", "base_n")


class LoggingSchema(Schema):
    level = fields.String(load_default="INFO", validate=validate.OneOf(LOG_LEVELS))


class ConfigSchema(Schema):
    bench = fields.Nested(BenchSchema, required=True)
    solver = fields.Nested(SolverSchema, required=True)
    kellogg = fields.Nested(KelloggSchema, required=True)
    logging = fields.Nested(LoggingSchema, required=True)


class MeshSpecSchema(Schema):
    family = fields.String(required=True, validate=validate.OneOf(MESH_FAMILIES))
    sizes = fields.List(
        fields.Integer(validate=validate.Range(min=0)),
        required=True,
        validate=validate.Length(min=1),
    )
    k = fields.Integer(validate=validate.Range(min=1))
    base_n = fields.Integer(validate=validate.Range(min=2))
    extra_levels = fields.Integer(validate=validate.Range(min=0))


class CaseFileSchema(Schema):
    id = fields.String(required=True, validate=validate.Length(min=1))
    description = fields.String()
    dim = fields.Integer(required=True, validate=validate.OneOf([2, 3]))
    mesh = fields.Nested(MeshSpecSchema, required=True)
    solution = fields.String(required=True)
    diffusion = fields.Raw(required=True)
    convection = fields.List(fields.String())
    reaction = fields.String()
    source = fields.String()
    dirichlet_tags = fields.List(fields.String(validate=validate.OneOf(BOUNDARY_TAGS)))
    robin_tags = fields.List(fields.String(validate=validate.OneOf(BOUNDARY_TAGS)))
    robin_alpha = fields.String()
    dirichlet_mode = fields.String(validate=validate.OneOf(["nodal", "l2"]))

    @validates_schema
    def _shapes(self, data, **kwargs):
        dim = data.get("dim")
        diffusion = data.get("diffusion")
        if not isinstance(diffusion, str):
            rows_ok = isinstance(diffusion, list) and all(
                isinstance(row, list) and all(isinstance(entry, str) for entry in row) for row in diffusion
            )
            if not rows_ok or len(diffusion) != dim or any(len(row) != dim for row in diffusion):
                raise ValidationError(f"diffusion must be a string or a {dim}x{dim} list of strings", "diffusion")
        convection = data.get("convection")
        if convection is not None and len(convection) != dim:
            raise ValidationError(f"convection needs {dim} components", "convection")
