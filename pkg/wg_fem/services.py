# -*- coding: utf-8 -*-
# Copyright 2026 The wg-fem Authors  (see the AUTHORS file)
# SPDX-License-Identifier: GPL-3.0+

import logging
import os
import time
from dataclasses import dataclass

from .assembly import assemble
from .cases import MeshFamily, kellogg_case, kellogg_self_test
from .element import Approach
from .exceptions import CaseError
from .mesh import dump_mesh, locally_refined_kellogg
from .postprocess import ErrorReport, LevelRecord, error_norms
from .solvers import SolverConfig, solve

logger = logging.getLogger(__name__)

# case id -> check that must pass before the case is run
SELF_TESTS = {
    "4": kellogg_self_test,
}


@dataclass
class SweepEntry:
    extra_levels: int
    initial_cells: int
    report: ErrorReport


class BenchmarkService(object):

    def __init__(self, config, notifier=None):
        self._config = config
        self._notifier = notifier
        self._bench = config["bench"]

    def solver_config(self, **overrides):
        section = dict(self._config["solver"])
        section.update({key: value for key, value in overrides.items() if value is not None})
        return SolverConfig.from_config(section)

    def _prepare(self, case, levels):
        case = case.with_levels(levels)
        if case.mesh_family is MeshFamily.KELLOGG:
            kellogg = self._config["kellogg"]
            case = case.with_kellogg_mesh(kellogg["base_n"], kellogg["extra_levels"])
        return case

    def _self_test(self, case):
        check = SELF_TESTS.get(case.case_id)
        if check is None:
            return
        result = check()
        if not result.passed():
            logger.error(f"Self-test of case {case.case_id} failed: {result}")
            raise CaseError(f"Self-test of case {case.case_id} failed: {result}")

    def _dump(self, case, level, mesh, out_dir):
        os.makedirs(out_dir, exist_ok=True)
        dump_mesh(mesh, os.path.join(out_dir, f"{case.case_id}_mesh_{level}.txt"))

    def run_case(self, case, levels=None, order=None, solver_config=None, approach=None,
                 out_dir=None, dump_mesh=None, workers=None, prepared=False):
        """Run a case over its mesh schedule

        Args:
            case: The CaseSpec to run
            levels: Keep only the first `levels` meshes of the schedule
            order: Quadrature order, defaults to bench.quadrature_order
            solver_config: SolverConfig, defaults to the solver section
            approach: Gradient basis on triangles, defaults to bench.approach
            out_dir: Directory of the mesh dumps, defaults to bench.output_dir
            dump_mesh: Write every mesh of the schedule
            workers: Threads computing the local kernels
            prepared: The case already carries its Kellogg mesh parameters

        Returns:
            ErrorReport: One LevelRecord per mesh

        Raises:
            CaseError: A failed self-test
            SolverError: A linear solve that did not converge
        """
        order = order or self._bench["quadrature_order"]
        approach = Approach(approach or self._bench["approach"])
        solver_config = solver_config or self.solver_config()
        out_dir = out_dir or self._bench["output_dir"]
        dump_mesh = self._bench["dump_mesh"] if dump_mesh is None else dump_mesh
        workers = workers or self._bench["workers"]
        if not prepared:
            case = self._prepare(case, levels)
        else:
            case = case.with_levels(levels)

        self._self_test(case)
        exact = case.build()
        report = ErrorReport(case=case.case_id, order=order)
        logger.info(f"Starting case {case.case_id}: {case.description} ({len(case.sizes)} levels)")
        if self._notifier:
            self._notifier.publish_case_started(case.case_id, case.description, len(case.sizes))

        for level, mesh in case.meshes():
            start = time.perf_counter()
            if dump_mesh:
                self._dump(case, level, mesh, out_dir)
            system = assemble(mesh, exact.problem, approach, order, workers)
            x, solve_report = solve(system, solver_config)
            u0, ub = system.split(system.expand(x))
            norms = error_norms(mesh, u0, ub, exact.u, exact.grad_u, approach, order)
            record = LevelRecord(
                level=level,
                h=mesh.h,
                n_cells=mesh.n_cells,
                n_dofs=system.dofmap.n_dofs,
                norms=norms,
                iterations=solve_report.iterations,
                residual=solve_report.residual,
                order=order,
            )
            report.add(record)
            logger.info(
                f"Case {case.case_id} level {level}: h={mesh.h:.4g}, {mesh.n_cells} cells, "
                f"{solve_report.method} {solve_report.iterations} iterations, "
                f"{time.perf_counter() - start:.2f}s"
            )
            if self._notifier:
                self._notifier.publish_level(case.case_id, record)

        if self._notifier:
            self._notifier.publish_case_done(case.case_id, report)
        return report

    def kellogg_sweep(self, extra_levels_list=None, levels=None, **kwargs):
        """Interface case rates for initial meshes refined more and more around the origin"""
        kellogg = self._config["kellogg"]
        extra_levels_list = kellogg["sweep"] if extra_levels_list is None else extra_levels_list
        base_n = kellogg["base_n"]
        entries = []
        for extra_levels in extra_levels_list:
            case = kellogg_case(base_n=base_n, extra_levels=extra_levels)
            initial_cells = locally_refined_kellogg(base_n, extra_levels).n_cells
            logger.info(f"Sweep: extra_levels={extra_levels}, {initial_cells} initial triangles")
            report = self.run_case(case, levels=levels, prepared=True, **kwargs)
            entries.append(SweepEntry(extra_levels=extra_levels, initial_cells=initial_cells, report=report))
        return entries
