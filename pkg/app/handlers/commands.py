import logging
import os
from typing import Dict, Any, List, Tuple

import numpy as np

from ..core.classification import classify, coeffs_to_relation, reduction_residual
from ..core.natural_pde import (
    edge_influence,
    nu_field_from_lambda,
    residual_curvature_form,
    solve_elliptic,
    solve_hyperbolic,
)
from ..core.parallel import parallel_family
from ..core.reconstruction import reconstruct, two_path_discrepancy, verify_bonnet
from ..core.surface_invariants import check_codazzi, check_gauss, strong_regularity
from ..core.weingarten import make_basic_class, registry
from ..errors import ConfigError, VerificationError
from ..models.grid import GridField
from ..models.job import JobConfig
from ..models.relation import ClassificationResult, FractionalCoeffs, LinearRelation
from ..models.surface import SurfacePatch, VerificationReport
from ..models.weingarten import BasicClass, WeingartenPair
from ..storage.files import file_store
from ..utils.text import render_catalog, render_classification, render_report

logger = logging.getLogger(__name__)


class CommandHandler:
    def __init__(self):
        self.store = file_store
        self._commands = {
            "classes": self.cmd_classes,
            "solve": self.cmd_solve,
            "reconstruct": self.cmd_reconstruct,
            "verify": self.cmd_verify,
            "parallel": self.cmd_parallel,
            "classify": self.cmd_classify,
        }

    def run(self, config: JobConfig):
        """Dispatch a validated job to its command"""
        logger.debug("Running %s with %s", config.command, config.to_dict())
        return self._commands[config.command](config)

    # --- shared steps -------------------------------------------------------

    def _basic(self, config: JobConfig) -> Tuple[BasicClass, WeingartenPair]:
        return make_basic_class(config.class_id, config.params())

    def _solve(self, config: JobConfig, basic: BasicClass) -> GridField:
        """lambda0 plus a Gaussian bump of the configured amplitude and width"""
        grid = config.grid_spec()
        u, v = grid.axes()
        uc, vc = 0.5 * (u[0] + u[-1]), 0.5 * (v[0] + v[-1])
        lam0 = basic.lambda0
        if basic.pde.character == "hyperbolic":
            init = lam0 + config.amplitude * np.exp(-(v - vc) ** 2 / config.width)
            lam = solve_hyperbolic(basic, init, np.zeros_like(v), grid)
        else:
            def boundary(U, V):
                return lam0 + config.amplitude * np.exp(-((U - uc) ** 2 + (V - vc) ** 2) / config.width)

            lam = solve_elliptic(basic, boundary, grid, omega=config.omega)
        return nu_field_from_lambda(basic, lam)

    def _field(self, config: JobConfig, basic: BasicClass) -> GridField:
        if config.field_path:
            field = self.store.read_field(config.field_path)
            if field.class_id not in (basic.id, "custom"):
                logger.warning("Field %s was written for %s, read as %s", config.field_path, field.class_id, basic.id)
            return nu_field_from_lambda(basic, field)
        return self._solve(config, basic)

    def _patch(self, config: JobConfig) -> Tuple[WeingartenPair, GridField, SurfacePatch]:
        basic, pair = self._basic(config)
        field = self._field(config, basic)
        return pair, field, reconstruct(pair, field)

    def _export(self, config: JobConfig, name: str, patch: SurfacePatch) -> str:
        fmt = "obj" if config.format == "field" else config.format
        return self.store.export_patch(os.path.join(config.out, f"{name}.{fmt}"), patch, fmt)

    # --- commands -------------------------------------------------------------

    def cmd_classes(self, config: JobConfig = None) -> List[BasicClass]:
        """List the ten basic classes with their natural PDEs"""
        classes = registry.catalog()
        print(render_catalog(classes))
        return classes

    def cmd_solve(self, config: JobConfig) -> GridField:
        basic, _ = self._basic(config)
        field = self._solve(config, basic)
        path = self.store.write_field(os.path.join(config.out, "field.txt"), field)
        print(render_report(f"solved {basic.id} on {field.shape[0]}x{field.shape[1]}", {
            "min nu": float(field.values.min()),
            "max nu": float(field.values.max()),
            "output": path,
        }))
        return field

    def cmd_reconstruct(self, config: JobConfig) -> SurfacePatch:
        pair, field, patch = self._patch(config)
        mesh = self._export(config, "surface", patch)
        dump = self.store.write_patch(os.path.join(config.out, "patch.txt"), patch)
        print(render_report(f"reconstructed {pair.label}", {
            "renormalizations": patch.renormalizations,
            "mesh": mesh,
            "dump": dump,
        }))
        return patch

    def cmd_verify(self, config: JobConfig) -> VerificationReport:
        pair, field, patch = self._patch(config)
        report = verify_bonnet(patch, pair, tol=config.tol)
        report.extra.update(
            residual=residual_curvature_form(pair, field).max_abs,
            gauss=check_gauss(patch.fields, field.du, field.dv, exclude=edge_influence(field, reach=2)).max_abs,
            codazzi=check_codazzi(patch.fields, field.du, field.dv, exclude=edge_influence(field)).max_abs,
            two_path_corner=two_path_discrepancy(patch.fields, field)["corner"],
            strongly_regular=float(np.mean(strong_regularity(patch.fields, field.du, field.dv))),
        )
        values = report.to_dict()
        self.store.write_rows(os.path.join(config.out, "verify.csv"),
                              [{"key": k, "value": v} for k, v in values.items()])
        print(render_report(f"verification of {pair.label}", values))
        if not report.passed:
            raise VerificationError(
                f"max invariant deviation {report.max_deviation:.3e} exceeds tol {report.tol:g}",
                details=values,
            )
        return report

    def cmd_parallel(self, config: JobConfig) -> List[Dict[str, Any]]:
        if not config.offsets:
            raise ConfigError("parallel needs at least one --offset")
        pair, field, patch = self._patch(config)
        rows, patches = parallel_family(patch, config.offsets, pair, field)
        for a, bar in patches.items():
            self._export(config, f"parallel_a{a:+.6g}", bar)
        path = self.store.write_rows(os.path.join(config.out, "family.csv"), rows)
        for row in rows:
            print(render_report(f"offset a={row['a']:g}", {k: v for k, v in row.items() if k != "a"}))
        logger.info("Parallel family written to %s", path)
        return rows

    def cmd_classify(self, config: JobConfig) -> ClassificationResult:
        if config.relation is not None:
            rel = LinearRelation.parse(config.relation)
        elif config.coeffs is not None:
            rel = coeffs_to_relation(FractionalCoeffs.parse(config.coeffs))
        else:
            raise ConfigError("classify needs --relation or --coeffs")
        result = classify(rel)
        print(render_classification(result))
        logger.debug("Reduction residual %.3e", reduction_residual(result))
        return result


# Create a singleton instance
command_handler = CommandHandler()
