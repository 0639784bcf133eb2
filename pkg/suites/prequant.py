"""Prequantization suite: integrality, torus lattice, curvature and holonomy checks."""

import logging
from typing import List

import numpy as np

from app.routes import route
from engine.prequant import (
    check_torus_lattice,
    cylinder_loop,
    cylinder_momentum_levels,
    holonomy_loop,
    lattice_pairing,
)
from models.manifold import HermitianModelMetric, ManifoldKind, ModelManifold
from models.results import CheckReport
from .base import option, run_check

logger = logging.getLogger(__name__)

MODELS = [k.value for k in (
    ManifoldKind.SPHERE, ManifoldKind.PRODUCT_SPHERES, ManifoldKind.PROJECTIVE_LINE, ManifoldKind.TORUS
)]


def add_arguments(parser):
    parser.add_argument('--model', choices=MODELS, help='Check integrality of this model only')
    parser.add_argument('--radius', type=float, help='Sphere radius')
    parser.add_argument('--r1', type=float, help='First radius of a product of spheres')
    parser.add_argument('--r2', type=float, help='Second radius of a product of spheres')
    parser.add_argument('--scale', type=float, help='Torus hermitian form scale h, H(z,w) = h z conj(w)')
    parser.add_argument('--lattice', nargs=2, type=complex, metavar=('L1', 'L2'),
                        help='Torus lattice generators, e.g. 1 1j')


def build_manifold(args, hbar: float) -> ModelManifold:
    """Model named by --model with its parameters; ValueError on missing or bad values."""
    kind = ManifoldKind(args.model)
    if kind == ManifoldKind.SPHERE:
        if args.radius is None:
            raise ValueError("--model sphere needs --radius")
        return ModelManifold.sphere(args.radius, hbar=hbar)
    if kind == ManifoldKind.PRODUCT_SPHERES:
        if args.r1 is None or args.r2 is None:
            raise ValueError("--model product-spheres needs --r1 and --r2")
        return ModelManifold.product_spheres(args.r1, args.r2, hbar=hbar)
    if kind == ManifoldKind.TORUS:
        return ModelManifold.torus(
            hermitian_scale=option(args, 'scale', 1.0),
            lattice=tuple(option(args, 'lattice', (1.0, 1j))),
            hbar=hbar
        )
    return ModelManifold.projective_line(hbar=hbar)


def _pc1_check(state, manifold: ModelManifold) -> CheckReport:
    checker = state['checker']

    def body():
        report = checker.check_pc1(manifold)
        outputs = report.to_dict()
        outputs['admissible_parameters'] = checker.admissible_parameters(manifold)
        if not report.is_integral:
            logger.info("%s is not quantizable: ratio %.9g", manifold.kind.value, report.ratio)
        return outputs, report.is_integral

    return run_check(
        f"prequant.pc1.{manifold.kind.value}",
        {k: v for k, v in manifold.to_dict().items() if v is not None},
        body,
        {'integrality': checker.tolerance}
    )


def _lattice_check(config: dict, scale: float, lattice) -> CheckReport:
    tolerance = config['lattice_tolerance']

    def body():
        quantizable = check_torus_lattice(scale, lattice, tolerance)
        return {'quantizable': quantizable, 'im_h21': lattice_pairing(scale, lattice)}, quantizable

    return run_check("prequant.torus-lattice", {'scale': scale, 'lattice': list(lattice)}, body,
                     {'lattice': tolerance})


def _curvature_checks(state, config: dict, hbar: float) -> List[CheckReport]:
    probe = state['curvature_probe']
    grid = state['curvature_grid']
    tolerance = config['curvature_tolerance']
    metrics = [
        HermitianModelMetric.for_model(ModelManifold.flat(hbar=hbar)),
        HermitianModelMetric.for_model(ModelManifold.disk(hbar=hbar)),
        HermitianModelMetric.for_model(ModelManifold.torus(hbar=hbar)),
        HermitianModelMetric.for_model(ModelManifold.projective_line(hbar=hbar)),
    ]
    reports = []
    for metric in metrics:
        def body(metric=metric):
            defect = probe.curvature_defect(metric, grid)
            return {'defect': defect, 'curvature_ratio': metric.curvature_ratio}, defect <= tolerance

        reports.append(run_check(
            f"prequant.curvature.{metric.model.kind.value}",
            {'step': probe.step, 'radius': grid.radius, 'points_per_axis': grid.points_per_axis},
            body,
            {'curvature': tolerance}
        ))

    disk = metrics[1]
    band = config['curvature_order_band']

    def convergence():
        slope, defects = probe.curvature_convergence(disk, grid)
        return {'slope': slope, 'defects': defects}, abs(slope - 2.0) <= band

    reports.append(run_check("prequant.curvature-order.disk", {'radius': grid.radius}, convergence,
                             {'slope_band': band}))
    return reports


def _kahler_check(state, config: dict, hbar: float) -> CheckReport:
    probe = state['curvature_probe']
    grid = state['curvature_grid']
    tolerance = config['kahler_tolerance']
    models = [
        ModelManifold.flat(hbar=hbar),
        ModelManifold.disk(hbar=hbar),
        ModelManifold.torus(hbar=hbar),
        ModelManifold.projective_line(hbar=hbar),
        ModelManifold.sphere(1.0, hbar=hbar),
    ]

    def body():
        defects = {m.kind.value: probe.kahler_defect(m, grid) for m in models}
        worst = max(defects.values())
        return {'defects': defects, 'max_defect': worst}, worst <= tolerance

    return run_check("prequant.kahler-potential",
                     {'step': probe.step, 'radius': grid.radius, 'points_per_axis': grid.points_per_axis},
                     body, {'kahler': tolerance})


def _holonomy_checks(state, config: dict, hbar: float) -> List[CheckReport]:
    oscillator = state['oscillator']
    tolerance = config['holonomy_tolerance']

    def oscillator_body():
        rows = []
        worst = 0.0
        for energy in (0.5 * hbar, hbar, 2.5 * hbar):
            action = oscillator.action(energy, hbar)
            expected = 2.0 * np.pi * energy
            worst = max(worst, abs(action - expected))
            rows.append({'energy': energy, 'action': action, 'phase': complex(np.exp(1j * action / hbar))})
        return {'loops': rows, 'max_defect': worst}, worst <= tolerance

    def cylinder_body():
        manifold = ModelManifold.cylinder(hbar=hbar)
        rows = []
        worst = 0.0
        for momentum in cylinder_momentum_levels(2, hbar):
            result = holonomy_loop(manifold, cylinder_loop(momentum))
            worst = max(worst, abs(result.phase - 1.0))
            rows.append({'momentum': momentum, **result.to_dict()})
        return {'loops': rows, 'max_phase_defect': worst}, worst <= tolerance

    return [
        run_check("prequant.holonomy.oscillator", {'vertices': oscillator.vertices, 'hbar': hbar},
                  oscillator_body, {'holonomy': tolerance}),
        run_check("prequant.holonomy.cylinder", {'hbar': hbar}, cylinder_body, {'holonomy': tolerance}),
    ]


@route('prequant', add_arguments, help='Prequantization checks')
def run(args, state) -> List[CheckReport]:
    """Integrality of one --model, or the full prequantization battery."""
    config = state['config']['prequant']
    hbar = args.hbar

    if getattr(args, 'model', None):
        return [_pc1_check(state, build_manifold(args, hbar))]

    reports = [
        _pc1_check(state, ModelManifold.sphere(0.5 * hbar, hbar=hbar)),
        _pc1_check(state, ModelManifold.product_spheres(0.5 * hbar, hbar, hbar=hbar)),
        # the Fubini–Study form has fixed area π, so ℙ¹ is integral at ℏ = 1 only
        _pc1_check(state, ModelManifold.projective_line()),
        _pc1_check(state, ModelManifold.torus(hermitian_scale=hbar, hbar=hbar)),
        _lattice_check(config, 1.0, (1.0, 1j)),
    ]
    reports.extend(_curvature_checks(state, config, hbar))
    reports.append(_kahler_check(state, config, hbar))
    reports.extend(_holonomy_checks(state, config, hbar))
    return reports
