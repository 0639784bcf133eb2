"""Szegő suite: kernel ladders, the k-expansion fit and the projective-line trace."""

import logging
from typing import List

import numpy as np

from app.routes import route
from engine.szego import ExpansionFitter, default_points, kernel_diagonal, ladder_table, trace_integral
from models.results import AsymptoticFit, CheckReport, KernelModel
from .base import option, run_check

logger = logging.getLogger(__name__)


def add_arguments(parser):
    parser.add_argument('--model', choices=[m.value for m in KernelModel], help='Run only this model')
    parser.add_argument('--ladder', type=int, nargs='+', help='Tensor powers k')


def _model_checks(
    state,
    config: dict,
    model: KernelModel,
    ladder: List[int],
    reference: AsymptoticFit
) -> List[CheckReport]:
    fitter: ExpansionFitter = state['fitter']
    points = default_points(config['sample_points'], config['sample_radius'])
    homogeneity_tolerance = config['homogeneity_tolerance']
    inputs = {'model': model.value, 'ladder': ladder}

    def homogeneity():
        diagonals = [kernel_diagonal(model, k, points) for k in ladder]
        worst = max(d.homogeneity_defect for d in diagonals)
        state.add_table(f"szego-{model.value}", ladder_table(model, ladder, points))
        return {'diagonals': [d.to_dict() for d in diagonals], 'max_homogeneity_defect': worst}, \
            worst <= homogeneity_tolerance

    def expansion():
        fit = fitter.fit_diagonals([kernel_diagonal(model, k, points) for k in ladder], reference)
        passed = (abs(fit.n_hat - 1.0) <= config['exponent_tolerance']
                  and abs(fit.normalized_a0 - 1.0) <= config['leading_tolerance'])
        logger.info("%s: n_hat=%.6f a0·π=%.6f a1·π=%.6f", model.value, fit.n_hat,
                    fit.normalized_a0, fit.normalized_a1)
        return fit.to_dict(), passed

    return [
        run_check(f"szego.homogeneity.{model.value}", inputs, homogeneity,
                  {'homogeneity': homogeneity_tolerance}),
        run_check(f"szego.fit.{model.value}", inputs, expansion, {
            'exponent': config['exponent_tolerance'],
            'leading': config['leading_tolerance'],
            'fit_residual': fitter.residual_threshold,
        }),
    ]


def _trace_check(config: dict, ladder: List[int]) -> CheckReport:
    tolerance = config['trace_tolerance']

    def body():
        rows = [{'k': k, 'trace': trace_integral(k), 'expected': k + 1} for k in ladder]
        worst = max(abs(r['trace'] - r['expected']) / r['expected'] for r in rows)
        return {'traces': rows, 'max_relative_error': worst}, worst <= tolerance

    return run_check("szego.trace.projective-line", {'ladder': ladder}, body, {'relative': tolerance})


def _reference_check(config: dict, ladder: List[int], reference: AsymptoticFit) -> CheckReport:
    tolerance = config['reference_tolerance']

    def body():
        # Π_k = k/π exactly on the Bargmann plane
        defect = abs(np.pi * reference.a0 - 1.0)
        return {**reference.to_dict(), 'slope_defect': defect}, defect <= tolerance

    return run_check("szego.reference-slope", {'ladder': ladder}, body, {'slope': tolerance})


@route('szego', add_arguments, help='Szegő kernel ladders and asymptotic fit')
def run(args, state) -> List[CheckReport]:
    config = state['config']['szego']
    ladder = [int(k) for k in option(args, 'ladder', config['ladder'])]
    models = [KernelModel(args.model)] if getattr(args, 'model', None) else list(KernelModel)

    fitter: ExpansionFitter = state['fitter']
    reference = fitter.reference_fit(ladder, default_points(config['sample_points'], config['sample_radius']))
    reports = [_reference_check(config, ladder, reference)]
    for model in models:
        reports.extend(_model_checks(state, config, model, ladder, reference))
    if KernelModel.PROJECTIVE_LINE in models:
        reports.append(_trace_check(config, ladder))
    return reports
