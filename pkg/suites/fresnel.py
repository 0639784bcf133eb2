"""Fresnel suite: closed-form phases against the damped oracle, and the Schrödinger generator."""

import logging
from typing import List

from app.routes import route
from engine.fresnel import (
    ProbeState,
    fresnel_gaussian,
    fresnel_quadratic,
    hbar_scaling_defect,
    linear_term_contribution,
    residual_halving_ratio,
)
from models.results import Amplitude, CheckReport, FresnelSpec
from .base import option, run_check

logger = logging.getLogger(__name__)

COEFFICIENTS = (0.5, 1.0, 4.0)
DIMENSIONS = (1, 2, 3)


def add_arguments(parser):
    parser.add_argument('--t', type=float, help='Time for the generator check, in (0, 0.1]')


def _integral_checks(state, config: dict) -> List[CheckReport]:
    oracle = state['fresnel_oracle']
    tolerance = config['relative_tolerance']
    inputs = {'a': list(COEFFICIENTS), 'n': list(DIMENSIONS), 'eps_factor': oracle.eps_factor}

    def compare(specs, closed_form):
        rows = []
        for spec in specs:
            exact = closed_form(spec)
            measured = oracle.evaluate(spec)
            scale = abs(exact) or 1.0
            rows.append({**spec.to_dict(), 'closed_form': exact, 'oracle': measured,
                         'relative_error': abs(measured - exact) / scale})
        worst = max(row['relative_error'] for row in rows)
        return {'table': rows, 'max_relative_error': worst}, worst <= tolerance

    plain = [FresnelSpec(n=n, a=a) for n in DIMENSIONS for a in COEFFICIENTS]
    quadratic = [FresnelSpec(n=n, a=a, amplitude=Amplitude.QUADRATIC, j=0, l=l)
                 for n in DIMENSIONS for a in COEFFICIENTS for l in range(min(n, 2))]

    def linear():
        values = {a: linear_term_contribution(a, oracle) for a in COEFFICIENTS}
        worst = max(abs(v) for v in values.values())
        return {'values': [{'a': a, 'value': v} for a, v in values.items()], 'max_abs': worst}, worst <= tolerance

    return [
        run_check("fresnel.gaussian", inputs, lambda: compare(plain, lambda s: fresnel_gaussian(s)[1]),
                  {'relative': tolerance}),
        run_check("fresnel.quadratic", inputs, lambda: compare(quadratic, fresnel_quadratic),
                  {'relative': tolerance}),
        run_check("fresnel.linear-term", {'a': list(COEFFICIENTS)}, linear, {'absolute': tolerance}),
    ]


def _generator_checks(state, config: dict, t: float, hbar: float) -> List[CheckReport]:
    # generator tolerances hold in the pairing's own units (m = ℏ = 1 by default)
    pairing = state['schrodinger']
    standard = ProbeState.standard_gaussian()
    residual_states = [standard, ProbeState.displaced_gaussian()]
    residual_tolerance = config['residual_tolerance']
    band = config['halving_band']
    richardson_tolerance = config['richardson_tolerance']
    scaling_tolerance = config['hbar_scaling_tolerance']
    times = config['times']
    units = {'hbar': pairing.hbar, 'mass': pairing.mass}

    def generator():
        rows = []
        for wave in residual_states:
            check = pairing.schrodinger_generator_check(wave, t)
            rows.append({'state': wave.label, **check.to_dict()})
        worst = max(row['residual'] for row in rows)
        # the plane wave and flat top converge at O(t) with large constants;
        # they are checked through the extrapolated coefficient only
        return {'states': rows, 'max_residual': worst,
                'extrapolation_only': [ProbeState.plane_wave_gaussian().label, ProbeState.flat_top().label]}, \
            worst <= residual_tolerance

    def convergence():
        table = pairing.generator_convergence(standard, times)
        state.add_table('fresnel', table)
        ratio = residual_halving_ratio(table)
        return {'table': table.to_dict(orient='records'), 'halving_ratio': ratio}, abs(ratio - 2.0) <= band

    def extrapolated():
        states = [standard, ProbeState.displaced_gaussian(), ProbeState.plane_wave_gaussian(), ProbeState.flat_top()]
        rows = [{'state': s.label, 'relative_error': pairing.first_order_relative_error(s, t)} for s in states]
        worst = max(row['relative_error'] for row in rows)
        return {'states': rows, 'max_relative_error': worst}, worst <= richardson_tolerance

    def hbar_scaling():
        defect, s = hbar_scaling_defect(pairing, standard, hbar, t)
        return {'relative_defect': defect, 'time': s}, defect <= scaling_tolerance

    return [
        run_check("fresnel.generator", {'t': t, 'states': [s.label for s in residual_states], **units}, generator,
                  {'residual': residual_tolerance}),
        run_check("fresnel.generator-order", {'times': times, **units}, convergence, {'halving_band': band}),
        run_check("fresnel.generator-extrapolated", {'t': t, **units}, extrapolated,
                  {'relative': richardson_tolerance}),
        run_check("fresnel.hbar-scaling", {'t': t, 'hbar': hbar, 'reference_hbar': pairing.hbar}, hbar_scaling,
                  {'relative': scaling_tolerance}),
    ]


@route('fresnel', add_arguments, help='Fresnel integral tables and Schrödinger generator convergence')
def run(args, state) -> List[CheckReport]:
    config = state['config']['fresnel']
    t = option(args, 't', config['time'])
    if not 0.0 < t <= 0.1:
        raise ValueError(f"--t must lie in (0, 0.1], got {t}")
    return _integral_checks(state, config) + _generator_checks(state, config, t, args.hbar)
