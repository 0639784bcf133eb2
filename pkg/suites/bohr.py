"""Bohr–Sommerfeld suite: level tables, holonomy of the level circles and the classical flow behind them."""

import logging
from typing import List

import numpy as np
import pandas as pd

from app.routes import route
from engine.operators import corrected_operator, prequantum_operator, spectrum
from engine.phase_space import moment_map_defect
from engine.prequant import bohr_sommerfeld_levels, cylinder_momentum_levels
from models.basis import BasisSpec
from models.manifold import ModelManifold
from models.observable import Observable
from models.results import CheckReport
from .base import option, run_check

logger = logging.getLogger(__name__)


def add_arguments(parser):
    parser.add_argument('--n-max', dest='n_max', type=int, help='Highest level n')
    parser.add_argument('--shift', type=float, help='Holonomy shift d in [0, 1)')


@route('bohr', add_arguments, help='Bohr–Sommerfeld level tables')
def run(args, state) -> List[CheckReport]:
    hbar = args.hbar
    n_max = option(args, 'n_max', state['config']['operators']['spectrum_order'] - 1)
    shift = option(args, 'shift', 0.5)
    oscillator = state['oscillator']
    holonomy_tolerance = state['config']['prequant']['holonomy_tolerance']
    phase_config = state['config']['phase_space']
    level_tolerance = state['config']['prequant']['level_tolerance']
    action_tolerance = phase_config['action_tolerance']
    drift_tolerance = phase_config['drift_tolerance']
    if n_max < 0:
        raise ValueError(f"--n-max must be >= 0, got {n_max}")

    levels = bohr_sommerfeld_levels(shift, n_max, oscillator, hbar)
    state.add_table('bohr', pd.DataFrame({'n': np.arange(n_max + 1), 'energy': levels}, columns=['n', 'energy']))
    inputs = {'shift': shift, 'n_max': n_max, 'hbar': hbar}
    H = Observable.from_complex("z*zbar/2")

    def against_spectrum():
        # Fock truncation N keeps levels 0..N-1
        basis = BasisSpec.fock(max(n_max + 1, 4), hbar=hbar)
        if shift == 0.5:
            reference = spectrum(corrected_operator(H, basis))
        else:
            reference = [e + shift * hbar for e in spectrum(prequantum_operator(H, basis))]
        reference = reference[:n_max + 1]
        defect = float(np.max(np.abs(np.asarray(levels) - np.asarray(reference))))
        return {'levels': levels, 'operator_levels': reference, 'max_defect': defect}, defect <= level_tolerance

    def level_holonomy():
        rows = []
        for n, energy in enumerate(levels):
            action = oscillator.action(energy, hbar)
            expected = 2.0 * np.pi * hbar * (n + shift)
            rows.append({'n': n, 'energy': energy, 'action': action,
                         'relative_defect': abs(action - expected) / max(1.0, expected)})
        worst = max(r['relative_defect'] for r in rows)
        return {'levels': rows, 'max_defect': worst}, worst <= holonomy_tolerance

    def cylinder():
        momenta = cylinder_momentum_levels(n_max, hbar)
        return {'momenta': momenta}, bool(np.allclose(np.diff(momenta), hbar))

    def classical_flow():
        flow = state['flow']
        manifold = ModelManifold.flat(hbar=hbar)
        start = [1.0, 0.0]
        # quarter period from (q, p) = (1, 0): S = sin(2t)/4
        t = np.pi / 4.0
        action = flow.generating_action(manifold, H, start, t)
        drift = flow.energy_drift(manifold, H, start, 2.0 * np.pi)
        defect = abs(action.value - np.sin(2.0 * t) / 4.0)
        moment = moment_map_defect((1,), start, phase_config['moment_map_step'])
        outputs = {**action.to_dict(), 'action_defect': defect, 'period_energy_drift': drift,
                   'moment_map_defect': moment}
        passed = (defect <= action_tolerance and drift <= drift_tolerance
                  and moment <= phase_config['moment_map_tolerance'])
        return outputs, passed

    return [
        run_check("bohr.levels", inputs, against_spectrum, {'levels': level_tolerance}),
        run_check("bohr.holonomy", inputs, level_holonomy, {'holonomy': holonomy_tolerance}),
        run_check("bohr.cylinder", {'n_max': n_max, 'hbar': hbar}, cylinder),
        run_check("bohr.classical-flow", {'hbar': hbar}, classical_flow,
                  {'action': action_tolerance, 'drift': drift_tolerance}),
    ]
