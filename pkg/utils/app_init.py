"""Shared initialization utilities for the check suites."""

from pathlib import Path
from typing import Optional, Union

import yaml

from engine.phase_space import HamiltonianFlow
from engine.prequant import CurvatureGrid, CurvatureProbe, OscillatorGeometry, QuantizabilityChecker
from engine.pairing import FourierTransform, SegalBargmannTransform
from engine.fresnel import FresnelOracle, SchrodingerPairing
from engine.szego import ExpansionFitter

DEFAULT_CONFIG_PATH = Path(__file__).resolve().parent.parent / "config" / "quantization_config.yaml"

REQUIRED_SECTIONS = ('phase_space', 'prequant', 'operators', 'pairing', 'fresnel', 'szego', 'cli')


def load_config(path: Optional[Union[str, Path]] = None) -> dict:
    """Load the YAML configuration.

    Args:
        path: Config file (defaults to config/quantization_config.yaml)

    Returns:
        Parsed configuration with every section present
    """
    config_path = Path(path) if path is not None else DEFAULT_CONFIG_PATH
    if not config_path.exists():
        raise ValueError(f"config file not found: {config_path}")
    with open(config_path, 'r', encoding='utf-8') as f:
        config = yaml.safe_load(f) or {}

    missing = [s for s in REQUIRED_SECTIONS if s not in config]
    if missing:
        raise ValueError(f"config {config_path} is missing sections {missing}")
    return config


def initialize_engine(state, config: Optional[dict] = None):
    """Build engine components from the config and store them on the run state.

    Calling it again on an initialized state does nothing.
    """
    if 'checker' in state:
        return  # Already initialized

    config = config if config is not None else state.get('config') or load_config()

    phase_space = config['phase_space']
    flow = HamiltonianFlow(
        steps=phase_space['flow_steps'],
        min_steps=phase_space['min_flow_steps'],
        blowup_bound=phase_space['blowup_bound']
    )

    prequant = config['prequant']
    checker = QuantizabilityChecker(
        tolerance=prequant['integrality_tolerance'],
        polar_nodes=prequant['polar_nodes'],
        angular_nodes=prequant['angular_nodes'],
        admissible_count=prequant['admissible_count']
    )
    probe = CurvatureProbe(step=prequant['curvature_step'])
    grid = CurvatureGrid(radius=prequant['curvature_radius'], points_per_axis=prequant['curvature_points'])
    oscillator = OscillatorGeometry(vertices=prequant['loop_vertices'])

    pairing = config['pairing']
    fourier = FourierTransform(
        start_nodes=pairing['start_nodes'],
        max_refinements=pairing['max_refinements'],
        tolerance=pairing['quadrature_tolerance'],
        tail_tolerance=pairing['tail_tolerance']
    )
    segal_bargmann = SegalBargmannTransform(
        start_nodes=pairing['start_nodes'],
        max_refinements=pairing['max_refinements'],
        tolerance=pairing['quadrature_tolerance'],
        circle_radius=pairing['circle_radius']
    )

    fresnel = config['fresnel']
    oracle = FresnelOracle(
        eps_factor=fresnel['eps_factor'],
        levels=fresnel['eps_levels'],
        cutoff_exponent=fresnel['cutoff_exponent'],
        points_per_oscillation=fresnel['points_per_oscillation']
    )
    schrodinger = SchrodingerPairing(
        grid_points=fresnel['grid_points'],
        half_width_sigmas=fresnel['half_width_sigmas'],
        interior_fraction=fresnel['interior_fraction'],
        tail_tolerance=fresnel['tail_tolerance'],
        mass=fresnel['mass'],
        hbar=fresnel['hbar']
    )

    szego = config['szego']
    fitter = ExpansionFitter(
        min_ladder=szego['min_ladder'],
        residual_threshold=szego['fit_residual_threshold']
    )

    state['config'] = config
    state['flow'] = flow
    state['checker'] = checker
    state['curvature_probe'] = probe
    state['curvature_grid'] = grid
    state['oscillator'] = oscillator
    state['fourier'] = fourier
    state['segal_bargmann'] = segal_bargmann
    state['fresnel_oracle'] = oracle
    state['schrodinger'] = schrodinger
    state['fitter'] = fitter
