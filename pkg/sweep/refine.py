"""
Local refinement of the two pulse areas around a quoted pair.

Final populations are sharply peaked in (alpha1, alpha2): a pair that
reaches its target with one envelope width can stop a few percent short
with another. The search is a bounded Nelder-Mead walk in multiples of
pi that starts from the quoted pair and never returns a worse one.
"""
import logging
from dataclasses import dataclass

import numpy as np
from rest_framework.exceptions import ValidationError
from scipy.optimize import minimize

from dynamics.config import DEFAULT_T_END, SystemConfig
from dynamics.simulation import POPULATION_LABELS, final_populations, simulate

logger = logging.getLogger(__name__)

# Half-width of the search box around the quoted areas, multiples of pi
DEFAULT_SPAN = 2.0


@dataclass(frozen=True, eq=False)
class Refinement:
    config: SystemConfig
    label: str
    start_value: float
    value: float
    evaluations: int

    @property
    def areas_pi(self):
        return (self.config.pulse.alpha1 / np.pi, self.config.pulse.alpha2 / np.pi)

    def as_dict(self):
        alpha1_pi, alpha2_pi = self.areas_pi
        return {
            'label': self.label,
            'alpha1_pi': alpha1_pi,
            'alpha2_pi': alpha2_pi,
            'start_value': self.start_value,
            'value': self.value,
            'evaluations': self.evaluations,
        }


def with_areas(cfg, areas_pi):
    alpha1, alpha2 = (max(float(area), 0.0) * np.pi for area in areas_pi)
    return cfg.replace(pulse=cfg.pulse.replace(alpha1=alpha1, alpha2=alpha2))


def final_population(cfg, label, t_end=DEFAULT_T_END, options=None):
    model, traj = simulate(cfg, t_end=t_end, n_points=2, options=options, escalate=False)
    return final_populations(traj, model.dressed)[label]


def refine_areas(cfg, label, threshold=None, t_end=DEFAULT_T_END, span=DEFAULT_SPAN, step=0.25,
                 max_evaluations=120, options=None):
    """Areas near ``cfg``'s that maximize the final P_label.

    A start pair already at ``threshold`` comes back untouched. Runs use
    the configured Fock cutoff without escalation.
    """
    errors = {}
    if label not in POPULATION_LABELS:
        errors['label'] = [f"must be one of {', '.join(POPULATION_LABELS)}"]
    if not span > 0:
        errors['span'] = ["must be > 0"]
    if not 0 < step <= span:
        errors['step'] = ["must lie in (0, span]"]
    if errors:
        raise ValidationError(errors)

    start = np.array([cfg.pulse.alpha1, cfg.pulse.alpha2]) / np.pi
    values = {}

    def population(areas_pi):
        key = tuple(np.round(areas_pi, 12))
        if key not in values:
            values[key] = final_population(with_areas(cfg, areas_pi), label, t_end=t_end, options=options)
        return values[key]

    start_value = population(start)
    if threshold is not None and start_value >= threshold:
        return Refinement(config=cfg, label=label, start_value=start_value, value=start_value, evaluations=1)

    simplex = np.array([start, start + [step, 0.0], start + [0.0, step]])
    result = minimize(
        lambda areas_pi: -population(areas_pi), start,
        method='Nelder-Mead',
        bounds=[(max(area - span, 0.0), area + span) for area in start],
        options={'initial_simplex': simplex, 'maxfev': max_evaluations, 'xatol': 1e-3, 'fatol': 1e-6},
    )
    improved = -result.fun > start_value
    best, value = (result.x, -float(result.fun)) if improved else (start, start_value)
    logger.info(
        "Refined P_%s from %.6f to %.6f at (%.4f, %.4f) pi after %d runs",
        label, start_value, value, best[0], best[1], len(values),
    )
    if threshold is not None and value < threshold:
        logger.warning("Refined P_%s = %.6f is still below %.2f", label, value, threshold)
    config = with_areas(cfg, best) if improved else cfg
    return Refinement(config=config, label=label, start_value=start_value, value=value, evaluations=len(values))
