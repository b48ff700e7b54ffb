"""Parameter presets for the reference figure set.

Every figure uses ``N = 0.5`` with maximal squeezing ``|M| = sqrt(N (N + 1))``,
``omega12 = 20 gamma`` and a detector half-bandwidth of ``2 gamma``.  The
squeezing phase is fixed at zero, so the Bell phase equals the relative phase.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .params import SystemParams, max_correlation


class UnknownFigure(KeyError):
    pass


def figure_params(gamma12: float, delta_phi: float, dicke: bool = False) -> SystemParams:
    return SystemParams(
        gamma=1.0,
        gamma12=gamma12,
        omega12=20.0,
        n_photons=0.5,
        m_abs=max_correlation(0.5),
        phi_s=0.0,
        phi_b=delta_phi,
        gamma_d=2.0,
        dicke=dicke,
    )


@dataclass(frozen=True)
class FigureRun:
    label: str
    params: SystemParams


@dataclass(frozen=True)
class FigureSpec:
    name: str
    runs: tuple
    products: tuple
    t_max: float = 4.0

    @property
    def single(self) -> bool:
        return len(self.runs) == 1


_SPECTRUM_PRODUCTS = ("spectrum", "broadband_spectrum", "populations", "holes",
                      "broadband_holes", "steady_state")
_CONCURRENCE_PRODUCTS = ("concurrence", "esd")

FIGURES = {
    "fig2": FigureSpec("fig2", (FigureRun("fig2", figure_params(1.0, 0.0, dicke=True)),), _SPECTRUM_PRODUCTS),
    "fig3": FigureSpec("fig3", (FigureRun("fig3", figure_params(1.0, math.pi, dicke=True)),), _SPECTRUM_PRODUCTS),
    "fig4": FigureSpec(
        "fig4",
        (
            FigureRun("fig4_dphi_pi", figure_params(1.0, math.pi, dicke=True)),
            FigureRun("fig4_dphi_0", figure_params(1.0, 0.0, dicke=True)),
        ),
        _CONCURRENCE_PRODUCTS,
        t_max=10.0,
    ),
    "fig5": FigureSpec("fig5", (FigureRun("fig5", figure_params(0.5, 0.0)),), _SPECTRUM_PRODUCTS),
    "fig6": FigureSpec("fig6", (FigureRun("fig6", figure_params(0.5, math.pi)),), _SPECTRUM_PRODUCTS),
    "fig7": FigureSpec("fig7", (FigureRun("fig7", figure_params(-0.5, 0.0)),), _SPECTRUM_PRODUCTS),
    "fig8": FigureSpec("fig8", (FigureRun("fig8", figure_params(-0.5, math.pi)),), _SPECTRUM_PRODUCTS),
    "fig9": FigureSpec(
        "fig9",
        (
            FigureRun("fig9_gamma12_m0.5", figure_params(-0.5, 0.0)),
            FigureRun("fig9_gamma12_p0.5", figure_params(0.5, 0.0)),
        ),
        _CONCURRENCE_PRODUCTS,
        t_max=10.0,
    ),
}


def get_figure(name: str) -> FigureSpec:
    try:
        return FIGURES[name]
    except KeyError:
        raise UnknownFigure(f"unknown figure {name!r}; choose from {', '.join(FIGURES)}") from None
