"""
Figure presets

The fig1 presets take r = 1.012 with time in units of g1. Every preset runs
at delta = 10 g1.
"""

from .errors import ScenarioError
from .scenario import Scenario

FIG1_NOTE = "couplings from r = g2/g1, not g1 = g2; scaled time is g1*t"

PRESETS: dict[str, Scenario] = {
    "fig1a": Scenario(model="quantum", mode1="coherent:10.5", mode2="coherent:10.1", r=1.012,
                      observables=("inversion",), name="fig1a", note=FIG1_NOTE),
    "fig1b": Scenario(model="quantum", mode1="coherent:10.5", mode2="thermal:10.1", r=1.012,
                      observables=("inversion",), name="fig1b", note=FIG1_NOTE),
    "fig2": Scenario(model="quantum", mode1="fock:5", mode2="coherent:5", r=1.023,
                     observables=("inversion",), name="fig2"),
    "fig3a": Scenario(model="quantum", mode1="fock:5", mode2="coherent:5", r=1.023,
                      observables=("negativity",), name="fig3a"),
    "fig3b": Scenario(model="quantum", mode1="fock:5", mode2="coherent:5", r=1.023,
                      observables=("linear-entropy",), name="fig3b"),
    "fig3": Scenario(model="quantum", mode1="fock:5", mode2="coherent:5", r=1.023,
                     observables=("inversion", "negativity", "linear-entropy"), name="fig3"),
    "fig4": Scenario(model="semiclassical", mode1="fock:2", mode2=None, r=1.41,
                     observables=("inversion", "negativity"), name="fig4"),
}


def get_preset(name: str) -> Scenario:
    try:
        return PRESETS[name]
    except KeyError:
        raise ScenarioError(f"unknown preset {name!r}; choose from {', '.join(PRESETS)}") from None
