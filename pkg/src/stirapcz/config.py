"""Run configuration: a single JSON tree with strict key checking.

Frequencies in the file are plain MHz (cycles); they are converted to
angular rad/us at the boundary.  Parsing is round-trip stable and any
unknown key is an error, so a typo cannot silently disable a channel.
"""

import json
from dataclasses import asdict, dataclass, field

from . import constants as C
from .dynamics import IntegratorOptions
from .noise import DistributionSpec, NoiseConfig
from .pulses import PulseParams


class ConfigError(ValueError):
    pass


@dataclass
class PulseBlock:
    preset: str = "to"          # or "custom" with the triple below
    t1: float | None = None
    t2: float | None = None
    omega: float | None = None


@dataclass
class PhysicalBlock:
    omega_p_max_mhz: float = C.OMEGA_P_MAX / C.TWO_PI
    omega_c_max_mhz: float = C.OMEGA_C_MAX / C.TWO_PI
    delta0_mhz: float = C.DELTA0 / C.TWO_PI
    blockade_mhz: float = C.BLOCKADE / C.TWO_PI


@dataclass
class NoiseBlock:
    detuning_kind: str | None = None    # gaussian | uniform | ushaped
    detuning_eps_mhz: float = 0.0
    doppler_temp_mk: float | None = None
    amplitude_bound: float = 0.0
    positions_temp_mk: float | None = None
    dephasing_gamma_z_mhz: float = 0.0
    interaction_fraction: float = 0.0
    decays: bool = False


@dataclass
class SamplingBlock:
    samples: int = 50
    seed: int = 0


@dataclass
class IntegratorBlock:
    method: str = "dopri5"
    rel_tol: float = 1e-9
    abs_tol: float = 1e-11
    max_step: float | None = None
    dt: float = 5e-5


@dataclass
class RunConfig:
    pulse: PulseBlock = field(default_factory=PulseBlock)
    physical: PhysicalBlock = field(default_factory=PhysicalBlock)
    noise: NoiseBlock = field(default_factory=NoiseBlock)
    sampling: SamplingBlock = field(default_factory=SamplingBlock)
    integrator: IntegratorBlock = field(default_factory=IntegratorBlock)
    output_dir: str = "out"

    # accepted pulse presets; "custom" takes the explicit triple
    PRESET_NAMES = ("to", "to_published", "der", "der_i_gauss",
                    "der_i_uniform", "custom")

    def validate(self):
        p = self.pulse
        if p.preset not in self.PRESET_NAMES:
            raise ConfigError("unknown pulse preset %r" % (p.preset,))
        if p.preset == "custom":
            if None in (p.t1, p.t2, p.omega):
                raise ConfigError("custom pulse needs t1, t2 and omega")
        nk = self.noise.detuning_kind
        if nk is not None and nk not in ("gaussian", "uniform", "ushaped"):
            raise ConfigError("unknown detuning distribution %r" % (nk,))
        if self.sampling.samples < 1:
            raise ConfigError("samples must be >= 1")
        if self.integrator.method not in ("dopri5", "rk4"):
            raise ConfigError("unknown integrator %r"
                              % (self.integrator.method,))
        return self

    def pulse_params(self):
        phys = self.physical
        kw = dict(omega_p_max=C.TWO_PI * phys.omega_p_max_mhz,
                  omega_c_max=C.TWO_PI * phys.omega_c_max_mhz,
                  delta0=C.TWO_PI * phys.delta0_mhz,
                  blockade=C.TWO_PI * phys.blockade_mhz)
        p = self.pulse
        if p.preset == "custom":
            return PulseParams(t1=p.t1, t2=p.t2, omega=p.omega, **kw)
        t1, t2, omega = C.PRESETS[p.preset]
        return PulseParams(t1=t1, t2=t2, omega=omega, **kw)

    def noise_config(self):
        n = self.noise
        det = None
        if n.detuning_kind is not None:
            det = DistributionSpec(n.detuning_kind,
                                   C.TWO_PI * n.detuning_eps_mhz)
        return NoiseConfig(detuning=det,
                           doppler_temp_mk=n.doppler_temp_mk,
                           amplitude_bound=n.amplitude_bound,
                           positions_temp_mk=n.positions_temp_mk,
                           dephasing_gamma_z=C.TWO_PI
                           * n.dephasing_gamma_z_mhz,
                           interaction_fraction=n.interaction_fraction,
                           decays=n.decays)

    def integrator_options(self):
        i = self.integrator
        return IntegratorOptions(method=i.method, rel_tol=i.rel_tol,
                                 abs_tol=i.abs_tol, max_step=i.max_step,
                                 dt=i.dt)

    def to_dict(self):
        return asdict(self)

    def dumps(self):
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"


_BLOCKS = {"pulse": PulseBlock, "physical": PhysicalBlock,
           "noise": NoiseBlock, "sampling": SamplingBlock,
           "integrator": IntegratorBlock}


def from_dict(data):
    """Build a validated RunConfig; unknown keys anywhere are rejected."""
    if not isinstance(data, dict):
        raise ConfigError("config root must be an object")
    known = set(_BLOCKS) | {"output_dir"}
    extra = set(data) - known
    if extra:
        raise ConfigError("unknown config keys: %s" % sorted(extra))
    kwargs = {}
    for name, cls in _BLOCKS.items():
        block = data.get(name, {})
        if not isinstance(block, dict):
            raise ConfigError("config block %r must be an object" % (name,))
        fields = set(cls.__dataclass_fields__)
        extra = set(block) - fields
        if extra:
            raise ConfigError("unknown keys in %r: %s" % (name,
                                                          sorted(extra)))
        kwargs[name] = cls(**block)
    cfg = RunConfig(output_dir=data.get("output_dir", "out"), **kwargs)
    return cfg.validate()


def loads(text):
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError("config is not valid JSON: %s" % (exc,)) from exc
    return from_dict(data)


def load(path):
    with open(path) as f:
        return loads(f.read())


def save(cfg, path):
    with open(path, "w") as f:
        f.write(cfg.dumps())
