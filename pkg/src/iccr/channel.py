"""Two-user interference channel with a cognitive relay.

Nodes are labelled ``"a"`` and ``"b"`` (transmitter/receiver pairs) and
``"c"`` (the relay). Slot indices are 0-based throughout the package.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .numerics import RandomSource, complex_normal

USERS = ("a", "b")
NODES = ("a", "b", "c")


@dataclass(frozen=True)
class AntennaConfig:
    m_t: int
    m_c: int
    m_r: int

    def __post_init__(self):
        for name in ("m_t", "m_c", "m_r"):
            v = getattr(self, name)
            if not isinstance(v, (int, np.integer)) or v < 1:
                raise ValueError(f"{name} must be a positive integer, got {v!r}")

    def antennas(self, node: str) -> int:
        return self.m_c if node == "c" else self.m_t

    def __str__(self):
        return f"({self.m_t},{self.m_c},{self.m_r})"


class FeedbackKind(enum.Enum):
    DELAYED_CSIT = "csit"
    DELAYED_OUTPUT = "output"
    DELAYED_SHANNON = "shannon"
    NO_FEEDBACK = "none"

    @property
    def has_csi(self) -> bool:
        return self in (FeedbackKind.DELAYED_CSIT, FeedbackKind.DELAYED_SHANNON)

    @property
    def has_output(self) -> bool:
        return self in (FeedbackKind.DELAYED_OUTPUT, FeedbackKind.DELAYED_SHANNON)


@dataclass(frozen=True)
class FeedbackMode:
    kind: FeedbackKind
    relay_has_feedback: bool = True

    def __post_init__(self):
        if self.kind is FeedbackKind.NO_FEEDBACK and self.relay_has_feedback:
            object.__setattr__(self, "relay_has_feedback", False)

    @classmethod
    def parse(cls, name: str, relay_has_feedback: bool = True) -> "FeedbackMode":
        return cls(FeedbackKind(name), relay_has_feedback)

    def __str__(self):
        suffix = "" if self.relay_has_feedback or self.kind is FeedbackKind.NO_FEEDBACK else "-no-cr"
        return self.kind.value + suffix


class Condition(enum.Enum):
    I = "I"
    II = "II"
    III = "III"
    IV = "IV"
    V = "V"


def classify_condition(config: AntennaConfig) -> Condition:
    """Place an antenna configuration in one of the five antenna regimes."""
    mt, mc, mr = config.m_t, config.m_c, config.m_r
    if mt + mc <= mr:
        return Condition.I
    if mt + mc <= 2 * mr:
        return Condition.II if mr > mt else Condition.III
    return Condition.IV if mr > mt else Condition.V


# link name -> (receiver, transmitter)
LINKS = ("aa", "ab", "ac", "ba", "bb", "bc")


class ChannelSequence:
    """Per-slot channel matrices ``H[ji][t]`` from transmitter ``i`` to receiver ``j``.

    Parameters
    ----------
    config : AntennaConfig
    matrices : dict
        Maps each link name in :data:`LINKS` to a complex array of shape
        ``(slots, m_r, antennas(i))``.
    """

    def __init__(self, config: AntennaConfig, matrices: dict):
        self.config = config
        self._h = {}
        slots = None
        for link in LINKS:
            arr = np.array(matrices[link], dtype=complex)
            arr.setflags(write=False)
            want = (config.m_r, config.antennas(link[1]))
            if arr.ndim != 3 or arr.shape[1:] != want:
                raise ValueError(f"link {link}: expected (T,{want[0]},{want[1]}), got {arr.shape}")
            if slots is None:
                slots = arr.shape[0]
            elif arr.shape[0] != slots:
                raise ValueError("all links must cover the same number of slots")
            self._h[link] = arr
        self.slots = int(slots)

    def h(self, rx: str, tx: str, t: int) -> np.ndarray:
        return self._h[rx + tx][t]

    def link(self, name: str) -> np.ndarray:
        return self._h[name]

    def receiver_matrix(self, rx: str, t: int) -> np.ndarray:
        """``[H_ra | H_rb | H_rc]`` at slot ``t``."""
        return np.hstack([self._h[rx + tx][t] for tx in NODES])

    def truncated(self, slots: int) -> "ChannelSequence":
        return ChannelSequence(self.config, {k: v[:slots] for k, v in self._h.items()})

    def __eq__(self, other):
        return (
            isinstance(other, ChannelSequence)
            and self.config == other.config
            and all(np.array_equal(self._h[k], other._h[k]) for k in LINKS)
        )

    def to_json(self) -> str:
        doc = {
            "config": {"m_t": self.config.m_t, "m_c": self.config.m_c, "m_r": self.config.m_r},
            "slots": self.slots,
            "matrices": {
                k: np.stack([v.real, v.imag], axis=-1).tolist() for k, v in self._h.items()
            },
        }
        return json.dumps(doc)

    @classmethod
    def from_json(cls, text: str) -> "ChannelSequence":
        doc = json.loads(text)
        config = AntennaConfig(**doc["config"])
        mats = {}
        for k, v in doc["matrices"].items():
            arr = np.asarray(v, dtype=float)
            mats[k] = arr[..., 0] + 1j * arr[..., 1]
        seq = cls(config, mats)
        if seq.slots != doc["slots"]:
            raise ValueError("slot count does not match matrix data")
        return seq


def sample_channel(config: AntennaConfig, slots: int, rng: RandomSource) -> ChannelSequence:
    """Draw ``slots`` independent slots of i.i.d. CN(0,1) channel matrices."""
    if slots < 1:
        raise ValueError("slots must be >= 1")
    mr, mt, mc = config.m_r, config.m_t, config.m_c
    widths = [mc if link[1] == "c" else mt for link in LINKS]
    flat = complex_normal(rng, (slots, mr, sum(widths)))
    mats, start = {}, 0
    for link, w in zip(LINKS, widths):
        mats[link] = flat[:, :, start:start + w]
        start += w
    return ChannelSequence(config, mats)


@dataclass(frozen=True)
class NoiseSpec:
    """Noiseless when ``snr_db`` is None; otherwise transmit power ``P = 10**(snr_db/10)``
    against unit-variance receiver noise."""

    snr_db: Optional[float] = None

    @property
    def enabled(self) -> bool:
        return self.snr_db is not None

    @property
    def power(self) -> float:
        return 1.0 if self.snr_db is None else 10.0 ** (self.snr_db / 10.0)

    @property
    def variance(self) -> float:
        return 1.0 if self.enabled else 0.0


NOISELESS = NoiseSpec()


@dataclass(frozen=True)
class SlotOutput:
    y_a: np.ndarray
    y_b: np.ndarray
    noise_enabled: bool
    snr_db: Optional[float]

    def __getitem__(self, rx: str) -> np.ndarray:
        return self.y_a if rx == "a" else self.y_b


def channel_output(
    seq: ChannelSequence,
    t: int,
    x_a,
    x_b,
    x_c,
    noise: NoiseSpec = NOISELESS,
    rng: Optional[RandomSource] = None,
) -> SlotOutput:
    """Received vectors at both receivers for one slot."""
    cfg = seq.config
    xs = {}
    for node, x in zip(NODES, (x_a, x_b, x_c)):
        v = np.asarray(x, dtype=complex).reshape(-1)
        if v.shape[0] != cfg.antennas(node):
            raise ValueError(f"x_{node} has length {v.shape[0]}, expected {cfg.antennas(node)}")
        xs[node] = v
    if not 0 <= t < seq.slots:
        raise IndexError(f"slot {t} outside channel of {seq.slots} slots")
    ys = {}
    for rx in USERS:
        y = sum(seq.h(rx, tx, t) @ xs[tx] for tx in NODES)
        if noise.enabled:
            if rng is None:
                raise ValueError("noisy output needs a random source")
            y = y + complex_normal(rng, cfg.m_r)
        ys[rx] = y
    return SlotOutput(ys["a"], ys["b"], noise.enabled, noise.snr_db)
