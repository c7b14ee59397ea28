"""Transmission schemes as declarative per-slot plans, and their execution.

A :class:`SchemePlan` lists, for every slot of one frame, what each node
(``"a"``, ``"b"``, relay ``"c"``) sends. :func:`run_scheme` realises a plan
on a channel draw. Alongside the numeric signals it keeps the exact linear
map from the frame's unknowns (all symbols, then every receiver noise
sample when noise is on) to every transmitted and received vector. The
decoder and the rate proxy both read those maps.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence, Union

import numpy as np

from .channel import (
    NODES,
    NOISELESS,
    USERS,
    AntennaConfig,
    ChannelSequence,
    Condition,
    FeedbackKind,
    FeedbackMode,
    NoiseSpec,
    SlotOutput,
    channel_output,
    classify_condition,
)
from .numerics import DEFAULT_REL_TOL, RandomSource, complex_normal, numeric_rank

MAX_PRECODER_DRAWS = 100


class CausalityError(RuntimeError):
    """A node asked for information its feedback mode does not give it."""


# --------------------------------------------------------------------------
# Rules
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class OutputRef:
    """Element ``antenna`` of receiver ``rx``'s output in slot ``slot``."""

    rx: str
    antenna: int
    slot: int

    def __str__(self):
        return f"Y_{self.rx}[{self.antenna}]@{self.slot}"


@dataclass(frozen=True)
class Silent:
    scale: float = 1.0


@dataclass(frozen=True)
class FreshCombination:
    """Random linear combinations of the listed symbol blocks.

    ``blocks`` holds ``(user, start, stop)`` ranges of that user's symbol
    vector; ``active`` antennas carry combinations, the rest send zero.
    """

    blocks: tuple
    active: int
    scale: float = 1.0

    @property
    def n_symbols(self) -> int:
        return sum(stop - start for _, start, stop in self.blocks)


@dataclass(frozen=True)
class _Resend:
    """Antenna ``k`` sends the sum of the outputs listed in ``entries[k]``;
    antennas past ``len(entries)`` send zero."""

    entries: tuple
    from_feedback: bool = False
    scale: float = 1.0

    def refs(self):
        for entry in self.entries:
            yield from entry


@dataclass(frozen=True)
class ResendOverheard(_Resend):
    """Resend the unintended receiver's past outputs, rebuilt from delayed CSI."""


@dataclass(frozen=True)
class ResendOwnFeedback(_Resend):
    """Resend outputs fed back from the node's own receiver."""

    from_feedback: bool = True


@dataclass(frozen=True)
class ResendSum(_Resend):
    """Relay only: componentwise sums of outputs from both receivers."""


TransmitRule = Union[Silent, FreshCombination, ResendOverheard, ResendOwnFeedback, ResendSum]


def rule_kind(rule) -> str:
    return type(rule).__name__


# --------------------------------------------------------------------------
# Plans
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class SchemePlan:
    config: AntennaConfig
    mode: FeedbackMode
    condition: Condition
    frame_length: int
    symbols_per_user: int
    slots: tuple  # per slot: dict node -> rule
    name: str = ""

    def __post_init__(self):
        if len(self.slots) != self.frame_length:
            raise ValueError("one rule set per slot is required")
        for t, rules in enumerate(self.slots):
            for node in NODES:
                _check_rule(self, t, node, rules[node])

    @property
    def per_user_dof(self) -> Fraction:
        return Fraction(self.symbols_per_user, self.frame_length)

    def rule(self, t: int, node: str):
        return self.slots[t][node]

    def retransmission_slots(self) -> list:
        return [
            t for t, rules in enumerate(self.slots)
            if any(isinstance(r, _Resend) for r in rules.values())
        ]

    def active_nodes(self, t: int) -> int:
        return sum(not isinstance(r, Silent) for r in self.slots[t].values())

    def describe(self) -> list:
        out = []
        for rules in self.slots:
            row = {}
            for node in NODES:
                r = rules[node]
                if isinstance(r, FreshCombination):
                    row[node] = {"kind": rule_kind(r), "blocks": [list(b) for b in r.blocks],
                                 "active": r.active}
                elif isinstance(r, _Resend):
                    row[node] = {"kind": rule_kind(r),
                                 "entries": [[str(x) for x in e] for e in r.entries]}
                else:
                    row[node] = {"kind": "Silent"}
            out.append(row)
        return out


def _check_rule(plan: SchemePlan, t: int, node: str, rule) -> None:
    n_ant = plan.config.antennas(node)
    mode = plan.mode
    if isinstance(rule, FreshCombination):
        if not 1 <= rule.active <= n_ant:
            raise ValueError(f"slot {t} node {node}: {rule.active} active antennas of {n_ant}")
        for user, start, stop in rule.blocks:
            if node != "c" and user != node:
                raise ValueError(f"slot {t}: transmitter {node} cannot send user {user}'s symbols")
            if not 0 <= start < stop <= plan.symbols_per_user:
                raise ValueError(f"slot {t}: bad symbol block {(user, start, stop)}")
    elif isinstance(rule, _Resend):
        if len(rule.entries) > n_ant:
            raise ValueError(f"slot {t} node {node}: {len(rule.entries)} entries for {n_ant} antennas")
        if isinstance(rule, ResendSum) and node != "c":
            raise ValueError("ResendSum is reserved for the relay")
        if node == "c" and not mode.relay_has_feedback:
            raise ValueError("relay without feedback cannot resend outputs")
        for ref in rule.refs():
            if ref.slot >= t:
                raise ValueError(f"slot {t}: reference {ref} is not strictly causal")
            if rule.from_feedback:
                if not mode.kind.has_output:
                    raise ValueError(f"{mode} gives no output feedback")
                if node != "c" and ref.rx != node:
                    raise ValueError(f"transmitter {node} only sees receiver {node}'s output")
            elif not mode.kind.has_csi:
                raise ValueError(f"{mode} gives no delayed CSI")


def _fresh(blocks, active):
    return FreshCombination(tuple(blocks), active)


def _data_slot(user: str, blocks, tx_active: int, relay_active: int):
    """One slot where transmitter ``user`` and (optionally) the relay send fresh combinations."""
    other = "b" if user == "a" else "a"
    rules = {user: _fresh(blocks, tx_active), other: Silent()}
    rules["c"] = _fresh(blocks, relay_active) if relay_active > 0 else Silent()
    return rules


def _retransmission_slot(style_csi: bool, to_a_content, to_b_content, relay_entries,
                         relay_from_feedback: bool):
    """Final-phase slot.

    ``to_a_content`` are Rx b outputs carrying user a's symbols, ``to_b_content``
    are Rx a outputs carrying user b's. With delayed CSI each transmitter
    rebuilds the content useful to its own receiver; with output feedback it
    forwards its own receiver's outputs, which carry the other user's data.
    """
    if style_csi:
        rules = {"a": ResendOverheard(tuple(to_a_content)),
                 "b": ResendOverheard(tuple(to_b_content))}
    else:
        rules = {"a": ResendOwnFeedback(tuple(to_b_content)),
                 "b": ResendOwnFeedback(tuple(to_a_content))}
    if relay_entries:
        rules["c"] = ResendSum(tuple(relay_entries), from_feedback=relay_from_feedback)
    else:
        rules["c"] = Silent()
    return rules


def _mac_plan(cfg: AntennaConfig):
    streams = min(cfg.m_r, 2 * cfg.m_t + cfg.m_c)
    if streams % 2 == 0:
        half = streams // 2
        splits = [(half, half)]
    else:
        hi, lo = (streams + 1) // 2, (streams - 1) // 2
        splits = [(hi, lo), (lo, hi)]
    per_user = sum(k for k, _ in splits)
    slots, off_a, off_b = [], 0, 0
    for k_a, k_b in splits:
        blk_a, blk_b = ("a", off_a, off_a + k_a), ("b", off_b, off_b + k_b)
        slots.append({
            "a": _fresh([blk_a], cfg.m_t),
            "b": _fresh([blk_b], cfg.m_t),
            "c": _fresh([blk_a, blk_b], cfg.m_c),
        })
        off_a += k_a
        off_b += k_b
    return "mac", len(splits), per_user, slots


def _tdm_plan(cfg: AntennaConfig):
    s = cfg.m_r
    slots = [_data_slot(u, [(u, 0, s)], cfg.m_t, cfg.m_c) for u in USERS]
    return "tdm", 2, s, slots


def _plan_two_phase(cfg, style_csi, n_data, span, tx_active, relay_active, resend_len, relay_sum):
    """Shared layout of the Condition II/III schemes and the relay-without-feedback
    Condition II scheme.

    ``n_data`` slots per user, each with ``span`` fresh symbols; final phase has
    ``span - m_r`` slots, slot ``k`` resending antenna ``k`` of the earlier outputs.
    """
    mr = cfg.m_r
    slots = []
    for u in USERS:
        for t in range(n_data):
            slots.append(_data_slot(u, [(u, t * span, (t + 1) * span)], tx_active, relay_active))
    for k in range(span - mr):
        to_a = [(OutputRef("b", k, s),) for s in range(resend_len)]
        to_b = [(OutputRef("a", k, n_data + s),) for s in range(resend_len)]
        relay = []
        if relay_sum:
            relay = [(OutputRef("b", k, s), OutputRef("a", k, n_data + s))
                     for s in range(resend_len, n_data)]
        slots.append(_retransmission_slot(style_csi, to_a, to_b, relay, not style_csi))
    return slots


def _plan_three_slot(cfg, style_csi, per_user, tx_active, relay_active, resend_len, relay_sum_to):
    """Shared layout of the Condition IV/V schemes and the relay-without-feedback
    Condition IV scheme: two data slots, one retransmission slot."""
    slots = [_data_slot(u, [(u, 0, per_user)], tx_active, relay_active) for u in USERS]
    to_a = [(OutputRef("b", l, 0),) for l in range(resend_len)]
    to_b = [(OutputRef("a", l, 1),) for l in range(resend_len)]
    relay = [(OutputRef("b", l, 0), OutputRef("a", l, 1)) for l in range(resend_len, relay_sum_to)]
    slots.append(_retransmission_slot(style_csi, to_a, to_b, relay, not style_csi))
    return slots


def build_scheme(config: AntennaConfig, mode: FeedbackMode) -> SchemePlan:
    """Pick and lay out the scheme for an antenna configuration and feedback mode."""
    cond = classify_condition(config)
    mt, mc, mr = config.m_t, config.m_c, config.m_r
    style_csi = mode.kind.has_csi  # Shannon feedback reuses the delayed-CSIT plan

    if cond is Condition.I:
        name, T, S, slots = _mac_plan(config)
    elif mode.kind is FeedbackKind.NO_FEEDBACK:
        name, T, S, slots = _tdm_plan(config)
    elif cond is Condition.II and mode.relay_has_feedback:
        name, T, S = "ria-II", mt + mc + mr, (mt + mc) * mr
        slots = _plan_two_phase(config, style_csi, mr, mt + mc, mt, mc, mt, True)
    elif cond is Condition.II:
        if 2 * mt >= mr:
            name, T, S = "ria-II-no-cr", 3 * mt + mc - mr, (mt + mc) * mt
            slots = _plan_two_phase(config, style_csi, mt, mt + mc, mt, mc, mt, False)
        else:
            name, T, S, slots = _tdm_plan(config)
    elif cond is Condition.III:
        name, T, S = "ria-III", mt + mc + mr, (mt + mc) * mr
        slots = _plan_two_phase(config, style_csi, mr, mt + mc, mt, mc, mr, False)
    elif cond is Condition.IV and mode.relay_has_feedback:
        name, T, S = "ria-IV", 3, 2 * mr
        slots = _plan_three_slot(config, style_csi, 2 * mr, mt, min(mc, 2 * mr - mt), mt, mr)
    elif cond is Condition.IV:
        if 2 * mt >= mr:
            name, T, S = "ria-IV-no-cr", 3, mt + mr
            slots = _plan_three_slot(config, style_csi, mt + mr, mt, mr, mt, mt)
        else:
            name, T, S, slots = _tdm_plan(config)
    else:
        name, T, S = "ria-V", 3, 2 * mr
        slots = _plan_three_slot(config, style_csi, 2 * mr, mt, max(2 * mr - mt, 0), mr, mr)

    plan = SchemePlan(config, mode, cond, T, S, tuple(slots), name)
    return _with_unit_scales(plan)


# --------------------------------------------------------------------------
# Power normalisation
# --------------------------------------------------------------------------


def rule_scale(plan: SchemePlan, t: int, node: str, power: float = 1.0,
               noise_var: float = 0.0) -> float:
    """Scale giving the rule's transmit vector expected squared norm ``power``.

    Expectations run over symbols, precoders, fading and noise, so the
    scale is a plan constant that needs no channel knowledge.
    """
    rule = plan.rule(t, node)
    if isinstance(rule, Silent):
        return 0.0
    if isinstance(rule, FreshCombination):
        return float(np.sqrt(power / (rule.active * rule.n_symbols)))
    raw = 0.0
    for ref in rule.refs():
        raw += plan.active_nodes(ref.slot) * power
        if rule.from_feedback:
            raw += noise_var
    return float(np.sqrt(power / raw))


def _with_unit_scales(plan: SchemePlan) -> SchemePlan:
    slots = []
    for t, rules in enumerate(plan.slots):
        new = {}
        for node, r in rules.items():
            if isinstance(r, Silent):
                new[node] = r
            else:
                new[node] = type(r)(**{**r.__dict__, "scale": rule_scale(plan, t, node)})
        slots.append(new)
    return SchemePlan(plan.config, plan.mode, plan.condition, plan.frame_length,
                      plan.symbols_per_user, tuple(slots), plan.name)


# --------------------------------------------------------------------------
# Precoders
# --------------------------------------------------------------------------


def precoder_admissible(precoders: Sequence, rel_tol: float = DEFAULT_REL_TOL) -> bool:
    """True iff the stacked per-slot precoding matrix has full rank.

    ``precoders`` are the fresh-combination matrices of one slot, each laid
    out over the slot's common symbol columns.
    """
    stacked = np.vstack([np.atleast_2d(np.asarray(p, dtype=complex)) for p in precoders])
    return numeric_rank(stacked, rel_tol).numeric_rank == min(stacked.shape)


def _slot_columns(rules: dict, S: int) -> list:
    """Global symbol coordinates touched by fresh rules in one slot, in order."""
    cols = []
    for r in rules.values():
        if isinstance(r, FreshCombination):
            for user, start, stop in r.blocks:
                off = 0 if user == "a" else S
                cols.extend(c for c in range(off + start, off + stop) if c not in cols)
    return sorted(cols)


def _block_columns(rule: FreshCombination, S: int) -> list:
    cols = []
    for user, start, stop in rule.blocks:
        off = 0 if user == "a" else S
        cols.extend(range(off + start, off + stop))
    return cols


def draw_precoders(rules: dict, S: int, rng: RandomSource) -> dict:
    """Draw CN(0,1) precoders for every fresh rule of a slot until jointly admissible.

    Returns node -> (active x n_symbols) matrix over that rule's own columns.
    """
    fresh = {n: r for n, r in rules.items() if isinstance(r, FreshCombination)}
    if not fresh:
        return {}
    slot_cols = _slot_columns(rules, S)
    pos = {c: i for i, c in enumerate(slot_cols)}
    for _ in range(MAX_PRECODER_DRAWS):
        drawn = {n: complex_normal(rng, (r.active, r.n_symbols)) for n, r in fresh.items()}
        laid_out = []
        for n, r in fresh.items():
            full = np.zeros((r.active, len(slot_cols)), dtype=complex)
            full[:, [pos[c] for c in _block_columns(r, S)]] = drawn[n]
            laid_out.append(full)
        if precoder_admissible(laid_out):
            return drawn
    raise RuntimeError("could not draw admissible precoders")


# --------------------------------------------------------------------------
# Execution
# --------------------------------------------------------------------------


@dataclass
class History:
    """What has happened in slots ``0..len(x)-1`` of a frame."""

    plan: SchemePlan
    channel: ChannelSequence
    symbols: dict
    n_coords: int
    precoders: list = field(default_factory=list)
    x: list = field(default_factory=list)
    x_maps: list = field(default_factory=list)
    y: list = field(default_factory=list)
    y_maps: list = field(default_factory=list)

    @property
    def slots_done(self) -> int:
        return len(self.x)

    def truncated(self, t: int) -> "History":
        """The history as it stood at the start of slot ``t``."""
        return History(self.plan, self.channel.truncated(max(t, 1)), self.symbols, self.n_coords,
                       self.precoders[:t], self.x[:t], self.x_maps[:t], self.y[:t], self.y_maps[:t])


class NodeView:
    """Everything node ``node`` may use when transmitting in slot ``t``."""

    def __init__(self, history: History, node: str, t: int):
        self._h = history
        self.node = node
        self.t = t
        self.mode = history.plan.mode
        self.S = history.plan.symbols_per_user

    def _past(self, s: int):
        if not 0 <= s < self.t or s >= self._h.slots_done:
            raise CausalityError(f"node {self.node} at slot {self.t} cannot see slot {s}")

    def _relay_blocked(self) -> bool:
        return self.node == "c" and not self.mode.relay_has_feedback

    def known_symbols(self) -> np.ndarray:
        """Own message symbols laid over the symbol coordinates; NaN marks unknowns."""
        w = np.full(2 * self.S, np.nan, dtype=complex)
        if self.node in ("a", "c"):
            w[:self.S] = self._h.symbols["a"]
        if self.node in ("b", "c"):
            w[self.S:] = self._h.symbols["b"]
        return w

    def channel(self, rx: str, tx: str, s: int) -> np.ndarray:
        if not self.mode.kind.has_csi or self._relay_blocked():
            raise CausalityError(f"node {self.node} has no delayed CSI under {self.mode}")
        self._past(s)
        return self._h.channel.h(rx, tx, s)

    def codebook(self, s: int, tx: str) -> np.ndarray:
        """Symbol part of ``tx``'s transmit map in slot ``s``; precoders are shared in advance."""
        self._past(s)
        return self._h.x_maps[s][tx][:, :2 * self.S]

    def output(self, rx: str, s: int):
        if not self.mode.kind.has_output or self._relay_blocked():
            raise CausalityError(f"node {self.node} has no output feedback under {self.mode}")
        if self.node != "c" and rx != self.node:
            raise CausalityError(f"transmitter {self.node} never sees receiver {rx}")
        self._past(s)
        return self._h.y[s][rx], self._h.y_maps[s][rx]


def _rebuild_output_row(view: NodeView, ref: OutputRef) -> np.ndarray:
    """Noise-free symbol map of one past output element, from delayed CSI."""
    row = np.zeros(2 * view.S, dtype=complex)
    for tx in NODES:
        row += view.channel(ref.rx, tx, ref.slot)[ref.antenna] @ view.codebook(ref.slot, tx)
    return row


def node_transmission(history: History, t: int, node: str, power: float = 1.0,
                      noise_var: float = 0.0, precoder=None):
    """Transmit vector and its linear map for ``node`` in slot ``t``.

    Only information exposed by :class:`NodeView` is used, so feeding a
    history truncated at ``t`` gives the same result.
    """
    plan = history.plan
    rule = plan.rule(t, node)
    n_ant = plan.config.antennas(node)
    S = plan.symbols_per_user
    xmap = np.zeros((n_ant, history.n_coords), dtype=complex)
    if isinstance(rule, Silent):
        return np.zeros(n_ant, dtype=complex), xmap
    view = NodeView(history, node, t)
    scale = rule_scale(plan, t, node, power, noise_var)
    known = view.known_symbols()
    if isinstance(rule, FreshCombination):
        cols = _block_columns(rule, S)
        xmap[:rule.active, cols] = scale * precoder
        x = np.zeros(n_ant, dtype=complex)
        x[:rule.active] = scale * (precoder @ known[cols])
        return x, xmap
    x = np.zeros(n_ant, dtype=complex)
    for k, entry in enumerate(rule.entries):
        for ref in entry:
            if rule.from_feedback:
                y, ymap = view.output(ref.rx, ref.slot)
                x[k] += scale * y[ref.antenna]
                xmap[k] += scale * ymap[ref.antenna]
            else:
                row = _rebuild_output_row(view, ref)
                support = np.flatnonzero(row)
                if np.isnan(known[support]).any():
                    raise CausalityError(f"node {node} cannot rebuild {ref} without the other message")
                x[k] += scale * (row[support] @ known[support])
                xmap[k, :2 * S] += scale * row
    return x, xmap


@dataclass
class Transcript:
    plan: SchemePlan
    channel: ChannelSequence
    noise: NoiseSpec
    symbols: dict
    precoders: list
    x: list
    x_maps: list
    outputs: list  # SlotOutput per slot
    y_maps: list
    noise_samples: Optional[np.ndarray]

    @property
    def n_coords(self) -> int:
        return self.y_maps[0]["a"].shape[1]

    def noise_coord(self, rx: str, t: int, antenna: int) -> int:
        m_r = self.plan.config.m_r
        return 2 * self.plan.symbols_per_user + (2 * t + USERS.index(rx)) * m_r + antenna

    def unknowns(self) -> np.ndarray:
        w = np.concatenate([self.symbols["a"], self.symbols["b"]])
        if self.noise_samples is not None:
            w = np.concatenate([w, self.noise_samples])
        return w

    def history(self) -> History:
        return History(self.plan, self.channel, self.symbols, self.n_coords, self.precoders,
                       self.x, self.x_maps, [{u: o[u] for u in USERS} for o in self.outputs],
                       self.y_maps)

    def to_json(self) -> str:
        def cx(v):
            v = np.asarray(v)
            return np.stack([v.real, v.imag], axis=-1).tolist()

        doc = {
            "plan": {
                "name": self.plan.name,
                "config": [self.plan.config.m_t, self.plan.config.m_c, self.plan.config.m_r],
                "mode": str(self.plan.mode),
                "condition": self.plan.condition.value,
                "frame_length": self.plan.frame_length,
                "symbols_per_user": self.plan.symbols_per_user,
                "slots": self.plan.describe(),
            },
            "snr_db": self.noise.snr_db,
            "channel": json.loads(self.channel.to_json()),
            "symbols": {u: cx(self.symbols[u]) for u in USERS},
            "precoders": [{n: cx(p) for n, p in slot.items()} for slot in self.precoders],
            "x": [{n: cx(v) for n, v in slot.items()} for slot in self.x],
            "y": [{u: cx(o[u]) for u in USERS} for o in self.outputs],
        }
        return json.dumps(doc)


def run_scheme(plan: SchemePlan, channel: ChannelSequence, symbols: dict, rng: RandomSource,
               noise: NoiseSpec = NOISELESS) -> Transcript:
    """Run one frame of ``plan`` over ``channel``.

    ``symbols`` maps ``"a"``/``"b"`` to length-``symbols_per_user`` vectors.
    Precoders and (when enabled) receiver noise are drawn from ``rng``.
    """
    T, S = plan.frame_length, plan.symbols_per_user
    if channel.slots < T:
        raise ValueError(f"channel has {channel.slots} slots, plan needs {T}")
    if channel.config != plan.config:
        raise ValueError("channel and plan antenna configurations differ")
    syms = {}
    for u in USERS:
        v = np.asarray(symbols[u], dtype=complex).reshape(-1)
        if v.shape[0] != S:
            raise ValueError(f"user {u} needs {S} symbols, got {v.shape[0]}")
        syms[u] = v
    m_r = plan.config.m_r
    n_coords = 2 * S + (2 * T * m_r if noise.enabled else 0)
    power, noise_var = noise.power, noise.variance
    hist = History(plan, channel, syms, n_coords)
    outputs, noise_samples = [], []

    for t in range(T):
        rules = plan.slots[t]
        drawn = draw_precoders(rules, S, rng)
        xs, xmaps = {}, {}
        for node in NODES:
            xs[node], xmaps[node] = node_transmission(hist, t, node, power, noise_var, drawn.get(node))
        out = channel_output(channel, t, xs["a"], xs["b"], xs["c"])
        ys, ymaps = {}, {}
        for rx in USERS:
            ymap = sum(channel.h(rx, tx, t) @ xmaps[tx] for tx in NODES)
            y = out[rx]
            if noise.enabled:
                n = complex_normal(rng, m_r)
                noise_samples.append(n)
                base = 2 * S + (2 * t + USERS.index(rx)) * m_r
                ymap[np.arange(m_r), base + np.arange(m_r)] += 1.0
                y = y + n
            ys[rx], ymaps[rx] = y, ymap
        outputs.append(SlotOutput(ys["a"], ys["b"], noise.enabled, noise.snr_db))
        hist.precoders.append(drawn)
        hist.x.append(xs)
        hist.x_maps.append(xmaps)
        hist.y.append(ys)
        hist.y_maps.append(ymaps)

    return Transcript(plan, channel, noise, syms, hist.precoders, hist.x, hist.x_maps, outputs,
                      hist.y_maps, np.concatenate(noise_samples) if noise_samples else None)

