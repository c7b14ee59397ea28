"""Receiver-side decoding.

A receiver keeps the direct observations that carry its own symbols. In a
retransmission slot it rebuilds the part of the received signal made of its
own earlier outputs, subtracts it, and solves for the other receiver's
overheard outputs, which are extra equations in its desired symbols. The
stacked system is then solved by least squares behind a rank gate.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from .channel import USERS
from .numerics import (
    CONDITION_LIMIT,
    DEFAULT_REL_TOL,
    RankReport,
    condition_number,
    numeric_rank,
    solve_least_squares,
)
from .schemes import FreshCombination, SchemePlan, Transcript, _Resend, rule_scale

PIVOT_FLOOR = 1e-12


@dataclass
class EquationSystem:
    """Linear equations ``matrix @ z = rhs`` seen by one receiver.

    Columns are the receiver's desired symbols first (``n_desired`` of them),
    then any other symbols decoded jointly (``columns`` gives the global
    coordinate of each). ``rhs_maps`` expresses every right-hand side as a
    linear map of the frame unknowns, noise included.
    """

    receiver: str
    matrix: np.ndarray
    rhs: np.ndarray
    provenance: list
    columns: list
    n_desired: int
    rhs_maps: Optional[np.ndarray] = None
    degenerate: bool = False
    min_pivot: float = np.inf
    cancellation_residual: float = 0.0

    def __post_init__(self):
        if self.matrix.shape[0] != self.rhs.shape[0]:
            raise ValueError("matrix rows and rhs length differ")
        if len(self.provenance) != self.rhs.shape[0]:
            raise ValueError("every row needs a provenance tag")


@dataclass
class DecodeReport:
    receiver: str
    decodable: bool
    rank: RankReport
    symbol_estimates: np.ndarray
    max_symbol_error: float
    cancellation_residual: float
    condition_number: float
    degenerate: bool = False

    @property
    def well_conditioned(self) -> bool:
        return self.condition_number <= CONDITION_LIMIT

    def to_dict(self) -> dict:
        est = self.symbol_estimates
        return {
            "receiver": self.receiver,
            "decodable": self.decodable,
            "degenerate": self.degenerate,
            "rank": self.rank.numeric_rank,
            "singular_values": self.rank.singular_values.tolist(),
            "tolerance_used": self.rank.tolerance_used,
            "condition_number": _finite_or_str(self.condition_number),
            "max_symbol_error": _finite_or_str(self.max_symbol_error),
            "cancellation_residual": self.cancellation_residual,
            "symbol_estimates": np.stack([est.real, est.imag], axis=-1).tolist(),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def _finite_or_str(v: float):
    return float(v) if np.isfinite(v) else str(v)


def eliminate_known_interference(transcript: Transcript, receiver: str) -> EquationSystem:
    """Build receiver ``receiver``'s equation system from a finished frame."""
    plan = transcript.plan
    S = plan.symbols_per_user
    off = 0 if receiver == "a" else S
    desired = np.zeros(2 * S, dtype=bool)
    desired[off:off + S] = True
    power, noise_var = transcript.noise.power, transcript.noise.variance
    ch = transcript.channel
    y_obs = [o[receiver] for o in transcript.outputs]

    rows, rhs, maps, tags = [], [], [], []
    retx = set(plan.retransmission_slots())
    degenerate, min_pivot, cancel_resid = False, np.inf, 0.0

    for t in range(plan.frame_length):
        ymap = transcript.y_maps[t][receiver]
        if t not in retx:
            for l in range(plan.config.m_r):
                sym = ymap[l, :2 * S]
                if np.any(sym[desired] != 0):
                    rows.append(sym)
                    rhs.append(y_obs[t][l])
                    maps.append(ymap[l])
                    tags.append(("direct", t, receiver, l))
            continue

        known_val = np.zeros(plan.config.m_r, dtype=complex)
        known_map = np.zeros_like(ymap)
        unknown, cols = {}, []
        for tx, rule in plan.slots[t].items():
            if isinstance(rule, FreshCombination):
                raise NotImplementedError("fresh data inside a retransmission slot")
            if not isinstance(rule, _Resend):
                continue
            scale = rule_scale(plan, t, tx, power, noise_var)
            h = ch.h(receiver, tx, t)
            for k, entry in enumerate(rule.entries):
                coef = scale * h[:, k]
                for ref in entry:
                    if ref.rx == receiver:
                        known_val += coef * y_obs[ref.slot][ref.antenna]
                        known_map += np.outer(coef, transcript.y_maps[ref.slot][receiver][ref.antenna])
                    else:
                        if ref not in unknown:
                            unknown[ref] = len(cols)
                            cols.append(np.zeros(plan.config.m_r, dtype=complex))
                        cols[unknown[ref]] += coef
        c = np.column_stack(cols)
        resid = y_obs[t] - known_val
        s = np.linalg.svd(c, compute_uv=False)
        min_pivot = min(min_pivot, float(s[-1]))
        if s[-1] < PIVOT_FLOOR:
            degenerate = True
            continue
        pinv = np.linalg.pinv(c)
        recovered = pinv @ resid
        rec_maps = pinv @ (ymap - known_map)
        truth = np.array([transcript.outputs[r.slot][r.rx][r.antenna] for r in unknown])
        cancel_resid = max(cancel_resid, float(np.linalg.norm(resid - c @ truth)))
        for ref, i in unknown.items():
            rows.append(transcript.y_maps[ref.slot][ref.rx][ref.antenna, :2 * S])
            rhs.append(recovered[i])
            maps.append(rec_maps[i])
            tags.append(("recovered", t, ref.rx, ref.antenna, ref.slot))

    full = np.array(rows) if rows else np.zeros((0, 2 * S), dtype=complex)
    used = np.any(full != 0, axis=0) if rows else np.zeros(2 * S, dtype=bool)
    nuisance = [j for j in range(2 * S) if used[j] and not desired[j]]
    columns = list(range(off, off + S)) + nuisance
    return EquationSystem(
        receiver=receiver,
        matrix=full[:, columns],
        rhs=np.array(rhs, dtype=complex),
        provenance=tags,
        columns=columns,
        n_desired=S,
        rhs_maps=np.array(maps) if maps else None,
        degenerate=degenerate,
        min_pivot=min_pivot,
        cancellation_residual=cancel_resid,
    )


def decode(system: EquationSystem, truth=None, rel_tol: float = DEFAULT_REL_TOL) -> DecodeReport:
    """Solve the system; decodable iff the numeric rank equals the column count."""
    n_cols = system.matrix.shape[1]
    if system.matrix.shape[0] == 0:
        raise ValueError("empty equation system")
    rank = numeric_rank(system.matrix, rel_tol)
    cond = condition_number(system.matrix)
    sol = solve_least_squares(system.matrix, system.rhs, rel_tol)
    est = sol.x[:system.n_desired]
    decodable = rank.numeric_rank == n_cols and not system.degenerate
    err = np.inf
    if truth is not None:
        err = float(np.max(np.abs(est - np.asarray(truth)))) if est.size else 0.0
    return DecodeReport(system.receiver, decodable, rank, est, err,
                        system.cancellation_residual, cond, system.degenerate)


def decode_frame(transcript: Transcript, rel_tol: float = DEFAULT_REL_TOL) -> dict:
    """Decode at both receivers against the planted symbols."""
    return {
        rx: decode(eliminate_known_interference(transcript, rx), transcript.symbols[rx], rel_tol)
        for rx in USERS
    }


def streams_per_frame(reports: dict, plan: SchemePlan):
    """``(S/T, S/T)`` as exact fractions when both receivers decode, else None."""
    if not all(r.decodable for r in reports.values()):
        return None
    d = Fraction(plan.symbols_per_user, plan.frame_length)
    return d, d


def achievable_rate(system: EquationSystem) -> float:
    """Mutual-information proxy (bits per frame) of the post-cancellation system.

    With rhs = F z + N n for unit-variance symbols z and noise n, this is
    ``log2 det(K + F F^H) - log2 det(K + F_u F_u^H)`` where ``K = N N^H`` and
    ``F_u`` holds the jointly decoded undesired columns.
    """
    if system.rhs_maps is None:
        raise ValueError("system carries no signal maps")
    n_sym = system.rhs_maps.shape[1]
    sym_cols = system.columns
    n_sym_total = 2 * system.n_desired
    noise = system.rhs_maps[:, n_sym_total:n_sym]
    if noise.shape[1] == 0:
        raise ValueError("rate needs a noisy transcript")
    k = noise @ noise.conj().T
    f_all = system.rhs_maps[:, sym_cols]
    f_nuis = system.rhs_maps[:, sym_cols[system.n_desired:]]
    _, ld_all = np.linalg.slogdet(k + f_all @ f_all.conj().T)
    _, ld_nuis = np.linalg.slogdet(k + f_nuis @ f_nuis.conj().T)
    return float((ld_all - ld_nuis) / np.log(2.0))
