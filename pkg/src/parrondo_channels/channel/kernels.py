"""Vectorized counterparts of the scalar step functions.

A kernel advances a whole batch of independent trajectories by one channel use.
`draws` has shape (k, 3) with columns (u_route, u_chan, u_bit), the same row
layout the scalar `step` consumes, so a batch of one reproduces the scalar path.
"""

import attrs
import numpy as np

from .outcome import (
    DELIVERED_CODE,
    ERASED_CODE,
    GATE_UNDEFINED,
    NO_ROUTE,
    ROUTE_A_CODE,
    ROUTE_B_CODE,
)
from .spec import ChannelKind, ChannelSpec
from ..structures import SubclassRegistry


@attrs.define
class BatchStep:
    codes: np.ndarray
    memory: np.ndarray
    routes: np.ndarray
    gates: np.ndarray
    inputs: np.ndarray | None = None


class ChannelKernel:
    """Base class for the per-kind batch step."""

    def __init__(self, spec: ChannelSpec) -> None:
        self.spec = spec

    def step(self, mem: np.ndarray, draws: np.ndarray) -> BatchStep:
        raise NotImplementedError

    def _routes(self, k: int, route_a: np.ndarray | None = None) -> np.ndarray:
        if route_a is None:
            return np.full(k, NO_ROUTE, dtype=np.int8)
        return np.where(route_a, ROUTE_A_CODE, ROUTE_B_CODE).astype(np.int8)

    def _source_erasures(self, mem: np.ndarray, u: np.ndarray) -> np.ndarray:
        # numpy's mod has the sign of the divisor, so negative memory maps to {0, 1, 2}
        return u < np.where(np.mod(mem, 3) == 0, self.spec.p_b, self.spec.p_c)


kernel_registry = SubclassRegistry(type=ChannelKernel)


def _moved(mem: np.ndarray, down: np.ndarray) -> np.ndarray:
    return mem + np.where(down, -1, 1)


def _no_gate(k: int) -> np.ndarray:
    return np.full(k, GATE_UNDEFINED, dtype=np.int8)


def _input_bits(draws: np.ndarray) -> np.ndarray:
    return (draws[:, 2] < 0.5).astype(np.int8)


@kernel_registry.register(ChannelKind.A.value)
class AKernel(ChannelKernel):
    def step(self, mem, draws):
        erased = draws[:, 1] < self.spec.p_a
        return BatchStep(
            codes=np.where(erased, ERASED_CODE, DELIVERED_CODE).astype(np.int8),
            memory=_moved(mem, erased),
            routes=self._routes(len(mem)),
            gates=_no_gate(len(mem)),
        )


@kernel_registry.register(ChannelKind.P.value)
class PKernel(ChannelKernel):
    def step(self, mem, draws):
        erased = self._source_erasures(mem, draws[:, 1])
        return BatchStep(
            codes=np.where(erased, ERASED_CODE, DELIVERED_CODE).astype(np.int8),
            memory=_moved(mem, erased),
            routes=self._routes(len(mem)),
            gates=_no_gate(len(mem)),
        )


@kernel_registry.register(ChannelKind.T.value)
class TKernel(ChannelKernel):
    def step(self, mem, draws):
        gate_open = mem > self.spec.m0
        return BatchStep(
            codes=np.where(gate_open, DELIVERED_CODE, ERASED_CODE).astype(np.int8),
            memory=mem.copy(),
            routes=self._routes(len(mem)),
            gates=gate_open.astype(np.int8),
        )


@kernel_registry.register(ChannelKind.B.value)
class BKernel(ChannelKernel):
    def step(self, mem, draws):
        erased = self._source_erasures(mem, draws[:, 1])
        after = _moved(mem, erased)
        gate_open = after > self.spec.m0
        return BatchStep(
            codes=np.where(~erased & gate_open, DELIVERED_CODE, ERASED_CODE).astype(np.int8),
            memory=after,
            routes=self._routes(len(mem)),
            gates=gate_open.astype(np.int8),
        )


@kernel_registry.register(ChannelKind.C_LAMBDA.value)
class CKernel(ChannelKernel):
    def step(self, mem, draws):
        route_a = draws[:, 0] < self.spec.lam
        erased = np.where(
            route_a,
            draws[:, 1] < self.spec.p_a,
            self._source_erasures(mem, draws[:, 1]),
        )
        after = _moved(mem, erased)
        gate_open = after > self.spec.m0
        delivered = ~erased & (route_a | gate_open)
        return BatchStep(
            codes=np.where(delivered, DELIVERED_CODE, ERASED_CODE).astype(np.int8),
            memory=after,
            routes=self._routes(len(mem), route_a),
            gates=np.where(route_a, GATE_UNDEFINED, gate_open).astype(np.int8),
        )


@kernel_registry.register(ChannelKind.CLASSICAL_A.value)
class ClassicalAKernel(ChannelKernel):
    def step(self, mem, draws):
        bits = _input_bits(draws)
        flipped = draws[:, 1] >= 1.0 - self.spec.p_a
        return BatchStep(
            codes=np.where(flipped, 1 - bits, bits).astype(np.int8),
            memory=_moved(mem, flipped),
            routes=self._routes(len(mem)),
            gates=_no_gate(len(mem)),
            inputs=bits,
        )


@kernel_registry.register(ChannelKind.CLASSICAL_B.value)
class ClassicalBKernel(ChannelKernel):
    def step(self, mem, draws):
        bits = _input_bits(draws)
        erased = self._source_erasures(mem, draws[:, 1])
        after = _moved(mem, erased)
        gate_open = after > self.spec.m0
        return BatchStep(
            codes=np.where(~erased & gate_open, bits, ERASED_CODE).astype(np.int8),
            memory=after,
            routes=self._routes(len(mem)),
            gates=gate_open.astype(np.int8),
            inputs=bits,
        )


@kernel_registry.register(ChannelKind.CLASSICAL_C.value)
class ClassicalCKernel(ChannelKernel):
    def step(self, mem, draws):
        bits = _input_bits(draws)
        route_a = draws[:, 0] < self.spec.lam
        flipped = draws[:, 1] >= 1.0 - self.spec.p_a
        erased = self._source_erasures(mem, draws[:, 1])
        down = np.where(route_a, flipped, erased)
        after = _moved(mem, down)
        gate_open = after > self.spec.m0
        codes = np.where(
            route_a,
            np.where(flipped, 1 - bits, bits),
            np.where(~erased & gate_open, bits, ERASED_CODE),
        )
        return BatchStep(
            codes=codes.astype(np.int8),
            memory=after,
            routes=self._routes(len(mem), route_a),
            gates=np.where(route_a, GATE_UNDEFINED, gate_open).astype(np.int8),
            inputs=bits,
        )


def kernel_for(spec: ChannelSpec) -> ChannelKernel:
    return kernel_registry[spec.kind.value](spec)
