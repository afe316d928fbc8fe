"""Traffic accounting for a distributed deployment of the message passing.

Receiver i physically hosts its filter variable U_i and its leakage function
f_i; transmitter j hosts V_j and g_j. A directed message whose endpoints live
on the same device is free bookkeeping; everything else crosses the air.
Under this mapping the over-the-air families are exactly

    f_i -> V_j,  V_j -> f_i,  g_j -> U_i,  U_i -> g_j   (i != j)

and the local families are the own-variable ones. Each over-the-air message is
costed at dim^2 * 8 bytes, dim being the side length of the quadratic form it
carries (128 bytes for a 4-antenna link). Counts are per schedule iteration
and scale linearly with the iteration count; nothing here runs the numerics.
"""

from __future__ import annotations

from dataclasses import dataclass

from .graph import FactorGraph, Node
from .schedules import Schedule, expand_family

BYTES_PER_ENTRY = 8


@dataclass(frozen=True)
class DeviceMapping:
    """Node-to-device placement; labels are 1-based for readability."""

    K: int
    node_to_device: dict[Node, str]

    def device_of(self, node: Node) -> str:
        try:
            return self.node_to_device[node]
        except KeyError:
            raise KeyError(f"node {node} is not placed on any device") from None


def default_mapping(K: int) -> DeviceMapping:
    """U_i, f_i on receiver i; V_j, g_j on transmitter j."""
    placement: dict[Node, str] = {}
    for i in range(K):
        placement[("U", i)] = f"receiver_{i + 1}"
        placement[("f", i)] = f"receiver_{i + 1}"
        placement[("V", i)] = f"transmitter_{i + 1}"
        placement[("g", i)] = f"transmitter_{i + 1}"
    return DeviceMapping(K=K, node_to_device=placement)


def device_role(device: str) -> str:
    return device.rsplit("_", 1)[0]


def classify(mapping: DeviceMapping, edge: tuple[Node, Node]) -> str:
    """'local' when both endpoints share a device, else 'over_the_air'."""
    src, dst = edge
    return "local" if mapping.device_of(src) == mapping.device_of(dst) else "over_the_air"


@dataclass
class DeviceTraffic:
    messages_ota: int = 0
    bytes_ota: int = 0
    messages_local: int = 0


@dataclass
class TrafficReport:
    """Send-side traffic totals for a schedule run.

    per_iteration holds the counts of a single outer iteration; per_device and
    totals are those counts multiplied by the iteration count.
    """

    iterations: int
    per_iteration: dict[str, DeviceTraffic]
    per_device: dict[str, DeviceTraffic]
    totals: DeviceTraffic


def account(
    graph: FactorGraph,
    schedule: Schedule,
    mapping: DeviceMapping,
    iterations: int,
) -> TrafficReport:
    """Tally per-device traffic for `iterations` passes of the schedule."""
    if iterations < 1:
        raise ValueError("iterations must be at least 1")
    devices = sorted(set(mapping.node_to_device.values()), key=_device_key)
    one_iter = {dev: DeviceTraffic() for dev in devices}
    for family in schedule.families:
        for src, dst in expand_family(graph, family):
            sender = mapping.device_of(src)
            if classify(mapping, (src, dst)) == "local":
                one_iter[sender].messages_local += 1
            else:
                var = dst if dst[0] in ("U", "V") else src
                dim = graph.message_dim(var)
                one_iter[sender].messages_ota += 1
                one_iter[sender].bytes_ota += dim * dim * BYTES_PER_ENTRY
    scaled = {
        dev: DeviceTraffic(
            messages_ota=t.messages_ota * iterations,
            bytes_ota=t.bytes_ota * iterations,
            messages_local=t.messages_local * iterations,
        )
        for dev, t in one_iter.items()
    }
    totals = DeviceTraffic(
        messages_ota=sum(t.messages_ota for t in scaled.values()),
        bytes_ota=sum(t.bytes_ota for t in scaled.values()),
        messages_local=sum(t.messages_local for t in scaled.values()),
    )
    return TrafficReport(
        iterations=iterations, per_iteration=one_iter, per_device=scaled, totals=totals
    )


def _device_key(device: str) -> tuple[int, int]:
    role, _, idx = device.rpartition("_")
    return (0 if role == "receiver" else 1, int(idx))
