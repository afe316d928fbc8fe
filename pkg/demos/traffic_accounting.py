"""Over-the-air traffic of a distributed deployment, schedule by schedule.

Receivers host their filter variable and leakage function, transmitters the
mirror pair; messages between devices are costed at dim^2 x 8 bytes. The
full schedule sends 24 over-the-air messages per iteration at K=3, the
baseline-equivalent schedule half of that.
"""

import numpy as np

from mpia import (
    account,
    build_graph,
    default_mapping,
    ilm_schedule,
    random_channel_set,
    regular_schedule,
)

ITERS = 100

channels = random_channel_set(3, 4, 4, 2, np.random.default_rng(0))
graph = build_graph(channels)
mapping = default_mapping(3)

for schedule in (regular_schedule(), ilm_schedule()):
    report = account(graph, schedule, mapping, ITERS)
    print(f"schedule {schedule.name!r}, {ITERS} iterations")
    print(f"{'device':>16} {'ota msgs':>9} {'ota bytes':>10} {'local msgs':>11}")
    for device, t in report.per_device.items():
        print(f"{device:>16} {t.messages_ota:>9} {t.bytes_ota:>10} {t.messages_local:>11}")
    tot = report.totals
    per_iter = sum(t.messages_ota for t in report.per_iteration.values())
    print(f"{'total':>16} {tot.messages_ota:>9} {tot.bytes_ota:>10} {tot.messages_local:>11}")
    print(f"  = {per_iter} over-the-air messages per iteration, "
          f"{tot.bytes_ota // tot.messages_ota} bytes each")
    print()

# a masked link removes its two cross-edges and their traffic
mask = np.ones((3, 3), dtype=bool)
mask[0, 2] = False
partial = random_channel_set(3, 4, 4, 2, np.random.default_rng(0), mask=mask)
report = account(build_graph(partial), regular_schedule(), mapping, 1)
print(f"with link (receiver 1 <- transmitter 3) masked: "
      f"{report.totals.messages_ota} over-the-air messages per iteration")
