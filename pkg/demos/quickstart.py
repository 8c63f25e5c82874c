"""Solve a two-point instance with every solver and check the answers."""
from sdtp import SOLVERS, ScheduleKind, check_schedule, parse, solve

TEXT = """\
c time-point 1 may sit in [0,2] or [8,10]; point 2 in [9,12]
p sdtp 2 1 2
a 2 1 5
d 1 2 0 2 8 10
d 2 1 9 12
"""

inst = parse(TEXT)
for name in SOLVERS:
    out = solve(inst, name)
    print(f"{name:5s} {out.verdict:12s} {out.schedule[1:].tolist()}")

late = solve(inst, "bfdc", ScheduleKind.LATEST)
print("latest", late.schedule[1:].tolist())
print("violations of (8, 14):", [str(v) for v in check_schedule(inst, [0, 8, 14])])
