"""Plant negative cycles of each class into a feasible instance."""
from sdtp import SOLVERS, solve
from sdtp.generators import GenConfig, generate, negcycle_filter

base = generate(GenConfig("rand", 400, 2400, 10, seed=3)).instance
print("base:", solve(base, "bfdc").verdict)
for cls in ("nc02", "nc03", "nc04", "nc05"):
    inst = negcycle_filter(base, cls, seed=3)
    print(cls, {name: solve(inst, name).verdict for name in SOLVERS})
