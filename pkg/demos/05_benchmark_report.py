"""Run every planning method over a small benchmark suite, write a CSV.

Instances: the canonical trap, a wider trap variant, and two random patch
layouts. Methods: exact search, area greedy, fixed lam=1, alternating, and
a freshly trained agent per instance. The result lands in
demos/out/methods.csv with one row per (instance, method).
"""

import pathlib
import time

from viewplan import (
    SyntheticSpec,
    TrainConfig,
    exact_min_cover,
    generate_instance,
    method_row,
    plan_with_model,
    run_alternating,
    run_fixed_lambda,
    train,
    write_method_csv,
)

OUT = pathlib.Path(__file__).parent / "out"

SUITE = [
    ("trap-6x10", SyntheticSpec("grid_trap", 6, 10, 3, seed=0)),
    ("trap-6x12", SyntheticSpec("grid_trap", 6, 12, 4, seed=1)),
    ("patches-a", SyntheticSpec("random_patches", 5, 6, 8, patch_max=3, seed=5)),
    ("patches-b", SyntheticSpec("random_patches", 6, 6, 10, patch_max=4, seed=9)),
]


def timed(fn, *args, **kwargs):
    t0 = time.perf_counter()
    plan = fn(*args, **kwargs)
    return plan, time.perf_counter() - t0


def main():
    OUT.mkdir(exist_ok=True)
    rows = []
    for name, spec in SUITE:
        inst = generate_instance(spec)
        table = inst.table
        print(f"{name}: {table.n_views} views, certified minimum "
              f"{inst.oracle_count}, greedy {inst.greedy_count}")

        for plan, dt in (
            timed(exact_min_cover, table),
            timed(run_fixed_lambda, table, 0.0),
            timed(run_fixed_lambda, table, 1.0),
            timed(run_alternating, table),
        ):
            rows.append(method_row(name, plan, dt))

        t0 = time.perf_counter()
        model = train(table, TrainConfig(algorithm="sarsa", max_episodes=4000,
                                         seed=spec.seed))
        plan = plan_with_model(model, table, 1.0)
        rows.append(method_row(name, plan, time.perf_counter() - t0))

        counts = {r.method: r.view_count for r in rows if r.source == name}
        print(f"  {counts}\n")

    path = OUT / "methods.csv"
    write_method_csv(path, rows)
    print(f"wrote {len(rows)} rows to {path}")


if __name__ == "__main__":
    main()
