"""Train the three agents on the trap and watch the plans shrink.

Each agent learns a value function over coverage states; at planning time
the model picks the first view by value and a compactness penalty for every
step after that. On the trap the useful signal is simple: episodes that
start on the band take one transition more, so its start value sinks below
the blocks and the planner stops falling for it.

Writes one learning-curve CSV per algorithm next to this script.
"""

import pathlib
import time

import numpy as np

from viewplan import (
    SyntheticSpec,
    TrainConfig,
    curve_rows,
    generate_instance,
    plan_with_model,
    run_fixed_lambda,
    train,
    write_curve_csv,
)

OUT = pathlib.Path(__file__).parent / "out"


def main():
    inst = generate_instance(SyntheticSpec("grid_trap", 6, 10, 3, seed=0))
    table = inst.table
    greedy = run_fixed_lambda(table, 0.0)
    print(f"greedy baseline: {len(greedy.order)} views "
          f"(certified minimum is {inst.oracle_count})\n")

    OUT.mkdir(exist_ok=True)
    for algo in ("sarsa", "watkins-q", "td"):
        cfg = TrainConfig(algorithm=algo, max_episodes=10_000, seed=0)
        t0 = time.perf_counter()
        model = train(table, cfg)
        dt = time.perf_counter() - t0

        lengths = model.episode_lengths
        head = float(np.mean(lengths[:500]))
        tail = float(np.mean(lengths[-500:]))
        plan = plan_with_model(model, table, 1.0)

        path = OUT / f"curve-{algo}.csv"
        write_curve_csv(path, curve_rows("trap-6x10", model))
        print(f"{algo:<10} {cfg.max_episodes} episodes in {dt:4.1f}s | "
              f"mean length first 500: {head:.2f}, last 500: {tail:.2f} | "
              f"plan: {len(plan.order)} views {plan.order} -> {path.name}")

    print("\nepisode length counts transitions after the random first view,")
    print("so the floor is 4/3: two of the three starts already sit on a")
    print("block. what matters is the planner column: all three models")
    print("choose a block first and finish in two views.")


if __name__ == "__main__":
    main()
