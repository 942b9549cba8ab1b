"""Training loops that learn which lam to hand the per-step view selector.

All three agents walk episodes of the same shape: drop onto a uniformly random
first view, then repeatedly let the selector extend coverage until the relative
coverage criterion is met, paying a reward of -1 per transition (undiscounted).
Function approximation is the shared value network with eligibility traces.

They differ in what the network estimates and how the bootstrap target is
formed:

* watkins-q: action values q(s, lam); off-policy max bootstrap; epsilon-greedy
  exploration during a configured window, and the trace resets after every
  exploratory choice instead of decaying.
* sarsa: action values with an on-policy bootstrap (the value of the action
  actually taken next); greedy throughout; the trace always decays.
* td: state values v(s); each step evaluates every lam's successor state and
  moves to the best one; no explicit action input, no exploration.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .network import (NetworkConfig, TraceVector, ValueNetwork, apply_update,
                      encode_input, forward, gradient, init_network)
from .planner import CoverageState, Plan, is_terminal, next_best_view
from .visibility import CoverageTable

REWARD = -1.0

ALGORITHMS = ("sarsa", "watkins-q", "td")


@dataclass(frozen=True)
class TrainConfig:
    algorithm: str
    lambda_set: tuple[float, ...] = (0.0, 1.0)
    alpha: float = 0.01
    mu_e: float = 0.5
    max_episodes: int = 100_000
    rcc: float = 1.0
    epsilon: float = 0.1
    epsilon_episodes: int = 50_000
    gamma: float = 1.0
    seed: int = 0
    hidden: int = 200
    init_scale: float = 0.1

    def __post_init__(self):
        if self.algorithm not in ALGORITHMS:
            raise ValueError(f"algorithm must be one of {ALGORITHMS}, got {self.algorithm!r}")
        lams = tuple(float(l) for l in self.lambda_set)
        if not lams:
            raise ValueError("lambda_set must not be empty")
        if any(l < 0.0 for l in lams):
            raise ValueError(f"lambda values must be nonnegative, got {lams}")
        if len(set(lams)) != len(lams):
            raise ValueError(f"lambda values must be distinct, got {lams}")
        object.__setattr__(self, "lambda_set", lams)
        if self.alpha <= 0.0:
            raise ValueError(f"alpha must be positive, got {self.alpha}")
        if not (0.0 <= self.mu_e <= 1.0):
            raise ValueError(f"mu_e must be in [0, 1], got {self.mu_e}")
        if self.max_episodes < 1:
            raise ValueError(f"max_episodes must be >= 1, got {self.max_episodes}")
        if not (0.0 <= self.rcc <= 1.0):
            raise ValueError(f"rcc must be in [0, 1], got {self.rcc}")
        if not (0.0 <= self.epsilon <= 1.0):
            raise ValueError(f"epsilon must be in [0, 1], got {self.epsilon}")
        if self.epsilon_episodes < 0:
            raise ValueError(f"epsilon_episodes must be >= 0, got {self.epsilon_episodes}")
        if self.gamma != 1.0:
            raise ValueError("transitions are undiscounted; gamma must stay 1.0")


@dataclass(eq=False)
class TrainedModel:
    """Network plus everything needed to replay or audit the training run."""

    network: ValueNetwork
    config: TrainConfig
    episode_lengths: np.ndarray  # transitions per episode, int32
    mesh_digest: str
    table_digest: str
    n_views: int

    @property
    def episode_log(self) -> list[tuple[int, int]]:
        """(length, return) per episode; the return is -1 per transition."""
        return [(int(n), -int(n)) for n in self.episode_lengths]


def _derive_seeds(seed: int):
    init_child, episode_child = np.random.SeedSequence(seed).spawn(2)
    return int(init_child.generate_state(1)[0]), np.random.default_rng(episode_child)


def _argmax(values) -> int:
    best = 0
    for i in range(1, len(values)):
        if values[i] > values[best]:
            best = i
    return best


def _q_values(net: ValueNetwork, state_vec: np.ndarray, n_actions: int) -> list[float]:
    return [forward(net, encode_input(state_vec, a, n_actions)) for a in range(n_actions)]


def _advance(state: CoverageState, table: CoverageTable, lam: float) -> int:
    view = next_best_view(state, table, lam)
    if view is None:
        # cannot happen below the coverage target: some unchosen view still gains
        raise RuntimeError("selector stalled before the coverage target")
    return view


def _finish(network, config, table, lengths) -> TrainedModel:
    return TrainedModel(network, config, np.asarray(lengths, dtype=np.int32),
                        table.mesh_digest, table.digest, table.n_views)


def train(table: CoverageTable, config: TrainConfig, callback=None) -> TrainedModel:
    """Dispatch to the trainer named by config.algorithm."""
    trainer = {"sarsa": train_sarsa, "watkins-q": train_watkins_q, "td": train_td}
    return trainer[config.algorithm](table, config, callback)


def train_watkins_q(table: CoverageTable, config: TrainConfig, callback=None) -> TrainedModel:
    if config.algorithm != "watkins-q":
        raise ValueError(f"config.algorithm is {config.algorithm!r}, expected 'watkins-q'")
    n = table.n_views
    n_actions = len(config.lambda_set)
    net_seed, rng = _derive_seeds(config.seed)
    net = init_network(NetworkConfig(n + n_actions, config.hidden, config.init_scale, net_seed))
    trace = TraceVector.zeros(net.config)
    lengths = np.empty(config.max_episodes, dtype=np.int32)

    def select(vec, eps):
        # exploratory iff the draw does not exceed eps
        if eps > 0.0 and rng.random() <= eps:
            return int(rng.integers(n_actions)), True
        return _argmax(_q_values(net, vec, n_actions)), False

    for ep in range(config.max_episodes):
        eps = config.epsilon if ep < config.epsilon_episodes else 0.0
        start = int(rng.integers(n))
        state = CoverageState.initial(table).add(table, start)
        vec = np.zeros(n)
        vec[start] = 1.0
        trace.reset()
        transitions = 0
        reward_total = 0.0
        lam_idx, _ = select(vec, eps)
        while True:
            x = encode_input(vec, lam_idx, n_actions)
            trace.accumulate(gradient(net, x))
            delta = REWARD - forward(net, x)
            if is_terminal(state, table, config.rcc):
                apply_update(net, trace, delta, config.alpha)
                break
            view = _advance(state, table, config.lambda_set[lam_idx])
            state = state.add(table, view)
            vec[view] = 1.0
            transitions += 1
            reward_total += REWARD
            delta += max(_q_values(net, vec, n_actions))
            apply_update(net, trace, delta, config.alpha)
            lam_idx, explored = select(vec, eps)
            if explored:
                trace.reset()
            else:
                trace.scale(config.mu_e)
        assert reward_total == -transitions
        lengths[ep] = transitions
        if callback is not None:
            callback(ep, transitions)
    return _finish(net, config, table, lengths)


def train_sarsa(table: CoverageTable, config: TrainConfig, callback=None) -> TrainedModel:
    if config.algorithm != "sarsa":
        raise ValueError(f"config.algorithm is {config.algorithm!r}, expected 'sarsa'")
    n = table.n_views
    n_actions = len(config.lambda_set)
    net_seed, rng = _derive_seeds(config.seed)
    net = init_network(NetworkConfig(n + n_actions, config.hidden, config.init_scale, net_seed))
    trace = TraceVector.zeros(net.config)
    lengths = np.empty(config.max_episodes, dtype=np.int32)

    for ep in range(config.max_episodes):
        start = int(rng.integers(n))
        state = CoverageState.initial(table).add(table, start)
        vec = np.zeros(n)
        vec[start] = 1.0
        trace.reset()
        transitions = 0
        reward_total = 0.0
        lam_idx = _argmax(_q_values(net, vec, n_actions))
        while True:
            x = encode_input(vec, lam_idx, n_actions)
            trace.accumulate(gradient(net, x))
            delta = REWARD - forward(net, x)
            if is_terminal(state, table, config.rcc):
                apply_update(net, trace, delta, config.alpha)
                break
            view = _advance(state, table, config.lambda_set[lam_idx])
            state = state.add(table, view)
            vec[view] = 1.0
            transitions += 1
            reward_total += REWARD
            # on-policy bootstrap: value of the action taken next
            next_idx = _argmax(_q_values(net, vec, n_actions))
            delta += forward(net, encode_input(vec, next_idx, n_actions))
            apply_update(net, trace, delta, config.alpha)
            lam_idx = next_idx
            trace.scale(config.mu_e)
        assert reward_total == -transitions
        lengths[ep] = transitions
        if callback is not None:
            callback(ep, transitions)
    return _finish(net, config, table, lengths)


def train_td(table: CoverageTable, config: TrainConfig, callback=None) -> TrainedModel:
    if config.algorithm != "td":
        raise ValueError(f"config.algorithm is {config.algorithm!r}, expected 'td'")
    n = table.n_views
    net_seed, rng = _derive_seeds(config.seed)
    net = init_network(NetworkConfig(n, config.hidden, config.init_scale, net_seed))
    trace = TraceVector.zeros(net.config)
    lengths = np.empty(config.max_episodes, dtype=np.int32)

    for ep in range(config.max_episodes):
        start = int(rng.integers(n))
        state = CoverageState.initial(table).add(table, start)
        vec = np.zeros(n)
        vec[start] = 1.0
        trace.reset()
        transitions = 0
        reward_total = 0.0
        while True:
            trace.accumulate(gradient(net, vec))
            delta = REWARD - forward(net, vec)
            if is_terminal(state, table, config.rcc):
                apply_update(net, trace, delta, config.alpha)
                break
            # evaluate every lam's successor, move to the best-valued one
            best_view = None
            best_val = 0.0
            seen: dict[int, float] = {}
            for lam in config.lambda_set:
                view = _advance(state, table, lam)
                val = seen.get(view)
                if val is None:
                    vec[view] = 1.0
                    val = forward(net, vec)
                    vec[view] = 0.0
                    seen[view] = val
                if best_view is None or val > best_val:
                    best_view = view
                    best_val = val
            state = state.add(table, best_view)
            vec[best_view] = 1.0
            transitions += 1
            reward_total += REWARD
            delta += best_val
            apply_update(net, trace, delta, config.alpha)
            trace.scale(config.mu_e)
        assert reward_total == -transitions
        lengths[ep] = transitions
        if callback is not None:
            callback(ep, transitions)
    return _finish(net, config, table, lengths)


def plan_with_model(model: TrainedModel, table: CoverageTable, rcc: float) -> Plan:
    """Deterministic plan from a trained model.

    The first view is the single-view state the model values highest; each
    later step takes the model's preferred lam and hands it to the selector
    (state-value models compare the successor states instead).
    """
    if model.table_digest != table.digest:
        warnings.warn("model was trained on a different coverage table than the one given",
                      stacklevel=2)
    if model.n_views != table.n_views:
        raise ValueError(
            f"model expects {model.n_views} views, table has {table.n_views}")
    n = table.n_views
    lams = model.config.lambda_set
    n_actions = len(lams)
    td = model.config.algorithm == "td"
    net = model.network

    def state_value(vec):
        if td:
            return forward(net, vec)
        return max(_q_values(net, vec, n_actions))

    vec = np.zeros(n)
    best_start = 0
    best_val = 0.0
    for i in range(n):
        vec[i] = 1.0
        val = state_value(vec)
        vec[i] = 0.0
        if i == 0 or val > best_val:
            best_start = i
            best_val = val

    state = CoverageState.initial(table).add(table, best_start)
    vec[best_start] = 1.0
    order = [best_start]
    lambdas: list[float] = []
    while not is_terminal(state, table, rcc):
        if td:
            choice = None
            choice_val = 0.0
            for lam in lams:
                view = next_best_view(state, table, lam)
                if view is None:
                    continue
                vec[view] = 1.0
                val = forward(net, vec)
                vec[view] = 0.0
                if choice is None or val > choice_val:
                    choice = (lam, view)
                    choice_val = val
            if choice is None:
                view = None
            else:
                lam, view = choice
        else:
            lam = lams[_argmax(_q_values(net, vec, n_actions))]
            view = next_best_view(state, table, lam)
        if view is None:
            return Plan(tuple(order), tuple(lambdas),
                        state.covered.area / table.achievable.area,
                        model.config.algorithm, complete=False)
        order.append(view)
        lambdas.append(lam)
        state = state.add(table, view)
        vec[view] = 1.0
    fraction = 1.0 if table.achievable.area == 0.0 else state.covered.area / table.achievable.area
    return Plan(tuple(order), tuple(lambdas), fraction, model.config.algorithm)
